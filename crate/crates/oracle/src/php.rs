//! Pigeonhole instances: `pigeons` objects into `holes` slots, at most one
//! per slot. Unsatisfiable whenever `pigeons > holes`.

use crate::Instance;

/// Variable for "pigeon `i` sits in hole `j`", both 1-based.
pub fn var(pigeon: u32, hole: u32, holes: u32) -> i32 {
    ((pigeon - 1) * holes + hole) as i32
}

pub fn pigeonhole(pigeons: u32, holes: u32) -> Instance {
    let mut clauses = Vec::new();
    for i in 1..=pigeons {
        clauses.push((1..=holes).map(|j| var(i, j, holes)).collect());
    }
    for j in 1..=holes {
        for a in 1..=pigeons {
            for b in (a + 1)..=pigeons {
                clauses.push(vec![-var(a, j, holes), -var(b, j, holes)]);
            }
        }
    }
    Instance {
        var_count: pigeons * holes,
        clauses,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::truthtab;

    #[test]
    fn php_4_3_shape_and_unsatisfiability() {
        let inst = pigeonhole(4, 3);
        assert_eq!(inst.var_count, 12);
        assert_eq!(inst.clauses.len(), 4 + 3 * 6);
        assert!(truthtab::is_unsatisfiable(&inst.clauses));
    }

    #[test]
    fn php_3_3_is_satisfiable() {
        let inst = pigeonhole(3, 3);
        assert!(!truthtab::is_unsatisfiable(&inst.clauses));
    }
}
