//! Exhaustive truth-table checks for small formulas.
//!
//! Only usable for a handful of variables; callers are expected to stay at or
//! below 20 variables (the acceptance corpus stays at 12).

/// Largest variable index mentioned in `clauses`, 0 for the empty list.
pub fn max_var(clauses: &[Vec<i32>]) -> u32 {
    clauses
        .iter()
        .flat_map(|c| c.iter())
        .map(|l| l.unsigned_abs())
        .max()
        .unwrap_or(0)
}

/// True iff no assignment over all mentioned variables satisfies every clause.
pub fn is_unsatisfiable(clauses: &[Vec<i32>]) -> bool {
    let n = max_var(clauses);
    assert!(n <= 20, "truth-table oracle limited to 20 variables, got {n}");
    for bits in 0u64..(1u64 << n) {
        if clauses.iter().all(|c| clause_satisfied(c, bits)) {
            return false;
        }
    }
    true
}

/// True iff `antecedents AND not(clause)` is unsatisfiable, i.e. the clause is
/// a logical consequence of its antecedents.
///
/// This is the semantic ceiling for any RUP acceptance: a sound checker may
/// only pass a step when this predicate holds.
pub fn step_entailed(antecedents: &[Vec<i32>], clause: &[i32]) -> bool {
    let mut system: Vec<Vec<i32>> = antecedents.to_vec();
    // not(l1 | ... | lk) == (!l1) & ... & (!lk)
    for &lit in clause {
        system.push(vec![-lit]);
    }
    is_unsatisfiable(&system)
}

fn clause_satisfied(clause: &[i32], bits: u64) -> bool {
    clause.iter().any(|&lit| {
        let var = lit.unsigned_abs() as u64;
        let value = (bits >> (var - 1)) & 1 == 1;
        if lit > 0 {
            value
        } else {
            !value
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_formula_is_unsat() {
        // x1, x2, (!x1 | !x2)
        assert!(is_unsatisfiable(&[vec![1], vec![2], vec![-1, -2]]));
    }

    #[test]
    fn single_positive_unit_is_sat() {
        assert!(!is_unsatisfiable(&[vec![1]]));
    }

    #[test]
    fn entailment_matches_hand_computation() {
        // {!x1|!x2, x1} |= !x2
        assert!(step_entailed(&[vec![-1, -2], vec![1]], &[-2]));
        // {x1} |= x1|x2 (subsumption)
        assert!(step_entailed(&[vec![1]], &[1, 2]));
        // {x1|x2} does not entail x1
        assert!(!step_entailed(&[vec![1, 2]], &[1]));
    }
}
