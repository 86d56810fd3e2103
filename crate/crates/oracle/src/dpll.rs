//! A plain DPLL solver that emits refutation certificates.
//!
//! The solver does no clause learning internally; it only records the search
//! tree. Each node of the tree contributes one certificate clause, the
//! negation of the decisions on the path to it:
//!
//! * at a leaf, unit propagation ran into a conflict, so the clause is RUP
//!   over the clauses on the conflict path (the hint cone);
//! * at an inner node, the clauses emitted for its two children differ only
//!   in the last decision literal, so they resolve to the node's clause and
//!   the pair is a valid RUP hint list;
//! * the root emits the empty clause.
//!
//! Certificates are emitted both as DRAT (additions only, no hints) and as
//! LRAT (with hints), line for line in the same order.

use std::fmt::Write as _;

/// Certificates produced for one unsatisfiable instance.
#[derive(Debug, Clone)]
pub struct Refutation {
    pub drat: String,
    pub lrat: String,
    /// Number of addition lines (equals the derived-step count after ingest).
    pub steps: usize,
}

#[derive(Debug, Clone)]
pub enum Outcome {
    Satisfiable(Vec<i32>),
    Refuted(Refutation),
}

struct Solver {
    clauses: Vec<Vec<i32>>,
    /// watches[lit_index] -> clause indices watching that literal.
    watches: Vec<Vec<usize>>,
    /// 0 unassigned, 1 true, -1 false; indexed by variable.
    values: Vec<i8>,
    /// (literal, reason clause) in assignment order; None marks a decision.
    trail: Vec<(i32, Option<usize>)>,
    /// Trail position of each variable's assignment.
    positions: Vec<usize>,
    queue_head: usize,
    var_count: usize,
}

fn lit_index(lit: i32) -> usize {
    let var = lit.unsigned_abs() as usize;
    2 * var + usize::from(lit < 0)
}

fn lit_value(values: &[i8], lit: i32) -> i8 {
    let v = values[lit.unsigned_abs() as usize];
    if lit > 0 {
        v
    } else {
        -v
    }
}

impl Solver {
    fn new(var_count: usize, clauses: Vec<Vec<i32>>) -> Self {
        let mut solver = Solver {
            watches: vec![Vec::new(); 2 * (var_count + 1)],
            values: vec![0; var_count + 1],
            trail: Vec::new(),
            positions: vec![usize::MAX; var_count + 1],
            queue_head: 0,
            var_count,
            clauses,
        };
        for idx in 0..solver.clauses.len() {
            // Watched literals always occupy the first two slots; unit
            // clauses watch their only literal once.
            let c = &solver.clauses[idx];
            solver.watches[lit_index(c[0])].push(idx);
            if c.len() >= 2 {
                solver.watches[lit_index(c[1])].push(idx);
            }
        }
        solver
    }

    fn value_of(&self, lit: i32) -> i8 {
        lit_value(&self.values, lit)
    }

    fn assign(&mut self, lit: i32, reason: Option<usize>) {
        let var = lit.unsigned_abs() as usize;
        self.values[var] = if lit > 0 { 1 } else { -1 };
        self.positions[var] = self.trail.len();
        self.trail.push((lit, reason));
    }

    /// Propagate to fixpoint. Returns the index of a conflicting clause.
    fn propagate(&mut self) -> Option<usize> {
        while self.queue_head < self.trail.len() {
            let lit = self.trail[self.queue_head].0;
            self.queue_head += 1;
            let falsified = -lit;
            let mut watch_list = std::mem::take(&mut self.watches[lit_index(falsified)]);
            let mut keep = 0;
            let mut conflict = None;
            'clauses: for wi in 0..watch_list.len() {
                let ci = watch_list[wi];
                if conflict.is_some() {
                    watch_list[keep] = ci;
                    keep += 1;
                    continue;
                }
                let clause = &mut self.clauses[ci];
                // Keep the two watched literals in the first two slots.
                if clause.len() >= 2 && clause[0] == falsified {
                    clause.swap(0, 1);
                }
                let first = clause[0];
                if lit_value(&self.values, first) == 1 {
                    watch_list[keep] = ci;
                    keep += 1;
                    continue;
                }
                let mut moved = None;
                for k in 2..clause.len() {
                    let cand = clause[k];
                    if lit_value(&self.values, cand) != -1 {
                        clause.swap(1, k);
                        moved = Some(cand);
                        break;
                    }
                }
                if let Some(cand) = moved {
                    self.watches[lit_index(cand)].push(ci);
                    continue 'clauses;
                }
                // No replacement watch: unit or conflict.
                watch_list[keep] = ci;
                keep += 1;
                match self.value_of(first) {
                    0 => self.assign(first, Some(ci)),
                    -1 => conflict = Some(ci),
                    _ => unreachable!(),
                }
            }
            watch_list.truncate(keep);
            self.watches[lit_index(falsified)] = watch_list;
            if conflict.is_some() {
                return conflict;
            }
        }
        None
    }

    fn backtrack_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (lit, _) = self.trail.pop().unwrap();
            let var = lit.unsigned_abs() as usize;
            self.values[var] = 0;
            self.positions[var] = usize::MAX;
        }
        self.queue_head = self.queue_head.min(mark);
    }

    /// Clause indices on the conflict path: every reason reachable from the
    /// falsified literals of `conflict`, plus `conflict` itself (last).
    /// Ordered by trail position of the literal each reason propagated.
    fn conflict_cone(&self, conflict: usize) -> Vec<usize> {
        let mut seen_var = vec![false; self.var_count + 1];
        let mut reasons: Vec<(usize, usize)> = Vec::new(); // (trail pos, clause)
        let mut stack: Vec<i32> = self.clauses[conflict].clone();
        while let Some(lit) = stack.pop() {
            let var = lit.unsigned_abs() as usize;
            if seen_var[var] {
                continue;
            }
            seen_var[var] = true;
            let pos = self.positions[var];
            if pos == usize::MAX {
                continue;
            }
            if let (assigned, Some(reason)) = self.trail[pos] {
                reasons.push((pos, reason));
                for &other in &self.clauses[reason] {
                    if other != assigned {
                        stack.push(other);
                    }
                }
            }
        }
        reasons.sort_unstable();
        let mut cone: Vec<usize> = reasons.into_iter().map(|(_, c)| c).collect();
        cone.push(conflict);
        cone
    }

    fn first_unassigned(&self) -> Option<i32> {
        (1..=self.var_count).find(|&v| self.values[v] == 0).map(|v| v as i32)
    }
}

struct Emitter {
    drat: String,
    lrat: String,
    next_id: usize,
    steps: usize,
}

impl Emitter {
    fn emit(&mut self, clause: &[i32], hints: &[usize]) -> usize {
        let id = self.next_id;
        self.next_id += 1;
        self.steps += 1;
        for &lit in clause {
            let _ = write!(self.drat, "{lit} ");
        }
        self.drat.push_str("0\n");
        let _ = write!(self.lrat, "{id}");
        for &lit in clause {
            let _ = write!(self.lrat, " {lit}");
        }
        self.lrat.push_str(" 0");
        for &h in hints {
            let _ = write!(self.lrat, " {h}");
        }
        self.lrat.push_str(" 0\n");
        id
    }
}

/// Solve by DPLL over the first-unassigned-variable heuristic (true branch
/// first). Deterministic for a fixed instance.
pub fn solve(var_count: u32, clauses: &[Vec<i32>]) -> Outcome {
    assert!(
        clauses.iter().all(|c| !c.is_empty()),
        "input clauses must be nonempty"
    );
    let mut solver = Solver::new(var_count as usize, clauses.to_vec());
    let mut emitter = Emitter {
        drat: String::new(),
        lrat: String::new(),
        next_id: clauses.len() + 1,
        steps: 0,
    };
    // Seed root-level units.
    for (idx, clause) in clauses.iter().enumerate() {
        if clause.len() == 1 {
            match solver.value_of(clause[0]) {
                1 => {}
                0 => solver.assign(clause[0], Some(idx)),
                _ => {
                    // Complementary unit pair: conflict at level zero.
                    let cone = solver.conflict_cone(idx);
                    let hints: Vec<usize> = cone.iter().map(|&c| c + 1).collect();
                    emitter.emit(&[], &hints);
                    return Outcome::Refuted(Refutation {
                        drat: emitter.drat,
                        lrat: emitter.lrat,
                        steps: emitter.steps,
                    });
                }
            }
        }
    }
    match search(&mut solver, &mut emitter, &mut Vec::new()) {
        SearchResult::Sat => {
            let model = (1..=var_count as i32)
                .map(|v| if solver.values[v as usize] >= 0 { v } else { -v })
                .collect();
            Outcome::Satisfiable(model)
        }
        SearchResult::Unsat(_) => Outcome::Refuted(Refutation {
            drat: emitter.drat,
            lrat: emitter.lrat,
            steps: emitter.steps,
        }),
    }
}

enum SearchResult {
    Sat,
    /// Certificate id of the clause refuting this subtree.
    Unsat(usize),
}

fn search(solver: &mut Solver, emitter: &mut Emitter, decisions: &mut Vec<i32>) -> SearchResult {
    let mark = solver.trail.len();
    let queue_mark = solver.queue_head;
    if let Some(conflict) = solver.propagate() {
        let cone = solver.conflict_cone(conflict);
        let hints: Vec<usize> = cone.iter().map(|&c| c + 1).collect();
        let negated: Vec<i32> = decisions.iter().map(|&d| -d).collect();
        let id = emitter.emit(&negated, &hints);
        solver.backtrack_to(mark);
        solver.queue_head = queue_mark;
        return SearchResult::Unsat(id);
    }
    let Some(var) = solver.first_unassigned() else {
        return SearchResult::Sat;
    };
    let mut child_ids = Vec::with_capacity(2);
    for lit in [var, -var] {
        let sub_mark = solver.trail.len();
        let sub_queue = solver.queue_head;
        solver.assign(lit, None);
        decisions.push(lit);
        let result = search(solver, emitter, decisions);
        decisions.pop();
        solver.backtrack_to(sub_mark);
        solver.queue_head = sub_queue;
        match result {
            SearchResult::Sat => {
                return SearchResult::Sat;
            }
            SearchResult::Unsat(id) => child_ids.push(id),
        }
    }
    let negated: Vec<i32> = decisions.iter().map(|&d| -d).collect();
    let id = emitter.emit(&negated, &child_ids);
    solver.backtrack_to(mark);
    solver.queue_head = queue_mark;
    SearchResult::Unsat(id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::truthtab;

    #[test]
    fn tiny_is_refuted_with_explicit_empty_clause() {
        let clauses = vec![vec![1], vec![2], vec![-1, -2]];
        match solve(2, &clauses) {
            Outcome::Refuted(r) => {
                assert!(r.drat.lines().last().unwrap().trim() == "0");
                assert!(r.steps >= 1);
            }
            Outcome::Satisfiable(_) => panic!("tiny must be unsat"),
        }
    }

    #[test]
    fn satisfiable_instance_returns_model() {
        let clauses = vec![vec![1, 2], vec![-1, 2]];
        match solve(2, &clauses) {
            Outcome::Satisfiable(model) => {
                for clause in &clauses {
                    assert!(clause.iter().any(|l| model.contains(l)));
                }
            }
            Outcome::Refuted(_) => panic!("instance is satisfiable"),
        }
    }

    #[test]
    fn refuted_instances_agree_with_truth_table() {
        let instances: Vec<Vec<Vec<i32>>> = vec![
            vec![vec![1], vec![2], vec![-1, -2]],
            vec![vec![1, 2], vec![1, -2], vec![-1, 2], vec![-1, -2]],
            vec![vec![-1], vec![1]],
        ];
        for clauses in instances {
            let unsat = truthtab::is_unsatisfiable(&clauses);
            let refuted = matches!(
                solve(truthtab::max_var(&clauses), &clauses),
                Outcome::Refuted(_)
            );
            assert_eq!(unsat, refuted);
        }
    }
}
