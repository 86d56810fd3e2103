//! Seeded random instance and proof-shape generators for property suites.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use crate::Instance;

/// Random k-CNF with distinct variables per clause.
pub fn random_cnf(seed: u64, var_count: u32, clause_count: u32, width: usize) -> Instance {
    assert!(var_count as usize >= width);
    let mut rng = StdRng::seed_from_u64(seed);
    let mut clauses = Vec::with_capacity(clause_count as usize);
    let mut vars: Vec<i32> = (1..=var_count as i32).collect();
    for _ in 0..clause_count {
        vars.shuffle(&mut rng);
        let clause: Vec<i32> = vars[..width]
            .iter()
            .map(|&v| if rng.random_bool(0.5) { v } else { -v })
            .collect();
        clauses.push(clause);
    }
    Instance { var_count, clauses }
}

/// One step of a language-neutral proof description.
///
/// `antecedents` are indices of earlier steps; a step with no antecedents is
/// an axiom. `text` statements are kept distinct by construction so that
/// statement-set comparisons behave like node-set comparisons.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepData {
    pub text: String,
    pub rule_tag: String,
    pub antecedents: Vec<usize>,
}

/// Random connected proof shape: every non-final step acquires at least one
/// consumer, so the last step is the single sink only when `single_root`.
pub fn random_proof_shape(seed: u64, node_count: usize) -> Vec<StepData> {
    assert!(node_count >= 1);
    let mut rng = StdRng::seed_from_u64(seed);
    let mut steps: Vec<StepData> = Vec::with_capacity(node_count);
    let axiom_count = 1 + (node_count / 3).min(6).max(usize::from(node_count > 1));
    let axiom_count = axiom_count.min(node_count);
    for i in 0..node_count {
        if i < axiom_count {
            steps.push(StepData {
                text: format!("fact-{seed}-{i}"),
                rule_tag: "assume".to_string(),
                antecedents: Vec::new(),
            });
        } else {
            let arity = rng.random_range(1..=3usize.min(i));
            let mut ants: Vec<usize> = Vec::new();
            while ants.len() < arity {
                let a = rng.random_range(0..i);
                if !ants.contains(&a) {
                    ants.push(a);
                }
            }
            steps.push(StepData {
                text: format!("lemma-{seed}-{i}"),
                rule_tag: "derive".to_string(),
                antecedents: ants,
            });
        }
    }
    // Give every dangling non-axiom step a consumer so the shape stays a
    // single connected derivation ending in the last step.
    let mut used = vec![false; node_count];
    for step in &steps {
        for &a in &step.antecedents {
            used[a] = true;
        }
    }
    for i in axiom_count..node_count.saturating_sub(1) {
        if !used[i] {
            let consumer = rng.random_range(i + 1..node_count);
            if !steps[consumer].antecedents.contains(&i) {
                steps[consumer].antecedents.push(i);
            }
            used[i] = true;
        }
    }
    // Unused axioms hang off the final step.
    for i in 0..axiom_count.min(node_count.saturating_sub(1)) {
        if !used[i] && node_count > 1 {
            let last = node_count - 1;
            if !steps[last].antecedents.contains(&i) {
                steps[last].antecedents.push(i);
            }
        }
    }
    steps
}

/// Rewrites a fraction of the derived statement texts, leaving the shape
/// intact. Used to manufacture pairs with controlled statement overlap.
pub fn perturb_statements(steps: &[StepData], seed: u64, fraction: f64) -> Vec<StepData> {
    let mut rng = StdRng::seed_from_u64(seed);
    steps
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let mut s = s.clone();
            if !s.antecedents.is_empty() && rng.random_bool(fraction) {
                s.text = format!("alt-{seed}-{i}");
            }
            s
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes_reference_only_earlier_steps() {
        for seed in 0..20 {
            let steps = random_proof_shape(seed, 1 + (seed as usize * 7) % 40);
            for (i, s) in steps.iter().enumerate() {
                assert!(s.antecedents.iter().all(|&a| a < i));
            }
        }
    }

    #[test]
    fn generator_is_deterministic() {
        assert_eq!(random_proof_shape(7, 25), random_proof_shape(7, 25));
        let a = random_cnf(3, 10, 30, 3);
        let b = random_cnf(3, 10, 30, 3);
        assert_eq!(a.clauses, b.clauses);
    }
}
