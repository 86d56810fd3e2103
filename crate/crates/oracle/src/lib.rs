//! Independent reference oracles and instance generators for the proofslice
//! test suites.
//!
//! Everything in this crate is deliberately self-contained: clauses are plain
//! `Vec<i32>` literal lists and proofs are plain text, so the oracles share no
//! code with the implementation they are used to judge.

pub mod datagen;
pub mod dimacs;
pub mod dpll;
pub mod pathlen;
pub mod php;
pub mod truthtab;

/// A CNF instance as raw data: 1-based variable count plus literal lists.
#[derive(Debug, Clone)]
pub struct Instance {
    pub var_count: u32,
    pub clauses: Vec<Vec<i32>>,
}
