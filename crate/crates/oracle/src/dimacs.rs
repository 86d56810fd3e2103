//! DIMACS CNF text writer.

use std::fmt::Write as _;

use crate::Instance;

pub fn to_dimacs(instance: &Instance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p cnf {} {}", instance.var_count, instance.clauses.len());
    for clause in &instance.clauses {
        for lit in clause {
            let _ = write!(out, "{lit} ");
        }
        out.push_str("0\n");
    }
    out
}
