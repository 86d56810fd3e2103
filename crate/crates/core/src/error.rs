//! Crate-wide error type.

use thiserror::Error;

use crate::digest::Digest;

#[derive(Debug, Error)]
pub enum Error {
    // --- statements and nodes ---
    #[error("invalid clause: {reason} at literal {literal}")]
    InvalidClause { reason: &'static str, literal: i32 },
    #[error("invalid rule tag {tag:?}: {reason}")]
    InvalidRuleTag { tag: String, reason: &'static str },
    #[error("malformed digest {text:?}")]
    MalformedDigest { text: String },

    // --- DAG construction ---
    #[error("step {step} references step {reference}, which is not an earlier step")]
    ForwardReference { step: usize, reference: usize },
    #[error("axiom step {step} lists antecedents")]
    AxiomWithAntecedents { step: usize },
    #[error("derived step {step} lists no antecedents")]
    DerivedWithoutAntecedents { step: usize },
    #[error("steps {orphans:?} are unreachable from any root; pass prune=true to drop them")]
    OrphanSteps { orphans: Vec<usize> },
    #[error("a refutation must end in exactly one empty-clause root; found roots {roots:?}")]
    BadRefutationRoot { roots: Vec<String> },
    #[error("proof has no steps")]
    EmptyProof,
    #[error("antecedent digest {digest} does not resolve")]
    UnresolvedAntecedent { digest: Digest },

    // --- parsing ---
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: reference to unknown id {id}")]
    UnknownId { line: usize, id: u64 },
    #[error("line {line}: reference to deleted id {id}")]
    DeletedId { line: usize, id: u64 },
    #[error("incomplete refutation: no empty clause was derived")]
    IncompleteRefutation,
    #[error("not RUP at step {step}: unit propagation reached a fixpoint without conflict")]
    NotRup { step: u64 },
    #[error("line {line}: deletion of a clause that is not in the active set")]
    DeleteUnknownClause { line: usize },

    // --- object store ---
    #[error("object {digest} not found in the store")]
    NotFound { digest: Digest },
    #[error("object {digest} is corrupt: stored payload hashes to {actual}")]
    Corrupt { digest: Digest, actual: Digest },
    #[error("object {digest} is corrupt: header unreadable")]
    CorruptHeader { digest: Digest },
    #[error("payload is not canonical for kind {kind}: {reason}")]
    NotCanonical { kind: &'static str, reason: String },
    #[error("stored object {digest} has kind {found}, expected {expected}")]
    WrongKind {
        digest: Digest,
        expected: &'static str,
        found: String,
    },
    #[error("fragment capacity {capacity} is below the {required}-byte serialization of node {node}")]
    CapacityTooSmall {
        capacity: usize,
        required: usize,
        node: Digest,
    },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    // --- projection ---
    #[error("cannot hide axiom {digest}: axioms are always visible")]
    HiddenAxiom { digest: Digest },

    // --- verifier registry ---
    #[error("verifier {id:?} is already registered")]
    DuplicateVerifier { id: String },
    #[error("unknown verifier {id:?}")]
    UnknownVerifier { id: String },
    #[error("tolerance {value:?} is outside [0, 1]")]
    DeltaOutOfRange { value: String },
    #[error("the verifier registry is empty")]
    EmptyRegistry,

    // --- reconstruction ---
    #[error("invalid variable permutation: {reason}")]
    BadPermutation { reason: String },
    #[error("toolchain rule {rule} failed: {reason}")]
    RewriteFailed { rule: &'static str, reason: String },
}
