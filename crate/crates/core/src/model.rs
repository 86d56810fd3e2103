//! Proof artifacts as content-addressed DAGs.
//!
//! A [`ProofDag`] is a map from node digest to [`ProofNode`] plus a root set
//! and a topological order. Node digests are Merkle hashes: they cover the
//! node's own content and, through the antecedent digests, the entire
//! derivation cone below it.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::digest::{hash_payload, Digest, Domain};
use crate::error::Error;

/// The mathematical content carried by a proof node.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Statement {
    /// A disjunction of literals, canonically sorted. The empty clause
    /// denotes contradiction.
    Clause(Vec<i32>),
    /// Opaque statement text for non-clausal proof corpora.
    Generic(String),
}

fn lit_key(lit: i32) -> (u32, bool) {
    (lit.unsigned_abs(), lit < 0)
}

impl Statement {
    /// Strict clause constructor: literals must already be sorted by
    /// absolute value then sign, without duplicates or complementary pairs.
    pub fn clause(literals: Vec<i32>) -> Result<Self, Error> {
        for &lit in &literals {
            if lit == 0 {
                return Err(Error::InvalidClause {
                    reason: "zero literal",
                    literal: 0,
                });
            }
        }
        for pair in literals.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if a == b {
                return Err(Error::InvalidClause {
                    reason: "duplicate literal",
                    literal: b,
                });
            }
            if a == -b {
                return Err(Error::InvalidClause {
                    reason: "complementary pair (tautology)",
                    literal: b,
                });
            }
            if lit_key(a) > lit_key(b) {
                return Err(Error::InvalidClause {
                    reason: "literals not sorted by absolute value",
                    literal: b,
                });
            }
        }
        Ok(Statement::Clause(literals))
    }

    /// Canonicalizing clause constructor: sorts and deduplicates literals,
    /// rejecting zero literals and complementary pairs. Literal order in the
    /// input is irrelevant, so hashes built from the result are
    /// order-insensitive.
    pub fn clause_canonical(literals: impl IntoIterator<Item = i32>) -> Result<Self, Error> {
        let mut lits: Vec<i32> = literals.into_iter().collect();
        if let Some(&zero) = lits.iter().find(|&&l| l == 0) {
            return Err(Error::InvalidClause {
                reason: "zero literal",
                literal: zero,
            });
        }
        lits.sort_by_key(|&l| lit_key(l));
        lits.dedup();
        for pair in lits.windows(2) {
            if pair[0] == -pair[1] {
                return Err(Error::InvalidClause {
                    reason: "complementary pair (tautology)",
                    literal: pair[1],
                });
            }
        }
        Statement::clause(lits)
    }

    pub fn empty_clause() -> Self {
        Statement::Clause(Vec::new())
    }

    pub fn generic(text: impl Into<String>) -> Self {
        Statement::Generic(text.into())
    }

    pub fn is_clause(&self) -> bool {
        matches!(self, Statement::Clause(_))
    }

    pub fn is_empty_clause(&self) -> bool {
        matches!(self, Statement::Clause(lits) if lits.is_empty())
    }

    pub fn literals(&self) -> Option<&[i32]> {
        match self {
            Statement::Clause(lits) => Some(lits),
            Statement::Generic(_) => None,
        }
    }

    /// Canonical single-token text: `clause:<l1>,<l2>,...` or
    /// `generic:<hex of utf-8 text>`. Contains no whitespace.
    pub fn canonical_text(&self) -> String {
        match self {
            Statement::Clause(lits) => {
                let body: Vec<String> = lits.iter().map(|l| l.to_string()).collect();
                format!("clause:{}", body.join(","))
            }
            Statement::Generic(text) => format!("generic:{}", hex::encode(text.as_bytes())),
        }
    }

    pub fn parse_canonical(token: &str) -> Result<Self, Error> {
        if let Some(body) = token.strip_prefix("clause:") {
            if body.is_empty() {
                return Ok(Statement::empty_clause());
            }
            let mut lits = Vec::new();
            for part in body.split(',') {
                let lit: i32 = part.parse().map_err(|_| Error::InvalidClause {
                    reason: "unparseable literal",
                    literal: 0,
                })?;
                lits.push(lit);
            }
            Statement::clause(lits)
        } else if let Some(body) = token.strip_prefix("generic:") {
            let bytes = hex::decode(body).map_err(|_| Error::Parse {
                line: 0,
                message: "generic statement is not valid hex".to_string(),
            })?;
            let text = String::from_utf8(bytes).map_err(|_| Error::Parse {
                line: 0,
                message: "generic statement is not valid utf-8".to_string(),
            })?;
            Ok(Statement::Generic(text))
        } else {
            Err(Error::Parse {
                line: 0,
                message: format!("unknown statement encoding {token:?}"),
            })
        }
    }

    /// Content address of the statement alone, independent of how it is
    /// derived. Divergence measurement is defined over these.
    pub fn digest(&self) -> Digest {
        hash_payload(Domain::Statement, self.canonical_text().as_bytes())
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_text())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Axiom,
    Derived,
}

impl NodeKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            NodeKind::Axiom => "axiom",
            NodeKind::Derived => "derived",
        }
    }

    pub fn parse(word: &str) -> Result<Self, Error> {
        match word {
            "axiom" => Ok(NodeKind::Axiom),
            "derived" => Ok(NodeKind::Derived),
            other => Err(Error::Parse {
                line: 0,
                message: format!("unknown node kind {other:?}"),
            }),
        }
    }
}

/// One inference step, content-addressed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofNode {
    pub node_id: Digest,
    pub kind: NodeKind,
    pub statement: Statement,
    pub antecedents: Vec<Digest>,
    pub rule_tag: String,
}

pub fn validate_rule_tag(tag: &str) -> Result<(), Error> {
    if tag.is_empty() {
        return Err(Error::InvalidRuleTag {
            tag: tag.to_string(),
            reason: "empty",
        });
    }
    if !tag.bytes().all(|b| b.is_ascii_graphic()) {
        return Err(Error::InvalidRuleTag {
            tag: tag.to_string(),
            reason: "must be printable ascii without spaces",
        });
    }
    Ok(())
}

/// Canonical node serialization: the Merkle hash preimage and the tail of a
/// manifest `node` line. `<kind> <rule_tag> <statement> <antecedent hex...>`.
pub fn node_canonical_text(
    kind: NodeKind,
    statement: &Statement,
    rule_tag: &str,
    antecedents: &[Digest],
) -> String {
    let mut line = format!("{} {} {}", kind.as_str(), rule_tag, statement.canonical_text());
    for ant in antecedents {
        line.push(' ');
        line.push_str(&ant.to_hex());
    }
    line.push('\n');
    line
}

/// Merkle hash of one node. Deterministic in its inputs; antecedent digests
/// are hashed in stored order.
pub fn hash_node(
    kind: NodeKind,
    statement: &Statement,
    rule_tag: &str,
    antecedents: &[Digest],
) -> Result<Digest, Error> {
    validate_rule_tag(rule_tag)?;
    let text = node_canonical_text(kind, statement, rule_tag, antecedents);
    Ok(hash_payload(Domain::Node, text.as_bytes()))
}

/// One step of a proof under construction; antecedents index earlier steps.
#[derive(Debug, Clone)]
pub struct StepSpec {
    pub kind: NodeKind,
    pub statement: Statement,
    pub rule_tag: String,
    pub antecedents: Vec<usize>,
}

impl StepSpec {
    pub fn axiom(statement: Statement, rule_tag: &str) -> Self {
        StepSpec {
            kind: NodeKind::Axiom,
            statement,
            rule_tag: rule_tag.to_string(),
            antecedents: Vec::new(),
        }
    }

    pub fn derived(statement: Statement, rule_tag: &str, antecedents: Vec<usize>) -> Self {
        StepSpec {
            kind: NodeKind::Derived,
            statement,
            rule_tag: rule_tag.to_string(),
            antecedents,
        }
    }
}

/// How the root set of a DAG is determined and validated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DagMode {
    /// Clause proof ending in a unique empty-clause root.
    Refutation,
    /// Arbitrary statements; every sink is a root.
    Generic,
}

/// A complete proof artifact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofDag {
    nodes: BTreeMap<Digest, ProofNode>,
    roots: Vec<Digest>,
    topo_order: Vec<Digest>,
    mode: DagMode,
}

impl ProofDag {
    pub fn nodes(&self) -> &BTreeMap<Digest, ProofNode> {
        &self.nodes
    }

    pub fn node(&self, digest: &Digest) -> Option<&ProofNode> {
        self.nodes.get(digest)
    }

    pub fn roots(&self) -> &[Digest] {
        &self.roots
    }

    pub fn topo_order(&self) -> &[Digest] {
        &self.topo_order
    }

    pub fn mode(&self) -> DagMode {
        self.mode
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn derived_count(&self) -> usize {
        self.nodes
            .values()
            .filter(|n| n.kind == NodeKind::Derived)
            .count()
    }

    pub fn is_clause_proof(&self) -> bool {
        self.mode == DagMode::Refutation
    }

    /// Shortest directed distance from any root, following antecedent edges.
    /// Roots have depth 0; every node is reachable by construction.
    pub fn depths(&self) -> BTreeMap<Digest, usize> {
        let mut depths: BTreeMap<Digest, usize> = BTreeMap::new();
        let mut queue: VecDeque<Digest> = VecDeque::new();
        for root in &self.roots {
            depths.insert(*root, 0);
            queue.push_back(*root);
        }
        while let Some(digest) = queue.pop_front() {
            let here = depths[&digest];
            for ant in &self.nodes[&digest].antecedents {
                if !depths.contains_key(ant) {
                    depths.insert(*ant, here + 1);
                    queue.push_back(*ant);
                }
            }
        }
        debug_assert_eq!(depths.len(), self.nodes.len());
        depths
    }

    pub fn max_depth(&self) -> usize {
        self.depths().values().copied().max().unwrap_or(0)
    }

    /// Statement digests of the derived steps; the carrier set for the
    /// semantic-divergence metric.
    pub fn derived_statement_digests(&self) -> BTreeSet<Digest> {
        self.nodes
            .values()
            .filter(|n| n.kind == NodeKind::Derived)
            .map(|n| n.statement.digest())
            .collect()
    }

    /// Consumer map: digest -> digests of nodes citing it as antecedent.
    pub fn dependents(&self) -> BTreeMap<Digest, Vec<Digest>> {
        let mut map: BTreeMap<Digest, Vec<Digest>> = BTreeMap::new();
        for digest in &self.topo_order {
            for ant in &self.nodes[digest].antecedents {
                map.entry(*ant).or_default().push(*digest);
            }
        }
        map
    }

    /// Deterministic content-derived order: ready nodes (all antecedents
    /// emitted) are emitted smallest digest first. Canonical serialization
    /// uses this order so equal node sets serialize to equal bytes.
    pub fn canonical_order(&self) -> Vec<Digest> {
        let mut remaining_ants: BTreeMap<Digest, usize> = BTreeMap::new();
        let mut dependents: BTreeMap<Digest, Vec<Digest>> = BTreeMap::new();
        for (digest, node) in &self.nodes {
            remaining_ants.insert(*digest, node.antecedents.len());
            for ant in &node.antecedents {
                dependents.entry(*ant).or_default().push(*digest);
            }
        }
        let mut ready: BTreeSet<Digest> = remaining_ants
            .iter()
            .filter(|(_, &count)| count == 0)
            .map(|(d, _)| *d)
            .collect();
        let mut order = Vec::with_capacity(self.nodes.len());
        while let Some(&next) = ready.iter().next() {
            ready.remove(&next);
            order.push(next);
            if let Some(deps) = dependents.get(&next) {
                for dep in deps {
                    let count = remaining_ants.get_mut(dep).expect("dependent tracked");
                    *count -= 1;
                    if *count == 0 {
                        ready.insert(*dep);
                    }
                }
            }
        }
        debug_assert_eq!(order.len(), self.nodes.len());
        order
    }
}

/// Structural statistics of an artifact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DagStats {
    pub node_count: usize,
    pub derived_count: usize,
    pub max_depth: usize,
    pub serialized_bytes: usize,
}

/// Build a DAG from ordered steps.
///
/// Steps with identical content collapse onto one content-addressed node.
/// In refutation mode the unique root must carry the empty clause; any step
/// not feeding it is an orphan and is rejected unless `prune` is set.
pub fn build_dag(steps: &[StepSpec], mode: DagMode, prune: bool) -> Result<ProofDag, Error> {
    if steps.is_empty() {
        return Err(Error::EmptyProof);
    }
    let mut digests: Vec<Digest> = Vec::with_capacity(steps.len());
    let mut nodes: BTreeMap<Digest, ProofNode> = BTreeMap::new();
    let mut insertion: Vec<Digest> = Vec::new();
    for (index, step) in steps.iter().enumerate() {
        match step.kind {
            NodeKind::Axiom if !step.antecedents.is_empty() => {
                return Err(Error::AxiomWithAntecedents { step: index });
            }
            NodeKind::Derived if step.antecedents.is_empty() => {
                return Err(Error::DerivedWithoutAntecedents { step: index });
            }
            _ => {}
        }
        if mode == DagMode::Refutation && !step.statement.is_clause() {
            return Err(Error::Parse {
                line: index + 1,
                message: "refutation steps must carry clause statements".to_string(),
            });
        }
        let mut ants: Vec<Digest> = Vec::with_capacity(step.antecedents.len());
        for &a in &step.antecedents {
            if a >= index {
                return Err(Error::ForwardReference {
                    step: index,
                    reference: a,
                });
            }
            ants.push(digests[a]);
        }
        let digest = hash_node(step.kind, &step.statement, &step.rule_tag, &ants)?;
        digests.push(digest);
        if !nodes.contains_key(&digest) {
            insertion.push(digest);
            nodes.insert(
                digest,
                ProofNode {
                    node_id: digest,
                    kind: step.kind,
                    statement: step.statement.clone(),
                    antecedents: ants,
                    rule_tag: step.rule_tag.clone(),
                },
            );
        }
    }

    // Sinks: nodes no other node cites.
    let cited: BTreeSet<Digest> = nodes
        .values()
        .flat_map(|n| n.antecedents.iter().copied())
        .collect();
    let sinks: Vec<Digest> = insertion
        .iter()
        .filter(|d| !cited.contains(*d))
        .copied()
        .collect();

    let roots: Vec<Digest> = match mode {
        DagMode::Generic => sinks,
        DagMode::Refutation => {
            let empty_sinks: Vec<Digest> = sinks
                .iter()
                .filter(|d| nodes[*d].statement.is_empty_clause())
                .copied()
                .collect();
            if empty_sinks.len() != 1 {
                return Err(Error::BadRefutationRoot {
                    roots: sinks.iter().map(|d| nodes[d].statement.to_string()).collect(),
                });
            }
            empty_sinks
        }
    };

    // Reachability from the chosen roots.
    let mut reachable: BTreeSet<Digest> = BTreeSet::new();
    let mut stack: Vec<Digest> = roots.clone();
    while let Some(d) = stack.pop() {
        if reachable.insert(d) {
            stack.extend(nodes[&d].antecedents.iter().copied());
        }
    }
    if reachable.len() != nodes.len() {
        if !prune {
            let orphans: Vec<usize> = digests
                .iter()
                .enumerate()
                .filter(|(_, d)| !reachable.contains(d))
                .map(|(i, _)| i)
                .collect();
            return Err(Error::OrphanSteps { orphans });
        }
        nodes.retain(|d, _| reachable.contains(d));
        insertion.retain(|d| reachable.contains(d));
    }

    Ok(ProofDag {
        topo_order: insertion,
        nodes,
        roots,
        mode,
    })
}

/// Reassemble a DAG from already-resolved nodes in antecedent-first order.
/// Used by manifest parsing; performs the same root/reachability validation
/// as [`build_dag`].
pub fn assemble_dag(
    ordered: Vec<ProofNode>,
    mode: DagMode,
) -> Result<ProofDag, Error> {
    let mut nodes: BTreeMap<Digest, ProofNode> = BTreeMap::new();
    let mut insertion: Vec<Digest> = Vec::new();
    for node in ordered {
        for ant in &node.antecedents {
            if !nodes.contains_key(ant) {
                return Err(Error::UnresolvedAntecedent { digest: *ant });
            }
        }
        let recomputed = hash_node(node.kind, &node.statement, &node.rule_tag, &node.antecedents)?;
        if recomputed != node.node_id {
            return Err(Error::Corrupt {
                digest: node.node_id,
                actual: recomputed,
            });
        }
        if !nodes.contains_key(&node.node_id) {
            insertion.push(node.node_id);
            nodes.insert(node.node_id, node);
        }
    }
    if nodes.is_empty() {
        return Err(Error::EmptyProof);
    }
    let cited: BTreeSet<Digest> = nodes
        .values()
        .flat_map(|n| n.antecedents.iter().copied())
        .collect();
    let sinks: Vec<Digest> = insertion
        .iter()
        .filter(|d| !cited.contains(*d))
        .copied()
        .collect();
    let roots = match mode {
        DagMode::Generic => sinks,
        DagMode::Refutation => {
            let empty_sinks: Vec<Digest> = sinks
                .iter()
                .filter(|d| nodes[*d].statement.is_empty_clause())
                .copied()
                .collect();
            if empty_sinks.len() != 1 || sinks.len() != 1 {
                return Err(Error::BadRefutationRoot {
                    roots: sinks.iter().map(|d| nodes[d].statement.to_string()).collect(),
                });
            }
            empty_sinks
        }
    };
    Ok(ProofDag {
        topo_order: insertion,
        nodes,
        roots,
        mode,
    })
}

/// Node count, derived count, max depth, and canonical artifact size.
pub fn dag_stats(dag: &ProofDag) -> DagStats {
    DagStats {
        node_count: dag.node_count(),
        derived_count: dag.derived_count(),
        max_depth: dag.max_depth(),
        serialized_bytes: crate::store::dag_object_bytes(dag).len(),
    }
}
