//! Content-addressed persistence, fragment streaming, and tamper audit.
//!
//! The store is a two-level hex-prefix directory of immutable object files.
//! Every object file is `proofslice-object v1 <kind>`, a blank line, then the
//! canonical payload; its address is the domain-separated hash of the
//! payload. The store is append-only.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use crate::digest::{hash_payload, Digest, Domain};
use crate::error::Error;
use crate::model::{
    assemble_dag, node_canonical_text, DagMode, NodeKind, ProofDag, ProofNode, Statement,
};
use crate::projection::{parse_projection_manifest, projection_manifest_payload, Projection};

pub const OBJECT_HEADER_PREFIX: &str = "proofslice-object v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjectKind {
    Node,
    DagManifest,
    ProjectionManifest,
    Fragment,
}

impl ObjectKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ObjectKind::Node => "node",
            ObjectKind::DagManifest => "dag-manifest",
            ObjectKind::ProjectionManifest => "projection-manifest",
            ObjectKind::Fragment => "fragment",
        }
    }

    pub fn parse(word: &str) -> Option<Self> {
        match word {
            "node" => Some(ObjectKind::Node),
            "dag-manifest" => Some(ObjectKind::DagManifest),
            "projection-manifest" => Some(ObjectKind::ProjectionManifest),
            "fragment" => Some(ObjectKind::Fragment),
            _ => None,
        }
    }

    pub fn domain(&self) -> Domain {
        match self {
            ObjectKind::Node => Domain::Node,
            ObjectKind::DagManifest => Domain::DagManifest,
            ObjectKind::ProjectionManifest => Domain::ProjectionManifest,
            ObjectKind::Fragment => Domain::Fragment,
        }
    }
}

/// A retrieved object, digest verified against its payload.
#[derive(Debug, Clone)]
pub struct StoredObject {
    pub digest: Digest,
    pub kind: ObjectKind,
    pub payload: Vec<u8>,
}

// ---------------------------------------------------------------------------
// canonical serializations
// ---------------------------------------------------------------------------

fn node_manifest_line(node: &ProofNode) -> String {
    format!(
        "node {} {}",
        node.node_id.to_hex(),
        node_canonical_text(node.kind, &node.statement, &node.rule_tag, &node.antecedents)
    )
}

/// Canonical DAG manifest payload: one `node` line per node, in the
/// content-derived canonical order.
pub fn dag_manifest_payload(dag: &ProofDag) -> String {
    let mut out = String::new();
    for digest in dag.canonical_order() {
        out.push_str(&node_manifest_line(&dag.nodes()[&digest]));
    }
    out
}

/// Full canonical object file bytes for a DAG manifest.
pub fn dag_object_bytes(dag: &ProofDag) -> Vec<u8> {
    object_file_bytes(ObjectKind::DagManifest, dag_manifest_payload(dag).as_bytes())
}

/// Content address of a DAG's canonical manifest.
pub fn dag_manifest_digest(dag: &ProofDag) -> Digest {
    hash_payload(Domain::DagManifest, dag_manifest_payload(dag).as_bytes())
}

pub fn object_file_bytes(kind: ObjectKind, payload: &[u8]) -> Vec<u8> {
    let mut bytes = format!("{OBJECT_HEADER_PREFIX} {}\n\n", kind.as_str()).into_bytes();
    bytes.extend_from_slice(payload);
    bytes
}

/// Parse one `node <digest> <kind> <rule_tag> <statement> <ants...>` line.
pub fn parse_node_line(line: &str, line_no: usize) -> Result<ProofNode, Error> {
    let mut fields = line.split(' ');
    let parse_err = |message: String| Error::Parse {
        line: line_no,
        message,
    };
    if fields.next() != Some("node") {
        return Err(parse_err("expected `node` line".to_string()));
    }
    let digest_hex = fields
        .next()
        .ok_or_else(|| parse_err("missing node digest".to_string()))?;
    let node_id = Digest::from_hex(digest_hex)?;
    let (kind, statement, rule_tag, antecedents) = parse_node_fields(fields, line_no)?;
    Ok(ProofNode {
        node_id,
        kind,
        statement,
        antecedents,
        rule_tag,
    })
}

fn parse_node_fields<'a>(
    mut fields: impl Iterator<Item = &'a str>,
    line_no: usize,
) -> Result<(NodeKind, Statement, String, Vec<Digest>), Error> {
    let parse_err = |message: String| Error::Parse {
        line: line_no,
        message,
    };
    let kind = NodeKind::parse(
        fields
            .next()
            .ok_or_else(|| parse_err("missing node kind".to_string()))?,
    )?;
    let rule_tag = fields
        .next()
        .ok_or_else(|| parse_err("missing rule tag".to_string()))?
        .to_string();
    let statement_token = fields
        .next()
        .ok_or_else(|| parse_err("missing statement".to_string()))?;
    let statement = Statement::parse_canonical(statement_token)?;
    let mut antecedents = Vec::new();
    for field in fields {
        antecedents.push(Digest::from_hex(field)?);
    }
    Ok((kind, statement, rule_tag, antecedents))
}

/// Parse a node object payload (a manifest line without the digest prefix).
pub fn parse_node_payload(payload: &str) -> Result<(NodeKind, Statement, String, Vec<Digest>), Error> {
    let line = payload.strip_suffix('\n').ok_or_else(|| Error::Parse {
        line: 1,
        message: "node payload must end with a newline".to_string(),
    })?;
    if line.contains('\n') {
        return Err(Error::Parse {
            line: 2,
            message: "node payload must be a single line".to_string(),
        });
    }
    parse_node_fields(line.split(' '), 1)
}

/// Parse a DAG manifest payload. The mode is inferred: a pure clause DAG
/// whose unique sink is the empty clause is a refutation, anything else is
/// generic.
pub fn parse_dag_manifest(payload: &str) -> Result<ProofDag, Error> {
    let mut ordered: Vec<ProofNode> = Vec::new();
    for (i, line) in payload.lines().enumerate() {
        ordered.push(parse_node_line(line, i + 1)?);
    }
    if ordered.is_empty() {
        return Err(Error::EmptyProof);
    }
    let mode = infer_mode(&ordered);
    assemble_dag(ordered, mode)
}

fn infer_mode(nodes: &[ProofNode]) -> DagMode {
    if !nodes.iter().all(|n| n.statement.is_clause()) {
        return DagMode::Generic;
    }
    let cited: BTreeSet<Digest> = nodes
        .iter()
        .flat_map(|n| n.antecedents.iter().copied())
        .collect();
    let sinks: Vec<&ProofNode> = nodes.iter().filter(|n| !cited.contains(&n.node_id)).collect();
    if sinks.len() == 1 && sinks[0].statement.is_empty_clause() {
        DagMode::Refutation
    } else {
        DagMode::Generic
    }
}

// ---------------------------------------------------------------------------
// fragments
// ---------------------------------------------------------------------------

/// One slice of a streamed artifact. Fragments chain linearly and their node
/// lines concatenate to the exact manifest payload.
#[derive(Debug, Clone)]
pub struct Fragment {
    pub index: usize,
    pub node_digests: Vec<Digest>,
    /// Byte count of the node lines carried by this fragment.
    pub payload_bytes: usize,
    pub prev_fragment_digest: Option<Digest>,
    pub fragment_digest: Digest,
    /// The carried node lines, exactly as they appear in the manifest.
    pub body: String,
}

impl Fragment {
    pub fn canonical_payload(&self) -> String {
        let prev = match &self.prev_fragment_digest {
            Some(d) => d.to_hex(),
            None => "none".to_string(),
        };
        format!("fragment {} {}\n{}", self.index, prev, self.body)
    }
}

/// Greedy topo-order packing of a DAG's manifest into fragments of at most
/// `capacity` bytes of node lines each.
pub fn stream_fragments(dag: &ProofDag, capacity: usize) -> Result<Vec<Fragment>, Error> {
    let order = dag.canonical_order();
    let lines: Vec<(Digest, String)> = order
        .iter()
        .map(|d| (*d, node_manifest_line(&dag.nodes()[d])))
        .collect();
    for (digest, line) in &lines {
        if line.len() > capacity {
            return Err(Error::CapacityTooSmall {
                capacity,
                required: line.len(),
                node: *digest,
            });
        }
    }
    let mut fragments: Vec<Fragment> = Vec::new();
    let mut body = String::new();
    let mut digests: Vec<Digest> = Vec::new();
    let mut flush = |body: &mut String, digests: &mut Vec<Digest>, fragments: &mut Vec<Fragment>| {
        if body.is_empty() {
            return;
        }
        let index = fragments.len();
        let prev = fragments.last().map(|f: &Fragment| f.fragment_digest);
        let mut fragment = Fragment {
            index,
            node_digests: std::mem::take(digests),
            payload_bytes: body.len(),
            prev_fragment_digest: prev,
            fragment_digest: hash_payload(Domain::Fragment, &[]),
            body: std::mem::take(body),
        };
        fragment.fragment_digest =
            hash_payload(Domain::Fragment, fragment.canonical_payload().as_bytes());
        fragments.push(fragment);
    };
    for (digest, line) in lines {
        if body.len() + line.len() > capacity {
            flush(&mut body, &mut digests, &mut fragments);
        }
        body.push_str(&line);
        digests.push(digest);
    }
    flush(&mut body, &mut digests, &mut fragments);
    Ok(fragments)
}

/// Verify a fragment chain and reassemble the manifest payload.
pub fn reassemble_fragments(fragments: &[Fragment]) -> Result<String, Error> {
    let mut payload = String::new();
    let mut prev: Option<Digest> = None;
    for (i, fragment) in fragments.iter().enumerate() {
        if fragment.index != i {
            return Err(Error::NotCanonical {
                kind: "fragment",
                reason: format!("fragment {} out of order at position {i}", fragment.index),
            });
        }
        if fragment.prev_fragment_digest != prev {
            return Err(Error::NotCanonical {
                kind: "fragment",
                reason: format!("fragment {i} does not chain to its predecessor"),
            });
        }
        let recomputed = hash_payload(Domain::Fragment, fragment.canonical_payload().as_bytes());
        if recomputed != fragment.fragment_digest {
            return Err(Error::Corrupt {
                digest: fragment.fragment_digest,
                actual: recomputed,
            });
        }
        payload.push_str(&fragment.body);
        prev = Some(fragment.fragment_digest);
    }
    Ok(payload)
}

pub fn parse_fragment_payload(payload: &str) -> Result<Fragment, Error> {
    let (header, body) = payload.split_once('\n').ok_or_else(|| Error::Parse {
        line: 1,
        message: "fragment payload missing header line".to_string(),
    })?;
    let fields: Vec<&str> = header.split(' ').collect();
    if fields.len() != 3 || fields[0] != "fragment" {
        return Err(Error::Parse {
            line: 1,
            message: "malformed fragment header".to_string(),
        });
    }
    let index: usize = fields[1].parse().map_err(|_| Error::Parse {
        line: 1,
        message: "malformed fragment index".to_string(),
    })?;
    let prev = match fields[2] {
        "none" => None,
        hex => Some(Digest::from_hex(hex)?),
    };
    let mut node_digests = Vec::new();
    for (i, line) in body.lines().enumerate() {
        let node = parse_node_line(line, i + 2)?;
        node_digests.push(node.node_id);
    }
    let mut fragment = Fragment {
        index,
        node_digests,
        payload_bytes: body.len(),
        prev_fragment_digest: prev,
        fragment_digest: hash_payload(Domain::Fragment, &[]),
        body: body.to_string(),
    };
    fragment.fragment_digest =
        hash_payload(Domain::Fragment, fragment.canonical_payload().as_bytes());
    Ok(fragment)
}

// ---------------------------------------------------------------------------
// the store
// ---------------------------------------------------------------------------

pub struct ObjectStore {
    root: PathBuf,
}

impl ObjectStore {
    pub fn open(root: impl Into<PathBuf>) -> Result<Self, Error> {
        let root = root.into();
        fs::create_dir_all(root.join("objects"))?;
        Ok(ObjectStore { root })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn object_path(&self, digest: &Digest) -> PathBuf {
        let hex = digest.to_hex();
        self.root.join("objects").join(&hex[..2]).join(&hex[2..])
    }

    /// Store a canonical payload. Idempotent: identical payloads share one
    /// stored copy.
    pub fn put(&self, kind: ObjectKind, payload: &[u8]) -> Result<Digest, Error> {
        validate_canonical(kind, payload)?;
        let digest = hash_payload(kind.domain(), payload);
        let path = self.object_path(&digest);
        if path.exists() {
            return Ok(digest);
        }
        fs::create_dir_all(path.parent().expect("object path has parent"))?;
        let tmp = path.with_extension("tmp");
        let mut file = fs::File::create(&tmp)?;
        file.write_all(&object_file_bytes(kind, payload))?;
        file.sync_all()?;
        fs::rename(&tmp, &path)?;
        Ok(digest)
    }

    pub fn contains(&self, digest: &Digest) -> bool {
        self.object_path(digest).exists()
    }

    /// Retrieve and digest-check an object. A present-but-mismatched object
    /// reports corruption, distinct from not-found.
    pub fn get(&self, digest: &Digest) -> Result<StoredObject, Error> {
        let path = self.object_path(digest);
        let bytes = match fs::read(&path) {
            Ok(bytes) => bytes,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                return Err(Error::NotFound { digest: *digest })
            }
            Err(e) => return Err(e.into()),
        };
        let (kind, payload) = split_object_file(&bytes, digest)?;
        let actual = hash_payload(kind.domain(), payload);
        if actual != *digest {
            return Err(Error::Corrupt {
                digest: *digest,
                actual,
            });
        }
        Ok(StoredObject {
            digest: *digest,
            kind,
            payload: payload.to_vec(),
        })
    }

    pub fn object_count(&self) -> usize {
        let mut count = 0;
        let objects = self.root.join("objects");
        if let Ok(prefixes) = fs::read_dir(&objects) {
            for prefix in prefixes.flatten() {
                if let Ok(entries) = fs::read_dir(prefix.path()) {
                    count += entries
                        .flatten()
                        .filter(|e| e.path().extension().is_none())
                        .count();
                }
            }
        }
        count
    }

    /// Store every node of a DAG plus its manifest; returns the manifest
    /// digest.
    pub fn put_dag(&self, dag: &ProofDag) -> Result<Digest, Error> {
        for node in dag.nodes().values() {
            let payload =
                node_canonical_text(node.kind, &node.statement, &node.rule_tag, &node.antecedents);
            let digest = self.put(ObjectKind::Node, payload.as_bytes())?;
            debug_assert_eq!(digest, node.node_id);
        }
        self.put(ObjectKind::DagManifest, dag_manifest_payload(dag).as_bytes())
    }

    pub fn get_dag(&self, digest: &Digest) -> Result<ProofDag, Error> {
        let object = self.get(digest)?;
        if object.kind != ObjectKind::DagManifest {
            return Err(Error::WrongKind {
                digest: *digest,
                expected: "dag-manifest",
                found: object.kind.as_str().to_string(),
            });
        }
        parse_dag_manifest(std::str::from_utf8(&object.payload).map_err(|_| {
            Error::NotCanonical {
                kind: "dag-manifest",
                reason: "payload is not utf-8".to_string(),
            }
        })?)
    }

    pub fn put_projection(&self, projection: &Projection) -> Result<Digest, Error> {
        self.put(
            ObjectKind::ProjectionManifest,
            projection_manifest_payload(projection).as_bytes(),
        )
    }

    pub fn get_projection(&self, digest: &Digest) -> Result<Projection, Error> {
        let object = self.get(digest)?;
        if object.kind != ObjectKind::ProjectionManifest {
            return Err(Error::WrongKind {
                digest: *digest,
                expected: "projection-manifest",
                found: object.kind.as_str().to_string(),
            });
        }
        parse_projection_manifest(std::str::from_utf8(&object.payload).map_err(|_| {
            Error::NotCanonical {
                kind: "projection-manifest",
                reason: "payload is not utf-8".to_string(),
            }
        })?)
    }

    /// Record the fragment chain produced for a manifest so audits can find
    /// it. One fragment digest per line.
    pub fn write_chain(&self, manifest: &Digest, fragments: &[Fragment]) -> Result<(), Error> {
        let dir = self.root.join("chains");
        fs::create_dir_all(&dir)?;
        let mut text = String::new();
        for fragment in fragments {
            self.put(
                ObjectKind::Fragment,
                fragment.canonical_payload().as_bytes(),
            )?;
            text.push_str(&fragment.fragment_digest.to_hex());
            text.push('\n');
        }
        fs::write(dir.join(manifest.to_hex()), text)?;
        Ok(())
    }

    pub fn read_chain(&self, manifest: &Digest) -> Result<Option<Vec<Digest>>, Error> {
        let path = self.root.join("chains").join(manifest.to_hex());
        if !path.exists() {
            return Ok(None);
        }
        let text = fs::read_to_string(path)?;
        let mut digests = Vec::new();
        for line in text.lines() {
            digests.push(Digest::from_hex(line.trim())?);
        }
        Ok(Some(digests))
    }

    /// Append a regeneration head link: `head <new> from <old> snapshot <t>`.
    pub fn record_head(&self, original: &Digest, new: &Digest, snapshot: &str) -> Result<(), Error> {
        let dir = self.root.join("heads");
        fs::create_dir_all(&dir)?;
        let mut file = fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(dir.join(original.to_hex()))?;
        writeln!(file, "head {} from {} snapshot {}", new.to_hex(), original.to_hex(), snapshot)?;
        Ok(())
    }

    /// Persist a decision report under a stable name.
    pub fn write_decision(&self, name: &str, report: &str) -> Result<(), Error> {
        let dir = self.root.join("decisions");
        fs::create_dir_all(&dir)?;
        fs::write(dir.join(name), report)?;
        Ok(())
    }

    /// Recompute every digest reachable from a manifest and report all
    /// mismatches, each with its consumer path from the artifact root.
    pub fn audit_chain(&self, manifest: &Digest) -> Result<AuditReport, Error> {
        let mut report = AuditReport::default();
        let object = match self.get(manifest) {
            Ok(object) => object,
            Err(Error::Corrupt { digest, actual }) => {
                report.violations.push(Violation {
                    path: vec!["manifest".to_string()],
                    digest,
                    detail: format!("stored bytes hash to {actual}"),
                });
                return Ok(report);
            }
            Err(Error::CorruptHeader { digest }) => {
                report.violations.push(Violation {
                    path: vec!["manifest".to_string()],
                    digest,
                    detail: "object header unreadable".to_string(),
                });
                return Ok(report);
            }
            Err(e) => return Err(e),
        };
        let payload = match std::str::from_utf8(&object.payload) {
            Ok(text) => text.to_string(),
            Err(_) => {
                report.violations.push(Violation {
                    path: vec!["manifest".to_string()],
                    digest: *manifest,
                    detail: "payload is not utf-8".to_string(),
                });
                return Ok(report);
            }
        };
        match object.kind {
            ObjectKind::DagManifest => self.audit_dag_manifest(manifest, &payload, &mut report)?,
            ObjectKind::ProjectionManifest => {
                self.audit_projection_manifest(manifest, &payload, &mut report)?
            }
            other => {
                return Err(Error::WrongKind {
                    digest: *manifest,
                    expected: "dag-manifest or projection-manifest",
                    found: other.as_str().to_string(),
                })
            }
        }
        Ok(report)
    }

    fn audit_dag_manifest(
        &self,
        manifest: &Digest,
        payload: &str,
        report: &mut AuditReport,
    ) -> Result<(), Error> {
        let nodes: Vec<ProofNode> = match parse_manifest_nodes(payload) {
            Ok(nodes) => nodes,
            Err(e) => {
                report.violations.push(Violation {
                    path: vec!["manifest".to_string()],
                    digest: *manifest,
                    detail: format!("unparseable manifest: {e}"),
                });
                return Ok(());
            }
        };
        audit_node_lines(&nodes, report);
        // Stored node objects, where present, must match their address.
        for node in &nodes {
            match self.get(&node.node_id) {
                Ok(_) | Err(Error::NotFound { .. }) => {}
                Err(Error::Corrupt { digest, actual }) => report.violations.push(Violation {
                    path: vec![format!("object {}", digest.to_hex())],
                    digest,
                    detail: format!("stored node object hashes to {actual}"),
                }),
                Err(Error::CorruptHeader { digest }) => report.violations.push(Violation {
                    path: vec![format!("object {}", digest.to_hex())],
                    digest,
                    detail: "stored node object header unreadable".to_string(),
                }),
                Err(e) => return Err(e),
            }
        }
        // Fragment chain, when one was recorded.
        if let Some(chain) = self.read_chain(manifest)? {
            let mut fragments = Vec::new();
            let mut broken = false;
            for digest in &chain {
                match self.get(digest) {
                    Ok(object) if object.kind == ObjectKind::Fragment => {
                        match parse_fragment_payload(std::str::from_utf8(&object.payload).unwrap_or(""))
                        {
                            Ok(f) => fragments.push(f),
                            Err(e) => {
                                broken = true;
                                report.violations.push(Violation {
                                    path: vec![format!("fragment {}", digest.to_hex())],
                                    digest: *digest,
                                    detail: format!("unparseable fragment: {e}"),
                                });
                            }
                        }
                    }
                    Ok(object) => {
                        broken = true;
                        report.violations.push(Violation {
                            path: vec![format!("fragment {}", digest.to_hex())],
                            digest: *digest,
                            detail: format!("expected fragment, found {}", object.kind.as_str()),
                        });
                    }
                    Err(Error::Corrupt { digest, actual }) => {
                        broken = true;
                        report.violations.push(Violation {
                            path: vec![format!("fragment {}", digest.to_hex())],
                            digest,
                            detail: format!("stored fragment hashes to {actual}"),
                        });
                    }
                    Err(Error::CorruptHeader { digest }) => {
                        broken = true;
                        report.violations.push(Violation {
                            path: vec![format!("fragment {}", digest.to_hex())],
                            digest,
                            detail: "stored fragment header unreadable".to_string(),
                        });
                    }
                    Err(Error::NotFound { digest }) => {
                        broken = true;
                        report.violations.push(Violation {
                            path: vec![format!("fragment {}", digest.to_hex())],
                            digest,
                            detail: "fragment missing from store".to_string(),
                        });
                    }
                    Err(e) => return Err(e),
                }
            }
            if !broken {
                match reassemble_fragments(&fragments) {
                    Ok(reassembled) if reassembled == payload => {}
                    Ok(_) => report.violations.push(Violation {
                        path: vec!["fragment-chain".to_string()],
                        digest: *manifest,
                        detail: "reassembled fragments do not reproduce the manifest".to_string(),
                    }),
                    Err(e) => report.violations.push(Violation {
                        path: vec!["fragment-chain".to_string()],
                        digest: *manifest,
                        detail: format!("chain verification failed: {e}"),
                    }),
                }
            }
        }
        Ok(())
    }

    fn audit_projection_manifest(
        &self,
        manifest: &Digest,
        payload: &str,
        report: &mut AuditReport,
    ) -> Result<(), Error> {
        let projection = match parse_projection_manifest(payload) {
            Ok(p) => p,
            Err(e) => {
                report.violations.push(Violation {
                    path: vec!["manifest".to_string()],
                    digest: *manifest,
                    detail: format!("unparseable projection manifest: {e}"),
                });
                return Ok(());
            }
        };
        audit_node_lines(&projection.visible_nodes_in_order(), report);
        // Commitments are recomputable only when the source artifact is
        // still in the store; otherwise they stay trusted opaque hashes.
        let source = match self.get_dag(&projection.source_manifest) {
            Ok(dag) => Some(dag),
            Err(Error::NotFound { .. }) => None,
            Err(Error::Corrupt { digest, actual }) => {
                report.violations.push(Violation {
                    path: vec!["source-manifest".to_string()],
                    digest,
                    detail: format!("stored source manifest hashes to {actual}"),
                });
                None
            }
            Err(_) => None,
        };
        if let Some(dag) = source {
            let visible: BTreeSet<Digest> = projection.visible_digests().collect();
            for commitment in &projection.commitments {
                match crate::projection::recompute_commitment(&dag, &visible, &commitment.subtree_root_digest)
                {
                    Ok(expected) => {
                        if expected.commitment_digest != commitment.commitment_digest {
                            report.violations.push(Violation {
                                path: vec![format!(
                                    "commitment {}",
                                    commitment.subtree_root_digest.to_hex()
                                )],
                                digest: commitment.commitment_digest,
                                detail: format!(
                                    "recomputed cone hash is {}",
                                    expected.commitment_digest
                                ),
                            });
                        } else if expected.conclusion != commitment.conclusion
                            || expected.hidden_derived_count != commitment.hidden_derived_count
                        {
                            report.violations.push(Violation {
                                path: vec![format!(
                                    "commitment {}",
                                    commitment.subtree_root_digest.to_hex()
                                )],
                                digest: commitment.commitment_digest,
                                detail: "commitment metadata does not match the source cone"
                                    .to_string(),
                            });
                        }
                    }
                    Err(e) => report.violations.push(Violation {
                        path: vec![format!(
                            "commitment {}",
                            commitment.subtree_root_digest.to_hex()
                        )],
                        digest: commitment.commitment_digest,
                        detail: format!("cannot recompute commitment: {e}"),
                    }),
                }
            }
        }
        Ok(())
    }
}

/// Recompute node digests bottom-up from statements, flagging every node
/// whose recomputed digest differs from the manifest's claim. A mutated node
/// therefore implicates itself and every consumer on the path to the root.
fn audit_node_lines(nodes: &[ProofNode], report: &mut AuditReport) {
    let mut recomputed: BTreeMap<Digest, Digest> = BTreeMap::new();
    let mut consumers: BTreeMap<Digest, Vec<Digest>> = BTreeMap::new();
    let mut mismatched: Vec<Digest> = Vec::new();
    for node in nodes {
        let ants: Vec<Digest> = node
            .antecedents
            .iter()
            .map(|a| recomputed.get(a).copied().unwrap_or(*a))
            .collect();
        for a in &node.antecedents {
            consumers.entry(*a).or_default().push(node.node_id);
        }
        match crate::model::hash_node(node.kind, &node.statement, &node.rule_tag, &ants) {
            Ok(digest) => {
                if digest != node.node_id {
                    mismatched.push(node.node_id);
                }
                recomputed.insert(node.node_id, digest);
            }
            Err(e) => {
                mismatched.push(node.node_id);
                report.violations.push(Violation {
                    path: vec![format!("node {}", node.node_id.to_hex())],
                    digest: node.node_id,
                    detail: format!("node content invalid: {e}"),
                });
            }
        }
    }
    for digest in mismatched {
        let path = path_from_root(&consumers, digest);
        let actual = recomputed.get(&digest).copied();
        report.violations.push(Violation {
            path,
            digest,
            detail: match actual {
                Some(a) => format!("recomputed digest is {a}"),
                None => "digest not recomputable".to_string(),
            },
        });
    }
}

/// Consumer chain from a root down to `target`, rendered as hex.
fn path_from_root(consumers: &BTreeMap<Digest, Vec<Digest>>, target: Digest) -> Vec<String> {
    // Walk upward from the target through consumers until hitting a sink.
    let mut path = vec![target];
    let mut seen = BTreeSet::new();
    let mut current = target;
    while let Some(ups) = consumers.get(&current) {
        let Some(&up) = ups.first() else { break };
        if !seen.insert(up) {
            break;
        }
        path.push(up);
        current = up;
    }
    path.reverse();
    path.into_iter().map(|d| d.to_hex()).collect()
}

#[derive(Debug, Default)]
pub struct AuditReport {
    pub violations: Vec<Violation>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug)]
pub struct Violation {
    /// Consumer path from the artifact root down to the offending item.
    pub path: Vec<String>,
    pub digest: Digest,
    pub detail: String,
}

fn parse_manifest_nodes(payload: &str) -> Result<Vec<ProofNode>, Error> {
    let mut nodes = Vec::new();
    for (i, line) in payload.lines().enumerate() {
        nodes.push(parse_node_line(line, i + 1)?);
    }
    Ok(nodes)
}

fn split_object_file<'a>(bytes: &'a [u8], digest: &Digest) -> Result<(ObjectKind, &'a [u8]), Error> {
    let corrupt = Error::CorruptHeader { digest: *digest };
    let header_end = bytes.windows(2).position(|w| w == b"\n\n").ok_or(corrupt)?;
    let header = std::str::from_utf8(&bytes[..header_end])
        .map_err(|_| Error::CorruptHeader { digest: *digest })?;
    let payload = &bytes[header_end + 2..];
    let kind_word = header
        .strip_prefix(OBJECT_HEADER_PREFIX)
        .map(str::trim)
        .ok_or(Error::CorruptHeader { digest: *digest })?;
    let kind = ObjectKind::parse(kind_word).ok_or(Error::CorruptHeader { digest: *digest })?;
    Ok((kind, payload))
}

fn validate_canonical(kind: ObjectKind, payload: &[u8]) -> Result<(), Error> {
    let text = std::str::from_utf8(payload).map_err(|_| Error::NotCanonical {
        kind: kind.as_str(),
        reason: "payload is not utf-8".to_string(),
    })?;
    let not_canonical = |reason: String| Error::NotCanonical {
        kind: kind.as_str(),
        reason,
    };
    match kind {
        ObjectKind::Node => {
            let (node_kind, statement, rule_tag, ants) =
                parse_node_payload(text).map_err(|e| not_canonical(e.to_string()))?;
            let expected = node_canonical_text(node_kind, &statement, &rule_tag, &ants);
            if expected != text {
                return Err(not_canonical("re-serialization differs".to_string()));
            }
        }
        ObjectKind::DagManifest => {
            let dag = parse_dag_manifest(text).map_err(|e| not_canonical(e.to_string()))?;
            if dag_manifest_payload(&dag) != text {
                return Err(not_canonical(
                    "manifest is not in canonical node order".to_string(),
                ));
            }
        }
        ObjectKind::ProjectionManifest => {
            let projection =
                parse_projection_manifest(text).map_err(|e| not_canonical(e.to_string()))?;
            if projection_manifest_payload(&projection) != text {
                return Err(not_canonical("re-serialization differs".to_string()));
            }
        }
        ObjectKind::Fragment => {
            let fragment =
                parse_fragment_payload(text).map_err(|e| not_canonical(e.to_string()))?;
            if fragment.canonical_payload() != text {
                return Err(not_canonical("re-serialization differs".to_string()));
            }
        }
    }
    Ok(())
}

