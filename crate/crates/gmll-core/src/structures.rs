//! Proof structures: labelled graphs of axiom, cut and connective links.
//!
//! Nodes are formula occurrences with opaque string ids; links connect
//! them. Binary tensor/par links are stored as `Con` links over the
//! built-in names `tensor2`/`par2` (the file format still accepts and
//! emits the `tensor`/`par` kinds). A structure carries the connective
//! registry in scope, so analyses need no extra catalog threading.

use crate::catalog::{Catalog, CatalogError, ConnectiveFile};
use crate::formulas::{parse_formula, Formula};
use crate::sequentialize::{validate_proof, Rule, SequentProof};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Opaque node identifier.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(id: impl Into<String>) -> Self {
        NodeId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<&str> for NodeId {
    fn from(s: &str) -> Self {
        NodeId(s.to_string())
    }
}

/// Link identifier: position in the structure's link list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinkId(pub usize);

impl fmt::Display for LinkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "link{}", self.0)
    }
}

impl LinkId {
    /// Parses the `link<k>` form used in switching files.
    pub fn parse(s: &str) -> Option<LinkId> {
        s.strip_prefix("link")?.parse().ok().map(LinkId)
    }
}

/// Whether axiom links may conclude arbitrary formulas or literals only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AxiomMode {
    #[default]
    Atomic,
    Extended,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Link {
    /// No premises, two ordered conclusions `(f, ~f)`.
    Axiom { conclusions: [NodeId; 2] },
    /// Two ordered premises `(f, ~f)`, no conclusion.
    Cut { premises: [NodeId; 2] },
    /// A connective link: ordered premises, one conclusion. Premise
    /// position i is argument index i of the connective's partitions.
    Con {
        name: String,
        premises: Vec<NodeId>,
        conclusion: NodeId,
    },
}

impl Link {
    pub fn premises(&self) -> &[NodeId] {
        match self {
            Link::Axiom { .. } => &[],
            Link::Cut { premises } => premises,
            Link::Con { premises, .. } => premises,
        }
    }

    pub fn conclusions(&self) -> &[NodeId] {
        match self {
            Link::Axiom { conclusions } => conclusions,
            Link::Cut { .. } => &[],
            Link::Con { conclusion, .. } => std::slice::from_ref(conclusion),
        }
    }

    pub fn is_axiom(&self) -> bool {
        matches!(self, Link::Axiom { .. })
    }

    pub fn is_cut(&self) -> bool {
        matches!(self, Link::Cut { .. })
    }

    pub fn connective_name(&self) -> Option<&str> {
        match self {
            Link::Con { name, .. } => Some(name),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationCode {
    EmptyStructure,
    UnknownNode,
    PremiseOfTwo,
    NotConcluded,
    ConcludedTwice,
    ArityMismatch,
    UnknownConnective,
    AxiomNotDual,
    NonAtomicAxiom,
    CutNotDual,
    ConclusionFormulaMismatch,
}

impl fmt::Display for ViolationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ViolationCode::EmptyStructure => "empty-structure",
            ViolationCode::UnknownNode => "unknown-node",
            ViolationCode::PremiseOfTwo => "premise-of-two",
            ViolationCode::NotConcluded => "not-concluded",
            ViolationCode::ConcludedTwice => "concluded-twice",
            ViolationCode::ArityMismatch => "arity-mismatch",
            ViolationCode::UnknownConnective => "unknown-connective",
            ViolationCode::AxiomNotDual => "axiom-not-dual",
            ViolationCode::NonAtomicAxiom => "non-atomic-axiom",
            ViolationCode::CutNotDual => "cut-not-dual",
            ViolationCode::ConclusionFormulaMismatch => "conclusion-formula-mismatch",
        };
        write!(f, "{s}")
    }
}

/// One violated structure invariant, with the offending ids spelled out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub code: ViolationCode,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

/// A proof structure: formula occurrences plus links, with the catalog
/// in scope. Equality compares mode, nodes and links; the registry is
/// context, not content.
#[derive(Debug, Clone)]
pub struct ProofStructure {
    mode: AxiomMode,
    nodes: BTreeMap<NodeId, Formula>,
    links: Vec<Link>,
    registry: Catalog,
}

impl PartialEq for ProofStructure {
    fn eq(&self, other: &Self) -> bool {
        self.mode == other.mode && self.nodes == other.nodes && self.links == other.links
    }
}

impl Eq for ProofStructure {}

impl ProofStructure {
    pub fn new(mode: AxiomMode, registry: Catalog) -> Self {
        ProofStructure {
            mode,
            nodes: BTreeMap::new(),
            links: Vec::new(),
            registry,
        }
    }

    pub(crate) fn from_parts(
        mode: AxiomMode,
        nodes: BTreeMap<NodeId, Formula>,
        links: Vec<Link>,
        registry: Catalog,
    ) -> Self {
        ProofStructure {
            mode,
            nodes,
            links,
            registry,
        }
    }

    pub fn mode(&self) -> AxiomMode {
        self.mode
    }

    pub fn registry(&self) -> &Catalog {
        &self.registry
    }

    /// Adds a node, returning its id. Panics on duplicate ids; callers
    /// generate fresh ids via [`ProofStructure::fresh_node_id`].
    pub fn add_node(&mut self, id: NodeId, formula: Formula) -> NodeId {
        assert!(
            self.nodes.insert(id.clone(), formula).is_none(),
            "duplicate node id {id}"
        );
        id
    }

    pub fn add_link(&mut self, link: Link) -> LinkId {
        self.links.push(link);
        LinkId(self.links.len() - 1)
    }

    pub fn fresh_node_id(&self, prefix: &str) -> NodeId {
        let mut k = self.nodes.len() + 1;
        loop {
            let candidate = NodeId::new(format!("{prefix}{k}"));
            if !self.nodes.contains_key(&candidate) {
                return candidate;
            }
            k += 1;
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = (&NodeId, &Formula)> {
        self.nodes.iter()
    }

    pub fn node_ids(&self) -> impl Iterator<Item = &NodeId> {
        self.nodes.keys()
    }

    pub fn formula(&self, id: &NodeId) -> Option<&Formula> {
        self.nodes.get(id)
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn link(&self, id: LinkId) -> Option<&Link> {
        self.links.get(id.0)
    }

    pub fn link_ids(&self) -> impl Iterator<Item = LinkId> {
        (0..self.links.len()).map(LinkId)
    }

    /// The link concluding `node`, if any.
    pub fn concluding_link(&self, node: &NodeId) -> Option<LinkId> {
        self.links
            .iter()
            .position(|l| l.conclusions().contains(node))
            .map(LinkId)
    }

    /// The link `node` is a premise of, if any.
    pub fn premise_link(&self, node: &NodeId) -> Option<LinkId> {
        self.links
            .iter()
            .position(|l| l.premises().contains(node))
            .map(LinkId)
    }

    /// Nodes that are premises of no link, in id order.
    pub fn terminals(&self) -> Vec<NodeId> {
        self.nodes
            .keys()
            .filter(|id| self.premise_link(id).is_none())
            .cloned()
            .collect()
    }

    /// Terminal formulas as a sorted multiset.
    pub fn terminal_formulas(&self) -> Vec<Formula> {
        let mut v: Vec<Formula> = self
            .terminals()
            .iter()
            .map(|id| self.nodes[id].clone())
            .collect();
        v.sort();
        v
    }

    /// Reports every violated invariant; an empty list means the
    /// structure is well formed.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut report = |code: ViolationCode, message: String| {
            out.push(Violation { code, message });
        };
        if self.nodes.is_empty() || self.links.is_empty() {
            report(
                ViolationCode::EmptyStructure,
                "a proof structure is a non-empty graph".into(),
            );
            return out;
        }
        let mut premise_count: BTreeMap<&NodeId, usize> = BTreeMap::new();
        let mut conclusion_count: BTreeMap<&NodeId, usize> = BTreeMap::new();
        for (i, link) in self.links.iter().enumerate() {
            let lid = LinkId(i);
            for id in link.premises().iter().chain(link.conclusions()) {
                if !self.nodes.contains_key(id) {
                    report(
                        ViolationCode::UnknownNode,
                        format!("{lid} references missing node {id}"),
                    );
                }
            }
            for id in link.premises() {
                if let Some(c) = premise_count.get_mut(id) {
                    *c += 1;
                } else {
                    premise_count.insert(id, 1);
                }
            }
            for id in link.conclusions() {
                if let Some(c) = conclusion_count.get_mut(id) {
                    *c += 1;
                } else {
                    conclusion_count.insert(id, 1);
                }
            }
        }
        for (id, count) in &premise_count {
            if *count > 1 {
                report(
                    ViolationCode::PremiseOfTwo,
                    format!("node {id} is a premise of {count} links"),
                );
            }
        }
        for id in self.nodes.keys() {
            match conclusion_count.get(id).copied().unwrap_or(0) {
                0 => report(
                    ViolationCode::NotConcluded,
                    format!("node {id} is the conclusion of no link"),
                ),
                1 => {}
                n => report(
                    ViolationCode::ConcludedTwice,
                    format!("node {id} is the conclusion of {n} links"),
                ),
            }
        }
        for (i, link) in self.links.iter().enumerate() {
            let lid = LinkId(i);
            match link {
                Link::Axiom { conclusions } => {
                    let (Some(f), Some(g)) = (
                        self.nodes.get(&conclusions[0]),
                        self.nodes.get(&conclusions[1]),
                    ) else {
                        continue;
                    };
                    match f.dual(&self.registry) {
                        Ok(dual) if &dual == g => {}
                        Ok(_) => report(
                            ViolationCode::AxiomNotDual,
                            format!("{lid} conclusions {f} and {g} are not dual"),
                        ),
                        Err(e) => report(ViolationCode::UnknownConnective, format!("{lid}: {e}")),
                    }
                    if self.mode == AxiomMode::Atomic && !f.is_literal() {
                        report(
                            ViolationCode::NonAtomicAxiom,
                            format!("{lid} concludes non-atomic {f} in atomic mode"),
                        );
                    }
                }
                Link::Cut { premises } => {
                    let (Some(f), Some(g)) =
                        (self.nodes.get(&premises[0]), self.nodes.get(&premises[1]))
                    else {
                        continue;
                    };
                    match f.dual(&self.registry) {
                        Ok(dual) if &dual == g => {}
                        Ok(_) => report(
                            ViolationCode::CutNotDual,
                            format!("{lid} premises {f} and {g} are not dual"),
                        ),
                        Err(e) => report(ViolationCode::UnknownConnective, format!("{lid}: {e}")),
                    }
                }
                Link::Con {
                    name,
                    premises,
                    conclusion,
                } => {
                    let Some(conn) = self.registry.get(name) else {
                        report(
                            ViolationCode::UnknownConnective,
                            format!("{lid} is labelled unknown connective `{name}`"),
                        );
                        continue;
                    };
                    if premises.len() != conn.arity {
                        report(
                            ViolationCode::ArityMismatch,
                            format!(
                                "{lid} labelled `{name}` has {} premises, arity is {}",
                                premises.len(),
                                conn.arity
                            ),
                        );
                        continue;
                    }
                    let args: Option<Vec<Formula>> = premises
                        .iter()
                        .map(|id| self.nodes.get(id).cloned())
                        .collect();
                    let (Some(args), Some(found)) = (args, self.nodes.get(conclusion)) else {
                        continue;
                    };
                    let expected = Formula::apply(name.clone(), args);
                    if &expected != found {
                        report(
                            ViolationCode::ConclusionFormulaMismatch,
                            format!("{lid} concludes {found}, expected {expected}"),
                        );
                    }
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Deterministic DOT rendering: formula nodes as ellipses, logical
    /// links as boxes below, axiom links as bold arcs, cuts as dashed
    /// arcs.
    pub fn to_dot(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let _ = writeln!(out, "graph proof_structure {{");
        let _ = writeln!(out, "  node [shape=ellipse];");
        for (id, formula) in &self.nodes {
            let _ = writeln!(out, "  \"{id}\" [label=\"{}\"];", escape(&formula.to_string()));
        }
        for (i, link) in self.links.iter().enumerate() {
            let lid = LinkId(i);
            match link {
                Link::Axiom { conclusions } => {
                    let _ = writeln!(
                        out,
                        "  \"{}\" -- \"{}\" [style=bold];",
                        conclusions[0], conclusions[1]
                    );
                }
                Link::Cut { premises } => {
                    let _ = writeln!(
                        out,
                        "  \"{}\" -- \"{}\" [style=dashed, label=\"cut\"];",
                        premises[0], premises[1]
                    );
                }
                Link::Con {
                    name,
                    premises,
                    conclusion,
                } => {
                    let _ = writeln!(out, "  \"{lid}\" [shape=box, label=\"{}\"];", escape(name));
                    for p in premises {
                        let _ = writeln!(out, "  \"{p}\" -- \"{lid}\";");
                    }
                    let _ = writeln!(out, "  \"{lid}\" -- \"{conclusion}\";");
                }
            }
        }
        out.push_str("}\n");
        out
    }

    /// Serializes to the structure file format.
    pub fn to_json(&self) -> String {
        let file = StructureFile::from_structure(self);
        serde_json::to_string_pretty(&file).expect("structure files serialize")
    }

    /// Loads a structure file, merging its connective list over the
    /// ambient catalog.
    pub fn from_json(json: &str, ambient: &Catalog) -> Result<ProofStructure, StructureIoError> {
        let file: StructureFile =
            serde_json::from_str(json).map_err(|e| StructureIoError::Format(e.to_string()))?;
        file.into_structure(ambient)
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

#[derive(Debug, Error)]
pub enum StructureIoError {
    #[error("bad structure file: {0}")]
    Format(String),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("bad formula for node {id}: {message}")]
    BadFormula { id: String, message: String },
    #[error("bad link entry {index}: {message}")]
    BadLink { index: usize, message: String },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum ConnectiveRef {
    Name(String),
    Inline(ConnectiveFile),
}

#[derive(Debug, Serialize, Deserialize)]
struct NodeEntry {
    id: String,
    formula: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct LinkEntry {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    premises: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    conclusions: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    conclusion: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct StructureFile {
    mode: String,
    connectives: Vec<ConnectiveRef>,
    nodes: Vec<NodeEntry>,
    links: Vec<LinkEntry>,
}

impl StructureFile {
    fn from_structure(s: &ProofStructure) -> StructureFile {
        let builtin = Catalog::builtin();
        let mut used: Vec<String> = Vec::new();
        let mut note = |name: &str, used: &mut Vec<String>| {
            if s.registry.contains(name) && !used.iter().any(|u| u == name) {
                used.push(name.to_string());
            }
        };
        for link in &s.links {
            if let Some(name) = link.connective_name() {
                note(name, &mut used);
            }
        }
        fn walk(f: &Formula, note: &mut dyn FnMut(&str, &mut Vec<String>), used: &mut Vec<String>) {
            match f {
                Formula::Apply(name, args) => {
                    note(name, used);
                    for a in args {
                        walk(a, note, used);
                    }
                }
                Formula::Tensor(l, r) | Formula::Par(l, r) => {
                    walk(l, note, used);
                    walk(r, note, used);
                }
                Formula::Atom(_) | Formula::NegAtom(_) => {}
            }
        }
        for formula in s.nodes.values() {
            walk(formula, &mut note, &mut used);
        }
        used.sort_unstable();
        let connectives = used
            .iter()
            .map(|name| {
                let conn = s.registry.get(name).expect("noted names are registered");
                match builtin.get(name) {
                    Some(b) if b == conn => ConnectiveRef::Name(name.to_string()),
                    _ => ConnectiveRef::Inline(ConnectiveFile::from_connective(conn)),
                }
            })
            .collect();
        let nodes = s
            .nodes
            .iter()
            .map(|(id, f)| NodeEntry {
                id: id.to_string(),
                formula: f.to_string(),
            })
            .collect();
        let links = s
            .links
            .iter()
            .map(|link| match link {
                Link::Axiom { conclusions } => LinkEntry {
                    kind: "axiom".into(),
                    name: None,
                    premises: None,
                    conclusions: Some(conclusions.iter().map(|n| n.to_string()).collect()),
                    conclusion: None,
                },
                Link::Cut { premises } => LinkEntry {
                    kind: "cut".into(),
                    name: None,
                    premises: Some(premises.iter().map(|n| n.to_string()).collect()),
                    conclusions: None,
                    conclusion: None,
                },
                Link::Con {
                    name,
                    premises,
                    conclusion,
                } => {
                    let (kind, name) = match name.as_str() {
                        "tensor2" => ("tensor".to_string(), None),
                        "par2" => ("par".to_string(), None),
                        other => ("con".to_string(), Some(other.to_string())),
                    };
                    LinkEntry {
                        kind,
                        name,
                        premises: Some(premises.iter().map(|n| n.to_string()).collect()),
                        conclusions: None,
                        conclusion: Some(conclusion.to_string()),
                    }
                }
            })
            .collect();
        StructureFile {
            mode: match s.mode {
                AxiomMode::Atomic => "atomic".into(),
                AxiomMode::Extended => "extended".into(),
            },
            connectives,
            nodes,
            links,
        }
    }

    fn into_structure(self, ambient: &Catalog) -> Result<ProofStructure, StructureIoError> {
        let mode = match self.mode.as_str() {
            "atomic" => AxiomMode::Atomic,
            "extended" => AxiomMode::Extended,
            other => {
                return Err(StructureIoError::Format(format!(
                    "mode must be \"atomic\" or \"extended\", got \"{other}\""
                )))
            }
        };
        let mut registry = ambient.clone();
        for conn_ref in self.connectives {
            match conn_ref {
                ConnectiveRef::Name(name) => {
                    if !registry.contains(&name) {
                        return Err(CatalogError::Unknown(name).into());
                    }
                }
                ConnectiveRef::Inline(file) => {
                    registry.register(file.into_connective()?)?;
                }
            }
        }
        let mut nodes = BTreeMap::new();
        for entry in self.nodes {
            let formula =
                parse_formula(&entry.formula, &registry).map_err(|e| StructureIoError::BadFormula {
                    id: entry.id.clone(),
                    message: e.to_string(),
                })?;
            if nodes.insert(NodeId::new(entry.id.clone()), formula).is_some() {
                return Err(StructureIoError::Format(format!(
                    "duplicate node id {}",
                    entry.id
                )));
            }
        }
        let mut links = Vec::new();
        for (index, entry) in self.links.into_iter().enumerate() {
            let bad = |message: &str| StructureIoError::BadLink {
                index,
                message: message.to_string(),
            };
            let ids = |v: &Option<Vec<String>>, field: &str, n: Option<usize>| {
                let v = v
                    .as_ref()
                    .ok_or_else(|| bad(&format!("missing `{field}`")))?;
                if let Some(n) = n {
                    if v.len() != n {
                        return Err(bad(&format!("`{field}` must list {n} nodes")));
                    }
                }
                Ok::<Vec<NodeId>, StructureIoError>(
                    v.iter().map(|s| NodeId::new(s.clone())).collect(),
                )
            };
            let link = match entry.kind.as_str() {
                "axiom" => {
                    let c = ids(&entry.conclusions, "conclusions", Some(2))?;
                    Link::Axiom {
                        conclusions: [c[0].clone(), c[1].clone()],
                    }
                }
                "cut" => {
                    let p = ids(&entry.premises, "premises", Some(2))?;
                    Link::Cut {
                        premises: [p[0].clone(), p[1].clone()],
                    }
                }
                "tensor" | "par" => {
                    let p = ids(&entry.premises, "premises", Some(2))?;
                    let conclusion = entry
                        .conclusion
                        .as_ref()
                        .ok_or_else(|| bad("missing `conclusion`"))?;
                    Link::Con {
                        name: if entry.kind == "tensor" {
                            "tensor2".into()
                        } else {
                            "par2".into()
                        },
                        premises: p,
                        conclusion: NodeId::new(conclusion.clone()),
                    }
                }
                "con" => {
                    let name = entry.name.clone().ok_or_else(|| bad("missing `name`"))?;
                    let p = ids(&entry.premises, "premises", None)?;
                    let conclusion = entry
                        .conclusion
                        .as_ref()
                        .ok_or_else(|| bad("missing `conclusion`"))?;
                    // normalize the binary built-ins written as con links
                    Link::Con {
                        name,
                        premises: p,
                        conclusion: NodeId::new(conclusion.clone()),
                    }
                }
                other => return Err(bad(&format!("unknown link kind `{other}`"))),
            };
            links.push(link);
        }
        Ok(ProofStructure::from_parts(mode, nodes, links, registry))
    }
}

#[derive(Debug, Error)]
pub enum DeseqError {
    #[error("invalid proof: {0}")]
    InvalidProof(String),
}

/// Translates a sequent proof into a proof structure: axiom rules become
/// axiom links, cut rules cut links, and each connective rule one link
/// with premises in argument order. Terminal formulas of the result are
/// exactly the proof's conclusion.
pub fn desequentialize(
    proof: &SequentProof,
    catalog: &Catalog,
) -> Result<ProofStructure, DeseqError> {
    validate_proof(proof, AxiomMode::Extended, catalog)
        .map_err(|e| DeseqError::InvalidProof(e.to_string()))?;
    let mode = if has_non_atomic_axiom(proof) {
        AxiomMode::Extended
    } else {
        AxiomMode::Atomic
    };
    let mut s = ProofStructure::new(mode, catalog.clone());
    let mut counter = 0usize;
    translate(proof, &mut s, &mut counter, catalog)?;
    Ok(s)
}

fn has_non_atomic_axiom(proof: &SequentProof) -> bool {
    match proof.rule {
        Rule::Axiom => !proof.conclusion.0[0].is_literal(),
        _ => proof.premises.iter().any(has_non_atomic_axiom),
    }
}

fn fresh(s: &mut ProofStructure, counter: &mut usize, formula: Formula) -> NodeId {
    *counter += 1;
    s.add_node(NodeId::new(format!("n{counter}")), formula)
}

/// Returns node ids aligned with the proof node's conclusion sequent.
fn translate(
    proof: &SequentProof,
    s: &mut ProofStructure,
    counter: &mut usize,
    catalog: &Catalog,
) -> Result<Vec<NodeId>, DeseqError> {
    let conclusion = &proof.conclusion.0;
    match &proof.rule {
        Rule::Axiom => {
            let a = fresh(s, counter, conclusion[0].clone());
            let b = fresh(s, counter, conclusion[1].clone());
            s.add_link(Link::Axiom {
                conclusions: [a.clone(), b.clone()],
            });
            Ok(vec![a, b])
        }
        Rule::Cut {
            left_active,
            right_active,
        } => {
            let m0 = translate(&proof.premises[0], s, counter, catalog)?;
            let m1 = translate(&proof.premises[1], s, counter, catalog)?;
            s.add_link(Link::Cut {
                premises: [m0[*left_active].clone(), m1[*right_active].clone()],
            });
            let mut pool = context_pool(&proof.premises, &[vec![*left_active], vec![*right_active]], &[m0, m1]);
            claim_contexts(conclusion, None, &mut pool)
        }
        Rule::Con {
            name,
            partition,
            principal,
            actives,
        } => {
            let conn = catalog
                .get(name)
                .ok_or_else(|| DeseqError::InvalidProof(format!("unknown connective `{name}`")))?;
            let p = &conn.rules.members()[*partition];
            let mut maps = Vec::with_capacity(proof.premises.len());
            for premise in &proof.premises {
                maps.push(translate(premise, s, counter, catalog)?);
            }
            let mut arg_nodes: Vec<Option<NodeId>> = vec![None; conn.arity];
            for (ci, class) in p.classes().iter().enumerate() {
                for (k, &j) in class.iter().enumerate() {
                    arg_nodes[j - 1] = Some(maps[ci][actives[ci][k]].clone());
                }
            }
            let premises: Vec<NodeId> = arg_nodes
                .into_iter()
                .map(|n| n.expect("every argument index sits in some class"))
                .collect();
            let conclusion_node = fresh(s, counter, conclusion[*principal].clone());
            s.add_link(Link::Con {
                name: name.clone(),
                premises,
                conclusion: conclusion_node.clone(),
            });
            let mut pool = context_pool(&proof.premises, actives, &maps);
            let mut mapped = claim_contexts(conclusion, Some(*principal), &mut pool)?;
            mapped[*principal] = conclusion_node;
            Ok(mapped)
        }
    }
}

/// Unclaimed context occurrences across all premises, in premise order.
fn context_pool(
    premises: &[SequentProof],
    actives: &[Vec<usize>],
    maps: &[Vec<NodeId>],
) -> Vec<(Formula, NodeId, bool)> {
    let mut pool = Vec::new();
    for (i, premise) in premises.iter().enumerate() {
        for (k, formula) in premise.conclusion.0.iter().enumerate() {
            if !actives[i].contains(&k) {
                pool.push((formula.clone(), maps[i][k].clone(), false));
            }
        }
    }
    pool
}

/// Greedily matches each conclusion position (except the principal one)
/// to the first unclaimed pool occurrence with an equal formula. For
/// proofs emitted by this crate the match is positional; for hand-written
/// files any consistent pairing of equal formulas is taken.
fn claim_contexts(
    conclusion: &[Formula],
    principal: Option<usize>,
    pool: &mut [(Formula, NodeId, bool)],
) -> Result<Vec<NodeId>, DeseqError> {
    let mut mapped: Vec<NodeId> = vec![NodeId::new(""); conclusion.len()];
    for (pos, formula) in conclusion.iter().enumerate() {
        if principal == Some(pos) {
            continue;
        }
        let slot = pool
            .iter_mut()
            .find(|(f, _, claimed)| !*claimed && f == formula)
            .ok_or_else(|| {
                DeseqError::InvalidProof(format!(
                    "context formula {formula} has no matching premise occurrence"
                ))
            })?;
        slot.2 = true;
        mapped[pos] = slot.1.clone();
    }
    if let Some((f, _, _)) = pool.iter().find(|(_, _, claimed)| !claimed) {
        return Err(DeseqError::InvalidProof(format!(
            "premise context formula {f} is not used by the conclusion"
        )));
    }
    Ok(mapped)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::em_structure;
    use crate::formulas::Sequent;

    fn cat() -> Catalog {
        Catalog::builtin()
    }

    fn axiom_structure() -> ProofStructure {
        let mut s = ProofStructure::new(AxiomMode::Atomic, cat());
        let a = s.add_node(NodeId::new("n1"), Formula::atom("A"));
        let b = s.add_node(NodeId::new("n2"), Formula::neg_atom("A"));
        s.add_link(Link::Axiom {
            conclusions: [a, b],
        });
        s
    }

    #[test]
    fn single_axiom_is_valid() {
        assert!(axiom_structure().validate().is_empty());
    }

    #[test]
    fn premise_of_two_links_is_reported() {
        let mut s = axiom_structure();
        let c = s.add_node(NodeId::new("n3"), Formula::neg_atom("A"));
        let d = s.add_node(NodeId::new("n4"), Formula::atom("A"));
        s.add_link(Link::Axiom {
            conclusions: [c.clone(), d.clone()],
        });
        // n1 is a premise of two cut links
        s.add_link(Link::Cut {
            premises: [NodeId::new("n1"), c],
        });
        s.add_link(Link::Cut {
            premises: [NodeId::new("n1"), NodeId::new("n2")],
        });
        let violations = s.validate();
        assert!(violations
            .iter()
            .any(|v| v.code == ViolationCode::PremiseOfTwo && v.message.contains("n1")));
    }

    #[test]
    fn con_arity_mismatch_is_reported() {
        let mut s = ProofStructure::new(AxiomMode::Atomic, cat());
        for i in 1..=3 {
            s.add_node(NodeId::new(format!("a{i}")), Formula::atom(format!("A{i}")));
        }
        let c = s.add_node(
            NodeId::new("c"),
            Formula::apply(
                "G",
                vec![
                    Formula::atom("A1"),
                    Formula::atom("A2"),
                    Formula::atom("A3"),
                    Formula::atom("A4"),
                ],
            ),
        );
        s.add_link(Link::Con {
            name: "G".into(),
            premises: vec![NodeId::new("a1"), NodeId::new("a2"), NodeId::new("a3")],
            conclusion: c,
        });
        let violations = s.validate();
        assert!(violations
            .iter()
            .any(|v| v.code == ViolationCode::ArityMismatch));
    }

    #[test]
    fn terminal_formulas_of_em_are_its_two_conclusions() {
        let em = em_structure("G", AxiomMode::Atomic, &cat()).unwrap();
        let terminals = em.terminal_formulas();
        assert_eq!(terminals.len(), 2);
        let text: Vec<String> = terminals.iter().map(|f| f.to_string()).collect();
        assert!(text.contains(&"G(A1,A2,A3,A4)".to_string()));
        assert!(text.contains(&"G*(~A1,~A2,~A3,~A4)".to_string()));
    }

    #[test]
    fn dot_export_shapes() {
        let s = axiom_structure();
        let dot = s.to_dot();
        assert_eq!(dot.matches("[label=").count(), 2);
        assert_eq!(dot.matches("style=bold").count(), 1);

        let em = em_structure("G", AxiomMode::Atomic, &cat()).unwrap();
        let dot = em.to_dot();
        assert_eq!(dot.matches("shape=box").count(), 2);
        assert_eq!(dot.matches("style=bold").count(), 4);
        // node lines: 10 formula labels + 2 box labels
        assert_eq!(dot.matches("[label=").count(), 12);
        // determinism
        assert_eq!(dot, em.to_dot());
    }

    #[test]
    fn json_round_trip_preserves_structures() {
        let em = em_structure("G", AxiomMode::Atomic, &cat()).unwrap();
        let json = em.to_json();
        let back = ProofStructure::from_json(&json, &cat()).unwrap();
        assert_eq!(em, back);
        // builtin connectives are referenced by name
        assert!(json.contains("\"G\""));
        assert!(!json.contains("\"partitions\""));
    }

    #[test]
    fn json_inline_connectives_round_trip() {
        let mut user = cat();
        user.register_file(r#"{"name":"H","arity":2,"partitions":[[[1],[2]]],"dualName":"H*"}"#)
            .unwrap();
        let em = em_structure("H", AxiomMode::Atomic, &user).unwrap();
        let json = em.to_json();
        assert!(json.contains("\"partitions\""));
        // loads against the plain builtin catalog thanks to the inline entry
        let back = ProofStructure::from_json(&json, &cat()).unwrap();
        assert_eq!(em, back);
    }

    #[test]
    fn spec_format_example_parses() {
        let json = r#"{
            "mode": "atomic",
            "connectives": ["G"],
            "nodes": [
                {"id":"n1","formula":"A"},
                {"id":"n2","formula":"~A"}
            ],
            "links": [
                {"kind":"axiom","conclusions":["n1","n2"]}
            ]
        }"#;
        let s = ProofStructure::from_json(json, &cat()).unwrap();
        assert!(s.validate().is_empty());
        assert_eq!(s.node_count(), 2);
    }

    #[test]
    fn deseq_axiom_and_tensor_proof() {
        let c = cat();
        let ax_a = SequentProof {
            conclusion: Sequent(vec![Formula::atom("A"), Formula::neg_atom("A")]),
            rule: Rule::Axiom,
            premises: vec![],
        };
        let ax_b = SequentProof {
            conclusion: Sequent(vec![Formula::atom("B"), Formula::neg_atom("B")]),
            rule: Rule::Axiom,
            premises: vec![],
        };
        let tensor = SequentProof {
            conclusion: Sequent(vec![
                Formula::neg_atom("A"),
                Formula::neg_atom("B"),
                Formula::tensor(Formula::atom("A"), Formula::atom("B")),
            ]),
            rule: Rule::Con {
                name: "tensor2".into(),
                partition: 0,
                principal: 2,
                actives: vec![vec![0], vec![0]],
            },
            premises: vec![ax_a.clone(), ax_b],
        };
        let s = desequentialize(&tensor, &c).unwrap();
        assert!(s.validate().is_empty());
        assert_eq!(s.links().iter().filter(|l| l.is_axiom()).count(), 2);
        assert_eq!(
            s.links()
                .iter()
                .filter(|l| l.connective_name() == Some("tensor2"))
                .count(),
            1
        );
        let mut expected = tensor.conclusion.sorted();
        expected.sort();
        assert_eq!(s.terminal_formulas(), expected);

        let single = desequentialize(&ax_a, &c).unwrap();
        assert_eq!(single.links().len(), 1);
        assert!(single.validate().is_empty());
    }

    #[test]
    fn deseq_g_rule_proof() {
        let c = cat();
        let ax = |name: &str| SequentProof {
            conclusion: Sequent(vec![Formula::atom(name), Formula::neg_atom(name)]),
            rule: Rule::Axiom,
            premises: vec![],
        };
        // G's rule {(1,2)(3,4)} applied to two axiom-pair premises:
        // each class takes both conclusions of one axiom.
        let g = Formula::apply(
            "G",
            vec![
                Formula::atom("A"),
                Formula::neg_atom("A"),
                Formula::atom("B"),
                Formula::neg_atom("B"),
            ],
        );
        let proof = SequentProof {
            conclusion: Sequent(vec![g]),
            rule: Rule::Con {
                name: "G".into(),
                partition: 0, // {(1,2)(3,4)}
                principal: 0,
                actives: vec![vec![0, 1], vec![0, 1]],
            },
            premises: vec![ax("A"), ax("B")],
        };
        let s = desequentialize(&proof, &c).unwrap();
        assert!(s.validate().is_empty());
        assert_eq!(s.links().iter().filter(|l| l.is_axiom()).count(), 2);
        assert_eq!(
            s.links()
                .iter()
                .filter(|l| l.connective_name() == Some("G"))
                .count(),
            1
        );
    }
}
