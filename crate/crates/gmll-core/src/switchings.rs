//! Switching families and correctness graphs.
//!
//! Three regimes over generalized links plus the classic binary one:
//!
//! * `partition` — choose a partition of the link's rule set and one
//!   element from each of its classes; each class contributes one edge
//!   from the selected premise to the conclusion;
//! * `dr` (Danos-Regnier) — choose a partition and one of its classes;
//!   every class becomes a junction vertex joined to its premises, and
//!   only the chosen class reaches the conclusion;
//! * `parn` — choose one premise of each n-ary par link; tensor links
//!   keep all premise edges;
//! * `par` — the binary special case of `parn`.
//!
//! Axiom and cut links always contribute a single edge.

use crate::formulas::Formula;
use crate::structures::{Link, LinkId, NodeId, ProofStructure};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Regime {
    ParBinary,
    ParN,
    Partition,
    DanosRegnier,
}

impl Regime {
    pub fn token(&self) -> &'static str {
        match self {
            Regime::ParBinary => "par",
            Regime::ParN => "parn",
            Regime::Partition => "partition",
            Regime::DanosRegnier => "dr",
        }
    }

    pub fn parse(token: &str) -> Option<Regime> {
        match token {
            "par" => Some(Regime::ParBinary),
            "parn" => Some(Regime::ParN),
            "partition" => Some(Regime::Partition),
            "dr" => Some(Regime::DanosRegnier),
            _ => None,
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.token())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// One link's resolved choice under a switching.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Choice {
    /// Keep the left or right premise edge of a binary par link.
    ParBinary(Side),
    /// Keep premise `premise` (1-based) of an n-ary par link.
    ParN { premise: usize },
    /// Choose rule `partition` (index into the connective's canonical
    /// rule list) and one element per class; `selection[c]` is the
    /// 1-based argument index chosen from class `c`.
    Partition {
        partition: usize,
        selection: Vec<usize>,
    },
    /// Choose rule `partition` and one of its classes.
    DanosRegnier { partition: usize, class: usize },
}

/// A total assignment of choices to the switchable links of a structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Switching {
    pub regime: Regime,
    pub choices: BTreeMap<LinkId, Choice>,
}

impl Switching {
    /// The counterexample-report serialization.
    pub fn to_json_value(&self) -> serde_json::Value {
        use serde_json::{json, Map, Value};
        let mut choices = Map::new();
        for (link, choice) in &self.choices {
            let value = match choice {
                Choice::ParBinary(side) => json!({
                    "side": match side { Side::Left => "left", Side::Right => "right" }
                }),
                Choice::ParN { premise } => json!({ "premise": premise }),
                Choice::Partition {
                    partition,
                    selection,
                } => {
                    let mut sel = Map::new();
                    for (ci, element) in selection.iter().enumerate() {
                        sel.insert(ci.to_string(), json!(element));
                    }
                    json!({ "partition": partition, "selection": Value::Object(sel) })
                }
                Choice::DanosRegnier { partition, class } => {
                    json!({ "partition": partition, "class": class })
                }
            };
            choices.insert(link.to_string(), value);
        }
        json!({ "regime": self.regime.token(), "choices": Value::Object(choices) })
    }
}

#[derive(Debug, Error)]
pub enum RegimeError {
    #[error("regime `{regime}` is undefined on this structure: {link} is a `{name}` link")]
    Inapplicable {
        regime: Regime,
        link: LinkId,
        name: String,
    },
    #[error("unknown connective `{0}`")]
    UnknownConnective(String),
    #[error("switching does not fit the structure: {0}")]
    ChoiceMismatch(String),
    #[error("switching count overflows")]
    CountOverflow,
}

/// The links a switching of the given regime must resolve. Axiom and cut
/// links are never switched; under `partition`/`dr` every connective
/// link is; under `parn`/`par` only par-family links are, and any
/// connective outside the tensor/par families makes the regime
/// inapplicable.
pub fn switchable_links(s: &ProofStructure, regime: Regime) -> Result<Vec<LinkId>, RegimeError> {
    let mut out = Vec::new();
    for (i, link) in s.links().iter().enumerate() {
        let Link::Con { name, premises, .. } = link else {
            continue;
        };
        let conn = s
            .registry()
            .get(name)
            .ok_or_else(|| RegimeError::UnknownConnective(name.clone()))?;
        match regime {
            Regime::Partition | Regime::DanosRegnier => out.push(LinkId(i)),
            Regime::ParN => {
                if !conn.is_par_family() && !conn.is_tensor_family() {
                    return Err(RegimeError::Inapplicable {
                        regime,
                        link: LinkId(i),
                        name: name.clone(),
                    });
                }
                if conn.is_par_family() {
                    out.push(LinkId(i));
                }
            }
            Regime::ParBinary => {
                let binary = premises.len() == 2;
                if !binary || (!conn.is_par_family() && !conn.is_tensor_family()) {
                    return Err(RegimeError::Inapplicable {
                        regime,
                        link: LinkId(i),
                        name: name.clone(),
                    });
                }
                if conn.is_par_family() {
                    out.push(LinkId(i));
                }
            }
        }
    }
    Ok(out)
}

/// All choices of one switchable link, in canonical order.
fn link_choices(s: &ProofStructure, link: LinkId, regime: Regime) -> Result<Vec<Choice>, RegimeError> {
    let Some(Link::Con { name, premises, .. }) = s.link(link) else {
        return Err(RegimeError::ChoiceMismatch(format!(
            "{link} is not a connective link"
        )));
    };
    let conn = s
        .registry()
        .get(name)
        .ok_or_else(|| RegimeError::UnknownConnective(name.clone()))?;
    let mut out = Vec::new();
    match regime {
        Regime::ParBinary => {
            out.push(Choice::ParBinary(Side::Left));
            out.push(Choice::ParBinary(Side::Right));
        }
        Regime::ParN => {
            for premise in 1..=premises.len() {
                out.push(Choice::ParN { premise });
            }
        }
        Regime::Partition => {
            for (pi, p) in conn.rules.members().iter().enumerate() {
                // product over classes, earlier classes most significant
                let classes = p.classes();
                let mut counters = vec![0usize; classes.len()];
                loop {
                    out.push(Choice::Partition {
                        partition: pi,
                        selection: counters
                            .iter()
                            .enumerate()
                            .map(|(ci, &k)| classes[ci][k])
                            .collect(),
                    });
                    let mut pos = classes.len();
                    let mut advanced = false;
                    while pos > 0 {
                        pos -= 1;
                        if counters[pos] + 1 < classes[pos].len() {
                            counters[pos] += 1;
                            for c in counters.iter_mut().skip(pos + 1) {
                                *c = 0;
                            }
                            advanced = true;
                            break;
                        }
                    }
                    if !advanced {
                        break;
                    }
                }
            }
        }
        Regime::DanosRegnier => {
            for (pi, p) in conn.rules.members().iter().enumerate() {
                for class in 0..p.class_count() {
                    out.push(Choice::DanosRegnier {
                        partition: pi,
                        class,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Streams the full Cartesian product of per-link choices. The first
/// switchable link is the most significant digit, so enumeration order
/// is lexicographic and deterministic.
pub struct SwitchingIter {
    regime: Regime,
    links: Vec<LinkId>,
    choices: Vec<Vec<Choice>>,
    counter: Vec<usize>,
    done: bool,
}

impl SwitchingIter {
    fn current(&self) -> Switching {
        let choices = self
            .links
            .iter()
            .enumerate()
            .map(|(i, link)| (*link, self.choices[i][self.counter[i]].clone()))
            .collect();
        Switching {
            regime: self.regime,
            choices,
        }
    }

    /// Total size of the product.
    pub fn total(&self) -> Result<u128, RegimeError> {
        let mut total: u128 = 1;
        for c in &self.choices {
            total = total
                .checked_mul(c.len() as u128)
                .ok_or(RegimeError::CountOverflow)?;
        }
        Ok(total)
    }

    /// Decodes the switching at a given index of the enumeration order.
    pub fn at(&self, mut index: u128) -> Switching {
        let mut counter = vec![0usize; self.choices.len()];
        for i in (0..self.choices.len()).rev() {
            let len = self.choices[i].len() as u128;
            counter[i] = (index % len) as usize;
            index /= len;
        }
        let choices = self
            .links
            .iter()
            .enumerate()
            .map(|(i, link)| (*link, self.choices[i][counter[i]].clone()))
            .collect();
        Switching {
            regime: self.regime,
            choices,
        }
    }
}

impl Iterator for SwitchingIter {
    type Item = Switching;

    fn next(&mut self) -> Option<Switching> {
        if self.done {
            return None;
        }
        let item = self.current();
        let mut pos = self.counter.len();
        let mut advanced = false;
        while pos > 0 {
            pos -= 1;
            if self.counter[pos] + 1 < self.choices[pos].len() {
                self.counter[pos] += 1;
                for c in self.counter.iter_mut().skip(pos + 1) {
                    *c = 0;
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            self.done = true;
        }
        Some(item)
    }
}

/// Enumerates every switching of the structure under the regime.
pub fn enumerate_switchings(
    s: &ProofStructure,
    regime: Regime,
) -> Result<SwitchingIter, RegimeError> {
    let links = switchable_links(s, regime)?;
    let choices = links
        .iter()
        .map(|&l| link_choices(s, l, regime))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SwitchingIter {
        regime,
        counter: vec![0; links.len()],
        links,
        choices,
        done: false,
    })
}

/// Closed-form count: per link, `Σ_p Π_c |c|` under `partition`,
/// `Σ_p |p|` under `dr`, the arity under `parn`, 2 under `par`.
pub fn switching_count(s: &ProofStructure, regime: Regime) -> Result<u128, RegimeError> {
    enumerate_switchings(s, regime)?.total()
}

/// A vertex of a correctness graph: a formula node, or a synthetic class
/// junction introduced by a Danos-Regnier switching.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Vertex {
    Node(NodeId),
    Class { link: LinkId, class: usize },
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Node(id) => write!(f, "{id}"),
            Vertex::Class { link, class } => write!(f, "{link}.class{class}"),
        }
    }
}

/// The undirected multigraph induced by a structure and a switching.
/// Multi-edges are kept; a doubled edge is a cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrectnessGraph {
    vertices: Vec<Vertex>,
    edges: Vec<(usize, usize)>,
}

impl CorrectnessGraph {
    #[cfg(test)]
    pub(crate) fn for_tests(vertices: Vec<Vertex>, edges: Vec<(usize, usize)>) -> Self {
        CorrectnessGraph { vertices, edges }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn label(&self, index: usize) -> String {
        self.vertices[index].to_string()
    }

    /// Canonical form for graph-set comparisons: sorted edge list over
    /// vertex labels.
    pub fn canonical_edges(&self) -> Vec<(String, String)> {
        let mut edges: Vec<(String, String)> = self
            .edges
            .iter()
            .map(|&(a, b)| {
                let (la, lb) = (self.label(a), self.label(b));
                if la <= lb {
                    (la, lb)
                } else {
                    (lb, la)
                }
            })
            .collect();
        edges.sort();
        edges
    }

    /// Deterministic DOT rendering; class junctions are drawn as points.
    pub fn to_dot(&self, s: &ProofStructure) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let _ = writeln!(out, "graph correctness {{");
        for (i, v) in self.vertices.iter().enumerate() {
            match v {
                Vertex::Node(id) => {
                    let label = s
                        .formula(id)
                        .map(Formula::to_string)
                        .unwrap_or_else(|| id.to_string());
                    let _ = writeln!(
                        out,
                        "  v{i} [label=\"{}\"];",
                        label.replace('"', "\\\"")
                    );
                }
                Vertex::Class { .. } => {
                    let _ = writeln!(out, "  v{i} [shape=point, label=\"\"];");
                }
            }
        }
        for &(a, b) in &self.edges {
            let _ = writeln!(out, "  v{a} -- v{b};");
        }
        out.push_str("}\n");
        out
    }
}

/// Builds the correctness graph of `s` under `switching`. The switching
/// must cover exactly the switchable links of its regime.
pub fn correctness_graph(
    s: &ProofStructure,
    switching: &Switching,
) -> Result<CorrectnessGraph, RegimeError> {
    let expected = switchable_links(s, switching.regime)?;
    if switching.choices.len() != expected.len()
        || !expected.iter().all(|l| switching.choices.contains_key(l))
    {
        return Err(RegimeError::ChoiceMismatch(
            "choices do not cover exactly the switchable links".into(),
        ));
    }

    let mut vertices: Vec<Vertex> = s.node_ids().cloned().map(Vertex::Node).collect();
    let mut index: BTreeMap<Vertex, usize> = vertices
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, v)| (v, i))
        .collect();
    // DR class junctions, per link in id order
    if switching.regime == Regime::DanosRegnier {
        for (&link, choice) in &switching.choices {
            let Choice::DanosRegnier { partition, .. } = choice else {
                return Err(RegimeError::ChoiceMismatch(format!(
                    "{link} has a non-dr choice under the dr regime"
                )));
            };
            let Some(Link::Con { name, .. }) = s.link(link) else {
                unreachable!("switchable links are con links");
            };
            let conn = s.registry().get(name).expect("checked by switchable_links");
            let p = conn.rules.members().get(*partition).ok_or_else(|| {
                RegimeError::ChoiceMismatch(format!("{link}: no partition #{partition}"))
            })?;
            for class in 0..p.class_count() {
                let v = Vertex::Class { link, class };
                index.insert(v.clone(), vertices.len());
                vertices.push(v);
            }
        }
    }

    let node_index = |id: &NodeId| -> usize { index[&Vertex::Node(id.clone())] };
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (li, link) in s.links().iter().enumerate() {
        let lid = LinkId(li);
        match link {
            Link::Axiom { conclusions } => {
                edges.push((node_index(&conclusions[0]), node_index(&conclusions[1])));
            }
            Link::Cut { premises } => {
                edges.push((node_index(&premises[0]), node_index(&premises[1])));
            }
            Link::Con {
                name,
                premises,
                conclusion,
            } => {
                let conn = s.registry().get(name).expect("checked by switchable_links");
                match switching.choices.get(&lid) {
                    None => {
                        // unswitched link (tensor family under parn/par):
                        // all premise edges stay
                        for p in premises {
                            edges.push((node_index(p), node_index(conclusion)));
                        }
                    }
                    Some(Choice::ParBinary(side)) => {
                        let premise = match side {
                            Side::Left => &premises[0],
                            Side::Right => &premises[1],
                        };
                        edges.push((node_index(premise), node_index(conclusion)));
                    }
                    Some(Choice::ParN { premise }) => {
                        let premise = premises.get(premise.wrapping_sub(1)).ok_or_else(|| {
                            RegimeError::ChoiceMismatch(format!(
                                "{lid}: premise index {premise} out of range"
                            ))
                        })?;
                        edges.push((node_index(premise), node_index(conclusion)));
                    }
                    Some(Choice::Partition {
                        partition,
                        selection,
                    }) => {
                        let p = conn.rules.members().get(*partition).ok_or_else(|| {
                            RegimeError::ChoiceMismatch(format!(
                                "{lid}: no partition #{partition}"
                            ))
                        })?;
                        if selection.len() != p.class_count() {
                            return Err(RegimeError::ChoiceMismatch(format!(
                                "{lid}: selection must pick one element per class of {p}"
                            )));
                        }
                        for (ci, class) in p.classes().iter().enumerate() {
                            let j = selection[ci];
                            if !class.contains(&j) {
                                return Err(RegimeError::ChoiceMismatch(format!(
                                    "{lid}: element {j} is not in class {ci} of {p}"
                                )));
                            }
                            edges.push((node_index(&premises[j - 1]), node_index(conclusion)));
                        }
                    }
                    Some(Choice::DanosRegnier { partition, class }) => {
                        let p = conn.rules.members().get(*partition).ok_or_else(|| {
                            RegimeError::ChoiceMismatch(format!(
                                "{lid}: no partition #{partition}"
                            ))
                        })?;
                        if *class >= p.class_count() {
                            return Err(RegimeError::ChoiceMismatch(format!(
                                "{lid}: no class #{class} in {p}"
                            )));
                        }
                        for (ci, members) in p.classes().iter().enumerate() {
                            let junction = index[&Vertex::Class { link: lid, class: ci }];
                            for &j in members {
                                edges.push((node_index(&premises[j - 1]), junction));
                            }
                        }
                        let chosen = index[&Vertex::Class {
                            link: lid,
                            class: *class,
                        }];
                        edges.push((chosen, node_index(conclusion)));
                    }
                }
            }
        }
    }
    Ok(CorrectnessGraph { vertices, edges })
}
