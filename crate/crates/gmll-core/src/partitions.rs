//! Partition algebra over `{1..n}`.
//!
//! A generalized multiplicative rule is a partition of its argument
//! indices; a generalized connective is a finite set of such partitions.
//! Duality between connectives is orthogonality of partition sets, which
//! reduces to a tree condition on bipartite meeting graphs. Everything
//! here is brute force on purpose: complements enumerate all Bell(n)
//! partitions, decomposability enumerates all formula shapes.

use std::fmt;
use thiserror::Error;

/// Largest arity for which partition enumeration (and hence complements)
/// is allowed by default. Bell(9) = 21147.
pub const DEFAULT_ENUMERATION_CAP: usize = 9;

/// Largest arity for which decomposability enumerates formula shapes by
/// default.
pub const DEFAULT_SHAPE_CAP: usize = 5;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },
    #[error("arity {arity} exceeds the enumeration cap {cap}; pass a larger cap explicitly if you really want to wait")]
    CapExceeded { arity: usize, cap: usize },
    #[error("malformed partition: {0}")]
    Malformed(String),
}

/// A partition of `{1..n}` in canonical form: every class sorted
/// ascending, classes ordered by least element. Equality is structural.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    arity: usize,
    classes: Vec<Vec<usize>>,
}

impl Partition {
    /// Builds a partition from raw classes, validating that the classes
    /// are nonempty, pairwise disjoint and cover `{1..arity}` exactly.
    pub fn new(arity: usize, classes: Vec<Vec<usize>>) -> Result<Self, PartitionError> {
        if arity == 0 {
            return Err(PartitionError::Malformed("arity must be positive".into()));
        }
        if classes.is_empty() {
            return Err(PartitionError::Malformed("no classes".into()));
        }
        let mut seen = vec![false; arity + 1];
        let mut canon: Vec<Vec<usize>> = Vec::with_capacity(classes.len());
        for class in &classes {
            if class.is_empty() {
                return Err(PartitionError::Malformed("empty class".into()));
            }
            let mut c = class.clone();
            c.sort_unstable();
            for &i in &c {
                if i == 0 || i > arity {
                    return Err(PartitionError::Malformed(format!(
                        "index {i} out of range 1..={arity}"
                    )));
                }
                if seen[i] {
                    return Err(PartitionError::Malformed(format!("index {i} repeated")));
                }
                seen[i] = true;
            }
            canon.push(c);
        }
        if let Some(missing) = (1..=arity).find(|&i| !seen[i]) {
            return Err(PartitionError::Malformed(format!(
                "index {missing} not covered"
            )));
        }
        canon.sort_by_key(|c| c[0]);
        Ok(Partition {
            arity,
            classes: canon,
        })
    }

    /// The one-class partition `{(1,...,n)}` (the n-ary par rule).
    pub fn one_class(arity: usize) -> Self {
        Partition::new(arity, vec![(1..=arity).collect()]).expect("one-class is well formed")
    }

    /// The discrete partition `{(1)(2)...(n)}` (the n-ary tensor rule).
    pub fn discrete(arity: usize) -> Self {
        Partition::new(arity, (1..=arity).map(|i| vec![i]).collect())
            .expect("discrete is well formed")
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Index (in canonical class order) of the class containing `i`.
    pub fn class_of(&self, i: usize) -> usize {
        self.classes
            .iter()
            .position(|c| c.contains(&i))
            .expect("index within arity")
    }

    pub fn is_one_class(&self) -> bool {
        self.classes.len() == 1
    }

    pub fn is_discrete(&self) -> bool {
        self.classes.iter().all(|c| c.len() == 1)
    }

    pub fn to_classes(&self) -> Vec<Vec<usize>> {
        self.classes.clone()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for class in &self.classes {
            write!(f, "(")?;
            for (k, i) in class.iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{i}")?;
            }
            write!(f, ")")?;
        }
        write!(f, "}}")
    }
}

/// A finite set of partitions of common arity, deduplicated and sorted.
/// May be empty (complements can be empty); a connective's rule set is
/// required to be nonempty at the catalog level.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartitionSet {
    arity: usize,
    members: Vec<Partition>,
}

impl PartitionSet {
    pub fn new(arity: usize, members: Vec<Partition>) -> Result<Self, PartitionError> {
        for p in &members {
            if p.arity() != arity {
                return Err(PartitionError::ArityMismatch {
                    left: arity,
                    right: p.arity(),
                });
            }
        }
        let mut members = members;
        members.sort();
        members.dedup();
        Ok(PartitionSet { arity, members })
    }

    pub fn singleton(p: Partition) -> Self {
        let arity = p.arity();
        PartitionSet {
            arity,
            members: vec![p],
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn members(&self) -> &[Partition] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, p: &Partition) -> bool {
        self.members.binary_search(p).is_ok()
    }
}

impl fmt::Display for PartitionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, p) in self.members.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

/// One edge of a meeting graph: index `index` joins the upper class
/// numbered `upper` to the lower class numbered `lower`. Multi-edges are
/// kept explicitly — a doubled edge is a cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeetingEdge {
    pub upper: usize,
    pub lower: usize,
    pub index: usize,
}

/// The bipartite multigraph `G(p,q)`: one upper node per class of `p`,
/// one lower node per class of `q`, one edge per index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeetingGraph {
    upper: Vec<Vec<usize>>,
    lower: Vec<Vec<usize>>,
    edges: Vec<MeetingEdge>,
}

impl MeetingGraph {
    pub fn upper(&self) -> &[Vec<usize>] {
        &self.upper
    }

    pub fn lower(&self) -> &[Vec<usize>] {
        &self.lower
    }

    pub fn edges(&self) -> &[MeetingEdge] {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.upper.len() + self.lower.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Connected and acyclic, multi-edges counting as cycles.
    pub fn is_tree(&self) -> bool {
        let n = self.node_count();
        let mut dsu = Dsu::new(n);
        for e in &self.edges {
            // upper nodes are 0..u, lower nodes follow
            if !dsu.union(e.upper, self.upper.len() + e.lower) {
                return false; // cycle
            }
        }
        dsu.components() == 1
    }

    /// Deterministic DOT rendering (upper row vs lower row).
    pub fn to_dot(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let _ = writeln!(out, "graph meeting {{");
        let _ = writeln!(out, "  rankdir=TB;");
        let _ = writeln!(out, "  node [shape=circle];");
        for (i, c) in self.upper.iter().enumerate() {
            let _ = writeln!(out, "  u{} [label=\"{}\"];", i, class_label(c));
        }
        for (i, c) in self.lower.iter().enumerate() {
            let _ = writeln!(out, "  l{} [label=\"{}\"];", i, class_label(c));
        }
        let _ = writeln!(out, "  {{ rank=source; {} }}", rank_list("u", self.upper.len()));
        let _ = writeln!(out, "  {{ rank=sink; {} }}", rank_list("l", self.lower.len()));
        for e in &self.edges {
            let _ = writeln!(out, "  u{} -- l{} [label=\"{}\"];", e.upper, e.lower, e.index);
        }
        out.push_str("}\n");
        out
    }
}

fn class_label(c: &[usize]) -> String {
    let items: Vec<String> = c.iter().map(|i| i.to_string()).collect();
    format!("({})", items.join(","))
}

fn rank_list(prefix: &str, n: usize) -> String {
    (0..n)
        .map(|i| format!("{prefix}{i};"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Minimal union-find for tree checks.
pub(crate) struct Dsu {
    parent: Vec<usize>,
    count: usize,
}

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
            count: n,
        }
    }

    pub(crate) fn find(&mut self, i: usize) -> usize {
        if self.parent[i] != i {
            let root = self.find(self.parent[i]);
            self.parent[i] = root;
        }
        self.parent[i]
    }

    /// Returns false when `i` and `j` were already connected (a cycle).
    pub(crate) fn union(&mut self, i: usize, j: usize) -> bool {
        let (ri, rj) = (self.find(i), self.find(j));
        if ri == rj {
            return false;
        }
        self.parent[ri] = rj;
        self.count -= 1;
        true
    }

    pub(crate) fn components(&self) -> usize {
        self.count
    }
}

/// Builds the meeting graph `G(p,q)`. Node order follows the canonical
/// class order of each partition.
pub fn meeting_graph(p: &Partition, q: &Partition) -> Result<MeetingGraph, PartitionError> {
    if p.arity() != q.arity() {
        return Err(PartitionError::ArityMismatch {
            left: p.arity(),
            right: q.arity(),
        });
    }
    let edges = (1..=p.arity())
        .map(|i| MeetingEdge {
            upper: p.class_of(i),
            lower: q.class_of(i),
            index: i,
        })
        .collect();
    Ok(MeetingGraph {
        upper: p.to_classes(),
        lower: q.to_classes(),
        edges,
    })
}

/// `p ⊥ q` iff the meeting graph is connected and acyclic.
pub fn orthogonal(p: &Partition, q: &Partition) -> Result<bool, PartitionError> {
    Ok(meeting_graph(p, q)?.is_tree())
}

/// All set partitions of `{1..n}` in canonical (restricted-growth-string)
/// order; the count is the Bell number B(n).
pub fn enumerate_partitions(n: usize) -> Result<Vec<Partition>, PartitionError> {
    enumerate_partitions_with_cap(n, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_partitions_with_cap(
    n: usize,
    cap: usize,
) -> Result<Vec<Partition>, PartitionError> {
    if n == 0 {
        return Err(PartitionError::Malformed("arity must be positive".into()));
    }
    if n > cap {
        return Err(PartitionError::CapExceeded { arity: n, cap });
    }
    // Restricted growth strings: a[0] = 0, a[i] <= max(a[..i]) + 1.
    let mut result = Vec::new();
    let mut rgs = vec![0usize; n];
    loop {
        result.push(rgs_to_partition(&rgs));
        // advance to the next string
        let mut i = n;
        let mut advanced = false;
        while i > 1 {
            i -= 1;
            let max_prefix = rgs[..i].iter().copied().max().unwrap_or(0);
            if rgs[i] <= max_prefix {
                rgs[i] += 1;
                for slot in rgs.iter_mut().skip(i + 1) {
                    *slot = 0;
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            break;
        }
    }
    Ok(result)
}

fn rgs_to_partition(rgs: &[usize]) -> Partition {
    let class_count = rgs.iter().copied().max().unwrap_or(0) + 1;
    let mut classes = vec![Vec::new(); class_count];
    for (i, &c) in rgs.iter().enumerate() {
        classes[c].push(i + 1);
    }
    Partition::new(rgs.len(), classes).expect("RGS yields a valid partition")
}

/// The orthogonal complement `P⊥ = { q | ∀p∈P. p ⊥ q }`, computed by
/// enumerating all partitions of the arity. May be empty.
pub fn complement(set: &PartitionSet) -> Result<PartitionSet, PartitionError> {
    complement_with_cap(set, DEFAULT_ENUMERATION_CAP)
}

pub fn complement_with_cap(
    set: &PartitionSet,
    cap: usize,
) -> Result<PartitionSet, PartitionError> {
    let all = enumerate_partitions_with_cap(set.arity(), cap)?;
    let mut members = Vec::new();
    for q in all {
        let mut ortho_to_all = true;
        for p in set.members() {
            if !orthogonal(p, &q)? {
                ortho_to_all = false;
                break;
            }
        }
        if ortho_to_all {
            members.push(q);
        }
    }
    PartitionSet::new(set.arity(), members)
}

/// True iff `P⊥ = Q` and `Q⊥ = P` — the defining property of a dual
/// connective pair.
pub fn is_connective_pair(p: &PartitionSet, q: &PartitionSet) -> Result<bool, PartitionError> {
    if p.arity() != q.arity() {
        return Err(PartitionError::ArityMismatch {
            left: p.arity(),
            right: q.arity(),
        });
    }
    Ok(complement(p)? == *q && complement(q)? == *p)
}

/// A formula shape over leaf indices: a binary tree whose internal nodes
/// are tensor or par and whose leaves are argument positions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FormulaShape {
    Leaf(usize),
    Tensor(Box<FormulaShape>, Box<FormulaShape>),
    Par(Box<FormulaShape>, Box<FormulaShape>),
}

impl FormulaShape {
    pub fn leaf(i: usize) -> Self {
        FormulaShape::Leaf(i)
    }

    pub fn tensor(l: FormulaShape, r: FormulaShape) -> Self {
        FormulaShape::Tensor(Box::new(l), Box::new(r))
    }

    pub fn par(l: FormulaShape, r: FormulaShape) -> Self {
        FormulaShape::Par(Box::new(l), Box::new(r))
    }

    /// Leaves in left-to-right order.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            FormulaShape::Leaf(i) => out.push(*i),
            FormulaShape::Tensor(l, r) | FormulaShape::Par(l, r) => {
                l.collect_leaves(out);
                r.collect_leaves(out);
            }
        }
    }

    /// Whether the in-order leaf sequence is exactly `1..=n`.
    pub fn preserves_argument_order(&self) -> bool {
        self.leaves().iter().copied().eq(1..=self.leaves().len())
    }
}

impl fmt::Display for FormulaShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormulaShape::Leaf(i) => write!(f, "{i}"),
            FormulaShape::Tensor(l, r) => write!(f, "({l} * {r})"),
            FormulaShape::Par(l, r) => write!(f, "({l} | {r})"),
        }
    }
}

/// The partition set `P_α` of a formula shape: exactly the partitions
/// `p` whose introduction rule for `α` is derivable — start with one
/// sequent per class of `p`, tensor steps join a formula from each of
/// two sequents, par steps fuse two formulas inside one sequent, and the
/// run must end with the single sequent `{α}`. This is the notion that
/// is stable under reassociation and dual to the orthogonal complement
/// (`P_{~α} = (P_α)⊥`); merging only one class per par misses
/// tensor-crossed interleavings such as `{(1,3)(2,4)}` for
/// `((1 * 2) | (3 | 4))`.
pub fn formula_partition_set(shape: &FormulaShape) -> Result<PartitionSet, PartitionError> {
    let n = check_shape_leaves(shape)?;
    let members = enumerate_partitions(n)?
        .into_iter()
        .filter(|p| rule_derivable(shape, p))
        .collect();
    PartitionSet::new(n, members)
}

fn check_shape_leaves(shape: &FormulaShape) -> Result<usize, PartitionError> {
    let mut leaves = shape.leaves();
    let n = leaves.len();
    leaves.sort_unstable();
    leaves.dedup();
    if leaves.len() != n || leaves != (1..=n).collect::<Vec<_>>() {
        return Err(PartitionError::Malformed(format!(
            "shape leaves must be exactly 1..={n} without repetition"
        )));
    }
    Ok(n)
}

/// One sequent per class of `p`, then search all tensor/par
/// interleavings for an assembly of the full shape.
pub fn rule_derivable(shape: &FormulaShape, p: &Partition) -> bool {
    let start: DeriveState = p
        .classes()
        .iter()
        .map(|class| class.iter().map(|&i| FormulaShape::leaf(i)).collect())
        .collect();
    derive(canonical_state(start), shape, &mut std::collections::BTreeSet::new())
}

type DeriveState = Vec<Vec<FormulaShape>>;

fn canonical_state(mut state: DeriveState) -> DeriveState {
    for seq in &mut state {
        seq.sort();
    }
    state.sort();
    state
}

fn derive(
    state: DeriveState,
    goal: &FormulaShape,
    seen: &mut std::collections::BTreeSet<DeriveState>,
) -> bool {
    if state.len() == 1 && state[0].len() == 1 && &state[0][0] == goal {
        return true;
    }
    if !seen.insert(state.clone()) {
        return false;
    }
    // tensor: one formula from each of two sequents
    for a in 0..state.len() {
        for b in 0..state.len() {
            if a == b {
                continue;
            }
            for fa in 0..state[a].len() {
                for fb in 0..state[b].len() {
                    let joined =
                        FormulaShape::tensor(state[a][fa].clone(), state[b][fb].clone());
                    if !occurs_in(&joined, goal) {
                        continue;
                    }
                    let mut merged: Vec<FormulaShape> = Vec::new();
                    let mut next: DeriveState = Vec::new();
                    for (i, seq) in state.iter().enumerate() {
                        if i == a || i == b {
                            for (j, f) in seq.iter().enumerate() {
                                if (i == a && j == fa) || (i == b && j == fb) {
                                    continue;
                                }
                                merged.push(f.clone());
                            }
                        } else {
                            next.push(seq.clone());
                        }
                    }
                    merged.push(joined);
                    next.push(merged);
                    if derive(canonical_state(next), goal, seen) {
                        return true;
                    }
                }
            }
        }
    }
    // par: two formulas of one sequent
    for a in 0..state.len() {
        for fa in 0..state[a].len() {
            for fb in 0..state[a].len() {
                if fa == fb {
                    continue;
                }
                let fused = FormulaShape::par(state[a][fa].clone(), state[a][fb].clone());
                if !occurs_in(&fused, goal) {
                    continue;
                }
                let mut next = state.clone();
                let seq: Vec<FormulaShape> = next[a]
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != fa && *j != fb)
                    .map(|(_, f)| f.clone())
                    .chain(std::iter::once(fused))
                    .collect();
                next[a] = seq;
                if derive(canonical_state(next), goal, seen) {
                    return true;
                }
            }
        }
    }
    false
}

fn occurs_in(sub: &FormulaShape, shape: &FormulaShape) -> bool {
    if sub == shape {
        return true;
    }
    match shape {
        FormulaShape::Leaf(_) => false,
        FormulaShape::Tensor(l, r) | FormulaShape::Par(l, r) => {
            occurs_in(sub, l) || occurs_in(sub, r)
        }
    }
}

/// Searches for a formula shape whose partition set equals `set`,
/// enumerating all leaf permutations, tree shapes and tensor/par
/// labelings. Permutations are tried identity-first, so an
/// argument-order-preserving witness is returned when one exists.
pub fn is_decomposable(set: &PartitionSet) -> Result<Option<FormulaShape>, PartitionError> {
    is_decomposable_with_cap(set, DEFAULT_SHAPE_CAP)
}

pub fn is_decomposable_with_cap(
    set: &PartitionSet,
    cap: usize,
) -> Result<Option<FormulaShape>, PartitionError> {
    use itertools::Itertools;
    let n = set.arity();
    if n > cap {
        return Err(PartitionError::CapExceeded { arity: n, cap });
    }
    let all = enumerate_partitions_with_cap(n, cap.max(DEFAULT_ENUMERATION_CAP))?;
    for perm in (1..=n).permutations(n) {
        for shape in shapes_over(&perm) {
            if shape_matches(&shape, set, &all) {
                return Ok(Some(shape));
            }
        }
    }
    Ok(None)
}

/// `P_shape == set`, checked members-first so mismatches die early.
fn shape_matches(shape: &FormulaShape, set: &PartitionSet, all: &[Partition]) -> bool {
    for p in set.members() {
        if !rule_derivable(shape, p) {
            return false;
        }
    }
    for q in all {
        if !set.contains(q) && rule_derivable(shape, q) {
            return false;
        }
    }
    true
}

/// All shapes whose in-order leaf sequence is `seq`.
fn shapes_over(seq: &[usize]) -> Vec<FormulaShape> {
    if seq.len() == 1 {
        return vec![FormulaShape::leaf(seq[0])];
    }
    let mut out = Vec::new();
    for split in 1..seq.len() {
        for l in shapes_over(&seq[..split]) {
            for r in shapes_over(&seq[split..]) {
                out.push(FormulaShape::tensor(l.clone(), r.clone()));
                out.push(FormulaShape::par(l.clone(), r));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn part(arity: usize, classes: &[&[usize]]) -> Partition {
        Partition::new(arity, classes.iter().map(|c| c.to_vec()).collect()).unwrap()
    }

    fn pset(arity: usize, members: &[&[&[usize]]]) -> PartitionSet {
        PartitionSet::new(
            arity,
            members
                .iter()
                .map(|m| part(arity, m))
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    /// The Danos-Regnier non-decomposable example and its dual.
    fn g_rules() -> PartitionSet {
        pset(4, &[&[&[1, 2], &[3, 4]], &[&[1, 3], &[2, 4]]])
    }

    fn g_dual_rules() -> PartitionSet {
        pset(4, &[&[&[1, 4], &[2], &[3]], &[&[2, 3], &[1], &[4]]])
    }

    #[test]
    fn canonical_form_is_stable() {
        let a = part(4, &[&[3, 4], &[2, 1]]);
        let b = part(4, &[&[1, 2], &[4, 3]]);
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "{(1,2)(3,4)}");
    }

    #[test]
    fn malformed_partitions_rejected() {
        assert!(Partition::new(2, vec![vec![1]]).is_err()); // 2 missing
        assert!(Partition::new(2, vec![vec![1, 1], vec![2]]).is_err());
        assert!(Partition::new(2, vec![vec![1, 2], vec![2]]).is_err());
        assert!(Partition::new(2, vec![vec![1, 2, 3]]).is_err()); // out of range
        assert!(Partition::new(2, vec![vec![1, 2], vec![]]).is_err());
    }

    #[test]
    fn meeting_graph_binary_par_vs_tensor() {
        let p = part(2, &[&[1, 2]]);
        let q = part(2, &[&[1], &[2]]);
        let g = meeting_graph(&p, &q).unwrap();
        assert_eq!(g.upper().len(), 1);
        assert_eq!(g.lower().len(), 2);
        assert_eq!(g.edge_count(), 2);
        assert!(g.is_tree());
    }

    #[test]
    fn meeting_graph_g_example() {
        let p = part(4, &[&[1, 2], &[3, 4]]);
        let q = part(4, &[&[1, 4], &[2], &[3]]);
        let g = meeting_graph(&p, &q).unwrap();
        assert_eq!(g.upper().len(), 2);
        assert_eq!(g.lower().len(), 3);
        assert_eq!(g.edge_count(), 4);
        assert!(g.is_tree());
    }

    #[test]
    fn meeting_graph_discrete_self_is_disconnected() {
        let q = part(2, &[&[1], &[2]]);
        let g = meeting_graph(&q, &q).unwrap();
        assert_eq!(g.node_count(), 4);
        assert_eq!(g.edge_count(), 2);
        assert!(!g.is_tree());
    }

    #[test]
    fn orthogonality_examples() {
        assert!(orthogonal(&part(2, &[&[1, 2]]), &part(2, &[&[1], &[2]])).unwrap());
        assert!(orthogonal(
            &part(4, &[&[1, 2], &[3, 4]]),
            &part(4, &[&[1, 4], &[2], &[3]])
        )
        .unwrap());
        // 4 nodes, 4 edges, connected: a cycle
        assert!(!orthogonal(
            &part(4, &[&[1, 2], &[3, 4]]),
            &part(4, &[&[1, 3], &[2, 4]])
        )
        .unwrap());
    }

    #[test]
    fn orthogonality_rejects_arity_mismatch() {
        assert!(orthogonal(&part(2, &[&[1, 2]]), &part(3, &[&[1, 2, 3]])).is_err());
    }

    #[test]
    fn enumeration_counts_are_bell_numbers() {
        assert_eq!(enumerate_partitions(1).unwrap().len(), 1);
        assert_eq!(enumerate_partitions(3).unwrap().len(), 5);
        assert_eq!(enumerate_partitions(4).unwrap().len(), 15);
        assert_eq!(enumerate_partitions(6).unwrap().len(), 203);
    }

    #[test]
    fn enumeration_over_cap_rejected() {
        let err = enumerate_partitions(10).unwrap_err();
        assert!(matches!(err, PartitionError::CapExceeded { arity: 10, .. }));
        assert!(enumerate_partitions_with_cap(10, 10).is_ok());
    }

    #[test]
    fn complement_of_discrete_is_one_class() {
        let p = pset(2, &[&[&[1], &[2]]]);
        let c = complement(&p).unwrap();
        assert_eq!(c, pset(2, &[&[&[1, 2]]]));
    }

    #[test]
    fn complement_reproduces_g_dual() {
        assert_eq!(complement(&g_rules()).unwrap(), g_dual_rules());
        assert_eq!(complement(&g_dual_rules()).unwrap(), g_rules());
    }

    #[test]
    fn complement_of_c3_has_two_members() {
        let p = pset(3, &[&[&[1, 2], &[3]]]);
        let c = complement(&p).unwrap();
        assert_eq!(c, pset(3, &[&[&[1, 3], &[2]], &[&[2, 3], &[1]]]));
    }

    #[test]
    fn connective_pair_examples() {
        assert!(is_connective_pair(&pset(2, &[&[&[1], &[2]]]), &pset(2, &[&[&[1, 2]]])).unwrap());
        assert!(is_connective_pair(&g_rules(), &g_dual_rules()).unwrap());
        // complement of {(1,2)(3)} has two members, so a singleton is not its dual
        assert!(!is_connective_pair(
            &pset(3, &[&[&[1, 2], &[3]]]),
            &pset(3, &[&[&[1, 3], &[2]]])
        )
        .unwrap());
    }

    #[test]
    fn formula_partition_set_examples() {
        // (1 | 2) * 3
        let s = FormulaShape::tensor(
            FormulaShape::par(FormulaShape::leaf(1), FormulaShape::leaf(2)),
            FormulaShape::leaf(3),
        );
        assert_eq!(formula_partition_set(&s).unwrap(), pset(3, &[&[&[1, 2], &[3]]]));

        // (1 * 2) | 3
        let s = FormulaShape::par(
            FormulaShape::tensor(FormulaShape::leaf(1), FormulaShape::leaf(2)),
            FormulaShape::leaf(3),
        );
        assert_eq!(
            formula_partition_set(&s).unwrap(),
            pset(3, &[&[&[1, 3], &[2]], &[&[2, 3], &[1]]])
        );

        // 1 * 2
        let s = FormulaShape::tensor(FormulaShape::leaf(1), FormulaShape::leaf(2));
        assert_eq!(formula_partition_set(&s).unwrap(), pset(2, &[&[&[1], &[2]]]));
    }

    #[test]
    fn formula_partition_set_rejects_bad_leaves() {
        let dup = FormulaShape::tensor(FormulaShape::leaf(1), FormulaShape::leaf(1));
        assert!(formula_partition_set(&dup).is_err());
        let gap = FormulaShape::tensor(FormulaShape::leaf(1), FormulaShape::leaf(3));
        assert!(formula_partition_set(&gap).is_err());
    }

    #[test]
    fn g_is_not_decomposable() {
        assert_eq!(is_decomposable(&g_rules()).unwrap(), None);
    }

    #[test]
    fn c3_dual_is_decomposable() {
        let set = pset(3, &[&[&[1, 3], &[2]], &[&[2, 3], &[1]]]);
        let w = is_decomposable(&set).unwrap().expect("decomposable");
        assert_eq!(formula_partition_set(&w).unwrap(), set);
        // identity-order witness exists: (1 * 2) | 3
        assert!(w.preserves_argument_order());
    }

    #[test]
    fn binary_tensor_is_decomposable() {
        let set = pset(2, &[&[&[1], &[2]]]);
        let w = is_decomposable(&set).unwrap().expect("decomposable");
        assert!(matches!(w, FormulaShape::Tensor(_, _)));
    }

    #[test]
    fn decomposable_over_cap_rejected() {
        let set = PartitionSet::singleton(Partition::one_class(6));
        assert!(is_decomposable(&set).is_err());
        assert!(is_decomposable_with_cap(&set, 6).unwrap().is_some());
    }

    #[test]
    fn single_class_rigidity_for_small_arities() {
        // If one-class ∈ P, every q ⊥ one-class is discrete, so a
        // biorthogonal P with nonempty complement must be {one-class}.
        // Checking both complements exhaustively establishes that.
        for n in 2..=6 {
            let par = PartitionSet::singleton(Partition::one_class(n));
            let tensor = PartitionSet::singleton(Partition::discrete(n));
            assert_eq!(complement(&par).unwrap(), tensor, "n={n}");
            assert_eq!(complement(&tensor).unwrap(), par, "n={n}");
        }
    }

    /// Independent provability oracle for P_α: the p-rule for α is
    /// derivable exactly when `⊢ α, B_1, ..., B_k` is provable, where
    /// B_c tensors the dual atoms of class c. Goes through the sequent
    /// prover, which shares no code with the derivation search.
    mod provability_oracle {
        use super::*;
        use crate::catalog::Catalog;
        use crate::formulas::{Formula, Sequent};
        use crate::sequentialize::{prove, ProveOutcome};
        use crate::structures::AxiomMode;

        fn shape_formula(shape: &FormulaShape) -> Formula {
            match shape {
                FormulaShape::Leaf(i) => Formula::atom(format!("x{i}")),
                FormulaShape::Tensor(l, r) => {
                    Formula::tensor(shape_formula(l), shape_formula(r))
                }
                FormulaShape::Par(l, r) => Formula::par(shape_formula(l), shape_formula(r)),
            }
        }

        fn class_bundle(class: &[usize]) -> Formula {
            let mut it = class.iter().map(|i| Formula::neg_atom(format!("x{i}")));
            let first = it.next().expect("classes are nonempty");
            it.fold(first, Formula::tensor)
        }

        pub fn partitions_by_provability(shape: &FormulaShape) -> PartitionSet {
            let catalog = Catalog::builtin();
            let n = shape.leaves().len();
            let alpha = shape_formula(shape);
            let members: Vec<Partition> = enumerate_partitions(n)
                .unwrap()
                .into_iter()
                .filter(|p| {
                    let mut goal = vec![alpha.clone()];
                    goal.extend(p.classes().iter().map(|c| class_bundle(c)));
                    matches!(
                        prove(&Sequent(goal), AxiomMode::Atomic, &catalog),
                        ProveOutcome::Proved(_)
                    )
                })
                .collect();
            PartitionSet::new(n, members).unwrap()
        }
    }

    #[test]
    fn formula_partition_set_matches_provability_oracle() {
        // every shape over up to 4 leaves, identity leaf order
        for n in 1..=4usize {
            let seq: Vec<usize> = (1..=n).collect();
            for shape in shapes_over(&seq) {
                let direct = formula_partition_set(&shape).unwrap();
                let oracle = provability_oracle::partitions_by_provability(&shape);
                assert_eq!(direct, oracle, "shape {shape}");
            }
        }
    }

    #[test]
    fn formula_partition_sets_are_reassociation_stable_and_dual_coherent() {
        // ((1*2)|(3|4)) includes the tensor-crossed {(1,3)(2,4)}
        let nested = FormulaShape::par(
            FormulaShape::tensor(FormulaShape::leaf(1), FormulaShape::leaf(2)),
            FormulaShape::par(FormulaShape::leaf(3), FormulaShape::leaf(4)),
        );
        let left_comb = FormulaShape::par(
            FormulaShape::par(
                FormulaShape::tensor(FormulaShape::leaf(1), FormulaShape::leaf(2)),
                FormulaShape::leaf(3),
            ),
            FormulaShape::leaf(4),
        );
        let p_nested = formula_partition_set(&nested).unwrap();
        assert_eq!(p_nested, formula_partition_set(&left_comb).unwrap());
        assert!(p_nested.contains(&Partition::new(4, vec![vec![1, 3], vec![2, 4]]).unwrap()));

        // dual coherence: P of the dual tree is the orthogonal complement
        fn dual_shape(s: &FormulaShape) -> FormulaShape {
            match s {
                FormulaShape::Leaf(i) => FormulaShape::leaf(*i),
                FormulaShape::Tensor(l, r) => {
                    FormulaShape::par(dual_shape(l), dual_shape(r))
                }
                FormulaShape::Par(l, r) => {
                    FormulaShape::tensor(dual_shape(l), dual_shape(r))
                }
            }
        }
        for shape in [&nested, &left_comb] {
            let dual = formula_partition_set(&dual_shape(shape)).unwrap();
            assert_eq!(complement(&formula_partition_set(shape).unwrap()).unwrap(), dual);
        }
    }

    fn arb_partition(n: usize) -> impl Strategy<Value = Partition> {
        // random RGS
        proptest::collection::vec(0..n, n).prop_map(move |raw| {
            let mut rgs = vec![0usize; n];
            for i in 1..n {
                let max_prefix = rgs[..i].iter().copied().max().unwrap_or(0);
                rgs[i] = raw[i] % (max_prefix + 2);
            }
            super::rgs_to_partition(&rgs)
        })
    }

    proptest! {
        #[test]
        fn orthogonality_is_symmetric(n in 1usize..6, seed in 0u64..1000) {
            let all = enumerate_partitions(n).unwrap();
            let p = &all[(seed as usize) % all.len()];
            let q = &all[(seed as usize * 7 + 3) % all.len()];
            prop_assert_eq!(orthogonal(p, q).unwrap(), orthogonal(q, p).unwrap());
        }

        #[test]
        fn tree_criterion_forces_class_counts(p in arb_partition(5), q in arb_partition(5)) {
            let g = meeting_graph(&p, &q).unwrap();
            let is_tree = g.is_tree();
            prop_assert_eq!(is_tree, orthogonal(&p, &q).unwrap());
            if is_tree {
                prop_assert_eq!(p.class_count() + q.class_count(), 5 + 1);
            }
        }

        #[test]
        fn self_orthogonality_fails_for_n_at_least_2(p in arb_partition(4)) {
            prop_assert!(!orthogonal(&p, &p).unwrap());
        }

        #[test]
        fn complement_is_extensive_and_maximal(
            n in 2usize..5,
            picks in proptest::collection::vec(0usize..100, 1..3)
        ) {
            let all = enumerate_partitions(n).unwrap();
            let members: Vec<Partition> =
                picks.iter().map(|&k| all[k % all.len()].clone()).collect();
            let set = PartitionSet::new(n, members).unwrap();
            let comp = complement(&set).unwrap();
            let bicomp = complement(&comp).unwrap();
            for p in set.members() {
                prop_assert!(bicomp.contains(p));
            }
            // maximality: everything outside the complement fails against some member
            for q in &all {
                if !comp.contains(q) {
                    let mut fails = false;
                    for p in set.members() {
                        if !orthogonal(p, q).unwrap() {
                            fails = true;
                            break;
                        }
                    }
                    prop_assert!(fails);
                }
            }
        }
    }
}
