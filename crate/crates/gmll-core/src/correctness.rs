//! Correctness checking and splitting-link detection.
//!
//! A structure is correct for a regime when every switching induces a
//! connected acyclic graph. Checking is exhaustive by definition; the
//! sampled mode can refute but never certify.

use crate::partitions::{Dsu, Partition};
use crate::structures::{Link, LinkId, NodeId, ProofStructure};
use crate::switchings::{
    correctness_graph, enumerate_switchings, CorrectnessGraph, Regime, RegimeError, Switching,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

/// Why a correctness graph fails the tree condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum FailureReason {
    Cyclic { nodes: Vec<String> },
    Disconnected { component_sizes: Vec<usize> },
}

/// Result of the tree check on one graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphCheck {
    pub connected_acyclic: bool,
    pub failure: Option<FailureReason>,
}

/// Union-find tree check: acyclic iff no edge joins two already-united
/// vertices, connected iff one component remains. The witness is the
/// cycle's vertex labels or the component sizes.
pub fn is_connected_acyclic(g: &CorrectnessGraph) -> GraphCheck {
    let n = g.vertex_count();
    let mut dsu = Dsu::new(n);
    for (k, &(a, b)) in g.edges().iter().enumerate() {
        if !dsu.union(a, b) {
            return GraphCheck {
                connected_acyclic: false,
                failure: Some(FailureReason::Cyclic {
                    nodes: cycle_nodes(g, k, a, b),
                }),
            };
        }
    }
    if dsu.components() > 1 {
        let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
        for v in 0..n {
            *sizes.entry(dsu.find(v)).or_insert(0) += 1;
        }
        let mut component_sizes: Vec<usize> = sizes.into_values().collect();
        component_sizes.sort_unstable_by(|a, b| b.cmp(a));
        return GraphCheck {
            connected_acyclic: false,
            failure: Some(FailureReason::Disconnected { component_sizes }),
        };
    }
    GraphCheck {
        connected_acyclic: true,
        failure: None,
    }
}

/// Path from `a` to `b` through the first `upto` edges, plus the closing
/// edge: the witnessed cycle.
fn cycle_nodes(g: &CorrectnessGraph, upto: usize, a: usize, b: usize) -> Vec<String> {
    let n = g.vertex_count();
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(x, y) in &g.edges()[..upto] {
        adjacency[x].push(y);
        adjacency[y].push(x);
    }
    let mut prev: Vec<Option<usize>> = vec![None; n];
    let mut queue = std::collections::VecDeque::new();
    prev[a] = Some(a);
    queue.push_back(a);
    while let Some(v) = queue.pop_front() {
        if v == b {
            break;
        }
        for &w in &adjacency[v] {
            if prev[w].is_none() {
                prev[w] = Some(v);
                queue.push_back(w);
            }
        }
    }
    let mut path = vec![b];
    let mut v = b;
    while prev[v] != Some(v) {
        v = prev[v].expect("a and b are united, so a path exists");
        path.push(v);
    }
    path.reverse();
    path.into_iter().map(|v| g.label(v)).collect()
}

#[derive(Debug, Clone, Copy)]
pub enum CheckMode {
    Exhaustive,
    /// Draws `count` switchings uniformly; refutes but never certifies.
    Sample { count: u64, seed: u64 },
}

/// A failed switching together with its failure.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub switching: Switching,
    pub reason: FailureReason,
}

/// Correctness verdict. In exhaustive mode `correct` holds exactly when
/// no counterexample exists and every switching was checked; in sampled
/// mode `correct` only means no counterexample was drawn.
#[derive(Debug, Clone)]
pub struct Verdict {
    pub correct: bool,
    pub switchings_checked: u64,
    pub total_switchings: u128,
    pub sampled: bool,
    pub regime: Regime,
    pub counterexample: Option<Counterexample>,
}

impl Verdict {
    pub fn to_json_value(&self) -> serde_json::Value {
        use serde_json::json;
        let counterexample = self.counterexample.as_ref().map(|ce| {
            json!({
                "switching": ce.switching.to_json_value(),
                "reason": serde_json::to_value(&ce.reason).expect("reasons serialize"),
            })
        });
        json!({
            "regime": self.regime.token(),
            "correct": self.correct,
            "switchingsChecked": self.switchings_checked,
            "totalSwitchings": self.total_switchings.to_string(),
            "sampled": self.sampled,
            "counterexample": counterexample,
        })
    }
}

/// Quantifies the tree condition over switchings, early-exiting on the
/// first counterexample in canonical enumeration order.
pub fn check_correct(
    s: &ProofStructure,
    regime: Regime,
    mode: CheckMode,
) -> Result<Verdict, RegimeError> {
    let iter = enumerate_switchings(s, regime)?;
    let total = iter.total()?;
    match mode {
        CheckMode::Exhaustive => {
            let mut checked: u64 = 0;
            for switching in enumerate_switchings(s, regime)? {
                checked += 1;
                let graph = correctness_graph(s, &switching)?;
                let check = is_connected_acyclic(&graph);
                if let Some(reason) = check.failure {
                    return Ok(Verdict {
                        correct: false,
                        switchings_checked: checked,
                        total_switchings: total,
                        sampled: false,
                        regime,
                        counterexample: Some(Counterexample { switching, reason }),
                    });
                }
            }
            Ok(Verdict {
                correct: true,
                switchings_checked: checked,
                total_switchings: total,
                sampled: false,
                regime,
                counterexample: None,
            })
        }
        CheckMode::Sample { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut checked: u64 = 0;
            for _ in 0..count {
                checked += 1;
                let index = if total <= 1 {
                    0
                } else if let Ok(small) = u64::try_from(total) {
                    rng.gen_range(0..small) as u128
                } else {
                    rng.gen_range(0..u64::MAX) as u128 % total
                };
                let switching = iter.at(index);
                let graph = correctness_graph(s, &switching)?;
                let check = is_connected_acyclic(&graph);
                if let Some(reason) = check.failure {
                    return Ok(Verdict {
                        correct: false,
                        switchings_checked: checked,
                        total_switchings: total,
                        sampled: true,
                        regime,
                        counterexample: Some(Counterexample { switching, reason }),
                    });
                }
            }
            Ok(Verdict {
                correct: true,
                switchings_checked: checked,
                total_switchings: total,
                sampled: true,
                regime,
                counterexample: None,
            })
        }
    }
}

/// A terminal link whose removal separates the structure into one
/// component per class of one of its partitions.
#[derive(Debug, Clone)]
pub struct SplitReport {
    pub link: LinkId,
    /// The partition matched by the component-induced premise grouping;
    /// cut links use the fixed `{(1)(2)}`.
    pub partition: Partition,
    /// Index into the connective's canonical rule list; `None` for cuts.
    pub rule_index: Option<usize>,
    /// One node set per class, in class order.
    pub components: Vec<BTreeSet<NodeId>>,
}

pub(crate) struct SplitInfo {
    pub link: usize,
    pub partition: Partition,
    pub rule_index: Option<usize>,
    /// Link indices per class, in class order, each sorted.
    pub component_links: Vec<Vec<usize>>,
    /// Node sets per class, in class order.
    pub component_nodes: Vec<BTreeSet<NodeId>>,
}

/// Searches the terminal con/cut links of the sub-structure in id order
/// for a splitting one: removing the link (and its conclusion node, for
/// con links) must leave exactly one component per class of some rule
/// partition, each containing exactly that class's premises. Single-class
/// groupings never split.
pub(crate) fn find_split(s: &ProofStructure, sub: &[usize]) -> Option<SplitInfo> {
    let mut nodes: BTreeSet<&NodeId> = BTreeSet::new();
    let mut premised: BTreeSet<&NodeId> = BTreeSet::new();
    for &li in sub {
        let link = &s.links()[li];
        for n in link.premises() {
            nodes.insert(n);
            premised.insert(n);
        }
        for n in link.conclusions() {
            nodes.insert(n);
        }
    }

    'candidates: for &li in sub {
        let link = &s.links()[li];
        let (premises, removed_node, conn): (&[NodeId], Option<&NodeId>, Option<&str>) =
            match link {
                Link::Cut { premises } => (premises, None, None),
                Link::Con {
                    name,
                    premises,
                    conclusion,
                } => {
                    if premised.contains(conclusion) {
                        continue; // not terminal
                    }
                    (premises, Some(conclusion), Some(name))
                }
                Link::Axiom { .. } => continue,
            };

        // components of the sub-structure without this link
        let universe: Vec<&NodeId> = nodes
            .iter()
            .copied()
            .filter(|n| removed_node != Some(*n))
            .collect();
        let index: BTreeMap<&NodeId, usize> = universe
            .iter()
            .enumerate()
            .map(|(i, n)| (*n, i))
            .collect();
        let mut dsu = Dsu::new(universe.len());
        for &lj in sub {
            if lj == li {
                continue;
            }
            let other = &s.links()[lj];
            let mut ids = other.premises().iter().chain(other.conclusions());
            if let Some(first) = ids.next() {
                let fi = index[first];
                for n in ids {
                    dsu.union(fi, index[n]);
                }
            }
        }

        // premise grouping by component
        let mut groups: Vec<(usize, Vec<usize>)> = Vec::new(); // (root, arg indices)
        for (arg, premise) in premises.iter().enumerate() {
            let root = dsu.find(index[premise]);
            match groups.iter_mut().find(|(r, _)| *r == root) {
                Some((_, members)) => members.push(arg + 1),
                None => groups.push((root, vec![arg + 1])),
            }
        }
        if groups.len() < 2 {
            continue;
        }
        // bijectivity: every component must contain some premise
        let mut roots: BTreeSet<usize> = BTreeSet::new();
        for i in 0..universe.len() {
            roots.insert(dsu.find(i));
        }
        if roots.len() != groups.len() {
            continue;
        }
        let grouping = Partition::new(
            premises.len(),
            groups.iter().map(|(_, members)| members.clone()).collect(),
        )
        .expect("premise grouping is a partition");
        let rule_index = match conn {
            None => {
                if grouping != Partition::discrete(2) {
                    continue 'candidates;
                }
                None
            }
            Some(name) => {
                let Some(conn) = s.registry().get(name) else {
                    continue 'candidates;
                };
                match conn.rules.members().iter().position(|p| *p == grouping) {
                    Some(idx) => Some(idx),
                    None => continue 'candidates,
                }
            }
        };

        // assemble per-class components in class order
        let class_roots: Vec<usize> = grouping
            .classes()
            .iter()
            .map(|class| dsu.find(index[&premises[class[0] - 1]]))
            .collect();
        let mut component_links: Vec<Vec<usize>> = vec![Vec::new(); class_roots.len()];
        for &lj in sub {
            if lj == li {
                continue;
            }
            let other = &s.links()[lj];
            let witness = other
                .premises()
                .iter()
                .chain(other.conclusions())
                .next()
                .expect("links touch at least one node");
            let root = dsu.find(index[witness]);
            let class = class_roots
                .iter()
                .position(|&r| r == root)
                .expect("bijectivity matched components to classes");
            component_links[class].push(lj);
        }
        let mut component_nodes: Vec<BTreeSet<NodeId>> = vec![BTreeSet::new(); class_roots.len()];
        for (i, n) in universe.iter().enumerate() {
            let root = dsu.find(i);
            if let Some(class) = class_roots.iter().position(|&r| r == root) {
                component_nodes[class].insert((*n).clone());
            }
        }
        return Some(SplitInfo {
            link: li,
            partition: grouping,
            rule_index,
            component_links,
            component_nodes,
        });
    }
    None
}

/// Splitting-link search over the whole structure.
pub fn find_splitting_terminal_link(s: &ProofStructure) -> Option<SplitReport> {
    let sub: Vec<usize> = (0..s.links().len()).collect();
    find_split(s, &sub).map(|info| SplitReport {
        link: LinkId(info.link),
        partition: info.partition,
        rule_index: info.rule_index,
        components: info.component_nodes,
    })
}
