//! Structure-level cut elimination and axiom expansion.
//!
//! The main step replaces a cut between dual connective links by one cut
//! per argument pair; the axiom step collapses a cut against an axiom
//! link onto the surviving occurrence. Normalization prefers axiom steps
//! and proceeds in canonical link order, producing a step log. Rewrites
//! build fresh structures; nothing is mutated in place.

use crate::formulas::Formula;
use crate::structures::{AxiomMode, Link, LinkId, NodeId, ProofStructure};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Redex {
    /// A cut whose premises are the conclusions of a dual pair of
    /// connective links.
    MainCut {
        cut: LinkId,
        left: LinkId,
        right: LinkId,
    },
    /// A cut with at least one premise concluded by an axiom link.
    AxiomCut { cut: LinkId, axiom: LinkId },
}

#[derive(Debug, Error)]
pub enum RewriteError {
    #[error("{0} is not a cut link")]
    NotACut(LinkId),
    #[error("redex does not match the structure: {0}")]
    BadRedex(String),
    #[error("links `{left}` and `{right}` are not a registered dual pair")]
    NotDual { left: String, right: String },
    #[error("axiom expansion needs extended mode")]
    AtomicMode,
    #[error("axiom {0} is already atomic")]
    AlreadyAtomic(LinkId),
    #[error("stuck cut {0}: premises are not concluded by an axiom or a dual link pair")]
    StuckCut(LinkId),
    #[error("normalization exceeded its step bound; the structure is malformed")]
    StepBoundExceeded,
}

/// Classifies every cut link of the structure, in link order. Axiom
/// redexes are preferred when both readings apply.
pub fn find_redexes(s: &ProofStructure) -> Vec<Redex> {
    let mut out = Vec::new();
    for (i, link) in s.links().iter().enumerate() {
        let Link::Cut { premises } = link else {
            continue;
        };
        let cut = LinkId(i);
        let left = s.concluding_link(&premises[0]);
        let right = s.concluding_link(&premises[1]);
        match (left, right) {
            (Some(l), Some(r)) => {
                let left_link = s.link(l).expect("id from enumeration");
                let right_link = s.link(r).expect("id from enumeration");
                if left_link.is_axiom() {
                    out.push(Redex::AxiomCut { cut, axiom: l });
                } else if right_link.is_axiom() {
                    out.push(Redex::AxiomCut { cut, axiom: r });
                } else if left_link.connective_name().is_some()
                    && right_link.connective_name().is_some()
                {
                    out.push(Redex::MainCut {
                        cut,
                        left: l,
                        right: r,
                    });
                }
            }
            _ => {} // dangling premise: stuck, reported by normalize
        }
    }
    out
}

/// The main cut-elimination step: a cut between a `C` link and its dual
/// `C*` link becomes one cut per argument pair.
pub fn reduce_main_cut(s: &ProofStructure, redex: &Redex) -> Result<ProofStructure, RewriteError> {
    let Redex::MainCut { cut, left, right } = *redex else {
        return Err(RewriteError::BadRedex("expected a main cut".into()));
    };
    let Some(Link::Cut { premises: cut_premises }) = s.link(cut) else {
        return Err(RewriteError::NotACut(cut));
    };
    let Some(Link::Con {
        name: left_name,
        premises: left_premises,
        conclusion: left_conclusion,
    }) = s.link(left)
    else {
        return Err(RewriteError::BadRedex(format!("{left} is not a connective link")));
    };
    let Some(Link::Con {
        name: right_name,
        premises: right_premises,
        conclusion: right_conclusion,
    }) = s.link(right)
    else {
        return Err(RewriteError::BadRedex(format!("{right} is not a connective link")));
    };
    if *left_conclusion != cut_premises[0] || *right_conclusion != cut_premises[1] {
        return Err(RewriteError::BadRedex(
            "links do not conclude the cut premises".into(),
        ));
    }
    let dual_of_left = s
        .registry()
        .get(left_name)
        .map(|c| c.dual_name.clone())
        .ok_or_else(|| RewriteError::NotDual {
            left: left_name.clone(),
            right: right_name.clone(),
        })?;
    if dual_of_left != *right_name || left_premises.len() != right_premises.len() {
        return Err(RewriteError::NotDual {
            left: left_name.clone(),
            right: right_name.clone(),
        });
    }

    let mut nodes: BTreeMap<NodeId, Formula> =
        s.nodes().map(|(id, f)| (id.clone(), f.clone())).collect();
    nodes.remove(left_conclusion);
    nodes.remove(right_conclusion);
    let mut links: Vec<Link> = Vec::with_capacity(s.links().len() - 3 + left_premises.len());
    for (i, link) in s.links().iter().enumerate() {
        if [cut, left, right].contains(&LinkId(i)) {
            continue;
        }
        links.push(link.clone());
    }
    for (a, b) in left_premises.iter().zip(right_premises) {
        links.push(Link::Cut {
            premises: [a.clone(), b.clone()],
        });
    }
    Ok(ProofStructure::from_parts(
        s.mode(),
        nodes,
        links,
        s.registry().clone(),
    ))
}

/// The axiom step: the axiom link, the cut and the two nodes between
/// them disappear; the surviving cut premise takes over the role of the
/// axiom's other conclusion.
pub fn reduce_axiom_cut(s: &ProofStructure, redex: &Redex) -> Result<ProofStructure, RewriteError> {
    let Redex::AxiomCut { cut, axiom } = *redex else {
        return Err(RewriteError::BadRedex("expected an axiom cut".into()));
    };
    let Some(Link::Cut { premises }) = s.link(cut) else {
        return Err(RewriteError::NotACut(cut));
    };
    let Some(Link::Axiom { conclusions }) = s.link(axiom) else {
        return Err(RewriteError::BadRedex(format!("{axiom} is not an axiom link")));
    };

    let mut nodes: BTreeMap<NodeId, Formula> =
        s.nodes().map(|(id, f)| (id.clone(), f.clone())).collect();
    let mut links: Vec<Link> = Vec::new();

    let both_from_axiom = conclusions.contains(&premises[0]) && conclusions.contains(&premises[1]);
    if both_from_axiom {
        // closed loop: the whole redex disappears
        nodes.remove(&conclusions[0]);
        nodes.remove(&conclusions[1]);
        for (i, link) in s.links().iter().enumerate() {
            if [cut, axiom].contains(&LinkId(i)) {
                continue;
            }
            links.push(link.clone());
        }
        return Ok(ProofStructure::from_parts(
            s.mode(),
            nodes,
            links,
            s.registry().clone(),
        ));
    }

    let consumed = if conclusions.contains(&premises[0]) {
        premises[0].clone()
    } else if conclusions.contains(&premises[1]) {
        premises[1].clone()
    } else {
        return Err(RewriteError::BadRedex(
            "axiom concludes neither cut premise".into(),
        ));
    };
    let survivor = if consumed == premises[0] {
        premises[1].clone()
    } else {
        premises[0].clone()
    };
    let partner = if consumed == conclusions[0] {
        conclusions[1].clone()
    } else {
        conclusions[0].clone()
    };

    nodes.remove(&consumed);
    nodes.remove(&partner);
    for (i, link) in s.links().iter().enumerate() {
        if [cut, axiom].contains(&LinkId(i)) {
            continue;
        }
        // the survivor takes the partner's place wherever it occurred
        let rewired = match link {
            Link::Axiom { conclusions: c } => Link::Axiom {
                conclusions: [
                    replace(&c[0], &partner, &survivor),
                    replace(&c[1], &partner, &survivor),
                ],
            },
            Link::Cut { premises: p } => Link::Cut {
                premises: [
                    replace(&p[0], &partner, &survivor),
                    replace(&p[1], &partner, &survivor),
                ],
            },
            Link::Con {
                name,
                premises: p,
                conclusion,
            } => Link::Con {
                name: name.clone(),
                premises: p.iter().map(|n| replace(n, &partner, &survivor)).collect(),
                conclusion: replace(conclusion, &partner, &survivor),
            },
        };
        links.push(rewired);
    }
    Ok(ProofStructure::from_parts(
        s.mode(),
        nodes,
        links,
        s.registry().clone(),
    ))
}

fn replace(id: &NodeId, from: &NodeId, to: &NodeId) -> NodeId {
    if id == from {
        to.clone()
    } else {
        id.clone()
    }
}

/// One layer of axiom expansion: an axiom on `(C(A1..An), C*(~A1..~An))`
/// becomes n axiom links under a `C` link and a `C*` link concluding the
/// original nodes. Callers iterate to reach atomic axioms.
pub fn expand_axiom(s: &ProofStructure, axiom: LinkId) -> Result<ProofStructure, RewriteError> {
    if s.mode() != AxiomMode::Extended {
        return Err(RewriteError::AtomicMode);
    }
    let Some(Link::Axiom { conclusions }) = s.link(axiom) else {
        return Err(RewriteError::BadRedex(format!("{axiom} is not an axiom link")));
    };
    let first = s
        .formula(&conclusions[0])
        .ok_or_else(|| RewriteError::BadRedex("axiom conclusion is missing".into()))?
        .clone();
    if first.is_literal() {
        return Err(RewriteError::AlreadyAtomic(axiom));
    }
    let name = first
        .connective_name()
        .expect("non-literal formulas are applications")
        .to_string();
    let conn = s
        .registry()
        .get(&name)
        .ok_or_else(|| RewriteError::NotDual {
            left: name.clone(),
            right: "?".into(),
        })?
        .clone();
    let args = first.argument_vec();

    let mut next = ProofStructure::from_parts(
        s.mode(),
        s.nodes().map(|(id, f)| (id.clone(), f.clone())).collect(),
        s.links()
            .iter()
            .enumerate()
            .filter(|(i, _)| LinkId(*i) != axiom)
            .map(|(_, l)| l.clone())
            .collect(),
        s.registry().clone(),
    );
    let mut upper = Vec::with_capacity(args.len());
    let mut lower = Vec::with_capacity(args.len());
    for arg in &args {
        let dual = arg
            .dual(next.registry())
            .map_err(|e| RewriteError::BadRedex(e.to_string()))?;
        let u = next.fresh_node_id("x");
        let u = next.add_node(u, arg.clone());
        let v = next.fresh_node_id("x");
        let v = next.add_node(v, dual);
        next.add_link(Link::Axiom {
            conclusions: [u.clone(), v.clone()],
        });
        upper.push(u);
        lower.push(v);
    }
    next.add_link(Link::Con {
        name: conn.name.clone(),
        premises: upper,
        conclusion: conclusions[0].clone(),
    });
    next.add_link(Link::Con {
        name: conn.dual_name.clone(),
        premises: lower,
        conclusion: conclusions[1].clone(),
    });
    Ok(next)
}

/// Iterates [`expand_axiom`] until every axiom is atomic. Returns the
/// expanded structure and the number of layers applied.
pub fn expand_all_axioms(s: &ProofStructure) -> Result<(ProofStructure, usize), RewriteError> {
    let mut current = s.clone();
    let mut steps = 0;
    loop {
        let target = current.link_ids().find(|&l| {
            matches!(current.link(l), Some(Link::Axiom { conclusions })
                if current.formula(&conclusions[0]).is_some_and(|f| !f.is_literal()))
        });
        match target {
            None => return Ok((current, steps)),
            Some(link) => {
                current = expand_axiom(&current, link)?;
                steps += 1;
            }
        }
    }
}

/// Log of one normalization run, one line per reduced redex.
#[derive(Debug, Clone, Default)]
pub struct StepLog {
    pub steps: Vec<String>,
}

impl fmt::Display for StepLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in &self.steps {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// Total connective occurrences over all node formulas plus the link
/// count: the step bound for normalization.
pub fn step_bound(s: &ProofStructure) -> usize {
    let occurrences: usize = s.nodes().map(|(_, f)| f.connective_count()).sum();
    occurrences + s.links().len()
}

/// Reduces redexes (axiom cuts first, then main cuts, in canonical link
/// order) until no cut link remains. Cut-free input is returned
/// unchanged.
pub fn normalize(s: &ProofStructure) -> Result<(ProofStructure, StepLog), RewriteError> {
    let bound = step_bound(s);
    let mut current = s.clone();
    let mut log = StepLog::default();
    loop {
        let redexes = find_redexes(&current);
        let next = redexes
            .iter()
            .find(|r| matches!(r, Redex::AxiomCut { .. }))
            .or_else(|| redexes.first());
        match next {
            Some(&Redex::AxiomCut { cut, axiom }) => {
                log.steps.push(format!("axiom-cut {cut} via {axiom}"));
                current = reduce_axiom_cut(&current, &Redex::AxiomCut { cut, axiom })?;
            }
            Some(&Redex::MainCut { cut, left, right }) => {
                log.steps
                    .push(format!("main-cut {cut} between {left} and {right}"));
                current = reduce_main_cut(&current, &Redex::MainCut { cut, left, right })?;
            }
            None => {
                if let Some(stuck) = current
                    .link_ids()
                    .find(|&l| current.link(l).is_some_and(Link::is_cut))
                {
                    return Err(RewriteError::StuckCut(stuck));
                }
                return Ok((current, log));
            }
        }
        if log.steps.len() > bound {
            return Err(RewriteError::StepBoundExceeded);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{em_structure, Catalog};
    use crate::correctness::{check_correct, CheckMode, FailureReason};
    use crate::formulas::parse_formula;
    use crate::switchings::Regime;

    fn cat() -> Catalog {
        Catalog::builtin()
    }

    /// Two trees with dual terminals joined by a cut: the `name` link
    /// over fresh axioms cut against its dual link over fresh axioms.
    fn cut_of_dual_trees(name: &str) -> ProofStructure {
        let c = cat();
        let conn = c.get(name).unwrap().clone();
        let n = conn.arity;
        let mut s = ProofStructure::new(AxiomMode::Atomic, c);
        let mut left_premises = Vec::new();
        let mut right_premises = Vec::new();
        for i in 1..=n {
            let a = s.add_node(NodeId::new(format!("a{i}")), Formula::atom(format!("A{i}")));
            let a2 = s.add_node(
                NodeId::new(format!("a{i}'")),
                Formula::neg_atom(format!("A{i}")),
            );
            s.add_link(Link::Axiom {
                conclusions: [a.clone(), a2.clone()],
            });
            let b = s.add_node(
                NodeId::new(format!("b{i}")),
                Formula::neg_atom(format!("A{i}")),
            );
            let b2 = s.add_node(NodeId::new(format!("b{i}'")), Formula::atom(format!("A{i}")));
            s.add_link(Link::Axiom {
                conclusions: [b.clone(), b2.clone()],
            });
            left_premises.push(a);
            right_premises.push(b);
        }
        let pos = Formula::apply(
            conn.name.clone(),
            (1..=n).map(|i| Formula::atom(format!("A{i}"))).collect(),
        );
        let neg = Formula::apply(
            conn.dual_name.clone(),
            (1..=n).map(|i| Formula::neg_atom(format!("A{i}"))).collect(),
        );
        let cp = s.add_node(NodeId::new("c1"), pos);
        let cn = s.add_node(NodeId::new("c2"), neg);
        s.add_link(Link::Con {
            name: conn.name.clone(),
            premises: left_premises,
            conclusion: cp.clone(),
        });
        s.add_link(Link::Con {
            name: conn.dual_name.clone(),
            premises: right_premises,
            conclusion: cn.clone(),
        });
        s.add_link(Link::Cut {
            premises: [cp, cn],
        });
        assert!(s.validate().is_empty());
        s
    }

    #[test]
    fn main_cut_on_binary_pair() {
        let s = cut_of_dual_trees("tensor2");
        let redexes = find_redexes(&s);
        assert_eq!(redexes.len(), 1);
        let reduced = reduce_main_cut(&s, &redexes[0]).unwrap();
        assert!(reduced.validate().is_empty());
        assert_eq!(reduced.node_count(), s.node_count() - 2);
        assert_eq!(
            reduced.links().iter().filter(|l| l.is_cut()).count(),
            2
        );
        assert_eq!(reduced.terminal_formulas(), s.terminal_formulas());
    }

    #[test]
    fn main_cut_on_g_pair_makes_four_cuts() {
        let s = cut_of_dual_trees("G");
        let redexes = find_redexes(&s);
        let reduced = reduce_main_cut(&s, &redexes[0]).unwrap();
        assert!(reduced.validate().is_empty());
        assert_eq!(reduced.node_count(), s.node_count() - 2);
        assert_eq!(reduced.links().iter().filter(|l| l.is_cut()).count(), 4);
        // link arithmetic: -1 cut -2 links +n cuts
        assert_eq!(reduced.links().len(), s.links().len() - 3 + 4);
    }

    #[test]
    fn main_cut_requires_a_registered_dual_pair() {
        // pair C3 against C3 itself through a bogus registry entry
        let mut registry = cat();
        registry
            .register_file(r#"{"name":"B3","arity":3,"partitions":[[[1,2],[3]]],"dualName":"B3x"}"#)
            .unwrap();
        let mut s = ProofStructure::new(AxiomMode::Extended, registry.clone());
        let f = parse_formula("C3(A,B,C)", &registry).unwrap();
        let g = parse_formula("C3*(~A,~B,~C)", &registry).unwrap();
        let a = s.add_node(NodeId::new("a"), f.clone());
        let b = s.add_node(NodeId::new("b"), g.clone());
        s.add_link(Link::Axiom {
            conclusions: [a.clone(), b.clone()],
        });
        let c2 = s.add_node(NodeId::new("c"), g.dual(&registry).unwrap());
        let d = s.add_node(NodeId::new("d"), f.dual(&registry).unwrap());
        s.add_link(Link::Axiom {
            conclusions: [c2.clone(), d.clone()],
        });
        s.add_link(Link::Cut {
            premises: [a, d],
        });
        // the cut joins two axiom conclusions: an axiom redex, fine; but
        // forcing a main-cut reading must fail
        let bogus = Redex::MainCut {
            cut: LinkId(2),
            left: LinkId(0),
            right: LinkId(1),
        };
        assert!(reduce_main_cut(&s, &bogus).is_err());
    }

    #[test]
    fn axiom_cut_collapses_to_the_survivor() {
        let c = cat();
        let mut s = ProofStructure::new(AxiomMode::Atomic, c);
        // axiom1 (A, ~A); axiom2 (A, ~A); cut between ~A of axiom1 and A of axiom2
        let a1 = s.add_node(NodeId::new("a1"), Formula::atom("A"));
        let n1 = s.add_node(NodeId::new("n1"), Formula::neg_atom("A"));
        s.add_link(Link::Axiom {
            conclusions: [a1.clone(), n1.clone()],
        });
        let a2 = s.add_node(NodeId::new("a2"), Formula::atom("A"));
        let n2 = s.add_node(NodeId::new("n2"), Formula::neg_atom("A"));
        s.add_link(Link::Axiom {
            conclusions: [a2.clone(), n2.clone()],
        });
        s.add_link(Link::Cut {
            premises: [n1, a2],
        });
        assert!(s.validate().is_empty());
        let redexes = find_redexes(&s);
        let reduced = reduce_axiom_cut(&s, &redexes[0]).unwrap();
        assert!(reduced.validate().is_empty());
        assert_eq!(reduced.links().len(), s.links().len() - 2);
        assert_eq!(reduced.node_count(), 2);
        assert_eq!(reduced.terminal_formulas(), s.terminal_formulas());
        // a single axiom remains
        assert!(reduced.links().iter().all(Link::is_axiom));
    }

    #[test]
    fn expand_axiom_one_layer() {
        let c = cat();
        let em = em_structure("G", AxiomMode::Extended, &c).unwrap();
        let axiom = em.link_ids().next().unwrap();
        let expanded = expand_axiom(&em, axiom).unwrap();
        assert!(expanded.validate().is_empty());
        assert_eq!(
            expanded.links().iter().filter(|l| l.is_axiom()).count(),
            4
        );
        assert_eq!(
            expanded
                .links()
                .iter()
                .filter(|l| l.connective_name().is_some())
                .count(),
            2
        );
        assert_eq!(expanded.terminal_formulas(), em.terminal_formulas());

        // binary instance
        let mut s = ProofStructure::new(AxiomMode::Extended, c.clone());
        let f = parse_formula("(A * B)", &c).unwrap();
        let g = parse_formula("(~A | ~B)", &c).unwrap();
        let a = s.add_node(NodeId::new("a"), f);
        let b = s.add_node(NodeId::new("b"), g);
        s.add_link(Link::Axiom {
            conclusions: [a, b],
        });
        let expanded = expand_axiom(&s, LinkId(0)).unwrap();
        assert!(expanded.validate().is_empty());
        assert_eq!(expanded.links().iter().filter(|l| l.is_axiom()).count(), 2);
    }

    #[test]
    fn expand_axiom_rejects_atomic_cases() {
        let c = cat();
        let em_atomic = em_structure("G", AxiomMode::Atomic, &c).unwrap();
        let axiom = em_atomic
            .link_ids()
            .find(|&l| em_atomic.link(l).unwrap().is_axiom())
            .unwrap();
        assert!(matches!(
            expand_axiom(&em_atomic, axiom),
            Err(RewriteError::AtomicMode)
        ));

        let mut s = ProofStructure::new(AxiomMode::Extended, c);
        let a = s.add_node(NodeId::new("a"), Formula::atom("A"));
        let b = s.add_node(NodeId::new("b"), Formula::neg_atom("A"));
        s.add_link(Link::Axiom {
            conclusions: [a, b],
        });
        assert!(matches!(
            expand_axiom(&s, LinkId(0)),
            Err(RewriteError::AlreadyAtomic(_))
        ));
    }

    #[test]
    fn expand_all_reaches_atomic_axioms() {
        let c = cat();
        let mut s = ProofStructure::new(AxiomMode::Extended, c.clone());
        let f = parse_formula("G((A*B),C,D,(E|F0))", &c).unwrap();
        let g = f.dual(&c).unwrap();
        let a = s.add_node(NodeId::new("a"), f);
        let b = s.add_node(NodeId::new("b"), g);
        s.add_link(Link::Axiom {
            conclusions: [a, b],
        });
        let (expanded, steps) = expand_all_axioms(&s).unwrap();
        assert!(steps >= 3);
        assert!(expanded.validate().is_empty());
        for link in expanded.links() {
            if let Link::Axiom { conclusions } = link {
                assert!(expanded.formula(&conclusions[0]).unwrap().is_literal());
            }
        }
    }

    #[test]
    fn normalize_em_style_cut() {
        let s = cut_of_dual_trees("G");
        let bound = step_bound(&s);
        let (normal, log) = normalize(&s).unwrap();
        assert!(log.steps.len() <= bound);
        assert!(normal.validate().is_empty());
        assert!(normal.links().iter().all(|l| !l.is_cut()));
        assert_eq!(normal.terminal_formulas(), s.terminal_formulas());
    }

    #[test]
    fn normalize_is_identity_on_cut_free_input() {
        let em = em_structure("C3", AxiomMode::Atomic, &cat()).unwrap();
        let (normal, log) = normalize(&em).unwrap();
        assert_eq!(normal, em);
        assert!(log.steps.is_empty());
    }

    #[test]
    fn reduce_rejects_non_dual_link_pairs() {
        let c = cat();
        // a cut wired between conclusions of two tensor2 links; the
        // labels are not a dual pair, so the main step must refuse
        let mut s = ProofStructure::new(AxiomMode::Atomic, c.clone());
        let mut conclusions = Vec::new();
        for (side, polarity) in [("a", true), ("b", false)] {
            let mut premises = Vec::new();
            for i in 1..=2 {
                let f = if polarity {
                    Formula::atom(format!("A{i}"))
                } else {
                    Formula::neg_atom(format!("A{i}"))
                };
                let g = f.dual(&c).unwrap();
                let u = s.add_node(NodeId::new(format!("{side}{i}")), f);
                let v = s.add_node(NodeId::new(format!("{side}{i}'")), g);
                s.add_link(Link::Axiom {
                    conclusions: [u.clone(), v],
                });
                premises.push(u);
            }
            let concl = Formula::tensor(
                s.formula(&premises[0]).unwrap().clone(),
                s.formula(&premises[1]).unwrap().clone(),
            );
            let cnode = s.add_node(NodeId::new(format!("{side}c")), concl);
            s.add_link(Link::Con {
                name: "tensor2".into(),
                premises,
                conclusion: cnode.clone(),
            });
            conclusions.push(cnode);
        }
        s.add_link(Link::Cut {
            premises: [conclusions[0].clone(), conclusions[1].clone()],
        });
        let bogus = Redex::MainCut {
            cut: LinkId(6),
            left: LinkId(2),
            right: LinkId(5),
        };
        assert!(matches!(
            reduce_main_cut(&s, &bogus),
            Err(RewriteError::NotDual { .. })
        ));
    }

    /// The operational face of the orthogonality lemma: a cut reduces to
    /// a correct structure exactly when the premise wirings of the two
    /// sides realize orthogonal partitions. A par-over-one-axiom tree
    /// against a tensor-over-two-axioms tree (one-class vs discrete,
    /// orthogonal) normalizes to a correct net; discrete against
    /// discrete (self-pairing, not orthogonal) normalizes to a
    /// disconnected one.
    #[test]
    fn orthogonal_wiring_normalizes_correct_and_non_orthogonal_does_not() {
        let c = cat();
        // par side: one axiom feeds both premises
        let mut s = ProofStructure::new(AxiomMode::Atomic, c.clone());
        let a1 = s.add_node(NodeId::new("a1"), Formula::atom("A"));
        let a2 = s.add_node(NodeId::new("a2"), Formula::neg_atom("A"));
        s.add_link(Link::Axiom {
            conclusions: [a1.clone(), a2.clone()],
        });
        let par_c = s.add_node(
            NodeId::new("pc"),
            Formula::par(Formula::atom("A"), Formula::neg_atom("A")),
        );
        s.add_link(Link::Con {
            name: "par2".into(),
            premises: vec![a1, a2],
            conclusion: par_c.clone(),
        });
        // tensor side: two axioms
        let b1 = s.add_node(NodeId::new("b1"), Formula::neg_atom("A"));
        let b1p = s.add_node(NodeId::new("b1'"), Formula::atom("A"));
        s.add_link(Link::Axiom {
            conclusions: [b1.clone(), b1p],
        });
        let b2 = s.add_node(NodeId::new("b2"), Formula::atom("A"));
        let b2p = s.add_node(NodeId::new("b2'"), Formula::neg_atom("A"));
        s.add_link(Link::Axiom {
            conclusions: [b2.clone(), b2p],
        });
        let tensor_c = s.add_node(
            NodeId::new("tc"),
            Formula::tensor(Formula::neg_atom("A"), Formula::atom("A")),
        );
        s.add_link(Link::Con {
            name: "tensor2".into(),
            premises: vec![b1, b2],
            conclusion: tensor_c.clone(),
        });
        s.add_link(Link::Cut {
            premises: [par_c, tensor_c],
        });
        assert!(s.validate().is_empty());
        let before = check_correct(&s, Regime::Partition, CheckMode::Exhaustive).unwrap();
        assert!(before.correct);
        let (normal, _) = normalize(&s).unwrap();
        assert!(normal.validate().is_empty());
        let after = check_correct(&normal, Regime::Partition, CheckMode::Exhaustive).unwrap();
        assert!(after.correct);
        // a single axiom remains
        assert_eq!(normal.links().len(), 1);

        // discrete-vs-discrete wiring: every premise from its own axiom
        let s = cut_of_dual_trees("tensor2");
        let (normal, _) = normalize(&s).unwrap();
        let verdict = check_correct(&normal, Regime::Partition, CheckMode::Exhaustive).unwrap();
        assert!(!verdict.correct);
        assert!(matches!(
            verdict.counterexample.unwrap().reason,
            FailureReason::Disconnected { .. }
        ));
    }
}
