//! Sequent proofs and their two-way connection to proof structures.
//!
//! A proof node records its conclusion sequent, its rule, and — for cut
//! and connective rules — which occurrences of the premise sequents are
//! active. The occurrence bookkeeping makes desequentialization of
//! sequents with duplicate formulas deterministic; the proof file format
//! omits it and the loader re-resolves occurrences.
//!
//! Sequentialization follows the peel/split recursion: terminal par-like
//! links are removed greedily (sound because a valid rule set containing
//! the one-class partition is exactly `{one-class}`), and otherwise some
//! terminal link must split the structure along one of its partitions.

use crate::catalog::Catalog;
use crate::correctness::find_split;
use crate::formulas::{parse_formula, Formula, Sequent};
use crate::structures::{AxiomMode, Link, NodeId, ProofStructure, Violation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    /// Conclusion is `[f, ~f]`.
    Axiom,
    /// Two premises; `left_active`/`right_active` index the dual pair in
    /// the premises' conclusion sequents.
    Cut {
        left_active: usize,
        right_active: usize,
    },
    /// A connective introduction. `partition` indexes the connective's
    /// canonical rule list; premise i corresponds to class i of that
    /// partition; `actives[i][k]` locates the k-th class member's
    /// argument formula inside premise i's conclusion; `principal`
    /// locates the introduced formula in this node's conclusion.
    Con {
        name: String,
        partition: usize,
        principal: usize,
        actives: Vec<Vec<usize>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequentProof {
    pub conclusion: Sequent,
    pub rule: Rule,
    pub premises: Vec<SequentProof>,
}

impl SequentProof {
    pub fn axiom(f: Formula, dual: Formula) -> Self {
        SequentProof {
            conclusion: Sequent(vec![f, dual]),
            rule: Rule::Axiom,
            premises: vec![],
        }
    }

    /// Total number of rule nodes.
    pub fn rule_count(&self) -> usize {
        1 + self.premises.iter().map(SequentProof::rule_count).sum::<usize>()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ProofFile::from_proof(self)).expect("proofs serialize")
    }

    /// Loads a proof file, re-resolving active occurrences.
    pub fn from_json(json: &str, catalog: &Catalog) -> Result<SequentProof, ProofError> {
        let file: ProofFile =
            serde_json::from_str(json).map_err(|e| ProofError::Format(e.to_string()))?;
        let proof = file.into_proof(catalog)?;
        validate_proof(&proof, AxiomMode::Extended, catalog)?;
        Ok(proof)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProofError {
    #[error("axiom conclusion must be a dual pair, got `{0}`")]
    BadAxiom(String),
    #[error("axiom on non-atomic `{0}` in atomic mode")]
    NonAtomicAxiom(String),
    #[error("unknown connective `{0}`")]
    UnknownConnective(String),
    #[error("rule `{rule}`: {message}")]
    BadRule { rule: String, message: String },
    #[error("contexts do not add up at `{0}`")]
    ContextMismatch(String),
    #[error("bad proof file: {0}")]
    Format(String),
}

fn multiset_minus(seq: &[Formula], skip: &[usize]) -> Vec<Formula> {
    seq.iter()
        .enumerate()
        .filter(|(i, _)| !skip.contains(i))
        .map(|(_, f)| f.clone())
        .collect()
}

fn sorted(mut v: Vec<Formula>) -> Vec<Formula> {
    v.sort();
    v
}

/// Checks that every node instantiates its rule schema exactly, with
/// multiset arithmetic on the contexts.
pub fn validate_proof(
    proof: &SequentProof,
    mode: AxiomMode,
    catalog: &Catalog,
) -> Result<(), ProofError> {
    let conclusion = &proof.conclusion.0;
    match &proof.rule {
        Rule::Axiom => {
            if !proof.premises.is_empty() {
                return Err(ProofError::BadRule {
                    rule: "axiom".into(),
                    message: "axiom takes no premises".into(),
                });
            }
            if conclusion.len() != 2 {
                return Err(ProofError::BadAxiom(proof.conclusion.to_string()));
            }
            let dual = conclusion[0]
                .dual(catalog)
                .map_err(|e| ProofError::UnknownConnective(e.to_string()))?;
            if dual != conclusion[1] {
                return Err(ProofError::BadAxiom(proof.conclusion.to_string()));
            }
            if mode == AxiomMode::Atomic && !conclusion[0].is_literal() {
                return Err(ProofError::NonAtomicAxiom(conclusion[0].to_string()));
            }
            Ok(())
        }
        Rule::Cut {
            left_active,
            right_active,
        } => {
            if proof.premises.len() != 2 {
                return Err(ProofError::BadRule {
                    rule: "cut".into(),
                    message: "cut takes two premises".into(),
                });
            }
            let left = &proof.premises[0].conclusion.0;
            let right = &proof.premises[1].conclusion.0;
            if *left_active >= left.len() || *right_active >= right.len() {
                return Err(ProofError::BadRule {
                    rule: "cut".into(),
                    message: "active index out of range".into(),
                });
            }
            let dual = left[*left_active]
                .dual(catalog)
                .map_err(|e| ProofError::UnknownConnective(e.to_string()))?;
            if dual != right[*right_active] {
                return Err(ProofError::BadRule {
                    rule: "cut".into(),
                    message: format!(
                        "cut formulas {} and {} are not dual",
                        left[*left_active], right[*right_active]
                    ),
                });
            }
            let mut contexts = multiset_minus(left, &[*left_active]);
            contexts.extend(multiset_minus(right, &[*right_active]));
            if sorted(contexts) != proof.conclusion.sorted() {
                return Err(ProofError::ContextMismatch(proof.conclusion.to_string()));
            }
            for premise in &proof.premises {
                validate_proof(premise, mode, catalog)?;
            }
            Ok(())
        }
        Rule::Con {
            name,
            partition,
            principal,
            actives,
        } => {
            let conn = catalog
                .get(name)
                .ok_or_else(|| ProofError::UnknownConnective(name.clone()))?;
            let bad = |message: String| ProofError::BadRule {
                rule: name.clone(),
                message,
            };
            let p = conn
                .rules
                .members()
                .get(*partition)
                .ok_or_else(|| bad(format!("no partition #{partition}")))?;
            if proof.premises.len() != p.class_count() || actives.len() != p.class_count() {
                return Err(bad(format!(
                    "partition {p} needs {} premises",
                    p.class_count()
                )));
            }
            let principal_formula = conclusion
                .get(*principal)
                .ok_or_else(|| bad("principal index out of range".into()))?;
            if principal_formula.connective_name() != Some(name.as_str()) {
                return Err(bad(format!(
                    "principal formula {principal_formula} is not a `{name}` application"
                )));
            }
            let args = principal_formula.argument_vec();
            if args.len() != conn.arity {
                return Err(bad("principal arity mismatch".into()));
            }
            let mut contexts: Vec<Formula> = Vec::new();
            for (ci, class) in p.classes().iter().enumerate() {
                let premise = &proof.premises[ci].conclusion.0;
                let idx = &actives[ci];
                if idx.len() != class.len() {
                    return Err(bad(format!(
                        "class {ci} of {p} selects {} formulas, got {}",
                        class.len(),
                        idx.len()
                    )));
                }
                let mut seen = BTreeSet::new();
                for (k, &j) in class.iter().enumerate() {
                    let pos = idx[k];
                    if pos >= premise.len() || !seen.insert(pos) {
                        return Err(bad(format!("bad active index {pos} in premise {ci}")));
                    }
                    if premise[pos] != args[j - 1] {
                        return Err(bad(format!(
                            "premise {ci} position {pos} holds {}, expected argument {} ({})",
                            premise[pos],
                            j,
                            args[j - 1]
                        )));
                    }
                }
                contexts.extend(multiset_minus(premise, idx));
            }
            contexts.push(principal_formula.clone());
            if sorted(contexts) != proof.conclusion.sorted() {
                return Err(ProofError::ContextMismatch(proof.conclusion.to_string()));
            }
            for premise in &proof.premises {
                validate_proof(premise, mode, catalog)?;
            }
            Ok(())
        }
    }
}

/// Boolean view of [`validate_proof`].
pub fn check_proof(proof: &SequentProof, mode: AxiomMode, catalog: &Catalog) -> bool {
    validate_proof(proof, mode, catalog).is_ok()
}

// ---------------------------------------------------------------------
// Proof files

#[derive(Debug, Serialize, Deserialize)]
struct RuleEntry {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    partition: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ProofFile {
    rule: RuleEntry,
    conclusion: Vec<String>,
    premises: Vec<ProofFile>,
}

impl ProofFile {
    fn from_proof(proof: &SequentProof) -> ProofFile {
        let rule = match &proof.rule {
            Rule::Axiom => RuleEntry {
                kind: "axiom".into(),
                name: None,
                partition: None,
            },
            Rule::Cut { .. } => RuleEntry {
                kind: "cut".into(),
                name: None,
                partition: None,
            },
            Rule::Con {
                name, partition, ..
            } => RuleEntry {
                kind: "con".into(),
                name: Some(name.clone()),
                partition: Some(*partition),
            },
        };
        ProofFile {
            rule,
            conclusion: proof.conclusion.0.iter().map(|f| f.to_string()).collect(),
            premises: proof.premises.iter().map(ProofFile::from_proof).collect(),
        }
    }

    fn into_proof(self, catalog: &Catalog) -> Result<SequentProof, ProofError> {
        let conclusion = self
            .conclusion
            .iter()
            .map(|text| parse_formula(text, catalog).map_err(|e| ProofError::Format(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        let premises = self
            .premises
            .into_iter()
            .map(|p| p.into_proof(catalog))
            .collect::<Result<Vec<_>, _>>()?;
        let premise_sequents: Vec<&[Formula]> =
            premises.iter().map(|p| p.conclusion.formulas()).collect();
        let rule = match self.rule.kind.as_str() {
            "axiom" => Rule::Axiom,
            "cut" => resolve_cut(&conclusion, &premise_sequents, catalog)?,
            "con" => {
                let name = self
                    .rule
                    .name
                    .ok_or_else(|| ProofError::Format("con rule without a name".into()))?;
                let partition = self
                    .rule
                    .partition
                    .ok_or_else(|| ProofError::Format("con rule without a partition".into()))?;
                resolve_con(&name, partition, &conclusion, &premise_sequents, catalog)?
            }
            other => return Err(ProofError::Format(format!("unknown rule kind `{other}`"))),
        };
        Ok(SequentProof {
            conclusion: Sequent(conclusion),
            rule,
            premises,
        })
    }
}

/// Finds cut occurrences making the rule instance valid; deterministic
/// first-match scan.
fn resolve_cut(
    conclusion: &[Formula],
    premises: &[&[Formula]],
    catalog: &Catalog,
) -> Result<Rule, ProofError> {
    if premises.len() != 2 {
        return Err(ProofError::BadRule {
            rule: "cut".into(),
            message: "cut takes two premises".into(),
        });
    }
    let want = sorted(conclusion.to_vec());
    for la in 0..premises[0].len() {
        let dual = premises[0][la]
            .dual(catalog)
            .map_err(|e| ProofError::UnknownConnective(e.to_string()))?;
        for ra in 0..premises[1].len() {
            if premises[1][ra] != dual {
                continue;
            }
            let mut contexts = multiset_minus(premises[0], &[la]);
            contexts.extend(multiset_minus(premises[1], &[ra]));
            if sorted(contexts) == want {
                return Ok(Rule::Cut {
                    left_active: la,
                    right_active: ra,
                });
            }
        }
    }
    Err(ProofError::BadRule {
        rule: "cut".into(),
        message: "no dual occurrence pair fits the conclusion".into(),
    })
}

/// Finds a principal occurrence and active occurrences making the rule
/// instance valid.
fn resolve_con(
    name: &str,
    partition: usize,
    conclusion: &[Formula],
    premises: &[&[Formula]],
    catalog: &Catalog,
) -> Result<Rule, ProofError> {
    let conn = catalog
        .get(name)
        .ok_or_else(|| ProofError::UnknownConnective(name.to_string()))?;
    let p = conn
        .rules
        .members()
        .get(partition)
        .ok_or_else(|| ProofError::BadRule {
            rule: name.to_string(),
            message: format!("no partition #{partition}"),
        })?;
    if premises.len() != p.class_count() {
        return Err(ProofError::BadRule {
            rule: name.to_string(),
            message: format!("partition {p} needs {} premises", p.class_count()),
        });
    }
    let want = sorted(conclusion.to_vec());
    'principal: for (pos, candidate) in conclusion.iter().enumerate() {
        if candidate.connective_name() != Some(name) {
            continue;
        }
        let args = candidate.argument_vec();
        if args.len() != conn.arity {
            continue;
        }
        let mut actives: Vec<Vec<usize>> = Vec::with_capacity(p.class_count());
        let mut contexts: Vec<Formula> = Vec::new();
        for (ci, class) in p.classes().iter().enumerate() {
            let premise = premises[ci];
            let mut claimed: Vec<usize> = Vec::with_capacity(class.len());
            for &j in class {
                let found = premise.iter().enumerate().position(|(k, f)| {
                    !claimed.contains(&k) && *f == args[j - 1]
                });
                match found {
                    Some(k) => claimed.push(k),
                    None => continue 'principal,
                }
            }
            contexts.extend(multiset_minus(premise, &claimed));
            actives.push(claimed);
        }
        contexts.push(candidate.clone());
        if sorted(contexts) == want {
            return Ok(Rule::Con {
                name: name.to_string(),
                partition,
                principal: pos,
                actives,
            });
        }
    }
    Err(ProofError::BadRule {
        rule: name.to_string(),
        message: "no occurrence assignment fits the rule schema".into(),
    })
}

// ---------------------------------------------------------------------
// Sequentialization

#[derive(Debug, Error)]
pub enum SequentializeError {
    #[error("structure is not a proof structure: {0:?}")]
    InvalidStructure(Vec<Violation>),
    #[error("not correct: {0}")]
    NotCorrect(String),
}

/// Translates a proof structure into a sequent proof. Succeeds exactly
/// when the structure is a proof-net for the partition switching; an
/// incorrect structure is reported as `NotCorrect`.
pub fn sequentialize(s: &ProofStructure) -> Result<SequentProof, SequentializeError> {
    let violations = s.validate();
    if !violations.is_empty() {
        return Err(SequentializeError::InvalidStructure(violations));
    }
    let sub: Vec<usize> = (0..s.links().len()).collect();
    let (proof, _) = seq_sub(s, &sub)?;
    Ok(proof)
}

/// Returns the proof of the sub-structure plus its terminal nodes
/// aligned with the proof's conclusion order.
fn seq_sub(
    s: &ProofStructure,
    sub: &[usize],
) -> Result<(SequentProof, Vec<NodeId>), SequentializeError> {
    if sub.is_empty() {
        return Err(SequentializeError::NotCorrect("empty component".into()));
    }
    if sub.len() == 1 {
        if let Link::Axiom { conclusions } = &s.links()[sub[0]] {
            let f = s.formula(&conclusions[0]).expect("validated").clone();
            let g = s.formula(&conclusions[1]).expect("validated").clone();
            return Ok((
                SequentProof::axiom(f, g),
                vec![conclusions[0].clone(), conclusions[1].clone()],
            ));
        }
    }

    let premised: BTreeSet<&NodeId> = sub
        .iter()
        .flat_map(|&li| s.links()[li].premises().iter())
        .collect();

    // peel a terminal par-like link
    let peelable = sub.iter().copied().find(|&li| match &s.links()[li] {
        Link::Con {
            name, conclusion, ..
        } => {
            !premised.contains(conclusion)
                && s.registry().get(name).is_some_and(|c| c.is_par_family())
        }
        _ => false,
    });
    if let Some(li) = peelable {
        let Link::Con {
            name,
            premises,
            conclusion,
        } = &s.links()[li]
        else {
            unreachable!()
        };
        let rest: Vec<usize> = sub.iter().copied().filter(|&x| x != li).collect();
        let (inner, map) = seq_sub(s, &rest)?;
        let positions: Vec<usize> = premises
            .iter()
            .map(|p| {
                map.iter()
                    .position(|n| n == p)
                    .expect("premises of a peeled link are terminals of the rest")
            })
            .collect();
        let conn = s.registry().get(name).expect("validated");
        let partition = conn
            .rules
            .members()
            .iter()
            .position(|p| p.is_one_class())
            .expect("par-family rule set");
        let principal_formula = s.formula(conclusion).expect("validated").clone();
        let mut conclusion_seq: Vec<Formula> = Vec::new();
        let mut out_map: Vec<NodeId> = Vec::new();
        for (k, f) in inner.conclusion.0.iter().enumerate() {
            if !positions.contains(&k) {
                conclusion_seq.push(f.clone());
                out_map.push(map[k].clone());
            }
        }
        conclusion_seq.push(principal_formula);
        out_map.push(conclusion.clone());
        let proof = SequentProof {
            rule: Rule::Con {
                name: name.clone(),
                partition,
                principal: conclusion_seq.len() - 1,
                actives: vec![positions],
            },
            conclusion: Sequent(conclusion_seq),
            premises: vec![inner],
        };
        return Ok((proof, out_map));
    }

    // otherwise some terminal link must split
    let Some(info) = find_split(s, sub) else {
        return Err(SequentializeError::NotCorrect(
            "no terminal link splits the structure".into(),
        ));
    };
    let link = &s.links()[info.link];
    let mut proofs = Vec::with_capacity(info.component_links.len());
    let mut maps = Vec::with_capacity(info.component_links.len());
    for component in &info.component_links {
        let (proof, map) = seq_sub(s, component)?;
        proofs.push(proof);
        maps.push(map);
    }
    match link {
        Link::Cut { premises } => {
            let left_active = maps[0]
                .iter()
                .position(|n| n == &premises[0])
                .expect("premise sits in its class component");
            let right_active = maps[1]
                .iter()
                .position(|n| n == &premises[1])
                .expect("premise sits in its class component");
            let mut conclusion_seq = Vec::new();
            let mut out_map = Vec::new();
            for (ci, proof) in proofs.iter().enumerate() {
                let active = if ci == 0 { left_active } else { right_active };
                for (k, f) in proof.conclusion.0.iter().enumerate() {
                    if k != active {
                        conclusion_seq.push(f.clone());
                        out_map.push(maps[ci][k].clone());
                    }
                }
            }
            let proof = SequentProof {
                conclusion: Sequent(conclusion_seq),
                rule: Rule::Cut {
                    left_active,
                    right_active,
                },
                premises: proofs,
            };
            Ok((proof, out_map))
        }
        Link::Con {
            name,
            premises,
            conclusion,
        } => {
            let rule_index = info.rule_index.expect("con splits carry a rule index");
            let mut actives: Vec<Vec<usize>> = Vec::new();
            for (ci, class) in info.partition.classes().iter().enumerate() {
                let positions = class
                    .iter()
                    .map(|&j| {
                        maps[ci]
                            .iter()
                            .position(|n| n == &premises[j - 1])
                            .expect("class premises are terminals of their component")
                    })
                    .collect();
                actives.push(positions);
            }
            let mut conclusion_seq = Vec::new();
            let mut out_map = Vec::new();
            for (ci, proof) in proofs.iter().enumerate() {
                for (k, f) in proof.conclusion.0.iter().enumerate() {
                    if !actives[ci].contains(&k) {
                        conclusion_seq.push(f.clone());
                        out_map.push(maps[ci][k].clone());
                    }
                }
            }
            conclusion_seq.push(s.formula(conclusion).expect("validated").clone());
            out_map.push(conclusion.clone());
            let proof = SequentProof {
                rule: Rule::Con {
                    name: name.clone(),
                    partition: rule_index,
                    principal: conclusion_seq.len() - 1,
                    actives,
                },
                conclusion: Sequent(conclusion_seq),
                premises: proofs,
            };
            Ok((proof, out_map))
        }
        Link::Axiom { .. } => unreachable!("axioms are never split candidates"),
    }
}

// ---------------------------------------------------------------------
// Proof search

#[derive(Debug, Clone, Copy)]
pub struct ProveCaps {
    pub max_formulas: usize,
    pub max_connectives: usize,
}

impl Default for ProveCaps {
    fn default() -> Self {
        ProveCaps {
            max_formulas: 10,
            max_connectives: 40,
        }
    }
}

#[derive(Debug)]
pub enum ProveOutcome {
    Proved(SequentProof),
    Unprovable,
    /// The goal exceeds the search caps; nothing was decided.
    Inconclusive(String),
}

impl ProveOutcome {
    pub fn is_proved(&self) -> bool {
        matches!(self, ProveOutcome::Proved(_))
    }

    pub fn is_unprovable(&self) -> bool {
        matches!(self, ProveOutcome::Unprovable)
    }
}

/// Exhaustive cut-free backward proof search. `Unprovable` is
/// authoritative: cut elimination makes cut-free search complete for
/// MLL with generalized connectives.
pub fn prove(goal: &Sequent, mode: AxiomMode, catalog: &Catalog) -> ProveOutcome {
    prove_with_caps(goal, mode, catalog, ProveCaps::default())
}

pub fn prove_with_caps(
    goal: &Sequent,
    mode: AxiomMode,
    catalog: &Catalog,
    caps: ProveCaps,
) -> ProveOutcome {
    if goal.len() > caps.max_formulas {
        return ProveOutcome::Inconclusive(format!(
            "goal has {} formulas, cap is {}",
            goal.len(),
            caps.max_formulas
        ));
    }
    let connectives: usize = goal.0.iter().map(Formula::connective_count).sum();
    if connectives > caps.max_connectives {
        return ProveOutcome::Inconclusive(format!(
            "goal has {connectives} connective occurrences, cap is {}",
            caps.max_connectives
        ));
    }
    let mut memo: std::collections::BTreeMap<Vec<Formula>, Option<SequentProof>> =
        std::collections::BTreeMap::new();
    match search(goal.sorted(), mode, catalog, &mut memo) {
        Some(proof) => ProveOutcome::Proved(proof),
        None => ProveOutcome::Unprovable,
    }
}

fn search(
    seq: Vec<Formula>,
    mode: AxiomMode,
    catalog: &Catalog,
    memo: &mut std::collections::BTreeMap<Vec<Formula>, Option<SequentProof>>,
) -> Option<SequentProof> {
    if let Some(hit) = memo.get(&seq) {
        return hit.clone();
    }
    let result = search_uncached(&seq, mode, catalog, memo);
    memo.insert(seq, result.clone());
    result
}

fn search_uncached(
    seq: &[Formula],
    mode: AxiomMode,
    catalog: &Catalog,
    memo: &mut std::collections::BTreeMap<Vec<Formula>, Option<SequentProof>>,
) -> Option<SequentProof> {
    // axiom
    if seq.len() == 2 {
        if let Ok(dual) = seq[0].dual(catalog) {
            if dual == seq[1] && (mode == AxiomMode::Extended || seq[0].is_literal()) {
                return Some(SequentProof::axiom(seq[0].clone(), seq[1].clone()));
            }
        }
    }
    // connective introductions
    for i in 0..seq.len() {
        if i > 0 && seq[i] == seq[i - 1] {
            continue; // duplicate principal candidates are interchangeable
        }
        let Some(name) = seq[i].connective_name() else {
            continue;
        };
        let Some(conn) = catalog.get(name) else {
            continue;
        };
        let args = seq[i].argument_vec();
        let context: Vec<Formula> = multiset_minus(seq, &[i]);
        for (pi, p) in conn.rules.members().iter().enumerate() {
            let k = p.class_count();
            let mut seen_splits: BTreeSet<Vec<Vec<Formula>>> = BTreeSet::new();
            let mut assignment = vec![0usize; context.len()];
            loop {
                let mut parts: Vec<Vec<Formula>> = vec![Vec::new(); k];
                for (ctx_idx, &class) in assignment.iter().enumerate() {
                    parts[class].push(context[ctx_idx].clone());
                }
                if seen_splits.insert(parts.clone()) {
                    if let Some(proof) =
                        try_rule(seq, i, name, pi, p.classes(), &args, parts, mode, catalog, memo)
                    {
                        return Some(proof);
                    }
                }
                // next assignment
                let mut pos = 0;
                loop {
                    if pos == assignment.len() {
                        break;
                    }
                    assignment[pos] += 1;
                    if assignment[pos] < k {
                        break;
                    }
                    assignment[pos] = 0;
                    pos += 1;
                }
                if pos == assignment.len() {
                    break;
                }
            }
        }
    }
    None
}

#[allow(clippy::too_many_arguments)]
fn try_rule(
    seq: &[Formula],
    principal: usize,
    name: &str,
    partition: usize,
    classes: &[Vec<usize>],
    args: &[Formula],
    parts: Vec<Vec<Formula>>,
    mode: AxiomMode,
    catalog: &Catalog,
    memo: &mut std::collections::BTreeMap<Vec<Formula>, Option<SequentProof>>,
) -> Option<SequentProof> {
    let mut premises = Vec::with_capacity(classes.len());
    let mut actives = Vec::with_capacity(classes.len());
    for (ci, class) in classes.iter().enumerate() {
        let mut premise: Vec<Formula> = parts[ci].clone();
        premise.extend(class.iter().map(|&j| args[j - 1].clone()));
        premise.sort();
        let proof = search(premise.clone(), mode, catalog, memo)?;
        // locate the active occurrences in the sorted premise
        let mut claimed: Vec<usize> = Vec::with_capacity(class.len());
        for &j in class {
            let pos = premise
                .iter()
                .enumerate()
                .position(|(kk, f)| !claimed.contains(&kk) && *f == args[j - 1])
                .expect("actives were added to the premise");
            claimed.push(pos);
        }
        actives.push(claimed);
        premises.push(proof);
    }
    Some(SequentProof {
        conclusion: Sequent(seq.to_vec()),
        rule: Rule::Con {
            name: name.to_string(),
            partition,
            principal,
            actives,
        },
        premises,
    })
}

// ---------------------------------------------------------------------
// Random proof generation

#[derive(Debug, Clone)]
pub struct RandomProofParams {
    pub depth: usize,
    pub atoms: Vec<String>,
    pub connectives: Vec<String>,
    pub seed: u64,
    pub extended_axioms: bool,
    pub cut_probability: f64,
    /// Upper bound on the partition-switching count of the generated
    /// proof's structure; keeps exhaustive checks cheap.
    pub switching_budget: u128,
}

impl Default for RandomProofParams {
    fn default() -> Self {
        RandomProofParams {
            depth: 4,
            atoms: vec!["A".into(), "B".into(), "C".into(), "D".into()],
            connectives: vec![
                "tensor2".into(),
                "par2".into(),
                "tensor3".into(),
                "par3".into(),
                "G".into(),
                "C3".into(),
            ],
            seed: 0,
            extended_axioms: false,
            cut_probability: 0.15,
            switching_budget: 4096,
        }
    }
}

struct ProofGen<'a> {
    rng: ChaCha8Rng,
    params: &'a RandomProofParams,
    catalog: &'a Catalog,
    switchings: u128,
}

/// Deterministic random valid proof. Every output passes
/// [`validate_proof`] in the mode implied by `extended_axioms`.
pub fn random_proof(params: &RandomProofParams, catalog: &Catalog) -> SequentProof {
    let mut gen = ProofGen {
        rng: ChaCha8Rng::seed_from_u64(params.seed),
        params,
        catalog,
        switchings: 1,
    };
    gen.proof(params.depth)
}

/// Partition-switching choice count of one link of this connective.
fn partition_choices(catalog: &Catalog, name: &str) -> u128 {
    let conn = catalog.get(name).expect("generator names are registered");
    conn.rules
        .members()
        .iter()
        .map(|p| p.classes().iter().map(|c| c.len() as u128).product::<u128>())
        .sum()
}

impl ProofGen<'_> {
    fn proof(&mut self, depth: usize) -> SequentProof {
        if depth == 0 || self.rng.gen_bool(0.25) {
            return self.axiom();
        }
        if self.rng.gen_bool(self.params.cut_probability) {
            return self.cut(depth);
        }
        // pick a connective that fits the switching budget
        let affordable: Vec<&String> = self
            .params
            .connectives
            .iter()
            .filter(|name| {
                self.switchings
                    .saturating_mul(partition_choices(self.catalog, name))
                    <= self.params.switching_budget
            })
            .collect();
        if affordable.is_empty() {
            return self.axiom();
        }
        let name = affordable[self.rng.gen_range(0..affordable.len())].clone();
        self.con_rule(&name, depth)
    }

    fn axiom(&mut self) -> SequentProof {
        if self.params.extended_axioms && self.rng.gen_bool(0.5) {
            let f = self.small_formula(2);
            let dual = f.dual(self.catalog).expect("catalog names resolve");
            for name in formula_connectives(&f) {
                self.switchings = self
                    .switchings
                    .saturating_mul(partition_choices(self.catalog, &name));
            }
            for name in formula_connectives(&dual) {
                self.switchings = self
                    .switchings
                    .saturating_mul(partition_choices(self.catalog, &name));
            }
            return SequentProof::axiom(f, dual);
        }
        let a = &self.params.atoms[self.rng.gen_range(0..self.params.atoms.len())];
        SequentProof::axiom(Formula::atom(a.clone()), Formula::neg_atom(a.clone()))
    }

    fn small_formula(&mut self, depth: usize) -> Formula {
        if depth == 0 || self.rng.gen_bool(0.4) {
            let a = &self.params.atoms[self.rng.gen_range(0..self.params.atoms.len())];
            return if self.rng.gen_bool(0.5) {
                Formula::atom(a.clone())
            } else {
                Formula::neg_atom(a.clone())
            };
        }
        let name =
            self.params.connectives[self.rng.gen_range(0..self.params.connectives.len())].clone();
        let arity = self.catalog.get(&name).expect("registered").arity;
        let args = (0..arity).map(|_| self.small_formula(depth - 1)).collect();
        Formula::apply(name, args)
    }

    fn con_rule(&mut self, name: &str, depth: usize) -> SequentProof {
        let conn = self.catalog.get(name).expect("registered").clone();
        let p = conn.rules.members()
            [self.rng.gen_range(0..conn.rules.len())]
        .clone();
        let rule_index = conn
            .rules
            .members()
            .iter()
            .position(|q| *q == p)
            .expect("member");
        self.switchings = self
            .switchings
            .saturating_mul(partition_choices(self.catalog, name));
        let mut premises = Vec::with_capacity(p.class_count());
        let mut actives = Vec::with_capacity(p.class_count());
        let mut args: Vec<Option<Formula>> = vec![None; conn.arity];
        for class in p.classes() {
            let mut premise = self.proof(depth - 1);
            while premise.conclusion.len() < class.len() {
                premise = self.fatten(premise);
            }
            // pick distinct active positions
            let mut positions: Vec<usize> = Vec::with_capacity(class.len());
            while positions.len() < class.len() {
                let pos = self.rng.gen_range(0..premise.conclusion.len());
                if !positions.contains(&pos) {
                    positions.push(pos);
                }
            }
            for (k, &j) in class.iter().enumerate() {
                args[j - 1] = Some(premise.conclusion.0[positions[k]].clone());
            }
            actives.push(positions);
            premises.push(premise);
        }
        let args: Vec<Formula> = args.into_iter().map(|a| a.expect("classes cover 1..n")).collect();
        let principal = Formula::apply(name.to_string(), args);
        let mut conclusion = Vec::new();
        for (ci, premise) in premises.iter().enumerate() {
            for (k, f) in premise.conclusion.0.iter().enumerate() {
                if !actives[ci].contains(&k) {
                    conclusion.push(f.clone());
                }
            }
        }
        conclusion.push(principal);
        SequentProof {
            rule: Rule::Con {
                name: name.to_string(),
                partition: rule_index,
                principal: conclusion.len() - 1,
                actives,
            },
            conclusion: Sequent(conclusion),
            premises,
        }
    }

    /// Grows a proof's conclusion by one formula with a tensor over a
    /// fresh axiom.
    fn fatten(&mut self, proof: SequentProof) -> SequentProof {
        let other = self.axiom();
        self.switchings = self
            .switchings
            .saturating_mul(partition_choices(self.catalog, "tensor2"));
        let x = self.rng.gen_range(0..proof.conclusion.len());
        let y = self.rng.gen_range(0..other.conclusion.len());
        self.tensor_join(proof, x, other, y).0
    }

    /// Tensor rule joining two proofs on the given occurrences; returns
    /// the joined proof and the offsets of the surviving context blocks.
    fn tensor_join(
        &mut self,
        left: SequentProof,
        x: usize,
        right: SequentProof,
        y: usize,
    ) -> (SequentProof, usize) {
        let principal = Formula::tensor(left.conclusion.0[x].clone(), right.conclusion.0[y].clone());
        let mut conclusion = Vec::new();
        for (k, f) in left.conclusion.0.iter().enumerate() {
            if k != x {
                conclusion.push(f.clone());
            }
        }
        let left_rest = conclusion.len();
        for (k, f) in right.conclusion.0.iter().enumerate() {
            if k != y {
                conclusion.push(f.clone());
            }
        }
        conclusion.push(principal);
        let proof = SequentProof {
            rule: Rule::Con {
                name: "tensor2".into(),
                partition: 0,
                principal: conclusion.len() - 1,
                actives: vec![vec![x], vec![y]],
            },
            conclusion: Sequent(conclusion),
            premises: vec![left, right],
        };
        (proof, left_rest)
    }

    fn cut(&mut self, depth: usize) -> SequentProof {
        let left = self.proof(depth - 1);
        let left_active = self.rng.gen_range(0..left.conclusion.len());
        let cut_formula = left.conclusion.0[left_active].clone();
        let (right, right_active) = self.counter_proof(&cut_formula);
        let mut conclusion = Vec::new();
        for (k, f) in left.conclusion.0.iter().enumerate() {
            if k != left_active {
                conclusion.push(f.clone());
            }
        }
        for (k, f) in right.conclusion.0.iter().enumerate() {
            if k != right_active {
                conclusion.push(f.clone());
            }
        }
        SequentProof {
            conclusion: Sequent(conclusion),
            rule: Rule::Cut {
                left_active,
                right_active,
            },
            premises: vec![left, right],
        }
    }

    /// A proof of `⊢ Δ, ~f` for some nonempty Δ, returning the position
    /// of `~f`. For compound `f` the dual is introduced by a rule of its
    /// dual connective over recursively built counter-proofs, with
    /// tensor joins gluing multiple class members into one premise.
    fn counter_proof(&mut self, f: &Formula) -> (SequentProof, usize) {
        let dual = f.dual(self.catalog).expect("catalog names resolve");
        if f.is_literal() {
            return (SequentProof::axiom(dual, f.clone()), 0);
        }
        if self.params.extended_axioms && self.rng.gen_bool(0.5) {
            for name in formula_connectives(f) {
                self.switchings = self
                    .switchings
                    .saturating_mul(partition_choices(self.catalog, &name).saturating_mul(
                        partition_choices(
                            self.catalog,
                            &self.catalog.get(&name).expect("registered").dual_name,
                        ),
                    ));
            }
            return (SequentProof::axiom(dual, f.clone()), 0);
        }
        let name = f.connective_name().expect("compound");
        let conn = self.catalog.get(name).expect("registered").clone();
        let dual_conn = self.catalog.get(&conn.dual_name).expect("registered").clone();
        let args = f.argument_vec();
        let q = dual_conn.rules.members()
            [self.rng.gen_range(0..dual_conn.rules.len())]
        .clone();
        let rule_index = dual_conn
            .rules
            .members()
            .iter()
            .position(|r| *r == q)
            .expect("member");
        self.switchings = self
            .switchings
            .saturating_mul(partition_choices(self.catalog, &dual_conn.name));
        let mut premises = Vec::with_capacity(q.class_count());
        let mut actives: Vec<Vec<usize>> = Vec::with_capacity(q.class_count());
        for class in q.classes() {
            // counter-proofs for each class member, glued by tensors
            let mut parts: Vec<(SequentProof, usize)> = class
                .iter()
                .map(|&j| {
                    let (proof, pos) = self.counter_proof(&args[j - 1]);
                    (proof, pos)
                })
                .collect();
            let (mut acc, first_pos) = parts.remove(0);
            let mut tracked: Vec<usize> = vec![first_pos];
            for (next, next_pos) in parts {
                self.switchings = self
                    .switchings
                    .saturating_mul(partition_choices(self.catalog, "tensor2"));
                let x = pick_avoiding(&mut self.rng, acc.conclusion.len(), &tracked);
                let y = pick_avoiding(&mut self.rng, next.conclusion.len(), &[next_pos]);
                let shifted_next_pos = next_pos - usize::from(next_pos > y);
                let (joined, left_rest) = self.tensor_join(acc, x, next, y);
                tracked = tracked
                    .iter()
                    .map(|&t| t - usize::from(t > x))
                    .collect();
                tracked.push(left_rest + shifted_next_pos);
                acc = joined;
            }
            actives.push(tracked);
            premises.push(acc);
        }
        let mut conclusion = Vec::new();
        for (ci, premise) in premises.iter().enumerate() {
            for (k, f) in premise.conclusion.0.iter().enumerate() {
                if !actives[ci].contains(&k) {
                    conclusion.push(f.clone());
                }
            }
        }
        conclusion.push(dual);
        let pos = conclusion.len() - 1;
        (
            SequentProof {
                rule: Rule::Con {
                    name: dual_conn.name.clone(),
                    partition: rule_index,
                    principal: pos,
                    actives,
                },
                conclusion: Sequent(conclusion),
                premises,
            },
            pos,
        )
    }
}

fn pick_avoiding(rng: &mut ChaCha8Rng, len: usize, avoid: &[usize]) -> usize {
    loop {
        let k = rng.gen_range(0..len);
        if !avoid.contains(&k) {
            return k;
        }
    }
}

fn formula_connectives(f: &Formula) -> Vec<String> {
    let mut out = Vec::new();
    fn walk(f: &Formula, out: &mut Vec<String>) {
        if let Some(name) = f.connective_name() {
            out.push(name.to_string());
        }
        match f {
            Formula::Tensor(l, r) | Formula::Par(l, r) => {
                walk(l, out);
                walk(r, out);
            }
            Formula::Apply(_, args) => {
                for a in args {
                    walk(a, out);
                }
            }
            _ => {}
        }
    }
    walk(f, &mut out);
    out
}
