//! The connective catalog: named partition sets with their duals.
//!
//! Built-ins cover `tensorN`/`parN` for n = 2..6, the Danos-Regnier
//! non-decomposable 4-ary pair `G`/`G*`, and the ternary `C3`/`C3*`
//! (the synthetic reading of `(A | B) * C`). User catalogs are JSON
//! files, one connective each, merged by name.

use crate::formulas::Formula;
use crate::partitions::{
    complement, is_connective_pair, Partition, PartitionError, PartitionSet,
};
use crate::structures::{AxiomMode, Link, NodeId, ProofStructure};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown connective `{0}`")]
    Unknown(String),
    #[error("connective `{0}` already registered with a different definition")]
    Conflict(String),
    #[error("connective `{name}`: {problem}")]
    Invalid { name: String, problem: String },
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("bad connective file: {0}")]
    File(String),
}

/// A named generalized connective: its arity, its right rules as a
/// partition set, and the name of its orthogonal dual.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Connective {
    pub name: String,
    pub arity: usize,
    pub rules: PartitionSet,
    pub dual_name: String,
}

impl Connective {
    pub fn new(
        name: impl Into<String>,
        rules: PartitionSet,
        dual_name: impl Into<String>,
    ) -> Self {
        Connective {
            name: name.into(),
            arity: rules.arity(),
            rules,
            dual_name: dual_name.into(),
        }
    }

    /// Par-like: the single one-class rule. These links are never
    /// splitting and are peeled greedily during sequentialization.
    pub fn is_par_family(&self) -> bool {
        self.rules.len() == 1 && self.rules.members()[0].is_one_class()
    }

    /// Tensor-like: the single discrete rule.
    pub fn is_tensor_family(&self) -> bool {
        self.rules.len() == 1 && self.rules.members()[0].is_discrete()
    }
}

/// Wire format for connective files:
/// `{"name":"G","arity":4,"partitions":[[[1,2],[3,4]],[[1,3],[2,4]]],"dualName":"G*"}`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ConnectiveFile {
    pub name: String,
    pub arity: usize,
    pub partitions: Vec<Vec<Vec<usize>>>,
    pub dual_name: String,
}

impl ConnectiveFile {
    pub fn from_connective(conn: &Connective) -> Self {
        ConnectiveFile {
            name: conn.name.clone(),
            arity: conn.arity,
            partitions: conn
                .rules
                .members()
                .iter()
                .map(Partition::to_classes)
                .collect(),
            dual_name: conn.dual_name.clone(),
        }
    }

    pub fn into_connective(self) -> Result<Connective, CatalogError> {
        let members = self
            .partitions
            .into_iter()
            .map(|classes| Partition::new(self.arity, classes))
            .collect::<Result<Vec<_>, _>>()?;
        if members.is_empty() {
            return Err(CatalogError::Invalid {
                name: self.name,
                problem: "rule set must be nonempty".into(),
            });
        }
        let rules = PartitionSet::new(self.arity, members)?;
        Ok(Connective::new(self.name, rules, self.dual_name))
    }
}

/// A registry of connectives keyed by name. Immutable in normal use;
/// merging happens at load time.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Catalog {
    map: BTreeMap<String, Connective>,
}

impl Catalog {
    pub fn empty() -> Self {
        Catalog::default()
    }

    /// The built-in catalog: `tensorN`/`parN` for n = 2..6, `G`/`G*`,
    /// `C3`/`C3*`.
    pub fn builtin() -> Self {
        let mut cat = Catalog::empty();
        for n in 2..=6 {
            let tensor = format!("tensor{n}");
            let par = format!("par{n}");
            cat.insert(Connective::new(
                tensor.clone(),
                PartitionSet::singleton(Partition::discrete(n)),
                par.clone(),
            ));
            cat.insert(Connective::new(
                par,
                PartitionSet::singleton(Partition::one_class(n)),
                tensor,
            ));
        }
        let part = |classes: &[&[usize]]| {
            Partition::new(
                classes.iter().flat_map(|c| c.iter()).count(),
                classes.iter().map(|c| c.to_vec()).collect(),
            )
            .expect("builtin partitions are well formed")
        };
        let pset = |arity: usize, members: Vec<Partition>| {
            PartitionSet::new(arity, members).expect("builtin sets are well formed")
        };
        cat.insert(Connective::new(
            "G",
            pset(
                4,
                vec![part(&[&[1, 2], &[3, 4]]), part(&[&[1, 3], &[2, 4]])],
            ),
            "G*",
        ));
        cat.insert(Connective::new(
            "G*",
            pset(
                4,
                vec![part(&[&[1, 4], &[2], &[3]]), part(&[&[2, 3], &[1], &[4]])],
            ),
            "G",
        ));
        cat.insert(Connective::new(
            "C3",
            pset(3, vec![part(&[&[1, 2], &[3]])]),
            "C3*",
        ));
        cat.insert(Connective::new(
            "C3*",
            pset(3, vec![part(&[&[1, 3], &[2]]), part(&[&[2, 3], &[1]])]),
            "C3",
        ));
        cat
    }

    fn insert(&mut self, conn: Connective) {
        self.map.insert(conn.name.clone(), conn);
    }

    pub fn get(&self, name: &str) -> Option<&Connective> {
        self.map.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.map.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.map.keys().map(String::as_str)
    }

    pub fn connectives(&self) -> impl Iterator<Item = &Connective> {
        self.map.values()
    }

    /// Registers a connective and its dual, computing the dual's rules as
    /// the orthogonal complement. Rejects redefinition with a different
    /// definition; identical re-registration is a no-op.
    pub fn register(&mut self, conn: Connective) -> Result<(), CatalogError> {
        if conn.rules.is_empty() {
            return Err(CatalogError::Invalid {
                name: conn.name,
                problem: "rule set must be nonempty".into(),
            });
        }
        let dual_rules = complement(&conn.rules)?;
        if dual_rules.is_empty() {
            return Err(CatalogError::Invalid {
                name: conn.name,
                problem: "orthogonal complement is empty, no dual exists".into(),
            });
        }
        let dual = Connective::new(conn.dual_name.clone(), dual_rules, conn.name.clone());
        for c in [&conn, &dual] {
            if let Some(existing) = self.map.get(&c.name) {
                if existing != c {
                    return Err(CatalogError::Conflict(c.name.clone()));
                }
            }
        }
        self.insert(dual);
        self.insert(conn);
        Ok(())
    }

    /// Merges another catalog in; by-name conflicts with different
    /// definitions are errors.
    pub fn merge(&mut self, other: &Catalog) -> Result<(), CatalogError> {
        for conn in other.map.values() {
            if let Some(existing) = self.map.get(&conn.name) {
                if existing != conn {
                    return Err(CatalogError::Conflict(conn.name.clone()));
                }
            } else {
                self.insert(conn.clone());
            }
        }
        Ok(())
    }

    /// Loads a single connective file (JSON) and registers the pair.
    pub fn register_file(&mut self, json: &str) -> Result<(), CatalogError> {
        let file: ConnectiveFile =
            serde_json::from_str(json).map_err(|e| CatalogError::File(e.to_string()))?;
        self.register(file.into_connective()?)
    }

    /// Full pair validation: every connective's dual is registered with
    /// matching arity, the dual map is an involution, and each pair
    /// satisfies the biorthogonality condition.
    pub fn validate(&self) -> Result<(), CatalogError> {
        for conn in self.map.values() {
            let dual = self
                .map
                .get(&conn.dual_name)
                .ok_or_else(|| CatalogError::Unknown(conn.dual_name.clone()))?;
            if dual.arity != conn.arity {
                return Err(CatalogError::Invalid {
                    name: conn.name.clone(),
                    problem: format!(
                        "dual `{}` has arity {}, expected {}",
                        dual.name, dual.arity, conn.arity
                    ),
                });
            }
            if dual.dual_name != conn.name {
                return Err(CatalogError::Invalid {
                    name: conn.name.clone(),
                    problem: format!("dual map is not an involution via `{}`", dual.name),
                });
            }
            if conn.rules.is_empty() {
                return Err(CatalogError::Invalid {
                    name: conn.name.clone(),
                    problem: "rule set must be nonempty".into(),
                });
            }
            if !is_connective_pair(&conn.rules, &dual.rules)? {
                return Err(CatalogError::Invalid {
                    name: conn.name.clone(),
                    problem: format!("`{}`/`{}` rules are not orthogonal complements", conn.name, dual.name),
                });
            }
        }
        Ok(())
    }
}

/// Builds the excluded-middle structure EM(C): terminals `C(A1,...,An)`
/// and `C*(~A1,...,~An)`. In atomic mode the terminals sit on top of n
/// atomic axiom links; in extended mode the whole structure is a single
/// non-atomic axiom link.
pub fn em_structure(
    name: &str,
    mode: AxiomMode,
    catalog: &Catalog,
) -> Result<ProofStructure, CatalogError> {
    let conn = catalog
        .get(name)
        .ok_or_else(|| CatalogError::Unknown(name.to_string()))?
        .clone();
    let n = conn.arity;
    let atoms: Vec<Formula> = (1..=n).map(|i| Formula::atom(format!("A{i}"))).collect();
    let neg_atoms: Vec<Formula> = (1..=n)
        .map(|i| Formula::neg_atom(format!("A{i}")))
        .collect();
    let pos = Formula::apply(conn.name.clone(), atoms.clone());
    let neg = Formula::apply(conn.dual_name.clone(), neg_atoms.clone());

    let mut s = ProofStructure::new(mode, catalog.clone());
    match mode {
        AxiomMode::Extended => {
            let a = s.add_node(NodeId::new("c1"), pos);
            let b = s.add_node(NodeId::new("c2"), neg);
            s.add_link(Link::Axiom {
                conclusions: [a, b],
            });
        }
        AxiomMode::Atomic => {
            let mut upper = Vec::with_capacity(n);
            let mut lower = Vec::with_capacity(n);
            for i in 1..=n {
                let a = s.add_node(NodeId::new(format!("a{i}")), atoms[i - 1].clone());
                let b = s.add_node(NodeId::new(format!("b{i}")), neg_atoms[i - 1].clone());
                s.add_link(Link::Axiom {
                    conclusions: [a.clone(), b.clone()],
                });
                upper.push(a);
                lower.push(b);
            }
            let c = s.add_node(NodeId::new("c1"), pos);
            let d = s.add_node(NodeId::new("c2"), neg);
            s.add_link(Link::Con {
                name: conn.name.clone(),
                premises: upper,
                conclusion: c,
            });
            s.add_link(Link::Con {
                name: conn.dual_name.clone(),
                premises: lower,
                conclusion: d,
            });
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{formula_partition_set, is_decomposable, FormulaShape};

    #[test]
    fn builtin_catalog_validates() {
        Catalog::builtin().validate().expect("builtin pairs hold");
    }

    #[test]
    fn g_is_non_decomposable_and_c3_matches_its_shape() {
        let cat = Catalog::builtin();
        let g = cat.get("G").unwrap();
        assert_eq!(is_decomposable(&g.rules).unwrap(), None);

        let c3 = cat.get("C3").unwrap();
        let witness = is_decomposable(&c3.rules).unwrap().expect("decomposable");
        // (1 | 2) * 3
        let expected = FormulaShape::tensor(
            FormulaShape::par(FormulaShape::leaf(1), FormulaShape::leaf(2)),
            FormulaShape::leaf(3),
        );
        assert_eq!(
            formula_partition_set(&witness).unwrap(),
            formula_partition_set(&expected).unwrap()
        );
    }

    #[test]
    fn par_and_tensor_families_are_recognized() {
        let cat = Catalog::builtin();
        assert!(cat.get("par3").unwrap().is_par_family());
        assert!(cat.get("tensor4").unwrap().is_tensor_family());
        assert!(!cat.get("G").unwrap().is_par_family());
        assert!(!cat.get("G").unwrap().is_tensor_family());
    }

    #[test]
    fn register_file_computes_the_dual() {
        let mut cat = Catalog::builtin();
        let json = r#"{"name":"H","arity":2,"partitions":[[[1],[2]]],"dualName":"H*"}"#;
        cat.register_file(json).unwrap();
        let h_star = cat.get("H*").unwrap();
        assert_eq!(h_star.rules, PartitionSet::singleton(Partition::one_class(2)));
        cat.validate().unwrap();
        // re-registering identically is fine, conflicting is not
        cat.register_file(json).unwrap();
        let clash = r#"{"name":"H","arity":2,"partitions":[[[1,2]]],"dualName":"H*"}"#;
        assert!(cat.register_file(clash).is_err());
    }

    #[test]
    fn register_rejects_complement_free_sets() {
        let mut cat = Catalog::builtin();
        // {(1,2)(3,4)} and {(1,3)(2,4)} and {(1,4)(2,3)} together kill
        // every candidate dual partition.
        let json = r#"{"name":"Z","arity":4,"partitions":[[[1,2],[3,4]],[[1,3],[2,4]],[[1,4],[2,3]]],"dualName":"Z*"}"#;
        assert!(cat.register_file(json).is_err());
    }

    #[test]
    fn em_structures_have_the_advertised_shape() {
        let cat = Catalog::builtin();
        let em = em_structure("tensor2", AxiomMode::Atomic, &cat).unwrap();
        assert!(em.validate().is_empty());
        assert_eq!(em.links().len(), 4); // 2 axioms + tensor + par
        assert_eq!(em.terminals().len(), 2);

        let em_g = em_structure("G", AxiomMode::Atomic, &cat).unwrap();
        assert!(em_g.validate().is_empty());
        assert_eq!(em_g.node_count(), 10);
        assert_eq!(em_g.links().len(), 6);

        let em_ext = em_structure("G", AxiomMode::Extended, &cat).unwrap();
        assert!(em_ext.validate().is_empty());
        assert_eq!(em_ext.links().len(), 1);
        assert_eq!(em_ext.node_count(), 2);
    }

    #[test]
    fn em_structure_unknown_connective_is_an_error() {
        let cat = Catalog::builtin();
        assert!(em_structure("nope", AxiomMode::Atomic, &cat).is_err());
    }
}
