//! Proof structures for multiplicative linear logic with generalized
//! (partition-defined) n-ary connectives.
//!
//! The crate provides:
//!
//! * [`partitions`] — the partition algebra behind generalized rules:
//!   meeting graphs, orthogonality, orthogonal complements, connective
//!   pairs and decomposability testing;
//! * [`formulas`] — formula syntax, structural duality and the text
//!   grammar used by files and the CLI;
//! * [`catalog`] — the built-in connective catalog (`tensorN`/`parN`,
//!   `G`, `C3`) and the excluded-middle example structures;
//! * [`structures`] — proof structures as labelled link graphs,
//!   validation, translation from sequent proofs, JSON and DOT export;
//! * [`switchings`] — the three switching families (binary par,
//!   n-ary par, partition, Danos-Regnier) and correctness graphs;
//! * [`correctness`] — connectedness/acyclicity checking, exhaustive
//!   and sampled correctness verdicts, splitting-link detection;
//! * [`sequentialize`] — sequent proofs, proof checking, the
//!   sequentialization algorithm and a brute-force prover;
//! * [`rewrite`] — cut elimination and axiom expansion on structures.

pub mod catalog;
pub mod correctness;
pub mod formulas;
pub mod partitions;
pub mod rewrite;
pub mod sequentialize;
pub mod structures;
pub mod switchings;

pub use catalog::{Catalog, Connective};
pub use correctness::{
    check_correct, find_splitting_terminal_link, is_connected_acyclic, CheckMode, Counterexample,
    FailureReason, SplitReport, Verdict,
};
pub use formulas::{parse_formula, parse_sequent, Formula, ParseError, Sequent};
pub use partitions::{
    complement, enumerate_partitions, formula_partition_set, is_connective_pair, is_decomposable,
    meeting_graph, orthogonal, FormulaShape, MeetingGraph, Partition, PartitionError, PartitionSet,
};
pub use rewrite::{
    expand_all_axioms, expand_axiom, find_redexes, normalize, reduce_axiom_cut, reduce_main_cut,
    Redex, RewriteError, StepLog,
};
pub use sequentialize::{
    check_proof, prove, random_proof, sequentialize, ProofError, ProveOutcome, RandomProofParams,
    Rule, SequentProof,
};
pub use structures::{
    desequentialize, AxiomMode, Link, LinkId, NodeId, ProofStructure, Violation, ViolationCode,
};
pub use switchings::{
    correctness_graph, enumerate_switchings, switchable_links, switching_count, Choice,
    CorrectnessGraph, Regime, RegimeError, Switching, Vertex,
};
