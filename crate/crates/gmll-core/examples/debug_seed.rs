use gmll_core::catalog::Catalog;
use gmll_core::correctness::{check_correct, is_connected_acyclic, CheckMode};
use gmll_core::sequentialize::{check_proof, random_proof, RandomProofParams};
use gmll_core::structures::{desequentialize, AxiomMode};
use gmll_core::switchings::{correctness_graph, Regime};

fn main() {
    let c = Catalog::builtin();
    let params = RandomProofParams {
        seed: 0,
        depth: 4,
        ..RandomProofParams::default()
    };
    let proof = random_proof(&params, &c);
    println!("conclusion: {}", proof.conclusion);
    println!("proof valid: {}", check_proof(&proof, AxiomMode::Atomic, &c));
    println!("proof json:\n{}", proof.to_json());
    let s = desequentialize(&proof, &c).unwrap();
    println!("violations: {:?}", s.validate());
    println!("structure:\n{}", s.to_json());
    let verdict = check_correct(&s, Regime::Partition, CheckMode::Exhaustive).unwrap();
    println!("correct: {} checked {}", verdict.correct, verdict.switchings_checked);
    if let Some(ce) = verdict.counterexample {
        println!("reason: {:?}", ce.reason);
        println!("switching: {}", ce.switching.to_json_value());
        let g = correctness_graph(&s, &ce.switching).unwrap();
        println!("graph check: {:?}", is_connected_acyclic(&g).failure);
    }
}
