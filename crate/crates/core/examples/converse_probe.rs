//! The criteria are sufficient only: p = 1 + 0.9z has Re p >= 0.1 yet
//! violates the order-0 hypothesis, and a search finds similar witnesses for
//! order 1/2.
//!
//! `cargo run --release --example converse_probe`

use univalence::criteria::CriterionId;
use univalence::search::{converse_probe, SearchConfig, SearchOutcome};
use univalence::Complex64;

fn main() {
    let mut cfg = SearchConfig::new(CriterionId::T2, 1, 100, 0);
    cfg.start = Some(vec![Complex64::new(0.9, 0.0)]);
    cfg.restarts = 1;
    report("order 0", &converse_probe(0.0, &cfg).unwrap().outcome);

    let cfg = SearchConfig::new(CriterionId::T3 { alpha: 0.5 }, 2, 10_000, 3);
    report("order 1/2", &converse_probe(0.5, &cfg).unwrap().outcome);
}

fn report(label: &str, outcome: &SearchOutcome) {
    match outcome {
        SearchOutcome::Counterexample { report, .. } => println!(
            "{label}: {} has inf Re p = {:.4} but sup |expr| = {:.4} >= {}",
            report.input,
            report.oracle.inf_re,
            report.hypothesis.sup.unwrap(),
            report.hypothesis.bound
        ),
        other => println!("{label}: {other:?}"),
    }
}
