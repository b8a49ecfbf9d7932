//! Searching coefficient space for a counterexample, first against the real
//! bound and then against a deliberately wrong one.
//!
//! `cargo run --release --example falsify_search`

use univalence::criteria::CriterionId;
use univalence::search::{falsify, SearchConfig, SearchOutcome};

fn main() {
    let cfg = SearchConfig::new(CriterionId::T2, 3, 2000, 42);
    let r = falsify(&cfg).unwrap();
    println!("T2, degree 3: {} evaluations, counterexample: {}", r.evaluations, r.is_counterexample());

    // With the bound raised to 10, p = 1 + 2z-like points satisfy the fake
    // hypothesis while Re p goes negative.
    let mut cfg = SearchConfig::new(CriterionId::T2, 1, 2000, 7);
    cfg.bound_override = Some(10.0);
    let r = falsify(&cfg).unwrap();
    if let SearchOutcome::Counterexample { report, .. } = &r.outcome {
        println!(
            "T2 with bound 10: {} has certificate {:.4} and inf Re p = {:.4} ({})",
            report.input,
            report.hypothesis.certificate.unwrap(),
            report.oracle.inf_re,
            report.consistency.as_str()
        );
    }
}
