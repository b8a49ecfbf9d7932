//! How close can a p with Re p <= α on the disk get to the hypothesis bound?
//! Every feasible value must stay at or above the bound.
//!
//! `cargo run --release --example sharpness_probe`

use univalence::criteria::{CriterionId, CriterionSpec};
use univalence::search::{sharpness, SearchConfig, SearchOutcome};

fn main() {
    for criterion in [CriterionId::T1, CriterionId::T2, CriterionId::T3 { alpha: 0.5 }] {
        let bound = CriterionSpec::lookup(criterion).unwrap().bound;
        let cfg = SearchConfig::new(criterion, 2, 1500, 1);
        let r = sharpness(&cfg).unwrap();
        if let SearchOutcome::BestValue {
            params,
            sup,
            inf_re,
            residual,
            ..
        } = r.outcome
        {
            println!(
                "{criterion:<14} bound {bound:<5} best sup {sup:.6} (gap {:+.3e}) inf Re p {inf_re:.3e} feasible {} at {params:.4?}",
                sup - bound,
                residual == 0.0
            );
        }
    }
}
