//! Running criteria: hypothesis verdict, conclusion oracle and their consistency.
//!
//! `cargo run --release --example check_criteria`

use univalence::cli::parse_function;
use univalence::criteria::{check, list_criteria, make_t3, CriterionSpec, VerdictOptions};
use univalence::disk::DiskGrid;

fn show(spec: &CriterionSpec, function: &str, grid: &DiskGrid) {
    let input = parse_function(function, 64).unwrap();
    match check(spec, &input, grid, &VerdictOptions::default()) {
        Ok(r) => println!(
            "{:<14} {:<22} {:<18} sup={:<12.6} cert={:<10} {} -> {}",
            r.criterion.to_string(),
            function,
            r.hypothesis.verdict.as_str(),
            r.hypothesis.sup.unwrap_or(f64::NAN),
            r.hypothesis.certificate.map_or("-".into(), |c| format!("{c:.4}")),
            r.oracle.result.as_str(),
            r.consistency.as_str()
        ),
        Err(e) => println!("{:<14} {function:<22} error: {e}", spec.id.to_string()),
    }
}

fn main() {
    let grid = DiskGrid::with_levels(12, 1024).unwrap();
    let registry = list_criteria();
    let by_name = |name: &str| registry.iter().find(|c| c.id.to_string() == name).unwrap().clone();

    show(&by_name("T1"), "poly-p:0.5", &grid);
    show(&by_name("T2"), "poly-p:1", &grid);
    show(&make_t3(0.5).unwrap(), "poly-p:0.25", &grid);
    // Sufficient, not necessary: the Koebe function is starlike anyway.
    show(&by_name("C1.i"), "koebe", &grid);
    show(&by_name("C2.iii"), "poly-f:0.1", &grid);
    show(&by_name("C1.iv"), "poly-f:0.3-0.1i,0.05", &grid);
    show(&by_name("TZF"), "poly-f:0.2", &grid);
    show(&by_name("R1"), "poly-f:0.4", &grid);
    show(&by_name("R2"), "poly-f:0.05", &grid);
    // Wrong input class is an error, not a verdict.
    show(&by_name("T1"), "identity", &grid);
}
