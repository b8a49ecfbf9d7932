//! Numerical Jack's lemma: at the maximum of |ω| on |z| = r, z ω'/ω is real
//! and at least 1.
//!
//! `cargo run --example jack_lemma`

use univalence::cli::parse_function;
use univalence::disk::jack_check;

fn main() {
    for (spec, r) in [("omega:1,0.3", 0.9), ("omega:0,1", 0.5), ("omega:0.5,0-0.2i,0.1", 0.8)] {
        let omega = parse_function(spec, 64).unwrap();
        let res = jack_check(&omega, r).unwrap();
        println!(
            "{spec:<24} r={r}: z0 = {:.6}, k = {:.8} (+{:.1e}i), ties = {}, lemma {}",
            res.z0,
            res.k_est.re,
            res.k_est.im,
            res.multiplicity,
            if res.satisfies_lemma() { "holds" } else { "FAILS" }
        );
    }
}
