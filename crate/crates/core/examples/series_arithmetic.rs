//! Truncated power series: construction, arithmetic and evaluation.
//!
//! `cargo run --example series_arithmetic`

use univalence::series::{NamedFamily, PowerSeries};
use univalence::Complex64;

fn main() {
    // p = 1 + z/2 and f = z + 0.3 z^2.
    let p = PowerSeries::class_p(&[Complex64::new(0.5, 0.0)]);
    let f = PowerSeries::class_a(&[Complex64::new(0.3, 0.0)]);
    println!("p = {}, f = {}", p.spec_string(), f.spec_string());

    let z = Complex64::new(0.2, 0.4);
    println!("p({z}) = {}", p.eval(z).unwrap());
    println!("f'(z) = {}", f.derivative().eval(z).unwrap());

    // Products stay exact while the degree fits the order.
    let p2 = p.multiply(&p, 8);
    println!("p^2 coefficients: {:?} (exact: {})", p2.coeffs(), p2.is_exact());

    // 1/p as a series: 1 - z/2 + z^2/4 - ...
    let inv = p.reciprocal(6).unwrap();
    for (n, c) in inv.coeffs().iter().enumerate() {
        println!("  [1/p]_{n} = {}", c.re);
    }

    // Koebe carries its closed form, so jets stay accurate near the circle.
    let k = PowerSeries::family(&NamedFamily::Koebe, 64);
    let w = Complex64::new(0.95, 0.0);
    let [v, d1, _, _] = k.jet(w);
    println!("koebe(0.95) = {v}, koebe'(0.95) = {d1}");
    println!("koebe/z = {}", k.divide_by_z().unwrap().spec_string());

    // Points outside the evaluation cap are rejected.
    println!("eval at 0.9999: {:?}", k.eval(Complex64::new(0.9999, 0.0)).err());
}
