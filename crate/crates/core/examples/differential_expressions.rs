//! The differential expressions behind each criterion, evaluated pointwise.
//!
//! `cargo run --example differential_expressions`

use univalence::series::{NamedFamily, PowerSeries};
use univalence::transforms::{
    build_p, identity_zf, lhs_corollary, lhs_theorem1, lhs_theorem2, lhs_theorem3, ExprId, Item, PFunction,
    Substitution,
};
use univalence::Complex64;

fn main() {
    let z = Complex64::new(0.3, -0.4);

    let p = PFunction::from_series(&PowerSeries::class_p(&[Complex64::new(0.25, 0.0)])).unwrap();
    println!("p = 1 + z/4 at z = {z}");
    println!("  zp' + p + p^2 - 2            = {}", lhs_theorem1(&p).eval(z).unwrap());
    println!("  zp' + p - p^2                = {}", lhs_theorem2(&p).eval(z).unwrap());
    println!("  order 1/2 form (= -z^2/8)    = {}", lhs_theorem3(&p, 0.5).unwrap().eval(z).unwrap());
    println!("  -z^2/8                       = {}", -z * z / 8.0);

    // Corollary items are the theorems composed with a substitution p(f).
    let f = PowerSeries::class_a(&[Complex64::new(0.2, 0.1), Complex64::new(-0.05, 0.0)]);
    println!("f = {}", f.spec_string());
    for item in Item::ALL {
        let direct = lhs_corollary(&f, ExprId::C1(item)).unwrap().eval(z).unwrap();
        let composed = lhs_theorem1(&build_p(&f, item.substitution()).unwrap()).eval(z).unwrap();
        println!("  {:<8} direct {direct:.12}  composed {composed:.12}", ExprId::C1(item).to_string());
    }

    let ratio = build_p(&f, Substitution::Ratio).unwrap();
    println!("  zf'/f at z = {}", ratio.eval(z).unwrap());

    // Two routes to the same quantity for the Koebe function.
    let koebe = PowerSeries::family(&NamedFamily::Koebe, 64);
    let (a, b) = identity_zf(&koebe).unwrap();
    println!(
        "koebe: {} = {}, {} = {}, closed form -2z^2/(1-z)^2 = {}",
        a.id(),
        a.eval(z).unwrap(),
        b.id(),
        b.eval(z).unwrap(),
        -2.0 * z * z / ((1.0 - z) * (1.0 - z))
    );
}
