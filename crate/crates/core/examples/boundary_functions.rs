//! The boundary functions that make the constants 5/2 and 1/2 sharp.
//!
//! `cargo run --example boundary_functions`

use std::f64::consts::PI;

use univalence::disk::{phi, phi_partial_k, theorem2_extremal};

fn main() {
    println!("phi(t, k) on a coarse grid (minimum 5/2 at t = -1, k = 1)");
    print!("{:>8}", "t \\ k");
    let ks = [1.0, 1.5, 2.0, 4.0, 8.0];
    for k in ks {
        print!("{k:>10}");
    }
    println!();
    for t in [-1.0, -0.5, 0.0, 0.5, 0.9] {
        print!("{t:>8}");
        for k in ks {
            print!("{:>10.5}", phi(t, k).unwrap());
        }
        println!();
    }
    println!("d phi / dk at (-1, 1) = {}", phi_partial_k(-1.0, 1.0).unwrap());

    println!("\n2|k - 1 - e^it| / |1 - e^it|^2 for k = 1 (minimum 1/2 at t = pi)");
    for i in 1..=8 {
        let theta = PI * i as f64 / 4.0;
        if let Ok(v) = theorem2_extremal(1.0, theta) {
            println!("  theta = {theta:.4}: {v:.6}");
        }
    }
}
