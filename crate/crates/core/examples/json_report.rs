//! Driving the command-line front end in-process and reading its JSON.
//!
//! `cargo run --release --example json_report`

use univalence::cli;

fn main() {
    let out = cli::run([
        "univalence",
        "check",
        "--criterion",
        "C2.i",
        "--function",
        "poly-f:0.1+0.05i",
        "--json",
        "--no-timing",
    ]);
    print!("{}", out.stdout);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    println!("exit {} -> {}", out.code, v["consistency"]);

    // Parse errors carry the byte offset of the first bad character.
    let err = cli::parse_function("poly-p:0.5+0.2j", 64).unwrap_err();
    println!("{err}");
}
