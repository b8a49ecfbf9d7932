//! Executable checks of differential inequalities that imply positivity of
//! `Re p` on the unit disk, and of the univalence criteria obtained from them
//! by substituting `p = zf'/f`, `1 + zf''/f'`, `f'` or `f/z`.
//!
//! The building blocks are
//!
//! - [`series`]: truncated complex power series and closed-form test families,
//! - [`transforms`]: the left-hand sides of the inequalities, evaluated pointwise,
//! - [`disk`]: sampled suprema and infima on the disk, Jack's lemma, and the
//!   boundary functions `φ(t, k)` and `2|k - 1 - ω|/|1 - ω|^2`,
//! - [`criteria`]: the registry of criteria and the hypothesis/conclusion check,
//! - [`search`]: seeded derivative-free searches for counterexamples and
//!   near-extremal functions,
//! - [`cli`]: the command-line front end and its JSON/CSV reports.

pub mod cli;
pub mod criteria;
pub mod disk;
pub mod search;
pub mod series;
pub mod transforms;

pub use num_complex::Complex64;
