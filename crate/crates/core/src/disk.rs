//! Sampling estimates over the unit disk and the scalar functions that appear
//! in the boundary analysis.
//!
//! Every grid point lies strictly inside the disk, so a sample that violates
//! an inequality is a genuine counterexample point. Suprema and infima are
//! only estimates; the one sound upper bound offered here is
//! [`coefficient_sup_bound`] for exact polynomials.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::series::PowerSeries;
use crate::transforms::PointFn;
#[cfg(test)]
use crate::transforms::SingularSample;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiskError {
    #[error("every grid sample was singular")]
    AllSingular,
    #[error("invalid grid: {0}")]
    BadGrid(&'static str),
    #[error("argument outside the domain: {0}")]
    BadDomain(String),
    #[error("|omega| is below 1e-14 at its maximum point {z0}")]
    OmegaVanishes { z0: Complex64 },
}

/// Polar sampling grid: a set of circles, each with the same equally spaced
/// angles `2π a / M`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskGrid {
    radii: Vec<f64>,
    angles: usize,
    unit: Vec<Complex64>,
}

impl DiskGrid {
    pub const DEFAULT_LEVELS: usize = 12;
    pub const DEFAULT_ANGLES: usize = 4096;

    pub fn new(radii: Vec<f64>, angles: usize) -> Result<Self, DiskError> {
        if radii.is_empty() {
            return Err(DiskError::BadGrid("no radii"));
        }
        if radii.iter().any(|&r| !(r > 0.0 && r < 1.0)) {
            return Err(DiskError::BadGrid("radii must lie in (0, 1)"));
        }
        if radii.windows(2).any(|w| w[0] >= w[1]) {
            return Err(DiskError::BadGrid("radii must be strictly increasing"));
        }
        if angles < 16 {
            return Err(DiskError::BadGrid("at least 16 angles per circle"));
        }
        let unit = (0..angles)
            .map(|a| Complex64::from_polar(1.0, 2.0 * PI * a as f64 / angles as f64))
            .collect();
        Ok(DiskGrid { radii, angles, unit })
    }

    /// Radii `1 - 2^-j` for `j = 1..=levels`.
    pub fn with_levels(levels: usize, angles: usize) -> Result<Self, DiskError> {
        if levels == 0 || levels > 52 {
            return Err(DiskError::BadGrid("levels must be in 1..=52"));
        }
        let radii = (1..=levels).map(|j| 1.0 - 0.5f64.powi(j as i32)).collect();
        Self::new(radii, angles)
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn angles(&self) -> usize {
        self.angles
    }

    pub fn levels(&self) -> usize {
        self.radii.len()
    }

    pub fn r_max(&self) -> f64 {
        *self.radii.last().expect("grid has radii")
    }

    pub fn theta(&self, angle_index: usize) -> f64 {
        2.0 * PI * angle_index as f64 / self.angles as f64
    }

    pub fn point(&self, radius_index: usize, angle_index: usize) -> Complex64 {
        self.unit[angle_index] * self.radii[radius_index]
    }

    pub fn len(&self) -> usize {
        self.radii.len() * self.angles
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Only the outermost circle of this grid, same angles.
    pub fn outer_circle(&self) -> DiskGrid {
        DiskGrid {
            radii: vec![self.r_max()],
            angles: self.angles,
            unit: self.unit.clone(),
        }
    }

    /// Evaluates `g` at every sample, in (radius, angle) order.
    fn sample<T: Send>(&self, g: &dyn PointFn, map: impl Fn(Complex64) -> T + Sync) -> Vec<Option<T>> {
        let m = self.angles;
        (0..self.len())
            .into_par_iter()
            .map(|i| {
                let z = self.point(i / m, i % m);
                match g.eval(z) {
                    Ok(v) if v.re.is_finite() && v.im.is_finite() => Some(map(v)),
                    _ => None,
                }
            })
            .collect()
    }
}

impl Default for DiskGrid {
    fn default() -> Self {
        Self::with_levels(Self::DEFAULT_LEVELS, Self::DEFAULT_ANGLES).expect("default grid is valid")
    }
}

/// Extreme value over the grid with its location.
#[derive(Debug, Clone, PartialEq)]
pub struct GridExtremum {
    pub value: f64,
    pub witness: Complex64,
    /// `(radius index, angle index)` of the witness.
    pub index: (usize, usize),
    /// Per-circle extreme values `(r, value)`; NaN for an all-singular circle.
    pub per_radius: Vec<(f64, f64)>,
    pub singular_samples: usize,
}

/// Sampled supremum of `|g|`.
pub type SupEstimate = GridExtremum;
/// Sampled infimum of `Re g`.
pub type InfEstimate = GridExtremum;

/// Reduces samples to an extremum. `better(a, b)` is true when `a` strictly
/// beats `b`; scanning in (radius, angle) order keeps the earliest of equal
/// values, which is the smallest-radius, smallest-angle tie-break.
fn reduce(grid: &DiskGrid, values: &[Option<f64>], better: impl Fn(f64, f64) -> bool) -> Result<GridExtremum, DiskError> {
    let m = grid.angles;
    let mut best: Option<(f64, usize)> = None;
    let mut per_radius = Vec::with_capacity(grid.levels());
    let mut singular = 0;
    for (ri, row) in values.chunks(m).enumerate() {
        let mut row_best: Option<f64> = None;
        for (ai, v) in row.iter().enumerate() {
            match *v {
                None => singular += 1,
                Some(v) => {
                    if row_best.is_none_or(|b| better(v, b)) {
                        row_best = Some(v);
                    }
                    if best.is_none_or(|(b, _)| better(v, b)) {
                        best = Some((v, ri * m + ai));
                    }
                }
            }
        }
        per_radius.push((grid.radii[ri], row_best.unwrap_or(f64::NAN)));
    }
    let (value, flat) = best.ok_or(DiskError::AllSingular)?;
    let index = (flat / m, flat % m);
    Ok(GridExtremum {
        value,
        witness: grid.point(index.0, index.1),
        index,
        per_radius,
        singular_samples: singular,
    })
}

/// Largest `|g|` over the grid. Singular samples are skipped and counted.
pub fn sup_modulus(g: &dyn PointFn, grid: &DiskGrid) -> Result<SupEstimate, DiskError> {
    let values = grid.sample(g, |v| v.norm());
    reduce(grid, &values, |a, b| a > b)
}

/// Smallest `Re g` over the grid. A witness with `Re g <= c` refutes
/// `Re g > c` on the disk.
pub fn inf_real(g: &dyn PointFn, grid: &DiskGrid) -> Result<InfEstimate, DiskError> {
    let values = grid.sample(g, |v| v.re);
    reduce(grid, &values, |a, b| a < b)
}

/// Sum of coefficient moduli: an upper bound for `|s|` on the closed disk.
/// Only meaningful as a certificate when `s` is an exact polynomial.
pub fn coefficient_sup_bound(s: &PowerSeries) -> f64 {
    s.abs_coeff_sum()
}

/// Golden-section maximization of a unimodal `f` on `[a, b]`.
pub fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    // the midpoint can lose to a probe on a flat top
    [(x, fx), (c, fc), (d, fd)]
        .into_iter()
        .fold((x, fx), |best, cand| if cand.1 > best.1 { cand } else { best })
}

/// Refined maximum of `|g|` on the circle `|z| = r`: dense sampling at
/// `angles` points, then golden-section refinement around the best sample.
/// Returns `(value, argmax)`. Singular samples are skipped.
pub fn refined_circle_max(g: &dyn PointFn, r: f64, angles: usize) -> Option<(f64, Complex64)> {
    let step = 2.0 * PI / angles as f64;
    let at = |theta: f64| -> f64 {
        match g.eval(Complex64::from_polar(r, theta)) {
            Ok(v) if v.re.is_finite() && v.im.is_finite() => v.norm(),
            _ => f64::NEG_INFINITY,
        }
    };
    let (best_a, best_v) = (0..angles)
        .map(|a| (a, at(step * a as f64)))
        .fold((0, f64::NEG_INFINITY), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
    if best_v == f64::NEG_INFINITY {
        return None;
    }
    let centre = step * best_a as f64;
    let (theta, v) = golden_max(at, centre - step, centre + step, 1e-12);
    let (theta, v) = if v >= best_v { (theta, v) } else { (centre, best_v) };
    Some((v, Complex64::from_polar(r, theta)))
}

/// Outcome of a numerical check of Jack's lemma on one circle.
#[derive(Debug, Clone, PartialEq)]
pub struct JackResult {
    pub r: f64,
    /// Refined argmax of `|ω|` on `|z| = r`.
    pub z0: Complex64,
    /// `z0 ω'(z0) / ω(z0)`; the lemma says this is real and at least 1.
    pub k_est: Complex64,
    /// Number of refined maxima within 1e-9 of the largest.
    pub multiplicity: usize,
    /// Every near-tied maximum `(z, k_est)`, including `z0`.
    pub ties: Vec<(Complex64, Complex64)>,
}

impl JackResult {
    /// Lemma contract at every tie: `Re k >= 1 - 1e-6` and
    /// `|Im k| <= 1e-6 (1 + |k|)`.
    pub fn satisfies_lemma(&self) -> bool {
        self.ties
            .iter()
            .all(|(_, k)| k.re >= 1.0 - 1e-6 && k.im.abs() <= 1e-6 * (1.0 + k.norm()))
    }
}

pub const JACK_ANGLES: usize = 4096;
const JACK_ANGLE_TOL: f64 = 1e-10;
const JACK_TIE_TOL: f64 = 1e-9;

/// Locates the maximum of `|ω|` on `|z| = r` and evaluates `zω'/ω` there.
pub fn jack_check(omega: &PowerSeries, r: f64) -> Result<JackResult, DiskError> {
    if !(r > 0.0 && r < 1.0) {
        return Err(DiskError::BadDomain(format!("radius {r} must lie in (0, 1)")));
    }
    if omega.coeff(0) != Complex64::new(0.0, 0.0) {
        return Err(DiskError::BadDomain("omega(0) must be 0".into()));
    }
    let d_omega = omega.derivative();
    let modulus = |theta: f64| omega.horner(Complex64::from_polar(r, theta)).norm();
    let step = 2.0 * PI / JACK_ANGLES as f64;
    let samples: Vec<f64> = (0..JACK_ANGLES).map(|a| modulus(step * a as f64)).collect();
    let n = samples.len();

    // Refine every grid local maximum, then keep the near-ties of the best.
    let mut refined: Vec<(f64, f64)> = (0..n)
        .filter(|&a| samples[a] >= samples[(a + n - 1) % n] && samples[a] >= samples[(a + 1) % n])
        .map(|a| {
            let centre = step * a as f64;
            let (theta, v) = golden_max(modulus, centre - step, centre + step, JACK_ANGLE_TOL);
            if v >= samples[a] {
                (theta, v)
            } else {
                (centre, samples[a])
            }
        })
        .collect();
    let top = refined.iter().map(|&(_, v)| v).fold(f64::NEG_INFINITY, f64::max);
    refined.retain(|&(_, v)| v >= top - JACK_TIE_TOL);

    let mut ties = Vec::with_capacity(refined.len());
    for &(theta, _) in &refined {
        let z = Complex64::from_polar(r, theta);
        let w = omega.horner(z);
        if w.norm() < 1e-14 {
            return Err(DiskError::OmegaVanishes { z0: z });
        }
        ties.push((z, z * d_omega.horner(z) / w));
    }
    let (z0, k_est) = ties[0];
    Ok(JackResult {
        r,
        z0,
        k_est,
        multiplicity: ties.len(),
        ties,
    })
}

fn phi_domain(t: f64, k: f64) -> Result<(), DiskError> {
    if !(-1.0..1.0).contains(&t) || !k.is_finite() || k < 1.0 {
        return Err(DiskError::BadDomain(format!(
            "phi needs t in [-1, 1) and k >= 1, got t = {t}, k = {k}"
        )));
    }
    Ok(())
}

/// `φ(t, k) = sqrt((k+3)^2 - 2(k+3)t + 1) / (1 - t)`, the modulus of the
/// first expression at a point where `|ω|` peaks, written with `t = cos θ`.
pub fn phi(t: f64, k: f64) -> Result<f64, DiskError> {
    phi_domain(t, k)?;
    let s = k + 3.0;
    Ok((s * s - 2.0 * s * t + 1.0).sqrt() / (1.0 - t))
}

/// Closed form of `∂φ/∂k = (3 + k - t) / ((1 - t) sqrt((k+3)^2 - 2(k+3)t + 1))`.
pub fn phi_partial_k(t: f64, k: f64) -> Result<f64, DiskError> {
    phi_domain(t, k)?;
    let s = k + 3.0;
    Ok((s - t) / ((1.0 - t) * (s * s - 2.0 * s * t + 1.0).sqrt()))
}

/// `2 |k - 1 - e^{iθ}| / |1 - e^{iθ}|^2`, the modulus of the second
/// expression at a point where `|ω|` peaks with `ω = e^{iθ}`.
pub fn theorem2_extremal(k: f64, theta: f64) -> Result<f64, DiskError> {
    if !k.is_finite() || k < 1.0 || !theta.is_finite() {
        return Err(DiskError::BadDomain(format!("need k >= 1 and finite theta, got k = {k}, theta = {theta}")));
    }
    let w = Complex64::from_polar(1.0, theta);
    let denom = (1.0 - w).norm_sqr();
    if denom < 1e-24 {
        return Err(DiskError::BadDomain(format!("theta = {theta} is 0 mod 2π")));
    }
    Ok(2.0 * (k - 1.0 - w).norm() / denom)
}
