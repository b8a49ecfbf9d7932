//! Truncated complex power series and the closed-form test families.
//!
//! A [`PowerSeries`] stores coefficients `c_0..c_N` of a function analytic in
//! the unit disk. Series built from a named family (Koebe, half-plane) also
//! remember their closed form, so pointwise evaluation of derivatives near the
//! boundary does not suffer from the truncation tail. Plain [`PowerSeries::eval`]
//! always evaluates the stored polynomial.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use thiserror::Error;

/// Default truncation order for named families.
pub const DEFAULT_ORDER: usize = 64;

/// Largest modulus accepted by [`PowerSeries::eval`]: `1 - 2^-12`.
pub const EVAL_CAP: f64 = 1.0 - 1.0 / 4096.0;

const ZERO_TERM_TOL: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("evaluation point |z| = {modulus} lies outside the capped disk |z| <= {cap}")]
    EvalOutOfDisk { modulus: f64, cap: f64 },
    #[error("series has a zero constant term and cannot be inverted")]
    ZeroConstantTerm,
    #[error("series has a nonzero constant term and cannot be divided by z")]
    NonzeroConstantTerm,
    #[error("coefficient {index} is not finite")]
    NonFinite { index: usize },
    #[error("coefficients violate {normalization} normalization: {reason}")]
    Normalization {
        normalization: Normalization,
        reason: &'static str,
    },
}

/// Normalization class of a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Normalization {
    Raw,
    /// `f(0) = 0`, `f'(0) = 1`.
    ClassA,
    /// `p(0) = 1`.
    ClassP,
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Normalization::Raw => "RAW",
            Normalization::ClassA => "CLASS_A",
            Normalization::ClassP => "CLASS_P",
        })
    }
}

/// Closed forms attached to truncated family series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClosedForm {
    /// `z / (1 - z)^2`
    Koebe,
    /// `1 / (1 - z)^2`, the Koebe function divided by `z`.
    KoebeOverZ,
    /// `(1 + z) / (1 - z)`
    HalfPlane,
}

impl ClosedForm {
    /// Values of the function and its first three derivatives at `z`.
    pub fn jet(self, z: Complex64) -> [Complex64; 4] {
        let one = Complex64::new(1.0, 0.0);
        let w = one - z;
        let w2 = w * w;
        let w3 = w2 * w;
        let w4 = w3 * w;
        match self {
            ClosedForm::Koebe => [
                z / w2,
                (one + z) / w3,
                (4.0 + 2.0 * z) / w4,
                (18.0 + 6.0 * z) / (w4 * w),
            ],
            ClosedForm::KoebeOverZ => [one / w2, 2.0 / w3, 6.0 / w4, 24.0 / (w4 * w)],
            ClosedForm::HalfPlane => [(one + z) / w, 2.0 / w2, 4.0 / w3, 12.0 / w4],
        }
    }
}

/// Catalogue of test functions.
#[derive(Debug, Clone, PartialEq)]
pub enum NamedFamily {
    /// `f(z) = z`
    Identity,
    /// `z/(1-z)^2 = Σ n z^n`
    Koebe,
    /// `(1+z)/(1-z) = 1 + 2 Σ z^n`
    HalfPlaneP,
    /// `p = 1 + c_1 z + c_2 z^2 + ...` from the listed `c_1, c_2, ...`
    Poly(Vec<Complex64>),
    /// `ω = c_1 z + c_2 z^2 + ...` from the listed `c_1, c_2, ...`
    SchwarzPoly(Vec<Complex64>),
}

/// Truncated Taylor series `c_0 + c_1 z + ... + c_N z^N`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<Complex64>,
    normalization: Normalization,
    exact: bool,
    closed_form: Option<ClosedForm>,
}

impl PowerSeries {
    /// Builds an exact polynomial and validates the normalization.
    pub fn new(coeffs: Vec<Complex64>, normalization: Normalization) -> Result<Self, SeriesError> {
        let s = PowerSeries {
            coeffs: if coeffs.is_empty() {
                vec![Complex64::new(0.0, 0.0)]
            } else {
                coeffs
            },
            normalization,
            exact: true,
            closed_form: None,
        };
        s.validate()?;
        Ok(s)
    }

    fn raw(coeffs: Vec<Complex64>, exact: bool) -> Self {
        let coeffs = if coeffs.is_empty() {
            vec![Complex64::new(0.0, 0.0)]
        } else {
            coeffs
        };
        PowerSeries {
            coeffs,
            normalization: Normalization::Raw,
            exact,
            closed_form: None,
        }
    }

    fn validate(&self) -> Result<(), SeriesError> {
        if let Some(index) = self
            .coeffs
            .iter()
            .position(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(SeriesError::NonFinite { index });
        }
        let c = |i: usize| self.coeffs.get(i).copied().unwrap_or_default();
        match self.normalization {
            Normalization::Raw => Ok(()),
            Normalization::ClassA => {
                if c(0) != Complex64::new(0.0, 0.0) {
                    Err(SeriesError::Normalization {
                        normalization: Normalization::ClassA,
                        reason: "c_0 must be 0",
                    })
                } else if c(1) != Complex64::new(1.0, 0.0) {
                    Err(SeriesError::Normalization {
                        normalization: Normalization::ClassA,
                        reason: "c_1 must be 1",
                    })
                } else {
                    Ok(())
                }
            }
            Normalization::ClassP => {
                if c(0) != Complex64::new(1.0, 0.0) {
                    Err(SeriesError::Normalization {
                        normalization: Normalization::ClassP,
                        reason: "c_0 must be 1",
                    })
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Raw polynomial from real coefficients, lowest degree first.
    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::raw(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(), true)
    }

    /// Raw polynomial from complex coefficients, lowest degree first.
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Self {
        Self::raw(coeffs, true)
    }

    /// `f = z + a_2 z^2 + a_3 z^3 + ...`
    pub fn class_a(tail: &[Complex64]) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        coeffs.extend_from_slice(tail);
        PowerSeries {
            coeffs,
            normalization: Normalization::ClassA,
            exact: true,
            closed_form: None,
        }
    }

    /// `p = 1 + c_1 z + c_2 z^2 + ...`
    pub fn class_p(tail: &[Complex64]) -> Self {
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        coeffs.extend_from_slice(tail);
        PowerSeries {
            coeffs,
            normalization: Normalization::ClassP,
            exact: true,
            closed_form: None,
        }
    }

    /// `ω = c_1 z + c_2 z^2 + ...`
    pub fn schwarz(tail: &[Complex64]) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0)];
        coeffs.extend_from_slice(tail);
        Self::raw(coeffs, true)
    }

    /// Expands a named family. `order` only matters for the infinite families;
    /// their coefficients come from exact integer formulas.
    pub fn family(family: &NamedFamily, order: usize) -> Self {
        match family {
            NamedFamily::Identity => Self::class_a(&[]),
            NamedFamily::Koebe => PowerSeries {
                coeffs: (0..=order).map(|n| Complex64::new(n as f64, 0.0)).collect(),
                normalization: Normalization::ClassA,
                exact: false,
                closed_form: Some(ClosedForm::Koebe),
            },
            NamedFamily::HalfPlaneP => PowerSeries {
                coeffs: (0..=order)
                    .map(|n| Complex64::new(if n == 0 { 1.0 } else { 2.0 }, 0.0))
                    .collect(),
                normalization: Normalization::ClassP,
                exact: false,
                closed_form: Some(ClosedForm::HalfPlane),
            },
            NamedFamily::Poly(tail) => Self::class_p(tail),
            NamedFamily::SchwarzPoly(tail) => Self::schwarz(tail),
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient `c_n`, zero beyond the truncation order.
    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    /// Truncation order `N`; the series holds `N + 1` coefficients.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Index of the highest nonzero coefficient (0 for the zero series).
    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| *c != Complex64::new(0.0, 0.0))
            .unwrap_or(0)
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    /// True when the coefficients represent the function exactly, i.e. the
    /// function is this polynomial and not a truncation of something larger.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn closed_form(&self) -> Option<ClosedForm> {
        self.closed_form
    }

    /// Re-tags the series with a normalization after checking its invariants.
    pub fn with_normalization(mut self, normalization: Normalization) -> Result<Self, SeriesError> {
        self.normalization = normalization;
        self.validate()?;
        Ok(self)
    }

    /// Horner evaluation of the stored polynomial, for `|z| <= EVAL_CAP`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64, SeriesError> {
        self.eval_capped(z, EVAL_CAP)
    }

    pub fn eval_capped(&self, z: Complex64, r_max: f64) -> Result<Complex64, SeriesError> {
        let modulus = z.norm();
        if modulus > r_max {
            return Err(SeriesError::EvalOutOfDisk { modulus, cap: r_max });
        }
        Ok(self.horner(z))
    }

    /// Horner evaluation without the disk cap.
    pub(crate) fn horner(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Term-by-term derivative. The result is RAW and drops any closed form.
    pub fn derivative(&self) -> PowerSeries {
        let coeffs: Vec<Complex64> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as f64)
            .collect();
        Self::raw(coeffs, self.exact)
    }

    /// Cauchy product truncated at `order`.
    pub fn multiply(&self, other: &PowerSeries, order: usize) -> PowerSeries {
        let mut out = vec![Complex64::new(0.0, 0.0); order + 1];
        for (i, &a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                out[i + j] += a * b;
            }
        }
        let exact = self.exact && other.exact && self.degree() + other.degree() <= order;
        Self::raw(out, exact)
    }

    /// Multiplicative inverse truncated at `order`.
    pub fn reciprocal(&self, order: usize) -> Result<PowerSeries, SeriesError> {
        let c0 = self.coeffs[0];
        if c0.norm() < ZERO_TERM_TOL {
            return Err(SeriesError::ZeroConstantTerm);
        }
        let inv0 = c0.inv();
        let mut r = Vec::with_capacity(order + 1);
        r.push(inv0);
        for n in 1..=order {
            let acc = (1..=n.min(self.order()))
                .fold(Complex64::new(0.0, 0.0), |acc, k| acc + self.coeffs[k] * r[n - k]);
            r.push(-acc * inv0);
        }
        Ok(Self::raw(r, self.exact && self.degree() == 0))
    }

    /// Shifts coefficients down by one: `s(z) / z` for `s(0) = 0`.
    pub fn divide_by_z(&self) -> Result<PowerSeries, SeriesError> {
        if self.coeffs[0] != Complex64::new(0.0, 0.0) {
            return Err(SeriesError::NonzeroConstantTerm);
        }
        let mut out = Self::raw(self.coeffs[1..].to_vec(), self.exact);
        out.closed_form = match self.closed_form {
            Some(ClosedForm::Koebe) => Some(ClosedForm::KoebeOverZ),
            _ => None,
        };
        Ok(out)
    }

    /// Multiplies by the monomial `z`.
    pub fn shift_up(&self) -> PowerSeries {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Complex64::new(0.0, 0.0));
        coeffs.extend_from_slice(&self.coeffs);
        Self::raw(coeffs, self.exact)
    }

    /// Function value and first three derivatives at `z`, using the closed
    /// form when one is attached and the series derivatives otherwise.
    /// Build a [`Jet`] once when evaluating at many points.
    pub fn jet(&self, z: Complex64) -> [Complex64; 4] {
        Jet::new(self).eval(z)
    }

    /// Sum of coefficient moduli.
    pub fn abs_coeff_sum(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// Canonical text form: `identity`, `koebe`, `halfplane`, or a
    /// `poly-p:` / `poly-f:` / `omega:` coefficient list. RAW series with a
    /// nonzero constant term print as `series:c0,c1,...`.
    pub fn spec_string(&self) -> String {
        let list = |from: usize| -> String {
            let tail = &self.coeffs[from.min(self.coeffs.len())..];
            if tail.is_empty() {
                "0".to_string()
            } else {
                tail.iter().map(|&c| format_complex(c)).collect::<Vec<_>>().join(",")
            }
        };
        match (self.closed_form, self.normalization) {
            (Some(ClosedForm::Koebe), _) => "koebe".into(),
            (Some(ClosedForm::HalfPlane), _) => "halfplane".into(),
            (_, Normalization::ClassA) if self.coeffs.len() <= 2 => "identity".into(),
            (_, Normalization::ClassA) => format!("poly-f:{}", list(2)),
            (_, Normalization::ClassP) => format!("poly-p:{}", list(1)),
            _ if self.coeff(0) == Complex64::new(0.0, 0.0) => format!("omega:{}", list(1)),
            // No spec form exists for a nonzero constant term; not parseable.
            _ => format!("series:{}", list(0)),
        }
    }

    fn zip_with(&self, other: &PowerSeries, f: impl Fn(Complex64, Complex64) -> Complex64) -> PowerSeries {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f(self.coeff(i), other.coeff(i))).collect();
        Self::raw(coeffs, self.exact && other.exact)
    }
}

/// Precomputed evaluator for a function and its first three derivatives.
#[derive(Debug, Clone)]
pub struct Jet {
    closed_form: Option<ClosedForm>,
    series: [PowerSeries; 4],
}

impl Jet {
    pub fn new(s: &PowerSeries) -> Self {
        let d1 = s.derivative();
        let d2 = d1.derivative();
        let d3 = d2.derivative();
        Jet {
            closed_form: s.closed_form,
            series: [s.clone(), d1, d2, d3],
        }
    }

    /// Values of the function and its first three derivatives at `z`.
    pub fn eval(&self, z: Complex64) -> [Complex64; 4] {
        match self.closed_form {
            Some(cf) => cf.jet(z),
            None => [
                self.series[0].horner(z),
                self.series[1].horner(z),
                self.series[2].horner(z),
                self.series[3].horner(z),
            ],
        }
    }

    /// Function value and first derivative only.
    pub fn eval1(&self, z: Complex64) -> (Complex64, Complex64) {
        match self.closed_form {
            Some(cf) => {
                let j = cf.jet(z);
                (j[0], j[1])
            }
            None => (self.series[0].horner(z), self.series[1].horner(z)),
        }
    }

    pub fn value(&self, z: Complex64) -> Complex64 {
        match self.closed_form {
            Some(cf) => cf.jet(z)[0],
            None => self.series[0].horner(z),
        }
    }
}

/// Formats `re`, or `re+imi` / `re-imi` when the imaginary part is nonzero.
/// Uses the shortest decimal that round-trips.
pub fn format_complex(c: Complex64) -> String {
    if c.im == 0.0 && c.im.is_sign_positive() {
        format!("{}", c.re)
    } else if c.im.is_sign_negative() {
        format!("{}-{}i", c.re, -c.im)
    } else {
        format!("{}+{}i", c.re, c.im)
    }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;
    fn add(self, rhs: &PowerSeries) -> PowerSeries {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &PowerSeries {
    type Output = PowerSeries;
    fn sub(self, rhs: &PowerSeries) -> PowerSeries {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &PowerSeries {
    type Output = PowerSeries;
    fn neg(self) -> PowerSeries {
        PowerSeries::raw(self.coeffs.iter().map(|c| -c).collect(), self.exact)
    }
}

impl Mul<Complex64> for &PowerSeries {
    type Output = PowerSeries;
    fn mul(self, rhs: Complex64) -> PowerSeries {
        PowerSeries::raw(self.coeffs.iter().map(|c| c * rhs).collect(), self.exact)
    }
}

impl Mul<f64> for &PowerSeries {
    type Output = PowerSeries;
    fn mul(self, rhs: f64) -> PowerSeries {
        self * Complex64::new(rhs, 0.0)
    }
}
