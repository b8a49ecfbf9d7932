//! Differential expressions on the unit disk.
//!
//! A Carathéodory-type function `p` (with `p(0) = 1`) is either given as a
//! series or obtained from a normalized `f` through one of four substitutions.
//! [`ExprHandle`] evaluates the left-hand side of each inequality pointwise;
//! the corollary forms are evaluated straight from `f, f', f'', f'''` so that
//! they can be compared against the composed `p`-route.

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::series::{Jet, Normalization, PowerSeries, SeriesError};

/// Denominator moduli below this flag the sample as singular.
pub const SINGULAR_TOL: f64 = 1e-14;

/// A sample where a denominator vanished.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("singular sample at z = {z}")]
pub struct SingularSample {
    pub z: Complex64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransformError {
    #[error("expected a CLASS_A function f(z) = z + a_2 z^2 + ..., got {0}")]
    NotClassA(Normalization),
    #[error("expected a CLASS_P function p(z) = 1 + c_1 z + ..., got {0}")]
    NotClassP(Normalization),
    #[error("alpha = {0} is outside [0, 1)")]
    BadAlpha(f64),
    #[error("{0:?} is not a corollary expression")]
    NotCorollary(ExprId),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Anything that can be evaluated at a point of the disk.
pub trait PointFn: Sync {
    fn eval(&self, z: Complex64) -> Result<Complex64, SingularSample>;
}

impl<F> PointFn for F
where
    F: Fn(Complex64) -> Result<Complex64, SingularSample> + Sync,
{
    fn eval(&self, z: Complex64) -> Result<Complex64, SingularSample> {
        self(z)
    }
}

/// The four ways of turning `f` into a function with `p(0) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Substitution {
    /// `p = z f'(z) / f(z)`
    Ratio,
    /// `p = 1 + z f''(z) / f'(z)`
    Convexity,
    /// `p = f'(z)`
    Deriv,
    /// `p = f(z) / z`
    Ratio0,
}

impl Substitution {
    pub const ALL: [Substitution; 4] = [
        Substitution::Ratio,
        Substitution::Convexity,
        Substitution::Deriv,
        Substitution::Ratio0,
    ];
}

/// Item (i)..(iv) of a corollary; item `n` uses the `n`-th substitution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Item {
    I,
    II,
    III,
    IV,
}

impl Item {
    pub const ALL: [Item; 4] = [Item::I, Item::II, Item::III, Item::IV];

    pub fn substitution(self) -> Substitution {
        match self {
            Item::I => Substitution::Ratio,
            Item::II => Substitution::Convexity,
            Item::III => Substitution::Deriv,
            Item::IV => Substitution::Ratio0,
        }
    }

    pub fn roman(self) -> &'static str {
        match self {
            Item::I => "i",
            Item::II => "ii",
            Item::III => "iii",
            Item::IV => "iv",
        }
    }
}

/// Which left-hand side an [`ExprHandle`] computes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExprId {
    /// `zp' + p + p^2 - 2`
    T1,
    /// `zp' + p - p^2`
    T2,
    /// `zp' + (1+α)/(1-α) p - p^2/(1-α) - α/(1-α)`
    T3 { alpha: f64 },
    /// First corollary family (bound 5/2), evaluated from `f` directly.
    C1(Item),
    /// Second corollary family (bound 1/2), evaluated from `f` directly.
    C2(Item),
    /// `f(z) [z/f(z)]''`
    Zf,
    /// `-z f(z) [z/f(z)]''`
    ZfIdentity,
    /// `f(z) [z/f(z)]'`
    Remark1,
    /// `1 - z f'(z)/f(z)`
    Remark1Alt,
    /// `zf'/f [4 - 3 zf'/f + zf''/f'] - 1`
    RemarkT3Half,
}

impl ExprId {
    pub fn alpha(&self) -> Option<f64> {
        match self {
            ExprId::T3 { alpha } => Some(*alpha),
            _ => None,
        }
    }
}

impl fmt::Display for ExprId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprId::T1 => write!(f, "LHS_T1"),
            ExprId::T2 => write!(f, "LHS_T2"),
            ExprId::T3 { alpha } => write!(f, "LHS_T3(alpha={alpha})"),
            ExprId::C1(i) => write!(f, "LHS_C1_{}", i.roman().to_uppercase()),
            ExprId::C2(i) => write!(f, "LHS_C2_{}", i.roman().to_uppercase()),
            ExprId::Zf => write!(f, "LHS_ZF"),
            ExprId::ZfIdentity => write!(f, "LHS_ZF_IDENTITY"),
            ExprId::Remark1 => write!(f, "LHS_REMARK1"),
            ExprId::Remark1Alt => write!(f, "LHS_REMARK1_ALT"),
            ExprId::RemarkT3Half => write!(f, "LHS_REMARK_T3_HALF"),
        }
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<(), TransformError> {
    if (0.0..1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(TransformError::BadAlpha(alpha))
    }
}

/// Pointwise evaluator of `f ∈ 𝒜` together with `g = f/z`.
#[derive(Debug, Clone)]
pub struct FEval {
    f: Jet,
    g: Jet,
    source: PowerSeries,
}

impl FEval {
    pub fn new(f: &PowerSeries) -> Result<Self, TransformError> {
        if f.normalization() != Normalization::ClassA {
            return Err(TransformError::NotClassA(f.normalization()));
        }
        let g = f.divide_by_z()?;
        Ok(FEval {
            f: Jet::new(f),
            g: Jet::new(&g),
            source: f.clone(),
        })
    }

    pub fn source(&self) -> &PowerSeries {
        &self.source
    }

    /// `[f, f', f'', f''']` at `z`.
    pub fn jet(&self, z: Complex64) -> [Complex64; 4] {
        self.f.eval(z)
    }

    /// `[g, g', g'', g''']` at `z` for `g = f/z`.
    pub fn quotient_jet(&self, z: Complex64) -> [Complex64; 4] {
        self.g.eval(z)
    }
}

fn nonzero(d: Complex64, z: Complex64) -> Result<Complex64, SingularSample> {
    if d.norm() < SINGULAR_TOL {
        Err(SingularSample { z })
    } else {
        Ok(d)
    }
}

/// `z f'(z) / f(z)` with the removable singularity at the origin set to 1.
fn zfp_over_f(z: Complex64, f: Complex64, fp: Complex64) -> Result<Complex64, SingularSample> {
    if z == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(1.0, 0.0));
    }
    Ok(z * fp / nonzero(f, z)?)
}

#[derive(Debug, Clone)]
enum PKind {
    Series(Jet),
    Substituted(Substitution, Box<FEval>),
}

/// A function with `p(0) = 1`, evaluable together with its derivative.
#[derive(Debug, Clone)]
pub struct PFunction {
    kind: PKind,
    /// Exact polynomial form of `p`, when there is one.
    polynomial: Option<PowerSeries>,
}

impl PFunction {
    /// Wraps a CLASS_P series.
    pub fn from_series(p: &PowerSeries) -> Result<Self, TransformError> {
        if p.normalization() != Normalization::ClassP {
            return Err(TransformError::NotClassP(p.normalization()));
        }
        Ok(PFunction {
            kind: PKind::Series(Jet::new(p)),
            polynomial: p.is_exact().then(|| p.clone()),
        })
    }

    /// Returns `(p(z), p'(z))`.
    pub fn eval_with_derivative(&self, z: Complex64) -> Result<(Complex64, Complex64), SingularSample> {
        match &self.kind {
            PKind::Series(jet) => Ok(jet.eval1(z)),
            PKind::Substituted(sub, f) => match sub {
                Substitution::Ratio => {
                    // p = f'/g with g = f/z; no removable singularity left.
                    let [_, f1, f2, _] = f.jet(z);
                    let [g0, g1, ..] = f.quotient_jet(z);
                    let g0 = nonzero(g0, z)?;
                    let p = f1 / g0;
                    Ok((p, (f2 * g0 - f1 * g1) / (g0 * g0)))
                }
                Substitution::Convexity => {
                    let [_, f1, f2, f3] = f.jet(z);
                    let f1 = nonzero(f1, z)?;
                    let p = 1.0 + z * f2 / f1;
                    let dp = (f2 + z * f3) / f1 - z * f2 * f2 / (f1 * f1);
                    Ok((p, dp))
                }
                Substitution::Deriv => {
                    let [_, f1, f2, _] = f.jet(z);
                    Ok((f1, f2))
                }
                Substitution::Ratio0 => {
                    let [g0, g1, ..] = f.quotient_jet(z);
                    Ok((g0, g1))
                }
            },
        }
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64, SingularSample> {
        match &self.kind {
            PKind::Series(jet) => Ok(jet.value(z)),
            _ => self.eval_with_derivative(z).map(|(p, _)| p),
        }
    }

    /// The exact polynomial form of `p`, if `p` is a polynomial.
    pub fn polynomial(&self) -> Option<&PowerSeries> {
        self.polynomial.as_ref()
    }
}

impl PointFn for PFunction {
    fn eval(&self, z: Complex64) -> Result<Complex64, SingularSample> {
        PFunction::eval(self, z)
    }
}

/// Builds `p` from `f ∈ 𝒜` through a substitution.
pub fn build_p(f: &PowerSeries, sub: Substitution) -> Result<PFunction, TransformError> {
    let fe = FEval::new(f)?;
    let polynomial = if f.is_exact() {
        match sub {
            Substitution::Deriv => Some(f.derivative()),
            Substitution::Ratio0 => Some(f.divide_by_z()?),
            // f = z gives p ≡ 1 for both rational substitutions.
            Substitution::Ratio | Substitution::Convexity if f.degree() <= 1 => {
                Some(PowerSeries::from_real(&[1.0]))
            }
            _ => None,
        }
    } else {
        None
    };
    Ok(PFunction {
        kind: PKind::Substituted(sub, Box::new(fe)),
        polynomial,
    })
}

#[derive(Debug, Clone)]
enum Body {
    OfP(PFunction),
    OfF(Box<FEval>),
}

/// A pointwise-evaluable left-hand side of one of the inequalities.
#[derive(Debug, Clone)]
pub struct ExprHandle {
    id: ExprId,
    body: Body,
    polynomial: Option<PowerSeries>,
}

impl ExprHandle {
    pub fn id(&self) -> ExprId {
        self.id
    }

    /// Exact polynomial form of the expression, available when the source is
    /// a polynomial and the expression is polynomial in it.
    pub fn polynomial(&self) -> Option<&PowerSeries> {
        self.polynomial.as_ref()
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64, SingularSample> {
        match &self.body {
            Body::OfP(p) => {
                let (pv, dp) = p.eval_with_derivative(z)?;
                Ok(p_expression(self.id, z, pv, dp))
            }
            Body::OfF(f) => f_expression(self.id, f, z),
        }
    }
}

impl PointFn for ExprHandle {
    fn eval(&self, z: Complex64) -> Result<Complex64, SingularSample> {
        ExprHandle::eval(self, z)
    }
}

fn p_expression(id: ExprId, z: Complex64, p: Complex64, dp: Complex64) -> Complex64 {
    let zdp = z * dp;
    match id {
        ExprId::T1 => zdp + p + p * p - 2.0,
        ExprId::T2 => zdp + p - p * p,
        ExprId::T3 { alpha } => {
            let s = 1.0 - alpha;
            zdp + (1.0 + alpha) / s * p - p * p / s - alpha / s
        }
        _ => unreachable!("{id} is not an expression in p"),
    }
}

fn f_expression(id: ExprId, fe: &FEval, z: Complex64) -> Result<Complex64, SingularSample> {
    let [f0, f1, f2, f3] = fe.jet(z);
    let one = Complex64::new(1.0, 0.0);
    // zf''/f' and z^2 f'''/f'
    let conv = |f1: Complex64| -> Result<(Complex64, Complex64), SingularSample> {
        let d = nonzero(f1, z)?;
        Ok((z * f2 / d, z * z * f3 / d))
    };
    let value = match id {
        ExprId::C1(Item::I) => {
            let r = zfp_over_f(z, f0, f1)?;
            let (q, _) = conv(f1)?;
            r * (2.0 + q) - 2.0
        }
        ExprId::C1(Item::II) => {
            let (q, q3) = conv(f1)?;
            q3 + 4.0 * q
        }
        ExprId::C1(Item::III) => z * f2 + f1 + f1 * f1 - 2.0,
        ExprId::C1(Item::IV) => {
            let g = f_over_z(z, f0, f1);
            f1 + g * g - 2.0
        }
        ExprId::C2(Item::I) => {
            let r = zfp_over_f(z, f0, f1)?;
            let (q, _) = conv(f1)?;
            r * (2.0 - 2.0 * r + q)
        }
        ExprId::C2(Item::II) => {
            let (q, q3) = conv(f1)?;
            q3 - 2.0 * q * q
        }
        ExprId::C2(Item::III) => z * f2 + f1 - f1 * f1,
        ExprId::C2(Item::IV) => {
            let g = f_over_z(z, f0, f1);
            f1 - g * g
        }
        ExprId::RemarkT3Half => {
            let r = zfp_over_f(z, f0, f1)?;
            let (q, _) = conv(f1)?;
            r * (4.0 - 3.0 * r + q) - 1.0
        }
        ExprId::Zf | ExprId::ZfIdentity => {
            // (z/f)'' = (1/g)'' = (2 g'^2 - g g'') / g^3
            let [g0, g1, g2, _] = fe.quotient_jet(z);
            let g0 = nonzero(g0, z)?;
            let second = (2.0 * g1 * g1 - g0 * g2) / (g0 * g0 * g0);
            if id == ExprId::Zf {
                f0 * second
            } else {
                -z * f0 * second
            }
        }
        ExprId::Remark1 => {
            // (z/f)' = (1/g)' = -g'/g^2
            let [g0, g1, ..] = fe.quotient_jet(z);
            let g0 = nonzero(g0, z)?;
            f0 * (-g1 / (g0 * g0))
        }
        ExprId::Remark1Alt => one - zfp_over_f(z, f0, f1)?,
        _ => unreachable!("{id} is not an expression in f"),
    };
    Ok(value)
}

/// `f(z)/z` from the evaluated `f`, with the origin value `f'(0) = 1`.
fn f_over_z(z: Complex64, f0: Complex64, f1: Complex64) -> Complex64 {
    if z == Complex64::new(0.0, 0.0) {
        f1
    } else {
        f0 / z
    }
}

fn p_expression_polynomial(id: ExprId, p: &PowerSeries) -> PowerSeries {
    let order = 2 * p.degree();
    let zdp = p.derivative().shift_up();
    let sq = p.multiply(p, order);
    let constant = |c: f64| PowerSeries::from_real(&[c]);
    match id {
        ExprId::T1 => &(&(&zdp + p) + &sq) - &constant(2.0),
        ExprId::T2 => &(&zdp + p) - &sq,
        ExprId::T3 { alpha } => {
            let s = 1.0 - alpha;
            let lin = p * ((1.0 + alpha) / s);
            let quad = &sq * (1.0 / s);
            &(&(&zdp + &lin) - &quad) - &constant(alpha / s)
        }
        _ => unreachable!(),
    }
}

fn of_p(id: ExprId, p: &PFunction) -> ExprHandle {
    let polynomial = p.polynomial().map(|s| p_expression_polynomial(id, s));
    ExprHandle {
        id,
        body: Body::OfP(p.clone()),
        polynomial,
    }
}

/// `z ↦ zp'(z) + p(z) + p(z)^2 - 2`
pub fn lhs_theorem1(p: &PFunction) -> ExprHandle {
    of_p(ExprId::T1, p)
}

/// `z ↦ zp'(z) + p(z) - p(z)^2`
pub fn lhs_theorem2(p: &PFunction) -> ExprHandle {
    of_p(ExprId::T2, p)
}

/// The order-α functional; coincides with [`lhs_theorem2`] at α = 0.
pub fn lhs_theorem3(p: &PFunction, alpha: f64) -> Result<ExprHandle, TransformError> {
    check_alpha(alpha)?;
    Ok(of_p(ExprId::T3 { alpha }, p))
}

fn of_f(id: ExprId, f: &PowerSeries) -> Result<ExprHandle, TransformError> {
    let fe = FEval::new(f)?;
    let polynomial = if f.is_exact() {
        let d = f.derivative();
        let constant = |c: f64| PowerSeries::from_real(&[c]);
        match id {
            ExprId::C1(Item::III) | ExprId::C2(Item::III) => {
                let zf2 = d.derivative().shift_up();
                let sq = d.multiply(&d, 2 * d.degree());
                Some(if id == ExprId::C1(Item::III) {
                    &(&(&zf2 + &d) + &sq) - &constant(2.0)
                } else {
                    &(&zf2 + &d) - &sq
                })
            }
            ExprId::C1(Item::IV) | ExprId::C2(Item::IV) => {
                let g = f.divide_by_z()?;
                let sq = g.multiply(&g, 2 * g.degree());
                Some(if id == ExprId::C1(Item::IV) {
                    &(&d + &sq) - &constant(2.0)
                } else {
                    &d - &sq
                })
            }
            _ => None,
        }
    } else {
        None
    };
    Ok(ExprHandle {
        id,
        body: Body::OfF(Box::new(fe)),
        polynomial,
    })
}

/// Evaluates a corollary item directly from `f` and its derivatives.
pub fn lhs_corollary(f: &PowerSeries, which: ExprId) -> Result<ExprHandle, TransformError> {
    match which {
        ExprId::C1(_) | ExprId::C2(_) => of_f(which, f),
        other => Err(TransformError::NotCorollary(other)),
    }
}

/// `f(z) [z/f(z)]''`, the hypothesis of the second-derivative starlikeness test.
pub fn lhs_zf(f: &PowerSeries) -> Result<ExprHandle, TransformError> {
    of_f(ExprId::Zf, f)
}

/// `f(z) [z/f(z)]'`
pub fn lhs_remark1(f: &PowerSeries) -> Result<ExprHandle, TransformError> {
    of_f(ExprId::Remark1, f)
}

/// `zf'/f [4 - 3 zf'/f + zf''/f'] - 1`, the order-1/2 starlikeness form.
pub fn lhs_remark_t3_half(f: &PowerSeries) -> Result<ExprHandle, TransformError> {
    of_f(ExprId::RemarkT3Half, f)
}

/// Both sides of `zp' + p - p^2 = -z f [z/f]''` for `p = zf'/f`.
pub fn identity_zf(f: &PowerSeries) -> Result<(ExprHandle, ExprHandle), TransformError> {
    let lhs = lhs_theorem2(&build_p(f, Substitution::Ratio)?);
    Ok((lhs, of_f(ExprId::ZfIdentity, f)?))
}

/// Both sides of `f [z/f]' = 1 - zf'/f`.
pub fn remark_identity(f: &PowerSeries) -> Result<(ExprHandle, ExprHandle), TransformError> {
    Ok((of_f(ExprId::Remark1, f)?, of_f(ExprId::Remark1Alt, f)?))
}
