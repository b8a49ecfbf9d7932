//! Registry of criteria and the check that pairs each hypothesis with its
//! conclusion.
//!
//! A check never proves the conclusion; it looks for disagreement between a
//! hypothesis verdict and a sampled conclusion. Only a polynomial coefficient
//! certificate can make the hypothesis hold for certain, and only a grid
//! sample can make either side fail for certain.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

use crate::disk::{coefficient_sup_bound, inf_real, sup_modulus, DiskError, DiskGrid, GridExtremum};
use crate::series::{Normalization, PowerSeries};
use crate::transforms::{
    build_p, check_alpha, lhs_corollary, lhs_remark1, lhs_remark_t3_half, lhs_theorem1, lhs_theorem2,
    lhs_theorem3, lhs_zf, ExprHandle, ExprId, Item, PFunction, Substitution, TransformError,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CriteriaError {
    #[error("criterion {criterion} expects {expected} input, got {got}")]
    InputKindMismatch {
        criterion: CriterionId,
        expected: Normalization,
        got: Normalization,
    },
    #[error("unknown criterion id {0:?}")]
    UnknownCriterion(String),
    #[error("certified hypothesis with failing conclusion for {}: {}", .0.criterion, .0.input)]
    TheoremViolated(Box<CheckReport>),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Disk(#[from] DiskError),
}

/// Stable criterion identifiers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CriterionId {
    T1,
    T2,
    T3 { alpha: f64 },
    C1(Item),
    C2(Item),
    Tzf,
    Remark1,
    RemarkT3Half,
}

impl fmt::Display for CriterionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CriterionId::T1 => f.write_str("T1"),
            CriterionId::T2 => f.write_str("T2"),
            CriterionId::T3 { alpha } => write!(f, "T3:alpha={alpha}"),
            CriterionId::C1(i) => write!(f, "C1.{}", i.roman()),
            CriterionId::C2(i) => write!(f, "C2.{}", i.roman()),
            CriterionId::Tzf => f.write_str("TZF"),
            CriterionId::Remark1 => f.write_str("R1"),
            CriterionId::RemarkT3Half => f.write_str("R2"),
        }
    }
}

impl FromStr for CriterionId {
    type Err = CriteriaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || CriteriaError::UnknownCriterion(s.to_string());
        let item = |r: &str| Item::ALL.into_iter().find(|i| i.roman() == r);
        Ok(match s {
            "T1" => CriterionId::T1,
            "T2" => CriterionId::T2,
            "TZF" => CriterionId::Tzf,
            "R1" => CriterionId::Remark1,
            "R2" => CriterionId::RemarkT3Half,
            _ => {
                if let Some(a) = s.strip_prefix("T3:alpha=") {
                    let alpha: f64 = a.parse().map_err(|_| unknown())?;
                    check_alpha(alpha)?;
                    CriterionId::T3 { alpha }
                } else if let Some(r) = s.strip_prefix("C1.") {
                    CriterionId::C1(item(r).ok_or_else(unknown)?)
                } else if let Some(r) = s.strip_prefix("C2.") {
                    CriterionId::C2(item(r).ok_or_else(unknown)?)
                } else {
                    return Err(unknown());
                }
            }
        })
    }
}

/// Whether a criterion takes `p` (with `p(0) = 1`) or `f ∈ 𝒜`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputKind {
    PFunction,
    AFunction,
}

impl InputKind {
    pub fn normalization(self) -> Normalization {
        match self {
            InputKind::PFunction => Normalization::ClassP,
            InputKind::AFunction => Normalization::ClassA,
        }
    }
}

/// Conclusion tested after a hypothesis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OracleId {
    /// `Re p > α`
    RePGt(f64),
    /// `Re zf'/f > α`
    Starlike(f64),
    /// `Re (1 + zf''/f') > α`
    Convex(f64),
    /// `Re f' > 0`
    BoundedTurning,
    /// `Re f/z > 0`
    ReFOverZ,
}

impl OracleId {
    pub fn threshold(self) -> f64 {
        match self {
            OracleId::RePGt(a) | OracleId::Starlike(a) | OracleId::Convex(a) => a,
            OracleId::BoundedTurning | OracleId::ReFOverZ => 0.0,
        }
    }

    pub fn input_kind(self) -> InputKind {
        match self {
            OracleId::RePGt(_) => InputKind::PFunction,
            _ => InputKind::AFunction,
        }
    }
}

impl fmt::Display for OracleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleId::RePGt(a) => write!(f, "RE_P_GT:alpha={a}"),
            OracleId::Starlike(a) => write!(f, "STARLIKE:alpha={a}"),
            OracleId::Convex(a) => write!(f, "CONVEX:alpha={a}"),
            OracleId::BoundedTurning => f.write_str("BOUNDED_TURNING"),
            OracleId::ReFOverZ => f.write_str("RE_F_OVER_Z"),
        }
    }
}

/// One registry entry: hypothesis `|expr| < bound` (or `<=`) and conclusion.
#[derive(Debug, Clone, PartialEq)]
pub struct CriterionSpec {
    pub id: CriterionId,
    pub input: InputKind,
    pub bound: f64,
    pub strict: bool,
    pub oracle: OracleId,
    /// Set when the bound has been replaced for harness validation; such a
    /// spec may legitimately produce certified violations.
    pub diagnostic: bool,
}

impl CriterionSpec {
    fn new(id: CriterionId, input: InputKind, bound: f64, strict: bool, oracle: OracleId) -> Self {
        CriterionSpec {
            id,
            input,
            bound,
            strict,
            oracle,
            diagnostic: false,
        }
    }

    /// Looks up a criterion by id, including the `T3:alpha=` family.
    pub fn lookup(id: CriterionId) -> Result<Self, CriteriaError> {
        match id {
            CriterionId::T3 { alpha } => make_t3(alpha),
            other => Ok(list_criteria()
                .into_iter()
                .find(|c| c.id == other)
                .expect("every fixed id is registered")),
        }
    }

    /// Replaces the bound. The result is flagged diagnostic.
    pub fn with_bound_override(mut self, bound: f64) -> Self {
        self.bound = bound;
        self.diagnostic = true;
        self
    }

    /// Whether a sampled modulus refutes the hypothesis.
    pub fn refuted_by(&self, modulus: f64) -> bool {
        if self.strict {
            modulus >= self.bound
        } else {
            modulus > self.bound
        }
    }

    /// Whether an upper bound on the modulus establishes the hypothesis.
    pub fn certified_by(&self, upper: f64) -> bool {
        if self.strict {
            upper < self.bound
        } else {
            upper <= self.bound
        }
    }

    /// Builds the hypothesis expression for `input`.
    pub fn expression(&self, input: &PowerSeries) -> Result<ExprHandle, CriteriaError> {
        let got = input.normalization();
        if got != self.input.normalization() {
            return Err(CriteriaError::InputKindMismatch {
                criterion: self.id,
                expected: self.input.normalization(),
                got,
            });
        }
        let p = || PFunction::from_series(input);
        Ok(match self.id {
            CriterionId::T1 => lhs_theorem1(&p()?),
            CriterionId::T2 => lhs_theorem2(&p()?),
            CriterionId::T3 { alpha } => lhs_theorem3(&p()?, alpha)?,
            CriterionId::C1(i) => lhs_corollary(input, ExprId::C1(i))?,
            CriterionId::C2(i) => lhs_corollary(input, ExprId::C2(i))?,
            CriterionId::Tzf => lhs_zf(input)?,
            CriterionId::Remark1 => lhs_remark1(input)?,
            CriterionId::RemarkT3Half => lhs_remark_t3_half(input)?,
        })
    }
}

/// The thirteen fixed criteria in a stable order. The order-α family comes
/// from [`make_t3`].
pub fn list_criteria() -> Vec<CriterionSpec> {
    use CriterionId as C;
    use InputKind::{AFunction, PFunction as P};
    let mut out = vec![
        CriterionSpec::new(C::T1, P, 2.5, true, OracleId::RePGt(0.0)),
        CriterionSpec::new(C::T2, P, 0.5, true, OracleId::RePGt(0.0)),
    ];
    let conclusion = |i: Item| match i {
        Item::I => OracleId::Starlike(0.0),
        Item::II => OracleId::Convex(0.0),
        Item::III => OracleId::BoundedTurning,
        Item::IV => OracleId::ReFOverZ,
    };
    for i in Item::ALL {
        out.push(CriterionSpec::new(C::C1(i), AFunction, 2.5, true, conclusion(i)));
    }
    for i in Item::ALL {
        out.push(CriterionSpec::new(C::C2(i), AFunction, 0.5, true, conclusion(i)));
    }
    out.push(CriterionSpec::new(C::Tzf, AFunction, 0.5, false, OracleId::Starlike(0.0)));
    out.push(CriterionSpec::new(C::Remark1, AFunction, 1.0, true, OracleId::Starlike(0.0)));
    out.push(CriterionSpec::new(C::RemarkT3Half, AFunction, 0.25, true, OracleId::Starlike(0.5)));
    out
}

/// Order-α criterion with bound `(1 - α)/2` and conclusion `Re p > α`.
pub fn make_t3(alpha: f64) -> Result<CriterionSpec, CriteriaError> {
    check_alpha(alpha)?;
    Ok(CriterionSpec::new(
        CriterionId::T3 { alpha },
        InputKind::PFunction,
        (1.0 - alpha) / 2.0,
        true,
        OracleId::RePGt(alpha),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HypothesisVerdict {
    CertifiedHold,
    NumericallyHolds,
    Inconclusive,
    CertifiedFail,
}

impl HypothesisVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            HypothesisVerdict::CertifiedHold => "CERTIFIED_HOLD",
            HypothesisVerdict::NumericallyHolds => "NUMERICALLY_HOLDS",
            HypothesisVerdict::Inconclusive => "INCONCLUSIVE",
            HypothesisVerdict::CertifiedFail => "CERTIFIED_FAIL",
        }
    }

    pub fn holds(self) -> bool {
        matches!(self, HypothesisVerdict::CertifiedHold | HypothesisVerdict::NumericallyHolds)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleOutcome {
    HoldsNumerically,
    CertifiedFail,
}

impl OracleOutcome {
    pub fn as_str(self) -> &'static str {
        match self {
            OracleOutcome::HoldsNumerically => "HOLDS_NUMERICALLY",
            OracleOutcome::CertifiedFail => "CERTIFIED_FAIL",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Consistency {
    Consistent,
    Violation,
    Vacuous,
}

impl Consistency {
    pub fn as_str(self) -> &'static str {
        match self {
            Consistency::Consistent => "CONSISTENT",
            Consistency::Violation => "VIOLATION",
            Consistency::Vacuous => "VACUOUS",
        }
    }

    pub fn of(hypothesis: HypothesisVerdict, oracle: OracleOutcome) -> Self {
        match (hypothesis, oracle) {
            (HypothesisVerdict::CertifiedFail, _) => Consistency::Vacuous,
            (h, OracleOutcome::CertifiedFail) if h.holds() => Consistency::Violation,
            _ => Consistency::Consistent,
        }
    }
}

/// Knobs for the numerical verdict.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerdictOptions {
    /// Margin below the bound, as a fraction of the bound, required for
    /// `NUMERICALLY_HOLDS`.
    pub margin_fraction: f64,
}

impl Default for VerdictOptions {
    fn default() -> Self {
        VerdictOptions { margin_fraction: 0.02 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisReport {
    pub verdict: HypothesisVerdict,
    /// Sampled supremum; `None` when every sample was singular.
    pub sup: Option<f64>,
    pub bound: f64,
    pub strict: bool,
    pub witness: Option<Complex64>,
    /// Coefficient-sum bound, present when the expression is an exact polynomial.
    pub certificate: Option<f64>,
    pub per_radius_max: Vec<(f64, f64)>,
    pub singular_samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub id: OracleId,
    pub result: OracleOutcome,
    pub inf_re: f64,
    pub witness: Complex64,
    pub singular_samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub criterion: CriterionId,
    /// Canonical text of the input function.
    pub input: String,
    pub hypothesis: HypothesisReport,
    pub oracle: OracleReport,
    pub consistency: Consistency,
}

impl CheckReport {
    pub fn singular_samples(&self) -> usize {
        self.hypothesis.singular_samples + self.oracle.singular_samples
    }
}

/// Three-valued verdict on `|expr| < bound` (or `<=`) from a grid estimate
/// and an optional coefficient certificate.
pub fn classify(
    spec: &CriterionSpec,
    sup: Option<&GridExtremum>,
    certificate: Option<f64>,
    opts: &VerdictOptions,
) -> HypothesisVerdict {
    if let Some(s) = sup {
        if spec.refuted_by(s.value) {
            return HypothesisVerdict::CertifiedFail;
        }
    }
    if certificate.is_some_and(|c| spec.certified_by(c)) {
        return HypothesisVerdict::CertifiedHold;
    }
    let Some(s) = sup else {
        return HypothesisVerdict::Inconclusive;
    };
    let margin = opts.margin_fraction * spec.bound;
    let stable = match s.per_radius.as_slice() {
        [.., (_, a), (_, b)] => (b - a).abs() < margin / 4.0,
        _ => false,
    };
    if s.singular_samples == 0 && s.value <= spec.bound - margin && stable {
        HypothesisVerdict::NumericallyHolds
    } else {
        HypothesisVerdict::Inconclusive
    }
}

/// Samples `Re` of the oracle's defining expression.
pub fn run_oracle(oracle: OracleId, input: &PowerSeries, grid: &DiskGrid) -> Result<OracleReport, CriteriaError> {
    let expected = oracle.input_kind().normalization();
    if input.normalization() != expected {
        return Err(CriteriaError::InputKindMismatch {
            criterion: CriterionId::T1,
            expected,
            got: input.normalization(),
        });
    }
    let p = match oracle {
        OracleId::RePGt(_) => PFunction::from_series(input)?,
        OracleId::Starlike(_) => build_p(input, Substitution::Ratio)?,
        OracleId::Convex(_) => build_p(input, Substitution::Convexity)?,
        OracleId::BoundedTurning => build_p(input, Substitution::Deriv)?,
        OracleId::ReFOverZ => build_p(input, Substitution::Ratio0)?,
    };
    let inf = inf_real(&p, grid)?;
    let result = if inf.value <= oracle.threshold() {
        OracleOutcome::CertifiedFail
    } else {
        OracleOutcome::HoldsNumerically
    };
    Ok(OracleReport {
        id: oracle,
        result,
        inf_re: inf.value,
        witness: inf.witness,
        singular_samples: inf.singular_samples,
    })
}

/// Hypothesis verdict for `spec` on `input`, without running the oracle.
pub fn hypothesis(
    spec: &CriterionSpec,
    input: &PowerSeries,
    grid: &DiskGrid,
    opts: &VerdictOptions,
) -> Result<HypothesisReport, CriteriaError> {
    let expr = spec.expression(input)?;
    let certificate = expr
        .polynomial()
        .filter(|s| s.is_exact())
        .map(coefficient_sup_bound);
    let sup = match sup_modulus(&expr, grid) {
        Ok(s) => Some(s),
        Err(DiskError::AllSingular) => None,
        Err(e) => return Err(e.into()),
    };
    let verdict = classify(spec, sup.as_ref(), certificate, opts);
    Ok(HypothesisReport {
        verdict,
        sup: sup.as_ref().map(|s| s.value),
        bound: spec.bound,
        strict: spec.strict,
        witness: sup.as_ref().map(|s| s.witness),
        certificate,
        per_radius_max: sup.as_ref().map(|s| s.per_radius.clone()).unwrap_or_default(),
        singular_samples: sup.as_ref().map_or(grid.len(), |s| s.singular_samples),
    })
}

/// Runs hypothesis and conclusion for one input.
///
/// A certified hypothesis paired with a failing conclusion contradicts the
/// theorem behind the criterion; unless the spec is diagnostic this returns
/// [`CriteriaError::TheoremViolated`] carrying the full report.
pub fn check(
    spec: &CriterionSpec,
    input: &PowerSeries,
    grid: &DiskGrid,
    opts: &VerdictOptions,
) -> Result<CheckReport, CriteriaError> {
    let hyp = hypothesis(spec, input, grid, opts)?;
    let oracle = run_oracle(spec.oracle, input, grid)?;
    let consistency = Consistency::of(hyp.verdict, oracle.result);
    let report = CheckReport {
        criterion: spec.id,
        input: input.spec_string(),
        hypothesis: hyp,
        oracle,
        consistency,
    };
    if consistency == Consistency::Violation
        && report.hypothesis.verdict == HypothesisVerdict::CertifiedHold
        && !spec.diagnostic
    {
        return Err(CriteriaError::TheoremViolated(Box::new(report)));
    }
    Ok(report)
}
