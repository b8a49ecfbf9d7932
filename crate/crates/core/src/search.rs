//! Derivative-free searches over polynomial `p = 1 + c_1 z + ... + c_d z^d`.
//!
//! Three searches share one optimizer:
//!
//! - [`falsify`] looks for a `p` whose hypothesis is certified by the
//!   coefficient bound while `Re p` fails on the grid. None should exist.
//! - [`sharpness`] minimizes the sampled supremum of the hypothesis
//!   expression over functions whose conclusion fails, probing how close the
//!   bound is to being attained.
//! - [`converse_probe`] looks for a `p` with `Re p > α + 0.05` whose
//!   hypothesis fails, refuting the converse implication.
//!
//! The optimizer is random restarts plus adaptive coordinate descent on the
//! `2d` real parameters. Restart `i` draws from a ChaCha8 stream keyed by
//! `(seed, i)`, so results do not depend on how restarts are scheduled.
//!
//! The objectives only sample the outermost grid circle. `Re p` and the
//! polynomial hypothesis expressions are harmonic and analytic respectively,
//! so their extremes over the sampled disk sit on that circle. Every reported
//! counterexample is re-verified with [`check`] on the full grid.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::criteria::{
    check, make_t3, CheckReport, CriteriaError, CriterionId, CriterionSpec, HypothesisVerdict, InputKind,
    OracleOutcome, VerdictOptions,
};
use crate::disk::{coefficient_sup_bound, inf_real, refined_circle_max, sup_modulus, DiskGrid};
use crate::series::PowerSeries;
use crate::transforms::PFunction;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("bad search configuration: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Criteria(#[from] CriteriaError),
}

/// Penalty weight on `max(0, inf Re p - α)^2` in the sharpness objective.
pub const SHARPNESS_PENALTY: f64 = 100.0;
/// Required margin of `Re p` above `α` for a converse counterexample.
pub const CONVERSE_MARGIN: f64 = 0.05;

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub criterion: CriterionId,
    /// Polynomial degree `d`; the search has `2d` real parameters.
    pub degree: usize,
    /// Maximum number of objective evaluations over all restarts.
    pub budget: usize,
    pub restarts: usize,
    pub seed: u64,
    /// Initial per-coordinate step.
    pub initial_step: f64,
    /// Step multiplier after a failed move, in `(0, 1)`.
    pub decay: f64,
    /// Restart points have coefficients uniform in the disk of this radius.
    pub init_radius: f64,
    pub grid: DiskGrid,
    /// Worker threads for restarts; 0 uses the global pool. Does not affect results.
    pub workers: usize,
    /// Replaces the criterion bound to validate that the harness can find
    /// violations. Only honored by [`falsify`].
    pub bound_override: Option<f64>,
    /// Coefficients `c_1..c_d` evaluated before any random restart.
    pub start: Option<Vec<Complex64>>,
}

impl SearchConfig {
    pub fn new(criterion: CriterionId, degree: usize, budget: usize, seed: u64) -> Self {
        SearchConfig {
            criterion,
            degree,
            budget,
            restarts: 8,
            seed,
            initial_step: 0.25,
            decay: 0.5,
            init_radius: 1.0,
            grid: DiskGrid::default(),
            workers: 0,
            bound_override: None,
            start: None,
        }
    }

    fn validate(&self) -> Result<(), SearchError> {
        let bad = |m: &str| Err(SearchError::BadConfig(m.to_string()));
        if self.degree == 0 {
            return bad("degree must be at least 1");
        }
        if self.restarts == 0 {
            return bad("restarts must be at least 1");
        }
        if !(self.decay > 0.0 && self.decay < 1.0) {
            return bad("decay must lie in (0, 1)");
        }
        if !(self.initial_step > 0.0 && self.initial_step.is_finite()) {
            return bad("initial step must be positive");
        }
        if !(self.init_radius > 0.0 && self.init_radius.is_finite()) {
            return bad("init radius must be positive");
        }
        if let Some(s) = &self.start {
            if s.len() != self.degree {
                return bad("start must list exactly `degree` coefficients");
            }
        }
        if self.bound_override.is_some_and(|b| !(b > 0.0 && b.is_finite())) {
            return bad("bound override must be positive");
        }
        Ok(())
    }

    /// The `p`-criterion searched, with f-criteria mapped to their
    /// `p`-composition.
    pub fn target(&self) -> Result<CriterionSpec, SearchError> {
        let id = match self.criterion {
            CriterionId::C1(_) => CriterionId::T1,
            CriterionId::C2(_) => CriterionId::T2,
            CriterionId::RemarkT3Half => CriterionId::T3 { alpha: 0.5 },
            other => other,
        };
        let spec = CriterionSpec::lookup(id)?;
        if spec.input != InputKind::PFunction {
            return Err(SearchError::BadConfig(format!(
                "criterion {} has no p-function form to search",
                self.criterion
            )));
        }
        Ok(spec)
    }
}

/// What a search found.
#[derive(Debug, Clone, PartialEq)]
pub enum SearchOutcome {
    NoCounterexample,
    Counterexample {
        /// Coefficients `c_1..c_d` of the witness `p`.
        params: Vec<Complex64>,
        report: Box<CheckReport>,
    },
    BestValue {
        params: Vec<Complex64>,
        objective: f64,
        /// Sampled supremum of the hypothesis expression.
        sup: f64,
        /// Sampled infimum of `Re p`.
        inf_re: f64,
        /// `max(0, inf Re p - α)`; zero when the point is feasible.
        residual: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub outcome: SearchOutcome,
    pub evaluations: usize,
    pub seed: u64,
}

impl SearchResult {
    pub fn is_counterexample(&self) -> bool {
        matches!(self.outcome, SearchOutcome::Counterexample { .. })
    }
}

/// `p` from the coefficient list `c_1..c_d`.
pub fn p_from_params(params: &[Complex64]) -> PowerSeries {
    PowerSeries::class_p(params)
}

fn to_params(x: &[f64]) -> Vec<Complex64> {
    x.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect()
}

fn to_vector(params: &[Complex64]) -> Vec<f64> {
    params.iter().flat_map(|c| [c.re, c.im]).collect()
}

/// Evaluation counter enforcing the budget.
struct Budget {
    left: usize,
    used: usize,
}

impl Budget {
    fn take(&mut self) -> bool {
        if self.left == 0 {
            return false;
        }
        self.left -= 1;
        self.used += 1;
        true
    }
}

/// Adaptive coordinate descent. `objective` returns `None` to stop the
/// search early (a target was hit). Returns the best point and value.
fn coordinate_descent(
    mut x: Vec<f64>,
    step: f64,
    decay: f64,
    budget: &mut Budget,
    objective: &mut dyn FnMut(&[f64]) -> Option<f64>,
) -> (Vec<f64>, f64) {
    const EXPAND: f64 = 2.0;
    const MIN_STEP: f64 = 1e-13;
    if !budget.take() {
        return (x, f64::INFINITY);
    }
    let Some(mut fx) = objective(&x) else {
        return (x, f64::NEG_INFINITY);
    };
    let mut steps = vec![step; x.len()];
    loop {
        let mut moved = false;
        for i in 0..x.len() {
            if steps[i] < MIN_STEP {
                continue;
            }
            let mut improved = false;
            for dir in [1.0, -1.0] {
                if !budget.take() {
                    return (x, fx);
                }
                let mut y = x.clone();
                y[i] += dir * steps[i];
                let Some(fy) = objective(&y) else {
                    return (y, f64::NEG_INFINITY);
                };
                if fy < fx {
                    x = y;
                    fx = fy;
                    improved = true;
                    break;
                }
            }
            if improved {
                steps[i] *= EXPAND;
                moved = true;
            } else {
                steps[i] *= decay;
            }
        }
        if !moved && steps.iter().all(|&s| s < MIN_STEP) {
            return (x, fx);
        }
    }
}

/// Descends from the configured start point (restart 0 only), then from
/// fresh random points until the budget runs out or the objective signals a hit.
fn multistart(cfg: &SearchConfig, restart: usize, budget: &mut Budget, objective: &mut dyn FnMut(&[f64]) -> Option<f64>) {
    if restart == 0 {
        if let Some(start) = &cfg.start {
            let (_, v) = coordinate_descent(to_vector(start), cfg.initial_step, cfg.decay, budget, objective);
            if v == f64::NEG_INFINITY {
                return;
            }
        }
    }
    let mut rng = restart_rng(cfg.seed, restart);
    while budget.left > 0 {
        let x0 = random_point(&mut rng, cfg.degree, cfg.init_radius);
        let (_, v) = coordinate_descent(x0, cfg.initial_step, cfg.decay, budget, objective);
        if v == f64::NEG_INFINITY {
            return;
        }
    }
}

fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

fn random_point(rng: &mut ChaCha8Rng, degree: usize, radius: f64) -> Vec<f64> {
    (0..degree)
        .flat_map(|_| {
            let r = radius * rng.random::<f64>().sqrt();
            let t = std::f64::consts::TAU * rng.random::<f64>();
            [r * t.cos(), r * t.sin()]
        })
        .collect()
}

fn split_budget(total: usize, parts: usize, index: usize) -> usize {
    total / parts + usize::from(index < total % parts)
}

/// Runs `body` for every restart on the configured pool, in index order.
fn run_restarts<T: Send>(cfg: &SearchConfig, body: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    let work = || (0..cfg.restarts).into_par_iter().map(&body).collect::<Vec<T>>();
    if cfg.workers == 0 {
        work()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .expect("thread pool")
            .install(work)
    }
}

/// Quantities every objective needs for one candidate `p`.
struct Probe {
    certificate: f64,
    /// Largest `|expr|` over the outer-circle samples.
    grid_sup: f64,
    inf_re: f64,
}

fn probe(spec: &CriterionSpec, params: &[Complex64], outer: &DiskGrid) -> Option<Probe> {
    let p = p_from_params(params);
    let expr = spec.expression(&p).ok()?;
    let certificate = coefficient_sup_bound(expr.polynomial()?);
    let grid_sup = sup_modulus(&expr, outer).ok()?.value;
    let inf_re = inf_real(&PFunction::from_series(&p).ok()?, outer).ok()?.value;
    Some(Probe {
        certificate,
        grid_sup,
        inf_re,
    })
}

/// Full-grid verification of a falsification candidate.
fn verify_violation(spec: &CriterionSpec, params: &[Complex64], grid: &DiskGrid) -> Option<CheckReport> {
    let report = match check(spec, &p_from_params(params), grid, &VerdictOptions::default()) {
        Ok(r) => r,
        Err(CriteriaError::TheoremViolated(r)) => *r,
        Err(_) => return None,
    };
    (report.hypothesis.verdict == HypothesisVerdict::CertifiedHold
        && report.oracle.result == OracleOutcome::CertifiedFail)
        .then_some(report)
}

/// Re-runs the full check on stored witness parameters. Certified violations
/// are returned as reports rather than errors.
pub fn replay(cfg: &SearchConfig, params: &[Complex64]) -> Result<CheckReport, SearchError> {
    let mut spec = cfg.target()?;
    if let Some(b) = cfg.bound_override {
        spec = spec.with_bound_override(b);
    }
    match check(&spec, &p_from_params(params), &cfg.grid, &VerdictOptions::default()) {
        Ok(r) => Ok(r),
        Err(CriteriaError::TheoremViolated(r)) => Ok(*r),
        Err(e) => Err(e.into()),
    }
}

/// Searches for `p` with a certified hypothesis and a failing `Re p > α`.
pub fn falsify(cfg: &SearchConfig) -> Result<SearchResult, SearchError> {
    cfg.validate()?;
    let mut spec = cfg.target()?;
    if let Some(b) = cfg.bound_override {
        spec = spec.with_bound_override(b);
    }
    let alpha = spec.oracle.threshold();
    let outer = cfg.grid.outer_circle();

    let per_restart = run_restarts(cfg, |r| {
        let mut budget = Budget {
            left: split_budget(cfg.budget, cfg.restarts, r),
            used: 0,
        };
        let mut found: Option<(Vec<Complex64>, CheckReport)> = None;
        let mut objective = |x: &[f64]| -> Option<f64> {
            let params = to_params(x);
            let Some(pr) = probe(&spec, &params, &outer) else {
                return Some(f64::INFINITY);
            };
            if spec.certified_by(pr.certificate) && pr.inf_re <= alpha {
                if let Some(report) = verify_violation(&spec, &params, &cfg.grid) {
                    found = Some((params, report));
                    return None;
                }
            }
            let excess = if spec.certified_by(pr.certificate) {
                0.0
            } else {
                pr.certificate - spec.bound + 1e-12
            };
            Some(excess + (pr.inf_re - alpha).max(0.0))
        };
        multistart(cfg, r, &mut budget, &mut objective);
        (found, budget.used)
    });

    let evaluations = per_restart.iter().map(|(_, u)| u).sum();
    let outcome = per_restart
        .into_iter()
        .find_map(|(f, _)| f)
        .map_or(SearchOutcome::NoCounterexample, |(params, report)| SearchOutcome::Counterexample {
            params,
            report: Box::new(report),
        });
    Ok(SearchResult {
        outcome,
        evaluations,
        seed: cfg.seed,
    })
}

#[derive(Debug, Clone)]
struct Candidate {
    params: Vec<Complex64>,
    objective: f64,
    sup: f64,
    inf_re: f64,
    residual: f64,
}

impl Candidate {
    fn feasible(&self) -> bool {
        self.residual == 0.0
    }

    /// Feasible beats infeasible; then lower objective.
    fn beats(&self, other: &Candidate) -> bool {
        match (self.feasible(), other.feasible()) {
            (true, false) => true,
            (false, true) => false,
            _ => self.objective < other.objective,
        }
    }
}

/// Minimizes the sampled hypothesis supremum over `p` whose conclusion fails
/// on the grid, via the penalty `sup + 100 max(0, inf Re p - α)^2`.
///
/// The returned objective of a feasible point can never drop below the bound
/// (minus rounding); how close it gets is exploratory evidence only.
pub fn sharpness(cfg: &SearchConfig) -> Result<SearchResult, SearchError> {
    cfg.validate()?;
    let spec = cfg.target()?;
    let alpha = spec.oracle.threshold();
    let outer = cfg.grid.outer_circle();
    let r_max = cfg.grid.r_max();
    let angles = cfg.grid.angles();

    let evaluate = |params: Vec<Complex64>| -> Option<Candidate> {
        let p = p_from_params(&params);
        let expr = spec.expression(&p).ok()?;
        let (sup, _) = refined_circle_max(&expr, r_max, angles)?;
        let inf_re = inf_real(&PFunction::from_series(&p).ok()?, &outer).ok()?.value;
        let residual = (inf_re - alpha).max(0.0);
        Some(Candidate {
            params,
            objective: sup + SHARPNESS_PENALTY * residual * residual,
            sup,
            inf_re,
            residual,
        })
    };

    let per_restart = run_restarts(cfg, |r| {
        let total = split_budget(cfg.budget, cfg.restarts, r);
        let mut budget = Budget {
            left: total * 3 / 5,
            used: 0,
        };
        let mut best: Option<Candidate> = None;
        let record = |c: &Candidate, best: &mut Option<Candidate>| {
            if best.as_ref().is_none_or(|b| c.beats(b)) {
                *best = Some(c.clone());
            }
        };

        // Phase 1: penalized descent.
        let mut rng = restart_rng(cfg.seed, r);
        let x0 = match (&cfg.start, r) {
            (Some(s), 0) => to_vector(s),
            _ => random_point(&mut rng, cfg.degree, cfg.init_radius),
        };
        let mut objective = |x: &[f64]| -> Option<f64> {
            Some(match evaluate(to_params(x)) {
                Some(c) => {
                    let v = c.objective;
                    record(&c, &mut best);
                    v
                }
                None => f64::INFINITY,
            })
        };
        let (x1, _) = coordinate_descent(x0, cfg.initial_step, cfg.decay, &mut budget, &mut objective);

        // Radial projection onto the feasible boundary: Re(1 + t q) has its
        // minimum 1 + t min Re q, which reaches α at t = (1 - α) / (-min Re q).
        budget.left += total - total * 3 / 5;
        let q = to_params(&x1);
        let qfn = PowerSeries::from_coeffs(std::iter::once(Complex64::new(0.0, 0.0)).chain(q.iter().copied()).collect());
        let min_q = inf_real(&|z: Complex64| Ok(qfn.horner(z)), &outer).map(|e| e.value).unwrap_or(0.0);
        if min_q < 0.0 && budget.take() {
            let t = (1.0 - alpha) / (-min_q) * (1.0 + 1e-12);
            if let Some(c) = evaluate(q.iter().map(|c| c * t).collect()) {
                record(&c, &mut best);
            }
        }

        // Phase 2: descent restricted to feasible points.
        if let Some(start) = best.as_ref().filter(|b| b.feasible()).map(|b| to_vector(&b.params)) {
            let mut feasible_only = |x: &[f64]| -> Option<f64> {
                Some(match evaluate(to_params(x)) {
                    Some(c) if c.feasible() => {
                        let v = c.sup;
                        record(&c, &mut best);
                        v
                    }
                    _ => f64::INFINITY,
                })
            };
            coordinate_descent(start, cfg.initial_step * 0.1, cfg.decay, &mut budget, &mut feasible_only);
        }
        (best, budget.used)
    });

    let evaluations = per_restart.iter().map(|(_, u)| u).sum();
    let best = per_restart
        .into_iter()
        .filter_map(|(b, _)| b)
        .reduce(|acc, c| if c.beats(&acc) { c } else { acc });
    let outcome = match best {
        None => SearchOutcome::NoCounterexample,
        Some(c) => SearchOutcome::BestValue {
            objective: if c.feasible() { c.sup } else { c.objective },
            params: c.params,
            sup: c.sup,
            inf_re: c.inf_re,
            residual: c.residual,
        },
    };
    Ok(SearchResult {
        outcome,
        evaluations,
        seed: cfg.seed,
    })
}

/// Searches for `p` with `Re p >= α + 0.05` on the grid whose order-α
/// hypothesis fails at a grid sample, refuting the reverse implication.
/// `cfg.criterion` is ignored; the target is the order-α criterion.
pub fn converse_probe(alpha: f64, cfg: &SearchConfig) -> Result<SearchResult, SearchError> {
    cfg.validate()?;
    // Order 0 is exactly the T2 criterion; report it under that id.
    let spec = if alpha == 0.0 {
        CriterionSpec::lookup(CriterionId::T2)?
    } else {
        make_t3(alpha)?
    };
    let outer = cfg.grid.outer_circle();

    let verify = |params: &[Complex64]| -> Option<CheckReport> {
        let report = check(&spec, &p_from_params(params), &cfg.grid, &VerdictOptions::default()).ok()?;
        (report.hypothesis.verdict == HypothesisVerdict::CertifiedFail
            && report.oracle.result == OracleOutcome::HoldsNumerically
            && report.oracle.inf_re >= alpha + CONVERSE_MARGIN)
            .then_some(report)
    };

    let per_restart = run_restarts(cfg, |r| {
        let mut budget = Budget {
            left: split_budget(cfg.budget, cfg.restarts, r),
            used: 0,
        };
        let mut found: Option<(Vec<Complex64>, CheckReport)> = None;
        let mut objective = |x: &[f64]| -> Option<f64> {
            let params = to_params(x);
            let Some(pr) = probe(&spec, &params, &outer) else {
                return Some(f64::INFINITY);
            };
            let shortfall = (spec.bound - pr.grid_sup).max(0.0);
            let deficit = (alpha + CONVERSE_MARGIN - pr.inf_re).max(0.0);
            if shortfall == 0.0 && deficit == 0.0 {
                if let Some(report) = verify(&params) {
                    found = Some((params, report));
                    return None;
                }
            }
            Some(shortfall + deficit)
        };
        multistart(cfg, r, &mut budget, &mut objective);
        (found, budget.used)
    });

    let evaluations = per_restart.iter().map(|(_, u)| u).sum();
    let outcome = per_restart
        .into_iter()
        .find_map(|(f, _)| f)
        .map_or(SearchOutcome::NoCounterexample, |(params, report)| SearchOutcome::Counterexample {
            params,
            report: Box::new(report),
        });
    Ok(SearchResult {
        outcome,
        evaluations,
        seed: cfg.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::Consistency;
    use crate::transforms::Item;

    fn small_grid() -> DiskGrid {
        DiskGrid::with_levels(12, 256).unwrap()
    }

    #[test]
    fn zero_budget_does_nothing() {
        let mut cfg = SearchConfig::new(CriterionId::T2, 2, 0, 1);
        cfg.grid = small_grid();
        let r = falsify(&cfg).unwrap();
        assert_eq!(r.outcome, SearchOutcome::NoCounterexample);
        assert_eq!(r.evaluations, 0);
        let r = converse_probe(0.5, &cfg).unwrap();
        assert_eq!(r.outcome, SearchOutcome::NoCounterexample);
        assert_eq!(r.evaluations, 0);
    }

    #[test]
    fn bad_configs_are_rejected() {
        let mut cfg = SearchConfig::new(CriterionId::T2, 0, 10, 1);
        assert!(matches!(falsify(&cfg), Err(SearchError::BadConfig(_))));
        cfg.degree = 1;
        cfg.decay = 1.0;
        assert!(matches!(sharpness(&cfg), Err(SearchError::BadConfig(_))));
        cfg.decay = 0.5;
        cfg.criterion = CriterionId::Tzf;
        assert!(matches!(falsify(&cfg), Err(SearchError::BadConfig(_))));
        cfg.criterion = CriterionId::T2;
        cfg.start = Some(vec![]);
        assert!(matches!(falsify(&cfg), Err(SearchError::BadConfig(_))));
    }

    #[test]
    fn corollary_targets_map_to_p_forms() {
        let mut cfg = SearchConfig::new(CriterionId::C1(Item::III), 1, 10, 1);
        assert_eq!(cfg.target().unwrap().id, CriterionId::T1);
        cfg.criterion = CriterionId::C2(Item::I);
        assert_eq!(cfg.target().unwrap().id, CriterionId::T2);
        cfg.criterion = CriterionId::RemarkT3Half;
        assert_eq!(cfg.target().unwrap().bound, 0.25);
    }

    #[test]
    fn budget_law_holds() {
        for budget in [1, 7, 100, 333] {
            let mut cfg = SearchConfig::new(CriterionId::T2, 2, budget, 5);
            cfg.grid = small_grid();
            cfg.restarts = 3;
            assert!(falsify(&cfg).unwrap().evaluations <= budget);
            assert!(sharpness(&cfg).unwrap().evaluations <= budget);
            assert!(converse_probe(0.25, &cfg).unwrap().evaluations <= budget);
        }
    }

    #[test]
    fn diagnostic_override_is_found() {
        let mut cfg = SearchConfig::new(CriterionId::T2, 1, 2000, 7);
        cfg.grid = small_grid();
        cfg.bound_override = Some(10.0);
        let r = falsify(&cfg).unwrap();
        let SearchOutcome::Counterexample { params, report } = &r.outcome else {
            panic!("expected a counterexample, got {:?}", r.outcome);
        };
        assert_eq!(report.consistency, Consistency::Violation);
        assert_eq!(&replay(&cfg, params).unwrap(), report.as_ref());
    }

    #[test]
    fn converse_start_point_is_a_counterexample() {
        let mut cfg = SearchConfig::new(CriterionId::T2, 1, 50, 1);
        cfg.grid = small_grid();
        cfg.start = Some(vec![Complex64::new(0.9, 0.0)]);
        cfg.restarts = 1;
        let r = converse_probe(0.0, &cfg).unwrap();
        let SearchOutcome::Counterexample { params, report } = r.outcome else {
            panic!("expected a counterexample");
        };
        assert_eq!(params, vec![Complex64::new(0.9, 0.0)]);
        assert_eq!(r.evaluations, 1);
        assert_eq!(report.consistency, Consistency::Vacuous);
    }
}
