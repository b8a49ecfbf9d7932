//! Acceptance suite. Runs every criterion at its stated tolerance, prints one
//! PASS/FAIL line each and exits nonzero if any fails.
//!
//! Built with `harness = false` so the lines are always visible:
//! `cargo test -p univalence --test acceptance`.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use univalence::cli;
use univalence::criteria::{
    check, make_t3, Consistency, CriteriaError, CriterionId, CriterionSpec, HypothesisVerdict, OracleOutcome,
    VerdictOptions,
};
use univalence::disk::{jack_check, phi, phi_partial_k, sup_modulus, theorem2_extremal, DiskGrid};
use univalence::search::{converse_probe, falsify, replay, sharpness, SearchConfig, SearchOutcome};
use univalence::series::PowerSeries;
use univalence::transforms::{
    build_p, identity_zf, lhs_corollary, lhs_theorem1, lhs_theorem2, remark_identity, ExprId, Item, PointFn,
};
use univalence::Complex64;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_s: f64) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit_s, || {
        format!("runtime {:.1}s exceeds {limit_s}s", elapsed.as_secs_f64())
    })
}

/// Uniform point in the disk of radius `r`.
fn disk_point(rng: &mut ChaCha8Rng, r: f64) -> Complex64 {
    Complex64::from_polar(r * rng.random::<f64>().sqrt(), 2.0 * PI * rng.random::<f64>())
}

/// Random `f = z + a_2 z^2 + ...` with `sum n |a_n| = budget`, so that both
/// `f/z` and `f'` are zero-free on the closed disk.
fn zero_free_class_a(rng: &mut ChaCha8Rng, max_degree: usize, budget: f64) -> PowerSeries {
    let degree = rng.random_range(2..=max_degree);
    let raw: Vec<Complex64> = (2..=degree).map(|_| disk_point(rng, 1.0)).collect();
    let weight: f64 = raw.iter().enumerate().map(|(i, a)| (i + 2) as f64 * a.norm()).sum();
    let scale = if weight > 0.0 { budget / weight } else { 0.0 };
    PowerSeries::class_a(&raw.iter().map(|a| a * scale).collect::<Vec<_>>())
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let v = phi(-1.0, 1.0).map_err(|e| e.to_string())?;
    ensure((v - 2.5).abs() <= 1e-12, || format!("phi(-1,1) = {v}"))?;

    let n = 100;
    let mut worst_rel = 0.0f64;
    let mut min_phi = f64::INFINITY;
    for i in 0..n {
        let t = -1.0 + 1.99 * i as f64 / (n - 1) as f64;
        for j in 0..n {
            let k = 1.0 + 9.0 * j as f64 / (n - 1) as f64;
            let h = 1e-5 * k;
            let at = |dk: f64| phi(t, k + dk).unwrap();
            // Second-order stencils; one-sided at the k = 1 edge of the domain.
            let fd = if k - h >= 1.0 {
                (at(h) - at(-h)) / (2.0 * h)
            } else {
                (-3.0 * at(0.0) + 4.0 * at(h) - at(2.0 * h)) / (2.0 * h)
            };
            let an = phi_partial_k(t, k).map_err(|e| e.to_string())?;
            worst_rel = worst_rel.max((fd - an).abs() / an.abs().max(1e-300));
            min_phi = min_phi.min(phi(t, k).unwrap());
        }
    }
    ensure(worst_rel <= 1e-6, || format!("finite-difference mismatch {worst_rel:e}"))?;
    ensure(min_phi >= 2.5 - 1e-12, || format!("grid minimum of phi {min_phi}"))?;
    within(start.elapsed(), 5.0)?;
    Ok(format!("phi(-1,1)={v}, worst FD rel err {worst_rel:.1e}, grid min {min_phi}"))
}

fn criterion_2() -> Outcome {
    let v = theorem2_extremal(1.0, PI).map_err(|e| e.to_string())?;
    ensure((v - 0.5).abs() <= 1e-12, || format!("extremal(1, pi) = {v}"))?;
    let (nk, nt) = (200, 2000);
    let mut min = f64::INFINITY;
    for i in 0..nk {
        let k = 1.0 + 9.0 * i as f64 / (nk - 1) as f64;
        for j in 0..nt {
            let theta = PI / 64.0 + (2.0 * PI - PI / 32.0) * j as f64 / (nt - 1) as f64;
            min = min.min(theorem2_extremal(k, theta).map_err(|e| e.to_string())?);
        }
    }
    ensure(min >= 0.5 - 1e-9, || format!("grid minimum {min}"))?;
    Ok(format!("extremal(1,pi)={v}, grid min {min}"))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst_re = f64::INFINITY;
    let mut worst_im = 0.0f64;
    for trial in 0..1000 {
        let degree = rng.random_range(1..=6);
        let raw: Vec<Complex64> = (0..degree).map(|_| disk_point(&mut rng, 1.0)).collect();
        for r in [0.5f64, 0.9] {
            // Scale so that max |ω| on the circle is at most 0.99.
            let bound: f64 = raw.iter().enumerate().map(|(i, a)| a.norm() * r.powi(i as i32 + 1)).sum();
            let coeffs: Vec<Complex64> = raw.iter().map(|a| a * (0.99 / bound)).collect();
            let omega = PowerSeries::schwarz(&coeffs);
            let res = jack_check(&omega, r).map_err(|e| format!("trial {trial}: {e}"))?;
            for (_, k) in &res.ties {
                worst_re = worst_re.min(k.re);
                worst_im = worst_im.max(k.im.abs() / (1.0 + k.norm()));
            }
            ensure(res.satisfies_lemma(), || {
                format!("trial {trial} r={r}: k_est={} omega={}", res.k_est, omega.spec_string())
            })?;
        }
    }
    within(start.elapsed(), 60.0)?;
    Ok(format!(
        "2000 circles, min Re k {worst_re:.6}, max |Im k|/(1+|k|) {worst_im:.1e}, {:.1}s",
        start.elapsed().as_secs_f64()
    ))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let grid = DiskGrid::default();
    let opts = VerdictOptions::default();
    let specs = [
        CriterionSpec::lookup(CriterionId::T1).unwrap(),
        CriterionSpec::lookup(CriterionId::T2).unwrap(),
        make_t3(0.25).unwrap(),
        make_t3(0.5).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut holds = [0usize; 4];
    for trial in 0..10_000 {
        let degree = rng.random_range(1..=5);
        let tail: Vec<Complex64> = (0..degree).map(|_| disk_point(&mut rng, 0.5)).collect();
        let p = PowerSeries::class_p(&tail);
        for (s, spec) in specs.iter().enumerate() {
            let report = match check(spec, &p, &grid, &opts) {
                Ok(r) => r,
                Err(CriteriaError::TheoremViolated(r)) => *r,
                Err(e) => return Err(format!("trial {trial}: {e}")),
            };
            ensure(report.consistency != Consistency::Violation, || {
                format!("VIOLATION for {} on {}", report.criterion, report.input)
            })?;
            holds[s] += usize::from(report.hypothesis.verdict.holds());
        }
    }
    let sweep = start.elapsed();
    for criterion in [CriterionId::T1, CriterionId::T2] {
        for seed in 1..=5 {
            let cfg = SearchConfig::new(criterion, 3, 5000, seed);
            let r = falsify(&cfg).map_err(|e| e.to_string())?;
            ensure(r.outcome == SearchOutcome::NoCounterexample, || {
                format!("falsify {criterion} seed {seed}: {:?}", r.outcome)
            })?;
        }
    }
    within(start.elapsed(), 600.0)?;
    Ok(format!(
        "40000 checks, 0 violations (hypothesis held {holds:?}); 10 falsify runs clean; sweep {:.0}s, total {:.0}s",
        sweep.as_secs_f64(),
        start.elapsed().as_secs_f64()
    ))
}

fn max_gap_at(a: &dyn PointFn, b: &dyn PointFn, points: &[Complex64]) -> Result<(f64, usize), String> {
    let mut gap = 0.0f64;
    let mut singular = 0;
    for &z in points {
        match (a.eval(z), b.eval(z)) {
            (Ok(x), Ok(y)) => gap = gap.max((x - y).norm()),
            _ => singular += 1,
        }
    }
    Ok((gap, singular))
}

fn criterion_5() -> Outcome {
    let grid = DiskGrid::with_levels(12, 512).unwrap();
    let points: Vec<Complex64> = (0..grid.levels())
        .flat_map(|ri| (0..grid.angles()).map(move |ai| (ri, ai)))
        .map(|(ri, ai)| grid.point(ri, ai))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for trial in 0..500 {
        let f = zero_free_class_a(&mut rng, 6, 0.9);
        for (a, b) in [identity_zf(&f), remark_identity(&f)].into_iter().map(Result::unwrap) {
            let (gap, _) = max_gap_at(&a, &b, &points)?;
            ensure(gap <= 1e-10, || format!("trial {trial} {}: gap {gap:e} on {}", a.id(), f.spec_string()))?;
            worst = worst.max(gap);
        }
    }

    // Koebe closed forms on |z| <= 0.9.
    let koebe = PowerSeries::family(&univalence::series::NamedFamily::Koebe, 64);
    let inner: Vec<Complex64> = (1..=9)
        .flat_map(|i| (0..256).map(move |j| Complex64::from_polar(0.1 * i as f64, 2.0 * PI * j as f64 / 256.0)))
        .collect();
    let zf_closed = |z: Complex64| Ok(-2.0 * z * z / ((1.0 - z) * (1.0 - z)));
    let r1_closed = |z: Complex64| Ok(-2.0 * z / (1.0 - z));
    let (a, b) = identity_zf(&koebe).unwrap();
    let (c1, c2) = remark_identity(&koebe).unwrap();
    let mut koebe_worst = 0.0f64;
    for (e, closed) in [(&a, &zf_closed as &dyn PointFn), (&b, &zf_closed), (&c1, &r1_closed), (&c2, &r1_closed)] {
        let (gap, singular) = max_gap_at(e, closed, &inner)?;
        ensure(singular == 0 && gap <= 1e-10, || format!("koebe {}: gap {gap:e}", e.id()))?;
        koebe_worst = koebe_worst.max(gap);
    }
    Ok(format!("500 polynomials, worst gap {worst:.1e}; koebe closed forms worst gap {koebe_worst:.1e}"))
}

fn criterion_6() -> Outcome {
    let grid = DiskGrid::default();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for trial in 0..200 {
        let f = zero_free_class_a(&mut rng, 6, 0.9);
        for item in Item::ALL {
            let p = build_p(&f, item.substitution()).map_err(|e| e.to_string())?;
            for (direct, composed) in [
                (lhs_corollary(&f, ExprId::C1(item)).unwrap(), lhs_theorem1(&p)),
                (lhs_corollary(&f, ExprId::C2(item)).unwrap(), lhs_theorem2(&p)),
            ] {
                let a = sup_modulus(&direct, &grid).map_err(|e| e.to_string())?.value;
                let b = sup_modulus(&composed, &grid).map_err(|e| e.to_string())?.value;
                ensure((a - b).abs() <= 1e-9, || {
                    format!("trial {trial} {}: {a} vs {b} on {}", direct.id(), f.spec_string())
                })?;
                worst = worst.max((a - b).abs());
            }
        }
    }
    Ok(format!("200 inputs x 8 items, worst sup difference {worst:.1e}"))
}

fn criterion_7() -> Outcome {
    let grid = DiskGrid::default();
    let opts = VerdictOptions::default();

    let t1 = CriterionSpec::lookup(CriterionId::T1).unwrap();
    let r = check(&t1, &PowerSeries::class_p(&[c(0.5, 0.0)]), &grid, &opts).map_err(|e| e.to_string())?;
    ensure(r.hypothesis.verdict == HypothesisVerdict::CertifiedHold, || format!("T1: {:?}", r.hypothesis.verdict))?;
    let cert = r.hypothesis.certificate.unwrap_or(f64::NAN);
    ensure((cert - 2.25).abs() <= 1e-9, || format!("T1 certificate {cert}"))?;

    // T2 on 1 + z: the expression is -z^2.
    let t2 = CriterionSpec::lookup(CriterionId::T2).unwrap();
    let r = check(&t2, &PowerSeries::class_p(&[c(1.0, 0.0)]), &grid, &opts).map_err(|e| e.to_string())?;
    let w = r.hypothesis.witness.unwrap();
    let sup = r.hypothesis.sup.unwrap();
    ensure(r.hypothesis.verdict == HypothesisVerdict::CertifiedFail && sup >= 0.5, || {
        format!("T2: {:?} sup {sup}", r.hypothesis.verdict)
    })?;
    ensure((sup - w.norm_sqr()).abs() <= 1e-9, || format!("T2 sup {sup} vs |w|^2 {}", w.norm_sqr()))?;

    // T3(1/2) on 1 + z/4: the expression is -z^2/8.
    let t3 = make_t3(0.5).unwrap();
    let r = check(&t3, &PowerSeries::class_p(&[c(0.25, 0.0)]), &grid, &opts).map_err(|e| e.to_string())?;
    let sup = r.hypothesis.sup.unwrap();
    let w = r.hypothesis.witness.unwrap();
    let cert = r.hypothesis.certificate.unwrap_or(f64::NAN);
    ensure(r.consistency == Consistency::Consistent, || format!("T3: {:?}", r.consistency))?;
    ensure((cert - 0.125).abs() <= 1e-9, || format!("T3 certificate {cert}"))?;
    ensure((sup - w.norm_sqr() / 8.0).abs() <= 1e-9, || format!("T3 sup {sup} vs |w|^2/8"))?;
    ensure(sup <= 0.125 && 0.125 - sup <= 0.125 * (1.0 - grid.r_max().powi(2)) + 1e-12, || {
        format!("T3 sup {sup} not within the grid-radius gap of 1/8")
    })?;

    // Diagnostic bound: the harness must find violations of a wrong constant.
    let mut cfg = SearchConfig::new(CriterionId::T2, 1, 2000, 7);
    cfg.bound_override = Some(10.0);
    let found = falsify(&cfg).map_err(|e| e.to_string())?;
    let SearchOutcome::Counterexample { report, .. } = &found.outcome else {
        return Err(format!("diagnostic falsify: {:?}", found.outcome));
    };
    ensure(report.consistency == Consistency::Violation, || "diagnostic report not a violation".into())?;
    cfg.start = Some(vec![c(2.0, 0.0)]);
    cfg.restarts = 1;
    let seeded = falsify(&cfg).map_err(|e| e.to_string())?;
    let SearchOutcome::Counterexample { params, report: r2 } = &seeded.outcome else {
        return Err("1+2z not reported".into());
    };
    ensure(params == &vec![c(2.0, 0.0)], || format!("seeded witness {params:?}"))?;
    ensure((r2.hypothesis.certificate.unwrap() - 4.0).abs() <= 1e-9, || "certificate of 1+2z".into())?;
    ensure(r2.oracle.inf_re <= -0.75 && r2.oracle.result == OracleOutcome::CertifiedFail, || {
        format!("oracle on 1+2z: {:?}", r2.oracle)
    })?;
    Ok(format!(
        "T1 cert 2.25, T2 fail, T3 sup {sup} (cert 0.125), diagnostic witness {}",
        report.input
    ))
}

fn criterion_8() -> Outcome {
    let mut lines = Vec::new();
    for (criterion, degree) in [
        (CriterionId::T1, 2),
        (CriterionId::T2, 2),
        (CriterionId::T3 { alpha: 0.5 }, 2),
    ] {
        let bound = CriterionSpec::lookup(criterion).unwrap().bound;
        let mut best = f64::INFINITY;
        let mut feasible = 0;
        for seed in 0..10 {
            let cfg = SearchConfig::new(criterion, degree, 1500, seed);
            let r = sharpness(&cfg).map_err(|e| e.to_string())?;
            if let SearchOutcome::BestValue {
                objective, residual, ..
            } = r.outcome
            {
                if residual == 0.0 {
                    feasible += 1;
                    ensure(objective >= bound - 1e-9, || {
                        format!("{criterion} seed {seed}: feasible objective {objective} below {bound}")
                    })?;
                    best = best.min(objective);
                }
            }
        }
        lines.push(format!("{criterion}: {feasible}/10 feasible, best {best:.6} (gap {:.2e})", best - bound));
    }
    Ok(lines.join("; "))
}

fn criterion_9() -> Outcome {
    let mut cfg = SearchConfig::new(CriterionId::T2, 1, 100, 9);
    cfg.start = Some(vec![c(0.9, 0.0)]);
    let r = converse_probe(0.0, &cfg).map_err(|e| e.to_string())?;
    let SearchOutcome::Counterexample { params, report } = &r.outcome else {
        return Err(format!("no counterexample: {:?}", r.outcome));
    };
    ensure(params == &vec![c(0.9, 0.0)], || format!("witness {params:?}"))?;
    let sup = report.hypothesis.sup.unwrap();
    ensure(report.oracle.inf_re >= 0.1 - 1e-9, || format!("inf Re p {}", report.oracle.inf_re))?;
    ensure(sup >= 0.5, || format!("sup {sup}"))?;
    ensure((report.hypothesis.certificate.unwrap() - 0.81).abs() <= 1e-9, || "certificate not 0.81".into())?;

    // Replay through the CLI: same numbers in the JSON payload.
    let out = cli::run([
        "univalence", "check", "--criterion", "T2", "--function", &report.input, "--json", "--no-timing",
    ]);
    ensure(out.code == 0, || format!("cli exit {}: {}", out.code, out.stderr))?;
    let json: serde_json::Value = serde_json::from_str(&out.stdout).map_err(|e| e.to_string())?;
    let expect = cli::check_payload(report);
    for key in ["hypothesis", "oracle", "consistency", "singular_samples", "criterion"] {
        ensure(json[key] == expect[key], || format!("cli replay differs in {key}"))?;
    }
    let replayed = replay(&cfg, params).map_err(|e| e.to_string())?;
    ensure(&replayed == report.as_ref(), || "library replay differs".into())?;

    // Search-found converse witness at α = 1/2.
    let cfg = SearchConfig::new(CriterionId::T3 { alpha: 0.5 }, 2, 10_000, 3);
    let found = converse_probe(0.5, &cfg).map_err(|e| e.to_string())?;
    let SearchOutcome::Counterexample { params, report: r2 } = &found.outcome else {
        return Err(format!("alpha=0.5 converse: {:?}", found.outcome));
    };
    ensure(&replay(&cfg, params).map_err(|e| e.to_string())? == r2.as_ref(), || "alpha=0.5 replay differs".into())?;
    Ok(format!(
        "1+0.9z: inf Re p {:.6}, sup {sup:.6}, {}; alpha=1/2 witness {}",
        report.oracle.inf_re,
        report.consistency.as_str(),
        r2.input
    ))
}

fn criterion_10() -> Outcome {
    let args = [
        "univalence", "check", "--criterion", "C2.iii", "--function", "poly-f:0.1-0.2i,0.05", "--json", "--no-timing",
    ];
    let first = cli::run(args);
    let second = cli::run(args);
    ensure(first.code == 0 && first == second, || "check output differs between runs".into())?;

    let search = [
        "univalence", "sharpness", "--criterion", "T2", "--seed", "5", "--budget", "400", "--degree", "2",
        "--no-timing",
    ];
    let a = cli::run(search);
    let b = cli::run(search);
    ensure(a.code == 0 && a == b, || "sharpness output differs between runs".into())?;

    for (criterion, bound_override) in [(CriterionId::T2, Some(10.0)), (CriterionId::T1, None)] {
        let mut cfg = SearchConfig::new(criterion, 2, 800, 11);
        cfg.bound_override = bound_override;
        cfg.workers = 1;
        let one = (falsify(&cfg).unwrap(), sharpness(&cfg).unwrap());
        cfg.workers = 8;
        let eight = (falsify(&cfg).unwrap(), sharpness(&cfg).unwrap());
        ensure(one == eight, || format!("{criterion}: 1 vs 8 workers differ"))?;
    }
    Ok("CLI JSON byte-identical; search identical across 1 and 8 workers".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("phi fidelity", criterion_1),
        ("T2 extremal value", criterion_2),
        ("Jack lemma suite", criterion_3),
        ("no-violation sweep", criterion_4),
        ("identity suite", criterion_5),
        ("corollary path equivalence", criterion_6),
        ("hand-checkable fixtures", criterion_7),
        ("sharpness lower-bound law", criterion_8),
        ("converse refutation", criterion_9),
        ("determinism", criterion_10),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let n = i + 1;
        if only.is_some_and(|o| o != n) {
            continue;
        }
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {n:>2} {name} [{secs:.1}s]: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {n:>2} {name} [{secs:.1}s]: {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
