//! Command-line front end.
//!
//! [`run`] takes the argument vector and returns exit code and captured
//! streams, so the binary is a two-line shim and tests drive the CLI
//! in-process. Exit codes: 0 for consistent or vacuous outcomes, 1 for usage
//! and parse errors, 2 for a violation or a theorem-consistency failure.

mod report;
mod spec;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::criteria::{check, CheckReport, Consistency, CriteriaError, CriterionId, CriterionSpec, VerdictOptions};
use crate::disk::{jack_check, phi, phi_partial_k, DiskGrid};
use crate::search::{converse_probe, falsify, sharpness, SearchConfig, SearchError, SearchOutcome, SearchResult};
use crate::series::{format_complex, PowerSeries, DEFAULT_ORDER};
use crate::transforms::{identity_zf, remark_identity, ExprHandle};

pub use report::{
    boundary_csv, check_csv, check_payload, format_significant, run_report, search_report, to_json_text, GridParams,
    CHECK_CSV_HEADER, SCHEMA, VERSION,
};
pub use spec::{expected_normalization, parse_function, ParseError};

/// Exit code and captured output of one CLI invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    fn usage(msg: impl std::fmt::Display) -> Self {
        Output {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "univalence", version, about = "Executable univalence criteria for analytic functions in the unit disk")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct GridArgs {
    /// Number of radius levels J; radii are 1 - 2^-j for j = 1..J.
    #[arg(long, default_value_t = DiskGrid::DEFAULT_LEVELS)]
    radii_levels: usize,
    /// Angles per circle.
    #[arg(long, default_value_t = DiskGrid::DEFAULT_ANGLES)]
    angles: usize,
    /// Truncation order for koebe and halfplane.
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    order: usize,
}

impl GridArgs {
    fn grid(&self) -> Result<DiskGrid, Output> {
        DiskGrid::with_levels(self.radii_levels, self.angles).map_err(Output::usage)
    }

    fn params(&self) -> GridParams {
        GridParams {
            levels: self.radii_levels,
            angles: self.angles,
            order: self.order,
        }
    }
}

#[derive(Args, Debug, Clone)]
struct SearchArgs {
    /// Criterion id (T1, T2, T3:alpha=x, C1.*, C2.*, R2).
    #[arg(long)]
    criterion: String,
    /// Order for a bare `T3` criterion.
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    /// RNG seed; results are a pure function of the seed and flags.
    #[arg(long)]
    seed: u64,
    /// Polynomial degree of the searched p.
    #[arg(long, default_value_t = 3)]
    degree: usize,
    /// Total objective evaluations.
    #[arg(long, default_value_t = 5000)]
    budget: usize,
    #[arg(long, default_value_t = 8)]
    restarts: usize,
    /// Worker threads, 0 for all cores. Output does not depend on it.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// First candidate, as a `poly-p:` spec of exactly `degree` coefficients.
    #[arg(long)]
    start: Option<String>,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long)]
    no_timing: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Which {
    Zf,
    Remark,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one criterion on one function and cross-check its conclusion.
    Check {
        #[arg(long)]
        criterion: String,
        #[arg(long)]
        function: String,
        /// Order for a bare `T3` criterion.
        #[arg(long, allow_negative_numbers = true)]
        alpha: Option<f64>,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        #[arg(long)]
        csv: bool,
        /// Omit the timing field from JSON.
        #[arg(long)]
        no_timing: bool,
    },
    /// Locate the maximum of |ω| on |z| = r and report z0 ω'(z0)/ω(z0).
    Jack {
        #[arg(long)]
        omega: String,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        json: bool,
    },
    /// Print φ(t, k) and ∂φ/∂k on separate lines, 15 significant digits.
    Phi {
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        #[arg(long, allow_negative_numbers = true)]
        k: f64,
    },
    /// Minimize the hypothesis supremum over p whose conclusion fails.
    Sharpness {
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Search for a certified hypothesis with a failing conclusion.
    Falsify {
        #[command(flatten)]
        search: SearchArgs,
        /// Replace the criterion bound (diagnostic; violations are then expected).
        #[arg(long)]
        bound_override: Option<f64>,
    },
    /// Search for p with Re p > α + 0.05 whose order-α hypothesis fails.
    Converse {
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Compare two evaluation routes of the same expression on the grid.
    Identity {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long)]
        function: String,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Emit `theta,re,im,abs` rows of the hypothesis expression on |z| = r.
    BoundaryCsv {
        #[arg(long)]
        criterion: String,
        #[arg(long)]
        function: String,
        #[arg(long, allow_negative_numbers = true)]
        alpha: Option<f64>,
        #[arg(long)]
        r: f64,
        #[arg(long, default_value_t = DiskGrid::DEFAULT_ANGLES)]
        angles: usize,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
    },
    /// List the registered criteria.
    List,
}

/// Runs the CLI on a full argument vector (program name first).
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output {
                    code: 1,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Output::ok(text)
            };
        }
    };
    let result = match cli.command {
        Command::Check {
            criterion,
            function,
            alpha,
            grid,
            json,
            csv,
            no_timing,
        } => cmd_check(&criterion, &function, alpha, grid, Format::pick(json, csv), no_timing),
        Command::Jack { omega, r, json } => cmd_jack(&omega, r, json),
        Command::Phi { t, k } => cmd_phi(t, k),
        Command::Sharpness { search } => cmd_search("sharpness", &search, None),
        Command::Falsify { search, bound_override } => cmd_search("falsify", &search, bound_override),
        Command::Converse { search } => cmd_search("converse", &search, None),
        Command::Identity { which, function, grid } => cmd_identity(which, &function, grid),
        Command::BoundaryCsv {
            criterion,
            function,
            alpha,
            r,
            angles,
            order,
        } => cmd_boundary_csv(&criterion, &function, alpha, r, angles, order),
        Command::List => Ok(cmd_list()),
    };
    result.unwrap_or_else(|e| e)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Csv,
}

impl Format {
    fn pick(json: bool, csv: bool) -> Self {
        match (json, csv) {
            (true, _) => Format::Json,
            (_, true) => Format::Csv,
            _ => Format::Text,
        }
    }
}

/// Resolves a criterion flag, folding `--alpha` into a bare `T3`.
fn resolve_criterion(text: &str, alpha: Option<f64>) -> Result<CriterionSpec, Output> {
    let id = match (text, alpha) {
        ("T3", Some(a)) => format!("T3:alpha={a}"),
        ("T3", None) => return Err(Output::usage("criterion T3 needs --alpha or the form T3:alpha=<x>")),
        (_, Some(_)) => return Err(Output::usage("--alpha applies only to a bare T3 criterion")),
        (t, None) => t.to_string(),
    };
    let id: CriterionId = id.parse().map_err(Output::usage)?;
    CriterionSpec::lookup(id).map_err(Output::usage)
}

fn parse_spec(text: &str, order: usize) -> Result<PowerSeries, Output> {
    parse_function(text, order).map_err(|e| {
        let mut msg = format!("{e}\n  {text}\n  {}^", " ".repeat(e.offset));
        msg.insert_str(0, "invalid function spec: ");
        Output::usage(msg)
    })
}

fn elapsed_ms(start: Instant, no_timing: bool) -> Option<f64> {
    (!no_timing).then(|| start.elapsed().as_secs_f64() * 1e3)
}

fn text_report(r: &CheckReport) -> String {
    let h = &r.hypothesis;
    let o = &r.oracle;
    let opt = |x: Option<f64>| x.map_or("n/a".to_string(), |v| v.to_string());
    let mut s = String::new();
    let _ = writeln!(s, "criterion: {}", r.criterion);
    let _ = writeln!(s, "function: {}", r.input);
    let _ = writeln!(
        s,
        "hypothesis: {} sup={} bound={} ({}) certified={} witness={}",
        h.verdict.as_str(),
        opt(h.sup),
        h.bound,
        if h.strict { "strict" } else { "non-strict" },
        opt(h.certificate),
        h.witness.map_or("n/a".to_string(), format_complex),
    );
    let _ = writeln!(
        s,
        "oracle: {} {} inf_re={} witness={}",
        o.id,
        o.result.as_str(),
        o.inf_re,
        format_complex(o.witness)
    );
    let _ = writeln!(s, "consistency: {}", r.consistency.as_str());
    let _ = writeln!(s, "singular_samples: {}", r.singular_samples());
    s
}

/// Everything known about a violating run, for stderr.
fn diagnostic_dump(r: &CheckReport) -> String {
    let mut s = format!("VIOLATION for {} on {}\n", r.criterion, r.input);
    s.push_str(&text_report(r));
    s.push_str("per-radius hypothesis maxima:\n");
    for (radius, v) in &r.hypothesis.per_radius_max {
        let _ = writeln!(s, "  r={radius} max={v}");
    }
    s
}

fn cmd_check(
    criterion: &str,
    function: &str,
    alpha: Option<f64>,
    grid_args: GridArgs,
    format: Format,
    no_timing: bool,
) -> Result<Output, Output> {
    let start = Instant::now();
    let spec = resolve_criterion(criterion, alpha)?;
    let input = parse_spec(function, grid_args.order)?;
    let grid = grid_args.grid()?;
    let report = match check(&spec, &input, &grid, &VerdictOptions::default()) {
        Ok(r) => r,
        Err(CriteriaError::TheoremViolated(r)) => *r,
        Err(e) => return Err(Output::usage(e)),
    };
    let alpha = spec.oracle.threshold();
    let alpha = matches!(spec.id, CriterionId::T3 { .. }).then_some(alpha);
    let stdout = match format {
        Format::Json => to_json_text(&run_report(
            &report,
            function,
            alpha,
            grid_args.params(),
            elapsed_ms(start, no_timing),
        )),
        Format::Csv => check_csv(&report, function, alpha, grid_args.params()),
        Format::Text => text_report(&report),
    };
    if report.consistency == Consistency::Violation {
        return Ok(Output {
            code: 2,
            stdout,
            stderr: diagnostic_dump(&report),
        });
    }
    Ok(Output::ok(stdout))
}

fn cmd_jack(omega: &str, r: f64, json: bool) -> Result<Output, Output> {
    let w = parse_spec(omega, DEFAULT_ORDER)?;
    if !omega.starts_with("omega:") {
        return Err(Output::usage("--omega takes an omega: spec"));
    }
    let res = jack_check(&w, r).map_err(Output::usage)?;
    let holds = res.satisfies_lemma();
    let stdout = if json {
        let ties: Vec<_> = res
            .ties
            .iter()
            .map(|(z, k)| serde_json::json!({ "z": report::complex_json(*z), "k_est": report::complex_json(*k) }))
            .collect();
        to_json_text(&serde_json::json!({
            "schema": SCHEMA,
            "version": VERSION,
            "omega": omega,
            "r": res.r,
            "z0": report::complex_json(res.z0),
            "k_est": report::complex_json(res.k_est),
            "multiplicity": res.multiplicity,
            "ties": ties,
            "lemma": if holds { "HOLDS" } else { "FAILS" },
        }))
    } else {
        format!(
            "r: {}\nz0: {}\nk_est: {}\nmultiplicity: {}\nlemma: {}\n",
            res.r,
            format_complex(res.z0),
            format_complex(res.k_est),
            res.multiplicity,
            if holds { "HOLDS" } else { "FAILS" }
        )
    };
    Ok(Output {
        code: if holds { 0 } else { 2 },
        stdout,
        stderr: String::new(),
    })
}

fn cmd_phi(t: f64, k: f64) -> Result<Output, Output> {
    let v = phi(t, k).map_err(Output::usage)?;
    let d = phi_partial_k(t, k).map_err(Output::usage)?;
    Ok(Output::ok(format!(
        "{}\n{}\n",
        format_significant(v, 15),
        format_significant(d, 15)
    )))
}

fn search_config(args: &SearchArgs, bound_override: Option<f64>) -> Result<SearchConfig, Output> {
    let spec = resolve_criterion(&args.criterion, args.alpha)?;
    let mut cfg = SearchConfig::new(spec.id, args.degree, args.budget, args.seed);
    cfg.restarts = args.restarts;
    cfg.workers = args.workers;
    cfg.grid = args.grid.grid()?;
    cfg.bound_override = bound_override;
    if let Some(text) = &args.start {
        if !text.starts_with("poly-p:") {
            return Err(Output::usage("--start takes a poly-p: spec"));
        }
        let p = parse_spec(text, args.grid.order)?;
        cfg.start = Some(p.coeffs()[1..].to_vec());
    }
    Ok(cfg)
}

fn cmd_search(command: &str, args: &SearchArgs, bound_override: Option<f64>) -> Result<Output, Output> {
    let start = Instant::now();
    let cfg = search_config(args, bound_override)?;
    let result: Result<SearchResult, SearchError> = match command {
        "sharpness" => sharpness(&cfg),
        "falsify" => falsify(&cfg),
        _ => {
            let alpha = match cfg.criterion {
                CriterionId::T3 { alpha } => alpha,
                CriterionId::T2 => 0.0,
                _ => return Err(Output::usage("converse takes T2 or a T3 criterion")),
            };
            converse_probe(alpha, &cfg)
        }
    };
    let result = result.map_err(Output::usage)?;
    let spec = cfg.target().map_err(Output::usage)?;
    let stdout = to_json_text(&search_report(
        command,
        &spec.id.to_string(),
        &result,
        elapsed_ms(start, args.no_timing),
    ));
    // A real counterexample to a theorem, or a feasible point beating the
    // sharp constant, is a consistency failure.
    let failure = match (&result.outcome, command) {
        (SearchOutcome::Counterexample { .. }, "falsify") => bound_override.is_none(),
        (SearchOutcome::BestValue { sup, residual, .. }, "sharpness") => *residual == 0.0 && *sup < spec.bound - 1e-6,
        _ => false,
    };
    Ok(Output {
        code: if failure { 2 } else { 0 },
        stdout,
        stderr: String::new(),
    })
}

fn max_gap(a: &ExprHandle, b: &ExprHandle, grid: &DiskGrid) -> (f64, usize) {
    let mut gap = 0.0f64;
    let mut singular = 0;
    for ri in 0..grid.levels() {
        for ai in 0..grid.angles() {
            let z = grid.point(ri, ai);
            match (a.eval(z), b.eval(z)) {
                (Ok(x), Ok(y)) if x.is_finite() && y.is_finite() => {
                    gap = gap.max((x - y).norm() / x.norm().max(1.0));
                }
                _ => singular += 1,
            }
        }
    }
    (gap, singular)
}

fn cmd_identity(which: Which, function: &str, grid_args: GridArgs) -> Result<Output, Output> {
    let f = parse_spec(function, grid_args.order)?;
    let grid = grid_args.grid()?;
    let (a, b) = match which {
        Which::Zf => identity_zf(&f),
        Which::Remark => remark_identity(&f),
    }
    .map_err(Output::usage)?;
    let (gap, singular) = max_gap(&a, &b, &grid);
    let stdout = format!(
        "identity: {} vs {}\nmax_gap: {gap}\nsingular_samples: {singular}\n",
        a.id(),
        b.id()
    );
    Ok(Output {
        code: if gap < 1e-10 { 0 } else { 2 },
        stdout,
        stderr: String::new(),
    })
}

fn cmd_boundary_csv(
    criterion: &str,
    function: &str,
    alpha: Option<f64>,
    r: f64,
    angles: usize,
    order: usize,
) -> Result<Output, Output> {
    let spec = resolve_criterion(criterion, alpha)?;
    let input = parse_spec(function, order)?;
    if !(r > 0.0 && r < 1.0) || angles == 0 {
        return Err(Output::usage("need 0 < r < 1 and at least one angle"));
    }
    let expr = spec.expression(&input).map_err(Output::usage)?;
    let rows: Vec<(f64, Option<Complex64>)> = (0..angles)
        .map(|a| {
            let theta = std::f64::consts::TAU * a as f64 / angles as f64;
            (theta, expr.eval(Complex64::from_polar(r, theta)).ok())
        })
        .collect();
    Ok(Output::ok(boundary_csv(&rows)))
}

fn cmd_list() -> Output {
    let mut s = String::new();
    for c in crate::criteria::list_criteria() {
        let _ = writeln!(
            s,
            "{:<6} |expr| {} {} => {}",
            c.id.to_string(),
            if c.strict { "<" } else { "<=" },
            c.bound,
            c.oracle
        );
    }
    s.push_str("T3:alpha=<x> |expr| < (1-x)/2 => RE_P_GT:alpha=<x>\n");
    Output::ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> Output {
        run(std::iter::once("univalence").chain(args.iter().copied()))
    }

    #[test]
    fn phi_value_line() {
        let out = cli(&["phi", "--t", "-1", "--k", "1"]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        assert_eq!(out.stdout.lines().next(), Some("2.5"));
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(cli(&["check", "--criterion", "T9", "--function", "identity"]).code, 1);
        assert_eq!(cli(&["check", "--criterion", "T1", "--function", "poly-p:"]).code, 1);
        assert_eq!(cli(&["check", "--criterion", "T1", "--function", "identity"]).code, 1);
        assert_eq!(cli(&["check", "--criterion", "T3", "--function", "poly-p:0.1"]).code, 1);
        assert_eq!(cli(&["falsify", "--criterion", "T2"]).code, 1);
        assert_eq!(cli(&["bogus"]).code, 1);
        assert_eq!(cli(&["--help"]).code, 0);
    }

    #[test]
    fn parse_error_shows_caret() {
        let out = cli(&["check", "--criterion", "T1", "--function", "poly-p:1,,2", "--angles", "8"]);
        assert_eq!(out.code, 1);
        assert!(out.stderr.contains("byte 9"), "{}", out.stderr);
    }
}
