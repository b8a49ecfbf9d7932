//! JSON and CSV emission. JSON objects are `serde_json::Map`s, which are
//! key-sorted, and numbers print as shortest round-trip decimals.

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::criteria::CheckReport;
use crate::search::{SearchOutcome, SearchResult};

pub const SCHEMA: u32 = 1;
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Grid parameters echoed into reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridParams {
    pub levels: usize,
    pub angles: usize,
    pub order: usize,
}

pub fn complex_json(c: Complex64) -> Value {
    json!({ "re": c.re, "im": c.im })
}

fn opt_complex(c: Option<Complex64>) -> Value {
    c.map_or(Value::Null, complex_json)
}

/// The check report object: criterion, hypothesis, oracle and consistency.
pub fn check_payload(report: &CheckReport) -> Value {
    let h = &report.hypothesis;
    let o = &report.oracle;
    json!({
        "criterion": report.criterion.to_string(),
        "hypothesis": {
            "verdict": h.verdict.as_str(),
            "sup": h.sup,
            "bound": h.bound,
            "strict": h.strict,
            "witness": opt_complex(h.witness),
            "certified": h.certificate,
        },
        "oracle": {
            "id": o.id.to_string(),
            "result": o.result.as_str(),
            "inf_re": o.inf_re,
            "witness": complex_json(o.witness),
        },
        "consistency": report.consistency.as_str(),
        "singular_samples": report.singular_samples(),
    })
}

/// Full `check` run report.
pub fn run_report(
    report: &CheckReport,
    function: &str,
    alpha: Option<f64>,
    grid: GridParams,
    elapsed_ms: Option<f64>,
) -> Value {
    let mut v = check_payload(report);
    let obj = v.as_object_mut().expect("object");
    obj.insert("schema".into(), json!(SCHEMA));
    obj.insert("version".into(), json!(VERSION));
    obj.insert("function".into(), json!(function));
    obj.insert("alpha".into(), json!(alpha));
    obj.insert(
        "grid".into(),
        json!({ "levels": grid.levels, "angles": grid.angles, "order": grid.order }),
    );
    if let Some(ms) = elapsed_ms {
        obj.insert("timing".into(), json!({ "elapsed_ms": ms }));
    }
    v
}

/// Search result report for `falsify`, `sharpness` and `converse`.
pub fn search_report(command: &str, criterion: &str, result: &SearchResult, elapsed_ms: Option<f64>) -> Value {
    let params = |p: &[Complex64]| Value::Array(p.iter().copied().map(complex_json).collect());
    let mut v = json!({
        "schema": SCHEMA,
        "version": VERSION,
        "command": command,
        "criterion": criterion,
        "seed": result.seed,
        "evaluations": result.evaluations,
    });
    let obj = v.as_object_mut().expect("object");
    match &result.outcome {
        SearchOutcome::NoCounterexample => {
            obj.insert("outcome".into(), json!("NO_COUNTEREXAMPLE"));
        }
        SearchOutcome::Counterexample { params: p, report } => {
            obj.insert("outcome".into(), json!("COUNTEREXAMPLE"));
            obj.insert("params".into(), params(p));
            obj.insert("function".into(), json!(report.input));
            obj.insert("report".into(), check_payload(report));
        }
        SearchOutcome::BestValue {
            params: p,
            objective,
            sup,
            inf_re,
            residual,
        } => {
            obj.insert("outcome".into(), json!("BEST_VALUE"));
            obj.insert("params".into(), params(p));
            obj.insert("function".into(), json!(crate::search::p_from_params(p).spec_string()));
            obj.insert("objective".into(), json!(objective));
            obj.insert("sup".into(), json!(sup));
            obj.insert("inf_re".into(), json!(inf_re));
            obj.insert("residual".into(), json!(residual));
        }
    }
    if let Some(ms) = elapsed_ms {
        obj.insert("timing".into(), json!({ "elapsed_ms": ms }));
    }
    v
}

/// Pretty JSON with a trailing newline.
pub fn to_json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn num(x: f64) -> String {
    // Rust's float Display is locale-independent and never uses exponents.
    x.to_string()
}

fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub const CHECK_CSV_HEADER: &str = "criterion,function,alpha,levels,angles,order,verdict,sup,bound,strict,certified,\
witness_re,witness_im,oracle,oracle_result,inf_re,oracle_witness_re,oracle_witness_im,consistency,singular_samples";

/// One header line and one data row for a `check` run.
pub fn check_csv(report: &CheckReport, function: &str, alpha: Option<f64>, grid: GridParams) -> String {
    let h = &report.hypothesis;
    let o = &report.oracle;
    let fields = [
        report.criterion.to_string(),
        format!("\"{}\"", function.replace('"', "\"\"")),
        opt_num(alpha),
        grid.levels.to_string(),
        grid.angles.to_string(),
        grid.order.to_string(),
        h.verdict.as_str().to_string(),
        opt_num(h.sup),
        num(h.bound),
        h.strict.to_string(),
        opt_num(h.certificate),
        opt_num(h.witness.map(|w| w.re)),
        opt_num(h.witness.map(|w| w.im)),
        o.id.to_string(),
        o.result.as_str().to_string(),
        num(o.inf_re),
        num(o.witness.re),
        num(o.witness.im),
        report.consistency.as_str().to_string(),
        report.singular_samples().to_string(),
    ];
    format!("{CHECK_CSV_HEADER}\n{}\n", fields.join(","))
}

/// `theta,re,im,abs` rows; singular samples print `NaN`.
pub fn boundary_csv(rows: &[(f64, Option<Complex64>)]) -> String {
    let mut out = String::from("theta,re,im,abs\n");
    for (theta, v) in rows {
        let (re, im, abs) = v.map_or((f64::NAN, f64::NAN, f64::NAN), |v| (v.re, v.im, v.norm()));
        out.push_str(&format!("{},{},{},{}\n", num(*theta), num(re), num(im), num(abs)));
    }
    out
}

/// `x` to `digits` significant digits with trailing zeros removed, in the
/// style of C's `%g`.
pub fn format_significant(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if exp < -5 || exp >= digits as i32 {
        format!("{}e{}", trim(mantissa), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim(&format!("{x:.decimals$}"))
    }
}
