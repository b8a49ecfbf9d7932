use univalence::cli::{self, check_payload, parse_function, Output};
use univalence::criteria::{check, make_t3, CriterionId, CriterionSpec, VerdictOptions};
use univalence::disk::{jack_check, DiskGrid};
use univalence::series::PowerSeries;
use univalence::Complex64;

fn run(args: &[&str]) -> Output {
    cli::run(std::iter::once("univalence").chain(args.iter().copied()))
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_str(&out.stdout).expect("stdout is JSON")
}

#[test]
fn check_json_matches_library_payload() {
    let out = run(&["check", "--criterion", "T1", "--function", "poly-p:0.5", "--json", "--no-timing"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v = json(&out);
    assert_eq!(v["consistency"], "CONSISTENT");
    assert_eq!(v["schema"], 1);
    assert_eq!(v["alpha"], serde_json::Value::Null);
    assert_eq!(v["grid"], serde_json::json!({"levels": 12, "angles": 4096, "order": 64}));
    assert!(v.get("timing").is_none());

    let spec = CriterionSpec::lookup(CriterionId::T1).unwrap();
    let p = PowerSeries::class_p(&[Complex64::new(0.5, 0.0)]);
    let report = check(&spec, &p, &DiskGrid::default(), &VerdictOptions::default()).unwrap();
    let lib = check_payload(&report);
    for key in ["criterion", "hypothesis", "oracle", "consistency", "singular_samples"] {
        assert_eq!(v[key], lib[key], "{key}");
    }
    assert_eq!(v["hypothesis"]["certified"], 2.25);
}

#[test]
fn json_keys_are_sorted_and_timing_is_optional() {
    let out = run(&["check", "--criterion", "T2", "--function", "poly-p:0.2", "--json", "--angles", "64"]);
    let v = json(&out);
    assert!(v["timing"]["elapsed_ms"].is_number());
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    // Key order in the text itself, not only in the parsed map.
    let first_keys: Vec<&str> = out
        .stdout
        .lines()
        .filter(|l| l.starts_with("  \""))
        .map(|l| l.trim().split('"').nth(1).unwrap())
        .collect();
    let mut s = first_keys.clone();
    s.sort();
    assert_eq!(first_keys, s);
}

#[test]
fn koebe_is_vacuous_for_the_first_corollary() {
    let out = run(&["check", "--criterion", "C1.i", "--function", "koebe"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("hypothesis: CERTIFIED_FAIL"));
    assert!(out.stdout.contains("consistency: VACUOUS"));
}

#[test]
fn bare_t3_takes_alpha_flag() {
    let out = run(&["check", "--criterion", "T3", "--function", "poly-p:0.25", "--alpha", "0.5", "--json", "--no-timing"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v = json(&out);
    assert_eq!(v["criterion"], "T3:alpha=0.5");
    assert_eq!(v["alpha"], 0.5);
    assert_eq!(v["consistency"], "CONSISTENT");
    assert_eq!(v["hypothesis"]["certified"], 0.125);
    let sup = v["hypothesis"]["sup"].as_f64().unwrap();
    assert!(sup < 0.125 && sup > 0.1249);

    let same = run(&["check", "--criterion", "T3:alpha=0.5", "--function", "poly-p:0.25", "--json", "--no-timing"]);
    assert_eq!(same.stdout, out.stdout);

    let lib = check(
        &make_t3(0.5).unwrap(),
        &PowerSeries::class_p(&[Complex64::new(0.25, 0.0)]),
        &DiskGrid::default(),
        &VerdictOptions::default(),
    )
    .unwrap();
    assert_eq!(v["hypothesis"], check_payload(&lib)["hypothesis"]);
}

#[test]
fn csv_check_row() {
    let out = run(&["check", "--criterion", "C2.iv", "--function", "poly-f:1", "--csv", "--angles", "128"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let lines: Vec<&str> = out.stdout.split('\n').collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], cli::CHECK_CSV_HEADER);
    assert!(lines[1].starts_with("C2.iv,\"poly-f:1\",,12,128,64,"));
    assert_eq!(lines[2], "");
    assert!(!out.stdout.contains('\r'));
}

#[test]
fn jack_matches_library() {
    let out = run(&["jack", "--omega", "omega:1,0.3", "--r", "0.9", "--json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v = json(&out);
    let k_re = v["k_est"]["re"].as_f64().unwrap();
    let k_im = v["k_est"]["im"].as_f64().unwrap();
    assert!((k_re - 1.21260).abs() < 1e-5, "{k_re}");
    assert!(k_im.abs() < 1e-6);
    let lib = jack_check(&parse_function("omega:1,0.3", 64).unwrap(), 0.9).unwrap();
    assert_eq!(k_re, lib.k_est.re);
    assert_eq!(k_im, lib.k_est.im);
    assert_eq!(v["lemma"], "HOLDS");

    assert_eq!(run(&["jack", "--omega", "poly-p:1", "--r", "0.9"]).code, 1);
}

#[test]
fn phi_prints_fifteen_significant_digits() {
    let out = run(&["phi", "--t", "-1", "--k", "1"]);
    assert_eq!(out.stdout, "2.5\n0.5\n");
    let out = run(&["phi", "--t", "0.3", "--k", "2"]);
    let lines: Vec<&str> = out.stdout.lines().collect();
    let v = univalence::disk::phi(0.3, 2.0).unwrap();
    assert_eq!(lines[0], cli::format_significant(v, 15));
    assert!((lines[0].parse::<f64>().unwrap() - v).abs() <= 1e-14 * v);
    assert_eq!(run(&["phi", "--t", "1", "--k", "1"]).code, 1);
}

#[test]
fn identity_subcommand() {
    let out = run(&["identity", "--which", "zf", "--function", "poly-f:0.3"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let gap: f64 = out
        .stdout
        .lines()
        .find_map(|l| l.strip_prefix("max_gap: "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(gap < 1e-10);
    let out = run(&["identity", "--which", "remark", "--function", "poly-f:0.1+0.1i,0.05"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert_eq!(run(&["identity", "--which", "nope", "--function", "identity"]).code, 1);
}

#[test]
fn boundary_csv_rows() {
    let out = run(&["boundary-csv", "--criterion", "T2", "--function", "poly-p:1", "--r", "0.5", "--angles", "16"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[0], "theta,re,im,abs");
    assert_eq!(lines.len(), 17);
    assert!(out.stdout.ends_with('\n') && !out.stdout.contains('\r'));
    // The expression is -z^2, so every row has |expr| = r^2.
    for row in &lines[1..] {
        let abs: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
        assert!((abs - 0.25).abs() < 1e-15, "{row}");
    }
}

#[test]
fn usage_errors() {
    let cases: &[&[&str]] = &[
        &[],
        &["check", "--function", "identity"],
        &["check", "--criterion", "C1.v", "--function", "identity"],
        &["check", "--criterion", "T1", "--function", "poly-f:0.1"],
        &["check", "--criterion", "T2", "--function", "poly-p:0.1", "--alpha", "0.2"],
        &["check", "--criterion", "T3:alpha=1", "--function", "poly-p:0.1"],
        &["check", "--criterion", "T1", "--function", "poly-p:0.1", "--angles", "0"],
        &["check", "--criterion", "T1", "--function", "poly-p:0.1", "--json", "--csv"],
        &["sharpness", "--criterion", "T2"],
        &["falsify", "--criterion", "TZF", "--seed", "1"],
        &["converse", "--criterion", "T1", "--seed", "1"],
        &["boundary-csv", "--criterion", "T2", "--function", "poly-p:1", "--r", "1"],
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(out.code, 1, "{args:?}: {}", out.stdout);
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn malformed_function_specs_report_offsets() {
    let cases: &[(&str, usize)] = &[
        ("", 0),
        ("x", 0),
        ("koeb", 4),
        ("koebe ", 5),
        ("identity:", 8),
        ("halfplanes", 9),
        ("poly", 4),
        ("poly-", 5),
        ("poly-p", 6),
        ("poly-p:", 7),
        ("poly-p:a", 7),
        ("poly-p:1,", 9),
        ("poly-p:0.", 9),
        ("poly-p:0.5e", 10),
        ("poly-p:0.5+i", 11),
        ("poly-p:0.5+1", 12),
        ("poly-p:0.5*1i", 10),
        ("poly-f:1, 2", 9),
        ("poly-f:1;2", 8),
        ("omega:", 6),
        ("omega:-", 7),
        ("omega:1-2ii", 10),
        ("omega:1.2.3", 9),
    ];
    assert!(cases.len() >= 20);
    for &(spec, offset) in cases {
        let err = parse_function(spec, 8).unwrap_err();
        assert_eq!(err.offset, offset, "{spec:?}: {err}");
        let out = run(&["check", "--criterion", "T1", "--function", spec]);
        assert_eq!(out.code, 1);
        assert!(out.stderr.contains(&format!("byte {offset}")), "{spec:?}: {}", out.stderr);
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        &["check", "--criterion", "R2", "--function", "poly-f:0.05,0.01-0.02i", "--json", "--no-timing"][..],
        &["check", "--criterion", "TZF", "--function", "koebe", "--json", "--no-timing", "--order", "32"][..],
        &["falsify", "--criterion", "T2", "--seed", "3", "--budget", "300", "--degree", "2", "--no-timing"][..],
        &["converse", "--criterion", "T3", "--alpha", "0.5", "--seed", "3", "--budget", "300", "--no-timing"][..],
    ] {
        assert_eq!(run(args), run(args), "{args:?}");
    }
}

#[test]
fn search_subcommands() {
    let out = run(&[
        "falsify", "--criterion", "T2", "--seed", "7", "--degree", "1", "--budget", "2000", "--bound-override", "10",
        "--no-timing",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v = json(&out);
    assert_eq!(v["outcome"], "COUNTEREXAMPLE");
    assert_eq!(v["report"]["consistency"], "VIOLATION");

    let out = run(&[
        "sharpness", "--criterion", "T2", "--seed", "1", "--degree", "1", "--budget", "300", "--workers", "1",
        "--no-timing",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v = json(&out);
    assert_eq!(v["outcome"], "BEST_VALUE");
    assert!(v["sup"].as_f64().unwrap() >= 0.5 - 1e-9);

    let out = run(&[
        "converse", "--criterion", "T2", "--seed", "1", "--degree", "1", "--budget", "50", "--restarts", "1",
        "--start", "poly-p:0.9", "--no-timing",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v = json(&out);
    assert_eq!(v["outcome"], "COUNTEREXAMPLE");
    assert_eq!(v["evaluations"], 1);
    assert_eq!(v["function"], "poly-p:0.9");
}
