use std::path::{Path, PathBuf};
use std::process::Command;

use num_bigint::BigUint;
use serde_json::Value;

use pofcount::config::ProductDocumentation;
use pofcount_cli::{run, EXIT_FINDING, EXIT_INPUT, EXIT_LIMIT, EXIT_OK};

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .display()
        .to_string()
}

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn pofcount_with_stdin(args: &[&str], stdin: &str) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("pofcount").chain(args.iter().copied());
    let code = run(argv, &mut stdin.as_bytes(), &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn pofcount(args: &[&str]) -> Run {
    pofcount_with_stdin(args, "")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = args.to_vec();
    full.push("--json");
    let r = pofcount(&full);
    let v: Value = serde_json::from_str(&r.out).unwrap_or_else(|e| panic!("{e}: {}{}", r.out, r.err));
    (r.code, v)
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p: PathBuf = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

fn count_of(v: &Value) -> BigUint {
    v["result"]["count"].as_str().unwrap().parse().unwrap()
}

#[test]
fn count_small_formula() {
    let r = pofcount(&["count", &fixture("remark.txt")]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert!(r.out.contains("count        5\n"), "{}", r.out);
    let (code, v) = json(&["count", &fixture("remark.txt"), "--scope", "declared"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["result"]["count"], "5");
    assert_eq!(v["result"]["count_scientific"], "5.0e0");
    assert_eq!(v["result"]["format"], "bool");
    assert_eq!(v["exit_code"], 0);
}

#[test]
fn count_dimacs_from_stdin() {
    let r = pofcount_with_stdin(&["count", "-", "--json"], "p cnf 5 1\n1 0\n");
    assert_eq!(r.code, EXIT_OK);
    let v: Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["result"]["count"], "16");
    assert_eq!(v["result"]["format"], "dimacs");
    assert_eq!(v["result"]["scope_size"], 5);
    assert_eq!(v["inputs"][0]["path"], "-");
    assert_eq!(v["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn explicit_scope_and_format() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_temp(&dir, "f.txt", "a | b\n");
    let (_, v) = json(&["count", &f, "--scope", "a,b,c,d"]);
    assert_eq!(v["result"]["count"], "12");
    let r = pofcount(&["count", &f, "--scope", "a"]);
    assert_eq!(r.code, EXIT_INPUT);
    assert!(r.err.contains("`b`"), "{}", r.err);
    let r = pofcount(&["count", &f, "--format", "dimacs"]);
    assert_eq!(r.code, EXIT_INPUT);
}

#[test]
fn timeout_exits_with_limit_status() {
    let dir = tempfile::tempdir().unwrap();
    let hard = write_temp(&dir, "hard.txt", &pofcount::synth::random_clauses(200, 500, 3, 1));
    let (code, v) = json(&["count", &hard, "--timeout", "0.001"]);
    assert_eq!(code, EXIT_LIMIT);
    assert_eq!(v["result"]["status"], "timeout");
    assert!(v["result"]["count"].is_null());
    let r = pofcount(&["count", &hard, "--timeout", "0.001"]);
    assert_eq!(r.code, EXIT_LIMIT);
    assert!(!r.out.contains("count "), "{}", r.out);

    let doc = write_temp(&dir, "big.pof", &pofcount::synth::synthetic_documentation(1500, 8).text);
    let (code, v) = json(&["analyze", &doc, "total", "--node-limit", "10"]);
    assert_eq!(code, EXIT_LIMIT);
    assert_eq!(v["result"]["status"], "memory_limit");
}

#[test]
fn assumptions_match_textual_conjunction() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("(a -> b) & (b | c | !d) & (d <-> (a | c))", "a,!c"),
        ("(a & b) | (c & !d) | (a <-> d)", "-b,d"),
        ("a | b | c | d", "!a,!b,!c"),
        ("(a -> b) & (b -> c)", "a,!c"),
    ];
    for (i, (formula, assume)) in cases.iter().enumerate() {
        let f = write_temp(&dir, &format!("f{i}.txt"), formula);
        let lits: Vec<String> = assume
            .split(',')
            .map(|l| l.replacen('-', "!", 1))
            .collect();
        let conj = write_temp(&dir, &format!("g{i}.txt"), &format!("({formula}) & {}", lits.join(" & ")));
        let scope = "a,b,c,d";
        let flag = format!("--assume={assume}");
        let (_, with) = json(&["count", &f, "--scope", scope, &flag]);
        let (_, textual) = json(&["count", &conj, "--scope", scope]);
        assert_eq!(count_of(&with), count_of(&textual), "{formula} with {assume}");
    }
    let (_, v) = json(&["count", &fixture("remark.txt"), "--assume", "a,!a"]);
    assert_eq!(v["result"]["count"], "0");
    assert_eq!(v["result"]["trivially_inconsistent"], true);
    let r = pofcount(&["count", &fixture("remark.txt"), "--assume", "zz"]);
    assert_eq!(r.code, EXIT_INPUT);
}

#[test]
fn transform_variants() {
    let (code, v) = json(&["transform", &fixture("remark.txt"), "--variant", "equiv"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["result"]["clause_count"], 7);
    assert_eq!(v["result"]["aux_count"], 2);
    let (_, v) = json(&["transform", &fixture("remark.txt"), "--variant", "impl"]);
    assert_eq!(v["result"]["clause_count"], 4);

    let r = pofcount_with_stdin(&["transform", "-"], "true\n");
    assert_eq!(r.out.lines().next(), Some("p cnf 0 0"));
    let r = pofcount_with_stdin(&["transform", "-", "--json"], "true\n");
    let v: Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["result"]["aux_map"], serde_json::json!([]));
}

#[test]
fn transform_output_counts_back() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.cnf").display().to_string();
    let r = pofcount(&["transform", &fixture("remark.txt"), "--variant", "equiv", "-o", &out, "--annotate"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.contains("7 clauses"));
    let (_, v) = json(&["count", &out]);
    assert_eq!(v["result"]["count"], "5");
    let (_, v) = json(&["oracle", &out]);
    assert_eq!(v["result"]["count"], "5");
}

#[test]
fn analyze_toy_documentation() {
    let toy = fixture("toy.pof");
    let (code, v) = json(&["analyze", &toy, "total"]);
    assert_eq!((code, count_of(&v)), (EXIT_OK, BigUint::from(16u32)));

    let (_, v) = json(&["analyze", &toy, "freq", "e1"]);
    assert_eq!(v["result"]["numerator"], "6");
    assert_eq!(v["result"]["denominator"], "16");
    assert_eq!(v["result"]["decimal"], "0.375");

    let (code, v) = json(&["analyze", &toy, "order", &fixture("order_e1_e2.txt")]);
    assert_eq!(code, EXIT_FINDING);
    assert_eq!(v["result"]["status"], "refused");
    assert!(v["result"]["violated"].as_array().unwrap().len() >= 2);

    let (code, v) = json(&["analyze", &toy, "order", &fixture("order_e3_g1.txt")]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["result"]["supplemented"], serde_json::json!(["e3", "g1", "a2"]));

    let (code, v) = json(&["analyze", &toy, "parts", "gearbox"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["result"]["errors"], 0);
    let (code, v) = json(&["analyze", &toy, "parts", "trim"]);
    assert_eq!(code, EXIT_FINDING);
    assert_eq!(v["result"]["errors"], 1);

    let (code, v) = json(&["analyze", &toy, "overlap", "gearbox.10", "gearbox.20"]);
    assert_eq!((code, count_of(&v)), (EXIT_OK, BigUint::ZERO));
    let (code, _) = json(&["analyze", &toy, "overlap", "trim.10", "trim.20"]);
    assert_eq!(code, EXIT_FINDING);
}

#[test]
fn analyze_redundancy_and_comparison() {
    let dir = tempfile::tempdir().unwrap();
    let toy = fixture("toy.pof");
    let present = write_temp(&dir, "c1.txt", "e1 -> g1\n");
    let (code, v) = json(&["analyze", &toy, "redundant", &present]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["result"]["verdict"], "redundant_candidate");
    let new = write_temp(&dir, "c2.txt", "!a1\n");
    let (_, v) = json(&["analyze", &toy, "redundant", &new]);
    assert_eq!(v["result"]["verdict"], "count_changed");
    assert_eq!((v["result"]["before"].as_str(), v["result"]["after"].as_str()), (Some("16"), Some("8")));

    let (code, v) = json(&["analyze", &toy, "compare", &fixture("toy_no_a1.pof"), "--codes", "a1,e1"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["result"]["ratio"]["rational"], "2/1");
    assert_eq!(v["result"]["deltas"][0]["delta"], "-0.5");
}

#[test]
fn analysis_input_errors() {
    let toy = fixture("toy.pof");
    assert_eq!(pofcount(&["analyze", &toy, "freq", "zz"]).code, EXIT_INPUT);
    assert_eq!(pofcount(&["analyze", &toy, "parts", "nowhere"]).code, EXIT_INPUT);
    assert_eq!(pofcount(&["analyze", &toy, "frobnicate"]).code, EXIT_INPUT);
    let r = pofcount_with_stdin(&["analyze", "-", "total"], "codes: g1\nsr: e9 -> g1\n");
    assert_eq!(r.code, EXIT_INPUT);
    assert!(r.err.contains("e9"), "{}", r.err);
    assert_eq!(pofcount(&["count", &fixture("remark.txt"), "--timeout", "soon"]).code, EXIT_INPUT);
    assert_eq!(pofcount(&["count", &fixture("remark.txt"), "--heuristic", "best"]).code, EXIT_INPUT);
    assert_eq!(pofcount(&["--help"]).code, EXIT_OK);
}

#[test]
fn oracle_listing_and_refusal() {
    let r = pofcount_with_stdin(&["oracle", "-", "--list", "2"], "a | b\n");
    assert_eq!(r.code, EXIT_OK);
    let models: Vec<&str> = r.out.lines().filter_map(|l| l.strip_prefix("model")).map(str::trim).collect();
    assert_eq!(models, ["!a b", "a !b"]);

    let wide: Vec<String> = (0..40).map(|i| format!("v{i}")).collect();
    let r = pofcount_with_stdin(&["oracle", "-"], &wide.join(" | "));
    assert_eq!(r.code, EXIT_INPUT);
    assert!(r.err.contains("refused"), "{}", r.err);
    let r = pofcount_with_stdin(&["oracle", "-", "--max-vars", "3"], "a | b | c | d");
    assert_eq!(r.code, EXIT_INPUT);
}

#[test]
fn oracle_on_toy_formula() {
    let dir = tempfile::tempdir().unwrap();
    let doc = ProductDocumentation::parse(&std::fs::read_to_string(fixture("toy.pof")).unwrap()).unwrap();
    let text = doc.arena().display(doc.pof()).to_string();
    let f = write_temp(&dir, "pof.txt", &text);
    let scope: Vec<&str> = doc.codes().iter().map(|&c| doc.code_name(c)).collect();
    let scope = scope.join(",");
    let (code, v) = json(&["oracle", &f, "--scope", &scope]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["result"]["count"], "16");
}

/// Every count-like field is a decimal string (or null), never a number.
fn check_counts(v: &Value, path: &str) {
    const KEYS: [&str; 6] = ["count", "numerator", "denominator", "before", "after", "expected_total"];
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                if KEYS.contains(&k.as_str()) {
                    match x {
                        Value::Null => {}
                        Value::Object(_) => check_counts(x, &format!("{path}.{k}")),
                        Value::String(s) => {
                            s.parse::<BigUint>().unwrap_or_else(|_| panic!("{path}.{k} = {s}"));
                        }
                        other => panic!("{path}.{k} is {other}"),
                    }
                } else {
                    check_counts(x, &format!("{path}.{k}"));
                }
            }
        }
        Value::Array(xs) => xs.iter().for_each(|x| check_counts(x, path)),
        _ => {}
    }
}

#[test]
fn json_counts_are_exact_strings() {
    let toy = fixture("toy.pof");
    let no_a1 = fixture("toy_no_a1.pof");
    let runs: Vec<Vec<&str>> = vec![
        vec!["count", "PLACEHOLDER"],
        vec!["analyze", &toy, "total"],
        vec!["analyze", &toy, "freq", "a2"],
        vec!["analyze", &toy, "parts", "trim"],
        vec!["analyze", &toy, "compare", &no_a1, "--codes", "a1"],
        vec!["generate", "documentation", "--codes", "200"],
    ];
    let remark = fixture("remark.txt");
    for mut args in runs {
        if args[1] == "PLACEHOLDER" {
            args[1] = &remark;
        }
        let (_, v) = json(&args);
        check_counts(&v, "$");
    }
    let (_, v) = json(&["generate", "documentation", "--codes", "1500", "--seed", "8"]);
    let text = v["result"]["text"].as_str().unwrap();
    let doc = ProductDocumentation::parse(text).unwrap();
    assert_eq!(doc.codes().len(), 1500);
}

fn strip_times(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("time_seconds");
            m.remove("elapsed_seconds");
            m.values_mut().for_each(strip_times);
        }
        Value::Array(xs) => xs.iter_mut().for_each(strip_times),
        _ => {}
    }
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_temp(&dir, "r.txt", &pofcount::synth::random_clauses(14, 30, 3, 9));
    for extra in [vec![], vec!["--heuristic", "most-parents-random", "--seed", "5"], vec!["--cache-max", "3"]] {
        let mut args = vec!["count", f.as_str()];
        args.extend(extra);
        let (_, mut a) = json(&args);
        let (_, mut b) = json(&args);
        strip_times(&mut a);
        strip_times(&mut b);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_pofcount");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(status(&["count", &fixture("remark.txt")]), Some(EXIT_OK));
    assert_eq!(status(&["analyze", &fixture("toy.pof"), "order", &fixture("order_e1_e2.txt")]), Some(EXIT_FINDING));
    assert_eq!(status(&["count", "/nonexistent/input"]), Some(EXIT_INPUT));
    assert_eq!(status(&["bogus"]), Some(EXIT_INPUT));
}
