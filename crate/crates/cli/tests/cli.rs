use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn nupair(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nupair"))
        .args(args)
        .current_dir(cwd)
        .env_remove("NUPAIR_MAX_N")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(args: &[&str], cwd: &Path) -> String {
    let o = nupair(args, cwd);
    assert!(o.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

fn write_spec(dir: &Path, name: &str, body: &str) -> String {
    fs::write(dir.join(name), body).unwrap();
    name.to_string()
}

fn builtin_spec(dir: &Path, name: &str) -> String {
    write_spec(dir, &format!("{name}.spec"), &format!("name = {name}\nkind = builtin\nbuiltin = {name}\n"))
}

/// Value column of the first CSV row with the given section and item.
fn report_value(csv: &str, section: &str, item: &str) -> Vec<String> {
    csv.lines()
        .map(|l| l.split(',').map(str::to_string).collect::<Vec<_>>())
        .filter(|c| c[0] == section && c[1] == item)
        .map(|c| c[3].clone())
        .collect()
}

#[test]
fn tabulate_mobius_to_file() {
    let dir = TempDir::new().unwrap();
    let mu = builtin_spec(dir.path(), "mu");
    ok(&["tabulate", &mu, "10", "-o", "mu.csv"], dir.path());
    let text = fs::read_to_string(dir.path().join("mu.csv")).unwrap();
    assert!(text.starts_with("n,value\n1,1\n"));
    assert!(text.lines().any(|l| l == "4,0"));
    assert!(text.lines().any(|l| l == "6,1"));
    assert_eq!(text.lines().count(), 11);
}

#[test]
fn tabulate_epsilon() {
    let dir = TempDir::new().unwrap();
    assert_eq!(ok(&["tabulate", "builtin:epsilon", "3"], dir.path()), "n,value\n1,1\n2,0\n3,0\n");
}

#[test]
fn tabulate_rules_first_match_wins() {
    let dir = TempDir::new().unwrap();
    let s = write_spec(dir.path(), "odd.spec", "name = odd\nkind = rules\nrules = p=2: 0; otherwise: 1\n");
    let out = ok(&["tabulate", &s, "6"], dir.path());
    assert!(out.lines().any(|l| l == "6,0"));
    assert!(out.lines().any(|l| l == "5,1"));
}

#[test]
fn tabulate_rational_rules() {
    let dir = TempDir::new().unwrap();
    let s = write_spec(dir.path(), "r.spec", "name = r\nkind = rules\nrule = otherwise: 1/p^k\n");
    let out = ok(&["tabulate", &s, "12"], dir.path());
    assert!(out.lines().any(|l| l == "12,1/12"));
}

#[test]
fn convolve_mobius_with_one_is_epsilon() {
    let dir = TempDir::new().unwrap();
    let out = ok(&["convolve", "builtin:mu", "builtin:one", "30"], dir.path());
    let expected: String = std::iter::once("n,value\n1,1\n".to_string())
        .chain((2..=30).map(|n| format!("{n},0\n")))
        .collect();
    assert_eq!(out, expected);
}

#[test]
fn invert_one_is_mobius() {
    let dir = TempDir::new().unwrap();
    assert_eq!(
        ok(&["invert", "builtin:one", "50"], dir.path()),
        ok(&["tabulate", "builtin:mu", "50"], dir.path())
    );
}

#[test]
fn pair_epsilon_mu_density() {
    let dir = TempDir::new().unwrap();
    let eps = builtin_spec(dir.path(), "epsilon");
    let mu = builtin_spec(dir.path(), "mu");
    let summary = ok(&["pair", &eps, &mu, "100000", "--density-x", "100000", "--out", "r"], dir.path());
    let line = summary.lines().find(|l| l.starts_with("supp(g) density")).unwrap();
    let value: f64 = line.rsplit(' ').next().unwrap().parse().unwrap();
    assert!((value - 0.6079).abs() < 5e-4, "{line}");
    assert_eq!(fs::read_to_string(dir.path().join("r/summary.txt")).unwrap(), summary);
    let csv = fs::read_to_string(dir.path().join("r/report.csv")).unwrap();
    assert!(csv.starts_with("section,item,x,value,mode,threshold,cutoff,tail_bound\n"));
    assert!(csv.lines().all(|l| l.split(',').count() == 8));
    assert_eq!(report_value(&csv, "density", "supp_g").last().unwrap(), "30397/50000");
}

#[test]
fn pair_mobius_one_gives_epsilon() {
    let dir = TempDir::new().unwrap();
    let summary = ok(&["pair", "builtin:mu", "builtin:one", "1000", "--density-x", "1000", "--out", "r"], dir.path());
    assert!(summary.contains("supp(g) density at x = 1000: 1/1000 = 0.001"), "{summary}");
}

#[test]
fn pair_identity_has_no_finite_mean() {
    let dir = TempDir::new().unwrap();
    let summary = ok(&["pair", "builtin:epsilon", "builtin:id", "100000", "--mean-value", "--out", "r"], dir.path());
    assert!(summary.contains("strictly increasing"), "{summary}");
    assert!(summary.contains("no finite mean value"), "{summary}");
    let csv = fs::read_to_string(dir.path().join("r/report.csv")).unwrap();
    assert_eq!(report_value(&csv, "mean", "g").last().unwrap(), "100001/2");
}

#[test]
fn pair_bound_classes_and_truncation() {
    let dir = TempDir::new().unwrap();
    let summary = ok(
        &[
            "pair",
            "builtin:powers_of_2",
            "builtin:mu",
            "20000",
            "--f-tail",
            "geometric:2",
            "--classes",
            "--verify-bound",
            "--truncate",
            "4",
            "--primes",
            "10000",
            "--out",
            "r",
        ],
        dir.path(),
    );
    assert!(summary.contains("inside supp g: true"), "{summary}");
    assert!(summary.contains("holds"), "{summary}");
    let csv = fs::read_to_string(dir.path().join("r/report.csv")).unwrap();
    let bound: f64 = report_value(&csv, "lower_bound", "bound")[0].parse().unwrap();
    assert!((bound - 3.0 / std::f64::consts::PI.powi(2)).abs() < 1e-3);
    assert_eq!(report_value(&csv, "class", "unclassified").last().unwrap(), "0");
    assert!(!report_value(&csv, "mean", "g_4").is_empty());
}

#[test]
fn pair_is_byte_deterministic() {
    let dir = TempDir::new().unwrap();
    for out in ["a", "b"] {
        ok(
            &["pair", "builtin:squarefree", "builtin:liouville", "5000", "--classes", "--mean-value", "--out", out],
            dir.path(),
        );
    }
    for file in ["report.csv", "summary.txt"] {
        let a = fs::read(dir.path().join("a").join(file)).unwrap();
        let b = fs::read(dir.path().join("b").join(file)).unwrap();
        assert_eq!(a, b, "{file} differs");
    }
}

#[test]
fn density_subcommands() {
    let dir = TempDir::new().unwrap();
    let m = ok(&["density", "multiples", "2,3"], dir.path());
    assert_eq!(report_value(&m, "multiples", "density"), ["2/3"]);
    let s = ok(&["density", "sieve", "2:0"], dir.path());
    assert_eq!(report_value(&s, "sieve", "density"), ["1/2"]);
    let s = ok(&["density", "sieve", "4:0", "9:0"], dir.path());
    assert_eq!(report_value(&s, "sieve", "density"), ["2/3"]);
    let mu = builtin_spec(dir.path(), "mu");
    let c = ok(&["density", "cnu", &mu, "--primes", "100000"], dir.path());
    let v: f64 = report_value(&c, "c_nu", "value")[0].parse().unwrap();
    assert!((v - 0.607927).abs() < 1e-6);
    let e = ok(&["density", "euler", &mu, "--primes", "10000"], dir.path());
    let lo: f64 = report_value(&e, "euler", "lower_bound")[0].parse().unwrap();
    let hi: f64 = report_value(&e, "euler", "upper_bound")[0].parse().unwrap();
    let six = 6.0 / std::f64::consts::PI.powi(2);
    assert!(lo <= six && six <= hi, "{lo} {six} {hi}");
}

#[test]
fn truncated_sieve_reports_certificate() {
    let dir = TempDir::new().unwrap();
    let out = ok(
        &["density", "sieve", "4:0", "9:0", "25:0", "--truncate", "2", "--tail-constants", "0.25,0.12,0.04", "--tail-beyond", "0.1"],
        dir.path(),
    );
    assert_eq!(report_value(&out, "sieve", "density"), ["2/3"]);
    let lower: f64 = report_value(&out, "sieve", "lower")[0].parse().unwrap();
    assert!((lower - (2.0 / 3.0 - 0.14)).abs() < 1e-12);
}

#[test]
fn mean_value_command() {
    let dir = TempDir::new().unwrap();
    let out = ok(
        &["mean-value", "builtin:powers_of_2", "builtin:mu", "10000", "--y", "1,2,4", "--weighted-tail", "geometric:2"],
        dir.path(),
    );
    assert_eq!(report_value(&out, "drift", "1-2 holds"), ["true"]);
    assert_eq!(report_value(&out, "drift", "2-4 holds"), ["true"]);
    assert_eq!(report_value(&out, "lambda", "y=1"), ["6083/10000"]);
}

#[test]
fn floating_mode_records_threshold() {
    let dir = TempDir::new().unwrap();
    let out = ok(&["--floating", "--zero-test", "abs:1e-9", "tabulate", "builtin:mu", "4"], dir.path());
    assert!(out.contains("2,-1"));
    ok(&["--floating", "pair", "builtin:epsilon", "builtin:mu", "1000", "--out", "r"], dir.path());
    let csv = fs::read_to_string(dir.path().join("r/report.csv")).unwrap();
    assert!(csv.contains("density,supp_g,1000,76/125,floating,abs:1e-12,,"));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let gap = write_spec(d, "gap.spec", "name = gap\nkind = rules\nrules = p=2: 1\n");
    let bad = write_spec(d, "bad.spec", "name = bad\nkind = rules\nrules = p=2: 1\nfoo = 1\n");
    let table = write_spec(d, "t.spec", "name = t\nkind = table\nrow = 1,1\nrow = 2,3\n");
    let code = |args: &[&str]| nupair(args, d).status.code();

    assert_eq!(code(&["tabulate", &gap, "10"]), Some(2));
    let o = nupair(&["tabulate", &bad, "10"], d);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"));
    assert_eq!(code(&["tabulate", "missing.spec", "10"]), Some(2));
    assert_eq!(code(&["tabulate", "builtin:mu", "20000000"]), Some(2));
    assert_eq!(code(&["pair", "builtin:epsilon", &table, "10", "--out", "r"]), Some(2));

    assert_eq!(code(&["invert", "builtin:powers_of_2", "1"]), Some(0));
    assert_eq!(code(&["invert", &write_spec(d, "z.spec", "name = z\nkind = table\nrow = 2,1\n"), "5"]), Some(3));
    assert_eq!(code(&["pair", &table, "builtin:mu", "10", "--verify-bound", "--out", "r"]), Some(3));
    assert_eq!(code(&["mean-value", "builtin:epsilon", "builtin:id", "100", "--y", "1"]), Some(3));
    assert_eq!(code(&["density", "cnu", "builtin:one", "--primes", "100"]), Some(0));

    let many: Vec<String> = (0..21).map(|i| format!("{}:0", 1000 + i)).collect();
    let mut args = vec!["density", "sieve"];
    args.extend(many.iter().map(String::as_str));
    assert_eq!(code(&args), Some(4));
}

#[test]
fn max_n_from_environment() {
    let dir = TempDir::new().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_nupair"))
        .args(["tabulate", "builtin:mu", "100"])
        .env("NUPAIR_MAX_N", "50")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("[1, 50]"));
}
