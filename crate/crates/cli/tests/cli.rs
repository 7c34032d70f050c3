use std::path::Path;
use std::process::{Command, Output};
use unsd::recurrence::RecurrenceTable;

fn unsd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unsd"))
        .args(args)
        .env_remove("UNSD_TABLE")
        .output()
        .expect("spawn unsd")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Data rows of a CSV body (header and `status=` / `#` lines dropped).
fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with("status=") && !l.starts_with('#') && !l.is_empty())
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap_or_else(|_| panic!("not a number: {s}"))
}

#[test]
fn moments_at_zero() {
    let o = unsd(&["moments", "--delta", "0", "--kmax", "1"]);
    assert!(o.status.success());
    let r = rows(&stdout(&o));
    assert!((num(&r[0][1]) - 2.230_707_051_8).abs() < 1e-9);
    assert!((num(&r[1][2]) - 1.626_210_275_1).abs() < 1e-9);
}

#[test]
fn moment_vanishes_at_first_airy_zero() {
    let o = unsd(&["moments", "--delta", "2.33810741", "--kmax", "0"]);
    let r = rows(&stdout(&o));
    assert!(num(&r[0][1]).abs() <= 1e-6);
}

#[test]
fn missing_delta_is_usage_error() {
    let o = unsd(&["moments", "--kmax", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--delta"));
}

#[test]
fn one_point_rule() {
    let o = unsd(&["rule", "--delta", "0", "--n", "1"]);
    assert!(o.status.success());
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 1);
    assert!(num(&r[0][1]).abs() < 1e-15);
    assert!((num(&r[0][2]) - 0.729_011_132_9).abs() < 1e-9);
    assert!((num(&r[0][3]) - 2.230_707_051_8).abs() < 1e-9);
}

#[test]
fn rule_prints_weight_sum_check() {
    let o = unsd(&["rule", "--delta", "0", "--n", "2"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("k,re_t,im_t,re_w,im_w\n"));
    assert!(out.contains("status=PASS check=sum_weights_equals_mu0"));
}

#[test]
fn rule_from_omega_and_c_matches_delta() {
    let a = stdout(&unsd(&["rule", "--omega", "8", "--c", "0.5", "--n", "4"]));
    let b = stdout(&unsd(&["rule", "--delta", "2", "--n", "4"]));
    for (x, y) in rows(&a).iter().zip(rows(&b).iter()) {
        for j in 1..5 {
            assert!((num(&x[j]) - num(&y[j])).abs() < 1e-12);
        }
    }
}

#[test]
fn delta_conflicts_with_c() {
    let o = unsd(&["rule", "--delta", "1", "--omega", "8", "--c", "0.5", "--n", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn odd_rule_near_breakdown_is_handled() {
    let o = unsd(&["rule", "--delta", "3", "--n", "3"]);
    if !o.status.success() {
        assert!(stdout(&o).contains("status=FAIL"));
        assert!(stdout(&o).contains("delta"));
    }
}

fn integrate(extra: &[&str]) -> (f64, f64, f64) {
    let mut args = vec!["integrate"];
    args.extend_from_slice(extra);
    let o = unsd(&args);
    assert!(o.status.success(), "{}", stdout(&o));
    let r = rows(&stdout(&o));
    (num(&r[0][4]), num(&r[0][5]), num(&r[0][6]))
}

#[test]
fn unsd_matches_oracle_for_constant() {
    let (or, oi, _) = integrate(&["--f", "one", "--omega", "10", "--c", "0", "--method", "oracle"]);
    let (ur, ui, _) = integrate(&[
        "--f", "one", "--omega", "10", "--c", "0", "--method", "unsd", "--n", "8",
    ]);
    assert!((or - ur).hypot(oi - ui) <= 1e-8);
}

#[test]
fn unsd_sin4x_near_coalescence() {
    let (_, _, err) = integrate(&[
        "--f", "sin4x", "--omega", "100", "--c", "0.01", "--method", "unsd", "--n", "12",
    ]);
    assert!(err <= 1e-8, "{err}");
}

#[test]
fn delta_option_sets_c() {
    let a = integrate(&["--f", "x", "--omega", "8", "--delta", "2", "--method", "oracle"]);
    let b = integrate(&["--f", "x", "--omega", "8", "--c", "0.5", "--method", "oracle"]);
    assert!((a.0 - b.0).abs() < 1e-13 && (a.1 - b.1).abs() < 1e-13);
}

#[test]
fn unknown_integrand_lists_catalog() {
    let o = unsd(&["integrate", "--f", "exp", "--omega", "1", "--c", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr(&o);
    for name in ["one", "x", "sin4x", "sincos"] {
        assert!(e.contains(name), "{e}");
    }
}

#[test]
fn nsd_at_zero_c_reports_error_line() {
    let o = unsd(&[
        "integrate",
        "--f",
        "one",
        "--omega",
        "10",
        "--c",
        "0",
        "--method",
        "nsd",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).starts_with("status=FAIL error=InvalidArgument"));
}

fn build_table(path: &Path, degree: &str) -> Output {
    unsd(&[
        "table",
        "build",
        "--delta-max",
        "2",
        "--nmax",
        "8",
        "--cheb-degree",
        degree,
        "--path",
        path.to_str().unwrap(),
    ])
}

#[test]
fn table_roundtrip_is_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.toml");
    assert!(build_table(&path, "64").status.success());
    let table = RecurrenceTable::load(&path).unwrap();
    let o = unsd(&["table", "inspect", "--path", path.to_str().unwrap()]);
    assert!(o.status.success());
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 2 * (table.nmax + 1) * (table.cheb_degree + 1));
    for row in r {
        let k: usize = row[0].parse().unwrap();
        let m: usize = row[2].parse().unwrap();
        let e = &table.coefficients[k];
        let want = if row[1] == "beta" {
            e.beta_coeffs[m]
        } else {
            e.im_alpha_coeffs[m]
        };
        assert_eq!(num(&row[3]).to_bits(), want.to_bits());
    }
}

#[test]
fn table_with_low_degree_suggests_more() {
    let dir = tempfile::tempdir().unwrap();
    let o = build_table(&dir.path().join("t.toml"), "32");
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("--cheb-degree 64"), "{}", stdout(&o));
}

#[test]
fn table_rule_matches_direct_rule() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.toml");
    assert!(build_table(&path, "64").status.success());
    let via_env = Command::new(env!("CARGO_BIN_EXE_unsd"))
        .args(["rule", "--delta", "1.7", "--n", "8"])
        .env("UNSD_TABLE", &path)
        .output()
        .unwrap();
    assert!(via_env.status.success());
    let direct = unsd(&["rule", "--delta", "1.7", "--n", "8"]);
    let (a, b) = (rows(&stdout(&via_env)), rows(&stdout(&direct)));
    assert_eq!(a.len(), 8);
    for (x, y) in a.iter().zip(&b) {
        let d = (num(&x[1]) - num(&y[1])).hypot(num(&x[2]) - num(&y[2]));
        assert!(d <= 1e-9, "{d}");
    }
}

fn checks_pass(suite: &str) -> String {
    let o = unsd(&["verify", suite]);
    let out = stdout(&o);
    assert!(o.status.success(), "{out}");
    assert!(out.lines().any(|l| l.starts_with("status=PASS")));
    assert!(!out.contains("status=FAIL"));
    out
}

#[test]
fn verify_identities() {
    checks_pass("identities");
}

#[test]
fn verify_existence() {
    let out = checks_pass("existence");
    let first = out.lines().find(|l| l.starts_with("1,")).unwrap();
    let z = num(first[2..].split(' ').next().unwrap());
    assert!((z - 2.33811).abs() <= 1e-4);
}

#[test]
fn verify_orders() {
    checks_pass("orders");
}

#[test]
fn verify_chebyshev() {
    checks_pass("chebyshev");
}

/// `(c, method, abs_error)` from an error CSV.
fn error_rows(text: &str) -> Vec<(f64, String, usize, f64)> {
    rows(text)
        .into_iter()
        .map(|r| (num(&r[1]), r[3].clone(), r[2].parse().unwrap(), num(&r[4])))
        .collect()
}

#[test]
fn bench_err_vs_c_shows_nsd_blowup() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.csv");
    let o = unsd(&["bench", "err-vs-c", "--n", "6", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("omega,c,n,method,abs_error\n"));
    let r = error_rows(&text);
    let pick = |c: f64, m: &str| r.iter().find(|x| x.0 == c && x.1 == m).unwrap().3;
    // NSD degrades as c -> 0 while UNSD stays flat
    assert!(pick(1e-6, "nsd") >= 1e6 * pick(1e-6, "unsd"));
    assert!(pick(1e-6, "nsd") >= 10.0 * pick(1.0, "nsd"));
    let small: Vec<f64> = r.iter().filter(|x| x.1 == "unsd" && x.0 <= 1e-2).map(|x| x.3).collect();
    let hi = small.iter().copied().fold(0.0, f64::max);
    let lo = small.iter().copied().fold(f64::INFINITY, f64::min);
    assert!(hi <= 2.0 * lo, "{small:?}");
}

#[test]
fn bench_odd_even_spikes_for_odd_n() {
    let o = unsd(&["bench", "odd-even", "--f", "sincos", "--omega", "1"]);
    assert!(o.status.success());
    let r = error_rows(&stdout(&o));
    for n in 1..=8usize {
        let mut e: Vec<f64> = r.iter().filter(|x| x.2 == n && x.3.is_finite()).map(|x| x.3).collect();
        e.sort_by(f64::total_cmp);
        let med = e[e.len() / 2];
        let max = e[e.len() - 1];
        assert_eq!(max >= 1e3 * med, n % 2 == 1, "n = {n}: max {max:e}, median {med:e}");
    }
}

#[test]
fn bench_cheb_header_and_accuracy() {
    let o = unsd(&["bench", "cheb", "--ks", "100", "--ms", "1", "--ns", "8"]);
    let out = stdout(&o);
    assert!(out.starts_with("k,m,n,rel_error\n"));
    assert!(num(&rows(&out)[0][3]) < 1e-10);
}

#[test]
fn output_is_deterministic() {
    let args = ["bench", "err-vs-omega", "--omegas", "20,40,80"];
    assert_eq!(stdout(&unsd(&args)), stdout(&unsd(&args)));
    let args = ["rule", "--delta", "0.5", "--n", "6"];
    assert_eq!(stdout(&unsd(&args)), stdout(&unsd(&args)));
}
