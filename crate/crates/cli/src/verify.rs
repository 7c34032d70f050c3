//! Verification suites behind `unsd verify`.

use crate::{report, Check, CliResult};
use clap::ValueEnum;
use unsd::airy::{existence_scan, verify_identities};
use unsd::cheb::{cheb_moment, oracle_moment};
use unsd::experiments::{err_vs_omega_fixed_c, err_vs_omega_fixed_delta, loglog_slope, SaddleMethod, TestFunction};
use unsd::recurrence::StringEquations;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Identities,
    Existence,
    Orders,
    Chebyshev,
}

pub fn run(suite: Suite) -> CliResult<bool> {
    let checks = match suite {
        Suite::Identities => identities()?,
        Suite::Existence => existence()?,
        Suite::Orders => orders()?,
        Suite::Chebyshev => chebyshev()?,
    };
    Ok(report(&checks))
}

fn identities() -> CliResult<Vec<Check>> {
    let grid: Vec<f64> = (0..=32).map(|j| -3.0 + 0.25 * j as f64).collect();
    let rep = verify_identities(&grid, 4, 256)?;
    for w in &rep.warnings {
        eprintln!("warning: {w}");
    }
    Ok(vec![
        Check::new(
            "toda_residual",
            rep.max_differential,
            "1e-20",
            rep.max_differential <= 1e-20,
        ),
        Check::new(
            "ratio_form_residual",
            rep.max_ratio_form,
            "1e-20",
            rep.max_ratio_form <= 1e-20,
        ),
        Check::new(
            "d2_derivative_residual",
            rep.d2_derivative,
            "1e-20",
            rep.d2_derivative <= 1e-20,
        ),
    ])
}

fn existence() -> CliResult<Vec<Check>> {
    let rep = existence_scan(-5.0, 10.0, 0.01, 8, 256)?;
    println!("n,zeros");
    for o in &rep.orders {
        let z: Vec<String> = o.zeros.iter().map(|z| format!("{z:.6}")).collect();
        println!("{},{}", o.n, z.join(" "));
    }
    let mut checks = Vec::new();
    let first = rep.order(1).and_then(|o| o.zeros.first().copied()).unwrap_or(f64::NAN);
    let dev = (first - 2.33811).abs();
    checks.push(Check::new("first_odd_zero_n1", first, "2.33811+-1e-4", dev <= 1e-4));
    for n in [2, 4, 6, 8] {
        let o = rep.order(n).expect("scanned order");
        let count = (o.zeros.len() + o.unresolved.len()) as f64;
        checks.push(Check::new(format!("even_zeros_n{n}"), count, "0", count == 0.0));
    }
    Ok(checks)
}

fn orders() -> CliResult<Vec<Check>> {
    let omegas = [50.0, 100.0, 200.0, 400.0];
    let src = StringEquations::default();
    let unsd = err_vs_omega_fixed_delta(TestFunction::Sin4x, 1.0, 6, &omegas, &src)?;
    let nsd = err_vs_omega_fixed_c(TestFunction::Sin4x, 1.0, SaddleMethod::Nsd, 6, &omegas, &src)?;
    let s_u = loglog_slope(&omegas, &unsd.iter().map(|r| r.abs_error).collect::<Vec<_>>());
    let s_n = loglog_slope(&omegas, &nsd.iter().map(|r| r.abs_error).collect::<Vec<_>>());
    Ok(vec![
        Check::new("unsd_n6_slope", s_u, "-4.333+-0.5", (s_u + 13.0 / 3.0).abs() <= 0.5),
        Check::new("nsd_n3_slope", s_n, "-3.5+-0.5", (s_n + 3.5).abs() <= 0.5),
    ])
}

fn chebyshev() -> CliResult<Vec<Check>> {
    let reference = oracle_moment(200, 200.0, 2500)?;
    let rel = (cheb_moment(200, 200.0, 8)? - reference).norm() / reference.norm();
    let mut checks = vec![Check::new("resonant_k200_n8", rel, "1e-6", rel <= 1e-6)];
    for m in [0.97, 1.0, 1.03] {
        let omega = 200.0 / m;
        let r = oracle_moment(200, omega, 2500)?;
        let e4 = (cheb_moment(200, omega, 4)? - r).norm() / r.norm();
        let e8 = (cheb_moment(200, omega, 8)? - r).norm() / r.norm();
        checks.push(Check::new(
            format!("n8_beats_n4_m{m}"),
            e8,
            format!("{e4:.3e}"),
            e8 < e4,
        ));
    }
    Ok(checks)
}
