//! Benchmark sweeps behind `unsd bench`, written as CSV.
//!
//! Headers:
//! * `err_vs_omega`, `err_vs_c`, `odd_even`: `omega,c,n,method,abs_error`
//! * `cheb`: `k,m,n,rel_error`

use crate::{emit, parse_function, CliError, CliResult};
use clap::{Args, ValueEnum};
use std::path::PathBuf;
use unsd::experiments::{
    cheb_rows_to_csv, cheb_sweep, err_vs_c, err_vs_omega_fixed_c, err_vs_omega_fixed_delta, error_rows_to_csv,
    odd_even, SaddleMethod, TestFunction,
};
use unsd::recurrence::StringEquations;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    /// Error against omega at fixed delta (UNSD) or fixed c.
    ErrVsOmega,
    /// UNSD and NSD error against c at fixed omega.
    ErrVsC,
    /// UNSD error on a c grid for several n.
    OddEven,
    /// Relative error of resonant Chebyshev moments.
    Cheb,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BenchMethod {
    Unsd,
    Nsd,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(value_enum)]
    figure: Figure,
    /// Integrand: one, x, sin4x or sincos.
    #[arg(long = "f", value_parser = parse_function, default_value = "sin4x")]
    f: TestFunction,
    /// Total saddle-region points (err_vs_omega, err_vs_c).
    #[arg(long, default_value_t = 6)]
    n: usize,
    /// Fixed omega (err_vs_c, odd_even).
    #[arg(long)]
    omega: Option<f64>,
    /// Fixed delta for err_vs_omega with UNSD.
    #[arg(long, allow_negative_numbers = true, conflicts_with = "c")]
    delta: Option<f64>,
    /// Fixed c for err_vs_omega.
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,
    #[arg(long, value_enum, default_value_t = BenchMethod::Unsd)]
    method: BenchMethod,
    #[arg(long, value_delimiter = ',')]
    omegas: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    cs: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    ns: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    ks: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    ms: Option<Vec<f64>>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (lo.log10(), hi.log10());
    (0..count)
        .map(|j| 10f64.powf(a + (b - a) * j as f64 / (count - 1) as f64))
        .collect()
}

pub fn run(args: &BenchArgs) -> CliResult<bool> {
    let src = StringEquations::default();
    let csv = match args.figure {
        Figure::ErrVsOmega => {
            let omegas = args.omegas.clone().unwrap_or_else(|| log_grid(10.0, 1000.0, 9));
            let rows = match (args.method, args.c) {
                (BenchMethod::Unsd, None) => {
                    err_vs_omega_fixed_delta(args.f, args.delta.unwrap_or(1.0), args.n, &omegas, &src)?
                }
                (BenchMethod::Unsd, Some(c)) => {
                    err_vs_omega_fixed_c(args.f, c, SaddleMethod::Unsd, args.n, &omegas, &src)?
                }
                (BenchMethod::Nsd, c) => {
                    if args.delta.is_some() {
                        return Err(CliError::Usage("NSD sweeps take --c, not --delta".into()));
                    }
                    err_vs_omega_fixed_c(args.f, c.unwrap_or(1.0), SaddleMethod::Nsd, args.n, &omegas, &src)?
                }
            };
            error_rows_to_csv(&rows)
        }
        Figure::ErrVsC => {
            let cs = args.cs.clone().unwrap_or_else(|| log_grid(1e-6, 1.0, 13));
            error_rows_to_csv(&err_vs_c(args.f, args.omega.unwrap_or(100.0), args.n, &cs, &src)?)
        }
        Figure::OddEven => {
            let cs = args
                .cs
                .clone()
                .unwrap_or_else(|| (0..=600).map(|j| -2.0 + 0.02 * j as f64).collect());
            let ns = args.ns.clone().unwrap_or_else(|| (1..=8).collect());
            error_rows_to_csv(&odd_even(args.f, args.omega.unwrap_or(1.0), &ns, &cs, &src)?)
        }
        Figure::Cheb => {
            let ks = args.ks.clone().unwrap_or_else(|| vec![50, 100, 200]);
            let ms = args
                .ms
                .clone()
                .unwrap_or_else(|| vec![0.9, 0.95, 0.97, 1.0, 1.03, 1.05, 1.1]);
            let ns = args.ns.clone().unwrap_or_else(|| vec![2, 4, 6, 8]);
            cheb_rows_to_csv(&cheb_sweep(&ks, &ms, &ns, &src)?)
        }
    };
    match &args.out {
        Some(p) => {
            std::fs::write(p, &csv)?;
            eprintln!("wrote {}", p.display());
        }
        None => emit(&csv),
    }
    Ok(true)
}
