//! `unsd`: rule construction, integral evaluation, verification suites,
//! recurrence tables and benchmark CSV output.
//!
//! Exit status is 0 when every requested check passes, 1 when a check
//! fails and 2 on errors. Failures print a `status=FAIL ...` line.

mod bench;
mod verify;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use unsd::airy::moments;
use unsd::contours::{
    nsd_gamma, nsd_integral, oracle_integral, unsd_gamma, unsd_integral, OracleContour, OscillatorParams,
};
use unsd::experiments::TestFunction;
use unsd::gauss::{rule_to_csv, unsd_rule};
use unsd::recurrence::{build_table, CoefficientSource, RecurrenceTable, StringEquations, TableSource};

type C = Complex64;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] unsd::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn kind(&self) -> String {
        match self {
            CliError::Core(e) => {
                let dbg = format!("{e:?}");
                dbg.chars().take_while(|c| c.is_alphanumeric()).collect()
            }
            CliError::Io(_) => "Io".into(),
            CliError::Usage(_) => "Usage".into(),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(
    name = "unsd",
    version,
    about = "Uniform steepest-descent quadrature for coalescing saddles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Moments mu_k of the weight exp(i(t^3/3 - delta t)) as CSV.
    Moments {
        #[arg(long, allow_negative_numbers = true)]
        delta: f64,
        #[arg(long)]
        kmax: usize,
        #[arg(long, default_value_t = 256)]
        precision_bits: u32,
    },
    /// Nodes and weights of the n-point uniform rule as CSV.
    Rule {
        #[command(flatten)]
        point: DeltaArgs,
        #[arg(long)]
        n: usize,
        /// Recurrence table to take coefficients from.
        #[arg(long, env = "UNSD_TABLE")]
        table: Option<PathBuf>,
    },
    /// Evaluate int_a^b f(x) exp(i omega (x^3/3 - c x)) dx.
    Integrate(IntegrateArgs),
    /// Build or inspect a recurrence coefficient table.
    Table {
        #[command(subcommand)]
        action: TableAction,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: verify::Suite,
    },
    /// Write benchmark data as CSV.
    Bench(bench::BenchArgs),
}

/// `--delta`, or `--omega` with `--c` (then `delta = c omega^{2/3}`).
#[derive(Args, Debug, Clone)]
struct DeltaArgs {
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["omega", "c"], required_unless_present = "c")]
    delta: Option<f64>,
    #[arg(long, requires = "c")]
    omega: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires = "omega")]
    c: Option<f64>,
}

impl DeltaArgs {
    fn delta(&self) -> f64 {
        match (self.delta, self.omega, self.c) {
            (Some(d), _, _) => d,
            (None, Some(w), Some(c)) => OscillatorParams::new(w, c).delta,
            _ => unreachable!("clap enforces delta or (omega, c)"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Unsd,
    Nsd,
    Oracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Region {
    /// The real interval [a, b].
    Interval,
    /// The saddle contour from inf e^{5 i pi/6} to inf e^{i pi/6}.
    Gamma,
}

#[derive(Args, Debug)]
struct IntegrateArgs {
    /// Integrand: one, x, sin4x or sincos.
    #[arg(long = "f", value_parser = parse_function)]
    f: TestFunction,
    #[arg(long)]
    omega: f64,
    #[arg(
        long,
        allow_negative_numbers = true,
        conflicts_with = "delta",
        required_unless_present = "delta"
    )]
    c: Option<f64>,
    /// Sets c = delta omega^{-2/3}.
    #[arg(long, allow_negative_numbers = true)]
    delta: Option<f64>,
    #[arg(long, allow_negative_numbers = true, default_value_t = -1.0)]
    a: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    b: f64,
    /// Points in the saddle region (UNSD) or per path (NSD).
    #[arg(long, default_value_t = 8)]
    n: usize,
    /// Gauss-Laguerre points per endpoint path.
    #[arg(long, default_value_t = 16)]
    n_endpoint: usize,
    #[arg(long, value_enum, default_value_t = Method::Unsd)]
    method: Method,
    #[arg(long, value_enum, default_value_t = Region::Interval)]
    region: Region,
    /// Relative tolerance of the reference quadrature.
    #[arg(long, default_value_t = 1e-13)]
    tol: f64,
    #[arg(long, env = "UNSD_TABLE")]
    table: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum TableAction {
    /// Tabulate Im alpha_k and beta_k on [0, delta_max].
    Build {
        #[arg(long, default_value_t = 2.0)]
        delta_max: f64,
        #[arg(long, default_value_t = 12)]
        nmax: usize,
        /// Chebyshev degree M.
        #[arg(long = "cheb-degree", default_value_t = 64)]
        cheb_degree: usize,
        #[arg(long, default_value_t = 256)]
        precision_bits: u32,
        #[arg(long, env = "UNSD_TABLE")]
        path: PathBuf,
    },
    /// Print the header and the coefficients of a table as CSV.
    Inspect {
        #[arg(long, env = "UNSD_TABLE")]
        path: PathBuf,
    },
}

pub fn parse_function(s: &str) -> Result<TestFunction, String> {
    TestFunction::parse(s).ok_or_else(|| {
        format!(
            "unknown integrand '{s}'; available: {}",
            TestFunction::CATALOG.join(", ")
        )
    })
}

/// A named check; printed as one machine-readable line.
pub struct Check {
    pub name: String,
    pub value: f64,
    pub limit: String,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, value: f64, limit: impl Into<String>, pass: bool) -> Self {
        Check {
            name: name.into(),
            value,
            limit: limit.into(),
            pass,
        }
    }

    pub fn line(&self) -> String {
        format!(
            "status={} check={} value={:.6e} limit={}",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.value,
            self.limit
        )
    }
}

/// Print the checks and report whether all passed.
pub fn report(checks: &[Check]) -> bool {
    for c in checks {
        println!("{}", c.line());
    }
    checks.iter().all(|c| c.pass)
}

fn source_for(table: Option<&Path>) -> CliResult<Box<dyn CoefficientSource>> {
    Ok(match table {
        Some(p) => Box::new(TableSource::new(RecurrenceTable::load(p)?)),
        None => Box::new(StringEquations::default()),
    })
}

/// Write to standard output; a closed pipe (e.g. `| head`) is not an error.
pub fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn fmt_c(z: C) -> String {
    format!("{:.16e},{:.16e}", z.re, z.im)
}

fn cmd_moments(delta: f64, kmax: usize, bits: u32) -> CliResult<bool> {
    let m = moments(delta, kmax, bits)?;
    let mut out = String::from("k,re,im\n");
    for (k, mu) in m.mu.iter().enumerate() {
        let _ = writeln!(out, "{k},{}", fmt_c(*mu));
    }
    emit(&out);
    Ok(true)
}

fn cmd_rule(point: &DeltaArgs, n: usize, table: Option<&Path>) -> CliResult<bool> {
    let delta = point.delta();
    let source = source_for(table)?;
    let rule = match unsd_rule(delta, n, source.as_ref()) {
        Ok(r) => r,
        Err(unsd::Error::Breakdown { index, delta, beta }) => {
            return Err(CliError::Usage(format!(
                "recurrence breaks down at beta_{index} = {beta:e} for delta = {delta}: \
                 the degree-{} polynomial does not exist near this delta; odd n fails near the zeros \
                 of h_n (delta ~ 2.338 for n = 1), even n exists for all real delta",
                index + 1
            )))
        }
        Err(e) => return Err(e.into()),
    };
    emit(&rule_to_csv(&rule));
    for w in &rule.diagnostics.warnings {
        eprintln!("warning: {w}");
    }
    let mu0 = moments(delta, 0, 256)?.mu[0];
    let sum: C = rule.weights.iter().sum();
    let scale = rule.weights.iter().map(|w| w.norm()).sum::<f64>().max(mu0.norm());
    let err = (sum - mu0).norm() / scale;
    Ok(report(&[Check::new(
        "sum_weights_equals_mu0",
        err,
        "1e-10",
        err <= 1e-10,
    )]))
}

fn cmd_integrate(args: &IntegrateArgs) -> CliResult<bool> {
    let params = match (args.c, args.delta) {
        (Some(c), _) => OscillatorParams::new(args.omega, c),
        (None, Some(d)) => OscillatorParams::from_delta(args.omega, d),
        _ => unreachable!("clap enforces c or delta"),
    };
    params.validate()?;
    let func = args.f;
    let f = move |z: C| func.eval(z);
    let contour = match args.region {
        Region::Interval => OracleContour::Interval { a: args.a, b: args.b },
        Region::Gamma => OracleContour::Gamma,
    };
    let reference = oracle_integral(&f, &params, &contour, args.tol)?;
    let value = match args.method {
        Method::Oracle => reference.value,
        Method::Unsd => {
            let source = source_for(args.table.as_deref())?;
            match args.region {
                Region::Interval => {
                    unsd_integral(&f, &params, args.a, args.b, args.n, args.n_endpoint, source.as_ref())?
                }
                Region::Gamma => unsd_gamma(&f, &params, args.n, source.as_ref())?,
            }
        }
        Method::Nsd => match args.region {
            Region::Interval => nsd_integral(&f, &params, args.a, args.b, args.n)?,
            Region::Gamma => nsd_gamma(&f, &params, args.n)?,
        },
    };
    let err = if args.method == Method::Oracle {
        reference.error_estimate
    } else {
        (value - reference.value).norm()
    };
    println!("method,omega,c,delta,re,im,abs_error");
    let name = match args.method {
        Method::Unsd => "unsd",
        Method::Nsd => "nsd",
        Method::Oracle => "oracle",
    };
    println!(
        "{name},{},{},{:.16e},{},{err:.6e}",
        params.omega,
        params.c,
        params.delta,
        fmt_c(value)
    );
    Ok(true)
}

fn cmd_table(action: &TableAction) -> CliResult<bool> {
    match action {
        TableAction::Build {
            delta_max,
            nmax,
            cheb_degree,
            precision_bits,
            path,
        } => {
            let t = match build_table(*delta_max, *nmax, *cheb_degree, *precision_bits) {
                Err(unsd::Error::Resolution { k, degree, tail }) => {
                    return Err(CliError::Usage(format!(
                        "Chebyshev degree {degree} does not resolve k = {k} (tail {tail:e}); \
                         try --cheb-degree {}",
                        2 * degree
                    )))
                }
                other => other?,
            };
            t.save(path)?;
            println!(
                "wrote {} (delta in [0, {}], nmax {}, degree {})",
                path.display(),
                t.delta_max,
                t.nmax,
                t.cheb_degree
            );
            Ok(true)
        }
        TableAction::Inspect { path } => {
            let t = RecurrenceTable::load(path)?;
            println!(
                "# format_version={} delta_min={} delta_max={} nmax={} cheb_degree={}",
                t.format_version, t.delta_min, t.delta_max, t.nmax, t.cheb_degree
            );
            let mut out = String::from("k,series,m,value\n");
            for e in &t.coefficients {
                for (series, cs) in [("im_alpha", &e.im_alpha_coeffs), ("beta", &e.beta_coeffs)] {
                    for (m, v) in cs.iter().enumerate() {
                        let _ = writeln!(out, "{},{series},{m},{v:.16e}", e.k);
                    }
                }
            }
            emit(&out);
            Ok(true)
        }
    }
}

fn run(cli: &Cli) -> CliResult<bool> {
    match &cli.command {
        Command::Moments {
            delta,
            kmax,
            precision_bits,
        } => cmd_moments(*delta, *kmax, *precision_bits),
        Command::Rule { point, n, table } => cmd_rule(point, *n, table.as_deref()),
        Command::Integrate(args) => cmd_integrate(args),
        Command::Table { action } => cmd_table(action),
        Command::Verify { suite } => verify::run(*suite),
        Command::Bench(args) => bench::run(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            println!("status=FAIL summary=checks_failed");
            ExitCode::from(1)
        }
        Err(e) => {
            println!(
                "status=FAIL error={} message=\"{}\"",
                e.kind(),
                e.to_string().replace('"', "'")
            );
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
