use std::io::{self, Write};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use racah_dist::{Params, Rational};

mod commands;
mod output;

use output::Report;

#[derive(Parser, Debug)]
#[command(name = "racah-dist", version, about = "Exact two-row Schur-Weyl distribution P(n,m,k,l)")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Report wall-clock time as runtime_ms.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Tuple {
    #[arg(long)]
    n: i64,
    #[arg(long)]
    m: i64,
    #[arg(long)]
    k: i64,
    #[arg(long)]
    l: i64,
}

impl Tuple {
    fn params(&self) -> racah_dist::Result<Params> {
        Params::new(self.n, self.m, self.k, self.l)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Hahn,
    Racah,
    Special,
    Oracle,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Route {
    Hahn,
    Racah,
}

/// Positive rational written as `a/b` or as an integer.
#[derive(Debug, Clone)]
pub struct Q(Rational);

impl FromStr for Q {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Rational::from_str(s.trim()).map(Q).map_err(|_| format!("expected an integer or a/b, got {s:?}"))
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Probability table p(x), x = 0..n/2.
    Pmf {
        #[command(flatten)]
        tuple: Tuple,
        #[arg(long, value_enum, default_value_t = Method::Racah)]
        method: Method,
        /// Deformation parameter; switches to the q-analogue.
        #[arg(long)]
        q: Option<Q>,
    },
    /// Cumulative distribution s(x) = P[X <= x].
    Cdf {
        #[command(flatten)]
        tuple: Tuple,
    },
    /// Raw moments E[X^r] for r = 1..order, with the exact variance.
    Moments {
        #[command(flatten)]
        tuple: Tuple,
        #[arg(long, default_value_t = 4)]
        order: u32,
    },
    /// Type II limit parameters for the ratios, and E/V approximations at size n.
    Limits {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        n: Option<u32>,
    },
    /// Type I limit law q(x | xi; k, l), next to the exact pmf when n is given.
    Type1 {
        #[arg(long)]
        xi: f64,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        l: u32,
        #[arg(long)]
        n: Option<u32>,
    },
    /// Exact pmf against the normal density, with the Kolmogorov distance.
    CltCheck {
        #[arg(long)]
        xi: f64,
        #[arg(long)]
        kappa: f64,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        n: u32,
    },
    /// Entropy of the twirled state, spectral entropies and large-n approximations.
    Entropy {
        #[command(flatten)]
        tuple: Tuple,
        /// Report in bits instead of nats.
        #[arg(long)]
        bits: bool,
        #[arg(long, value_delimiter = ',', default_values_t = [0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95])]
        eps: Vec<f64>,
    },
    /// Spectral entropy H_s^eps, optionally with distinguishability bounds.
    Hspec {
        #[command(flatten)]
        tuple: Tuple,
        #[arg(long)]
        eps: f64,
        #[arg(long, requires = "delta2")]
        delta1: Option<f64>,
        #[arg(long, requires = "delta1")]
        delta2: Option<f64>,
        #[arg(long)]
        bits: bool,
    },
    /// q-deformed pmf.
    Qpmf {
        #[command(flatten)]
        tuple: Tuple,
        #[arg(long)]
        q: Q,
        #[arg(long, value_enum, default_value_t = Route::Racah)]
        route: Route,
    },
    /// Exact invariant sweep over every tuple with n <= n-max.
    Verify {
        #[arg(long, default_value_t = 8)]
        n_max: u32,
    },
    /// Data behind the four figures of the distribution's write-up.
    Plotdata {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        figure: u8,
        /// Extra sizes for figures 2 and 4 (e.g. 10000).
        #[arg(long, value_delimiter = ',')]
        n: Vec<u32>,
    },
}

/// Failure of one invocation, mapped to the process exit code.
pub enum Failure {
    /// Bad arguments or a domain error in the library: exit 2.
    Usage(String),
    /// The computation ran but a check failed; the report lists the failures: exit 1.
    Check(Report),
}

impl From<racah_dist::Error> for Failure {
    fn from(e: racah_dist::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn run(cmd: Command) -> Result<Report, Failure> {
    match cmd {
        Command::Pmf { tuple, method, q } => commands::pmf(tuple.params()?, method, q.map(|q| q.0)),
        Command::Cdf { tuple } => commands::cdf(tuple.params()?),
        Command::Moments { tuple, order } => commands::moments(tuple.params()?, order),
        Command::Limits { alpha, beta, gamma, delta, n } => commands::limits(alpha, beta, gamma, delta, n),
        Command::Type1 { xi, k, l, n } => commands::type1(xi, k, l, n),
        Command::CltCheck { xi, kappa, alpha, n } => commands::clt_check(xi, kappa, alpha, n),
        Command::Entropy { tuple, bits, eps } => commands::entropy(tuple.params()?, bits, &eps),
        Command::Hspec { tuple, eps, delta1, delta2, bits } => {
            commands::hspec(tuple.params()?, eps, delta1.zip(delta2), bits)
        }
        Command::Qpmf { tuple, q, route } => commands::qpmf(tuple.params()?, q.0, route),
        Command::Verify { n_max } => commands::verify(n_max),
        Command::Plotdata { figure, n } => commands::plotdata(figure, &n),
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("RACAH_DIST_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| format!("RACAH_DIST_THREADS must be a positive integer, got {raw:?}"))?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().map_err(|e| e.to_string())?;
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(())
}

fn emit(report: &mut Report, format: Format, elapsed: Option<f64>) -> io::Result<()> {
    if let Some(ms) = elapsed {
        report.meta("runtime_ms", serde_json::json!(ms));
    }
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match format {
        Format::Json => report.write_json(&mut out),
        Format::Csv => report.write_csv(&mut out, &mut io::stderr().lock()),
    }?;
    out.flush()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let start = Instant::now();
    let result = run(cli.command);
    let elapsed = cli.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
    let (mut report, code) = match result {
        Ok(r) => (r, ExitCode::SUCCESS),
        Err(Failure::Check(r)) => (r, ExitCode::from(1)),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(&mut report, cli.format, elapsed) {
        if e.kind() != io::ErrorKind::BrokenPipe {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    code
}
