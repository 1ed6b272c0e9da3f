//! `ncluster`: parameter sweeps for n-cluster chains, written as CSV.

mod args;
mod commands;
mod csv;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{error::ErrorKind, Args, Parser, Subcommand};

use args::{Grid, IntList};

#[derive(Debug, Parser, PartialEq)]
#[command(
    name = "ncluster",
    version,
    about = "Exact results for n-cluster spin chains in a transverse field"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand, PartialEq)]
enum Command {
    /// Second derivative of the ground-state energy density along phi.
    EnergyScan(EnergyScan),
    /// G_r and the two-spin correlators.
    Correlators(Correlators),
    /// Cluster correlators <O_j O_{j+r}>.
    ClusterCorr(ClusterCorr),
    /// Extrapolated order parameter with the closed form alongside.
    OrderParam(OrderParam),
    /// Two-spin concurrence.
    Concurrence(Concurrence),
    /// Block entanglement entropy and, at the critical angle, the central charge.
    Entropy(Entropy),
    /// Critical exponent of the order parameter.
    BetaFit(BetaFit),
    /// Exact diagonalization against the fermionic solution.
    OracleCompare(OracleCompare),
}

#[derive(Debug, Args, PartialEq, Clone)]
pub struct QuadArgs {
    /// Absolute tolerance of the mode integrals.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Gauss nodes per panel.
    #[arg(long, default_value_t = 16)]
    pub nodes: usize,
    /// Starting panels (default 2(n+1)).
    #[arg(long)]
    pub panels: Option<usize>,
    /// Refinement budget in panels.
    #[arg(long, default_value_t = 200_000)]
    pub max_panels: usize,
}

#[derive(Debug, Args, PartialEq)]
pub struct Output {
    /// Output file; standard output when absent.
    #[arg(short = 'o', long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args, PartialEq)]
pub struct EnergyScan {
    #[arg(long)]
    pub n: usize,
    /// start:stop:count or a comma list.
    #[arg(long)]
    pub phi: Grid,
    /// Finite-difference step.
    #[arg(long, default_value_t = 1e-3)]
    pub h: f64,
    #[command(flatten)]
    pub quad: QuadArgs,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args, PartialEq)]
pub struct Correlators {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub phi: Grid,
    /// Separations.
    #[arg(long, default_value = "0:6")]
    pub r: IntList,
    #[command(flatten)]
    pub quad: QuadArgs,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args, PartialEq)]
pub struct ClusterCorr {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub phi: Grid,
    #[arg(long, default_value = "3:15:3")]
    pub r: IntList,
    #[command(flatten)]
    pub quad: QuadArgs,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args, PartialEq)]
pub struct OrderParam {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub phi: Grid,
    /// Largest separation; chosen per angle when absent.
    #[arg(long)]
    pub rmax: Option<i64>,
    #[command(flatten)]
    pub quad: QuadArgs,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args, PartialEq)]
pub struct Concurrence {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub phi: Grid,
    /// Separations (default n+1).
    #[arg(long)]
    pub r: Option<IntList>,
    #[command(flatten)]
    pub quad: QuadArgs,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args, PartialEq)]
pub struct Entropy {
    #[arg(long)]
    pub n: usize,
    /// Angle (default: the critical angle pi/4).
    #[arg(long)]
    pub phi: Option<f64>,
    /// Block sizes.
    #[arg(long, default_value = "8:64")]
    pub m: IntList,
    #[command(flatten)]
    pub quad: QuadArgs,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args, PartialEq)]
pub struct BetaFit {
    #[arg(long, default_value = "0:4")]
    pub n: IntList,
    /// Closest approach pi/4 - phi.
    #[arg(long, default_value_t = 0.005)]
    pub delta_min: f64,
    #[arg(long, default_value_t = 0.04)]
    pub delta_max: f64,
    /// Number of log-spaced angles.
    #[arg(long, default_value_t = 8)]
    pub points: usize,
    #[command(flatten)]
    pub quad: QuadArgs,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args, PartialEq)]
pub struct OracleCompare {
    #[arg(long)]
    pub n: usize,
    /// Ring length.
    #[arg(long, default_value_t = 12)]
    pub sites: usize,
    #[arg(long, default_value = "0.5,0.9,1.2")]
    pub phi: Grid,
    #[command(flatten)]
    pub quad: QuadArgs,
    #[command(flatten)]
    pub out: Output,
}

pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }

    /// Attach the failing parameters to a library error.
    pub fn at(context: impl Into<String>) -> impl Fn(ncluster::Error) -> Failure {
        let context = context.into();
        move |e| Failure {
            code: if e.is_numerical() { 2 } else { 1 },
            message: format!("{context}: {e}"),
        }
    }
}

fn write_output(out: &Output, text: &str) -> Result<(), Failure> {
    match &out.output {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::usage(format!("cannot write to standard output: {e}"))),
    }
}

fn run(command: &Command) -> Result<(), Failure> {
    let (text, out) = match command {
        Command::EnergyScan(c) => (commands::energy_scan(c)?, &c.out),
        Command::Correlators(c) => (commands::correlators(c)?, &c.out),
        Command::ClusterCorr(c) => (commands::cluster_corr(c)?, &c.out),
        Command::OrderParam(c) => (commands::order_param(c)?, &c.out),
        Command::Concurrence(c) => (commands::concurrence_cmd(c)?, &c.out),
        Command::Entropy(c) => (commands::entropy(c)?, &c.out),
        Command::BetaFit(c) => (commands::beta_fit(c)?, &c.out),
        Command::OracleCompare(c) => (commands::oracle_compare(c)?, &c.out),
    };
    write_output(out, &text)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn echo_round_trips() {
        let argv = [
            "ncluster",
            "order-param",
            "--n",
            "3",
            "--phi",
            "0:0.78:40",
            "--rmax",
            "96",
            "-o",
            "x.csv",
        ];
        let Cli {
            command: Command::OrderParam(c),
        } = Cli::try_parse_from(argv).unwrap()
        else {
            panic!("wrong subcommand");
        };
        let echo = commands::echo_order_param(&c);
        let words: Vec<&str> = echo.split_whitespace().collect();
        let Cli {
            command: Command::OrderParam(d),
        } = Cli::try_parse_from(words).unwrap()
        else {
            panic!("wrong subcommand");
        };
        assert_eq!(c.n, d.n);
        assert_eq!(c.phi, d.phi);
        assert_eq!(c.rmax, d.rmax);
        assert_eq!(c.quad, d.quad);
        assert!(d.out.output.is_none());
    }
}
