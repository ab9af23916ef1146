//! `tuiso`: batch front-end. Every subcommand prints one JSON report and
//! exits 0 on success, 1 on a contract violation, 2 when a size guard trips.

mod commands;
mod report;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use commands::{Family, LightArgs};
use report::{RunReport, Status};

#[derive(Parser, Debug)]
#[command(name = "tuiso", version, about = "Exact circuit enumeration and isolating weights for regular matroids")]
struct Cli {
    /// Seed for every randomized path.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Write the report to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Circuits of a binary matroid lighter than a bound.
    Circuits {
        matroid: PathBuf,
        /// Lines `label weight`; all-ones when absent.
        #[arg(long)]
        weights: Option<PathBuf>,
        #[arg(long)]
        bound: u64,
    },
    /// Cycles through R lighter than alpha·r/2.
    Cycles(LightOpts),
    /// Bonds through R lighter than alpha·r/2, optionally sampled by contraction.
    Cuts {
        #[command(flatten)]
        opts: LightOpts,
        /// Contraction-sampler trials.
        #[arg(long, default_value_t = 0)]
        samples: u64,
    },
    /// Total unimodularity test.
    TuCheck { matrix: PathBuf },
    /// Kernel vectors with l1 norm below ratio·lambda.
    Shortvecs {
        matrix: PathBuf,
        #[arg(long, default_value = "3/2")]
        bound_ratio: String,
    },
    /// Composes a 1-, 2- or 3-sum.
    Ksum {
        spec: PathBuf,
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        check_claims: bool,
    },
    /// Searches the modular weight family for an isolating candidate.
    Isolate {
        family: PathBuf,
        #[arg(long, default_value = "3/2")]
        c: String,
        #[arg(long, default_value_t = 10_000)]
        max_candidates: u64,
    },
}

#[derive(clap::Args, Debug)]
struct LightOpts {
    graph: PathBuf,
    #[arg(long, default_value_t = 2)]
    alpha: u32,
    /// Threshold r; defaults to the lightest member avoiding R.
    #[arg(long = "r")]
    r: Option<u64>,
    /// Label of the required edge.
    #[arg(long = "R", value_name = "LABEL")]
    required: Option<String>,
}

impl LightOpts {
    fn args(&self, samples: u64, seed: u64) -> LightArgs<'_> {
        LightArgs {
            graph: &self.graph,
            alpha: self.alpha,
            r: self.r,
            required: self.required.as_deref(),
            samples,
            seed,
        }
    }
}

fn run(cli: &Cli, report: &mut RunReport) -> anyhow::Result<()> {
    match &cli.command {
        Command::Circuits { matroid, weights, bound } => commands::circuits(report, matroid, weights.as_ref(), *bound),
        Command::Cycles(opts) => commands::light(report, Family::Cycles, &opts.args(0, cli.seed)),
        Command::Cuts { opts, samples } => commands::light(report, Family::Cuts, &opts.args(*samples, cli.seed)),
        Command::TuCheck { matrix } => commands::tu_check(report, matrix),
        Command::Shortvecs { matrix, bound_ratio } => commands::shortvecs(report, matrix, bound_ratio),
        Command::Ksum {
            spec,
            left,
            right,
            check_claims,
        } => commands::ksum(report, [spec, left, right], *check_claims, cli.seed),
        Command::Isolate {
            family,
            c,
            max_candidates,
        } => commands::isolate(report, family, c, *max_candidates),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let start = Instant::now();
    let mut report = RunReport::new(std::env::args().skip(1).collect(), cli.seed);
    if let Err(e) = run(&cli, &mut report) {
        report.fail(&e);
    }
    let text = report.to_json();
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("error: writing {}: {e}", path.display());
                return ExitCode::from(Status::ContractViolation.exit_code());
            }
        }
        None => print!("{text}"),
    }
    if let Some(err) = &report.error {
        eprintln!("error: {err}");
    }
    eprintln!("wall time {:.3} s", start.elapsed().as_secs_f64());
    ExitCode::from(report.status.exit_code())
}
