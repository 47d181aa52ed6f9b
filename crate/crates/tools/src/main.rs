use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand, ValueEnum};
use spectral_core::dnf::CoverMeasure;
use spectral_tools::commands::{self, ConstructOp, Output, ProtocolKind, ScanMode};
use spectral_tools::harness::{parse_checks, ScanOptions, CHECKPOINT_EVERY};

/// Spectral analysis of Boolean functions: metrics, bound certificates,
/// constructions, protocols and sweeps.
///
/// Exit status: 0 when every asserted certificate holds, 2 when one fails,
/// 1 on usage or input errors.
#[derive(Parser)]
#[command(name = "spectral", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Measure {
    UniqueVariables,
    ClauseCount,
    TotalWidth,
}

impl From<Measure> for CoverMeasure {
    fn from(m: Measure) -> Self {
        match m {
            Measure::UniqueVariables => CoverMeasure::UniqueVariables,
            Measure::ClauseCount => CoverMeasure::ClauseCount,
            Measure::TotalWidth => CoverMeasure::TotalWidth,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Metrics and every applicable certificate for a truth-table file.
    Analyze {
        file: PathBuf,
        /// Also write the spectrum as CSV.
        #[arg(long)]
        spectrum_csv: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Covariance, read-k bounds and the L1 bound for an s-expression tree.
    Tree {
        file: PathBuf,
        /// Ambient variable count (default: largest variable queried).
        #[arg(long)]
        n: Option<u32>,
        /// Also write tree statistics as CSV.
        #[arg(long)]
        stats_csv: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classification and the regular read-k FMEI checks for a DNF file.
    Dnf {
        file: PathBuf,
        /// Read parameter (default: the DNF's read multiplicity).
        #[arg(long)]
        k: Option<u32>,
        /// Width ratio (default: min width / max width).
        #[arg(long)]
        c1: Option<f64>,
        /// Clause-count exponent (default: log2(s) / max width).
        #[arg(long)]
        c2: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tribes DNF Tr_{w,s} with metrics and closed-form coefficients.
    Tribes {
        #[arg(long)]
        w: u32,
        /// Clause count (default: the largest s keeping Pr[True] ≤ 1/2).
        #[arg(long)]
        s: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Price a protocol and check the compression lemma.
    Protocol {
        kind: ProtocolKind,
        /// Truth-table file (trivial), `W` or `W,S` (tribes), DNF file (readk).
        target: String,
        #[arg(long, value_enum, default_value = "unique-variables")]
        measure: Measure,
        /// Also write the codebook as CSV.
        #[arg(long)]
        codebook_csv: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a composite function and report its identities.
    Construct {
        op: ConstructOp,
        /// Truth-table files: two for tensor, one otherwise.
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        k: Option<u32>,
        /// Write the resulting truth table here.
        #[arg(long)]
        emit: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive or seeded random sweep with certificate tallies.
    Scan {
        #[arg(long)]
        n: u32,
        #[arg(long, conflicts_with = "random", required_unless_present = "random")]
        exhaustive: bool,
        #[arg(long)]
        random: bool,
        #[arg(long, default_value_t = 1000)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// `all` or a comma-separated list of check names.
        #[arg(long, default_value = "all")]
        checks: String,
        /// Worker cap; implies --parallel when above one.
        #[arg(long, env = "SPECTRAL_JOBS")]
        jobs: Option<usize>,
        /// Shard across worker threads (required for exhaustive n = 5).
        #[arg(long)]
        parallel: bool,
        /// Evaluate one representative per permutation/negation orbit.
        #[arg(long)]
        symmetry: bool,
        /// Resume from and periodically save progress to this file.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long, default_value_t = CHECKPOINT_EVERY)]
        checkpoint_every: u64,
        /// Report file; `.csv` selects CSV, anything else JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(output: Output, out: Option<PathBuf>) -> Result<bool> {
    match out {
        Some(path) => std::fs::write(&path, &output.text)?,
        None => print!("{}", output.text),
    }
    Ok(output.failed)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Analyze {
            file,
            spectrum_csv,
            out,
        } => emit(commands::analyze(&file, spectrum_csv.as_deref())?, out),
        Command::Tree {
            file,
            n,
            stats_csv,
            out,
        } => emit(commands::tree(&file, n, stats_csv.as_deref())?, out),
        Command::Dnf {
            file,
            k,
            c1,
            c2,
            out,
        } => emit(commands::dnf(&file, k, c1, c2)?, out),
        Command::Tribes { w, s, out } => emit(commands::tribes(w, s)?, out),
        Command::Protocol {
            kind,
            target,
            measure,
            codebook_csv,
            out,
        } => emit(
            commands::protocol(kind, &target, measure.into(), codebook_csv.as_deref())?,
            out,
        ),
        Command::Construct {
            op,
            inputs,
            k,
            emit: to,
            out,
        } => emit(commands::construct(op, &inputs, k, to.as_deref())?, out),
        Command::Scan {
            n,
            exhaustive: _,
            random,
            count,
            seed,
            checks,
            jobs,
            parallel,
            symmetry,
            checkpoint,
            checkpoint_every,
            out,
        } => {
            let opts = ScanOptions {
                checks: parse_checks(&checks)?,
                parallel: parallel || jobs.is_some_and(|j| j > 1),
                jobs,
                symmetry,
                checkpoint,
                checkpoint_every,
                chunk_limit: None,
            };
            let mode = if random {
                ScanMode::Random { count, seed }
            } else {
                ScanMode::Exhaustive
            };
            let (output, _) = commands::scan(n, mode, &opts, out.as_deref())?;
            if out.is_none() {
                print!("{}", output.text);
            }
            Ok(output.failed)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
