//! `kanloop`: batch front end for Kan loop groups and their sampled
//! representation spaces. Every subcommand prints JSON (or a table with
//! `--pretty`) to stdout or `--out`.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kanloop::flow::FlowMode;
use kanloop::realization::PathStrategy;
use kanloop::GroupKind;

use commands::{CliError, Report};

#[derive(Parser, Debug)]
#[command(name = "kanloop", version, about = "Kan loop groups, Moore homology and sampled Hom(K, G)")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Human-readable table instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generators, attaching elements and faces of the Kan group.
    BuildKan {
        #[arg(long)]
        complex: PathBuf,
        /// Highest degree for generator counts (default: top degree).
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Normalized homology of the Kan group, degree by degree.
    Homology {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        max_degree: Option<usize>,
        /// Also write each differential as `d<k>.csv` into this directory.
        #[arg(long)]
        csv_dir: Option<PathBuf>,
    },
    /// Checks every 3-cell identity among relations.
    CheckIdentity {
        #[arg(long)]
        complex: PathBuf,
    },
    /// Evaluates a word under seeded random generator values.
    EvalWord {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 0)]
        degree: usize,
        #[command(flatten)]
        numeric: Numeric,
    },
    /// Bundle type of a surface point.
    Classify {
        #[command(flatten)]
        numeric: Numeric,
        #[command(flatten)]
        fixture: Fixture,
        /// Classify this surface point (realization JSON) instead of the built-in fixture.
        #[arg(long, requires = "complex")]
        point: Option<PathBuf>,
        #[arg(long)]
        complex: Option<PathBuf>,
        #[arg(long, default_value = "geodesic")]
        strategy: PathStrategy,
    },
    /// Samples a realization point with seeded random data.
    SamplePoint {
        #[arg(long)]
        complex: PathBuf,
        #[command(flatten)]
        numeric: Numeric,
        /// Amplitude of the interior bump added in each degree.
        #[arg(long, default_value_t = 0.3)]
        wiggle: f64,
    },
    /// Checks a realization point against the face conditions.
    ValidatePoint {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        point: PathBuf,
        /// Overrides the group recorded in the point file (su2 points may be read as so3).
        #[arg(long)]
        group: Option<GroupKind>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// The map τ on the grid of Δ₂ for a seeded random loop.
    Tau {
        /// Γ-word in v_j and w_i_j.
        #[arg(long, default_value = "v1")]
        word: String,
        /// Number of 2-spheres (default: largest index in the word).
        #[arg(long)]
        rank: Option<usize>,
        #[command(flatten)]
        numeric: Numeric,
    },
    /// Energy descent on the surface fibre.
    Flow {
        #[command(flatten)]
        numeric: Numeric,
        #[command(flatten)]
        fixture: Fixture,
        #[arg(long, default_value_t = 5000)]
        steps: usize,
        #[arg(long, default_value_t = 1.0)]
        step_size: f64,
        #[arg(long, default_value_t = 1e-6)]
        stop_grad_norm: f64,
        #[arg(long, default_value = "fix-holonomies")]
        mode: FlowMode,
        /// Use the plain gradient instead of the H¹-preconditioned one.
        #[arg(long)]
        plain: bool,
        /// Energy trace as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Final surface point as realization JSON.
        #[arg(long)]
        path_out: Option<PathBuf>,
    },
    /// Intersection form of a Γ-word or of every 4-cell of a complex.
    IntersectionForm {
        #[arg(long, conflicts_with = "word", required_unless_present = "word")]
        complex: Option<PathBuf>,
        #[arg(long)]
        word: Option<String>,
        #[arg(long)]
        rank: Option<usize>,
    },
}

#[derive(Args, Debug, Clone)]
struct Numeric {
    #[arg(long, default_value = "su2")]
    group: GroupKind,
    #[arg(long, default_value_t = 16)]
    grid: u32,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug, Clone)]
struct Fixture {
    #[arg(long, default_value_t = 1)]
    genus: usize,
    /// Number of full turns added to the path (U(1) winding, SO(3) rotations).
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    winding: i64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = commands::run(&cli.command).and_then(|report| emit(&cli, &report).map(|_| report));
    match result {
        Ok(report) if report.failed => ExitCode::from(report.exit_code()),
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn emit(cli: &Cli, report: &Report) -> Result<(), CliError> {
    let text = if cli.pretty {
        report.table.clone()
    } else {
        let mut s = serde_json::to_string_pretty(&report.json).expect("reports serialize");
        s.push('\n');
        s
    };
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
