use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod error;
mod input;

/// Exact Darboux coordinates on coadjoint orbits of GL(N, C).
///
/// Every payload is JSON. Exit codes: 0 ok, 2 input error, 3 chart or
/// extraction failure, 4 final residue mismatch, 5 verification mismatch,
/// 6 persistent degeneracy.
#[derive(Parser, Debug)]
#[command(name = "orbitdx", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Map coordinates to a matrix, A = Q·ρ·Q⁻¹.
    Param {
        #[arg(long)]
        structure: Option<PathBuf>,
        #[arg(long)]
        coords: PathBuf,
    },
    /// Recover coordinates (and the chart used) from a matrix on the orbit.
    Extract {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long)]
        matrix: PathBuf,
        /// `auto`, or a chart file {"perm": [...]}
        #[arg(long, default_value = "auto")]
        chart: String,
    },
    /// Compare the Gram matrix of the orbit form with the Darboux matrix.
    VerifyDarboux {
        #[arg(long)]
        structure: PathBuf,
        /// Coordinates to test at; random from the seed when absent
        #[arg(long)]
        coords: Option<PathBuf>,
        #[command(flatten)]
        random: RandomArgs,
        /// Replace the tangent of this coordinate (0-based) by a wrong one.
        #[arg(long, hide = true)]
        corrupt_tangent: Option<usize>,
    },
    /// Remove one eigenvalue step from a structure.
    Project {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        eigenvalue: String,
    },
    /// Size, type sequence, orbit dimension and coordinate layout.
    Info {
        #[arg(long)]
        structure: PathBuf,
    },
    /// A seeded random matrix on the orbit.
    RandomPoint {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Coords)]
        mode: Mode,
        #[command(flatten)]
        random: RandomArgs,
    },
    /// Weyr tables and the Jordan structure of a matrix at given eigenvalues.
    JordanVerify {
        #[arg(long)]
        matrix: PathBuf,
        /// Comma-separated, e.g. `0,1,2+i`
        #[arg(long, allow_hyphen_values = true)]
        eigenvalues: String,
        /// Also compare against this structure (exit 5 on mismatch)
        #[arg(long)]
        structure: Option<PathBuf>,
    },
    /// Seeded trials of extract∘param and param∘extract.
    Roundtrip {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[command(flatten)]
        random: RandomArgs,
        /// Perturb every extracted coordinate vector.
        #[arg(long, hide = true)]
        corrupt_extract: bool,
    },
}

#[derive(Args, Debug, Clone)]
struct RandomArgs {
    #[arg(long, env = "ORBITDX_SEED", default_value_t = 0)]
    seed: u64,
    /// Entries are drawn from [-bound, bound]
    #[arg(long, default_value_t = 10_000)]
    bound: i64,
    /// Draw imaginary parts too
    #[arg(long)]
    complex: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    Coords,
    Conjugate,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Param { structure, coords } => commands::param(structure.as_deref(), &coords),
        Command::Extract {
            structure,
            matrix,
            chart,
        } => commands::extract(&structure, &matrix, &chart),
        Command::VerifyDarboux {
            structure,
            coords,
            random,
            corrupt_tangent,
        } => commands::verify_darboux(&structure, coords.as_deref(), &random.into(), corrupt_tangent),
        Command::Project {
            structure,
            eigenvalue,
        } => commands::project(&structure, &eigenvalue),
        Command::Info { structure } => commands::info(&structure),
        Command::RandomPoint {
            structure,
            mode,
            random,
        } => commands::random_point(&structure, mode == Mode::Conjugate, &random.into()),
        Command::JordanVerify {
            matrix,
            eigenvalues,
            structure,
        } => commands::jordan_verify(&matrix, &eigenvalues, structure.as_deref()),
        Command::Roundtrip {
            structure,
            trials,
            random,
            corrupt_extract,
        } => commands::roundtrip(&structure, trials, &random.into(), corrupt_extract),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("orbitdx: {e}");
            e.exit_code()
        }
    }
}

impl From<RandomArgs> for commands::Randomness {
    fn from(r: RandomArgs) -> Self {
        commands::Randomness {
            seed: r.seed,
            bound: r.bound,
            complex: r.complex,
        }
    }
}
