use std::fs::File;
use std::io::{self, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kleinrp_cli::{
    classify_report, decide_matrices, decide_params, exit, parse_matrix, polyhedron_report, scan,
    write_json, write_json_file, write_scan_csv, CliError,
};
use kleinrp_core::Config;

#[derive(Parser)]
#[command(name = "kleinrp", version, about = "Discreteness of two-generator groups with a parabolic generator")]
struct Cli {
    #[command(flatten)]
    numerics: Numerics,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Numerics {
    /// Parameter tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Largest order recognized for elliptic elements and p.
    #[arg(long, global = true, default_value_t = 200)]
    max_order: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a single element given as "a,b;c,d".
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    /// Decide discreteness from (beta_f, gamma) or from two matrices.
    Decide {
        #[arg(long, allow_hyphen_values = true, requires = "gamma", conflicts_with = "matrices")]
        beta_f: Option<f64>,
        #[arg(long, allow_hyphen_values = true, requires = "beta_f")]
        gamma: Option<f64>,
        /// Generators f and g, each as "a,b;c,d".
        #[arg(long, num_args = 2, value_names = ["F", "G"], allow_hyphen_values = true, required_unless_present = "beta_f")]
        matrices: Option<Vec<String>>,
        /// Search words up to this length for a non-discreteness witness.
        #[arg(long, default_value_t = 0)]
        witness_depth: usize,
    },
    /// Write the polyhedron T as JSON.
    Polyhedron {
        #[arg(long, allow_hyphen_values = true)]
        beta_f: f64,
        #[arg(long, allow_hyphen_values = true)]
        gamma: f64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide along a grid of gamma values and write CSV.
    Scan {
        #[arg(long, allow_hyphen_values = true)]
        beta_f: f64,
        #[arg(long, allow_hyphen_values = true)]
        gamma_min: f64,
        #[arg(long, allow_hyphen_values = true)]
        gamma_max: f64,
        #[arg(long, allow_hyphen_values = true)]
        step: f64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let cfg = Config::new(cli.numerics.tol, cli.numerics.max_order)?;
    let stdout = io::stdout();
    match cli.command {
        Command::Classify { matrix } => {
            let m = parse_matrix(&matrix)?;
            write_json(&classify_report(&m, &cfg), &mut stdout.lock())?;
            Ok(exit::DISCRETE)
        }
        Command::Decide {
            beta_f,
            gamma,
            matrices,
            witness_depth,
        } => {
            let cfg = cfg.with_witness_depth(witness_depth);
            let report = match (beta_f, gamma, matrices) {
                (Some(b), Some(g), _) => decide_params(b, g, &cfg)?,
                (_, _, Some(ms)) => decide_matrices(&parse_matrix(&ms[0])?, &parse_matrix(&ms[1])?, &cfg)?,
                _ => return Err(CliError::InvalidArgument("give --beta-f and --gamma, or --matrices".into())),
            };
            write_json(&report, &mut stdout.lock())?;
            Ok(report.exit_code())
        }
        Command::Polyhedron { beta_f, gamma, out } => {
            let report = polyhedron_report(beta_f, gamma, &cfg)?;
            match out {
                Some(path) => write_json_file(&report, &path)?,
                None => write_json(&report, &mut stdout.lock())?,
            }
            Ok(exit::DISCRETE)
        }
        Command::Scan {
            beta_f,
            gamma_min,
            gamma_max,
            step,
            out,
        } => {
            let rows = scan(beta_f, gamma_min, gamma_max, step, &cfg)?;
            match out {
                Some(path) => write_scan_csv(&rows, BufWriter::new(File::create(path)?))?,
                None => write_scan_csv(&rows, stdout.lock())?,
            }
            Ok(exit::DISCRETE)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("kleinrp: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
