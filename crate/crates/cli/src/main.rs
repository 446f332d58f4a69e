//! `orthokit` command-line interface.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "orthokit", version, about = "Orthospectrum identities on hyperbolic surfaces")]
struct Cli {
    /// Worker threads (falls back to ORTHOKIT_THREADS, then all cores).
    #[arg(long, global = true, env = "ORTHOKIT_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a special function or kernel and print JSON.
    Eval {
        /// li2, li3, polylog, rogers, zeta, hurwitz, F_closed, F_k_numeric,
        /// F_nk_numeric, basmajian_term, ball_volume, crofton_constant,
        /// ideal_triangle_mgf
        function: String,
        #[arg(allow_negative_numbers = true)]
        args: Vec<String>,
        #[arg(long, value_enum, default_value_t = Convention::IntegralConsistent)]
        convention: Convention,
        #[arg(long, default_value_t = 1e-9)]
        rel_tol: f64,
        #[arg(long, default_value_t = 1e-10)]
        abs_tol: f64,
        #[arg(long, default_value_t = 1_000_000)]
        max_subdivisions: usize,
    },
    /// Check an identity on a surface and write the report and trace.
    Verify {
        /// Surface JSON file, or inline JSON.
        surface: String,
        /// basmajian, rogers, moment1 or hitting_time
        identity: String,
        l_max: f64,
        /// Report path; the trace goes to `<stem>.trace.csv` beside it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate the orthospectrum up to a cutoff.
    Spectrum {
        surface: String,
        l_max: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo moments of the hitting length.
    Mc {
        surface: String,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 200.0)]
        max_length: f64,
        #[arg(long, default_value_t = 64)]
        bins: usize,
        /// Writes `<prefix>.moments.json` and `<prefix>.histogram.csv`.
        #[arg(long)]
        out_prefix: Option<PathBuf>,
    },
    /// Emit figure data as CSV.
    Figures {
        #[arg(value_enum)]
        which: Figure,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Convention {
    #[value(alias = "paper_stated")]
    Paper,
    #[value(alias = "integral_consistent", alias = "integral-consistent")]
    IntegralConsistent,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Figure {
    #[value(name = "F_curve", alias = "f-curve")]
    FCurve,
    #[value(name = "closed_vs_numeric", alias = "closed-vs-numeric")]
    ClosedVsNumeric,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot configure {n} threads: {e}");
            return ExitCode::from(1);
        }
    }
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
