//! Command-line front end: argument parsing and dispatch.
//!
//! [`run`] is the whole program minus process setup, so tests can drive it
//! with in-memory writers.

use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use johnson_core::spectrum::Theorem;

mod commands;
pub mod records;
pub mod render;

pub const EXIT_OK: i32 = 0;
/// A verification failed or some scan rows could not be evaluated.
pub const EXIT_FAILED: i32 = 1;
/// Invalid input.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "johnson", version, about = "Exact spectra and percolation for Johnson graphs G(n, r, s)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Full spectrum, degree and lambda of G(n, r, s).
    Spectrum(SpectrumArgs),
    /// Check one closed form, the C(i, j) recurrence, or the explicit-graph oracle.
    Verify(VerifyArgs),
    /// Evaluate one bound over a CSV of parameter triples.
    Scan(ScanArgs),
    /// Bond percolation at p = c/d on the explicit graph.
    Percolate(PercolateArgs),
    /// Root of x e^{-x} = c e^{-c} in (0, 1) and the predicted giant fraction.
    AlphaBar(AlphaBarArgs),
}

#[derive(Debug, Clone, Copy, Args)]
struct TripleArgs {
    /// Ground set size.
    #[arg(long)]
    n: u32,
    /// Vertex weight.
    #[arg(long)]
    r: u32,
    /// Required intersection size.
    #[arg(long)]
    s: u32,
}

#[derive(Debug, Clone, Copy, Args)]
struct OutputArgs {
    /// One JSON object per record.
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    /// CSV rows.
    #[arg(long)]
    csv: bool,
    /// Include wall-clock timings. Output is then no longer reproducible byte for byte.
    #[arg(long)]
    timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Table,
    Json,
    Csv,
}

impl OutputArgs {
    fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else if self.csv {
            Format::Csv
        } else {
            Format::Table
        }
    }
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    #[command(flatten)]
    triple: TripleArgs,
    /// Sum multiplicities of equal eigenvalues.
    #[arg(long)]
    merged: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VerifyTarget {
    Bound(Theorem),
    Recurrence,
    Oracle,
}

impl FromStr for VerifyTarget {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "lemma6" => Ok(VerifyTarget::Recurrence),
            "oracle" => Ok(VerifyTarget::Oracle),
            other => other
                .parse()
                .map(VerifyTarget::Bound)
                .map_err(|_| format!("unknown theorem '{s}' (expected lovasz, brouwer, t4, t5, main, lemma6 or oracle)")),
        }
    }
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    triple: TripleArgs,
    /// lovasz, brouwer, t4, t5, main, lemma6 or oracle.
    #[arg(long)]
    theorem: VerifyTarget,
    /// Density ratio for the main bound, e.g. 1/2 or 0.25.
    #[arg(long)]
    alpha: Option<String>,
    /// Highest moment k for the oracle check (default 2r + 1).
    #[arg(long = "K")]
    max_k: Option<u32>,
    /// With the oracle: also write the explicit graph as a "u v" edge list.
    #[arg(long)]
    export_edges: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct ScanArgs {
    /// CSV with header n,r,s and an optional alpha column.
    #[arg(long)]
    input: PathBuf,
    /// lovasz, brouwer, t4, t5 or main.
    #[arg(long)]
    theorem: Theorem,
    /// Density ratio for the main bound, used where a row has no alpha.
    #[arg(long)]
    alpha: Option<String>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct PercolateArgs {
    #[command(flatten)]
    triple: TripleArgs,
    /// Intensity; edges are kept with probability c/d.
    #[arg(long, conflicts_with = "c_list", required_unless_present = "c_list")]
    c: Option<f64>,
    /// Comma-separated intensities, one summary row each.
    #[arg(long = "c-list", value_delimiter = ',')]
    c_list: Option<Vec<f64>>,
    #[arg(long, default_value_t = 20)]
    trials: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct AlphaBarArgs {
    /// Supercritical intensity, c > 1.
    #[arg(long)]
    c: f64,
    #[command(flatten)]
    output: OutputArgs,
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let _ = if code == 0 { write!(out, "{rendered}") } else { write!(err, "{rendered}") };
            return code;
        }
    };
    let result = match cli.command {
        Command::Spectrum(args) => commands::spectrum(&args, out),
        Command::Verify(args) => commands::verify(&args, out),
        Command::Scan(args) => commands::scan(&args, out, err),
        Command::Percolate(args) => commands::percolate(&args, out, err),
        Command::AlphaBar(args) => commands::alpha_bar(&args, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
