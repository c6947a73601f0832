use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};

mod commands;
mod output;

use commands::{Family, Mesh, PotentialKind};
use output::Format;

/// Bound states of the one-dimensional hydrogen atom and its regularized
/// relatives.
#[derive(Debug, Parser)]
#[command(name = "coulomb1d", version)]
struct Cli {
    #[command(flatten)]
    global: Global,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,

    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Relative tolerance of the WKB action quadrature.
    #[arg(long, default_value_t = 1e-13, global = true)]
    tolerance: f64,

    /// Record the wall-clock time in the metadata (breaks byte-identical reruns).
    #[arg(long, global = true)]
    timestamp: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact and WKB energies, parities and node counts for n = 0..=n-max.
    Spectrum {
        #[arg(long, default_value_t = 5)]
        n_max: u32,
    },
    /// Samples of the exact wavefunction ψ_n on a uniform grid.
    Wavefunction {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = -10.0, allow_negative_numbers = true)]
        x_min: f64,
        #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
        x_max: f64,
        #[arg(long, default_value_t = 2001)]
        points: usize,
        /// Scale to unit norm over the whole line.
        #[arg(long)]
        normalized: bool,
    },
    /// Semiclassical action at an energy, or the quantized WKB energy of level n.
    #[command(group = clap::ArgGroup::new("target").required(true).args(["energy", "n"]))]
    Wkb {
        #[arg(long, allow_negative_numbers = true)]
        energy: Option<f64>,
        #[arg(long)]
        n: Option<u32>,
        /// m in S(E) = (n + m)π.
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        maslov: f64,
    },
    /// Parameter studies of the regularized potentials.
    Scan {
        #[arg(long, value_enum)]
        family: Family,
        /// Core radii, comma separated.
        #[arg(long, value_delimiter = ',')]
        a: Vec<f64>,
        #[arg(long)]
        b: Option<f64>,
        #[arg(long)]
        k_max: Option<usize>,
        #[arg(long)]
        half_width: Option<f64>,
        /// Fixed point count; sized from the core radius when omitted.
        #[arg(long)]
        points: Option<usize>,
    },
    /// Lowest levels of any supported potential on a finite-difference grid.
    Solve {
        #[arg(long, value_enum)]
        potential: PotentialKind,
        #[arg(long)]
        a: Option<f64>,
        #[arg(long)]
        b: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        #[arg(long, default_value_t = 30.0)]
        half_width: f64,
        #[arg(long, default_value_t = 6000)]
        points: usize,
        #[arg(long, default_value_t = 4)]
        k_max: usize,
        #[arg(long, value_enum, default_value_t = Mesh::Staggered)]
        mesh: Mesh,
    },
}

const EXIT_NUMERIC: u8 = 3;
const EXIT_GRID: u8 = 4;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();

    let result = match cli.command {
        Command::Spectrum { n_max } => commands::spectrum(n_max, cli.global.tolerance),
        Command::Wavefunction {
            n,
            x_min,
            x_max,
            points,
            normalized,
        } => commands::wavefunction(n, x_min, x_max, points, normalized),
        Command::Wkb { energy, n, maslov } => {
            commands::wkb(energy, n, maslov, cli.global.tolerance)
        }
        Command::Scan {
            family,
            a,
            b,
            k_max,
            half_width,
            points,
        } => commands::scan(family, &a, b, k_max, half_width, points),
        Command::Solve {
            potential,
            a,
            b,
            omega,
            half_width,
            points,
            k_max,
            mesh,
        } => commands::solve(potential, a, b, omega, half_width, points, k_max, mesh),
    };

    let mut table = match result {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    table
        .meta("artifact_version", env!("CARGO_PKG_VERSION"))
        .meta("tolerance", cli.global.tolerance);
    if cli.global.timestamp {
        let secs = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        table.meta("timestamp", secs);
    }

    if let Err(e) = emit(&table, cli.global.format, cli.global.out.as_deref()) {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}

fn exit_code(e: &coulomb1d::Error) -> u8 {
    use coulomb1d::Error;
    match e {
        Error::InvalidArgument(_) | Error::Unsupported(_) => 2,
        Error::GridTooCoarse { .. } => EXIT_GRID,
        _ => EXIT_NUMERIC,
    }
}

fn emit(table: &output::Table, format: Format, out: Option<&std::path::Path>) -> io::Result<()> {
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            table.write(format, &mut w)?;
            w.flush()
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            table.write(format, &mut w)?;
            w.flush()
        }
    }
}
