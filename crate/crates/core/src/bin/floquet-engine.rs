use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use floquet_engine::cli::{parse_config, run_sweep, CliError, Subcommand};

#[derive(Clone, Copy, ValueEnum)]
enum Command {
    Point,
    Sweep,
    WeakVsFull,
    Nonmarkov,
    Noengine,
    Otto,
    Validate,
}

impl From<Command> for Subcommand {
    fn from(c: Command) -> Self {
        match c {
            Command::Point => Subcommand::Point,
            Command::Sweep => Subcommand::Sweep,
            Command::WeakVsFull => Subcommand::WeakVsFull,
            Command::Nonmarkov => Subcommand::Nonmarkov,
            Command::Noengine => Subcommand::Noengine,
            Command::Otto => Subcommand::Otto,
            Command::Validate => Subcommand::Validate,
        }
    }
}

/// Power and heat currents of an oscillator with a periodically modulated
/// bath coupling, written as CSV.
#[derive(Parser)]
#[command(version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// key = value config file
    #[arg(long)]
    config: PathBuf,
    /// CSV output (overrides `out` in the config; default stdout)
    #[arg(long)]
    out: Option<PathBuf>,
    /// worker threads (default: all cores)
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    quiet: bool,
}

fn run(args: &Args) -> Result<i32, CliError> {
    let text = fs::read_to_string(&args.config)?;
    let mut spec = parse_config(&text, args.command.into())?;
    spec.workers = args.workers;
    let out = args.out.clone().or_else(|| spec.out.clone());
    let summary = match &out {
        Some(p) => {
            let mut w = BufWriter::new(fs::File::create(p)?);
            let s = run_sweep(&spec, &mut w)?;
            w.flush()?;
            s
        }
        None => run_sweep(&spec, io::stdout().lock())?,
    };
    if !args.quiet {
        eprintln!(
            "{}: {} rows, {} failed{}",
            spec.command,
            summary.rows,
            summary.failed,
            out.map(|p| format!(" -> {}", p.display())).unwrap_or_default()
        );
    }
    Ok(summary.exit_code())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
