use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use relspin::experiments::{self, error_exit_code, ExperimentConfig, ExperimentKind, Format};
use relspin::RelspinError;

/// Lorentz-transformed spin states of wave packets.
#[derive(Parser)]
#[command(name = "relspin", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bloch vector over a rapidity grid.
    Sweep(RunArgs),
    /// Search ring packets for an ultrarelativistically unpolarized state.
    Depolarize(RunArgs),
    /// Compare the limiting Bloch vector with the position-space bound.
    BoundCheck(RunArgs),
    /// Certify that every boost in the grid depurifies the state.
    Certify(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output file; defaults to the config's `output`, else stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

fn execute(kind: ExperimentKind, args: &RunArgs) -> Result<i32, RelspinError> {
    let cfg = ExperimentConfig::load(&args.config)?.resolve(kind)?;
    let report = experiments::run(&cfg)?;
    let format = Format::from(args.format);
    match args.out.as_ref().or(cfg.output.as_ref()) {
        Some(path) => experiments::emit(&report, path, format)?,
        None => print!("{}", experiments::render(&report, format)?),
    }
    Ok(report.outcome.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match &cli.command {
        Command::Sweep(a) => (ExperimentKind::Sweep, a),
        Command::Depolarize(a) => (ExperimentKind::Depolarize, a),
        Command::BoundCheck(a) => (ExperimentKind::BoundCheck, a),
        Command::Certify(a) => (ExperimentKind::Certify, a),
    };
    let code = match execute(kind, args) {
        Ok(3) => {
            eprintln!("relspin {kind}: assertion failed, see report");
            3
        }
        Ok(4) => {
            eprintln!("relspin {kind}: quadrature did not converge in a required row");
            4
        }
        Ok(code) => code,
        Err(err) => {
            eprintln!("relspin {kind}: {err}");
            error_exit_code(&err)
        }
    };
    ExitCode::from(code as u8)
}
