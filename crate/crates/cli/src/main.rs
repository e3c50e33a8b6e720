use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use toric_cli::{prepare, run, ArrangementSpec, CliError, Command, Format};

#[derive(Parser)]
#[command(name = "toric-os", version, about = "Cohomology of central toric arrangements")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Circuits and multiplicity table
    Matroid(Args),
    /// Poset of layers
    Layers(Args),
    /// Betti numbers of the complement
    Poincare(Args),
    /// Generators and relations of the cohomology ring
    Presentation(Args),
    /// Cross-check graded dimensions
    Verify(Args),
}

#[derive(clap::Args)]
struct Args {
    /// Arrangement spec (JSON)
    spec: PathBuf,
    #[arg(long, conflicts_with = "text")]
    json: bool,
    #[arg(long)]
    text: bool,
    /// Divide every character by the gcd of its entries
    #[arg(long)]
    normalize: bool,
    /// Reorder the ground set, e.g. `--order 2,0,1`
    #[arg(long, value_delimiter = ',')]
    order: Option<Vec<usize>>,
    /// Write the result to a file instead of stdout
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn execute(command: Command, args: &Args) -> Result<u8, CliError> {
    let spec = ArrangementSpec::load(&args.spec)?;
    let prepared = prepare(&spec, args.normalize, args.order.as_deref())?;
    let format = if args.json { Format::Json } else { Format::Text };
    let out = run(command, &prepared, format);
    match &args.output {
        Some(path) => std::fs::write(path, &out.body).map_err(|e| CliError::Io(path.display().to_string(), e))?,
        None => print!("{}", out.body),
    }
    Ok(out.status)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match &cli.command {
        Cmd::Matroid(a) => (Command::Matroid, a),
        Cmd::Layers(a) => (Command::Layers, a),
        Cmd::Poincare(a) => (Command::Poincare, a),
        Cmd::Presentation(a) => (Command::Presentation, a),
        Cmd::Verify(a) => (Command::Verify, a),
    };
    match execute(command, args) {
        Ok(status) => ExitCode::from(status),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
