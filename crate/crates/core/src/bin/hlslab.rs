use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hlslab::cli::{cmd_explore, cmd_simulate, cmd_widths, Outcome, OutputFormat, EXIT_INPUT};
use hlslab::Rational;

#[derive(Parser)]
#[command(name = "hlslab", version, about = "Fixed-point QAM equalizer model and loop-architecture explorer")]
struct Args {
    #[command(subcommand)]
    command: Command,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Table,
    Csv,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Table => OutputFormat::Table,
            Format::Csv => OutputFormat::Csv,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Latency, data rate and relative area for each architecture file.
    Explore {
        design: PathBuf,
        #[arg(required = true)]
        arch: Vec<PathBuf>,
        /// Clock period in ns; overrides the design file.
        #[arg(long)]
        clock: Option<String>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Run a channel trial through the bit-exact decoder.
    Simulate {
        trial: PathBuf,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Per-node bit widths of a prefix expression.
    Widths { expr: PathBuf },
}

fn run(args: &Args) -> Outcome {
    match &args.command {
        Command::Explore { design, arch, clock, format } => {
            let clock = match clock.as_deref().map(str::parse::<Rational>).transpose() {
                Ok(c) => c,
                Err(e) => {
                    return Outcome { stderr: format!("error: --clock: {e}\n"), code: EXIT_INPUT, ..Default::default() }
                }
            };
            let arch: Vec<&std::path::Path> = arch.iter().map(PathBuf::as_path).collect();
            cmd_explore(design, &arch, clock, (*format).into())
        }
        Command::Simulate { trial, format } => cmd_simulate(trial, (*format).into()),
        Command::Widths { expr } => cmd_widths(expr),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let outcome = run(&args);
    let written = match &args.out {
        Some(path) => std::fs::write(path, &outcome.stdout).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout().write_all(outcome.stdout.as_bytes()).map_err(|e| e.to_string()),
    };
    eprint!("{}", outcome.stderr);
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_INPUT as u8);
    }
    ExitCode::from(outcome.code as u8)
}
