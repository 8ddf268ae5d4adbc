//! Command-line driver: runs convergence experiments from configuration
//! files, regenerates the built-in studies, and checks the kernel
//! assumptions for a given mesh.
//!
//! Exit codes: `0` on success, `1` when arguments or a configuration are
//! invalid, `2` when a computation fails numerically (including a
//! failing kernel report).

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sfor_wave::harness::{
    check_kernels, emit, emit_group, parse_config, resolve_r, run_sweep, run_table, Format,
};
use sfor_wave::Result;

#[derive(Parser)]
#[command(
    name = "sfor-wave",
    version,
    about = "Solver for 1D time-fractional diffusion-wave equations on graded meshes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the convergence experiment described by a configuration file.
    Run(RunArgs),
    /// Regenerate one of the built-in studies (1-7).
    Table(TableArgs),
    /// Check kernel positivity, monotonicity and the complementary
    /// identity on the graded mesh (T = 1, N, r).
    CheckKernels(CheckKernelsArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Path to a `key = value` configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output dialect.
    #[arg(long, value_enum, default_value_t = OutputFormat::Markdown)]
    format: OutputFormat,
    /// Write the table to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the resolved experiment parameters and timing to stderr.
    #[arg(long)]
    verbose: bool,
}

#[derive(Args)]
struct TableArgs {
    /// Study index, 1 through 7.
    index: usize,
    /// Output dialect.
    #[arg(long, value_enum, default_value_t = OutputFormat::Markdown)]
    format: OutputFormat,
    /// Write the table to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckKernelsArgs {
    /// Fractional order of the discrete derivative, in (0, 1).
    #[arg(long)]
    beta: f64,
    /// Number of time intervals.
    #[arg(long = "N")]
    n: usize,
    /// Mesh grading exponent, at least 1.
    #[arg(long)]
    r: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Csv,
    Markdown,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Format {
        match f {
            OutputFormat::Csv => Format::Csv,
            OutputFormat::Markdown => Format::Markdown,
        }
    }
}

/// Writes to stdout without panicking when the consumer closes the pipe
/// early (`sfor-wave table 1 | head`): a broken pipe ends the run quietly.
fn print_stdout(text: &str) {
    let mut out = io::stdout();
    if let Err(err) = out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        if err.kind() == io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: cannot write to stdout: {err}");
        std::process::exit(1);
    }
}

fn write_output(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print_stdout(text),
    }
    Ok(())
}

fn cmd_run(args: &RunArgs) -> Result<i32> {
    let text = fs::read_to_string(&args.config)?;
    let config = parse_config(&text)?;
    if args.verbose {
        eprintln!(
            "running example {} with alpha = {}, {} / {}-form, r = {}, \
             N in {:?} against N_ref = {}, M = {} elements, {} norm",
            config.example.label(),
            config.alpha,
            config.formula.label(),
            config.scheme.label(),
            resolve_r(&config)?,
            config.n_list,
            config.n_ref,
            config.m_elems,
            config.norm_label(),
        );
    }
    let start = Instant::now();
    let table = run_sweep(&config)?;
    if args.verbose {
        eprintln!("sweep finished in {:.2} s", start.elapsed().as_secs_f64());
    }
    write_output(&emit(&table, args.format.into()), args.out.as_ref())?;
    Ok(0)
}

fn cmd_table(args: &TableArgs) -> Result<i32> {
    let group = run_table(args.index)?;
    write_output(&emit_group(&group, args.format.into()), args.out.as_ref())?;
    Ok(0)
}

fn cmd_check_kernels(args: &CheckKernelsArgs) -> Result<i32> {
    let report = check_kernels(args.beta, args.n, args.r)?;
    print_stdout(&format!("{report}\n"));
    // A report with failing checks is a numerical failure, not a usage
    // error.
    Ok(if report.passed() { 0 } else { 2 })
}

fn main() -> ExitCode {
    // Route usage errors through the documented exit codes: malformed
    // invocations are validation errors (1), while clap's default would
    // exit with 2.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match &cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Table(args) => cmd_table(args),
        Command::CheckKernels(args) => cmd_check_kernels(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err}");
            let mut source = std::error::Error::source(&err);
            while let Some(cause) = source {
                eprintln!("  caused by: {cause}");
                source = cause.source();
            }
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
