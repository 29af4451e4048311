use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use exciton_chain::checks;
use exciton_chain::io::{self, Command, OutputFormat, RunError, RunOptions};

/// Collective modes, emission patterns and quantum beats of atom chains.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    /// TOML run configuration; built-in defaults when omitted
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (overrides `output.dir`)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Table format (overrides `output.format`)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Worker threads for independent observation points
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,

    /// Run the internal invariant suite before any subcommand
    #[arg(long, global = true)]
    check: bool,

    #[command(subcommand)]
    command: Option<Sub>,
}

#[derive(Subcommand, Clone, Copy)]
enum Sub {
    /// Mode energies, collective dipoles, decay rates and profiles
    Modes,
    /// Angular emission pattern of one mode
    Pattern,
    /// Multi-segment intensity traces at each observation point
    Trace,
    /// Closed-form single-atom plus two-atom example
    #[command(name = "scenario-two-seg")]
    ScenarioTwoSeg,
}

#[derive(ValueEnum, Clone, Copy)]
enum Format {
    Csv,
    Json,
}

fn execute(cli: &Cli, sub: Sub) -> Result<(), RunError> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| RunError::Io(format!("{}: {e}", path.display())))?;
            io::parse_config(&text)?
        }
        None => io::parse_config("")?,
    };
    if let Some(dir) = &cli.out {
        cfg.output.dir = dir.to_string_lossy().into_owned();
    }
    if let Some(f) = cli.format {
        cfg.output.format = match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        };
    }
    let mut opts = RunOptions::from_config(&cfg);
    opts.threads = cli.threads.map(usize::from);
    let command = match sub {
        Sub::Modes => Command::Modes,
        Sub::Pattern => Command::Pattern,
        Sub::Trace => Command::Trace,
        Sub::ScenarioTwoSeg => Command::ScenarioTwoSeg,
    };
    let report = io::run(&cfg, command, &opts)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    for f in &report.files {
        println!("{}", f.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if cli.check {
        let outcomes = checks::run_all();
        for o in &outcomes {
            println!("{} {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail);
        }
        if outcomes.iter().any(|o| !o.passed) {
            return ExitCode::from(2);
        }
    }
    let Some(sub) = cli.command else {
        if cli.check {
            return ExitCode::SUCCESS;
        }
        eprintln!("error: no subcommand given (try --help)");
        return ExitCode::from(1);
    };
    match execute(&cli, sub) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
