mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use entlab_core::analysis::Axis;

use config::{Command, Format, HamSel, RunConfig, StateSel};

/// Sweeps, crossing points, sudden-death zones and reference checks for
/// Werner and MEMS states coupled to an auxiliary qubit.
#[derive(Debug, Parser)]
#[command(name = "entlab", version)]
struct Cli {
    /// What to run. May instead come from the config file.
    #[arg(value_enum)]
    command: Option<Command>,
    /// JSON run configuration; flags given on the command line override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    state: Option<StateSel>,
    #[arg(long, value_enum)]
    hamiltonian: Option<HamSel>,
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    jt: Option<f64>,
    /// Coupling constant; time is jt / j.
    #[arg(long, allow_negative_numbers = true)]
    j: Option<f64>,
    #[arg(long, value_parser = parse_axis)]
    axis: Option<Axis>,
    #[arg(long, allow_negative_numbers = true)]
    start: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    stop: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    /// Output file (sweep, sce, esd) or directory (verify, figures).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Exit with status 3 if any reference check is flagged.
    #[arg(long)]
    strict: bool,
    /// Worker threads for grid evaluation.
    #[arg(long)]
    threads: Option<usize>,
    /// Add closed-form values to sweep output.
    #[arg(long)]
    closed: bool,
}

fn parse_axis(s: &str) -> Result<Axis, String> {
    s.parse()
}

impl Cli {
    fn into_config(self) -> Result<RunConfig, config::Failure> {
        let base = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        let top = RunConfig {
            command: self.command,
            state: self.state,
            hamiltonian: self.hamiltonian,
            alpha: self.alpha,
            gamma: self.gamma,
            jt: self.jt,
            j: self.j,
            axis: self.axis,
            start: self.start,
            stop: self.stop,
            steps: self.steps,
            out: self.out,
            format: self.format,
            strict: self.strict.then_some(true),
            threads: self.threads,
            closed: self.closed.then_some(true),
            tolerances: None,
            constants: None,
        };
        Ok(base.overlay(top))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.into_config().and_then(|cfg| commands::run(&cfg)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code)
        }
    }
}
