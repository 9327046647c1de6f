use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};

mod commands;
mod config;
mod output;

use config::RunConfig;

#[derive(Parser)]
#[command(name = "dengue-oc", version, about = "Dengue host-vector model: simulation, R0 and optimal vector control")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the model under the configured controls.
    Simulate(Common),
    /// Print the basic reproduction number.
    R0(Common),
    /// Evaluate R0 on a grid of two controls and extract the R0 = 1 contour.
    R0Sweep {
        #[command(flatten)]
        common: Common,
        /// NAME, NAME:POINTS or NAME:FROM:TO:POINTS, NAME one of c_A, c_m, alpha.
        #[arg(long, default_value = "c_m")]
        axis1: String,
        #[arg(long, default_value = "c_A")]
        axis2: String,
    },
    /// Solve the optimal-control problem and compare with no control.
    Optimize(Common),
    /// Compare named control schedules.
    Compare {
        #[command(flatten)]
        common: Common,
        /// NAME=PATH of a schedule CSV (interval,t_start,t_end,c_A,c_m,alpha); repeatable.
        #[arg(long = "schedule", value_name = "NAME=PATH")]
        schedules: Vec<String>,
    },
}

#[derive(Args, Clone)]
struct Common {
    /// Run configuration (TOML). Defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory, overrides [run] out_dir.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Constant adulticide c_m.
    #[arg(long)]
    cm: Option<f64>,
    /// Constant larvicide c_A.
    #[arg(long)]
    ca: Option<f64>,
    /// Constant fraction of breeding sites kept, alpha.
    #[arg(long)]
    alpha: Option<f64>,
    /// Horizon in days.
    #[arg(long)]
    tf: Option<f64>,
    /// Integration step in days.
    #[arg(long)]
    step: Option<f64>,
    /// Print the effective configuration and exit.
    #[arg(long)]
    dump_config: bool,
}

impl Common {
    fn resolve(&self) -> anyhow::Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(v) = self.cm {
            cfg.controls.c_m = v;
        }
        if let Some(v) = self.ca {
            cfg.controls.c_A = v;
        }
        if let Some(v) = self.alpha {
            cfg.controls.alpha = v;
        }
        if let Some(v) = self.tf {
            cfg.run.t_f = v;
        }
        if let Some(v) = self.step {
            cfg.run.h = v;
        }
        if let Some(dir) = &self.out {
            cfg.run.out_dir = dir.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Failure classes of the exit-code contract.
pub enum Failure {
    /// Bad configuration or arguments: exit 2.
    Config(anyhow::Error),
    /// Integration or optimizer failure: exit 3.
    Integration(anyhow::Error),
    /// Anything else (I/O): exit 1.
    Other(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Integration(_) => 3,
            Failure::Other(_) => 1,
        }
    }

    fn error(&self) -> &anyhow::Error {
        match self {
            Failure::Config(e) | Failure::Integration(e) | Failure::Other(e) => e,
        }
    }
}

/// Routes a model error to its exit class.
pub fn classify(e: dengue_oc::Error) -> Failure {
    use dengue_oc::Error as E;
    match e {
        E::StepRejected { .. } | E::BlowUp { .. } | E::Scenario { .. } | E::Optimizer { .. } => {
            Failure::Integration(e.into())
        }
        _ => Failure::Config(e.into()),
    }
}

pub trait OrIo<T> {
    fn io(self) -> Result<T, Failure>;
}

impl<T> OrIo<T> for anyhow::Result<T> {
    fn io(self) -> Result<T, Failure> {
        self.map_err(Failure::Other)
    }
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("DENGUE_OC_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| anyhow!("DENGUE_OC_THREADS = {v:?} is not a positive integer"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("cannot configure the thread pool")?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8, Failure> {
    configure_threads().map_err(Failure::Config)?;
    let common = match &cli.command {
        Command::Simulate(c) | Command::R0(c) | Command::Optimize(c) => c,
        Command::R0Sweep { common, .. } | Command::Compare { common, .. } => common,
    };
    let cfg = common.resolve().map_err(Failure::Config)?;
    if common.dump_config {
        print!("{}", cfg.to_toml());
        return Ok(0);
    }
    let out: &Path = &cfg.run.out_dir;
    match &cli.command {
        Command::Simulate(_) => commands::simulate(&cfg, out),
        Command::R0(_) => commands::r0(&cfg),
        Command::R0Sweep { axis1, axis2, .. } => commands::r0_sweep(&cfg, out, axis1, axis2),
        Command::Optimize(_) => commands::optimize(&cfg, out),
        Command::Compare { schedules, .. } => commands::compare(&cfg, out, schedules),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {:#}", failure.error());
            ExitCode::from(failure.code())
        }
    }
}
