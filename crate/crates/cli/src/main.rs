// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

//! `ionbench`: run benchmarking, calibration and budget pipelines from a
//! JSON config and write tidy CSV/JSON outputs.

mod commands;
mod config;
mod failure;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ionbench_core::rb::SimTier;

use commands::{Context, Report};
use config::Loaded;
use failure::Failure;

#[derive(Parser)]
#[command(name = "ionbench", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed; overrides the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Simulation tier; overrides the config.
    #[arg(long, global = true, value_enum)]
    tier: Option<Tier>,
    /// Worker threads. Results do not depend on this.
    #[arg(long, global = true, env = "IONBENCH_WORKERS")]
    workers: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Tier {
    Fast,
    Full,
}

#[derive(Clone, Copy, Subcommand)]
enum Command {
    /// Randomised benchmarking with fit and bootstrap.
    Rb,
    /// Benchmarking with pulses replaced by delays.
    IdleRb,
    /// Benchmarking with delays after every pulse, swept over delay.
    Irmb,
    /// Amplitude then frequency calibration loops.
    Calibrate,
    /// Walsh drift spectroscopy and fit.
    Walsh,
    /// Ramsey and echo decay predicted from a phase-noise spectrum.
    PhaseNoise,
    /// Per-mechanism error budget and its gate-time curve.
    Budget,
    /// Idle rates from four-scheme delay measurements.
    LeakageRates,
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let mut loaded = Loaded::read(cli.config.as_deref())?;
    if let Some(seed) = cli.seed {
        loaded.config.seed = seed;
    }
    if let Some(tier) = cli.tier {
        loaded.config.tier = match tier {
            Tier::Fast => SimTier::Fast,
            Tier::Full => SimTier::Full,
        };
    }
    let ctx = Context {
        seed: loaded.config.seed,
        tier: loaded.config.tier,
        out: cli.out.clone(),
        loaded,
    };
    let dispatch = || match cli.command {
        Command::Rb => commands::rb(&ctx),
        Command::IdleRb => commands::idle_rb(&ctx),
        Command::Irmb => commands::irmb(&ctx),
        Command::Calibrate => commands::calibrate(&ctx),
        Command::Walsh => commands::walsh(&ctx),
        Command::PhaseNoise => commands::phase_noise(&ctx),
        Command::Budget => commands::budget(&ctx),
        Command::LeakageRates => commands::leakage_rates(&ctx),
    };
    match cli.workers {
        Some(0) => Err(Failure::config("--workers must be at least 1")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(Failure::run)?
            .install(dispatch),
        None => dispatch(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let f = Failure {
                kind: "usage",
                message: e.to_string().trim_end().to_string(),
            };
            let _ = writeln!(std::io::stderr(), "{}", json_line(&f));
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(report) => {
            println!("{}", serde_json::to_string(&report).expect("report serialises"));
            ExitCode::SUCCESS
        }
        Err(f) => {
            let _ = writeln!(std::io::stderr(), "{}", json_line(&f));
            ExitCode::from(f.exit_code())
        }
    }
}

fn json_line(f: &Failure) -> String {
    serde_json::json!({ "error": f }).to_string()
}
