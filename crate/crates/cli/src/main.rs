use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ffmwrc_cli::commands::DEFAULT_POINTS;
use ffmwrc_cli::{cmd_codecheck, cmd_compare, cmd_region, cmd_simulate, CliError, RegionSelector, RunConfig};
use ffmwrc_core::code::ensemble::CodeCheckMode;
use ffmwrc_core::regions::DEFAULT_GRID_STEP;

#[derive(Parser)]
#[command(name = "ffmwrc", version, about = "Finite field adder multi-way relay channel experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Export rate-region boundaries as CSV plus a membership sidecar.
    Region {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "capacity")]
        region: RegionSelector,
        #[arg(long, default_value_t = DEFAULT_POINTS)]
        points: usize,
        #[arg(long, default_value_t = DEFAULT_GRID_STEP)]
        grid_step: f64,
    },
    /// Monte Carlo simulation of the relay scheme.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        threads: Option<usize>,
        /// Simulate even when the code dimensions exceed the safety margin.
        #[arg(long)]
        force: bool,
    },
    /// Statistical checks on the random linear code ensemble.
    Codecheck {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        field: u32,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "sampled")]
        mode: Mode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the configured rates against every applicable region.
    Compare {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_POINTS)]
        points: usize,
        #[arg(long, default_value_t = DEFAULT_GRID_STEP)]
        grid_step: f64,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Mode {
    Sampled,
    Exhaustive,
    Adversarial,
}

impl From<Mode> for CodeCheckMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Sampled => CodeCheckMode::Sampled,
            Mode::Exhaustive => CodeCheckMode::Exhaustive,
            Mode::Adversarial => CodeCheckMode::Adversarial,
        }
    }
}

fn pick(flag: Option<PathBuf>, configured: Option<&PathBuf>, fallback: &str) -> PathBuf {
    flag.or_else(|| configured.cloned()).unwrap_or_else(|| PathBuf::from(fallback))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Region {
            config,
            out,
            region,
            points,
            grid_step,
        } => {
            let scenario = RunConfig::load(&config)?.validate()?;
            let out = pick(out, scenario.config.output.region.as_ref(), "region.csv");
            let report = cmd_region(&scenario, region, points, grid_step, &out)?;
            for (name, verdict) in &report.verdicts {
                println!("{name}: {verdict}");
            }
            if let Some(v) = report.containment_violations {
                println!("containment violations: {v}");
            }
        }
        Command::Simulate {
            config,
            out,
            seed,
            threads,
            force,
        } => {
            let mut cfg = RunConfig::load(&config)?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            let scenario = cfg.validate()?;
            let out = pick(out, scenario.config.output.simulate.as_ref(), "simulate.json");
            let report = cmd_simulate(&scenario, threads, force, &out)?;
            if let Some(s) = &report.summary {
                for u in &s.users {
                    println!(
                        "user {}: error rate {:.4} [{:.4}, {:.4}]",
                        u.user, u.error_rate, u.interval.lower, u.interval.upper
                    );
                }
            }
        }
        Command::Codecheck {
            k,
            n,
            field,
            samples,
            seed,
            mode,
            out,
        } => {
            let report = cmd_codecheck(k, n, field, samples, seed, mode.into(), out.as_deref())?;
            if out.is_none() {
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            } else {
                println!("{}", if report.pass { "pass" } else { "fail" });
            }
        }
        Command::Compare {
            config,
            out,
            points,
            grid_step,
        } => {
            let scenario = RunConfig::load(&config)?.validate()?;
            let out = pick(out, scenario.config.output.compare.as_ref(), "compare.json");
            let report = cmd_compare(&scenario, points, grid_step)?;
            ffmwrc_cli::commands::write_comparison(&report, &out)?;
            for s in &report.strategies {
                println!(
                    "{}: {} (common rate {:.6}, sum rate {:.6})",
                    s.region, s.verdict, s.max_common_rate, s.max_sum_rate
                );
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ffmwrc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
