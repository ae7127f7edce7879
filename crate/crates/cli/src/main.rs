//! `isac`: command-line driver for training campaigns, policy evaluation,
//! parameter sweeps and plot-data export.
//!
//! Every run directory receives the exact `config.toml` it was produced
//! from, so `--config <run>/config.toml` reproduces it bit for bit.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use isac_core::baselines::PolicyKind;
use isac_core::harness::{
    evaluate_policies, export_plotdata, read_training_log, run_campaign, run_sweep, seed_dir,
    write_evaluation, write_run, ExperimentConfig, RunRecord, SweepAxis, SweepTable,
};

#[derive(Parser)]
#[command(
    name = "isac",
    version,
    about = "Constrained-DRL ISAC precoding experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train one agent per seed, then evaluate all configured policies.
    Train(Common),
    /// Evaluate policies without training; the agent needs `--checkpoint`.
    Eval {
        #[command(flatten)]
        common: Common,
        /// Checkpoint directory written by `train` (`<run>/seed-N/checkpoints`).
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// Evaluate policies across SNR or user-count values.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        axis: Option<SweepAxis>,
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<f64>>,
        /// Use this trained agent at every point instead of training per point.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// Turn a run directory into plot-ready CSV tables.
    Export {
        /// Run directory produced by `train` or `sweep`.
        run: PathBuf,
        /// Seed whose learning curve is exported (default: first seed of the run).
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory (default: `<run>/plots`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    /// TOML experiment file; the built-in tiny profile when absent.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Single seed; overrides the configured list.
    #[arg(long, conflicts_with = "seeds")]
    seed: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    seeds: Option<Vec<u64>>,
    /// Policies to evaluate (repeatable or comma separated).
    #[arg(long, value_delimiter = ',')]
    policy: Option<Vec<PolicyKind>>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Training episodes for `train`/`sweep`, evaluation episodes for `eval`.
    #[arg(long)]
    episodes: Option<usize>,
}

impl Common {
    fn load(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)
                .with_context(|| format!("loading {}", path.display()))?,
            None => ExperimentConfig::tiny(),
        };
        if let Some(seed) = self.seed {
            cfg.campaign.seeds = vec![seed];
        }
        if let Some(seeds) = &self.seeds {
            cfg.campaign.seeds = seeds.clone();
        }
        if let Some(policies) = &self.policy {
            cfg.campaign.policies = policies.clone();
        }
        if let Some(out) = &self.out {
            cfg.campaign.output_dir = out.clone();
        }
        Ok(cfg)
    }
}

fn finish(cfg: &ExperimentConfig) -> Result<PathBuf> {
    cfg.validate()?;
    let dir = cfg.campaign.output_dir.clone();
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    cfg.save(&dir.join("config.toml"))?;
    Ok(dir)
}

fn train(common: &Common) -> Result<()> {
    let mut cfg = common.load()?;
    if let Some(n) = common.episodes {
        cfg.campaign.episodes = n;
    }
    let dir = finish(&cfg)?;
    log::info!(
        "training {} seed(s) for {} episodes",
        cfg.campaign.seeds.len(),
        cfg.campaign.episodes
    );
    for (record, bundle) in run_campaign(&cfg)? {
        let seed = record.seed.expect("campaign records carry their seed");
        let sdir = seed_dir(&dir, seed);
        write_run(&cfg, &record, Some(&bundle), &sdir)?;
        for pe in &record.evaluation {
            let s = pe.reward_stats();
            println!(
                "seed {seed} {:<10} median reward {:>10.4}  satisfied {:>5.1}%",
                pe.policy.name(),
                s.median,
                100.0 * pe.satisfaction_rate()
            );
        }
    }
    println!("wrote {}", dir.display());
    Ok(())
}

fn eval(common: &Common, checkpoint: Option<&Path>) -> Result<()> {
    let mut cfg = common.load()?;
    if let Some(n) = common.episodes {
        cfg.campaign.eval_episodes = n;
    }
    if let Some(path) = checkpoint {
        cfg.campaign.agent_checkpoint = Some(path.to_path_buf());
    }
    let dir = finish(&cfg)?;
    for &seed in &cfg.campaign.seeds {
        let evaluation = evaluate_policies(&cfg, seed, None)?;
        write_evaluation(&evaluation, &seed_dir(&dir, seed), cfg.campaign.save_traces)?;
        for pe in &evaluation {
            println!(
                "seed {seed} {:<10} median reward {:>10.4}  satisfied {:>5.1}%",
                pe.policy.name(),
                pe.reward_stats().median,
                100.0 * pe.satisfaction_rate()
            );
        }
    }
    println!("wrote {}", dir.display());
    Ok(())
}

fn sweep_file(axis: SweepAxis) -> String {
    format!("sweep_{}.csv", axis.name())
}

fn sweep(
    common: &Common,
    axis: Option<SweepAxis>,
    values: Option<&[f64]>,
    checkpoint: Option<&Path>,
) -> Result<()> {
    let mut cfg = common.load()?;
    if let Some(n) = common.episodes {
        cfg.campaign.episodes = n;
    }
    if let Some(axis) = axis {
        cfg.campaign.sweep.axis = axis;
    }
    if let Some(values) = values {
        cfg.campaign.sweep.values = values.to_vec();
    }
    if let Some(path) = checkpoint {
        cfg.campaign.agent_checkpoint = Some(path.to_path_buf());
    }
    let dir = finish(&cfg)?;
    let axis = cfg.campaign.sweep.axis;
    let table = run_sweep(&cfg, axis, &cfg.campaign.sweep.values)?;
    table.write_raw(&dir.join(sweep_file(axis)))?;
    let wide = table.to_csv(&table.policies);
    std::fs::write(dir.join(format!("sweep_{}_table.csv", axis.name())), &wide)?;
    print!("{wide}");
    println!("wrote {}", dir.display());
    Ok(())
}

fn export(run: &Path, seed: Option<u64>, out: Option<&Path>) -> Result<()> {
    if !run.is_dir() {
        bail!("run directory {} does not exist", run.display());
    }
    let mut record = RunRecord::default();
    let seed = match seed {
        Some(s) => Some(s),
        None => {
            let cfg_path = run.join("config.toml");
            cfg_path
                .exists()
                .then(|| ExperimentConfig::load(&cfg_path))
                .transpose()?
                .and_then(|c| c.campaign.seeds.first().copied())
        }
    };
    if let Some(s) = seed {
        let log = seed_dir(run, s).join("training_log.csv");
        if log.exists() {
            record.training = read_training_log(&log)?;
            record.seed = Some(s);
        }
    }
    for axis in [SweepAxis::Snr, SweepAxis::Users] {
        let raw = run.join(sweep_file(axis));
        if raw.exists() {
            record.sweeps.push(SweepTable::read_raw(axis, &raw)?);
        }
    }
    let out = out.map_or_else(|| run.join("plots"), Path::to_path_buf);
    for path in export_plotdata(&record, &out)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Train(common) => train(&common),
        Command::Eval { common, checkpoint } => eval(&common, checkpoint.as_deref()),
        Command::Sweep {
            common,
            axis,
            values,
            checkpoint,
        } => sweep(&common, axis, values.as_deref(), checkpoint.as_deref()),
        Command::Export { run, seed, out } => export(&run, seed, out.as_deref()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
