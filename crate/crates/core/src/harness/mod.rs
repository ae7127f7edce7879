//! Experiment driver: TOML configuration, training campaigns with a
//! no-exploration evaluation phase, parameter sweeps, and CSV output for
//! plotting. Every summary number is recomputed from raw per-episode rows.

mod config;
mod export;
mod policy;
mod run;
mod stats;
mod sweep;

pub use config::{CampaignConfig, ExperimentConfig, SweepAxis, SweepConfig};
pub use export::{
    export_plotdata, CRLB_VS_SNR_FILE, LEARNING_CURVE_FILE, LEARNING_CURVE_HEADER, SE_VS_USERS_FILE,
};
pub use policy::{run_episode, run_episodes, EpisodeSummary, Policy};
pub use run::{
    evaluate_policies, evaluation_stream, init_stream, make_policy, read_training_log,
    run_campaign, run_training, seed_dir, training_stream, write_evaluation, write_run,
    PolicyEvaluation, RunRecord, EVAL_FORK, TRAIN_FORK,
};
pub use stats::{quantile, summarize, Stats};
pub use sweep::{axis_column, run_sweep, sweep_scenario, SweepSample, SweepTable};
