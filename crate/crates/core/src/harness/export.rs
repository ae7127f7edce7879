use std::path::{Path, PathBuf};

use super::config::SweepAxis;
use super::run::RunRecord;
use super::sweep::axis_column;
use crate::baselines::PolicyKind;
use crate::error::Result;

pub const LEARNING_CURVE_HEADER: &str = "episode,cum_reward,cum_cost,gamma_c,lambda";
pub const LEARNING_CURVE_FILE: &str = "learning_curve.csv";
pub const CRLB_VS_SNR_FILE: &str = "crlb_vs_snr.csv";
pub const SE_VS_USERS_FILE: &str = "se_vs_users.csv";

fn sweep_csv(record: &RunRecord, axis: SweepAxis) -> String {
    match record.sweeps.iter().find(|t| t.axis == axis) {
        Some(t) => t.to_csv(&PolicyKind::ALL),
        None => {
            let names: Vec<&str> = PolicyKind::ALL.iter().map(|p| p.name()).collect();
            format!("{},{}\n", axis_column(axis), names.join(","))
        }
    }
}

/// Writes the plot-ready tables: the learning curve (with the constant
/// `Γ_c` reference column), averaged CRLB against SNR and averaged SE
/// against the user count. Missing data gives header-only files.
pub fn export_plotdata(record: &RunRecord, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut curve = format!("{LEARNING_CURVE_HEADER}\n");
    for e in &record.training.episodes {
        curve.push_str(&format!(
            "{},{},{},{},{}\n",
            e.episode, e.cum_reward, e.cum_cost, e.gamma_c, e.lambda
        ));
    }
    let files = [
        (LEARNING_CURVE_FILE, curve),
        (CRLB_VS_SNR_FILE, sweep_csv(record, SweepAxis::Snr)),
        (SE_VS_USERS_FILE, sweep_csv(record, SweepAxis::Users)),
    ];
    files
        .into_iter()
        .map(|(name, text)| {
            let path = dir.join(name);
            std::fs::write(&path, text)?;
            Ok(path)
        })
        .collect()
}
