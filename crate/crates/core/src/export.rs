//! Plot-ready CSV exports.
//!
//! All writers produce deterministic output: fixed column order, one row
//! per timestep or sample, floats in shortest round-trip form, no
//! timestamps or run metadata. Cells for absent optional values are left
//! empty rather than written as sentinels.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::cache_scheduler::ComparisonRow;
use crate::error::{Error, Result};
use crate::poly_fit::{self, FitDataset};
use crate::synthesis::FactorStudy;
use crate::trace_model::{CacheSchedule, CfgDecision, FitKind, FitModel, MainDecision};

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn main_decision_str(d: MainDecision) -> &'static str {
    match d {
        MainDecision::Compute => "compute",
        MainDecision::Reuse => "reuse",
    }
}

fn cfg_decision_str(d: CfgDecision) -> &'static str {
    match d {
        CfgDecision::ComputeBoth => "compute_both",
        CfgDecision::ReuseUncond => "reuse_uncond",
        CfgDecision::Skipped => "skipped",
    }
}

/// Write a schedule as `step,main_decision,cfg_decision,main_acc,cfg_acc`,
/// one row per timestep. CFG cells are empty when the schedule was
/// produced with the CFG path disabled.
pub fn write_schedule_csv(schedule: &CacheSchedule, path: impl AsRef<Path>) -> Result<()> {
    let mut text = String::from("step,main_decision,cfg_decision,main_acc,cfg_acc\n");
    for t in 0..schedule.num_steps() {
        let cfg_decision = schedule
            .cfg_decisions()
            .map(|d| cfg_decision_str(d[t]))
            .unwrap_or("");
        let cfg_acc = schedule
            .cfg_accumulator()
            .map(|a| a[t].to_string())
            .unwrap_or_default();
        writeln!(
            text,
            "{t},{},{cfg_decision},{},{cfg_acc}",
            main_decision_str(schedule.main_decisions()[t]),
            schedule.main_accumulator()[t],
        )
        .expect("writing to a String cannot fail");
    }
    write_text(path.as_ref(), &text)
}

/// Write per-sample fit evaluation rows as `t,x,y,y_hat_multi,y_hat_uni`.
///
/// Each prediction column belongs to one expansion kind; a column whose
/// model is absent is left empty. Passing a model under the wrong column
/// is rejected rather than silently mislabeled.
pub fn write_fit_eval_csv(
    dataset: &FitDataset,
    multi: Option<&FitModel>,
    uni: Option<&FitModel>,
    path: impl AsRef<Path>,
) -> Result<()> {
    if multi.is_none() && uni.is_none() {
        return Err(Error::EmptyInput { what: "fit models" });
    }
    for (model, expected) in [(multi, FitKind::Multivariate12), (uni, FitKind::Univariate5)] {
        if let Some(model) = model {
            if model.kind() != expected {
                return Err(Error::Config {
                    message: format!(
                        "the {} column requires a {} model, got {}",
                        expected.as_str(),
                        expected.as_str(),
                        model.kind().as_str()
                    ),
                });
            }
        }
    }
    let mut text = String::from("t,x,y,y_hat_multi,y_hat_uni\n");
    for row in dataset.rows() {
        let mut cells = [String::new(), String::new()];
        for (cell, model) in cells.iter_mut().zip([multi, uni]) {
            if let Some(model) = model {
                *cell = poly_fit::predict(model, row.x, row.t_raw)?.to_string();
            }
        }
        writeln!(text, "{},{},{},{},{}", row.t_raw, row.x, row.y, cells[0], cells[1])
            .expect("writing to a String cannot fail");
    }
    write_text(path.as_ref(), &text)
}

/// Write a factor study as `step,cv_strong,cv_weak`.
pub fn write_factor_study_csv(study: &FactorStudy, path: impl AsRef<Path>) -> Result<()> {
    let mut text = String::from("step,cv_strong,cv_weak\n");
    for (t, (s, w)) in study.cv_strong.iter().zip(&study.cv_weak).enumerate() {
        writeln!(text, "{t},{s},{w}").expect("writing to a String cannot fail");
    }
    write_text(path.as_ref(), &text)
}

/// Write one per-step dispersion series as `step,cv`. Steps where the
/// dispersion is undefined (near-zero mean) carry an empty cell.
pub fn write_step_cv_csv(cvs: &[Option<f64>], path: impl AsRef<Path>) -> Result<()> {
    if cvs.is_empty() {
        return Err(Error::EmptyInput { what: "per-step dispersion values" });
    }
    let mut text = String::from("step,cv\n");
    for (t, cv) in cvs.iter().enumerate() {
        let cell = cv.map(|v| v.to_string()).unwrap_or_default();
        writeln!(text, "{t},{cell}").expect("writing to a String cannot fail");
    }
    write_text(path.as_ref(), &text)
}

/// Write the successful rows of a policy comparison as
/// `policy,delta_main,delta_cfg,computed_passes,speedup,reuse_ratio`,
/// returning how many rows were written. Failed rows are skipped — the
/// caller reports their errors. The `delta_cfg` cell is empty for rows
/// that ran with the CFG path disabled, where the value is ignored.
pub fn write_comparison_csv(rows: &[ComparisonRow], path: impl AsRef<Path>) -> Result<usize> {
    let mut text =
        String::from("policy,delta_main,delta_cfg,computed_passes,speedup,reuse_ratio\n");
    let mut written = 0;
    for row in rows {
        let Ok(summary) = &row.outcome else { continue };
        let delta_cfg = if row.config.cfg_enabled {
            row.config.delta_cfg.to_string()
        } else {
            String::new()
        };
        writeln!(
            text,
            "{},{},{delta_cfg},{},{},{}",
            row.config.policy.as_str(),
            row.config.delta_main,
            summary.computed_passes,
            summary.speedup,
            summary.reuse_ratio,
        )
        .expect("writing to a String cannot fail");
        written += 1;
    }
    write_text(path.as_ref(), &text)?;
    Ok(written)
}
