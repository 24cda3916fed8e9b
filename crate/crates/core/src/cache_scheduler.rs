//! Accumulate-and-reset cache-reuse scheduling.
//!
//! Every policy follows the same control law: a per-step indicator value
//! is added to an accumulator, and the step recomputes (resetting the
//! accumulator) exactly when the accumulated value strictly exceeds the
//! threshold; otherwise the cached output is reused. Ties reuse — the
//! computed step is the first strict exceeder. Step 0 always computes.
//!
//! Four policies share that law:
//! * `teacache` / `pca_teacache` apply it to estimated output differences
//!   on the main path (they differ only in where the caller sourced the
//!   estimates); with the CFG path enabled, both guidance passes run at
//!   every computed step.
//! * `dyncfg_only` computes every main step and applies the law to the
//!   codebook values on the unconditional pass.
//! * `prompttea` runs both indicators, with the main path taking
//!   priority: a main-path reuse skips the whole step, and the CFG
//!   accumulator keeps advancing through skipped steps without a reset so
//!   the cond/uncond drift stays accounted for.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trace_model::{
    CacheSchedule, CfgDecision, DiffCodebook, MainDecision, TimestepTrace,
};

/// Caching policy selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Policy {
    /// Main-path caching driven by externally supplied estimates.
    #[serde(rename = "teacache")]
    TeaCache,
    /// Main-path caching driven by model predictions with a
    /// complexity-aware threshold.
    #[serde(rename = "pca_teacache")]
    PcaTeaCache,
    /// CFG-path caching only; every main step computes.
    #[serde(rename = "dyncfg_only")]
    DynCfgOnly,
    /// Combined main-path and CFG-path caching with main-path priority.
    #[serde(rename = "prompttea")]
    PromptTea,
}

impl Policy {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::TeaCache => "teacache",
            Self::PcaTeaCache => "pca_teacache",
            Self::DynCfgOnly => "dyncfg_only",
            Self::PromptTea => "prompttea",
        }
    }
}

fn default_delta_cfg() -> f64 {
    0.02
}

fn default_cfg_enabled() -> bool {
    true
}

/// One policy run's configuration. `delta_cfg` is ignored when the CFG
/// path is disabled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolicyConfig {
    pub policy: Policy,
    pub delta_main: f64,
    #[serde(default = "default_delta_cfg")]
    pub delta_cfg: f64,
    #[serde(default = "default_cfg_enabled")]
    pub cfg_enabled: bool,
}

impl PolicyConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.delta_main.is_finite() || self.delta_main <= 0.0 {
            return Err(Error::Domain {
                name: "delta_main",
                value: self.delta_main,
                expected: "a positive finite threshold",
            });
        }
        if self.cfg_enabled && (!self.delta_cfg.is_finite() || self.delta_cfg <= 0.0) {
            return Err(Error::Domain {
                name: "delta_cfg",
                value: self.delta_cfg,
                expected: "a positive finite threshold",
            });
        }
        if self.policy == Policy::DynCfgOnly && !self.cfg_enabled {
            return Err(Error::Config {
                message: "policy dyncfg_only requires cfg_enabled = true".into(),
            });
        }
        Ok(())
    }
}

/// Per-step indicator inputs for a simulation run: main-path estimated
/// output differences, plus the codebook when a CFG-caching policy runs.
#[derive(Debug, Clone, PartialEq)]
pub struct StepEstimates {
    est_main: Vec<f64>,
    codebook: Option<DiffCodebook>,
}

impl StepEstimates {
    pub fn new(est_main: Vec<f64>, codebook: Option<DiffCodebook>) -> Result<Self> {
        if est_main.is_empty() {
            return Err(Error::EmptyInput { what: "per-step estimates" });
        }
        for (i, &v) in est_main.iter().enumerate() {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::AtIndex {
                    index: i,
                    source: Box::new(Error::Domain {
                        name: "est_main",
                        value: v,
                        expected: "a non-negative finite estimate",
                    }),
                });
            }
        }
        if let Some(cb) = &codebook {
            if cb.num_steps() != est_main.len() {
                return Err(Error::DimensionMismatch {
                    expected: est_main.len(),
                    actual: cb.num_steps(),
                });
            }
        }
        Ok(Self { est_main, codebook })
    }

    pub fn est_main(&self) -> &[f64] {
        &self.est_main
    }

    pub fn codebook(&self) -> Option<&DiffCodebook> {
        self.codebook.as_ref()
    }

    pub fn num_steps(&self) -> usize {
        self.est_main.len()
    }
}

/// Average the recorded conditional/unconditional differences of every
/// trace that carries them into a per-timestep codebook.
pub fn build_codebook(traces: &[TimestepTrace]) -> Result<DiffCodebook> {
    let with_cfg: Vec<&TimestepTrace> =
        traces.iter().filter(|t| t.cfg_diff().is_some()).collect();
    if with_cfg.is_empty() {
        return Err(Error::EmptyInput {
            what: "traces with conditional/unconditional differences",
        });
    }
    let t = with_cfg[0].num_steps();
    let mut sums = vec![0.0; t];
    for trace in &with_cfg {
        let diffs = trace.cfg_diff().expect("filtered to traces with cfg_diff");
        if diffs.len() != t {
            return Err(Error::Validation {
                context: format!("trace (prompt {:?})", trace.prompt_id()),
                message: format!(
                    "cfg_diff has length {} but the first trace has {t}",
                    diffs.len()
                ),
            });
        }
        for (sum, &d) in sums.iter_mut().zip(diffs) {
            *sum += d;
        }
    }
    let n = with_cfg.len();
    let values = sums.into_iter().map(|s| s / n as f64).collect();
    DiffCodebook::new(values, n)
}

fn check_threshold(name: &'static str, delta: f64) -> Result<()> {
    if !delta.is_finite() || delta <= 0.0 {
        return Err(Error::Domain {
            name,
            value: delta,
            expected: "a positive finite threshold",
        });
    }
    Ok(())
}

/// Run the accumulate-and-reset law over main-path estimates.
///
/// Returns the per-step decisions and the accumulator trace; the trace
/// records the value each step was judged on — after adding the step's
/// estimate, before any reset — so `est[0]` is never read and step 0
/// records 0.
pub fn simulate_main(est: &[f64], delta: f64) -> Result<(Vec<MainDecision>, Vec<f64>)> {
    if est.is_empty() {
        return Err(Error::EmptyInput { what: "per-step estimates" });
    }
    check_threshold("delta", delta)?;
    for (i, &v) in est.iter().enumerate() {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::AtIndex {
                index: i,
                source: Box::new(Error::Domain {
                    name: "est",
                    value: v,
                    expected: "a non-negative finite estimate",
                }),
            });
        }
    }
    let mut decisions = vec![MainDecision::Compute];
    let mut trace = vec![0.0];
    let mut acc = 0.0;
    for &e in &est[1..] {
        acc += e;
        trace.push(acc);
        if acc > delta {
            decisions.push(MainDecision::Compute);
            acc = 0.0;
        } else {
            decisions.push(MainDecision::Reuse);
        }
    }
    Ok((decisions, trace))
}

/// Run the accumulate-and-reset law over codebook values on the CFG path,
/// honoring main-path priority.
///
/// Steps where the main path reuses are `Skipped` — the whole step's
/// output is reused, so no guidance pass runs — and the accumulator still
/// advances there without triggering a reset.
pub fn simulate_cfg(
    codebook: &DiffCodebook,
    delta_cfg: f64,
    main: &[MainDecision],
) -> Result<(Vec<CfgDecision>, Vec<f64>)> {
    if codebook.num_steps() != main.len() {
        return Err(Error::DimensionMismatch {
            expected: main.len(),
            actual: codebook.num_steps(),
        });
    }
    check_threshold("delta_cfg", delta_cfg)?;
    let values = codebook.values();
    let mut decisions = vec![CfgDecision::ComputeBoth];
    let mut trace = vec![0.0];
    let mut acc = 0.0;
    for (&v, &main_decision) in values[1..].iter().zip(&main[1..]) {
        acc += v;
        trace.push(acc);
        if main_decision == MainDecision::Reuse {
            decisions.push(CfgDecision::Skipped);
        } else if acc > delta_cfg {
            decisions.push(CfgDecision::ComputeBoth);
            acc = 0.0;
        } else {
            decisions.push(CfgDecision::ReuseUncond);
        }
    }
    Ok((decisions, trace))
}

/// Simulate one policy over the given estimates, producing the full
/// schedule with pass accounting.
pub fn simulate(config: &PolicyConfig, estimates: &StepEstimates) -> Result<CacheSchedule> {
    config.validate()?;
    let t = estimates.num_steps();
    let (main, main_acc) = match config.policy {
        Policy::DynCfgOnly => (vec![MainDecision::Compute; t], vec![0.0; t]),
        _ => simulate_main(estimates.est_main(), config.delta_main)?,
    };
    let (cfg, cfg_acc) = if config.cfg_enabled {
        match config.policy {
            // No CFG caching: both guidance passes run at every computed
            // step, and a main-path reuse skips the step outright.
            Policy::TeaCache | Policy::PcaTeaCache => {
                let mirrored = main
                    .iter()
                    .map(|d| match d {
                        MainDecision::Compute => CfgDecision::ComputeBoth,
                        MainDecision::Reuse => CfgDecision::Skipped,
                    })
                    .collect();
                (Some(mirrored), Some(vec![0.0; t]))
            }
            Policy::DynCfgOnly | Policy::PromptTea => {
                let codebook = estimates.codebook().ok_or_else(|| Error::Config {
                    message: format!(
                        "policy {} with the CFG path enabled requires a codebook",
                        config.policy.as_str()
                    ),
                })?;
                let (decisions, acc) = simulate_cfg(codebook, config.delta_cfg, &main)?;
                (Some(decisions), Some(acc))
            }
        }
    } else {
        (None, None)
    };
    let computed = CacheSchedule::count_passes(&main, cfg.as_deref());
    let baseline = t as u64 * if cfg.is_some() { 2 } else { 1 };
    let speedup = baseline as f64 / computed as f64;
    CacheSchedule::new(main, cfg, main_acc, cfg_acc, computed, baseline, speedup)
}

/// Pass accounting extracted from a schedule for tabular comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScheduleSummary {
    pub computed_passes: u64,
    pub baseline_passes: u64,
    pub speedup: f64,
    /// Fraction of baseline passes avoided: 1 − computed / baseline.
    pub reuse_ratio: f64,
}

impl ScheduleSummary {
    pub fn of(schedule: &CacheSchedule) -> Self {
        Self {
            computed_passes: schedule.computed_passes(),
            baseline_passes: schedule.baseline_passes(),
            speedup: schedule.speedup(),
            reuse_ratio: 1.0
                - schedule.computed_passes() as f64 / schedule.baseline_passes() as f64,
        }
    }
}

/// One policy's comparison outcome: its summary, or the error that run
/// produced.
#[derive(Debug)]
pub struct ComparisonRow {
    pub config: PolicyConfig,
    pub outcome: Result<ScheduleSummary>,
}

/// Simulate every config over the same estimates. A failing row records
/// its error and does not abort the remaining rows.
pub fn compare_policies(
    configs: &[PolicyConfig],
    estimates: &StepEstimates,
) -> Result<Vec<ComparisonRow>> {
    if configs.is_empty() {
        return Err(Error::EmptyInput { what: "policy configs" });
    }
    Ok(configs
        .iter()
        .map(|config| ComparisonRow {
            config: *config,
            outcome: simulate(config, estimates).map(|s| ScheduleSummary::of(&s)),
        })
        .collect())
}
