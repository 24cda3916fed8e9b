//! Domain data model and serialization for traces, embedding banks,
//! fitted models, difference codebooks, and cache schedules.
//!
//! Every persisted artifact is a self-describing JSON document carrying a
//! `schema_version` field, so recorded data stays diffable and loadable
//! across tool versions. All types validate their invariants on
//! construction and again on load; once built they are immutable.
//!
//! Timestep indices are 0-based everywhere. The per-step difference value
//! stored at index `t` is the relative L1 difference between step `t` and
//! its successor, as recorded (forward difference); index 0 has no
//! predecessor to diff against, so schedulers ignore `est[0]`.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Version stamped into every artifact file this crate writes.
pub const SCHEMA_VERSION: u32 = 1;

fn check_finite_nonneg(values: &[f64], context: &str, what: &str) -> Result<()> {
    for (i, &v) in values.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::Validation {
                context: context.to_string(),
                message: format!("{what}[{i}] is not finite"),
            });
        }
        if v < 0.0 {
            return Err(Error::Validation {
                context: context.to_string(),
                message: format!("{what}[{i}] = {v} is negative"),
            });
        }
    }
    Ok(())
}

// ── Timestep traces ──────────────────────────────────────────────────────

/// Per-prompt sequence of per-step relative differences.
///
/// `x` holds the relative L1 differences of consecutive timestep
/// embeddings; `y` the observed relative output differences; `cfg_diff`
/// the relative differences between conditional and unconditional outputs
/// at the same step. Optional sequences are absent when not recorded —
/// zero is a meaningful difference value, so it never stands in for
/// "missing".
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimestepTrace {
    prompt_id: String,
    x: Vec<f64>,
    y: Option<Vec<f64>>,
    cfg_diff: Option<Vec<f64>>,
}

impl TimestepTrace {
    pub fn new(
        prompt_id: impl Into<String>,
        x: Vec<f64>,
        y: Option<Vec<f64>>,
        cfg_diff: Option<Vec<f64>>,
    ) -> Result<Self> {
        let trace = Self { prompt_id: prompt_id.into(), x, y, cfg_diff };
        trace.validate()?;
        Ok(trace)
    }

    fn validate(&self) -> Result<()> {
        let context = format!("trace (prompt {:?})", self.prompt_id);
        if self.x.is_empty() {
            return Err(Error::Validation {
                context,
                message: "x must hold at least one step".into(),
            });
        }
        check_finite_nonneg(&self.x, &context, "x")?;
        for (name, seq) in [("y", &self.y), ("cfg_diff", &self.cfg_diff)] {
            if let Some(seq) = seq {
                if seq.len() != self.x.len() {
                    return Err(Error::Validation {
                        context,
                        message: format!(
                            "{name} has length {} but x has length {}",
                            seq.len(),
                            self.x.len()
                        ),
                    });
                }
                check_finite_nonneg(seq, &context, name)?;
            }
        }
        Ok(())
    }

    pub fn prompt_id(&self) -> &str {
        &self.prompt_id
    }

    /// Number of timesteps T.
    pub fn num_steps(&self) -> usize {
        self.x.len()
    }

    /// Relative L1 differences of consecutive timestep embeddings.
    pub fn x(&self) -> &[f64] {
        &self.x
    }

    /// Recorded relative output differences, if present.
    pub fn y(&self) -> Option<&[f64]> {
        self.y.as_deref()
    }

    /// Recorded conditional/unconditional relative differences, if present.
    pub fn cfg_diff(&self) -> Option<&[f64]> {
        self.cfg_diff.as_deref()
    }
}

#[derive(Serialize, Deserialize)]
struct TraceBundleFile {
    schema_version: u32,
    traces: Vec<TimestepTrace>,
}

/// Load a trace bundle, validating every trace.
pub fn load_trace_bundle(path: impl AsRef<Path>) -> Result<Vec<TimestepTrace>> {
    let path = path.as_ref();
    let file: TraceBundleFile = read_json(path)?;
    check_version(file.schema_version, path)?;
    for (i, trace) in file.traces.iter().enumerate() {
        trace.validate().map_err(|e| at_record(e, "trace", i))?;
    }
    Ok(file.traces)
}

/// Save a trace bundle. Validates every trace before touching the file.
pub fn save_trace_bundle(traces: &[TimestepTrace], path: impl AsRef<Path>) -> Result<()> {
    for (i, trace) in traces.iter().enumerate() {
        trace.validate().map_err(|e| at_record(e, "trace", i))?;
    }
    let file = TraceBundleFile {
        schema_version: SCHEMA_VERSION,
        traces: traces.to_vec(),
    };
    write_json(path.as_ref(), &file)
}

// ── Embedding bank ───────────────────────────────────────────────────────

/// Complexity class of a reference prompt embedding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PromptLabel {
    Complex,
    Simple,
}

impl PromptLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Complex => "complex",
            Self::Simple => "simple",
        }
    }
}

/// One labeled reference embedding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BankEntry {
    pub label: PromptLabel,
    pub vector: Vec<f64>,
}

/// Labeled prompt text-embedding vectors used as complex/simple reference
/// sets for similarity scoring.
///
/// Construction requires consistent dimensions and non-degenerate vectors;
/// the presence of a particular label is checked where it is needed, so a
/// bank holding only one class is loadable (and scoring against the
/// missing class fails with a label error).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingBank {
    dim: usize,
    entries: Vec<BankEntry>,
}

impl EmbeddingBank {
    pub fn new(dim: usize, entries: Vec<BankEntry>) -> Result<Self> {
        let bank = Self { dim, entries };
        bank.validate()?;
        Ok(bank)
    }

    fn validate(&self) -> Result<()> {
        let context = "embedding bank".to_string();
        if self.dim == 0 {
            return Err(Error::Validation {
                context,
                message: "dim must be positive".into(),
            });
        }
        if self.entries.is_empty() {
            return Err(Error::Validation {
                context,
                message: "bank has no entries".into(),
            });
        }
        for (i, entry) in self.entries.iter().enumerate() {
            if entry.vector.len() != self.dim {
                return Err(Error::Validation {
                    context,
                    message: format!(
                        "entry {i} has dimension {} but bank declares {}",
                        entry.vector.len(),
                        self.dim
                    ),
                });
            }
            if entry.vector.iter().any(|v| !v.is_finite()) {
                return Err(Error::Validation {
                    context,
                    message: format!("entry {i} contains a non-finite component"),
                });
            }
            let norm = entry.vector.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm <= 1e-12 {
                return Err(Error::Validation {
                    context,
                    message: format!("entry {i} has (near-)zero norm"),
                });
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[BankEntry] {
        &self.entries
    }

    /// Iterator over the vectors carrying `label`.
    pub fn vectors_with_label(&self, label: PromptLabel) -> impl Iterator<Item = &[f64]> {
        self.entries
            .iter()
            .filter(move |e| e.label == label)
            .map(|e| e.vector.as_slice())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file: BankFile = read_json(path)?;
        check_version(file.schema_version, path)?;
        file.bank.validate()?;
        Ok(file.bank)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        self.validate()?;
        write_json(
            path.as_ref(),
            &BankFile { schema_version: SCHEMA_VERSION, bank: self.clone() },
        )
    }
}

#[derive(Serialize, Deserialize)]
struct BankFile {
    schema_version: u32,
    #[serde(flatten)]
    bank: EmbeddingBank,
}

// ── Fitted models ────────────────────────────────────────────────────────

/// Which feature expansion a fitted model pairs with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitKind {
    /// Twelve 4th-order polynomial features of (x, t).
    Multivariate12,
    /// Five polynomial features of x alone; the single-input baseline.
    Univariate5,
}

impl FitKind {
    pub fn coeff_count(self) -> usize {
        match self {
            Self::Multivariate12 => 12,
            Self::Univariate5 => 5,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Multivariate12 => "multivariate12",
            Self::Univariate5 => "univariate5",
        }
    }
}

/// Coefficients of a fitted input/output-difference relationship.
///
/// `t_normalizer` is the divisor applied to a raw timestep index before
/// feature expansion; it is stored with the coefficients so prediction is
/// self-consistent with the fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitModel {
    kind: FitKind,
    coeffs: Vec<f64>,
    t_normalizer: f64,
}

impl FitModel {
    pub fn new(kind: FitKind, coeffs: Vec<f64>, t_normalizer: f64) -> Result<Self> {
        let model = Self { kind, coeffs, t_normalizer };
        model.validate()?;
        Ok(model)
    }

    fn validate(&self) -> Result<()> {
        let context = "fit model".to_string();
        if self.coeffs.len() != self.kind.coeff_count() {
            return Err(Error::Validation {
                context,
                message: format!(
                    "kind {} requires {} coefficients, got {}",
                    self.kind.as_str(),
                    self.kind.coeff_count(),
                    self.coeffs.len()
                ),
            });
        }
        if let Some(&bad) = self.coeffs.iter().find(|c| !c.is_finite()) {
            return Err(Error::Validation {
                context,
                message: format!("non-finite coefficient {bad}"),
            });
        }
        if !self.t_normalizer.is_finite() || self.t_normalizer <= 0.0 {
            return Err(Error::Validation {
                context,
                message: format!("t_normalizer must be positive, got {}", self.t_normalizer),
            });
        }
        Ok(())
    }

    pub fn kind(&self) -> FitKind {
        self.kind
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn t_normalizer(&self) -> f64 {
        self.t_normalizer
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file: ModelFile = read_json(path)?;
        check_version(file.schema_version, path)?;
        file.model.validate()?;
        Ok(file.model)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        self.validate()?;
        write_json(
            path.as_ref(),
            &ModelFile { schema_version: SCHEMA_VERSION, model: self.clone() },
        )
    }
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    schema_version: u32,
    #[serde(flatten)]
    model: FitModel,
}

// ── Difference codebook ──────────────────────────────────────────────────

/// Per-timestep averaged conditional/unconditional relative differences,
/// precomputed offline and queried during CFG cache scheduling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiffCodebook {
    values: Vec<f64>,
    source_count: usize,
}

impl DiffCodebook {
    pub fn new(values: Vec<f64>, source_count: usize) -> Result<Self> {
        let codebook = Self { values, source_count };
        codebook.validate()?;
        Ok(codebook)
    }

    fn validate(&self) -> Result<()> {
        let context = "codebook".to_string();
        if self.values.is_empty() {
            return Err(Error::Validation {
                context,
                message: "values must hold at least one step".into(),
            });
        }
        check_finite_nonneg(&self.values, &context, "values")?;
        if self.source_count == 0 {
            return Err(Error::Validation {
                context,
                message: "source_count must be positive".into(),
            });
        }
        Ok(())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn num_steps(&self) -> usize {
        self.values.len()
    }

    /// Number of prompts averaged into the codebook.
    pub fn source_count(&self) -> usize {
        self.source_count
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file: CodebookFile = read_json(path)?;
        check_version(file.schema_version, path)?;
        file.codebook.validate()?;
        Ok(file.codebook)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        self.validate()?;
        write_json(
            path.as_ref(),
            &CodebookFile { schema_version: SCHEMA_VERSION, codebook: self.clone() },
        )
    }
}

#[derive(Serialize, Deserialize)]
struct CodebookFile {
    schema_version: u32,
    #[serde(flatten)]
    codebook: DiffCodebook,
}

// ── Cache schedules ──────────────────────────────────────────────────────

/// Per-step decision on the main (conditional) path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MainDecision {
    /// Run the transformer and refresh the cache.
    Compute,
    /// Reuse the cached output.
    Reuse,
}

/// Per-step decision on the CFG (unconditional) path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CfgDecision {
    /// Run both the conditional and unconditional passes.
    ComputeBoth,
    /// Run the conditional pass; the unconditional output reuses it.
    ReuseUncond,
    /// Main path reused the whole step, so no CFG pass runs at all.
    Skipped,
}

/// Per-step compute/reuse decisions with accumulator traces and the
/// resulting forward-pass accounting.
///
/// `main_accumulator[t]` (and `cfg_accumulator[t]`) record the accumulated
/// indicator value at the moment step `t` was decided — after adding the
/// step's estimate, before any reset — so threshold crossings stay visible
/// in exported plots. CFG fields are absent when the schedule was produced
/// with the CFG path disabled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheSchedule {
    main_decisions: Vec<MainDecision>,
    cfg_decisions: Option<Vec<CfgDecision>>,
    main_accumulator: Vec<f64>,
    cfg_accumulator: Option<Vec<f64>>,
    computed_passes: u64,
    baseline_passes: u64,
    speedup: f64,
}

impl CacheSchedule {
    pub fn new(
        main_decisions: Vec<MainDecision>,
        cfg_decisions: Option<Vec<CfgDecision>>,
        main_accumulator: Vec<f64>,
        cfg_accumulator: Option<Vec<f64>>,
        computed_passes: u64,
        baseline_passes: u64,
        speedup: f64,
    ) -> Result<Self> {
        let schedule = Self {
            main_decisions,
            cfg_decisions,
            main_accumulator,
            cfg_accumulator,
            computed_passes,
            baseline_passes,
            speedup,
        };
        schedule.validate()?;
        Ok(schedule)
    }

    /// Count the forward passes a decision sequence implies.
    pub fn count_passes(
        main: &[MainDecision],
        cfg: Option<&[CfgDecision]>,
    ) -> u64 {
        match cfg {
            Some(cfg) => cfg
                .iter()
                .map(|d| match d {
                    CfgDecision::ComputeBoth => 2,
                    CfgDecision::ReuseUncond => 1,
                    CfgDecision::Skipped => 0,
                })
                .sum(),
            None => main
                .iter()
                .map(|d| match d {
                    MainDecision::Compute => 1,
                    MainDecision::Reuse => 0,
                })
                .sum(),
        }
    }

    fn validate(&self) -> Result<()> {
        let context = "cache schedule".to_string();
        let t = self.main_decisions.len();
        if t == 0 {
            return Err(Error::Validation {
                context,
                message: "schedule has no steps".into(),
            });
        }
        if self.main_decisions[0] != MainDecision::Compute {
            return Err(Error::Validation {
                context,
                message: "step 0 must be computed".into(),
            });
        }
        if self.main_accumulator.len() != t {
            return Err(Error::Validation {
                context,
                message: format!(
                    "main_accumulator length {} does not match {t} steps",
                    self.main_accumulator.len()
                ),
            });
        }
        check_finite_nonneg(&self.main_accumulator, &context, "main_accumulator")?;
        match (&self.cfg_decisions, &self.cfg_accumulator) {
            (None, None) => {}
            (Some(decisions), Some(acc)) => {
                if decisions.len() != t || acc.len() != t {
                    return Err(Error::Validation {
                        context,
                        message: "cfg sequences must match the step count".into(),
                    });
                }
                check_finite_nonneg(acc, &context, "cfg_accumulator")?;
                if decisions[0] != CfgDecision::ComputeBoth {
                    return Err(Error::Validation {
                        context,
                        message: "step 0 must compute both CFG passes".into(),
                    });
                }
                for (i, (cfg, main)) in decisions.iter().zip(&self.main_decisions).enumerate() {
                    let skipped = *cfg == CfgDecision::Skipped;
                    let reused = *main == MainDecision::Reuse;
                    if skipped != reused {
                        return Err(Error::Validation {
                            context,
                            message: format!(
                                "step {i}: cfg decision must be skipped exactly when the main step reuses"
                            ),
                        });
                    }
                }
            }
            _ => {
                return Err(Error::Validation {
                    context,
                    message: "cfg_decisions and cfg_accumulator must be present together".into(),
                });
            }
        }
        let expected_passes =
            Self::count_passes(&self.main_decisions, self.cfg_decisions.as_deref());
        if self.computed_passes != expected_passes {
            return Err(Error::Validation {
                context,
                message: format!(
                    "computed_passes = {} but decisions imply {expected_passes}",
                    self.computed_passes
                ),
            });
        }
        let expected_baseline = t as u64 * if self.cfg_decisions.is_some() { 2 } else { 1 };
        if self.baseline_passes != expected_baseline {
            return Err(Error::Validation {
                context,
                message: format!(
                    "baseline_passes = {} but {t} steps imply {expected_baseline}",
                    self.baseline_passes
                ),
            });
        }
        let expected_speedup = self.baseline_passes as f64 / self.computed_passes as f64;
        if !(self.speedup.is_finite()
            && (self.speedup - expected_speedup).abs() <= 1e-12 * expected_speedup)
        {
            return Err(Error::Validation {
                context,
                message: format!(
                    "speedup = {} inconsistent with {} / {}",
                    self.speedup, self.baseline_passes, self.computed_passes
                ),
            });
        }
        if self.speedup < 1.0 {
            return Err(Error::Validation {
                context,
                message: format!("speedup {} is below 1", self.speedup),
            });
        }
        Ok(())
    }

    pub fn num_steps(&self) -> usize {
        self.main_decisions.len()
    }

    pub fn main_decisions(&self) -> &[MainDecision] {
        &self.main_decisions
    }

    pub fn cfg_decisions(&self) -> Option<&[CfgDecision]> {
        self.cfg_decisions.as_deref()
    }

    pub fn main_accumulator(&self) -> &[f64] {
        &self.main_accumulator
    }

    pub fn cfg_accumulator(&self) -> Option<&[f64]> {
        self.cfg_accumulator.as_deref()
    }

    pub fn computed_passes(&self) -> u64 {
        self.computed_passes
    }

    pub fn baseline_passes(&self) -> u64 {
        self.baseline_passes
    }

    pub fn speedup(&self) -> f64 {
        self.speedup
    }

    /// Number of main steps that reused the cache.
    pub fn reused_steps(&self) -> usize {
        self.main_decisions
            .iter()
            .filter(|d| **d == MainDecision::Reuse)
            .count()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file: ScheduleFile = read_json(path)?;
        check_version(file.schema_version, path)?;
        file.schedule.validate()?;
        Ok(file.schedule)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        self.validate()?;
        write_json(
            path.as_ref(),
            &ScheduleFile { schema_version: SCHEMA_VERSION, schedule: self.clone() },
        )
    }
}

#[derive(Serialize, Deserialize)]
struct ScheduleFile {
    schema_version: u32,
    #[serde(flatten)]
    schedule: CacheSchedule,
}

// ── Shared IO helpers ────────────────────────────────────────────────────

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| Error::Schema {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Schema {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    text.push('\n');
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn check_version(version: u32, path: &Path) -> Result<()> {
    if version != SCHEMA_VERSION {
        return Err(Error::Schema {
            path: path.to_path_buf(),
            message: format!("unsupported schema_version {version} (expected {SCHEMA_VERSION})"),
        });
    }
    Ok(())
}

fn at_record(e: Error, kind: &str, index: usize) -> Error {
    match e {
        Error::Validation { context, message } => Error::Validation {
            context: format!("{kind} {index}: {context}"),
            message,
        },
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    fn write_file(dir: &tempfile::TempDir, name: &str, text: &str) -> std::path::PathBuf {
        let path = dir.path().join(name);
        fs::write(&path, text).unwrap();
        path
    }

    #[test]
    fn bundle_round_trips_declared_content() {
        let dir = tempdir().unwrap();
        let path = write_file(
            &dir,
            "t.json",
            r#"{"schema_version":1,"traces":[{"prompt_id":"p0","x":[0.1,0.2,0.3],"y":null,"cfg_diff":null}]}"#,
        );
        let traces = load_trace_bundle(&path).unwrap();
        assert_eq!(traces.len(), 1);
        assert_eq!(traces[0].num_steps(), 3);
        assert_eq!(traces[0].x(), &[0.1, 0.2, 0.3]);
        assert!(traces[0].y().is_none());
    }

    #[test]
    fn empty_bundle_loads_empty() {
        let dir = tempdir().unwrap();
        let path = write_file(&dir, "t.json", r#"{"schema_version":1,"traces":[]}"#);
        assert!(load_trace_bundle(&path).unwrap().is_empty());
    }

    #[test]
    fn mismatched_lengths_name_the_prompt() {
        let dir = tempdir().unwrap();
        let path = write_file(
            &dir,
            "t.json",
            r#"{"schema_version":1,"traces":[{"prompt_id":"bad","x":[0.1,0.2,0.3],"y":[0.1,0.2],"cfg_diff":null}]}"#,
        );
        match load_trace_bundle(&path) {
            Err(Error::Validation { context, .. }) => assert!(context.contains("bad")),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_json_is_a_schema_error() {
        let dir = tempdir().unwrap();
        let path = write_file(&dir, "t.json", "{not json");
        assert!(matches!(load_trace_bundle(&path), Err(Error::Schema { .. })));
    }

    #[test]
    fn wrong_schema_version_is_rejected() {
        let dir = tempdir().unwrap();
        let path = write_file(&dir, "t.json", r#"{"schema_version":7,"traces":[]}"#);
        match load_trace_bundle(&path) {
            Err(Error::Schema { message, .. }) => assert!(message.contains("schema_version 7")),
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn fit_model_round_trips() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("m.json");
        let model = FitModel::new(FitKind::Multivariate12, vec![0.0; 12], 49.0).unwrap();
        model.save(&path).unwrap();
        assert_eq!(FitModel::load(&path).unwrap(), model);
    }

    #[test]
    fn fit_model_rejects_wrong_coefficient_count() {
        assert!(matches!(
            FitModel::new(FitKind::Univariate5, vec![0.0; 12], 49.0),
            Err(Error::Validation { .. })
        ));
    }

    #[test]
    fn fit_model_rejects_unknown_kind_tag() {
        let dir = tempdir().unwrap();
        let path = write_file(
            &dir,
            "m.json",
            r#"{"schema_version":1,"kind":"cubic7","coeffs":[1,2,3],"t_normalizer":49.0}"#,
        );
        assert!(matches!(FitModel::load(&path), Err(Error::Schema { .. })));
    }

    #[test]
    fn codebook_rejects_negative_entry_on_load() {
        let dir = tempdir().unwrap();
        let path = write_file(
            &dir,
            "cb.json",
            r#"{"schema_version":1,"values":[0.1,-0.2],"source_count":3}"#,
        );
        assert!(matches!(DiffCodebook::load(&path), Err(Error::Validation { .. })));
    }

    #[test]
    fn schedule_round_trip_preserves_decisions_exactly() {
        use CfgDecision::*;
        use MainDecision::*;
        let dir = tempdir().unwrap();
        let path = dir.path().join("s.json");
        let schedule = CacheSchedule::new(
            vec![Compute, Reuse, Compute, Reuse],
            Some(vec![ComputeBoth, Skipped, ComputeBoth, Skipped]),
            vec![0.0, 0.5, 1.2, 0.1],
            Some(vec![0.0, 0.05, 0.1, 0.05]),
            4,
            8,
            2.0,
        )
        .unwrap();
        schedule.save(&path).unwrap();
        let loaded = CacheSchedule::load(&path).unwrap();
        assert_eq!(loaded, schedule);
        assert_eq!(loaded.main_decisions(), schedule.main_decisions());
        assert_eq!(loaded.cfg_decisions(), schedule.cfg_decisions());
    }

    #[test]
    fn schedule_rejects_skip_mismatch() {
        use CfgDecision::*;
        use MainDecision::*;
        let err = CacheSchedule::new(
            vec![Compute, Compute],
            Some(vec![ComputeBoth, Skipped]),
            vec![0.0, 0.5],
            Some(vec![0.0, 0.05]),
            2,
            4,
            2.0,
        );
        assert!(matches!(err, Err(Error::Validation { .. })));
    }

    #[test]
    fn bank_rejects_zero_norm_vector() {
        let entries = vec![
            BankEntry { label: PromptLabel::Complex, vector: vec![1.0, 0.0] },
            BankEntry { label: PromptLabel::Simple, vector: vec![0.0, 0.0] },
        ];
        assert!(matches!(EmbeddingBank::new(2, entries), Err(Error::Validation { .. })));
    }

    #[test]
    fn bank_round_trips() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("b.json");
        let bank = EmbeddingBank::new(
            2,
            vec![
                BankEntry { label: PromptLabel::Complex, vector: vec![1.0, 0.25] },
                BankEntry { label: PromptLabel::Simple, vector: vec![0.0, 1.0] },
            ],
        )
        .unwrap();
        bank.save(&path).unwrap();
        assert_eq!(EmbeddingBank::load(&path).unwrap(), bank);
    }
}
