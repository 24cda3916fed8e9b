//! Subcommand argument structs and their implementations.
//!
//! Every command reads versioned JSON artifacts, runs the corresponding
//! library operation, writes its declared outputs, and prints a one-line
//! summary to standard output. Validation failures surface as ordinary
//! errors (exit code 1); flag misuse is caught by the parser (exit 2).

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::{Args, Subcommand, ValueEnum};
use prompttea_core::cache_scheduler::{
    build_codebook, compare_policies, simulate, Policy, PolicyConfig, StepEstimates,
};
use prompttea_core::cfg_freq::{cfg_delta, reconstruct_uncond, FreqWeights, DEFAULT_CUTOFF};
use prompttea_core::diff_kernels::{coefficient_of_variation, l1_rel, SampleSet};
use prompttea_core::export;
use prompttea_core::pca_threshold::{
    pairwise_distance_stats, score_prompt, silhouette, DistanceStats, PcaConfig,
    ThresholdOrientation, DEFAULT_EPSILON,
};
use prompttea_core::poly_fit::{self, FitDataset};
use prompttea_core::synthesis::cv_factor_study;
use prompttea_core::trace_model::{
    load_trace_bundle, CacheSchedule, DiffCodebook, EmbeddingBank, FitKind, FitModel,
    PromptLabel, TimestepTrace,
};
use serde::{Deserialize, Serialize};

use crate::presets::{ModelPreset, PresetValues};

/// Version stamp shared by every JSON artifact this tool reads or writes.
const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a polynomial output-difference model to recorded traces
    Fit(FitArgs),
    /// Evaluate fitted models on a trace bundle and export per-sample rows
    EvalFit(EvalFitArgs),
    /// Score a prompt embedding against a labeled bank and derive its threshold
    ScorePrompt(ScorePromptArgs),
    /// Report distance statistics and the silhouette of an embedding bank
    BankStats(BankStatsArgs),
    /// Average per-step guidance differences across traces into a codebook
    Codebook(CodebookArgs),
    /// Schedule one trace under a caching policy and write the schedule
    Simulate(SimulateArgs),
    /// Run several policy configurations over one trace into an ablation CSV
    Compare(CompareArgs),
    /// Per-step dispersion of recorded traces, or a synthetic factor study
    AnalyzeCv(AnalyzeCvArgs),
    /// Frequency-split guidance deltas and reconstruction diagnostics
    CfgFreq(CfgFreqArgs),
    /// Flatten a schedule artifact into plot-ready CSV
    ExportPlot(ExportPlotArgs),
}

pub fn run(command: Command) -> anyhow::Result<()> {
    match command {
        Command::Fit(args) => run_fit(args),
        Command::EvalFit(args) => run_eval_fit(args),
        Command::ScorePrompt(args) => run_score_prompt(args),
        Command::BankStats(args) => run_bank_stats(args),
        Command::Codebook(args) => run_codebook(args),
        Command::Simulate(args) => run_simulate(args),
        Command::Compare(args) => run_compare(args),
        Command::AnalyzeCv(args) => run_analyze_cv(args),
        Command::CfgFreq(args) => run_cfg_freq(args),
        Command::ExportPlot(args) => run_export_plot(args),
    }
}

// ── Flag value enums ─────────────────────────────────────────────────────

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[clap(rename_all = "snake_case")]
pub enum PolicyArg {
    Teacache,
    PcaTeacache,
    DyncfgOnly,
    Prompttea,
}

impl From<PolicyArg> for Policy {
    fn from(arg: PolicyArg) -> Self {
        match arg {
            PolicyArg::Teacache => Policy::TeaCache,
            PolicyArg::PcaTeacache => Policy::PcaTeaCache,
            PolicyArg::DyncfgOnly => Policy::DynCfgOnly,
            PolicyArg::Prompttea => Policy::PromptTea,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[clap(rename_all = "snake_case")]
pub enum OrientationArg {
    ComplexLow,
    ComplexHigh,
}

impl From<OrientationArg> for ThresholdOrientation {
    fn from(arg: OrientationArg) -> Self {
        match arg {
            OrientationArg::ComplexLow => ThresholdOrientation::ComplexLow,
            OrientationArg::ComplexHigh => ThresholdOrientation::ComplexHigh,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[clap(rename_all = "snake_case")]
pub enum KindArg {
    Multivariate12,
    Univariate5,
}

impl From<KindArg> for FitKind {
    fn from(arg: KindArg) -> Self {
        match arg {
            KindArg::Multivariate12 => FitKind::Multivariate12,
            KindArg::Univariate5 => FitKind::Univariate5,
        }
    }
}

// ── Sidecar file formats ─────────────────────────────────────────────────

#[derive(Deserialize)]
struct EmbeddingFile {
    schema_version: u32,
    vector: Vec<f64>,
}

#[derive(Deserialize)]
struct SignalFile {
    schema_version: u32,
    values: Vec<f64>,
}

#[derive(Deserialize)]
struct ConfigsFile {
    schema_version: u32,
    configs: Vec<PolicyConfig>,
}

fn read_json_file<T: serde::de::DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn check_schema(version: u32, path: &Path) -> anyhow::Result<()> {
    if version != SCHEMA_VERSION {
        bail!(
            "{}: unsupported schema_version {version}, expected {SCHEMA_VERSION}",
            path.display()
        );
    }
    Ok(())
}

fn load_signal(path: &Path) -> anyhow::Result<Vec<f64>> {
    let file: SignalFile = read_json_file(path)?;
    check_schema(file.schema_version, path)?;
    Ok(file.values)
}

/// An embedding flag value is either a JSON file path or an inline
/// comma-separated vector; an existing file wins.
fn load_embedding(arg: &str) -> anyhow::Result<Vec<f64>> {
    let path = Path::new(arg);
    if path.exists() {
        let file: EmbeddingFile = read_json_file(path)?;
        check_schema(file.schema_version, path)?;
        return Ok(file.vector);
    }
    arg.split(',')
        .map(|part| part.trim().parse::<f64>())
        .collect::<Result<Vec<f64>, _>>()
        .map_err(|e| {
            anyhow!(
                "--embedding {arg:?} is neither an existing file \
                 nor an inline comma-separated vector: {e}"
            )
        })
}

// ── Shared trace plumbing ────────────────────────────────────────────────

fn select_trace<'a>(
    traces: &'a [TimestepTrace],
    prompt_id: Option<&str>,
) -> anyhow::Result<&'a TimestepTrace> {
    let Some(id) = prompt_id else {
        return traces
            .first()
            .ok_or_else(|| anyhow!("the trace bundle is empty"));
    };
    traces.iter().find(|t| t.prompt_id() == id).ok_or_else(|| {
        let available: Vec<&str> = traces.iter().map(|t| t.prompt_id()).collect();
        anyhow!("no trace named {id:?}; the bundle holds {available:?}")
    })
}

/// Per-step output-difference estimates for the simulator: a fitted model
/// wins, recorded values are the fallback. Policies that compute every
/// main-path step anyway may run with a zero vector.
fn resolve_estimates(
    trace: &TimestepTrace,
    model: Option<&Path>,
    zeros_suffice: bool,
) -> anyhow::Result<Vec<f64>> {
    if let Some(path) = model {
        let model = FitModel::load(path)?;
        return Ok(poly_fit::predict_trace(&model, trace.x())?);
    }
    if let Some(y) = trace.y() {
        return Ok(y.to_vec());
    }
    if zeros_suffice {
        return Ok(vec![0.0; trace.num_steps()]);
    }
    bail!(
        "trace {:?} has no recorded output differences; pass --model to estimate them",
        trace.prompt_id()
    )
}

// ── fit ──────────────────────────────────────────────────────────────────

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Trace bundle with recorded input and output differences
    #[arg(long)]
    traces: PathBuf,
    /// Feature expansion to fit
    #[arg(long, value_enum, default_value_t = KindArg::Multivariate12)]
    kind: KindArg,
    /// Timestep normalizer; defaults to T − 1 when all traces agree on T
    #[arg(long)]
    t_normalizer: Option<f64>,
    /// Output path for the fitted model JSON
    #[arg(long)]
    out: PathBuf,
}

fn run_fit(args: FitArgs) -> anyhow::Result<()> {
    let traces = load_trace_bundle(&args.traces)?;
    let dataset = FitDataset::from_traces(&traces, args.t_normalizer)?;
    let model = poly_fit::fit(&dataset, args.kind.into())?;
    let training_mse = poly_fit::mse(&model, &dataset)?;
    model.save(&args.out)?;
    println!(
        "wrote {}: kind={}, rows={}, training mse={training_mse:e}",
        args.out.display(),
        model.kind().as_str(),
        dataset.len(),
    );
    Ok(())
}

// ── eval-fit ─────────────────────────────────────────────────────────────

#[derive(Debug, Args)]
pub struct EvalFitArgs {
    /// Fitted model JSON
    #[arg(long)]
    model: PathBuf,
    /// Optional second model of the other expansion kind, for side-by-side columns
    #[arg(long)]
    baseline: Option<PathBuf>,
    /// Trace bundle to evaluate against
    #[arg(long)]
    traces: PathBuf,
    /// Optional per-sample CSV (t,x,y,y_hat_multi,y_hat_uni)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run_eval_fit(args: EvalFitArgs) -> anyhow::Result<()> {
    let model = FitModel::load(&args.model)?;
    let baseline = args.baseline.as_deref().map(FitModel::load).transpose()?;
    let traces = load_trace_bundle(&args.traces)?;
    let dataset = FitDataset::from_traces(&traces, Some(model.t_normalizer()))?;

    let mut summary = format!(
        "mse {}={:e}",
        model.kind().as_str(),
        poly_fit::mse(&model, &dataset)?
    );
    if let Some(baseline) = &baseline {
        summary.push_str(&format!(
            " {}={:e}",
            baseline.kind().as_str(),
            poly_fit::mse(baseline, &dataset)?
        ));
    }
    summary.push_str(&format!(" over {} samples", dataset.len()));

    if let Some(out) = &args.out {
        let mut multi = None;
        let mut uni = None;
        for m in [Some(&model), baseline.as_ref()].into_iter().flatten() {
            let slot = match m.kind() {
                FitKind::Multivariate12 => &mut multi,
                FitKind::Univariate5 => &mut uni,
            };
            if slot.replace(m).is_some() {
                bail!(
                    "both models are {}; pass at most one per expansion kind",
                    m.kind().as_str()
                );
            }
        }
        export::write_fit_eval_csv(&dataset, multi, uni, out)?;
        summary.push_str(&format!("; wrote {}", out.display()));
    }
    println!("{summary}");
    Ok(())
}

// ── score-prompt ─────────────────────────────────────────────────────────

#[derive(Debug, Args)]
pub struct ScorePromptArgs {
    /// Prompt embedding: a JSON file path or an inline comma-separated vector
    #[arg(long)]
    embedding: String,
    /// Labeled reference embedding bank JSON
    #[arg(long)]
    bank: PathBuf,
    /// Sigmoid stretching amplitude
    #[arg(long, default_value_t = 50.0)]
    k: f64,
    /// Lower threshold bound
    #[arg(long, default_value_t = 0.1)]
    delta_min: f64,
    /// Upper threshold bound
    #[arg(long, default_value_t = 0.23)]
    delta_max: f64,
    /// Denominator guard in the complexity coefficient
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    /// Which end of the threshold range complex prompts map to
    #[arg(long, value_enum, default_value_t = OrientationArg::ComplexLow)]
    orientation: OrientationArg,
}

fn run_score_prompt(args: ScorePromptArgs) -> anyhow::Result<()> {
    let bank = EmbeddingBank::load(&args.bank)?;
    let embedding = load_embedding(&args.embedding)?;
    let config = PcaConfig::new(
        args.k,
        args.delta_min,
        args.delta_max,
        args.epsilon,
        args.orientation.into(),
    )?;
    let score = score_prompt(&embedding, &bank, &config)?;
    println!("{}", serde_json::to_string(&score)?);
    Ok(())
}

// ── bank-stats ───────────────────────────────────────────────────────────

#[derive(Debug, Args)]
pub struct BankStatsArgs {
    /// Labeled reference embedding bank JSON
    #[arg(long)]
    bank: PathBuf,
}

#[derive(Serialize)]
struct BankReport {
    dim: usize,
    entries: usize,
    #[serde(flatten)]
    distances: DistanceStats,
    silhouette: f64,
}

fn run_bank_stats(args: BankStatsArgs) -> anyhow::Result<()> {
    let bank = EmbeddingBank::load(&args.bank)?;
    let distances = pairwise_distance_stats(&bank)?;
    let mut vectors = Vec::new();
    let mut labels = Vec::new();
    for (cluster, label) in [PromptLabel::Complex, PromptLabel::Simple]
        .into_iter()
        .enumerate()
    {
        for vector in bank.vectors_with_label(label) {
            vectors.push(vector.to_vec());
            labels.push(cluster);
        }
    }
    let report = BankReport {
        dim: bank.dim(),
        entries: bank.entries().len(),
        distances,
        silhouette: silhouette(&vectors, &labels)?,
    };
    println!("{}", serde_json::to_string(&report)?);
    Ok(())
}

// ── codebook ─────────────────────────────────────────────────────────────

#[derive(Debug, Args)]
pub struct CodebookArgs {
    /// Trace bundle whose guidance differences to average
    #[arg(long)]
    traces: PathBuf,
    /// Output path for the codebook JSON
    #[arg(long)]
    out: PathBuf,
}

fn run_codebook(args: CodebookArgs) -> anyhow::Result<()> {
    let traces = load_trace_bundle(&args.traces)?;
    let codebook = build_codebook(&traces)?;
    codebook.save(&args.out)?;
    println!(
        "wrote {}: {} steps averaged from {} traces",
        args.out.display(),
        codebook.num_steps(),
        codebook.source_count(),
    );
    Ok(())
}

// ── simulate ─────────────────────────────────────────────────────────────

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Trace bundle JSON
    #[arg(long)]
    trace: PathBuf,
    /// Which prompt's trace to schedule (default: the bundle's first)
    #[arg(long)]
    prompt_id: Option<String>,
    /// Scheduling policy
    #[arg(long, value_enum, default_value_t = PolicyArg::Prompttea)]
    policy: PolicyArg,
    /// Model preset supplying default constants
    #[arg(long, value_enum, default_value_t = ModelPreset::Custom)]
    preset: ModelPreset,
    /// Fitted model JSON for estimating per-step output differences
    #[arg(long)]
    model: Option<PathBuf>,
    /// Difference codebook JSON for the guidance path
    #[arg(long)]
    codebook: Option<PathBuf>,
    /// Main-path threshold; overrides the complexity score and the preset midpoint
    #[arg(long)]
    delta_main: Option<f64>,
    /// Guidance-path threshold (default: preset value, then 0.02)
    #[arg(long)]
    delta_cfg: Option<f64>,
    /// Enable or disable the guidance path, overriding the preset
    #[arg(long)]
    cfg_enabled: Option<bool>,
    /// Prompt embedding (file or inline) for complexity-aware thresholding
    #[arg(long)]
    embedding: Option<String>,
    /// Labeled reference bank for complexity-aware thresholding
    #[arg(long)]
    bank: Option<PathBuf>,
    /// Sigmoid stretching amplitude (default: preset value)
    #[arg(long)]
    k: Option<f64>,
    /// Lower threshold bound (default: preset value)
    #[arg(long)]
    delta_min: Option<f64>,
    /// Upper threshold bound (default: preset value)
    #[arg(long)]
    delta_max: Option<f64>,
    /// Which end of the threshold range complex prompts map to
    #[arg(long, value_enum, default_value_t = OrientationArg::ComplexLow)]
    orientation: OrientationArg,
    /// Output path for the schedule JSON
    #[arg(long)]
    out: PathBuf,
}

/// The main threshold comes from, in order: an explicit `--delta-main`, a
/// prompt scored against a bank, or the midpoint of the preset's bounds.
fn resolve_delta_main(
    args: &SimulateArgs,
    preset: Option<PresetValues>,
) -> anyhow::Result<f64> {
    if let Some(delta) = args.delta_main {
        return Ok(delta);
    }
    if let Some(embedding_arg) = &args.embedding {
        let Some(bank_path) = &args.bank else {
            bail!("--embedding requires --bank to score the prompt against");
        };
        let require = |flag: Option<f64>, bundled: fn(&PresetValues) -> f64, name: &str| {
            flag.or(preset.as_ref().map(bundled))
                .ok_or_else(|| anyhow!("--preset custom provides no {name}; pass --{name}"))
        };
        let config = PcaConfig::new(
            require(args.k, |p| p.k, "k")?,
            require(args.delta_min, |p| p.delta_min, "delta-min")?,
            require(args.delta_max, |p| p.delta_max, "delta-max")?,
            DEFAULT_EPSILON,
            args.orientation.into(),
        )?;
        let bank = EmbeddingBank::load(bank_path)?;
        let embedding = load_embedding(embedding_arg)?;
        return Ok(score_prompt(&embedding, &bank, &config)?.delta_pca);
    }
    if let Some(values) = preset {
        return Ok((values.delta_min + values.delta_max) / 2.0);
    }
    bail!(
        "no main threshold source: pass --delta-main, \
         or --embedding with --bank, or a non-custom --preset"
    )
}

fn run_simulate(args: SimulateArgs) -> anyhow::Result<()> {
    let traces = load_trace_bundle(&args.trace)?;
    let trace = select_trace(&traces, args.prompt_id.as_deref())?;
    let preset = args.preset.values();
    let policy: Policy = args.policy.into();

    let config = PolicyConfig {
        policy,
        delta_main: resolve_delta_main(&args, preset)?,
        delta_cfg: args
            .delta_cfg
            .or(preset.as_ref().map(|p| p.delta_cfg))
            .unwrap_or(0.02),
        cfg_enabled: args
            .cfg_enabled
            .or(preset.as_ref().map(|p| p.cfg_enabled))
            .unwrap_or(true),
    };
    let est = resolve_estimates(trace, args.model.as_deref(), policy == Policy::DynCfgOnly)?;
    let codebook = args
        .codebook
        .as_deref()
        .map(DiffCodebook::load)
        .transpose()?;
    let estimates = StepEstimates::new(est, codebook)?;
    let schedule = simulate(&config, &estimates)?;
    schedule.save(&args.out)?;
    println!(
        "wrote {}: policy={}, steps={}, delta_main={}, passes={}/{}, speedup={}",
        args.out.display(),
        policy.as_str(),
        schedule.num_steps(),
        config.delta_main,
        schedule.computed_passes(),
        schedule.baseline_passes(),
        schedule.speedup(),
    );
    Ok(())
}

// ── compare ──────────────────────────────────────────────────────────────

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Policy configuration list JSON
    #[arg(long)]
    configs: PathBuf,
    /// Trace bundle JSON
    #[arg(long)]
    trace: PathBuf,
    /// Which prompt's trace to schedule (default: the bundle's first)
    #[arg(long)]
    prompt_id: Option<String>,
    /// Fitted model JSON for estimating per-step output differences
    #[arg(long)]
    model: Option<PathBuf>,
    /// Difference codebook JSON for rows that schedule the guidance path
    #[arg(long)]
    codebook: Option<PathBuf>,
    /// Output CSV path
    #[arg(long)]
    out: PathBuf,
}

fn run_compare(args: CompareArgs) -> anyhow::Result<()> {
    let file: ConfigsFile = read_json_file(&args.configs)?;
    check_schema(file.schema_version, &args.configs)?;
    let traces = load_trace_bundle(&args.trace)?;
    let trace = select_trace(&traces, args.prompt_id.as_deref())?;
    let zeros_suffice = file.configs.iter().all(|c| c.policy == Policy::DynCfgOnly);
    let est = resolve_estimates(trace, args.model.as_deref(), zeros_suffice)?;
    let codebook = args
        .codebook
        .as_deref()
        .map(DiffCodebook::load)
        .transpose()?;
    let estimates = StepEstimates::new(est, codebook)?;

    let rows = compare_policies(&file.configs, &estimates)?;
    let written = export::write_comparison_csv(&rows, &args.out)?;
    for (i, row) in rows.iter().enumerate() {
        if let Err(e) = &row.outcome {
            eprintln!("row {i} ({}): {e}", row.config.policy.as_str());
        }
    }
    println!("wrote {}: {written}/{} rows", args.out.display(), rows.len());
    if written < rows.len() {
        bail!("{} of {} comparison rows failed", rows.len() - written, rows.len());
    }
    Ok(())
}

// ── analyze-cv ───────────────────────────────────────────────────────────

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("source").required(true))]
pub struct AnalyzeCvArgs {
    /// Trace bundle: per-step dispersion of input differences across prompts
    #[arg(long, group = "source")]
    traces: Option<PathBuf>,
    /// Run the synthetic two-factor study instead of reading traces
    #[arg(long, group = "source")]
    synthetic: bool,
    /// Steps per sequence in the synthetic study
    #[arg(long, default_value_t = 50)]
    num_steps: usize,
    /// Sample count per factor and step in the synthetic study
    #[arg(long, default_value_t = 100)]
    population: usize,
    /// Relative output swing of the strong factor
    #[arg(long, default_value_t = 0.5)]
    strong_gain: f64,
    /// Relative output swing of the weak factor
    #[arg(long, default_value_t = 0.05)]
    weak_gain: f64,
    /// Seed for the synthetic study
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV path
    #[arg(long)]
    out: PathBuf,
}

/// Dispersion of `x[t]` across traces, step by step. Steps whose mean is
/// near zero (the first step of every trace, in practice) have no defined
/// dispersion and come back as `None`.
fn per_step_cv(traces: &[TimestepTrace]) -> anyhow::Result<Vec<Option<f64>>> {
    let Some(first) = traces.first() else {
        bail!("the trace bundle is empty");
    };
    let steps = first.num_steps();
    for trace in traces {
        if trace.num_steps() != steps {
            bail!(
                "traces disagree on step count: {:?} has {steps} steps, {:?} has {}",
                first.prompt_id(),
                trace.prompt_id(),
                trace.num_steps(),
            );
        }
    }
    (0..steps)
        .map(|t| {
            let samples: Vec<f64> = traces.iter().map(|trace| trace.x()[t]).collect();
            match coefficient_of_variation(&SampleSet::new(samples)?) {
                Ok(cv) => Ok(Some(cv)),
                Err(prompttea_core::Error::DegenerateMean { .. }) => Ok(None),
                Err(e) => Err(e.into()),
            }
        })
        .collect()
}

fn run_analyze_cv(args: AnalyzeCvArgs) -> anyhow::Result<()> {
    if args.synthetic {
        let study = cv_factor_study(
            args.num_steps,
            args.population,
            args.strong_gain,
            args.weak_gain,
            args.seed,
        )?;
        export::write_factor_study_csv(&study, &args.out)?;
        println!(
            "wrote {}: {} steps, mean cv strong={} weak={}",
            args.out.display(),
            args.num_steps,
            study.mean_cv_strong(),
            study.mean_cv_weak(),
        );
        return Ok(());
    }
    let traces = load_trace_bundle(args.traces.as_ref().expect("clap enforces one source"))?;
    let cvs = per_step_cv(&traces)?;
    let undefined = cvs.iter().filter(|cv| cv.is_none()).count();
    export::write_step_cv_csv(&cvs, &args.out)?;
    println!(
        "wrote {}: {} steps across {} traces ({undefined} with undefined dispersion)",
        args.out.display(),
        cvs.len(),
        traces.len(),
    );
    Ok(())
}

// ── cfg-freq ─────────────────────────────────────────────────────────────

#[derive(Debug, Args)]
pub struct CfgFreqArgs {
    /// Conditional output signal JSON
    #[arg(long)]
    cond: PathBuf,
    /// Unconditional output signal JSON
    #[arg(long)]
    uncond: PathBuf,
    /// Fraction of the spectrum treated as low frequency
    #[arg(long, default_value_t = DEFAULT_CUTOFF)]
    cutoff: f64,
    /// Weight of the de-prioritized band during reconstruction
    #[arg(long, default_value_t = 0.5)]
    beta: f64,
    /// Step at which priority flips from the low band to the high band
    #[arg(long, default_value_t = 25)]
    t0: usize,
    /// Step to reconstruct at
    #[arg(long, default_value_t = 0)]
    t: usize,
}

#[derive(Serialize)]
struct CfgFreqReport {
    n: usize,
    cutoff: f64,
    beta: f64,
    t0: usize,
    t: usize,
    reconstruction_error: f64,
    delta_lf_norm: f64,
    delta_hf_norm: f64,
}

fn run_cfg_freq(args: CfgFreqArgs) -> anyhow::Result<()> {
    let cond = load_signal(&args.cond)?;
    let uncond = load_signal(&args.uncond)?;
    let (delta_lf, delta_hf) = cfg_delta(&cond, &uncond, args.cutoff)?;
    let weights = FreqWeights::new(args.beta, args.t0)?;
    let rebuilt = reconstruct_uncond(&cond, &delta_lf, &delta_hf, &weights, args.t)?;
    let report = CfgFreqReport {
        n: cond.len(),
        cutoff: args.cutoff,
        beta: args.beta,
        t0: args.t0,
        t: args.t,
        reconstruction_error: l1_rel(&rebuilt, &uncond)?,
        delta_lf_norm: delta_lf.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt(),
        delta_hf_norm: delta_hf.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt(),
    };
    println!("{}", serde_json::to_string(&report)?);
    Ok(())
}

// ── export-plot ──────────────────────────────────────────────────────────

#[derive(Debug, Args)]
pub struct ExportPlotArgs {
    /// Schedule artifact JSON to flatten
    #[arg(long)]
    schedule: PathBuf,
    /// Output CSV path
    #[arg(long)]
    out: PathBuf,
}

fn run_export_plot(args: ExportPlotArgs) -> anyhow::Result<()> {
    let schedule = CacheSchedule::load(&args.schedule)?;
    export::write_schedule_csv(&schedule, &args.out)?;
    println!("wrote {}: {} steps", args.out.display(), schedule.num_steps());
    Ok(())
}
