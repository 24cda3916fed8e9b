//! Seeded synthetic data for tests, examples, and the bundled data files.
//!
//! Real traces come from instrumented model runs; everything here mimics
//! their shape deterministically so the rest of the stack can be exercised
//! end to end. All generators take an explicit seed and produce identical
//! output for identical inputs — the bundled example data is regenerated
//! from these functions, so draw order is part of their contract.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diff_kernels::{coefficient_of_variation, SampleSet};
use crate::error::{Error, Result};
use crate::trace_model::TimestepTrace;

/// Parameters for [`synthetic_traces`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceSynthesisConfig {
    pub num_prompts: usize,
    pub num_steps: usize,
    pub seed: u64,
}

/// Generate per-prompt traces with the texture of recorded runs.
///
/// * `x[t]` follows a U-shaped profile (larger differences at both ends of
///   the schedule) with per-step jitter; `x[0]` is 0 — step 0 has no
///   predecessor to diff against.
/// * `y[t] = x[t] + 0.5 · (t / T)²` exactly: the output difference tracks
///   the input difference plus a growing timestep-dependent term that a
///   function of x alone cannot express.
/// * `cfg_diff[t]` decays over the schedule with jitter, mimicking
///   conditional/unconditional outputs converging as denoising proceeds.
pub fn synthetic_traces(config: &TraceSynthesisConfig) -> Result<Vec<TimestepTrace>> {
    if config.num_prompts == 0 {
        return Err(Error::EmptyInput { what: "synthetic prompts" });
    }
    if config.num_steps < 2 {
        return Err(Error::InsufficientEntries {
            what: "synthetic steps",
            needed: 2,
            got: config.num_steps,
        });
    }
    let t_total = config.num_steps as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut traces = Vec::with_capacity(config.num_prompts);
    for p in 0..config.num_prompts {
        let mut x = Vec::with_capacity(config.num_steps);
        let mut y = Vec::with_capacity(config.num_steps);
        let mut cfg_diff = Vec::with_capacity(config.num_steps);
        for t in 0..config.num_steps {
            let frac = t as f64 / (config.num_steps - 1) as f64;
            let x_t = if t == 0 {
                0.0
            } else {
                // U-shape in [0.05, 0.2] before jitter.
                let shape = 0.05 + 0.6 * (frac - 0.5) * (frac - 0.5);
                shape * rng.gen_range(0.8..1.2)
            };
            let cfg_t = (0.002 + 0.04 * (-2.0 * t as f64 / t_total).exp())
                * rng.gen_range(0.9..1.1);
            x.push(x_t);
            y.push(x_t + 0.5 * (t as f64 / t_total).powi(2));
            cfg_diff.push(cfg_t);
        }
        traces.push(TimestepTrace::new(
            format!("synthetic-{p:03}"),
            x,
            Some(y),
            Some(cfg_diff),
        )?);
    }
    Ok(traces)
}

/// Per-step coefficients of variation from the two-factor study.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorStudy {
    /// CV at each step over a population varying the strong factor.
    pub cv_strong: Vec<f64>,
    /// CV at each step over a population varying the weak factor.
    pub cv_weak: Vec<f64>,
}

impl FactorStudy {
    pub fn mean_cv_strong(&self) -> f64 {
        self.cv_strong.iter().sum::<f64>() / self.cv_strong.len() as f64
    }

    pub fn mean_cv_weak(&self) -> f64 {
        self.cv_weak.iter().sum::<f64>() / self.cv_weak.len() as f64
    }
}

/// Dispersion study over two influence factors.
///
/// A population of synthetic outputs is generated per step twice: once
/// varying only a strong factor (think: the prompt text) and once varying
/// only a weak factor (think: the sampling seed), each scaling a common
/// per-step base value by `1 + gain · u` with u drawn uniformly from
/// (−1, 1). The per-step coefficient of variation then isolates how much
/// output dispersion each factor causes.
pub fn cv_factor_study(
    num_steps: usize,
    population: usize,
    strong_gain: f64,
    weak_gain: f64,
    seed: u64,
) -> Result<FactorStudy> {
    if num_steps == 0 {
        return Err(Error::EmptyInput { what: "study steps" });
    }
    if population < 2 {
        return Err(Error::InsufficientEntries {
            what: "population members",
            needed: 2,
            got: population,
        });
    }
    for (name, gain) in [("strong_gain", strong_gain), ("weak_gain", weak_gain)] {
        // Gains must stay below 1 so every scaled sample remains positive.
        if !gain.is_finite() || !(0.0..1.0).contains(&gain) {
            return Err(Error::Domain {
                name,
                value: gain,
                expected: "a gain in [0, 1)",
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let strong_factors: Vec<f64> =
        (0..population).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let weak_factors: Vec<f64> =
        (0..population).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut cv_strong = Vec::with_capacity(num_steps);
    let mut cv_weak = Vec::with_capacity(num_steps);
    for t in 0..num_steps {
        let base = 0.1 + 0.1 * t as f64 / num_steps.max(2).saturating_sub(1) as f64;
        for (factors, gain, out) in [
            (&strong_factors, strong_gain, &mut cv_strong),
            (&weak_factors, weak_gain, &mut cv_weak),
        ] {
            let samples: Vec<f64> =
                factors.iter().map(|u| base * (1.0 + gain * u)).collect();
            out.push(coefficient_of_variation(&SampleSet::new(samples)?)?);
        }
    }
    Ok(FactorStudy { cv_strong, cv_weak })
}
