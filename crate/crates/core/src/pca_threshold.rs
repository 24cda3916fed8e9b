//! Prompt-complexity-aware threshold selection.
//!
//! An incoming prompt embedding is compared against labeled banks of
//! complex and simple reference embeddings; the two mean cosine
//! similarities are normalized into a complexity coefficient, stretched
//! through a sigmoid, and fused into a caching threshold between
//! configured bounds. Also provides the clustering diagnostics (pairwise
//! distance statistics, silhouette) used to sanity-check a bank's
//! complex/simple separation.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::trace_model::{EmbeddingBank, PromptLabel};

/// Default denominator guard for the complexity coefficient.
pub const DEFAULT_EPSILON: f64 = 1e-6;

/// Which end of the threshold range complex prompts map to.
///
/// With `ComplexLow` (the default), a prompt scored as complex receives the
/// *low* threshold — complex scenes are more error-sensitive, so the cache
/// refreshes more often. `ComplexHigh` is the opposite assignment, kept
/// selectable for comparison runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdOrientation {
    ComplexLow,
    ComplexHigh,
}

impl ThresholdOrientation {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::ComplexLow => "complex_low",
            Self::ComplexHigh => "complex_high",
        }
    }
}

/// Parameters of the complexity→threshold mapping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PcaConfig {
    k: f64,
    delta_min: f64,
    delta_max: f64,
    epsilon: f64,
    orientation: ThresholdOrientation,
}

impl PcaConfig {
    pub fn new(
        k: f64,
        delta_min: f64,
        delta_max: f64,
        epsilon: f64,
        orientation: ThresholdOrientation,
    ) -> Result<Self> {
        if !k.is_finite() || k <= 0.0 {
            return Err(Error::Domain {
                name: "k",
                value: k,
                expected: "a positive finite stretch amplitude",
            });
        }
        if !delta_min.is_finite() || delta_min <= 0.0 {
            return Err(Error::Domain {
                name: "delta_min",
                value: delta_min,
                expected: "a positive finite threshold",
            });
        }
        if !delta_max.is_finite() || delta_max < delta_min {
            return Err(Error::Domain {
                name: "delta_max",
                value: delta_max,
                expected: "a finite threshold ≥ delta_min",
            });
        }
        if !epsilon.is_finite() || epsilon <= 0.0 {
            return Err(Error::Domain {
                name: "epsilon",
                value: epsilon,
                expected: "a small positive guard",
            });
        }
        Ok(Self { k, delta_min, delta_max, epsilon, orientation })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn delta_min(&self) -> f64 {
        self.delta_min
    }

    pub fn delta_max(&self) -> f64 {
        self.delta_max
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn orientation(&self) -> ThresholdOrientation {
        self.orientation
    }
}

/// Full result of scoring one prompt embedding against a bank.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexityScore {
    /// Mean cosine similarity to the complex-labeled bank entries.
    pub sim_complex: f64,
    /// Mean cosine similarity to the simple-labeled bank entries.
    pub sim_simple: f64,
    /// Normalized complexity coefficient.
    pub r: f64,
    /// Sigmoid-stretched coefficient in (0, 1).
    pub s: f64,
    /// Fused caching threshold, always within the configured bounds.
    pub delta_pca: f64,
}

fn l2_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Cosine similarity of two equal-dimension vectors, clamped into [−1, 1].
pub fn cosine_similarity(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), actual: b.len() });
    }
    if a.is_empty() {
        return Err(Error::EmptyInput { what: "cosine similarity vectors" });
    }
    for (name, v) in [("a", a), ("b", b)] {
        if let Some(&bad) = v.iter().find(|x| !x.is_finite()) {
            return Err(Error::NonFinite { name, value: bad });
        }
    }
    let (na, nb) = (l2_norm(a), l2_norm(b));
    if na <= 1e-12 || nb <= 1e-12 {
        return Err(Error::ZeroNormVector);
    }
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    Ok((dot / (na * nb)).clamp(-1.0, 1.0))
}

/// Mean cosine similarity of `embedding` against every bank entry carrying
/// `label`.
pub fn bank_similarity(
    embedding: &[f64],
    bank: &EmbeddingBank,
    label: PromptLabel,
) -> Result<f64> {
    if embedding.len() != bank.dim() {
        return Err(Error::DimensionMismatch {
            expected: bank.dim(),
            actual: embedding.len(),
        });
    }
    let mut sum = 0.0;
    let mut count = 0usize;
    for vector in bank.vectors_with_label(label) {
        sum += cosine_similarity(embedding, vector)?;
        count += 1;
    }
    if count == 0 {
        return Err(Error::MissingLabel { label: label.as_str() });
    }
    Ok(sum / count as f64)
}

/// Normalize the two bank similarities into a complexity coefficient
/// `R = sim_c / (sim_c + sim_s + ε)`; larger R means a more complex
/// prompt.
pub fn complexity_coefficient(sim_c: f64, sim_s: f64, epsilon: f64) -> Result<f64> {
    for (name, v) in [("sim_c", sim_c), ("sim_s", sim_s)] {
        if !v.is_finite() {
            return Err(Error::NonFinite { name, value: v });
        }
    }
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::Domain {
            name: "epsilon",
            value: epsilon,
            expected: "a small positive guard",
        });
    }
    let denominator = sim_c + sim_s + epsilon;
    // Negative similarities can cancel the guard; reject instead of
    // returning an astronomically amplified coefficient.
    if denominator.abs() < 1e-15 {
        return Err(Error::DegenerateDenominator { value: denominator });
    }
    Ok(sim_c / denominator)
}

/// Stretch the complexity coefficient through a sigmoid centered at 0.5:
/// `S = 1 / (1 + exp(−k (R − 0.5)))`.
pub fn sigmoid_stretch(r: f64, k: f64) -> Result<f64> {
    if !r.is_finite() {
        return Err(Error::NonFinite { name: "r", value: r });
    }
    if !k.is_finite() || k <= 0.0 {
        return Err(Error::Domain {
            name: "k",
            value: k,
            expected: "a positive finite stretch amplitude",
        });
    }
    Ok(1.0 / (1.0 + (-k * (r - 0.5)).exp()))
}

/// Fuse the stretched score into a threshold between the configured
/// bounds.
///
/// Under [`ThresholdOrientation::ComplexLow`] a fully complex prompt
/// (S → 1) lands on `delta_min`; under `ComplexHigh` it lands on
/// `delta_max`. The result is clamped into the bounds to absorb
/// floating-point drift.
pub fn fuse_threshold(s: f64, config: &PcaConfig) -> Result<f64> {
    if !s.is_finite() || !(0.0..=1.0).contains(&s) {
        return Err(Error::Domain {
            name: "s",
            value: s,
            expected: "a stretched score in [0, 1]",
        });
    }
    let delta = match config.orientation() {
        ThresholdOrientation::ComplexLow => {
            s * config.delta_min() + (1.0 - s) * config.delta_max()
        }
        ThresholdOrientation::ComplexHigh => {
            s * config.delta_max() + (1.0 - s) * config.delta_min()
        }
    };
    Ok(delta.clamp(config.delta_min(), config.delta_max()))
}

/// Score a prompt embedding end to end: bank similarities → complexity
/// coefficient → sigmoid stretch → fused threshold.
pub fn score_prompt(
    embedding: &[f64],
    bank: &EmbeddingBank,
    config: &PcaConfig,
) -> Result<ComplexityScore> {
    let sim_complex = bank_similarity(embedding, bank, PromptLabel::Complex)?;
    let sim_simple = bank_similarity(embedding, bank, PromptLabel::Simple)?;
    let r = complexity_coefficient(sim_complex, sim_simple, config.epsilon())?;
    let s = sigmoid_stretch(r, config.k())?;
    let delta_pca = fuse_threshold(s, config)?;
    Ok(ComplexityScore { sim_complex, sim_simple, r, s, delta_pca })
}

/// Mean Euclidean distances within and across the two label groups.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistanceStats {
    pub within_complex: f64,
    pub within_simple: f64,
    pub cross: f64,
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn mean_pairwise(vectors: &[&[f64]]) -> f64 {
    let n = vectors.len();
    let mut sum = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            sum += euclidean(vectors[i], vectors[j]);
        }
    }
    sum / (n * (n - 1) / 2) as f64
}

/// Mean Euclidean distance over unordered within-label pairs and over all
/// cross-label pairs. Requires at least two entries per label.
pub fn pairwise_distance_stats(bank: &EmbeddingBank) -> Result<DistanceStats> {
    let complex: Vec<&[f64]> = bank.vectors_with_label(PromptLabel::Complex).collect();
    let simple: Vec<&[f64]> = bank.vectors_with_label(PromptLabel::Simple).collect();
    for (what, group) in [("complex entries", &complex), ("simple entries", &simple)] {
        if group.len() < 2 {
            return Err(Error::InsufficientEntries { what, needed: 2, got: group.len() });
        }
    }
    let mut cross_sum = 0.0;
    for c in &complex {
        for s in &simple {
            cross_sum += euclidean(c, s);
        }
    }
    Ok(DistanceStats {
        within_complex: mean_pairwise(&complex),
        within_simple: mean_pairwise(&simple),
        cross: cross_sum / (complex.len() * simple.len()) as f64,
    })
}

/// Mean silhouette coefficient over all points, Euclidean metric.
///
/// For each point: `a` is the mean distance to its own cluster (excluding
/// itself), `b` the smallest mean distance to any other cluster, and the
/// point's silhouette is `(b − a) / max(a, b)`. Singleton clusters and
/// points with `max(a, b) = 0` contribute 0.
pub fn silhouette(vectors: &[Vec<f64>], labels: &[usize]) -> Result<f64> {
    if vectors.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: vectors.len(),
            actual: labels.len(),
        });
    }
    if vectors.len() < 3 {
        return Err(Error::InsufficientEntries {
            what: "silhouette points",
            needed: 3,
            got: vectors.len(),
        });
    }
    let dim = vectors[0].len();
    for (i, v) in vectors.iter().enumerate() {
        if v.len() != dim {
            return Err(Error::AtIndex {
                index: i,
                source: Box::new(Error::DimensionMismatch { expected: dim, actual: v.len() }),
            });
        }
        if let Some(&bad) = v.iter().find(|x| !x.is_finite()) {
            return Err(Error::AtIndex {
                index: i,
                source: Box::new(Error::NonFinite { name: "vector entry", value: bad }),
            });
        }
    }
    let mut clusters: Vec<usize> = labels.to_vec();
    clusters.sort_unstable();
    clusters.dedup();
    if clusters.len() < 2 {
        return Err(Error::Validation {
            context: "silhouette".into(),
            message: "at least two distinct labels are required".into(),
        });
    }
    let n = vectors.len();
    let mut total = 0.0;
    for i in 0..n {
        let own = labels[i];
        let own_size = labels.iter().filter(|&&l| l == own).count();
        if own_size == 1 {
            continue; // singleton contributes 0
        }
        let mut a = 0.0;
        let mut b = f64::INFINITY;
        for &cluster in &clusters {
            let (sum, count) = vectors
                .iter()
                .zip(labels)
                .enumerate()
                .filter(|(j, (_, &l))| l == cluster && *j != i)
                .fold((0.0, 0usize), |(s, c), (_, (v, _))| {
                    (s + euclidean(&vectors[i], v), c + 1)
                });
            if cluster == own {
                a = sum / count as f64;
            } else if count > 0 {
                b = b.min(sum / count as f64);
            }
        }
        let denom = a.max(b);
        if denom > 0.0 {
            total += (b - a) / denom;
        }
    }
    Ok(total / n as f64)
}
