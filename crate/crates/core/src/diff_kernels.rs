//! Relative-difference and dispersion statistics underlying all estimators.
//!
//! The step indicator everywhere in this crate is the relative L1 difference
//! `||a - b||_1 / ||b||_1` between consecutive-step feature vectors. The
//! coefficient of variation is used to compare how strongly different input
//! factors move the per-step output differences.

use crate::error::{Error, Result};

/// Absolute tolerance below which a denominator (L1 norm or mean) is
/// treated as degenerate. Traces hold O(1)-magnitude relative differences,
/// so anything this small is a broken input rather than a tiny signal.
pub const DENOM_TOLERANCE: f64 = 1e-12;

/// Relative L1 difference between a feature vector and its successor:
/// `||current - next||_1 / ||next||_1`.
pub fn l1_rel(current: &[f64], next: &[f64]) -> Result<f64> {
    if current.len() != next.len() {
        return Err(Error::DimensionMismatch {
            expected: current.len(),
            actual: next.len(),
        });
    }
    if current.is_empty() {
        return Err(Error::EmptyInput { what: "l1_rel vectors" });
    }
    let denom: f64 = next.iter().map(|v| v.abs()).sum();
    if denom <= DENOM_TOLERANCE {
        return Err(Error::DegenerateDenominator { value: denom });
    }
    let num: f64 = current
        .iter()
        .zip(next)
        .map(|(c, n)| (c - n).abs())
        .sum();
    Ok(num / denom)
}

/// Relative L1 differences over consecutive pairs of a feature sequence.
///
/// Element `i` of the result is `l1_rel(vectors[i], vectors[i + 1])`, so the
/// output is one shorter than the input. Errors from individual pairs are
/// tagged with the offending pair index.
pub fn sequence_rel_diffs(vectors: &[Vec<f64>]) -> Result<Vec<f64>> {
    if vectors.len() < 2 {
        return Err(Error::InsufficientEntries {
            what: "sequence_rel_diffs",
            needed: 2,
            got: vectors.len(),
        });
    }
    vectors
        .windows(2)
        .enumerate()
        .map(|(i, pair)| {
            l1_rel(&pair[0], &pair[1]).map_err(|e| Error::AtIndex {
                index: i,
                source: Box::new(e),
            })
        })
        .collect()
}

/// A non-empty population of finite scalar samples.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    values: Vec<f64>,
}

impl SampleSet {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput { what: "sample set" });
        }
        if let Some(&bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite { name: "sample", value: bad });
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Population standard deviation (divides by n, not n - 1).
    pub fn population_std(&self) -> f64 {
        let mean = self.mean();
        let var = self
            .values
            .iter()
            .map(|v| (v - mean) * (v - mean))
            .sum::<f64>()
            / self.values.len() as f64;
        var.sqrt()
    }
}

/// Ratio of population standard deviation to mean.
///
/// Requires the mean to be comfortably positive; a near-zero mean makes the
/// ratio meaningless for difference magnitudes.
pub fn coefficient_of_variation(samples: &SampleSet) -> Result<f64> {
    let mean = samples.mean();
    if mean <= DENOM_TOLERANCE {
        return Err(Error::DegenerateMean { mean });
    }
    Ok(samples.population_std() / mean)
}
