//! Polynomial feature expansion and least-squares fitting of the
//! input→output-difference relationship.
//!
//! The main estimator expands a (step-input difference, timestep) pair into
//! twelve 4th-order monomials and fits coefficients by ordinary least
//! squares; a five-feature univariate expansion of the input difference
//! alone serves as the single-input baseline for accuracy comparisons.
//! Raw timestep indices are divided by a stored normalizer before
//! expansion so that degree-4 powers stay well conditioned; the normalizer
//! travels with the fitted coefficients (see [`FitModel`]).

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::trace_model::{FitKind, FitModel, TimestepTrace};

/// Number of features produced by [`expand_features`].
pub const MULTI_FEATURES: usize = 12;
/// Number of features produced by [`expand_baseline`].
pub const BASELINE_FEATURES: usize = 5;

/// One training sample: input difference `x` at raw step `t_raw` with
/// observed output difference `y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitRow {
    pub x: f64,
    pub t_raw: usize,
    pub y: f64,
}

/// A validated set of (x, t, y) samples plus the timestep normalizer used
/// for feature expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct FitDataset {
    rows: Vec<FitRow>,
    t_normalizer: f64,
}

impl FitDataset {
    pub fn new(rows: Vec<FitRow>, t_normalizer: f64) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyInput { what: "fit dataset rows" });
        }
        if !t_normalizer.is_finite() || t_normalizer <= 0.0 {
            return Err(Error::Domain {
                name: "t_normalizer",
                value: t_normalizer,
                expected: "a positive finite scalar",
            });
        }
        for (i, row) in rows.iter().enumerate() {
            for (name, v) in [("x", row.x), ("y", row.y)] {
                if !v.is_finite() {
                    return Err(Error::AtIndex {
                        index: i,
                        source: Box::new(Error::NonFinite { name, value: v }),
                    });
                }
                if v < 0.0 {
                    return Err(Error::AtIndex {
                        index: i,
                        source: Box::new(Error::Domain {
                            name,
                            value: v,
                            expected: "a non-negative difference magnitude",
                        }),
                    });
                }
            }
        }
        Ok(Self { rows, t_normalizer })
    }

    /// Assemble a dataset from every trace that carries recorded output
    /// differences, one row per timestep.
    ///
    /// When `t_normalizer` is not given, all contributing traces must share
    /// a step count T and the normalizer defaults to T − 1 (so normalized t
    /// spans [0, 1]); bundles mixing step counts require an explicit value.
    pub fn from_traces(traces: &[TimestepTrace], t_normalizer: Option<f64>) -> Result<Self> {
        let with_y: Vec<&TimestepTrace> = traces.iter().filter(|t| t.y().is_some()).collect();
        if with_y.is_empty() {
            return Err(Error::EmptyInput { what: "traces with recorded output differences" });
        }
        let normalizer = match t_normalizer {
            Some(n) => n,
            None => {
                let t0 = with_y[0].num_steps();
                if with_y.iter().any(|t| t.num_steps() != t0) {
                    return Err(Error::Config {
                        message: "traces have differing step counts; \
                                  pass an explicit t_normalizer"
                            .into(),
                    });
                }
                t0.saturating_sub(1).max(1) as f64
            }
        };
        let mut rows = Vec::new();
        for trace in &with_y {
            let y = trace.y().expect("filtered to traces with y");
            for (t_raw, (&x, &y)) in trace.x().iter().zip(y).enumerate() {
                rows.push(FitRow { x, t_raw, y });
            }
        }
        Self::new(rows, normalizer)
    }

    pub fn rows(&self) -> &[FitRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn t_normalizer(&self) -> f64 {
        self.t_normalizer
    }
}

fn check_finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { name, value })
    }
}

/// Expand (x, t) into the twelve 4th-order polynomial features, in the
/// fixed order `[1, x, t, x², t², xt, x³, t³, x²t, xt², x⁴, t⁴]`.
///
/// `t` is expected to be already normalized.
pub fn expand_features(x: f64, t: f64) -> Result<[f64; MULTI_FEATURES]> {
    let x = check_finite("x", x)?;
    let t = check_finite("t", t)?;
    let (x2, t2) = (x * x, t * t);
    Ok([
        1.0,
        x,
        t,
        x2,
        t2,
        x * t,
        x2 * x,
        t2 * t,
        x2 * t,
        x * t2,
        x2 * x2,
        t2 * t2,
    ])
}

/// Expand x alone into `[1, x, x², x³, x⁴]` for the univariate baseline.
pub fn expand_baseline(x: f64) -> Result<[f64; BASELINE_FEATURES]> {
    let x = check_finite("x", x)?;
    let x2 = x * x;
    Ok([1.0, x, x2, x2 * x, x2 * x2])
}

fn design_row(kind: FitKind, x: f64, t_norm: f64) -> Result<Vec<f64>> {
    Ok(match kind {
        FitKind::Multivariate12 => expand_features(x, t_norm)?.to_vec(),
        FitKind::Univariate5 => expand_baseline(x)?.to_vec(),
    })
}

/// Fit coefficients by least squares on the expanded features.
///
/// The solve is SVD-based: singular values below
/// `σ_max · max(m, n) · machine-epsilon` are treated as zero, so
/// rank-deficient and underdetermined systems return the minimum-norm
/// solution rather than failing.
pub fn fit(dataset: &FitDataset, kind: FitKind) -> Result<FitModel> {
    let m = dataset.len();
    let n = kind.coeff_count();
    let mut flat = Vec::with_capacity(m * n);
    for row in dataset.rows() {
        let t_norm = row.t_raw as f64 / dataset.t_normalizer();
        flat.extend_from_slice(&design_row(kind, row.x, t_norm)?);
    }
    if let Some(&bad) = flat.iter().find(|v| !v.is_finite()) {
        return Err(Error::NonFinite { name: "design matrix entry", value: bad });
    }
    let a = DMatrix::from_row_slice(m, n, &flat);
    let b = DVector::from_iterator(m, dataset.rows().iter().map(|r| r.y));
    let svd = a.svd(true, true);
    let sigma_max = svd.singular_values.max();
    let cutoff = sigma_max * m.max(n) as f64 * f64::EPSILON;
    let coeffs = svd.solve(&b, cutoff).map_err(|msg| Error::Validation {
        context: "least-squares fit".into(),
        message: msg.into(),
    })?;
    FitModel::new(kind, coeffs.iter().copied().collect(), dataset.t_normalizer())
}

/// Estimated output difference for input difference `x` at raw step
/// `t_raw`, clamped below at 0 (estimates are difference magnitudes).
pub fn predict(model: &FitModel, x: f64, t_raw: usize) -> Result<f64> {
    let x = check_finite("x", x)?;
    let t_norm = t_raw as f64 / model.t_normalizer();
    let features = design_row(model.kind(), x, t_norm)?;
    let raw: f64 = model
        .coeffs()
        .iter()
        .zip(&features)
        .map(|(c, f)| c * f)
        .sum();
    if !raw.is_finite() {
        return Err(Error::NonFinite { name: "prediction", value: raw });
    }
    Ok(raw.max(0.0))
}

/// Predict the per-step estimated output difference for a whole input
/// sequence, using each element's index as its raw timestep.
pub fn predict_trace(model: &FitModel, x: &[f64]) -> Result<Vec<f64>> {
    x.iter()
        .enumerate()
        .map(|(t, &x)| {
            predict(model, x, t).map_err(|e| Error::AtIndex { index: t, source: Box::new(e) })
        })
        .collect()
}

/// Mean squared error of the model's (clamped) predictions on a dataset.
pub fn mse(model: &FitModel, dataset: &FitDataset) -> Result<f64> {
    let mut sum = 0.0;
    for row in dataset.rows() {
        let err = predict(model, row.x, row.t_raw)? - row.y;
        sum += err * err;
    }
    Ok(sum / dataset.len() as f64)
}
