//! Frequency-domain conditional→unconditional reconstruction at desk
//! scale.
//!
//! The unconditional output of a guidance step can be approximated from
//! the conditional output plus banded frequency-domain offsets: the two
//! spectra are split into low and high bands around a cutoff, the banded
//! differences are stored, and a reconstruction re-applies them with
//! stage-dependent weights (low frequencies are prioritized early in the
//! schedule, high frequencies late).
//!
//! Signals are 1-D real vectors; callers flatten anything larger. The
//! transform is a direct O(n²) DFT — plenty at the vector sizes this
//! module is meant for, and trivially verifiable against the definition.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest imaginary residue a reconstruction may discard.
pub const IMAG_TOLERANCE: f64 = 1e-9;

/// Default fraction of the spectrum treated as low-frequency.
pub const DEFAULT_CUTOFF: f64 = 0.25;

/// Discrete Fourier transform of a real signal, by direct summation.
pub fn dft(signal: &[f64]) -> Vec<Complex64> {
    let n = signal.len();
    (0..n)
        .map(|k| {
            signal
                .iter()
                .enumerate()
                .map(|(j, &x)| x * Complex64::cis(-TAU * (j * k) as f64 / n as f64))
                .sum()
        })
        .collect()
}

/// Inverse DFT, returning the full complex signal.
pub fn idft(spectrum: &[Complex64]) -> Vec<Complex64> {
    let n = spectrum.len();
    (0..n)
        .map(|j| {
            spectrum
                .iter()
                .enumerate()
                .map(|(k, &s)| s * Complex64::cis(TAU * (j * k) as f64 / n as f64))
                .sum::<Complex64>()
                / n as f64
        })
        .collect()
}

/// A spectrum separated into complementary low- and high-frequency bands.
///
/// Both bands are full-length spectra with zeros outside their band, so
/// `low[k] + high[k]` reassembles the original spectrum exactly. The mask
/// is symmetric in ±k (bin k and bin n−k land in the same band), which
/// keeps real signals real under reconstruction.
#[derive(Debug, Clone, PartialEq)]
pub struct FreqSplit {
    low: Vec<Complex64>,
    high: Vec<Complex64>,
    cutoff_fraction: f64,
}

impl FreqSplit {
    pub fn low(&self) -> &[Complex64] {
        &self.low
    }

    pub fn high(&self) -> &[Complex64] {
        &self.high
    }

    pub fn len(&self) -> usize {
        self.low.len()
    }

    pub fn is_empty(&self) -> bool {
        self.low.is_empty()
    }

    pub fn cutoff_fraction(&self) -> f64 {
        self.cutoff_fraction
    }

    /// Reassembled full spectrum, `low[k] + high[k]`.
    pub fn full(&self) -> Vec<Complex64> {
        self.low
            .iter()
            .zip(&self.high)
            .map(|(l, h)| l + h)
            .collect()
    }
}

/// True when bin `k` of an `n`-point spectrum belongs to the low band:
/// its normalized frequency `min(k, n−k) / n` is within `cutoff / 2`
/// (inclusive).
fn is_low_bin(k: usize, n: usize, cutoff_fraction: f64) -> bool {
    let folded = k.min(n - k) as f64 / n as f64;
    folded <= cutoff_fraction / 2.0
}

/// Transform a real signal and split its spectrum at the cutoff.
pub fn dft_split(signal: &[f64], cutoff_fraction: f64) -> Result<FreqSplit> {
    if signal.len() < 2 {
        return Err(Error::InsufficientEntries {
            what: "signal samples",
            needed: 2,
            got: signal.len(),
        });
    }
    if !cutoff_fraction.is_finite() || cutoff_fraction <= 0.0 || cutoff_fraction >= 1.0 {
        return Err(Error::Domain {
            name: "cutoff_fraction",
            value: cutoff_fraction,
            expected: "a fraction strictly between 0 and 1",
        });
    }
    if let Some(&bad) = signal.iter().find(|v| !v.is_finite()) {
        return Err(Error::NonFinite { name: "signal entry", value: bad });
    }
    let spectrum = dft(signal);
    let n = spectrum.len();
    let zero = Complex64::new(0.0, 0.0);
    let mut low = vec![zero; n];
    let mut high = vec![zero; n];
    for (k, &bin) in spectrum.iter().enumerate() {
        if is_low_bin(k, n, cutoff_fraction) {
            low[k] = bin;
        } else {
            high[k] = bin;
        }
    }
    Ok(FreqSplit { low, high, cutoff_fraction })
}

/// Banded spectral differences between an unconditional and a conditional
/// output: `(low(U) − low(C), high(U) − high(C))`.
pub fn cfg_delta(
    cond: &[f64],
    uncond: &[f64],
    cutoff_fraction: f64,
) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    if cond.len() != uncond.len() {
        return Err(Error::DimensionMismatch {
            expected: cond.len(),
            actual: uncond.len(),
        });
    }
    let cond_split = dft_split(cond, cutoff_fraction)?;
    let uncond_split = dft_split(uncond, cutoff_fraction)?;
    let delta_lf = uncond_split
        .low()
        .iter()
        .zip(cond_split.low())
        .map(|(u, c)| u - c)
        .collect();
    let delta_hf = uncond_split
        .high()
        .iter()
        .zip(cond_split.high())
        .map(|(u, c)| u - c)
        .collect();
    Ok((delta_lf, delta_hf))
}

/// Stage-dependent band weights: the low band is prioritized before the
/// stage boundary, the high band after, and `beta` is the de-prioritized
/// band's weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreqWeights {
    beta: f64,
    t0: usize,
}

impl FreqWeights {
    pub fn new(beta: f64, t0: usize) -> Result<Self> {
        if !beta.is_finite() || !(0.0..=1.0).contains(&beta) {
            return Err(Error::Domain {
                name: "beta",
                value: beta,
                expected: "a weight in [0, 1]",
            });
        }
        Ok(Self { beta, t0 })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn t0(&self) -> usize {
        self.t0
    }

    /// `(w1, w2)` — the low- and high-band weights at step `t`:
    /// `(1, beta)` for `t < t0`, `(beta, 1)` from `t0` on.
    pub fn at(&self, t: usize) -> (f64, f64) {
        if t < self.t0 {
            (1.0, self.beta)
        } else {
            (self.beta, 1.0)
        }
    }
}

/// Reconstruct the unconditional output from the conditional one plus
/// weighted banded deltas: `IDFT(DFT(cond) + w1(t)·ΔLF + w2(t)·ΔHF)`.
///
/// The result of the inverse transform must be real up to
/// [`IMAG_TOLERANCE`]; a larger imaginary residue means the deltas were
/// not produced by a symmetric split and is reported as an error rather
/// than silently discarded.
pub fn reconstruct_uncond(
    cond: &[f64],
    delta_lf: &[Complex64],
    delta_hf: &[Complex64],
    weights: &FreqWeights,
    t: usize,
) -> Result<Vec<f64>> {
    let n = cond.len();
    for (name, spectrum) in [("delta_lf", delta_lf), ("delta_hf", delta_hf)] {
        if spectrum.len() != n {
            return Err(Error::DimensionMismatch { expected: n, actual: spectrum.len() });
        }
        if let Some(bad) = spectrum.iter().find(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite { name, value: bad.re });
        }
    }
    if n == 0 {
        return Err(Error::EmptyInput { what: "conditional signal" });
    }
    if let Some(&bad) = cond.iter().find(|v| !v.is_finite()) {
        return Err(Error::NonFinite { name: "cond entry", value: bad });
    }
    let (w1, w2) = weights.at(t);
    let spectrum: Vec<Complex64> = dft(cond)
        .iter()
        .zip(delta_lf.iter().zip(delta_hf))
        .map(|(c, (lf, hf))| c + w1 * lf + w2 * hf)
        .collect();
    let signal = idft(&spectrum);
    let max_imag = signal.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
    if max_imag > IMAG_TOLERANCE {
        return Err(Error::ImaginaryResidue { max_abs: max_imag, tolerance: IMAG_TOLERANCE });
    }
    Ok(signal.into_iter().map(|c| c.re).collect())
}
