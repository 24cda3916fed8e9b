//! Trace-driven cache-reuse scheduling for diffusion-model inference.
//!
//! Diffusion transformers spend almost all of their inference time on
//! per-timestep forward passes, and consecutive steps are often similar
//! enough that a cached output can stand in for a recomputed one. This
//! crate decides *when*: it consumes recorded traces of per-step
//! differences and produces per-step compute/reuse schedules, with the
//! caller left to do the actual tensor caching.
//!
//! The decision stack, bottom to top:
//!
//! * [`diff_kernels`] — relative L1 differences and dispersion statistics,
//!   the unit all indicators are measured in.
//! * [`trace_model`] — the persisted artifacts (traces, embedding banks,
//!   fitted models, codebooks, schedules), all versioned JSON.
//! * [`poly_fit`] — polynomial regression from input differences and
//!   timestep to estimated output differences, plus the univariate
//!   baseline.
//! * [`pca_threshold`] — prompt-complexity scoring that maps a prompt
//!   embedding to a caching threshold between configured bounds.
//! * [`cache_scheduler`] — the accumulate-and-reset policies and their
//!   pass accounting.
//! * [`cfg_freq`] — frequency-domain reconstruction of unconditional
//!   guidance outputs, for the uniform-cache variant.
//! * [`synthesis`] / [`export`] — seeded synthetic data and plot-ready
//!   CSV writers.

pub mod cache_scheduler;
pub mod cfg_freq;
pub mod diff_kernels;
pub mod error;
pub mod export;
pub mod pca_threshold;
pub mod poly_fit;
pub mod synthesis;
pub mod trace_model;

pub use error::{Error, Result};
