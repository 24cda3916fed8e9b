//! Published per-model configuration bundles.
//!
//! Each preset carries the sigmoid stretching amplitude `k`, the threshold
//! fusion bounds `(delta_min, delta_max)`, the guidance-path threshold
//! `delta_cfg`, and whether the guidance path is scheduled at all. A
//! preset is a set of defaults, not a straitjacket: explicit flags always
//! override the bundled values, and the `custom` preset bundles nothing.

use clap::ValueEnum;

/// Model whose published configuration to start from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[clap(rename_all = "snake_case")]
pub enum ModelPreset {
    /// CogVideoX1.5: k = 50, thresholds in [0.2, 0.3], guidance enabled.
    Cogvideox15,
    /// HunyuanVideo: k = 200, thresholds in [0.1, 0.15]; the model runs
    /// without classifier-free guidance, so the guidance path is disabled.
    Hunyuanvideo,
    /// Wan2.1: k = 50, thresholds in [0.1, 0.23], guidance enabled.
    Wan21,
    /// No bundled values; every parameter must come from explicit flags.
    Custom,
}

/// The constants a non-custom preset bundles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PresetValues {
    pub k: f64,
    pub delta_min: f64,
    pub delta_max: f64,
    pub delta_cfg: f64,
    pub cfg_enabled: bool,
}

impl ModelPreset {
    /// The bundled constants, or `None` for `custom`.
    pub fn values(self) -> Option<PresetValues> {
        match self {
            ModelPreset::Cogvideox15 => Some(PresetValues {
                k: 50.0,
                delta_min: 0.2,
                delta_max: 0.3,
                delta_cfg: 0.02,
                cfg_enabled: true,
            }),
            ModelPreset::Hunyuanvideo => Some(PresetValues {
                k: 200.0,
                delta_min: 0.1,
                delta_max: 0.15,
                delta_cfg: 0.02,
                cfg_enabled: false,
            }),
            ModelPreset::Wan21 => Some(PresetValues {
                k: 50.0,
                delta_min: 0.1,
                delta_max: 0.23,
                delta_cfg: 0.02,
                cfg_enabled: true,
            }),
            ModelPreset::Custom => None,
        }
    }
}
