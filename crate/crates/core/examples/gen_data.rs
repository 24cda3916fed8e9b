//! Regenerate the bundled example artifacts under `data/`.
//!
//! Everything is seeded, so rerunning produces byte-identical files:
//!
//! ```text
//! cargo run -p prompttea-core --example gen_data [output-dir]
//! ```

use std::fs;
use std::path::Path;

use prompttea_core::cache_scheduler::build_codebook;
use prompttea_core::synthesis::{synthetic_traces, TraceSynthesisConfig};
use prompttea_core::trace_model::{save_trace_bundle, BankEntry, EmbeddingBank, PromptLabel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

const DIM: usize = 8;

fn write_pretty(path: &Path, value: &serde_json::Value) {
    let mut text = serde_json::to_string_pretty(value).expect("value serializes");
    text.push('\n');
    fs::write(path, text).unwrap_or_else(|e| panic!("writing {}: {e}", path.display()));
    println!("wrote {}", path.display());
}

/// A cluster member: the center plus bounded jitter on every coordinate.
fn jittered(center: &[f64; DIM], rng: &mut ChaCha8Rng) -> Vec<f64> {
    center.iter().map(|c| c + rng.gen_range(-0.1..0.1)).collect()
}

fn main() {
    let out_dir = std::env::args().nth(1).unwrap_or_else(|| "data".into());
    let out_dir = Path::new(&out_dir);
    fs::create_dir_all(out_dir)
        .unwrap_or_else(|e| panic!("creating {}: {e}", out_dir.display()));

    // Traces: eight prompts over a 50-step schedule, with recorded input
    // differences, output differences, and guidance differences.
    let traces = synthetic_traces(&TraceSynthesisConfig {
        num_prompts: 8,
        num_steps: 50,
        seed: 0,
    })
    .expect("synthetic trace generation");
    let traces_path = out_dir.join("example_traces.json");
    save_trace_bundle(&traces, &traces_path).expect("saving traces");
    println!("wrote {}", traces_path.display());

    // Codebook: the per-step mean of those traces' guidance differences,
    // so `simulate` works out of the box.
    let codebook = build_codebook(&traces).expect("codebook construction");
    let codebook_path = out_dir.join("example_codebook.json");
    codebook.save(&codebook_path).expect("saving codebook");
    println!("wrote {}", codebook_path.display());

    // Bank: two well-separated clusters of reference embeddings. The
    // centers differ in their leading coordinates; jitter keeps entries
    // distinct without blurring the clusters together.
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let complex_center: [f64; DIM] = [2.0, 0.3, 0.0, 0.0, 0.5, 0.0, 0.0, 0.0];
    let simple_center: [f64; DIM] = [0.0, 2.0, 0.5, 0.0, 0.0, 0.3, 0.0, 0.0];
    let mut entries = Vec::new();
    for _ in 0..4 {
        entries.push(BankEntry {
            label: PromptLabel::Complex,
            vector: jittered(&complex_center, &mut rng),
        });
    }
    for _ in 0..4 {
        entries.push(BankEntry {
            label: PromptLabel::Simple,
            vector: jittered(&simple_center, &mut rng),
        });
    }
    let bank = EmbeddingBank::new(DIM, entries).expect("bank construction");
    let bank_path = out_dir.join("example_bank.json");
    bank.save(&bank_path).expect("saving bank");
    println!("wrote {}", bank_path.display());

    // Embedding: a prompt near the complex cluster, so scoring it yields
    // a threshold near the lower bound under the complex_low orientation.
    let embedding = jittered(&complex_center, &mut rng);
    write_pretty(
        &out_dir.join("example_embedding.json"),
        &json!({ "schema_version": 1, "vector": embedding }),
    );

    // Policy configurations for `compare`: the two single-indicator
    // policies, the guidance-only policy, and the combined one.
    write_pretty(
        &out_dir.join("example_configs.json"),
        &json!({
            "schema_version": 1,
            "configs": [
                { "policy": "teacache", "delta_main": 0.165,
                  "delta_cfg": 0.02, "cfg_enabled": true },
                { "policy": "pca_teacache", "delta_main": 0.1,
                  "delta_cfg": 0.02, "cfg_enabled": true },
                { "policy": "dyncfg_only", "delta_main": 0.165,
                  "delta_cfg": 0.02, "cfg_enabled": true },
                { "policy": "prompttea", "delta_main": 0.165,
                  "delta_cfg": 0.02, "cfg_enabled": true },
            ],
        }),
    );

    // Conditional/unconditional signal pair for `cfg-freq`: a shared
    // smooth waveform, with the unconditional branch differing by a
    // low-frequency drift and a touch of high-frequency ripple.
    let n = 64;
    let mut cond = Vec::with_capacity(n);
    let mut uncond = Vec::with_capacity(n);
    for j in 0..n {
        let phase = j as f64 / n as f64 * std::f64::consts::TAU;
        let base = (phase).sin() + 0.4 * (3.0 * phase).cos();
        let noise = rng.gen_range(-0.05..0.05);
        cond.push(base + noise);
        uncond.push(base + noise + 0.3 * (phase).cos() + 0.05 * (17.0 * phase).sin());
    }
    write_pretty(
        &out_dir.join("example_cond.json"),
        &json!({ "schema_version": 1, "values": cond }),
    );
    write_pretty(
        &out_dir.join("example_uncond.json"),
        &json!({ "schema_version": 1, "values": uncond }),
    );
}
