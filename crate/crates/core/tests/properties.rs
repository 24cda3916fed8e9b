//! Property tests for the library's stated invariants, each checked
//! against an independent oracle where one exists: brute-force partial-sum
//! recomputation for the schedulers, naive monomial evaluation for the
//! feature expansion, a from-scratch reference implementation for the
//! silhouette, and a trigonometric re-derivation for the DFT.

use prompttea_core::cache_scheduler::{
    simulate, simulate_cfg, simulate_main, Policy, PolicyConfig, StepEstimates,
};
use prompttea_core::cfg_freq::{cfg_delta, dft, dft_split, reconstruct_uncond, FreqWeights};
use prompttea_core::diff_kernels::{coefficient_of_variation, l1_rel, SampleSet};
use prompttea_core::pca_threshold::{
    complexity_coefficient, cosine_similarity, fuse_threshold, sigmoid_stretch, silhouette,
    PcaConfig, ThresholdOrientation,
};
use prompttea_core::poly_fit::{expand_features, fit, FitDataset, FitRow};
use prompttea_core::trace_model::{CfgDecision, DiffCodebook, FitKind, MainDecision};
use proptest::collection::vec;
use proptest::prelude::*;

/// Exact power-of-two factors: scaling by these is lossless in binary
/// floating point, so covariance properties can be asserted bit-for-bit.
fn pow2_factor() -> impl Strategy<Value = f64> {
    prop_oneof![
        Just(0.25),
        Just(0.5),
        Just(2.0),
        Just(4.0),
        Just(64.0),
        Just(0.03125),
    ]
}

mod diff_kernel_props {
    use super::*;

    proptest! {
        #[test]
        fn l1_rel_is_scale_covariant(
            pair in vec((-2.0..2.0f64, 0.1..2.0f64), 1..20),
            alpha in pow2_factor(),
            negate in any::<bool>(),
        ) {
            let alpha = if negate { -alpha } else { alpha };
            let a: Vec<f64> = pair.iter().map(|(x, _)| *x).collect();
            let b: Vec<f64> = pair.iter().map(|(_, y)| *y).collect();
            let sa: Vec<f64> = a.iter().map(|x| alpha * x).collect();
            let sb: Vec<f64> = b.iter().map(|y| alpha * y).collect();
            prop_assert_eq!(l1_rel(&sa, &sb).unwrap(), l1_rel(&a, &b).unwrap());
        }

        #[test]
        fn l1_rel_is_zero_exactly_on_equal_vectors(
            pair in vec((-2.0..2.0f64, 0.1..2.0f64), 1..20),
        ) {
            let a: Vec<f64> = pair.iter().map(|(x, _)| *x).collect();
            let b: Vec<f64> = pair.iter().map(|(_, y)| *y).collect();
            let value = l1_rel(&a, &b).unwrap();
            prop_assert!(value >= 0.0);
            prop_assert_eq!(value == 0.0, a == b);
            prop_assert_eq!(l1_rel(&b, &b).unwrap(), 0.0);
        }

        #[test]
        fn cv_is_invariant_under_positive_scaling(
            samples in vec(0.1..5.0f64, 1..30),
            alpha in pow2_factor(),
        ) {
            let base = coefficient_of_variation(&SampleSet::new(samples.clone()).unwrap())
                .unwrap();
            let scaled: Vec<f64> = samples.iter().map(|s| alpha * s).collect();
            let scaled = coefficient_of_variation(&SampleSet::new(scaled).unwrap()).unwrap();
            prop_assert_eq!(base, scaled);
        }
    }
}

mod expansion_props {
    use super::*;

    /// Deliberately different evaluation: integer-exponent powers instead
    /// of the chained multiplications used by the implementation.
    fn naive_features(x: f64, t: f64) -> [f64; 12] {
        [
            1.0,
            x,
            t,
            x.powi(2),
            t.powi(2),
            x * t,
            x.powi(3),
            t.powi(3),
            x.powi(2) * t,
            x * t.powi(2),
            x.powi(4),
            t.powi(4),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn matches_naive_monomial_evaluation(x in 0.0..3.0f64, t in 0.0..3.0f64) {
            let got = expand_features(x, t).unwrap();
            let want = naive_features(x, t);
            for (g, w) in got.iter().zip(&want) {
                prop_assert!(
                    (g - w).abs() <= 1e-12 * w.abs().max(1.0),
                    "{g} vs {w}"
                );
            }
        }
    }
}

mod fit_props {
    use super::*;

    fn random_dataset() -> impl Strategy<Value = FitDataset> {
        vec((0.0..1.0f64, 0usize..50, 0.0..1.0f64), 15..60).prop_map(|rows| {
            let rows = rows
                .into_iter()
                .map(|(x, t_raw, y)| FitRow { x, t_raw, y })
                .collect();
            FitDataset::new(rows, 49.0).unwrap()
        })
    }

    /// Well-conditioned fixed 10×10 design; only the generating
    /// coefficients and the duplicated row vary.
    fn grid_dataset(theta: &[f64; 12]) -> FitDataset {
        let mut rows = Vec::new();
        for i in 0..10 {
            let x = 0.1 * (i + 1) as f64;
            for t_raw in 0..10 {
                let features = expand_features(x, t_raw as f64 / 9.0).unwrap();
                let y: f64 = theta.iter().zip(&features).map(|(c, f)| c * f).sum();
                rows.push(FitRow { x, t_raw, y });
            }
        }
        FitDataset::new(rows, 9.0).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn residual_is_orthogonal_to_the_design(dataset in random_dataset()) {
            let model = fit(&dataset, FitKind::Multivariate12).unwrap();
            let mut design: Vec<[f64; 12]> = Vec::new();
            let mut residual: Vec<f64> = Vec::new();
            for row in dataset.rows() {
                let features =
                    expand_features(row.x, row.t_raw as f64 / dataset.t_normalizer())
                        .unwrap();
                let y_hat: f64 =
                    model.coeffs().iter().zip(&features).map(|(c, f)| c * f).sum();
                design.push(features);
                residual.push(y_hat - row.y);
            }
            let design_scale: f64 = design
                .iter()
                .flat_map(|row| row.iter().map(|f| f * f))
                .sum::<f64>()
                .sqrt();
            let target_scale: f64 =
                dataset.rows().iter().map(|r| r.y * r.y).sum::<f64>().sqrt();
            let tolerance = 1e-8 * (design_scale * target_scale).max(1.0);
            for j in 0..12 {
                let gradient: f64 = design
                    .iter()
                    .zip(&residual)
                    .map(|(row, r)| row[j] * r)
                    .sum();
                prop_assert!(
                    gradient.abs() <= tolerance,
                    "column {j}: gradient {gradient}, tolerance {tolerance}"
                );
            }
        }

        #[test]
        fn duplicating_a_row_of_an_exactly_solvable_problem_changes_nothing(
            theta in proptest::array::uniform12(0.0..1.0f64),
            dup_index in 0usize..100,
        ) {
            let dataset = grid_dataset(&theta);
            let base = fit(&dataset, FitKind::Multivariate12).unwrap();
            let mut rows = dataset.rows().to_vec();
            rows.push(rows[dup_index]);
            let duplicated =
                fit(&FitDataset::new(rows, 9.0).unwrap(), FitKind::Multivariate12).unwrap();
            for (a, b) in base.coeffs().iter().zip(duplicated.coeffs()) {
                prop_assert!((a - b).abs() <= 1e-9, "{a} vs {b}");
            }
        }
    }
}

mod scheduler_props {
    use super::*;

    /// Brute-force re-verification of a main-path schedule: every
    /// between-computes segment is re-summed from scratch, left to right
    /// (matching the accumulator's addition order, so the comparisons are
    /// exact, not tolerance-based).
    fn check_main_boundary(est: &[f64], delta: f64, decisions: &[MainDecision]) {
        assert_eq!(decisions[0], MainDecision::Compute, "step 0 must compute");
        let computed: Vec<usize> = decisions
            .iter()
            .enumerate()
            .filter(|(_, d)| **d == MainDecision::Compute)
            .map(|(i, _)| i)
            .collect();
        for pair in computed.windows(2) {
            let (t_c, t_d) = (pair[0], pair[1]);
            let mut sum = 0.0;
            for (t, &e) in est.iter().enumerate().take(t_d).skip(t_c + 1) {
                sum += e;
                assert!(sum <= delta, "interior step {t} should have computed");
            }
            sum += est[t_d];
            assert!(sum > delta, "step {t_d} computed below the threshold");
        }
        let mut sum = 0.0;
        let last = *computed.last().unwrap();
        for (t, &e) in est.iter().enumerate().skip(last + 1) {
            sum += e;
            assert!(sum <= delta, "trailing step {t} should have computed");
        }
    }

    /// The CFG-path analogue, restricted to non-skipped steps; skipped
    /// steps contribute to the sums but are never judged.
    fn check_cfg_boundary(
        values: &[f64],
        delta: f64,
        main: &[MainDecision],
        cfg: &[CfgDecision],
    ) {
        assert_eq!(cfg[0], CfgDecision::ComputeBoth);
        for (t, (c, m)) in cfg.iter().zip(main).enumerate() {
            assert_eq!(
                *c == CfgDecision::Skipped,
                *m == MainDecision::Reuse,
                "skip/reuse mismatch at step {t}"
            );
        }
        let computed: Vec<usize> = cfg
            .iter()
            .enumerate()
            .filter(|(_, d)| **d == CfgDecision::ComputeBoth)
            .map(|(i, _)| i)
            .collect();
        for pair in computed.windows(2) {
            let (t_c, t_d) = (pair[0], pair[1]);
            let mut sum = 0.0;
            for t in (t_c + 1)..t_d {
                sum += values[t];
                if cfg[t] == CfgDecision::ReuseUncond {
                    assert!(sum <= delta, "step {t} reused above the threshold");
                }
            }
            sum += values[t_d];
            assert!(sum > delta, "step {t_d} computed below the threshold");
        }
        let mut sum = 0.0;
        for t in (computed.last().unwrap() + 1)..values.len() {
            sum += values[t];
            if cfg[t] == CfgDecision::ReuseUncond {
                assert!(sum <= delta, "trailing step {t} reused above the threshold");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn main_schedule_satisfies_the_partial_sum_boundary(
            est in vec(0.0..0.3f64, 2..50),
            delta in 0.01..0.5f64,
        ) {
            let (decisions, _) = simulate_main(&est, delta).unwrap();
            check_main_boundary(&est, delta, &decisions);
        }

        #[test]
        fn cfg_schedule_satisfies_the_partial_sum_boundary(
            steps in vec((0.0..0.1f64, any::<bool>()), 2..50),
            delta in 0.01..0.2f64,
        ) {
            let values: Vec<f64> = steps.iter().map(|(v, _)| *v).collect();
            let mut main: Vec<MainDecision> = steps
                .iter()
                .map(|(_, compute)| {
                    if *compute { MainDecision::Compute } else { MainDecision::Reuse }
                })
                .collect();
            main[0] = MainDecision::Compute;
            let codebook = DiffCodebook::new(values.clone(), 1).unwrap();
            let (cfg, _) = simulate_cfg(&codebook, delta, &main).unwrap();
            check_cfg_boundary(&values, delta, &main, &cfg);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn computed_steps_never_increase_with_the_threshold(
            est in vec(0.0..0.3f64, 2..50),
        ) {
            let mut previous = usize::MAX;
            for delta in [0.05, 0.1, 0.2, 0.3, 0.5] {
                let (decisions, _) = simulate_main(&est, delta).unwrap();
                let computed = decisions
                    .iter()
                    .filter(|d| **d == MainDecision::Compute)
                    .count();
                prop_assert!(
                    computed <= previous,
                    "delta {delta} computed {computed} > {previous}"
                );
                previous = computed;
            }
        }

        #[test]
        fn scaling_estimates_and_threshold_together_preserves_decisions(
            est in vec(0.0..0.3f64, 2..50),
            delta in 0.01..0.5f64,
            alpha in pow2_factor(),
        ) {
            let (base, _) = simulate_main(&est, delta).unwrap();
            let scaled_est: Vec<f64> = est.iter().map(|e| alpha * e).collect();
            let (scaled, _) = simulate_main(&scaled_est, alpha * delta).unwrap();
            prop_assert_eq!(base, scaled);
        }

        #[test]
        fn speedup_is_bounded_and_unit_exactly_on_all_compute(
            est in vec(0.0..0.3f64, 2..50),
            delta in 0.01..0.5f64,
            cfg_enabled in any::<bool>(),
            policy_pick in 0usize..3,
        ) {
            let policy = [Policy::TeaCache, Policy::PromptTea, Policy::DynCfgOnly]
                [policy_pick];
            prop_assume!(policy != Policy::DynCfgOnly || cfg_enabled);
            let needs_codebook =
                cfg_enabled && matches!(policy, Policy::PromptTea | Policy::DynCfgOnly);
            let codebook = needs_codebook
                .then(|| DiffCodebook::new(vec![0.01; est.len()], 1).unwrap());
            let estimates = StepEstimates::new(est, codebook).unwrap();
            let config = PolicyConfig { policy, delta_main: delta, delta_cfg: 0.02, cfg_enabled };
            let schedule = simulate(&config, &estimates).unwrap();

            prop_assert_eq!(schedule.main_decisions()[0], MainDecision::Compute);
            if let Some(cfg) = schedule.cfg_decisions() {
                prop_assert_eq!(cfg[0], CfgDecision::ComputeBoth);
            }
            prop_assert!(schedule.speedup() >= 1.0);
            prop_assert!(schedule.speedup() <= schedule.baseline_passes() as f64);
            let all_full = match schedule.cfg_decisions() {
                Some(cfg) => cfg.iter().all(|d| *d == CfgDecision::ComputeBoth),
                None => schedule
                    .main_decisions()
                    .iter()
                    .all(|d| *d == MainDecision::Compute),
            };
            prop_assert_eq!(schedule.speedup() == 1.0, all_full);
        }
    }
}

mod pca_props {
    use super::*;

    proptest! {
        #[test]
        fn cosine_is_invariant_under_positive_scaling(
            pair in vec((-2.0..2.0f64, -2.0..2.0f64), 1..10),
            alpha in pow2_factor(),
            scale_first in any::<bool>(),
        ) {
            let a: Vec<f64> = pair.iter().map(|(x, _)| x + 3.0).collect();
            let b: Vec<f64> = pair.iter().map(|(_, y)| y + 3.0).collect();
            let (sa, sb): (Vec<f64>, Vec<f64>) = if scale_first {
                (a.iter().map(|x| alpha * x).collect(), b.clone())
            } else {
                (a.clone(), b.iter().map(|y| alpha * y).collect())
            };
            prop_assert_eq!(
                cosine_similarity(&sa, &sb).unwrap(),
                cosine_similarity(&a, &b).unwrap()
            );
        }

        #[test]
        fn sigmoid_is_symmetric_about_the_midpoint(
            r in 0.0..1.0f64,
            k in 0.1..200.0f64,
        ) {
            let forward = sigmoid_stretch(r, k).unwrap();
            let mirrored = sigmoid_stretch(1.0 - r, k).unwrap();
            prop_assert!((forward + mirrored - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn complexity_pipeline_is_monotone_in_the_complex_similarity(
            sim_low in 0.0..1.0f64,
            bump in 0.0..1.0f64,
            sim_s in 0.0..1.0f64,
            k in 0.1..200.0f64,
        ) {
            let sim_high = (sim_low + bump).min(1.0);
            let r_low = complexity_coefficient(sim_low, sim_s, 1e-6).unwrap();
            let r_high = complexity_coefficient(sim_high, sim_s, 1e-6).unwrap();
            prop_assert!(r_high >= r_low);
            let s_low = sigmoid_stretch(r_low, k).unwrap();
            let s_high = sigmoid_stretch(r_high, k).unwrap();
            prop_assert!(s_high >= s_low);
            let config = PcaConfig::new(
                k, 0.1, 0.23, 1e-6, ThresholdOrientation::ComplexLow,
            ).unwrap();
            let delta_low = fuse_threshold(s_low, &config).unwrap();
            let delta_high = fuse_threshold(s_high, &config).unwrap();
            prop_assert!(delta_high <= delta_low);
        }

        #[test]
        fn fused_threshold_stays_within_bounds(
            s in 0.0..=1.0f64,
            delta_min in 0.01..0.5f64,
            spread in 0.0..0.5f64,
            k in 0.1..200.0f64,
            complex_low in any::<bool>(),
        ) {
            let orientation = if complex_low {
                ThresholdOrientation::ComplexLow
            } else {
                ThresholdOrientation::ComplexHigh
            };
            let delta_max = delta_min + spread;
            let config =
                PcaConfig::new(k, delta_min, delta_max, 1e-6, orientation).unwrap();
            let delta = fuse_threshold(s, &config).unwrap();
            prop_assert!(delta >= delta_min && delta <= delta_max);
        }
    }
}

mod silhouette_props {
    use super::*;

    /// Straightforward reference implementation built around an explicit
    /// distance matrix, kept structurally different from the library's.
    fn silhouette_reference(vectors: &[Vec<f64>], labels: &[usize]) -> f64 {
        let n = vectors.len();
        let mut dist = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                dist[i][j] = vectors[i]
                    .iter()
                    .zip(&vectors[j])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
            }
        }
        let mut clusters: Vec<usize> = labels.to_vec();
        clusters.sort_unstable();
        clusters.dedup();
        let mut total = 0.0;
        for i in 0..n {
            let same: Vec<usize> =
                (0..n).filter(|&j| j != i && labels[j] == labels[i]).collect();
            if same.is_empty() {
                continue;
            }
            let a = same.iter().map(|&j| dist[i][j]).sum::<f64>() / same.len() as f64;
            let mut b = f64::INFINITY;
            for &cluster in &clusters {
                if cluster == labels[i] {
                    continue;
                }
                let members: Vec<usize> =
                    (0..n).filter(|&j| labels[j] == cluster).collect();
                b = b.min(
                    members.iter().map(|&j| dist[i][j]).sum::<f64>()
                        / members.len() as f64,
                );
            }
            let denom = a.max(b);
            if denom > 0.0 {
                total += (b - a) / denom;
            }
        }
        total / n as f64
    }

    proptest! {
        #[test]
        fn matches_the_reference_implementation(
            points in vec((vec(-5.0..5.0f64, 3), 0usize..3), 3..30),
        ) {
            let vectors: Vec<Vec<f64>> = points.iter().map(|(v, _)| v.clone()).collect();
            let labels: Vec<usize> = points.iter().map(|(_, l)| *l).collect();
            let mut distinct = labels.clone();
            distinct.sort_unstable();
            distinct.dedup();
            prop_assume!(distinct.len() >= 2);
            let got = silhouette(&vectors, &labels).unwrap();
            let want = silhouette_reference(&vectors, &labels);
            prop_assert!((got - want).abs() <= 1e-9, "{got} vs {want}");
            prop_assert!((-1.0..=1.0).contains(&got));
        }
    }
}

mod dft_props {
    use super::*;
    use num_complex::Complex64;

    /// Trigonometric re-derivation accumulating real and imaginary parts
    /// separately; the angle arithmetic intentionally differs from the
    /// implementation's.
    fn dft_reference(signal: &[f64]) -> Vec<Complex64> {
        let n = signal.len() as f64;
        (0..signal.len())
            .map(|k| {
                let mut re = 0.0;
                let mut im = 0.0;
                for (j, &x) in signal.iter().enumerate() {
                    let angle =
                        -2.0 * std::f64::consts::PI * (j as f64) * (k as f64) / n;
                    re += x * angle.cos();
                    im += x * angle.sin();
                }
                Complex64::new(re, im)
            })
            .collect()
    }

    fn signal_strategy() -> impl Strategy<Value = Vec<f64>> {
        prop_oneof![Just(4usize), Just(8), Just(16), Just(64)]
            .prop_flat_map(|n| vec(-2.0..2.0f64, n..=n))
    }

    proptest! {
        #[test]
        fn dft_matches_the_trigonometric_reference(signal in signal_strategy()) {
            let got = dft(&signal);
            let want = dft_reference(&signal);
            for (g, w) in got.iter().zip(&want) {
                prop_assert!((g - w).norm() <= 1e-9, "{g} vs {w}");
            }
        }

        #[test]
        fn unit_weights_reconstruct_the_unconditional_signal(
            pair in signal_strategy().prop_flat_map(|c| {
                let n = c.len();
                (Just(c), vec(-2.0..2.0f64, n..=n))
            }),
            cutoff in 0.05..0.95f64,
            t in 0usize..50,
        ) {
            let (cond, uncond) = pair;
            let (lf, hf) = cfg_delta(&cond, &uncond, cutoff).unwrap();
            let weights = FreqWeights::new(1.0, 25).unwrap();
            let rebuilt = reconstruct_uncond(&cond, &lf, &hf, &weights, t).unwrap();
            for (got, want) in rebuilt.iter().zip(&uncond) {
                prop_assert!((got - want).abs() <= 1e-9, "{got} vs {want}");
            }
        }

        #[test]
        fn split_bands_are_complementary(
            signal in signal_strategy(),
            cutoff in 0.05..0.95f64,
        ) {
            let split = dft_split(&signal, cutoff).unwrap();
            let full = dft(&signal);
            for (k, bin) in full.iter().enumerate() {
                let (low, high) = (split.low()[k], split.high()[k]);
                prop_assert!(low.norm() == 0.0 || high.norm() == 0.0);
                prop_assert_eq!(low + high, *bin);
            }
        }

        #[test]
        fn spectrum_energy_obeys_parseval(signal in signal_strategy()) {
            let spectrum = dft(&signal);
            let signal_energy: f64 = signal.iter().map(|x| x * x).sum();
            let spectrum_energy: f64 =
                spectrum.iter().map(|c| c.norm_sqr()).sum::<f64>() / signal.len() as f64;
            prop_assert!(
                (signal_energy - spectrum_energy).abs()
                    <= 1e-9 * signal_energy.max(1.0)
            );
        }
    }
}
