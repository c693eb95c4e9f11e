// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

use ionbench_core::estimator::*;
use ionbench_core::rb::{
    geometric_lengths, PooledCounts, RbDataset, RbMetadata, RbMode, SequenceCounts,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

const A_TRUE: f64 = 0.4989;
const EPS_TRUE: f64 = 1.5e-7;

fn synthetic(lengths: &[u64], shots: u64, a: f64, eps: f64, seed: u64) -> Vec<PooledCounts> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    lengths
        .iter()
        .map(|&length| {
            let p_err = 1.0 - survival_model(length, a, eps);
            let errors = Binomial::new(shots, p_err).unwrap().sample(&mut rng);
            PooledCounts {
                length,
                errors,
                shots,
            }
        })
        .collect()
}

fn paper_scale(seed: u64) -> Vec<PooledCounts> {
    synthetic(&geometric_lengths(5, 30_000), 3000, A_TRUE, EPS_TRUE, seed)
}

#[test]
fn survival_examples() {
    for l in [0, 1, 100, 30_000] {
        assert!((survival_model(l, 0.3, 0.0) - 0.8).abs() < 1e-15);
        if l > 0 {
            assert!((survival_model(l, 0.3, 0.5) - 0.5).abs() < 1e-15);
        }
    }
    let p = survival_model(30_000, A_TRUE, EPS_TRUE);
    assert!((p - 0.9944).abs() < 5e-5, "{p}");
}

#[test]
fn zero_errors_hit_the_boundary() {
    let data: Vec<PooledCounts> = [1, 10, 100]
        .iter()
        .map(|&length| PooledCounts {
            length,
            errors: 0,
            shots: 500,
        })
        .collect();
    let fit = mle_fit_pooled(&data).unwrap();
    assert_eq!(fit.epsilon, 0.0);
    assert!(fit.flags.boundary);
    assert!((fit.amplitude_a - 0.5).abs() < 1e-12);
}

#[test]
fn flat_half_survival_is_unidentifiable() {
    let data: Vec<PooledCounts> = [1, 10, 100, 1000]
        .iter()
        .map(|&length| PooledCounts {
            length,
            errors: 1500,
            shots: 3000,
        })
        .collect();
    let fit = mle_fit_pooled(&data).unwrap();
    assert!(fit.flags.unidentifiable, "{fit:?}");
}

#[test]
fn needs_two_lengths() {
    let data = [
        PooledCounts {
            length: 5,
            errors: 1,
            shots: 100,
        },
        PooledCounts {
            length: 9,
            errors: 0,
            shots: 0,
        },
    ];
    assert!(mle_fit_pooled(&data).is_err());
}

#[test]
fn bootstrap_rejects_zero_resamples() {
    let data = paper_scale(1);
    let fit = mle_fit_pooled(&data).unwrap();
    assert!(bootstrap_pooled(&data, &fit, 0, 1).is_err());
}

#[test]
fn exact_curve_is_recovered() {
    let data: Vec<PooledCounts> = [1u64, 100, 1000, 10_000]
        .iter()
        .map(|&length| {
            let shots = 1_000_000_000u64;
            let errors = ((1.0 - survival_model(length, 0.45, 2e-5)) * shots as f64).round() as u64;
            PooledCounts {
                length,
                errors,
                shots,
            }
        })
        .collect();
    let fit = mle_fit_pooled(&data).unwrap();
    assert!((fit.epsilon / 2e-5 - 1.0).abs() < 1e-4, "{fit:?}");
    assert!((fit.amplitude_a - 0.45).abs() < 1e-6);
    assert!(fit.flags.converged && !fit.flags.boundary && !fit.flags.unidentifiable);

    let pts: Vec<(u64, f64)> = [1u64, 10, 100, 1000, 10_000]
        .iter()
        .map(|&l| (l, survival_model(l, 0.47, 3e-6)))
        .collect();
    let (a, eps) = fit_survival_curve(&pts).unwrap();
    assert!(
        (a - 0.47).abs() < 1e-9 && (eps / 3e-6 - 1.0).abs() < 1e-6,
        "{a} {eps}"
    );
}

#[test]
fn fit_beats_truth_likelihood() {
    for seed in 0..50 {
        let data = paper_scale(seed);
        let fit = mle_fit_pooled(&data).unwrap();
        let truth = log_likelihood(&data, A_TRUE, EPS_TRUE);
        assert!(
            fit.log_likelihood >= truth - 1e-9,
            "seed {seed}: {} < {truth}",
            fit.log_likelihood
        );
    }
}

#[test]
fn estimator_is_unbiased() {
    let n = 200;
    let eps: Vec<f64> = (0..n)
        .map(|s| mle_fit_pooled(&paper_scale(1000 + s)).unwrap().epsilon)
        .collect();
    let mean = eps.iter().sum::<f64>() / n as f64;
    let sd = (eps.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt();
    let se = sd / (n as f64).sqrt();
    assert!((mean - EPS_TRUE).abs() < 2.0 * se, "mean {mean} sd {sd}");
}

#[test]
fn bootstrap_coverage_and_scale() {
    let reps = 100;
    let mut covered = 0;
    let mut stderrs = Vec::new();
    for seed in 0..reps {
        let data = paper_scale(5000 + seed);
        let fit = fit_with_bootstrap(&data, 200, seed).unwrap();
        let se = fit.epsilon_stderr.unwrap();
        stderrs.push(se);
        if (fit.epsilon - EPS_TRUE).abs() <= 2.0 * se {
            covered += 1;
        }
    }
    assert!(covered >= 90, "coverage {covered}/{reps}");
    let mean_se = stderrs.iter().sum::<f64>() / reps as f64;
    assert!((mean_se / 0.4e-7 - 1.0).abs() < 0.5, "stderr {mean_se}");
}

#[test]
fn doubling_shots_shrinks_stderr() {
    let lengths = geometric_lengths(5, 30_000);
    let fit_at = |shots: u64| {
        let data = synthetic(&lengths, shots, A_TRUE, EPS_TRUE, 3);
        let mut fit = mle_fit_pooled(&data).unwrap();
        // Evaluate both at the truth so only the shot count differs.
        fit.epsilon = EPS_TRUE;
        fit.amplitude_a = A_TRUE;
        bootstrap_pooled(&data, &fit, 1000, 11)
            .unwrap()
            .epsilon_stderr
    };
    let ratio = fit_at(3000) / fit_at(6000);
    assert!((ratio / 2f64.sqrt() - 1.0).abs() < 0.2, "{ratio}");
}

#[test]
fn dataset_fit_matches_pooled_fit() {
    let records: Vec<SequenceCounts> = (0..20u64)
        .map(|i| SequenceCounts {
            length: [1, 50, 500, 5000][i as usize % 4],
            seq_id: i,
            errors: i % 7,
            shots: 100,
        })
        .collect();
    let ds = RbDataset::new(
        RbMetadata {
            mode: RbMode::Gate,
            gate_time: 13e-6,
            seed: 0,
            irmb_delay: 0.0,
        },
        records,
    )
    .unwrap();
    assert_eq!(mle_fit(&ds).unwrap(), mle_fit_pooled(&ds.pooled()).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fit_ignores_sequence_order(seed in 0u64..1000, rot in 0usize..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut records: Vec<SequenceCounts> = (0..40u64)
            .map(|i| {
                let length = [1u64, 30, 900, 9000][i as usize % 4];
                let p = 1.0 - survival_model(length, 0.49, 1e-5);
                SequenceCounts { length, seq_id: i, errors: Binomial::new(100, p).unwrap().sample(&mut rng), shots: 100 }
            })
            .collect();
        let meta = RbMetadata { mode: RbMode::Gate, gate_time: 13e-6, seed, irmb_delay: 0.0 };
        let a = mle_fit(&RbDataset::new(meta.clone(), records.clone()).unwrap()).unwrap();
        records.rotate_left(rot);
        records.reverse();
        let b = mle_fit(&RbDataset::new(meta, records).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn fitted_parameters_stay_in_range(seed in 0u64..10_000, eps in 0.0f64..1e-3) {
        let data = synthetic(&[1, 10, 100, 1000], 200, 0.45, eps, seed);
        let fit = mle_fit_pooled(&data).unwrap();
        prop_assert!((0.0..=0.5).contains(&fit.epsilon));
        prop_assert!((0.0..=0.5).contains(&fit.amplitude_a));
    }
}
