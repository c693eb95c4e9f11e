// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

use ionbench_core::estimator::{bootstrap_pooled, fit_with_bootstrap, mle_fit, mle_fit_pooled};
use ionbench_core::noise::{AmplitudeNoiseModel, IdleRates, NoiseConfig};
use ionbench_core::rb::*;
use ionbench_core::{CliffordGroup, GateSequence};

fn config(lengths: Vec<u64>, seqs: u32, shots: u32, gate_time: f64) -> RbConfig {
    RbConfig {
        lengths,
        seqs_per_length: seqs,
        shots_per_seq: shots,
        ..RbConfig::new(gate_time)
    }
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn sd(xs: &[f64]) -> f64 {
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

#[test]
fn default_plan_shape() {
    let cfg = RbConfig::new(13e-6);
    assert_eq!(cfg.lengths, vec![1, 13, 173, 2280, 30_000]);
    assert_eq!((cfg.seqs_per_length, cfg.shots_per_seq), (30, 100));
    let plan = generate_plan(&cfg).unwrap();
    assert_eq!(plan.sequences.len(), 150);
}

#[test]
fn length_one_sequences_invert() {
    let group = CliffordGroup::shared();
    let plan = generate_plan(&config(vec![1], 50, 1, 13e-6)).unwrap();
    for p in &plan.sequences {
        let s: &GateSequence = &p.sequence;
        assert_eq!(s.cliffords.len(), 1);
        assert_eq!(s.recovery, group.inverse(s.cliffords[0]));
    }
}

#[test]
fn plan_is_deterministic() {
    let cfg = RbConfig {
        master_seed: 77,
        ..config(vec![1, 20, 300], 5, 10, 13e-6)
    };
    let a = serde_json::to_string(&generate_plan(&cfg).unwrap()).unwrap();
    let b = serde_json::to_string(&generate_plan(&cfg).unwrap()).unwrap();
    assert_eq!(a, b);
    let c = serde_json::to_string(
        &generate_plan(&RbConfig {
            master_seed: 78,
            ..cfg
        })
        .unwrap(),
    )
    .unwrap();
    assert_ne!(a, c);
}

#[test]
fn cliffords_drawn_uniformly() {
    let plan = generate_plan(&config(vec![800], 30, 1, 13e-6)).unwrap();
    let mut counts = [0u32; 24];
    let (mut prepared1, mut shelve_expected) = (0, 0);
    for p in &plan.sequences {
        for &c in &p.sequence.cliffords {
            counts[c as usize] += 1;
        }
        prepared1 += p.sequence.prepared_state as u32;
        shelve_expected +=
            (p.sequence.shelve_choice == ionbench_core::ShelveChoice::Expected) as u32;
    }
    assert!(
        counts.iter().all(|&c| (900..=1100).contains(&c)),
        "{counts:?}"
    );
    assert!(prepared1 > 0 && prepared1 < 30 && shelve_expected > 0 && shelve_expected < 30);
}

#[test]
fn invalid_plans_rejected() {
    assert!(generate_plan(&config(vec![10, 10], 1, 1, 13e-6)).is_err());
    assert!(generate_plan(&config(vec![10], 0, 1, 13e-6)).is_err());
    assert!(generate_plan(&config(vec![10], 1, 0, 13e-6)).is_err());
    assert!(generate_plan(&config(vec![], 1, 1, 13e-6)).is_err());
}

#[test]
fn noiseless_runs_have_no_errors() {
    let plan = generate_plan(&config(vec![1, 10, 100], 6, 50, 13e-6)).unwrap();
    for tier in [SimTier::Fast, SimTier::Full] {
        let ds = run_rb(&plan, &NoiseConfig::noiseless(), tier).unwrap();
        assert!(ds.records.iter().all(|r| r.errors == 0), "{tier:?}");
        let surv = survival_probabilities(&plan, &NoiseConfig::noiseless(), RunOptions::tier(tier))
            .unwrap();
        assert!(surv.iter().all(|&p| (p - 1.0).abs() < 1e-12), "{tier:?}");
    }
    let idle_plan = generate_plan(&RbConfig {
        mode: RbMode::Idle,
        ..config(vec![1, 10, 100], 6, 50, 13e-6)
    })
    .unwrap();
    assert!(run_idle_rb(&idle_plan, &IdleRates::zero())
        .unwrap()
        .records
        .iter()
        .all(|r| r.errors == 0));
}

#[test]
fn depolarizing_round_trip() {
    let plan = generate_plan(&RbConfig {
        master_seed: 2024,
        ..RbConfig::new(13e-6)
    })
    .unwrap();
    let noise = NoiseConfig {
        spam: 1.1e-3,
        ..NoiseConfig::depolarizing(1.5e-7)
    };
    let ds = run_rb(&plan, &noise, SimTier::Fast).unwrap();
    let fit = fit_with_bootstrap(&ds.pooled(), 400, 1).unwrap();
    let se = fit.epsilon_stderr.unwrap();
    assert!((fit.epsilon - 1.5e-7).abs() < 2.0 * se, "{fit:?}");
    assert!((fit.amplitude_a - (0.5 - 1.1e-3)).abs() < 3e-3);
}

#[test]
fn fast_and_full_agree_on_amplitude_offset() {
    let plan = generate_plan(&config(vec![100], 8, 1, 13e-6)).unwrap();
    let noise = NoiseConfig {
        amplitude: AmplitudeNoiseModel {
            mu: vec![1e-3],
            sigma: vec![],
        },
        ..NoiseConfig::default()
    };
    let fast = survival_probabilities(&plan, &noise, RunOptions::tier(SimTier::Fast)).unwrap();
    let full = survival_probabilities(&plan, &noise, RunOptions::tier(SimTier::Full)).unwrap();
    for (f, g) in fast.iter().zip(&full) {
        assert!((f - g).abs() < 1e-4, "{f} {g}");
    }
    // The offset must actually matter for the comparison to mean anything.
    assert!(fast.iter().any(|&p| p < 1.0 - 1e-5));
}

#[test]
fn fast_and_full_agree_on_static_and_drifting_channels() {
    let plan = generate_plan(&config(vec![60], 6, 1, 13e-6)).unwrap();
    let cases = [
        NoiseConfig {
            detuning_hz: 150.0,
            zeeman_hz: 100.0,
            ..NoiseConfig::default()
        },
        NoiseConfig {
            amplitude: AmplitudeNoiseModel {
                mu: vec![-2e-3, 4.0],
                sigma: vec![],
            },
            ..NoiseConfig::default()
        },
    ];
    for noise in &cases {
        let fast = survival_probabilities(&plan, noise, RunOptions::tier(SimTier::Fast)).unwrap();
        let full = survival_probabilities(&plan, noise, RunOptions::tier(SimTier::Full)).unwrap();
        for (f, g) in fast.iter().zip(&full) {
            assert!((f - g).abs() < 1e-6, "{noise:?}: {f} {g}");
        }
    }
}

#[test]
fn fast_and_full_agree_on_stochastic_channels() {
    let noise = NoiseConfig {
        amplitude: AmplitudeNoiseModel::shot_to_shot(5e-3),
        t2: Some(0.02),
        ..NoiseConfig::default()
    };
    let plan = generate_plan(&config(vec![40], 16, 600, 13e-6)).unwrap();
    let fast = survival_probabilities(&plan, &noise, RunOptions::tier(SimTier::Fast)).unwrap();
    let full = survival_probabilities(&plan, &noise, RunOptions::tier(SimTier::Full)).unwrap();
    // Both tiers draw the same amplitudes per shot, so the paired difference
    // carries only the dephasing Monte-Carlo noise.
    let diff: Vec<f64> = fast.iter().zip(&full).map(|(f, g)| f - g).collect();
    let se = sd(&diff) / (diff.len() as f64).sqrt();
    let mf = mean(&fast);
    assert!(
        mean(&diff).abs() < 4.0 * se && se < 2e-4,
        "diff {} se {se}",
        mean(&diff)
    );
    assert!(mf < 0.999);
}

#[test]
fn counts_are_binomial() {
    let plan = generate_plan(&config(vec![200], 400, 100, 13e-6)).unwrap();
    let ds = run_rb(&plan, &NoiseConfig::depolarizing(1e-3), SimTier::Fast).unwrap();
    let errs: Vec<f64> = ds.records.iter().map(|r| r.errors as f64).collect();
    let p = mean(&errs) / 100.0;
    let var = sd(&errs).powi(2);
    let expect = 100.0 * p * (1.0 - p);
    let tol = 3.0 * expect * (2.0 / 399.0f64).sqrt();
    assert!((var - expect).abs() < tol, "var {var} expect {expect}");
}

#[test]
fn idle_rb_matches_rate_algebra() {
    let rates = IdleRates::short_delay();
    let mut eps = Vec::new();
    for gt in [4.4e-6, 13e-6, 35e-6] {
        let cfg = RbConfig {
            mode: RbMode::Idle,
            master_seed: 9,
            ..config(geometric_lengths(5, 30_000), 30, 20_000, gt)
        };
        let ds = run_idle_rb(&generate_plan(&cfg).unwrap(), &rates).unwrap();
        let pooled = ds.pooled();
        let fit = mle_fit_pooled(&pooled).unwrap();
        let se = bootstrap_pooled(&pooled, &fit, 200, 4)
            .unwrap()
            .epsilon_stderr;
        let expected = rates.rb_error_rate() * gt;
        assert!(
            (fit.epsilon - expected).abs() < 3.0 * se,
            "gt {gt}: {} vs {expected} (se {se})",
            fit.epsilon
        );
        eps.push((gt, fit.epsilon, se));
    }
    let at13 = eps[1].1;
    assert!((at13 - 0.62e-7).abs() < 0.07e-7, "{at13}");
}

#[test]
fn zero_delay_irmb_is_gate_rb() {
    let base = config(vec![1, 30, 300], 5, 200, 13e-6);
    let noise = NoiseConfig {
        amplitude: AmplitudeNoiseModel::shot_to_shot(1e-2),
        ..NoiseConfig::depolarizing(1e-4)
    };
    let gate = run_rb(&generate_plan(&base).unwrap(), &noise, SimTier::Fast).unwrap();
    let irmb_cfg = RbConfig {
        mode: RbMode::Irmb,
        ..base
    };
    let irmb = run_irmb(
        &generate_plan(&irmb_cfg).unwrap(),
        &noise,
        RunOptions::default(),
    )
    .unwrap();
    assert_eq!(gate.records, irmb.records);
}

#[test]
fn irmb_slope_recovers_t2() {
    let t2 = 69.0;
    let noise = NoiseConfig {
        t2: Some(t2),
        ..NoiseConfig::default()
    };
    let delays = [0.0, 0.5e-3, 1e-3, 2e-3];
    let mut pts = Vec::new();
    for &d in &delays {
        let cfg = RbConfig {
            mode: RbMode::Irmb,
            irmb_delay: d,
            master_seed: 3,
            ..config(geometric_lengths(5, 30_000), 30, 5000, 13e-6)
        };
        let ds = run_irmb(&generate_plan(&cfg).unwrap(), &noise, RunOptions::default()).unwrap();
        pts.push((d, mle_fit(&ds).unwrap().epsilon));
    }
    let mx = mean(&pts.iter().map(|p| p.0).collect::<Vec<_>>());
    let my = mean(&pts.iter().map(|p| p.1).collect::<Vec<_>>());
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    let ppc = CliffordGroup::shared().pulses_per_clifford();
    let fitted = t2_from_irmb_slope(slope, ppc).unwrap();
    assert!((fitted / t2 - 1.0).abs() < 0.1, "{fitted}");
}

#[test]
fn phase_compensation_matters() {
    let noise = NoiseConfig {
        zeeman_hz: 9.0,
        detuning_hz: 9.0,
        ..NoiseConfig::default()
    };
    let cfg = RbConfig {
        mode: RbMode::Irmb,
        irmb_delay: 100e-6,
        ..config(vec![1, 10, 100], 8, 1, 13e-6)
    };
    let plan = generate_plan(&cfg).unwrap();
    for tier in [SimTier::Fast, SimTier::Full] {
        let on = RunOptions {
            phase_compensation: true,
            ..RunOptions::tier(tier)
        };
        let off = RunOptions {
            phase_compensation: false,
            ..on
        };
        let err_on = 1.0 - mean(&survival_probabilities(&plan, &noise, on).unwrap());
        let err_off = 1.0 - mean(&survival_probabilities(&plan, &noise, off).unwrap());
        assert!(
            err_off > err_on && err_off > 1e-4,
            "{tier:?}: {err_on} {err_off}"
        );
    }
}

#[test]
fn dataset_serialisation_round_trips() {
    let plan = generate_plan(&config(vec![1, 10], 3, 20, 13e-6)).unwrap();
    let ds = run_rb(&plan, &NoiseConfig::depolarizing(1e-2), SimTier::Fast).unwrap();
    assert_eq!(RbDataset::from_json(&ds.to_json().unwrap()).unwrap(), ds);
    let mut buf = Vec::new();
    ds.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("length,seq_id,errors,shots"));
    assert_eq!(
        RbDataset::read_csv(text.as_bytes(), ds.metadata.clone()).unwrap(),
        ds
    );
}

#[test]
fn mode_mismatch_is_rejected() {
    let plan = generate_plan(&config(vec![1, 10], 2, 2, 13e-6)).unwrap();
    assert!(run_idle_rb(&plan, &IdleRates::zero()).is_err());
    assert!(run_irmb(&plan, &NoiseConfig::default(), RunOptions::default()).is_err());
}
