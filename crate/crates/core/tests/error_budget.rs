// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

use ionbench_core::budget::*;
use ionbench_core::calibration::{CalKind, CalRecord};
use ionbench_core::noise::{AmplitudeNoiseModel, IdleRates, MotionalModel, NoiseConfig};
use ionbench_core::sim::{spectator_sequence_error, SpectatorConfig};
use ionbench_core::PulseTiming;
use proptest::prelude::*;

mod common;
use common::{harmonic_peak_gate_time, harmonic_ratio, ppc, rb_epsilon};

#[test]
fn decoherence_row() {
    let e = err_decoherence(2.2, 5.9e-6, 69.0).unwrap();
    assert!((e - 6.27e-8).abs() < 0.01e-8, "{e:e}");
    assert!((e - 0.64e-7).abs() <= 0.07e-7);
    assert_eq!(err_decoherence(2.2, 5.9e-6, f64::INFINITY).unwrap(), 0.0);
    let double = err_decoherence(2.2, 11.8e-6, 69.0).unwrap();
    assert_eq!(double, 2.0 * e);
    assert!(err_decoherence(2.2, 5.9e-6, 0.0).is_err());
}

#[test]
fn harmonic_row_at_reference_settings() {
    let model = MotionalModel::default();
    let th = PulseTiming::from_gate_time(13e-6, ppc()).t_half_pi;
    let e = err_harmonic(&model, ppc(), th, 30_000.0 * 13e-6).unwrap();
    assert!(e > 1.3e-8 / 2.0 && e < 1.3e-8 * 2.0, "{e:e}");
    let no_coupling = MotionalModel {
        eta: 0.0,
        ..model
    };
    assert_eq!(err_harmonic(&no_coupling, ppc(), th, 0.39).unwrap(), 0.0);
}

#[test]
fn harmonic_average_matches_quadrature() {
    let model = MotionalModel::default();
    let (th, dur) = (5.9e-6, 0.39);
    let n = 20_000;
    let mean: f64 = (0..n)
        .map(|k| {
            let t = (k as f64 + 0.5) / n as f64 * dur;
            model.envelope_error(model.n_bar(t), th)
        })
        .sum::<f64>()
        / n as f64;
    let e = err_harmonic(&model, 1.0, th, dur).unwrap();
    assert!((e / mean - 1.0).abs() < 1e-9);
}

/// The closed form is an envelope over the oscillation of the per-pulse
/// error with `ω_m t_half_pi`. The simulated error peaks once per motional
/// period; its peak is compared with the envelope. The classical modulation
/// carries the symmetric-ordered occupation `n̄ + ½`.
#[test]
fn harmonic_envelope_vs_monte_carlo() {
    let peak = harmonic_peak_gate_time();
    for nbar in [1.0, 10.0, 100.0] {
        let r = harmonic_ratio(nbar, peak);
        println!("harmonic n̄={nbar}: simulated/envelope at peak = {r:.3}");
        assert!(r > 1.0 / 1.5 && r < 1.5, "n̄={nbar}: {r}");
    }
}

#[test]
fn amplitude_noise_row() {
    let e = err_amp_noise(2.2, 1.4e-4).unwrap();
    assert!((e - 2.156e-8).abs() < 0.001e-8, "{e:e}");
    assert!((e - 0.23e-7).abs() <= 0.02e-7);
    assert_eq!(err_amp_noise(2.2, 0.0).unwrap(), 0.0);
    assert!(err_amp_noise(2.2, -1.0).is_err());
}

#[test]
fn amplitude_noise_vs_monte_carlo() {
    for sigma in [3e-5, 1.4e-4, 1e-3] {
        let noise = NoiseConfig {
            amplitude: AmplitudeNoiseModel::shot_to_shot(sigma),
            ..NoiseConfig::default()
        };
        let mc = rb_epsilon(&noise, 13e-6, &[1, 300, 1000], 200, 10);
        let r = mc / err_amp_noise(ppc(), sigma).unwrap();
        println!("amplitude noise σ={sigma:e}: simulated/formula = {r:.3}");
        assert!((r - 1.0).abs() < 0.2, "σ={sigma}: {r}");
    }
}

/// Calibration log for a gain drifting at `rate` per second with a
/// calibration every `interval` over `span` seconds.
fn linear_drift_log(rate: f64, interval: f64, span: f64) -> Vec<CalRecord> {
    let n = (span / interval).round() as usize;
    (0..=n)
        .map(|k| CalRecord {
            kind: CalKind::Amplitude,
            time: k as f64 * interval,
            n: 100,
            p0: 0.5,
            estimate: if k == 0 { 0.0 } else { rate * interval },
            correction: if k == 0 { 0.0 } else { rate * interval },
        })
        .collect()
}

#[test]
fn amplitude_drift_row() {
    let constant = linear_drift_log(0.0, 60.0, 1800.0);
    assert_eq!(err_amp_drift(&constant, ppc()).unwrap(), 0.0);

    // Offset ramps from 0 to rΔ in each interval: mean square (rΔ)²/3.
    let (rate, interval) = (2e-6, 60.0);
    let e = err_amp_drift(&linear_drift_log(rate, interval, 1800.0), ppc()).unwrap();
    let expected = ppc() * 0.5 * (rate * interval).powi(2) / 3.0;
    assert!((e / expected - 1.0).abs() < 1e-12);

    let halved = err_amp_drift(&linear_drift_log(rate, interval / 2.0, 1800.0), ppc()).unwrap();
    assert!((e / halved - 4.0).abs() < 0.05, "{}", e / halved);

    assert!(err_amp_drift(&constant[..1], ppc()).is_err());
}

#[test]
fn amplitude_drift_at_calibrated_level() {
    // A drift giving ~1.4e-7 uncalibrated over 30 minutes, corrected every
    // minute, leaves an error of order 1e-8.
    let span = 1800.0;
    let rate = (3.0 * 1.4e-7 / (0.5 * ppc())).sqrt() / span;
    let uncal = err_amp_drift(&linear_drift_log(rate, span, span), ppc()).unwrap();
    assert!((uncal / 1.4e-7 - 1.0).abs() < 1e-9);
    let cal = err_amp_drift(&linear_drift_log(rate, 60.0, span), ppc()).unwrap();
    assert!(cal < 1.5e-8 && cal > 0.0, "{cal:e}");
}

#[test]
fn zeeman_row() {
    assert_eq!(err_zeeman(ppc(), 0.0, 5.9e-6).unwrap(), 0.0);
    let th = PulseTiming::from_gate_time(13e-6, ppc()).t_half_pi;
    let e = err_zeeman(ppc(), 9.0, th).unwrap();
    assert!(e > 6.0e-8 / 3.0 && e < 6.0e-8 * 3.0, "{e:e}");
    assert!((err_zeeman(ppc(), 9.0, 2.0 * th).unwrap() / e - 4.0).abs() < 1e-12);
}

#[test]
fn zeeman_row_vs_monte_carlo() {
    let th = PulseTiming::from_gate_time(13e-6, ppc()).t_half_pi;
    for dz in [1.0, 3.0, 9.0, 20.0] {
        let noise = NoiseConfig {
            zeeman_hz: dz,
            ..NoiseConfig::default()
        };
        let mc = rb_epsilon(&noise, 13e-6, &[1, 300, 1000], 30, 1);
        let r = mc / err_zeeman(ppc(), dz, th).unwrap();
        println!("zeeman Δ={dz} Hz: simulated/formula = {r:.3}");
        assert!((r - 1.0).abs() < 0.3, "Δ={dz}: {r}");
    }
}

#[test]
fn awg_row() {
    use ionbench_core::noise::QuantizerConfig;
    let full = QuantizerConfig {
        bits: 15,
        amp_scale: 1.0,
    };
    let e = err_awg(2.2, &full).unwrap();
    let direct = 2.2 / 6.0 * (1.0 / 65536f64).powi(2);
    assert!((e / direct - 1.0).abs() < 1e-12);
    assert!((e - 8.5e-11).abs() < 0.1e-11);
    let fine = QuantizerConfig {
        bits: 52,
        amp_scale: 1.0,
    };
    assert!(err_awg(2.2, &fine).unwrap() < 1e-30);

    // Inverting the row for 0.015e-7 gives the default scale.
    let a = (2.2f64 / 6.0 / 1.5e-9).sqrt() / 65536.0;
    assert!((a - 0.24).abs() < 0.01, "{a}");
    let derived = err_awg(2.2, &QuantizerConfig::default()).unwrap();
    assert!((derived - 1.5e-9).abs() < 0.1e-9, "{derived:e}");
}

#[test]
fn leakage_row() {
    assert_eq!(leakage_rb_error(&IdleRates::zero(), 13e-6).unwrap(), 0.0);
    let e = leakage_rb_error(&IdleRates::short_delay(), 13e-6).unwrap();
    assert!((e - 0.62e-7).abs() < 0.07e-7, "{e:e}");
    let by_hand = (0.5 * 1.6e-2 + 0.25 * (1.3e-2 + 1.2e-2)) * 13e-6;
    let long = leakage_rb_error(&IdleRates::long_delay(), 13e-6).unwrap();
    assert!((long / by_hand - 1.0).abs() < 1e-12);
    let twice = leakage_rb_error(&IdleRates::short_delay(), 26e-6).unwrap();
    assert!((twice / e - 2.0).abs() < 1e-12);
}

#[test]
fn bit_flips_before_and_after_attenuation() {
    let before = IdleRates::zero().with_flip(IdleRates::FLIP_BEFORE_ATTENUATOR);
    let e_before = leakage_rb_error(&before, 13e-6).unwrap();
    assert!((e_before - 1.9e-7).abs() < 0.5e-7, "{e_before:e}");
    let after = IdleRates::zero().with_flip(attenuated_flip_rate(
        IdleRates::FLIP_BEFORE_ATTENUATOR,
        POST_AMPLIFIER_ATTENUATION_DB,
    ));
    let e_after = leakage_rb_error(&after, 13e-6).unwrap();
    assert!(e_after < 5e-9, "{e_after:e}");
}

fn diagnostic_delays() -> Vec<f64> {
    (0..=15).map(|k| k as f64).collect()
}

#[test]
fn idle_rates_recovered_from_four_schemes() {
    let truth = IdleRates::long_delay().with_flip(2e-3);
    let mut misses = 0;
    for seed in 0..10 {
        let data = synthesize_idle_measurements(&truth, &diagnostic_delays(), 2000, seed).unwrap();
        let est = estimate_idle_rates(&data).unwrap();
        for (e, t) in [
            (est.eps_b, truth.eps_b),
            (est.eps_d_plus_leak0, truth.eps_d_plus_leak0),
            (est.eps_d_plus_leak1, truth.eps_d_plus_leak1),
            (est.p_flip, truth.p_flip),
        ] {
            if !e.covers(t, 2.0) {
                misses += 1;
            }
        }
    }
    // 40 two-sigma checks; about two misses are expected.
    assert!(misses <= 6, "{misses} misses");
}

#[test]
fn paper_scale_rates_bound_bit_flips() {
    let data =
        synthesize_idle_measurements(&IdleRates::long_delay(), &diagnostic_delays(), 2000, 7)
            .unwrap();
    let est = estimate_idle_rates(&data).unwrap();
    assert!(est.eps_b.covers(1.6e-2, 2.0), "{:?}", est.eps_b);
    assert!(est.p_flip.upper(2.0) <= 3.6e-3, "{:?}", est.p_flip);
    assert!(!est.flip_inconsistent);
}

#[test]
fn zero_rates_give_zero_estimates() {
    let data =
        synthesize_idle_measurements(&IdleRates::zero(), &diagnostic_delays(), 500, 1).unwrap();
    let est = estimate_idle_rates(&data).unwrap();
    for e in [est.eps_b, est.eps_d_plus_leak0, est.eps_d_plus_leak1, est.p_flip] {
        assert!(e.covers(0.0, 3.0), "{e:?}");
    }
    assert!(est.rates().rb_error_rate() < 1e-3);
}

#[test]
fn inconsistent_flip_estimators_are_flagged() {
    let mut data =
        synthesize_idle_measurements(&IdleRates::long_delay(), &diagnostic_delays(), 2000, 3)
            .unwrap();
    // Inflate scheme c alone: c − a then sees flips that b − d does not.
    for m in data.iter_mut().filter(|m| m.scheme == Scheme::C) {
        m.errors = (m.errors as f64 + 0.05 * m.delay * m.shots as f64) as u64;
    }
    assert!(estimate_idle_rates(&data).unwrap().flip_inconsistent);
}

#[test]
fn idle_estimation_rejects_incomplete_data() {
    let data =
        synthesize_idle_measurements(&IdleRates::long_delay(), &diagnostic_delays(), 100, 2)
            .unwrap();
    let partial: Vec<_> = data.into_iter().filter(|m| m.scheme != Scheme::D).collect();
    assert!(estimate_idle_rates(&partial).is_err());
}

#[test]
fn reference_budget_reproduces_table() {
    let b = budget_table(&BudgetInput::reference()).unwrap();
    let sum: f64 = b.rows.iter().map(|r| r.error).sum();
    assert_eq!(b.total, sum);
    assert!((b.total - 1.7e-7).abs() <= 0.1e-7, "{:e}", b.total);
    assert!((b.error(Mechanism::Decoherence) - 0.64e-7).abs() <= 0.07e-7);
    assert!((b.error(Mechanism::Leakage) - 0.62e-7).abs() <= 0.07e-7);
    assert!((b.error(Mechanism::AmplitudeNoise) - 0.23e-7).abs() <= 0.02e-7);
    assert!((b.error(Mechanism::AmplitudeDrift) - 0.09e-7).abs() <= 0.07e-7);
    assert!((b.error(Mechanism::ZeemanResidual) - 0.03e-7).abs() <= 0.02e-7);
    assert!((b.error(Mechanism::AwgResolution) - 0.015e-7).abs() <= 0.001e-7);
    let harm = b.error(Mechanism::HarmonicMotion);
    assert!(harm > 0.13e-7 / 2.0 && harm < 0.13e-7 * 2.0);
    assert!(b.error(Mechanism::Spectator) <= 1e-9);
    assert!(b.error(Mechanism::Ramping) <= 1e-9);
    assert!(b.error(Mechanism::NonRwa) <= 1e-10);
    assert!(b.rows.iter().chain(&b.bounds).all(|r| r.error >= 0.0));
    assert!(b.total_uncertainty > 0.0 && b.total_uncertainty < 0.2e-7);
}

#[test]
fn zeroed_budget_is_zero() {
    let b = budget_table(&BudgetInput::zeroed(13e-6)).unwrap();
    assert!(b.total < 1e-25, "{:e}", b.total);
    assert!(b.total_upper() < 1e-25);
}

#[test]
fn budget_from_calibration_log() {
    let mut input = BudgetInput::reference();
    let log = linear_drift_log(2e-6, 60.0, 1800.0);
    input.amp_drift = AmpDrift::Log(log.clone());
    let b = budget_table(&input).unwrap();
    assert_eq!(
        b.error(Mechanism::AmplitudeDrift),
        err_amp_drift(&log, ppc()).unwrap()
    );
}

#[test]
fn rows_scale_with_gate_time() {
    let base = BudgetInput::reference();
    let b1 = budget_table(&base).unwrap();
    let b2 = budget_table(&base.at_gate_time(26e-6)).unwrap();
    let ratio = |m| b2.error(m) / b1.error(m);
    assert!((ratio(Mechanism::Decoherence) - 2.0).abs() < 1e-12);
    assert!((ratio(Mechanism::Leakage) - 2.0).abs() < 1e-12);
    assert!((ratio(Mechanism::AmplitudeNoise) - 1.0).abs() < 1e-12);
    assert!((ratio(Mechanism::ZeemanResidual) - 4.0).abs() < 1e-12);
    assert!((ratio(Mechanism::AwgResolution) - 1.0).abs() < 1e-12);
    // Envelope ∝ (n̄_mid + ½) / t_half_pi², and the sequence doubles in length.
    let m = base.motional;
    let d1 = 30_000.0 * 13e-6;
    let expected = (m.n_bar(d1) + 0.5) / (m.n_bar(0.5 * d1) + 0.5) / 4.0;
    assert!((ratio(Mechanism::HarmonicMotion) / expected - 1.0).abs() < 1e-12);
}

#[test]
fn curve_over_gate_times() {
    let grid = gate_time_grid(4.4e-6, 35e-6, 12).unwrap();
    assert!((grid[0] - 4.4e-6).abs() < 1e-18 && (grid[11] - 35e-6).abs() < 1e-17);
    let curve = budget_curve(&BudgetInput::reference(), &grid).unwrap();
    assert!(curve[0].total <= 2.9e-7);
    let last = curve.last().unwrap();
    let ab = last.error(Mechanism::Decoherence) + last.error(Mechanism::Leakage);
    assert!(ab > 0.5 * last.total);
    for r in &last.rows {
        if !matches!(r.mechanism, Mechanism::Decoherence | Mechanism::Leakage) {
            assert!(r.error < last.error(Mechanism::Decoherence));
        }
    }
    // Above 13 µs the linear mechanisms dominate and the total rises.
    let long: Vec<&ErrorBudget> = curve.iter().filter(|b| b.gate_time >= 13e-6).collect();
    assert!(long.windows(2).all(|w| w[1].total > w[0].total));

    let mut buf = Vec::new();
    write_curve_csv(&curve, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("gate_time,mechanism,error\n"));
    assert_eq!(text.lines().count(), 1 + 12 * 8);
    assert_eq!(curve_points(&curve).len(), 12 * 7);
}

#[test]
fn budget_serialisation() {
    let b = budget_table(&BudgetInput::reference()).unwrap();
    let mut buf = Vec::new();
    b.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("mechanism,error,uncertainty,kind\n"));
    assert_eq!(text.lines().count(), 1 + 10 + 1);
    let json = serde_json::to_string(&b).unwrap();
    let back: ErrorBudget = serde_json::from_str(&json).unwrap();
    assert_eq!(back, b);

    let input_json = serde_json::to_string(&BudgetInput::reference()).unwrap();
    let input: BudgetInput = serde_json::from_str(&input_json).unwrap();
    assert_eq!(input, BudgetInput::reference());
    let bad = input_json.replacen("{", "{\"bogus\":1,", 1);
    assert!(serde_json::from_str::<BudgetInput>(&bad).is_err());
}

#[test]
fn simulated_bounds_cover_pulse_simulation() {
    let timing = PulseTiming::from_gate_time(13e-6, ppc());
    let e = spectator_sequence_error(&timing, &SpectatorConfig::default(), 20, 2, 1).unwrap();
    println!("spectator error per Clifford at 13 µs: {e:.3e}");
    assert!(e <= SimulatedBounds::default().spectator);
}

#[test]
fn invalid_inputs_rejected() {
    let mut input = BudgetInput::reference();
    input.t2 = 0.0;
    assert!(budget_table(&input).is_err());
    let mut input = BudgetInput::reference();
    input.gate_time = -1.0;
    assert!(budget_table(&input).is_err());
    assert!(budget_curve(&BudgetInput::reference(), &[0.0]).is_err());
    assert!(gate_time_grid(1.0, 0.5, 3).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn total_is_exact_sum(
        g in 2e-6..50e-6f64,
        t2 in 1.0..500.0f64,
        sigma in 0.0..1e-3f64,
        dz in -20.0..20.0f64,
        heat in 0.0..1000.0f64,
    ) {
        let mut input = BudgetInput::reference().at_gate_time(g);
        input.t2 = t2;
        input.sigma0 = sigma;
        input.zeeman_residual_hz = dz;
        input.motional.heating_rate = heat;
        let b = budget_table(&input).unwrap();
        let sum: f64 = b.rows.iter().map(|r| r.error).sum();
        prop_assert_eq!(b.total, sum);
        prop_assert!(b.rows.iter().all(|r| r.error >= 0.0 && r.uncertainty >= 0.0));
        prop_assert!(b.total_upper() >= b.total);
    }
}

