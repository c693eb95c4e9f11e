// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::{PI, TAU};

use ionbench_core::ffunc::*;
use ionbench_core::{CliffordGroup, PulseLabel, PulseTiming};
use proptest::prelude::*;

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
        .collect()
}

#[test]
fn ssb_conversion() {
    let curve = SsbCurve::new(vec![(1.0, -100.0), (10.0, -120.0), (1e3, -130.0)]).unwrap();
    let psd = ssb_to_psd(&curve);
    assert!((psd.value(TAU) / 2e-10 - 1.0).abs() < 1e-12);
    // Linear in dB per log-frequency means a power law between rows.
    let mid = psd.value(TAU * 10f64.sqrt());
    assert!((10.0 * (mid / 2.0).log10() + 110.0).abs() < 1e-9);
    let values: Vec<f64> = log_grid(TAU, TAU * 1e3, 50).iter().map(|&w| psd.value(w)).collect();
    assert!(values.windows(2).all(|w| w[1] <= w[0]));
    // Flat beyond the measured band.
    assert_eq!(psd.value(TAU * 1e5), psd.value(TAU * 1e3));
    assert!((thermal_floor_dbc(290.0, 30.0) + 204.0).abs() < 0.1);
}

#[test]
fn ssb_csv_and_validation() {
    let text = "# offset, level\nfrequency_hz,dbc\n1, -80\n10,-95\n100 , -110\n";
    let curve = SsbCurve::from_csv(text.as_bytes()).unwrap();
    assert_eq!(curve.points().len(), 3);
    assert!((curve.level(10.0) + 95.0).abs() < 1e-12);
    assert!(SsbCurve::from_csv("1,-80\n1,-90\n".as_bytes()).is_err());
    assert!(SsbCurve::from_csv("1,-80\nx,-90\n".as_bytes()).is_err());
    assert!(SsbCurve::new(vec![(0.0, -80.0)]).is_err());
    assert!(PhasePsd::tabulated(vec![(1.0, -1e-12)]).is_err());
}

#[test]
fn ramsey_filter_has_closed_form() {
    let tau = 1e-3;
    let tl = ControlTimeline::ramsey(tau).unwrap();
    let omegas = log_grid(1e-1, 1e7, 200);
    for (w, g) in omegas.iter().zip(filter_function(&tl, &omegas)) {
        let exact = ramsey_filter(*w, tau);
        assert!((g - exact).abs() <= 1e-12 * exact.max(1e-300) + 1e-15, "{w}: {g} {exact}");
    }
    // Static limit: G ≈ (ωτ/2)².
    let w = 1e-3 / tau;
    let g = filter_function(&tl, &[w])[0];
    assert!((g / (0.5 * w * tau).powi(2) - 1.0).abs() < 1e-6);
}

#[test]
fn spin_echo_matches_analytic_form() {
    let tau = 2e-3;
    let tl = ControlTimeline::spin_echo(tau, 1e-12 * tau).unwrap();
    // Four decades below the first zero of sin⁴(ωτ/4).
    let omegas = log_grid(1.2e-3 / tau, 12.0 / tau, 400);
    for (w, g) in omegas.iter().zip(filter_function(&tl, &omegas)) {
        let exact = spin_echo_filter(*w, tau);
        assert!((g / exact - 1.0).abs() < 1e-6, "{w}: {g} vs {exact}");
    }
    // Insensitive to static shifts.
    assert!(filter_function(&tl, &[1e-6 / tau])[0] < 1e-20);
}

#[test]
fn zero_psd_gives_unit_fidelity() {
    let tl = ControlTimeline::spin_echo(1e-3, 1e-5).unwrap();
    let quad = Quadrature::default().with_band(1.0, 1e8);
    let r = chi_overlap(&PhasePsd::zero(), &tl, &quad).unwrap();
    assert_eq!(r.chi, 0.0);
    assert_eq!(r.fidelity, 1.0);
    let f = chi_overlap_fn(&PhasePsd::zero(), |w| ramsey_filter(w, 1.0), &quad).unwrap();
    assert_eq!(f.chi, 0.0);
}

/// `S_δ/ω²` tabulated densely over `[lo, hi]`.
fn tabulated_white(s_delta: f64, lo: f64, hi: f64) -> PhasePsd {
    PhasePsd::tabulated(log_grid(lo, hi, 200).into_iter().map(|w| (w, s_delta / (w * w))).collect())
        .unwrap()
}

#[test]
fn white_noise_closed_form_matches_quadrature() {
    // Parseval against brute-force ω integration, for Ramsey and for a short
    // pulse sequence with finite rotations.
    let t2 = 0.05;
    let exact = PhasePsd::from_t2(t2).unwrap();
    let table = tabulated_white(4.0 / t2, 1e-3, 1e11);
    let quad = Quadrature::default();
    let tau = 0.01;
    let ramsey = ControlTimeline::ramsey(tau).unwrap();
    let a = chi_overlap(&exact, &ramsey, &quad).unwrap().chi;
    assert!((a - tau / t2).abs() < 1e-12);
    let b = chi_overlap(&table, &ramsey, &quad).unwrap().chi;
    assert!((b / a - 1.0).abs() < 1e-3, "{a} {b}");

    let timing = PulseTiming::new(5.9e-6);
    let group = CliffordGroup::shared();
    let pulses: Vec<PulseLabel> = [3, 7, 11, 19, 22, 5]
        .iter()
        .flat_map(|&c| group.decompose(c).to_vec())
        .collect();
    let tl = ControlTimeline::from_pulses(pulses, &timing, 2e-6, 0).unwrap();
    let a = chi_overlap(&exact, &tl, &quad).unwrap().chi;
    let b = chi_overlap(&table, &tl, &quad).unwrap().chi;
    assert!(a > 0.0 && (b / a - 1.0).abs() < 1e-3, "{a} {b}");
}

fn chi_from_fidelity(f: f64) -> f64 {
    -(2.0 * f - 1.0).ln()
}

fn fitted_rate(taus: &[f64], chis: &[f64]) -> f64 {
    let num: f64 = taus.iter().zip(chis).map(|(t, c)| t * c).sum();
    let den: f64 = taus.iter().map(|t| t * t).sum();
    num / den
}

#[test]
fn white_ramsey_decay_matches_monte_carlo() {
    let t2 = 2.0;
    let psd = PhasePsd::from_t2(t2).unwrap();
    let taus = [0.25, 0.5, 1.0, 2.0];
    let quad = Quadrature::default();
    let pipeline: Vec<f64> = taus
        .iter()
        .map(|&t| chi_overlap(&psd, &ControlTimeline::ramsey(t).unwrap(), &quad).unwrap().chi)
        .collect();
    // Linear in τ: exponential decay.
    for (t, c) in taus.iter().zip(&pipeline) {
        assert!((c / t - 1.0 / t2).abs() < 1e-12);
    }
    let band = (1e-4, 1e4);
    let mc = ramsey_monte_carlo(&psd, &taus, band, 20_000, 5).unwrap();
    let chis: Vec<f64> = mc.iter().map(|&f| chi_from_fidelity(f)).collect();
    let rate = fitted_rate(&taus, &chis);
    assert!((rate * t2 - 1.0).abs() < 0.05, "MC rate {rate}");

    // The smaller ensemble has about 4.5% relative noise; allow three sigma.
    let mc = ramsey_monte_carlo(&psd, &taus, band, 1000, 6).unwrap();
    let rate = fitted_rate(&taus, &mc.iter().map(|&f| chi_from_fidelity(f)).collect::<Vec<_>>());
    assert!((rate * t2 - 1.0).abs() < 0.15, "MC rate {rate}");
}

#[test]
fn quadrature_converges_and_flags_edges() {
    let curve = SsbCurve::new(vec![(0.1, -40.0), (1.0, -60.0), (1e3, -100.0), (1e5, -140.0), (1e6, -140.0)]).unwrap();
    let psd = ssb_to_psd(&curve);
    let tl = ControlTimeline::spin_echo(0.05, 1e-5).unwrap();
    // Doubling the grid density moves χ by less than 0.1%.
    let base = Quadrature::default();
    let a = chi_overlap(&psd, &tl, &base).unwrap().chi;
    let dense = Quadrature { points_per_decade: 2 * base.points_per_decade, ..base };
    let b = chi_overlap(&psd, &tl, &dense).unwrap().chi;
    assert!((a / b - 1.0).abs() < 1e-3, "{a} {b}");
    let adaptive = chi_overlap(&psd, &tl, &Quadrature::default()).unwrap();
    let fine = chi_overlap(&psd, &tl, &Quadrature::fixed(4096)).unwrap();
    assert!((adaptive.chi / fine.chi - 1.0).abs() < 1e-3);
    // A flat floor up to the band edge puts most of the mass there.
    let flat = PhasePsd::tabulated(vec![(1.0, 1e-12), (1e6, 1e-12)]).unwrap();
    let r = chi_overlap(&flat, &ControlTimeline::ramsey(1e-3).unwrap(), &Quadrature::default()).unwrap();
    assert!(r.edge_warning && r.edge_fraction > 0.5);
    assert!(!adaptive.edge_warning || adaptive.edge_fraction > EDGE_MASS_LIMIT);
}

#[test]
fn echo_predicts_long_timescale_decay() {
    // With the IRMB-tuned white frequency noise the echo error follows
    // ½(1 − e^{−τ/T2}) at second timescales.
    let psd = synthetic_psd(SYNTHETIC_T2, SYNTHETIC_FLOOR_DBC).unwrap();
    for tau in [0.1, 1.0, 10.0] {
        let tl = ControlTimeline::spin_echo(tau, 11.8e-6).unwrap();
        let r = chi_overlap(&psd, &tl, &Quadrature::default()).unwrap();
        let expect = 0.5 * (1.0 - (-tau / SYNTHETIC_T2).exp());
        assert!(((1.0 - r.fidelity) / expect - 1.0).abs() < 0.1, "{tau}: {}", 1.0 - r.fidelity);
    }
}

fn irmb_config(delays: Vec<f64>) -> IrmbPredictConfig {
    IrmbPredictConfig {
        n_random_seqs: 10,
        lengths: vec![1, 300, 1000, 3000],
        seed: 3,
        ..IrmbPredictConfig::new(13e-6, delays)
    }
}

#[test]
fn irmb_prediction_recovers_t2() {
    let psd = synthetic_psd(SYNTHETIC_T2, SYNTHETIC_FLOOR_DBC).unwrap();
    let pred = predict_irmb(&psd, &irmb_config(vec![0.0, 0.5e-3, 1e-3, 2e-3])).unwrap();
    let t2 = pred.t2.unwrap();
    assert!((t2 / 69.0 - 1.0).abs() < 0.1, "{t2} {:?}", pred.points);
    // Error per π/2 pulse at zero delay against t/(3T2).
    let ppc = CliffordGroup::shared().pulses_per_clifford();
    let per_pulse = pred.points[0].error / ppc;
    let slot = 13e-6 / ppc;
    assert!((per_pulse / (slot / (3.0 * 69.0)) - 1.0).abs() < 0.1, "{per_pulse}");
    // Linear in delay.
    for p in &pred.points {
        let line = pred.intercept.unwrap() + pred.slope.unwrap() * p.delay;
        assert!((p.error - line).abs() < 0.05 * line + 3.0 * p.stderr, "{p:?} vs {line}");
    }
    let mut buf = Vec::new();
    write_prediction_csv(&pred, &mut buf).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 5);
}

#[test]
fn irmb_prediction_edge_cases() {
    let zero = predict_irmb(&PhasePsd::zero(), &irmb_config(vec![0.0, 1e-3])).unwrap();
    assert!(zero.points.iter().all(|p| p.error == 0.0));
    let few = IrmbPredictConfig { n_random_seqs: 9, ..irmb_config(vec![0.0]) };
    assert!(predict_irmb(&PhasePsd::zero(), &few).is_err());
}

#[test]
fn static_detuning_inflates_long_delays_only() {
    let psd = PhasePsd::from_t2(69.0).unwrap();
    let base = predict_irmb(&psd, &irmb_config(vec![0.0, 1e-3])).unwrap();
    let detuned = predict_irmb(
        &psd,
        &IrmbPredictConfig { static_detuning_hz: 2.5, ..irmb_config(vec![0.0, 1e-3]) },
    )
    .unwrap();
    let short = detuned.points[0].error / base.points[0].error;
    let long = detuned.points[1].error / base.points[1].error;
    assert!(short < 1.1, "short-delay ratio {short}");
    assert!(long > 1.5, "long-delay ratio {long}");
}

fn psd_strategy() -> impl Strategy<Value = PhasePsd> {
    prop::collection::vec(0.0f64..1e-6, 6).prop_map(|v| {
        let samples = v.iter().enumerate().map(|(i, &s)| (10f64.powf(i as f64 * 0.5), s)).collect();
        PhasePsd::tabulated(samples).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn chi_is_nonnegative_and_monotone(psd in psd_strategy(), extra in psd_strategy(), tau in 1e-3f64..1.0) {
        let quad = Quadrature::default();
        let tl = ControlTimeline::spin_echo(tau, 1e-6).unwrap();
        let a = chi_overlap(&psd, &tl, &quad).unwrap();
        let b = chi_overlap(&psd.plus(&extra).unwrap(), &tl, &Quadrature { band: psd.band(), ..quad }).unwrap();
        prop_assert!(a.chi >= 0.0 && (0.5..=1.0).contains(&a.fidelity));
        prop_assert!(b.chi >= a.chi * (1.0 - 1e-9));
    }

    #[test]
    fn echo_suppresses_slow_noise(psd in psd_strategy(), scale in 0.0f64..2.0) {
        // Supported below 1/τ: band tops out at 10^2.5 rad/s, τ = 1e-4·10^-scale s.
        let tau = 1e-4 * 10f64.powf(-scale);
        let quad = Quadrature::default();
        let echo = chi_overlap(&psd, &ControlTimeline::spin_echo(tau, 1e-9 * tau).unwrap(), &quad).unwrap().chi;
        let ramsey = chi_overlap(&psd, &ControlTimeline::ramsey(tau).unwrap(), &quad).unwrap().chi;
        prop_assert!(echo <= ramsey);
        if ramsey > 0.0 {
            prop_assert!(echo < ramsey);
        }
    }
}

#[test]
fn synthetic_psd_is_labelled_and_positive() {
    let psd = synthetic_psd(SYNTHETIC_T2, SYNTHETIC_FLOOR_DBC).unwrap();
    assert_eq!(psd.white_t2(), Some(SYNTHETIC_T2));
    let (lo, hi) = psd.band().unwrap();
    assert!((lo / (TAU * 1e4) - 1.0).abs() < 1e-12 && (hi / (TAU * 1e6) - 1.0).abs() < 1e-12);
    assert!(log_grid(1e-3, 1e8, 50).iter().all(|&w| psd.value(w) > 0.0));
    let _ = PI;
}
