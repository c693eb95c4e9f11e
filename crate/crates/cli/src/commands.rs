// Copyright 2026 The ionbench Authors
// SPDX-License-Identifier: Apache-2.0

//! One function per subcommand. Each validates its section, computes every
//! result, and only then creates the output directory.

use std::f64::consts::{PI, TAU};
use std::fs;
use std::io::BufReader;
use std::path::PathBuf;

use serde::Serialize;
use serde_json::{json, Value};

use ionbench_core::budget::{
    budget_curve, budget_table, estimate_idle_rates, gate_time_grid, leakage_rb_error,
    synthesize_idle_measurements, write_curve_csv, AmpDrift, BudgetInput, ErrorBudget,
    IdleMeasurement, Mechanism,
};
use ionbench_core::calibration::{
    amplitude_cal_loop, amplitude_error_per_pulse, coherent_error_per_clifford,
    frequency_cal_loop, read_trace, run_amplitude_drift, synthesize_walsh_run, walsh_fit,
    write_trace, CalRecord, CalTarget,
};
use ionbench_core::estimator::{fit_with_bootstrap, mle_fit_pooled, DecayFit};
use ionbench_core::ffunc::{
    chi_overlap, predict_irmb, write_prediction_csv, ControlTimeline, IrmbPredictConfig,
};
use ionbench_core::noise::rng::StreamKey;
use ionbench_core::noise::{quantize_amplitude, AmplitudeNoiseModel};
use ionbench_core::rb::{
    generate_plan, run_idle_rb_with, run_irmb, run_rb_with, t2_from_irmb_slope, PooledCounts,
    RbDataset, RbMode, RunOptions, SimTier,
};
use ionbench_core::sim::ZeemanModel;
use ionbench_core::{CliffordGroup, PulseTiming};

use crate::config::{prepare_plan, require, Loaded};
use crate::failure::Failure;
use crate::output::{csv_rows, num, Header, OutDir};

pub struct Context {
    pub loaded: Loaded,
    pub seed: u64,
    pub tier: SimTier,
    pub out: PathBuf,
}

/// Files written and a short summary, printed as JSON on success.
#[derive(Serialize)]
pub struct Report {
    pub command: &'static str,
    pub files: Vec<PathBuf>,
    pub summary: Value,
}

impl Context {
    fn open(&self, command: &'static str) -> Result<OutDir, Failure> {
        OutDir::create(
            &self.out,
            Header {
                tool: "ionbench",
                version: env!("CARGO_PKG_VERSION"),
                command,
                config_sha256: self.loaded.hash(),
                seed: self.seed,
            },
        )
    }
}

fn ppc() -> f64 {
    CliffordGroup::shared().pulses_per_clifford()
}

fn fit(pooled: &[PooledCounts], bootstrap: usize, seed: u64) -> Result<DecayFit, Failure> {
    Ok(if bootstrap == 0 {
        mle_fit_pooled(pooled)?
    } else {
        fit_with_bootstrap(pooled, bootstrap, seed)?
    })
}

fn write_dataset(out: &mut OutDir, ds: &RbDataset) -> Result<(), Failure> {
    out.json("dataset.json", ds)?;
    out.text("sequences.csv", |w| ds.write_csv(w))?;
    out.text("pooled.csv", |w| {
        csv_rows(
            w,
            &["length", "errors", "shots", "survival"],
            ds.pooled().iter().map(|p| {
                vec![
                    p.length.to_string(),
                    p.errors.to_string(),
                    p.shots.to_string(),
                    num(p.survival()),
                ]
            }),
        )
    })
}

fn finish(command: &'static str, out: OutDir, summary: Value) -> Report {
    Report {
        command,
        files: out.written().to_vec(),
        summary,
    }
}

pub fn rb(ctx: &Context) -> Result<Report, Failure> {
    let s = require(&ctx.loaded.config.rb, "rb")?;
    let plan_cfg = prepare_plan(&s.plan, ctx.seed, RbMode::Gate)?;
    plan_cfg.validate()?;
    s.noise.validate()?;
    let plan = generate_plan(&plan_cfg)?;
    let options = RunOptions {
        tier: ctx.tier,
        ..s.options
    };
    let ds = run_rb_with(&plan, &s.noise, options)?;
    let fit = fit(&ds.pooled(), s.bootstrap, ctx.seed)?;

    let mut out = ctx.open("rb")?;
    write_dataset(&mut out, &ds)?;
    out.json("fit.json", &fit)?;
    Ok(finish(
        "rb",
        out,
        json!({ "epsilon": fit.epsilon, "epsilon_stderr": fit.epsilon_stderr }),
    ))
}

pub fn idle_rb(ctx: &Context) -> Result<Report, Failure> {
    let s = require(&ctx.loaded.config.idle_rb, "idle_rb")?;
    let plan_cfg = prepare_plan(&s.plan, ctx.seed, RbMode::Idle)?;
    plan_cfg.validate()?;
    s.idle.validate()?;
    if !(0.0..=0.5).contains(&s.spam) {
        return Err(Failure::validation("spam must lie in [0, 0.5]"));
    }
    let plan = generate_plan(&plan_cfg)?;
    let ds = run_idle_rb_with(&plan, &s.idle, s.spam)?;
    let fit = fit(&ds.pooled(), s.bootstrap, ctx.seed)?;
    let predicted = leakage_rb_error(&s.idle, plan_cfg.gate_time)?;
    let report = json!({
        "fit": fit,
        "gate_time": plan_cfg.gate_time,
        "error_per_second": fit.epsilon / plan_cfg.gate_time,
        "predicted_error_per_clifford": predicted,
        "predicted_error_per_second": s.idle.rb_error_rate(),
    });

    let mut out = ctx.open("idle-rb")?;
    write_dataset(&mut out, &ds)?;
    out.json("fit.json", &report)?;
    Ok(finish(
        "idle-rb",
        out,
        json!({ "epsilon": fit.epsilon, "predicted": predicted }),
    ))
}

/// Weighted least-squares line `y = a + b x`, returning `(a, b)`.
fn line_fit(points: &[(f64, f64, f64)]) -> Option<(f64, f64)> {
    let (mut sw, mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(x, y, sigma) in points {
        let w = if sigma > 0.0 { sigma.powi(-2) } else { 1.0 };
        sw += w;
        sx += w * x;
        sy += w * y;
        sxx += w * x * x;
        sxy += w * x * y;
    }
    let det = sw * sxx - sx * sx;
    (det > 0.0).then(|| ((sxx * sy - sx * sxy) / det, (sw * sxy - sx * sy) / det))
}

#[derive(Serialize)]
struct IrmbPointOut {
    delay: f64,
    epsilon: f64,
    epsilon_stderr: Option<f64>,
}

pub fn irmb(ctx: &Context) -> Result<Report, Failure> {
    let s = require(&ctx.loaded.config.irmb, "irmb")?;
    if s.delays.len() < 2 || s.delays.iter().any(|&d| !(d >= 0.0)) {
        return Err(Failure::validation(
            "irmb needs at least two non-negative delays",
        ));
    }
    s.noise.validate()?;
    let psd = s
        .predict
        .as_ref()
        .map(|p| p.psd.load(&ctx.loaded.base))
        .transpose()?;
    let options = RunOptions {
        tier: ctx.tier,
        ..s.options
    };
    let mut points = Vec::with_capacity(s.delays.len());
    for &delay in &s.delays {
        let mut plan_cfg = prepare_plan(&s.plan, ctx.seed, RbMode::Irmb)?;
        plan_cfg.irmb_delay = delay;
        plan_cfg.validate()?;
        let ds = run_irmb(&generate_plan(&plan_cfg)?, &s.noise, options)?;
        let fit = fit(&ds.pooled(), s.bootstrap, ctx.seed)?;
        points.push(IrmbPointOut {
            delay,
            epsilon: fit.epsilon,
            epsilon_stderr: fit.epsilon_stderr,
        });
    }
    let line = line_fit(
        &points
            .iter()
            .map(|p| (p.delay, p.epsilon, p.epsilon_stderr.unwrap_or(0.0)))
            .collect::<Vec<_>>(),
    );
    let t2 = line.and_then(|(_, slope)| t2_from_irmb_slope(slope, ppc()).ok());
    let prediction = match (&s.predict, &psd) {
        (Some(p), Some(psd)) => {
            let mut cfg = IrmbPredictConfig::new(s.plan.gate_time, s.delays.clone());
            cfg.n_random_seqs = p.n_random_seqs;
            cfg.seed = ctx.seed;
            if let Some(lengths) = &p.lengths {
                cfg.lengths = lengths.clone();
            }
            Some(predict_irmb(psd, &cfg)?)
        }
        _ => None,
    };

    let mut out = ctx.open("irmb")?;
    out.text("points.csv", |w| {
        csv_rows(
            w,
            &["delay", "epsilon", "epsilon_stderr"],
            points.iter().map(|p| {
                vec![
                    num(p.delay),
                    num(p.epsilon),
                    p.epsilon_stderr.map(num).unwrap_or_default(),
                ]
            }),
        )
    })?;
    if let Some(pred) = &prediction {
        out.text("prediction.csv", |w| write_prediction_csv(pred, w))?;
    }
    let summary = json!({
        "intercept": line.map(|l| l.0),
        "slope": line.map(|l| l.1),
        "t2": t2,
        "predicted_t2": prediction.as_ref().and_then(|p| p.t2),
    });
    out.json(
        "fit.json",
        &json!({ "points": points, "fit": summary, "prediction": prediction }),
    )?;
    Ok(finish("irmb", out, summary))
}

fn calibration_target(sim: &crate::config::CalSimulator) -> Result<CalTarget, Failure> {
    let timing = PulseTiming::from_gate_time(sim.gate_time, ppc());
    let mut t = CalTarget::new(timing)?;
    if let Some(q) = sim.quantizer {
        q.validate()?;
        t.quantizer = q;
        t.nominal_setting = q.amp_scale;
        t.setting = quantize_amplitude(&q, q.amp_scale)?;
    }
    t.amplitude = AmplitudeNoiseModel::shot_to_shot(sim.sigma0);
    t.amplitude.validate()?;
    t.gain_drift = sim.amplitude_offset;
    t.drive.zeeman = ZeemanModel {
        shift_at_full_amp: TAU * sim.zeeman_hz,
    };
    t.drive.detuning = TAU * sim.detuning_hz;
    if !(sim.amplitude_offset.abs() < 0.5) || !sim.zeeman_hz.is_finite() {
        return Err(Failure::validation(
            "amplitude offset must be below 0.5 and the Zeeman shift finite",
        ));
    }
    Ok(t)
}

pub fn calibrate(ctx: &Context) -> Result<Report, Failure> {
    let s = require(&ctx.loaded.config.calibrate, "calibrate")?;
    s.loop_config.validate()?;
    if let Some(d) = &s.drift {
        d.validate()?;
    }
    let mut target = calibration_target(&s.simulator)?;
    let key = StreamKey::new(ctx.seed);
    let before = coherent_error_per_clifford(&target)?;
    let offset_before = target.amplitude_offset();
    let amp = amplitude_cal_loop(&s.loop_config, &mut target, key.sequence(0), 0.0)?;
    let freq = frequency_cal_loop(&s.loop_config, &mut target, key.shot(1), 0.0)?;
    let after = coherent_error_per_clifford(&target)?;
    let mut trace: Vec<CalRecord> = amp.records.clone();
    trace.extend(freq.records.iter().cloned());
    let session = match &s.drift {
        Some(d) => Some((
            run_amplitude_drift(d, &s.loop_config, &target, false, ctx.seed)?,
            run_amplitude_drift(d, &s.loop_config, &target, true, ctx.seed)?,
        )),
        None => None,
    };

    let summary = json!({
        "coherent_error_before": before,
        "coherent_error_after": after,
        "amplitude_offset_before": offset_before,
        "amplitude_offset_after": target.amplitude_offset(),
        "amplitude_corrections": amp.corrections,
        "amplitude_residual_bound": amp.residual_bound,
        "amplitude_resolution_limited": amp.resolution_limited,
        "frequency_corrections": freq.corrections,
        "detuning_hz_after": freq.detuning_hz,
        "frequency_residual_bound_hz": freq.residual_bound_hz,
        "drift_error_uncalibrated": session.as_ref().map(|s| s.0.error_per_clifford),
        "drift_error_calibrated": session.as_ref().map(|s| s.1.error_per_clifford),
    });
    let mut out = ctx.open("calibrate")?;
    out.text("trace.jsonl", |w| write_trace(&trace, w))?;
    if let Some((_, closed)) = &session {
        out.text("session_trace.jsonl", |w| write_trace(&closed.records, w))?;
    }
    out.json("report.json", &summary)?;
    Ok(finish("calibrate", out, summary))
}

pub fn walsh(ctx: &Context) -> Result<Report, Failure> {
    let s = require(&ctx.loaded.config.walsh, "walsh")?;
    if !s.orders.contains(&0) {
        return Err(Failure::validation("walsh needs an order-0 run"));
    }
    if s.shots == 0 || s.lengths.is_empty() {
        return Err(Failure::validation("walsh needs lengths and shots"));
    }
    let timing = PulseTiming::from_gate_time(s.gate_time, ppc());
    timing.validate()?;
    let omega = PI / (2.0 * timing.t_half_pi);
    let key = StreamKey::new(ctx.seed);
    let runs = s
        .orders
        .iter()
        .enumerate()
        .map(|(i, &order)| {
            synthesize_walsh_run(
                order,
                &s.lengths,
                omega,
                &s.mu,
                &s.sigma,
                s.shots,
                key.sequence(i as u64),
            )
        })
        .collect::<ionbench_core::Result<Vec<_>>>()?;
    let fit = walsh_fit(&runs, omega, s.sigma0_policy)?;
    let amp_error = ppc() * amplitude_error_per_pulse(fit.sigma0);

    let mut out = ctx.open("walsh")?;
    out.text("runs.csv", |w| {
        csv_rows(
            w,
            &["order", "groups", "zeros", "shots"],
            runs.iter().flat_map(|r| {
                r.points.iter().map(move |&(n, z, shots)| {
                    vec![
                        r.order.to_string(),
                        n.to_string(),
                        z.to_string(),
                        shots.to_string(),
                    ]
                })
            }),
        )
    })?;
    let summary = json!({
        "sigma0": fit.sigma0,
        "amplitude_noise_error_per_clifford": amp_error,
        "mu": fit.mu,
    });
    out.json("fit.json", &summary)?;
    Ok(finish("walsh", out, summary))
}

pub fn phase_noise(ctx: &Context) -> Result<Report, Failure> {
    let s = require(&ctx.loaded.config.phase_noise, "phase_noise")?;
    s.quadrature.validate()?;
    if s.taus.is_empty() || s.taus.iter().any(|&t| !(t > 0.0)) || !(s.t_pi > 0.0) {
        return Err(Failure::validation(
            "taus and t_pi must be positive",
        ));
    }
    let psd = s.psd.load(&ctx.loaded.base)?;
    let mut rows = Vec::with_capacity(s.taus.len());
    for &tau in &s.taus {
        let r = chi_overlap(&psd, &ControlTimeline::ramsey(tau)?, &s.quadrature)?;
        let e = chi_overlap(
            &psd,
            &ControlTimeline::spin_echo(tau, s.t_pi)?,
            &s.quadrature,
        )?;
        rows.push((tau, r, e));
    }
    let (lo, hi) = s
        .quadrature
        .band
        .or_else(|| psd.band())
        .unwrap_or((TAU * 1e-2, TAU * 1e7));
    let decades = (hi / lo).log10();
    let n = (10.0 * decades).ceil().max(1.0) as usize;
    let grid: Vec<f64> = (0..=n)
        .map(|i| lo * 10f64.powf(decades * i as f64 / n as f64))
        .collect();

    let mut out = ctx.open("phase-noise")?;
    out.text("psd.csv", |w| {
        csv_rows(
            w,
            &["omega", "s_phi"],
            grid.iter().map(|&w| vec![num(w), num(psd.value(w))]),
        )
    })?;
    out.text("decay.csv", |w| {
        csv_rows(
            w,
            &[
                "tau",
                "ramsey_chi",
                "ramsey_fidelity",
                "echo_chi",
                "echo_fidelity",
                "edge_warning",
            ],
            rows.iter().map(|(tau, r, e)| {
                vec![
                    num(*tau),
                    num(r.chi),
                    num(r.fidelity),
                    num(e.chi),
                    num(e.fidelity),
                    (r.edge_warning || e.edge_warning).to_string(),
                ]
            }),
        )
    })?;
    let summary = json!({ "white_t2": psd.white_t2(), "points": rows.len() });
    out.json("report.json", &summary)?;
    Ok(finish("phase-noise", out, summary))
}

pub fn budget(ctx: &Context) -> Result<Report, Failure> {
    let default = Default::default();
    let s = ctx.loaded.config.budget.as_ref().unwrap_or(&default);
    let mut input = s.input.clone().unwrap_or_else(BudgetInput::reference);
    if let Some(path) = &s.trace {
        let path = ctx.loaded.base.join(path);
        let file = fs::File::open(&path)
            .map_err(|e| Failure::config(format!("cannot open {}: {e}", path.display())))?;
        input.amp_drift = AmpDrift::Log(read_trace(BufReader::new(file))?);
    }
    input.validate()?;
    let grid = gate_time_grid(s.curve.lo, s.curve.hi, s.curve.count)?;
    let mechanisms = s.mechanisms.clone().unwrap_or_else(|| Mechanism::ALL.to_vec());
    let keep = |b: ErrorBudget| b.restricted(&mechanisms);
    let table = keep(budget_table(&input)?);
    let curve: Vec<ErrorBudget> = budget_curve(&input, &grid)?.into_iter().map(keep).collect();

    let mut out = ctx.open("budget")?;
    out.text("budget.csv", |w| table.write_csv(w))?;
    out.text("curve.csv", |w| write_curve_csv(&curve, w))?;
    out.json("budget.json", &json!({ "input": input, "budget": table }))?;
    Ok(finish(
        "budget",
        out,
        json!({
            "total": table.total,
            "total_uncertainty": table.total_uncertainty,
            "rows": table.rows.len(),
        }),
    ))
}

pub fn leakage_rates(ctx: &Context) -> Result<Report, Failure> {
    let s = require(&ctx.loaded.config.leakage_rates, "leakage_rates")?;
    if !(s.gate_time > 0.0) {
        return Err(Failure::validation("gate_time must be positive"));
    }
    let data: Vec<IdleMeasurement> = match (&s.measurements, &s.synthetic) {
        (Some(path), None) => {
            let path = ctx.loaded.base.join(path);
            let text = fs::read_to_string(&path)
                .map_err(|e| Failure::config(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| Failure::config(e.to_string()))?
        }
        (None, Some(syn)) => {
            syn.rates.validate()?;
            synthesize_idle_measurements(&syn.rates, &syn.delays, syn.shots, ctx.seed)?
        }
        _ => {
            return Err(Failure::config(
                "leakage_rates needs exactly one of `measurements` and `synthetic`",
            ))
        }
    };
    let est = estimate_idle_rates(&data)?;
    let row = leakage_rb_error(&est.rates(), s.gate_time)?;
    let summary = json!({
        "eps_b": est.eps_b,
        "eps_d_plus_leak0": est.eps_d_plus_leak0,
        "eps_d_plus_leak1": est.eps_d_plus_leak1,
        "p_flip": est.p_flip,
        "p_flip_upper_2sigma": est.p_flip.upper(2.0),
        "flip_inconsistent": est.flip_inconsistent,
        "leakage_error_per_clifford": row,
    });

    let mut out = ctx.open("leakage-rates")?;
    out.text("measurements.csv", |w| {
        csv_rows(
            w,
            &["scheme", "prepared", "delay", "errors", "shots"],
            data.iter().map(|m| {
                vec![
                    format!("{:?}", m.scheme).to_lowercase(),
                    m.prepared.to_string(),
                    num(m.delay),
                    m.errors.to_string(),
                    m.shots.to_string(),
                ]
            }),
        )
    })?;
    out.json("estimate.json", &json!({ "estimate": est, "summary": summary }))?;
    Ok(finish("leakage-rates", out, summary))
}
