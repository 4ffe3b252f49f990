//! Scenario execution: engine dispatch, metric collection, artifact
//! emission, and parallel parameter sweeps.

use super::io::{write_csv, RunRecord};
use super::{CascadeSpec, PreparationSpec, Scenario, SchemeChoice};
use crate::analysis::{measure_pulse, measure_spectrum, PulseMetrics, SpectralReport};
use crate::analytic::{
    conservation_report, coupling_alpha, propagate_dispersionless, BeatParameters,
    ConservationReport,
};
use crate::core::{
    analytic_signal, inverse_spectrum, spectrum_of, Frequency, SampledField, Spectrum, TimeGrid,
};
use crate::error::{Error, Result};
use crate::medium::{
    adiabatic_state, kappa_of, rabi_and_stark, MediumParameters, PreparedCoherence,
    TwoLevelState,
};
use crate::propagator::{
    assemble_coefficients, cascade_selfconsistent, gvd_analysis, propagate_frequency_domain,
    propagate_sidebands, propagate_time_domain, CascadeConfig, CascadeResult, CoherenceProfile,
    Envelopes, GvdAnalysis, PropagationConfig, Scheme, SidebandSet,
};
use serde::Serialize;
use std::path::Path;

/// Cascade-stage summary for reporting and acceptance checks.
#[derive(Debug, Clone, Serialize)]
pub struct CascadeSummary {
    /// `|ρ_ab|` at the drive peak: entrance value, z-average, z-minimum.
    pub coherence_entrance: f64,
    pub coherence_mean: f64,
    pub coherence_min: f64,
    /// Drive comb lines with `∫|E_q|²dτ` above 1e-4 of the strongest line.
    pub drive_sidebands: usize,
    /// Worst relative photon-flux drift along z.
    pub flux_drift: f64,
}

/// In-memory results of one scenario run.
pub struct RunOutput {
    pub record: RunRecord,
    pub params: MediumParameters,
    pub coherence: Option<PreparedCoherence>,
    pub alpha_z: f64,
    pub z: f64,
    /// Probe carrier, rad/s.
    pub omega0: f64,
    /// Input and output fields in the engine's native time frame.
    pub input: SampledField,
    pub output: SampledField,
    pub input_metrics: Option<PulseMetrics>,
    pub output_metrics: Option<PulseMetrics>,
    pub conservation: Option<ConservationReport>,
    pub spectral: Option<SpectralReport>,
    pub gvd: Option<GvdAnalysis>,
    pub cascade: Option<CascadeSummary>,
    /// Output spectrum (of the output field).
    pub spectrum_out: Option<Spectrum>,
    /// Width of the output spectrum above 1e-4 of its power peak, in units
    /// of ω_m.
    pub spectral_span_over_omega_m: f64,
}

fn resolve_coherence(
    scenario: &Scenario,
    params: &MediumParameters,
) -> Result<(PreparedCoherence, TwoLevelState, Vec<String>)> {
    let mut warnings = Vec::new();
    match &scenario.preparation {
        PreparationSpec::Direct { theta_rad, phi0_rad } => {
            let state = TwoLevelState::pure(*theta_rad, *phi0_rad);
            let kappa = kappa_of(params, &state);
            let coherence = PreparedCoherence::new(*theta_rad, *phi0_rad, kappa)?;
            Ok((coherence, state, warnings))
        }
        PreparationSpec::Adiabatic { drive } => {
            let config = drive.resolve(params.omega_m)?;
            // Stationary preparation at the drive peak.
            let comb = crate::medium::SidebandAmplitudes {
                omega_lowest: config.lower.frequency.rad_per_s(),
                omega_m: params.omega_m,
                amplitudes: vec![
                    config.lower.envelope_at(config.lower.peak_time),
                    config.upper.envelope_at(config.upper.peak_time),
                ],
            };
            let rabi = rabi_and_stark(&comb, params);
            let (coherence, state) = adiabatic_state(&rabi, config.delta, params)?;
            if config.gamma2 > 0.0 {
                warnings.push(
                    "adiabatic preparation ignores decay; use a cascade run for γ₂ > 0".into(),
                );
            }
            Ok((coherence, state, warnings))
        }
    }
}

fn resolve_z(scenario: &Scenario, alpha: f64) -> Result<f64> {
    match (scenario.run.z_um, scenario.run.alpha_z) {
        (Some(z), None) => {
            if z <= 0.0 {
                return Err(Error::Validation("run.z_um: must be positive".into()));
            }
            Ok(z * 1e-6)
        }
        (None, Some(az)) => {
            if !(alpha > 0.0) {
                return Err(Error::Validation(
                    "run.alpha_z: needs a nonzero coupling (ρ₀·d₀ > 0)".into(),
                ));
            }
            Ok(az / alpha)
        }
        _ => Err(Error::Validation(
            "run: exactly one of z_um or alpha_z".into(),
        )),
    }
}

fn probe_field(
    scenario: &Scenario,
    grid: TimeGrid,
    omega0: Frequency,
    peak_time: f64,
    raman_period: f64,
) -> Result<SampledField> {
    let probe = scenario
        .probe
        .as_ref()
        .ok_or_else(|| Error::Validation("probe: required for propagation runs".into()))?;
    let width = probe.width(raman_period)?;
    SampledField::gaussian(
        grid,
        omega0,
        peak_time,
        width,
        probe.width_convention,
        probe.amplitude_v_per_m,
        probe.phase_rad,
    )
}

fn spectral_span(spectrum: &Spectrum, omega_m: f64) -> f64 {
    let peak = spectrum
        .omega
        .iter()
        .zip(&spectrum.amplitude)
        .filter(|(w, _)| **w > 0.0)
        .map(|(_, a)| a.norm_sqr())
        .fold(0.0_f64, f64::max);
    if peak == 0.0 {
        return 0.0;
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (w, a) in spectrum.omega.iter().zip(&spectrum.amplitude) {
        if *w > 0.0 && a.norm_sqr() >= 1e-4 * peak {
            lo = lo.min(*w);
            hi = hi.max(*w);
        }
    }
    if hi > lo {
        (hi - lo) / omega_m
    } else {
        0.0
    }
}

/// Execute a scenario; artifacts are written when `out_dir` is given.
pub fn run_scenario(scenario: &Scenario, out_dir: Option<&Path>) -> Result<RunOutput> {
    let mut record = RunRecord::begin(scenario);
    let params = scenario.medium.resolve()?;
    record.warnings.extend(params.ordering_violations());

    let (coherence, state, mut warnings) = resolve_coherence(scenario, &params)?;
    record.warnings.append(&mut warnings);
    let alpha = coupling_alpha(&params, coherence.rho0)?;
    let z = resolve_z(scenario, alpha)?;
    let alpha_z = alpha * z;
    let tm = params.raman_period();
    let probe = scenario
        .probe
        .as_ref()
        .ok_or_else(|| Error::Validation("probe: required".into()))?;
    let omega0 = probe.carrier(params.omega_m)?;
    let beat = BeatParameters::from_medium(&params, &coherence, z)?;
    let frame_offset = beat.phi / beat.omega_m;

    let span = scenario.run.grid.span(tm)?;
    let n = scenario.run.grid.n;

    let mut cascade_summary = None;
    let mut cascade_result: Option<CascadeResult> = None;

    // Self-consistent preparation replaces the frozen coherence.
    if let Some(spec) = &scenario.run.cascade {
        let PreparationSpec::Adiabatic { drive } = &scenario.preparation else {
            return Err(Error::Validation(
                "run.cascade: requires preparation.mode = \"adiabatic\"".into(),
            ));
        };
        let result = run_cascade(drive, &params, spec, z)?;
        let probe_tau = probe.peak_tau(tm, frame_offset)?;
        let n_z = result.z.len();
        let coherences: Vec<f64> =
            (0..n_z).map(|zi| result.coherence_at(zi, probe_tau)).collect();
        let final_set = result.final_sidebands();
        let powers: Vec<f64> = match &final_set.env {
            Envelopes::Sampled { grid, data } => data
                .iter()
                .map(|env| env.iter().map(|a| a.norm_sqr()).sum::<f64>() * grid.dt())
                .collect(),
            Envelopes::Constant(a) => a.iter().map(|v| v.norm_sqr()).collect(),
        };
        let max_power = powers.iter().cloned().fold(0.0_f64, f64::max);
        cascade_summary = Some(CascadeSummary {
            coherence_entrance: coherences.first().copied().unwrap_or(0.0),
            coherence_mean: coherences.iter().sum::<f64>() / n_z.max(1) as f64,
            coherence_min: coherences.iter().cloned().fold(f64::INFINITY, f64::min),
            drive_sidebands: powers.iter().filter(|p| **p >= 1e-4 * max_power).count(),
            flux_drift: result.flux_drift,
        });
        cascade_result = Some(result);
    }

    // Build the probe and dispatch to the engine.
    let scheme = scenario.run.scheme;
    let (input, output): (SampledField, SampledField) = match scheme {
        SchemeChoice::Analytic => {
            let grid = TimeGrid::centered(span, n)?;
            let peak = probe.peak_eta(tm, frame_offset)?;
            let input = probe_field(scenario, grid, omega0, peak, tm)?;
            let output = propagate_dispersionless(&input, &beat)?;
            (input, output)
        }
        _ => {
            let grid = TimeGrid::centered(span, n)?;
            let peak = probe.peak_tau(tm, frame_offset)?;
            let input = probe_field(scenario, grid, omega0, peak, tm)?;
            let output = run_numeric(
                scenario,
                scheme,
                &params,
                &coherence,
                &state,
                cascade_result.as_ref(),
                &input,
                omega0,
                z,
            )?;
            (input, output)
        }
    };

    // Diagnostics; an all-zero probe legitimately has no pulse metrics.
    let zero_field = input.peak() == 0.0;
    let input_metrics = if zero_field { None } else { Some(measure_pulse(&input)?) };
    let output_metrics = if zero_field || output.peak() == 0.0 {
        None
    } else {
        let m = measure_pulse(&output)?;
        Some(match &input_metrics {
            Some(im) => m.with_reference(im),
            None => m,
        })
    };
    let conservation = if scheme == SchemeChoice::Analytic && !zero_field {
        Some(conservation_report(&input, &output, omega0, &beat)?)
    } else {
        None
    };
    let (spectrum_out, spectral, span_ratio) = if zero_field {
        (None, None, 0.0)
    } else {
        let spec = spectrum_of(&output)?;
        let report =
            measure_spectrum(&spec, omega0.rad_per_s(), params.omega_m, None).ok();
        let span_ratio = spectral_span(&spec, params.omega_m);
        (Some(spec), report, span_ratio)
    };
    let gvd = if scenario.outputs.iter().any(|o| o == "gvd") && alpha > 0.0 {
        Some(gvd_analysis(&params, &state, omega0, alpha)?)
    } else {
        None
    };

    record.metrics = serde_json::json!({
        "alpha_per_m": alpha,
        "alpha_z": alpha_z,
        "z_m": z,
        "kappa_per_m": coherence.kappa,
        "theta_rad": coherence.theta,
        "rho0": coherence.rho0,
        "omega0_rad_per_s": omega0.rad_per_s(),
        "input": input_metrics,
        "output": output_metrics,
        "conservation": conservation,
        "sidebands": spectral,
        "gvd": gvd,
        "cascade": cascade_summary,
        "spectral_span_over_omega_m": span_ratio,
    });

    let mut output_struct = RunOutput {
        record,
        params,
        coherence: Some(coherence),
        alpha_z,
        z,
        omega0: omega0.rad_per_s(),
        input,
        output,
        input_metrics,
        output_metrics,
        conservation,
        spectral,
        gvd,
        cascade: cascade_summary,
        spectrum_out,
        spectral_span_over_omega_m: span_ratio,
    };

    if let Some(dir) = out_dir {
        write_artifacts(scenario, &mut output_struct, cascade_result.as_ref(), dir)?;
    }
    output_struct.record.finish();
    if let Some(dir) = out_dir {
        output_struct.record.write(dir.join("record.json"))?;
    }
    Ok(output_struct)
}

fn run_cascade(
    drive: &super::DriveSpec,
    params: &MediumParameters,
    spec: &CascadeSpec,
    z: f64,
) -> Result<CascadeResult> {
    if spec.tau_points < 3 {
        return Err(Error::Validation("run.cascade.tau_points: need ≥ 3".into()));
    }
    let config = drive.resolve(params.omega_m)?;
    let tau_grid = TimeGrid::new(
        drive.peak_ns * 1e-9 - 0.5 * spec.tau_span_ns * 1e-9,
        spec.tau_span_ns * 1e-9 / (spec.tau_points - 1) as f64,
        spec.tau_points,
    )?;
    let tables = assemble_coefficients(
        params,
        Frequency::from_rad_per_s(config.lower.frequency.rad_per_s())?,
    );
    let mut cascade_cfg = CascadeConfig::new(z, tau_grid);
    cascade_cfg.q_min = spec.comb.q_min;
    cascade_cfg.q_max = spec.comb.q_max;
    cascade_cfg.dz = spec.dz_um.map(|um| um * 1e-6);
    cascade_selfconsistent(&config, &tables, &cascade_cfg)
}

#[allow(clippy::too_many_arguments)]
fn run_numeric(
    scenario: &Scenario,
    scheme: SchemeChoice,
    params: &MediumParameters,
    coherence: &PreparedCoherence,
    state: &TwoLevelState,
    cascade: Option<&CascadeResult>,
    input: &SampledField,
    omega0: Frequency,
    z: f64,
) -> Result<SampledField> {
    let tables = assemble_coefficients(params, omega0);
    let mut cfg = PropagationConfig::new(
        z,
        match scheme {
            SchemeChoice::Dispersionless => Scheme::Dispersionless,
            SchemeChoice::FreqDomain => Scheme::FreqDomain,
            SchemeChoice::SidebandSvea => Scheme::SidebandSvea,
            SchemeChoice::SidebandFull => Scheme::SidebandFull,
            SchemeChoice::TimeDomainFull => Scheme::TimeDomainFull,
            SchemeChoice::TimeDomainOffres => Scheme::TimeDomainOffres,
            SchemeChoice::Analytic => unreachable!("analytic handled by caller"),
        },
    );
    cfg.stability_guard = scenario.run.stability_guard;
    cfg.dz = scenario.run.dz_um.map(|um| um * 1e-6);

    match scheme {
        SchemeChoice::Dispersionless
        | SchemeChoice::TimeDomainFull
        | SchemeChoice::TimeDomainOffres => {
            let analytic = analytic_signal(input)?;
            let profile = match cascade {
                Some(result) => {
                    let probe_tau = scenario
                        .probe
                        .as_ref()
                        .map(|p| p.peak_tau_fs.unwrap_or(0.0) * 1e-15)
                        .unwrap_or(0.0);
                    result.coherence_profile(probe_tau)
                }
                None => CoherenceProfile::Frozen {
                    state: coherence.state_at(0.0),
                    kappa: coherence.kappa,
                },
            };
            let out = propagate_time_domain(&analytic, &profile, &tables, &cfg)?;
            Ok(out.real_field())
        }
        SchemeChoice::FreqDomain => {
            let spec = spectrum_of(input)?;
            let out = propagate_frequency_domain(&spec, state, &tables, &cfg)?;
            inverse_spectrum(&out)
        }
        SchemeChoice::SidebandSvea | SchemeChoice::SidebandFull => {
            let comb = scenario.run.comb.clone().unwrap_or_default();
            let analytic = analytic_signal(input)?;
            // Single input line: the probe envelope rides comb line 0.
            let w0 = omega0.rad_per_s();
            let n_lines = (comb.q_max - comb.q_min + 1) as usize;
            let mut data = vec![vec![num_complex::Complex64::default(); input.grid.len()]; n_lines];
            let line0 = (-comb.q_min) as usize;
            for (k, t) in input.grid.times().enumerate() {
                data[line0][k] =
                    analytic.samples()[k] * num_complex::Complex64::from_polar(1.0, w0 * t);
            }
            let set = SidebandSet {
                omega0: w0,
                omega_m: params.omega_m,
                q_min: comb.q_min,
                q_max: comb.q_max,
                env: Envelopes::Sampled { grid: input.grid, data },
            };
            set.validate()?;
            let out = propagate_sidebands(
                &set,
                state,
                &tables,
                &cfg,
                scheme == SchemeChoice::SidebandFull,
            )?;
            Ok(out.synthesize(&input.grid).real_field())
        }
        SchemeChoice::Analytic => unreachable!(),
    }
}

fn write_artifacts(
    scenario: &Scenario,
    out: &mut RunOutput,
    cascade: Option<&CascadeResult>,
    dir: &Path,
) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let known = [
        "field",
        "spectrum",
        "metrics",
        "conservation",
        "gvd",
        "coherence",
        "drive_spectrum",
    ];
    for name in &scenario.outputs {
        if !known.contains(&name.as_str()) {
            return Err(Error::Validation(format!(
                "outputs: unknown artifact '{name}' (known: {})",
                known.join(", ")
            )));
        }
    }
    let tm = out.params.raman_period();
    let eta_frame = scenario.run.scheme == SchemeChoice::Analytic;
    let time_label = if eta_frame { "eta_fs" } else { "tau_fs" };
    let ratio_label = if eta_frame { "eta_over_tm" } else { "tau_over_tm" };

    for name in &scenario.outputs {
        match name.as_str() {
            "field" => {
                let peak = out.input.peak().max(1e-300);
                let grid = out.input.grid;
                let rows = (0..grid.len()).map(|k| {
                    let t = grid.time(k);
                    let e_in = out.input.samples()[k];
                    let e_out = out.output.samples()[k];
                    vec![t * 1e15, t / tm, e_in, e_out, e_in / peak, e_out / peak]
                });
                write_csv(
                    dir.join("field.csv"),
                    &[
                        time_label,
                        ratio_label,
                        "e_in_v_per_m",
                        "e_out_v_per_m",
                        "e_in_norm",
                        "e_out_norm",
                    ],
                    rows,
                )?;
                out.record.artifacts.push("field.csv".into());
            }
            "spectrum" => {
                if let Some(spec) = &out.spectrum_out {
                    let spec_in = spectrum_of(&out.input)?;
                    let peak_in = spec_in
                        .amplitude
                        .iter()
                        .map(|a| a.norm_sqr())
                        .fold(0.0_f64, f64::max)
                        .max(1e-300);
                    let rows = spec
                        .omega
                        .iter()
                        .zip(&spec.amplitude)
                        .zip(&spec_in.amplitude)
                        .filter(|((w, _), _)| **w > 0.0)
                        .map(|((w, a_out), a_in)| {
                            vec![
                                *w,
                                *w / out.params.omega_m,
                                a_in.norm_sqr(),
                                a_out.norm_sqr(),
                                a_in.norm_sqr() / peak_in,
                                a_out.norm_sqr() / peak_in,
                            ]
                        });
                    write_csv(
                        dir.join("spectrum.csv"),
                        &[
                            "omega_rad_per_s",
                            "omega_over_omega_m",
                            "power_in",
                            "power_out",
                            "power_in_norm",
                            "power_out_norm",
                        ],
                        rows,
                    )?;
                    out.record.artifacts.push("spectrum.csv".into());
                }
            }
            "metrics" => {
                let payload = serde_json::json!({
                    "input": out.input_metrics,
                    "output": out.output_metrics,
                    "sidebands": out.spectral,
                    "spectral_span_over_omega_m": out.spectral_span_over_omega_m,
                });
                std::fs::write(
                    dir.join("metrics.json"),
                    serde_json::to_string_pretty(&payload)
                        .map_err(|e| Error::Parse(e.to_string()))?
                        + "\n",
                )?;
                out.record.artifacts.push("metrics.json".into());
            }
            "conservation" => {
                if let Some(report) = &out.conservation {
                    std::fs::write(
                        dir.join("conservation.json"),
                        serde_json::to_string_pretty(report)
                            .map_err(|e| Error::Parse(e.to_string()))?
                            + "\n",
                    )?;
                    out.record.artifacts.push("conservation.json".into());
                }
            }
            "gvd" => {
                if let Some(analysis) = &out.gvd {
                    std::fs::write(
                        dir.join("gvd.json"),
                        serde_json::to_string_pretty(analysis)
                            .map_err(|e| Error::Parse(e.to_string()))?
                            + "\n",
                    )?;
                    out.record.artifacts.push("gvd.json".into());
                }
            }
            "coherence" => {
                if let Some(result) = cascade {
                    let probe_tau = scenario
                        .probe
                        .as_ref()
                        .and_then(|p| p.peak_tau_fs)
                        .unwrap_or(0.0)
                        * 1e-15;
                    let rows = (0..result.z.len()).map(|zi| {
                        let k = ((probe_tau - result.tau_grid.origin())
                            / result.tau_grid.dt())
                        .round()
                        .clamp(0.0, (result.tau_grid.len() - 1) as f64)
                            as usize;
                        let s = result.states[zi][k];
                        vec![
                            result.z[zi] * 1e6,
                            s.rho_aa,
                            s.rho_bb,
                            s.rho_ab.norm(),
                            s.rho_ab.arg(),
                        ]
                    });
                    write_csv(
                        dir.join("coherence.csv"),
                        &["z_um", "rho_aa", "rho_bb", "rho_ab_abs", "rho_ab_arg"],
                        rows,
                    )?;
                    out.record.artifacts.push("coherence.csv".into());
                }
            }
            "drive_spectrum" => {
                if let Some(result) = cascade {
                    let set = result.final_sidebands();
                    if let Envelopes::Sampled { grid, data } = &set.env {
                        let powers: Vec<f64> = data
                            .iter()
                            .map(|env| {
                                env.iter().map(|a| a.norm_sqr()).sum::<f64>() * grid.dt()
                            })
                            .collect();
                        let max = powers.iter().cloned().fold(0.0_f64, f64::max).max(1e-300);
                        let rows = powers.iter().enumerate().map(|(i, p)| {
                            let q = set.q_min + i as i32;
                            vec![q as f64, set.omega_q(q), *p, p / max]
                        });
                        write_csv(
                            dir.join("drive_spectrum.csv"),
                            &["q", "omega_rad_per_s", "power", "power_norm"],
                            rows,
                        )?;
                        out.record.artifacts.push("drive_spectrum.csv".into());
                    }
                }
            }
            _ => unreachable!("validated above"),
        }
    }
    Ok(())
}

/// Numeric axis of a parameter sweep.
#[derive(Debug, Clone)]
pub struct SweepAxis {
    /// Dotted path of a numeric scenario field, e.g. `run.z_um`.
    pub path: String,
    pub values: Vec<f64>,
}

/// Per-point summary row of a sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepPoint {
    pub index: usize,
    pub value: f64,
    pub alpha_z: Option<f64>,
    pub peak_out_norm: Option<f64>,
    pub fwhm_out_fs: Option<f64>,
    pub compression_factor: Option<f64>,
    pub mean_frequency_ratio: Option<f64>,
    pub energy_ratio: Option<f64>,
    pub error: Option<String>,
}

/// Run one scenario per axis value in a worker pool and write a summary
/// table; per-point artifacts land in `point_<index>/` subdirectories.
///
/// Worker count comes from `RAMAN_BEAT_THREADS` or the machine's available
/// parallelism; output ordering is by axis index regardless of completion
/// order. A failing point is recorded and reported as an error after all
/// points ran.
pub fn sweep(
    scenario: &Scenario,
    axis: &SweepAxis,
    out_dir: Option<&Path>,
) -> Result<Vec<SweepPoint>> {
    if axis.values.is_empty() {
        return Err(Error::Validation("sweep: empty axis".into()));
    }
    let threads = std::env::var("RAMAN_BEAT_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| {
            std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
        })
        .min(axis.values.len());

    let mut slots: Vec<Option<SweepPoint>> = vec![None; axis.values.len()];
    let next = std::sync::atomic::AtomicUsize::new(0);
    let slot_refs = std::sync::Mutex::new(&mut slots);

    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                if idx >= axis.values.len() {
                    break;
                }
                let value = axis.values[idx];
                let point = run_sweep_point(scenario, axis, idx, value, out_dir);
                let mut guard = slot_refs.lock().expect("sweep slot lock");
                guard[idx] = Some(point);
            });
        }
    });

    let points: Vec<SweepPoint> =
        slots.into_iter().map(|p| p.expect("all sweep points filled")).collect();

    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir)?;
        let rows = points.iter().map(|p| {
            vec![
                p.index as f64,
                p.value,
                p.alpha_z.unwrap_or(f64::NAN),
                p.peak_out_norm.unwrap_or(f64::NAN),
                p.fwhm_out_fs.unwrap_or(f64::NAN),
                p.compression_factor.unwrap_or(f64::NAN),
                p.mean_frequency_ratio.unwrap_or(f64::NAN),
                p.energy_ratio.unwrap_or(f64::NAN),
            ]
        });
        write_csv(
            dir.join("sweep.csv"),
            &[
                "index",
                "value",
                "alpha_z",
                "peak_out_norm",
                "fwhm_out_fs",
                "compression_factor",
                "mean_frequency_ratio",
                "energy_ratio",
            ],
            rows,
        )?;
    }

    let failures: Vec<&SweepPoint> = points.iter().filter(|p| p.error.is_some()).collect();
    if !failures.is_empty() {
        return Err(Error::Domain(format!(
            "{} of {} sweep points failed (first: point {} — {}); partial results written",
            failures.len(),
            points.len(),
            failures[0].index,
            failures[0].error.as_deref().unwrap_or("unknown")
        )));
    }
    Ok(points)
}

fn run_sweep_point(
    scenario: &Scenario,
    axis: &SweepAxis,
    idx: usize,
    value: f64,
    out_dir: Option<&Path>,
) -> SweepPoint {
    let mut point = SweepPoint {
        index: idx,
        value,
        alpha_z: None,
        peak_out_norm: None,
        fwhm_out_fs: None,
        compression_factor: None,
        mean_frequency_ratio: None,
        energy_ratio: None,
        error: None,
    };
    let patched = scenario.with_overrides(&[(
        axis.path.clone(),
        serde_json::Value::from(value),
    )]);
    let result = patched.and_then(|s| {
        let sub = out_dir.map(|d| d.join(format!("point_{idx:03}")));
        run_scenario(&s, sub.as_deref())
    });
    match result {
        Ok(run) => {
            point.alpha_z = Some(run.alpha_z);
            point.peak_out_norm = Some(run.output.peak() / run.input.peak().max(1e-300));
            point.fwhm_out_fs = run.output_metrics.as_ref().map(|m| m.intensity_fwhm * 1e15);
            point.compression_factor =
                run.output_metrics.as_ref().and_then(|m| m.compression_factor);
            point.mean_frequency_ratio = match (&run.input_metrics, &run.output_metrics) {
                (Some(i), Some(o)) => Some(o.mean_frequency / i.mean_frequency),
                _ => None,
            };
            point.energy_ratio = match (&run.input_metrics, &run.output_metrics) {
                (Some(i), Some(o)) => Some(o.energy / i.energy),
                _ => None,
            };
        }
        Err(e) => point.error = Some(e.to_string()),
    }
    point
}

/// Preparation summary for the `prepare` subcommand.
#[derive(Debug, Clone, Serialize)]
pub struct PrepareReport {
    pub theta_rad: f64,
    pub phi0_rad: f64,
    pub rho_aa: f64,
    pub rho_bb: f64,
    pub rho0: f64,
    pub kappa_per_m: f64,
    pub alpha_per_m: f64,
    pub alpha_z: Option<f64>,
    pub warnings: Vec<String>,
}

/// Resolve the prepared coherence of a scenario without propagating.
pub fn prepare_report(scenario: &Scenario) -> Result<PrepareReport> {
    let params = scenario.medium.resolve()?;
    let (coherence, state, warnings) = resolve_coherence(scenario, &params)?;
    let alpha = coupling_alpha(&params, coherence.rho0)?;
    let alpha_z = match (scenario.run.z_um, scenario.run.alpha_z) {
        (Some(z), _) => Some(alpha * z * 1e-6),
        (None, Some(az)) => Some(az),
        _ => None,
    };
    let mut all_warnings = params.ordering_violations();
    all_warnings.extend(warnings);
    Ok(PrepareReport {
        theta_rad: coherence.theta,
        phi0_rad: coherence.phi0,
        rho_aa: state.rho_aa,
        rho_bb: state.rho_bb,
        rho0: coherence.rho0,
        kappa_per_m: coherence.kappa,
        alpha_per_m: alpha,
        alpha_z,
        warnings: all_warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fig2_scenario_runs_in_memory() {
        let mut scenario = Scenario::preset("fig2").unwrap();
        // Shrink for a unit test.
        scenario.run.grid.n = 8192;
        let out = run_scenario(&scenario, None).unwrap();
        assert!((out.alpha_z - 0.6).abs() < 1e-12);
        let growth = out.output.peak() / out.input.peak();
        assert!((growth - 0.6_f64.exp()).abs() < 0.05, "growth {growth}");
        let report = out.conservation.expect("analytic run reports conservation");
        assert_eq!(report.crossings_in, report.crossings_out);
    }

    #[test]
    fn empty_probe_succeeds_with_zero_outputs() {
        let mut scenario = Scenario::preset("fig2").unwrap();
        scenario.run.grid.n = 2048;
        scenario.probe.as_mut().unwrap().amplitude_v_per_m = 0.0;
        let out = run_scenario(&scenario, None).unwrap();
        assert_eq!(out.output.peak(), 0.0);
        assert!(out.input_metrics.is_none());
    }

    #[test]
    fn missing_z_and_alpha_z_rejected() {
        let mut scenario = Scenario::preset("fig2").unwrap();
        scenario.run.alpha_z = None;
        scenario.run.z_um = None;
        assert!(matches!(run_scenario(&scenario, None), Err(Error::Validation(_))));
    }

    #[test]
    fn unknown_artifact_rejected() {
        let mut scenario = Scenario::preset("fig2").unwrap();
        scenario.run.grid.n = 2048;
        scenario.outputs = vec!["plots".into()];
        let dir = std::env::temp_dir().join("raman_beat_unknown_artifact");
        match run_scenario(&scenario, Some(&dir)) {
            Err(Error::Validation(msg)) => assert!(msg.contains("plots")),
            Err(other) => panic!("unexpected error {other}"),
            Ok(_) => panic!("unknown artifact accepted"),
        }
    }

    #[test]
    fn prepare_report_solid_hydrogen() {
        let scenario = Scenario::preset("fig4").unwrap();
        let report = prepare_report(&scenario).unwrap();
        assert!((report.rho_aa - 0.85).abs() < 0.005);
        assert!((report.rho0 - 0.36).abs() < 0.005);
        assert!((report.kappa_per_m - 1.98e5).abs() / 1.98e5 < 0.01);
        assert!((report.alpha_z.unwrap() - 1.59).abs() < 0.02);
    }

    #[test]
    fn single_point_sweep_equals_run() {
        let mut scenario = Scenario::preset("fig2").unwrap();
        scenario.run.grid.n = 4096;
        let axis = SweepAxis { path: "run.alpha_z".into(), values: vec![0.6] };
        let points = sweep(&scenario, &axis, None).unwrap();
        assert_eq!(points.len(), 1);
        let direct = run_scenario(&scenario, None).unwrap();
        let growth = direct.output.peak() / direct.input.peak();
        assert!((points[0].peak_out_norm.unwrap() - growth).abs() < 1e-12);
    }

    #[test]
    fn sweep_eta_p_compression_oscillates() {
        // Short pulse swept across one Raman period: compressed at the
        // gain peak (η_p = T_m/2), stretched at the dip (η_p = 0).
        let mut scenario = Scenario::preset("fig3a").unwrap();
        scenario.run.grid.n = 8192;
        let axis = SweepAxis {
            path: "probe.peak_eta_over_tm".into(),
            values: vec![0.0, 0.5],
        };
        let points = sweep(&scenario, &axis, None).unwrap();
        let dip = points[0].compression_factor.unwrap();
        let peak = points[1].compression_factor.unwrap();
        let az = 0.8_f64;
        assert!((dip - (-az).exp()).abs() < 0.1, "dip compression {dip}");
        assert!((peak - az.exp()).abs() < 0.25, "peak compression {peak}");
    }
}
