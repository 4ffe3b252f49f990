//! Command-line front end; all logic lives in the library's `cli` module.

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use raman_beat::analytic::{bessel_spectrum, BeatParameters, SpectrumMode};
use raman_beat::cli::{
    parse_override, prepare_report, run_scenario, sweep, write_csv, Scenario, SweepAxis,
};
use raman_beat::{Error, Result};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "raman-beat",
    about = "Probe-pulse compression by beating with a prepared Raman coherence",
    version
)]
struct CliArgs {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ScenarioArgs {
    /// Scenario config file (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Built-in preset name (fig2, fig3a–fig3d, fig4, fig5, fig6).
    #[arg(long, global = true)]
    preset: Option<String>,
    /// Output directory for data files.
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,
    /// Dotted-path override, e.g. --set run.alpha_z=1.4 (repeatable).
    #[arg(long = "set", global = true)]
    overrides: Vec<String>,
    /// Record/metric format (series are always CSV).
    #[arg(long, global = true, default_value = "json")]
    format: String,
    /// Reserved for future stochastic features.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

impl ScenarioArgs {
    fn load(&self) -> Result<Scenario> {
        let base = match (&self.config, &self.preset) {
            (Some(path), None) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    Error::Validation(format!("cannot read {}: {e}", path.display()))
                })?;
                Scenario::from_json(&text)?
            }
            (None, Some(name)) => Scenario::preset(name)?,
            (Some(_), Some(_)) => {
                return Err(Error::Validation(
                    "give either --config or --preset, not both".into(),
                ))
            }
            (None, None) => {
                return Err(Error::Validation("need --config or --preset".into()))
            }
        };
        let overrides: Result<Vec<_>> =
            self.overrides.iter().map(|s| parse_override(s)).collect();
        base.with_overrides(&overrides?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Resolve the prepared coherence (θ, ρ, κ, α) without propagating.
    Prepare(ScenarioArgs),
    /// Run the exact dispersionless beat engine.
    Beat(ScenarioArgs),
    /// Run a dispersive propagation scheme.
    Propagate {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Override the scenario's scheme
        /// (analytic|dispersionless|freq-domain|sideband-svea|sideband-full|
        /// time-domain-full|time-domain-offres).
        #[arg(long)]
        scheme: Option<String>,
    },
    /// Run the self-consistent drive cascade, then beat the probe on the
    /// prepared coherence map.
    Cascade(ScenarioArgs),
    /// Evaluate the closed-form sideband spectra.
    Spectrum {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// full-product | single-bessel | linearized | two-color
        #[arg(long, default_value = "full-product")]
        mode: String,
        /// Sideband range as min:max.
        #[arg(long, default_value = "-12:24")]
        q_range: String,
        /// Stokes input amplitude for two-color mode.
        #[arg(long, default_value_t = 0.0)]
        stokes_amplitude: f64,
    },
    /// Sweep one numeric scenario field over a list of values.
    Sweep {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Axis spec path=v1,v2,... e.g. --axis run.z_um=20,30,40,50
        #[arg(long)]
        axis: String,
    },
}

fn main() {
    let args = CliArgs::parse();
    let code = match dispatch(args) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Validation(_) | Error::Parse(_) | Error::Domain(_) => 1,
                _ => 2,
            }
        }
    };
    std::process::exit(code);
}

fn dispatch(args: CliArgs) -> Result<()> {
    match args.command {
        Command::Prepare(scenario_args) => {
            let scenario = scenario_args.load()?;
            let report = prepare_report(&scenario)?;
            std::fs::create_dir_all(&scenario_args.out_dir)?;
            let path = scenario_args.out_dir.join("prepare.json");
            std::fs::write(
                &path,
                serde_json::to_string_pretty(&report)
                    .map_err(|e| Error::Parse(e.to_string()))?
                    + "\n",
            )?;
            println!(
                "θ = {:+.4} rad  ρ_aa = {:.4}  ρ_bb = {:.4}  ρ₀ = {:.4}",
                report.theta_rad, report.rho_aa, report.rho_bb, report.rho0
            );
            println!(
                "κ = {:.4e} m⁻¹  α = {:.4e} m⁻¹  αz = {}",
                report.kappa_per_m,
                report.alpha_per_m,
                report
                    .alpha_z
                    .map(|v| format!("{v:.4}"))
                    .unwrap_or_else(|| "n/a".into())
            );
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            println!("wrote {}", path.display());
            Ok(())
        }
        Command::Beat(scenario_args) => {
            let mut scenario = scenario_args.load()?;
            scenario.run.scheme = raman_beat::cli::SchemeChoice::Analytic;
            run_and_report(&scenario, &scenario_args)
        }
        Command::Propagate { scenario: scenario_args, scheme } => {
            let mut scenario = scenario_args.load()?;
            if let Some(name) = scheme {
                scenario.run.scheme = serde_json::from_value(serde_json::Value::String(name))
                    .map_err(|e| Error::Validation(format!("--scheme: {e}")))?;
            }
            run_and_report(&scenario, &scenario_args)
        }
        Command::Cascade(scenario_args) => {
            let scenario = scenario_args.load()?;
            if scenario.run.cascade.is_none() {
                return Err(Error::Validation(
                    "cascade: scenario needs a run.cascade section".into(),
                ));
            }
            run_and_report(&scenario, &scenario_args)
        }
        Command::Spectrum { scenario: scenario_args, mode, q_range, stokes_amplitude } => {
            let scenario = scenario_args.load()?;
            spectrum_command(&scenario, &scenario_args, &mode, &q_range, stokes_amplitude)
        }
        Command::Sweep { scenario: scenario_args, axis } => {
            let scenario = scenario_args.load()?;
            let (path, values_text) = axis.split_once('=').ok_or_else(|| {
                Error::Validation("--axis must have the form path=v1,v2,...".into())
            })?;
            let values: Result<Vec<f64>> = values_text
                .split(',')
                .map(|v| {
                    v.trim().parse::<f64>().map_err(|e| {
                        Error::Validation(format!("--axis value '{v}': {e}"))
                    })
                })
                .collect();
            let axis = SweepAxis { path: path.trim().to_string(), values: values? };
            let points = sweep(&scenario, &axis, Some(&scenario_args.out_dir))?;
            for p in &points {
                println!(
                    "point {:3}  {} = {:<12.6}  αz = {:<8.4}  peak_out/in = {:.4}",
                    p.index,
                    axis.path,
                    p.value,
                    p.alpha_z.unwrap_or(f64::NAN),
                    p.peak_out_norm.unwrap_or(f64::NAN)
                );
            }
            println!("wrote {}", scenario_args.out_dir.join("sweep.csv").display());
            Ok(())
        }
    }
}

fn run_and_report(scenario: &Scenario, args: &ScenarioArgs) -> Result<()> {
    let out = run_scenario(scenario, Some(&args.out_dir))?;
    for w in &out.record.warnings {
        eprintln!("warning: {w}");
    }
    println!(
        "αz = {:.4}  z = {:.3e} m  peak_out/in = {:.4}",
        out.alpha_z,
        out.z,
        out.output.peak() / out.input.peak().max(1e-300)
    );
    if let Some(m) = &out.output_metrics {
        println!(
            "output: FWHM = {:.3e} s  sub-pulses = {}  mean ω = {:.4e} rad/s",
            m.intensity_fwhm, m.sub_pulse_count, m.mean_frequency
        );
    }
    if let Some(c) = &out.cascade {
        println!(
            "cascade: |ρ_ab|(entrance/mean/min) = {:.3}/{:.3}/{:.3}  drive sidebands = {}  flux drift = {:.2e}",
            c.coherence_entrance, c.coherence_mean, c.coherence_min, c.drive_sidebands, c.flux_drift
        );
    }
    println!("wrote {}", args.out_dir.join("record.json").display());
    Ok(())
}

fn spectrum_command(
    scenario: &Scenario,
    args: &ScenarioArgs,
    mode: &str,
    q_range: &str,
    stokes_amplitude: f64,
) -> Result<()> {
    let params = scenario.medium.resolve()?;
    let report = prepare_report(scenario)?;
    let alpha_z = report.alpha_z.ok_or_else(|| {
        Error::Validation("spectrum: scenario must pin z_um or alpha_z".into())
    })?;
    let probe = scenario
        .probe
        .as_ref()
        .ok_or_else(|| Error::Validation("spectrum: scenario needs a probe".into()))?;
    let omega0 = probe.carrier(params.omega_m)?;
    let z = if report.alpha_per_m > 0.0 { alpha_z / report.alpha_per_m } else { 1.0 };
    let p = BeatParameters {
        alpha: if z > 0.0 { alpha_z / z } else { 0.0 },
        omega_m: params.omega_m,
        z,
        kappa: report.kappa_per_m,
        phi: 0.0,
    };
    let (lo, hi) = q_range
        .split_once(':')
        .ok_or_else(|| Error::Validation("--q-range must be min:max".into()))?;
    let lo: i64 = lo.parse().map_err(|e| Error::Validation(format!("--q-range: {e}")))?;
    let hi: i64 = hi.parse().map_err(|e| Error::Validation(format!("--q-range: {e}")))?;
    let mode = match mode {
        "full-product" => SpectrumMode::FullProduct,
        "single-bessel" => SpectrumMode::SingleBessel,
        "linearized" => SpectrumMode::Linearized,
        "two-color" => SpectrumMode::TwoColor {
            stokes_input: Complex64::new(stokes_amplitude, 0.0),
        },
        other => {
            return Err(Error::Validation(format!(
                "--mode '{other}' is not one of full-product, single-bessel, linearized, two-color"
            )))
        }
    };
    let spec = bessel_spectrum(&p, omega0, lo..=hi, mode, Complex64::new(1.0, 0.0))?;
    if let Some(v) = &spec.validity {
        if !v.satisfied {
            eprintln!(
                "warning: outside the reduced-mode regime: tanh(αz/2) = {:.3}, (ω₀/ω_m)·tanh² = {:.3}",
                v.tanh_half, v.bandwidth_ratio
            );
        }
    }
    std::fs::create_dir_all(&args.out_dir)?;
    let path = args.out_dir.join("sidebands.csv");
    let rows = spec.iter().map(|(q, a)| {
        vec![
            q as f64,
            omega0.rad_per_s() + q as f64 * params.omega_m,
            a.re,
            a.im,
            a.norm_sqr(),
        ]
    });
    write_csv(&path, &["q", "omega_rad_per_s", "re", "im", "power"], rows)?;
    println!("αz = {alpha_z:.4}  γz = {:.4}", alpha_z * omega0.rad_per_s() / params.omega_m);
    println!("wrote {}", path.display());
    Ok(())
}
