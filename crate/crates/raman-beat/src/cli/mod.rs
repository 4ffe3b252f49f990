//! Scenario configuration, presets, batch sweeps, and plot-ready data
//! export. The `raman-beat` binary is a thin wrapper over this module.
//!
//! Configs are JSON with explicit unit suffixes on every numeric field
//! (`carrier_nm`, `width_fs`, `z_um`, …), so a scenario file is
//! self-describing and machine-checkable. Series are exported as RFC-4180
//! CSV (UTF-8, LF) with 17-significant-digit floats; records and metrics
//! as JSON.

mod io;
mod run;

pub use io::{write_csv, RunRecord};
pub use run::{prepare_report, run_scenario, sweep, CascadeSummary, PrepareReport, RunOutput, SweepAxis, SweepPoint};

use crate::core::{Frequency, WidthConvention};
use crate::error::{Error, Result};
use crate::medium::{Level, LevelTable, MediumParameters};
use serde::{Deserialize, Serialize};

/// Preset scenario files compiled into the binary; each reproduces one of
/// the reference figures at desk scale.
pub const PRESETS: &[(&str, &str)] = &[
    ("fig2", include_str!("../../presets/fig2.json")),
    ("fig3a", include_str!("../../presets/fig3a.json")),
    ("fig3b", include_str!("../../presets/fig3b.json")),
    ("fig3c", include_str!("../../presets/fig3c.json")),
    ("fig3d", include_str!("../../presets/fig3d.json")),
    ("fig4", include_str!("../../presets/fig4.json")),
    ("fig5", include_str!("../../presets/fig5.json")),
    ("fig6", include_str!("../../presets/fig6.json")),
];

pub fn preset_source(name: &str) -> Result<&'static str> {
    PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, s)| *s)
        .ok_or_else(|| {
            let names: Vec<&str> = PRESETS.iter().map(|(n, _)| *n).collect();
            Error::Validation(format!(
                "unknown preset '{name}'; available: {}",
                names.join(", ")
            ))
        })
}

/// Medium description: either explicit coefficients or a level table file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MediumSpec {
    pub density_per_cm3: f64,
    pub omega_m_per_cm: f64,
    pub reference_nm: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level_table_csv: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a0_si: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b0_si: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d0_si: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a1_si: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b1_si: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d1_si: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a2_si: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b2_si: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d2_si: Option<f64>,
}

impl MediumSpec {
    pub fn resolve(&self) -> Result<MediumParameters> {
        if self.density_per_cm3 <= 0.0 {
            return Err(Error::Validation(
                "medium.density_per_cm3: must be positive".into(),
            ));
        }
        if self.omega_m_per_cm <= 0.0 {
            return Err(Error::Validation(
                "medium.omega_m_per_cm: must be positive".into(),
            ));
        }
        let density = self.density_per_cm3 * 1e6;
        let omega_m = Frequency::from_wavenumber_per_cm(self.omega_m_per_cm)?;
        let reference = Frequency::from_wavelength_nm(self.reference_nm)?;
        if let Some(path) = &self.level_table_csv {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Error::Validation(format!("medium.level_table_csv: cannot read {path}: {e}"))
            })?;
            let table = parse_level_table_csv(&text)?;
            return MediumParameters::from_level_table(&table, density, omega_m, reference);
        }
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| {
                Error::Validation(format!(
                    "medium.{name}: required when no level table is given"
                ))
            })
        };
        MediumParameters::new(
            density,
            omega_m,
            reference,
            [
                need(self.a0_si, "a0_si")?,
                self.a1_si.unwrap_or(0.0),
                self.a2_si.unwrap_or(0.0),
            ],
            [
                need(self.b0_si, "b0_si")?,
                self.b1_si.unwrap_or(0.0),
                self.b2_si.unwrap_or(0.0),
            ],
            [
                need(self.d0_si, "d0_si")?,
                self.d1_si.unwrap_or(0.0),
                self.d2_si.unwrap_or(0.0),
            ],
        )
    }
}

/// Level-table CSV: header `detuning_a_per_cm,detuning_b_per_cm,mu_a_cm,mu_b_cm`,
/// one level per line, detunings in cm⁻¹ and dipole moments in C·m.
pub fn parse_level_table_csv(text: &str) -> Result<LevelTable> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("level table: empty file".into()))?;
    let expected = "detuning_a_per_cm,detuning_b_per_cm,mu_a_cm,mu_b_cm";
    if header.trim() != expected {
        return Err(Error::Parse(format!(
            "level table: header must be exactly '{expected}', got '{header}'"
        )));
    }
    let mut levels = Vec::new();
    for (idx, line) in lines.enumerate() {
        let fields: Vec<&str> = line.trim().split(',').collect();
        if fields.len() != 4 {
            return Err(Error::Parse(format!(
                "level table row {}: expected 4 fields, got {}",
                idx + 1,
                fields.len()
            )));
        }
        let parse = |s: &str, what: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("level table row {}: {what}: {e}", idx + 1)))
        };
        let da = parse(fields[0], "detuning_a_per_cm")?;
        let db = parse(fields[1], "detuning_b_per_cm")?;
        let to_rad =
            |cm: f64| 2.0 * std::f64::consts::PI * crate::constants::SPEED_OF_LIGHT * cm * 100.0;
        levels.push(Level {
            detuning_a: to_rad(da),
            detuning_b: to_rad(db),
            mu_a: parse(fields[2], "mu_a_cm")?,
            mu_b: parse(fields[3], "mu_b_cm")?,
        });
    }
    Ok(LevelTable::new(levels))
}

/// How the coherence is prepared.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum PreparationSpec {
    /// Directly parameterized adiabatic state.
    Direct { theta_rad: f64, phi0_rad: f64 },
    /// Two-line drive; the upper line sits one Raman quantum above the
    /// lower one.
    Adiabatic { drive: DriveSpec },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveSpec {
    pub lower_per_cm: f64,
    pub intensity_w_per_cm2: f64,
    pub width_ns: f64,
    #[serde(default)]
    pub peak_ns: f64,
    pub delta_mhz: f64,
    #[serde(default)]
    pub gamma1_per_s: f64,
    #[serde(default)]
    pub gamma2_per_s: f64,
    #[serde(default)]
    pub relative_phase_rad: f64,
}

impl DriveSpec {
    /// Peak field amplitude from the intensity, `E = sqrt(2I/(cε₀))`.
    pub fn field_amplitude(&self) -> f64 {
        let intensity = self.intensity_w_per_cm2 * 1e4;
        (2.0 * intensity / (crate::constants::SPEED_OF_LIGHT * crate::constants::EPSILON_0))
            .sqrt()
    }

    pub fn resolve(&self, omega_m: f64) -> Result<crate::medium::DriveConfig> {
        if self.intensity_w_per_cm2 < 0.0 {
            return Err(Error::Validation(
                "preparation.drive.intensity_w_per_cm2: must be ≥ 0".into(),
            ));
        }
        if self.width_ns <= 0.0 {
            return Err(Error::Validation(
                "preparation.drive.width_ns: must be positive".into(),
            ));
        }
        let amplitude = self.field_amplitude();
        let lower = Frequency::from_wavenumber_per_cm(self.lower_per_cm)?;
        let mk = |freq: f64, phase: f64| crate::medium::DriveField {
            frequency: Frequency::from_rad_per_s(freq).unwrap(),
            amplitude,
            peak_time: self.peak_ns * 1e-9,
            width: self.width_ns * 1e-9,
            convention: WidthConvention::IntensityFwhm,
            phase,
        };
        let config = crate::medium::DriveConfig {
            lower: mk(lower.rad_per_s(), 0.0),
            upper: mk(lower.rad_per_s() + omega_m, -self.relative_phase_rad),
            delta: 2.0 * std::f64::consts::PI * self.delta_mhz * 1e6,
            gamma1: self.gamma1_per_s,
            gamma2: self.gamma2_per_s,
        };
        config.validate(omega_m)?;
        Ok(config)
    }
}

/// Probe pulse description. The carrier and width accept either absolute
/// units or Raman-relative ones; the peak time is given either in the
/// gain-comb frame (η, dips at integer multiples of `T_m`) or in lab local
/// time τ.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub carrier_nm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub carrier_per_cm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub carrier_over_omega_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width_fs: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width_over_tm: Option<f64>,
    #[serde(default = "default_width_convention")]
    pub width_convention: WidthConvention,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub peak_eta_over_tm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub peak_tau_fs: Option<f64>,
    #[serde(default = "default_amplitude")]
    pub amplitude_v_per_m: f64,
    #[serde(default)]
    pub phase_rad: f64,
}

fn default_width_convention() -> WidthConvention {
    WidthConvention::IntensityFwhm
}

fn default_amplitude() -> f64 {
    1.0
}

impl ProbeSpec {
    pub fn carrier(&self, omega_m: f64) -> Result<Frequency> {
        match (self.carrier_nm, self.carrier_per_cm, self.carrier_over_omega_m) {
            (Some(nm), None, None) => Frequency::from_wavelength_nm(nm),
            (None, Some(cm), None) => Frequency::from_wavenumber_per_cm(cm),
            (None, None, Some(r)) => {
                if r <= 0.0 {
                    return Err(Error::Validation(
                        "probe.carrier_over_omega_m: must be positive".into(),
                    ));
                }
                Frequency::from_rad_per_s(r * omega_m)
            }
            _ => Err(Error::Validation(
                "probe: exactly one of carrier_nm, carrier_per_cm, carrier_over_omega_m".into(),
            )),
        }
    }

    pub fn width(&self, raman_period: f64) -> Result<f64> {
        match (self.width_fs, self.width_over_tm) {
            (Some(fs), None) if fs > 0.0 => Ok(fs * 1e-15),
            (None, Some(r)) if r > 0.0 => Ok(r * raman_period),
            _ => Err(Error::Validation(
                "probe: exactly one positive width_fs or width_over_tm".into(),
            )),
        }
    }

    /// Peak time in the gain-comb frame η (`frame_offset = φ/ω_m` maps τ
    /// to η at z = 0).
    pub fn peak_eta(&self, raman_period: f64, frame_offset: f64) -> Result<f64> {
        match (self.peak_eta_over_tm, self.peak_tau_fs) {
            (Some(r), None) => Ok(r * raman_period),
            (None, Some(fs)) => Ok(fs * 1e-15 + frame_offset),
            (None, None) => Ok(0.0),
            _ => Err(Error::Validation(
                "probe: give at most one of peak_eta_over_tm, peak_tau_fs".into(),
            )),
        }
    }

    /// Peak time in lab local time τ.
    pub fn peak_tau(&self, raman_period: f64, frame_offset: f64) -> Result<f64> {
        match (self.peak_eta_over_tm, self.peak_tau_fs) {
            (Some(r), None) => Ok(r * raman_period - frame_offset),
            (None, Some(fs)) => Ok(fs * 1e-15),
            (None, None) => Ok(0.0),
            _ => Err(Error::Validation(
                "probe: give at most one of peak_eta_over_tm, peak_tau_fs".into(),
            )),
        }
    }
}

/// Which propagation engine a run uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeChoice {
    /// Exact dispersionless remap engine.
    Analytic,
    /// Numeric time-domain solver with zero-dispersion constants.
    Dispersionless,
    FreqDomain,
    SidebandSvea,
    SidebandFull,
    TimeDomainFull,
    TimeDomainOffres,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub span_tm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub span_fs: Option<f64>,
    pub n: usize,
}

impl GridSpec {
    pub fn span(&self, raman_period: f64) -> Result<f64> {
        match (self.span_tm, self.span_fs) {
            (Some(r), None) if r > 0.0 => Ok(r * raman_period),
            (None, Some(fs)) if fs > 0.0 => Ok(fs * 1e-15),
            _ => Err(Error::Validation(
                "run.grid: exactly one positive span_tm or span_fs".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CombSpec {
    pub q_min: i32,
    pub q_max: i32,
}

impl Default for CombSpec {
    fn default() -> Self {
        Self { q_min: -5, q_max: 14 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CascadeSpec {
    pub tau_span_ns: f64,
    pub tau_points: usize,
    #[serde(default)]
    pub comb: CombSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dz_um: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_um: Option<f64>,
    /// Alternative to `z_um`: choose z so that α·z has this value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_z: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dz_um: Option<f64>,
    pub scheme: SchemeChoice,
    pub grid: GridSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comb: Option<CombSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cascade: Option<CascadeSpec>,
    #[serde(default = "default_guard")]
    pub stability_guard: f64,
}

fn default_guard() -> f64 {
    0.1
}

/// One complete simulation scenario.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub medium: MediumSpec,
    pub preparation: PreparationSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe: Option<ProbeSpec>,
    pub run: RunSpec,
    #[serde(default)]
    pub outputs: Vec<String>,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))?;
        Self::from_value(value)
    }

    pub fn from_value(value: serde_json::Value) -> Result<Self> {
        serde_json::from_value(value).map_err(|e| Error::Validation(format!("config: {e}")))
    }

    pub fn preset(name: &str) -> Result<Self> {
        Self::from_json(preset_source(name)?)
    }

    /// Apply dotted-path overrides (`run.alpha_z=1.4`) onto the JSON form
    /// and re-validate.
    pub fn with_overrides(&self, overrides: &[(String, serde_json::Value)]) -> Result<Self> {
        let mut value = serde_json::to_value(self)
            .map_err(|e| Error::Parse(format!("scenario serialization: {e}")))?;
        for (path, new) in overrides {
            set_path(&mut value, path, new.clone())?;
        }
        Self::from_value(value)
    }

    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("scenario serializes")
    }
}

/// Set `value` at a dotted path, creating intermediate objects as needed.
pub fn set_path(root: &mut serde_json::Value, path: &str, value: serde_json::Value) -> Result<()> {
    let mut cursor = root;
    let parts: Vec<&str> = path.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        if part.is_empty() {
            return Err(Error::Validation(format!(
                "override path '{path}' has an empty segment"
            )));
        }
        let obj = cursor.as_object_mut().ok_or_else(|| {
            Error::Validation(format!("override path '{path}': '{part}' is not an object"))
        })?;
        if i + 1 == parts.len() {
            obj.insert(part.to_string(), value);
            return Ok(());
        }
        cursor = obj
            .entry(part.to_string())
            .or_insert_with(|| serde_json::Value::Object(Default::default()));
    }
    Ok(())
}

/// Parse a `key=value` override; the value is parsed as JSON when
/// possible, falling back to a string.
pub fn parse_override(text: &str) -> Result<(String, serde_json::Value)> {
    let (key, raw) = text.split_once('=').ok_or_else(|| {
        Error::Validation(format!("override '{text}' must have the form path=value"))
    })?;
    let value =
        serde_json::from_str(raw).unwrap_or_else(|_| serde_json::Value::String(raw.to_string()));
    Ok((key.trim().to_string(), value))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_parse_and_validate() {
        for (name, _) in PRESETS {
            let scenario = Scenario::preset(name).unwrap_or_else(|e| {
                panic!("preset {name} failed to parse: {e}");
            });
            scenario.medium.resolve().unwrap();
        }
    }

    #[test]
    fn unknown_preset_rejected() {
        assert!(Scenario::preset("fig99").is_err());
    }

    #[test]
    fn preset_fig4_embeds_published_constants() {
        let scenario = Scenario::preset("fig4").unwrap();
        let m = scenario.medium;
        assert_eq!(m.a0_si, Some(2.42e-7));
        assert_eq!(m.b0_si, Some(2.63e-7));
        assert_eq!(m.d0_si, Some(5.50e-8));
        assert_eq!(m.a1_si, Some(3.13e-24));
        assert_eq!(m.d2_si, Some(5.07e-40));
        assert_eq!(m.density_per_cm3, 2.6e22);
        assert_eq!(m.omega_m_per_cm, 4149.7);
        let params = m.resolve().unwrap();
        let solid = MediumParameters::solid_hydrogen();
        assert_eq!(params.a0, solid.a0);
        assert_eq!(params.omega_m, solid.omega_m);
    }

    #[test]
    fn overrides_apply_to_nested_fields() {
        let scenario = Scenario::preset("fig2").unwrap();
        let (k, v) = parse_override("run.alpha_z=1.4").unwrap();
        let patched = scenario.with_overrides(&[(k, v)]).unwrap();
        assert_eq!(patched.run.alpha_z, Some(1.4));
    }

    #[test]
    fn bad_override_paths_rejected() {
        let scenario = Scenario::preset("fig2").unwrap();
        let (k, v) = parse_override("run.grid.n=oops").unwrap();
        assert!(scenario.with_overrides(&[(k, v)]).is_err());
        assert!(parse_override("no-equals-sign").is_err());
    }

    #[test]
    fn unknown_fields_rejected() {
        let mut value = serde_json::to_value(Scenario::preset("fig2").unwrap()).unwrap();
        set_path(&mut value, "run.typo_field", serde_json::json!(1.0)).unwrap();
        let err = Scenario::from_value(value).unwrap_err();
        assert!(matches!(err, Error::Validation(msg) if msg.contains("typo_field")));
    }

    #[test]
    fn level_table_round_trip() {
        let text = "detuning_a_per_cm,detuning_b_per_cm,mu_a_cm,mu_b_cm\n\
                    90000.0,85850.3,1.0e-30,1.1e-30\n";
        let table = parse_level_table_csv(text).unwrap();
        assert_eq!(table.levels.len(), 1);
        let to_rad = 2.0 * std::f64::consts::PI * crate::constants::SPEED_OF_LIGHT * 100.0;
        assert!((table.levels[0].detuning_a - 90000.0 * to_rad).abs() < 1.0);
        assert!(parse_level_table_csv("wrong,header\n1,2\n").is_err());
    }

    #[test]
    fn probe_spec_exclusive_fields() {
        let probe = ProbeSpec {
            carrier_nm: Some(800.0),
            carrier_per_cm: Some(12_500.0),
            carrier_over_omega_m: None,
            width_fs: Some(10.0),
            width_over_tm: None,
            width_convention: WidthConvention::IntensityFwhm,
            peak_eta_over_tm: None,
            peak_tau_fs: None,
            amplitude_v_per_m: 1.0,
            phase_rad: 0.0,
        };
        assert!(probe.carrier(7.8e14).is_err());
    }
}
