//! CSV/JSON emission and run records.

use crate::error::{Error, Result};
use crate::math::fnv1a_64;
use serde::Serialize;
use std::io::Write;
use std::path::Path;

/// Write an RFC-4180 CSV (UTF-8, LF) with a header row; floats carry 17
/// significant digits so a re-read is bit-exact.
pub fn write_csv<P: AsRef<Path>>(
    path: P,
    headers: &[&str],
    rows: impl Iterator<Item = Vec<f64>>,
) -> Result<()> {
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    file.write_all(headers.join(",").as_bytes())?;
    file.write_all(b"\n")?;
    for row in rows {
        if row.len() != headers.len() {
            return Err(Error::Domain(format!(
                "csv row has {} fields, header has {}",
                row.len(),
                headers.len()
            )));
        }
        let mut first = true;
        for v in row {
            if !first {
                file.write_all(b",")?;
            }
            first = false;
            write!(file, "{v:.16e}")?;
        }
        file.write_all(b"\n")?;
    }
    file.flush()?;
    Ok(())
}

/// Provenance record of one scenario run.
#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    /// FNV-1a hash of the canonical resolved scenario JSON.
    pub scenario_hash: String,
    /// Library version.
    pub version: String,
    /// Fully resolved scenario.
    pub scenario: serde_json::Value,
    /// Validation warnings (far-off-resonance ordering etc.).
    pub warnings: Vec<String>,
    /// Scheme-dependent metric payload.
    pub metrics: serde_json::Value,
    /// Files written by the run, relative to the output directory.
    pub artifacts: Vec<String>,
    pub started_unix_ms: u128,
    pub finished_unix_ms: u128,
}

impl RunRecord {
    pub fn begin(scenario: &super::Scenario) -> Self {
        let canonical = scenario.canonical_json();
        Self {
            scenario_hash: format!("{:016x}", fnv1a_64(canonical.as_bytes())),
            version: env!("CARGO_PKG_VERSION").to_string(),
            scenario: serde_json::to_value(scenario).expect("scenario serializes"),
            warnings: Vec::new(),
            metrics: serde_json::Value::Null,
            artifacts: Vec::new(),
            started_unix_ms: now_ms(),
            finished_unix_ms: 0,
        }
    }

    pub fn finish(&mut self) {
        self.finished_unix_ms = now_ms();
    }

    pub fn write<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let text = serde_json::to_string_pretty(self)
            .map_err(|e| Error::Parse(format!("record serialization: {e}")))?;
        std::fs::write(path, text + "\n")?;
        Ok(())
    }
}

fn now_ms() -> u128 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_millis())
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_is_lf_and_round_trip_exact() {
        let dir = std::env::temp_dir().join("raman_beat_csv_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("t.csv");
        let values = [1.0 / 3.0, 2.5e-15, -7.123456789012345e8];
        write_csv(&path, &["a", "b", "c"], std::iter::once(values.to_vec())).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(!text.contains('\r'));
        let line = text.lines().nth(1).unwrap();
        for (field, want) in line.split(',').zip(values) {
            let back: f64 = field.parse().unwrap();
            assert_eq!(back, want, "field {field} did not round-trip");
        }
    }
}
