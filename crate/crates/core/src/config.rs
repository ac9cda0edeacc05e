//! Flat `key = value` run configuration.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::dynamics::DriveConfig;
use crate::error::{Error, Result};
use crate::hom::DetectorModel;
use crate::model::{GridConfig, Treatment};
use crate::phonon::{PhononEnvironment, PhononGrid};

pub const KEYS: [&str; 14] = [
    "alpha_ps2",
    "nu_c_psinv",
    "temperature_K",
    "omega_psinv",
    "gamma_psinv",
    "detuning_psinv",
    "detector_fwhm_ps",
    "markovian",
    "phonon_tau_max_ps",
    "phonon_tau_step_ps",
    "optical_tau_max_ps",
    "freq_min_psinv",
    "freq_max_psinv",
    "freq_points",
];

/// Complete, validated run configuration.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SimConfig {
    pub phonon: PhononEnvironment,
    pub drive: DriveConfig,
    pub detector: DetectorModel,
    pub grids: GridConfig,
    pub treatment: Treatment,
    pub output_path: Option<std::path::PathBuf>,
}

fn key_error(key: &str, line: usize, message: impl Into<String>) -> Error {
    Error::ConfigKey {
        key: key.to_string(),
        line,
        message: message.into(),
    }
}

fn parse_number(key: &str, line: usize, raw: &str) -> Result<f64> {
    let v: f64 = raw
        .parse()
        .map_err(|_| key_error(key, line, format!("cannot parse `{raw}` as a number")))?;
    if !v.is_finite() {
        return Err(key_error(key, line, "value must be finite"));
    }
    Ok(v)
}

fn parse_bool(key: &str, line: usize, raw: &str) -> Result<bool> {
    match raw.to_ascii_lowercase().as_str() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(key_error(key, line, format!("cannot parse `{raw}` as a boolean"))),
    }
}

fn require(cond: bool, key: &str, line: usize, message: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(key_error(key, line, message))
    }
}

/// Parses a `key = value` document; omitted keys take their defaults.
pub fn parse_config(text: &str) -> Result<SimConfig> {
    let mut cfg = SimConfig::default();
    let mut seen = HashSet::new();
    // Line of each key, for cross-key checks.
    let line_of =
        |key: &str, lines: &[(String, usize)]| lines.iter().find(|(k, _)| k == key).map(|(_, l)| *l).unwrap_or(0);
    let mut lines: Vec<(String, usize)> = Vec::new();

    for (index, raw_line) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(key_error(content, line, "expected `key = value`"));
        };
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(key_error(key, line, "unknown key"));
        }
        if !seen.insert(key.to_string()) {
            return Err(key_error(key, line, "duplicate key"));
        }
        lines.push((key.to_string(), line));

        match key {
            "markovian" => cfg.treatment = Treatment::from_flag(parse_bool(key, line, value)?),
            "freq_points" => {
                let n: usize = value
                    .parse()
                    .map_err(|_| key_error(key, line, format!("cannot parse `{value}` as a count")))?;
                require(n >= 2, key, line, "need at least 2 points")?;
                cfg.grids.freq_points = n;
            }
            _ => {
                let v = parse_number(key, line, value)?;
                match key {
                    "alpha_ps2" => {
                        require(v >= 0.0, key, line, "must be ≥ 0")?;
                        cfg.phonon.alpha = v;
                    }
                    "nu_c_psinv" => {
                        require(v > 0.0, key, line, "must be > 0")?;
                        cfg.phonon.nu_c = v;
                    }
                    "temperature_K" => {
                        require(v >= 0.0, key, line, "must be ≥ 0")?;
                        cfg.phonon.temperature = v;
                    }
                    "omega_psinv" => {
                        require(v >= 0.0, key, line, "must be ≥ 0")?;
                        cfg.drive.omega = v;
                    }
                    "gamma_psinv" => {
                        require(v > 0.0, key, line, "must be > 0")?;
                        cfg.drive.gamma = v;
                    }
                    "detuning_psinv" => {
                        require(v == 0.0, key, line, "only zero detuning is supported")?;
                        cfg.drive.detuning_tilde = v;
                    }
                    "detector_fwhm_ps" => {
                        require(v > 0.0, key, line, "must be > 0")?;
                        cfg.detector.fwhm = v;
                    }
                    "phonon_tau_max_ps" => {
                        require(v > 0.0, key, line, "must be > 0")?;
                        cfg.grids.phonon.tau_max = v;
                    }
                    "phonon_tau_step_ps" => {
                        require(v > 0.0 && v <= 0.01, key, line, "must lie in (0, 0.01]")?;
                        cfg.grids.phonon.step = v;
                    }
                    "optical_tau_max_ps" => {
                        require(v > 0.0, key, line, "must be > 0")?;
                        cfg.grids.optical_tau_max = Some(v);
                    }
                    "freq_min_psinv" => cfg.grids.freq_min = v,
                    "freq_max_psinv" => cfg.grids.freq_max = v,
                    _ => unreachable!("key list checked above"),
                }
            }
        }
    }

    let min_span = 20.0 / cfg.phonon.nu_c;
    if cfg.grids.phonon.tau_max < min_span {
        let key = if seen.contains("phonon_tau_max_ps") {
            "phonon_tau_max_ps"
        } else {
            "nu_c_psinv"
        };
        return Err(key_error(
            key,
            line_of(key, &lines),
            format!("phonon span must be at least 20/ν_c = {min_span} ps"),
        ));
    }
    if let Some(t) = cfg.grids.optical_tau_max {
        require(
            t > cfg.grids.phonon.tau_max,
            "optical_tau_max_ps",
            line_of("optical_tau_max_ps", &lines),
            "must exceed phonon_tau_max_ps",
        )?;
    }
    if !(cfg.grids.freq_max > cfg.grids.freq_min) {
        let key = if seen.contains("freq_max_psinv") {
            "freq_max_psinv"
        } else {
            "freq_min_psinv"
        };
        return Err(key_error(
            key,
            line_of(key, &lines),
            "freq_max_psinv must exceed freq_min_psinv",
        ));
    }
    cfg.grids.validate()?;
    Ok(cfg)
}

impl SimConfig {
    /// Phonon grid of this configuration.
    pub fn phonon_grid(&self) -> PhononGrid {
        self.grids.phonon
    }

    /// Every key with its resolved value, in a form [`parse_config`] reads back.
    pub fn to_config_text(&self) -> String {
        let g = &self.grids;
        let mut out = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        put("alpha_ps2", self.phonon.alpha.to_string());
        put("nu_c_psinv", self.phonon.nu_c.to_string());
        put("temperature_K", self.phonon.temperature.to_string());
        put("omega_psinv", self.drive.omega.to_string());
        put("gamma_psinv", self.drive.gamma.to_string());
        put("detuning_psinv", self.drive.detuning_tilde.to_string());
        put("detector_fwhm_ps", self.detector.fwhm.to_string());
        put("markovian", self.treatment.is_markovian().to_string());
        put("phonon_tau_max_ps", g.phonon.tau_max.to_string());
        put("phonon_tau_step_ps", g.phonon.step.to_string());
        put("optical_tau_max_ps", g.optical_tau_max(self.drive.gamma).to_string());
        put("freq_min_psinv", g.freq_min.to_string());
        put("freq_max_psinv", g.freq_max.to_string());
        put("freq_points", g.freq_points.to_string());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_gives_defaults() {
        let cfg = parse_config("").unwrap();
        assert_eq!(cfg, SimConfig::default());
        assert_eq!(cfg.drive.omega, 0.01);
        assert_eq!(cfg.drive.gamma, 1.0 / 700.0);
        assert_eq!(cfg.phonon, PhononEnvironment::new(0.03, 2.2, 4.0).unwrap());
        assert_eq!(cfg.detector.fwhm, 400.0);
    }

    #[test]
    fn single_override() {
        let cfg = parse_config("temperature_K = 15\n").unwrap();
        let mut expected = SimConfig::default();
        expected.phonon.temperature = 15.0;
        assert_eq!(cfg, expected);
    }

    #[test]
    fn comments_and_blank_lines() {
        let cfg = parse_config("# header\n\n  omega_psinv = 0.02  # stronger\nmarkovian = true\n").unwrap();
        assert_eq!(cfg.drive.omega, 0.02);
        assert!(cfg.treatment.is_markovian());
    }

    #[test]
    fn negative_alpha_names_key() {
        let err = parse_config("alpha_ps2 = -1").unwrap_err();
        match err {
            Error::ConfigKey { key, line, .. } => {
                assert_eq!(key, "alpha_ps2");
                assert_eq!(line, 1);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_config("alpha_ps2 = -1")
            .unwrap_err()
            .to_string()
            .contains("alpha_ps2"));
    }

    #[test]
    fn unknown_and_malformed_rejected() {
        let unknown = parse_config("\nfoo = 1").unwrap_err().to_string();
        assert!(unknown.contains("foo") && unknown.contains("line 2"), "{unknown}");
        assert!(parse_config("gamma_psinv = abc")
            .unwrap_err()
            .to_string()
            .contains("gamma_psinv"));
        assert!(parse_config("gamma_psinv 3").is_err());
        assert!(parse_config("omega_psinv = 1\nomega_psinv = 2").is_err());
        assert!(parse_config("detuning_psinv = 0.1").is_err());
        assert!(parse_config("phonon_tau_max_ps = 2")
            .unwrap_err()
            .to_string()
            .contains("phonon_tau_max_ps"));
    }

    #[test]
    fn echo_round_trips() {
        let cfg = parse_config("temperature_K = 15\nomega_psinv = 0.003\nfreq_points = 101").unwrap();
        let again = parse_config(&cfg.to_config_text()).unwrap();
        assert_eq!(again.phonon, cfg.phonon);
        assert_eq!(again.drive, cfg.drive);
        assert_eq!(again.grids.freq_points, 101);
        assert_eq!(
            again.grids.optical_tau_max(again.drive.gamma),
            cfg.grids.optical_tau_max(cfg.drive.gamma)
        );
    }
}
