//! TOML run configuration with `[system]`, `[feedback]`, `[bath]` and
//! `[sweep]` sections. Missing keys fall back to the default parameter set.

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::model::{
    normalize, normalize_hamiltonian, occupation_from_temperature, BareParams, DetuningMode,
    FeedbackControls, SystemParams,
};
use crate::sweep::{Axis, Measure, Override, PathSelection};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    system: RawSystem,
    #[serde(default)]
    feedback: RawFeedback,
    #[serde(default)]
    bath: RawBath,
    sweep: Option<SweepSection>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSystem {
    /// Read the bare Hamiltonian keys (rates in rad/s) instead of the
    /// dimensionless ones.
    #[serde(default)]
    normalize: bool,
    omega: Option<[f64; 2]>,
    gamma: Option<[f64; 2]>,
    kappa: Option<f64>,
    delta: Option<f64>,
    coupling: Option<[f64; 2]>,
    mu_tilde: Option<f64>,
    omega_c: Option<f64>,
    omega_l: Option<f64>,
    drive: Option<f64>,
    omega_tilde: Option<[f64; 2]>,
    mass: Option<[f64; 2]>,
    lambda: Option<[f64; 2]>,
    mu: Option<f64>,
    omega_m: Option<f64>,
    #[serde(default)]
    self_consistent_detuning: bool,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFeedback {
    gain: Option<[f64; 2]>,
    omega_fb: Option<f64>,
    vartheta: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBath {
    nbar: Option<[f64; 2]>,
    temperature: Option<[f64; 2]>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub scenario: Option<String>,
    pub path: Option<PathSelection>,
    pub tol: Option<f64>,
    pub measure: Option<Measure>,
    #[serde(default)]
    pub axis: Vec<Axis>,
    #[serde(default)]
    pub overrides: Vec<String>,
    /// Masses for the bare-quadrature columns.
    pub bare_mass: Option<[f64; 2]>,
}

impl SweepSection {
    pub fn parsed_overrides(&self) -> Result<Vec<Override>> {
        self.overrides.iter().map(|s| s.parse()).collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    pub params: SystemParams,
    /// Present when the system was given in bare units.
    pub bare: Option<BareParams>,
    pub sweep: Option<SweepSection>,
}

fn required<T>(v: Option<T>, key: &str) -> Result<T> {
    v.ok_or_else(|| Error::Config(format!("[system] `{key}` is required when normalize = true")))
}

fn reject(present: bool, key: &str, normalize: bool) -> Result<()> {
    if present {
        let why = if normalize { "is a dimensionless key; set normalize = false" } else { "needs normalize = true" };
        return Err(Error::Config(format!("[system] `{key}` {why}")));
    }
    Ok(())
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        text.parse()
    }

    fn from_raw(raw: RawConfig) -> Result<Self> {
        let base = SystemParams::baseline();
        let s = &raw.system;
        let f = &raw.feedback;
        if raw.bath.nbar.is_some() && raw.bath.temperature.is_some() {
            return Err(Error::Config("[bath] takes either `nbar` or `temperature`".into()));
        }
        let gain = f.gain.unwrap_or(base.gain);
        let vartheta = f.vartheta.unwrap_or(base.vartheta);

        let (params, bare) = if s.normalize {
            reject(s.omega.is_some(), "omega", true)?;
            reject(s.delta.is_some(), "delta", true)?;
            reject(s.coupling.is_some(), "coupling", true)?;
            reject(s.mu_tilde.is_some(), "mu_tilde", true)?;
            let bare = BareParams {
                omega_c: required(s.omega_c, "omega_c")?,
                omega_l: required(s.omega_l, "omega_l")?,
                drive: required(s.drive, "drive")?,
                kappa: required(s.kappa, "kappa")?,
                omega_tilde: required(s.omega_tilde, "omega_tilde")?,
                mass: required(s.mass, "mass")?,
                lambda: required(s.lambda, "lambda")?,
                gamma: required(s.gamma, "gamma")?,
                mu: s.mu.unwrap_or(0.0),
                omega_m: required(s.omega_m, "omega_m")?,
            };
            let h = normalize_hamiltonian(&bare)?;
            let nbar = match raw.bath.temperature {
                Some(t) => [0, 1].map(|j| occupation_from_temperature(t[j] / bare.omega_m, h.omega[j])),
                None => raw.bath.nbar.unwrap_or(base.nbar),
            };
            let controls = FeedbackControls {
                gain,
                omega_fb: required(f.omega_fb, "omega_fb (in [feedback])")?,
                vartheta,
                nbar,
                detuning: if s.self_consistent_detuning {
                    DetuningMode::SelfConsistent
                } else {
                    DetuningMode::Pinned(0.0)
                },
            };
            (normalize(&bare, &controls)?, Some(bare))
        } else {
            for (present, key) in [
                (s.omega_c.is_some(), "omega_c"),
                (s.omega_l.is_some(), "omega_l"),
                (s.drive.is_some(), "drive"),
                (s.omega_tilde.is_some(), "omega_tilde"),
                (s.mass.is_some(), "mass"),
                (s.lambda.is_some(), "lambda"),
                (s.mu.is_some(), "mu"),
                (s.omega_m.is_some(), "omega_m"),
                (s.self_consistent_detuning, "self_consistent_detuning"),
            ] {
                reject(present, key, false)?;
            }
            let omega = s.omega.unwrap_or(base.omega);
            let nbar = match raw.bath.temperature {
                Some(t) => [0, 1].map(|j| occupation_from_temperature(t[j], omega[j])),
                None => raw.bath.nbar.unwrap_or(base.nbar),
            };
            let p = SystemParams {
                omega,
                gamma: s.gamma.unwrap_or(base.gamma),
                kappa: s.kappa.unwrap_or(base.kappa),
                delta: s.delta.unwrap_or(base.delta),
                coupling: s.coupling.unwrap_or(base.coupling),
                gain,
                omega_fb: f.omega_fb.unwrap_or(base.omega_fb),
                vartheta,
                mu_tilde: s.mu_tilde.unwrap_or(base.mu_tilde),
                nbar,
            };
            p.validate()?;
            (p, None)
        };
        if let Some(sw) = &raw.sweep {
            sw.parsed_overrides()?;
        }
        Ok(Self { params, bare, sweep: raw.sweep })
    }
}

impl std::str::FromStr for Config {
    type Err = Error;
    fn from_str(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Self::from_raw(raw)
    }
}
