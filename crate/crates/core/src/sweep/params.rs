use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::SystemParams;

/// A sweepable quantity: a [`SystemParams`] field, a ratio between two of
/// them, or the probe frequency of a rate scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum SweepParam {
    Omega1,
    Omega2,
    Gamma1,
    Gamma2,
    Kappa,
    Delta,
    G1,
    G2,
    MuTilde,
    Gcd1,
    Gcd2,
    OmegaFb,
    Vartheta,
    Nbar1,
    Nbar2,
    G2OverG1,
    Gcd2OverGcd1,
    Omega2OverOmega1,
    /// Probe frequency for rate scans; not a parameter of the system.
    Omega,
}

const NAMES: [(SweepParam, &str); 19] = [
    (SweepParam::Omega1, "omega1"),
    (SweepParam::Omega2, "omega2"),
    (SweepParam::Gamma1, "gamma1"),
    (SweepParam::Gamma2, "gamma2"),
    (SweepParam::Kappa, "kappa"),
    (SweepParam::Delta, "delta"),
    (SweepParam::G1, "G1"),
    (SweepParam::G2, "G2"),
    (SweepParam::MuTilde, "mu_tilde"),
    (SweepParam::Gcd1, "g_cd1"),
    (SweepParam::Gcd2, "g_cd2"),
    (SweepParam::OmegaFb, "omega_fb"),
    (SweepParam::Vartheta, "vartheta"),
    (SweepParam::Nbar1, "nbar1"),
    (SweepParam::Nbar2, "nbar2"),
    (SweepParam::G2OverG1, "G2_over_G1"),
    (SweepParam::Gcd2OverGcd1, "g_cd2_over_g_cd1"),
    (SweepParam::Omega2OverOmega1, "omega2_over_omega1"),
    (SweepParam::Omega, "omega"),
];

impl SweepParam {
    pub fn name(self) -> &'static str {
        NAMES.iter().find(|(p, _)| *p == self).map(|(_, n)| *n).unwrap_or("?")
    }

    pub fn all() -> impl Iterator<Item = SweepParam> {
        NAMES.iter().map(|(p, _)| *p)
    }

    pub fn is_probe(self) -> bool {
        self == SweepParam::Omega
    }

    /// Set this quantity on `p`. Ratios rescale the second member.
    pub fn apply(self, p: &mut SystemParams, v: f64) -> Result<()> {
        use SweepParam::*;
        match self {
            Omega1 => p.omega[0] = v,
            Omega2 => p.omega[1] = v,
            Gamma1 => p.gamma[0] = v,
            Gamma2 => p.gamma[1] = v,
            Kappa => p.kappa = v,
            Delta => p.delta = v,
            G1 => p.coupling[0] = v,
            G2 => p.coupling[1] = v,
            MuTilde => p.mu_tilde = v,
            Gcd1 => p.gain[0] = v,
            Gcd2 => p.gain[1] = v,
            OmegaFb => p.omega_fb = v,
            Vartheta => p.vartheta = v,
            Nbar1 => p.nbar[0] = v,
            Nbar2 => p.nbar[1] = v,
            G2OverG1 => p.coupling[1] = v * p.coupling[0],
            Gcd2OverGcd1 => p.gain[1] = v * p.gain[0],
            Omega2OverOmega1 => p.omega[1] = v * p.omega[0],
            Omega => {
                return Err(Error::InvalidOverride(
                    "the probe frequency `omega` is not a system parameter".into(),
                ))
            }
        }
        Ok(())
    }

    pub fn get(self, p: &SystemParams) -> Option<f64> {
        use SweepParam::*;
        Some(match self {
            Omega1 => p.omega[0],
            Omega2 => p.omega[1],
            Gamma1 => p.gamma[0],
            Gamma2 => p.gamma[1],
            Kappa => p.kappa,
            Delta => p.delta,
            G1 => p.coupling[0],
            G2 => p.coupling[1],
            MuTilde => p.mu_tilde,
            Gcd1 => p.gain[0],
            Gcd2 => p.gain[1],
            OmegaFb => p.omega_fb,
            Vartheta => p.vartheta,
            Nbar1 => p.nbar[0],
            Nbar2 => p.nbar[1],
            G2OverG1 => p.coupling[1] / p.coupling[0],
            Gcd2OverGcd1 => p.gain[1] / p.gain[0],
            Omega2OverOmega1 => p.omega[1] / p.omega[0],
            Omega => return None,
        })
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParam {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        NAMES
            .iter()
            .find(|(_, n)| *n == s)
            .map(|(p, _)| *p)
            .ok_or_else(|| Error::UnknownParameter(s.to_string()))
    }
}

impl TryFrom<String> for SweepParam {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<SweepParam> for String {
    fn from(p: SweepParam) -> String {
        p.name().to_string()
    }
}

/// A `name = value` override applied after the scenario defaults.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Override {
    pub param: SweepParam,
    pub value: f64,
}

impl FromStr for Override {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (k, v) = s
            .split_once('=')
            .ok_or_else(|| Error::InvalidOverride(format!("expected name=value, got `{s}`")))?;
        let param: SweepParam = k.trim().parse()?;
        if param.is_probe() {
            return Err(Error::InvalidOverride("`omega` cannot be overridden".into()));
        }
        let value: f64 = v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidOverride(format!("`{}` is not a number", v.trim())))?;
        Ok(Self { param, value })
    }
}

impl fmt::Display for Override {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}", self.param, self.value)
    }
}

/// Apply `overrides` in order and check the result.
pub fn apply_overrides(base: &SystemParams, overrides: &[Override]) -> Result<SystemParams> {
    let mut p = *base;
    for o in overrides {
        o.param.apply(&mut p, o.value)?;
    }
    p.validate().map_err(|e| Error::InvalidOverride(e.to_string()))?;
    Ok(p)
}
