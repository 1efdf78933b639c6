//! System parameters, unit conventions and the classical steady state.
//!
//! Everything downstream works in natural units (hbar = k_B = 1) with every
//! rate expressed in units of the reference mechanical frequency `omega_m`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric;

/// Reference mechanical frequency used by the figure presets, 2π × 10⁷ rad/s.
pub const OMEGA_M: f64 = 2.0 * std::f64::consts::PI * 1.0e7;

/// Parameters of the bare three-mode Hamiltonian, in SI-like units.
///
/// Rates are angular frequencies in rad/s. `lambda` is the position coupling
/// and `mu` the auxiliary spring constant of the `mu (x1 - x2)^2` term.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BareParams {
    pub omega_c: f64,
    pub omega_l: f64,
    /// Drive amplitude `Omega`.
    pub drive: f64,
    pub kappa: f64,
    pub omega_tilde: [f64; 2],
    pub mass: [f64; 2],
    pub lambda: [f64; 2],
    pub gamma: [f64; 2],
    pub mu: f64,
    /// Unit of frequency for the normalized model.
    pub omega_m: f64,
}

impl BareParams {
    pub fn validate(&self) -> Result<()> {
        positive("omega_c", self.omega_c)?;
        positive("omega_l", self.omega_l)?;
        positive("kappa", self.kappa)?;
        positive("omega_m", self.omega_m)?;
        finite("drive", self.drive)?;
        finite("mu", self.mu)?;
        for j in 0..2 {
            positive(["omega_tilde1", "omega_tilde2"][j], self.omega_tilde[j])?;
            positive(["mass1", "mass2"][j], self.mass[j])?;
            positive(["gamma1", "gamma2"][j], self.gamma[j])?;
            finite(["lambda1", "lambda2"][j], self.lambda[j])?;
        }
        for j in 0..2 {
            let radicand = self.omega_tilde[j].powi(2) + 2.0 * self.mu / self.mass[j];
            if radicand <= 0.0 {
                return Err(Error::ImaginaryFrequency { mode: j + 1, radicand });
            }
        }
        Ok(())
    }

    /// Normalized (AMC-dressed) mechanical frequencies in rad/s.
    pub fn dressed_frequencies(&self) -> Result<[f64; 2]> {
        let mut out = [0.0; 2];
        for j in 0..2 {
            let radicand = self.omega_tilde[j].powi(2) + 2.0 * self.mu / self.mass[j];
            if radicand <= 0.0 {
                return Err(Error::ImaginaryFrequency { mode: j + 1, radicand });
            }
            out[j] = radicand.sqrt();
        }
        Ok(out)
    }

    /// Bare parameters with unit masses and `omega_m = 1` that reproduce the
    /// mechanical part of `params`. Used for the bare-quadrature comparison.
    pub fn from_system(params: &SystemParams, mass: [f64; 2]) -> Result<Self> {
        // mu_tilde = mu / sqrt(m1 m2 w1 w2)  =>  mu = mu_tilde sqrt(m1 m2 w1 w2)
        let mu = params.mu_tilde
            * (mass[0] * mass[1] * params.omega[0] * params.omega[1]).sqrt();
        let mut omega_tilde = [0.0; 2];
        for j in 0..2 {
            let sq = params.omega[j].powi(2) - 2.0 * mu / mass[j];
            if sq <= 0.0 {
                return Err(Error::ImaginaryFrequency { mode: j + 1, radicand: sq });
            }
            omega_tilde[j] = sq.sqrt();
        }
        Ok(Self {
            omega_c: 1.0,
            omega_l: 1.0,
            drive: 0.0,
            kappa: params.kappa,
            omega_tilde,
            mass,
            lambda: [0.0; 2],
            gamma: params.gamma,
            mu,
            omega_m: 1.0,
        })
    }
}

/// The working dimensionless Hamiltonian before the drive is resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedHamiltonian {
    pub omega: [f64; 2],
    pub gamma: [f64; 2],
    pub kappa: f64,
    /// Bare cavity detuning `omega_c - omega_L`.
    pub delta_c: f64,
    pub lambda_tilde: [f64; 2],
    pub mu_tilde: f64,
    pub drive: f64,
}

/// Complete dimensionless parameter set of the linearized feedback model.
///
/// All rates are in units of `omega_m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub omega: [f64; 2],
    pub gamma: [f64; 2],
    pub kappa: f64,
    /// Effective detuning; zero for cold damping.
    pub delta: f64,
    /// Effective optomechanical couplings `G_j`.
    pub coupling: [f64; 2],
    /// Dimensionless cold-damping gains `g_cd,j`.
    pub gain: [f64; 2],
    pub omega_fb: f64,
    /// Detection efficiency, in (0, 1].
    pub vartheta: f64,
    pub mu_tilde: f64,
    pub nbar: [f64; 2],
}

impl Default for SystemParams {
    fn default() -> Self {
        Self::baseline()
    }
}

impl SystemParams {
    /// Default parameter set with the AMC switched off.
    pub fn baseline() -> Self {
        Self {
            omega: [1.0, 1.0],
            gamma: [1e-6, 1e-6],
            kappa: 4.0,
            delta: 0.0,
            coupling: [0.4, 0.28],
            gain: [1.0, 0.6],
            omega_fb: 3.0,
            vartheta: 0.8,
            mu_tilde: 0.0,
            nbar: [1e3, 1e3],
        }
    }

    pub fn with_mu(mut self, mu_tilde: f64) -> Self {
        self.mu_tilde = mu_tilde;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for j in 0..2 {
            positive(["omega1", "omega2"][j], self.omega[j])?;
            positive(["gamma1", "gamma2"][j], self.gamma[j])?;
            finite(["G1", "G2"][j], self.coupling[j])?;
            finite(["g_cd1", "g_cd2"][j], self.gain[j])?;
            let n = self.nbar[j];
            if !(n.is_finite() && n >= 0.0) {
                return Err(Error::InvalidParameter {
                    name: ["nbar1", "nbar2"][j],
                    reason: format!("must be finite and >= 0, got {n}"),
                });
            }
        }
        positive("kappa", self.kappa)?;
        positive("omega_fb", self.omega_fb)?;
        finite("delta", self.delta)?;
        finite("mu_tilde", self.mu_tilde)?;
        if !(self.vartheta > 0.0 && self.vartheta <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "vartheta",
                reason: format!("must lie in (0, 1], got {}", self.vartheta),
            });
        }
        Ok(())
    }

    pub fn thermal(&self) -> ThermalEnvironment {
        ThermalEnvironment::from_occupations(self.nbar, self.omega)
    }

    /// True when every coupling, gain and the AMC vanish.
    pub fn is_decoupled(&self) -> bool {
        self.coupling == [0.0, 0.0] && self.gain == [0.0, 0.0] && self.mu_tilde == 0.0
    }
}

/// Bath temperatures in natural units, defined by exact Bose inversion at
/// each mode's own frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalEnvironment {
    pub temperature: [f64; 2],
}

impl ThermalEnvironment {
    pub fn from_occupations(nbar: [f64; 2], omega: [f64; 2]) -> Self {
        let mut temperature = [0.0; 2];
        for j in 0..2 {
            temperature[j] = temperature_from_occupation(nbar[j], omega[j]).unwrap_or(0.0);
        }
        Self { temperature }
    }

    /// `hbar omega / (2 k_B T_j)`.
    pub fn beta(&self, mode: usize, omega: f64) -> f64 {
        let t = self.temperature[mode];
        if t == 0.0 {
            f64::INFINITY * omega.signum()
        } else {
            omega / (2.0 * t)
        }
    }

    /// Symmetrized Brownian spectrum `(gamma_j omega / omega_j) coth(beta_j)`.
    pub fn brownian(&self, mode: usize, omega: f64, gamma: f64, omega_j: f64) -> f64 {
        gamma / omega_j * numeric::omega_coth(omega, self.temperature[mode])
    }
}

/// Temperature whose Bose occupation at `omega` equals `nbar`.
pub fn temperature_from_occupation(nbar: f64, omega: f64) -> Result<f64> {
    if nbar == 0.0 {
        return Err(Error::ZeroTemperatureBath);
    }
    if !(nbar > 0.0 && nbar.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "nbar",
            reason: format!("must be positive, got {nbar}"),
        });
    }
    // ln((n + 1) / n) = ln(1 + 1/n)
    Ok(omega / (1.0 / nbar).ln_1p())
}

/// Bose occupation `1 / (exp(omega / T) - 1)`.
pub fn occupation_from_temperature(temperature: f64, omega: f64) -> f64 {
    if temperature <= 0.0 {
        return 0.0;
    }
    1.0 / (omega / temperature).exp_m1()
}

/// How the effective detuning is fixed when resolving the drive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DetuningMode {
    /// Use the given detuning as is; cold damping pins it to zero.
    Pinned(f64),
    /// Solve `Delta = Delta_c - sum_j lambda_j <q_j>` by fixed-point iteration.
    SelfConsistent,
}

/// Classical steady state of the driven system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyState {
    /// Cavity amplitude `-i Omega / (kappa + i Delta)` before phase rotation.
    pub c_ss: Complex64,
    pub q_ss: [f64; 2],
    pub detuning: f64,
    /// Effective couplings with the cavity phase rotated to real positive.
    pub coupling: [f64; 2],
    pub iterations: usize,
}

const DETUNING_TOL: f64 = 1e-12;
const DETUNING_MAX_ITER: usize = 100;

pub fn cavity_amplitude(drive: f64, kappa: f64, detuning: f64) -> Complex64 {
    Complex64::new(0.0, -drive) / Complex64::new(kappa, detuning)
}

/// Static mechanical displacements for a given intracavity photon number.
fn static_displacement(h: &NormalizedHamiltonian, photons: f64) -> Result<[f64; 2]> {
    // [ w1  -2mu ] [q1]   [lambda1 n]
    // [ -2mu  w2 ] [q2] = [lambda2 n]
    let (w1, w2, m) = (h.omega[0], h.omega[1], 2.0 * h.mu_tilde);
    let det = w1 * w2 - m * m;
    if det == 0.0 {
        return Err(Error::InvalidParameter {
            name: "mu_tilde",
            reason: "static stiffness matrix is singular".into(),
        });
    }
    let f1 = h.lambda_tilde[0] * photons;
    let f2 = h.lambda_tilde[1] * photons;
    Ok([(w2 * f1 + m * f2) / det, (m * f1 + w1 * f2) / det])
}

pub fn steady_state_means(h: &NormalizedHamiltonian, mode: DetuningMode) -> Result<SteadyState> {
    positive("kappa", h.kappa)?;
    let (detuning, iterations) = match mode {
        DetuningMode::Pinned(d) => (d, 0),
        DetuningMode::SelfConsistent => {
            let mut delta = h.delta_c;
            let mut last_change = f64::INFINITY;
            let mut converged = None;
            for it in 1..=DETUNING_MAX_ITER {
                let photons = cavity_amplitude(h.drive, h.kappa, delta).norm_sqr();
                let q = static_displacement(h, photons)?;
                let next = h.delta_c - h.lambda_tilde[0] * q[0] - h.lambda_tilde[1] * q[1];
                last_change = (next - delta).abs();
                delta = next;
                if last_change <= DETUNING_TOL * delta.abs().max(1.0) {
                    converged = Some(it);
                    break;
                }
            }
            match converged {
                Some(it) => (delta, it),
                None => {
                    return Err(Error::DetuningNotConverged {
                        iterations: DETUNING_MAX_ITER,
                        last_change,
                    })
                }
            }
        }
    };
    let c_ss = cavity_amplitude(h.drive, h.kappa, detuning);
    let q_ss = static_displacement(h, c_ss.norm_sqr())?;
    let amplitude = c_ss.norm();
    let coupling = [
        std::f64::consts::SQRT_2 * h.lambda_tilde[0] * amplitude,
        std::f64::consts::SQRT_2 * h.lambda_tilde[1] * amplitude,
    ];
    Ok(SteadyState { c_ss, q_ss, detuning, coupling, iterations })
}

/// Feedback, detection and bath settings that complete a [`BareParams`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeedbackControls {
    pub gain: [f64; 2],
    /// Feedback bandwidth in rad/s.
    pub omega_fb: f64,
    pub vartheta: f64,
    pub nbar: [f64; 2],
    pub detuning: DetuningMode,
}

/// Map the bare Hamiltonian onto the dimensionless working form.
pub fn normalize_hamiltonian(bare: &BareParams) -> Result<NormalizedHamiltonian> {
    bare.validate()?;
    let w = bare.dressed_frequencies()?;
    let om = bare.omega_m;
    let lambda_tilde = [
        bare.lambda[0] / (bare.mass[0] * w[0]).sqrt() / om,
        bare.lambda[1] / (bare.mass[1] * w[1]).sqrt() / om,
    ];
    let mu_tilde = bare.mu / (bare.mass[0] * bare.mass[1] * w[0] * w[1]).sqrt() / om;
    Ok(NormalizedHamiltonian {
        omega: [w[0] / om, w[1] / om],
        gamma: [bare.gamma[0] / om, bare.gamma[1] / om],
        kappa: bare.kappa / om,
        delta_c: (bare.omega_c - bare.omega_l) / om,
        lambda_tilde,
        mu_tilde,
        drive: bare.drive / om,
    })
}

/// Full normalization: Hamiltonian, steady state and feedback settings.
pub fn normalize(bare: &BareParams, controls: &FeedbackControls) -> Result<SystemParams> {
    let h = normalize_hamiltonian(bare)?;
    let ss = steady_state_means(&h, controls.detuning)?;
    let params = SystemParams {
        omega: h.omega,
        gamma: h.gamma,
        kappa: h.kappa,
        delta: ss.detuning,
        coupling: ss.coupling,
        gain: controls.gain,
        omega_fb: controls.omega_fb / bare.omega_m,
        vartheta: controls.vartheta,
        mu_tilde: h.mu_tilde,
        nbar: controls.nbar,
    };
    params.validate()?;
    Ok(params)
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, reason: format!("must be finite and > 0, got {v}") })
    }
}

fn finite(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, reason: format!("must be finite, got {v}") })
    }
}
