use num_complex::Complex64;

use super::ladder::CoefficientLadder;
use crate::error::{Error, Result};
use crate::model::{SystemParams, ThermalEnvironment};

const DENOMINATOR_FLOOR: f64 = 1e-300;

/// Closed-loop response and noise channels of one mode at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSpectrum {
    pub chi_eff: Complex64,
    pub gamma_eff: f64,
    /// `Omega_eff^2`; may be negative far from resonance.
    pub omega_eff_sq: f64,
    pub gamma_c: f64,
    pub s_th: f64,
    pub s_me: f64,
    pub s_fb: f64,
    pub s_rp: f64,
    pub s_q: f64,
}

impl ModeSpectrum {
    pub fn noise_sum(&self) -> f64 {
        self.s_fb + self.s_rp + self.s_th + self.s_me
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumDecomposition {
    pub omega: f64,
    pub modes: [ModeSpectrum; 2],
}

/// Noise channels `(S_th, S_me, S_fb, S_rp)` of one mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseChannels {
    pub s_th: f64,
    pub s_me: f64,
    pub s_fb: f64,
    pub s_rp: f64,
}

/// Closed-form spectra for a fixed parameter set.
#[derive(Debug, Clone, Copy)]
pub struct AnalyticModel {
    params: SystemParams,
    thermal: ThermalEnvironment,
}

impl AnalyticModel {
    pub fn new(params: &SystemParams) -> Result<Self> {
        params.validate()?;
        if params.delta != 0.0 {
            return Err(Error::NonzeroDetuning { detuning: params.delta });
        }
        Ok(Self { params: *params, thermal: params.thermal() })
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    /// `[A_1^2 + A_2^2][C_1^2 + C_2^2]` and the mode-2 counterpart with `Y`.
    fn rate_denominators(&self, lad: &CoefficientLadder) -> Result<[f64; 2]> {
        let an = lad.a_norm();
        let den = [an * lad.c_norm(), an * lad.y_norm()];
        for (j, &v) in den.iter().enumerate() {
            if !(v.abs() >= DENOMINATOR_FLOOR) {
                return Err(Error::DegenerateDenominator { mode: j + 1, omega: lad.omega, value: v });
            }
        }
        Ok(den)
    }

    fn cooling_rates(&self, lad: &CoefficientLadder, den: [f64; 2]) -> [f64; 2] {
        let p = &self.params;
        let mu2 = 2.0 * p.mu_tilde;
        [
            -(p.coupling[0] * p.gain[0] * lad.f[0] + mu2 * lad.f[2]) / den[0],
            -(p.coupling[1] * p.gain[1] * lad.f[1] + mu2 * lad.f[3]) / den[1],
        ]
    }

    fn omega_eff_sq(&self, lad: &CoefficientLadder, den: [f64; 2]) -> [f64; 2] {
        let w = self.params.omega;
        [w[0] * w[0] + lad.e[2] / den[0], w[1] * w[1] + lad.t[2] / den[1]]
    }

    pub fn net_cooling_rate(&self, omega: f64) -> Result<[f64; 2]> {
        let lad = CoefficientLadder::new(&self.params, omega);
        let den = self.rate_denominators(&lad)?;
        Ok(self.cooling_rates(&lad, den))
    }

    pub fn effective_damping(&self, omega: f64) -> Result<[f64; 2]> {
        let g = self.net_cooling_rate(omega)?;
        Ok([self.params.gamma[0] + g[0], self.params.gamma[1] + g[1]])
    }

    pub fn spring_shift(&self, omega: f64) -> Result<[f64; 2]> {
        let lad = CoefficientLadder::new(&self.params, omega);
        let den = self.rate_denominators(&lad)?;
        let sq = self.omega_eff_sq(&lad, den);
        let mut out = [0.0; 2];
        for j in 0..2 {
            if sq[j] < 0.0 {
                return Err(Error::ImaginaryShiftedFrequency { mode: j + 1, omega, radicand: sq[j] });
            }
            out[j] = sq[j].sqrt() - self.params.omega[j];
        }
        Ok(out)
    }

    fn chi(&self, omega: f64, omega_eff_sq: [f64; 2], gamma_eff: [f64; 2]) -> Result<[Complex64; 2]> {
        let mut out = [Complex64::new(0.0, 0.0); 2];
        for j in 0..2 {
            let den = Complex64::new(omega_eff_sq[j] - omega * omega, -omega * gamma_eff[j]);
            if den == Complex64::new(0.0, 0.0) {
                return Err(Error::ResonanceSingularity { mode: j + 1, omega });
            }
            out[j] = self.params.omega[j] / den;
        }
        Ok(out)
    }

    pub fn susceptibility(&self, omega: f64) -> Result<[Complex64; 2]> {
        let lad = CoefficientLadder::new(&self.params, omega);
        let den = self.rate_denominators(&lad)?;
        let gc = self.cooling_rates(&lad, den);
        let g = [self.params.gamma[0] + gc[0], self.params.gamma[1] + gc[1]];
        self.chi(omega, self.omega_eff_sq(&lad, den), g)
    }

    fn channels(&self, lad: &CoefficientLadder) -> Result<[NoiseChannels; 2]> {
        let p = &self.params;
        let w = lad.omega;
        for (j, v) in [lad.n[1], lad.m[1]].into_iter().enumerate() {
            if !(v.abs() >= DENOMINATOR_FLOOR) {
                return Err(Error::DegenerateDenominator { mode: j + 1, omega: w, value: v });
            }
        }
        let bath = [
            self.thermal.brownian(0, w, p.gamma[0], p.omega[0]),
            self.thermal.brownian(1, w, p.gamma[1], p.omega[1]),
        ];
        let fb_sq = p.omega_fb * p.omega_fb;
        let fb_pre = w * w * lad.x_sq_plus_kappa * fb_sq / (4.0 * p.kappa * p.vartheta);
        let rp_pre = p.kappa * fb_sq;
        Ok([
            NoiseChannels {
                s_th: bath[0],
                s_me: lad.n[0] / lad.n[1] * bath[1],
                s_fb: fb_pre * lad.n[2] / lad.n[1],
                s_rp: rp_pre * lad.n[3] / lad.n[1],
            },
            NoiseChannels {
                s_th: bath[1],
                s_me: lad.m[0] / lad.m[1] * bath[0],
                s_fb: fb_pre * lad.m[2] / lad.m[1],
                s_rp: rp_pre * lad.m[3] / lad.m[1],
            },
        ])
    }

    pub fn noise_spectra(&self, omega: f64) -> Result<[NoiseChannels; 2]> {
        self.channels(&CoefficientLadder::new(&self.params, omega))
    }

    pub fn decompose(&self, omega: f64) -> Result<SpectrumDecomposition> {
        let lad = CoefficientLadder::new(&self.params, omega);
        let den = self.rate_denominators(&lad)?;
        let gc = self.cooling_rates(&lad, den);
        let g = [self.params.gamma[0] + gc[0], self.params.gamma[1] + gc[1]];
        let sq = self.omega_eff_sq(&lad, den);
        let chi = self.chi(omega, sq, g)?;
        let ch = self.channels(&lad)?;
        let mode = |j: usize| {
            let c = ch[j];
            let sum = c.s_fb + c.s_rp + c.s_th + c.s_me;
            ModeSpectrum {
                chi_eff: chi[j],
                gamma_eff: g[j],
                omega_eff_sq: sq[j],
                gamma_c: gc[j],
                s_th: c.s_th,
                s_me: c.s_me,
                s_fb: c.s_fb,
                s_rp: c.s_rp,
                s_q: chi[j].norm_sqr() * sum,
            }
        };
        Ok(SpectrumDecomposition { omega, modes: [mode(0), mode(1)] })
    }

    /// Position spectra `S_q_j(omega)` of both modes.
    pub fn position_spectrum(&self, omega: f64) -> Result<[f64; 2]> {
        let d = self.decompose(omega)?;
        Ok([d.modes[0].s_q, d.modes[1].s_q])
    }
}

pub fn susceptibility(params: &SystemParams, omega: f64) -> Result<[Complex64; 2]> {
    AnalyticModel::new(params)?.susceptibility(omega)
}

pub fn net_cooling_rate(params: &SystemParams, omega: f64) -> Result<[f64; 2]> {
    AnalyticModel::new(params)?.net_cooling_rate(omega)
}

pub fn effective_damping(params: &SystemParams, omega: f64) -> Result<[f64; 2]> {
    AnalyticModel::new(params)?.effective_damping(omega)
}

pub fn spring_shift(params: &SystemParams, omega: f64) -> Result<[f64; 2]> {
    AnalyticModel::new(params)?.spring_shift(omega)
}

pub fn noise_spectra(params: &SystemParams, omega: f64) -> Result<[NoiseChannels; 2]> {
    AnalyticModel::new(params)?.noise_spectra(omega)
}

pub fn decompose(params: &SystemParams, omega: f64) -> Result<SpectrumDecomposition> {
    AnalyticModel::new(params)?.decompose(omega)
}
