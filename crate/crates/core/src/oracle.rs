//! Direct frequency-domain solution of the linearized, feedback-closed
//! Langevin equations.
//!
//! State `u = (X, Y, q1, p1, q2, p2)`, inputs `n = (X_in, Y_in, Y_v, xi1, xi2)`.
//! With `d/dt -> -i omega` the equations read `(-i omega - A) u = B(omega) n`,
//! and the transfer matrix is `T = (-i omega - A)^-1 B`.

use nalgebra::{DMatrix, Matrix6, SMatrix};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{SystemParams, ThermalEnvironment};
use crate::numeric;

pub type Routing = SMatrix<Complex64, 6, 5>;

const MAX_CONDITION: f64 = 1e14;

/// State indices.
pub const X: usize = 0;
pub const Y: usize = 1;
pub const Q: [usize; 2] = [2, 4];
pub const P: [usize; 2] = [3, 5];
/// Input indices.
pub const XI: [usize; 2] = [3, 4];

/// `g_cd,j (-i omega) omega_fb / (omega_fb - i omega)` for both loops.
pub fn feedback_transfer(params: &SystemParams, omega: f64) -> [Complex64; 2] {
    let fb = params.omega_fb;
    let base = Complex64::new(0.0, -omega) * fb / Complex64::new(fb, -omega);
    [base * params.gain[0], base * params.gain[1]]
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransferSolution {
    pub omega: f64,
    /// `-i omega I - A(omega)`.
    pub system: Matrix6<Complex64>,
    pub routing: Routing,
    /// Diagonal of the symmetrized input spectral matrix.
    pub input: [f64; 5],
    /// `system^-1 routing`.
    pub transfer: Routing,
    /// Pivot-ratio condition estimate of the LU factorization.
    pub condition: f64,
    pub determinant: Complex64,
}

impl TransferSolution {
    /// Symmetrized spectrum of state component `k`.
    pub fn spectrum(&self, k: usize) -> f64 {
        (0..5).map(|i| self.transfer[(k, i)].norm_sqr() * self.input[i]).sum()
    }

    /// Closed-loop susceptibility of mode `j`: response of `q_j` to `xi_j`.
    pub fn chi_eff(&self, j: usize) -> Complex64 {
        self.transfer[(Q[j], XI[j])]
    }
}

/// Real drift matrix of the time-domain equations.
///
/// Zero detuning adds the feedback filter state `z` (index 6), driven as
/// `z' = -omega_fb z + omega_fb Y`; the feedback force is
/// `-g_cd,j omega_fb (Y - z)`.
pub fn drift_matrix(p: &SystemParams) -> DMatrix<f64> {
    let with_loop = p.delta == 0.0;
    let n = if with_loop { 7 } else { 6 };
    let mut a = DMatrix::zeros(n, n);
    let k = p.kappa;
    a[(X, X)] = -k;
    a[(Y, Y)] = -k;
    a[(X, Y)] = p.delta;
    a[(Y, X)] = -p.delta;
    for j in 0..2 {
        let o = 1 - j;
        a[(Y, Q[j])] = p.coupling[j];
        a[(Q[j], P[j])] = p.omega[j];
        a[(P[j], Q[j])] = -p.omega[j];
        a[(P[j], P[j])] = -p.gamma[j];
        a[(P[j], Q[o])] = 2.0 * p.mu_tilde;
        a[(P[j], X)] = p.coupling[j];
        if with_loop {
            a[(P[j], Y)] = -p.gain[j] * p.omega_fb;
            a[(P[j], 6)] = p.gain[j] * p.omega_fb;
        }
    }
    if with_loop {
        a[(6, 6)] = -p.omega_fb;
        a[(6, Y)] = p.omega_fb;
    }
    a
}

/// Eigenvalues of the drift matrix.
pub fn drift_eigenvalues(p: &SystemParams) -> Vec<Complex64> {
    drift_matrix(p).complex_eigenvalues().iter().copied().collect()
}

/// Oracle bound to one parameter set.
#[derive(Debug, Clone, Copy)]
pub struct OracleModel {
    params: SystemParams,
    thermal: ThermalEnvironment,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSpectrum {
    pub omega: f64,
    pub s_q: [f64; 2],
    pub s_p: [f64; 2],
    /// Largest relative violation of `S_p omega_j^2 = omega^2 S_q`.
    pub consistency: f64,
    /// `|S(omega) - S(-omega)| / (S(omega) + S(-omega))` with unsymmetrized inputs.
    pub asymmetry: [f64; 2],
    /// Symmetrized vacuum X-Y cross contribution relative to `S_q`.
    pub cross_term: [f64; 2],
}

impl OracleModel {
    pub fn new(params: &SystemParams) -> Result<Self> {
        params.validate()?;
        Ok(Self { params: *params, thermal: params.thermal() })
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    fn bath(&self, j: usize, omega: f64) -> f64 {
        let p = &self.params;
        self.thermal.brownian(j, omega, p.gamma[j], p.omega[j])
    }

    fn matrices(&self, omega: f64) -> (Matrix6<Complex64>, Routing) {
        let p = &self.params;
        let c = |re: f64| Complex64::new(re, 0.0);
        let drive = Complex64::new(0.0, -omega);
        let mut m = Matrix6::<Complex64>::zeros();
        for i in 0..6 {
            m[(i, i)] = drive;
        }
        let k = p.kappa;
        m[(X, X)] += c(k);
        m[(Y, Y)] += c(k);
        m[(X, Y)] -= c(p.delta);
        m[(Y, X)] += c(p.delta);
        let sk = (2.0 * k).sqrt();
        let mut b = Routing::zeros();
        b[(X, 0)] = c(sk);
        b[(Y, 1)] = c(sk);
        let h = if p.delta == 0.0 {
            feedback_transfer(p, omega)
        } else {
            [Complex64::new(0.0, 0.0); 2]
        };
        let leak = (1.0 / p.vartheta - 1.0).max(0.0).sqrt();
        for j in 0..2 {
            let o = 1 - j;
            m[(Y, Q[j])] -= c(p.coupling[j]);
            m[(Q[j], P[j])] -= c(p.omega[j]);
            m[(P[j], Q[j])] += c(p.omega[j]);
            m[(P[j], P[j])] += c(p.gamma[j]);
            m[(P[j], Q[o])] -= c(2.0 * p.mu_tilde);
            m[(P[j], X)] -= c(p.coupling[j]);
            // feedback -H_j (Y - (Y_in + leak Y_v) / sqrt(2 kappa))
            m[(P[j], Y)] += h[j];
            b[(P[j], 1)] = h[j] / sk;
            b[(P[j], 2)] = h[j] * leak / sk;
            b[(P[j], XI[j])] = c(1.0);
        }
        (m, b)
    }

    pub fn assemble(&self, omega: f64) -> Result<TransferSolution> {
        let (system, routing) = self.matrices(omega);
        let lu = system.lu();
        let u = lu.u();
        let diag: Vec<f64> = (0..6).map(|i| u[(i, i)].norm()).collect();
        let hi = diag.iter().cloned().fold(0.0, f64::max);
        let lo = diag.iter().cloned().fold(f64::INFINITY, f64::min);
        let condition = if lo > 0.0 { hi / lo } else { f64::INFINITY };
        if !(condition <= MAX_CONDITION) {
            return Err(Error::SingularSystem { omega, condition });
        }
        let determinant = lu.determinant();
        let transfer = lu
            .solve(&routing)
            .ok_or(Error::SingularSystem { omega, condition })?;
        let input = [0.5, 0.5, 0.5, self.bath(0, omega), self.bath(1, omega)];
        Ok(TransferSolution { omega, system, routing, input, transfer, condition, determinant })
    }

    pub fn spectrum(&self, omega: f64) -> Result<OracleSpectrum> {
        let sol = self.assemble(omega)?;
        let p = &self.params;
        let mut s_q = [0.0; 2];
        let mut s_p = [0.0; 2];
        let mut consistency: f64 = 0.0;
        for j in 0..2 {
            s_q[j] = sol.spectrum(Q[j]);
            s_p[j] = omega * omega / (p.omega[j] * p.omega[j]) * s_q[j];
            let direct = sol.spectrum(P[j]);
            consistency = consistency.max(numeric::rel_diff(direct, s_p[j]));
        }
        let mirror = self.assemble(-omega)?;
        let asymmetry = [0, 1].map(|j| self.asymmetry(&sol, &mirror, j));
        let cross_term = [0, 1].map(|j| {
            let c = |s: &TransferSolution| {
                let t = &s.transfer;
                (Complex64::i() * 0.5 * t[(Q[j], 0)] * t[(Q[j], 1)].conj()).re * 2.0
            };
            let sym = 0.5 * (c(&sol) + c(&mirror));
            if s_q[j] > 0.0 {
                sym.abs() / s_q[j]
            } else {
                0.0
            }
        });
        Ok(OracleSpectrum { omega, s_q, s_p, consistency, asymmetry, cross_term })
    }

    /// Spectral asymmetry of `q_j` under the unsymmetrized input
    /// correlations (vacuum `<X_in Y_in> = i/2`, Bose-weighted baths).
    fn asymmetry(&self, pos: &TransferSolution, neg: &TransferSolution, j: usize) -> f64 {
        let raw = |s: &TransferSolution, w: f64| -> f64 {
            let t = &s.transfer;
            let row = |i: usize| t[(Q[j], i)];
            let mut v = 0.5 * (row(0).norm_sqr() + row(1).norm_sqr() + row(2).norm_sqr());
            v += (Complex64::i() * row(0) * row(1).conj()).re;
            for m in 0..2 {
                let p = &self.params;
                let bose = self.bath(m, w) + p.gamma[m] * w / p.omega[m];
                v += row(XI[m]).norm_sqr() * bose;
            }
            v
        };
        let a = raw(pos, pos.omega);
        let b = raw(neg, neg.omega);
        if a + b == 0.0 {
            0.0
        } else {
            (a - b).abs() / (a + b).abs()
        }
    }

    /// Effective damping and squared frequency from the closed-loop response,
    /// `omega_j / chi = Omega_eff^2 - omega^2 - i omega Gamma_eff`.
    pub fn effective_response(&self, omega: f64) -> Result<[(f64, f64); 2]> {
        let sol = self.assemble(omega)?;
        Ok([0, 1].map(|j| {
            let inv = self.params.omega[j] / sol.chi_eff(j);
            (-inv.im / omega, inv.re + omega * omega)
        }))
    }

    /// `Gamma_j,eff(omega)` extracted from the full solve.
    pub fn effective_damping(&self, omega: f64) -> Result<[f64; 2]> {
        let r = self.effective_response(omega)?;
        Ok([r[0].0, r[1].0])
    }

    pub fn position_spectrum(&self, omega: f64) -> Result<[f64; 2]> {
        let sol = self.assemble(omega)?;
        Ok([sol.spectrum(Q[0]), sol.spectrum(Q[1])])
    }
}

pub fn assemble(params: &SystemParams, omega: f64) -> Result<TransferSolution> {
    OracleModel::new(params)?.assemble(omega)
}

pub fn oracle_spectrum(params: &SystemParams, omega: f64) -> Result<OracleSpectrum> {
    OracleModel::new(params)?.spectrum(omega)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub stable: bool,
    /// Largest real part among the drift eigenvalues.
    pub max_real_eigenvalue: f64,
    /// Smallest effective damping found within one effective linewidth of
    /// each resonance, or at `omega_j` itself.
    pub min_gamma_eff: [f64; 2],
    /// `min |r| / median |r|` over the grid, where `r` is `det M` divided by
    /// the determinant of the uncoupled system.
    pub det_ratio: f64,
    pub reasons: Vec<String>,
}

/// `det M` with every coupling, gain and the AMC switched off.
fn open_loop_determinant(p: &SystemParams, omega: f64) -> Complex64 {
    let cav = Complex64::new(p.kappa, -omega);
    let mut det = cav * cav + p.delta * p.delta;
    for j in 0..2 {
        det *= Complex64::new(p.omega[j] * p.omega[j] - omega * omega, -omega * p.gamma[j]);
    }
    det
}

/// Flags growing eigenmodes, negative damping near resonance and
/// near-singular response matrices on the real axis.
pub fn stability_check(params: &SystemParams, grid: &[f64]) -> Result<StabilityReport> {
    let oracle = OracleModel::new(params)?;
    let mut reasons = Vec::new();
    let max_re = drift_eigenvalues(params)
        .iter()
        .map(|l| l.re)
        .fold(f64::NEG_INFINITY, f64::max);
    if max_re >= 0.0 {
        reasons.push(format!("drift eigenvalue with real part {max_re:e}"));
    }

    let mut dets = Vec::with_capacity(grid.len());
    let mut min_gamma = [f64::INFINITY; 2];
    for &w in grid {
        let sol = match oracle.assemble(w) {
            Ok(s) => s,
            Err(Error::SingularSystem { .. }) => {
                dets.push(0.0);
                continue;
            }
            Err(e) => return Err(e),
        };
        dets.push((sol.determinant / open_loop_determinant(params, w)).norm());
        for j in 0..2 {
            if w == 0.0 {
                continue;
            }
            // omega_j / chi = (Omega_eff^2 - omega^2) - i omega Gamma_eff
            let inv = params.omega[j] / sol.chi_eff(j);
            let on_line = inv.re.abs() <= inv.im.abs() || w.abs() == params.omega[j];
            if on_line {
                min_gamma[j] = min_gamma[j].min(-inv.im / w);
            }
        }
    }
    for j in 0..2 {
        if min_gamma[j] < 0.0 {
            reasons.push(format!("mode {} effective damping {:e} near resonance", j + 1, min_gamma[j]));
        }
    }
    let det_ratio = if dets.is_empty() {
        1.0
    } else {
        let mut sorted = dets.clone();
        sorted.sort_by(f64::total_cmp);
        let median = sorted[sorted.len() / 2];
        if median > 0.0 {
            sorted[0] / median
        } else {
            0.0
        }
    };
    if det_ratio < 1e-10 {
        reasons.push(format!("response determinant nearly vanishes (ratio {det_ratio:e})"));
    }
    Ok(StabilityReport {
        stable: reasons.is_empty(),
        max_real_eigenvalue: max_re,
        min_gamma_eff: min_gamma,
        det_ratio,
        reasons,
    })
}

/// Symmetric probe grid covering the mechanical resonances and `[0, omega_max]`.
pub fn probe_grid(params: &SystemParams, omega_max: f64, n: usize) -> Vec<f64> {
    let mut grid: Vec<f64> = (0..n).map(|i| omega_max * i as f64 / (n - 1).max(1) as f64).collect();
    for &wj in &params.omega {
        for i in 0..=400 {
            grid.push(wj * (0.8 + 0.001 * i as f64));
        }
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}
