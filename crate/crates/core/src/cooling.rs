//! Variances and steady-state phonon numbers from the position spectra.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analytic::AnalyticModel;
use crate::error::{Error, Result};
use crate::model::{BareParams, SystemParams};
use crate::oracle::{self, OracleModel, StabilityReport};
use crate::quadrature;

/// Which route produces the position spectra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumPath {
    Analytic,
    Oracle,
}

impl fmt::Display for SpectrumPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpectrumPath::Analytic => "analytic",
            SpectrumPath::Oracle => "oracle",
        })
    }
}

impl FromStr for SpectrumPath {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analytic" => Ok(Self::Analytic),
            "oracle" => Ok(Self::Oracle),
            other => Err(Error::InvalidOverride(format!("unknown spectrum path `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoolingOptions {
    /// Relative quadrature tolerance per variance.
    pub rel_tol: f64,
    /// Stop doubling the cutoff once a doubling changes the result by less.
    pub tail_tol: f64,
    pub max_doublings: usize,
    pub max_evaluations: usize,
    /// Fail instead of flagging when the stability check fails.
    pub require_stable: bool,
    /// Also integrate the negative half-axis and compare.
    pub check_evenness: bool,
}

impl Default for CoolingOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            tail_tol: 1e-6,
            max_doublings: 40,
            max_evaluations: 4_000_000,
            require_stable: false,
            check_evenness: false,
        }
    }
}

/// A spectral feature the grid must resolve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Anchor {
    pub center: f64,
    pub width: f64,
}

/// Starting panels for the spectral integrals, tiling `[-omega_max, omega_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    pub panels: Vec<(f64, f64)>,
    pub anchors: Vec<Anchor>,
    pub omega_max: f64,
}

/// Fine panels per side of an anchor, each `FINE_STEP` linewidths wide.
const FINE_PANELS: i32 = 5;
const FINE_STEP: f64 = 0.4;

impl FrequencyGrid {
    pub fn new(anchors: Vec<Anchor>, omega_max: f64) -> Self {
        let mut cuts = vec![0.0, omega_max];
        for a in &anchors {
            let c = a.center.abs();
            let w = a.width.max(1e-14 * c.max(1.0));
            for k in -FINE_PANELS..=FINE_PANELS {
                cuts.push(c + k as f64 * FINE_STEP * w);
            }
            // geometric grading away from the fine block
            let mut d = FINE_PANELS as f64 * FINE_STEP * w;
            while d < omega_max {
                d *= 2.0;
                cuts.push(c + d);
                cuts.push(c - d);
            }
        }
        cuts.retain(|&x| (0.0..=omega_max).contains(&x));
        cuts.sort_by(f64::total_cmp);
        cuts.dedup_by(|a, b| (*a - *b).abs() <= 4.0 * f64::EPSILON * a.abs().max(1.0));
        let half: Vec<(f64, f64)> = cuts.windows(2).map(|p| (p[0], p[1])).collect();
        let mut panels: Vec<(f64, f64)> = half.iter().rev().map(|&(a, b)| (-b, -a)).collect();
        panels.extend(half);
        Self { panels, anchors, omega_max }
    }

    /// Anchors from the drift eigenvalues plus the mechanical, feedback and
    /// cavity scales.
    pub fn for_params(params: &SystemParams, omega_max: f64) -> Self {
        let mut anchors: Vec<Anchor> = oracle::drift_eigenvalues(params)
            .into_iter()
            .map(|l| Anchor { center: l.im.abs(), width: 2.0 * l.re.abs() })
            .collect();
        for j in 0..2 {
            anchors.push(Anchor { center: params.omega[j], width: params.omega[j] });
        }
        anchors.push(Anchor { center: params.omega_fb, width: params.omega_fb });
        anchors.push(Anchor { center: params.kappa, width: params.kappa });
        Self::new(anchors, omega_max)
    }

    pub fn positive_panels(&self) -> Vec<(f64, f64)> {
        self.panels.iter().copied().filter(|p| p.0 >= 0.0).collect()
    }

    pub fn negative_panels(&self) -> Vec<(f64, f64)> {
        self.panels.iter().copied().filter(|p| p.1 <= 0.0).collect()
    }

    /// Quadrature nodes of the starting panels inside `[center - r, center + r]`.
    pub fn nodes_within(&self, center: f64, radius: f64) -> usize {
        self.panels
            .iter()
            .map(|&(a, b)| {
                let lo = a.max(center - radius);
                let hi = b.min(center + radius);
                if hi <= lo {
                    0.0
                } else {
                    quadrature::NODES_PER_PANEL as f64 * (hi - lo) / (b - a)
                }
            })
            .sum::<f64>()
            .floor() as usize
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoolingReport {
    pub path: SpectrumPath,
    pub var_q: [f64; 2],
    pub var_p: [f64; 2],
    pub n_f: [f64; 2],
    /// Filled in by [`bare_quadrature_occupation`] callers.
    pub n_f_bare: Option<[f64; 2]>,
    /// Estimated absolute quadrature error of `n_f`.
    pub quadrature_error: [f64; 2],
    /// Relative change produced by the last cutoff doubling.
    pub tail_estimate: f64,
    pub omega_max: f64,
    pub stable: bool,
    pub stability: StabilityReport,
    pub evaluations: usize,
    /// Relative mismatch between the two half-axis integrals, when checked.
    pub evenness_error: Option<f64>,
    pub warnings: Vec<String>,
}

/// Largest rate in the problem; sets the probe and cutoff ranges.
fn rate_scale(p: &SystemParams) -> f64 {
    p.omega[0].max(p.omega[1]).max(p.omega_fb).max(p.kappa)
}

enum Spectra {
    Analytic(AnalyticModel),
    Oracle(OracleModel),
}

impl Spectra {
    fn position(&self, w: f64) -> Result<[f64; 2]> {
        match self {
            Spectra::Analytic(m) => m.position_spectrum(w),
            Spectra::Oracle(m) => m.position_spectrum(w),
        }
    }
}

pub fn integrate_occupation(
    params: &SystemParams,
    path: SpectrumPath,
    opts: &CoolingOptions,
) -> Result<CoolingReport> {
    params.validate()?;
    let spectra = match path {
        SpectrumPath::Analytic => Spectra::Analytic(AnalyticModel::new(params)?),
        SpectrumPath::Oracle => Spectra::Oracle(OracleModel::new(params)?),
    };
    let scale = rate_scale(params);
    let stability =
        oracle::stability_check(params, &oracle::probe_grid(params, 4.0 * scale, 401))?;
    let mut warnings = Vec::new();
    if !stability.stable {
        let why = stability.reasons.join("; ");
        if opts.require_stable {
            return Err(Error::Unstable(why));
        }
        warnings.push(format!("unstable parameter set: {why}"));
    }

    let [w1, w2] = params.omega;
    let integrand = |w: f64| -> Result<[f64; 4]> {
        let s = spectra.position(w)?;
        let ww = w * w;
        Ok([s[0], s[1], ww * s[0] / (w1 * w1), ww * s[1] / (w2 * w2)])
    };

    let mut omega_max = 100.0 * scale;
    let grid = FrequencyGrid::for_params(params, omega_max);
    let main = quadrature::integrate(
        &integrand,
        &grid.positive_panels(),
        opts.rel_tol,
        0.0,
        opts.max_evaluations,
    )?;
    let mut evaluations = main.evaluations;
    let mut total = main.value;
    let mut error = main.error;
    if !main.converged {
        warnings.push(format!(
            "quadrature stopped after {} evaluations before reaching rel_tol {:e}",
            main.evaluations, opts.rel_tol
        ));
    }

    let mut tail = f64::INFINITY;
    let mut doublings = 0;
    while tail >= opts.tail_tol {
        if doublings == opts.max_doublings {
            return Err(Error::NonconvergentTail { omega_max, tail });
        }
        let step = omega_max / 8.0;
        let panels: Vec<(f64, f64)> = (0..8)
            .map(|i| (omega_max + i as f64 * step, omega_max + (i + 1) as f64 * step))
            .collect();
        let abs_tol = total.iter().fold(f64::INFINITY, |m, v| m.min(v.abs())) * opts.rel_tol;
        let piece = quadrature::integrate(&integrand, &panels, opts.rel_tol, abs_tol, opts.max_evaluations)?;
        evaluations += piece.evaluations;
        tail = 0.0;
        for k in 0..4 {
            total[k] += piece.value[k];
            error[k] += piece.error[k];
            tail = tail.max((piece.value[k] / total[k]).abs());
        }
        omega_max *= 2.0;
        doublings += 1;
    }

    let evenness_error = if opts.check_evenness {
        let grid = FrequencyGrid::for_params(params, omega_max);
        let neg = quadrature::integrate(
            &integrand,
            &grid.negative_panels(),
            opts.rel_tol,
            0.0,
            opts.max_evaluations,
        )?;
        let pos = quadrature::integrate(
            &integrand,
            &grid.positive_panels(),
            opts.rel_tol,
            0.0,
            opts.max_evaluations,
        )?;
        evaluations += neg.evaluations + pos.evaluations;
        Some((0..4).map(|k| crate::numeric::rel_diff(neg.value[k], pos.value[k])).fold(0.0, f64::max))
    } else {
        None
    };

    // (1 / 2 pi) over the full axis = (1 / pi) over the half axis
    let inv_pi = std::f64::consts::FRAC_1_PI;
    let var_q = [total[0] * inv_pi, total[1] * inv_pi];
    let var_p = [total[2] * inv_pi, total[3] * inv_pi];
    let n_f = [0.5 * (var_q[0] + var_p[0] - 1.0), 0.5 * (var_q[1] + var_p[1] - 1.0)];
    let quadrature_error = [
        0.5 * inv_pi * (error[0] + error[2]),
        0.5 * inv_pi * (error[1] + error[3]),
    ];
    for j in 0..2 {
        if n_f[j] < -1e-6 {
            if stability.stable {
                return Err(Error::NegativeOccupation { mode: j + 1, value: n_f[j] });
            }
            warnings.push(format!("mode {} occupation {:e} is negative", j + 1, n_f[j]));
        }
    }
    Ok(CoolingReport {
        path,
        var_q,
        var_p,
        n_f,
        n_f_bare: None,
        quadrature_error,
        tail_estimate: tail,
        omega_max,
        stable: stability.stable,
        stability,
        evaluations,
        evenness_error,
        warnings,
    })
}

/// Phonon numbers with respect to the quadratures of the uncoupled
/// oscillators, whose frequencies are `omega_tilde_j` instead of `omega_j`.
pub fn bare_quadrature_occupation(report: &CoolingReport, bare: Option<&BareParams>) -> Result<[f64; 2]> {
    let bare = bare.ok_or(Error::BareParamsRequired)?;
    let dressed = bare.dressed_frequencies()?;
    let mut out = [0.0; 2];
    for j in 0..2 {
        // q_bare = sqrt(w~/w) q, p_bare = sqrt(w/w~) p
        let r = bare.omega_tilde[j] / dressed[j];
        let vq = r * report.var_q[j];
        let vp = report.var_p[j] / r;
        out[j] = 0.5 * (vq + vp - 1.0);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DampingSample {
    pub omega: f64,
    pub analytic: [f64; 2],
    pub oracle: [f64; 2],
}

/// `Gamma_j,eff(omega)` on `grid` from the closed form, with the value
/// extracted from the full response alongside.
pub fn effective_damping_profile(params: &SystemParams, grid: &[f64]) -> Result<Vec<DampingSample>> {
    let analytic = AnalyticModel::new(params)?;
    let oracle = OracleModel::new(params)?;
    grid.iter()
        .map(|&w| {
            Ok(DampingSample {
                omega: w,
                analytic: analytic.effective_damping(w)?,
                oracle: oracle.effective_damping(w)?,
            })
        })
        .collect()
}
