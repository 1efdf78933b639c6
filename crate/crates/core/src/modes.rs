//! Bright/dark decomposition and the AMC-diagonalized mechanical modes.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::SystemParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeHybridization {
    /// Bright and dark mode frequencies without the AMC.
    pub omega_plus: f64,
    pub omega_minus: f64,
    pub g_plus: f64,
    pub g_minus: f64,
    /// Frequencies of the AMC-diagonalized modes.
    pub omega_tilde_plus: f64,
    pub omega_tilde_minus: f64,
    pub f: f64,
    pub h: f64,
    pub gtilde_plus: f64,
    pub gtilde_minus: f64,
    pub eta: f64,
}

/// Bright (`+`) and dark (`-`) mode frequencies and couplings,
/// returned as `([omega_+, omega_-], [G_+, G_-])`.
pub fn bright_dark(params: &SystemParams) -> Result<([f64; 2], [f64; 2])> {
    let [g1, g2] = params.coupling;
    let [w1, w2] = params.omega;
    let g0_sq = g1 * g1 + g2 * g2;
    if g0_sq == 0.0 {
        return Err(Error::NoCoupling);
    }
    let omega = [
        (g1 * g1 * w1 + g2 * g2 * w2) / g0_sq,
        (g2 * g2 * w1 + g1 * g1 * w2) / g0_sq,
    ];
    Ok((omega, [g0_sq.sqrt(), g1 * g2 * (w1 - w2) / g0_sq]))
}

/// Transform coefficients `(f, h)` for the signed beam-splitter strength `eta`.
fn transform(params: &SystemParams, eta: f64) -> (f64, f64) {
    let [w1, w2] = params.omega;
    let [g1, g2] = params.coupling;
    if eta == 0.0 {
        // no AMC: limits as mu_tilde -> 0+, i.e. eta -> 0-
        return if w1 > w2 {
            (1.0, 0.0)
        } else if w1 < w2 {
            (0.0, 1.0)
        } else {
            let g0 = g1.hypot(g2);
            if g0 == 0.0 {
                (1.0, 0.0)
            } else {
                (g1 / g0, -g2 / g0)
            }
        };
    }
    let r = std::f64::consts::FRAC_1_SQRT_2;
    if w1 == w2 {
        return (r, -eta.signum() * r);
    }
    let d = tilde_frequencies(w1, w2, eta)[1] - w1;
    if d == 0.0 {
        return (0.0, -eta.signum());
    }
    let f = d.abs() / d.hypot(eta);
    (f, eta * f / d)
}

fn tilde_frequencies(w1: f64, w2: f64, eta: f64) -> [f64; 2] {
    let split = (w1 - w2).hypot(2.0 * eta);
    [(w1 + w2 + split) / 2.0, (w1 + w2 - split) / 2.0]
}

/// AMC-diagonalized modes. The `-2 mu_tilde q1 q2` coupling becomes the
/// beam splitter `eta (a1^dag a2 + h.c.)` with `eta = -mu_tilde` under the RWA;
/// the sign decides on which side of `omega_1 = omega_2` a dark mode reappears.
pub fn amc_diagonalize(params: &SystemParams) -> ModeHybridization {
    let eta = -params.mu_tilde;
    let [w1, w2] = params.omega;
    let [g1, g2] = params.coupling;
    let ((omega_plus, omega_minus), (g_plus, g_minus)) = match bright_dark(params) {
        Ok((w, g)) => ((w[0], w[1]), (g[0], g[1])),
        Err(_) => ((w1, w2), (0.0, 0.0)),
    };
    let wt = tilde_frequencies(w1, w2, eta);
    let (f, h) = transform(params, eta);
    ModeHybridization {
        omega_plus,
        omega_minus,
        g_plus,
        g_minus,
        omega_tilde_plus: wt[0],
        omega_tilde_minus: wt[1],
        f,
        h,
        gtilde_plus: f * g1 - h * g2,
        gtilde_minus: h * g1 + f * g2,
        eta,
    }
}

/// `min(|G~_+|, |G~_-|) / G_0`; zero when a perfect dark mode survives.
pub fn dark_mode_residual(params: &SystemParams) -> f64 {
    let g0 = params.coupling[0].hypot(params.coupling[1]);
    if g0 == 0.0 {
        return 0.0;
    }
    let m = amc_diagonalize(params);
    m.gtilde_plus.abs().min(m.gtilde_minus.abs()) / g0
}
