//! Globally adaptive 21-point Gauss-Kronrod integration of vector-valued
//! integrands over a list of starting panels.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::Result;

/// 21-point Kronrod abscissae on [0, 1] (symmetric), QUADPACK `qk21`.
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077589988919416,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

/// 10-point Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

pub const NODES_PER_PANEL: usize = 21;

/// Kronrod estimate and error of one panel, per component.
#[derive(Debug, Clone, Copy)]
pub struct PanelEstimate<const N: usize> {
    pub lo: f64,
    pub hi: f64,
    pub value: [f64; N],
    pub error: [f64; N],
}

/// Apply the 21-point rule on `[lo, hi]`.
pub fn gk21<const N: usize, F>(f: &F, lo: f64, hi: f64) -> Result<PanelEstimate<N>>
where
    F: Fn(f64) -> Result<[f64; N]>,
{
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    let mut fv = [[0.0; N]; 21];
    fv[10] = f(c)?;
    for i in 0..10 {
        fv[i] = f(c - h * XGK[i])?;
        fv[20 - i] = f(c + h * XGK[i])?;
    }
    let mut value = [0.0; N];
    let mut error = [0.0; N];
    for k in 0..N {
        let mut kr = WGK[10] * fv[10][k];
        let mut ga = 0.0;
        let mut abs = WGK[10] * fv[10][k].abs();
        for i in 0..10 {
            let pair = fv[i][k] + fv[20 - i][k];
            kr += WGK[i] * pair;
            abs += WGK[i] * (fv[i][k].abs() + fv[20 - i][k].abs());
            if i % 2 == 1 {
                ga += WG[i / 2] * pair;
            }
        }
        let mean = 0.5 * kr;
        let mut asc = WGK[10] * (fv[10][k] - mean).abs();
        for i in 0..10 {
            asc += WGK[i] * ((fv[i][k] - mean).abs() + (fv[20 - i][k] - mean).abs());
        }
        let (kr, ga, abs, asc) = (kr * h, ga * h, abs * h, asc * h.abs());
        let mut err = (kr - ga).abs();
        if asc != 0.0 && err != 0.0 {
            err = asc * (200.0 * err / asc).powf(1.5).min(1.0);
        }
        let eps = 50.0 * f64::EPSILON;
        if abs > f64::MIN_POSITIVE / eps {
            err = err.max(eps * abs);
        }
        value[k] = kr;
        error[k] = err;
    }
    Ok(PanelEstimate { lo, hi, value, error })
}

#[derive(Debug, Clone, Copy)]
pub struct QuadratureResult<const N: usize> {
    pub value: [f64; N],
    pub error: [f64; N],
    pub evaluations: usize,
    pub panels: usize,
    pub converged: bool,
}

struct Ranked<const N: usize> {
    score: f64,
    est: PanelEstimate<N>,
}

impl<const N: usize> PartialEq for Ranked<N> {
    fn eq(&self, other: &Self) -> bool {
        self.score == other.score
    }
}
impl<const N: usize> Eq for Ranked<N> {}
impl<const N: usize> PartialOrd for Ranked<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<const N: usize> Ord for Ranked<N> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.score.total_cmp(&other.score)
    }
}

/// Refine `panels` until every component meets `rel_tol` (or `abs_tol`),
/// always splitting the panel with the largest scaled error.
pub fn integrate<const N: usize, F>(
    f: &F,
    panels: &[(f64, f64)],
    rel_tol: f64,
    abs_tol: f64,
    max_evaluations: usize,
) -> Result<QuadratureResult<N>>
where
    F: Fn(f64) -> Result<[f64; N]>,
{
    let mut heap = BinaryHeap::with_capacity(panels.len() * 2);
    let mut value = [0.0; N];
    let mut error = [0.0; N];
    let mut evaluations = 0;
    let mut ests = Vec::with_capacity(panels.len());
    for &(lo, hi) in panels {
        let est = gk21(f, lo, hi)?;
        evaluations += NODES_PER_PANEL;
        for k in 0..N {
            value[k] += est.value[k];
            error[k] += est.error[k];
        }
        ests.push(est);
    }
    let scale = |value: &[f64; N]| value.map(|v| (rel_tol * v.abs()).max(abs_tol).max(f64::MIN_POSITIVE));
    let score = |est: &PanelEstimate<N>, s: &[f64; N]| {
        (0..N).map(|k| est.error[k] / s[k]).fold(0.0, f64::max)
    };
    let s0 = scale(&value);
    for est in ests {
        heap.push(Ranked { score: score(&est, &s0), est });
    }
    let done = |value: &[f64; N], error: &[f64; N]| {
        let s = scale(value);
        (0..N).all(|k| error[k] <= s[k])
    };
    let mut converged = done(&value, &error);
    while !converged && evaluations < max_evaluations {
        let Some(Ranked { est, .. }) = heap.pop() else { break };
        let mid = 0.5 * (est.lo + est.hi);
        if !(mid > est.lo && mid < est.hi) {
            // panel at floating-point resolution; keep it and stop refining it
            heap.push(Ranked { score: 0.0, est });
            if heap.peek().is_none_or(|r| r.score == 0.0) {
                break;
            }
            continue;
        }
        let left = gk21(f, est.lo, mid)?;
        let right = gk21(f, mid, est.hi)?;
        evaluations += 2 * NODES_PER_PANEL;
        for k in 0..N {
            value[k] += left.value[k] + right.value[k] - est.value[k];
            error[k] += left.error[k] + right.error[k] - est.error[k];
        }
        let s = scale(&value);
        heap.push(Ranked { score: score(&left, &s), est: left });
        heap.push(Ranked { score: score(&right, &s), est: right });
        converged = done(&value, &error);
        if !converged && heap.len() % 256 == 0 {
            // rescore so the ordering tracks the current totals
            let items: Vec<_> = heap.drain().collect();
            for r in items {
                heap.push(Ranked { score: score(&r.est, &s), est: r.est });
            }
        }
    }
    // re-add in a fixed order to limit rounding drift in the running sum
    let mut all: Vec<_> = heap.into_iter().map(|r| r.est).collect();
    all.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let mut value = [0.0; N];
    let mut error = [0.0; N];
    for est in &all {
        for k in 0..N {
            value[k] += est.value[k];
            error[k] += est.error[k];
        }
    }
    Ok(QuadratureResult { value, error, evaluations, panels: all.len(), converged })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rule(deg: i32, gauss: bool) -> f64 {
        // integrate x^deg over [-1, 1]
        let f = |x: f64| x.powi(deg);
        let mut s = WGK[10] * f(0.0);
        let mut g = 0.0;
        for i in 0..10 {
            s += WGK[i] * (f(XGK[i]) + f(-XGK[i]));
            if i % 2 == 1 {
                g += WG[i / 2] * (f(XGK[i]) + f(-XGK[i]));
            }
        }
        if gauss {
            g
        } else {
            s
        }
    }

    #[test]
    fn weights_sum_to_interval_length() {
        assert!((rule(0, false) - 2.0).abs() < 1e-15);
        assert!((rule(0, true) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn polynomial_exactness() {
        for deg in 0..=31 {
            let exact = if deg % 2 == 0 { 2.0 / (deg as f64 + 1.0) } else { 0.0 };
            assert!((rule(deg, false) - exact).abs() < 1e-14, "kronrod degree {deg}");
            if deg <= 19 {
                assert!((rule(deg, true) - exact).abs() < 1e-14, "gauss degree {deg}");
            }
        }
    }

    #[test]
    fn narrow_lorentzian() {
        let g = 1e-6;
        let f = |x: f64| Ok([g / ((x - 1.0).powi(2) + g * g)]);
        let panels = [(0.0, 1.0 - 10.0 * g), (1.0 - 10.0 * g, 1.0 + 10.0 * g), (1.0 + 10.0 * g, 2.0)];
        let r = integrate(&f, &panels, 1e-10, 0.0, 1_000_000).unwrap();
        let exact = 2.0 * (1.0 / g).atan();
        assert!(r.converged);
        assert!((r.value[0] - exact).abs() / exact < 1e-9);
    }

    #[test]
    fn vector_components_converge_together() {
        let f = |x: f64| Ok([x.exp(), (3.0 * x).sin()]);
        let r = integrate(&f, &[(0.0, 1.0)], 1e-12, 0.0, 100_000).unwrap();
        assert!((r.value[0] - (1f64.exp() - 1.0)).abs() < 1e-12);
        assert!((r.value[1] - (1.0 - 3f64.cos()) / 3.0).abs() < 1e-12);
    }
}
