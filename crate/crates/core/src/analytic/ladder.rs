//! Closed-form coefficient ladder for the effective susceptibilities.
//!
//! Array fields are zero-based: `a[0]` holds `A_1`, `e[2]` holds `E_3` and so
//! on. The shorthand `x = kappa^2 + omega^2` is stored as `x_sq_plus_kappa` to
//! keep it apart from the complex pair `xpm = (x_+, x_-)`.

use num_complex::Complex64;

use crate::model::SystemParams;
use crate::numeric::csum;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientLadder {
    pub omega: f64,
    /// `Delta_j = omega_j^2 - omega^2`.
    pub delta_sq: [f64; 2],
    pub x_sq_plus_kappa: f64,
    /// `y = omega_fb^2 + omega^2`.
    pub y_sq_plus_fb: f64,
    pub a: [f64; 9],
    pub w: [f64; 7],
    pub b: [f64; 4],
    pub c: [f64; 2],
    pub d: [f64; 3],
    pub e: [f64; 4],
    pub l: [f64; 4],
    pub y: [f64; 2],
    pub f: [f64; 4],
    pub t: [f64; 4],
    pub n: [f64; 4],
    pub m: [f64; 4],
    pub fpm: [Complex64; 2],
    pub wpm: [Complex64; 2],
    pub xpm: [Complex64; 2],
    pub ypm: [Complex64; 2],
    pub zpm: [Complex64; 2],
}

/// `(-1)^j`.
fn sgn(j: usize) -> f64 {
    if j.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

impl CoefficientLadder {
    pub fn new(p: &SystemParams, w: f64) -> Self {
        let [w1, w2] = p.omega;
        let [g1, g2] = p.gamma;
        let [gc1, gc2] = p.coupling;
        let [c1, c2] = p.gain;
        let (k, fb, mu) = (p.kappa, p.omega_fb, p.mu_tilde);
        let w_sq = w * w;
        let dl = [w1 * w1 - w_sq, w2 * w2 - w_sq];
        let x = k * k + w_sq;
        let y = fb * fb + w_sq;

        let a = [
            w * (k + fb),
            k * fb - w_sq,
            w * (g2 * w_sq - k * dl[1]),
            w_sq * (g2 * k + dl[1]),
            w * fb * (g2 * k - w_sq),
            w_sq * fb * (g2 + k),
            gc2 * c2 * w * w2 * fb,
            w * w2 * w2 * fb,
            k * w2 * w2 * fb,
        ];
        let ww = [
            w * (g1 * w_sq - k * dl[0]),
            w_sq * (g1 * k + dl[0]),
            w * fb * (g1 * k - w_sq),
            w_sq * fb * (g1 + k),
            gc1 * c1 * w * w1 * fb,
            w * w1 * w1 * fb,
            k * w1 * w1 * fb,
        ];
        let b = [
            csum([a[0] * a[2], -a[1] * a[3]]),
            csum([a[1] * a[2], a[0] * a[3]]),
            csum([a[0] * a[4], a[1] * a[5], a[0] * a[6], a[0] * a[7], -a[1] * a[8]]),
            csum([a[1] * a[4], -a[0] * a[5], a[1] * a[6], a[1] * a[7], a[0] * a[8]]),
        ];
        let c = [b[0] - b[2], b[1] - b[3]];
        let d = [
            2.0 * mu * a[0] - gc2 * c1 * w * fb,
            2.0 * mu * a[0] - gc1 * c2 * w * fb,
            2.0 * mu * a[1],
        ];

        // E_j, L_j, Y_j, T_j for j = 1, 2 (index i = j - 1)
        let mut e = [0.0; 4];
        let mut l = [0.0; 4];
        for j in 1..=2 {
            let i = j - 1;
            e[i] = csum([
                c[0] * d[0] * d[j],
                d[1] * d[2] * c[2 - j],
                sgn(j) * d[2] * d[2] * c[i],
                -sgn(j) * c[1] * d[0] * d[3 - j],
            ]);
            l[i] = csum([a[i] * ww[0], sgn(j) * a[2 - j] * ww[1]]);
            l[i + 2] = csum([
                a[i] * ww[2],
                a[i] * ww[4],
                a[i] * ww[5],
                -sgn(j) * a[2 - j] * ww[3],
                sgn(j) * a[2 - j] * ww[6],
            ]);
        }
        let yy = [l[0] - l[2], l[1] - l[3]];
        let mut t = [0.0; 4];
        for j in 1..=2 {
            t[j - 1] = csum([
                d[j] * d[0] * yy[0],
                sgn(j) * d[2] * d[2] * yy[j - 1],
                -sgn(j) * d[0] * yy[1] * d[3 - j],
                d[1] * d[2] * yy[2 - j],
            ]);
        }
        let aa = a[0] * a[0] + a[1] * a[1];
        let cc = c[0] * c[0] + c[1] * c[1];
        let ysq = yy[0] * yy[0] + yy[1] * yy[1];
        for j in 1..=2 {
            let i = j - 1;
            e[i + 2] = w1 * (e[i] * w2 * aa - sgn(j) * a[i] * gc1 * c1 * w * fb * cc);
            t[i + 2] = w2 * (t[i] * w1 * aa - sgn(j) * a[i] * gc2 * c2 * w * fb * ysq);
        }

        let mut f = [0.0; 4];
        let cross = gc2 * c1 + gc1 * c2;
        let xxyy = x * x * y * y;
        for j in 1..=2 {
            let o = 2 - j; // index of mode 3 - j
            let (go, wo, cpl, gn) = (p.gamma[o], p.omega[o], p.coupling[o], p.gain[o]);
            f[j - 1] = p.omega[j - 1]
                * fb
                * xxyy
                * csum([
                    go * go * w_sq * (w_sq - k * fb),
                    -cpl * gn * go * w_sq * wo * fb,
                    dl[o] * dl[o] * (w_sq - k * fb),
                ]);
            f[j + 1] = w1
                * w2
                * xxyy
                * csum([
                    (-cross * w_sq) * fb * (w_sq - k * fb),
                    2.0 * cpl * gn * mu * wo * fb * (w_sq - k * fb),
                    cross * wo * wo * fb * (w_sq - k * fb),
                    go * cross * w_sq * fb * (k + fb),
                    -go * 2.0 * mu * x * y,
                ]);
        }

        let i = Complex64::i();
        let kw = [Complex64::new(k, w), Complex64::new(k, -w)];
        let wf = [Complex64::new(w, -fb), Complex64::new(w, fb)];
        let fpm = [
            2.0 * mu * kw[0] * wf[0] - gc2 * c1 * w * fb,
            2.0 * mu * kw[1] * wf[1] - gc2 * c1 * w * fb,
        ];
        let wpm = [
            2.0 * mu * kw[0] * wf[0] - gc1 * c2 * w * fb,
            2.0 * mu * kw[1] * wf[1] - gc1 * c2 * w * fb,
        ];
        let xnum = w * (gc2 * c1 - gc1 * c2);
        let xpm = [xnum / kw[0], xnum / kw[1]];
        let ypm = [
            wf[0] * (gc1 * w * (w - i * g2) - 2.0 * gc2 * mu * w2 - gc1 * w2 * w2) / fb,
            wf[1] * (gc1 * w * (w + i * g2) - 2.0 * gc2 * mu * w2 - gc1 * w2 * w2) / fb,
        ];
        let zpm = [
            wf[1] * (2.0 * gc1 * mu * w1 + gc2 * (dl[0] - i * g1 * w)) / fb,
            wf[0] * (2.0 * gc1 * mu * w1 + gc2 * (dl[0] + i * g1 * w)) / fb,
        ];

        let n = [
            w2 * w2 * (fpm[0] * fpm[1]).re,
            mech_denominator(w, x, k, fb, g2, w2, gc2 * c2, dl[1]),
            csum([
                4.0 * c2 * c2 * mu * mu * w2 * w2,
                4.0 * c1 * c2 * mu * w2 * dl[1],
                c1 * c1 * (g2 * g2 * w_sq + dl[1] * dl[1]),
            ]),
            // x_- pairs with y_-: the product is |G2 w2 x_- + y_-|^2
            ((gc2 * w2 * xpm[1] + ypm[1]) * (gc2 * w2 * xpm[0] + ypm[0])).re,
        ];
        let m = [
            w1 * w1 * (wpm[0] * wpm[1]).re,
            mech_denominator(w, x, k, fb, g1, w1, gc1 * c1, dl[0]),
            csum([
                4.0 * c1 * c1 * mu * mu * w1 * w1,
                4.0 * c1 * c2 * mu * w1 * dl[0],
                c2 * c2 * (g1 * g1 * w_sq + dl[0] * dl[0]),
            ]),
            ((gc1 * w1 * xpm[0] + zpm[1]) * (gc1 * w1 * xpm[1] + zpm[0])).re,
        ];

        Self {
            omega: w,
            delta_sq: dl,
            x_sq_plus_kappa: x,
            y_sq_plus_fb: y,
            a,
            w: ww,
            b,
            c,
            d,
            e,
            l,
            y: yy,
            f,
            t,
            n,
            m,
            fpm,
            wpm,
            xpm,
            ypm,
            zpm,
        }
    }

    /// `A_1^2 + A_2^2`.
    pub fn a_norm(&self) -> f64 {
        self.a[0] * self.a[0] + self.a[1] * self.a[1]
    }

    /// `C_1^2 + C_2^2`.
    pub fn c_norm(&self) -> f64 {
        self.c[0] * self.c[0] + self.c[1] * self.c[1]
    }

    /// `Y_1^2 + Y_2^2`.
    pub fn y_norm(&self) -> f64 {
        self.y[0] * self.y[0] + self.y[1] * self.y[1]
    }
}

/// Shared shape of `N_2` and `M_2`; `gg` is the product `G_j g_cd,j`.
#[allow(clippy::too_many_arguments)]
fn mech_denominator(w: f64, x: f64, k: f64, fb: f64, g: f64, wj: f64, gg: f64, dl: f64) -> f64 {
    let w_sq = w * w;
    let r = w_sq * w - w * wj * (gg + wj);
    let inner = csum([g * g * w_sq * x, 2.0 * gg * g * k * w_sq * wj, k * k * dl * dl, r * r]);
    csum([
        w_sq * x * (g * g * w_sq + dl * dl),
        -2.0 * gg * w_sq * wj * fb * (w_sq * g - k * dl),
        inner * fb * fb,
    ])
}

pub fn ladder(params: &SystemParams, omega: f64) -> CoefficientLadder {
    CoefficientLadder::new(params, omega)
}
