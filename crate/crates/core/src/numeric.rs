//! Small numerical helpers shared by the spectral routines.

/// Neumaier-compensated sum of a fixed list of terms.
///
/// The closed-form coefficients mix terms spanning many decades when the
/// bare damping is tiny, so plain left-to-right summation loses digits.
pub fn csum<const N: usize>(terms: [f64; N]) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for t in terms {
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    sum + comp
}

/// `coth(x)` computed as `1 + 2 / expm1(2x)`, accurate for small `x`.
pub fn coth(x: f64) -> f64 {
    if x == 0.0 {
        return f64::INFINITY;
    }
    if x < 0.0 {
        return -coth(-x);
    }
    if x > 20.0 {
        return 1.0 + 2.0 * (-2.0 * x).exp();
    }
    1.0 + 2.0 / (2.0 * x).exp_m1()
}

/// `omega * coth(omega / (2 T))`, the symmetrized thermal weight.
///
/// Finite at `omega = 0` (limit `2T`) and reduces to `|omega|` at `T = 0`.
pub fn omega_coth(omega: f64, temperature: f64) -> f64 {
    if temperature <= 0.0 {
        return omega.abs();
    }
    let x = omega / (2.0 * temperature);
    if x.abs() < 1e-4 {
        let x2 = x * x;
        return 2.0 * temperature * (1.0 + x2 / 3.0 - x2 * x2 / 45.0);
    }
    omega * coth(x)
}

/// Relative difference `|a - b| / max(|a|, |b|)`, zero when both vanish.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}
