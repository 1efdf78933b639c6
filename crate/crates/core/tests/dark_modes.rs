use coldamp_core::analytic::net_cooling_rate;
use coldamp_core::modes::{amc_diagonalize, dark_mode_residual};
use coldamp_core::SystemParams;

const GAMMA: f64 = 1e-6;

/// Frequency of the hybrid mode that has lost its cavity coupling.
fn dark_frequency(p: &SystemParams) -> f64 {
    let m = amc_diagonalize(p);
    if m.gtilde_plus.abs() < m.gtilde_minus.abs() {
        m.omega_tilde_plus
    } else {
        m.omega_tilde_minus
    }
}

#[test]
fn dark_modes_are_not_cooled() {
    let sym = SystemParams { gain: [1.0, 1.0], coupling: [0.4, 0.4], ..SystemParams::baseline().with_mu(0.02) };
    for p in [SystemParams::baseline(), sym] {
        assert!(dark_mode_residual(&p) < 1e-15);
        let w = dark_frequency(&p);
        let gc = net_cooling_rate(&p, w).unwrap();
        assert!(gc.iter().all(|g| g.abs() < 10.0 * GAMMA), "omega {w}: {gc:?}");
    }
}

#[test]
fn cooling_rate_grows_with_amc() {
    let mut prev = net_cooling_rate(&SystemParams::baseline(), 1.0).unwrap();
    for i in 1..=100 {
        let mu = 0.02 * i as f64 / 100.0;
        let gc = net_cooling_rate(&SystemParams::baseline().with_mu(mu), 1.0).unwrap();
        assert!(gc[0] > prev[0] && gc[1] > prev[1], "mu {mu}");
        prev = gc;
    }
}
