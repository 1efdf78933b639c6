use coldamp_core::cooling::{integrate_occupation, CoolingOptions, SpectrumPath};
use coldamp_core::oracle::{drift_eigenvalues, probe_grid, stability_check};
use coldamp_core::{Error, SystemParams};

fn check(p: &SystemParams) -> coldamp_core::oracle::StabilityReport {
    stability_check(p, &probe_grid(p, 16.0, 401)).unwrap()
}

#[test]
fn reference_sets_are_stable() {
    for mu in [0.0, 0.02, 0.05] {
        let r = check(&SystemParams::baseline().with_mu(mu));
        assert!(r.stable, "mu {mu}: {:?}", r.reasons);
        assert!(r.max_real_eigenvalue < 0.0);
    }
}

#[test]
fn no_coupling_and_no_feedback_is_stable() {
    let p = SystemParams { coupling: [0.0, 0.0], gain: [0.0, 0.0], ..SystemParams::baseline() };
    let r = check(&p);
    assert!(r.stable, "{:?}", r.reasons);
    // both modes decay at gamma / 2
    let eig = drift_eigenvalues(&p);
    assert!(eig.iter().filter(|l| l.im.abs() > 0.5).all(|l| (l.re + 0.5e-6).abs() < 1e-12));
}

#[test]
fn reversed_feedback_is_unstable() {
    let p = SystemParams { gain: [-1.0, -0.6], ..SystemParams::baseline().with_mu(0.02) };
    let r = check(&p);
    assert!(!r.stable);
    assert!(r.max_real_eigenvalue > 0.0);
    let strict = CoolingOptions { require_stable: true, ..CoolingOptions::default() };
    assert!(matches!(integrate_occupation(&p, SpectrumPath::Oracle, &strict), Err(Error::Unstable(_))));
}

#[test]
fn single_strong_loop_is_flagged() {
    // either half of the strong second-loop setting alone overdrives the system
    for (g2, big_g2) in [(1.7, 0.28), (0.6, 0.72)] {
        let p = SystemParams { gain: [1.0, g2], coupling: [0.4, big_g2], ..SystemParams::baseline().with_mu(0.02) };
        let r = integrate_occupation(&p, SpectrumPath::Analytic, &CoolingOptions::default());
        match r {
            Ok(rep) => assert!(!rep.stable && !rep.warnings.is_empty(), "g2 {g2} G2 {big_g2}"),
            Err(e) => assert!(matches!(e, Error::NegativeOccupation { .. }), "{e}"),
        }
    }
}
