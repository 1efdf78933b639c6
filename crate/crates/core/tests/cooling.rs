#![allow(clippy::needless_range_loop)]

use coldamp_core::cooling::{
    bare_quadrature_occupation, effective_damping_profile, integrate_occupation, CoolingOptions,
    FrequencyGrid, SpectrumPath,
};
use coldamp_core::numeric::rel_diff;
use coldamp_core::{BareParams, Error, SystemParams};

fn occupation(p: &SystemParams) -> [f64; 2] {
    integrate_occupation(p, SpectrumPath::Analytic, &CoolingOptions::default()).unwrap().n_f
}

#[test]
fn thermal_equilibrium_without_coupling() {
    let p = SystemParams { coupling: [0.0, 0.0], gain: [0.0, 0.0], ..SystemParams::baseline() };
    for path in [SpectrumPath::Analytic, SpectrumPath::Oracle] {
        let r = integrate_occupation(&p, path, &CoolingOptions::default()).unwrap();
        for j in 0..2 {
            assert!(rel_diff(r.n_f[j], 1e3) < 1e-3, "{path}: {:?}", r.n_f);
        }
    }
}

#[test]
fn degenerate_modes_are_not_cooled_without_amc() {
    let n = occupation(&SystemParams::baseline());
    assert!(n[0] > 100.0 && n[1] > 100.0, "{n:?}");
}

#[test]
fn amc_cools_both_modes_to_the_ground_state() {
    let n = occupation(&SystemParams::baseline().with_mu(0.02));
    assert!(n[0] < 1.0 && n[1] < 1.0, "{n:?}");
    assert!(n[0] < n[1]);
    assert!((n[0] - 0.54719).abs() < 1e-4 && (n[1] - 0.72740).abs() < 1e-4, "{n:?}");
}

#[test]
fn stronger_second_loop_favours_mode_two() {
    let p = SystemParams { gain: [1.0, 1.7], coupling: [0.4, 0.72], ..SystemParams::baseline().with_mu(0.02) };
    let r = integrate_occupation(&p, SpectrumPath::Analytic, &CoolingOptions::default()).unwrap();
    assert!(r.stable);
    assert!(r.n_f[1] < r.n_f[0] && r.n_f[0] < 1.0, "{:?}", r.n_f);
}

#[test]
fn report_invariants() {
    let r = integrate_occupation(&SystemParams::baseline().with_mu(0.02), SpectrumPath::Oracle, &CoolingOptions::default())
        .unwrap();
    for j in 0..2 {
        assert_eq!(r.n_f[j], 0.5 * (r.var_q[j] + r.var_p[j] - 1.0));
        assert!(r.var_q[j] > 0.0 && r.var_p[j] > 0.0);
        assert!(r.quadrature_error[j] < 1e-6 * r.n_f[j]);
    }
    assert!(r.tail_estimate < 1e-6);
    assert!(r.warnings.is_empty());
}

#[test]
fn momentum_tail_is_logarithmic() {
    // the Brownian kernel grows like omega, so each cutoff doubling adds
    // gamma ln 2 to the momentum integral and a tighter tail criterion fails
    let p = SystemParams::baseline().with_mu(0.02);
    let r = integrate_occupation(&p, SpectrumPath::Analytic, &CoolingOptions::default()).unwrap();
    assert!(r.tail_estimate < 1e-6);
    let tight = CoolingOptions { tail_tol: 1e-8, max_doublings: 30, ..CoolingOptions::default() };
    match integrate_occupation(&p, SpectrumPath::Analytic, &tight) {
        Err(Error::NonconvergentTail { tail, .. }) => {
            let added = tail * std::f64::consts::PI * r.var_p[0].min(r.var_p[1]);
            assert!(rel_diff(added, p.gamma[0] * std::f64::consts::LN_2) < 0.05, "{added:e}");
        }
        other => panic!("expected a nonconvergent tail, got {other:?}"),
    }
}

#[test]
fn tighter_tolerance_stays_within_error_estimate() {
    let p = SystemParams::baseline().with_mu(0.02);
    let loose = CoolingOptions { rel_tol: 1e-6, ..CoolingOptions::default() };
    let a = integrate_occupation(&p, SpectrumPath::Analytic, &loose).unwrap();
    let b = integrate_occupation(&p, SpectrumPath::Analytic, &CoolingOptions::default()).unwrap();
    for j in 0..2 {
        // the doubling criterion bounds the tail part separately
        let budget = a.quadrature_error[j] + a.tail_estimate * a.n_f[j].abs().max(1.0);
        assert!((a.n_f[j] - b.n_f[j]).abs() <= budget, "mode {j}");
    }
}

#[test]
fn half_axis_matches_mirrored_axis() {
    let opts = CoolingOptions { check_evenness: true, ..CoolingOptions::default() };
    let r = integrate_occupation(&SystemParams::baseline().with_mu(0.02), SpectrumPath::Analytic, &opts).unwrap();
    assert!(r.evenness_error.unwrap() < 1e-8);
}

#[test]
fn grid_resolves_every_resonance() {
    for p in [SystemParams::baseline(), SystemParams::baseline().with_mu(0.02)] {
        let grid = FrequencyGrid::for_params(&p, 400.0);
        let (lo, hi) = (grid.panels[0].0, grid.panels.last().unwrap().1);
        assert_eq!((lo, hi), (-400.0, 400.0));
        for w in grid.panels.windows(2) {
            assert_eq!(w[0].1, w[1].0, "gap or overlap");
        }
        for a in &grid.anchors {
            // nodes within a tenth of the linewidth, per linewidth
            let radius = 0.05 * a.width;
            let per_width = grid.nodes_within(a.center, radius) as f64 * a.width / (2.0 * radius);
            assert!(per_width >= 50.0, "anchor {a:?}: {per_width}");
        }
    }
}

#[test]
fn bare_quadratures_without_amc_are_unchanged() {
    let p = SystemParams::baseline();
    let r = integrate_occupation(&p, SpectrumPath::Analytic, &CoolingOptions::default()).unwrap();
    let bare = BareParams::from_system(&p, [1.0, 1.0]).unwrap();
    assert_eq!(bare_quadrature_occupation(&r, Some(&bare)).unwrap(), r.n_f);
    assert_eq!(bare_quadrature_occupation(&r, None), Err(Error::BareParamsRequired));
}

#[test]
fn bare_quadratures_track_then_exceed() {
    for (mu, within) in [(0.01, true), (0.025, true), (0.05, false)] {
        let p = SystemParams::baseline().with_mu(mu);
        let r = integrate_occupation(&p, SpectrumPath::Analytic, &CoolingOptions::default()).unwrap();
        let bare = bare_quadrature_occupation(&r, Some(&BareParams::from_system(&p, [1.0, 1.0]).unwrap())).unwrap();
        for j in 0..2 {
            if within {
                assert!(rel_diff(bare[j], r.n_f[j]) <= 0.1);
            } else {
                assert!(bare[j] > r.n_f[j]);
            }
        }
    }
}

#[test]
fn damping_profile_resonance_values() {
    let prof = effective_damping_profile(&SystemParams::baseline(), &[-1.0, 1.0, 5.0]).unwrap();
    for s in &prof[..2] {
        for j in 0..2 {
            let ratio = s.analytic[j] / 1e-6;
            assert!((1.0..=10.0).contains(&ratio), "{ratio}");
            assert!(rel_diff(s.analytic[j], s.oracle[j]) < 1e-8);
        }
    }
    let amc = effective_damping_profile(&SystemParams::baseline().with_mu(0.02), &[1.0]).unwrap();
    assert!(amc[0].analytic.iter().all(|g| *g > 1e4 * 1e-6));
    // far off resonance the feedback contribution rolls off
    assert!(prof[2].analytic.iter().all(|g| *g < 1e-6 + 1e-3));
}
