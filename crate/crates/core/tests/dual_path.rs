use coldamp_core::analytic::AnalyticModel;
use coldamp_core::cooling::{integrate_occupation, CoolingOptions, SpectrumPath};
use coldamp_core::numeric::rel_diff;
use coldamp_core::oracle::OracleModel;
use coldamp_core::validate::{random_stable_sets, reference_sets, spectrum_mismatch};
use coldamp_core::SystemParams;

fn worst_pointwise(p: &SystemParams, freqs: &[f64]) -> f64 {
    let a = AnalyticModel::new(p).unwrap();
    let o = OracleModel::new(p).unwrap();
    let mut worst: f64 = 0.0;
    for &w in freqs {
        let sa = a.position_spectrum(w).unwrap();
        let so = o.position_spectrum(w).unwrap();
        for j in 0..2 {
            worst = worst.max(rel_diff(sa[j], so[j]));
        }
    }
    worst
}

#[test]
fn reference_spectra_agree_pointwise() {
    let freqs: Vec<f64> = (0..400).map(|i| 0.005 + i as f64 * 0.01).collect();
    for (name, p) in reference_sets() {
        let err = worst_pointwise(&p, &freqs);
        assert!(err < 1e-9, "{name}: {err:e}");
    }
}

#[test]
fn resonance_neighbourhood_agrees() {
    let p = SystemParams::baseline().with_mu(0.02);
    let freqs: Vec<f64> = (-500..=500).map(|i| 1.0 + i as f64 * 1e-6).collect();
    assert!(worst_pointwise(&p, &freqs) < 1e-9);
}

#[test]
fn random_stable_sets_agree() {
    let sets = random_stable_sets(11, 64);
    assert_eq!(sets.len(), 64);
    for (i, p) in sets.iter().enumerate() {
        let top = 2.0 * p.omega[0].max(p.omega[1]).max(p.kappa).max(p.omega_fb);
        let freqs: Vec<f64> = (1..=200).map(|k| top * k as f64 / 200.0).collect();
        let err = spectrum_mismatch(p, &freqs).unwrap();
        assert!(err < 1e-6, "set {i}: {err:e}");
    }
}

#[test]
fn effective_damping_agrees() {
    for (name, p) in reference_sets() {
        let a = AnalyticModel::new(&p).unwrap();
        let o = OracleModel::new(&p).unwrap();
        for w in [0.5, 0.99, 1.0, 1.01, 2.5] {
            let ga = a.effective_damping(w).unwrap();
            let go = o.effective_damping(w).unwrap();
            for j in 0..2 {
                assert!(rel_diff(ga[j], go[j]) < 1e-8, "{name} omega {w}: {ga:?} vs {go:?}");
            }
        }
    }
}

#[test]
fn occupations_are_path_independent() {
    let opts = CoolingOptions::default();
    for (name, p) in reference_sets() {
        let a = integrate_occupation(&p, SpectrumPath::Analytic, &opts).unwrap();
        let o = integrate_occupation(&p, SpectrumPath::Oracle, &opts).unwrap();
        for j in 0..2 {
            assert!(rel_diff(a.n_f[j], o.n_f[j]) < 1e-4, "{name}: {:?} vs {:?}", a.n_f, o.n_f);
        }
    }
}
