//! Self-check suite: analytic/oracle agreement on seeded random parameter
//! sets plus the exact identities the model must satisfy.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analytic::{ladder, AnalyticModel};
use crate::cooling::{integrate_occupation, CoolingOptions, SpectrumPath};
use crate::error::Result;
use crate::model::SystemParams;
use crate::modes::amc_diagonalize;
use crate::numeric::rel_diff;
use crate::oracle::{drift_eigenvalues, feedback_transfer, OracleModel};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidationOptions {
    pub seed: u64,
    pub random_sets: usize,
    pub frequencies: usize,
    pub spectrum_tol: f64,
    pub occupation_tol: f64,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        Self { seed: 0x5eed, random_sets: 64, frequencies: 200, spectrum_tol: 1e-6, occupation_tol: 1e-4 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Worst observed error in the check's own metric.
    pub worst: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Check {
    fn new(name: &str, worst: f64, tolerance: f64, detail: String) -> Self {
        // NaN fails
        let passed = worst <= tolerance;
        Self { name: name.into(), passed, worst, tolerance, detail }
    }

    fn error(name: &str, tolerance: f64, err: impl std::fmt::Display) -> Self {
        Self { name: name.into(), passed: false, worst: f64::NAN, tolerance, detail: err.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub options: ValidationOptions,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            s.push_str(&format!(
                "{} {:<28} worst {:<12.3e} tol {:<8.1e} {}\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.worst,
                c.tolerance,
                c.detail
            ));
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        s.push_str(&format!("{} checks, {} failed\n", self.checks.len(), failed));
        s
    }
}

/// Reference sets: the default couplings with and without the mechanical
/// coupling, plus feedback biased towards the second mode.
pub fn reference_sets() -> Vec<(&'static str, SystemParams)> {
    let base = SystemParams::baseline();
    vec![
        ("mu=0", base),
        ("mu=0.02", base.with_mu(0.02)),
        ("mu=0.05", base.with_mu(0.05)),
        ("mu=0.02 g2=1.7 G2=0.72", SystemParams { gain: [1.0, 1.7], coupling: [0.4, 0.72], ..base.with_mu(0.02) }),
    ]
}

fn log_uniform(rng: &mut ChaCha8Rng, center: f64) -> f64 {
    center * 10f64.powf(rng.gen_range(-1.0..=1.0))
}

fn is_stable(p: &SystemParams) -> bool {
    p.validate().is_ok() && drift_eigenvalues(p).iter().all(|l| l.re < 0.0)
}

/// Draw `n` parameter sets with every rate within a decade of the defaults
/// and keep only those whose linear dynamics decay.
pub fn random_stable_sets(seed: u64, n: usize) -> Vec<SystemParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = SystemParams::baseline();
    let mut out = Vec::with_capacity(n);
    let mut draws = 0;
    while out.len() < n && draws < 1000 * n.max(1) {
        draws += 1;
        let mut p = b;
        for j in 0..2 {
            p.omega[j] = log_uniform(&mut rng, b.omega[j]);
            p.gamma[j] = log_uniform(&mut rng, b.gamma[j]);
            p.coupling[j] = log_uniform(&mut rng, b.coupling[j]);
            p.gain[j] = log_uniform(&mut rng, b.gain[j]);
            p.nbar[j] = log_uniform(&mut rng, b.nbar[j]);
        }
        p.kappa = log_uniform(&mut rng, b.kappa);
        p.omega_fb = log_uniform(&mut rng, b.omega_fb);
        p.mu_tilde = log_uniform(&mut rng, 0.02);
        p.vartheta = rng.gen_range(0.3..=1.0);
        if is_stable(&p) {
            out.push(p);
        }
    }
    out
}

/// Half the points spread over the whole band, half near the resonances.
fn sample_frequencies(rng: &mut ChaCha8Rng, p: &SystemParams, n: usize) -> Vec<f64> {
    let top = 2.0 * p.omega[0].max(p.omega[1]).max(p.omega_fb).max(p.kappa);
    (0..n)
        .map(|i| match i % 4 {
            0 | 1 => rng.gen_range(1e-3 * top..top),
            k => p.omega[k - 2] * rng.gen_range(0.8..1.2),
        })
        .collect()
}

/// `max_omega |S_a - S_o| / max_omega S_o` over both modes.
pub fn spectrum_mismatch(p: &SystemParams, freqs: &[f64]) -> Result<f64> {
    let a = AnalyticModel::new(p)?;
    let o = OracleModel::new(p)?;
    let mut diff = [0.0f64; 2];
    let mut peak = [0.0f64; 2];
    for &w in freqs {
        let sa = a.position_spectrum(w)?;
        let so = o.position_spectrum(w)?;
        for j in 0..2 {
            diff[j] = diff[j].max((sa[j] - so[j]).abs());
            peak[j] = peak[j].max(so[j]);
        }
    }
    Ok((diff[0] / peak[0]).max(diff[1] / peak[1]))
}

fn dual_path_reference(opts: &ValidationOptions) -> Check {
    let name = "dual_path_reference";
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 1);
    let mut worst: f64 = 0.0;
    let mut at = "";
    for (label, p) in reference_sets() {
        let freqs = sample_frequencies(&mut rng, &p, opts.frequencies);
        match spectrum_mismatch(&p, &freqs) {
            Ok(e) if e > worst || e.is_nan() => {
                worst = e;
                at = label;
            }
            Ok(_) => {}
            Err(e) => return Check::error(name, opts.spectrum_tol, e),
        }
    }
    Check::new(name, worst, opts.spectrum_tol, format!("worst set {at}"))
}

fn dual_path_random(opts: &ValidationOptions) -> Check {
    let name = "dual_path_random";
    let sets = random_stable_sets(opts.seed, opts.random_sets);
    if sets.len() < opts.random_sets {
        return Check::error(
            name,
            opts.spectrum_tol,
            format!("only {} stable sets drawn", sets.len()),
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 2);
    let mut worst: f64 = 0.0;
    let mut failing = Vec::new();
    for (i, p) in sets.iter().enumerate() {
        let freqs = sample_frequencies(&mut rng, p, opts.frequencies);
        match spectrum_mismatch(p, &freqs) {
            Ok(e) => {
                if !(e <= opts.spectrum_tol) {
                    failing.push(i);
                }
                worst = worst.max(e);
            }
            Err(e) => return Check::error(name, opts.spectrum_tol, format!("set {i}: {e}")),
        }
    }
    let detail = if failing.is_empty() {
        format!("{} sets x {} frequencies, seed {}", sets.len(), opts.frequencies, opts.seed)
    } else {
        format!("sets over tolerance: {failing:?}")
    };
    Check::new(name, worst, opts.spectrum_tol, detail)
}

fn equilibrium() -> Check {
    let name = "equilibrium";
    let p = SystemParams { coupling: [0.0, 0.0], gain: [0.0, 0.0], ..SystemParams::baseline() };
    let mut worst: f64 = 0.0;
    for path in [SpectrumPath::Analytic, SpectrumPath::Oracle] {
        match integrate_occupation(&p, path, &CoolingOptions::default()) {
            Ok(r) => {
                for j in 0..2 {
                    worst = worst.max(rel_diff(r.n_f[j], p.nbar[j]));
                }
            }
            Err(e) => return Check::error(name, 1e-3, e),
        }
    }
    Check::new(name, worst, 1e-3, "n_f = nbar with no coupling or feedback".into())
}

fn decoupled_mode() -> Check {
    let name = "decoupled_mode";
    let p = SystemParams { coupling: [0.4, 0.0], gain: [1.0, 0.0], ..SystemParams::baseline() };
    match integrate_occupation(&p, SpectrumPath::Analytic, &CoolingOptions::default()) {
        Ok(r) => Check::new(
            name,
            rel_diff(r.n_f[1], p.nbar[1]),
            1e-3,
            format!("mode 1 cooled to {:.4}, mode 2 left at its bath", r.n_f[0]),
        ),
        Err(e) => Check::error(name, 1e-3, e),
    }
}

fn feedback_filter() -> Check {
    let p = SystemParams::baseline();
    let h0 = feedback_transfer(&p, 0.0);
    let hc = feedback_transfer(&p, p.omega_fb);
    let mut worst = h0[0].norm().max(h0[1].norm());
    for j in 0..2 {
        let expect = p.gain[j] * p.omega_fb / 2f64.sqrt();
        worst = worst.max(rel_diff(hc[j].norm(), expect));
    }
    Check::new("feedback_filter", worst, 1e-12, "H(0) = 0 and |H(omega_fb)| = g omega_fb / sqrt(2)".into())
}

fn grid(p: &SystemParams) -> Vec<f64> {
    (1..=300).map(|i| i as f64 * 0.01 * p.omega[0]).collect()
}

fn spectral_identities(opts: &ValidationOptions) -> Vec<Check> {
    let mut sets: Vec<SystemParams> = reference_sets().into_iter().map(|(_, p)| p).collect();
    sets.extend(random_stable_sets(opts.seed ^ 3, 8));
    let mut even: f64 = 0.0;
    let mut momentum: f64 = 0.0;
    let mut negative: f64 = 0.0;
    let mut cross: f64 = 0.0;
    for p in &sets {
        let mut run = || -> Result<()> {
            let a = AnalyticModel::new(p)?;
            let o = OracleModel::new(p)?;
            for w in grid(p) {
                let (sa, sb) = (a.position_spectrum(w)?, a.position_spectrum(-w)?);
                let (oa, ob) = (o.spectrum(w)?, o.spectrum(-w)?);
                for j in 0..2 {
                    even = even.max(rel_diff(sa[j], sb[j])).max(rel_diff(oa.s_q[j], ob.s_q[j]));
                    let lhs = oa.s_p[j] * p.omega[j] * p.omega[j];
                    momentum = momentum.max(rel_diff(lhs, w * w * oa.s_q[j]));
                    cross = cross.max(oa.cross_term[j].abs());
                }
                for (j, ch) in a.noise_spectra(w)?.iter().enumerate() {
                    let total = sa[j].max(f64::MIN_POSITIVE);
                    for v in [ch.s_th, ch.s_me, ch.s_fb, ch.s_rp] {
                        negative = negative.max(-v / total);
                    }
                }
            }
            Ok(())
        };
        if let Err(e) = run() {
            return vec![Check::error("spectral_identities", 0.0, e)];
        }
    }
    vec![
        Check::new("evenness", even, 1e-10, "S_q(-omega) = S_q(omega) on both paths".into()),
        Check::new("momentum_identity", momentum, 1e-10, "S_p omega_j^2 = omega^2 S_q".into()),
        Check::new("channel_positivity", negative, 0.0, "every noise channel >= 0".into()),
        Check::new("symmetric_cross_term", cross, 1e-12, "vacuum X-Y cross term vanishes".into()),
    ]
}

fn mode_transform(opts: &ValidationOptions) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 4);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let p = SystemParams {
            coupling: [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)],
            omega: [rng.gen_range(0.5..1.5), rng.gen_range(0.5..1.5)],
            mu_tilde: rng.gen_range(-0.1..0.1),
            ..SystemParams::baseline()
        };
        let m = amc_diagonalize(&p);
        let g0 = p.coupling[0].powi(2) + p.coupling[1].powi(2);
        worst = worst
            .max((m.f * m.f + m.h * m.h - 1.0).abs())
            .max((m.gtilde_plus.powi(2) + m.gtilde_minus.powi(2) - g0).abs());
    }
    Check::new("mode_transform", worst, 1e-12, "f^2 + h^2 = 1 and total coupling preserved".into())
}

fn no_amc_ladder() -> Check {
    let p = SystemParams::baseline();
    let worst = grid(&p).into_iter().map(|w| ladder(&p, w).d[2].abs()).fold(0.0, f64::max);
    Check::new("no_amc_cross_coefficient", worst, 0.0, "cross-mode coefficient is zero at mu = 0".into())
}

fn path_independence(opts: &ValidationOptions) -> Check {
    let name = "occupation_path_independence";
    let mut worst: f64 = 0.0;
    for (_, p) in reference_sets() {
        let co = CoolingOptions::default();
        let r = integrate_occupation(&p, SpectrumPath::Analytic, &co)
            .and_then(|a| Ok((a, integrate_occupation(&p, SpectrumPath::Oracle, &co)?)));
        match r {
            Ok((a, o)) => {
                for j in 0..2 {
                    worst = worst.max(rel_diff(a.n_f[j], o.n_f[j]));
                }
            }
            Err(e) => return Check::error(name, opts.occupation_tol, e),
        }
    }
    Check::new(name, worst, opts.occupation_tol, "integrated n_f from both spectrum paths".into())
}

/// Run every check. Failures are part of the report, never an `Err`.
pub fn validate(opts: &ValidationOptions) -> ValidationReport {
    let mut checks = vec![
        dual_path_reference(opts),
        dual_path_random(opts),
        equilibrium(),
        decoupled_mode(),
        feedback_filter(),
    ];
    checks.extend(spectral_identities(opts));
    checks.push(mode_transform(opts));
    checks.push(no_amc_ladder());
    checks.push(path_independence(opts));
    ValidationReport { options: *opts, checks }
}
