//! Named sweeps that regenerate the standard figure set.

use super::{header_for, sweep_rows, Axis, Measure, Override, PathSelection, ResultTable, SweepParam, SweepSpec};
use crate::cooling::CoolingOptions;
use crate::error::{Error, Result};
use crate::model::SystemParams;

use SweepParam::*;

const NAMES: [&str; 9] =
    ["fig1b", "fig1c", "fig3ab", "fig3cdef", "fig4ab", "fig4cd", "fig4ef", "fig5", "barevssq"];

pub fn scenario_names() -> &'static [&'static str] {
    &NAMES
}

/// Settings shared by every panel of a scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioOptions {
    pub path: PathSelection,
    pub options: CoolingOptions,
    /// Applied after the panel defaults.
    pub overrides: Vec<Override>,
}

impl Default for ScenarioOptions {
    fn default() -> Self {
        Self { path: PathSelection::Analytic, options: CoolingOptions::default(), overrides: Vec::new() }
    }
}

struct Panel {
    name: &'static str,
    set: Vec<(SweepParam, f64)>,
}

fn panel(name: &'static str, set: &[(SweepParam, f64)]) -> Panel {
    Panel { name, set: set.to_vec() }
}

/// Feedback stronger on the second mode.
const SFL_GT: [(SweepParam, f64); 2] = [(Gcd2, 1.7), (G2OverG1, 1.8)];

/// Expand a scenario into one spec per panel.
pub fn scenario(name: &str, opts: &ScenarioOptions) -> Result<Vec<SweepSpec>> {
    let mu = |v: f64| (MuTilde, v);
    let (panels, axes, measure, bare_mass): (Vec<Panel>, Vec<Axis>, Measure, Option<[f64; 2]>) =
        match name {
            "fig1b" => (
                vec![panel("mu0", &[mu(0.0)]), panel("mu002", &[mu(0.02)])],
                // 400 points on [-2, 2] skip the origin, where the rate is 0/0
                vec![Axis::linear(Omega, -2.0, 2.0, 400)],
                Measure::Rates,
                None,
            ),
            "fig1c" => (
                vec![panel("resonance", &[])],
                vec![Axis::linear(MuTilde, 0.0, 0.05, 101)],
                Measure::Rates,
                None,
            ),
            "fig3ab" => (
                vec![panel("grid", &[mu(0.02)])],
                vec![
                    Axis::linear(G2OverG1, 0.1, 2.0, 20),
                    Axis::linear(Gcd2OverGcd1, 0.1, 2.0, 20),
                ],
                Measure::Occupation,
                None,
            ),
            "fig3cdef" => {
                let specs = [
                    ("c", vec![mu(0.02)], Axis::linear(G2OverG1, 0.1, 1.0, 50)),
                    ("d", vec![mu(0.02), (G2OverG1, 0.7)], Axis::linear(Gcd2OverGcd1, 0.1, 1.0, 50)),
                    ("e", vec![mu(0.02), (Gcd2, 1.7)], Axis::linear(G2OverG1, 1.0, 2.0, 50)),
                    ("f", vec![mu(0.02), (G2OverG1, 1.8)], Axis::linear(Gcd2OverGcd1, 1.0, 2.0, 50)),
                ];
                return specs
                    .into_iter()
                    .map(|(p, set, axis)| {
                        build(name, &Panel { name: p, set }, vec![axis], Measure::Occupation, None, opts)
                    })
                    .collect();
            }
            "fig4ab" => (
                vec![panel("sfl_lt", &[]), panel("sfl_gt", &SFL_GT)],
                vec![Axis::linear(MuTilde, 0.0, 0.05, 51)],
                Measure::Occupation,
                None,
            ),
            "fig4cd" => (
                vec![panel("sfl_lt", &[mu(0.02)]), panel("sfl_gt", &with_mu(&SFL_GT, 0.02))],
                vec![Axis::log(OmegaFb, 0.1, 10.0, 41)],
                Measure::Occupation,
                None,
            ),
            "fig4ef" => (
                vec![panel("sfl_lt", &[mu(0.02)]), panel("sfl_gt", &with_mu(&SFL_GT, 0.02))],
                vec![Axis::log(Kappa, 0.1, 10.0, 41)],
                Measure::Occupation,
                None,
            ),
            "fig5" => (
                vec![
                    panel("a_mu0", &[(Gcd2, 0.5), (G2OverG1, 0.5)]),
                    panel("a_mu002", &[(Gcd2, 0.5), (G2OverG1, 0.5), mu(0.02)]),
                    panel("b_mu0", &[(Gcd2, 1.9), (G2OverG1, 1.9)]),
                    panel("b_mu002", &[(Gcd2, 1.9), (G2OverG1, 1.9), mu(0.02)]),
                ],
                vec![Axis::linear(Omega2OverOmega1, 0.95, 1.05, 101)],
                Measure::Occupation,
                None,
            ),
            "barevssq" => (
                vec![panel("sfl_lt", &[])],
                vec![Axis::linear(MuTilde, 0.0, 0.05, 51)],
                Measure::Occupation,
                Some([1.0, 1.0]),
            ),
            other => return Err(Error::UnknownScenario(other.to_string())),
        };
    panels.iter().map(|p| build(name, p, axes.clone(), measure, bare_mass, opts)).collect()
}

fn with_mu(set: &[(SweepParam, f64)], mu: f64) -> Vec<(SweepParam, f64)> {
    let mut v = set.to_vec();
    v.push((MuTilde, mu));
    v
}

fn build(
    scenario: &str,
    panel: &Panel,
    axes: Vec<Axis>,
    measure: Measure,
    bare_mass: Option<[f64; 2]>,
    opts: &ScenarioOptions,
) -> Result<SweepSpec> {
    let mut base = SystemParams::baseline();
    for &(p, v) in &panel.set {
        p.apply(&mut base, v)?;
    }
    let base = super::apply_overrides(&base, &opts.overrides)?;
    let spec = SweepSpec {
        scenario: scenario.into(),
        panel: panel.name.into(),
        base,
        overrides: opts.overrides.clone(),
        axes,
        measure,
        path: opts.path,
        options: opts.options,
        bare_mass,
    };
    spec.validate()?;
    Ok(spec)
}

/// Run every panel of `name` and collect the rows into one table.
pub fn run_scenario(name: &str, opts: &ScenarioOptions) -> Result<ResultTable> {
    let specs = scenario(name, opts)?;
    let refs: Vec<&SweepSpec> = specs.iter().collect();
    let rows = specs.iter().flat_map(sweep_rows).collect();
    Ok(ResultTable { scenario: name.into(), header: header_for(&refs), rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_scenario_expands() {
        for name in scenario_names() {
            let specs = scenario(name, &ScenarioOptions::default()).unwrap();
            assert!(!specs.is_empty(), "{name}");
        }
        assert!(matches!(
            scenario("fig9", &ScenarioOptions::default()),
            Err(Error::UnknownScenario(_))
        ));
    }

    #[test]
    fn probe_grid_skips_origin() {
        let specs = scenario("fig1b", &ScenarioOptions::default()).unwrap();
        assert!(specs[0].axes[0].values().iter().all(|&w| w != 0.0));
    }

    #[test]
    fn overrides_follow_panel_defaults() {
        let opts = ScenarioOptions { overrides: vec!["g_cd2=1.2".parse().unwrap()], ..Default::default() };
        let specs = scenario("fig5", &opts).unwrap();
        assert!(specs.iter().all(|s| s.base.gain[1] == 1.2));
        assert_eq!(specs[1].base.mu_tilde, 0.02);
    }
}
