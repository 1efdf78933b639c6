//! Parameter sweeps, figure scenarios and tabular output.

mod output;
mod params;
mod scenarios;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::AnalyticModel;
use crate::cooling::{self, CoolingOptions, CoolingReport, SpectrumPath};
use crate::error::{Error, Result};
use crate::model::{BareParams, SystemParams};
use crate::modes;
use crate::numeric::rel_diff;
use crate::oracle::{self, OracleModel};

pub use output::{to_csv, to_json, OutputFormat};
pub use params::{apply_overrides, Override, SweepParam};
pub use scenarios::{run_scenario, scenario, scenario_names, ScenarioOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub param: SweepParam,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    #[serde(default = "linear")]
    pub scale: Scale,
}

fn linear() -> Scale {
    Scale::Linear
}

impl Axis {
    pub fn linear(param: SweepParam, start: f64, stop: f64, points: usize) -> Self {
        Self { param, start, stop, points, scale: Scale::Linear }
    }

    pub fn log(param: SweepParam, start: f64, stop: f64, points: usize) -> Self {
        Self { param, start, stop, points, scale: Scale::Log }
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        if n == 1 {
            return vec![self.start];
        }
        (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                match self.scale {
                    Scale::Linear => snap(self.start + (self.stop - self.start) * t),
                    Scale::Log => (self.start.ln() + (self.stop.ln() - self.start.ln()) * t).exp(),
                }
            })
            .collect()
    }

    fn validate(&self, base: &SystemParams) -> Result<()> {
        let bad = |why: String| Err(Error::InvalidOverride(format!("axis {}: {why}", self.param)));
        if self.points == 0 {
            return bad("needs at least one point".into());
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return bad("range must be finite".into());
        }
        if self.scale == Scale::Log && !(self.start > 0.0 && self.stop > 0.0) {
            return bad("log scale needs a positive range".into());
        }
        if !self.param.is_probe() {
            for v in [self.start, self.stop] {
                let mut p = *base;
                self.param.apply(&mut p, v)?;
                if let Err(e) = p.validate() {
                    return bad(format!("value {v} is out of range: {e}"));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.scale {
            Scale::Linear => "linear",
            Scale::Log => "log",
        };
        write!(f, "{} {} [{}, {}] x {}", self.param, s, self.start, self.stop, self.points)
    }
}

/// Round away the last few bits so that linear grids hit round numbers.
fn snap(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    let digits = 12 - v.abs().log10().floor() as i32;
    let scale = 10f64.powi(digits.clamp(-300, 300));
    let s = (v * scale).round() / scale;
    if rel_diff(s, v) < 1e-13 {
        s
    } else {
        v
    }
}

/// What is computed at each point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    /// Phonon numbers plus the rate columns at resonance.
    Occupation,
    /// Rate columns only; at the probe frequency when the `omega` axis is used.
    Rates,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathSelection {
    Analytic,
    Oracle,
    Both,
}

impl PathSelection {
    fn primary(self) -> SpectrumPath {
        match self {
            PathSelection::Oracle => SpectrumPath::Oracle,
            _ => SpectrumPath::Analytic,
        }
    }
}

impl fmt::Display for PathSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PathSelection::Analytic => "analytic",
            PathSelection::Oracle => "oracle",
            PathSelection::Both => "both",
        })
    }
}

impl FromStr for PathSelection {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analytic" => Ok(Self::Analytic),
            "oracle" => Ok(Self::Oracle),
            "both" => Ok(Self::Both),
            other => Err(Error::InvalidOverride(format!("unknown path `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub scenario: String,
    pub panel: String,
    /// Parameters after defaults and overrides.
    pub base: SystemParams,
    pub overrides: Vec<Override>,
    pub axes: Vec<Axis>,
    pub measure: Measure,
    pub path: PathSelection,
    pub options: CoolingOptions,
    /// Masses for the bare-quadrature columns; `None` skips them.
    pub bare_mass: Option<[f64; 2]>,
}

impl SweepSpec {
    pub fn new(scenario: &str, panel: &str, base: SystemParams, axes: Vec<Axis>) -> Self {
        Self {
            scenario: scenario.into(),
            panel: panel.into(),
            base,
            overrides: Vec::new(),
            axes,
            measure: Measure::Occupation,
            path: PathSelection::Analytic,
            options: CoolingOptions::default(),
            bare_mass: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(Error::InvalidOverride("a sweep needs one or two axes".into()));
        }
        self.base.validate()?;
        for a in &self.axes {
            a.validate(&self.base)?;
        }
        if self.axes.iter().any(|a| a.param.is_probe()) && self.measure == Measure::Occupation {
            return Err(Error::InvalidOverride(
                "the probe axis `omega` only applies to rate sweeps".into(),
            ));
        }
        Ok(())
    }

    /// Grid points in axis-major order.
    pub fn points(&self) -> Vec<Vec<f64>> {
        let mut out: Vec<Vec<f64>> = vec![Vec::new()];
        for axis in &self.axes {
            let vals = axis.values();
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    vals.iter().map(move |&v| {
                        let mut p = prefix.clone();
                        p.push(v);
                        p
                    })
                })
                .collect();
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub panel: String,
    pub coords: Vec<(SweepParam, f64)>,
    pub n_f: Option<[f64; 2]>,
    pub n_f_bare: Option<[f64; 2]>,
    pub gamma_c: Option<[f64; 2]>,
    /// `gamma_C / gamma`.
    pub gamma_c_ratio: Option<[f64; 2]>,
    pub gamma_eff: Option<[f64; 2]>,
    pub stable: Option<bool>,
    pub dark_residual: Option<f64>,
    /// Largest relative analytic/oracle difference, when both paths ran.
    pub disagreement: Option<f64>,
    pub error: Option<String>,
}

impl Row {
    fn failed(panel: &str, coords: Vec<(SweepParam, f64)>, err: Error) -> Self {
        Self {
            panel: panel.into(),
            coords,
            n_f: None,
            n_f_bare: None,
            gamma_c: None,
            gamma_c_ratio: None,
            gamma_eff: None,
            stable: None,
            dark_residual: None,
            disagreement: None,
            error: Some(err.to_string()),
        }
    }

    pub fn coord(&self, p: SweepParam) -> Option<f64> {
        self.coords.iter().find(|(q, _)| *q == p).map(|(_, v)| *v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultTable {
    pub scenario: String,
    pub header: Vec<(String, String)>,
    pub rows: Vec<Row>,
}

impl ResultTable {
    pub fn panel<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a Row> + 'a {
        self.rows.iter().filter(move |r| r.panel == name)
    }
}

/// `Gamma_eff` per mode at `probe`, or at each mode's own frequency.
fn rates(
    params: &SystemParams,
    path: SpectrumPath,
    probe: Option<f64>,
) -> Result<[f64; 2]> {
    let at = |w: f64| -> Result<[f64; 2]> {
        match path {
            SpectrumPath::Analytic => AnalyticModel::new(params)?.effective_damping(w),
            SpectrumPath::Oracle => OracleModel::new(params)?.effective_damping(w),
        }
    };
    match probe {
        Some(w) => at(w),
        None => Ok([at(params.omega[0])?[0], at(params.omega[1])?[1]]),
    }
}

fn evaluate(spec: &SweepSpec, coords: Vec<(SweepParam, f64)>) -> Row {
    let mut params = spec.base;
    let mut probe = None;
    for &(p, v) in &coords {
        if p.is_probe() {
            probe = Some(v);
        } else if let Err(e) = p.apply(&mut params, v) {
            return Row::failed(&spec.panel, coords, e);
        }
    }
    match evaluate_params(spec, &params, probe) {
        Ok(mut row) => {
            row.coords = coords;
            row
        }
        Err(e) => Row::failed(&spec.panel, coords, e),
    }
}

fn evaluate_params(spec: &SweepSpec, params: &SystemParams, probe: Option<f64>) -> Result<Row> {
    params.validate()?;
    let primary = spec.path.primary();
    let gamma_eff = rates(params, primary, probe)?;
    let gamma_c = [gamma_eff[0] - params.gamma[0], gamma_eff[1] - params.gamma[1]];
    let gamma_c_ratio = [gamma_c[0] / params.gamma[0], gamma_c[1] / params.gamma[1]];
    let mut disagreement = None;

    let (n_f, n_f_bare, stable) = match spec.measure {
        Measure::Occupation => {
            let report = cooling::integrate_occupation(params, primary, &spec.options)?;
            if spec.path == PathSelection::Both {
                let other =
                    cooling::integrate_occupation(params, SpectrumPath::Oracle, &spec.options)?;
                disagreement = Some(max_rel(report.n_f, other.n_f));
            }
            let bare = match spec.bare_mass {
                Some(mass) => Some(bare_columns(&report, params, mass)?),
                None => None,
            };
            (Some(report.n_f), bare, report.stable)
        }
        Measure::Rates => {
            if spec.path == PathSelection::Both {
                let other = rates(params, SpectrumPath::Oracle, probe)?;
                disagreement = Some(max_rel(gamma_eff, other));
            }
            let scale = params.omega[0].max(params.omega[1]).max(params.omega_fb).max(params.kappa);
            let grid = oracle::probe_grid(params, 4.0 * scale, 401);
            (None, None, oracle::stability_check(params, &grid)?.stable)
        }
    };
    Ok(Row {
        panel: spec.panel.clone(),
        coords: Vec::new(),
        n_f,
        n_f_bare,
        gamma_c: Some(gamma_c),
        gamma_c_ratio: Some(gamma_c_ratio),
        gamma_eff: Some(gamma_eff),
        stable: Some(stable),
        dark_residual: Some(modes::dark_mode_residual(params)),
        disagreement,
        error: None,
    })
}

fn bare_columns(report: &CoolingReport, params: &SystemParams, mass: [f64; 2]) -> Result<[f64; 2]> {
    let bare = BareParams::from_system(params, mass)?;
    cooling::bare_quadrature_occupation(report, Some(&bare))
}

fn max_rel(a: [f64; 2], b: [f64; 2]) -> f64 {
    rel_diff(a[0], b[0]).max(rel_diff(a[1], b[1]))
}

/// Evaluate every grid point of `spec` in parallel; rows come back in
/// axis-major order regardless of scheduling.
pub fn run_sweep(spec: &SweepSpec) -> Result<ResultTable> {
    spec.validate()?;
    let rows = sweep_rows(spec);
    Ok(ResultTable { scenario: spec.scenario.clone(), header: header_for(&[spec]), rows })
}

pub(crate) fn sweep_rows(spec: &SweepSpec) -> Vec<Row> {
    let params: Vec<SweepParam> = spec.axes.iter().map(|a| a.param).collect();
    spec.points()
        .into_par_iter()
        .map(|vals| evaluate(spec, params.iter().copied().zip(vals).collect()))
        .collect()
}

pub(crate) fn header_for(specs: &[&SweepSpec]) -> Vec<(String, String)> {
    let mut h = vec![
        ("tool".to_string(), format!("cool {}", env!("CARGO_PKG_VERSION"))),
        ("units".to_string(), "rates in units of omega_m; hbar = k_B = 1".to_string()),
    ];
    if let Some(first) = specs.first() {
        h.push(("scenario".into(), first.scenario.clone()));
        h.push(("path".into(), first.path.to_string()));
        h.push(("rel_tol".into(), format!("{:?}", first.options.rel_tol)));
        h.push(("tail_tol".into(), format!("{:?}", first.options.tail_tol)));
    }
    for s in specs {
        let key = |k: &str| format!("{}.{}", s.panel, k);
        h.push((key("measure"), format!("{:?}", s.measure).to_lowercase()));
        h.push((key("params"), serde_json::to_string(&s.base).unwrap_or_default()));
        for (i, a) in s.axes.iter().enumerate() {
            h.push((key(&format!("axis{}", i + 1)), a.to_string()));
        }
        if !s.overrides.is_empty() {
            let o: Vec<String> = s.overrides.iter().map(|o| o.to_string()).collect();
            h.push((key("overrides"), o.join(", ")));
        }
        if let Some(m) = s.bare_mass {
            h.push((key("bare_mass"), format!("{}, {}", m[0], m[1])));
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_axis_hits_round_values() {
        let a = Axis::linear(SweepParam::G2OverG1, 0.1, 2.0, 20);
        let v = a.values();
        assert_eq!(v.len(), 20);
        assert_eq!(v[9], 1.0);
        assert_eq!(v[19], 2.0);
        let l = Axis::log(SweepParam::Kappa, 0.1, 10.0, 3).values();
        assert!((l[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn points_are_axis_major() {
        let spec = SweepSpec::new(
            "t",
            "p",
            SystemParams::baseline(),
            vec![
                Axis::linear(SweepParam::G1, 0.1, 0.2, 2),
                Axis::linear(SweepParam::G2, 0.3, 0.4, 2),
            ],
        );
        assert_eq!(
            spec.points(),
            vec![vec![0.1, 0.3], vec![0.1, 0.4], vec![0.2, 0.3], vec![0.2, 0.4]]
        );
    }

    #[test]
    fn invalid_axis_is_rejected() {
        let spec = SweepSpec::new(
            "t",
            "p",
            SystemParams::baseline(),
            vec![Axis::linear(SweepParam::Vartheta, 0.5, 1.5, 3)],
        );
        assert!(spec.validate().is_err());
        let spec = SweepSpec::new(
            "t",
            "p",
            SystemParams::baseline(),
            vec![Axis::linear(SweepParam::Omega, 0.5, 1.5, 3)],
        );
        assert!(spec.validate().is_err());
    }

    #[test]
    fn point_failures_stay_in_their_row() {
        let mut spec = SweepSpec::new(
            "t",
            "p",
            SystemParams::baseline(),
            vec![Axis::linear(SweepParam::Delta, 0.0, 0.5, 2)],
        );
        spec.options.rel_tol = 1e-6;
        let t = run_sweep(&spec).unwrap();
        assert!(t.rows[0].error.is_none());
        assert!(t.rows[1].error.as_deref().unwrap().contains("detuning"));
    }
}
