use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use coldamp_core::analytic::AnalyticModel;
use coldamp_core::config::{Config, SweepSection};
use coldamp_core::cooling::{self, CoolingOptions, CoolingReport, SpectrumPath};
use coldamp_core::oracle::OracleModel;
use coldamp_core::sweep::{
    self, apply_overrides, Axis, Measure, OutputFormat, Override, PathSelection, ResultTable,
    ScenarioOptions, Scale, SweepParam, SweepSpec,
};
use coldamp_core::validate::{validate, ValidationOptions};
use coldamp_core::{BareParams, SystemParams};
use serde_json::json;

/// Steady-state phonon numbers of two feedback-cooled mechanical modes.
#[derive(Debug, Parser)]
#[command(name = "cool", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// TOML file with [system], [feedback], [bath] and [sweep] sections.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Spectrum route: analytic, oracle or both.
    #[arg(long, global = true)]
    path: Option<PathSelection>,
    /// Relative quadrature tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, default_value = "csv")]
    format: OutputFormat,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Parameter override `name=value`; repeatable.
    #[arg(long = "set", global = true, value_name = "NAME=VALUE")]
    set: Vec<Override>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Position spectra and effective damping on a frequency grid.
    Spectrum {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
        to: f64,
        #[arg(long, default_value_t = 401)]
        points: usize,
    },
    /// Integrated phonon numbers for one parameter set.
    Occupation {
        /// Also report bare-quadrature numbers for these masses.
        #[arg(long, num_args = 2, value_names = ["M1", "M2"])]
        bare_mass: Option<Vec<f64>>,
    },
    /// Sweep one or two parameters (axes from the config or --axis).
    Sweep {
        /// `name:start:stop:points[:log]`; repeatable, at most twice.
        #[arg(long)]
        axis: Vec<String>,
        #[arg(long)]
        measure: Option<String>,
    },
    /// Regenerate a named figure scenario.
    Figure { name: String },
    /// Run the analytic/oracle agreement suite and identity checks.
    Validate {
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn parse_axis(s: &str) -> Result<Axis> {
    let parts: Vec<&str> = s.split(':').collect();
    if !(4..=5).contains(&parts.len()) {
        bail!("axis `{s}` should look like name:start:stop:points[:log]");
    }
    let param: SweepParam = parts[0].parse()?;
    let num = |t: &str| t.parse::<f64>().map_err(|_| anyhow!("`{t}` is not a number in axis `{s}`"));
    let points: usize = parts[3].parse().map_err(|_| anyhow!("bad point count in axis `{s}`"))?;
    let scale = match parts.get(4) {
        None | Some(&"linear") => Scale::Linear,
        Some(&"log") => Scale::Log,
        Some(other) => bail!("unknown scale `{other}`"),
    };
    Ok(Axis { param, start: num(parts[1])?, stop: num(parts[2])?, points, scale })
}

fn parse_measure(s: &str) -> Result<Measure> {
    match s {
        "occupation" => Ok(Measure::Occupation),
        "rates" => Ok(Measure::Rates),
        other => bail!("unknown measure `{other}`"),
    }
}

struct Context_ {
    config: Config,
    params: SystemParams,
    options: CoolingOptions,
    path: PathSelection,
}

fn context(g: &Global) -> Result<Context_> {
    let config = match &g.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let section = config.sweep.clone().unwrap_or_default();
    let mut overrides = section.parsed_overrides()?;
    overrides.extend(g.set.iter().copied());
    let params = apply_overrides(&config.params, &overrides)?;
    let mut options = CoolingOptions::default();
    if let Some(t) = g.tol.or(section.tol) {
        if t.is_nan() || t <= 0.0 {
            bail!("--tol must be positive");
        }
        options.rel_tol = t;
    }
    let path = g.path.or(section.path).unwrap_or(PathSelection::Analytic);
    Ok(Context_ { config, params, options, path })
}

fn paths(sel: PathSelection) -> Vec<SpectrumPath> {
    match sel {
        PathSelection::Analytic => vec![SpectrumPath::Analytic],
        PathSelection::Oracle => vec![SpectrumPath::Oracle],
        PathSelection::Both => vec![SpectrumPath::Analytic, SpectrumPath::Oracle],
    }
}

fn emit(g: &Global, text: &str) -> Result<()> {
    match &g.out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn csv_text(header: &[(String, String)], columns: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut out = String::new();
    for (k, v) in header {
        out.push_str(&format!("# {k} = {v}\n"));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(columns)?;
    for r in rows {
        w.write_record(r)?;
    }
    out.push_str(&String::from_utf8(w.into_inner()?)?);
    Ok(out)
}

fn run_header(ctx: &Context_, g: &Global) -> Vec<(String, String)> {
    let mut h = vec![
        ("tool".to_string(), format!("cool {}", env!("CARGO_PKG_VERSION"))),
        ("params".to_string(), serde_json::to_string(&ctx.params).unwrap_or_default()),
        ("path".to_string(), ctx.path.to_string()),
        ("rel_tol".to_string(), format!("{:?}", ctx.options.rel_tol)),
    ];
    if !g.set.is_empty() {
        let s: Vec<String> = g.set.iter().map(|o| o.to_string()).collect();
        h.push(("overrides".into(), s.join(", ")));
    }
    h
}

/// Shortest round-trip form.
fn f(v: f64) -> String {
    format!("{v:?}")
}

fn header_json(h: Vec<(String, String)>) -> serde_json::Value {
    h.into_iter().map(|(k, v)| (k, serde_json::Value::String(v))).collect()
}

fn spectrum(g: &Global, from: f64, to: f64, points: usize) -> Result<()> {
    let ctx = context(g)?;
    if points < 2 || to.is_nan() || from.is_nan() || to <= from {
        bail!("need --to > --from and at least two points");
    }
    let analytic = AnalyticModel::new(&ctx.params).ok();
    let oracle = OracleModel::new(&ctx.params)?;
    if analytic.is_none() && ctx.path != PathSelection::Oracle {
        bail!("the analytic path needs zero detuning; use --path oracle");
    }
    let mut rows = Vec::with_capacity(points);
    let mut records = Vec::with_capacity(points);
    for i in 0..points {
        let w = from + (to - from) * i as f64 / (points - 1) as f64;
        let mut rec = serde_json::Map::new();
        let mut row = vec![f(w)];
        rec.insert("omega".into(), json!(w));
        for path in paths(ctx.path) {
            let (s, ge) = match path {
                SpectrumPath::Analytic => {
                    let a = analytic.as_ref().expect("checked above");
                    (a.position_spectrum(w)?, a.effective_damping(w)?)
                }
                SpectrumPath::Oracle => (oracle.position_spectrum(w)?, oracle.effective_damping(w)?),
            };
            row.extend([s[0], s[1], ge[0], ge[1]].map(f));
            rec.insert(format!("s_q_{path}"), json!(s));
            rec.insert(format!("gamma_eff_{path}"), json!(ge));
        }
        rows.push(row);
        records.push(serde_json::Value::Object(rec));
    }
    let mut cols = vec!["omega".to_string()];
    for path in paths(ctx.path) {
        for c in ["s_q_1", "s_q_2", "gamma_eff_1", "gamma_eff_2"] {
            cols.push(format!("{c}_{path}"));
        }
    }
    let text = match g.format {
        OutputFormat::Csv => {
            let cols: Vec<&str> = cols.iter().map(String::as_str).collect();
            csv_text(&run_header(&ctx, g), &cols, &rows)?
        }
        OutputFormat::Json => serde_json::to_string_pretty(&json!({
            "header": header_json(run_header(&ctx, g)),
            "rows": records,
        }))?,
    };
    emit(g, &text)
}

fn occupation(g: &Global, bare_mass: Option<Vec<f64>>) -> Result<()> {
    let ctx = context(g)?;
    let bare: Option<BareParams> = match (bare_mass, &ctx.config.bare) {
        (Some(m), _) => Some(BareParams::from_system(&ctx.params, [m[0], m[1]])?),
        (None, Some(b)) if g.set.is_empty() => Some(b.clone()),
        _ => None,
    };
    let mut reports: Vec<CoolingReport> = Vec::new();
    for path in paths(ctx.path) {
        let mut r = cooling::integrate_occupation(&ctx.params, path, &ctx.options)?;
        if let Some(b) = &bare {
            r.n_f_bare = Some(cooling::bare_quadrature_occupation(&r, Some(b))?);
        }
        for w in &r.warnings {
            eprintln!("warning ({path}): {w}");
        }
        reports.push(r);
    }
    let disagreement = (reports.len() == 2).then(|| {
        (0..2)
            .map(|j| coldamp_core::numeric::rel_diff(reports[0].n_f[j], reports[1].n_f[j]))
            .fold(0.0, f64::max)
    });
    let text = match g.format {
        OutputFormat::Json => serde_json::to_string_pretty(&json!({
            "header": header_json(run_header(&ctx, g)),
            "reports": reports,
            "disagreement": disagreement,
        }))?,
        OutputFormat::Csv => {
            let cols = [
                "path", "n_f_1", "n_f_2", "n_f_bare_1", "n_f_bare_2", "var_q_1", "var_q_2",
                "var_p_1", "var_p_2", "quad_error_1", "quad_error_2", "tail", "omega_max",
                "stable", "evaluations",
            ];
            let opt = |v: Option<[f64; 2]>, j: usize| v.map(|a| f(a[j])).unwrap_or_default();
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|r| {
                    vec![
                        r.path.to_string(),
                        f(r.n_f[0]),
                        f(r.n_f[1]),
                        opt(r.n_f_bare, 0),
                        opt(r.n_f_bare, 1),
                        f(r.var_q[0]),
                        f(r.var_q[1]),
                        f(r.var_p[0]),
                        f(r.var_p[1]),
                        f(r.quadrature_error[0]),
                        f(r.quadrature_error[1]),
                        f(r.tail_estimate),
                        f(r.omega_max),
                        r.stable.to_string(),
                        r.evaluations.to_string(),
                    ]
                })
                .collect();
            let mut header = run_header(&ctx, g);
            if let Some(d) = disagreement {
                header.push(("disagreement".into(), format!("{d:?}")));
            }
            csv_text(&header, &cols, &rows)?
        }
    };
    emit(g, &text)
}

fn write_table(g: &Global, table: &ResultTable) -> Result<()> {
    let text = match g.format {
        OutputFormat::Csv => sweep::to_csv(table)?,
        OutputFormat::Json => sweep::to_json(table)?,
    };
    emit(g, &text)
}

fn run_sweep(g: &Global, axis: &[String], measure: Option<String>) -> Result<()> {
    let ctx = context(g)?;
    let section: SweepSection = ctx.config.sweep.clone().unwrap_or_default();
    if axis.is_empty() && section.axis.is_empty() {
        if let Some(name) = &section.scenario {
            return figure(g, name);
        }
        bail!("no sweep axes: pass --axis or add [[sweep.axis]] to the config");
    }
    let axes = if axis.is_empty() {
        section.axis.clone()
    } else {
        axis.iter().map(|a| parse_axis(a)).collect::<Result<_>>()?
    };
    let measure = match measure.as_deref() {
        Some(m) => parse_measure(m)?,
        None => section.measure.unwrap_or(Measure::Occupation),
    };
    let mut overrides = section.parsed_overrides()?;
    overrides.extend(g.set.iter().copied());
    let spec = SweepSpec {
        scenario: "custom".into(),
        panel: "main".into(),
        base: ctx.params,
        overrides,
        axes,
        measure,
        path: ctx.path,
        options: ctx.options,
        bare_mass: section.bare_mass,
    };
    write_table(g, &sweep::run_sweep(&spec)?)
}

fn figure(g: &Global, name: &str) -> Result<()> {
    let ctx = context(g)?;
    let mut overrides = ctx.config.sweep.as_ref().map(|s| s.parsed_overrides()).transpose()?.unwrap_or_default();
    overrides.extend(g.set.iter().copied());
    let opts = ScenarioOptions { path: ctx.path, options: ctx.options, overrides };
    write_table(g, &sweep::run_scenario(name, &opts)?)
}

fn run_validate(g: &Global, seed: Option<u64>) -> Result<bool> {
    let mut opts = ValidationOptions::default();
    if let Some(s) = seed {
        opts.seed = s;
    }
    let report = validate(&opts);
    let text = match g.format {
        OutputFormat::Json => serde_json::to_string_pretty(&report)?,
        OutputFormat::Csv => report.summary(),
    };
    emit(g, &text)?;
    Ok(report.passed())
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(n) = cli.global.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let g = &cli.global;
    match cli.command {
        Command::Spectrum { from, to, points } => spectrum(g, from, to, points)?,
        Command::Occupation { bare_mass } => occupation(g, bare_mass)?,
        Command::Sweep { axis, measure } => run_sweep(g, &axis, measure)?,
        Command::Figure { name } => figure(g, &name)?,
        Command::Validate { seed } => {
            if !run_validate(g, seed)? {
                return Ok(ExitCode::from(2));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
