use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use super::{ResultTable, Row};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(Error::InvalidOverride(format!("unknown format `{other}`"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Csv => "csv",
            Self::Json => "json",
        })
    }
}

const PAIRED: [&str; 5] = ["n_f", "n_f_bare", "gamma_c", "gamma_c_ratio", "gamma_eff"];

fn axis_count(table: &ResultTable) -> usize {
    table.rows.iter().map(|r| r.coords.len()).max().unwrap_or(0)
}

fn columns(axes: usize) -> Vec<String> {
    let mut c = vec!["panel".to_string()];
    for i in 1..=axes {
        c.push(format!("axis{i}"));
        c.push(format!("x{i}"));
    }
    for p in PAIRED {
        c.push(format!("{p}_1"));
        c.push(format!("{p}_2"));
    }
    for s in ["stable", "dark_residual", "disagreement", "error"] {
        c.push(s.into());
    }
    c
}

fn num(v: Option<f64>) -> String {
    v.map(|x| format!("{x:?}")).unwrap_or_default()
}

fn pair(v: Option<[f64; 2]>) -> [String; 2] {
    [num(v.map(|a| a[0])), num(v.map(|a| a[1]))]
}

fn record(row: &Row, axes: usize) -> Vec<String> {
    let mut r = vec![row.panel.clone()];
    for i in 0..axes {
        match row.coords.get(i) {
            Some((p, v)) => {
                r.push(p.to_string());
                r.push(format!("{v:?}"));
            }
            None => r.extend([String::new(), String::new()]),
        }
    }
    for v in [row.n_f, row.n_f_bare, row.gamma_c, row.gamma_c_ratio, row.gamma_eff] {
        r.extend(pair(v));
    }
    r.push(row.stable.map(|s| s.to_string()).unwrap_or_default());
    r.push(num(row.dark_residual));
    r.push(num(row.disagreement));
    r.push(row.error.clone().unwrap_or_default());
    r
}

/// CSV with a `# key = value` preamble describing the run.
pub fn to_csv(table: &ResultTable) -> Result<String> {
    let mut out = String::new();
    for (k, v) in &table.header {
        out.push_str(&format!("# {k} = {v}\n"));
    }
    let axes = axis_count(table);
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(columns(axes)).map_err(io)?;
    for row in &table.rows {
        w.write_record(record(row, axes)).map_err(io)?;
    }
    let body = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    out.push_str(&String::from_utf8_lossy(&body));
    Ok(out)
}

fn opt_pair(v: Option<[f64; 2]>) -> Value {
    v.map_or(Value::Null, |a| json!(a))
}

/// The same content as [`to_csv`] as one JSON document.
pub fn to_json(table: &ResultTable) -> Result<String> {
    let header: serde_json::Map<String, Value> =
        table.header.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|r| {
            let coords: serde_json::Map<String, Value> =
                r.coords.iter().map(|(p, v)| (p.to_string(), json!(v))).collect();
            json!({
                "panel": r.panel,
                "coords": coords,
                "n_f": opt_pair(r.n_f),
                "n_f_bare": opt_pair(r.n_f_bare),
                "gamma_c": opt_pair(r.gamma_c),
                "gamma_c_ratio": opt_pair(r.gamma_c_ratio),
                "gamma_eff": opt_pair(r.gamma_eff),
                "stable": r.stable,
                "dark_residual": r.dark_residual,
                "disagreement": r.disagreement,
                "error": r.error,
            })
        })
        .collect();
    let doc = json!({ "scenario": table.scenario, "header": header, "rows": rows });
    serde_json::to_string_pretty(&doc).map_err(|e| Error::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::SweepParam;

    fn table() -> ResultTable {
        ResultTable {
            scenario: "t".into(),
            header: vec![("scenario".into(), "t".into())],
            rows: vec![Row {
                panel: "a".into(),
                coords: vec![(SweepParam::MuTilde, 0.02)],
                n_f: Some([0.5, 0.75]),
                n_f_bare: None,
                gamma_c: None,
                gamma_c_ratio: None,
                gamma_eff: None,
                stable: Some(true),
                dark_residual: Some(0.1),
                disagreement: None,
                error: Some("bad, really".into()),
            }],
        }
    }

    #[test]
    fn csv_layout() {
        let s = to_csv(&table()).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "# scenario = t");
        assert!(lines[1].starts_with("panel,axis1,x1,n_f_1,n_f_2,"));
        assert_eq!(lines[2], "a,mu_tilde,0.02,0.5,0.75,,,,,,,,,true,0.1,,\"bad, really\"");
    }

    #[test]
    fn json_mirror() {
        let v: Value = serde_json::from_str(&to_json(&table()).unwrap()).unwrap();
        assert_eq!(v["rows"][0]["coords"]["mu_tilde"], json!(0.02));
        assert_eq!(v["rows"][0]["n_f_bare"], Value::Null);
    }
}
