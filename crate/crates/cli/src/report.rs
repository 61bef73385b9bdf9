//! Report envelope and its JSON / CSV renderings.

use std::io::Write;

use duelbench::factor::KHAT_TOL;
use duelbench::lp::{FEAS_TOL, GAP_TOL};
use duelbench::minimax::marginal::MARGINAL_TOL;
use duelbench::minimax::MINIMAX_TOL;
use duelbench::structure::CHECK_TOL;
use duelbench::zero_one::{LAYER_TOL, ZERO_ONE_TOL};
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::CliError;

pub const VERSION: &str = env!("DUELBENCH_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Serialize)]
pub struct Tolerances {
    pub lp_feasibility: f64,
    pub lp_gap: f64,
    /// Slack allowed on payoffs when calling a strategy minimax; `--tol`.
    pub minimax: f64,
    pub marginal: f64,
    pub structure: f64,
    pub zero_one: f64,
    pub layer: f64,
    pub khat: f64,
}

impl Tolerances {
    pub fn with_minimax(minimax: f64) -> Self {
        Tolerances {
            lp_feasibility: FEAS_TOL,
            lp_gap: GAP_TOL,
            minimax,
            marginal: MARGINAL_TOL,
            structure: CHECK_TOL,
            zero_one: ZERO_ONE_TOL,
            layer: LAYER_TOL,
            khat: KHAT_TOL,
        }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::with_minimax(MINIMAX_TOL)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub version: &'static str,
    pub seed: u64,
    pub tolerances: Tolerances,
    /// False when a check the command exists to perform came out negative.
    pub verified: bool,
    pub result: Value,
}

impl Report {
    pub fn render(&self, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, self)?;
                writeln!(out).map_err(io_err)?;
            }
            Format::Csv => self.render_csv(out)?,
        }
        Ok(())
    }

    /// A result holding a `rows` array of flat objects becomes a table, with
    /// the envelope as leading `#` comment lines; anything else becomes
    /// `key,value` pairs with dotted key paths.
    fn render_csv(&self, out: &mut dyn Write) -> Result<(), CliError> {
        if let Some(rows) = table_rows(&self.result) {
            writeln!(out, "# command={}", self.command).map_err(io_err)?;
            writeln!(out, "# version={}", self.version).map_err(io_err)?;
            writeln!(out, "# verified={}", self.verified).map_err(io_err)?;
            let mut meta = Vec::new();
            flatten("tolerances", &serde_json::to_value(&self.tolerances)?, &mut meta);
            if let Value::Object(m) = &self.result {
                for (k, v) in m.iter().filter(|(k, _)| k.as_str() != "rows") {
                    flatten(k, v, &mut meta);
                }
            }
            for (k, v) in meta {
                writeln!(out, "# {k}={v}").map_err(io_err)?;
            }
            let header: Vec<String> = rows[0].keys().cloned().collect();
            let mut w = csv::Writer::from_writer(out);
            w.write_record(&header)?;
            for row in rows {
                w.write_record(header.iter().map(|h| row.get(h).map(scalar).unwrap_or_default()))?;
            }
            w.flush().map_err(io_err)?;
        } else {
            let mut pairs = vec![
                ("command".to_string(), self.command.clone()),
                ("version".to_string(), self.version.to_string()),
                ("seed".to_string(), self.seed.to_string()),
                ("verified".to_string(), self.verified.to_string()),
            ];
            flatten("tolerances", &serde_json::to_value(&self.tolerances)?, &mut pairs);
            flatten("result", &self.result, &mut pairs);
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["key", "value"])?;
            for (k, v) in pairs {
                w.write_record([k, v])?;
            }
            w.flush().map_err(io_err)?;
        }
        Ok(())
    }
}

fn io_err(source: std::io::Error) -> CliError {
    CliError::Io { path: "output".into(), source }
}

fn table_rows(v: &Value) -> Option<Vec<&Map<String, Value>>> {
    let rows = v.get("rows")?.as_array()?;
    let rows: Vec<&Map<String, Value>> = rows.iter().map(Value::as_object).collect::<Option<_>>()?;
    let flat = rows.iter().all(|r| r.values().all(|x| !x.is_object() && !x.is_array()));
    (flat && !rows.is_empty()).then_some(rows)
}

/// serde_json prints floats with a `.` decimal point regardless of locale.
fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&format!("{prefix}.{k}"), x, out);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), x, out);
            }
        }
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn report(result: Value) -> Report {
        Report { command: "t".into(), version: VERSION, seed: 0, tolerances: Tolerances::default(), verified: true, result }
    }

    #[test]
    fn nested_results_flatten_to_pairs() {
        let mut buf = Vec::new();
        report(json!({"a": {"b": 0.5}, "c": [1, 2]})).render(Format::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("key,value\n"));
        assert!(text.contains("result.a.b,0.5\n"));
        assert!(text.contains("result.c.1,2\n"));
    }

    #[test]
    fn row_results_become_tables() {
        let mut buf = Vec::new();
        report(json!({"rows": [{"k": 2, "alpha": 0.25}, {"k": 3, "alpha": 0.5}]})).render(Format::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(body, ["k,alpha", "2,0.25", "3,0.5"]);
    }
}
