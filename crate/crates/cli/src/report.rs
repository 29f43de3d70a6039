use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};
use uinf_core::mc_harness::{ExperimentReport, Verdict};

use crate::CliError;

#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub name: String,
    pub params: Value,
    pub value: Value,
    pub expected: Value,
    pub tolerance_or_sigma: Option<f64>,
    pub verdict: Verdict,
}

impl Row {
    /// A deterministic check: pass iff `value ≤ tol`.
    pub fn bound(name: impl Into<String>, params: Value, value: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            params,
            value: json!(value),
            expected: Value::Null,
            tolerance_or_sigma: Some(tol),
            verdict: Verdict::from_bool(value <= tol),
        }
    }

    pub fn check(name: impl Into<String>, params: Value, value: Value, expected: Value, ok: bool) -> Self {
        Self { name: name.into(), params, value, expected, tolerance_or_sigma: None, verdict: Verdict::from_bool(ok) }
    }

    pub fn diagnostic(name: impl Into<String>, params: Value, value: Value, expected: Value) -> Self {
        Self { name: name.into(), params, value, expected, tolerance_or_sigma: None, verdict: Verdict::Diagnostic }
    }

    /// Monte-Carlo row; `tolerance_or_sigma` carries the observed sigma distance.
    pub fn from_experiment(r: &ExperimentReport) -> Self {
        Self {
            name: r.name.clone(),
            params: r.parameters.clone(),
            value: r.estimate.map_or(Value::Null, |e| {
                json!({"mean": c(e.mean), "stderr": e.stderr, "n_samples": e.n_samples, "mode": e.mode})
            }),
            expected: r.expected.map_or(Value::Null, c),
            tolerance_or_sigma: r.sigma_distance.filter(|s| s.is_finite()),
            verdict: r.verdict,
        }
    }
}

pub fn c(z: Complex64) -> Value {
    json!([z.re, z.im])
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub rows: Vec<Row>,
    pub seed: u64,
    pub version: String,
}

impl Report {
    pub fn new(suite: &str, rows: Vec<Row>, seed: u64) -> Self {
        Self { suite: suite.to_string(), rows, seed, version: env!("CARGO_PKG_VERSION").to_string() }
    }

    /// True iff no row failed; diagnostics never count.
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.verdict != Verdict::Fail)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

pub fn emit_report(report: &Report, out: Option<&Path>) -> Result<(), CliError> {
    let text = report.to_json();
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
    }
}

pub fn write_csv(path: &Path, values: &[Complex64]) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let file = std::fs::File::create(path).map_err(io)?;
    let mut w = std::io::BufWriter::new(file);
    writeln!(w, "sample_index,re,im").map_err(io)?;
    for (i, z) in values.iter().enumerate() {
        writeln!(w, "{i},{},{}", z.re, z.im).map_err(io)?;
    }
    w.flush().map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_has_empty_rows() {
        let r = Report::new("none", vec![], 1);
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["rows"], json!([]));
        assert!(r.passed());
    }

    #[test]
    fn field_order_is_stable() {
        let r = Report::new("s", vec![Row::bound("x", json!({}), 0.5, 1.0)], 3);
        let s = r.to_json();
        let order = ["\"suite\"", "\"rows\"", "\"name\"", "\"params\"", "\"value\"", "\"expected\"", "\"tolerance_or_sigma\"", "\"verdict\"", "\"seed\"", "\"version\""];
        let pos: Vec<usize> = order.iter().map(|k| s.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn diagnostics_do_not_fail() {
        let rows = vec![
            Row::diagnostic("d", json!({}), json!(1.0), json!(2.0)),
            Row::bound("b", json!({}), 0.0, 1e-10),
        ];
        assert!(Report::new("s", rows.clone(), 0).passed());
        let mut bad = rows;
        bad.push(Row::bound("b2", json!({}), 1.0, 1e-10));
        assert!(!Report::new("s", bad, 0).passed());
    }
}
