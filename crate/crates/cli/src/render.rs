use std::fmt::Write as _;

use serde_json::Value;

use crate::report::{Check, Report};

pub fn json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report is always serializable");
    s.push('\n');
    s
}

/// Twelve significant digits.
pub fn float12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    format!("{x:.11e}")
}

fn opt(v: Option<usize>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

pub fn csv(report: &Report) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |r: csv::Result<()>| r.expect("writing to memory cannot fail");
    io(w.write_record([
        "n",
        "m",
        "l",
        "quantity",
        "expected",
        "actual",
        "abs_error",
        "pass",
    ]));
    for c in &report.checks {
        io(w.write_record([
            opt(c.n),
            opt(c.m),
            opt(c.l),
            c.name.clone(),
            float12(c.expected),
            float12(c.actual),
            float12(c.abs_error()),
            c.pass.to_string(),
        ]));
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv output is UTF-8")
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_u64() || n.is_i64() => n.to_string(),
        Value::Number(n) => {
            let x = n.as_f64().unwrap_or(f64::NAN);
            if x == 0.0 {
                "0".into()
            } else if x.abs() < 1e-4 || x.abs() >= 1e6 {
                format!("{x:.3e}")
            } else {
                format!("{x:.9}")
            }
        }
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn table_block(
    out: &mut String,
    header: &[String],
    rows: &[Vec<String>],
    paint: &dyn Fn(usize, &str) -> String,
) {
    let widths: Vec<usize> = (0..header.len())
        .map(|i| {
            rows.iter()
                .map(|r| r[i].chars().count())
                .chain([header[i].chars().count()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |cells: &[String], paint: &dyn Fn(usize, &str) -> String| {
        cells
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(i, (c, w))| paint(i, &format!("{c:<w$}")))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let _ = writeln!(out, "{}", line(header, &|_, s| s.to_string()));
    for r in rows {
        let _ = writeln!(out, "{}", line(r, paint));
    }
}

pub fn table(report: &Report, color: bool) -> String {
    let mut out = String::new();

    // results grouped by kind, in order of first appearance
    let mut kinds: Vec<&str> = Vec::new();
    for r in &report.results {
        let k = r["kind"].as_str().unwrap_or("");
        if !kinds.contains(&k) {
            kinds.push(k);
        }
    }
    for kind in kinds {
        let rows: Vec<&serde_json::Map<String, Value>> = report
            .results
            .iter()
            .filter_map(Value::as_object)
            .filter(|r| r["kind"] == kind)
            .collect();
        let header: Vec<String> = rows[0]
            .keys()
            .filter(|k| *k != "kind" && !k.ends_with("_value"))
            .cloned()
            .collect();
        let body: Vec<Vec<String>> = rows
            .iter()
            .map(|r| {
                header
                    .iter()
                    .map(|k| r.get(k).map(cell).unwrap_or_default())
                    .collect()
            })
            .collect();
        let _ = writeln!(out, "[{kind}]");
        table_block(&mut out, &header, &body, &|_, s| s.to_string());
        out.push('\n');
    }

    let header: Vec<String> = [
        "n",
        "m",
        "l",
        "check",
        "expected",
        "actual",
        "tolerance",
        "result",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let body: Vec<Vec<String>> = report.checks.iter().map(check_cells).collect();
    let paint = |i: usize, s: &str| -> String {
        if !color || i != 7 {
            return s.to_string();
        }
        let code = if s.trim() == "PASS" { "32" } else { "31" };
        format!("\x1b[{code}m{s}\x1b[0m")
    };
    let _ = writeln!(out, "[checks]");
    table_block(&mut out, &header, &body, &paint);
    let failed = report.failures().count();
    let _ = writeln!(out, "\n{} checks, {} failed", report.checks.len(), failed);
    out
}

fn check_cells(c: &Check) -> Vec<String> {
    vec![
        opt(c.n),
        opt(c.m),
        opt(c.l),
        c.name.clone(),
        c.expected_exact
            .clone()
            .unwrap_or_else(|| cell(&Value::from(c.expected))),
        c.actual_exact
            .clone()
            .unwrap_or_else(|| cell(&Value::from(c.actual))),
        cell(&Value::from(c.tolerance)),
        if c.pass { "PASS" } else { "FAIL" }.to_string(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(float12(2.0 / 3.0), "6.66666666667e-1");
        assert_eq!(float12(0.0), "0");
        assert_eq!(float12(1e-13), "1.00000000000e-13");
    }
}
