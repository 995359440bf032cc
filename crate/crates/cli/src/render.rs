//! Text, CSV and DOT renderings of command payloads.

use std::fmt::Write;

use serde_json::Value;
use tropmod::CellPoly;

/// Keys whose integer arrays are cell-count polynomials.
const POLY_KEYS: [&str; 2] = ["poly", "cells"];

fn poly_text(v: &Value) -> Option<String> {
    let coeffs: Option<Vec<i64>> = v.as_array()?.iter().map(Value::as_i64).collect();
    Some(CellPoly::new(coeffs?).to_string())
}

/// A scalar or array as one field; array items are joined with `sep`,
/// nested arrays with `-`.
fn field(key: &str, v: &Value, sep: &str) -> String {
    if POLY_KEYS.contains(&key) {
        if let Some(p) = poly_text(v) {
            return p;
        }
    }
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => items
            .iter()
            .map(|x| match x {
                Value::Array(inner) => inner.iter().map(|y| field("", y, "-")).collect::<Vec<_>>().join("-"),
                _ => field("", x, sep),
            })
            .collect::<Vec<_>>()
            .join(sep),
        Value::Object(_) => v.to_string(),
        other => other.to_string(),
    }
}

fn columns<'a>(rows: &'a [Value], preferred: &[&'a str]) -> Vec<&'a str> {
    let mut cols: Vec<&str> = preferred.to_vec();
    for r in rows {
        if let Some(m) = r.as_object() {
            for k in m.keys() {
                if !cols.contains(&k.as_str()) {
                    cols.push(k);
                }
            }
        }
    }
    cols.retain(|c| rows.iter().any(|r| r.get(c).is_some()));
    cols
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn csv(v: &Value, preferred: &[&str]) -> String {
    let rows: Vec<Value> = match v {
        Value::Array(rows) if rows.iter().all(Value::is_object) => rows.clone(),
        Value::Object(_) => vec![v.clone()],
        other => return format!("{}\n", csv_escape(&field("", other, " "))),
    };
    let cols = columns(&rows, preferred);
    let mut out = cols.join(",");
    out.push('\n');
    for r in &rows {
        let line: Vec<String> = cols
            .iter()
            .map(|c| r.get(c).map(|x| csv_escape(&field(c, x, " "))).unwrap_or_default())
            .collect();
        out += &line.join(",");
        out.push('\n');
    }
    out
}

fn text_row(r: &Value, cols: &[&str]) -> String {
    cols.iter()
        .filter_map(|c| r.get(c).map(|x| format!("{c}={}", field(c, x, ","))))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn text(v: &Value, preferred: &[&str]) -> String {
    let mut out = String::new();
    match v {
        Value::Array(rows) if !rows.is_empty() && rows.iter().all(Value::is_object) => {
            let cols = columns(rows, preferred);
            for r in rows {
                let _ = writeln!(out, "{}", text_row(r, &cols));
            }
        }
        Value::Object(m) => {
            let keys: Vec<&str> = m.keys().map(String::as_str).collect();
            let mut order: Vec<&str> = preferred.iter().copied().filter(|k| m.contains_key(*k)).collect();
            order.extend(keys.into_iter().filter(|k| !preferred.contains(k)));
            for k in order {
                match &m[k] {
                    Value::Array(rows) if !rows.is_empty() && rows.iter().all(Value::is_object) => {
                        let _ = writeln!(out, "{k}:");
                        let cols = columns(rows, &[]);
                        for r in rows {
                            let _ = writeln!(out, "  {}", text_row(r, &cols));
                        }
                    }
                    Value::Object(inner) => {
                        let _ = writeln!(out, "{k}:");
                        for (ik, iv) in inner {
                            let _ = writeln!(out, "  {ik}: {}", field(ik, iv, ","));
                        }
                    }
                    x => {
                        let _ = writeln!(out, "{k}: {}", field(k, x, " "));
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{}", field("", other, " "));
        }
    }
    out
}

/// One undirected DOT graph per enumerated class.
pub fn graphs_dot(rows: &Value) -> String {
    let mut out = String::new();
    for (i, r) in rows.as_array().into_iter().flatten().enumerate() {
        let _ = writeln!(out, "graph class_{i} {{");
        let _ = writeln!(out, "  label=\"{}\";", r["canonical"].as_str().unwrap_or_default());
        for v in 0..r["vertices"].as_u64().unwrap_or(0) {
            let _ = writeln!(out, "  v{v} [shape=point];");
        }
        let blocks = r["blocks"].as_array();
        for (e, uw) in r["edges"].as_array().into_iter().flatten().enumerate() {
            let block = blocks.and_then(|b| b.get(e)).and_then(Value::as_u64).unwrap_or(0);
            let _ = writeln!(out, "  v{} -- v{} [label=\"{}\"];", uw[0], uw[1], block + 1);
        }
        out += "}\n";
    }
    out
}

/// The claim table, one line per claim.
pub fn claims(table: &Value) -> String {
    let mut out = String::new();
    for row in table.as_array().into_iter().flatten() {
        let status = row["status"].as_str().unwrap_or_default().to_uppercase();
        let s = |k: &str| row[k].as_str().unwrap_or_default().to_string();
        let _ = writeln!(
            out,
            "{status:<6} {:>3}  {}\n         expected: {}\n         computed: {}",
            s("id"),
            s("claim"),
            s("expected"),
            s("computed")
        );
    }
    out
}
