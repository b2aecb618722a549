//! Output formatting: canonical JSON, CSV and Markdown tables laid out like
//! the paper's Betti tables.

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

use super::tables::TableReport;
use super::CliError;
use crate::invariants::InvariantRecord;
use crate::lattice::{q_text, Wall};
use crate::qseries::{pole_to_json, PoleSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Md,
}

/// Pretty JSON with sorted keys and a trailing newline.
fn canonical(v: &Value) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_line(fields: &[String]) -> String {
    fields.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(",") + "\n"
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn euler_json(r: &InvariantRecord) -> Value {
    let full = r.to_json();
    json!({
        "ell": full["ell"],
        "r": full["r"],
        "c1": full["c1"],
        "c2": full["c2"],
        "J": full["J"],
        "dim": full["dim"],
        "euler": full["euler"],
    })
}

/// Rows `c₂ | b₀ b₂ … b_{dim} | χ`, the layout of the paper's tables.
fn records_md(rows: &[InvariantRecord], euler_only: bool) -> String {
    if euler_only {
        let mut out = String::from("| c2 | dim | χ |\n|---|---|---|\n");
        for r in rows {
            out.push_str(&format!("| {} | {} | {} |\n", q_text::to_string(&r.gamma.c2), r.dim, r.euler));
        }
        return out;
    }
    let width = rows.iter().map(|r| (r.dim.max(0) / 2 + 1) as usize).max().unwrap_or(1);
    let mut out = String::from("| c2 |");
    for k in 0..width {
        out.push_str(&format!(" b{} |", 2 * k));
    }
    out.push_str(" χ |\n|---|");
    out.push_str(&"---:|".repeat(width + 1));
    out.push('\n');
    for r in rows {
        out.push_str(&format!("| {} |", q_text::to_string(&r.gamma.c2)));
        let even = r.even_betti();
        let shown = (r.dim.max(0) / 2 + 1) as usize;
        for b in even.iter().take(shown) {
            out.push_str(&format!(" {b} |"));
        }
        out.push_str(&"  |".repeat(width.saturating_sub(shown.min(even.len()))));
        out.push_str(&format!(" {} |\n", r.euler));
    }
    out
}

pub fn records(rows: &[InvariantRecord], format: Format, euler_only: bool) -> String {
    match format {
        Format::Json => {
            let v: Vec<Value> = rows.iter().map(|r| if euler_only { euler_json(r) } else { r.to_json() }).collect();
            canonical(&Value::Array(v)).expect("records serialise")
        }
        Format::Csv => {
            let mut out = if euler_only {
                csv_line(&["ell", "r", "c1", "c2", "J", "dim", "euler"].map(String::from))
            } else {
                csv_line(&["ell", "r", "c1", "c2", "J", "dim", "euler", "betti"].map(String::from))
            };
            for r in rows {
                let (b, a) = r.gamma.c1.beta_alpha();
                let mut f = vec![
                    r.ell.to_string(),
                    r.gamma.r.to_string(),
                    format!("{b},{a}"),
                    q_text::to_string(&r.gamma.c2),
                    r.j.to_string(),
                    r.dim.to_string(),
                    r.euler.to_string(),
                ];
                if !euler_only {
                    f.push(r.poincare.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "));
                }
                out.push_str(&csv_line(&f));
            }
            out
        }
        Format::Md => records_md(rows, euler_only),
    }
}

pub fn series(s: &PoleSeries, format: Format) -> Result<String, CliError> {
    let v = pole_to_json(s);
    match format {
        Format::Json => canonical(&v),
        Format::Csv | Format::Md => {
            let den: Vec<String> = s.den().iter().map(|m| m.to_string()).collect();
            let mut out = String::new();
            if format == Format::Csv {
                out.push_str(&csv_line(&["q", "w", "coefficient", "den"].map(String::from)));
            } else {
                out.push_str(&format!("denominator: {}\n\n| q | w | coefficient |\n|---|---:|---:|\n", den_text(s)));
            }
            for t in v["terms"].as_array().into_iter().flatten() {
                let q = scalar_text(&t[0]);
                for wc in t[1].as_array().into_iter().flatten() {
                    let (w, c) = (scalar_text(&wc[0]), scalar_text(&wc[1]));
                    if format == Format::Csv {
                        out.push_str(&csv_line(&[q.clone(), w, c, den.join(" ")]));
                    } else {
                        out.push_str(&format!("| {q} | {w} | {c} |\n"));
                    }
                }
            }
            Ok(out)
        }
    }
}

fn den_text(s: &PoleSeries) -> String {
    if s.den().is_empty() {
        return "1".into();
    }
    s.den().iter().map(|m| format!("(w^{m}-w^-{m})")).collect()
}

pub fn walls(rows: &[(i64, Vec<Wall>)], format: Format) -> Result<String, CliError> {
    let describe = |w: &Wall| -> Vec<String> {
        w.decompositions
            .iter()
            .map(|d| d.constituents().map(|g| g.to_string()).collect::<Vec<_>>().join(" + "))
            .collect()
    };
    match format {
        Format::Json => {
            let v: Vec<Value> = rows
                .iter()
                .map(|(c2, ws)| {
                    json!({
                        "c2": c2,
                        "walls": ws.iter().map(|w| json!({
                            "ratio": w.ratio.to_string(),
                            "decompositions": describe(w),
                        })).collect::<Vec<_>>(),
                    })
                })
                .collect();
            canonical(&Value::Array(v))
        }
        Format::Csv => {
            let mut out = csv_line(&["c2", "ratio", "decomposition"].map(String::from));
            for (c2, ws) in rows {
                for w in ws {
                    for d in describe(w) {
                        out.push_str(&csv_line(&[c2.to_string(), w.ratio.to_string(), d]));
                    }
                }
            }
            Ok(out)
        }
        Format::Md => {
            let mut out = String::from("| c2 | wall m:n | decomposition |\n|---|---|---|\n");
            for (c2, ws) in rows {
                for w in ws {
                    for d in describe(w) {
                        out.push_str(&format!("| {c2} | {} | {d} |\n", w.ratio));
                    }
                }
            }
            Ok(out)
        }
    }
}

/// Objects in the first array found under `items`, `rows` or `identities`.
fn row_objects(v: &Value) -> Vec<&serde_json::Map<String, Value>> {
    for key in ["items", "rows", "identities"] {
        if let Some(arr) = v.get(key).and_then(Value::as_array) {
            return arr.iter().filter_map(Value::as_object).collect();
        }
    }
    Vec::new()
}

/// A JSON document, or its row list flattened into CSV / Markdown.
pub fn document(v: &Value, format: Format) -> Result<String, CliError> {
    if format == Format::Json {
        return canonical(v);
    }
    let rows = row_objects(v);
    let mut columns: Vec<&String> = rows.iter().flat_map(|r| r.keys()).collect();
    columns.sort();
    columns.dedup();
    // identifying columns first
    columns.sort_by_key(|c| !matches!(c.as_str(), "name" | "c2" | "check"));
    let cell = |r: &serde_json::Map<String, Value>, c: &String| r.get(c.as_str()).map(scalar_text).unwrap_or_default();
    let mut out = String::new();
    if format == Format::Csv {
        out.push_str(&csv_line(&columns.iter().map(|c| c.to_string()).collect::<Vec<_>>()));
        for r in &rows {
            out.push_str(&csv_line(&columns.iter().map(|c| cell(r, c)).collect::<Vec<_>>()));
        }
    } else {
        out.push_str(&format!("| {} |\n", columns.iter().map(|c| c.as_str()).collect::<Vec<_>>().join(" | ")));
        out.push_str(&format!("|{}\n", "---|".repeat(columns.len())));
        for r in &rows {
            out.push_str(&format!("| {} |\n", columns.iter().map(|c| cell(r, c)).collect::<Vec<_>>().join(" | ")));
        }
    }
    Ok(out)
}

pub fn table_report(report: &TableReport, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => canonical(&report.to_json()),
        Format::Csv => Ok(records(&report.records, Format::Csv, false)),
        Format::Md => {
            let golden = if report.matches_golden { "matches golden file" } else { "DIFFERS from golden file" };
            let paper = if report.matches_paper { "matches printed rows" } else { "DIFFERS from printed rows" };
            Ok(format!("### {}\n\n{golden}; {paper}\n\n{}\n", report.table.caption(), records_md(&report.records, false)))
        }
    }
}
