//! Table, JSON and CSV output.

use std::fmt::Display;

use clap::ValueEnum;
use refined_tropical::analysis::InvariantReport;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

/// Two-column `key  value` table.
pub fn table(rows: &[(String, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter()
        .map(|(k, v)| format!("{k:<width$}  {v}\n"))
        .collect()
}

pub fn row(k: impl Display, v: impl Display) -> (String, String) {
    (k.to_string(), v.to_string())
}

pub fn csv<R: AsRef<[u8]>>(header: &[&str], records: impl IntoIterator<Item = Vec<R>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("write to memory");
    for r in records {
        w.write_record(&r).expect("write to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 input")
}

pub fn json_pretty(v: &impl Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

pub fn json_line(v: &impl Serialize) -> String {
    serde_json::to_string(v).expect("serializable") + "\n"
}

pub fn report(r: &InvariantReport, format: Format) -> String {
    match format {
        Format::Json => json_pretty(r),
        Format::Csv => csv(
            &["spec", "genus", "check", "expected", "actual", "pass"],
            r.checks.iter().map(|c| {
                vec![
                    r.spec.clone(),
                    r.genus.to_string(),
                    c.name.clone(),
                    c.expected.clone(),
                    c.actual.clone(),
                    c.pass.to_string(),
                ]
            }),
        ),
        Format::Table => {
            let mut rows = vec![
                row("spec", &r.spec),
                row("genus", r.genus),
                row("delta", r.delta.map_or("-".to_string(), |d| d.to_string())),
                row("G", &r.polynomial),
            ];
            if let Some(ev) = &r.evaluations {
                rows.push(row("G(1)", &ev.at_one));
                if let Some(m) = &ev.at_minus_one {
                    rows.push(row("G(-1)", m));
                }
            }
            for c in &r.checks {
                let verdict = if c.pass { "PASS" } else { "FAIL" };
                rows.push(row(
                    format!("check {}", c.name),
                    format!("{verdict}  expected {}  actual {}", c.expected, c.actual),
                ));
            }
            table(&rows)
        }
    }
}
