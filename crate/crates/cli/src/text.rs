//! Aligned plain-text rendering for `--output text`.

use burnside_witt::group::ConjClassTable;
use burnside_witt::ring::{Element, Ring};
use serde_json::Value;

/// Left-aligned columns separated by two spaces.
pub fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for r in rows {
        let line: Vec<String> = r
            .iter()
            .enumerate()
            .map(|(c, s)| format!("{s:<w$}", w = widths[c]))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

pub fn vector(kind: &str, t: &ConjClassTable, ring: &Ring, ids: &[usize], values: &[Element]) -> String {
    let mut out = format!(
        "group  {}\nring   {ring}\n\n",
        serde_json::to_string(&t.group().origin().to_json()).expect("json")
    );
    let mut rows = vec![vec!["class".to_string(), "label".to_string(), kind.to_string()]];
    for (&i, v) in ids.iter().zip(values) {
        rows.push(vec![
            ConjClassTable::class_id(i),
            t.class(i).label.clone(),
            v.to_string(),
        ]);
    }
    out.push_str(&table(&rows));
    out
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Fallback: one `key  value` line per field, nested values as compact JSON.
pub fn generic(v: &Value) -> String {
    match v {
        Value::Object(map) => table(&map.iter().map(|(k, v)| vec![k.clone(), scalar(v)]).collect::<Vec<_>>()),
        other => format!("{}\n", scalar(other)),
    }
}
