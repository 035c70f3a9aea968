//! Self-describing tabular output in CSV or JSON.
//!
//! Every record embeds the fully resolved parameter set. CSV carries the
//! metadata as leading `#` comment lines; the first non-comment row is the
//! column header. Identical inputs produce byte-identical output. Numbers
//! are serialized with 15 significant digits.

use std::fmt::Write as _;

pub const SCHEMA_VERSION: &str = "1";

/// 15 significant digits, scientific.
pub fn fmt_sig15(x: f64) -> String {
    format!("{x:.14e}")
}

#[derive(Debug, Clone)]
pub struct Row {
    pub axis: &'static str,
    pub value: f64,
    /// One entry per column after (axis, value).
    pub numbers: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct Curve {
    pub label: Option<String>,
    pub rows: Vec<Row>,
}

#[derive(Debug, Clone)]
pub struct OutputRecord {
    pub command: &'static str,
    /// Resolved parameters, in presentation order.
    pub meta: Vec<(String, String)>,
    /// Column names; the first two are always "axis" and "value".
    pub columns: Vec<&'static str>,
    pub curves: Vec<Curve>,
}

impl OutputRecord {
    pub fn new(command: &'static str, columns: Vec<&'static str>) -> Self {
        Self {
            command,
            meta: Vec::new(),
            columns,
            curves: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.meta.push((key.to_string(), value.to_string()));
        self
    }

    pub fn meta_number(&mut self, key: &str, value: f64) -> &mut Self {
        self.meta.push((key.to_string(), fmt_sig15(value)));
        self
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# schema_version: {SCHEMA_VERSION}");
        let _ = writeln!(out, "# command: {}", self.command);
        for (k, v) in &self.meta {
            let _ = writeln!(out, "# {k}: {v}");
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for curve in &self.curves {
            if let Some(label) = &curve.label {
                let _ = writeln!(out, "# curve: {label}");
            }
            for row in &curve.rows {
                let mut cells = vec![row.axis.to_string(), fmt_sig15(row.value)];
                cells.extend(row.numbers.iter().map(|&x| fmt_sig15(x)));
                let _ = writeln!(out, "{}", cells.join(","));
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let meta: serde_json::Map<String, serde_json::Value> = self
            .meta
            .iter()
            .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
            .collect();
        let curves: Vec<serde_json::Value> = self
            .curves
            .iter()
            .map(|curve| {
                let rows: Vec<serde_json::Value> = curve
                    .rows
                    .iter()
                    .map(|row| {
                        let mut obj = serde_json::Map::new();
                        obj.insert("axis".into(), row.axis.into());
                        obj.insert("value".into(), row.value.into());
                        for (name, &x) in self.columns.iter().skip(2).zip(&row.numbers) {
                            obj.insert((*name).into(), x.into());
                        }
                        serde_json::Value::Object(obj)
                    })
                    .collect();
                serde_json::json!({ "label": curve.label, "rows": rows })
            })
            .collect();
        let record = serde_json::json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "meta": meta,
            "columns": self.columns,
            "curves": curves,
        });
        let mut text = serde_json::to_string_pretty(&record).expect("serializable record");
        text.push('\n');
        text
    }

    /// Plain key/value rendering for terminal use.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            let _ = writeln!(out, "{k}: {v}");
        }
        for curve in &self.curves {
            if let Some(label) = &curve.label {
                let _ = writeln!(out, "[{label}]");
            }
            for row in &curve.rows {
                let _ = writeln!(out, "{}: {}", row.axis, fmt_sig15(row.value));
                for (name, &x) in self.columns.iter().skip(2).zip(&row.numbers) {
                    let _ = writeln!(out, "{name}: {}", fmt_sig15(x));
                }
            }
        }
        out
    }
}
