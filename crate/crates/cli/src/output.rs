//! Report assembly and rendering as JSON, an aligned table, or CSV.

use std::io::Write;

use clap::ValueEnum;
use kpair::exact::format_rational;
use kpair::Rational;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
    Csv,
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Tabular part of a report, used for CSV output and appended to tables.
#[derive(Debug, Clone, Default)]
pub struct Rows {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub params: Map<String, Value>,
    pub results: Map<String, Value>,
    pub checks: Vec<Check>,
    pub rows: Option<Rows>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            params: Map::new(),
            results: Map::new(),
            checks: Vec::new(),
            rows: None,
        }
    }

    pub fn param(&mut self, key: &str, value: Value) -> &mut Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn result(&mut self, key: &str, value: Value) -> &mut Self {
        self.results.insert(key.to_string(), value);
        self
    }

    pub fn check(&mut self, name: &str, pass: bool, detail: impl Into<String>) -> &mut Self {
        self.checks.push(Check {
            name: name.to_string(),
            pass,
            detail: detail.into(),
        });
        self
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| json!({"name": c.name, "pass": c.pass, "detail": c.detail}))
            .collect();
        json!({
            "command": self.command,
            "params": self.params,
            "results": self.results,
            "checks": checks,
        })
    }

    pub fn render(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Json => {
                let text = serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
                writeln!(out, "{text}")
            }
            Format::Table => self.render_table(out),
            Format::Csv => self.render_csv(out),
        }
    }

    fn render_table(&self, out: &mut dyn Write) -> std::io::Result<()> {
        writeln!(out, "command: {}", self.command)?;
        for (title, map) in [("params", &self.params), ("results", &self.results)] {
            if map.is_empty() {
                continue;
            }
            writeln!(out, "{title}:")?;
            let width = map.keys().map(String::len).max().unwrap_or(0);
            for (k, v) in map {
                if v.is_array() && v.as_array().is_some_and(|a| a.iter().any(Value::is_object)) {
                    continue;
                }
                writeln!(out, "  {k:<width$}  {}", plain(v))?;
            }
        }
        if let Some(rows) = &self.rows {
            let mut widths: Vec<usize> = rows.header.iter().map(String::len).collect();
            for r in &rows.rows {
                for (w, cell) in widths.iter_mut().zip(r) {
                    *w = (*w).max(cell.len());
                }
            }
            let line = |cells: &[String]| {
                cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:>w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            writeln!(out, "{}", line(&rows.header))?;
            for r in &rows.rows {
                writeln!(out, "{}", line(r))?;
            }
        }
        if !self.checks.is_empty() {
            writeln!(out, "checks:")?;
            for c in &self.checks {
                let status = if c.pass { "PASS" } else { "FAIL" };
                writeln!(out, "  {status} {}: {}", c.name, c.detail)?;
            }
        }
        Ok(())
    }

    fn render_csv(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        match &self.rows {
            Some(rows) => {
                wtr.write_record(&rows.header)?;
                for r in &rows.rows {
                    wtr.write_record(r)?;
                }
            }
            None => {
                wtr.write_record(["key", "value"])?;
                for (k, v) in &self.results {
                    wtr.write_record([k.as_str(), &plain(v)])?;
                }
                for c in &self.checks {
                    let status = if c.pass { "pass" } else { "fail" };
                    wtr.write_record([format!("check:{}", c.name), status.to_string()])?;
                }
            }
        }
        wtr.flush()
    }
}

/// `{"num": "p", "den": "q"}`.
pub fn rational(r: &Rational) -> Value {
    json!({"num": r.numer().to_string(), "den": r.denom().to_string()})
}

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

pub fn float(x: f64) -> Value {
    let r = round12(x);
    serde_json::Number::from_f64(r).map_or(Value::Null, Value::Number)
}

/// Float with 12 significant digits, in scientific notation for very small
/// or large magnitudes.
pub fn fmt_float(x: f64) -> String {
    let r = round12(x);
    if r == 0.0 {
        "0".to_string()
    } else if !(1e-4..1e15).contains(&r.abs()) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

/// Human-readable form of a JSON value; rationals print as `p/q`.
pub fn plain(v: &Value) -> String {
    match v {
        Value::Null => "-".to_string(),
        Value::String(s) => s.clone(),
        Value::Number(n) => match n.as_f64() {
            Some(f) if !n.is_i64() && !n.is_u64() => fmt_float(f),
            _ => n.to_string(),
        },
        Value::Object(o) if o.len() == 2 && o.contains_key("num") && o.contains_key("den") => {
            let (num, den) = (plain(&o["num"]), plain(&o["den"]));
            if den == "1" {
                num
            } else {
                format!("{num}/{den}")
            }
        }
        Value::Array(a) => format!("[{}]", a.iter().map(plain).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

pub fn rational_text(r: &Rational) -> String {
    format_rational(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use kpair::exact::rat;

    #[test]
    fn float_formatting() {
        assert_eq!(fmt_float(0.1 + 0.2), "0.3");
        assert_eq!(fmt_float(6f64.sqrt() / 9.0), "0.272165526976");
        assert_eq!(fmt_float(1.0e-14), "1e-14");
        assert_eq!(fmt_float(0.0), "0");
        assert_eq!(fmt_float(-2.5), "-2.5");
    }

    #[test]
    fn rational_rendering() {
        assert_eq!(rational(&rat(21, 8)), json!({"num": "21", "den": "8"}));
        assert_eq!(plain(&rational(&rat(-3, 1))), "-3");
        assert_eq!(plain(&rational(&rat(21, 8))), "21/8");
    }

    #[test]
    fn csv_fallback() {
        let mut r = Report::new("x");
        r.result("value", float(1.5)).check("ok", true, "fine, really");
        let mut buf = Vec::new();
        r.render(Format::Csv, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "key,value\nvalue,1.5\ncheck:ok,pass\n"
        );
    }
}
