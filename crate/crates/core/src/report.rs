//! CSV, JSON and SVG emission with deterministic formatting.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            other => Err(Error::input(format!("unsupported format '{other}' (csv, json, svg)"))),
        }
    }
}

/// Shortest round-trip decimal, so equal values always print identically.
pub fn num(x: f64) -> String {
    format!("{x}")
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let esc = |f: &String| {
            if f.contains([',', '"', '\n']) {
                format!("\"{}\"", f.replace('"', "\"\""))
            } else {
                f.clone()
            }
        };
        let mut out = String::new();
        for line in std::iter::once(&self.header).chain(&self.rows) {
            out.push_str(&line.iter().map(esc).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub dashed: bool,
}

impl Series {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Series { label: label.into(), points, dashed: false }
    }

    pub fn dashed(mut self) -> Self {
        self.dashed = true;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub log_y: bool,
    pub series: Vec<Series>,
}

const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn xml(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

impl Plot {
    pub fn to_svg(&self) -> String {
        let (w, h) = (720.0, 480.0);
        let (left, right, top, bottom) = (80.0, 200.0, 40.0, 60.0);
        let tx = |v: f64| if self.log_x { v.log10() } else { v };
        let ty = |v: f64| if self.log_y { v.log10() } else { v };
        let pts: Vec<(f64, f64)> = self
            .series
            .iter()
            .flat_map(|s| s.points.iter().map(|&(x, y)| (tx(x), ty(y))))
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .collect();
        let (mut x0, mut x1, mut y0, mut y1) = pts.iter().fold(
            (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY),
            |(a, b, c, d), &(x, y)| (a.min(x), b.max(x), c.min(y), d.max(y)),
        );
        if !x0.is_finite() {
            (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
        }
        if x1 - x0 < 1e-12 {
            x0 -= 0.5;
            x1 += 0.5;
        }
        if y1 - y0 < 1e-12 {
            y0 -= 0.5;
            y1 += 0.5;
        }
        let pad = 0.05 * (y1 - y0);
        let (y0, y1) = (y0 - pad, y1 + pad);
        let pw = w - left - right;
        let ph = h - top - bottom;
        let sx = |x: f64| left + (x - x0) / (x1 - x0) * pw;
        let sy = |y: f64| top + (1.0 - (y - y0) / (y1 - y0)) * ph;
        let mut out = String::new();
        let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" font-family="sans-serif" font-size="12">"#);
        let _ = writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
        let _ = writeln!(out, r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#, left + pw / 2.0, xml(&self.title));
        let _ = writeln!(out, r#"<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#);
        for (lo, hi, log, horizontal) in [(x0, x1, self.log_x, true), (y0, y1, self.log_y, false)] {
            for (v, label) in ticks(lo, hi, log) {
                if horizontal {
                    let x = sx(v);
                    let _ = writeln!(out, r##"<line x1="{x:.2}" y1="{}" x2="{x:.2}" y2="{}" stroke="#ccc"/>"##, top, top + ph);
                    let _ = writeln!(out, r#"<text x="{x:.2}" y="{}" text-anchor="middle">{label}</text>"#, top + ph + 16.0);
                } else {
                    let y = sy(v);
                    let _ = writeln!(out, r##"<line x1="{left}" y1="{y:.2}" x2="{}" y2="{y:.2}" stroke="#ccc"/>"##, left + pw);
                    let _ = writeln!(out, r#"<text x="{}" y="{:.2}" text-anchor="end">{label}</text>"#, left - 6.0, y + 4.0);
                }
            }
        }
        let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, left + pw / 2.0, h - 18.0, xml(&self.x_label));
        let _ = writeln!(
            out,
            r#"<text x="18" y="{0}" text-anchor="middle" transform="rotate(-90 18 {0})">{1}</text>"#,
            top + ph / 2.0,
            xml(&self.y_label)
        );
        for (i, s) in self.series.iter().enumerate() {
            let color = COLORS[i % COLORS.len()];
            let path: Vec<String> = s
                .points
                .iter()
                .map(|&(x, y)| (tx(x), ty(y)))
                .filter(|(x, y)| x.is_finite() && y.is_finite())
                .map(|(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                .collect();
            let dash = if s.dashed { r#" stroke-dasharray="6 4""# } else { "" };
            let _ = writeln!(out, r#"<polyline fill="none" stroke="{color}" stroke-width="1.8"{dash} points="{}"/>"#, path.join(" "));
            for p in &path {
                let (cx, cy) = p.split_once(',').expect("formatted point");
                let _ = writeln!(out, r#"<circle cx="{cx}" cy="{cy}" r="2.5" fill="{color}"/>"#);
            }
            let ly = top + 16.0 + 18.0 * i as f64;
            let lx = left + pw + 12.0;
            let _ = writeln!(out, r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"{dash}/>"#, lx + 24.0);
            let _ = writeln!(out, r#"<text x="{}" y="{}">{}</text>"#, lx + 30.0, ly + 4.0, xml(&s.label));
        }
        out.push_str("</svg>\n");
        out
    }
}

/// Tick positions (in transformed coordinates) and labels.
fn ticks(lo: f64, hi: f64, log: bool) -> Vec<(f64, String)> {
    if log {
        let (a, b) = (lo.ceil() as i64, hi.floor() as i64);
        if b >= a && b - a <= 12 {
            return (a..=b).map(|e| (e as f64, format!("1e{e}"))).collect();
        }
    }
    let span = hi - lo;
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| span / s <= 6.0).unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last)
        .map(|k| {
            let v = k as f64 * step;
            let label = if log { format!("{:.3}", 10f64.powf(v)) } else { format!("{:.3}", v) };
            (v, label.trim_end_matches('0').trim_end_matches('.').to_string())
        })
        .collect()
}

/// Everything a command produces, written as `<stem>.<ext>` for each requested format.
#[derive(Debug, Clone, Default)]
pub struct Outputs {
    pub table: Option<Table>,
    pub json: Option<serde_json::Value>,
    pub plot: Option<Plot>,
    /// Extra files written verbatim (name, contents).
    pub extra: Vec<(String, String)>,
}

pub fn emit_report(dir: &Path, stem: &str, formats: &[Format], out: &Outputs, allow_empty: bool) -> Result<Vec<PathBuf>> {
    if !allow_empty && out.table.as_ref().is_some_and(|t| t.rows.is_empty()) {
        return Err(Error::input("empty result table"));
    }
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("cannot create {}: {e}", dir.display())))?;
    let mut written = Vec::new();
    let mut put = |name: String, body: &str| -> Result<()> {
        let path = dir.join(name);
        std::fs::write(&path, body).map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display())))?;
        written.push(path);
        Ok(())
    };
    for f in formats {
        match f {
            Format::Csv => {
                if let Some(t) = &out.table {
                    put(format!("{stem}.csv"), &t.to_csv())?;
                }
            }
            Format::Json => {
                let v = match (&out.json, &out.table) {
                    (Some(v), _) => v.clone(),
                    (None, Some(t)) => table_json(t),
                    (None, None) => continue,
                };
                put(format!("{stem}.json"), &(serde_json::to_string_pretty(&v).expect("json value") + "\n"))?;
            }
            Format::Svg => {
                if let Some(p) = &out.plot {
                    put(format!("{stem}.svg"), &p.to_svg())?;
                }
            }
        }
    }
    for (name, body) in &out.extra {
        put(name.clone(), body)?;
    }
    Ok(written)
}

/// Rows as objects keyed by column name; keys come out sorted.
pub fn table_json(t: &Table) -> serde_json::Value {
    let rows: Vec<serde_json::Value> = t
        .rows
        .iter()
        .map(|r| {
            let m: serde_json::Map<String, serde_json::Value> = t
                .header
                .iter()
                .zip(r)
                .map(|(k, v)| {
                    let val = v.parse::<f64>().ok().and_then(serde_json::Number::from_f64).map_or_else(
                        || serde_json::Value::String(v.clone()),
                        serde_json::Value::Number,
                    );
                    (k.clone(), val)
                })
                .collect();
            serde_json::Value::Object(m)
        })
        .collect();
    serde_json::json!({ "columns": t.header, "rows": rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_only_csv() {
        let t = Table::new(&["n", "value"]);
        assert_eq!(t.to_csv(), "n,value\n");
        let dir = tempfile::tempdir().unwrap();
        let out = Outputs { table: Some(t), ..Default::default() };
        assert!(emit_report(dir.path(), "x", &[Format::Csv], &out, false).is_err());
        let files = emit_report(dir.path(), "x", &[Format::Csv], &out, true).unwrap();
        assert_eq!(std::fs::read_to_string(&files[0]).unwrap(), "n,value\n");
    }

    #[test]
    fn csv_quoting_and_formats() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["x,y".into(), num(0.1)]);
        assert_eq!(t.to_csv(), "a,b\n\"x,y\",0.1\n");
        assert!("svg".parse::<Format>().is_ok() && "png".parse::<Format>().is_err());
        let j = table_json(&t);
        assert_eq!(j["rows"][0]["b"], 0.1);
    }

    #[test]
    fn svg_is_deterministic() {
        let p = Plot {
            title: "κ".into(),
            x_label: "N".into(),
            y_label: "value".into(),
            log_x: true,
            log_y: true,
            series: vec![Series::new("a", vec![(10.0, 1.0), (100.0, 0.5)]), Series::new("b", vec![(10.0, 2.0)]).dashed()],
        };
        let a = p.to_svg();
        assert_eq!(a, p.to_svg());
        assert!(a.starts_with("<svg") && a.contains("polyline") && a.contains(">a</text>"));
    }
}
