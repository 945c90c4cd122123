use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::unit_ball_volume;
use crate::quad::gl;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "layout", rename_all = "lowercase")]
pub enum Layout {
    /// Cells [edges[i], edges[i+1]]; edges[0] = 0 makes the first cell a ball.
    Radial { edges: Vec<f64> },
    /// Uniform cells of side h, cell (i_1..i_d) spanning lo + h·[i, i+1].
    Cartesian { lo: Vec<f64>, h: f64, shape: Vec<usize> },
}

/// Nonnegative piecewise-constant density on a radial or Cartesian grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Density {
    pub d: usize,
    #[serde(flatten)]
    pub layout: Layout,
    pub values: Vec<f64>,
}

/// Edges [0, r_1, ..., r_n] with r_i log-spaced on [r_min, r_max]; n cells.
pub fn log_edges(n: usize, r_min: f64, r_max: f64) -> Vec<f64> {
    assert!(n >= 2 && r_min > 0.0 && r_max > r_min);
    let step = (r_max / r_min).ln() / (n - 1) as f64;
    let mut e = Vec::with_capacity(n + 1);
    e.push(0.0);
    for i in 0..n {
        e.push(r_min * (step * i as f64).exp());
    }
    e
}

pub fn uniform_edges(n: usize, r_max: f64) -> Vec<f64> {
    (0..=n).map(|i| r_max * i as f64 / n as f64).collect()
}

fn check_values(values: &[f64]) -> Result<()> {
    if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::input("density values must be finite and nonnegative"));
    }
    Ok(())
}

impl Density {
    pub fn radial(d: usize, edges: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if d == 0 || edges.len() < 2 || values.len() + 1 != edges.len() {
            return Err(Error::input("radial density needs n+1 edges for n values"));
        }
        if edges[0] < 0.0 || edges.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::input("radial edges must be nonnegative and increasing"));
        }
        check_values(&values)?;
        Ok(Density { d, layout: Layout::Radial { edges }, values })
    }

    pub fn cartesian(lo: Vec<f64>, h: f64, shape: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        let d = lo.len();
        if d == 0 || shape.len() != d || !(h > 0.0) || shape.contains(&0) {
            return Err(Error::input("cartesian density needs matching lo/shape and h > 0"));
        }
        if shape.iter().product::<usize>() != values.len() {
            return Err(Error::input("cartesian value count does not match shape"));
        }
        check_values(&values)?;
        Ok(Density { d, layout: Layout::Cartesian { lo, h, shape }, values })
    }

    /// Cell averages of a radial profile f(r).
    pub fn radial_from_fn<F: Fn(f64) -> f64>(d: usize, edges: Vec<f64>, f: F) -> Result<Self> {
        let rule = gl(8);
        let dd = d as i32;
        let values = edges
            .windows(2)
            .map(|w| {
                let num = rule.integrate(|r| f(r) * r.powi(dd - 1), w[0], w[1]);
                let den = (w[1].powi(dd) - w[0].powi(dd)) / d as f64;
                (num / den).max(0.0)
            })
            .collect();
        Density::radial(d, edges, values)
    }

    /// Cell-center samples of f on a Cartesian grid.
    pub fn cartesian_from_fn<F: Fn(&[f64]) -> f64>(lo: Vec<f64>, h: f64, shape: Vec<usize>, f: F) -> Result<Self> {
        let total: usize = shape.iter().product();
        let d = lo.len();
        let mut x = vec![0.0; d];
        let values = (0..total)
            .map(|idx| {
                cell_center(&lo, h, &shape, idx, &mut x);
                f(&x).max(0.0)
            })
            .collect();
        Density::cartesian(lo, h, shape, values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn edges(&self) -> Option<&[f64]> {
        match &self.layout {
            Layout::Radial { edges } => Some(edges),
            _ => None,
        }
    }

    pub fn cell_measures(&self) -> Vec<f64> {
        match &self.layout {
            Layout::Radial { edges } => {
                let w = unit_ball_volume(self.d);
                let dd = self.d as i32;
                edges.windows(2).map(|e| w * (e[1].powi(dd) - e[0].powi(dd))).collect()
            }
            Layout::Cartesian { h, .. } => vec![h.powi(self.d as i32); self.values.len()],
        }
    }

    pub fn mass(&self) -> f64 {
        self.lp_pow(1.0)
    }

    /// ∫ρ^p.
    pub fn lp_pow(&self, p: f64) -> f64 {
        self.cell_measures()
            .iter()
            .zip(&self.values)
            .map(|(v, r)| if *r > 0.0 { v * r.powf(p) } else { 0.0 })
            .sum()
    }

    pub fn lp_norm(&self, p: f64) -> f64 {
        self.lp_pow(p).powf(1.0 / p)
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= c);
        out
    }

    pub fn with_values(&self, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), self.values.len());
        Density { d: self.d, layout: self.layout.clone(), values }
    }

    /// ρ_t(x) = t^d ρ(t x); mass is preserved.
    pub fn dilated(&self, t: f64) -> Self {
        let layout = match &self.layout {
            Layout::Radial { edges } => Layout::Radial { edges: edges.iter().map(|r| r / t).collect() },
            Layout::Cartesian { lo, h, shape } => Layout::Cartesian {
                lo: lo.iter().map(|x| x / t).collect(),
                h: h / t,
                shape: shape.clone(),
            },
        };
        let f = t.powi(self.d as i32);
        Density { d: self.d, layout, values: self.values.iter().map(|v| v * f).collect() }
    }

    /// Node radii used when the values are read as samples of a continuous profile:
    /// 0 for a ball cell, the r²-midpoint of a shell otherwise.
    pub fn radial_nodes(&self) -> Option<Vec<f64>> {
        self.edges().map(|e| {
            e.windows(2)
                .map(|w| if w[0] == 0.0 { 0.0 } else { (0.5 * (w[0] * w[0] + w[1] * w[1])).sqrt() })
                .collect()
        })
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        match &self.layout {
            Layout::Radial { edges } => {
                s.push_str("layout,d,cells\n");
                let _ = writeln!(s, "radial,{},{}", self.d, self.values.len());
                s.push_str("r_inner,r_outer,value\n");
                for (w, v) in edges.windows(2).zip(&self.values) {
                    let _ = writeln!(s, "{},{},{}", w[0], w[1], v);
                }
            }
            Layout::Cartesian { lo, h, shape } => {
                let mut head = vec!["layout".to_string(), "d".into(), "h".into()];
                let mut row = vec!["cartesian".to_string(), self.d.to_string(), h.to_string()];
                for (i, l) in lo.iter().enumerate() {
                    head.push(format!("lo_{i}"));
                    row.push(l.to_string());
                }
                for (i, n) in shape.iter().enumerate() {
                    head.push(format!("n_{i}"));
                    row.push(n.to_string());
                }
                let _ = writeln!(s, "{}", head.join(","));
                let _ = writeln!(s, "{}", row.join(","));
                let cols: Vec<String> = (0..self.d).map(|i| format!("x_{i}")).collect();
                let _ = writeln!(s, "{},value", cols.join(","));
                let mut x = vec![0.0; self.d];
                for (idx, v) in self.values.iter().enumerate() {
                    cell_center(lo, *h, shape, idx, &mut x);
                    for c in &x {
                        let _ = write!(s, "{c},");
                    }
                    let _ = writeln!(s, "{v}");
                }
            }
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let bad = |m: &str| Error::input(format!("density csv: {m}"));
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let _head = lines.next().ok_or_else(|| bad("missing header"))?;
        let meta: Vec<&str> = lines.next().ok_or_else(|| bad("missing parameters"))?.split(',').collect();
        let _cols = lines.next().ok_or_else(|| bad("missing column header"))?;
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad("unparsable number"));
        let int = |s: &str| s.trim().parse::<usize>().map_err(|_| bad("unparsable integer"));
        let d = int(meta.get(1).ok_or_else(|| bad("missing d"))?)?;
        let rows: Vec<Vec<f64>> = lines
            .map(|l| l.split(',').map(num).collect::<Result<Vec<f64>>>())
            .collect::<Result<_>>()?;
        match meta[0].trim() {
            "radial" => {
                let n = int(meta.get(2).ok_or_else(|| bad("missing cell count"))?)?;
                if rows.len() != n || rows.iter().any(|r| r.len() != 3) {
                    return Err(bad("radial row count or width mismatch"));
                }
                let mut edges: Vec<f64> = rows.iter().map(|r| r[0]).collect();
                edges.push(rows[n - 1][1]);
                Density::radial(d, edges, rows.iter().map(|r| r[2]).collect())
            }
            "cartesian" => {
                if meta.len() != 3 + 2 * d {
                    return Err(bad("cartesian parameter count"));
                }
                let h = num(meta[2])?;
                let lo = meta[3..3 + d].iter().map(|s| num(s)).collect::<Result<Vec<_>>>()?;
                let shape = meta[3 + d..].iter().map(|s| int(s)).collect::<Result<Vec<_>>>()?;
                if rows.iter().any(|r| r.len() != d + 1) {
                    return Err(bad("cartesian row width"));
                }
                Density::cartesian(lo, h, shape, rows.iter().map(|r| r[d]).collect())
            }
            other => Err(bad(&format!("unknown layout {other}"))),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("density serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: Density = serde_json::from_str(text).map_err(|e| Error::input(e.to_string()))?;
        match raw.layout {
            Layout::Radial { edges } => Density::radial(raw.d, edges, raw.values),
            Layout::Cartesian { lo, h, shape } => Density::cartesian(lo, h, shape, raw.values),
        }
    }
}

pub(crate) fn cell_center(lo: &[f64], h: f64, shape: &[usize], mut idx: usize, x: &mut [f64]) {
    for k in (0..shape.len()).rev() {
        let i = idx % shape[k];
        idx /= shape[k];
        x[k] = lo[k] + (i as f64 + 0.5) * h;
    }
}
