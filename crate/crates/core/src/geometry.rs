//! Point configurations, nearest-neighbor distances and Voronoi potentials.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::Params;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointConfig {
    d: usize,
    coords: Vec<f64>,
}

pub fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    dist2(a, b).sqrt()
}

impl PointConfig {
    /// Points given as a flat coordinate list of length K·d.
    pub fn new(d: usize, coords: Vec<f64>) -> Result<Self> {
        if d == 0 || coords.is_empty() || coords.len() % d != 0 {
            return Err(Error::input("point coordinates must form K ≥ 1 points in R^d"));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::input("non-finite coordinate"));
        }
        Ok(PointConfig { d, coords })
    }

    pub fn from_points(points: &[Vec<f64>]) -> Result<Self> {
        let d = points.first().map(|p| p.len()).unwrap_or(0);
        if points.iter().any(|p| p.len() != d) {
            return Err(Error::input("points of mixed dimension"));
        }
        Self::new(d, points.concat())
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.d
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, k: usize) -> &[f64] {
        &self.coords[k * self.d..(k + 1) * self.d]
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks(self.d)
    }

    /// Error unless all points are pairwise distinct.
    pub fn require_distinct(&self) -> Result<()> {
        for k in 0..self.len() {
            for l in k + 1..self.len() {
                if dist2(self.point(k), self.point(l)) == 0.0 {
                    return Err(Error::input(format!("coincident points {k} and {l}")));
                }
            }
        }
        Ok(())
    }

    pub fn scaled(&self, t: f64) -> Self {
        PointConfig { d: self.d, coords: self.coords.iter().map(|c| c * t).collect() }
    }

    pub fn translated(&self, shift: &[f64]) -> Self {
        let coords = self
            .coords
            .chunks(self.d)
            .flat_map(|p| p.iter().zip(shift).map(|(x, s)| x + s))
            .collect();
        PointConfig { d: self.d, coords }
    }

    /// δ_R(y) = min_k |y − R_k|.
    pub fn delta(&self, y: &[f64]) -> f64 {
        self.points().map(|p| dist2(p, y)).fold(f64::INFINITY, f64::min).sqrt()
    }

    /// δ_k(R) = min_{l≠k} |R_k − R_l|.
    pub fn delta_k(&self, k: usize) -> Result<f64> {
        if self.len() < 2 {
            return Err(Error::input("nearest-neighbor distance needs at least two points"));
        }
        let pk = self.point(k);
        let m = (0..self.len())
            .filter(|&l| l != k)
            .map(|l| dist2(pk, self.point(l)))
            .fold(f64::INFINITY, f64::min);
        Ok(m.sqrt())
    }

    pub fn all_delta_k(&self) -> Result<Vec<f64>> {
        (0..self.len()).map(|k| self.delta_k(k)).collect()
    }

    /// Σ_{k<l} |R_k − R_l|^{−λ}.
    pub fn pair_sum(&self, lambda: f64) -> Result<f64> {
        let mut s = 0.0;
        for k in 0..self.len() {
            for l in k + 1..self.len() {
                let r2 = dist2(self.point(k), self.point(l));
                if r2 == 0.0 {
                    return Err(Error::input(format!("coincident points {k} and {l}")));
                }
                s += r2.powf(-0.5 * lambda);
            }
        }
        Ok(s)
    }
}

/// V_R and U_R of a configuration.
#[derive(Debug, Clone)]
pub struct VoronoiPotentials {
    config: PointConfig,
    two_s: f64,
    pub u_r: f64,
}

impl VoronoiPotentials {
    /// V_R(y) = Σ_k |y − R_k|^{−2s} − δ_R(y)^{−2s}; bounded near each R_k.
    pub fn v(&self, y: &[f64]) -> f64 {
        let mut best = f64::INFINITY;
        let mut best_k = 0;
        for (k, p) in self.config.points().enumerate() {
            let r2 = dist2(p, y);
            if r2 < best {
                best = r2;
                best_k = k;
            }
        }
        let e = -0.5 * self.two_s;
        self.config
            .points()
            .enumerate()
            .filter(|&(k, _)| k != best_k)
            .map(|(_, p)| dist2(p, y).powf(e))
            .sum()
    }

    pub fn config(&self) -> &PointConfig {
        &self.config
    }
}

pub fn voronoi_potentials(r: &PointConfig, p: &Params) -> Result<VoronoiPotentials> {
    if r.len() < 2 {
        return Err(Error::input("Voronoi potentials need K ≥ 2"));
    }
    r.require_distinct()?;
    let two_s = p.lambda();
    let deltas = r.all_delta_k()?;
    let u_r = r.pair_sum(two_s)? + deltas.iter().map(|dk| dk.powf(-two_s)).sum::<f64>();
    Ok(VoronoiPotentials { config: r.clone(), two_s, u_r })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deltas() {
        let r = PointConfig::new(3, vec![0.0; 3]).unwrap();
        assert_eq!(r.delta(&[1.0, 0.0, 0.0]), 1.0);
        let r = PointConfig::new(3, vec![0.0, 0.0, 0.0, 3.0, 0.0, 0.0]).unwrap();
        assert_eq!(r.delta(&[1.0, 0.0, 0.0]), 1.0);
        let x = PointConfig::new(3, vec![0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 5.0, 0.0, 0.0]).unwrap();
        assert_eq!(x.delta_k(1).unwrap(), 1.0);
        assert!(PointConfig::new(3, vec![0.0; 3]).unwrap().delta_k(0).is_err());
    }

    #[test]
    fn voronoi_examples() {
        let p = Params::new(3, 0.5, false).unwrap();
        let r = PointConfig::new(3, vec![0.0, 0.0, 0.0, 1.0, 0.0, 0.0]).unwrap();
        let vp = voronoi_potentials(&r, &p).unwrap();
        assert!((vp.u_r - 3.0).abs() < 1e-15);
        assert!((vp.v(&[0.5, 0.0, 0.0]) - 2.0).abs() < 1e-15);
        let coincident = PointConfig::new(3, vec![1.0, 0.0, 0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(voronoi_potentials(&coincident, &p).is_err());
    }
}
