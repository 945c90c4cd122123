//! Mollified plane-wave Slater determinants in a box Q_L = (−L/2, L/2)^d.
//!
//! Orbitals φ_p = L^{−d/2} √η e^{ip·x} with η = 1_{Q_L} ∗ ζ and ζ the tensor
//! product of the normalized cos² bump ζ₁(x) = (2/ℓ) cos²(πx/ℓ) on |x| < ℓ/2.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{c_tf, Params};
use crate::quad::{gl, tanh_sinh};
use crate::riesz::Density;

/// The one-dimensional factor of 1_{Q_L} ∗ ζ and its pieces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mollifier {
    pub l: f64,
    pub ell: f64,
    /// ∫ζ₁; must be 1 for orthonormal orbitals.
    pub mass: f64,
}

impl Mollifier {
    pub fn zeta(&self, x: f64) -> f64 {
        if x.abs() >= 0.5 * self.ell {
            0.0
        } else {
            self.mass * 2.0 / self.ell * (PI * x / self.ell).cos().powi(2)
        }
    }

    /// ∫_{−ℓ/2}^{−ℓ/2+u} ζ₁, accurate for small u.
    fn cdf_from_left(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        if u >= self.ell {
            return self.mass;
        }
        let th = 2.0 * PI * u / self.ell;
        let core = if th < 0.1 {
            // θ − sin θ by its series
            let t2 = th * th;
            th * t2 / 6.0 * (1.0 - t2 / 20.0 * (1.0 - t2 / 42.0 * (1.0 - t2 / 72.0)))
        } else {
            th - th.sin()
        };
        self.mass * core / (2.0 * PI)
    }

    /// η₁(t) = Z(t + L/2) − Z(t − L/2).
    pub fn eta1(&self, t: f64) -> f64 {
        let h = 0.5 * self.ell;
        let a = t.abs();
        let inner = 0.5 * self.l - h;
        if a <= inner {
            return self.mass;
        }
        // distance from the outer end of the edge layer
        self.cdf_from_left(0.5 * self.l + h - a)
    }

    pub fn support(&self) -> f64 {
        0.5 * (self.l + self.ell)
    }

    /// ∫((√η₁)')² = ½ ∫ ζ₁²/Z over one edge layer.
    pub fn edge_energy(&self) -> f64 {
        let ell = self.ell;
        let v = tanh_sinh(
            |_, u, _| {
                let z = self.cdf_from_left(u);
                let zeta = self.zeta(u - 0.5 * ell);
                if z > 0.0 {
                    zeta * zeta / z
                } else {
                    0.0
                }
            },
            0.0,
            ell,
            1e-12,
        );
        0.5 * v.value
    }

    /// ∫ η₁^q.
    pub fn eta1_pow_integral(&self, q: f64) -> f64 {
        let ell = self.ell;
        let edge = tanh_sinh(|_, u, _| self.cdf_from_left(u).powf(q), 0.0, ell, 1e-13).value;
        self.mass.powf(q) * (self.l - ell) + 2.0 * edge
    }

    /// ∫ η₁(t) e^{ikt} dt by piecewise Gauss–Legendre.
    pub fn eta1_fourier(&self, k: f64) -> Complex64 {
        let s = self.support();
        let inner = 0.5 * self.l - 0.5 * self.ell;
        let rule = gl(16);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut piece = |a: f64, b: f64, panels: usize| {
            let h = (b - a) / panels as f64;
            for i in 0..panels {
                let lo = a + i as f64 * h;
                for (t, w) in rule.mapped(lo, lo + h) {
                    acc += w * self.eta1(t) * Complex64::from_polar(1.0, k * t);
                }
            }
        };
        let cycles = (k.abs() * self.l / (2.0 * PI)).ceil() as usize;
        let edge_panels = 4 + (k.abs() * self.ell / PI).ceil() as usize;
        piece(-s, -inner, edge_panels);
        piece(-inner, inner, 8 + 2 * cycles);
        piece(inner, s, edge_panels);
        acc
    }

    /// (η₁ ⋆ η₁)(z) = ∫ η₁(x) η₁(x + z) dx.
    pub fn eta1_autocorrelation(&self, z: f64) -> f64 {
        self.autocorrelation(z, false)
    }

    /// ∫ f(x) f(x + z) dx for f = η₁, or f = √η₁ when `root` is set.
    pub fn autocorrelation(&self, z: f64, root: bool) -> f64 {
        let s = self.support();
        let z = z.abs();
        if z >= 2.0 * s {
            return 0.0;
        }
        let inner = 0.5 * self.l - 0.5 * self.ell;
        let mut bps = vec![-s, -inner, inner, s, -s - z, -inner - z, inner - z, s - z];
        bps.retain(|b| *b >= -s && *b <= s - z);
        bps.push(-s);
        bps.push(s - z);
        bps.sort_by(|a, b| a.partial_cmp(b).unwrap());
        bps.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
        let rule = gl(16);
        let f = |x: f64| if root { self.eta1(x).sqrt() } else { self.eta1(x) };
        bps.windows(2).map(|w| rule.integrate(|x| f(x) * f(x + z), w[0], w[1])).sum()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SlaterState {
    pub d: usize,
    pub l: f64,
    /// Fermi level: squared-momentum cutoff.
    pub fermi_mu: f64,
    /// Integer lattice indices m with p = 2πm/L, ordered by (|m|², m).
    pub momenta: Vec<Vec<i64>>,
    pub mollifier: Mollifier,
}

fn lattice_ball(d: usize, radius2: f64) -> Vec<Vec<i64>> {
    let r = radius2.max(0.0).sqrt().floor() as i64;
    let mut out = Vec::new();
    let mut m = vec![-r; d];
    loop {
        let n2: i64 = m.iter().map(|x| x * x).sum();
        if (n2 as f64) <= radius2 * (1.0 + 1e-12) {
            out.push(m.clone());
        }
        let mut k = 0;
        loop {
            if k == d {
                out.sort_by(|a, b| {
                    let na: i64 = a.iter().map(|x| x * x).sum();
                    let nb: i64 = b.iter().map(|x| x * x).sum();
                    na.cmp(&nb).then_with(|| a.cmp(b))
                });
                return out;
            }
            m[k] += 1;
            if m[k] <= r {
                break;
            }
            m[k] = -r;
            k += 1;
        }
    }
}

/// JSON configuration {d, L, mu, ell_ratio, N?}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlaterConfig {
    pub d: usize,
    #[serde(rename = "L")]
    pub l: f64,
    pub mu: f64,
    #[serde(default = "default_ell_ratio")]
    pub ell_ratio: f64,
    #[serde(rename = "N", default)]
    pub n: Option<usize>,
}

fn default_ell_ratio() -> f64 {
    DEFAULT_ELL_RATIO
}

pub const DEFAULT_ELL_RATIO: f64 = 1.0 / 32.0;

impl SlaterState {
    /// All p with |p|² < μ, plus shell momenta |p|² = μ in (|p|², p) order until
    /// `n_target` is reached; the whole closed ball when no target is given.
    pub fn new(d: usize, l: f64, fermi_mu: f64, ell: f64, n_target: Option<usize>) -> Result<Self> {
        if d == 0 || !(l > 0.0) || !(fermi_mu > 0.0) {
            return Err(Error::input("Slater state needs d ≥ 1, L > 0 and μ > 0"));
        }
        if !(ell > 0.0 && ell <= l / 16.0) {
            return Err(Error::input("mollifier side must satisfy 0 < ℓ ≤ L/16"));
        }
        let radius2 = fermi_mu * (l / (2.0 * PI)).powi(2);
        let closed = lattice_ball(d, radius2);
        let strict = closed
            .iter()
            .filter(|m| (m.iter().map(|x| x * x).sum::<i64>() as f64) < radius2 * (1.0 - 1e-12))
            .count();
        let n = match n_target {
            None => closed.len(),
            Some(n) if n >= strict.max(1) && n <= closed.len() => n,
            Some(n) => {
                return Err(Error::input(format!(
                    "N = {n} incompatible with the Fermi ball: need {} ≤ N ≤ {}",
                    strict.max(1),
                    closed.len()
                )))
            }
        };
        let momenta = closed[..n].to_vec();
        Ok(SlaterState { d, l, fermi_mu, momenta, mollifier: Mollifier { l, ell, mass: 1.0 } })
    }

    /// The N lowest lattice momenta in (|p|², p) order with μ set to the largest |p|².
    pub fn with_count(d: usize, n: usize, l: f64, ell_ratio: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("N must be positive"));
        }
        let mut r2 = (n as f64 / crate::params::unit_ball_volume(d)).powf(2.0 / d as f64) + 4.0;
        let mut pts = lattice_ball(d, r2);
        while pts.len() < n {
            r2 *= 1.5;
            pts = lattice_ball(d, r2);
        }
        let last: i64 = pts[n - 1].iter().map(|x| x * x).sum();
        let mu = (last.max(1) as f64) * (2.0 * PI / l).powi(2);
        let mu = if last == 0 { 0.5 * (2.0 * PI / l).powi(2) } else { mu };
        SlaterState::new(d, l, mu, ell_ratio * l, Some(n))
    }

    pub fn from_config(c: &SlaterConfig) -> Result<Self> {
        SlaterState::new(c.d, c.l, c.mu, c.ell_ratio * c.l, c.n)
    }

    pub fn n(&self) -> usize {
        self.momenta.len()
    }

    pub fn ell(&self) -> f64 {
        self.mollifier.ell
    }

    pub fn momentum(&self, i: usize) -> Vec<f64> {
        let f = 2.0 * PI / self.l;
        self.momenta[i].iter().map(|m| f * *m as f64).collect()
    }

    pub fn momentum_sq(&self, i: usize) -> f64 {
        let f = 2.0 * PI / self.l;
        f * f * self.momenta[i].iter().map(|m| (m * m) as f64).sum::<f64>()
    }

    pub fn eta(&self, x: &[f64]) -> f64 {
        x.iter().map(|t| self.mollifier.eta1(*t)).product()
    }

    pub fn orbital(&self, i: usize, x: &[f64]) -> Complex64 {
        let phase: f64 = self.momentum(i).iter().zip(x).map(|(p, t)| p * t).sum();
        let amp = self.l.powf(-0.5 * self.d as f64) * self.eta(x).sqrt();
        Complex64::from_polar(amp, phase)
    }

    pub fn rho(&self, x: &[f64]) -> f64 {
        self.n() as f64 * self.l.powi(-(self.d as i32)) * self.eta(x)
    }

    /// S(r) = Σ_p e^{ip·r}.
    pub fn phase_sum(&self, r: &[f64]) -> Complex64 {
        (0..self.n())
            .map(|i| Complex64::from_polar(1.0, self.momentum(i).iter().zip(r).map(|(p, t)| p * t).sum()))
            .sum()
    }

    /// γ_u(x, x').
    pub fn gamma(&self, x: &[f64], xp: &[f64]) -> Complex64 {
        let r: Vec<f64> = x.iter().zip(xp).map(|(a, b)| a - b).collect();
        self.phase_sum(&r) * self.l.powi(-(self.d as i32)) * (self.eta(x) * self.eta(xp)).sqrt()
    }

    /// ⟨φ_p, φ_p'⟩ by one-dimensional quadrature per axis.
    pub fn orbital_overlap(&self, i: usize, j: usize) -> Complex64 {
        let f = 2.0 * PI / self.l;
        let mut out = Complex64::new(1.0, 0.0);
        for k in 0..self.d {
            let dm = (self.momenta[j][k] - self.momenta[i][k]) as f64;
            out *= self.mollifier.eta1_fourier(f * dm) / self.l;
        }
        out
    }

    /// max |G − I| over the orbital Gram matrix.
    pub fn gram_deviation(&self) -> f64 {
        let mmax = self.momenta.iter().flat_map(|m| m.iter().map(|x| x.abs())).max().unwrap_or(0);
        let f = 2.0 * PI / self.l;
        let table: Vec<Complex64> =
            (-2 * mmax..=2 * mmax).map(|dm| self.mollifier.eta1_fourier(f * dm as f64) / self.l).collect();
        let off = 2 * mmax;
        let n = self.n();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                let mut g = Complex64::new(1.0, 0.0);
                for k in 0..self.d {
                    g *= table[(self.momenta[j][k] - self.momenta[i][k] + off) as usize];
                }
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - target).norm());
            }
        }
        worst
    }

    /// ρ_u as exact cell averages on a Cartesian grid covering the support.
    pub fn density(&self, cells_per_axis: usize) -> Result<Density> {
        let s = self.mollifier.support();
        let h = 2.0 * s / cells_per_axis as f64;
        let inner = 0.5 * (self.l - self.ell());
        let rule = gl(12);
        let avg: Vec<f64> = (0..cells_per_axis)
            .map(|i| {
                let a = -s + i as f64 * h;
                let b = a + h;
                let mut cuts = vec![a, b];
                cuts.extend([-inner, inner].iter().filter(|c| **c > a && **c < b));
                cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
                cuts.windows(2).map(|w| rule.integrate(|t| self.mollifier.eta1(t), w[0], w[1])).sum::<f64>() / h
            })
            .collect();
        let d = self.d;
        let total = cells_per_axis.pow(d as u32);
        let scale = self.n() as f64 * self.l.powi(-(d as i32));
        let values = (0..total)
            .map(|mut idx| {
                let mut v = scale;
                for _ in 0..d {
                    v *= avg[idx % cells_per_axis];
                    idx /= cells_per_axis;
                }
                v
            })
            .collect();
        Density::cartesian(vec![-s; d], h, vec![cells_per_axis; d], values)
    }

    /// ∫ρ_u^q in product form.
    pub fn rho_pow_integral(&self, q: f64) -> f64 {
        let d = self.d as i32;
        (self.n() as f64 * self.l.powi(-d)).powf(q) * self.mollifier.eta1_pow_integral(q).powi(d)
    }

    /// Σ_p |p|² and |Σ_p p|².
    pub fn momentum_moments(&self) -> (f64, f64) {
        let sum_sq: f64 = (0..self.n()).map(|i| self.momentum_sq(i)).sum();
        let mut total = vec![0.0; self.d];
        for i in 0..self.n() {
            for (t, p) in total.iter_mut().zip(self.momentum(i)) {
                *t += p;
            }
        }
        (sum_sq, total.iter().map(|x| x * x).sum())
    }
}

/// Σ_p ∥(−Δ)^{s/2} φ_p∥².
pub fn slater_kinetic(state: &SlaterState, p: &Params) -> Result<f64> {
    if p.d() != state.d {
        return Err(Error::input("state and parameter dimensions differ"));
    }
    let s = p.s();
    let n = state.n() as f64;
    if s == 1.0 {
        let (sum_sq, _) = state.momentum_moments();
        let edge = state.mollifier.edge_energy() / state.mollifier.mass;
        return Ok(sum_sq + n * state.d as f64 * edge / state.l);
    }
    crate::manybody::fractional::fractional_slater_kinetic(state, s)
}

/// Lieb–Thirring ratio kinetic / (c_tf ∫ρ_u^{1+2s/d}).
pub fn lieb_thirring_ratio(state: &SlaterState, p: &Params) -> Result<f64> {
    Ok(slater_kinetic(state, p)? / (c_tf(p) * state.rho_pow_integral(p.q())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn momentum_set_examples() {
        let l = 2.0 * PI;
        let st = SlaterState::new(2, l, 0.5, l / 32.0, None).unwrap();
        assert_eq!(st.n(), 1);
        let st = SlaterState::new(2, l, 1.5, l / 32.0, None).unwrap();
        assert_eq!(st.n(), 5);
        assert_eq!(st.momenta, vec![vec![0, 0], vec![-1, 0], vec![0, -1], vec![0, 1], vec![1, 0]]);
        // shell |m|² = 1 admits partial filling
        let st = SlaterState::new(2, l, 1.0, l / 32.0, Some(3)).unwrap();
        assert_eq!(st.momenta, vec![vec![0, 0], vec![-1, 0], vec![0, -1]]);
        assert!(SlaterState::new(2, l, 1.5, l / 32.0, Some(4)).is_err());
    }

    #[test]
    fn weyl_count() {
        let l = 10.0;
        let mu = 400.0;
        let st = SlaterState::new(2, l, mu, l / 32.0, None).unwrap();
        let weyl = mu * l * l / (4.0 * PI);
        assert!((st.n() as f64 / weyl - 1.0).abs() < 0.03);
    }

    #[test]
    fn mollifier_profile() {
        let m = Mollifier { l: 1.0, ell: 1.0 / 32.0, mass: 1.0 };
        let total = crate::quad::composite_gl(|x| m.zeta(x), -m.ell / 2.0, m.ell / 2.0, 4, 16);
        assert!((total - 1.0).abs() < 1e-14);
        assert_eq!(m.eta1(0.0), 1.0);
        assert!((m.eta1(0.5) - 0.5).abs() < 1e-14);
        assert!(m.eta1(0.6).abs() < 1e-300);
        assert!((m.eta1_pow_integral(1.0) - 1.0).abs() < 1e-12);
        assert!((m.eta1_autocorrelation(0.3) - 0.7).abs() < 1e-12);
    }

    #[test]
    fn gram_is_identity() {
        let st = SlaterState::with_count(2, 30, 3.0, DEFAULT_ELL_RATIO).unwrap();
        assert!(st.gram_deviation() < 1e-8);
        let bad = SlaterState { mollifier: Mollifier { mass: 1.1, ..st.mollifier }, ..st.clone() };
        let diag = bad.orbital_overlap(0, 0).re;
        assert!((diag - 1.21).abs() < 1e-9, "{diag}");
        assert!(bad.orbital_overlap(0, 1).norm() < 1e-8);
    }

    #[test]
    fn density_and_diagonal() {
        let st = SlaterState::with_count(2, 12, 2.0, DEFAULT_ELL_RATIO).unwrap();
        let rho = st.density(128).unwrap();
        assert!((rho.mass() - 12.0).abs() < 1e-10);
        for x in [[0.1, -0.3], [0.99, 0.2], [-1.0, 1.0]] {
            assert!((st.gamma(&x, &x).re - st.rho(&x)).abs() < 1e-12);
        }
    }

    #[test]
    fn kinetic_scales_with_box() {
        let p = Params::new(2, 1.0, true).unwrap();
        // the edge layer costs O(1/N) relative to μ²L² when ℓ/L is fixed
        let a = SlaterState::new(2, 10.0, 240.0, 10.0 / 32.0, None).unwrap();
        let b = SlaterState::new(2, 20.0, 240.0, 20.0 / 32.0, None).unwrap();
        let ratio = slater_kinetic(&b, &p).unwrap() / slater_kinetic(&a, &p).unwrap();
        assert!((ratio / 4.0 - 1.0).abs() < 0.03, "{ratio}");
    }
}
