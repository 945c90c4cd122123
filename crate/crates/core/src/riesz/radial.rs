//! Exact angular reduction of D_λ for radial densities.
//!
//! For |x| = r, |x'| = r' the angular average of |x − x'|^{−λ} is
//! m^{−λ} ψ(n/m) with m = max(r, r'), n = min(r, r') and
//! ψ(x) = ∫_{S^{d−1}} |e₁ − xω|^{−λ} dω, so a piecewise-constant density needs only
//! the cell-pair integrals of |S^{d−1}| r^{d−1} r'^{d−1} m^{−λ} ψ(n/m).

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::params::sphere_area;
use crate::quad::{gl, tanh_sinh};

#[derive(Debug, Clone, Copy)]
pub struct Psi {
    d: usize,
    lambda: f64,
    // |S^{d−2}| 2^{d−2} for the numeric path
    pref: f64,
    area: f64,
}

impl Psi {
    pub fn new(d: usize, lambda: f64) -> Self {
        let pref = if d >= 2 { sphere_area(d - 1) * 2f64.powi(d as i32 - 2) } else { 0.0 };
        Psi { d, lambda, pref, area: sphere_area(d) }
    }

    /// ψ(x) for 0 ≤ x ≤ 1, with omx = 1 − x supplied exactly.
    pub fn eval(&self, x: f64, omx: f64) -> f64 {
        let lam = self.lambda;
        match self.d {
            1 => omx.powf(-lam) + (1.0 + x).powf(-lam),
            3 => {
                if (lam - 2.0).abs() < 1e-14 {
                    if x < 1e-4 {
                        let x2 = x * x;
                        4.0 * PI * (1.0 + x2 / 3.0 + x2 * x2 / 5.0)
                    } else {
                        2.0 * PI * (x.ln_1p() - omx.ln()) / x
                    }
                } else {
                    let a = 2.0 - lam;
                    if x < 1e-4 {
                        4.0 * PI * (1.0 + (a - 1.0) * (a - 2.0) * x * x / 6.0)
                    } else {
                        2.0 * PI * ((1.0 + x).powf(a) - omx.powf(a)) / (a * x)
                    }
                }
            }
            _ => self.numeric(x, omx),
        }
    }

    fn numeric(&self, x: f64, omx: f64) -> f64 {
        if x == 0.0 {
            return self.area;
        }
        let d = self.d as i32;
        let half_lam = -0.5 * self.lambda;
        let e = 0.5 * (d as f64 - 3.0);
        let omx2 = omx * omx;
        let near = |v: f64| {
            let v2 = v * v;
            2.0 * v.powi(d - 2) * (1.0 - v2).powf(e) * (omx2 + 4.0 * x * v2).powf(half_lam)
        };
        let far = |w: f64| {
            let w2 = w * w;
            2.0 * w.powi(d - 2) * (1.0 - w2).powf(e) * (omx2 + 4.0 * x * (1.0 - w2)).powf(half_lam)
        };
        let top = std::f64::consts::FRAC_1_SQRT_2;
        let mut sum = gl(20).integrate(far, 0.0, top);
        let scale = (omx / (2.0 * x.sqrt())).max(1e-150);
        if scale >= 0.25 {
            sum += gl(20).integrate(near, 0.0, top);
        } else {
            let rule = gl(16);
            let mut lo = 0.0;
            let mut hi = scale;
            while lo < top {
                let h = hi.min(top);
                sum += rule.integrate(near, lo, h);
                lo = h;
                hi = 2.0 * h;
            }
        }
        self.pref * sum
    }

    /// Angular kernel m^{−λ} ψ(n/m) for radii r, r' with gap = |r − r'| exact.
    pub fn kernel(&self, r: f64, rp: f64, gap: f64) -> f64 {
        let (m, n) = if r >= rp { (r, rp) } else { (rp, r) };
        if m == 0.0 {
            return 0.0;
        }
        m.powf(-self.lambda) * self.eval(n / m, gap / m)
    }
}

/// Cell-pair integral ∫_a^b∫_c^e |S^{d−1}| r^{d−1} r'^{d−1} m^{−λ}ψ(n/m) dr' dr.
/// Cells must be identical or have disjoint interiors.
pub fn cell_pair(psi: &Psi, a: f64, b: f64, c: f64, e: f64) -> f64 {
    let (a, b, c, e) = if a <= c { (a, b, c, e) } else { (c, e, a, b) };
    let dm1 = psi.d as i32 - 1;
    let k = |r: f64, rp: f64, gap: f64| r.powi(dm1) * rp.powi(dm1) * psi.kernel(r, rp, gap);
    let tol = 1e-12;
    let val = if a == c && b == e {
        // 2 ∫_a^b dr ∫_a^r dr' with the singular diagonal at the inner endpoint
        2.0 * tanh_sinh(
            |r, _, _| tanh_sinh(|rp, _, gap| k(r, rp, gap), a, r, tol).value,
            a,
            b,
            tol * 10.0,
        )
        .value
    } else if b == c {
        tanh_sinh(
            |r, _, dr_out| tanh_sinh(|rp, dl_in, _| k(r, rp, dl_in + dr_out), c, e, tol).value,
            a,
            b,
            tol * 10.0,
        )
        .value
    } else {
        let g = c - b;
        let rule = gl(12);
        let mut sum = 0.0;
        for (p0, p1) in graded_panels(a, b, g, true) {
            for (q0, q1) in graded_panels(c, e, g, false) {
                for (r, wr) in rule.mapped(p0, p1) {
                    for (rp, wp) in rule.mapped(q0, q1) {
                        sum += wr * wp * k(r, rp, rp - r);
                    }
                }
            }
        }
        sum
    };
    psi.area * val
}

/// Panels of [lo, hi] graded toward the end facing a singular point at distance g.
fn graded_panels(lo: f64, hi: f64, g: f64, toward_hi: bool) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let len = hi - lo;
    let mut done = 0.0;
    let mut w = g;
    while done < len {
        let step = w.min(len - done);
        if len - done - step < 0.25 * w {
            out.push((done, len));
            break;
        }
        out.push((done, done + step));
        done += step;
        w *= 2.0;
    }
    out.into_iter()
        .map(|(s0, s1)| if toward_hi { (hi - s1, hi - s0) } else { (lo + s0, lo + s1) })
        .collect()
}

/// Dense operator W with D_λ[ρ] = ρᵀWρ for piecewise-constant radial densities.
#[derive(Debug, Clone)]
pub struct RadialRiesz {
    pub d: usize,
    pub lambda: f64,
    pub edges: Vec<f64>,
    n: usize,
    w: Vec<f64>,
}

fn geometric_ratio(edges: &[f64]) -> Option<f64> {
    if edges.len() < 4 || edges[0] != 0.0 {
        return None;
    }
    let q = edges[2] / edges[1];
    let ok = edges[1..].windows(2).all(|w| ((w[1] / w[0]) - q).abs() <= 1e-9 * q);
    ok.then_some(q)
}

impl RadialRiesz {
    pub fn new(d: usize, lambda: f64, edges: &[f64]) -> Result<Self> {
        if !(lambda > 0.0 && lambda < d as f64) {
            return Err(Error::params(format!("Riesz exponent {lambda} outside (0, {d})")));
        }
        let n = edges.len() - 1;
        let psi = Psi::new(d, lambda);
        let mut w = vec![0.0; n * n];
        if let Some(q) = geometric_ratio(edges) {
            let r1 = edges[1];
            let scale = 2.0 * d as f64 - lambda;
            let ball = cell_pair(&psi, 0.0, 1.0, 0.0, 1.0);
            let ball_shell: Vec<f64> = (1..n)
                .into_par_iter()
                .map(|c| cell_pair(&psi, 0.0, 1.0, q.powi(c as i32 - 1), q.powi(c as i32)))
                .collect();
            let shell: Vec<f64> =
                (0..n - 1).into_par_iter().map(|k| cell_pair(&psi, 1.0, q, q.powi(k as i32), q.powi(k as i32 + 1))).collect();
            let f0 = r1.powf(scale);
            w[0] = 0.5 * f0 * ball;
            for c in 1..n {
                let v = 0.5 * f0 * ball_shell[c - 1];
                w[c] = v;
                w[c * n] = v;
            }
            for c in 1..n {
                let fc = (r1 * q.powi(c as i32 - 1)).powf(scale);
                for k in 0..n - c {
                    let v = 0.5 * fc * shell[k];
                    w[c * n + c + k] = v;
                    w[(c + k) * n + c] = v;
                }
            }
        } else {
            let rows: Vec<Vec<f64>> = (0..n)
                .into_par_iter()
                .map(|i| (i..n).map(|j| 0.5 * cell_pair(&psi, edges[i], edges[i + 1], edges[j], edges[j + 1])).collect())
                .collect();
            for (i, row) in rows.iter().enumerate() {
                for (off, v) in row.iter().enumerate() {
                    let j = i + off;
                    w[i * n + j] = *v;
                    w[j * n + i] = *v;
                }
            }
        }
        if w.iter().any(|v| !v.is_finite()) {
            return Err(Error::numerical("non-finite radial pair integral"));
        }
        Ok(RadialRiesz { d, lambda, edges: edges.to_vec(), n, w })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.w[i * self.n + j]
    }

    /// (Wρ)_i; D = ρ·(Wρ).
    pub fn apply(&self, rho: &[f64]) -> Vec<f64> {
        assert_eq!(rho.len(), self.n);
        self.w.par_chunks(self.n).map(|row| row.iter().zip(rho).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn energy(&self, rho: &[f64]) -> f64 {
        self.apply(rho).iter().zip(rho).map(|(a, b)| a * b).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn psi_angle(d: usize, lambda: f64, x: f64) -> f64 {
        // ∫_0^π (1 + x² − 2x cos θ)^{−λ/2} sin^{d−2}θ dθ · |S^{d−2}|
        let f = |t: f64| (1.0 + x * x - 2.0 * x * t.cos()).powf(-0.5 * lambda) * t.sin().powi(d as i32 - 2);
        crate::quad::composite_gl(f, 0.0, PI, 400, 16) * sphere_area(d - 1)
    }

    #[test]
    fn psi_numeric_matches_angle_integral() {
        for &(d, lam) in &[(2usize, 1.0), (2, 0.5), (4, 1.5), (3, 1.0), (5, 2.5)] {
            let psi = Psi::new(d, lam);
            for &x in &[0.0, 0.2, 0.5, 0.8] {
                let want = psi_angle(d, lam, x);
                let got = psi.numeric(x, 1.0 - x);
                assert!(((got - want) / want).abs() < 1e-10, "d={d} lam={lam} x={x}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn psi_d3_closed_form_matches_numeric() {
        for &lam in &[0.5, 1.0, 2.0, 2.5] {
            let psi = Psi::new(3, lam);
            for &x in &[1e-6, 0.3, 0.9, 0.999999] {
                let a = psi.eval(x, 1.0 - x);
                let b = psi.numeric(x, 1.0 - x);
                assert!(((a - b) / a).abs() < 1e-10, "lam={lam} x={x}: {a} {b}");
            }
        }
    }

    #[test]
    fn psi_d4_lambda2_is_flat() {
        let psi = Psi::new(4, 2.0);
        for &x in &[0.1, 0.5, 0.99, 1.0 - 1e-9] {
            let v = psi.eval(x, 1.0 - x);
            assert!((v / (2.0 * PI * PI) - 1.0).abs() < 1e-10, "x={x} {v}");
        }
    }

    #[test]
    fn uniform_ball_coulomb() {
        // mass-1 uniform ball, d=3, λ=1: D = 3/5
        let rho = 3.0 / (4.0 * PI);
        let op = RadialRiesz::new(3, 1.0, &[0.0, 1.0]).unwrap();
        assert!((op.energy(&[rho]) - 0.6).abs() < 1e-10);
        let edges: Vec<f64> = (0..=7).map(|i| i as f64 / 7.0).collect();
        let op = RadialRiesz::new(3, 1.0, &edges).unwrap();
        assert!((op.energy(&[rho; 7]) - 0.6).abs() < 1e-10);
    }

    #[test]
    fn geometric_and_general_paths_agree() {
        let edges = crate::riesz::density::log_edges(12, 0.05, 3.0);
        let fast = RadialRiesz::new(3, 1.3, &edges).unwrap();
        let mut jittered = edges.clone();
        jittered[5] *= 1.0 + 1e-7;
        let slow = RadialRiesz::new(3, 1.3, &jittered).unwrap();
        let rho: Vec<f64> = (0..12).map(|i| (-(i as f64) * 0.3).exp()).collect();
        let a = fast.energy(&rho);
        let b = slow.energy(&rho);
        assert!(((a - b) / a).abs() < 1e-5, "{a} {b}");
    }
}
