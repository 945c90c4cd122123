//! Fractional kinetic energy ∥(−Δ)^{s/2} f∥² = (2π)^{−d} ∫ |ξ|^{2s} |f̂(ξ)|² dξ.
//!
//! Radial profiles are read as piecewise linear in r² through the node values and
//! vanish at the outer edge, so f = Σ_j b_j (t_j² − r²)_+. Each term has a
//! Bessel-function transform and the k-integral of a product of two of them is a
//! Weber–Schafheitlin integral, which leaves a dense quadratic form in b.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fft::fftn;
use crate::params::{sphere_area, Params};
use crate::quad::tanh_sinh;
use crate::riesz::{Density, Layout};
use crate::special::ln_gamma;

/// ₂F₁(d/2 + s, s − 1; d/2 + 2; z) on [0, 1] by its Euler integral.
fn hyp(d: f64, s: f64, z: f64) -> f64 {
    if s == 1.0 {
        return 1.0;
    }
    let a = 0.5 * d + s;
    let c = 0.5 * d + 2.0;
    let e = 1.0 - s;
    if z <= 0.6 {
        let b = s - 1.0;
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 0..120 {
            let kf = k as f64;
            term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
            sum += term;
            if term.abs() < 1e-17 * sum.abs() {
                break;
            }
        }
        return sum;
    }
    let pre = (ln_gamma(c) - ln_gamma(a) - ln_gamma(c - a)).exp();
    let omz = 1.0 - z;
    pre * tanh_sinh(
        |t, dl, dr| dl.powf(a - 1.0) * dr.powf(e) * (dr + t * omz).powf(e),
        0.0,
        1.0,
        1e-12,
    )
    .value
}

/// ∫_0^∞ k^{2s−3} J_ν(ak) J_ν(bk) dk with ν = d/2 + 1 and 0 < a ≤ b.
fn weber(d: f64, s: f64, a: f64, b: f64) -> f64 {
    let nu = 0.5 * d + 1.0;
    let lam = 3.0 - 2.0 * s;
    let ln_pre = ln_gamma(0.5 * d + s) - lam * 2f64.ln() - ln_gamma(2.0 - s) - ln_gamma(nu + 1.0);
    let z = (a / b) * (a / b);
    (ln_pre + nu * a.ln() - (nu - lam + 1.0) * b.ln()).exp() * hyp(d, s, z)
}

#[derive(Debug, Clone)]
pub struct RadialKinetic {
    pub d: usize,
    pub s: f64,
    nodes: Vec<f64>,
    /// t_1..t_n, the last being the outer edge where f = 0.
    knots: Vec<f64>,
    /// Dense form A with T = bᵀ A b over knots.
    form: Vec<f64>,
}

impl RadialKinetic {
    pub fn new(d: usize, s: f64, edges: &[f64]) -> Result<Self> {
        if !(s > 0.0 && s <= 1.0) {
            return Err(Error::params(format!("kinetic order s = {s} outside (0, 1]")));
        }
        if edges.len() < 3 {
            return Err(Error::input("radial kinetic energy needs at least two cells"));
        }
        let nodes: Vec<f64> = edges
            .windows(2)
            .map(|w| if w[0] == 0.0 { 0.0 } else { (0.5 * (w[0] * w[0] + w[1] * w[1])).sqrt() })
            .collect();
        if nodes[0] != 0.0 {
            return Err(Error::input("radial kinetic energy needs a ball as the first cell"));
        }
        let mut knots: Vec<f64> = nodes[1..].to_vec();
        knots.push(*edges.last().unwrap());
        let n = knots.len();
        let df = d as f64;
        let nu = 0.5 * df + 1.0;
        let scale = 4.0 * sphere_area(d);
        let rows: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let (a, b) = if knots[i] <= knots[j] { (knots[i], knots[j]) } else { (knots[j], knots[i]) };
                        scale * (knots[i] * knots[j]).powf(nu) * weber(df, s, a, b)
                    })
                    .collect()
            })
            .collect();
        Ok(RadialKinetic { d, s, nodes, knots, form: rows.concat() })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// b = B f: coefficients of (t_j² − r²)_+.
    fn coefficients(&self, f: &[f64]) -> Vec<f64> {
        let n = self.knots.len();
        // slopes a_j on [t_{j−1}², t_j²], j = 1..n, with f(t_n) = 0
        let mut slope = vec![0.0; n + 1];
        let mut prev_t2 = 0.0;
        for j in 0..n {
            let t2 = self.knots[j] * self.knots[j];
            let fj = if j + 1 < f.len() { f[j + 1] } else { 0.0 };
            slope[j] = (fj - f[j]) / (t2 - prev_t2);
            prev_t2 = t2;
        }
        (0..n).map(|j| slope[j + 1] - slope[j]).collect()
    }

    /// Bᵀ y.
    fn coefficients_adjoint(&self, y: &[f64]) -> Vec<f64> {
        let n = self.knots.len();
        let mut g = vec![0.0; n];
        let mut prev_t2 = 0.0;
        for j in 0..n {
            // ∂T/∂slope_j = y_{j−1} − y_j; slope_n is pinned at 0
            let up = if j >= 1 { y[j - 1] } else { 0.0 };
            let t2 = self.knots[j] * self.knots[j];
            let w = (up - y[j]) / (t2 - prev_t2);
            g[j] -= w;
            if j + 1 < n {
                g[j + 1] += w;
            }
            prev_t2 = t2;
        }
        g
    }

    fn form_apply(&self, b: &[f64]) -> Vec<f64> {
        let n = b.len();
        self.form.par_chunks(n).map(|row| row.iter().zip(b).map(|(a, x)| a * x).sum()).collect()
    }

    /// Energy of the profile with node values f (one per cell).
    pub fn energy(&self, f: &[f64]) -> f64 {
        let b = self.coefficients(f);
        let ab = self.form_apply(&b);
        b.iter().zip(&ab).map(|(x, y)| x * y).sum::<f64>().max(0.0)
    }

    /// Diagonal of the quadratic form in node values, H_ii = (B e_i)ᵀ A (B e_i).
    pub fn diagonal(&self) -> Vec<f64> {
        let n = self.knots.len();
        (0..n)
            .map(|i| {
                let mut e = vec![0.0; n];
                e[i] = 1.0;
                // B e_i is supported on i−2..=i
                let b = self.coefficients(&e);
                let lo = i.saturating_sub(2);
                let hi = i;
                let mut h = 0.0;
                for j in lo..=hi {
                    for k in lo..=hi {
                        h += b[j] * self.form[j * n + k] * b[k];
                    }
                }
                h
            })
            .collect()
    }

    /// Energy and its gradient with respect to the node values.
    pub fn energy_grad(&self, f: &[f64]) -> (f64, Vec<f64>) {
        let b = self.coefficients(f);
        let ab = self.form_apply(&b);
        let e = b.iter().zip(&ab).map(|(x, y)| x * y).sum::<f64>();
        let g = self.coefficients_adjoint(&ab).iter().map(|x| 2.0 * x).collect();
        (e.max(0.0), g)
    }
}

/// DFT evaluation on a uniform grid with ≥ 2× zero padding.
pub fn cartesian_kinetic(s: f64, h: f64, shape: &[usize], values: &[f64]) -> Result<f64> {
    let d = shape.len();
    let padded: Vec<usize> = shape.iter().map(|&n| crate::fft::good_size(2 * n)).collect();
    let total: usize = padded.iter().product();
    let mut buf = vec![Complex64::new(0.0, 0.0); total];
    for (idx, v) in values.iter().enumerate() {
        let mut rest = idx;
        let mut p = 0;
        for k in 0..d {
            let stride_s: usize = shape[k + 1..].iter().product();
            let stride_p: usize = padded[k + 1..].iter().product();
            p += (rest / stride_s) * stride_p;
            rest %= stride_s;
        }
        buf[p] = Complex64::new(*v, 0.0);
    }
    fftn(&mut buf, &padded, false);
    let mut sum = 0.0;
    for (idx, c) in buf.iter().enumerate() {
        let mut rest = idx;
        let mut k2 = 0.0;
        for k in 0..d {
            let stride: usize = padded[k + 1..].iter().product();
            let m = (rest / stride) as i64;
            rest %= stride;
            let n = padded[k] as i64;
            let m = if 2 * m > n { m - n } else { m };
            let kk = 2.0 * std::f64::consts::PI * m as f64 / (n as f64 * h);
            k2 += kk * kk;
        }
        if k2 > 0.0 {
            sum += k2.powf(s) * c.norm_sqr();
        }
    }
    Ok(sum * h.powi(d as i32) / total as f64)
}

/// ∥(−Δ)^{s/2} f∥² for a gridded f (radial values are node samples).
pub fn fractional_kinetic(f: &Density, p: &Params) -> Result<f64> {
    if f.values.iter().any(|v| !v.is_finite()) {
        return Err(Error::input("non-finite values in kinetic-energy input"));
    }
    if f.d != p.d() {
        return Err(Error::input("grid and parameter dimensions differ"));
    }
    if f.values.iter().all(|v| *v == 0.0) {
        return Ok(0.0);
    }
    match &f.layout {
        Layout::Radial { edges } => Ok(RadialKinetic::new(f.d, p.s(), edges)?.energy(&f.values)),
        Layout::Cartesian { h, shape, .. } => cartesian_kinetic(p.s(), *h, shape, &f.values),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::riesz::log_edges;
    use crate::special::bessel_j;

    fn gaussian_nodes(op: &RadialKinetic, d: usize) -> Vec<f64> {
        let c = std::f64::consts::PI.powf(-0.25 * d as f64);
        op.nodes().iter().map(|r| c * (-0.5 * r * r).exp()).collect()
    }

    #[test]
    fn gaussian_gradient_energy() {
        // ∫|∇g|² = d/2 for the L²-normalized standard Gaussian
        for d in [1usize, 2, 3] {
            let op = RadialKinetic::new(d, 1.0, &log_edges(400, 1e-3, 12.0)).unwrap();
            let e = op.energy(&gaussian_nodes(&op, d));
            assert!((e - 0.5 * d as f64).abs() < 2e-3, "d={d}: {e}");
        }
    }

    #[test]
    fn gaussian_fractional_energy() {
        // ∫|ξ|^{2s}|ĝ|²/(2π)^d = Γ(d/2 + s)/Γ(d/2)
        for &(d, s) in &[(3usize, 0.5), (2, 0.3), (1, 0.25)] {
            let op = RadialKinetic::new(d, s, &log_edges(300, 1e-3, 12.0)).unwrap();
            let e = op.energy(&gaussian_nodes(&op, d));
            let want = (ln_gamma(0.5 * d as f64 + s) - ln_gamma(0.5 * d as f64)).exp();
            assert!(((e - want) / want).abs() < 2e-3, "d={d} s={s}: {e} {want}");
        }
    }

    fn hyp_by_quadrature(d: f64, s: f64, z: f64) -> f64 {
        let (a, c, e) = (0.5 * d + s, 0.5 * d + 2.0, 1.0 - s);
        let pre = (ln_gamma(c) - ln_gamma(a) - ln_gamma(c - a)).exp();
        pre * tanh_sinh(|t, dl, dr| dl.powf(a - 1.0) * dr.powf(e) * (1.0 - z * t).powf(e), 0.0, 1.0, 1e-13).value
    }

    #[test]
    fn hypergeometric_matches_series() {
        let (d, s, z) = (3.0, 0.5, 0.75);
        let (a, b, c) = (0.5 * d + s, s - 1.0, 0.5 * d + 2.0);
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 0..2000 {
            let kf = k as f64;
            term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
            sum += term;
        }
        assert!((hyp(d, s, z) - sum).abs() < 1e-11);
        assert!((hyp(d, s, 0.3) - hyp_by_quadrature(d, s, 0.3)).abs() < 1e-12);
    }

    #[test]
    fn weber_against_direct_quadrature() {
        // small oscillation count makes the direct k-integral tractable
        let (d, s, a, b) = (3.0, 0.5, 0.7, 1.0);
        let nu = 0.5 * d + 1.0;
        let f = |k: f64| k.powf(2.0 * s - 3.0) * bessel_j(nu, a * k).unwrap() * bessel_j(nu, b * k).unwrap();
        let direct = crate::quad::composite_gl(f, 0.0, 400.0, 4000, 16);
        // tail ∫_400^∞ ≈ oscillatory with k^{2s−4} envelope, below 1e−7
        let w = weber(d, s, a, b);
        assert!((w - direct).abs() < 1e-6, "{w} {direct}");
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let op = RadialKinetic::new(3, 0.6, &log_edges(12, 0.05, 4.0)).unwrap();
        let f: Vec<f64> = op.nodes().iter().map(|r| (-(r * r)).exp() * (1.0 + 0.3 * r)).collect();
        let (_, g) = op.energy_grad(&f);
        for i in 0..f.len() {
            let h = 1e-6;
            let mut fp = f.clone();
            fp[i] += h;
            let mut fm = f.clone();
            fm[i] -= h;
            let fd = (op.energy(&fp) - op.energy(&fm)) / (2.0 * h);
            assert!((fd - g[i]).abs() < 1e-6 * (1.0 + g[i].abs()), "{i}: {fd} {}", g[i]);
        }
    }

    #[test]
    fn cartesian_gaussian() {
        let n = 48;
        let h = 12.0 / n as f64;
        let d = 3;
        let f = Density::cartesian_from_fn(vec![-6.0; 3], h, vec![n; 3], |x| {
            std::f64::consts::PI.powf(-0.75) * (-0.5 * x.iter().map(|v| v * v).sum::<f64>()).exp()
        })
        .unwrap();
        let p = Params::new(d, 1.0, false).unwrap();
        let e = fractional_kinetic(&f, &p).unwrap();
        assert!((e - 1.5).abs() < 1e-2, "{e}");
    }
}
