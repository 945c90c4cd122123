//! D_λ on uniform Cartesian grids through a precomputed cell-pair table and FFT
//! convolution.
//!
//! The pair integral between two cells of side h at integer offset m is
//! h^{2d−λ} w(m) with w(m) = ∫_{[−1,1]^d} |z + m|^{−λ} Π(1 − |z_i|) dz.
//! Offsets with |m|_∞ ≤ 1 contain the singularity and use a Duffy split with the
//! radial variable integrated in closed form.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fft::{fftn, good_size};
use crate::quad::gl;

fn orthant_signs(d: usize) -> Vec<Vec<f64>> {
    (0..1usize << d)
        .map(|b| (0..d).map(|i| if b >> i & 1 == 1 { -1.0 } else { 1.0 }).collect())
        .collect()
}

/// Tensor Gauss–Legendre over the orthant cube t ∈ [0,1]^d of |m + σ∘t|^{−λ} Π(1 − t_i).
fn smooth_cube(m: &[f64], sigma: &[f64], lambda: f64, q: usize) -> f64 {
    let d = m.len();
    let rule = gl(q);
    let pts: Vec<(f64, f64)> = rule.mapped(0.0, 1.0).collect();
    let mut idx = vec![0usize; d];
    let mut sum = 0.0;
    loop {
        let mut r2 = 0.0;
        let mut w = 1.0;
        for k in 0..d {
            let (t, wt) = pts[idx[k]];
            let z = m[k] + sigma[k] * t;
            r2 += z * z;
            w *= wt * (1.0 - t);
        }
        sum += w * r2.powf(-0.5 * lambda);
        let mut k = 0;
        loop {
            if k == d {
                return sum;
            }
            idx[k] += 1;
            if idx[k] < q {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// ∫_{[0,1]^d} |t|^{−λ} Π_i w_i(t_i) dt with w_i(y) = y (refl) or 1 − y, singular at 0.
fn duffy_cube(reflected: &[bool], lambda: f64) -> f64 {
    let d = reflected.len();
    let q = 16;
    let rule = gl(q);
    let pts: Vec<(f64, f64)> = rule.mapped(0.0, 1.0).collect();
    let mut total = 0.0;
    for k in 0..d {
        // pyramid t_k = u, t_j = u v_j
        let others: Vec<usize> = (0..d).filter(|&j| j != k).collect();
        let nv = others.len();
        let mut idx = vec![0usize; nv];
        loop {
            let mut c = vec![1.0; d];
            let mut wv = 1.0;
            let mut v2 = 0.0;
            for (slot, &j) in others.iter().enumerate() {
                let (v, w) = pts[idx[slot]];
                c[j] = v;
                wv *= w;
                v2 += v * v;
            }
            // polynomial in u: Π_i (u c_i) or (1 − u c_i)
            let mut poly = vec![1.0];
            for i in 0..d {
                let mut next = vec![0.0; poly.len() + 1];
                for (p, &a) in poly.iter().enumerate() {
                    if reflected[i] {
                        next[p + 1] += a * c[i];
                    } else {
                        next[p] += a;
                        next[p + 1] -= a * c[i];
                    }
                }
                poly = next;
            }
            let radial: f64 =
                poly.iter().enumerate().map(|(p, a)| a / (d as f64 - lambda + p as f64)).sum();
            total += wv * (1.0 + v2).powf(-0.5 * lambda) * radial;
            let mut s = 0;
            loop {
                if s == nv {
                    break;
                }
                idx[s] += 1;
                if idx[s] < q {
                    break;
                }
                idx[s] = 0;
                s += 1;
            }
            if s == nv {
                break;
            }
        }
    }
    total
}

/// w(m) for an integer offset.
pub fn offset_weight(m: &[i64], lambda: f64) -> f64 {
    let d = m.len();
    let mf: Vec<f64> = m.iter().map(|&x| x.abs() as f64).collect();
    let inf = mf.iter().cloned().fold(0.0, f64::max);
    let dist = mf.iter().map(|x| (x - 1.0).max(0.0).powi(2)).sum::<f64>().sqrt();
    let mut sum = 0.0;
    for sigma in orthant_signs(d) {
        if inf <= 1.0 {
            // singular point t* = −σ∘m must lie in {0,1}^d
            let inside = (0..d).all(|i| mf[i] == 0.0 || sigma[i] < 0.0);
            if inside {
                let reflected: Vec<bool> = mf.iter().map(|&x| x == 1.0).collect();
                sum += duffy_cube(&reflected, lambda);
                continue;
            }
            sum += smooth_cube(&mf, &sigma, lambda, 16);
            continue;
        }
        let q = if dist >= 7.0 {
            4
        } else if dist >= 3.0 {
            8
        } else {
            14
        };
        sum += smooth_cube(&mf, &sigma, lambda, q);
    }
    sum
}

#[derive(Debug, Clone)]
pub struct CartesianRiesz {
    pub d: usize,
    pub lambda: f64,
    pub h: f64,
    pub shape: Vec<usize>,
    padded: Vec<usize>,
    kernel_hat: Vec<Complex64>,
}

impl CartesianRiesz {
    pub fn new(lambda: f64, h: f64, shape: &[usize]) -> Result<Self> {
        let d = shape.len();
        if !(lambda > 0.0 && lambda < d as f64) {
            return Err(Error::params(format!("Riesz exponent {lambda} outside (0, {d})")));
        }
        if d > 3 {
            return Err(Error::input("cartesian Riesz energies support d ≤ 3"));
        }
        let padded: Vec<usize> = shape.iter().map(|&n| good_size(2 * n)).collect();
        // table over nonnegative offsets, then folded into the periodic kernel
        let total_off: usize = shape.iter().product();
        let offsets: Vec<Vec<i64>> = (0..total_off)
            .map(|mut idx| {
                let mut m = vec![0i64; d];
                for k in (0..d).rev() {
                    m[k] = (idx % shape[k]) as i64;
                    idx /= shape[k];
                }
                m
            })
            .collect();
        let scale = h.powf(2.0 * d as f64 - lambda);
        let table: Vec<f64> = offsets.par_iter().map(|m| scale * offset_weight(m, lambda)).collect();
        let ptotal: usize = padded.iter().product();
        let mut kern = vec![Complex64::new(0.0, 0.0); ptotal];
        for (pi, slot) in kern.iter_mut().enumerate() {
            let mut rest = pi;
            let mut tidx = 0usize;
            let mut ok = true;
            for k in 0..d {
                let stride_p: usize = padded[k + 1..].iter().product();
                let j = rest / stride_p;
                rest %= stride_p;
                let m = if j < shape[k] {
                    j
                } else if j + shape[k] > padded[k] {
                    padded[k] - j
                } else {
                    ok = false;
                    break;
                };
                let stride_s: usize = shape[k + 1..].iter().product();
                tidx += m * stride_s;
            }
            if ok {
                *slot = Complex64::new(table[tidx], 0.0);
            }
        }
        fftn(&mut kern, &padded, false);
        Ok(CartesianRiesz { d, lambda, h, shape: shape.to_vec(), padded, kernel_hat: kern })
    }

    /// Potential φ_a = Σ_b W̃(b − a) ρ_b, so D = ½ Σ_a ρ_a φ_a.
    pub fn potential(&self, rho: &[f64]) -> Vec<f64> {
        let ptotal: usize = self.padded.iter().product();
        let mut buf = vec![Complex64::new(0.0, 0.0); ptotal];
        let d = self.d;
        let map = |idx: usize| {
            let mut rest = idx;
            let mut p = 0usize;
            for k in 0..d {
                let stride_s: usize = self.shape[k + 1..].iter().product();
                let stride_p: usize = self.padded[k + 1..].iter().product();
                p += (rest / stride_s) * stride_p;
                rest %= stride_s;
            }
            p
        };
        for (i, v) in rho.iter().enumerate() {
            buf[map(i)] = Complex64::new(*v, 0.0);
        }
        fftn(&mut buf, &self.padded, false);
        for (b, k) in buf.iter_mut().zip(&self.kernel_hat) {
            *b *= k;
        }
        fftn(&mut buf, &self.padded, true);
        let norm = 1.0 / ptotal as f64;
        (0..rho.len()).map(|i| buf[map(i)].re * norm).collect()
    }

    pub fn energy(&self, rho: &[f64]) -> f64 {
        0.5 * self.potential(rho).iter().zip(rho).map(|(a, b)| a * b).sum::<f64>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(m: &[i64], lambda: f64, n: usize) -> f64 {
        // midpoint rule on a fine grid away from the singular offsets
        let d = m.len();
        let h = 2.0 / n as f64;
        let total = n.pow(d as u32);
        let mut s = 0.0;
        for idx in 0..total {
            let mut rest = idx;
            let mut r2 = 0.0;
            let mut w = 1.0;
            for k in 0..d {
                let z = -1.0 + (rest % n) as f64 * h + 0.5 * h;
                rest /= n;
                w *= 1.0 - z.abs();
                r2 += (z + m[k] as f64).powi(2);
            }
            s += w * r2.powf(-0.5 * lambda);
        }
        s * h.powi(d as i32)
    }

    #[test]
    fn one_dimensional_self_weight() {
        // w(0) = 2∫_0^1 t^{−λ}(1−t) dt = 2/((1−λ)(2−λ))
        let lam = 0.5;
        let want = 2.0 / ((1.0 - lam) * (2.0 - lam));
        assert!((offset_weight(&[0], lam) - want).abs() < 1e-13);
    }

    #[test]
    fn far_offsets_match_brute_force() {
        for m in [[3i64, 1], [5, 4], [2, 0]] {
            let a = offset_weight(&m, 1.0);
            let b = brute(&m, 1.0, 400);
            assert!(((a - b) / a).abs() < 1e-5, "{m:?}: {a} {b}");
        }
    }

    #[test]
    fn singular_offsets_converge() {
        // compare against the fine-grid midpoint sum; its error is O(h^{2−λ}) here
        for m in [[0i64, 0], [1, 0], [1, 1]] {
            let a = offset_weight(&m, 0.5);
            let b = brute(&m, 0.5, 1000);
            assert!(((a - b) / a).abs() < 2e-3, "{m:?}: {a} {b}");
        }
    }

    #[test]
    fn fft_matches_direct_sum() {
        let shape = [5usize, 4];
        let h = 0.3;
        let op = CartesianRiesz::new(1.2, h, &shape).unwrap();
        let rho: Vec<f64> = (0..20).map(|i| 1.0 + (i as f64 * 0.7).sin().abs()).collect();
        let mut direct = 0.0;
        let scale = h.powf(4.0 - 1.2);
        for a in 0..20 {
            for b in 0..20 {
                let m = [(a / 4) as i64 - (b / 4) as i64, (a % 4) as i64 - (b % 4) as i64];
                direct += 0.5 * rho[a] * rho[b] * scale * offset_weight(&m, 1.2);
            }
        }
        let e = op.energy(&rho);
        assert!(((e - direct) / direct).abs() < 1e-12);
    }
}
