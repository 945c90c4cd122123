//! Σ_p ∥(−Δ)^{s/2} φ_p∥² for 0 < s < 1 by Bochner subordination,
//! |ξ|^{2s} = s/Γ(1−s) ∫_0^∞ (1 − e^{−t|ξ|²}) t^{−1−s} dt.
//!
//! |φ̂_p|² is a product over axes of a shifted one-dimensional law w, so the heat
//! average factorizes: E e^{−t|p+K|²} = Π_i h(t, p_i). h is evaluated from an FFT
//! sample of w for small t and in real space from the autocorrelation A of √η₁
//! for large t, where h(t, p) = L^{−1} ∫ A(z) cos(pz) e^{−z²/4t} dz / √(4πt).

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fft::{fftn, good_size};
use crate::manybody::slater::{Mollifier, SlaterState};
use crate::quad::gl;
use crate::special::gamma;

/// Discrete law of the per-axis momentum spread K.
pub(crate) struct SpectralLaw {
    pub k: Vec<f64>,
    pub w: Vec<f64>,
}

impl SpectralLaw {
    pub(crate) fn new(m: &Mollifier) -> Self {
        let lp = 4.0 * m.l;
        let n = good_size((lp / (m.ell / 64.0)).ceil() as usize);
        let step = lp / n as f64;
        let mut buf: Vec<Complex64> = (0..n)
            .map(|j| Complex64::new(m.eta1(-0.5 * lp + j as f64 * step).sqrt(), 0.0))
            .collect();
        fftn(&mut buf, &[n], false);
        let mut w: Vec<f64> = buf.iter().map(|c| c.norm_sqr()).collect();
        let total: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= total);
        let k = (0..n)
            .map(|j| {
                let jj = if j < n / 2 { j as f64 } else { j as f64 - n as f64 };
                2.0 * PI * jj / lp
            })
            .collect();
        SpectralLaw { k, w }
    }

    pub(crate) fn heat(&self, t: f64, p: f64) -> f64 {
        self.k.iter().zip(&self.w).map(|(k, w)| w * (-t * (p + k) * (p + k)).exp()).sum()
    }

    pub(crate) fn second_moment(&self) -> f64 {
        self.k.iter().zip(&self.w).map(|(k, w)| w * k * k).sum()
    }
}

/// Autocorrelation of √η₁ tabulated on quadrature nodes over [0, L + ℓ].
pub(crate) struct RealSpaceLaw {
    nodes: Vec<(f64, f64, f64)>,
    l: f64,
}

impl RealSpaceLaw {
    pub(crate) fn new(m: &Mollifier, max_cycles: usize) -> Self {
        let (l, ell) = (m.l, m.ell);
        let bps = [0.0, ell, l - ell, l, l + ell];
        let rule = gl(16);
        let mut nodes = Vec::new();
        for w in bps.windows(2) {
            let len = w[1] - w[0];
            let panels = 1 + ((len / l) * (96 + 4 * max_cycles) as f64).ceil() as usize;
            let h = len / panels as f64;
            for i in 0..panels {
                let a = w[0] + i as f64 * h;
                for (z, wt) in rule.mapped(a, a + h) {
                    nodes.push((z, wt, 0.0));
                }
            }
        }
        nodes.par_iter_mut().for_each(|n| n.2 = m.autocorrelation(n.0, true));
        RealSpaceLaw { nodes, l }
    }

    pub(crate) fn heat(&self, t: f64, p: f64) -> f64 {
        let norm = 1.0 / (4.0 * PI * t).sqrt();
        // A is even, so the integral over R is twice the half-line
        2.0 * norm / self.l
            * self.nodes.iter().map(|(z, w, a)| w * a * (p * z).cos() * (-z * z / (4.0 * t)).exp()).sum::<f64>()
    }
}

pub(crate) fn fractional_slater_kinetic(state: &SlaterState, s: f64) -> Result<f64> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::params("subordination needs 0 < s < 1"));
    }
    let m = &state.mollifier;
    let l = state.l;
    let f = 2.0 * PI / l;
    let spectral = SpectralLaw::new(m);
    let mut axis_counts: BTreeMap<i64, ()> = BTreeMap::new();
    for mm in &state.momenta {
        for x in mm {
            axis_counts.insert(*x, ());
        }
    }
    let distinct: Vec<i64> = axis_counts.keys().cloned().collect();
    let mmax = distinct.iter().map(|x| x.unsigned_abs() as usize).max().unwrap_or(0);
    let real = RealSpaceLaw::new(m, mmax);
    // the sampled law reaches |k| = π/step
    let step = state.mollifier.ell / 64.0;
    let t_min = 1e-3 * step * step / (PI * PI);
    let t_switch = l * l / 400.0;
    let t_max = 1e4 * l * l;
    let du = 0.2;
    let (u0, u1) = (t_min.ln(), t_max.ln());
    let steps = ((u1 - u0) / du).ceil() as usize;
    let du = (u1 - u0) / steps as f64;
    let index: BTreeMap<i64, usize> = distinct.iter().enumerate().map(|(i, x)| (*x, i)).collect();
    let heat_at = |t: f64| -> Vec<f64> {
        distinct
            .iter()
            .map(|x| {
                let p = f * *x as f64;
                if t <= t_switch {
                    spectral.heat(t, p)
                } else {
                    real.heat(t, p)
                }
            })
            .collect()
    };
    let product = |h: &[f64], mm: &[i64]| mm.iter().map(|x| h[index[x]]).product::<f64>();
    let integrand: Vec<f64> = (0..=steps)
        .into_par_iter()
        .map(|i| {
            let t = (u0 + i as f64 * du).exp();
            let h = heat_at(t);
            let sum: f64 = state.momenta.iter().map(|mm| 1.0 - product(&h, mm)).sum();
            let w = if i == 0 || i == steps { 0.5 } else { 1.0 };
            w * sum * t.powf(-s)
        })
        .collect();
    let mut total = du * integrand.iter().sum::<f64>();
    // below t_min: 1 − e^{−tξ²} ≈ tξ²
    let k2 = spectral.second_moment();
    let second: f64 = (0..state.n()).map(|i| state.momentum_sq(i) + state.d as f64 * k2).sum();
    total += second * t_min.powf(1.0 - s) / (1.0 - s);
    // above t_max: Π h decays like t^{−d/2}
    let h = heat_at(t_max);
    let tail: f64 = state
        .momenta
        .iter()
        .map(|mm| t_max.powf(-s) / s - product(&h, mm) * t_max.powf(-s) / (s + 0.5 * state.d as f64))
        .sum();
    total += tail;
    Ok(s / gamma(1.0 - s)? * total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manybody::slater::{slater_kinetic, DEFAULT_ELL_RATIO};
    use crate::params::Params;

    #[test]
    fn heat_representations_agree() {
        let m = Mollifier { l: 3.0, ell: 3.0 / 32.0, mass: 1.0 };
        let a = SpectralLaw::new(&m);
        let b = RealSpaceLaw::new(&m, 4);
        assert!((a.w.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        for (t, p) in [(9.0 / 400.0, 0.0), (9.0 / 400.0, 2.0 * PI / 3.0 * 3.0), (0.1, 2.0)] {
            let (x, y) = (a.heat(t, p), b.heat(t, p));
            assert!((x - y).abs() < 5e-7, "t={t} p={p}: {x} {y}");
        }
    }

    #[test]
    fn one_dimensional_spectral_integral() {
        // E|p + K|^{2s} = (2πL)^{−1} ∫ |k + p|^{2s} |ĝ(k)|² dk with ĝ the transform of √η₁
        let st = SlaterState::with_count(1, 3, 2.0, DEFAULT_ELL_RATIO).unwrap();
        let s = 0.35;
        let m = st.mollifier;
        let inner = 0.5 * (m.l - m.ell);
        let ghat = |k: f64| {
            let edge = crate::quad::tanh_sinh(|x, _, _| m.eta1(x).sqrt() * (k * x).cos(), inner, m.support(), 1e-12);
            let flat = if k == 0.0 { inner } else { (k * inner).sin() / k };
            2.0 * (flat + edge.value)
        };
        let kmax = 400.0 / m.ell;
        let want: f64 = (0..st.n())
            .map(|i| {
                let p = st.momentum(i)[0];
                let f = |k: f64| (k + p).abs().powf(2.0 * s) * ghat(k).powi(2);
                let mut cuts = vec![-kmax, 0.0, -p, kmax];
                cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
                cuts.dedup();
                cuts.windows(2)
                    .map(|w| {
                        let panels = 1 + ((w[1] - w[0]) * m.l / PI) as usize;
                        crate::quad::composite_gl(&f, w[0], w[1], panels, 12)
                    })
                    .sum::<f64>()
                    / (2.0 * PI * m.l)
            })
            .sum();
        let got = fractional_slater_kinetic(&st, s).unwrap();
        assert!(((got - want) / want).abs() < 1e-4, "{got} {want}");
    }

    #[test]
    fn approaches_gradient_energy() {
        let st = SlaterState::with_count(2, 13, 4.0, DEFAULT_ELL_RATIO).unwrap();
        let one = slater_kinetic(&st, &Params::new(2, 1.0, true).unwrap()).unwrap();
        let near = fractional_slater_kinetic(&st, 0.999).unwrap();
        assert!(((near - one) / one).abs() < 0.01, "{near} {one}");
    }
}
