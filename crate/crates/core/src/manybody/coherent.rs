//! Coherent-state one-body density matrix with prescribed density,
//! γ(x, x') = ∬ g(y − x) e^{iη·(x−x')} 1(|η|^{2s} < cρ(y)^{2s/d}) g(y − x') dy dη/(2π)^d,
//! materialized on a one-dimensional grid.
//!
//! On a grid of step h the sampled kernel h·sin(k(x − x'))/(π(x − x')) has Toeplitz
//! symbol 1(|θ| < kh), so each y-slice is a projection conjugated by g and the
//! discrete γ keeps 0 ≤ γ ≤ 1 whenever kh < π.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft::{fftn, good_size};
use crate::params::{c_tf, coherent_c, Params};
use crate::riesz::{Density, Layout};
use crate::special::gamma;

const KINETIC_PADDING: usize = 32;

/// ℓ = N^{−(d+2s)/(2d²)}.
pub fn coherent_scale(n: f64, p: &Params) -> f64 {
    let d = p.d() as f64;
    n.powf(-(d + 2.0 * p.s()) / (2.0 * d * d))
}

/// L²-normalized Gaussian g with |g|² of variance ℓ²/2 per axis.
pub fn coherent_profile(ell: f64, x: f64) -> f64 {
    (PI * ell * ell).powf(-0.25) * (-0.5 * x * x / (ell * ell)).exp()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoherentDiagnostics {
    pub n: f64,
    pub ell: f64,
    pub eig_min: f64,
    pub eig_max: f64,
    pub trace: f64,
    /// ∫|ρ_γ − ρ∗|g|²| on the grid.
    pub density_l1: f64,
    /// Tr (−Δ)^s γ by a spectral multiplier on a padded periodic grid.
    pub kinetic: f64,
    /// N ∥(−Δ)^{s/2} g∥².
    pub localization: f64,
    /// c_tf ∫(ρ∗|g|²)^q + localization − kinetic.
    pub slack_smeared: f64,
    /// c_tf ∫ρ^q + localization − kinetic.
    pub slack_bare: f64,
}

#[derive(Debug, Clone)]
pub struct CoherentGamma {
    pub params: Params,
    pub c: f64,
    pub ell: f64,
    pub lo: f64,
    pub h: f64,
    pub rho: Vec<f64>,
    /// Operator matrix h·γ(x_i, x_j).
    pub matrix: DMatrix<f64>,
}

impl CoherentGamma {
    pub fn build(rho: &Density, ell: f64, p: &Params) -> Result<Self> {
        let (lo, h, n) = match &rho.layout {
            Layout::Cartesian { lo, h, shape } if shape.len() == 1 => (lo[0], *h, shape[0]),
            _ => return Err(Error::input("coherent γ is materialized on one-dimensional Cartesian grids")),
        };
        if p.d() != 1 {
            return Err(Error::input("coherent γ needs d = 1 parameters"));
        }
        if !(ell > 0.0) {
            return Err(Error::input("mollifier scale must be positive"));
        }
        let mass = rho.mass();
        if (mass - mass.round()).abs() > 1e-6 {
            return Err(Error::input(format!("∫ρ = {mass} is not an integer")));
        }
        if rho.values.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(Error::input("density must be finite and nonnegative"));
        }
        let c = coherent_c(p);
        // |η| < (cρ^{2s})^{1/2s} = c^{1/2s} ρ
        let kf: Vec<f64> = rho.values.iter().map(|r| c.powf(0.5 / p.s()) * r).collect();
        if kf.iter().any(|k| k * h >= PI) {
            return Err(Error::input("grid too coarse for the local Fermi momentum"));
        }
        let x: Vec<f64> = (0..n).map(|i| lo + (i as f64 + 0.5) * h).collect();
        let g: Vec<f64> = (0..2 * n).map(|i| coherent_profile(ell, (i as f64 - n as f64) * h)).collect();
        let gat = |y: usize, i: usize| g[n + y - i];
        let cols: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let r = x[i] - x[j];
                        let mut acc = 0.0;
                        for (y, k) in kf.iter().enumerate() {
                            if *k == 0.0 {
                                continue;
                            }
                            let sinc = if i == j { k / PI } else { (k * r).sin() / (PI * r) };
                            acc += gat(y, i) * gat(y, j) * sinc;
                        }
                        h * h * acc
                    })
                    .collect()
            })
            .collect();
        let matrix = DMatrix::from_fn(n, n, |i, j| 0.5 * (cols[i][j] + cols[j][i]));
        Ok(CoherentGamma { params: *p, c, ell, lo, h, rho: rho.values.clone(), matrix })
    }

    pub fn diagnostics(&self) -> Result<CoherentDiagnostics> {
        let n = self.rho.len();
        let h = self.h;
        let p = &self.params;
        let eig = SymmetricEigen::new(self.matrix.clone());
        let eig_min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        let eig_max = eig.eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if eig_min < -1e-6 || eig_max > 1.0 + 1e-6 {
            return Err(Error::numerical(format!(
                "spectrum [{eig_min}, {eig_max}] leaves [0, 1]; refine the grid"
            )));
        }
        let trace = self.matrix.trace();
        // ρ∗|g|² on the grid from the same samples
        let smeared: Vec<f64> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|y| h * self.rho[y] * coherent_profile(self.ell, (y as f64 - i as f64) * h).powi(2))
                    .sum()
            })
            .collect();
        let density_l1 = (0..n).map(|i| h * (self.matrix[(i, i)] / h - smeared[i]).abs()).sum();
        // Tr(Tγ) = Σ λ_n ⟨v_n, T v_n⟩ with T the |k|^{2s} multiplier on a padded grid;
        // heavy padding keeps the Riemann sum over the cusp of |k|^{2s} at 0 accurate
        let m = good_size(KINETIC_PADDING * n);
        let kinetic: f64 = (0..n)
            .into_par_iter()
            .map(|col| {
                let lam = eig.eigenvalues[col];
                if lam.abs() < 1e-15 {
                    return 0.0;
                }
                let mut buf = vec![Complex64::new(0.0, 0.0); m];
                for i in 0..n {
                    buf[i] = Complex64::new(eig.eigenvectors[(i, col)], 0.0);
                }
                fftn(&mut buf, &[m], false);
                let quad: f64 = buf
                    .iter()
                    .enumerate()
                    .map(|(j, c)| {
                        let jj = if j <= m / 2 { j as f64 } else { j as f64 - m as f64 };
                        let k = 2.0 * PI * jj / (m as f64 * h);
                        k.abs().powf(2.0 * p.s()) * c.norm_sqr()
                    })
                    .sum::<f64>()
                    / m as f64;
                lam * quad
            })
            .sum();
        let ctf = c_tf(p);
        let q = p.q();
        let d = p.d() as f64;
        let total: f64 = self.rho.iter().map(|r| h * r).sum();
        let localization = total * self.ell.powf(-2.0 * p.s()) * gamma(0.5 * d + p.s())? / gamma(0.5 * d)?;
        let tf_smeared: f64 = ctf * smeared.iter().map(|r| h * r.powf(q)).sum::<f64>();
        let tf_bare: f64 = ctf * self.rho.iter().map(|r| h * r.powf(q)).sum::<f64>();
        Ok(CoherentDiagnostics {
            n: total,
            ell: self.ell,
            eig_min,
            eig_max,
            trace,
            density_l1,
            kinetic,
            localization,
            slack_smeared: tf_smeared + localization - kinetic,
            slack_bare: tf_bare + localization - kinetic,
        })
    }
}

/// Gaussian density of integer mass N on [−X, X] sampled at cell centers.
pub fn gaussian_density_1d(n: usize, sigma: f64, half_width: f64, h: f64) -> Result<Density> {
    let cells = (2.0 * half_width / h).round() as usize;
    let lo = -0.5 * cells as f64 * h;
    Density::cartesian_from_fn(vec![lo], h, vec![cells], |x| {
        n as f64 * (-0.5 * x[0] * x[0] / (sigma * sigma)).exp() / (sigma * (2.0 * PI).sqrt())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(s: f64) -> CoherentDiagnostics {
        let p = Params::new(1, s, true).unwrap();
        let rho = gaussian_density_1d(4, 1.0, 8.0, 0.05).unwrap();
        let ell = coherent_scale(4.0, &p);
        CoherentGamma::build(&rho, ell, &p).unwrap().diagnostics().unwrap()
    }

    #[test]
    fn half_laplacian_example() {
        let dg = run(0.5);
        assert!(dg.eig_min >= -1e-6 && dg.eig_max <= 1.0 + 1e-6);
        assert!((dg.trace - 4.0).abs() < 1e-4);
        assert!(dg.density_l1 < 1e-4);
        assert!(dg.slack_bare >= -1e-6);
    }

    #[test]
    fn kinetic_matches_phase_space_integral() {
        // Tr(−Δ)^s γ = Σ_y h ∫_{|η|<k(y)} E|η + Z|^{2s} dη/2π with Z ~ N(0, 1/(2ℓ²))
        let s = 0.4;
        let p = Params::new(1, s, false).unwrap();
        let rho = gaussian_density_1d(4, 1.0, 8.0, 0.05).unwrap();
        let ell = coherent_scale(4.0, &p);
        let dg = CoherentGamma::build(&rho, ell, &p).unwrap().diagnostics().unwrap();
        let sig = 1.0 / (2f64.sqrt() * ell);
        let moment = |eta: f64| {
            let f = |z: f64| (eta + z).abs().powf(2.0 * s) * (-0.5 * z * z / (sig * sig)).exp();
            let lo = -12.0 * sig;
            let hi = 12.0 * sig;
            let cut = (-eta).clamp(lo, hi);
            (crate::quad::composite_gl(f, lo, cut, 64, 16) + crate::quad::composite_gl(f, cut, hi, 64, 16))
                / (sig * (2.0 * PI).sqrt())
        };
        let c = coherent_c(&p);
        let want: f64 = rho
            .values
            .iter()
            .map(|r| {
                let k = c.powf(0.5 / s) * r;
                0.05 * crate::quad::composite_gl(&moment, -k, k, 4, 16) / (2.0 * PI)
            })
            .sum();
        assert!(((dg.kinetic - want) / want).abs() < 1e-5, "{} {want}", dg.kinetic);
    }

    #[test]
    fn zero_density_gives_zero() {
        let p = Params::new(1, 0.5, true).unwrap();
        let rho = Density::cartesian(vec![-1.0], 0.1, vec![20], vec![0.0; 20]).unwrap();
        let g = CoherentGamma::build(&rho, 0.3, &p).unwrap();
        assert_eq!(g.matrix.trace(), 0.0);
        assert!(CoherentGamma::build(&rho.scaled(0.0).with_values(vec![0.3; 20]), 0.3, &p).is_err());
    }
}
