//! Probability measures on R^{dM}: weighted sample sets with a gridded marginal, and
//! products of Gaussian mixtures whose Riesz integrals are available in closed form.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{dist2, PointConfig};
use crate::quad::tanh_sinh;
use crate::riesz::{pair_interaction, riesz_energy, Density, RieszKernel};
use crate::special::ln_gamma;

/// Integrals of a measure μ on R^{dM} needed by the electrostatic and indirect bounds.
pub trait MeasureModel {
    fn particles(&self) -> usize;
    fn dim(&self) -> usize;
    /// ∫ρ_μ(y) Σ_k |y − R_k|^{−λ} dy.
    fn attraction(&self, r: &PointConfig, k: &RieszKernel) -> Result<f64>;
    /// ∫ρ_μ(y) δ_R(y)^{−λ} dy.
    fn nearest_attraction(&self, r: &PointConfig, k: &RieszKernel) -> Result<f64>;
    /// D_λ[ρ_μ].
    fn self_energy(&self, k: &RieszKernel) -> Result<f64>;
    /// ∫ Σ_{n<m} |X_n − X_m|^{−λ} dμ.
    fn pair_expectation(&self, k: &RieszKernel) -> Result<f64>;
    /// ∫ρ_μ^p.
    fn lp_pow(&self, p: f64) -> Result<f64>;
}

/// E|Y|^{−λ} for Y ~ N(c, σ²I_d) with |c| = a.
pub fn gaussian_inverse_moment(d: usize, a: f64, sigma2: f64, lambda: f64) -> f64 {
    let df = d as f64;
    let alpha = 0.5 * lambda;
    let beta = 0.5 * (df - lambda);
    let b = a * a / (2.0 * sigma2);
    // (2σ²)^{−λ/2}/Γ(λ/2) ∫_0^1 u^{λ/2−1}(1−u)^{(d−λ)/2−1} e^{−bu} du
    let pre = (-alpha * (2.0 * sigma2).ln() - ln_gamma(alpha)).exp();
    let upper = if b > 60.0 { 60.0 / b } else { 1.0 };
    let integral = tanh_sinh(
        |u, dl, dr| {
            let omu = if upper < 1.0 { 1.0 - u } else { dr };
            dl.powf(alpha - 1.0) * omu.powf(beta - 1.0) * (-b * u).exp()
        },
        0.0,
        upper,
        1e-12,
    )
    .value;
    pre * integral
}

#[derive(Debug, Clone, Serialize)]
pub struct GaussianMixture {
    pub d: usize,
    pub weights: Vec<f64>,
    pub centers: Vec<Vec<f64>>,
    pub sigmas: Vec<f64>,
}

impl GaussianMixture {
    pub fn new(d: usize, weights: Vec<f64>, centers: Vec<Vec<f64>>, sigmas: Vec<f64>) -> Result<Self> {
        let n = weights.len();
        if n == 0 || centers.len() != n || sigmas.len() != n {
            return Err(Error::input("mixture components are inconsistent"));
        }
        if weights.iter().any(|w| !(*w >= 0.0)) || sigmas.iter().any(|s| !(*s > 0.0)) {
            return Err(Error::input("mixture weights must be nonnegative and widths positive"));
        }
        if centers.iter().any(|c| c.len() != d) {
            return Err(Error::input("mixture center of wrong dimension"));
        }
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::input("mixture weights sum to zero"));
        }
        let weights = weights.iter().map(|w| w / total).collect();
        Ok(GaussianMixture { d, weights, centers, sigmas })
    }

    /// Up to `max_components` components with centers in [−2, 2]^d and widths in [0.3, 1.3].
    pub fn random<R: Rng>(d: usize, max_components: usize, rng: &mut R) -> Self {
        let n = rng.gen_range(1..=max_components.max(1));
        let weights = (0..n).map(|_| rng.gen_range(0.2..1.0)).collect();
        let centers = (0..n).map(|_| (0..d).map(|_| rng.gen_range(-2.0..2.0)).collect()).collect();
        let sigmas = (0..n).map(|_| rng.gen_range(0.3..1.3)).collect();
        GaussianMixture::new(d, weights, centers, sigmas).expect("valid random mixture")
    }

    pub fn density(&self, x: &[f64]) -> f64 {
        let df = self.d as f64;
        self.weights
            .iter()
            .zip(&self.centers)
            .zip(&self.sigmas)
            .map(|((w, c), s)| {
                let s2 = s * s;
                w * (2.0 * std::f64::consts::PI * s2).powf(-0.5 * df) * (-dist2(x, c) / (2.0 * s2)).exp()
            })
            .sum()
    }

    pub fn sample<R: Rng>(&self, rng: &mut R, out: &mut [f64]) {
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        let mut idx = self.weights.len() - 1;
        for (i, w) in self.weights.iter().enumerate() {
            acc += w;
            if u < acc {
                idx = i;
                break;
            }
        }
        for (o, c) in out.iter_mut().zip(&self.centers[idx]) {
            let z: f64 = rng.sample(StandardNormal);
            *o = c + self.sigmas[idx] * z;
        }
    }

    /// E|Y − y|^{−λ}.
    pub fn potential(&self, y: &[f64], lambda: f64) -> f64 {
        self.weights
            .iter()
            .zip(&self.centers)
            .zip(&self.sigmas)
            .map(|((w, c), s)| w * gaussian_inverse_moment(self.d, dist2(y, c).sqrt(), s * s, lambda))
            .sum()
    }

    /// E|Y − Y'|^{−λ} for independent Y, Y'.
    pub fn pair_moment(&self, lambda: f64) -> f64 {
        let n = self.weights.len();
        let mut sum = 0.0;
        for i in 0..n {
            for j in 0..n {
                let a = dist2(&self.centers[i], &self.centers[j]).sqrt();
                let s2 = self.sigmas[i].powi(2) + self.sigmas[j].powi(2);
                sum += self.weights[i] * self.weights[j] * gaussian_inverse_moment(self.d, a, s2, lambda);
            }
        }
        sum
    }

    /// Dilate about the origin: Y → Y/t, so the density becomes t^d ν(t y).
    pub fn concentrated(&self, t: f64) -> Self {
        GaussianMixture {
            d: self.d,
            weights: self.weights.clone(),
            centers: self.centers.iter().map(|c| c.iter().map(|x| x / t).collect()).collect(),
            sigmas: self.sigmas.iter().map(|s| s / t).collect(),
        }
    }
}

/// μ = ν^{⊗M} for a Gaussian mixture ν; Monte-Carlo parts are seeded.
#[derive(Debug, Clone, Serialize)]
pub struct ProductMixture {
    pub m: usize,
    pub nu: GaussianMixture,
    pub samples: usize,
    pub seed: u64,
}

impl ProductMixture {
    pub fn new(m: usize, nu: GaussianMixture, samples: usize, seed: u64) -> Result<Self> {
        if m == 0 || samples == 0 {
            return Err(Error::input("product measure needs M ≥ 1 and a positive sample count"));
        }
        Ok(ProductMixture { m, nu, samples, seed })
    }

    fn mc_mean<F: Fn(&[f64]) -> f64>(&self, salt: u64, f: F) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let mut y = vec![0.0; self.nu.d];
        let mut acc = 0.0;
        for _ in 0..self.samples {
            self.nu.sample(&mut rng, &mut y);
            acc += f(&y);
        }
        acc / self.samples as f64
    }
}

impl MeasureModel for ProductMixture {
    fn particles(&self) -> usize {
        self.m
    }
    fn dim(&self) -> usize {
        self.nu.d
    }
    fn attraction(&self, r: &PointConfig, k: &RieszKernel) -> Result<f64> {
        Ok(self.m as f64 * r.points().map(|p| self.nu.potential(p, k.lambda)).sum::<f64>())
    }
    fn nearest_attraction(&self, r: &PointConfig, k: &RieszKernel) -> Result<f64> {
        // subtract the bounded non-nearest part E_ν[Σ_k |Y−R_k|^{−λ} − δ_R(Y)^{−λ}] by sampling
        let e = -0.5 * k.lambda;
        let excess = self.mc_mean(1, |y| {
            let mut sum = 0.0;
            let mut best = f64::INFINITY;
            for p in r.points() {
                let d2 = dist2(p, y);
                sum += d2.powf(e);
                best = best.min(d2);
            }
            (sum - best.powf(e)).max(0.0)
        });
        Ok(self.attraction(r, k)? - self.m as f64 * excess)
    }
    fn self_energy(&self, k: &RieszKernel) -> Result<f64> {
        let m = self.m as f64;
        Ok(0.5 * m * m * self.nu.pair_moment(k.lambda))
    }
    fn pair_expectation(&self, k: &RieszKernel) -> Result<f64> {
        let m = self.m as f64;
        Ok(0.5 * m * (m - 1.0) * self.nu.pair_moment(k.lambda))
    }
    fn lp_pow(&self, p: f64) -> Result<f64> {
        let m = self.m as f64;
        Ok(m.powf(p) * self.mc_mean(2, |y| self.nu.density(y).powf(p - 1.0)))
    }
}

/// Weighted sample of configurations in R^{dM} together with its marginal density.
#[derive(Debug, Clone, Serialize)]
pub struct MeasureSample {
    pub m: usize,
    pub d: usize,
    /// Flat configurations, each of length M·d.
    pub configs: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    pub marginal: Density,
}

impl MeasureSample {
    pub fn new(m: usize, d: usize, configs: Vec<Vec<f64>>, weights: Vec<f64>, marginal: Density) -> Result<Self> {
        if configs.is_empty() || configs.len() != weights.len() {
            return Err(Error::input("sample and weight counts differ"));
        }
        if configs.iter().any(|c| c.len() != m * d) {
            return Err(Error::input("configuration of wrong length"));
        }
        if weights.iter().any(|w| !(*w >= 0.0)) {
            return Err(Error::input("negative sample weight"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::input(format!("sample weights sum to {total}, not 1")));
        }
        if marginal.d != d {
            return Err(Error::input("marginal dimension differs"));
        }
        let mass = marginal.mass();
        if ((mass - m as f64) / m as f64).abs() > 1e-4 {
            return Err(Error::input(format!("marginal mass {mass} differs from M = {m}")));
        }
        Ok(MeasureSample { m, d, configs, weights, marginal })
    }

    /// Equal weights.
    pub fn uniform(m: usize, d: usize, configs: Vec<Vec<f64>>, marginal: Density) -> Result<Self> {
        let n = configs.len();
        MeasureSample::new(m, d, configs, vec![1.0 / n.max(1) as f64; n], marginal)
    }

    fn weighted<F: Fn(&[f64]) -> Result<f64>>(&self, f: F) -> Result<f64> {
        let mut acc = 0.0;
        for (c, w) in self.configs.iter().zip(&self.weights) {
            acc += w * f(c)?;
        }
        Ok(acc)
    }
}

fn check_hit(d2: f64) -> Result<()> {
    if d2 == 0.0 {
        return Err(Error::input("sample coincides with a nucleus"));
    }
    Ok(())
}

impl MeasureModel for MeasureSample {
    fn particles(&self) -> usize {
        self.m
    }
    fn dim(&self) -> usize {
        self.d
    }
    fn attraction(&self, r: &PointConfig, k: &RieszKernel) -> Result<f64> {
        let e = -0.5 * k.lambda;
        self.weighted(|c| {
            let mut s = 0.0;
            for y in c.chunks(self.d) {
                for p in r.points() {
                    let d2 = dist2(p, y);
                    check_hit(d2)?;
                    s += d2.powf(e);
                }
            }
            Ok(s)
        })
    }
    fn nearest_attraction(&self, r: &PointConfig, k: &RieszKernel) -> Result<f64> {
        let e = -0.5 * k.lambda;
        self.weighted(|c| {
            let mut s = 0.0;
            for y in c.chunks(self.d) {
                let d2 = r.points().map(|p| dist2(p, y)).fold(f64::INFINITY, f64::min);
                check_hit(d2)?;
                s += d2.powf(e);
            }
            Ok(s)
        })
    }
    fn self_energy(&self, k: &RieszKernel) -> Result<f64> {
        riesz_energy(&self.marginal, k)
    }
    fn pair_expectation(&self, k: &RieszKernel) -> Result<f64> {
        self.weighted(|c| pair_interaction(c, k))
    }
    fn lp_pow(&self, p: f64) -> Result<f64> {
        Ok(self.marginal.lp_pow(p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::tanh_sinh_inf;

    #[test]
    fn centered_gaussian_moment() {
        // E|Y|^{−λ} = (2σ²)^{−λ/2} Γ((d−λ)/2)/Γ(d/2)
        for &(d, lam, s2) in &[(3usize, 1.0, 1.0f64), (3, 2.0, 0.5), (1, 0.5, 2.0), (2, 1.0, 0.7)] {
            let want = (2.0 * s2).powf(-0.5 * lam)
                * (ln_gamma(0.5 * (d as f64 - lam)) - ln_gamma(0.5 * d as f64)).exp();
            let got = gaussian_inverse_moment(d, 0.0, s2, lam);
            assert!(((got - want) / want).abs() < 1e-11, "{d} {lam}");
        }
    }

    #[test]
    fn offset_gaussian_coulomb() {
        // d = 3, λ = 1: E|Y − a|^{−1} = erf(a/(√2σ))/a; compare with a radial quadrature
        let a = 1.7;
        let s2: f64 = 0.8;
        let got = gaussian_inverse_moment(3, a, s2, 1.0);
        // 4π∫ r² g(r) · ⟨|r ω − a e|^{−1}⟩ dr, shell average = 1/max(r, a)
        let g = |r: f64| (2.0 * std::f64::consts::PI * s2).powf(-1.5) * (-r * r / (2.0 * s2)).exp();
        let four_pi = 4.0 * std::f64::consts::PI;
        let inner = crate::quad::tanh_sinh(|r, _, _| four_pi * r * r * g(r) / a, 0.0, a, 1e-13).value;
        let outer = tanh_sinh_inf(|r| if r > 60.0 { 0.0 } else { four_pi * r * g(r) }, a, 1e-13).value;
        let want = inner + outer;
        assert!(((got - want) / want).abs() < 1e-6, "{got} {want}");
        let far = gaussian_inverse_moment(3, 400.0, 1.0, 1.0);
        assert!((far * 400.0 - 1.0).abs() < 1e-10);
    }

    #[test]
    fn product_pair_relation() {
        let nu = GaussianMixture::new(3, vec![1.0], vec![vec![0.0; 3]], vec![1.0]).unwrap();
        let mu = ProductMixture::new(2, nu, 1000, 1).unwrap();
        let k = RieszKernel::new(3, 1.0).unwrap();
        let d = mu.self_energy(&k).unwrap();
        let gap = mu.pair_expectation(&k).unwrap() - d;
        assert!((gap + d / 2.0).abs() < 1e-13);
    }

    #[test]
    fn sample_validation() {
        let rho = Density::radial(1, vec![0.0, 1.0], vec![1.0]).unwrap();
        assert!(MeasureSample::new(2, 1, vec![vec![0.1, 0.2]], vec![1.0], rho.clone()).is_ok());
        assert!(MeasureSample::new(2, 1, vec![vec![0.1, 0.2]], vec![0.5], rho.clone()).is_err());
        assert!(MeasureSample::new(3, 1, vec![vec![0.1, 0.2, 0.3]], vec![1.0], rho).is_err());
    }
}
