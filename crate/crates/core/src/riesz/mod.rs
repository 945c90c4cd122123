//! Riesz kernels |x|^{−λ}, pair sums and the energies D_λ[ρ] = ½∬ρ(x)ρ(x')|x − x'|^{−λ}.

pub mod cartesian;
pub mod density;
pub mod fdll;
pub mod measure;
pub mod radial;
pub mod sublevel;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::dist2;

pub use cartesian::CartesianRiesz;
pub use density::{log_edges, uniform_edges, Density, Layout};
pub use fdll::{fdll_constant, Fdll};
pub use measure::{GaussianMixture, MeasureModel, MeasureSample, ProductMixture};
pub use radial::RadialRiesz;
pub use sublevel::{sublevel_volume, SublevelVolume};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RieszKernel {
    pub d: usize,
    pub lambda: f64,
}

impl RieszKernel {
    pub fn new(d: usize, lambda: f64) -> Result<Self> {
        if d == 0 || !(lambda > 0.0 && lambda < d as f64) {
            return Err(Error::params(format!("Riesz exponent λ = {lambda} outside (0, {d})")));
        }
        Ok(RieszKernel { d, lambda })
    }

    pub fn eval(&self, r: f64) -> f64 {
        r.powf(-self.lambda)
    }
}

/// Σ_{n<m} |X_n − X_m|^{−λ} for a flat configuration of N points in R^d.
pub fn pair_interaction(x: &[f64], k: &RieszKernel) -> Result<f64> {
    let d = k.d;
    if x.len() % d != 0 {
        return Err(Error::input("configuration length is not a multiple of d"));
    }
    let n = x.len() / d;
    let e = -0.5 * k.lambda;
    let mut s = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let r2 = dist2(&x[i * d..(i + 1) * d], &x[j * d..(j + 1) * d]);
            if r2 == 0.0 {
                return Err(Error::input(format!("coincident points {i} and {j}")));
            }
            s += r2.powf(e);
        }
    }
    Ok(s)
}

/// D_λ[ρ] for either grid layout.
pub fn riesz_energy(rho: &Density, k: &RieszKernel) -> Result<f64> {
    if rho.d != k.d {
        return Err(Error::input("density and kernel dimensions differ"));
    }
    if rho.values.iter().all(|v| *v == 0.0) {
        return Ok(0.0);
    }
    match &rho.layout {
        Layout::Radial { edges } => Ok(RadialRiesz::new(k.d, k.lambda, edges)?.energy(&rho.values)),
        Layout::Cartesian { h, shape, .. } => Ok(CartesianRiesz::new(k.lambda, *h, shape)?.energy(&rho.values)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_examples() {
        let k1 = RieszKernel::new(3, 1.0).unwrap();
        assert_eq!(pair_interaction(&[0.0, 0.0, 0.0, 1.0, 0.0, 0.0], &k1).unwrap(), 1.0);
        let k2 = RieszKernel::new(3, 2.0).unwrap();
        let h = 3f64.sqrt() / 2.0;
        let tri = [0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.5, h, 0.0];
        assert!((pair_interaction(&tri, &k2).unwrap() - 3.0).abs() < 1e-14);
        let k = RieszKernel::new(2, 1.0).unwrap();
        let sq = [0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0, 1.0];
        assert!((pair_interaction(&sq, &k).unwrap() - (4.0 + 2.0 / 2f64.sqrt())).abs() < 1e-14);
        assert!(pair_interaction(&[0.0, 0.0, 0.0, 0.0], &k).is_err());
    }

    #[test]
    fn kernel_range() {
        assert!(RieszKernel::new(3, 3.0).is_err());
        assert!(RieszKernel::new(3, 0.0).is_err());
    }

    #[test]
    fn zero_density_zero_energy() {
        let rho = Density::radial(3, log_edges(16, 1e-2, 4.0), vec![0.0; 16]).unwrap();
        assert_eq!(riesz_energy(&rho, &RieszKernel::new(3, 1.0).unwrap()).unwrap(), 0.0);
    }
}
