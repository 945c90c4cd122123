//! The two semiclassical quotients
//!   τ-quotient  ∫ρ^{1+2s/d} (∫ρ)^{1−2s/d} / D_{2s}[ρ],
//!   ω-quotient  ∥(−Δ)^{s/2}√ρ∥² ∫ρ / D_{2s}[ρ],
//! on gridded densities, with gradients for radial grids.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::Params;
use crate::riesz::{log_edges, riesz_energy, uniform_edges, Density, RadialRiesz, RieszKernel};
use crate::variational::kinetic::{fractional_kinetic, RadialKinetic};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Tau,
    Omega,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Log,
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n: usize,
    pub r_min: f64,
    pub r_max: f64,
    pub spacing: Spacing,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { n: 512, r_min: 1e-3, r_max: 50.0, spacing: Spacing::Log }
    }
}

impl GridSpec {
    pub fn edges(&self) -> Result<Vec<f64>> {
        if self.n < 4 || !(self.r_max > 0.0) {
            return Err(Error::input("grid needs n ≥ 4 and r_max > 0"));
        }
        match self.spacing {
            Spacing::Log => {
                if !(self.r_min > 0.0 && self.r_min < self.r_max) {
                    return Err(Error::input("log grid needs 0 < r_min < r_max"));
                }
                Ok(log_edges(self.n, self.r_min, self.r_max))
            }
            Spacing::Uniform => Ok(uniform_edges(self.n, self.r_max)),
        }
    }

    pub fn refined(&self) -> GridSpec {
        GridSpec { n: 2 * self.n, ..*self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunctionalSpec {
    pub kind: Kind,
    pub params: Params,
    pub grid: GridSpec,
}

impl FunctionalSpec {
    pub fn new(kind: Kind, params: Params, grid: GridSpec) -> Result<Self> {
        params.require_subcritical()?;
        Ok(FunctionalSpec { kind, params, grid })
    }

    fn profile(&self, f: impl Fn(f64) -> f64) -> Result<Density> {
        Density::radial_from_fn(self.params.d(), self.grid.edges()?, f)
    }

    /// Standard Gaussian of unit mass.
    pub fn gaussian_init(&self) -> Result<Density> {
        let d = self.params.df();
        let c = (2.0 * std::f64::consts::PI).powf(-0.5 * d);
        self.profile(|r| c * (-0.5 * r * r).exp())
    }

    /// Uniform ball of unit mass.
    pub fn ball_init(&self, radius: f64) -> Result<Density> {
        let v = crate::params::unit_ball_volume(self.params.d()) * radius.powi(self.params.d() as i32);
        self.profile(|r| if r < radius { 1.0 / v } else { 0.0 })
    }
}

fn check_nonzero(rho: &Density) -> Result<()> {
    if rho.values.iter().all(|v| *v == 0.0) {
        return Err(Error::input("objective undefined for the zero density"));
    }
    Ok(())
}

fn kernel(p: &Params) -> Result<RieszKernel> {
    p.require_subcritical()?;
    RieszKernel::new(p.d(), p.lambda())
}

pub fn tau_objective(rho: &Density, p: &Params) -> Result<f64> {
    check_nonzero(rho)?;
    let k = kernel(p)?;
    let lp = rho.lp_pow(p.q());
    let m = rho.mass();
    let d = riesz_energy(rho, &k)?;
    Ok(lp * m.powf(2.0 - p.q()) / d)
}

pub fn omega_objective(rho: &Density, p: &Params) -> Result<f64> {
    check_nonzero(rho)?;
    let k = kernel(p)?;
    let root = rho.with_values(rho.values.iter().map(|v| v.sqrt()).collect());
    let t = fractional_kinetic(&root, p)?;
    Ok(t * rho.mass() / riesz_energy(rho, &k)?)
}

/// Precomputed radial operators for repeated evaluation on one grid.
#[derive(Debug, Clone)]
pub struct RadialObjective {
    pub kind: Kind,
    pub params: Params,
    pub edges: Vec<f64>,
    volumes: Vec<f64>,
    riesz: RadialRiesz,
    kinetic: Option<RadialKinetic>,
    kinetic_diag: Vec<f64>,
}

/// Objective value with its parts and the gradient with respect to cell values.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub value: f64,
    pub mass: f64,
    pub energy: f64,
    /// Kinetic energy of √ρ, zero for the τ objective.
    pub kinetic: f64,
    pub grad: Vec<f64>,
}

impl RadialObjective {
    pub fn new(kind: Kind, params: Params, edges: &[f64]) -> Result<Self> {
        params.require_subcritical()?;
        let d = params.d();
        let probe = Density::radial(d, edges.to_vec(), vec![0.0; edges.len() - 1])?;
        let volumes = probe.cell_measures();
        let riesz = RadialRiesz::new(d, params.lambda(), edges)?;
        let kinetic = match kind {
            Kind::Tau => None,
            Kind::Omega => Some(RadialKinetic::new(d, params.s(), edges)?),
        };
        let kinetic_diag = kinetic.as_ref().map(|k| k.diagonal()).unwrap_or_default();
        Ok(RadialObjective { kind, params, edges: edges.to_vec(), volumes, riesz, kinetic, kinetic_diag })
    }

    pub fn from_spec(spec: &FunctionalSpec) -> Result<Self> {
        RadialObjective::new(spec.kind, spec.params, &spec.grid.edges()?)
    }

    pub fn len(&self) -> usize {
        self.volumes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.volumes.is_empty()
    }

    pub fn volumes(&self) -> &[f64] {
        &self.volumes
    }

    pub fn evaluate(&self, rho: &[f64]) -> Result<Evaluation> {
        if rho.len() != self.len() {
            return Err(Error::input("density length does not match the grid"));
        }
        if rho.iter().any(|v| !v.is_finite() || *v < 0.0) || rho.iter().all(|v| *v == 0.0) {
            return Err(Error::input("objective needs a finite nonnegative nonzero density"));
        }
        let v = &self.volumes;
        let m: f64 = v.iter().zip(rho).map(|(a, b)| a * b).sum();
        let wr = self.riesz.apply(rho);
        let dd: f64 = wr.iter().zip(rho).map(|(a, b)| a * b).sum();
        let mut grad = vec![0.0; rho.len()];
        let mut kinetic = 0.0;
        let value = match self.kind {
            Kind::Tau => {
                let q = self.params.q();
                let lp: f64 = v.iter().zip(rho).map(|(a, b)| a * b.powf(q)).sum();
                let j = lp * m.powf(2.0 - q) / dd;
                for i in 0..rho.len() {
                    grad[i] = j * (q * v[i] * rho[i].powf(q - 1.0) / lp + (2.0 - q) * v[i] / m - 2.0 * wr[i] / dd);
                }
                j
            }
            Kind::Omega => {
                let kin = self.kinetic.as_ref().expect("omega objective has a kinetic form");
                let root: Vec<f64> = rho.iter().map(|x| x.sqrt()).collect();
                let (t, gt) = kin.energy_grad(&root);
                let j = t * m / dd;
                kinetic = t;
                for i in 0..rho.len() {
                    let dt = if root[i] > 0.0 { gt[i] / (2.0 * root[i]) } else { 0.0 };
                    grad[i] = j * (dt / t + v[i] / m - 2.0 * wr[i] / dd);
                }
                j
            }
        };
        if !value.is_finite() {
            return Err(Error::numerical("objective evaluated to a non-finite value"));
        }
        Ok(Evaluation { value, mass: m, energy: dd, kinetic, grad })
    }

    /// Per-cell curvature of J in log ρ relative to the bulk scale J·v_i/M, plus one.
    /// Only the kinetic part is stiff; it grows like the inverse squared cell width.
    pub fn stiffness(&self, rho: &[f64], eval: &Evaluation) -> Vec<f64> {
        if self.kinetic_diag.is_empty() || !(eval.kinetic > 0.0) {
            return vec![1.0; rho.len()];
        }
        rho.iter()
            .zip(&self.kinetic_diag)
            .zip(&self.volumes)
            .map(|((r, h), v)| 1.0 + h * r * eval.mass / (2.0 * eval.kinetic * v))
            .collect()
    }
}

/// β_N ≤ ω/(N − 1) from the product trial state.
pub fn bosonic_upper_bound(n: usize, omega_hat: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::input("bosonic bound needs N ≥ 2"));
    }
    Ok(omega_hat / (n - 1) as f64)
}
