//! Electrostatic inequality: Z∫Σ|Y_m − R_k|^{−λ}dμ − Σ_{k<l} Z²|R_k − R_l|^{−λ} − D_λ[ρ_μ]
//! ≤ C Z ∫ρ_μ δ_R^{−λ}, with the proof's constant C = C_fdll ω_d 2^λ/λ.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::PointConfig;
use crate::ineq::{trial_rng, trial_seed, SweepReport};
use crate::manybody::{slater_measure, SlaterState, DEFAULT_ELL_RATIO};
use crate::params::unit_ball_volume;
use crate::riesz::{fdll_constant, GaussianMixture, MeasureModel, MeasureSample, ProductMixture, RieszKernel};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElectrostaticGap {
    pub lhs: f64,
    pub rhs: f64,
    /// lhs/rhs when rhs > 0.
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    pub trials: usize,
    pub seed: u64,
    /// Monte-Carlo samples per trial (or resolution knob for deterministic sweeps).
    pub samples: usize,
}

/// C_fdll ω_d 2^λ / λ.
pub fn electrostatic_constant(k: &RieszKernel) -> Result<f64> {
    Ok(fdll_constant(k)? * unit_ball_volume(k.d) * 2f64.powf(k.lambda) / k.lambda)
}

fn gap_with_energy<M: MeasureModel + ?Sized>(
    mu: &M,
    r: &PointConfig,
    z: f64,
    k: &RieszKernel,
    self_energy: f64,
) -> Result<ElectrostaticGap> {
    if mu.dim() != k.d || r.d() != k.d {
        return Err(Error::input("measure, nuclei and kernel dimensions differ"));
    }
    if !(z >= 0.0) {
        return Err(Error::input("Z must be nonnegative"));
    }
    r.require_distinct()?;
    let repulsion = if r.len() > 1 { r.pair_sum(k.lambda)? } else { 0.0 };
    let attraction = if z > 0.0 { mu.attraction(r, k)? } else { 0.0 };
    let lhs = z * attraction - z * z * repulsion - self_energy;
    let rhs = if z > 0.0 { z * mu.nearest_attraction(r, k)? } else { 0.0 };
    Ok(ElectrostaticGap { lhs, rhs, ratio: (rhs > 0.0).then(|| lhs / rhs) })
}

pub fn electrostatic_gap<M: MeasureModel + ?Sized>(
    mu: &M,
    r: &PointConfig,
    z: f64,
    k: &RieszKernel,
) -> Result<ElectrostaticGap> {
    gap_with_energy(mu, r, z, k, mu.self_energy(k)?)
}

const LAMBDAS: [f64; 3] = [0.5, 1.0, 1.5];

/// d = 3, M, K ≤ 5, λ cycling through {0.5, 1, 1.5}; every fifth trial uses a
/// sampled Slater-state measure in place of a Gaussian-mixture product.
pub fn electrostatic_sweep(opts: &SweepOptions) -> Result<SweepReport> {
    let d = 3;
    let kernels: Vec<RieszKernel> = LAMBDAS.iter().map(|l| RieszKernel::new(d, *l)).collect::<Result<_>>()?;
    let consts: Vec<f64> = kernels.iter().map(electrostatic_constant).collect::<Result<_>>()?;
    let slater: Vec<MeasureSample> = [4usize, 7]
        .iter()
        .enumerate()
        .map(|(i, n)| {
            let st = SlaterState::with_count(d, *n, 2.0, DEFAULT_ELL_RATIO)?;
            slater_measure(&st, opts.samples, opts.seed ^ (i as u64 + 1), 20)
        })
        .collect::<Result<_>>()?;
    let slater_energy: Vec<Vec<f64>> = slater
        .iter()
        .map(|m| kernels.iter().map(|k| m.self_energy(k)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let outcomes: Vec<(f64, bool)> = (0..opts.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(opts.seed, t);
            let li = t % LAMBDAS.len();
            let k = &kernels[li];
            let kk = rng.gen_range(1..=5usize);
            let z = rng.gen_range(0.2..3.0);
            let coords: Vec<f64> = (0..kk * d).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let r = PointConfig::new(d, coords)?;
            let gap = if t % 5 == 4 {
                let si = (t / 5) % slater.len();
                gap_with_energy(&slater[si], &r, z, k, slater_energy[si][li])?
            } else {
                let m = rng.gen_range(1..=5usize);
                let nu = GaussianMixture::random(d, 3, &mut rng);
                let mu = ProductMixture::new(m, nu, opts.samples, trial_seed(opts.seed, t))?;
                electrostatic_gap(&mu, &r, z, k)?
            };
            let ratio = gap.ratio.unwrap_or(f64::NEG_INFINITY);
            let violated = gap.lhs > consts[li] * gap.rhs * (1.0 + 1e-9);
            Ok((ratio, violated))
        })
        .collect::<Result<_>>()?;
    let mut rep = SweepReport::new("electrostatic", opts.seed, opts.samples).absorb(&outcomes);
    rep.d = Some(d);
    rep.proof_constant = consts.iter().cloned().reduce(f64::min);
    Ok(rep
        .range("lambda", "0.5, 1, 1.5")
        .range("M", "1..5")
        .range("K", "1..5")
        .range("Z", "[0.2, 3)")
        .range("R", "uniform [-3, 3)^3")
        .range("measure", "Gaussian-mixture products; Slater N = 4, 7 in a box of side 2")
        .range(
            "proof_constants",
            consts.iter().map(|c| format!("{c:.6}")).collect::<Vec<_>>().join(", "),
        ))
}
