//! Partition averaging of the pair interaction into electron–nucleus attraction and
//! nucleus–nucleus repulsion, and the parameter plans built on it.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{dist2, PointConfig};
use crate::ineq::{trial_rng, SweepOptions, SweepReport};
use crate::params::Params;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartitionResidual {
    /// Σ_{n<m}|X_n − X_m|^{−2s}.
    pub lhs: f64,
    /// Prefactor times the sum over partitions.
    pub rhs: f64,
    /// |lhs − rhs|/|lhs|.
    pub relative: f64,
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

pub const MAX_ENUMERATED: usize = 16;

/// Enumerates all C(N, M) splits into M electrons and K = N − M nuclei of charge Z.
pub fn partition_identity_check(m: usize, x: &PointConfig, z: f64, p: &Params) -> Result<PartitionResidual> {
    let n = x.len();
    if x.d() != p.d() {
        return Err(Error::input("configuration and parameter dimensions differ"));
    }
    if n > MAX_ENUMERATED {
        return Err(Error::input(format!("partition enumeration supports N ≤ {MAX_ENUMERATED}")));
    }
    if n < 3 || m == 0 || m > n - 2 {
        return Err(Error::input("need N ≥ 3 and 1 ≤ M ≤ N − 2"));
    }
    x.require_distinct()?;
    let k = n - m;
    let (mf, kf, nf) = (m as f64, k as f64, n as f64);
    let denom = 2.0 * z * mf * kf - z * z * kf * (kf - 1.0);
    if denom.abs() < 1e-300 || !denom.is_finite() {
        return Err(Error::input("degenerate prefactor 2ZMK − Z²K(K−1) = 0"));
    }
    let e = -p.s();
    let mut w = vec![0.0; n * n];
    let mut lhs = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let v = dist2(x.point(i), x.point(j)).powf(e);
            w[i * n + j] = v;
            w[j * n + i] = v;
            lhs += v;
        }
    }
    let mut sum = 0.0;
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != m {
            continue;
        }
        let mut attract = 0.0;
        let mut repel = 0.0;
        for i in 0..n {
            let ei = mask >> i & 1 == 1;
            for j in i + 1..n {
                let ej = mask >> j & 1 == 1;
                match (ei, ej) {
                    (true, false) | (false, true) => attract += w[i * n + j],
                    (false, false) => repel += w[i * n + j],
                    _ => {}
                }
            }
        }
        sum += z * attract - z * z * repel;
    }
    let rhs = mf * (nf - 1.0) / denom * (nf / mf) / binomial(n, m) * sum;
    Ok(PartitionResidual { lhs, rhs, relative: (lhs - rhs).abs() / lhs.abs() })
}

/// All (N, M) with 3 ≤ N ≤ max_n and 1 ≤ M ≤ N − 2.
pub fn partition_cases(max_n: usize) -> Vec<(usize, usize)> {
    (3..=max_n).flat_map(|n| (1..=n - 2).map(move |m| (n, m))).collect()
}

/// For each (N, M), `opts.trials` random X ∈ [−1, 1)^{dN}, each with two random
/// Z ∈ [0.1, 2); violation when the relative residual exceeds 1e−10.
pub fn partition_sweep(p: &Params, opts: &SweepOptions, cases: &[(usize, usize)]) -> Result<SweepReport> {
    let d = p.d();
    let mut outcomes = Vec::with_capacity(2 * opts.trials * cases.len());
    let mut t = 0;
    for &(n, m) in cases {
        for _ in 0..opts.trials {
            let mut rng = trial_rng(opts.seed, t);
            t += 1;
            let x = PointConfig::new(d, (0..n * d).map(|_| rng.gen_range(-1.0..1.0)).collect())?;
            let k = (n - m) as f64;
            for _ in 0..2 {
                // keep Z away from the root 2M/(K − 1) of the prefactor
                let mut z = rng.gen_range(0.1..2.0);
                if k > 1.0 && (z - 2.0 * m as f64 / (k - 1.0)).abs() < 1e-3 {
                    z *= 0.5;
                }
                let r = partition_identity_check(m, &x, z, p)?;
                outcomes.push((r.relative, !(r.relative <= 1e-10)));
            }
        }
    }
    let mut rep = SweepReport::new("partition", opts.seed, opts.samples).absorb(&outcomes);
    rep.d = Some(d);
    rep.s = Some(p.s());
    let list = cases.iter().map(|(n, m)| format!("({n},{m})")).collect::<Vec<_>>().join(" ");
    Ok(rep.range("(N,M)", list).range("Z", "[0.1, 2), two per X").range("X", format!("uniform [-1, 1)^{d}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PlanMode {
    /// Z = M/K with K = ⌊N^{s/d + 1/2}⌋.
    Main,
    /// λ = τ/2, α/λ = M/K, K = ⌊ε τ^{−1} N^{2s/d}⌋.
    AppendixA,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevyLeblondPlan {
    pub mode: PlanMode,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    /// Z in the main mode, λ in the appendix mode.
    pub z_or_lambda: f64,
    pub alpha: Option<f64>,
    pub kappa_target: Option<f64>,
    /// M(N − 1)/(2ZMK − Z²K(K − 1)) in the main mode.
    pub prefactor: Option<f64>,
}

pub const DEFAULT_EPSILON: f64 = 0.5;

pub fn levy_leblond_plan(n: usize, p: &Params, tau: f64, mode: PlanMode, epsilon: f64) -> Result<LevyLeblondPlan> {
    if n < 3 {
        return Err(Error::input("the partition plan needs N ≥ 3"));
    }
    let nf = n as f64;
    let (d, s) = (p.df(), p.s());
    match mode {
        PlanMode::Main => {
            let k = nf.powf(s / d + 0.5).floor() as usize;
            if k + 1 >= n || k < 2 {
                return Err(Error::input(format!("K = {k} leaves no admissible M for N = {n}")));
            }
            let m = n - k;
            let (mf, kf) = (m as f64, k as f64);
            let z = mf / kf;
            let prefactor = mf * (nf - 1.0) / (2.0 * z * mf * kf - z * z * kf * (kf - 1.0));
            Ok(LevyLeblondPlan { mode, n, m, k, z_or_lambda: z, alpha: None, kappa_target: None, prefactor: Some(prefactor) })
        }
        PlanMode::AppendixA => {
            if !(tau > 0.0) || !(epsilon > 0.0) {
                return Err(Error::input("τ and ε must be positive"));
            }
            let kr = (epsilon / tau * nf.powf(2.0 * s / d)).floor();
            if kr < 1.0 || kr >= nf - 1.0 {
                return Err(Error::input(format!("K = {kr} leaves no admissible M for N = {n}")));
            }
            let k = kr as usize;
            let m = n - k;
            let (mf, kf) = (m as f64, k as f64);
            let lambda = tau / 2.0;
            let alpha = lambda * mf / kf;
            let kappa = tau * (kf + 1.0) / (2.0 * (nf - 1.0));
            Ok(LevyLeblondPlan {
                mode,
                n,
                m,
                k,
                z_or_lambda: lambda,
                alpha: Some(alpha),
                kappa_target: Some(kappa),
                prefactor: None,
            })
        }
    }
}

impl LevyLeblondPlan {
    /// Residuals of λM + αK = τM and 2λMK − αK(K−1) = κM(N−1), relative to τM.
    pub fn requirement_residuals(&self, tau: f64) -> Option<(f64, f64)> {
        let (alpha, kappa) = (self.alpha?, self.kappa_target?);
        let (m, k, n) = (self.m as f64, self.k as f64, self.n as f64);
        let l = self.z_or_lambda;
        let scale = tau * m;
        Some((
            (l * m + alpha * k - tau * m).abs() / scale,
            (2.0 * l * m * k - alpha * k * (k - 1.0) - kappa * m * (n - 1.0)).abs() / scale,
        ))
    }
}
