//! Scalar inequalities: ½(|ξ+ζ|^{2s} + |ξ−ζ|^{2s}) ≤ (|ξ|² + |ζ|²)^s ≤ |ξ|^{2s} + |ζ|^{2s}
//! for ½ < s ≤ 1, and the screened count Z n K' − ½Z²K'(K'−1) − ½n² ≤ Z n 1(K' ≥ 1).

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ineq::{trial_rng, SweepOptions, SweepReport};

const REL_TOL: f64 = 1e-12;

/// The three members of the chain, in order.
pub fn elementary_terms(s: f64, xi: &[f64], zeta: &[f64]) -> [f64; 3] {
    let n2 = |v: &mut dyn Iterator<Item = f64>| v.map(|x| x * x).sum::<f64>();
    let plus = n2(&mut xi.iter().zip(zeta).map(|(a, b)| a + b));
    let minus = n2(&mut xi.iter().zip(zeta).map(|(a, b)| a - b));
    let a = n2(&mut xi.iter().cloned());
    let b = n2(&mut zeta.iter().cloned());
    [0.5 * (plus.powf(s) + minus.powf(s)), (a + b).powf(s), a.powf(s) + b.powf(s)]
}

/// Random (ξ, ζ) ∈ R^d × R^d with independent log-uniform scales; the constant
/// reported is the larger of the two ratios left/middle and middle/right.
pub fn elementary_scan(s: f64, d: usize, opts: &SweepOptions) -> Result<SweepReport> {
    if !(s > 0.5 && s <= 1.0) {
        return Err(Error::params("the elementary inequality needs ½ < s ≤ 1"));
    }
    if d == 0 {
        return Err(Error::input("d must be positive"));
    }
    let chunk = 4096;
    let chunks = opts.trials.div_ceil(chunk);
    let outcomes: Vec<(f64, bool)> = (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut rng = trial_rng(opts.seed, c);
            let count = chunk.min(opts.trials - c * chunk);
            (0..count)
                .map(|_| {
                    let sa = 10f64.powf(rng.gen_range(-3.0..3.0));
                    let sb = 10f64.powf(rng.gen_range(-3.0..3.0));
                    let xi: Vec<f64> = (0..d).map(|_| sa * rng.sample::<f64, _>(StandardNormal)).collect();
                    let zeta: Vec<f64> = (0..d).map(|_| sb * rng.sample::<f64, _>(StandardNormal)).collect();
                    let [l, m, r] = elementary_terms(s, &xi, &zeta);
                    let bad = l > m * (1.0 + REL_TOL) || m > r * (1.0 + REL_TOL);
                    ((l / m).max(m / r), bad)
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let mut rep = SweepReport::new("elementary", opts.seed, opts.trials).absorb(&outcomes);
    rep.d = Some(d);
    rep.s = Some(s);
    rep.proof_constant = Some(1.0);
    Ok(rep.range("scale", "log-uniform 1e-3..1e3 per vector").range("direction", "Gaussian"))
}

pub fn screened_lhs(z: f64, n: f64, kp: u32) -> f64 {
    let k = kp as f64;
    z * n * k - 0.5 * z * z * k * (k - 1.0) - 0.5 * n * n
}

pub fn screened_rhs(z: f64, n: f64, kp: u32) -> f64 {
    if kp >= 1 {
        z * n
    } else {
        0.0
    }
}

/// Random n ∈ [0, 60), Z log-uniform in [0.01, 100], K' ∈ {0, …, 50}.
pub fn screened_count_scan(opts: &SweepOptions) -> Result<SweepReport> {
    let chunk = 4096;
    let chunks = opts.trials.div_ceil(chunk);
    let outcomes: Vec<(f64, bool)> = (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut rng = trial_rng(opts.seed, c);
            let count = chunk.min(opts.trials - c * chunk);
            (0..count)
                .map(|_| {
                    let n = rng.gen_range(0.0..60.0);
                    let z = 10f64.powf(rng.gen_range(-2.0..2.0));
                    let kp = rng.gen_range(0..=50u32);
                    let (l, r) = (screened_lhs(z, n, kp), screened_rhs(z, n, kp));
                    let bad = l > r + REL_TOL * (r.abs() + 0.5 * n * n + z * n * kp as f64);
                    let ratio = if r > 0.0 { l / r } else { f64::NEG_INFINITY };
                    (ratio, bad)
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let mut rep = SweepReport::new("screened", opts.seed, opts.trials).absorb(&outcomes);
    rep.proof_constant = Some(1.0);
    Ok(rep.range("n", "[0, 60)").range("Z", "log-uniform [0.01, 100)").range("K'", "0..=50"))
}
