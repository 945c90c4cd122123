//! Sweeps for the sublevel-volume bound |{δ_R < t}| ≤ ω_d K t^d and for the
//! ball-decomposition reconstruction of |y − y'|^{−λ}.

use rand::Rng;
use rayon::prelude::*;

use crate::error::Result;
use crate::geometry::PointConfig;
use crate::ineq::{trial_rng, trial_seed, SweepOptions, SweepReport};
use crate::riesz::fdll::DEFAULT_RESOLUTION;
use crate::riesz::{sublevel_volume, Fdll, RieszKernel};

/// Standard errors of Monte-Carlo slack allowed before a trial counts as a violation.
pub const SUBLEVEL_SIGMAS: f64 = 5.0;

/// d cycling through 1..3, K ∈ [1, 6] points in [−1, 1)^d, threshold in [0.05, 1);
/// the empirical constant is max measured/bound.
pub fn sublevel_sweep(opts: &SweepOptions) -> Result<SweepReport> {
    let outcomes: Vec<(f64, bool)> = (0..opts.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(opts.seed, t);
            let d = 1 + t % 3;
            let k = rng.gen_range(1..=6usize);
            let r = PointConfig::new(d, (0..k * d).map(|_| rng.gen_range(-1.0..1.0)).collect())?;
            let thr = rng.gen_range(0.05..1.0);
            let v = sublevel_volume(&r, thr, opts.samples, trial_seed(opts.seed, t))?;
            Ok((v.measured / v.bound, v.measured > v.bound + SUBLEVEL_SIGMAS * v.stderr))
        })
        .collect::<Result<_>>()?;
    let rep = SweepReport::new("sublevel", opts.seed, opts.samples).absorb(&outcomes);
    Ok(rep.range("d", "1, 2, 3").range("K", "1..6").range("threshold", "[0.05, 1)"))
}

const FDLL_KERNELS: [(usize, f64); 5] = [(1, 0.5), (2, 1.0), (3, 0.5), (3, 1.0), (3, 2.0)];

/// Reconstruct |y − y'|^{−λ} at 20 log-spaced distances in [0.1, 10] for several
/// (d, λ); violation when the relative error exceeds 1e−3.
pub fn fdll_sweep(resolution: usize) -> Result<SweepReport> {
    let resolution = if resolution == 0 { DEFAULT_RESOLUTION } else { resolution };
    let mut outcomes = Vec::new();
    for (d, lam) in FDLL_KERNELS {
        let f = Fdll::new(RieszKernel::new(d, lam)?)?;
        for i in 0..20 {
            let t = 10f64.powf(-1.0 + 2.0 * i as f64 / 19.0);
            let mut y = vec![0.0; d];
            y[d - 1] = t;
            let v = f.reconstruct(&vec![0.0; d], &y, resolution)?;
            let rel = (v * t.powf(lam) - 1.0).abs();
            outcomes.push((rel, !(rel <= 1e-3)));
        }
    }
    let rep = SweepReport::new("fdll", 0, resolution).absorb(&outcomes);
    Ok(rep.range("kernels", "(1,0.5) (2,1) (3,0.5) (3,1) (3,2)").range("distance", "20 log-spaced in [0.1, 10]"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sublevel_within_three_sigma() {
        for t in 0..100 {
            let mut rng = trial_rng(11, t);
            let d = 1 + t % 3;
            let k = rng.gen_range(1..=6usize);
            let r = PointConfig::new(d, (0..k * d).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
            let v = sublevel_volume(&r, rng.gen_range(0.05..1.0), 20_000, t as u64).unwrap();
            assert!(v.measured <= v.bound + 3.0 * v.stderr, "trial {t}: {v:?}");
        }
        let rep = sublevel_sweep(&SweepOptions { trials: 50, seed: 11, samples: 20_000 }).unwrap();
        assert!(rep.passed() && rep.trials == 50);
    }

    #[test]
    fn fdll_all_distances() {
        let rep = fdll_sweep(DEFAULT_RESOLUTION).unwrap();
        assert_eq!(rep.trials, 100);
        assert!(rep.passed(), "{}", rep.empirical_constant);
    }
}
