use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{dist2, PointConfig};
use crate::params::unit_ball_volume;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SublevelVolume {
    pub measured: f64,
    /// Monte-Carlo standard error; zero when the volume is exact.
    pub stderr: f64,
    /// ω_d K λ^d.
    pub bound: f64,
    pub exact: bool,
}

/// Volume of {y : δ_R(y) < threshold}.
pub fn sublevel_volume(r: &PointConfig, threshold: f64, samples: usize, seed: u64) -> Result<SublevelVolume> {
    if !(threshold > 0.0) {
        return Err(Error::input("threshold must be positive"));
    }
    let d = r.d();
    let k = r.len();
    let bound = unit_ball_volume(d) * k as f64 * threshold.powi(d as i32);
    let t2 = 4.0 * threshold * threshold;
    let disjoint = (0..k).all(|i| (i + 1..k).all(|j| dist2(r.point(i), r.point(j)) >= t2));
    if disjoint {
        return Ok(SublevelVolume { measured: bound, stderr: 0.0, bound, exact: true });
    }
    if samples == 0 {
        return Err(Error::input("overlapping balls need a positive sample count"));
    }
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for p in r.points() {
        for i in 0..d {
            lo[i] = lo[i].min(p[i] - threshold);
            hi[i] = hi[i].max(p[i] + threshold);
        }
    }
    let box_vol: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let thr2 = threshold * threshold;
    let mut y = vec![0.0; d];
    let mut hits = 0usize;
    for _ in 0..samples {
        for i in 0..d {
            y[i] = rng.gen_range(lo[i]..hi[i]);
        }
        if r.points().any(|p| dist2(p, &y) < thr2) {
            hits += 1;
        }
    }
    let f = hits as f64 / samples as f64;
    Ok(SublevelVolume {
        measured: f * box_vol,
        stderr: box_vol * (f * (1.0 - f) / samples as f64).sqrt(),
        bound,
        exact: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_cases() {
        let one = PointConfig::new(3, vec![0.0; 3]).unwrap();
        let v = sublevel_volume(&one, 1.0, 0, 1).unwrap();
        assert!(v.exact && v.measured == v.bound);
        let two = PointConfig::new(3, vec![0.0, 0.0, 0.0, 10.0, 0.0, 0.0]).unwrap();
        let v = sublevel_volume(&two, 1.0, 0, 1).unwrap();
        assert!(v.exact && v.measured == v.bound);
    }

    #[test]
    fn overlapping_pair_below_bound() {
        let r = PointConfig::new(3, vec![0.0, 0.0, 0.0, 0.1, 0.0, 0.0]).unwrap();
        let v = sublevel_volume(&r, 1.0, 200_000, 3).unwrap();
        // union of two unit balls at distance 0.1: 2ω − lens
        let lens = crate::riesz::fdll::lens_volume(3, 1.0, 0.1);
        let want = 2.0 * unit_ball_volume(3) - lens;
        assert!((v.measured - want).abs() < 4.0 * v.stderr);
        assert!(v.measured < v.bound);
    }
}
