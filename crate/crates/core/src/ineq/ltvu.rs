//! Integral step of the Lieb–Thirring bound for V_R:
//! ∫V_R^{1+d/2s} ≤ C K^{(d−2s)/2s} U_R, with C = max(2C_pair, |S^{d−1}|2^{2s}/2s)
//! where C_pair = ∫|y|^{−a}|y − e|^{−a}dy, a = (d + 2s)/2.

use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{voronoi_potentials, PointConfig};
use crate::ineq::{trial_rng, SweepOptions, SweepReport};
use crate::params::{sphere_area, Params};
use crate::quad::gl;
use crate::special::gamma;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LtvuCheck {
    /// ∫V_R^{1+d/2s}.
    pub lhs: f64,
    /// K^{(d−2s)/2s} U_R.
    pub rhs: f64,
    pub ratio: f64,
}

/// ∫_{R^d}|y|^{−α}|y − e|^{−β}dy for α, β < d < α + β.
fn riesz_composition(d: usize, alpha: f64, beta: f64) -> Result<f64> {
    let df = d as f64;
    Ok(PI.powf(0.5 * df) * gamma(0.5 * (df - alpha))? * gamma(0.5 * (df - beta))? * gamma(0.5 * (alpha + beta - df))?
        / (gamma(0.5 * alpha)? * gamma(0.5 * beta)? * gamma(df - 0.5 * (alpha + beta))?))
}

pub fn ltvu_constant(p: &Params) -> Result<f64> {
    p.require_subcritical()?;
    let a = 0.5 * (p.df() + p.lambda());
    let pair = riesz_composition(p.d(), a, a)?;
    let edge = sphere_area(p.d()) * 2f64.powf(p.lambda()) / p.lambda();
    Ok((2.0 * pair).max(edge))
}

/// Unit directions with weights summing to |S^{d−1}|; `n` polar nodes.
fn directions(d: usize, n: usize) -> Result<Vec<(Vec<f64>, f64)>> {
    match d {
        1 => Ok(vec![(vec![1.0], 1.0), (vec![-1.0], 1.0)]),
        2 => Ok((0..2 * n)
            .map(|j| {
                let t = PI * (j as f64 + 0.5) / n as f64;
                (vec![t.cos(), t.sin()], PI / n as f64)
            })
            .collect()),
        3 => {
            let mut out = Vec::with_capacity(2 * n * n);
            for (c, w) in gl(n).mapped(-1.0, 1.0) {
                let sn = (1.0 - c * c).sqrt();
                for j in 0..2 * n {
                    let f = PI * (j as f64 + 0.5) / n as f64;
                    out.push((vec![sn * f.cos(), sn * f.sin(), c], w * PI / n as f64));
                }
            }
            Ok(out)
        }
        _ => Err(Error::input("the Voronoi integral supports d ≤ 3")),
    }
}

/// ∫V_R^{1+d/2s} cell by cell in polar coordinates about each R_k, where
/// V_R = Σ_{l≠k}|y − R_l|^{−2s} and the ray leaves the cell at the nearest bisector.
fn voronoi_integral(r: &PointConfig, p: &Params, n: usize) -> Result<f64> {
    let d = p.d();
    let e = -p.s();
    let pw = 1.0 + p.df() / p.lambda();
    let two_s = p.lambda();
    let rule = gl(RAY_ORDER);
    let dirs = directions(d, n)?;
    let k_count = r.len();
    let cells: Vec<f64> = (0..k_count)
        .into_par_iter()
        .map(|k| {
            let rk = r.point(k);
            let others: Vec<Vec<f64>> =
                (0..k_count).filter(|&l| l != k).map(|l| r.point(l).iter().zip(rk).map(|(a, b)| a - b).collect()).collect();
            let reach = others.iter().map(|v| v.iter().map(|a| a * a).sum::<f64>().sqrt()).fold(0.0, f64::max);
            let mut total = 0.0;
            let mut y = vec![0.0; d];
            for (u, w) in &dirs {
                let r_max = others
                    .iter()
                    .filter_map(|v| {
                        let proj: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
                        (proj > 0.0).then(|| v.iter().map(|a| a * a).sum::<f64>() / (2.0 * proj))
                    })
                    .fold(f64::INFINITY, f64::min);
                let mut f = |t: f64| {
                    let mut v = 0.0;
                    for o in &others {
                        let mut r2 = 0.0;
                        for i in 0..d {
                            y[i] = t * u[i] - o[i];
                            r2 += y[i] * y[i];
                        }
                        v += r2.powf(e);
                    }
                    t.powi(d as i32 - 1) * v.powf(pw)
                };
                // [0, r1] by panels; beyond r1 the integrand is ≈ c r^{−1−2s} and
                // r = r1 v^{−1/2s} makes it nearly constant in v
                let r1 = r_max.min(2.0 * reach);
                let mut ray: f64 = (0..RAY_PANELS)
                    .map(|j| {
                        let (a, b) = (r1 * j as f64 / RAY_PANELS as f64, r1 * (j + 1) as f64 / RAY_PANELS as f64);
                        rule.mapped(a, b).map(|(t, wt)| wt * f(t)).sum::<f64>()
                    })
                    .sum();
                if r_max > r1 {
                    let v_lo = if r_max.is_finite() { (r1 / r_max).powf(two_s) } else { 0.0 };
                    ray += rule
                        .mapped(v_lo, 1.0)
                        .map(|(v, wt)| {
                            let t = r1 * v.powf(-1.0 / two_s);
                            wt * f(t) * t / (two_s * v)
                        })
                        .sum::<f64>();
                }
                if !ray.is_finite() {
                    return Err(Error::numerical("Voronoi ray integral is not finite"));
                }
                total += w * ray;
            }
            Ok(total)
        })
        .collect::<Result<_>>()?;
    Ok(cells.iter().sum())
}

pub const DEFAULT_ANGULAR: usize = 12;
const RAY_PANELS: usize = 4;
const RAY_ORDER: usize = 16;

/// `angular` polar nodes per cell (2 directions in d = 1).
pub fn ltvu_integral_check(r: &PointConfig, p: &Params, angular: usize) -> Result<LtvuCheck> {
    p.require_subcritical()?;
    if r.d() != p.d() {
        return Err(Error::input("configuration and parameter dimensions differ"));
    }
    if angular == 0 || angular > 64 {
        return Err(Error::input("angular resolution must lie in 1..=64"));
    }
    let vp = voronoi_potentials(r, p)?;
    let kf = r.len() as f64;
    let rhs = kf.powf((p.df() - p.lambda()) / p.lambda()) * vp.u_r;
    let lhs = voronoi_integral(r, p, angular)?;
    Ok(LtvuCheck { lhs, rhs, ratio: lhs / rhs })
}

/// Random K ∈ [2, 8] configurations in [−1, 1]^d; `opts.samples` is the angular resolution.
pub fn ltvu_sweep(p: &Params, opts: &SweepOptions) -> Result<SweepReport> {
    let c = ltvu_constant(p)?;
    let d = p.d();
    let outcomes: Vec<(f64, bool)> = (0..opts.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(opts.seed, t);
            let k = rng.gen_range(2..=8usize);
            let r = loop {
                let coords: Vec<f64> = (0..k * d).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let r = PointConfig::new(d, coords)?;
                if r.all_delta_k()?.iter().all(|x| *x > 1e-3) {
                    break r;
                }
            };
            let chk = ltvu_integral_check(&r, p, opts.samples)?;
            Ok((chk.ratio, !(chk.ratio <= c)))
        })
        .collect::<Result<_>>()?;
    let mut rep = SweepReport::new("ltvu", opts.seed, opts.samples).absorb(&outcomes);
    rep.d = Some(d);
    rep.s = Some(p.s());
    rep.proof_constant = Some(c);
    Ok(rep.range("K", "2..8").range("R", format!("uniform [-1, 1)^{d}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_closed_form() {
        // d = 3, α = β = 2: ∫|y|^{−2}|y − e|^{−2} = π³
        assert!((riesz_composition(3, 2.0, 2.0).unwrap() - PI.powi(3)).abs() < 1e-10);
    }

    #[test]
    fn one_dimensional_pair_by_hand() {
        // K = 2 at unit separation, d = 1: V = |y − other|^{−2s} on each half-line
        let p = Params::new(1, 0.25, false).unwrap();
        let r = PointConfig::new(1, vec![0.0, 1.0]).unwrap();
        let chk = ltvu_integral_check(&r, &p, 1).unwrap();
        // each cell contributes ∫_{1/2}^∞ x^{−1−2s} dx, x the distance to the other centre
        let ps = 2.0 * p.s();
        let want = 2.0 * (0.5f64.powf(-ps) / ps);
        assert!((chk.lhs - want).abs() < 1e-8 * want, "{} {want}", chk.lhs);
    }

    #[test]
    fn scale_invariant_and_bounded() {
        let p = Params::new(3, 0.5, false).unwrap();
        let r = PointConfig::new(3, vec![0.0, 0.0, 0.0, 1.0, 0.2, 0.0, -0.3, 0.8, 0.5]).unwrap();
        let a = ltvu_integral_check(&r, &p, 16).unwrap();
        let b = ltvu_integral_check(&r.scaled(2.5), &p, 16).unwrap();
        assert!((a.ratio / b.ratio - 1.0).abs() < 1e-8);
        assert!((b.lhs / a.lhs - 2.5f64.powf(-1.0)).abs() < 1e-8);
        assert!(a.ratio < ltvu_constant(&p).unwrap());
    }

    #[test]
    fn two_centres_refine() {
        let p = Params::new(3, 0.5, false).unwrap();
        let r = PointConfig::new(3, vec![0.0, 0.0, 0.0, 1.0, 0.0, 0.0]).unwrap();
        let coarse = ltvu_integral_check(&r, &p, DEFAULT_ANGULAR).unwrap();
        let fine = ltvu_integral_check(&r, &p, 64).unwrap();
        assert!((coarse.ratio / fine.ratio - 1.0).abs() < 0.02);
        // each cell is a half-space at distance 1/2 from the other centre:
        // ∫_{x₁>1/2}|x|^{−4}dx = ∫_{1/2}^∞ π/z² dz = 2π, and rhs = 2²·3
        assert!((fine.ratio - PI / 3.0).abs() < 1e-3 * PI, "{}", fine.ratio);
    }

    #[test]
    fn random_cluster_converges_in_angle() {
        let p = Params::new(2, 0.5, false).unwrap();
        let r = PointConfig::new(2, vec![0.0, 0.0, 0.9, 0.1, -0.4, 0.7, 0.3, -0.8, 0.5, 0.5]).unwrap();
        let a = ltvu_integral_check(&r, &p, DEFAULT_ANGULAR).unwrap();
        let b = ltvu_integral_check(&r, &p, 64).unwrap();
        assert!((a.ratio / b.ratio - 1.0).abs() < 0.03, "{} {}", a.ratio, b.ratio);
        // midpoint sum over the disk |y| < 30 plus the far field V ≈ 4/|y|, p = 3
        let vp = voronoi_potentials(&r, &p).unwrap();
        let h = 0.01;
        let n = 6000;
        let mut sum = 0.0;
        for i in 0..n {
            for j in 0..n {
                let y = [-30.0 + (i as f64 + 0.5) * h, -30.0 + (j as f64 + 0.5) * h];
                if y[0] * y[0] + y[1] * y[1] < 900.0 {
                    sum += vp.v(&y).powi(3);
                }
            }
        }
        sum *= h * h;
        sum += 4f64.powi(3) * 2.0 * PI / 30.0;
        assert!((b.lhs / sum - 1.0).abs() < 2e-3, "{} {sum}", b.lhs);
    }
}
