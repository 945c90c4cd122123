//! Pair interaction of a Slater state through its exchange hole,
//! Σ_{n<m} ∫|u|²|X_n − X_m|^{−2s} = ½ ∬ (ρρ' − |γ|²) |x − x'|^{−2s}.
//!
//! For mollified plane waves ρρ' − |γ|² = L^{−2d} η(x)η(x')(N² − |S(x − x')|²) with
//! S(r) = Σ_p e^{ip·r}, so the double integral collapses to one over r weighted by
//! W(r) = ∫η(x)η(x + r)dx, a product of one-dimensional autocorrelations.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft::{fftn, good_size};
use crate::manybody::slater::{slater_kinetic, SlaterState};
use crate::params::Params;
use crate::quad::gauss_kronrod;
use crate::special::bessel_j1;

/// Cutoff C of the region Ω = {√μ|x − x'| > C}.
pub const DEFAULT_CUTOFF: f64 = 1.0;
/// Grid points per Fermi wavelength-scale 2π/√μ.
pub const DEFAULT_RESOLUTION: f64 = 16.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InteractionOptions {
    pub cutoff: f64,
    pub resolution: f64,
}

impl Default for InteractionOptions {
    fn default() -> Self {
        InteractionOptions { cutoff: DEFAULT_CUTOFF, resolution: DEFAULT_RESOLUTION }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InteractionReport {
    /// Full interaction with the exact pair weight W.
    pub estimate: f64,
    /// Restriction to Ω and to pairs inside Q_{L−ℓ}, where η = 1.
    pub lower_bound: f64,
    /// Full weight W restricted to Ω.
    pub omega_estimate: f64,
    pub cutoff: f64,
    pub grid: usize,
}

/// S on the periodic grid r = jL/M, j ∈ [0, M)^d.
fn phase_sum_grid(state: &SlaterState, m: usize) -> Vec<Complex64> {
    let d = state.d;
    let total = m.pow(d as u32);
    let mut buf = vec![Complex64::new(0.0, 0.0); total];
    for mm in &state.momenta {
        let mut idx = 0usize;
        for x in mm {
            idx = idx * m + x.rem_euclid(m as i64) as usize;
        }
        buf[idx] += 1.0;
    }
    fftn(&mut buf, &vec![m; d], true);
    buf
}

fn grid_size(state: &SlaterState, resolution: f64) -> usize {
    let waves = state.fermi_mu.sqrt() * state.l / (2.0 * PI);
    good_size(((resolution * waves).ceil() as usize).max(64))
}

pub fn slater_interaction(state: &SlaterState, p: &Params, opts: &InteractionOptions) -> Result<InteractionReport> {
    if p.d() != state.d {
        return Err(Error::input("state and parameter dimensions differ"));
    }
    if !(opts.cutoff > 0.0) || !(opts.resolution >= 2.0) {
        return Err(Error::input("cutoff must be positive and resolution ≥ 2"));
    }
    let d = state.d;
    let s = p.s();
    let l = state.l;
    let ell = state.ell();
    let n = state.n() as f64;
    let m = grid_size(state, opts.resolution);
    let hr = l / m as f64;
    let sgrid = phase_sum_grid(state, m);
    let reach = l + ell;
    let jmax = (reach / hr).ceil() as i64;
    let width = (2 * jmax + 1) as usize;
    let auto: Vec<f64> = (0..=jmax).map(|j| state.mollifier.eta1_autocorrelation(j as f64 * hr)).collect();
    let inner: Vec<f64> = (0..=jmax).map(|j| (l - ell - j as f64 * hr).max(0.0)).collect();
    let cut2 = opts.cutoff * opts.cutoff / state.fermi_mu;
    let rows = width.pow(d as u32 - 1);
    let sums = (0..width)
        .into_par_iter()
        .map(|first| {
            let mut acc = [0.0f64; 3];
            let mut j = vec![0i64; d];
            for rest in 0..rows {
                let mut r = rest;
                j[0] = first as i64 - jmax;
                for k in 1..d {
                    j[k] = (r % width) as i64 - jmax;
                    r /= width;
                }
                let r2: f64 = j.iter().map(|x| (*x as f64 * hr).powi(2)).sum();
                if r2 == 0.0 {
                    continue;
                }
                let mut idx = 0usize;
                let mut wex = 1.0;
                let mut wlo = 1.0;
                for x in &j {
                    idx = idx * m + x.rem_euclid(m as i64) as usize;
                    wex *= auto[x.unsigned_abs() as usize];
                    wlo *= inner[x.unsigned_abs() as usize];
                }
                if wex == 0.0 {
                    continue;
                }
                let hole = (n * n - sgrid[idx].norm_sqr()).max(0.0) * r2.powf(-s);
                acc[0] += hole * wex;
                if r2 > cut2 {
                    acc[1] += hole * wlo;
                    acc[2] += hole * wex;
                }
            }
            acc
        })
        .reduce(|| [0.0; 3], |a, b| [a[0] + b[0], a[1] + b[1], a[2] + b[2]]);
    // the exchange hole at r = 0: (N² − |S|²)/|r|² → (2NΣ|p|² − 2|Σp|²)/(2d) on average
    let origin = if s == 1.0 {
        let (sum_sq, net) = state.momentum_moments();
        (2.0 * n * sum_sq - 2.0 * net) / (2.0 * d as f64) * auto[0].powi(d as i32)
    } else {
        0.0
    };
    let scale = 0.5 * l.powi(-2 * d as i32) * hr.powi(d as i32);
    Ok(InteractionReport {
        estimate: scale * (sums[0] + origin),
        lower_bound: scale * sums[1],
        omega_estimate: scale * sums[2],
        cutoff: opts.cutoff,
        grid: m,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuotientReport {
    pub n: usize,
    pub kinetic: f64,
    pub interaction: InteractionReport,
    /// kinetic / lower-bound interaction: an upper bound for κ_N.
    pub quotient: f64,
    pub quotient_estimate: f64,
}

pub fn hardy_quotient(state: &SlaterState, p: &Params, opts: &InteractionOptions) -> Result<QuotientReport> {
    if state.n() < 2 {
        return Err(Error::input("a single particle has no interaction"));
    }
    let kinetic = slater_kinetic(state, p)?;
    let interaction = slater_interaction(state, p, opts)?;
    if !(interaction.lower_bound > 0.0) {
        return Err(Error::numerical("interaction lower bound vanished; lower the cutoff"));
    }
    Ok(QuotientReport {
        n: state.n(),
        kinetic,
        quotient: kinetic / interaction.lower_bound,
        quotient_estimate: kinetic / interaction.estimate,
        interaction,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IEpsilon {
    pub value: f64,
    /// False when ε ≥ √2 leaves no admissible pairs.
    pub admissible: bool,
}

/// ∬_{Q₁×Q₁} 1(|y − y'| ≥ ε) |y − y'|^{−2} dy dy'.
pub fn i_epsilon(eps: f64) -> Result<IEpsilon> {
    if !(eps > 0.0) {
        return Err(Error::input("ε must be positive"));
    }
    if eps >= 2f64.sqrt() {
        return Ok(IEpsilon { value: 0.0, admissible: false });
    }
    // polar coordinates in r = y − y' with weight (1 − r cos θ)(1 − r sin θ), 8-fold symmetry
    let big_f = |r: f64, c: f64, s: f64| r.ln() - r * (c + s) + 0.5 * r * r * c * s;
    let theta0 = if eps > 1.0 { (1.0 / eps).acos() } else { 0.0 };
    let res = gauss_kronrod(
        |th| {
            let (s, c) = th.sin_cos();
            big_f(1.0 / c, c, s) - big_f(eps, c, s)
        },
        theta0,
        0.25 * PI,
        1e-14,
        1e-13,
        200,
    );
    if !res.converged {
        return Err(Error::numerical("I(ε) quadrature did not converge"));
    }
    Ok(IEpsilon { value: 8.0 * res.value, admissible: true })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectTerm {
    /// ∬_{Ω, both in Q_{L−ℓ}} ρρ'|x − x'|^{−2}.
    pub value: f64,
    /// (1/16π) μ² L² ln N.
    pub reference: f64,
    pub ratio: f64,
}

pub fn direct_term(state: &SlaterState, cutoff: f64) -> Result<DirectTerm> {
    if state.d != 2 {
        return Err(Error::input("the direct-term reduction is two-dimensional"));
    }
    let (l, ell, n, mu) = (state.l, state.ell(), state.n() as f64, state.fermi_mu);
    let side = l - ell;
    let eps = cutoff / (mu.sqrt() * side);
    let value = n * n * l.powi(-4) * side * side * i_epsilon(eps)?.value;
    let reference = mu * mu * l * l * n.ln() / (16.0 * PI);
    Ok(DirectTerm { value, reference, ratio: value / reference })
}

/// The continuum limit of L^{−2}S: (2π)^{−1}√μ J₁(√μ r)/r.
pub fn bessel_kernel(mu: f64, r: f64) -> f64 {
    let k = mu.sqrt();
    if r * k < 1e-8 {
        return mu / (4.0 * PI);
    }
    k * bessel_j1(k * r) / (2.0 * PI * r)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExchangeBound {
    /// sup over C/√μ ≤ |r| ≤ L/2 of |L^{−2}S(r)|·|r|/√μ.
    pub sup: f64,
    pub argmax: [f64; 2],
    pub points: usize,
}

pub fn exchange_lattice_bound(state: &SlaterState, cutoff: f64, resolution: f64) -> Result<ExchangeBound> {
    if state.d != 2 {
        return Err(Error::input("the exchange lattice bound is two-dimensional"));
    }
    let m = grid_size(state, resolution);
    let sgrid = phase_sum_grid(state, m);
    let (l, mu) = (state.l, state.fermi_mu);
    let hr = l / m as f64;
    let (lo, hi) = (cutoff / mu.sqrt(), 0.5 * l);
    let mut best = ExchangeBound { sup: 0.0, argmax: [0.0, 0.0], points: 0 };
    let half = (m / 2) as i64;
    for a in -half..=half {
        for b in -half..=half {
            let r = [a as f64 * hr, b as f64 * hr];
            let rn = (r[0] * r[0] + r[1] * r[1]).sqrt();
            if rn < lo || rn > hi {
                continue;
            }
            let idx = a.rem_euclid(m as i64) as usize * m + b.rem_euclid(m as i64) as usize;
            let v = sgrid[idx].norm() / (l * l) * rn / mu.sqrt();
            best.points += 1;
            if v > best.sup {
                best.sup = v;
                best.argmax = r;
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manybody::slater::DEFAULT_ELL_RATIO;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_particle_has_no_interaction() {
        let st = SlaterState::with_count(2, 1, 1.0, DEFAULT_ELL_RATIO).unwrap();
        let p = Params::new(2, 1.0, true).unwrap();
        let r = slater_interaction(&st, &p, &InteractionOptions::default()).unwrap();
        assert!(r.estimate.abs() < 1e-12);
        assert!(hardy_quotient(&st, &p, &InteractionOptions::default()).is_err());
    }

    #[test]
    fn exchange_hole_nonnegative() {
        let st = SlaterState::with_count(2, 21, 3.0, DEFAULT_ELL_RATIO).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let s = st.mollifier.support();
        for _ in 0..10_000 {
            let x: Vec<f64> = (0..2).map(|_| rng.gen_range(-s..s)).collect();
            let y: Vec<f64> = (0..2).map(|_| rng.gen_range(-s..s)).collect();
            let hole = st.rho(&x) * st.rho(&y) - st.gamma(&x, &y).norm_sqr();
            assert!(hole >= -1e-12 * st.rho(&x) * st.rho(&y) - 1e-300);
        }
    }

    #[test]
    fn two_particle_interaction_by_direct_quadrature() {
        // N = 2 in one dimension: ½∬ η η' L^{−2}(4 − |1 + e^{ipr}|²)|r|^{−2s}
        let st = SlaterState::with_count(1, 2, 1.0, DEFAULT_ELL_RATIO).unwrap();
        let p = Params::new(1, 0.3, false).unwrap();
        let got = slater_interaction(&st, &p, &InteractionOptions { cutoff: 1e-9, resolution: 400.0 }).unwrap();
        let pm = st.momentum(1)[0];
        let reach = 1.0 + st.ell();
        let f = |r: f64| {
            let hole = 4.0 - (2.0 + 2.0 * (pm * r).cos());
            hole * r.abs().powf(-0.6) * st.mollifier.eta1_autocorrelation(r)
        };
        let want = crate::quad::composite_gl(f, 0.0, reach, 64, 16);
        assert!(((got.estimate - want) / want).abs() < 1e-4, "{} {want}", got.estimate);
        assert!(got.lower_bound <= got.estimate);
    }

    #[test]
    fn i_epsilon_examples() {
        assert_eq!(i_epsilon(1.5).unwrap(), IEpsilon { value: 0.0, admissible: false });
        // ε → 0 small: compare against a brute 2D polar quadrature of the weight
        let eps = 0.1;
        let w = |x: f64, y: f64| (1.0 - x.abs()).max(0.0) * (1.0 - y.abs()).max(0.0);
        let brute = crate::quad::composite_gl(
            |th| {
                let (s, c) = th.sin_cos();
                let rmax = 1.0 / c.abs().max(s.abs());
                crate::quad::composite_gl(|r| w(r * c, r * s) / r, eps, rmax, 40, 16)
            },
            0.0,
            2.0 * PI,
            64,
            16,
        );
        let got = i_epsilon(eps).unwrap().value;
        assert!(((got - brute) / brute).abs() < 1e-9, "{got} {brute}");
        // the leading 2π ln(1/ε) is approached slowly
        let far = i_epsilon(1e-8).unwrap().value / (2.0 * PI * 1e8f64.ln());
        assert!(far > 0.9 && far < 1.0);
    }

    #[test]
    fn lattice_kernel_tracks_bessel() {
        let st = SlaterState::new(2, 40.0, 9.0, 40.0 / 32.0, None).unwrap();
        let l2 = st.l * st.l;
        for r in [[0.3, 0.1], [1.0, -0.7], [2.2, 0.4]] {
            let lat = st.phase_sum(&r).re / l2;
            let cont = bessel_kernel(st.fermi_mu, (r[0] * r[0] + r[1] * r[1]).sqrt());
            assert!((lat - cont).abs() < 0.03 * st.n() as f64 / l2, "{lat} {cont}");
        }
        assert!((st.phase_sum(&[1e-9, 0.0]).norm() / l2 - st.n() as f64 / l2).abs() < 1e-9);
    }

    #[test]
    fn exchange_bound_finite() {
        let st = SlaterState::with_count(2, 100, 1.0, DEFAULT_ELL_RATIO).unwrap();
        let b = exchange_lattice_bound(&st, 4.0, DEFAULT_RESOLUTION).unwrap();
        assert!(b.sup > 0.0 && b.sup < 10.0 && b.points > 100);
    }
}
