//! Exact sampling of |u|² for a Slater determinant by the sequential projection
//! algorithm, and the resulting empirical N-particle measure.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::manybody::slater::SlaterState;
use crate::riesz::MeasureSample;

/// Plane-wave part Φ(x) = (e^{ip·x})_p; the orbitals are L^{−d/2}√η(x)Φ(x).
fn phases(state: &SlaterState, x: &[f64]) -> Vec<Complex64> {
    (0..state.n())
        .map(|i| Complex64::from_polar(1.0, state.momentum(i).iter().zip(x).map(|(p, t)| p * t).sum()))
        .collect()
}

fn project_out(basis: &[Vec<Complex64>], v: &mut [Complex64]) {
    for e in basis {
        let c: Complex64 = e.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
        for (x, a) in v.iter_mut().zip(e) {
            *x -= c * a;
        }
    }
}

const MAX_PROPOSALS: usize = 1_000_000;

/// One configuration X ∈ R^{Nd}, flat.
pub fn sample_configuration<R: Rng>(state: &SlaterState, rng: &mut R) -> Result<Vec<f64>> {
    let n = state.n();
    let d = state.d;
    let support = state.mollifier.support();
    let mass = state.mollifier.mass;
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut out = Vec::with_capacity(n * d);
    let mut proposals = 0usize;
    while basis.len() < n {
        proposals += 1;
        if proposals > MAX_PROPOSALS {
            return Err(Error::numerical("projection sampler made no progress"));
        }
        // proposal ∝ η, drawn per axis by rejection from the uniform law on the support
        let mut x = vec![0.0; d];
        for t in x.iter_mut() {
            loop {
                let c = rng.gen_range(-support..support);
                if rng.gen::<f64>() * mass < state.mollifier.eta1(c) {
                    *t = c;
                    break;
                }
            }
        }
        let phi = phases(state, &x);
        let captured: f64 = basis
            .iter()
            .map(|e| e.iter().zip(&phi).map(|(a, b)| a.conj() * b).sum::<Complex64>().norm_sqr())
            .sum();
        let accept = ((n as f64 - captured) / n as f64).clamp(0.0, 1.0);
        if rng.gen::<f64>() >= accept {
            continue;
        }
        let mut v = phi;
        project_out(&basis, &mut v);
        project_out(&basis, &mut v);
        let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm * norm < 1e-10 * n as f64 {
            // degenerate direction, resample
            continue;
        }
        v.iter_mut().for_each(|c| *c /= norm);
        basis.push(v);
        out.extend_from_slice(&x);
    }
    Ok(out)
}

/// `samples` independent configurations; sample i uses ChaCha stream i of `seed`.
pub fn sample_configurations(state: &SlaterState, samples: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            sample_configuration(state, &mut rng)
        })
        .collect()
}

/// Empirical |u|² measure with the exact marginal ρ_u on a Cartesian grid.
pub fn slater_measure(state: &SlaterState, samples: usize, seed: u64, cells_per_axis: usize) -> Result<MeasureSample> {
    let configs = sample_configurations(state, samples, seed)?;
    MeasureSample::uniform(state.n(), state.d, configs, state.density(cells_per_axis)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manybody::slater::DEFAULT_ELL_RATIO;

    #[test]
    fn single_particle_follows_density() {
        let st = SlaterState::with_count(1, 1, 2.0, DEFAULT_ELL_RATIO).unwrap();
        let xs = sample_configurations(&st, 4000, 3).unwrap();
        let inside = xs.iter().filter(|x| x[0].abs() < 0.5).count() as f64 / 4000.0;
        assert!((inside - 0.5).abs() < 0.03);
    }

    #[test]
    fn pair_distance_law_matches_exchange_hole() {
        // N = 2 in one dimension: P(|X₁ − X₂| < a) from the two-point density
        let st = SlaterState::with_count(1, 2, 1.0, DEFAULT_ELL_RATIO).unwrap();
        let xs = sample_configurations(&st, 20_000, 11).unwrap();
        let a = 0.25;
        let got = xs.iter().filter(|x| (x[0] - x[1]).abs() < a).count() as f64 / 20_000.0;
        let pm = st.momentum(1)[0];
        // ½∬(ρρ' − |γ|²) over |r| < a, normalized by N(N−1) = 2
        let f = |r: f64| (2.0 - 2.0 * (pm * r).cos()) * st.mollifier.eta1_autocorrelation(r);
        let want = crate::quad::composite_gl(f, 0.0, a, 16, 16) / 1.0;
        assert!((got - want).abs() < 0.01, "{got} {want}");
    }

    #[test]
    fn measure_is_reproducible() {
        let st = SlaterState::with_count(2, 5, 1.0, DEFAULT_ELL_RATIO).unwrap();
        let a = slater_measure(&st, 20, 5, 32).unwrap();
        let b = slater_measure(&st, 20, 5, 32).unwrap();
        assert_eq!(a.configs, b.configs);
        assert_eq!(a.configs[0].len(), 10);
    }
}
