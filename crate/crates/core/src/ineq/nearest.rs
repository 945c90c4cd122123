//! Nearest-neighbour domination: for Slater states the kinetic energy controls
//! E Σ_n δ_n(X)^{−2s}, estimated by sampling the determinantal measure.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::dist2;
use crate::ineq::{SweepOptions, SweepReport};
use crate::manybody::{sample_configurations, slater_kinetic, SlaterState, DEFAULT_ELL_RATIO};
use crate::params::Params;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NearestNeighborGap {
    pub kinetic: f64,
    /// Monte-Carlo mean of Σ_n δ_n^{−2s}.
    pub nn_term: f64,
    pub stderr: f64,
    /// kinetic/nn_term.
    pub ratio: f64,
    /// Configurations where some δ_n^{−2s} fell below max_m |X_n − X_m|^{−2s}; always 0.
    pub domination_failures: usize,
}

/// Σ_n δ_n^{−2s} for one flat configuration, and whether each term dominates its row.
fn nn_sum(x: &[f64], d: usize, s: f64) -> (f64, bool) {
    let n = x.len() / d;
    let mut total = 0.0;
    let mut ok = true;
    for i in 0..n {
        let xi = &x[i * d..(i + 1) * d];
        let mut best = f64::INFINITY;
        let mut row_max = 0.0f64;
        for j in (0..n).filter(|&j| j != i) {
            let r2 = dist2(xi, &x[j * d..(j + 1) * d]);
            best = best.min(r2);
            row_max = row_max.max(r2.powf(-s));
        }
        let term = best.powf(-s);
        ok &= term >= row_max;
        total += term;
    }
    (total, ok)
}

pub fn nearest_neighbor_gap(state: &SlaterState, p: &Params, samples: usize, seed: u64) -> Result<NearestNeighborGap> {
    if state.n() < 2 {
        return Err(Error::input("nearest-neighbour terms need N ≥ 2"));
    }
    if state.d != p.d() {
        return Err(Error::input("state and parameter dimensions differ"));
    }
    if samples < 2 {
        return Err(Error::input("need at least two samples"));
    }
    let kinetic = slater_kinetic(state, p)?;
    let configs = sample_configurations(state, samples, seed)?;
    let terms: Vec<(f64, bool)> = configs.par_iter().map(|x| nn_sum(x, state.d, p.s())).collect();
    let m = samples as f64;
    let mean = terms.iter().map(|t| t.0).sum::<f64>() / m;
    let var = terms.iter().map(|t| (t.0 - mean).powi(2)).sum::<f64>() / (m - 1.0);
    let nn_term = mean;
    Ok(NearestNeighborGap {
        kinetic,
        nn_term,
        stderr: (var / m).sqrt(),
        ratio: kinetic / nn_term,
        domination_failures: terms.iter().filter(|t| !t.1).count(),
    })
}

/// Slater states with N ∈ {2, 3, 5, 8} at μ-scalings L ∈ {1, 1/2}. The report's
/// empirical constant is max nn_term/kinetic, i.e. the reciprocal of the worst ratio.
pub fn nearest_neighbor_sweep(p: &Params, opts: &SweepOptions) -> Result<SweepReport> {
    let ns = [2usize, 3, 5, 8];
    let ls = [1.0, 0.5];
    let cases: Vec<(usize, f64)> = ns.iter().flat_map(|n| ls.iter().map(move |l| (*n, *l))).collect();
    let mut outcomes = Vec::with_capacity(opts.trials);
    for t in 0..opts.trials {
        let (n, l) = cases[t % cases.len()];
        let state = SlaterState::with_count(p.d(), n, l, DEFAULT_ELL_RATIO)?;
        let g = nearest_neighbor_gap(&state, p, opts.samples, crate::ineq::trial_seed(opts.seed, t))?;
        let inv = 1.0 / g.ratio;
        outcomes.push((inv, !(g.ratio > 0.0 && inv.is_finite()) || g.domination_failures > 0));
    }
    let mut rep = SweepReport::new("nn", opts.seed, opts.samples).absorb(&outcomes);
    rep.d = Some(p.d());
    rep.s = Some(p.s());
    Ok(rep.range("N", "2, 3, 5, 8").range("L", "1, 0.5").range("measure", "determinantal Slater sampling"))
}
