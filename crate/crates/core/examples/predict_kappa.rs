//! Asymptotic prediction κ_N ≈ τ̂ c_tf N^{2s/d − 1} with its non-rigorous band,
//! the rigorous reference lines at s = 1 and the 4/ln N curve at d = 2s.
use hardylab::params::Params;
use hardylab::predictor::{conjecture_2d, log_grid, predicted_kappa, reference_lines};

fn main() -> hardylab::Result<()> {
    let ns = log_grid(10, 1_000_000, 6);
    let p = Params::new(3, 1.0, false)?;
    let pred = predicted_kappa(&p, 0.2957, None, &ns, 1.0)?;
    println!("d = 3, s = 1, τ̂ = {}, c_tf = {:.6}, band rigorous: {}", pred.tau_hat, pred.c_tf, pred.band_rigorous);
    for r in &pred.rows {
        println!("  N = {:>8}: κ ≈ {:.4e} in [{:.4e}, {:.4e}]", r.n, r.central, r.band_lo, r.band_hi);
    }
    for line in reference_lines(3, 1.0) {
        println!("  {} ({:?}): {:.4e} at N = 10⁶", line.label, line.kind, line.at(1_000_000));
    }
    println!("d = 2, s = 1 (borderline):");
    for c in conjecture_2d(&ns)? {
        println!("  N = {:>8}: 4/ln N = {:.4}", c.n, c.value);
    }
    Ok(())
}
