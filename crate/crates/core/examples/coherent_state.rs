//! Coherent-state one-body density matrix for a Gaussian density on a line.
use hardylab::manybody::{coherent_scale, gaussian_density_1d, CoherentGamma};
use hardylab::params::Params;

fn main() -> hardylab::Result<()> {
    let p = Params::new(1, 0.5, true)?;
    for n in [2, 4, 8] {
        let rho = gaussian_density_1d(n, 1.0, 8.0, 0.05)?;
        let ell = coherent_scale(n as f64, &p);
        let dg = CoherentGamma::build(&rho, ell, &p)?.diagnostics()?;
        println!(
            "N = {n}: ℓ = {:.4} spectrum [{:.2e}, {:.6}] trace {:.8} ∥ρ_γ − ρ*|g|²∥₁ = {:.1e} slack {:.4}",
            dg.ell, dg.eig_min, dg.eig_max, dg.trace, dg.density_l1, dg.slack_bare
        );
    }
    Ok(())
}
