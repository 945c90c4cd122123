//! Minimize the τ-quotient for (d, s) from two starting densities and on a refined grid.
use hardylab::params::{c_tf, Params};
use hardylab::variational::{minimize_functional, FunctionalSpec, GridSpec, Kind, OptimizerOptions};

fn main() -> hardylab::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let d: usize = args.get(1).map_or(3, |a| a.parse().unwrap());
    let s: f64 = args.get(2).map_or(1.0, |a| a.parse().unwrap());
    let n: usize = args.get(3).map_or(512, |a| a.parse().unwrap());
    let p = Params::new(d, s, false)?;
    let grid = GridSpec { n, ..GridSpec::default() };
    let spec = FunctionalSpec::new(Kind::Tau, p, grid)?;
    let opts = OptimizerOptions::default();
    let t = std::time::Instant::now();
    let a = minimize_functional(&spec, &spec.gaussian_init()?, &opts)?;
    println!("gaussian start: τ̂ = {:.8} iters {} residual {:.2e} conv {} ({:.1?})", a.value, a.iterations, a.residual, a.converged, t.elapsed());
    let b = minimize_functional(&spec, &spec.ball_init(1.0)?, &opts)?;
    println!("ball start:     τ̂ = {:.8} iters {} residual {:.2e} conv {}", b.value, b.iterations, b.residual, b.converged);
    let fine = FunctionalSpec::new(Kind::Tau, p, grid.refined())?;
    let c = minimize_functional(&fine, &a.density, &opts)?;
    println!("refined grid:   τ̂ = {:.8} iters {} residual {:.2e} conv {}", c.value, c.iterations, c.residual, c.converged);
    let (m, lp, dd) = a.identities()?;
    println!("normalized: ∫ρ = {m:.10}, ∫ρ^q = {lp:.10}, D·τ̂ = {:.10}", dd * a.value);
    println!("τ̂·c_tf = {:.6}", a.value * c_tf(&p));
    Ok(())
}
