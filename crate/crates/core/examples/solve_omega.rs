//! The bosonic constant ω and the product-state bound β_N ≤ ω/(N − 1).
use hardylab::params::Params;
use hardylab::variational::{bosonic_upper_bound, minimize_functional, FunctionalSpec, GridSpec, Kind, OptimizerOptions};

fn main() -> hardylab::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let d: usize = args.get(1).map_or(3, |a| a.parse().unwrap());
    let s: f64 = args.get(2).map_or(1.0, |a| a.parse().unwrap());
    let p = Params::new(d, s, false)?;
    for n in [128, 256] {
        let spec = FunctionalSpec::new(Kind::Omega, p, GridSpec { n, ..GridSpec::default() })?;
        let t = std::time::Instant::now();
        let r = minimize_functional(&spec, &spec.gaussian_init()?, &OptimizerOptions::default())?;
        println!(
            "grid {n}: ω̂ = {:.6} (Gaussian start {:.6}) iters {} residual {:.1e} conv {} ({:.1?})",
            r.value, r.trajectory[0], r.iterations, r.residual, r.converged, t.elapsed()
        );
        if n == 256 {
            for big_n in [2, 3, 10, 100] {
                println!("  β_{big_n} ≤ {:.6}", bosonic_upper_bound(big_n, r.value)?);
            }
        }
    }
    Ok(())
}
