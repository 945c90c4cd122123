//! Lieb–Thirring ratios of Slater states for fractional kinetic energies.
use hardylab::manybody::{lieb_thirring_ratio, slater_kinetic, SlaterState, DEFAULT_ELL_RATIO};
use hardylab::params::Params;

fn main() -> hardylab::Result<()> {
    println!("{:>2} {:>5} {:>5} {:>14} {:>9}", "d", "s", "N", "kinetic", "LT ratio");
    for &(d, s, n) in &[(1, 0.25, 20), (1, 0.4, 60), (2, 0.5, 50), (2, 0.75, 200), (3, 0.5, 60), (3, 1.0, 100)] {
        let p = Params::new(d, s, false)?;
        let st = SlaterState::with_count(d, n, 1.0, DEFAULT_ELL_RATIO)?;
        println!("{d:>2} {s:>5} {n:>5} {:>14.6e} {:>9.4}", slater_kinetic(&st, &p)?, lieb_thirring_ratio(&st, &p)?);
    }
    Ok(())
}
