//! Mollified plane-wave Slater determinants at d = 2, s = 1: Gram matrix, kinetic
//! energy against μ²L²/8π, the direct term, and the Hardy quotient trend.
use std::f64::consts::PI;

use hardylab::manybody::{direct_term, hardy_quotient, InteractionOptions, SlaterState, DEFAULT_ELL_RATIO};
use hardylab::params::Params;

fn main() -> hardylab::Result<()> {
    let p = Params::new(2, 1.0, true)?;
    let opts = InteractionOptions::default();
    println!("{:>5} {:>10} {:>10} {:>10} {:>10} {:>10}", "N", "gram", "kin/ref", "direct", "quotient", "lnN·q");
    for n in [200, 800, 1000, 3200] {
        let st = SlaterState::with_count(2, n, 1.0, DEFAULT_ELL_RATIO)?;
        let q = hardy_quotient(&st, &p, &opts)?;
        let kin_ref = st.fermi_mu * st.fermi_mu * st.l * st.l / (8.0 * PI);
        let dt = direct_term(&st, opts.cutoff)?;
        println!(
            "{n:>5} {:>10.2e} {:>10.4} {:>10.4} {:>10.5} {:>10.4}",
            st.gram_deviation(),
            q.kinetic / kin_ref,
            dt.ratio,
            q.quotient,
            (n as f64).ln() * q.quotient
        );
    }
    Ok(())
}
