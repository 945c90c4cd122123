//! Thomas–Fermi and coherent-state constants against their closed forms.
use std::f64::consts::PI;

use hardylab::params::{c_tf, coherent_c, Params};

fn main() -> hardylab::Result<()> {
    println!("{:>2} {:>5} {:>16} {:>16}", "d", "s", "c_tf", "coherent_c");
    for &(d, s) in &[(1, 0.25), (1, 0.4), (2, 0.5), (2, 0.9), (3, 0.5), (3, 1.0), (4, 1.0), (5, 1.0)] {
        let p = Params::new(d, s, false)?;
        println!("{d:>2} {s:>5} {:>16.12} {:>16.12}", c_tf(&p), coherent_c(&p));
    }
    let closed3 = 0.6 * (6.0 * PI * PI).powf(2.0 / 3.0);
    let closed4 = 8.0 * PI / 3.0 * 2f64.sqrt();
    println!("c_tf(3,1) − (3/5)(6π²)^(2/3) = {:.2e}", c_tf(&Params::new(3, 1.0, false)?) - closed3);
    println!("c_tf(4,1) − (8π/3)√2        = {:.2e}", c_tf(&Params::new(4, 1.0, false)?) - closed4);
    Ok(())
}
