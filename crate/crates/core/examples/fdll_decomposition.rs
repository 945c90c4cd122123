//! Reconstruct |y − y'|^{−λ} from its decomposition into indicator functions of balls.
use hardylab::riesz::{Fdll, RieszKernel};

fn main() -> hardylab::Result<()> {
    for &(d, lam) in &[(1usize, 0.5), (2, 1.0), (3, 1.0), (3, 2.0)] {
        let f = Fdll::new(RieszKernel::new(d, lam)?)?;
        let mut worst: f64 = 0.0;
        for i in 0..20 {
            let r = 0.1 * 100f64.powf(i as f64 / 19.0);
            let mut y = vec![0.0; d];
            y[0] = r;
            let v = f.reconstruct(&vec![0.0; d], &y, 64)?;
            worst = worst.max((v * r.powf(lam) - 1.0).abs());
        }
        println!("d = {d} λ = {lam}: constant {:.8}, worst relative error on r ∈ [0.1, 10]: {worst:.2e}", f.constant);
    }
    Ok(())
}
