//! Electron/nucleus partition averages: the exact identity on a small configuration
//! and the parameter plans for large N.
use hardylab::geometry::PointConfig;
use hardylab::ineq::{levy_leblond_plan, partition_identity_check, PlanMode, DEFAULT_EPSILON};
use hardylab::params::Params;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> hardylab::Result<()> {
    let p = Params::new(3, 1.0, false)?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let x = PointConfig::new(3, (0..18).map(|_| rng.gen_range(-1.0..1.0)).collect())?;
    for m in 1..=4 {
        let r = partition_identity_check(m, &x, 0.7, &p)?;
        println!("N = 6, M = {m}: lhs {:.10} rhs {:.10} relative {:.1e}", r.lhs, r.rhs, r.relative);
    }
    let tau = 0.2957;
    for n in [100, 10_000, 1_000_000] {
        for mode in [PlanMode::Main, PlanMode::AppendixA] {
            let plan = levy_leblond_plan(n, &p, tau, mode, DEFAULT_EPSILON)?;
            println!(
                "N = {n} {mode:?}: M = {} K = {} Z/λ = {:.4} α = {:?} κ target = {:?} prefactor = {:?}",
                plan.m, plan.k, plan.z_or_lambda, plan.alpha, plan.kappa_target, plan.prefactor
            );
        }
    }
    Ok(())
}
