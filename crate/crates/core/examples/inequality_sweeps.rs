//! Run every randomized inequality sweep and print one CSV row per sweep.
//! Usage: inequality_sweeps [trials] [samples] [seed]
use std::time::Instant;

use hardylab::ineq::*;
use hardylab::params::Params;
use hardylab::riesz::fdll::DEFAULT_RESOLUTION;

fn main() -> hardylab::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let trials: usize = args.get(1).map_or(1000, |a| a.parse().unwrap());
    let samples: usize = args.get(2).map_or(2000, |a| a.parse().unwrap());
    let seed: u64 = args.get(3).map_or(2024, |a| a.parse().unwrap());
    let mc = SweepOptions { trials, seed, samples };
    let p3 = Params::new(3, 0.5, false)?;
    let p3b = Params::new(3, 1.0, false)?;
    println!("{},seconds", SweepReport::CSV_HEADER);
    let run = |f: &dyn Fn() -> hardylab::Result<SweepReport>| -> hardylab::Result<()> {
        let t = Instant::now();
        let r = f()?;
        println!("{},{:.2}", r.csv_row(), t.elapsed().as_secs_f64());
        Ok(())
    };
    run(&|| electrostatic_sweep(&mc))?;
    run(&|| indirect_sweep(&mc))?;
    run(&|| elementary_scan(0.75, 3, &SweepOptions { trials: 1000 * trials, seed, samples: 0 }))?;
    run(&|| screened_count_scan(&SweepOptions { trials: 1000 * trials, seed, samples: 0 }))?;
    run(&|| ltvu_sweep(&p3, &SweepOptions { trials, seed, samples: DEFAULT_ANGULAR }))?;
    run(&|| sublevel_sweep(&SweepOptions { trials, seed, samples: 10 * samples }))?;
    run(&|| partition_sweep(&p3b, &SweepOptions { trials: 3, seed, samples: 0 }, &partition_cases(6)))?;
    run(&|| fdll_sweep(DEFAULT_RESOLUTION))?;
    run(&|| nearest_neighbor_sweep(&p3b, &SweepOptions { trials: 8, seed, samples: samples.min(2000) }))?;
    Ok(())
}
