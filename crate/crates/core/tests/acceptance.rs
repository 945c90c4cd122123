//! One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use hardylab::ineq::{self, SweepOptions, SweepReport};
use hardylab::manybody::{
    coherent_scale, direct_term, gaussian_density_1d, hardy_quotient, lieb_thirring_ratio, CoherentGamma,
    InteractionOptions, SlaterState, DEFAULT_ELL_RATIO,
};
use hardylab::params::{c_tf, Params};
use hardylab::variational::{minimize_functional, FunctionalSpec, GridSpec, Kind, OptimizerOptions};
use hardylab::Result;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn ac1() -> Result<Outcome> {
    let a = c_tf(&Params::new(3, 1.0, false)?);
    let b = c_tf(&Params::new(4, 1.0, false)?);
    let ea = (a - 0.6 * (6.0 * PI * PI).powf(2.0 / 3.0)).abs();
    let eb = (b - 8.0 * PI / 3.0 * 2f64.sqrt()).abs();
    outcome(ea <= 1e-12 && eb <= 1e-12, format!("c_tf(3,1) err {ea:.1e}, c_tf(4,1) err {eb:.1e}"))
}

fn ac2() -> Result<Outcome> {
    let r = ineq::fdll_sweep(hardylab::riesz::fdll::DEFAULT_RESOLUTION)?;
    outcome(
        r.violations == 0 && r.empirical_constant <= 1e-3,
        format!("{} distances × kernels, worst relative error {:.2e}", r.trials, r.empirical_constant),
    )
}

fn ac3() -> Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    for &(d, s) in &[(3usize, 1.0), (3, 0.5), (4, 1.0)] {
        let p = Params::new(d, s, false)?;
        let grid = GridSpec { n: 256, ..GridSpec::default() };
        let spec = FunctionalSpec::new(Kind::Tau, p, grid)?;
        let opts = OptimizerOptions::default();
        let a = minimize_functional(&spec, &spec.gaussian_init()?, &opts)?;
        let b = minimize_functional(&spec, &spec.ball_init(1.0)?, &opts)?;
        let fine = FunctionalSpec::new(Kind::Tau, p, grid.refined())?;
        let c = minimize_functional(&fine, &a.density, &opts)?;
        let monotone = [&a, &b, &c].iter().all(|r| r.trajectory.windows(2).all(|w| w[1] <= w[0]));
        let restart = ((a.value - b.value) / a.value).abs();
        let drift = ((c.value - a.value) / a.value).abs();
        let (m, lp, dd) = a.identities()?;
        let ident = (m - 1.0).abs().max((lp - 1.0).abs()).max((dd * a.value - 1.0).abs());
        let ok = monotone && restart <= 5e-3 && drift <= 1e-2 && ident <= 1e-6;
        pass &= ok;
        parts.push(format!(
            "({d},{s}) τ̂={:.5} monotone={monotone} restart={restart:.1e} drift={drift:.1e} identities={ident:.1e}",
            a.value
        ));
    }
    outcome(pass, parts.join("; "))
}

fn ac4() -> Result<Outcome> {
    let p = Params::new(3, 1.0, false)?;
    let cases = ineq::partition_cases(6);
    let r = ineq::partition_sweep(&p, &SweepOptions { trials: 3, seed: 2024, samples: 0 }, &cases)?;
    outcome(
        r.violations == 0 && r.empirical_constant <= 1e-10,
        format!("{} cases, {} checks, worst residual {:.1e}", cases.len(), r.trials, r.empirical_constant),
    )
}

fn ac5() -> Result<Outcome> {
    type Sweep = fn(&SweepOptions) -> Result<SweepReport>;
    fn ltvu(o: &SweepOptions) -> Result<SweepReport> {
        ineq::ltvu_sweep(&Params::new(3, 0.5, false)?, o)
    }
    fn elementary(o: &SweepOptions) -> Result<SweepReport> {
        ineq::elementary_scan(0.75, 3, o)
    }
    // (name, sweep, trials, samples, doubles trials rather than samples)
    let sweeps: [(&str, Sweep, usize, usize, bool); 6] = [
        ("electrostatic", ineq::electrostatic_sweep, 1000, 2000, false),
        ("indirect", ineq::indirect_sweep, 1000, 2000, false),
        ("elementary", elementary, 1_000_000, 0, true),
        ("screened", ineq::screened_count_scan, 1_000_000, 0, true),
        ("ltvu", ltvu, 1000, ineq::DEFAULT_ANGULAR, false),
        ("sublevel", ineq::sublevel_sweep, 1000, 20_000, false),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, f, trials, samples, by_trials) in sweeps {
        let seed = 7;
        let a = f(&SweepOptions { trials, seed, samples })?;
        let o2 = if by_trials {
            SweepOptions { trials: 2 * trials, seed, samples }
        } else {
            SweepOptions { trials, seed, samples: 2 * samples }
        };
        let b = f(&o2)?;
        let change = ((b.empirical_constant - a.empirical_constant) / a.empirical_constant).abs();
        let ok = a.violations == 0 && b.violations == 0 && a.trials >= 1000 && change <= 0.2;
        pass &= ok;
        parts.push(format!(
            "{name}: {} trials, violations {}+{}, constant {:.4}→{:.4}",
            a.trials, a.violations, b.violations, a.empirical_constant, b.empirical_constant
        ));
    }
    outcome(pass, parts.join("; "))
}

fn ac6() -> Result<Outcome> {
    let p = Params::new(2, 1.0, true)?;
    let opts = InteractionOptions::default();
    let mut pass = true;
    let mut parts = Vec::new();
    let mut gram: f64 = 0.0;
    for n in [500, 1000] {
        let st = SlaterState::with_count(2, n, 1.0, DEFAULT_ELL_RATIO)?;
        gram = gram.max(st.gram_deviation());
        let kin = hardylab::manybody::slater_kinetic(&st, &p)?;
        let ratio = kin / (st.fermi_mu * st.fermi_mu * st.l * st.l / (8.0 * PI));
        pass &= (0.9..=1.1).contains(&ratio);
        parts.push(format!("kinetic ratio N={n}: {ratio:.4}"));
        if n == 1000 {
            let dt = direct_term(&st, opts.cutoff)?;
            pass &= (0.8..=1.2).contains(&dt.ratio);
            parts.push(format!("direct ratio N={n}: {:.4}", dt.ratio));
        }
    }
    let mut trend = Vec::new();
    for n in [200, 800, 3200] {
        let st = SlaterState::with_count(2, n, 1.0, DEFAULT_ELL_RATIO)?;
        gram = gram.max(st.gram_deviation());
        trend.push((n as f64).ln() * hardy_quotient(&st, &p, &opts)?.quotient);
    }
    pass &= trend.windows(2).all(|w| w[1] < w[0]) && trend[2] <= 6.0 && gram <= 1e-8;
    parts.push(format!("(ln N)·q over 200/800/3200: {:.4}, {:.4}, {:.4}", trend[0], trend[1], trend[2]));
    parts.push(format!("Gram deviation {gram:.1e}"));
    outcome(pass, parts.join("; "))
}

fn ac7() -> Result<Outcome> {
    let p = Params::new(1, 0.5, true)?;
    let n = 4;
    let rho = gaussian_density_1d(n, 1.0, 8.0, 0.05)?;
    let dg = CoherentGamma::build(&rho, coherent_scale(n as f64, &p), &p)?.diagnostics()?;
    let pass = dg.eig_min >= -1e-6
        && dg.eig_max <= 1.0 + 1e-6
        && (dg.trace - n as f64).abs() <= 1e-4
        && dg.density_l1 <= 1e-4
        && dg.slack_bare >= -1e-6
        && dg.slack_smeared >= -1e-6;
    outcome(
        pass,
        format!(
            "spectrum [{:.1e}, {:.4}], trace {:.8}, L1 {:.1e}, slack {:.4} (smeared {:.4})",
            dg.eig_min, dg.eig_max, dg.trace, dg.density_l1, dg.slack_bare, dg.slack_smeared
        ),
    )
}

fn ac8() -> Result<Outcome> {
    let matrix: &[(usize, f64, usize)] = &[
        (1, 0.25, 10),
        (1, 0.25, 40),
        (1, 0.4, 60),
        (2, 0.5, 50),
        (2, 0.75, 120),
        (2, 1.0, 200),
        (2, 1.0, 800),
        (3, 0.5, 60),
        (3, 1.0, 100),
    ];
    let mut worst = f64::INFINITY;
    let mut at = (0, 0.0, 0);
    for &(d, s, n) in matrix {
        let p = Params::new(d, s, true)?;
        let st = SlaterState::with_count(d, n, 1.0, DEFAULT_ELL_RATIO)?;
        let r = lieb_thirring_ratio(&st, &p)?;
        if r < worst {
            worst = r;
            at = (d, s, n);
        }
    }
    outcome(worst >= 0.8, format!("{} states, minimum ratio {worst:.4} at (d,s,N) = {at:?}", matrix.len()))
}

fn ac9() -> Result<Outcome> {
    let runs: [&[&str]; 3] = [
        &["verify", "electrostatic", "--trials", "200", "--samples", "500", "--seed", "11"],
        &["verify", "sublevel", "--trials", "100", "--samples", "2000", "--seed", "11"],
        &["solve-tau", "--d", "3", "--s", "0.5", "--grid-n", "96"],
    ];
    let dirs = [tempfile::tempdir()?, tempfile::tempdir()?];
    for dir in &dirs {
        for args in runs {
            let status = Command::new(env!("CARGO_BIN_EXE_hardylab"))
                .arg("--out")
                .arg(dir.path())
                .args(args)
                .env_remove("HARDYLAB_SEED")
                .output()?
                .status;
            if !status.success() {
                return outcome(false, format!("{args:?} exited with {status}"));
            }
        }
    }
    let mut compared = 0;
    let mut differing = Vec::new();
    for entry in std::fs::read_dir(dirs[0].path())? {
        let name = entry?.file_name();
        let ext = Path::new(&name).extension().and_then(|e| e.to_str()).unwrap_or("");
        if ext != "csv" && ext != "json" {
            continue;
        }
        compared += 1;
        if std::fs::read(dirs[0].path().join(&name))? != std::fs::read(dirs[1].path().join(&name))? {
            differing.push(name.to_string_lossy().into_owned());
        }
    }
    outcome(
        differing.is_empty() && compared >= 6,
        format!("{compared} CSV/JSON files compared, differing: {differing:?}"),
    )
}

fn main() {
    type Criterion = (&'static str, fn() -> Result<Outcome>, Duration);
    let criteria: [Criterion; 9] = [
        ("AC1 Thomas–Fermi constants", ac1, Duration::from_secs(1)),
        ("AC2 ball decomposition", ac2, Duration::from_secs(60)),
        ("AC3 τ solver", ac3, Duration::from_secs(600)),
        ("AC4 partition identity", ac4, Duration::from_secs(10)),
        ("AC5 inequality sweeps", ac5, Duration::from_secs(900)),
        ("AC6 two-dimensional Slater pipeline", ac6, Duration::from_secs(1800)),
        ("AC7 coherent-state γ", ac7, Duration::from_secs(120)),
        ("AC8 Lieb–Thirring on Slater states", ac8, Duration::from_secs(300)),
        ("AC9 determinism", ac9, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (name, f, budget) in criteria {
        let t = Instant::now();
        let (pass, detail) = match f() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let elapsed = t.elapsed();
        let in_time = elapsed <= budget;
        let ok = pass && in_time;
        if !ok {
            failed += 1;
        }
        let timing = if in_time { String::new() } else { format!(" over budget {budget:?}") };
        println!("{} {name} [{:.1?}{timing}]: {detail}", if ok { "PASS" } else { "FAIL" }, elapsed);
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
