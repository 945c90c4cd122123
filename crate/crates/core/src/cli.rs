//! Command-line front end: flag/config-file merging, command dispatch, report
//! emission and the JSON-lines run ledger.

use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::ineq::{self, SweepOptions, SweepReport};
use crate::manybody::{
    coherent_scale, gaussian_density_1d, hardy_quotient, lieb_thirring_ratio, CoherentGamma, InteractionOptions,
    SlaterState, DEFAULT_ELL_RATIO,
};
use crate::params::{c_tf, coherent_c, Params};
use crate::predictor::{conjecture_2d, log_grid, predicted_kappa, reference_lines};
use crate::report::{emit_report, num, opt_num, Format, Outputs, Plot, Series, Table};
use crate::riesz::fdll::DEFAULT_RESOLUTION;
use crate::variational::{minimize_functional, FunctionalSpec, GridSpec, Kind, OptimizerOptions, OptimizerResult};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_VIOLATION: i32 = 4;

pub const DEFAULT_SEED: u64 = 2024;

#[derive(Debug, Parser)]
#[command(name = "hardylab", version, about = "Many-particle fractional Hardy constants: solvers, constructions and checks")]
pub struct Cli {
    #[command(flatten)]
    pub flags: Flags,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Table of c_tf and related constants.
    Constants,
    /// Minimize the τ-quotient over radial densities.
    SolveTau,
    /// Minimize the ω-quotient over radial densities.
    SolveOmega,
    /// Build a plane-wave Slater state and report kinetic, interaction and quotient.
    Slater,
    /// Coherent-state density matrix diagnostics on a 1-D grid.
    Coherent,
    /// Run an inequality or identity sweep.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Asymptotic κ_N predictions and reference lines.
    Predict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Electrostatic,
    Indirect,
    Nn,
    Elementary,
    Screened,
    Ltvu,
    Partition,
    Fdll,
    Sublevel,
}

/// Every flag is global and optional; unset flags fall back to the config file,
/// then to per-command defaults.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct Flags {
    /// TOML file with the same keys as the long flags.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Dimension.
    #[arg(long, global = true)]
    pub d: Option<usize>,
    /// Kinetic order, 0 < s ≤ 1.
    #[arg(long, global = true)]
    pub s: Option<f64>,
    /// Radial grid cells (or 1-D grid points for coherent).
    #[arg(long = "grid-n", global = true)]
    #[serde(rename = "grid-n")]
    pub grid_n: Option<usize>,
    /// Outer grid radius (half-width for coherent).
    #[arg(long = "r-max", global = true)]
    #[serde(rename = "r-max")]
    pub r_max: Option<f64>,
    /// Box side for Slater states.
    #[arg(long = "L", global = true)]
    #[serde(rename = "L")]
    pub l: Option<f64>,
    /// Fermi level (squared-momentum cutoff).
    #[arg(long, global = true)]
    pub mu: Option<f64>,
    /// Particle count.
    #[arg(long = "N", global = true)]
    #[serde(rename = "N")]
    pub n: Option<usize>,
    /// Electron count in partition checks.
    #[arg(long = "M", global = true)]
    #[serde(rename = "M")]
    pub m: Option<usize>,
    /// Nuclear charge in partition checks.
    #[arg(long = "Z", global = true)]
    #[serde(rename = "Z")]
    pub z: Option<f64>,
    /// Use this τ̂ instead of solving for it.
    #[arg(long, global = true)]
    pub tau: Option<f64>,
    /// Base seed for all random streams.
    #[arg(long, global = true, env = "HARDYLAB_SEED")]
    pub seed: Option<u64>,
    /// Samples per trial (angular resolution for ltvu).
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Trials per sweep.
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Optimizer stopping tolerance on relative decrease.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Relative band constant for predictions (not a proved value).
    #[arg(long, global = true)]
    pub band: Option<f64>,
    /// Output directory, default "out".
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Comma-separated subset of csv, json, svg.
    #[arg(long, global = true, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Vec<String>>,
    /// Permit d = 2s.
    #[arg(long = "allow-borderline", global = true, num_args = 0..=1, default_missing_value = "true")]
    #[serde(rename = "allow-borderline")]
    pub allow_borderline: Option<bool>,
}

macro_rules! merge {
    ($a:expr, $b:expr, $($f:ident),*) => { $( if $a.$f.is_none() { $a.$f = $b.$f.clone(); } )* };
}

impl Flags {
    fn merged_with_file(mut self) -> Result<Flags> {
        let Some(path) = self.config.clone() else { return Ok(self) };
        let text = std::fs::read_to_string(&path).map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))?;
        let file: Flags = toml::from_str(&text).map_err(|e| Error::input(format!("config file: {e}")))?;
        merge!(self, file, d, s, grid_n, r_max, l, mu, n, m, z, tau, seed, samples, trials, tol, band, out, format, allow_borderline);
        Ok(self)
    }

    fn params(&self, d: usize, s: f64) -> Result<Params> {
        Params::new(self.d.unwrap_or(d), self.s.unwrap_or(s), self.allow_borderline.unwrap_or(false))
    }

    /// For constructions whose natural home is d = 2s, borderline is admitted unless refused.
    fn params_borderline(&self, d: usize, s: f64) -> Result<Params> {
        Params::new(self.d.unwrap_or(d), self.s.unwrap_or(s), self.allow_borderline.unwrap_or(true))
    }

    fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    fn formats(&self) -> Result<Vec<Format>> {
        let list = self.format.clone().unwrap_or_else(|| vec!["csv".into(), "json".into(), "svg".into()]);
        let mut f: Vec<Format> = list.iter().map(|s| s.parse()).collect::<Result<_>>()?;
        f.sort();
        f.dedup();
        Ok(f)
    }
}

#[derive(Debug, Serialize)]
struct LedgerEntry<'a> {
    command: &'a str,
    config_hash: String,
    config: &'a Flags,
    seed: u64,
    wall_time_s: f64,
    exit_code: i32,
    outputs: Vec<String>,
    error: Option<String>,
}

/// Result of one command: what to write and whether a check failed.
struct Run {
    stem: String,
    outputs: Outputs,
    violation: bool,
    summary: String,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Numerical(_) => EXIT_NUMERICAL,
        Error::InvalidParams(_) | Error::InvalidInput(_) | Error::Io(_) => EXIT_INVALID,
    }
}

fn command_name(c: &Command) -> String {
    match c {
        Command::Constants => "constants".into(),
        Command::SolveTau => "solve-tau".into(),
        Command::SolveOmega => "solve-omega".into(),
        Command::Slater => "slater".into(),
        Command::Coherent => "coherent".into(),
        Command::Verify { suite } => format!("verify {}", serde_json::to_value(suite).expect("suite").as_str().unwrap_or("")),
        Command::Predict => "predict".into(),
    }
}

/// sha256 of the command name and the merged configuration, output directory excluded.
pub fn config_hash(command: &str, flags: &Flags) -> String {
    let mut f = flags.clone();
    f.out = None;
    let canon = serde_json::json!({ "command": command, "config": f });
    let digest = Sha256::digest(canon.to_string().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn append_ledger(dir: &Path, entry: &LedgerEntry) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join("ledger.jsonl");
    let mut f = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(&path)
        .map_err(|e| Error::Io(format!("cannot open {}: {e}", path.display())))?;
    f.lock().map_err(|e| Error::Io(format!("cannot lock {}: {e}", path.display())))?;
    let line = serde_json::to_string(entry).expect("ledger entry") + "\n";
    let res = f.write_all(line.as_bytes());
    let _ = f.unlock();
    res.map_err(|e| Error::Io(format!("cannot append to {}: {e}", path.display())))
}

/// Parse, run and report; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    let name = command_name(&cli.command);
    let flags = match cli.flags.merged_with_file() {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let out_dir = flags.out.clone().unwrap_or_else(|| PathBuf::from("out"));
    let start = Instant::now();
    let result = flags.formats().and_then(|formats| {
        let run = dispatch(&cli.command, &flags)?;
        let files = emit_report(&out_dir, &run.stem, &formats, &run.outputs, true)?;
        Ok((run, files))
    });
    let (code, files, err) = match result {
        Ok((run, files)) => {
            println!("{}", run.summary);
            (if run.violation { EXIT_VIOLATION } else { EXIT_OK }, files, None)
        }
        Err(e) => {
            eprintln!("error: {e}");
            (exit_code(&e), Vec::new(), Some(e.to_string()))
        }
    };
    let entry = LedgerEntry {
        command: &name,
        config_hash: config_hash(&name, &flags),
        config: &flags,
        seed: flags.seed(),
        wall_time_s: start.elapsed().as_secs_f64(),
        exit_code: code,
        outputs: files.iter().map(|p| p.display().to_string()).collect(),
        error: err,
    };
    if let Err(e) = append_ledger(&out_dir, &entry) {
        eprintln!("error: {e}");
        return if code == EXIT_OK { exit_code(&e) } else { code };
    }
    code
}

fn dispatch(cmd: &Command, f: &Flags) -> Result<Run> {
    match cmd {
        Command::Constants => constants(f),
        Command::SolveTau => solve(f, Kind::Tau),
        Command::SolveOmega => solve(f, Kind::Omega),
        Command::Slater => slater(f),
        Command::Coherent => coherent(f),
        Command::Verify { suite } => verify(*suite, f),
        Command::Predict => predict(f),
    }
}

const CONSTANT_TABLE: [(usize, f64); 6] = [(1, 0.25), (2, 0.5), (3, 0.5), (3, 1.0), (4, 1.0), (5, 1.0)];

fn constants(f: &Flags) -> Result<Run> {
    let pairs: Vec<Params> = match (f.d, f.s) {
        (Some(_), Some(_)) => vec![f.params(0, 0.0)?],
        (None, None) => CONSTANT_TABLE.iter().map(|&(d, s)| Params::new(d, s, false)).collect::<Result<_>>()?,
        _ => return Err(Error::params("give both --d and --s, or neither")),
    };
    let mut t = Table::new(&["d", "s", "c_tf", "coherent_c", "q", "remainder_exponent"]);
    for p in &pairs {
        t.push(vec![
            p.d().to_string(),
            num(p.s()),
            num(c_tf(p)),
            num(coherent_c(p)),
            num(p.q()),
            num(p.remainder_exponent()),
        ]);
    }
    let summary = t.to_csv().lines().skip(1).collect::<Vec<_>>().join("\n");
    Ok(Run { stem: "constants".into(), outputs: Outputs { table: Some(t), ..Default::default() }, violation: false, summary })
}

fn solve_with(f: &Flags, kind: Kind, p: Params) -> Result<OptimizerResult> {
    let grid = GridSpec {
        n: f.grid_n.unwrap_or(GridSpec::default().n),
        r_max: f.r_max.unwrap_or(GridSpec::default().r_max),
        ..GridSpec::default()
    };
    let spec = FunctionalSpec::new(kind, p, grid)?;
    let opts = OptimizerOptions { tol: f.tol.unwrap_or(OptimizerOptions::default().tol), ..OptimizerOptions::default() };
    minimize_functional(&spec, &spec.gaussian_init()?, &opts)
}

fn solve(f: &Flags, kind: Kind) -> Result<Run> {
    let p = f.params(3, 1.0)?;
    let res = solve_with(f, kind, p)?;
    let stem = match kind {
        Kind::Tau => "tau",
        Kind::Omega => "omega",
    };
    let (mass, lp, energy) = res.identities()?;
    let mut t = Table::new(&[
        "kind", "d", "s", "value", "value_times_c_tf", "residual", "iterations", "converged", "mass", "lp_pow", "energy",
    ]);
    let scaled = match kind {
        Kind::Tau => num(res.value * c_tf(&p)),
        Kind::Omega => String::new(),
    };
    t.push(vec![
        stem.into(),
        p.d().to_string(),
        num(p.s()),
        num(res.value),
        scaled,
        num(res.residual),
        res.iterations.to_string(),
        res.converged.to_string(),
        num(mass),
        num(lp),
        num(energy),
    ]);
    let mut json: serde_json::Value = serde_json::from_str(&res.to_json()).expect("optimizer json");
    json["density_ref"] = serde_json::Value::String(format!("{stem}_density.csv"));
    json["identities"] = serde_json::json!({ "mass": mass, "lp_pow": lp, "energy": energy });
    let traj: Vec<(f64, f64)> = res.trajectory.iter().enumerate().map(|(i, v)| (i as f64, *v)).collect();
    let symbol = if kind == Kind::Tau { "τ" } else { "ω" };
    let plot = Plot {
        title: format!("{symbol}-quotient descent, d = {}, s = {}", p.d(), p.s()),
        x_label: "accepted step".into(),
        y_label: format!("{symbol}-quotient"),
        log_x: false,
        log_y: true,
        series: vec![Series::new(format!("{symbol}-quotient"), traj)],
    };
    let summary = format!(
        "{stem}: d = {} s = {} value = {} residual = {:.2e} iterations = {} converged = {}",
        p.d(),
        p.s(),
        res.value,
        res.residual,
        res.iterations,
        res.converged
    );
    Ok(Run {
        stem: stem.into(),
        outputs: Outputs {
            table: Some(t),
            json: Some(json),
            plot: Some(plot),
            extra: vec![(format!("{stem}_density.csv"), res.density.to_csv())],
        },
        violation: false,
        summary,
    })
}

fn slater(f: &Flags) -> Result<Run> {
    let p = f.params_borderline(2, 1.0)?;
    let l = f.l.unwrap_or(1.0);
    let state = match (f.n, f.mu) {
        (Some(n), None) => SlaterState::with_count(p.d(), n, l, DEFAULT_ELL_RATIO)?,
        (None, Some(mu)) => SlaterState::new(p.d(), l, mu, DEFAULT_ELL_RATIO * l, None)?,
        (Some(n), Some(mu)) => SlaterState::new(p.d(), l, mu, DEFAULT_ELL_RATIO * l, Some(n))?,
        (None, None) => SlaterState::with_count(p.d(), 200, l, DEFAULT_ELL_RATIO)?,
    };
    let opts = InteractionOptions::default();
    let q = hardy_quotient(&state, &p, &opts)?;
    let lt = lieb_thirring_ratio(&state, &p)?;
    let gram = state.gram_deviation();
    let ln_n = (state.n() as f64).ln();
    let mut t = Table::new(&[
        "d", "s", "N", "L", "mu", "kinetic", "interaction_estimate", "interaction_lower", "quotient",
        "quotient_estimate", "lnN_quotient", "lt_ratio", "gram_deviation", "cutoff",
    ]);
    t.push(vec![
        p.d().to_string(),
        num(p.s()),
        state.n().to_string(),
        num(l),
        num(state.fermi_mu),
        num(q.kinetic),
        num(q.interaction.estimate),
        num(q.interaction.lower_bound),
        num(q.quotient),
        num(q.quotient_estimate),
        num(ln_n * q.quotient),
        num(lt),
        num(gram),
        num(opts.cutoff),
    ]);
    let summary = format!(
        "slater: N = {} kinetic = {} quotient = {} (ln N)·quotient = {} LT ratio = {}",
        state.n(),
        q.kinetic,
        q.quotient,
        ln_n * q.quotient,
        lt
    );
    Ok(Run { stem: "slater".into(), outputs: Outputs { table: Some(t), ..Default::default() }, violation: false, summary })
}

fn coherent(f: &Flags) -> Result<Run> {
    let p = f.params_borderline(1, 0.5)?;
    if p.d() != 1 {
        return Err(Error::params("coherent-state γ is materialized in d = 1 only"));
    }
    let n = f.n.unwrap_or(4);
    let half = f.r_max.unwrap_or(8.0);
    let h = 2.0 * half / f.grid_n.unwrap_or(320) as f64;
    let rho = gaussian_density_1d(n, 1.0, half, h)?;
    let ell = coherent_scale(n as f64, &p);
    let dg = CoherentGamma::build(&rho, ell, &p)?.diagnostics()?;
    let mut t = Table::new(&[
        "N", "s", "ell", "eig_min", "eig_max", "trace", "density_l1", "kinetic", "localization", "slack_smeared",
        "slack_bare",
    ]);
    t.push(vec![
        n.to_string(),
        num(p.s()),
        num(dg.ell),
        num(dg.eig_min),
        num(dg.eig_max),
        num(dg.trace),
        num(dg.density_l1),
        num(dg.kinetic),
        num(dg.localization),
        num(dg.slack_smeared),
        num(dg.slack_bare),
    ]);
    let summary = format!(
        "coherent: spectrum [{:.3e}, {:.6}] trace = {:.8} density L1 = {:.2e} slack = {:.4e}",
        dg.eig_min, dg.eig_max, dg.trace, dg.density_l1, dg.slack_bare
    );
    Ok(Run { stem: "coherent".into(), outputs: Outputs { table: Some(t), ..Default::default() }, violation: false, summary })
}

/// Default (trials, samples) per suite.
fn suite_defaults(s: Suite) -> (usize, usize) {
    match s {
        Suite::Electrostatic | Suite::Indirect => (1000, 2000),
        Suite::Nn => (8, 2000),
        Suite::Elementary | Suite::Screened => (1_000_000, 0),
        Suite::Ltvu => (1000, ineq::DEFAULT_ANGULAR),
        Suite::Partition => (3, 0),
        Suite::Fdll => (100, DEFAULT_RESOLUTION),
        Suite::Sublevel => (1000, 20_000),
    }
}

pub fn run_suite(suite: Suite, f: &Flags) -> Result<SweepReport> {
    let (trials, samples) = suite_defaults(suite);
    let o = SweepOptions { trials: f.trials.unwrap_or(trials), seed: f.seed(), samples: f.samples.unwrap_or(samples) };
    match suite {
        Suite::Electrostatic => ineq::electrostatic_sweep(&o),
        Suite::Indirect => ineq::indirect_sweep(&o),
        Suite::Nn => ineq::nearest_neighbor_sweep(&f.params(3, 1.0)?, &o),
        Suite::Elementary => ineq::elementary_scan(f.s.unwrap_or(0.75), f.d.unwrap_or(3), &o),
        Suite::Screened => ineq::screened_count_scan(&o),
        Suite::Ltvu => ineq::ltvu_sweep(&f.params(3, 0.5)?, &o),
        Suite::Partition => {
            let cases = match (f.n, f.m) {
                (Some(n), Some(m)) => vec![(n, m)],
                (Some(n), None) => (1..n.saturating_sub(1)).map(|m| (n, m)).collect(),
                (None, _) => ineq::partition_cases(6),
            };
            if cases.is_empty() {
                return Err(Error::input("no admissible (N, M); need N ≥ 3"));
            }
            ineq::partition_sweep(&f.params(3, 1.0)?, &o, &cases)
        }
        Suite::Fdll => ineq::fdll_sweep(o.samples),
        Suite::Sublevel => ineq::sublevel_sweep(&o),
    }
}

fn verify(suite: Suite, f: &Flags) -> Result<Run> {
    let rep = run_suite(suite, f)?;
    let header: Vec<&str> = SweepReport::CSV_HEADER.split(',').collect();
    let mut t = Table::new(&header);
    t.push(rep.csv_row().split(',').map(String::from).collect());
    let summary = format!(
        "verify {}: trials = {} violations = {} empirical constant = {}{}",
        rep.id,
        rep.trials,
        rep.violations,
        rep.empirical_constant,
        rep.proof_constant.map(|c| format!(" (proof constant {c})")).unwrap_or_default()
    );
    Ok(Run {
        stem: format!("verify_{}", rep.id),
        violation: !rep.passed(),
        outputs: Outputs {
            table: Some(t),
            json: Some(serde_json::to_value(&rep).expect("report json")),
            ..Default::default()
        },
        summary,
    })
}

fn predict(f: &Flags) -> Result<Run> {
    let (Some(d), Some(s)) = (f.d, f.s) else {
        return Err(Error::params("predict needs --d and --s"));
    };
    let p = Params::new(d, s, f.allow_borderline.unwrap_or(false))?;
    let ns = log_grid(10, f.n.unwrap_or(1_000_000).max(11), 11);
    let refs = reference_lines(d, s);
    if p.is_borderline() {
        let pts = conjecture_2d(&ns)?;
        let mut t = Table::new(&["N", "four_over_lnN"]);
        for c in &pts {
            t.push(vec![c.n.to_string(), num(c.value)]);
        }
        let mut series = vec![Series::new("4/ln N (limsup bound, conjectured limit)", pts.iter().map(|c| (c.n as f64, c.value)).collect())];
        for r in &refs {
            series.push(Series::new(r.label.clone(), ns.iter().map(|&n| (n as f64, r.at(n))).collect()).dashed());
        }
        let plot = Plot {
            title: format!("κ_N in the borderline case d = {d}, s = {s}"),
            x_label: "N".into(),
            y_label: "κ_N".into(),
            log_x: true,
            log_y: true,
            series,
        };
        return Ok(Run {
            stem: "predict".into(),
            outputs: Outputs { table: Some(t), plot: Some(plot), ..Default::default() },
            violation: false,
            summary: format!("predict: borderline d = 2s, emitted 4/ln N at {} points", pts.len()),
        });
    }
    let tau_hat = match f.tau {
        Some(t) => t,
        None => solve_with(f, Kind::Tau, p)?.value,
    };
    let pred = predicted_kappa(&p, tau_hat, None, &ns, f.band.unwrap_or(1.0))?;
    let mut header = vec!["N".to_string(), "central".into(), "band_lo".into(), "band_hi".into()];
    header.extend(refs.iter().map(|r| r.label.clone()));
    let mut t = Table { header, rows: Vec::new() };
    for r in &pred.rows {
        let mut row = vec![r.n.to_string(), num(r.central), num(r.band_lo), num(r.band_hi)];
        row.extend(refs.iter().map(|l| num(l.at(r.n))));
        t.push(row);
    }
    let scale = |n: usize| (n as f64).powf(1.0 - p.lambda() / p.df());
    let mut series = vec![
        Series::new("N^{1−2s/d}·κ prediction = τ·c^TF", pred.rows.iter().map(|r| (r.n as f64, r.central * scale(r.n))).collect()),
        Series::new("band (non-rigorous)", pred.rows.iter().map(|r| (r.n as f64, r.band_hi * scale(r.n))).collect()).dashed(),
        Series::new("band (non-rigorous) ", pred.rows.iter().map(|r| (r.n as f64, r.band_lo * scale(r.n))).collect()).dashed(),
    ];
    for r in &refs {
        series.push(Series::new(format!("N^{{1−2s/d}}·{}", r.label), ns.iter().map(|&n| (n as f64, r.at(n) * scale(n))).collect()).dashed());
    }
    let plot = Plot {
        title: format!("Predicted N^{{1−2s/d}}κ_N, d = {d}, s = {s}"),
        x_label: "N".into(),
        y_label: "N^{1−2s/d}·κ_N".into(),
        log_x: true,
        log_y: true,
        series,
    };
    let summary = format!(
        "predict: τ̂ = {tau_hat} τ̂·c_tf = {} remainder exponent = {} (band constant {} is not a proved value)",
        tau_hat * pred.c_tf,
        pred.remainder_exponent,
        opt_num(Some(pred.band_constant))
    );
    Ok(Run {
        stem: "predict".into(),
        outputs: Outputs {
            table: Some(t),
            json: Some(serde_json::to_value(&pred).expect("prediction json")),
            plot: Some(plot),
            extra: Vec::new(),
        },
        violation: false,
        summary,
    })
}
