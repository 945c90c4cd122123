//! Randomized verification of the inequalities and identities used as building
//! blocks, with empirical constants.

pub mod electrostatic;
pub mod elementary;
pub mod indirect;
pub mod ltvu;
pub mod nearest;
pub mod partition;
pub mod sublevel;

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use electrostatic::{electrostatic_constant, electrostatic_gap, electrostatic_sweep, ElectrostaticGap, SweepOptions};
pub use elementary::{elementary_scan, screened_count_scan};
pub use indirect::{concentration_sweep, indirect_gap, indirect_sweep, IndirectGap};
pub use ltvu::{ltvu_constant, ltvu_integral_check, ltvu_sweep, LtvuCheck, DEFAULT_ANGULAR};
pub use nearest::{nearest_neighbor_gap, nearest_neighbor_sweep, NearestNeighborGap};
pub use partition::{levy_leblond_plan, partition_cases, partition_identity_check, partition_sweep, LevyLeblondPlan, PartitionResidual, PlanMode, DEFAULT_EPSILON};
pub use sublevel::{fdll_sweep, sublevel_sweep};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub id: String,
    pub d: Option<usize>,
    pub s: Option<f64>,
    pub lambda: Option<f64>,
    pub trials: usize,
    pub violations: usize,
    /// Max over trials of LHS/RHS, or the worst residual for identities.
    pub empirical_constant: f64,
    /// Trial index attaining the empirical constant.
    pub argmax: usize,
    /// Constant the proof supplies, when it is explicit.
    pub proof_constant: Option<f64>,
    pub seed: u64,
    pub samples: usize,
    pub ranges: BTreeMap<String, String>,
    /// Set for regimes the paper states without proof.
    pub conjectural: bool,
}

impl SweepReport {
    pub(crate) fn new(id: &str, seed: u64, samples: usize) -> Self {
        SweepReport {
            id: id.to_string(),
            d: None,
            s: None,
            lambda: None,
            trials: 0,
            violations: 0,
            empirical_constant: f64::NEG_INFINITY,
            argmax: 0,
            proof_constant: None,
            seed,
            samples,
            ranges: BTreeMap::new(),
            conjectural: false,
        }
    }

    pub(crate) fn range(mut self, key: &str, value: impl Into<String>) -> Self {
        self.ranges.insert(key.to_string(), value.into());
        self
    }

    /// Fold per-trial (value, violated) outcomes in trial order; −∞ marks a trial
    /// with no ratio (vanishing right side), NaN always counts as a violation.
    pub(crate) fn absorb(mut self, outcomes: &[(f64, bool)]) -> Self {
        for (i, (v, bad)) in outcomes.iter().enumerate() {
            self.trials += 1;
            if *bad || v.is_nan() {
                self.violations += 1;
            }
            if *v > self.empirical_constant {
                self.empirical_constant = *v;
                self.argmax = i;
            }
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub const CSV_HEADER: &'static str =
        "id,d,s,lambda,trials,violations,empirical_constant,argmax,proof_constant,seed,samples,conjectural";

    pub fn csv_row(&self) -> String {
        let opt = |x: Option<f64>| x.map(|v| format!("{v:e}")).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{:e},{},{},{},{},{}",
            self.id,
            self.d.map(|v| v.to_string()).unwrap_or_default(),
            opt(self.s),
            opt(self.lambda),
            self.trials,
            self.violations,
            self.empirical_constant,
            self.argmax,
            opt(self.proof_constant),
            self.seed,
            self.samples,
            self.conjectural
        )
    }
}

/// Independent generator for one trial of a seeded sweep.
pub(crate) fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Seed for Monte-Carlo parts of one trial, decorrelated from its generator.
pub(crate) fn trial_seed(seed: u64, trial: usize) -> u64 {
    seed.wrapping_mul(0x2545_F491_4F6C_DD1D) ^ (trial as u64).wrapping_add(0x9E37_79B9_7F4A_7C15)
}
