//! Monte Carlo estimates of the feasibility probability at `(alpha, kappa)`.

use rayon::prelude::*;
use serde::Serialize;

use super::search::{minimize_sphere, Certificate};
use super::{sample_instance, EntryDist};
use crate::error::{require, Result};

/// Per-trial seeds: the root seed XOR the trial index.
pub fn trial_seed(root: u64, trial: usize) -> u64 {
    root ^ trial as u64
}

// SplitMix64 finalizer; separates the search stream from the instance stream.
fn search_seed(instance_seed: u64) -> u64 {
    let mut z = instance_seed.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialOutcome {
    pub trial: usize,
    pub seed: u64,
    pub feasible: bool,
    pub best_objective: f64,
    pub certificate: Certificate,
    pub restarts_used: usize,
}

/// Aggregate of independent trials at one `(n, alpha, kappa)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityEstimate {
    pub n: usize,
    pub alpha: f64,
    pub kappa: f64,
    pub entry_dist: EntryDist,
    pub trials: usize,
    pub restarts: usize,
    pub seed: u64,
    pub fraction_feasible: f64,
    /// Mean of `best_objective / sqrt(n)` over the infeasible trials.
    pub mean_xi_over_sqrt_n: Option<f64>,
    /// Infeasible trials backed by a convex certificate.
    pub certified_infeasible: usize,
    pub outcomes: Vec<TrialOutcome>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilityExperiment {
    pub n: usize,
    pub alpha: f64,
    pub kappa: f64,
    pub entry_dist: EntryDist,
    pub trials: usize,
    pub restarts: usize,
    pub seed: u64,
}

impl FeasibilityExperiment {
    /// Runs every trial (in parallel when a pool is available); results are
    /// gathered in trial order, so the estimate depends on the seed alone.
    pub fn run(&self) -> Result<FeasibilityEstimate> {
        require(self.trials >= 1, "trials", self.trials as f64, "at least one trial required")?;
        require(self.restarts >= 1, "restarts", self.restarts as f64, "at least one restart required")?;
        let outcomes = (0..self.trials)
            .into_par_iter()
            .map(|t| {
                let seed = trial_seed(self.seed, t);
                let inst = sample_instance(self.n, self.alpha, self.kappa, self.entry_dist, seed)?;
                let res = minimize_sphere(&inst, self.restarts, search_seed(seed))?;
                Ok(TrialOutcome {
                    trial: t,
                    seed,
                    feasible: res.feasible,
                    best_objective: res.best_objective,
                    certificate: res.certificate,
                    restarts_used: res.restarts_used,
                })
            })
            .collect::<Result<Vec<_>>>()?;

        let feasible = outcomes.iter().filter(|o| o.feasible).count();
        let infeasible: Vec<&TrialOutcome> = outcomes.iter().filter(|o| !o.feasible).collect();
        let sqrt_n = (self.n as f64).sqrt();
        let mean_xi_over_sqrt_n = (!infeasible.is_empty())
            .then(|| infeasible.iter().map(|o| o.best_objective / sqrt_n).sum::<f64>() / infeasible.len() as f64);
        let certified_infeasible = infeasible
            .iter()
            .filter(|o| o.certificate == Certificate::ConvexGlobal)
            .count();

        Ok(FeasibilityEstimate {
            n: self.n,
            alpha: self.alpha,
            kappa: self.kappa,
            entry_dist: self.entry_dist,
            trials: self.trials,
            restarts: self.restarts,
            seed: self.seed,
            fraction_feasible: feasible as f64 / self.trials as f64,
            mean_xi_over_sqrt_n,
            certified_infeasible,
            outcomes,
        })
    }
}

/// Gaussian-entry feasibility estimate.
pub fn estimate_feasibility(
    n: usize,
    alpha: f64,
    kappa: f64,
    trials: usize,
    restarts: usize,
    seed: u64,
) -> Result<FeasibilityEstimate> {
    FeasibilityExperiment {
        n,
        alpha,
        kappa,
        entry_dist: EntryDist::Gaussian,
        trials,
        restarts,
        seed,
    }
    .run()
}
