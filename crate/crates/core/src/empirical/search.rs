//! Projected subgradient search on the unit sphere.

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::certify::convex_certify_from;
use super::objective::{objective_at_margin, verify_stability};
use super::PerceptronInstance;
use crate::error::{require, Result};

/// How a trial's verdict was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    /// Local search only: a found feasible point, or (negative margins)
    /// the failure to find one.
    LocalSearch,
    /// A convex argument settled the question globally.
    ConvexGlobal,
    /// Nonnegative margin, no feasible point found and no certificate either.
    None,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalTrialResult {
    pub best_x: DVector<f64>,
    /// `||(kappa 1 - H x)_+||` at `best_x`.
    pub best_objective: f64,
    pub feasible: bool,
    pub certificate: Certificate,
    pub restarts_used: usize,
    /// Certified lower bound on the sphere minimum, when a convex route ran.
    pub certified_lower: Option<f64>,
}

/// Step schedule and stopping rules of the local search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub iterations: usize,
    pub step_scale: f64,
    pub stall_window: usize,
    pub stall_rel_decrease: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            iterations: 2000,
            step_scale: 0.5,
            stall_window: 50,
            stall_rel_decrease: 1e-10,
        }
    }
}

/// Restart count used when the caller has no preference.
pub fn default_restarts(kappa: f64) -> usize {
    if kappa < 0.0 {
        30
    } else {
        5
    }
}

fn random_unit(n: usize, rng: &mut ChaCha8Rng) -> DVector<f64> {
    let v: DVector<f64> = DVector::from_fn(n, |_, _| StandardNormal.sample(rng));
    let norm = v.norm();
    v / norm
}

struct Descent {
    x: DVector<f64>,
    objective: f64,
}

// Subgradient steps of length step_scale / sqrt(t) * g / ||grad|| along
// -grad / ||grad||, renormalized onto the sphere.
fn descend(inst: &PerceptronInstance, target: f64, mut x: DVector<f64>, eps: f64, cfg: &SearchConfig) -> Descent {
    let mut best = Descent {
        objective: f64::INFINITY,
        x: x.clone(),
    };
    let mut history = Vec::with_capacity(cfg.iterations);
    for t in 1..=cfg.iterations {
        let (g, grad) = objective_at_margin(inst, target, &x);
        if g < best.objective {
            best.objective = g;
            best.x.copy_from(&x);
        }
        history.push(best.objective);
        if best.objective <= eps {
            break;
        }
        if t > cfg.stall_window {
            let old = history[t - 1 - cfg.stall_window];
            if old - best.objective <= cfg.stall_rel_decrease * old {
                break;
            }
        }
        let grad_norm = grad.norm();
        if grad_norm == 0.0 {
            break;
        }
        let step = cfg.step_scale / (t as f64).sqrt() * g / grad_norm;
        x.axpy(-step / grad_norm, &grad, 1.0);
        let norm = x.norm();
        x /= norm;
    }
    best
}

/// Searches the unit sphere for `x` with `H x >= kappa` from `restarts` random starts.
///
/// For `kappa >= 0` a convex certificate is attempted once the first restart
/// fails; a positive answer ends the search early.
pub fn minimize_sphere(inst: &PerceptronInstance, restarts: usize, seed: u64) -> Result<EmpiricalTrialResult> {
    minimize_sphere_with(inst, restarts, seed, &SearchConfig::default())
}

pub fn minimize_sphere_with(
    inst: &PerceptronInstance,
    restarts: usize,
    seed: u64,
    cfg: &SearchConfig,
) -> Result<EmpiricalTrialResult> {
    require(restarts >= 1, "restarts", restarts as f64, "at least one restart required")?;
    let eps = inst.feasibility_tolerance();
    // A padded margin keeps points within `eps` of the target strictly stable.
    let target = inst.kappa + 2.0 * eps;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut best: Option<Descent> = None;
    let mut certificate = if inst.kappa < 0.0 {
        Certificate::LocalSearch
    } else {
        Certificate::None
    };
    let mut certified_lower = None;
    let mut feasible = false;
    let mut restarts_used = 0;

    for _ in 0..restarts {
        restarts_used += 1;
        let start = random_unit(inst.n, &mut rng);
        let run = descend(inst, target, start, eps, cfg);
        if best.as_ref().map_or(true, |b| run.objective < b.objective) {
            best = Some(run);
        }
        let incumbent = best.as_ref().expect("set above");
        // points between kappa and the padded target are stable too
        if incumbent.objective <= eps || verify_stability(inst, &incumbent.x) {
            feasible = true;
            certificate = Certificate::LocalSearch;
            break;
        }
        if inst.kappa >= 0.0 && certified_lower.is_none() {
            let cert = convex_certify_from(inst, Some(&incumbent.x))?;
            certified_lower = Some(cert.global_min_lower);
            if let Some(w) = cert.witness {
                best = Some(Descent { x: w, objective: 0.0 });
                feasible = true;
                certificate = Certificate::ConvexGlobal;
                break;
            }
            if cert.infeasible() {
                certificate = Certificate::ConvexGlobal;
                break;
            }
        }
    }

    let best = best.expect("at least one restart ran");
    let (objective, _) = objective_at_margin(inst, inst.kappa, &best.x);
    Ok(EmpiricalTrialResult {
        best_objective: objective,
        best_x: best.x,
        feasible,
        certificate,
        restarts_used,
        certified_lower,
    })
}
