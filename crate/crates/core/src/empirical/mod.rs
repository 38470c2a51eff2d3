//! Random perceptron instances and empirical feasibility checks.
//!
//! An instance is feasible when some unit `x` satisfies `H x >= kappa 1`,
//! equivalently when `min_{||x|| = 1} ||(kappa 1 - Hx)_+|| = 0`.

pub mod certify;
pub mod feasibility;
pub mod instance;
pub mod objective;
pub mod search;

pub use certify::{convex_certify, convex_certify_from, CertificateRoute, ConvexCertificate};
pub use feasibility::{estimate_feasibility, trial_seed, FeasibilityEstimate, FeasibilityExperiment, TrialOutcome};
pub use instance::{pattern_count, sample_instance, EntryDist, PerceptronInstance};
pub use objective::{inner_max, objective_and_subgradient, residual, verify_stability};
pub use search::{
    default_restarts, minimize_sphere, minimize_sphere_with, Certificate, EmpiricalTrialResult, SearchConfig,
};
