//! Local search at a negative margin above the classical capacity.
//!
//! No convex certificate exists here; the search only fails to find a point.

use spherical_perceptron::empirical::{default_restarts, minimize_sphere, sample_instance, verify_stability, EntryDist};

fn main() -> spherical_perceptron::Result<()> {
    let (n, kappa) = (120, -0.5);
    for alpha in [3.0, 4.0, 6.0] {
        let inst = sample_instance(n, alpha, kappa, EntryDist::Gaussian, 9)?;
        let res = minimize_sphere(&inst, default_restarts(kappa), 10)?;
        println!(
            "alpha = {alpha}: feasible {} (verified {}), best objective / sqrt(n) = {:.4}, restarts {}",
            res.feasible,
            verify_stability(&inst, &res.best_x),
            res.best_objective / (n as f64).sqrt(),
            res.restarts_used
        );
    }
    Ok(())
}
