//! Feasible fraction of random instances across the zero-margin threshold alpha = 2.
//!
//! Small `n` keeps this under a minute; the transition sharpens as `n` grows.

use spherical_perceptron::empirical::estimate_feasibility;

fn main() -> spherical_perceptron::Result<()> {
    let (n, trials) = (150, 10);
    println!("{:>6} {:>10} {:>12} {:>10}", "alpha", "feasible", "xi/sqrt(n)", "certified");
    for alpha in [1.6, 1.8, 2.0, 2.2, 2.4] {
        let est = estimate_feasibility(n, alpha, 0.0, trials, 5, 1)?;
        let xi = est.mean_xi_over_sqrt_n.map_or("-".to_string(), |v| format!("{v:.4}"));
        println!("{alpha:>6} {:>10} {xi:>12} {:>10}", est.fraction_feasible, est.certified_infeasible);
    }
    Ok(())
}
