//! The lifted bound `L(c3; alpha, kappa)` around the lowered capacity at kappa = -0.7.
//!
//! `L` turns positive, certifying infeasibility, a little below the classical
//! capacity 7.0448 once `c3` is tuned.

use spherical_perceptron::capacity_solver::best_bound;
use spherical_perceptron::lifted_bound::lower_bound_l;
use spherical_perceptron::scalar_kernels::alpha_c_upper;

fn main() -> spherical_perceptron::Result<()> {
    let kappa = -0.7;
    println!("classical capacity at kappa = {kappa}: {:.5}", alpha_c_upper(kappa));
    println!("{:>7} {:>12} {:>12} {:>8} {:>8}", "alpha", "L(c3 = 0)", "max_c3 L", "c3*", "gamma*");
    for alpha in [6.9, 7.0, 7.02, 7.03, 7.035, 7.05] {
        let plain = lower_bound_l(0.0, alpha, kappa)?;
        let best = best_bound(alpha, kappa)?;
        println!(
            "{alpha:>7} {:>12.3e} {:>12.3e} {:>8.4} {:>8.4}",
            plain.lower_bound, best.lower_bound, best.c3, best.gamma_per
        );
    }
    Ok(())
}
