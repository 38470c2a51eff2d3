//! Global certificates: local search next to the convex routes.

use spherical_perceptron::empirical::{convex_certify, minimize_sphere, sample_instance, EntryDist};

fn main() -> spherical_perceptron::Result<()> {
    // overloaded at zero margin: a strictly positive null vector of H^T exists
    let inst = sample_instance(200, 3.0, 0.0, EntryDist::Gaussian, 3)?;
    let cert = convex_certify(&inst)?;
    println!("alpha = 3, kappa = 0: route {:?}, lower bound {:.3e}", cert.route, cert.global_min_lower);

    // positive margin: the ball relaxation gives a quantitative bound
    let inst = sample_instance(200, 1.2, 0.5, EntryDist::Gaussian, 4)?;
    let cert = convex_certify(&inst)?;
    let search = minimize_sphere(&inst, 3, 5)?;
    println!(
        "alpha = 1.2, kappa = 0.5: route {:?}, lower bound {:.4}, local search best {:.4}",
        cert.route, cert.global_min_lower, search.best_objective
    );
    Ok(())
}
