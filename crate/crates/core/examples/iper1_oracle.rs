//! Closed form of the perceptron-side Gaussian expectation against Monte Carlo.

use spherical_perceptron::lifted_bound::{i_per1_closed, i_per1_mc};

fn main() -> spherical_perceptron::Result<()> {
    let points = [(0.2555, 0.4402, -0.7), (1.1266, 0.2922, -1.0), (0.5, 1.0, 0.0), (2.0, 0.3, -1.2)];
    for (i, &(c3, gamma, kappa)) in points.iter().enumerate() {
        let (closed, parts) = i_per1_closed(c3, gamma, kappa)?;
        let (mean, se) = i_per1_mc(c3, gamma, kappa, 400_000, i as u64)?;
        println!(
            "c3 = {c3:<7} gamma = {gamma:<7} kappa = {kappa:<5} closed = {closed:.8} mc = {mean:.8} +- {se:.1e} (p = {:.4}, s = {:.4})",
            parts.p, parts.s
        );
    }
    Ok(())
}
