//! Classical capacity `1 / f_gar(kappa)` from the closed form and from quadrature.

use spherical_perceptron::scalar_kernels::{alpha_c_upper, f_gar_closed, f_gar_quadrature};

fn main() -> spherical_perceptron::Result<()> {
    println!("{:>6} {:>14} {:>14} {:>10}", "kappa", "f_gar", "quadrature", "alpha_c");
    for kappa in [-1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0] {
        let closed = f_gar_closed(kappa);
        let quad = f_gar_quadrature(kappa)?;
        println!("{kappa:>6} {closed:>14.10} {quad:>14.10} {:>10.5}", alpha_c_upper(kappa));
    }
    Ok(())
}
