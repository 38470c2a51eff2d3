//! Storage-capacity bounds for the spherical perceptron.
//!
//! * [`scalar_kernels`]: Gaussian special functions and the classical capacity `1 / f_gar(kappa)`.
//! * [`lifted_bound`]: the lifted lower bound on the min-max objective and its optimizers.
//! * [`capacity_solver`]: lowered capacity bounds for negative margins, sweeps and table reproduction.
//! * [`empirical`]: random instances, sphere-constrained search and convex certificates.
//! * [`cli`]: configuration, orchestration and CSV/JSON/text emission behind the binary.

pub mod capacity_solver;
pub mod cli;
pub mod empirical;
pub mod error;
pub mod lifted_bound;
pub mod optimize;
pub mod scalar_kernels;

pub use error::{NumericError, Result};
