use thiserror::Error;

/// Errors raised by the numerical kernels, the bound evaluator and the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericError {
    #[error("invalid argument `{name}` = {value}: {reason}")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("adaptive quadrature did not converge after {evaluations} interval splits (estimated error {error:e})")]
    QuadratureNonConvergence { evaluations: usize, error: f64 },

    #[error("integration tail bound {bound:e} exceeds the allowed {limit:e}")]
    TailTooLarge { bound: f64, limit: f64 },

    #[error("optimization failed: {0}")]
    Optimization(String),

    #[error("root bracket [{lo}, {hi}] does not enclose a sign change (G(lo) = {g_lo}, G(hi) = {g_hi})")]
    BracketFailure {
        lo: f64,
        hi: f64,
        g_lo: f64,
        g_hi: f64,
    },
}

pub type Result<T> = std::result::Result<T, NumericError>;

pub(crate) fn require(cond: bool, name: &'static str, value: f64, reason: &'static str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(NumericError::Domain {
            name,
            value,
            reason,
        })
    }
}
