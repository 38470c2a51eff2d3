//! Gaussian special functions, quadrature and the classical Gardner capacity.
//!
//! The capacity formula is built on the second-moment functional
//!
//! ```text
//! f_gar(kappa) = 1/sqrt(2 pi) * integral_{-kappa}^{inf} (z + kappa)^2 exp(-z^2/2) dz
//!              = (1 + kappa^2) Phi(kappa) + kappa phi(kappa)
//! ```
//!
//! and `alpha_c(kappa) = 1 / f_gar(kappa)`.

pub mod normal;
pub mod quadrature;

use serde::{Deserialize, Serialize};

use crate::error::{require, NumericError, Result};

pub use normal::{cdf, erfc, ln_erfc, pdf, std_normal, GaussianScalars};

/// Supported margin range; arguments outside are clamped.
pub const KAPPA_MIN: f64 = -10.0;
pub const KAPPA_MAX: f64 = 10.0;

/// Upper end of the integration window above `max(-kappa, 0)`.
const QUADRATURE_SPAN: f64 = 12.0;
const TAIL_LIMIT: f64 = 1e-14;
const QUADRATURE_TOL: f64 = 1e-13;
const QUADRATURE_MAX_SPLITS: usize = 2000;

/// A problem family: margin `kappa` and pattern ratio `alpha = m / n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub kappa: f64,
    pub alpha: f64,
}

impl ModelParams {
    pub fn new(kappa: f64, alpha: f64) -> Result<Self> {
        require(kappa.is_finite(), "kappa", kappa, "must be finite")?;
        require(alpha > 0.0 && alpha.is_finite(), "alpha", alpha, "must be positive and finite")?;
        Ok(Self { kappa, alpha })
    }
}

/// Record produced when a margin falls outside `[KAPPA_MIN, KAPPA_MAX]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KappaClampWarning {
    pub requested: f64,
    pub used: f64,
}

/// Clamps `kappa` to the supported range, returning a warning record when it moved.
pub fn clamp_kappa(kappa: f64) -> (f64, Option<KappaClampWarning>) {
    let used = kappa.clamp(KAPPA_MIN, KAPPA_MAX);
    if used == kappa {
        (kappa, None)
    } else {
        (
            used,
            Some(KappaClampWarning {
                requested: kappa,
                used,
            }),
        )
    }
}

fn clamped(kappa: f64) -> f64 {
    let (used, warning) = clamp_kappa(kappa);
    if let Some(w) = warning {
        log::warn!("kappa {} outside [{KAPPA_MIN}, {KAPPA_MAX}], clamped to {}", w.requested, w.used);
    }
    used
}

/// `f_gar(kappa)` by adaptive quadrature. Reference route for [`f_gar_closed`].
pub fn f_gar_quadrature(kappa: f64) -> Result<f64> {
    require(kappa.is_finite(), "kappa", kappa, "must be finite")?;
    let kappa = clamped(kappa);
    let lo = -kappa;
    let hi = lo.max(0.0) + QUADRATURE_SPAN;

    // integral_{hi}^{inf} (z + kappa)^2 phi(z) dz = (hi + 2 kappa) phi(hi) + (1 + kappa^2) Q(hi),
    // with Mills' bound Q(hi) <= phi(hi) / hi.
    let phi_hi = pdf(hi);
    let tail = (hi + 2.0 * kappa) * phi_hi + (1.0 + kappa * kappa) * phi_hi / hi;
    if tail > TAIL_LIMIT {
        return Err(NumericError::TailTooLarge {
            bound: tail,
            limit: TAIL_LIMIT,
        });
    }

    quadrature::integrate(
        |z| {
            let u = z + kappa;
            u * u * pdf(z)
        },
        lo,
        hi,
        QUADRATURE_TOL,
        QUADRATURE_MAX_SPLITS,
    )
}

/// `f_gar(kappa) = (1 + kappa^2) Phi(kappa) + kappa phi(kappa)`.
pub fn f_gar_closed(kappa: f64) -> f64 {
    let kappa = clamped(kappa);
    (1.0 + kappa * kappa) * cdf(kappa) + kappa * pdf(kappa)
}

/// The Gardner capacity `1 / f_gar(kappa)`.
///
/// Exact storage capacity for `kappa >= 0`; for negative margins it is only an
/// upper bound (see [`crate::capacity_solver`] for the lowered one).
pub fn alpha_c_upper(kappa: f64) -> f64 {
    1.0 / f_gar_closed(kappa)
}

#[cfg(test)]
mod tests {
    use super::*;

    // mpmath quadrature at 40 digits
    const F_GAR_REF: [(f64, f64); 8] = [
        (0.0, 0.5),
        (-0.5, 0.209_639_260_025_333_88),
        (-1.0, 0.075_339_783_343_770_753),
        (-0.8, 0.115_689_611_467_584_37),
        (1.0, 1.924_660_216_656_229_2),
        (2.5, 7.248_800_677_622_044),
        (-3.0, 2.034_350_804_869_237_4e-4),
        (-6.0, 4.844_576_745_511_828e-11),
    ];

    #[test]
    fn closed_form_and_quadrature_match_reference() {
        for &(k, f) in &F_GAR_REF {
            assert!((f_gar_closed(k) - f).abs() < 1e-13, "closed {k}");
            assert!((f_gar_quadrature(k).unwrap() - f).abs() < 1e-12, "quad {k}");
        }
    }

    #[test]
    fn published_capacity_values() {
        assert!((alpha_c_upper(0.0) - 2.0).abs() < 1e-12);
        assert!((alpha_c_upper(-0.6) - 5.7787).abs() < 1e-4);
        assert!((alpha_c_upper(-0.8) - 8.6431).abs() < 1e-3);
        // 1/4.7700 rounds the published capacity to four places
        assert!((f_gar_closed(-0.5) - 1.0 / 4.77).abs() < 1e-5);
        let r = 1.0 / f_gar_closed(-1.0);
        assert!(((r - 13.2731) / 13.2731).abs() < 1e-3);
    }

    #[test]
    fn quadrature_agrees_with_closed_form_on_uniform_grid() {
        for i in 0..100 {
            let k = -3.0 + 6.0 * (i as f64 + 0.5) / 100.0;
            let q = f_gar_quadrature(k).unwrap();
            assert!((q - f_gar_closed(k)).abs() <= 1e-10, "kappa = {k}");
        }
    }

    #[test]
    fn quadrature_over_full_supported_range() {
        for &k in &[KAPPA_MIN, -7.5, 5.0, KAPPA_MAX] {
            let q = f_gar_quadrature(k).unwrap();
            assert!((q - f_gar_closed(k)).abs() <= 1e-10 * (1.0 + q));
        }
    }

    #[test]
    fn capacity_is_strictly_decreasing_and_exceeds_two_only_for_negative_margins() {
        let mut prev = f64::INFINITY;
        for i in 0..=300 {
            let k = -2.0 + 0.01 * i as f64;
            let a = alpha_c_upper(k);
            assert!(a < prev, "kappa = {k}");
            assert!(f_gar_closed(k) > 0.0);
            if k < -1e-12 {
                assert!(a > 2.0);
            } else if k > 1e-12 {
                assert!(a < 2.0);
            }
            prev = a;
        }
        assert!(f_gar_closed(-6.0) < 1e-7);
    }

    #[test]
    fn clamping_reports_and_saturates() {
        assert_eq!(clamp_kappa(0.3), (0.3, None));
        let (used, w) = clamp_kappa(-12.0);
        assert_eq!(used, KAPPA_MIN);
        assert_eq!(w.unwrap().requested, -12.0);
        assert_eq!(f_gar_closed(25.0), f_gar_closed(KAPPA_MAX));
    }

    #[test]
    fn model_params_validation() {
        assert!(ModelParams::new(-0.5, 2.0).is_ok());
        assert!(ModelParams::new(0.0, 0.0).is_err());
        assert!(ModelParams::new(f64::NAN, 1.0).is_err());
        assert!(f_gar_quadrature(f64::INFINITY).is_err());
    }
}
