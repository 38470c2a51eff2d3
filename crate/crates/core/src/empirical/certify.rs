//! Global infeasibility certificates for nonnegative margins.
//!
//! Two convex routes are tried:
//!
//! * **Ball dual.** For `kappa >= 0` a sphere solution rescales into the unit
//!   ball, so `min_{||x|| <= 1} ||(kappa 1 - Hx)_+||` lower-bounds the sphere
//!   minimum. Every nonnegative unit `lambda` gives the dual bound
//!   `kappa lambda^T 1 - ||H^T lambda||`. Useless at `kappa = 0`, where `x = 0`
//!   is feasible for the ball.
//! * **Conic alternative.** A strictly positive `lambda` with `H^T lambda = 0`
//!   rules out any nonzero `x` with `Hx >= 0`, hence every `kappa >= 0`. With
//!   `sigma = sigma_min(H)` and `w = H^T lambda` the residual on the sphere is
//!   at least `(lambda_min sigma - ||w||) / (lambda_min + ||lambda||)`.

use nalgebra::{DMatrix, DVector};

use super::objective::objective_at_margin;
use super::PerceptronInstance;
use crate::error::{require, Result};

const BALL_MAX_ITERS: usize = 20_000;
const BALL_GAP_TOL: f64 = 1e-8;
const POWER_ITERS: usize = 60;
const CONIC_MAX_ITERS: usize = 50_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateRoute {
    BallDual,
    ConicAlternative,
}

/// Outcome of [`convex_certify`].
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexCertificate {
    /// Certified lower bound on `min_{||x|| = 1} ||(kappa 1 - Hx)_+||`.
    pub global_min_lower: f64,
    /// Which route produced the infeasibility proof, if any.
    pub route: Option<CertificateRoute>,
    /// Smallest residual found on the ball, when the ball route ran.
    pub ball_min_upper: Option<f64>,
    /// A unit vector with `H x >= kappa`, when the ball route found one.
    pub witness: Option<DVector<f64>>,
}

impl ConvexCertificate {
    pub fn infeasible(&self) -> bool {
        self.route.is_some()
    }
}

/// Certifies (in)feasibility of a `kappa >= 0` instance without local search.
pub fn convex_certify(inst: &PerceptronInstance) -> Result<ConvexCertificate> {
    convex_certify_from(inst, None)
}

/// Same as [`convex_certify`], warm-starting the ball route at `start`.
pub fn convex_certify_from(inst: &PerceptronInstance, start: Option<&DVector<f64>>) -> Result<ConvexCertificate> {
    require(inst.kappa >= 0.0, "kappa", inst.kappa, "convex certificates need a nonnegative margin")?;
    let eps = inst.feasibility_tolerance();
    let mut cert = ConvexCertificate {
        global_min_lower: 0.0,
        route: None,
        ball_min_upper: None,
        witness: None,
    };

    if inst.kappa > 0.0 {
        let ball = minimize_over_ball(inst, start);
        cert.ball_min_upper = Some(ball.upper);
        cert.global_min_lower = ball.lower.max(0.0);
        if ball.lower > eps {
            cert.route = Some(CertificateRoute::BallDual);
            return Ok(cert);
        }
        if let Some(w) = ball.witness {
            cert.witness = Some(w);
            return Ok(cert);
        }
    }

    if let Some(bound) = conic_alternative(&inst.h_matrix) {
        cert.global_min_lower = cert.global_min_lower.max(bound);
        cert.route = Some(CertificateRoute::ConicAlternative);
    }
    Ok(cert)
}

struct BallResult {
    upper: f64,
    lower: f64,
    witness: Option<DVector<f64>>,
}

fn spectral_norm_sq(h: &DMatrix<f64>) -> f64 {
    let n = h.ncols();
    let mut v = DVector::from_fn(n, |i, _| 1.0 + (i % 7) as f64 * 0.1);
    let mut est = 0.0;
    for _ in 0..POWER_ITERS {
        let w = h.tr_mul(&(h * &v));
        est = w.norm() / v.norm();
        v = w / est.max(f64::MIN_POSITIVE);
    }
    est
}

fn project_ball(x: &mut DVector<f64>) {
    let norm = x.norm();
    if norm > 1.0 {
        *x /= norm;
    }
}

// Accelerated projected gradient on 0.5 ||(kappa 1 - Hx)_+||^2 over the unit
// ball. The dual bound is read off the residual at each extrapolated point.
fn minimize_over_ball(inst: &PerceptronInstance, start: Option<&DVector<f64>>) -> BallResult {
    let h = &inst.h_matrix;
    let kappa = inst.kappa;
    let eps = inst.feasibility_tolerance();
    // aim slightly above the margin so a small residual still leaves H x >= kappa
    let target = kappa + 2.0 * eps;
    let step = 1.0 / (1.2 * spectral_norm_sq(h));

    let mut x = start.cloned().unwrap_or_else(|| DVector::zeros(inst.n));
    project_ball(&mut x);
    let mut y = x.clone();
    let mut t = 1.0f64;
    let mut upper = f64::INFINITY;
    let mut lower = f64::NEG_INFINITY;
    let mut lower_target = f64::NEG_INFINITY;
    let mut best_x = x.clone();

    let mut r = DVector::zeros(inst.m);
    let mut htr = DVector::zeros(inst.n);
    for _ in 0..BALL_MAX_ITERS {
        r.fill(target);
        r.gemv(-1.0, h, &y, 1.0);
        r.apply(|v| *v = v.max(0.0));
        let r_norm = r.norm();
        htr.gemv_tr(1.0, h, &r, 0.0);
        if r_norm > 0.0 {
            let (mass, pull) = (r.sum() / r_norm, htr.norm() / r_norm);
            lower = lower.max(kappa * mass - pull);
            lower_target = lower_target.max(target * mass - pull);
        }

        let mut x_next = &y + &htr * step;
        project_ball(&mut x_next);
        let (g, _) = objective_at_margin(inst, target, &x_next);
        if g < upper {
            upper = g;
            best_x.copy_from(&x_next);
        }
        if upper <= eps || upper - lower_target <= BALL_GAP_TOL {
            break;
        }

        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        y = &x_next + (&x_next - &x) * ((t - 1.0) / t_next);
        x = x_next;
        t = t_next;
    }

    let witness = if upper <= eps && best_x.norm() > 0.0 {
        let unit = &best_x / best_x.norm();
        let hx = h * &unit;
        hx.iter().all(|&v| v >= kappa).then_some(unit)
    } else {
        None
    };
    BallResult { upper, lower, witness }
}

// Alternating projections between null(H^T) and {lambda >= 1}.
fn conic_alternative(h: &DMatrix<f64>) -> Option<f64> {
    let (m, n) = h.shape();
    if m <= n {
        return None;
    }
    let gram = h.tr_mul(h);
    let chol = gram.clone().cholesky()?;
    let project = |lambda: &DVector<f64>| -> DVector<f64> {
        let coef = chol.solve(&h.tr_mul(lambda));
        lambda - h * coef
    };

    let mut lambda = DVector::from_element(m, 1.0);
    for it in 0..CONIC_MAX_ITERS {
        let y = project(&lambda);
        let y_min = y.min();
        if y_min > 0.0 {
            log::debug!("conic alternative found after {it} projections");
            let w = h.tr_mul(&y).norm();
            let sigma_sq = gram.symmetric_eigenvalues().min();
            if sigma_sq <= 0.0 {
                return None;
            }
            let bound = (y_min * sigma_sq.sqrt() - w) / (y_min + y.norm());
            return (bound > 0.0).then_some(bound);
        }
        lambda = y.map(|v| v.max(1.0));
    }
    None
}
