use nalgebra::DVector;

use super::PerceptronInstance;

/// `max lambda^T v` over nonnegative unit `lambda`.
///
/// With a positive entry in `v` the maximizer is the normalized positive part;
/// otherwise it is the coordinate vector of the largest entry.
pub fn inner_max(v: &DVector<f64>) -> (f64, DVector<f64>) {
    let pos = v.map(|x| x.max(0.0));
    let norm = pos.norm();
    if norm > 0.0 {
        return (norm, pos / norm);
    }
    let i = v.imax();
    let mut lambda = DVector::zeros(v.len());
    lambda[i] = 1.0;
    (v[i], lambda)
}

/// Positive-part residual `(kappa 1 - H x)_+`.
pub fn residual(inst: &PerceptronInstance, kappa: f64, x: &DVector<f64>) -> DVector<f64> {
    let mut r = DVector::from_element(inst.m, kappa);
    r.gemv(-1.0, &inst.h_matrix, x, 1.0);
    r.apply(|v| *v = v.max(0.0));
    r
}

/// `g(x) = ||(kappa 1 - H x)_+||` and a subgradient `-H^T (kappa 1 - H x)_+ / g`
/// (zero when `g = 0`).
pub fn objective_and_subgradient(inst: &PerceptronInstance, x: &DVector<f64>) -> (f64, DVector<f64>) {
    objective_at_margin(inst, inst.kappa, x)
}

pub(crate) fn objective_at_margin(inst: &PerceptronInstance, kappa: f64, x: &DVector<f64>) -> (f64, DVector<f64>) {
    let r = residual(inst, kappa, x);
    let g = r.norm();
    let mut grad = DVector::zeros(inst.n);
    if g > 0.0 {
        grad.gemv_tr(-1.0 / g, &inst.h_matrix, &r, 0.0);
    }
    (g, grad)
}

/// True iff `H x >= kappa` in every row.
pub fn verify_stability(inst: &PerceptronInstance, x: &DVector<f64>) -> bool {
    let hx = &inst.h_matrix * x;
    hx.iter().all(|&v| v >= inst.kappa)
}
