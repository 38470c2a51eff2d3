use nalgebra::DVector;
use proptest::prelude::*;

use spherical_perceptron::capacity_solver::best_bound;
use spherical_perceptron::empirical::{
    convex_certify, inner_max, objective_and_subgradient, residual, sample_instance, EntryDist, PerceptronInstance,
};
use spherical_perceptron::lifted_bound::{i_per1_closed, i_sph, lower_bound_l};
use spherical_perceptron::scalar_kernels::{cdf, f_gar_closed, pdf};

fn instance(n: usize, alpha: f64, kappa: f64, seed: u64) -> PerceptronInstance {
    sample_instance(n, alpha, kappa, EntryDist::Gaussian, seed).unwrap()
}

fn unit(v: Vec<f64>) -> Option<DVector<f64>> {
    let v = DVector::from_vec(v);
    let norm = v.norm();
    (norm > 1e-3).then(|| v / norm)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn f_gar_is_positive_and_increasing(k in -5.0f64..5.0, dk in 1e-3f64..1.0) {
        let (a, b) = (f_gar_closed(k), f_gar_closed(k + dk));
        prop_assert!(a > 0.0 && b > a);
    }

    #[test]
    fn f_gar_derivative_is_twice_the_first_moment(k in -3.0f64..3.0) {
        // d/dk f_gar = 2 (k Phi(k) + phi(k))
        let h = 1e-5;
        let fd = (f_gar_closed(k + h) - f_gar_closed(k - h)) / (2.0 * h);
        let exact = 2.0 * (k * cdf(k) + pdf(k));
        prop_assert!((fd - exact).abs() < 1e-7);
    }

    #[test]
    fn i_per1_is_a_probability_like_mass(c3 in 1e-3f64..4.0, gamma in 0.05f64..3.0, kappa in -2.0f64..1.0) {
        let (v, parts) = i_per1_closed(c3, gamma, kappa).unwrap();
        prop_assert!(v > 0.0 && v <= 1.0 + 1e-12);
        prop_assert!(parts.p > 1.0);
        prop_assert!((parts.s + kappa / parts.p.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn i_sph_exceeds_its_c3_zero_value(c3 in 1e-4f64..8.0) {
        prop_assert!(i_sph(c3) > 1.0);
    }

    #[test]
    fn lifted_bound_increases_with_alpha(kappa in -1.2f64..-0.1, alpha in 1.0f64..20.0, c3 in 0.0f64..2.0) {
        let a = lower_bound_l(c3, alpha, kappa).unwrap().lower_bound;
        let b = lower_bound_l(c3, alpha * 1.05, kappa).unwrap().lower_bound;
        prop_assert!(b >= a - 1e-9);
    }

    #[test]
    fn best_bound_dominates_every_fixed_c3(kappa in -1.2f64..-0.2, alpha in 2.0f64..15.0, c3 in 0.0f64..3.0) {
        let best = best_bound(alpha, kappa).unwrap().lower_bound;
        let fixed = lower_bound_l(c3, alpha, kappa).unwrap().lower_bound;
        prop_assert!(best >= fixed - 1e-8, "{best} < {fixed}");
    }

    #[test]
    fn inner_max_over_nonnegative_unit_vectors(v in prop::collection::vec(-5.0f64..5.0, 1..40)) {
        let v = DVector::from_vec(v);
        let (val, lambda) = inner_max(&v);
        let pos = v.map(|x| x.max(0.0));
        let expected = if pos.norm() > 0.0 { pos.norm() } else { v.max() };
        prop_assert!((val - expected).abs() < 1e-12);
        prop_assert!(lambda.iter().all(|&l| l >= 0.0));
        prop_assert!((lambda.norm() - 1.0).abs() < 1e-12);
        prop_assert!((lambda.dot(&v) - val).abs() < 1e-12);
    }

    #[test]
    fn objective_scales_with_the_matrix(seed in 0u64..1000, c in 0.1f64..10.0, kappa in -1.0f64..1.0) {
        // ||(c kappa - c H x)_+|| = c ||(kappa - H x)_+||
        let inst = instance(12, 2.0, kappa, seed);
        let scaled = inst.scaled(c);
        let x = DVector::from_fn(12, |i, _| ((seed as usize + 3 * i) % 7) as f64 - 3.0);
        let (g, grad) = objective_and_subgradient(&inst, &x);
        let (gs, grads) = objective_and_subgradient(&scaled, &x);
        prop_assert!((gs - c * g).abs() <= 1e-10 * (1.0 + gs));
        prop_assert!((&grads - &grad * c).norm() <= 1e-10 * (1.0 + grads.norm()));
    }

    #[test]
    fn residual_is_nonnegative_and_zero_iff_stable(seed in 0u64..1000, kappa in -1.0f64..0.5) {
        let inst = instance(10, 1.5, kappa, seed);
        let x = DVector::from_fn(10, |i, _| if (seed >> i) & 1 == 1 { 1.0 } else { -1.0 }) / 10f64.sqrt();
        let r = residual(&inst, kappa, &x);
        prop_assert!(r.iter().all(|&v| v >= 0.0));
        let stable = (&inst.h_matrix * &x).iter().all(|&v| v >= kappa);
        prop_assert_eq!(r.norm() == 0.0, stable);
    }

    #[test]
    fn certificate_never_exceeds_sampled_sphere_values(
        seed in 0u64..500,
        kappa in 0.0f64..1.0,
        dirs in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 6), 20),
    ) {
        let mut inst = instance(6, 2.5, 0.0, seed);
        inst.kappa = kappa;
        let cert = convex_certify(&inst).unwrap();
        for d in dirs {
            if let Some(x) = unit(d) {
                let (g, _) = objective_and_subgradient(&inst, &x);
                prop_assert!(cert.global_min_lower <= g + 1e-9);
            }
        }
        if let Some(w) = &cert.witness {
            prop_assert!((&inst.h_matrix * w).iter().all(|&v| v >= kappa));
        }
    }
}
