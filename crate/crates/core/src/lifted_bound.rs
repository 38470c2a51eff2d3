//! Lifted lower bound on the normalized min-max objective `xi_n / sqrt(n)`.
//!
//! Comparing the min-max problem against a decoupled Gaussian one through an
//! exponential comparison function gives, for every `c3 >= 0`,
//!
//! ```text
//! E xi_n / sqrt(n) >= L(c3) = c3/2 - I_sph(c3) - I_per(c3, alpha, kappa)
//! I_sph(c3)  = gamma_hat - 1/(2 c3) ln(1 - c3/(2 gamma_hat)),
//!              gamma_hat = (2 c3 + sqrt(4 c3^2 + 16)) / 8
//! I_per      = max_{gamma > 0} [ -gamma + (alpha/c3) ln E exp(-c3 max(g + kappa, 0)^2 / (4 gamma)) ]
//! ```
//!
//! `L > 0` means the instance family is infeasible with overwhelming
//! probability. As `c3 -> 0` the bound collapses to `sqrt(alpha f_gar) - 1`.

use std::f64::consts::FRAC_1_SQRT_2;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{require, NumericError, Result};
use crate::optimize::{argmax, golden_section_max, log_grid};
use crate::scalar_kernels::{erfc, f_gar_closed, ln_erfc};

/// Below this `c3` the sphere term switches to its series expansion.
pub const I_SPH_SERIES_THRESHOLD: f64 = 1e-6;

const GAMMA_LO: f64 = 1e-4;
const GAMMA_HI: f64 = 4.0;
const GAMMA_CEILING: f64 = 1e6;
const GAMMA_FLOOR: f64 = 1e-12;
const GAMMA_GRID: usize = 64;
const GAMMA_TOL: f64 = 1e-10;

const C3_LO: f64 = 1e-4;
const C3_HI: f64 = 16.0;
const C3_GRID: usize = 96;
const LN_C3_TOL: f64 = 1e-9;

/// One evaluation of the lifted bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundEvaluation {
    pub c3: f64,
    pub gamma_per: f64,
    pub gamma_hat: f64,
    pub i_sph: f64,
    pub i_per: f64,
    pub lower_bound: f64,
}

/// Intermediate quantities of the closed form of `I_per^(1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Iper1Intermediates {
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub s: f64,
    pub big_c: f64,
}

/// `(2 c3 + sqrt(4 c3^2 + 16)) / 8`, the optimal sphere multiplier.
pub fn gamma_hat(c3: f64) -> f64 {
    debug_assert!(c3 >= 0.0);
    (2.0 * c3 + (4.0 * c3 * c3 + 16.0).sqrt()) / 8.0
}

/// Sphere-side log-moment term. Tends to 1 as `c3 -> 0`.
pub fn i_sph(c3: f64) -> f64 {
    let g = gamma_hat(c3);
    let x = c3 / (2.0 * g);
    if c3 < I_SPH_SERIES_THRESHOLD {
        // -ln(1 - x) / (2 c3) = (1 + x/2 + x^2/3 + ...) / (4 gamma_hat)
        g + (1.0 + x / 2.0 + x * x / 3.0) / (4.0 * g)
    } else {
        g - (-x).ln_1p() / (2.0 * c3)
    }
}

/// Closed form of `E exp(-c3 max(g + kappa, 0)^2 / (4 gamma_per))` for standard normal `g`.
pub fn i_per1_closed(c3: f64, gamma_per: f64, kappa: f64) -> Result<(f64, Iper1Intermediates)> {
    require(c3 > 0.0, "c3", c3, "must be positive")?;
    require(gamma_per > 0.0, "gamma_per", gamma_per, "must be positive")?;
    require(kappa.is_finite(), "kappa", kappa, "must be finite")?;

    let ratio = c3 / (2.0 * gamma_per);
    let p = 1.0 + ratio;
    let q = ratio * kappa;
    let r = c3 * kappa * kappa / (4.0 * gamma_per);
    let sqrt_p = p.sqrt();
    let s = -kappa * sqrt_p + q / sqrt_p;
    let ln_c = q * q / (2.0 * p) - r - 0.5 * p.ln();

    // The product C * erfc(s/sqrt 2) is formed in log space; each factor alone
    // can under- or overflow while the product stays representable.
    let upper = 0.5 * (ln_c + ln_erfc(s * FRAC_1_SQRT_2)).exp();
    let value = 0.5 * erfc(kappa * FRAC_1_SQRT_2) + upper;
    Ok((
        value,
        Iper1Intermediates {
            p,
            q,
            r,
            s,
            big_c: ln_c.exp(),
        },
    ))
}

/// Monte Carlo estimate of the same expectation as [`i_per1_closed`].
///
/// Returns `(mean, standard error)`; deterministic for a fixed `seed`.
pub fn i_per1_mc(c3: f64, gamma_per: f64, kappa: f64, n_samples: usize, seed: u64) -> Result<(f64, f64)> {
    require(c3 >= 0.0, "c3", c3, "must be nonnegative")?;
    require(gamma_per > 0.0, "gamma_per", gamma_per, "must be positive")?;
    require(n_samples >= 1000, "n_samples", n_samples as f64, "at least 1000 samples required")?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = c3 / (4.0 * gamma_per);
    let (mut mean, mut m2) = (0.0f64, 0.0f64);
    for k in 0..n_samples {
        let g: f64 = StandardNormal.sample(&mut rng);
        let t = (g + kappa).max(0.0);
        let v = (-scale * t * t).exp();
        let delta = v - mean;
        mean += delta / (k + 1) as f64;
        m2 += delta * (v - mean);
    }
    let n = n_samples as f64;
    let variance = m2 / (n - 1.0);
    Ok((mean, (variance / n).sqrt()))
}

fn per_objective(c3: f64, alpha: f64, kappa: f64, gamma: f64) -> Result<f64> {
    let (v, _) = i_per1_closed(c3, gamma, kappa)?;
    Ok(-gamma + alpha / c3 * v.ln())
}

/// Perceptron-side term: the maximum over `gamma_per > 0` of
/// `-gamma_per + (alpha/c3) ln I_per^(1)`. Returns `(value, gamma_star)`.
pub fn i_per(c3: f64, alpha: f64, kappa: f64) -> Result<(f64, f64)> {
    require(c3 > 0.0, "c3", c3, "must be positive")?;
    require(alpha > 0.0, "alpha", alpha, "must be positive")?;
    let h = |g: f64| per_objective(c3, alpha, kappa, g);

    let mut hi = GAMMA_HI;
    while h(hi)? > h(0.5 * hi)? {
        hi *= 2.0;
        if hi > GAMMA_CEILING {
            return Err(NumericError::Optimization(format!(
                "gamma_per bracket exceeded {GAMMA_CEILING:e} (c3 = {c3}, alpha = {alpha}, kappa = {kappa})"
            )));
        }
    }

    let mut lo = GAMMA_LO;
    let (grid, best) = loop {
        let grid = log_grid(lo, hi, GAMMA_GRID);
        let values = grid.iter().map(|&g| h(g)).collect::<Result<Vec<_>>>()?;
        let best = argmax(&values);
        if best == 0 && lo > GAMMA_FLOOR {
            lo *= 1e-2;
            continue;
        }
        if best == 0 || best + 1 == GAMMA_GRID {
            return Err(NumericError::Optimization(format!(
                "coarse gamma_per maximum at bracket edge {} (c3 = {c3}, alpha = {alpha}, kappa = {kappa})",
                grid[best]
            )));
        }
        break (grid, best);
    };

    let m = golden_section_max(h, grid[best - 1], grid[best + 1], GAMMA_TOL)?;
    Ok((m.value, m.x))
}

/// Lifted bound `L(c3; alpha, kappa)` with `gamma_per` optimized.
///
/// `c3 = 0` uses the analytic limit `L = sqrt(alpha f_gar(kappa)) - 1`.
pub fn lower_bound_l(c3: f64, alpha: f64, kappa: f64) -> Result<BoundEvaluation> {
    require(c3 >= 0.0, "c3", c3, "must be nonnegative")?;
    require(alpha > 0.0, "alpha", alpha, "must be positive")?;
    if c3 == 0.0 {
        let root = (alpha * f_gar_closed(kappa)).sqrt();
        return Ok(BoundEvaluation {
            c3: 0.0,
            gamma_per: 0.5 * root,
            gamma_hat: 0.5,
            i_sph: 1.0,
            i_per: -root,
            lower_bound: root - 1.0,
        });
    }
    let (i_per, gamma_per) = i_per(c3, alpha, kappa)?;
    Ok(assemble(c3, gamma_per, i_per))
}

/// The bound's terms at a fixed `gamma_per`, without the inner maximization.
/// Not a valid bound on its own; useful to inspect the objective surface.
pub fn bound_at_gamma(c3: f64, gamma_per: f64, alpha: f64, kappa: f64) -> Result<BoundEvaluation> {
    require(alpha > 0.0, "alpha", alpha, "must be positive")?;
    let i_per = per_objective(c3, alpha, kappa, gamma_per)?;
    Ok(assemble(c3, gamma_per, i_per))
}

fn assemble(c3: f64, gamma_per: f64, i_per: f64) -> BoundEvaluation {
    let i_sph = i_sph(c3);
    BoundEvaluation {
        c3,
        gamma_per,
        gamma_hat: gamma_hat(c3),
        i_sph,
        i_per,
        lower_bound: -(-0.5 * c3 + i_sph + i_per),
    }
}

/// Maximizes `L` over `c3 >= 0`; `holds` is true when the maximum is positive,
/// i.e. the family `(alpha, kappa)` is infeasible with overwhelming probability.
///
/// The `c3 = 0` limit is always a candidate, so the answer is never weaker
/// than the unlifted bound.
pub fn infeasibility_condition(alpha: f64, kappa: f64) -> Result<(bool, BoundEvaluation)> {
    let best = maximize_over_c3(alpha, kappa)?;
    Ok((best.lower_bound > 0.0, best))
}

pub(crate) fn maximize_over_c3(alpha: f64, kappa: f64) -> Result<BoundEvaluation> {
    let limit = lower_bound_l(0.0, alpha, kappa)?;
    let grid = log_grid(C3_LO, C3_HI, C3_GRID);
    let evals = grid
        .iter()
        .map(|&c| lower_bound_l(c, alpha, kappa))
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<f64> = evals.iter().map(|e| e.lower_bound).collect();
    let i = argmax(&values);
    let mut best = evals[i];

    if values[i] > limit.lower_bound {
        let step = (C3_HI / C3_LO).ln() / (C3_GRID - 1) as f64;
        let lo = if i == 0 { grid[0].ln() - step } else { grid[i - 1].ln() };
        let hi = if i + 1 == C3_GRID { grid[i].ln() } else { grid[i + 1].ln() };
        let m = golden_section_max(|t| Ok(lower_bound_l(t.exp(), alpha, kappa)?.lower_bound), lo, hi, LN_C3_TOL)?;
        if m.value > best.lower_bound {
            best = lower_bound_l(m.x.exp(), alpha, kappa)?;
        }
    }
    if limit.lower_bound >= best.lower_bound {
        best = limit;
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar_kernels::cdf;

    #[test]
    fn gamma_hat_values() {
        assert_eq!(gamma_hat(0.0), 0.5);
        assert!((gamma_hat(2.0) - (4.0 + 32f64.sqrt()) / 8.0).abs() < 1e-15);
        assert!((gamma_hat(2.0) - 1.207_106_8).abs() < 1e-7);
        assert!((gamma_hat(1.1266) - 0.855_519_952_602_503_8).abs() < 1e-14);
        assert!(gamma_hat(0.3) < gamma_hat(0.31));
    }

    #[test]
    fn i_sph_values() {
        assert_eq!(i_sph(0.0), 1.0);
        assert!((i_sph(1e-8) - 1.0).abs() < 1e-8);
        // 40-digit references
        assert!((i_sph(1.0) - 1.290_228_819_434_550_9).abs() < 1e-14);
        assert!((i_sph(2.0) - 1.647_793_574_696_319).abs() < 1e-14);
        assert!(i_sph(2.0) > i_sph(1.0));
    }

    #[test]
    fn i_sph_is_continuous_at_series_switch() {
        let below = i_sph(I_SPH_SERIES_THRESHOLD * (1.0 - 1e-12));
        let at = i_sph(I_SPH_SERIES_THRESHOLD);
        assert!((below - at).abs() < 1e-10);
    }

    #[test]
    fn i_per1_reference_values() {
        // direct numerical integration at 40 digits
        let cases = [
            ((1.0, 0.5, -0.5), 0.931_818_112_067_153_3),
            ((0.5, 1.0, 0.0), 0.947_213_595_499_957_9),
            ((2.0, 0.3, -1.2), 0.962_830_657_030_467),
            ((1e-3, 0.5, -0.5), 0.999_895_240_770_626_1),
        ];
        for ((c3, g, k), want) in cases {
            let (v, _) = i_per1_closed(c3, g, k).unwrap();
            assert!((v - want).abs() < 1e-14, "{c3} {g} {k}: {v}");
        }
    }

    #[test]
    fn i_per1_limits() {
        let (v, im) = i_per1_closed(1e-14, 0.7, -0.4).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        assert!((im.p - 1.0).abs() < 1e-13 && (im.big_c - 1.0).abs() < 1e-13);
        let (v, _) = i_per1_closed(1.0, 1e-12, -0.8).unwrap();
        assert!((v - cdf(0.8)).abs() < 1e-5);
    }

    #[test]
    fn i_per1_rejects_bad_domain() {
        assert!(i_per1_closed(0.0, 1.0, 0.0).is_err());
        assert!(i_per1_closed(1.0, -1.0, 0.0).is_err());
        assert!(i_per1_mc(1.0, 1.0, 0.0, 10, 0).is_err());
    }

    #[test]
    fn mc_oracle_agrees_at_two_points() {
        for (c3, g, k, seed) in [(1.0, 0.5, -0.5, 11), (0.5, 1.0, 0.0, 12)] {
            let (closed, _) = i_per1_closed(c3, g, k).unwrap();
            let (est, se) = i_per1_mc(c3, g, k, 1_000_000, seed).unwrap();
            assert!((closed - est).abs() <= 3.0 * se, "{closed} vs {est} +- {se}");
        }
        let (est, se) = i_per1_mc(0.0, 1.0, 0.3, 1000, 1).unwrap();
        assert_eq!((est, se), (1.0, 0.0));
    }

    #[test]
    fn i_per_small_c3_limit() {
        let kappa = -0.7;
        let f = f_gar_closed(kappa);
        let alpha = 1.0 / f;
        let (v, g) = i_per(1e-7, alpha, kappa).unwrap();
        assert!((v + 1.0).abs() < 1e-5);
        assert!((g - 0.5).abs() < 1e-4);
    }

    #[test]
    fn i_per_gamma_star_matches_published_optima() {
        let (_, g) = i_per(1.1266, 12.784, -1.0).unwrap();
        assert!((g - 0.2922).abs() < 2e-3, "{g}");
        let (_, g) = i_per(0.1597, 6.6290, -0.67).unwrap();
        assert!((g - 0.4617).abs() < 2e-3, "{g}");
    }

    #[test]
    fn lower_bound_limits() {
        let e = lower_bound_l(0.0, 4.0, 0.0).unwrap();
        assert!((e.lower_bound - (2f64.sqrt() - 1.0)).abs() < 1e-14);
        for kappa in [-1.0, -0.3, 0.0, 0.4] {
            let e = lower_bound_l(0.0, 1.0 / f_gar_closed(kappa), kappa).unwrap();
            assert!(e.lower_bound.abs() < 1e-14);
        }
        let e = lower_bound_l(1.1266, 12.784, -1.0).unwrap();
        assert!(e.lower_bound.abs() < 1e-3, "{}", e.lower_bound);
    }

    #[test]
    fn bound_evaluation_invariants() {
        for c3 in [0.0, 0.01, 0.5, 3.0] {
            let e = lower_bound_l(c3, 7.0, -0.7).unwrap();
            assert!(e.gamma_hat >= 0.5);
            assert_eq!(e.gamma_hat == 0.5, c3 == 0.0);
            assert!(1.0 - c3 / (2.0 * e.gamma_hat) > 0.0);
            assert!(e.i_per <= 0.0);
        }
    }

    #[test]
    fn infeasibility_examples() {
        let (holds, _) = infeasibility_condition(5.0, -0.5).unwrap();
        assert!(holds);
        let (holds, best) = infeasibility_condition(13.0, -1.0).unwrap();
        assert!(holds);
        assert!((best.c3 - 1.1266).abs() < 0.1, "{}", best.c3);
        assert!(13.0 < 1.0 / f_gar_closed(-1.0));
        let (holds, _) = infeasibility_condition(1.5, 0.0).unwrap();
        assert!(!holds);
    }

    #[test]
    fn bound_at_gamma_dominates_optimized_bound() {
        let opt = lower_bound_l(0.8, 10.0, -0.9).unwrap();
        let fixed = bound_at_gamma(0.8, 0.5, 10.0, -0.9).unwrap();
        assert!(fixed.lower_bound >= opt.lower_bound - 1e-12);
        assert!((bound_at_gamma(0.8, opt.gamma_per, 10.0, -0.9).unwrap().lower_bound - opt.lower_bound).abs() < 1e-12);
    }
}
