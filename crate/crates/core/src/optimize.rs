//! Scalar search primitives shared by the bound evaluator and the capacity solver.

use crate::error::{NumericError, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Maximum of a unimodal function found by golden-section search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarMax {
    pub x: f64,
    pub value: f64,
    pub iterations: usize,
}

/// Golden-section search for the maximum of `f` on `[a, b]`, stopping once the
/// bracket is no wider than `x_tol`.
///
/// Propagates the first error returned by `f`.
pub fn golden_section_max<F>(mut f: F, a: f64, b: f64, x_tol: f64) -> Result<ScalarMax>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b) = if a <= b { (a, b) } else { (b, a) };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let mut iterations = 0;
    while (b - a) > x_tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
        iterations += 1;
        if iterations > 10_000 {
            return Err(NumericError::Optimization(format!(
                "golden-section search stalled on [{a}, {b}]"
            )));
        }
    }
    let (x, value) = if fc >= fd { (c, fc) } else { (d, fd) };
    Ok(ScalarMax {
        x,
        value,
        iterations,
    })
}

/// `count` points spaced evenly in log scale between `lo` and `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2 && lo > 0.0 && hi > lo);
    let (l, h) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| {
            if i + 1 == count {
                hi
            } else {
                (l + (h - l) * i as f64 / (count - 1) as f64).exp()
            }
        })
        .collect()
}

/// Index of the largest value; ties resolve to the first occurrence.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

/// Bisection for the smallest `x` in `[lo, hi]` with `g(x) > 0`, assuming `g`
/// is nondecreasing, `g(lo) < 0` and `g(hi) > 0`. Returns the upper end of the
/// final bracket, or the midpoint when `g` hits zero exactly.
pub fn bisect_increasing<G>(mut g: G, mut lo: f64, mut hi: f64, x_tol: f64) -> Result<f64>
where
    G: FnMut(f64) -> Result<f64>,
{
    let g_lo = g(lo)?;
    let g_hi = g(hi)?;
    if !(g_lo < 0.0 && g_hi > 0.0) {
        return Err(NumericError::BracketFailure { lo, hi, g_lo, g_hi });
    }
    while hi - lo > x_tol {
        let mid = 0.5 * (lo + hi);
        let v = g(mid)?;
        if v > 0.0 {
            hi = mid;
        } else if v < 0.0 {
            lo = mid;
        } else {
            return Ok(mid);
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_vertex() {
        let m = golden_section_max(|x| Ok(-(x - 0.3) * (x - 0.3) + 2.0), -1.0, 4.0, 1e-10).unwrap();
        assert!((m.x - 0.3).abs() < 1e-7);
        assert!((m.value - 2.0).abs() < 1e-15);
    }

    #[test]
    fn golden_propagates_errors() {
        let r = golden_section_max(|_| Err(NumericError::Optimization("boom".into())), 0.0, 1.0, 1e-3);
        assert!(r.is_err());
    }

    #[test]
    fn log_grid_endpoints() {
        let g = log_grid(1e-4, 16.0, 96);
        assert_eq!(g.len(), 96);
        assert!((g[0] - 1e-4).abs() < 1e-18);
        assert_eq!(g[95], 16.0);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn bisection_root_and_bracket_failure() {
        let r = bisect_increasing(|x| Ok(x * x * x - 2.0), 0.0, 3.0, 1e-12).unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-11);
        assert!(r * r * r - 2.0 > 0.0);
        let e = bisect_increasing(|x| Ok(x + 10.0), 0.0, 1.0, 1e-6).unwrap_err();
        assert!(matches!(e, NumericError::BracketFailure { .. }));
    }
}
