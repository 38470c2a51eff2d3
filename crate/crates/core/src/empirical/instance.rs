use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{require, Result};

/// Distribution of the pattern entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryDist {
    Gaussian,
    BernoulliPm1,
    /// Matrix supplied by the caller rather than sampled.
    Explicit,
}

impl std::fmt::Display for EntryDist {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EntryDist::Gaussian => "gaussian",
            EntryDist::BernoulliPm1 => "bernoulli_pm1",
            EntryDist::Explicit => "explicit",
        })
    }
}

/// A pattern matrix `H` (m x n) together with the margin it is tested against.
#[derive(Debug, Clone, PartialEq)]
pub struct PerceptronInstance {
    pub h_matrix: DMatrix<f64>,
    pub n: usize,
    pub m: usize,
    pub kappa: f64,
    pub entry_dist: EntryDist,
    pub seed: u64,
}

/// Number of patterns for `n` neurons at ratio `alpha`: `ceil(alpha n)`.
pub fn pattern_count(n: usize, alpha: f64) -> usize {
    // absorb representation error in products like 1.8 * 500
    ((alpha * n as f64) - 1e-9).ceil().max(1.0) as usize
}

impl PerceptronInstance {
    pub fn from_matrix(h_matrix: DMatrix<f64>, kappa: f64) -> Result<Self> {
        require(kappa.is_finite(), "kappa", kappa, "must be finite")?;
        require(
            h_matrix.iter().all(|v| v.is_finite()),
            "h_matrix",
            f64::NAN,
            "entries must be finite",
        )?;
        let (m, n) = h_matrix.shape();
        require(m >= 1 && n >= 1, "h_matrix", m.min(n) as f64, "matrix must be nonempty")?;
        Ok(Self {
            h_matrix,
            n,
            m,
            kappa,
            entry_dist: EntryDist::Explicit,
            seed: 0,
        })
    }

    /// The instance `(c H, c kappa)`, which has the same feasible set for `c > 0`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            h_matrix: &self.h_matrix * c,
            kappa: self.kappa * c,
            ..self.clone()
        }
    }

    /// Feasibility tolerance on the residual norm, `1e-6 sqrt(m)`.
    pub fn feasibility_tolerance(&self) -> f64 {
        1e-6 * (self.m as f64).sqrt()
    }
}

/// Samples `ceil(alpha n)` i.i.d. rows of length `n`; bit-identical for equal seeds.
pub fn sample_instance(n: usize, alpha: f64, kappa: f64, entry_dist: EntryDist, seed: u64) -> Result<PerceptronInstance> {
    require(n >= 2, "n", n as f64, "at least 2 coordinates required")?;
    require(alpha > 0.0 && alpha.is_finite(), "alpha", alpha, "must be positive and finite")?;
    require(kappa.is_finite(), "kappa", kappa, "must be finite")?;
    require(
        entry_dist != EntryDist::Explicit,
        "entry_dist",
        f64::NAN,
        "explicit matrices are not sampled",
    )?;
    let m = pattern_count(n, alpha);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries: Vec<f64> = match entry_dist {
        EntryDist::Gaussian => (0..m * n).map(|_| rng.sample(StandardNormal)).collect(),
        EntryDist::BernoulliPm1 => (0..m * n).map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 }).collect(),
        EntryDist::Explicit => unreachable!(),
    };
    Ok(PerceptronInstance {
        h_matrix: DMatrix::from_row_slice(m, n, &entries),
        n,
        m,
        kappa,
        entry_dist,
        seed,
    })
}
