//! Gaussian two-class generators with reproducible per-task streams.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::data::{Dataset, Label};
use crate::error::{Error, Result};

/// Two identity-covariance Gaussians with means at ±(separation/2)·e1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianPairConfig {
    pub n_plus: usize,
    pub n_minus: usize,
    pub d: usize,
    pub separation: f64,
    #[serde(default)]
    pub seed: u64,
}

impl GaussianPairConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_plus < 1 || self.n_minus < 1 {
            return Err(Error::InvalidConfig("each class needs at least one point".into()));
        }
        if self.d < 1 {
            return Err(Error::InvalidConfig("dimension must be at least 1".into()));
        }
        if !self.separation.is_finite() || self.separation < 0.0 {
            return Err(Error::InvalidConfig("separation must be finite and nonnegative".into()));
        }
        Ok(())
    }
}

/// Generator for stream `stream` of `seed`. Distinct streams are
/// independent, so parallel tasks stay schedule-independent.
pub fn task_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Draws a dataset from `cfg` using its own seed.
pub fn generate_gaussian_pair(cfg: &GaussianPairConfig) -> Result<Dataset> {
    generate_with(cfg, &mut task_rng(cfg.seed, 0))
}

/// Draws a dataset from `cfg` with an explicit generator; `cfg.seed` is
/// ignored. Positive points come first.
pub fn generate_with(cfg: &GaussianPairConfig, rng: &mut ChaCha8Rng) -> Result<Dataset> {
    cfg.validate()?;
    let n = cfg.n_plus + cfg.n_minus;
    let mut points = DMatrix::zeros(n, cfg.d);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let label = if i < cfg.n_plus {
            Label::Positive
        } else {
            Label::Negative
        };
        for j in 0..cfg.d {
            points[(i, j)] = StandardNormal.sample(rng);
        }
        points[(i, 0)] += label.sign() * cfg.separation / 2.0;
        labels.push(label);
    }
    Dataset::new(points, labels)
}
