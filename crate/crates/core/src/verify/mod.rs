//! Exact divisibility certificates for cones and seeded numeric checks for
//! transcendental fields, reported as [`VerificationReport`]s.

mod congruence;
mod numeric;
mod report;
mod sampler;
mod symbolic;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diffops::DiffError;
use crate::exactpoly::PolyError;
use crate::scalarfield::FieldError;

pub use congruence::{
    plane_rotation, search_plane_rotation_congruence, verify_congruence_numeric, CongruenceFit,
};
pub use numeric::{
    normalized_scale, rotational_derivative_check, verify_field_at_points, verify_field_numeric,
    Check,
};
pub use report::{CheckSummary, Mode, Status, Subject, Tolerances, VerificationReport};
pub use sampler::sample_zero_set;
pub use symbolic::verify_cone_symbolic;

/// Default tolerance for first-order identities (superposition, screw motion).
pub const FIRST_ORDER_TOL: f64 = 1e-9;
/// Default tolerance for normalized second-order residuals.
pub const RESIDUAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VerifyError {
    #[error("found only {found} of {requested} sample points")]
    SamplingExhausted { found: usize, requested: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Diff(#[from] DiffError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SamplerConfig {
    pub seed: u64,
    pub count: usize,
    /// Coordinates are drawn uniformly from `[-range, range]`.
    pub range: f64,
    pub min_grad_norm: f64,
    pub newton_max_iter: usize,
    pub surface_tol: f64,
    pub min_point_norm: f64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            seed: 0,
            count: 100,
            range: 1.0,
            min_grad_norm: 1e-6,
            newton_max_iter: 50,
            surface_tol: 1e-12,
            min_point_norm: 0.1,
        }
    }
}

impl SamplerConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_count(mut self, count: usize) -> Self {
        self.count = count;
        self
    }

    pub fn with_range(mut self, range: f64) -> Self {
        self.range = range;
        self
    }

    pub fn validate(&self) -> Result<(), VerifyError> {
        if self.count == 0 {
            return Err(VerifyError::InvalidInput("point count must be at least 1".into()));
        }
        if self.range.is_nan() || self.range <= 0.0 {
            return Err(VerifyError::InvalidInput("coordinate range must be positive".into()));
        }
        Ok(())
    }

    pub(crate) fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    pub(crate) fn max_attempts(&self) -> usize {
        self.count.saturating_mul(100)
    }

    pub(crate) fn draw(&self, rng: &mut ChaCha8Rng, nvars: usize) -> Vec<f64> {
        (0..nvars).map(|_| rng.gen_range(-self.range..self.range)).collect()
    }

    pub(crate) fn tolerances(&self, residual: f64) -> Tolerances {
        Tolerances {
            exact: false,
            residual,
            surface: self.surface_tol,
            min_grad_norm: self.min_grad_norm,
        }
    }
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}
