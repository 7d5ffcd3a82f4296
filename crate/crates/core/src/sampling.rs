//! Seeded random sampling shared by the oracle, the grouping and the α
//! computations.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::linalg::IntMatrix;

pub const DEFAULT_SEED: u64 = 0xA11CE;
pub const DEFAULT_BOUND: u64 = 1 << 20;
pub const DEFAULT_TRIALS: usize = 3;

/// Number of escalation rounds (bound doubled each time) after the first
/// attempt before giving up on a genericity check.
pub const ESCALATIONS: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SamplingParams {
    pub seed: u64,
    /// Coefficients are drawn uniformly from `[-bound, bound]`.
    pub bound: u64,
    pub trials: usize,
}

impl Default for SamplingParams {
    fn default() -> Self {
        SamplingParams { seed: DEFAULT_SEED, bound: DEFAULT_BOUND, trials: DEFAULT_TRIALS }
    }
}

impl SamplingParams {
    pub fn new(seed: u64, bound: u64, trials: usize) -> Self {
        SamplingParams { seed, bound: bound.max(1), trials: trials.max(1) }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        SamplingParams { seed, ..self }
    }

    /// Parameters for escalation round `attempt` (0 is the original).
    pub fn escalated(self, attempt: usize) -> Self {
        SamplingParams { bound: self.bound.saturating_mul(1 << attempt.min(16)), ..self }
    }

    /// Generator for one escalation round. Distinct rounds use distinct
    /// ChaCha streams of the same seed.
    pub fn rng(&self, attempt: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(attempt as u64);
        rng
    }
}

/// Uniform integer vector with entries in `[-bound, bound]`.
pub fn random_coeffs(rng: &mut ChaCha8Rng, len: usize, bound: u64) -> Vec<BigInt> {
    let b = bound as i128;
    (0..len).map(|_| BigInt::from(rng.gen_range(-b..=b))).collect()
}

/// Random integer combination `Σ cₖ·rowₖ` of the rows of `basis`.
pub fn random_combination(rng: &mut ChaCha8Rng, basis: &IntMatrix, bound: u64) -> Vec<BigInt> {
    let c = random_coeffs(rng, basis.rows(), bound);
    let mut out = vec![BigInt::zero(); basis.cols()];
    for (k, ck) in c.iter().enumerate() {
        if ck.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(basis.row(k)) {
            *o += ck * x;
        }
    }
    out
}
