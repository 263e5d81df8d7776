use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::exact::{rat, Rational};

pub type Rng = ChaCha8Rng;

/// Knobs shared by every randomized step. All randomness is drawn from
/// `seed`, so equal configurations give equal results.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub seed: u64,
    /// Random points per rank computation.
    pub trials: usize,
    /// Sample coordinates are drawn from `[-coeff_range, coeff_range]`.
    pub coeff_range: i64,
    /// Largest dimension for which the Kirillov rank is also computed symbolically.
    pub symbolic_rank_cutoff: usize,
    /// Shift vectors tried before giving up.
    pub retry_budget: usize,
    /// Shift vector coordinates are drawn from `[-shift_range, shift_range]`.
    pub shift_range: i64,
    /// Extra rounds of fresh sample points when independence falls short.
    pub resample_rounds: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            trials: 8,
            coeff_range: 10_000,
            symbolic_rank_cutoff: 12,
            retry_budget: 5,
            shift_range: 20,
            resample_rounds: 3,
        }
    }
}

impl RunConfig {
    pub fn rng(&self) -> Rng {
        Rng::seed_from_u64(self.seed)
    }

    /// Independent stream for a named sub-task, so adding draws in one
    /// step does not shift the numbers seen by another.
    pub fn rng_for(&self, stream: u64) -> Rng {
        let mut r = Rng::seed_from_u64(self.seed);
        r.set_stream(stream);
        r
    }
}

pub fn random_int(rng: &mut Rng, range: i64) -> Rational {
    rat(rng.gen_range(-range..=range))
}

pub fn random_point(rng: &mut Rng, len: usize, range: i64) -> Vec<Rational> {
    (0..len).map(|_| random_int(rng, range)).collect()
}
