use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Seeded sampling plan for the axiom checkers.
///
/// Each check draws from its own ChaCha stream, so adding samples to one
/// condition never shifts the values drawn for another.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sampler {
    pub seed: u64,
    /// Points per axis of the regular grid on `[0, domain_cap]`.
    pub grid_points: usize,
    /// Random draws per condition.
    pub random_points: usize,
    pub domain_cap: f64,
}

impl Default for Sampler {
    fn default() -> Self {
        Self {
            seed: 0x7e7a,
            grid_points: 11,
            random_points: 10_000,
            domain_cap: 10.0,
        }
    }
}

impl Sampler {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid_points < 2 {
            return Err(Error::input("sampler needs at least 2 grid points"));
        }
        if !(self.domain_cap.is_finite() && self.domain_cap > 0.0) {
            return Err(Error::input(format!(
                "sampler domain cap must be positive and finite, got {}",
                self.domain_cap
            )));
        }
        Ok(())
    }

    pub fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    /// Evenly spaced values `0, cap/(g-1), ..., cap`.
    pub fn grid(&self) -> Vec<f64> {
        let last = (self.grid_points - 1) as f64;
        (0..self.grid_points)
            .map(|i| self.domain_cap * i as f64 / last)
            .collect()
    }
}
