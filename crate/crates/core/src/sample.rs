//! Deterministic sampling of evaluation points.
//!
//! All verification is pointwise, so reproducibility reduces to drawing the
//! same points for the same seed. Points come from a counter-based stream
//! cipher RNG seeded explicitly; nothing here touches global or OS entropy.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geometry::MetricField;

/// Seeded stream of points uniform in `[-1, 1]ⁿ`.
pub struct PointSampler {
    rng: ChaCha8Rng,
    n: usize,
}

impl PointSampler {
    pub fn new(seed: u64, n: usize) -> PointSampler {
        PointSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            n,
        }
    }

    pub fn next_point(&mut self) -> Vec<f64> {
        (0..self.n).map(|_| self.rng.gen_range(-1.0..=1.0)).collect()
    }
}

/// Draws up to `count` points where `g` is evaluable and nondegenerate,
/// skipping (and counting) draws that fail either test. Gives up on a draw
/// stream after `50 * count` attempts, so metrics that are degenerate
/// everywhere yield an empty point set rather than an infinite loop.
///
/// Returns `(points, skipped)`.
pub fn sample_nondegenerate(g: &MetricField, seed: u64, count: usize) -> (Vec<Vec<f64>>, usize) {
    let mut sampler = PointSampler::new(seed, g.n());
    let mut points = Vec::with_capacity(count);
    let mut skipped = 0;
    let max_attempts = count.saturating_mul(50).max(1);
    for _ in 0..max_attempts {
        if points.len() == count {
            break;
        }
        let x = sampler.next_point();
        match g.nondegenerate_at(&x) {
            Ok(true) => points.push(x),
            Ok(false) | Err(_) => skipped += 1,
        }
    }
    (points, skipped)
}
