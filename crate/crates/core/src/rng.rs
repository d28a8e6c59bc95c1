//! Deterministic, splittable random-number substreams for the Monte Carlo
//! harness.
//!
//! Stream recipe (stable across versions of this crate by contract):
//! substream keys are derived from `(seed, index)` with the SplitMix64
//! finalizer, each key seeds a ChaCha8 generator via `seed_from_u64`,
//! uniforms are the high 53 bits of each 64-bit draw mapped into (0, 1], and
//! standard normals come from Box–Muller pairs consumed cosine-first.
//! Every run owns its own substreams, so results do not depend on execution
//! order or on how runs are distributed across threads.

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// SplitMix64 finalizer step.
fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Derive the key of substream `index` under `seed`.
///
/// Pure mixing, no shared state: any (seed, index) pair can be derived
/// independently on any thread.
pub fn derive_substream(seed: u64, index: u64) -> u64 {
    splitmix64(splitmix64(seed) ^ splitmix64(index.wrapping_mul(0xa076_1d64_78bd_642f)))
}

/// Standard-normal stream over a ChaCha8 keystream.
#[derive(Debug, Clone)]
pub struct GaussianStream {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl GaussianStream {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    /// Uniform draw in (0, 1], 53-bit resolution.
    fn next_unit(&mut self) -> f64 {
        (((self.rng.next_u64() >> 11) + 1) as f64) * (1.0 / 9007199254740992.0)
    }

    /// One N(0, 1) sample.
    pub fn next_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let radius = (-2.0 * self.next_unit().ln()).sqrt();
        let angle = std::f64::consts::TAU * self.next_unit();
        self.spare = Some(radius * angle.sin());
        radius * angle.cos()
    }

    /// One circularly symmetric complex sample with unit total variance:
    /// independent N(0, 1/2) real and imaginary parts.
    pub fn next_circular(&mut self) -> Complex64 {
        // Consume a full Box-Muller pair so real and imaginary parts never
        // share a radius.
        let re = self.next_normal();
        let im = self.next_normal();
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }
}
