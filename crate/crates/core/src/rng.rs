//! Counter-based random streams.
//!
//! Every stochastic quantity in a simulation is drawn from a stream keyed by
//! `(experiment seed, circuit index, trajectory index, lane)`. A lane is a
//! qubit index for noise, or [`SHOT_LANE`] for measurement sampling. Streams
//! are ChaCha8 keystreams: the key is derived from the seed and circuit index,
//! the 64-bit stream number from the trajectory and lane. Nothing depends on
//! the order in which streams are consumed, so results do not depend on the
//! number of worker threads.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Lane reserved for Bernoulli shot sampling.
pub const SHOT_LANE: u32 = 0xFFFF;

/// Identifies one independent random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamId {
    pub seed: u64,
    pub circuit: u64,
    pub trajectory: u64,
    pub lane: u32,
}

impl StreamId {
    pub fn new(seed: u64, circuit: u64, trajectory: u64, lane: u32) -> Self {
        Self { seed, circuit, trajectory, lane }
    }

    fn key(&self) -> [u8; 32] {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&splitmix(self.seed).to_le_bytes());
        key[8..16].copy_from_slice(&splitmix(self.seed ^ 0x5851_f42d_4c95_7f2d).to_le_bytes());
        key[16..24].copy_from_slice(&splitmix(self.circuit.wrapping_add(0x1405_7b7e_f767_814f)).to_le_bytes());
        key[24..].copy_from_slice(&self.circuit.to_le_bytes());
        key
    }

    fn stream_number(&self) -> u64 {
        // 48 bits of trajectory, 16 bits of lane.
        (self.trajectory << 16) | u64::from(self.lane & 0xFFFF)
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A deterministic stream of uniforms and standard normal variates.
#[derive(Debug, Clone)]
pub struct RandomStream {
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(id: StreamId) -> Self {
        let mut rng = ChaCha8Rng::from_seed(id.key());
        rng.set_stream(id.stream_number());
        Self { rng }
    }

    /// Uniform on the open interval (0, 1).
    pub fn uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal variate by inversion of the normal CDF.
    pub fn gaussian(&mut self) -> f64 {
        let u = self.uniform();
        distrs::Normal::ppf(u, 0.0, 1.0)
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    /// Uniform index in `0..n`.
    pub fn index(&mut self, n: usize) -> usize {
        ((self.uniform() * n as f64) as usize).min(n - 1)
    }
}
