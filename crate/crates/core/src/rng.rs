//! Seeded, splittable random streams.
//!
//! An [`RngStream`] is a ChaCha8 keystream keyed by `seed` and positioned on
//! the 64-bit ChaCha stream selector `stream_id`. Distinct stream ids address
//! disjoint keystreams of the same key, so substreams never share state.
//! Substream ids are derived with a SplitMix64 finalizer so that chunk `i` of
//! stream `s` lands on a well-mixed, reproducible id.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            inner,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Child stream `index` of this stream, independent of how much of the
    /// parent has been consumed.
    pub fn substream(&self, index: u64) -> Self {
        let id = mix64(self.stream_id ^ mix64(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)));
        Self::new(self.seed, id)
    }

    /// Identifies the (seed, stream_id) pair in run records and summaries.
    pub fn fingerprint(&self) -> u64 {
        mix64(self.seed ^ mix64(self.stream_id ^ GOLDEN_GAMMA))
    }

    /// Uniform in the open interval (0, 1).
    pub fn open01(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) / (1u64 << 53) as f64
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.inner.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.inner.try_fill_bytes(dest)
    }
}
