use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Reproducible random stream indexed by `(master_seed, stream_index)`.
///
/// Backed by ChaCha8 with its 64-bit stream selector, so output is a pure
/// function of the seed, the index and the number of draws so far. Distinct
/// indices give independent streams.
#[derive(Debug, Clone)]
pub struct RngStream {
    master_seed: u64,
    stream_index: u64,
    inner: ChaCha8Rng,
}

/// Packs an experiment tag and a trial number into one stream index.
pub fn stream_id(tag: u16, trial: u64) -> u64 {
    debug_assert!(trial < 1 << 48);
    ((tag as u64) << 48) | (trial & ((1 << 48) - 1))
}

impl RngStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(master_seed);
        inner.set_stream(stream_index);
        Self { master_seed, stream_index, inner }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    /// Number of 32-bit words consumed so far.
    pub fn word_pos(&self) -> u128 {
        self.inner.get_word_pos()
    }

    pub fn normal(&mut self) -> f64 {
        self.inner.sample(StandardNormal)
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    pub fn fill_normal(&mut self, out: &mut [f64], scale: f64) {
        for v in out {
            *v = scale * self.normal();
        }
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}
