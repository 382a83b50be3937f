//! Minimal deterministic PRNG used for constant derivation and test-graph
//! generation. Counter mode: draw `k` is a pure function of `(seed, k)`, so
//! streams can be replayed or split without shared state.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer. Bijective on `u64`, so distinct inputs give
/// distinct outputs.
pub(crate) fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive an independent stream seed from a base seed and a stream label.
pub(crate) fn derive_seed(seed: u64, stream: u64) -> u64 {
    splitmix64(seed ^ splitmix64(stream))
}

#[derive(Debug, Clone)]
pub(crate) struct CounterRng {
    seed: u64,
    counter: u64,
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        CounterRng { seed, counter: 0 }
    }

    pub fn next_u64(&mut self) -> u64 {
        let v = splitmix64(self.seed.wrapping_add(self.counter.wrapping_mul(GOLDEN)));
        self.counter += 1;
        v
    }

    /// Uniform-ish draw in `[0, bound)`. Modulo bias is irrelevant at the
    /// sizes used here.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        self.next_u64() % bound
    }

    /// Uniform draw in `[0, 1)` with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}
