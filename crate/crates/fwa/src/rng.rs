//! Seedable random streams with a fixed, portable generator.
//!
//! Every stochastic operator in this crate draws from a [`RandomSource`] so
//! that tests can substitute forced sequences. The production implementation
//! is [`RngStream`], built on the ChaCha8 stream cipher: the same 64-bit seed
//! yields the same draw sequence on every platform. All conversions from raw
//! bits to floats are done here, explicitly, so the stream is reproducible
//! independent of any distribution-crate internals:
//!
//! * uniform `[0,1)`: take the top 53 bits of a `u64` and scale by `2^-53`;
//! * standard normal: Box-Muller on two uniform draws (the sine branch is
//!   discarded, so each normal consumes exactly two uniforms).

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Scale factor turning a 53-bit integer into a float in `[0, 1)`.
const F64_SCALE: f64 = 1.0 / (1u64 << 53) as f64;

/// Source of randomness for spark generation, selection and initialization.
pub trait RandomSource {
    /// Uniform draw in `[0, 1)`.
    fn next_f64(&mut self) -> f64;

    /// Uniform draw in `[a, b)`.
    fn uniform(&mut self, a: f64, b: f64) -> f64 {
        a + (b - a) * self.next_f64()
    }

    /// Standard normal draw (mean 0, variance 1).
    fn standard_normal(&mut self) -> f64 {
        // Box-Muller; 1 - u keeps the argument of ln strictly positive.
        let u1 = 1.0 - self.next_f64();
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    /// Uniform integer choice in `0..n`. `n` must be positive.
    fn index(&mut self, n: usize) -> usize {
        assert!(n > 0, "index() requires a nonempty range");
        let i = (self.next_f64() * n as f64) as usize;
        i.min(n - 1)
    }

    /// `k` distinct indices drawn uniformly without replacement from `0..n`,
    /// via a partial Fisher-Yates shuffle. Order of the result is random.
    fn sample_distinct(&mut self, n: usize, k: usize) -> Vec<usize> {
        assert!(k <= n, "cannot sample {k} distinct items from {n}");
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = i + self.index(n - i);
            pool.swap(i, j);
        }
        pool.truncate(k);
        pool
    }
}

/// The crate's concrete random stream (ChaCha8, seeded from a `u64`).
#[derive(Clone, Debug)]
pub struct RngStream {
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Derives an independent stream, e.g. one per suite function.
    pub fn derive(seed: u64, stream_index: u64) -> Self {
        Self::new(splitmix64(seed ^ splitmix64(stream_index)))
    }
}

impl RandomSource for RngStream {
    fn next_f64(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * F64_SCALE
    }
}

/// SplitMix64 finalizer; used for seed mixing only, never as a stream.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x100_0000_01b3);
    }
    h
}

/// Seed for one campaign cell, as a pure function of the campaign seed base,
/// the algorithm name, the function name and the run index. Any cell can be
/// reproduced in isolation from these four values.
pub fn derive_run_seed(seed_base: u64, algorithm: &str, function: &str, run_index: u32) -> u64 {
    let mut h = splitmix64(seed_base);
    h = splitmix64(h ^ fnv1a(algorithm.as_bytes()));
    h = splitmix64(h ^ fnv1a(function.as_bytes()));
    splitmix64(h ^ u64::from(run_index))
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::RandomSource;

    /// Emits a fixed value for every uniform draw.
    pub struct ConstRng(pub f64);

    impl RandomSource for ConstRng {
        fn next_f64(&mut self) -> f64 {
            self.0
        }
    }

    /// Replays a scripted sequence of uniform draws, then panics.
    pub struct ScriptedRng {
        values: Vec<f64>,
        next: usize,
    }

    impl ScriptedRng {
        pub fn new(values: Vec<f64>) -> Self {
            Self { values, next: 0 }
        }
    }

    impl RandomSource for ScriptedRng {
        fn next_f64(&mut self) -> f64 {
            let v = self.values[self.next];
            self.next += 1;
            v
        }
    }

    /// Wraps a source and counts how many normal draws were requested,
    /// optionally forcing their value.
    pub struct CountingNormals<R: RandomSource> {
        pub inner: R,
        pub normal_draws: usize,
        pub forced_normal: Option<f64>,
    }

    impl<R: RandomSource> CountingNormals<R> {
        pub fn new(inner: R, forced_normal: Option<f64>) -> Self {
            Self {
                inner,
                normal_draws: 0,
                forced_normal,
            }
        }
    }

    impl<R: RandomSource> RandomSource for CountingNormals<R> {
        fn next_f64(&mut self) -> f64 {
            self.inner.next_f64()
        }

        fn standard_normal(&mut self) -> f64 {
            self.normal_draws += 1;
            match self.forced_normal {
                Some(e) => e,
                None => self.inner.standard_normal(),
            }
        }
    }
}
