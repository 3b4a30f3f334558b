//! Seedable random streams.
//!
//! Every stream is a ChaCha8 generator keyed by the master seed; child
//! streams select a different ChaCha stream id, so streams with distinct ids
//! never overlap for the same key.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct RandomSource {
    rng: ChaCha8Rng,
    stream: u64,
}

impl RandomSource {
    /// The root stream of `seed`.
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            stream: 0,
        }
    }

    /// A child of this stream, numbered `index`.
    ///
    /// The child depends only on this stream's key, stream id and `index`,
    /// never on how many values have been drawn from `self`.
    pub fn child(&self, index: u64) -> Self {
        let stream = mix(self.stream ^ mix(index.wrapping_add(1)));
        let mut rng = ChaCha8Rng::from_seed(self.rng.get_seed());
        rng.set_stream(stream);
        Self { rng, stream }
    }

    /// Shorthand for `RandomSource::new(seed).child(index)`.
    pub fn derive(seed: u64, index: u64) -> Self {
        Self::new(seed).child(index)
    }

    /// Uniform integer in `0..n`. `n` must be positive.
    #[inline]
    pub fn below(&mut self, n: u64) -> u64 {
        self.rng.gen_range(0..n)
    }

    #[inline]
    pub fn below_usize(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    /// Uniform real in `[0, 1)`.
    #[inline]
    pub fn unit(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    #[inline]
    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.unit() < p
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.rng.gen()
    }
}

/// SplitMix64 finalizer.
pub fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn first_64(mut r: RandomSource) -> Vec<u64> {
        (0..64).map(|_| r.next_u64()).collect()
    }

    #[test]
    fn same_seed_same_sequence() {
        assert_eq!(first_64(RandomSource::new(7)), first_64(RandomSource::new(7)));
        assert_ne!(first_64(RandomSource::new(7)), first_64(RandomSource::new(8)));
    }

    #[test]
    fn child_streams_differ() {
        let root = RandomSource::new(42);
        let streams: Vec<_> = (0..16).map(|i| first_64(root.child(i))).collect();
        for i in 0..streams.len() {
            assert_ne!(streams[i], first_64(root.clone()));
            for j in i + 1..streams.len() {
                assert_ne!(streams[i], streams[j], "children {i} and {j} coincide");
            }
        }
    }

    #[test]
    fn child_ignores_parent_position() {
        let mut a = RandomSource::new(3);
        let b = RandomSource::new(3);
        for _ in 0..10 {
            a.next_u64();
        }
        assert_eq!(first_64(a.child(5)), first_64(b.child(5)));
        assert_ne!(first_64(b.child(5)), first_64(b.child(5).child(5)));
    }

    #[test]
    fn ranges() {
        let mut r = RandomSource::new(1);
        for _ in 0..1000 {
            assert!(r.below(3) < 3);
            let u = r.unit();
            assert!((0.0..1.0).contains(&u));
        }
        assert!(!r.bernoulli(0.0));
        assert!(r.bernoulli(1.0));
    }
}
