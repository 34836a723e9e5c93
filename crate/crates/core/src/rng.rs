//! Splittable deterministic randomness.
//!
//! Every random decision in the generator draws from a stream addressed by a
//! path of `(tag, index)` pairs below a master seed, e.g.
//! `master -> ("image", 17) -> ("instance", 3) -> ("params", 0)`. The stream
//! key is a hash of the path, so any stream can be materialized without
//! touching its siblings, and images can be produced in any order.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A node in the seed derivation tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedTree {
    master_seed: u64,
    path: Vec<(&'static str, u64)>,
    key: u64,
}

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xCBF2_9CE4_8422_2325u64, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01B3)
    })
}

impl SeedTree {
    pub fn new(master_seed: u64) -> Self {
        Self {
            master_seed,
            path: Vec::new(),
            key: splitmix64(master_seed ^ 0x6A09_E667_F3BC_C908),
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn path(&self) -> &[(&'static str, u64)] {
        &self.path
    }

    /// Child node for `(tag, index)`. Pure: the same parent and arguments
    /// always give the same child.
    pub fn child(&self, tag: &'static str, index: u64) -> Self {
        let tagged = splitmix64(self.key ^ fnv1a(tag.as_bytes()));
        let key = splitmix64(tagged.rotate_left(17) ^ splitmix64(index));
        let mut path = self.path.clone();
        path.push((tag, index));
        Self {
            master_seed: self.master_seed,
            path,
            key,
        }
    }

    /// 64-bit key identifying this node; used to seed non-stream consumers
    /// such as noise lattices.
    pub fn key(&self) -> u64 {
        self.key
    }

    /// The random stream owned by this node.
    pub fn stream(&self) -> Stream {
        let mut seed = [0u8; 32];
        let mut z = self.key;
        for chunk in seed.chunks_exact_mut(8) {
            z = splitmix64(z);
            chunk.copy_from_slice(&z.to_le_bytes());
        }
        Stream(ChaCha8Rng::from_seed(seed))
    }
}

/// Shorthand for `tree.child(tag, index).stream()`.
pub fn derive_stream(tree: &SeedTree, tag: &'static str, index: u64) -> Stream {
    tree.child(tag, index).stream()
}

/// A deterministic random stream.
#[derive(Debug, Clone)]
pub struct Stream(ChaCha8Rng);

impl Stream {
    /// Uniform integer in the closed range `[lo, hi]`.
    pub fn int_inclusive(&mut self, lo: u32, hi: u32) -> u32 {
        debug_assert!(lo <= hi);
        self.0.gen_range(lo..=hi)
    }

    /// Uniform real in `[lo, hi]`; returns `lo` when the range is empty.
    pub fn real(&mut self, lo: f64, hi: f64) -> f64 {
        if hi <= lo {
            lo
        } else {
            self.0.gen_range(lo..=hi)
        }
    }

    /// Uniform real in `[0, hi)`.
    pub fn real_below(&mut self, hi: f64) -> f64 {
        self.0.gen_range(0.0..hi)
    }

    /// Uniform angle in `[0, 2π)`.
    pub fn angle(&mut self) -> f64 {
        self.0.gen::<f64>() * std::f64::consts::TAU
    }
}

impl RngCore for Stream {
    fn next_u32(&mut self) -> u32 {
        self.0.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.0.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.0.try_fill_bytes(dest)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn draws(mut s: Stream, n: usize) -> Vec<u64> {
        (0..n).map(|_| s.next_u64()).collect()
    }

    #[test]
    fn same_path_same_stream() {
        let tree = SeedTree::new(0);
        let a = draws(derive_stream(&tree, "image", 0), 1000);
        let b = draws(derive_stream(&tree, "image", 0), 1000);
        assert_eq!(a, b);
    }

    #[test]
    fn sibling_indices_differ() {
        let tree = SeedTree::new(0);
        let a = draws(derive_stream(&tree, "image", 0), 1000);
        let b = draws(derive_stream(&tree, "image", 1), 1000);
        assert!(a.iter().zip(&b).any(|(x, y)| x != y));
    }

    #[test]
    fn master_seeds_differ() {
        let a = draws(derive_stream(&SeedTree::new(0), "image", 5), 1000);
        let b = draws(derive_stream(&SeedTree::new(1), "image", 5), 1000);
        assert!(a.iter().zip(&b).any(|(x, y)| x != y));
    }

    #[test]
    fn tags_separate_streams() {
        let tree = SeedTree::new(9);
        assert_ne!(tree.child("image", 3).key(), tree.child("noise", 3).key());
        assert_ne!(
            tree.child("image", 1).child("instance", 0).key(),
            tree.child("image", 0).child("instance", 1).key()
        );
    }

    #[test]
    fn path_is_recorded() {
        let node = SeedTree::new(4).child("image", 2).child("instance", 7);
        assert_eq!(node.path(), &[("image", 2), ("instance", 7)]);
        assert_eq!(node.master_seed(), 4);
    }

    #[test]
    fn real_range_degenerate() {
        let mut s = SeedTree::new(1).stream();
        assert_eq!(s.real(3.0, 3.0), 3.0);
        for _ in 0..100 {
            let v = s.real(-2.0, 5.0);
            assert!((-2.0..=5.0).contains(&v));
            let k = s.int_inclusive(1, 32);
            assert!((1..=32).contains(&k));
        }
    }
}
