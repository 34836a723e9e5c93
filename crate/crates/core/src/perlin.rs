//! Single-octave 1-D gradient (Perlin) noise.

use serde::{Deserialize, Serialize};

use crate::rng::SeedTree;
use crate::scalar::Scalar;

/// Samples per lattice cell used when indexing ring-expansion noise.
pub const RING_NOISE_FREQUENCY: f64 = 8.0;

/// 1-D gradient noise on the integer lattice.
///
/// Lattice gradients are uniform in `[-1, 1]` and are a hash of
/// `(seed, lattice index)`, so the gradient table is unbounded and never
/// repeats. Output is scaled by 2 so the full `[-1, 1]` range is reachable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerlinNoise1D {
    seed: u64,
}

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 33)).wrapping_mul(0xFF51_AFD7_ED55_8CCD);
    z = (z ^ (z >> 33)).wrapping_mul(0xC4CE_B9FE_1A85_EC53);
    z ^ (z >> 33)
}

impl PerlinNoise1D {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn from_tree(tree: &SeedTree) -> Self {
        Self::new(tree.key())
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Gradient at lattice point `i`, uniform in `[-1, 1]`.
    pub fn gradient(&self, i: i64) -> f64 {
        let h = mix(self.seed ^ mix(i as u64 ^ 0xA076_1D64_78BD_642F));
        ((h >> 11) as f64) * (2.0 / (1u64 << 53) as f64) - 1.0
    }

    /// Noise value at `t`. Zero at every integer, continuous, in `[-1, 1]`.
    pub fn sample<T: Scalar>(&self, t: T) -> T {
        debug_assert!(t.is_finite());
        let cell = t.floor();
        let f = t - cell;
        let i = cell.to_i64().unwrap_or(0);
        let g0 = T::lit(self.gradient(i));
        let g1 = T::lit(self.gradient(i.wrapping_add(1)));
        let s = smootherstep(f);
        let v = g0 * f * (T::one() - s) + g1 * (f - T::one()) * s;
        (v + v).max(-T::one()).min(T::one())
    }

    /// The perturbation for vertex `j` when growing ring `ring_index`
    /// (1-based, ≥ 2) of an `n`-vertex shape: a single strided sequence
    /// sampled at `(j + n·(ring_index − 1)) / f`.
    pub fn ring_epsilon<T: Scalar>(&self, j: usize, ring_index: usize, n: usize) -> T {
        let idx = j + n * (ring_index - 1);
        self.sample(T::of_usize(idx) / T::lit(RING_NOISE_FREQUENCY))
    }
}

#[inline]
fn smootherstep<T: Scalar>(f: T) -> T {
    let six = T::lit(6.0);
    let fifteen = T::lit(15.0);
    let ten = T::lit(10.0);
    f * f * f * (f * (f * six - fifteen) + ten)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_on_lattice() {
        let noise = PerlinNoise1D::new(12345);
        assert_eq!(noise.sample(0.0f64), 0.0);
        assert_eq!(noise.sample(3.0f64), 0.0);
        assert_eq!(noise.sample(-7.0f64), 0.0);
        assert_eq!(noise.sample(3.0f32), 0.0);
    }

    #[test]
    fn half_cell_is_reproducible() {
        let a = PerlinNoise1D::new(77).sample(0.5f64);
        let b = PerlinNoise1D::new(77).sample(0.5f64);
        assert_eq!(a.to_bits(), b.to_bits());
        // Value at the cell midpoint is (g0 - g1) / 2 scaled by 2.
        let n = PerlinNoise1D::new(77);
        let expect = n.gradient(0) - n.gradient(1);
        assert!((a - expect * 0.5).abs() < 1e-15);
    }

    #[test]
    fn gradients_cover_range() {
        let n = PerlinNoise1D::new(3);
        let g: Vec<f64> = (0..10_000).map(|i| n.gradient(i)).collect();
        assert!(g.iter().all(|v| (-1.0..=1.0).contains(v)));
        assert!(g.iter().any(|&v| v < -0.99));
        assert!(g.iter().any(|&v| v > 0.99));
    }

    #[test]
    fn continuous_across_cells() {
        let n = PerlinNoise1D::new(5);
        let eps = 1e-9;
        for i in -20..20 {
            let t = i as f64;
            assert!(n.sample(t - eps).abs() < 1e-6);
            assert!(n.sample(t + eps).abs() < 1e-6);
        }
    }

    #[test]
    fn ring_epsilon_layout() {
        let n = PerlinNoise1D::new(11);
        let e: f64 = n.ring_epsilon(3, 2, 10);
        assert_eq!(e, n.sample(13.0 / 8.0));
        // Every 8th sample falls on the lattice.
        let z: f64 = n.ring_epsilon(6, 2, 10);
        assert_eq!(z, 0.0);
    }

    proptest! {
        #[test]
        fn bounded(seed in any::<u64>(), t in -1.0e6f64..1.0e6) {
            let v = PerlinNoise1D::new(seed).sample(t);
            prop_assert!(v.abs() <= 1.0);
        }

        #[test]
        fn lattice_zero(seed in any::<u64>(), i in -100_000i64..100_000) {
            prop_assert_eq!(PerlinNoise1D::new(seed).sample(i as f64), 0.0);
        }

        #[test]
        fn lipschitz_small_steps(seed in any::<u64>(), t in -1000.0f64..1000.0) {
            // |dv/dt| ≤ 2·(max |g|·|f(1-s)'| + ...) is bounded by a small constant.
            let n = PerlinNoise1D::new(seed);
            let h = 1e-4;
            prop_assert!((n.sample(t + h) - n.sample(t)).abs() <= 8.0 * h);
        }
    }
}
