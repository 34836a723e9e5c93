//! Round-capped line strokes.
//!
//! A stroke of width `lw` covers pixel `(p, q)` when the lattice point
//! `(p, q)` lies within `lw / 2` of the segment. Consecutive segments of a
//! ring share endpoints, so the union of capsules gives round joins.

use crate::geometry::Vec2;
use crate::raster::MaskRaster;
use crate::scalar::Scalar;

/// Squared distance from `p` to the closed segment `a–b`.
#[inline]
pub fn segment_distance_sq<T: Scalar>(p: Vec2<T>, a: Vec2<T>, b: Vec2<T>) -> T {
    let dx = b.x - a.x;
    let dy = b.y - a.y;
    let len2 = dx * dx + dy * dy;
    let t = if len2 > T::zero() {
        (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).max(T::zero()).min(T::one())
    } else {
        T::zero()
    };
    let cx = a.x + t * dx;
    let cy = a.y + t * dy;
    (p.x - cx) * (p.x - cx) + (p.y - cy) * (p.y - cy)
}

/// Conservative x-range of the radius-`radius` capsule around `a–b` on row `y`.
fn capsule_row_bounds<T: Scalar>(a: Vec2<T>, b: Vec2<T>, y: T, radius: T) -> Option<(T, T)> {
    let dy = b.y - a.y;
    let (t0, t1) = if dy == T::zero() {
        if (y - a.y).abs() > radius {
            return None;
        }
        (T::zero(), T::one())
    } else {
        let u = (y - radius - a.y) / dy;
        let v = (y + radius - a.y) / dy;
        let (lo, hi) = if u < v { (u, v) } else { (v, u) };
        let lo = lo.max(T::zero());
        let hi = hi.min(T::one());
        if lo > hi {
            return None;
        }
        (lo, hi)
    };
    let x0 = a.x + t0 * (b.x - a.x);
    let x1 = a.x + t1 * (b.x - a.x);
    let (l, r) = if x0 < x1 { (x0, x1) } else { (x1, x0) };
    Some((l - radius - T::one(), r + radius + T::one()))
}

/// Integer range `lo..=hi` clipped to `0..limit`.
fn clip_range<T: Scalar>(lo: T, hi: T, limit: u32) -> Option<(u32, u32)> {
    if limit == 0 || !(hi >= T::zero()) || !(lo <= T::lit(f64::from(limit - 1))) {
        return None;
    }
    let lo = lo.ceil().max(T::zero()).to_u32().unwrap_or(0);
    let hi = hi.floor().min(T::lit(f64::from(limit - 1))).to_u32().unwrap_or(0);
    (lo <= hi).then_some((lo, hi))
}

/// OR-s the stroke of segment `a–b` with width `lw` into `mask`.
pub fn stroke_segment_into<T: Scalar>(mask: &mut MaskRaster, a: Vec2<T>, b: Vec2<T>, lw: T) {
    let hw = lw * T::lit(0.5);
    let hw2 = hw * hw;
    let (ylo, yhi) = if a.y < b.y { (a.y, b.y) } else { (b.y, a.y) };
    let Some((q0, q1)) = clip_range(ylo - hw, yhi + hw, mask.height()) else {
        return;
    };
    let width = mask.width();
    for q in q0..=q1 {
        let y = T::lit(f64::from(q));
        let Some((l, r)) = capsule_row_bounds(a, b, y, hw) else {
            continue;
        };
        let Some((p0, p1)) = clip_range(l, r, width) else {
            continue;
        };
        let inside = |p: u32| segment_distance_sq(Vec2::new(T::lit(f64::from(p)), y), a, b) <= hw2;
        let Some(first) = (p0..=p1).find(|&p| inside(p)) else {
            continue;
        };
        let last = (first..=p1).rev().find(|&p| inside(p)).unwrap_or(first);
        mask.set_span(q, first, last + 1);
    }
}

/// Stroke band of a whole ring.
pub fn stroke_ring_into<T: Scalar>(mask: &mut MaskRaster, ring: &[Vec2<T>], lw: T) {
    if let [only] = ring {
        stroke_segment_into(mask, *only, *only, lw);
    }
    for w in ring.windows(2) {
        stroke_segment_into(mask, w[0], w[1], lw);
    }
}

pub fn stroke_ring<T: Scalar>(ring: &[Vec2<T>], lw: T, width: u32, height: u32) -> MaskRaster {
    let mut mask = MaskRaster::new(width, height);
    stroke_ring_into(&mut mask, ring, lw);
    mask
}

/// Anti-aliased stroke: coverage `clamp(lw/2 + 0.5 − d, 0, 1)` max-combined
/// into a row-major `f32` buffer.
pub fn stroke_segment_coverage<T: Scalar>(
    coverage: &mut [f32],
    width: u32,
    height: u32,
    a: Vec2<T>,
    b: Vec2<T>,
    lw: T,
) {
    debug_assert_eq!(coverage.len(), width as usize * height as usize);
    let reach = lw * T::lit(0.5) + T::lit(0.5);
    let (ylo, yhi) = if a.y < b.y { (a.y, b.y) } else { (b.y, a.y) };
    let Some((q0, q1)) = clip_range(ylo - reach, yhi + reach, height) else {
        return;
    };
    for q in q0..=q1 {
        let y = T::lit(f64::from(q));
        let Some((l, r)) = capsule_row_bounds(a, b, y, reach) else {
            continue;
        };
        let Some((p0, p1)) = clip_range(l, r, width) else {
            continue;
        };
        let row = q as usize * width as usize;
        for p in p0..=p1 {
            let d = segment_distance_sq(Vec2::new(T::lit(f64::from(p)), y), a, b).sqrt();
            let c = (reach - d).max(T::zero()).min(T::one()).to_f32().unwrap_or(0.0);
            let slot = &mut coverage[row + p as usize];
            if c > *slot {
                *slot = c;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(segs: &[(Vec2<f64>, Vec2<f64>)], lw: f64, w: u32, h: u32) -> MaskRaster {
        let hw2 = (lw * 0.5) * (lw * 0.5);
        MaskRaster::from_fn(w, h, |p, q| {
            let pt = Vec2::new(p as f64, q as f64);
            segs.iter().any(|&(a, b)| {
                let (dx, dy) = (b.x - a.x, b.y - a.y);
                let len2 = dx * dx + dy * dy;
                let t = if len2 > 0.0 {
                    (((pt.x - a.x) * dx + (pt.y - a.y) * dy) / len2).clamp(0.0, 1.0)
                } else {
                    0.0
                };
                let (cx, cy) = (a.x + t * dx, a.y + t * dy);
                (pt.x - cx) * (pt.x - cx) + (pt.y - cy) * (pt.y - cy) <= hw2
            })
        })
    }

    #[test]
    fn horizontal_unit_stroke() {
        let (a, b) = (Vec2::new(1.0, 4.0), Vec2::new(6.0, 4.0));
        let mut m = MaskRaster::new(8, 8);
        stroke_segment_into(&mut m, a, b, 1.0);
        let expect = MaskRaster::from_fn(8, 8, |p, q| q == 4 && (1..=6).contains(&p));
        assert_eq!(m, expect);
        assert_eq!(m, brute(&[(a, b)], 1.0, 8, 8));
    }

    #[test]
    fn random_segments_match_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..400 {
            let a = Vec2::new(rng.gen_range(-20.0..84.0), rng.gen_range(-20.0..84.0));
            let b = if rng.gen_bool(0.1) {
                a
            } else {
                Vec2::new(rng.gen_range(-20.0..84.0), rng.gen_range(-20.0..84.0))
            };
            let lw = rng.gen_range(0.5..14.0);
            let mut m = MaskRaster::new(64, 48);
            stroke_segment_into(&mut m, a, b, lw);
            assert_eq!(m, brute(&[(a, b)], lw, 64, 48), "{a:?} {b:?} {lw}");
        }
    }

    #[test]
    fn ring_is_union_of_segments() {
        let ring = vec![
            Vec2::new(10.0, 10.0),
            Vec2::new(40.3, 12.7),
            Vec2::new(25.0, 38.1),
            Vec2::new(10.0, 10.0),
        ];
        let segs: Vec<_> = ring.windows(2).map(|w| (w[0], w[1])).collect();
        assert_eq!(stroke_ring(&ring, 3.5, 48, 48), brute(&segs, 3.5, 48, 48));
    }

    #[test]
    fn coverage_is_binary_core_with_soft_edge() {
        let mut cov = vec![0f32; 16 * 16];
        stroke_segment_coverage(&mut cov, 16, 16, Vec2::new(2.0, 8.0), Vec2::new(13.0, 8.0), 2.0);
        assert_eq!(cov[8 * 16 + 7], 1.0);
        assert_eq!(cov[9 * 16 + 7], 0.5);
        assert_eq!(cov[10 * 16 + 7], 0.0);
    }
}
