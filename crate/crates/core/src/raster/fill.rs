//! Even-odd polygon fill sampled at pixel centers.

use crate::geometry::Vec2;
use crate::raster::MaskRaster;
use crate::scalar::Scalar;

/// Row-center ordinate of pixel row `q`.
#[inline]
pub fn pixel_center<T: Scalar>(q: i64) -> T {
    T::lit(q as f64) + T::lit(0.5)
}

/// Whether edge `a → b` crosses the horizontal line `y` (half-open in y).
#[inline]
pub fn crosses<T: Scalar>(a: Vec2<T>, b: Vec2<T>, y: T) -> bool {
    (a.y > y) != (b.y > y)
}

/// Abscissa where edge `a → b` meets the line `y`. Only meaningful when
/// [`crosses`] holds.
#[inline]
pub fn crossing_x<T: Scalar>(a: Vec2<T>, b: Vec2<T>, y: T) -> T {
    (b.x - a.x) * (y - a.y) / (b.y - a.y) + a.x
}

/// Smallest index `p` in `0..=limit` whose center `p + 0.5` is `>= v`.
fn first_center_at_or_after<T: Scalar>(v: T, limit: u32) -> u32 {
    if !(v > T::lit(0.5)) {
        return 0;
    }
    let limit_i = i64::from(limit);
    if pixel_center::<T>(limit_i - 1) < v {
        return limit;
    }
    let mut p = (v - T::lit(0.5)).ceil().to_i64().unwrap_or(0).clamp(0, limit_i - 1);
    while p > 0 && pixel_center::<T>(p - 1) >= v {
        p -= 1;
    }
    while pixel_center::<T>(p) < v {
        p += 1;
    }
    p as u32
}

fn edges<T: Scalar>(ring: &[Vec2<T>]) -> impl Iterator<Item = (Vec2<T>, Vec2<T>)> + '_ {
    let closing = match (ring.first(), ring.last()) {
        (Some(&f), Some(&l)) if ring.len() > 1 && (f.x != l.x || f.y != l.y) => Some((l, f)),
        _ => None,
    };
    ring.windows(2).map(|w| (w[0], w[1])).chain(closing)
}

/// Rasterizes the interior of `ring` on a `width × height` canvas.
///
/// Pixel `(p, q)` is set iff its center `(p + 0.5, q + 0.5)` is inside the
/// polygon under the even-odd rule. An unclosed ring is closed implicitly.
/// Zero-area rings give an empty mask.
pub fn fill_polygon<T: Scalar>(ring: &[Vec2<T>], width: u32, height: u32) -> MaskRaster {
    let mut mask = MaskRaster::new(width, height);
    fill_polygon_into(&mut mask, ring);
    mask
}

/// Even-odd fill of `ring` OR-ed into `mask`.
pub fn fill_polygon_into<T: Scalar>(mask: &mut MaskRaster, ring: &[Vec2<T>]) {
    let (width, height) = (mask.width(), mask.height());
    if width == 0 || height == 0 || ring.len() < 2 {
        return;
    }
    let mut rows: Vec<Vec<T>> = vec![Vec::new(); height as usize];
    for (a, b) in edges(ring) {
        if a.y == b.y {
            continue;
        }
        let (lo, hi) = if a.y < b.y { (a.y, b.y) } else { (b.y, a.y) };
        let q0 = first_center_at_or_after(lo, height);
        let q1 = first_center_at_or_after(hi, height);
        for q in q0..q1 {
            let y = pixel_center::<T>(i64::from(q));
            debug_assert!(crosses(a, b, y));
            rows[q as usize].push(crossing_x(a, b, y));
        }
    }
    for (q, xs) in rows.iter_mut().enumerate() {
        if xs.is_empty() {
            continue;
        }
        xs.sort_unstable_by(|u, v| u.partial_cmp(v).unwrap_or(std::cmp::Ordering::Equal));
        for span in xs.chunks_exact(2) {
            let p0 = first_center_at_or_after(span[0], width);
            let p1 = first_center_at_or_after(span[1], width);
            mask.set_span(q as u32, p0, p1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(points: &[(f64, f64)]) -> Vec<Vec2<f64>> {
        let mut r: Vec<_> = points.iter().map(|&(x, y)| Vec2::new(x, y)).collect();
        r.push(r[0]);
        r
    }

    // Crossing-number test at the pixel center, one pixel at a time.
    fn brute(ring: &[Vec2<f64>], w: u32, h: u32) -> MaskRaster {
        MaskRaster::from_fn(w, h, |p, q| {
            let (px, py) = (p as f64 + 0.5, q as f64 + 0.5);
            let mut inside = false;
            for e in ring.windows(2) {
                let (a, b) = (e[0], e[1]);
                if (a.y > py) != (b.y > py) && px < (b.x - a.x) * (py - a.y) / (b.y - a.y) + a.x {
                    inside = !inside;
                }
            }
            inside
        })
    }

    #[test]
    fn integer_square() {
        let m = fill_polygon(&ring(&[(0.0, 0.0), (4.0, 0.0), (4.0, 4.0), (0.0, 4.0)]), 8, 8);
        assert_eq!(m.count(), 16);
        assert_eq!(m.bbox(), Some((0, 0, 4, 4)));
    }

    #[test]
    fn right_triangle() {
        let r = ring(&[(0.0, 0.0), (4.0, 0.0), (0.0, 4.0)]);
        let m = fill_polygon(&r, 8, 8);
        let b = brute(&r, 8, 8);
        assert_eq!(b.count(), 6);
        assert_eq!(m, b);
    }

    #[test]
    fn outside_canvas_is_empty() {
        let r = ring(&[(-50.0, -50.0), (-10.0, -50.0), (-10.0, -10.0)]);
        assert!(fill_polygon(&r, 16, 16).is_empty());
        let r = ring(&[(100.0, 2.0), (120.0, 2.0), (120.0, 9.0)]);
        assert!(fill_polygon(&r, 16, 16).is_empty());
    }

    #[test]
    fn degenerate_is_empty() {
        let r = ring(&[(1.0, 1.0), (5.0, 5.0), (3.0, 3.0)]);
        assert!(fill_polygon(&r, 8, 8).is_empty());
        assert!(fill_polygon::<f64>(&[], 8, 8).is_empty());
    }

    #[test]
    fn covers_canvas_when_larger() {
        let r = ring(&[(-10.0, -10.0), (30.0, -10.0), (30.0, 30.0), (-10.0, 30.0)]);
        assert_eq!(fill_polygon(&r, 20, 10), MaskRaster::full(20, 10));
    }

    #[test]
    fn self_intersecting_star_even_odd() {
        // Pentagram: even-odd leaves the center pentagon empty.
        let pts: Vec<(f64, f64)> = (0..5)
            .map(|i| {
                let t = std::f64::consts::TAU * (i * 2 % 5) as f64 / 5.0 - std::f64::consts::FRAC_PI_2;
                (32.0 + 25.0 * t.cos(), 32.0 + 25.0 * t.sin())
            })
            .collect();
        let r = ring(&pts);
        let m = fill_polygon(&r, 64, 64);
        assert!(!m.get(32, 32));
        assert_eq!(m, brute(&r, 64, 64));
    }

    #[test]
    fn unclosed_ring_closes() {
        let open: Vec<_> = [(0.0, 0.0), (4.0, 0.0), (4.0, 4.0), (0.0, 4.0)]
            .iter()
            .map(|&(x, y)| Vec2::new(x, y))
            .collect();
        assert_eq!(fill_polygon(&open, 8, 8).count(), 16);
    }

    #[test]
    fn random_polygons_match_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for _ in 0..300 {
            let n = rng.gen_range(3..20);
            let pts: Vec<(f64, f64)> = (0..n)
                .map(|_| (rng.gen_range(-8.0..72.0), rng.gen_range(-8.0..72.0)))
                .collect();
            let r = ring(&pts);
            assert_eq!(fill_polygon(&r, 64, 64), brute(&r, 64, 64));
            // Vertices on pixel centers and lattice lines exercise ties.
            let pts: Vec<(f64, f64)> = (0..n)
                .map(|_| (rng.gen_range(0..33) as f64 * 0.5, rng.gen_range(0..33) as f64 * 0.5))
                .collect();
            let r = ring(&pts);
            assert_eq!(fill_polygon(&r, 16, 16), brute(&r, 16, 16));
        }
    }

    #[test]
    fn f32_matches_f64_on_simple_shapes() {
        let r64 = ring(&[(1.25, 2.5), (13.75, 3.0), (9.0, 14.5)]);
        let r32: Vec<Vec2<f32>> = r64.iter().map(|v| v.cast()).collect();
        assert_eq!(fill_polygon(&r64, 16, 16), fill_polygon(&r32, 16, 16));
    }
}
