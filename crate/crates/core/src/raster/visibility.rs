//! Hollow shells, occlusion resolution and the per-pixel label map.

use crate::geometry::ContourShape;
use crate::raster::fill::fill_polygon;
use crate::raster::stroke::stroke_ring_into;
use crate::raster::{MaskRaster, RasterError};
use crate::scalar::Scalar;

/// Region masks of one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceMasks {
    /// Filled outermost ring (`R_out`). For single-ring shapes this also
    /// includes the stroke band so that `hollow ⊆ outer` holds.
    pub outer: MaskRaster,
    /// Filled innermost ring (`R_in`).
    pub inner: MaskRaster,
    /// The annotated region before occlusion (`S`).
    pub hollow: MaskRaster,
}

/// Outer shell, inner shell and hollow region of `shape`.
///
/// With two or more rings the hollow region is `fill(outermost) \ fill(innermost)`.
/// A single ring has no interior band, so its stroke band of width `lw` is
/// used instead.
pub fn shell_masks<T: Scalar>(shape: &ContourShape<T>, lw: T, width: u32, height: u32) -> InstanceMasks {
    match (shape.innermost(), shape.outermost()) {
        (Some(inner_ring), Some(outer_ring)) if shape.rings.len() >= 2 => {
            let outer = fill_polygon(outer_ring, width, height);
            let inner = fill_polygon(inner_ring, width, height);
            let hollow = outer.difference(&inner);
            InstanceMasks { outer, inner, hollow }
        }
        (Some(ring), _) => {
            let inner = fill_polygon(ring, width, height);
            let mut hollow = MaskRaster::new(width, height);
            stroke_ring_into(&mut hollow, ring, lw);
            let outer = inner.union(&hollow);
            InstanceMasks { outer, inner, hollow }
        }
        _ => InstanceMasks {
            outer: MaskRaster::new(width, height),
            inner: MaskRaster::new(width, height),
            hollow: MaskRaster::new(width, height),
        },
    }
}

pub fn hollow_mask<T: Scalar>(shape: &ContourShape<T>, lw: T, width: u32, height: u32) -> MaskRaster {
    shell_masks(shape, lw, width, height).hollow
}

/// Visible part of each hollow region, with instances ordered back to front:
/// `V_k = S_k \ (R_out,k+1 ∪ … ∪ R_out,K)`.
pub fn resolve_visibility(
    hollow: &[MaskRaster],
    outer: &[MaskRaster],
) -> Result<Vec<MaskRaster>, RasterError> {
    if hollow.len() != outer.len() {
        return Err(RasterError::LengthMismatch {
            expected: hollow.len(),
            got: outer.len(),
        });
    }
    let Some(first) = hollow.first() else {
        return Ok(Vec::new());
    };
    for m in hollow.iter().chain(outer) {
        first.check_dims(m)?;
    }
    let mut occluder = MaskRaster::new(first.width(), first.height());
    let mut visible: Vec<MaskRaster> = Vec::with_capacity(hollow.len());
    for (s, r) in hollow.iter().zip(outer).rev() {
        visible.push(s.difference(&occluder));
        occluder.union_with(r);
    }
    visible.reverse();
    Ok(visible)
}

/// Per-pixel instance slot (0 = background, `k` = k-th instance, 1-based)
/// and the category carried by each slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMap {
    width: u32,
    height: u32,
    labels: Vec<u16>,
    categories: Vec<u32>,
}

impl LabelMap {
    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn slot(&self, x: u32, y: u32) -> u16 {
        self.labels[y as usize * self.width as usize + x as usize]
    }

    /// Category at a pixel, 0 for background.
    pub fn category(&self, x: u32, y: u32) -> u32 {
        match self.slot(x, y) {
            0 => 0,
            k => self.categories[k as usize - 1],
        }
    }

    pub fn slots(&self) -> &[u16] {
        &self.labels
    }

    pub fn categories(&self) -> &[u32] {
        &self.categories
    }

    pub fn foreground_count(&self) -> u64 {
        self.labels.iter().filter(|&&l| l != 0).count() as u64
    }
}

/// Assigns each visible pixel to its instance. Fails if two visibility
/// masks claim the same pixel.
pub fn build_label_map(visibility: &[MaskRaster], categories: &[u32]) -> Result<LabelMap, RasterError> {
    if visibility.len() != categories.len() {
        return Err(RasterError::LengthMismatch {
            expected: visibility.len(),
            got: categories.len(),
        });
    }
    if visibility.len() > usize::from(u16::MAX) {
        return Err(RasterError::TooManyInstances(visibility.len()));
    }
    let (width, height) = visibility
        .first()
        .map_or((0, 0), |m| (m.width(), m.height()));
    let mut labels = vec![0u16; width as usize * height as usize];
    for (k, v) in visibility.iter().enumerate() {
        visibility[0].check_dims(v)?;
        let slot = k as u16 + 1;
        for (x, y) in v.iter_set() {
            let cell = &mut labels[y as usize * width as usize + x as usize];
            if *cell != 0 {
                return Err(RasterError::Overlap {
                    x,
                    y,
                    first: *cell,
                    second: slot,
                });
            }
            *cell = slot;
        }
    }
    Ok(LabelMap {
        width,
        height,
        labels,
        categories: categories.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Vec2;

    fn square(c: f64, half: f64) -> Vec<Vec2<f64>> {
        vec![
            Vec2::new(c - half, c - half),
            Vec2::new(c + half, c - half),
            Vec2::new(c + half, c + half),
            Vec2::new(c - half, c + half),
            Vec2::new(c - half, c - half),
        ]
    }

    #[test]
    fn concentric_squares_ring_area() {
        let shape = ContourShape {
            rings: vec![square(8.0, 2.0), square(8.0, 4.0)],
        };
        let m = shell_masks(&shape, 1.0, 16, 16);
        assert_eq!(m.hollow.count(), 64 - 16);
        assert!(m.hollow.is_subset_of(&m.outer));
        assert!(m.hollow.is_disjoint(&m.inner));
    }

    #[test]
    fn single_ring_uses_stroke_band() {
        let ring = square(8.0, 4.0);
        let shape = ContourShape { rings: vec![ring.clone()] };
        let m = shell_masks(&shape, 2.0, 16, 16);
        let mut band = MaskRaster::new(16, 16);
        stroke_ring_into(&mut band, &ring, 2.0);
        assert_eq!(m.hollow, band);
        assert!(!m.hollow.is_empty());
        assert!(m.hollow.is_subset_of(&m.outer));
    }

    #[test]
    fn degenerate_inner_gives_outer_fill() {
        let inner = vec![Vec2::new(8.0, 8.0); 5];
        let shape = ContourShape {
            rings: vec![inner, square(8.0, 4.0)],
        };
        let m = shell_masks(&shape, 1.0, 16, 16);
        assert_eq!(m.hollow, m.outer);
    }

    #[test]
    fn single_instance_fully_visible() {
        let s = MaskRaster::from_fn(8, 8, |x, y| x + y < 6);
        let v = resolve_visibility(std::slice::from_ref(&s), &[MaskRaster::full(8, 8)]).unwrap();
        assert_eq!(v, vec![s]);
    }

    #[test]
    fn disjoint_occluder_leaves_mask() {
        let s1 = MaskRaster::from_fn(8, 8, |x, _| x < 3);
        let r2 = MaskRaster::from_fn(8, 8, |x, _| x >= 5);
        let s2 = r2.clone();
        let v = resolve_visibility(&[s1.clone(), s2.clone()], &[s1.clone(), r2]).unwrap();
        assert_eq!(v[0], s1);
        assert_eq!(v[1], s2);
    }

    #[test]
    fn later_outer_shell_occludes_through_hole() {
        // Front instance's outer shell hides the back instance even inside its hole.
        let s1 = MaskRaster::full(8, 8);
        let r2 = MaskRaster::from_fn(8, 8, |x, y| (2..6).contains(&x) && (2..6).contains(&y));
        let s2 = MaskRaster::from_fn(8, 8, |x, y| r2.get(x, y) && !(x == 3 && y == 3));
        let v = resolve_visibility(&[s1.clone(), s2.clone()], &[s1, r2.clone()]).unwrap();
        assert_eq!(v[0].count(), 64 - 16);
        assert_eq!(v[1], s2);
    }

    #[test]
    fn mismatched_inputs() {
        let a = MaskRaster::new(4, 4);
        assert!(matches!(
            resolve_visibility(std::slice::from_ref(&a), &[]),
            Err(RasterError::LengthMismatch { .. })
        ));
        assert!(matches!(
            resolve_visibility(&[a], &[MaskRaster::new(5, 4)]),
            Err(RasterError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn label_map_basics() {
        let empty = build_label_map(&[MaskRaster::new(4, 4), MaskRaster::new(4, 4)], &[3, 4]).unwrap();
        assert!(empty.slots().iter().all(|&l| l == 0));
        let ring = MaskRaster::from_fn(6, 6, |x, y| x == 0 || y == 0 || x == 5 || y == 5);
        let map = build_label_map(std::slice::from_ref(&ring), &[7]).unwrap();
        for y in 0..6 {
            for x in 0..6 {
                let on = ring.get(x, y);
                assert_eq!(map.slot(x, y), u16::from(on));
                assert_eq!(map.category(x, y), if on { 7 } else { 0 });
            }
        }
        assert_eq!(map.foreground_count(), ring.count());
    }

    #[test]
    fn overlapping_visibility_is_rejected() {
        let a = MaskRaster::from_fn(4, 4, |x, _| x < 3);
        let b = MaskRaster::from_fn(4, 4, |x, _| x >= 2);
        let err = build_label_map(&[a, b], &[1, 2]).unwrap_err();
        assert!(matches!(err, RasterError::Overlap { x: 2, first: 1, second: 2, .. }));
    }
}
