use crate::geometry::Vec2;
use crate::raster::MaskRaster;

/// Integer shift for a displacement of `distance` pixels along `direction`.
pub fn offset_vector(distance: u32, direction: Vec2<f64>) -> (i64, i64) {
    let d = f64::from(distance);
    ((d * direction.x).round() as i64, (d * direction.y).round() as i64)
}

/// Annotation corruption: translates `mask` by `round(distance · direction)`,
/// clipping at the canvas border. `distance = 0` is the identity.
pub fn offset_annotation(mask: &MaskRaster, distance: u32, direction: Vec2<f64>) -> MaskRaster {
    if distance == 0 {
        return mask.clone();
    }
    let (dx, dy) = offset_vector(distance, direction);
    mask.translate(dx, dy)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blob() -> MaskRaster {
        MaskRaster::from_fn(64, 64, |x, y| {
            let (dx, dy) = (x as f64 - 32.0, y as f64 - 32.0);
            dx.hypot(dy) < 12.0
        })
    }

    #[test]
    fn zero_is_identity() {
        let m = blob();
        assert_eq!(offset_annotation(&m, 0, Vec2::new(0.6, 0.8)), m);
    }

    #[test]
    fn interior_shift_preserves_area() {
        let m = blob();
        let s = offset_annotation(&m, 10, Vec2::new(0.6, 0.8));
        assert_eq!(s.count(), m.count());
        assert!(m.iou(&s).unwrap() < 1.0);
        assert_eq!(offset_vector(10, Vec2::new(0.6, 0.8)), (6, 8));
    }

    #[test]
    fn iou_decreases_with_distance() {
        let m = blob();
        let dir = Vec2::new(std::f64::consts::FRAC_1_SQRT_2, -std::f64::consts::FRAC_1_SQRT_2);
        let ious: Vec<f64> = [0, 10, 20, 30]
            .iter()
            .map(|&d| m.iou(&offset_annotation(&m, d, dir)).unwrap())
            .collect();
        assert_eq!(ious[0], 1.0);
        assert!(ious.windows(2).all(|w| w[1] < w[0]), "{ious:?}");
    }
}
