use crate::geometry::ContourShape;
use crate::raster::stroke::{stroke_ring_into, stroke_segment_coverage};
use crate::raster::MaskRaster;
use crate::scalar::Scalar;

/// 8-bit RGB image, row-major, black background.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanvasImage {
    width: u32,
    height: u32,
    rgb: Vec<u8>,
}

impl CanvasImage {
    pub fn new(width: u32, height: u32) -> Self {
        Self {
            width,
            height,
            rgb: vec![0; 3 * width as usize * height as usize],
        }
    }

    pub fn from_rgb(width: u32, height: u32, rgb: Vec<u8>) -> Option<Self> {
        (rgb.len() == 3 * width as usize * height as usize).then_some(Self { width, height, rgb })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn as_rgb(&self) -> &[u8] {
        &self.rgb
    }

    pub fn pixel(&self, x: u32, y: u32) -> [u8; 3] {
        let i = 3 * (y as usize * self.width as usize + x as usize);
        [self.rgb[i], self.rgb[i + 1], self.rgb[i + 2]]
    }

    pub fn put_pixel(&mut self, x: u32, y: u32, c: [u8; 3]) {
        let i = 3 * (y as usize * self.width as usize + x as usize);
        self.rgb[i..i + 3].copy_from_slice(&c);
    }

    /// Paints every set pixel of `mask` white.
    pub fn paint_mask(&mut self, mask: &MaskRaster) {
        for (x, y) in mask.iter_set() {
            self.put_pixel(x, y, [255; 3]);
        }
    }

    /// Strokes every ring of `shape` in white with width `lw`.
    ///
    /// Binary strokes overwrite whatever is underneath. Anti-aliased strokes
    /// raise each channel to the stroke coverage, never darkening.
    pub fn draw_polylines<T: Scalar>(&mut self, shape: &ContourShape<T>, lw: T, antialias: bool) {
        if shape.rings.is_empty() {
            return;
        }
        if antialias {
            let mut cov = vec![0f32; self.width as usize * self.height as usize];
            for (a, b) in shape.edges() {
                stroke_segment_coverage(&mut cov, self.width, self.height, a, b, lw);
            }
            for (i, &c) in cov.iter().enumerate() {
                if c > 0.0 {
                    let v = (c * 255.0).round() as u8;
                    for ch in &mut self.rgb[3 * i..3 * i + 3] {
                        *ch = (*ch).max(v);
                    }
                }
            }
        } else {
            let mut band = MaskRaster::new(self.width, self.height);
            for ring in &shape.rings {
                stroke_ring_into(&mut band, ring, lw);
            }
            self.paint_mask(&band);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Vec2;

    fn segment_shape() -> ContourShape<f64> {
        ContourShape {
            rings: vec![vec![Vec2::new(1.0, 4.0), Vec2::new(6.0, 4.0)]],
        }
    }

    #[test]
    fn unit_line() {
        let mut img = CanvasImage::new(8, 8);
        img.draw_polylines(&segment_shape(), 1.0, false);
        for y in 0..8 {
            for x in 0..8 {
                let white = y == 4 && (1..=6).contains(&x);
                assert_eq!(img.pixel(x, y), if white { [255; 3] } else { [0; 3] });
            }
        }
    }

    #[test]
    fn empty_shape_noop() {
        let mut img = CanvasImage::new(8, 8);
        img.draw_polylines(&ContourShape::<f64>::empty(), 3.0, false);
        assert_eq!(img, CanvasImage::new(8, 8));
    }

    #[test]
    fn overdraw_idempotent() {
        let mut once = CanvasImage::new(8, 8);
        once.draw_polylines(&segment_shape(), 2.0, false);
        let mut twice = once.clone();
        twice.draw_polylines(&segment_shape(), 2.0, false);
        assert_eq!(once, twice);
    }

    #[test]
    fn antialias_soft_edges() {
        let shape = ContourShape {
            rings: vec![vec![Vec2::new(1.0, 1.0), Vec2::new(6.0, 4.0)]],
        };
        let mut img = CanvasImage::new(8, 8);
        img.draw_polylines(&shape, 1.5, true);
        assert_eq!(img.pixel(1, 1), [255; 3]);
        let partial = img.as_rgb().iter().filter(|&&v| v > 0 && v < 255).count();
        assert!(partial > 0);
        let mut hard = CanvasImage::new(8, 8);
        hard.draw_polylines(&shape, 1.5, false);
        assert_ne!(img, hard);
    }
}
