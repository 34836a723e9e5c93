use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RasterError {
    #[error("mask dimensions differ: {a_w}x{a_h} vs {b_w}x{b_h}")]
    DimensionMismatch { a_w: u32, a_h: u32, b_w: u32, b_h: u32 },
    #[error("expected {expected} masks, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("visibility masks overlap at pixel ({x}, {y}): slots {first} and {second}")]
    Overlap { x: u32, y: u32, first: u16, second: u16 },
    #[error("too many instances for a 16-bit label map: {0}")]
    TooManyInstances(usize),
}

/// Binary W×H bitmap, row-major, one bit per pixel.
///
/// Padding bits past `width` in each row are always zero, so equality and
/// population counts work word-wise.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MaskRaster {
    width: u32,
    height: u32,
    stride: usize,
    words: Vec<u64>,
}

impl std::fmt::Debug for MaskRaster {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MaskRaster")
            .field("width", &self.width)
            .field("height", &self.height)
            .field("count", &self.count())
            .finish()
    }
}

impl MaskRaster {
    pub fn new(width: u32, height: u32) -> Self {
        let stride = (width as usize).div_ceil(64);
        Self {
            width,
            height,
            stride,
            words: vec![0; stride * height as usize],
        }
    }

    pub fn full(width: u32, height: u32) -> Self {
        let mut m = Self::new(width, height);
        for y in 0..height {
            m.set_span(y, 0, width);
        }
        m
    }

    /// Builds a mask from a row-major predicate.
    pub fn from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32) -> bool) -> Self {
        let mut m = Self::new(width, height);
        for y in 0..height {
            for x in 0..width {
                if f(x, y) {
                    m.set(x, y);
                }
            }
        }
        m
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn same_dims(&self, other: &Self) -> bool {
        self.width == other.width && self.height == other.height
    }

    pub fn check_dims(&self, other: &Self) -> Result<(), RasterError> {
        if self.same_dims(other) {
            Ok(())
        } else {
            Err(RasterError::DimensionMismatch {
                a_w: self.width,
                a_h: self.height,
                b_w: other.width,
                b_h: other.height,
            })
        }
    }

    #[inline]
    fn index(&self, x: u32, y: u32) -> (usize, u64) {
        let word = y as usize * self.stride + (x as usize >> 6);
        (word, 1u64 << (x & 63))
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> bool {
        debug_assert!(x < self.width && y < self.height);
        let (w, bit) = self.index(x, y);
        self.words[w] & bit != 0
    }

    #[inline]
    pub fn set(&mut self, x: u32, y: u32) {
        debug_assert!(x < self.width && y < self.height);
        let (w, bit) = self.index(x, y);
        self.words[w] |= bit;
    }

    #[inline]
    pub fn clear(&mut self, x: u32, y: u32) {
        let (w, bit) = self.index(x, y);
        self.words[w] &= !bit;
    }

    /// Sets pixels `x0..x1` of row `y`; the range is clipped to the row.
    pub fn set_span(&mut self, y: u32, x0: u32, x1: u32) {
        let x1 = x1.min(self.width);
        if y >= self.height || x0 >= x1 {
            return;
        }
        let row = y as usize * self.stride;
        let (w0, b0) = ((x0 >> 6) as usize, x0 & 63);
        let (w1, b1) = (((x1 - 1) >> 6) as usize, (x1 - 1) & 63);
        let lo = u64::MAX << b0;
        let hi = u64::MAX >> (63 - b1);
        if w0 == w1 {
            self.words[row + w0] |= lo & hi;
        } else {
            self.words[row + w0] |= lo;
            for w in &mut self.words[row + w0 + 1..row + w1] {
                *w = u64::MAX;
            }
            self.words[row + w1] |= hi;
        }
    }

    pub fn count(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn union_with(&mut self, other: &Self) {
        assert!(self.same_dims(other), "mask dimensions differ");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn subtract(&mut self, other: &Self) {
        assert!(self.same_dims(other), "mask dimensions differ");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn intersect_with(&mut self, other: &Self) {
        assert!(self.same_dims(other), "mask dimensions differ");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut m = self.clone();
        m.union_with(other);
        m
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut m = self.clone();
        m.subtract(other);
        m
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut m = self.clone();
        m.intersect_with(other);
        m
    }

    pub fn intersection_count(&self, other: &Self) -> u64 {
        assert!(self.same_dims(other), "mask dimensions differ");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| u64::from((a & b).count_ones()))
            .sum()
    }

    pub fn union_count(&self, other: &Self) -> u64 {
        assert!(self.same_dims(other), "mask dimensions differ");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| u64::from((a | b).count_ones()))
            .sum()
    }

    /// Intersection over union; `None` when both masks are empty.
    pub fn iou(&self, other: &Self) -> Option<f64> {
        let union = self.union_count(other);
        (union > 0).then(|| self.intersection_count(other) as f64 / union as f64)
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.same_dims(other)
            && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.same_dims(other) && self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    /// Set pixels in row-major order.
    pub fn iter_set(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.height).flat_map(move |y| {
            let row = &self.words[y as usize * self.stride..(y as usize + 1) * self.stride];
            row.iter().enumerate().flat_map(move |(wi, &word)| {
                let mut bits = word;
                std::iter::from_fn(move || {
                    if bits == 0 {
                        return None;
                    }
                    let b = bits.trailing_zeros();
                    bits &= bits - 1;
                    Some(((wi as u32) * 64 + b, y))
                })
            })
        })
    }

    /// Tight bounding box as `(x, y, width, height)`; `None` if empty.
    pub fn bbox(&self) -> Option<(u32, u32, u32, u32)> {
        let mut min_x = u32::MAX;
        let mut max_x = 0;
        let mut min_y = u32::MAX;
        let mut max_y = 0;
        for y in 0..self.height {
            let row = &self.words[y as usize * self.stride..(y as usize + 1) * self.stride];
            let first = row.iter().position(|&w| w != 0);
            let Some(first) = first else { continue };
            let last = row.iter().rposition(|&w| w != 0).unwrap_or(first);
            let x0 = first as u32 * 64 + row[first].trailing_zeros();
            let x1 = last as u32 * 64 + 63 - row[last].leading_zeros();
            min_x = min_x.min(x0);
            max_x = max_x.max(x1);
            min_y = min_y.min(y);
            max_y = y;
        }
        (min_x != u32::MAX).then(|| (min_x, min_y, max_x - min_x + 1, max_y - min_y + 1))
    }

    /// Rigid translation by `(dx, dy)` pixels; pixels leaving the canvas are dropped.
    pub fn translate(&self, dx: i64, dy: i64) -> Self {
        let mut out = Self::new(self.width, self.height);
        if dx.unsigned_abs() >= u64::from(self.width) || dy.unsigned_abs() >= u64::from(self.height)
        {
            return out;
        }
        for (x, y) in self.iter_set() {
            let nx = i64::from(x) + dx;
            let ny = i64::from(y) + dy;
            if (0..i64::from(self.width)).contains(&nx) && (0..i64::from(self.height)).contains(&ny) {
                out.set(nx as u32, ny as u32);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn spans_across_words() {
        let mut m = MaskRaster::new(200, 3);
        m.set_span(1, 10, 150);
        assert_eq!(m.count(), 140);
        assert!(!m.get(9, 1) && m.get(10, 1) && m.get(149, 1) && !m.get(150, 1));
        m.set_span(2, 190, 500);
        assert_eq!(m.count(), 150);
        assert_eq!(m.bbox(), Some((10, 1, 190, 2)));
    }

    #[test]
    fn full_has_no_padding_bits() {
        let m = MaskRaster::full(70, 2);
        assert_eq!(m.count(), 140);
        assert_eq!(m, MaskRaster::from_fn(70, 2, |_, _| true));
    }

    #[test]
    fn translate_clips() {
        let mut m = MaskRaster::new(8, 8);
        m.set(0, 0);
        m.set(7, 7);
        let t = m.translate(1, 1);
        assert_eq!(t.iter_set().collect::<Vec<_>>(), vec![(1, 1)]);
        assert!(m.translate(8, 0).is_empty());
        assert_eq!(m.translate(0, 0), m);
    }

    #[test]
    fn empty_bbox() {
        assert_eq!(MaskRaster::new(5, 5).bbox(), None);
        assert_eq!(MaskRaster::new(5, 5).iou(&MaskRaster::new(5, 5)), None);
    }

    fn arb_mask() -> impl Strategy<Value = MaskRaster> {
        (1u32..90, 1u32..12).prop_flat_map(|(w, h)| {
            proptest::collection::vec(any::<bool>(), (w * h) as usize).prop_map(move |bits| {
                MaskRaster::from_fn(w, h, |x, y| bits[(y * w + x) as usize])
            })
        })
    }

    proptest! {
        #[test]
        fn algebra_matches_pixels(a in arb_mask(), seed in any::<u64>()) {
            let (w, h) = (a.width(), a.height());
            let b = MaskRaster::from_fn(w, h, |x, y| (seed >> ((x * 7 + y * 13) % 64)) & 1 == 1);
            let u = a.union(&b);
            let d = a.difference(&b);
            let i = a.intersection(&b);
            for y in 0..h {
                for x in 0..w {
                    prop_assert_eq!(u.get(x, y), a.get(x, y) || b.get(x, y));
                    prop_assert_eq!(d.get(x, y), a.get(x, y) && !b.get(x, y));
                    prop_assert_eq!(i.get(x, y), a.get(x, y) && b.get(x, y));
                }
            }
            prop_assert_eq!(i.count(), a.intersection_count(&b));
            prop_assert_eq!(u.count(), a.union_count(&b));
            prop_assert!(d.is_subset_of(&a));
            prop_assert!(d.is_disjoint(&b));
            prop_assert_eq!(a.iter_set().count() as u64, a.count());
        }
    }
}
