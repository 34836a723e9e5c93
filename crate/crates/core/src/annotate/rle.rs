//! Column-major run-length encoding of binary masks, including the
//! compact string form used by COCO tooling.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::raster::MaskRaster;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RleError {
    #[error("run lengths sum to {got}, expected {expected} pixels")]
    LengthMismatch { expected: u64, got: u64 },
    #[error("malformed compressed counts at byte {0}")]
    Malformed(usize),
    #[error("negative run length at run {0}")]
    NegativeRun(usize),
}

/// Alternating background/foreground runs in column-major order, starting
/// with a (possibly empty) background run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rle {
    pub height: u32,
    pub width: u32,
    pub counts: Vec<u32>,
}

/// Encodes `mask` column by column.
pub fn encode_rle(mask: &MaskRaster) -> Rle {
    let (w, h) = (mask.width(), mask.height());
    let mut counts = Vec::new();
    let mut current = false;
    let mut run = 0u32;
    for x in 0..w {
        for y in 0..h {
            let v = mask.get(x, y);
            if v != current {
                counts.push(run);
                run = 0;
                current = v;
            }
            run += 1;
        }
    }
    counts.push(run);
    Rle {
        height: h,
        width: w,
        counts,
    }
}

impl Rle {
    pub fn area(&self) -> u64 {
        self.counts.iter().skip(1).step_by(2).map(|&c| u64::from(c)).sum()
    }

    pub fn decode(&self) -> Result<MaskRaster, RleError> {
        let h = u64::from(self.height);
        let total = h * u64::from(self.width);
        let got: u64 = self.counts.iter().map(|&c| u64::from(c)).sum();
        if got != total {
            return Err(RleError::LengthMismatch { expected: total, got });
        }
        let mut mask = MaskRaster::new(self.width, self.height);
        let mut pos = 0u64;
        for (i, &c) in self.counts.iter().enumerate() {
            let end = pos + u64::from(c);
            if i % 2 == 1 {
                for idx in pos..end {
                    mask.set((idx / h) as u32, (idx % h) as u32);
                }
            }
            pos = end;
        }
        Ok(mask)
    }

    /// Compact ASCII form: each count is delta-coded against the count two
    /// runs back (from the fourth run on) and written as 5-bit groups with
    /// a continuation bit, offset by 48.
    pub fn to_compressed(&self) -> String {
        let mut s = String::new();
        for (i, &c) in self.counts.iter().enumerate() {
            let mut x = i64::from(c);
            if i > 2 {
                x -= i64::from(self.counts[i - 2]);
            }
            loop {
                let mut ch = (x & 0x1f) as u8;
                x >>= 5;
                let more = if ch & 0x10 != 0 { x != -1 } else { x != 0 };
                if more {
                    ch |= 0x20;
                }
                s.push(char::from(ch + 48));
                if !more {
                    break;
                }
            }
        }
        s
    }

    pub fn from_compressed(height: u32, width: u32, s: &str) -> Result<Self, RleError> {
        let bytes = s.as_bytes();
        let mut counts: Vec<u32> = Vec::new();
        let mut p = 0;
        while p < bytes.len() {
            let mut x: i64 = 0;
            let mut k = 0;
            loop {
                let b = *bytes.get(p).ok_or(RleError::Malformed(p))?;
                if !(48..48 + 64).contains(&b) || k >= 13 {
                    return Err(RleError::Malformed(p));
                }
                let c = i64::from(b - 48);
                x |= (c & 0x1f) << (5 * k);
                p += 1;
                k += 1;
                if c & 0x20 == 0 {
                    if c & 0x10 != 0 {
                        x |= -1i64 << (5 * k);
                    }
                    break;
                }
            }
            let m = counts.len();
            if m > 2 {
                x += i64::from(counts[m - 2]);
            }
            counts.push(u32::try_from(x).map_err(|_| RleError::NegativeRun(m))?);
        }
        Ok(Self {
            height,
            width,
            counts,
        })
    }
}
