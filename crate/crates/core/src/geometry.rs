//! Nested contour rings: a regular base polygon grown outward ring by ring
//! with noise-perturbed radial steps.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perlin::PerlinNoise1D;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2<T> {
    pub x: T,
    pub y: T,
}

impl<T> Vec2<T> {
    pub const fn new(x: T, y: T) -> Self {
        Self { x, y }
    }
}

impl<T: Scalar> Vec2<T> {
    pub fn distance(self, other: Self) -> T {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn cast<U: Scalar>(self) -> Vec2<U> {
        Vec2::new(U::lit(self.x.to_f64_lossy()), U::lit(self.y.to_f64_lossy()))
    }
}

/// A closed vertex ring: `n + 1` points with the last equal to the first.
pub type Ring<T> = Vec<Vec2<T>>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("invalid instance parameter `{field}`: {reason}")]
    InvalidParam { field: &'static str, reason: String },
}

fn invalid(field: &'static str, reason: impl Into<String>) -> GeometryError {
    GeometryError::InvalidParam {
        field,
        reason: reason.into(),
    }
}

/// Shape and placement parameters of one contour instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceParams<T> {
    /// Number of nested rings (N).
    pub num_rings: u32,
    /// Vertices per ring (n).
    pub num_vertices: u32,
    /// Radius of the innermost ring before aspect scaling, in pixels.
    pub base_radius: T,
    /// Stroke width, also the nominal radial step between rings, in pixels.
    pub line_width: T,
    /// Per-axis stretch of the base ring.
    pub aspect: Vec2<T>,
    /// Per-axis amplitude of the noise perturbation of each radial step, in pixels.
    pub noise_scale: Vec2<T>,
    /// Canvas position of the shape center, in pixels.
    pub center: Vec2<T>,
    /// Category label in `1..=C`.
    pub category: u32,
    /// 1-based render order; larger is nearer the viewer.
    pub depth: u32,
}

impl<T: Scalar> InstanceParams<T> {
    pub fn validate(&self) -> Result<(), GeometryError> {
        if self.num_rings < 1 {
            return Err(invalid("num_rings", "must be at least 1"));
        }
        if self.num_vertices < 3 {
            return Err(invalid("num_vertices", "must be at least 3"));
        }
        let positive = |field, v: T| {
            if v.is_finite() && v > T::zero() {
                Ok(())
            } else {
                Err(invalid(field, format!("must be finite and positive, got {v}")))
            }
        };
        positive("base_radius", self.base_radius)?;
        positive("line_width", self.line_width)?;
        positive("aspect.x", self.aspect.x)?;
        positive("aspect.y", self.aspect.y)?;
        for (field, v) in [
            ("noise_scale.x", self.noise_scale.x),
            ("noise_scale.y", self.noise_scale.y),
        ] {
            if !(v.is_finite() && v >= T::zero()) {
                return Err(invalid(field, format!("must be finite and non-negative, got {v}")));
            }
        }
        let max_noise = self.noise_scale.x.max(self.noise_scale.y);
        if self.line_width - max_noise <= T::zero() {
            return Err(invalid(
                "noise_scale",
                format!(
                    "line width {} must exceed the largest noise scale {max_noise}",
                    self.line_width
                ),
            ));
        }
        if !(self.center.x.is_finite() && self.center.y.is_finite()) {
            return Err(invalid("center", "must be finite"));
        }
        Ok(())
    }

    /// Unit direction `(cos θ_j, sin θ_j)` for `θ_j = 2πj/n`, `j = 0..=n`.
    pub fn directions(&self) -> Vec<Vec2<T>> {
        let n = self.num_vertices as usize;
        let tau = T::TAU();
        let nn = T::of_usize(n);
        (0..=n)
            .map(|j| {
                let theta = tau * T::of_usize(j) / nn;
                Vec2::new(theta.cos(), theta.sin())
            })
            .collect()
    }
}

/// Nested rings of one instance, innermost first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContourShape<T> {
    pub rings: Vec<Ring<T>>,
}

impl<T: Scalar> ContourShape<T> {
    pub fn empty() -> Self {
        Self { rings: Vec::new() }
    }

    pub fn innermost(&self) -> Option<&Ring<T>> {
        self.rings.first()
    }

    pub fn outermost(&self) -> Option<&Ring<T>> {
        self.rings.last()
    }

    /// Every edge of every ring as `(start, end)` pairs.
    pub fn edges(&self) -> impl Iterator<Item = (Vec2<T>, Vec2<T>)> + '_ {
        self.rings
            .iter()
            .flat_map(|ring| ring.windows(2).map(|w| (w[0], w[1])))
    }
}

/// The innermost ring: a regular n-gon of radius `r`, stretched by the
/// aspect pair and translated to the center.
pub fn base_ring<T: Scalar>(params: &InstanceParams<T>) -> Ring<T> {
    base_ring_with(params, &params.directions())
}

fn base_ring_with<T: Scalar>(params: &InstanceParams<T>, dirs: &[Vec2<T>]) -> Ring<T> {
    let r = params.base_radius;
    let c = params.center;
    let mut ring: Ring<T> = dirs
        .iter()
        .map(|d| {
            Vec2::new(
                r * params.aspect.x * d.x + c.x,
                r * params.aspect.y * d.y + c.y,
            )
        })
        .collect();
    close(&mut ring);
    ring
}

/// Ring `ring_index` (1-based, ≥ 2) grown from `prev`: each vertex moves
/// outward along its base direction by `lw + λ·ε` per axis.
pub fn expand_ring<T: Scalar>(
    prev: &[Vec2<T>],
    params: &InstanceParams<T>,
    ring_index: usize,
    noise: &PerlinNoise1D,
) -> Ring<T> {
    expand_ring_with(prev, params, ring_index, noise, &params.directions())
}

fn expand_ring_with<T: Scalar>(
    prev: &[Vec2<T>],
    params: &InstanceParams<T>,
    ring_index: usize,
    noise: &PerlinNoise1D,
    dirs: &[Vec2<T>],
) -> Ring<T> {
    debug_assert!(ring_index >= 2);
    let n = params.num_vertices as usize;
    debug_assert_eq!(prev.len(), n + 1);
    let lw = params.line_width;
    let lambda = params.noise_scale;
    let mut ring: Ring<T> = prev
        .iter()
        .zip(dirs)
        .enumerate()
        .map(|(j, (v, d))| {
            let eps: T = noise.ring_epsilon(j, ring_index, n);
            Vec2::new(
                v.x + (lw + lambda.x * eps) * d.x,
                v.y + (lw + lambda.y * eps) * d.y,
            )
        })
        .collect();
    close(&mut ring);
    ring
}

// v_n := v_0, bit-exact.
fn close<T: Copy>(ring: &mut [Vec2<T>]) {
    if let Some(&first) = ring.first() {
        if let Some(last) = ring.last_mut() {
            *last = first;
        }
    }
}

/// All `N` rings of an instance, innermost first.
pub fn build_contour<T: Scalar>(params: &InstanceParams<T>, noise: &PerlinNoise1D) -> ContourShape<T> {
    let dirs = params.directions();
    let mut rings = Vec::with_capacity(params.num_rings as usize);
    rings.push(base_ring_with(params, &dirs));
    for p in 2..=params.num_rings as usize {
        let next = expand_ring_with(&rings[p - 2], params, p, noise, &dirs);
        rings.push(next);
    }
    ContourShape { rings }
}
