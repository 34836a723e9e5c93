//! Per-image scene sampling.

use serde::{Deserialize, Serialize};

use crate::config::{GenConfig, LabelMode, RealRange, NOISE_TO_LINE_WIDTH};
use crate::geometry::{InstanceParams, Vec2};
use crate::perlin::PerlinNoise1D;
use crate::rng::{SeedTree, Stream};

/// One sampled instance: shape parameters plus the per-instance random
/// state used at render and annotation time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneInstance {
    pub params: InstanceParams<f64>,
    pub noise: PerlinNoise1D,
    /// Unit direction of the annotation shift.
    pub offset_direction: Vec2<f64>,
}

/// Instances of one image, back (index 0) to front.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneSpec {
    pub image_index: u64,
    pub instances: Vec<SceneInstance>,
}

/// Radius bounds after the occlusion-rate multiplier.
pub fn apply_occlusion_rate(config: &GenConfig) -> RealRange {
    let base = config.radius_range();
    if config.occlusion_rate == 100.0 {
        base
    } else {
        base.scaled(config.occlusion_rate / 100.0)
    }
}

const BINS: u32 = 16;

fn bin(v: u32, lo: u32, hi: u32) -> u32 {
    let span = u64::from(hi - lo) + 1;
    ((u64::from(v - lo) * u64::from(BINS) / span) as u32).min(BINS - 1)
}

/// Category for an instance with `num_vertices` and `num_rings`.
///
/// Uniform mode draws from `stream`; param-binned mode maps the
/// (vertex-count, ring-count) cell of a 16×16 grid onto `1..=classes`.
pub fn assign_category(num_vertices: u32, num_rings: u32, config: &GenConfig, stream: &mut Stream) -> u32 {
    match config.label_mode {
        LabelMode::Uniform => stream.int_inclusive(1, config.classes),
        LabelMode::ParamBinned => {
            let bn = bin(num_vertices, config.vertices.min, config.vertices.max);
            let br = bin(num_rings, config.rings.min, config.rings.max);
            let cell = u64::from(bn * BINS + br);
            1 + (cell * u64::from(config.classes) / u64::from(BINS * BINS)) as u32
        }
    }
}

/// Number of instances for image `image_index`.
pub fn sample_instance_count(config: &GenConfig, image: &SeedTree) -> u32 {
    image.child("count", 0).stream().int_inclusive(1, config.max_instances)
}

fn sample_instance(config: &GenConfig, node: &SeedTree, depth: u32) -> SceneInstance {
    let mut s = node.child("params", 0).stream();
    let radius = apply_occlusion_rate(config);
    let num_rings = s.int_inclusive(config.rings.min, config.rings.max);
    let num_vertices = s.int_inclusive(config.vertices.min, config.vertices.max);
    let base_radius = s.real(radius.min, radius.max);
    let line_width = s.real(config.line_width.min, config.line_width.max);
    let aspect = Vec2::new(
        s.real(config.aspect.min, config.aspect.max),
        s.real(config.aspect.min, config.aspect.max),
    );
    let noise_hi = config.noise_scale.max.min(NOISE_TO_LINE_WIDTH * line_width);
    let noise_lo = config.noise_scale.min.min(noise_hi);
    let noise_scale = Vec2::new(s.real(noise_lo, noise_hi), s.real(noise_lo, noise_hi));
    let center = Vec2::new(
        s.real_below(f64::from(config.width)),
        s.real_below(f64::from(config.height)),
    );
    let category = assign_category(num_vertices, num_rings, config, &mut s);
    let angle = node.child("offset", 0).stream().angle();
    SceneInstance {
        params: InstanceParams {
            num_rings,
            num_vertices,
            base_radius,
            line_width,
            aspect,
            noise_scale,
            center,
            category,
            depth,
        },
        noise: PerlinNoise1D::from_tree(&node.child("noise", 0)),
        offset_direction: Vec2::new(angle.cos(), angle.sin()),
    }
}

/// Samples image `image_index`. A pure function of the config, the index
/// and the seed tree.
pub fn sample_scene(config: &GenConfig, image_index: u64, tree: &SeedTree) -> SceneSpec {
    let image = tree.child("image", image_index);
    let k = sample_instance_count(config, &image);
    let instances = (0..k)
        .map(|i| sample_instance(config, &image.child("instance", u64::from(i)), i + 1))
        .collect();
    SceneSpec {
        image_index,
        instances,
    }
}
