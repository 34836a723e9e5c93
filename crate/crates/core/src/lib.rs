//! Synthetic instance-segmentation data from formula-driven contour shapes.
//!
//! Each image holds up to `K` instances. An instance is a stack of nested
//! rings grown outward from a regular polygon with Perlin-perturbed radial
//! steps; its annotated region is the band between the outermost and
//! innermost ring, minus whatever later instances cover. The crate samples
//! scenes, renders them, resolves occlusion exactly on pixel masks and
//! writes COCO-format datasets.
//!
//! Geometry and rasterization are generic over [`Scalar`] (`f32`/`f64`);
//! the dataset pipeline runs in `f64` through the aliases below.

pub mod annotate;
pub mod config;
pub mod dataset;
pub mod geometry;
pub mod perlin;
pub mod raster;
pub mod rng;
pub mod sampler;
pub mod scalar;
pub mod scene;
pub mod validate;

pub use config::{GenConfig, IntRange, LabelMode, RealRange};
pub use geometry::{base_ring, build_contour, expand_ring, ContourShape as GenericContour, InstanceParams as GenericParams, Vec2};
pub use perlin::PerlinNoise1D;
pub use raster::{MaskRaster, RasterError};
pub use rng::{derive_stream, SeedTree, Stream};
pub use sampler::{sample_scene, SceneInstance, SceneSpec};
pub use scalar::Scalar;

pub type Point = geometry::Vec2<f64>;
pub type Ring = geometry::Ring<f64>;
pub type InstanceParams = geometry::InstanceParams<f64>;
pub type ContourShape = geometry::ContourShape<f64>;

pub type Point32 = geometry::Vec2<f32>;
pub type InstanceParams32 = geometry::InstanceParams<f32>;
pub type ContourShape32 = geometry::ContourShape<f32>;
