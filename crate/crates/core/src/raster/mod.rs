//! Rasterization: polygon fill, strokes, shell masks and occlusion.

pub mod canvas;
pub mod fill;
mod mask;
pub mod stroke;
pub mod visibility;

pub use canvas::CanvasImage;
pub use fill::{fill_polygon, fill_polygon_into};
pub use mask::{MaskRaster, RasterError};
pub use stroke::{stroke_ring, stroke_ring_into, stroke_segment_into};
pub use visibility::{
    build_label_map, hollow_mask, resolve_visibility, shell_masks, InstanceMasks, LabelMap,
};
