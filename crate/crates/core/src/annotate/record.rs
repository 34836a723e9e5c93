use serde::{Deserialize, Serialize};

use crate::annotate::rle::{encode_rle, Rle};
use crate::raster::MaskRaster;

/// One instance annotation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationRecord {
    /// Assigned when the dataset is assembled; 0 until then.
    pub id: u64,
    pub image_id: u64,
    pub category_id: u32,
    /// 1-based render slot of the instance within its image.
    pub slot: u32,
    pub segmentation: Rle,
    /// Tight box `[x, y, width, height]`.
    pub bbox: [u32; 4],
    pub area: u64,
    /// Whether part of the instance's hollow region is hidden by later instances.
    pub occluded: bool,
}

/// Record for the visible mask of instance `slot`, or `None` when nothing
/// of it is visible.
pub fn emit_record(
    slot: u32,
    visible: &MaskRaster,
    category_id: u32,
    image_id: u64,
    occluded: bool,
) -> Option<AnnotationRecord> {
    let (x, y, w, h) = visible.bbox()?;
    let segmentation = encode_rle(visible);
    Some(AnnotationRecord {
        id: 0,
        image_id,
        category_id,
        slot,
        area: segmentation.area(),
        segmentation,
        bbox: [x, y, w, h],
        occluded,
    })
}
