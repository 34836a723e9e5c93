//! COCO instance-segmentation file schema.

use serde::{Deserialize, Serialize};

use crate::annotate::record::AnnotationRecord;
use crate::annotate::rle::{Rle, RleError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocoImage {
    pub id: u64,
    pub file_name: String,
    pub width: u32,
    pub height: u32,
    /// Instances drawn in the image, including fully hidden ones.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub num_instances: Option<u32>,
}

/// Compressed RLE segmentation; `size` is `[height, width]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocoRle {
    pub size: [u32; 2],
    pub counts: String,
}

impl CocoRle {
    pub fn from_rle(rle: &Rle) -> Self {
        Self {
            size: [rle.height, rle.width],
            counts: rle.to_compressed(),
        }
    }

    pub fn to_rle(&self) -> Result<Rle, RleError> {
        Rle::from_compressed(self.size[0], self.size[1], &self.counts)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CocoAnnotation {
    pub id: u64,
    pub image_id: u64,
    pub category_id: u32,
    pub segmentation: CocoRle,
    pub area: f64,
    pub bbox: [f64; 4],
    pub iscrowd: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub occluded: Option<bool>,
}

impl CocoAnnotation {
    pub fn from_record(r: &AnnotationRecord) -> Self {
        Self {
            id: r.id,
            image_id: r.image_id,
            category_id: r.category_id,
            segmentation: CocoRle::from_rle(&r.segmentation),
            area: r.area as f64,
            bbox: r.bbox.map(f64::from),
            iscrowd: 0,
            occluded: Some(r.occluded),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocoCategory {
    pub id: u32,
    pub name: String,
}

/// Categories `1..=classes` named `class_0001`, `class_0002`, ...
pub fn categories(classes: u32) -> Vec<CocoCategory> {
    (1..=classes)
        .map(|id| CocoCategory {
            id,
            name: format!("class_{id:04}"),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CocoFile {
    pub images: Vec<CocoImage>,
    pub annotations: Vec<CocoAnnotation>,
    pub categories: Vec<CocoCategory>,
}
