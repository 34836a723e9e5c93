//! COCO-style annotation records, RLE encoding and the mask-offset ablation.

pub mod coco;
pub mod offset;
pub mod record;
pub mod rle;

pub use offset::offset_annotation;
pub use record::{emit_record, AnnotationRecord};
pub use rle::{encode_rle, Rle, RleError};
