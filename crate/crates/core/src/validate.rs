//! Integrity checks over a dataset on disk.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::annotate::coco::CocoFile;
use crate::annotate::rle::encode_rle;
use crate::dataset::{
    combined_digest, io_err, png_dimensions, DatasetError, DatasetManifest, ANNOTATION_FILE, IMAGE_DIR,
    MANIFEST_FILE,
};
use crate::raster::MaskRaster;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub invariant: &'static str,
    pub image_id: Option<u64>,
    pub annotation_id: Option<u64>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.invariant)?;
        if let Some(id) = self.image_id {
            write!(f, " image {id}")?;
        }
        if let Some(id) = self.annotation_id {
            write!(f, " annotation {id}")?;
        }
        write!(f, ": {}", self.detail)
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ValidationReport {
    pub images_checked: u64,
    pub annotations_checked: u64,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, invariant: &'static str, image_id: Option<u64>, annotation_id: Option<u64>, detail: impl Into<String>) {
        self.violations.push(Violation {
            invariant,
            image_id,
            annotation_id,
            detail: detail.into(),
        });
    }
}

/// Runs every dataset invariant. I/O failures on the annotation file are
/// errors; everything else is collected as violations.
pub fn validate_dataset(root: &Path) -> Result<ValidationReport, DatasetError> {
    let mut report = ValidationReport::default();
    let ann_path = root.join(ANNOTATION_FILE);
    let ann_bytes = fs::read(&ann_path).map_err(io_err(&ann_path))?;

    let manifest = if root.join(MANIFEST_FILE).exists() {
        match DatasetManifest::load(root) {
            Ok(m) => Some(m),
            Err(e) => {
                report.push("manifest", None, None, e.to_string());
                None
            }
        }
    } else {
        report.push("manifest", None, None, "manifest.json is missing");
        None
    };

    if let Some(m) = &manifest {
        if !m.complete {
            report.push("manifest", None, None, "dataset was not completely written");
        }
        let digest = crate::dataset::sha256_hex(&ann_bytes);
        if digest != m.annotation_digest {
            report.push(
                "annotation-digest",
                None,
                None,
                format!("{ANNOTATION_FILE} has digest {digest}, manifest records {}", m.annotation_digest),
            );
        }
    }

    let coco: CocoFile = match serde_json::from_slice(&ann_bytes) {
        Ok(c) => c,
        Err(e) => {
            report.push("annotation-json", None, None, format!("{ANNOTATION_FILE}: {e}"));
            return Ok(report);
        }
    };
    check_coco(root, &coco, manifest.as_ref(), &mut report);
    Ok(report)
}

fn check_coco(root: &Path, coco: &CocoFile, manifest: Option<&DatasetManifest>, report: &mut ValidationReport) {
    let mut images: BTreeMap<u64, (u32, u32)> = BTreeMap::new();
    let mut file_digests: Vec<[u8; 32]> = Vec::with_capacity(coco.images.len());
    let mut digests_ok = true;
    for img in &coco.images {
        report.images_checked += 1;
        if images.insert(img.id, (img.width, img.height)).is_some() {
            report.push("unique-image-id", Some(img.id), None, "duplicate image id");
        }
        if let Some(m) = manifest {
            if (img.width, img.height) != (m.config.width, m.config.height) {
                report.push(
                    "image-size",
                    Some(img.id),
                    None,
                    format!("{}x{} differs from configured {}x{}", img.width, img.height, m.config.width, m.config.height),
                );
            }
        }
        let path = root.join(IMAGE_DIR).join(&img.file_name);
        match fs::read(&path) {
            Ok(bytes) => {
                use sha2::Digest;
                file_digests.push(sha2::Sha256::digest(&bytes).into());
                match png_dimensions(&path) {
                    Ok(dims) if dims == (img.width, img.height) => {}
                    Ok((w, h)) => report.push(
                        "image-size",
                        Some(img.id),
                        None,
                        format!("{} is {w}x{h}, annotation says {}x{}", img.file_name, img.width, img.height),
                    ),
                    Err(e) => report.push("image-file", Some(img.id), None, e.to_string()),
                }
            }
            Err(e) => {
                digests_ok = false;
                report.push("image-file", Some(img.id), None, format!("{}: {e}", path.display()));
            }
        }
    }

    if let Some(m) = manifest {
        if m.image_count != coco.images.len() as u64 {
            report.push(
                "image-count",
                None,
                None,
                format!("manifest lists {} images, annotation file {}", m.image_count, coco.images.len()),
            );
        }
        if digests_ok && combined_digest(&file_digests) != m.image_digest {
            report.push("image-digest", None, None, "image files do not match the manifest digest");
        }
    }

    let mut category_ids = BTreeSet::new();
    for c in &coco.categories {
        if !category_ids.insert(c.id) {
            report.push("unique-category-id", None, None, format!("duplicate category {}", c.id));
        }
    }
    if let Some(m) = manifest {
        let expected: BTreeSet<u32> = (1..=m.config.classes).collect();
        if category_ids != expected {
            report.push("categories", None, None, format!("expected categories 1..={}", m.config.classes));
        }
    }

    // Disjointness only holds for uncorrupted annotations.
    let check_disjoint = manifest.is_none_or(|m| m.config.mask_offset == 0);
    let mut coverage: BTreeMap<u64, MaskRaster> = BTreeMap::new();
    let mut ann_ids = BTreeSet::new();
    for ann in &coco.annotations {
        report.annotations_checked += 1;
        let (img, aid) = (Some(ann.image_id), Some(ann.id));
        if !ann_ids.insert(ann.id) {
            report.push("unique-annotation-id", img, aid, "duplicate annotation id");
        }
        let Some(&(w, h)) = images.get(&ann.image_id) else {
            report.push("image-reference", img, aid, "image_id does not exist");
            continue;
        };
        if !category_ids.contains(&ann.category_id) {
            report.push("category-reference", img, aid, format!("unknown category {}", ann.category_id));
        }
        if ann.iscrowd != 0 {
            report.push("iscrowd", img, aid, "iscrowd must be 0");
        }
        if ann.segmentation.size != [h, w] {
            report.push(
                "rle-size",
                img,
                aid,
                format!("size {:?} does not match image [{h}, {w}]", ann.segmentation.size),
            );
            continue;
        }
        let rle = match ann.segmentation.to_rle() {
            Ok(r) => r,
            Err(e) => {
                report.push("rle-decode", img, aid, e.to_string());
                continue;
            }
        };
        let mask = match rle.decode() {
            Ok(m) => m,
            Err(e) => {
                report.push("rle-decode", img, aid, e.to_string());
                continue;
            }
        };
        if encode_rle(&mask).to_compressed() != ann.segmentation.counts {
            report.push("rle-round-trip", img, aid, "re-encoding the decoded mask gives different counts");
        }
        let area = mask.count();
        if area == 0 {
            report.push("area", img, aid, "empty segmentation");
        }
        if ann.area != area as f64 {
            report.push("area", img, aid, format!("area {} but mask has {area} pixels", ann.area));
        }
        if let Some((x, y, bw, bh)) = mask.bbox() {
            let tight = [x, y, bw, bh].map(f64::from);
            if ann.bbox != tight {
                report.push("bbox", img, aid, format!("bbox {:?}, tight box is {tight:?}", ann.bbox));
            }
        }
        let [bx, by, bw, bh] = ann.bbox;
        if bx < 0.0 || by < 0.0 || bx + bw > f64::from(w) || by + bh > f64::from(h) {
            report.push("bbox-bounds", img, aid, format!("bbox {:?} leaves the image", ann.bbox));
        }
        if check_disjoint {
            let acc = coverage.entry(ann.image_id).or_insert_with(|| MaskRaster::new(w, h));
            let overlap = acc.intersection_count(&mask);
            if overlap > 0 {
                report.push(
                    "disjointness",
                    img,
                    aid,
                    format!("{overlap} pixels overlap earlier annotations of the same image"),
                );
            }
            acc.union_with(&mask);
        }
    }
}
