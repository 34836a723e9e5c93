use std::collections::BTreeMap;
use std::path::Path;

use hollowshape::dataset::{load_annotations, DatasetError};
use serde::Serialize;

use super::exit_code;
use crate::EXIT_OK;

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct AreaSummary {
    pub min: u64,
    pub max: u64,
    pub mean: f64,
    pub p10: u64,
    pub p50: u64,
    pub p90: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct DatasetStats {
    pub image_count: u64,
    pub annotation_count: u64,
    /// Drawn instances per image → number of images.
    pub instances_per_image: BTreeMap<u32, u64>,
    /// Annotated (visible) instances per image → number of images.
    pub annotations_per_image: BTreeMap<u64, u64>,
    pub area: AreaSummary,
    /// Share of drawn instances that are partly or fully hidden.
    pub occluded_fraction: f64,
    pub class_histogram: BTreeMap<u32, u64>,
}

fn percentile(sorted: &[u64], q: f64) -> u64 {
    if sorted.is_empty() {
        return 0;
    }
    let idx = ((sorted.len() - 1) as f64 * q).round() as usize;
    sorted[idx]
}

pub fn compute(root: &Path) -> Result<DatasetStats, DatasetError> {
    let coco = load_annotations(root)?;
    let mut stats = DatasetStats {
        image_count: coco.images.len() as u64,
        annotation_count: coco.annotations.len() as u64,
        ..DatasetStats::default()
    };

    let mut per_image: BTreeMap<u64, u64> = coco.images.iter().map(|i| (i.id, 0)).collect();
    let mut areas = Vec::with_capacity(coco.annotations.len());
    let mut occluded_visible = 0u64;
    for ann in &coco.annotations {
        *per_image.entry(ann.image_id).or_default() += 1;
        *stats.class_histogram.entry(ann.category_id).or_default() += 1;
        areas.push(ann.area as u64);
        if ann.occluded == Some(true) {
            occluded_visible += 1;
        }
    }
    for n in per_image.values() {
        *stats.annotations_per_image.entry(*n).or_default() += 1;
    }

    let mut drawn = 0u64;
    for img in &coco.images {
        let k = img.num_instances.unwrap_or(per_image[&img.id] as u32);
        *stats.instances_per_image.entry(k).or_default() += 1;
        drawn += u64::from(k);
    }
    let hidden = drawn.saturating_sub(stats.annotation_count);
    if drawn > 0 {
        stats.occluded_fraction = (occluded_visible + hidden) as f64 / drawn as f64;
    }

    areas.sort_unstable();
    if !areas.is_empty() {
        stats.area = AreaSummary {
            min: areas[0],
            max: areas[areas.len() - 1],
            mean: areas.iter().sum::<u64>() as f64 / areas.len() as f64,
            p10: percentile(&areas, 0.1),
            p50: percentile(&areas, 0.5),
            p90: percentile(&areas, 0.9),
        };
    }
    Ok(stats)
}

pub fn run(root: &Path) -> u8 {
    match compute(root) {
        Ok(stats) => {
            super::emit(&serde_json::to_string_pretty(&stats).expect("stats serialize"));
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
