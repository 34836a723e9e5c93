//! Rendering one sampled scene into an image, masks and annotations.

use crate::annotate::offset::offset_annotation;
use crate::annotate::record::{emit_record, AnnotationRecord};
use crate::config::GenConfig;
use crate::geometry::{build_contour, ContourShape};
use crate::raster::{
    build_label_map, resolve_visibility, shell_masks, CanvasImage, InstanceMasks, LabelMap, MaskRaster,
    RasterError,
};
use crate::sampler::SceneSpec;

/// Masks of a scene, without the image.
#[derive(Debug, Clone)]
pub struct SceneMasks {
    pub shells: Vec<InstanceMasks>,
    /// Visible region of each instance, back to front.
    pub visible: Vec<MaskRaster>,
    pub labels: LabelMap,
}

#[derive(Debug, Clone)]
pub struct RenderedScene {
    pub image: CanvasImage,
    pub masks: SceneMasks,
}

pub fn build_shapes(scene: &SceneSpec) -> Vec<ContourShape<f64>> {
    scene
        .instances
        .iter()
        .map(|inst| build_contour(&inst.params, &inst.noise))
        .collect()
}

fn masks_for(config: &GenConfig, scene: &SceneSpec, shapes: &[ContourShape<f64>]) -> Result<SceneMasks, RasterError> {
    let shells: Vec<InstanceMasks> = shapes
        .iter()
        .zip(&scene.instances)
        .map(|(shape, inst)| shell_masks(shape, inst.params.line_width, config.width, config.height))
        .collect();
    let hollow: Vec<MaskRaster> = shells.iter().map(|s| s.hollow.clone()).collect();
    let outer: Vec<MaskRaster> = shells.iter().map(|s| s.outer.clone()).collect();
    let visible = resolve_visibility(&hollow, &outer)?;
    let categories: Vec<u32> = scene.instances.iter().map(|i| i.params.category).collect();
    let labels = build_label_map(&visible, &categories)?;
    Ok(SceneMasks {
        shells,
        visible,
        labels,
    })
}

/// Shell, visibility and label masks of `scene`.
pub fn render_masks(config: &GenConfig, scene: &SceneSpec) -> Result<SceneMasks, RasterError> {
    masks_for(config, scene, &build_shapes(scene))
}

/// Draws every instance back to front and computes its masks.
pub fn render_scene(config: &GenConfig, scene: &SceneSpec) -> Result<RenderedScene, RasterError> {
    let shapes = build_shapes(scene);
    let mut image = CanvasImage::new(config.width, config.height);
    for (shape, inst) in shapes.iter().zip(&scene.instances) {
        image.draw_polylines(shape, inst.params.line_width, config.antialias);
    }
    let masks = masks_for(config, scene, &shapes)?;
    Ok(RenderedScene { image, masks })
}

/// Annotation records for the visible instances of a rendered scene, in
/// slot order, with the configured mask offset applied. Fully hidden
/// instances yield no record.
pub fn annotate_scene(
    config: &GenConfig,
    scene: &SceneSpec,
    masks: &SceneMasks,
    image_id: u64,
) -> Vec<AnnotationRecord> {
    scene
        .instances
        .iter()
        .zip(masks.visible.iter().zip(&masks.shells))
        .enumerate()
        .filter_map(|(k, (inst, (visible, shell)))| {
            let occluded = visible != &shell.hollow;
            let shifted = offset_annotation(visible, config.mask_offset, inst.offset_direction);
            emit_record(k as u32 + 1, &shifted, inst.params.category, image_id, occluded)
        })
        .collect()
}

/// IoU of the outer shells of every instance pair `(i, j)`, `i < j`.
/// Pairs whose shells are both empty are skipped.
pub fn shell_overlaps(shells: &[InstanceMasks]) -> Vec<f64> {
    let mut out = Vec::new();
    for (i, a) in shells.iter().enumerate() {
        for b in &shells[i + 1..] {
            if let Some(iou) = a.outer.iou(&b.outer) {
                out.push(iou);
            }
        }
    }
    out
}
