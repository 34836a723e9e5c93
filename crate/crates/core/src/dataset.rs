//! Writing and reading generated datasets.
//!
//! Layout under the output directory:
//!
//! ```text
//! manifest.json
//! annotations/train.json
//! images/000000.png, 000001.png, ...
//! ```

use std::fs::{self, File};
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::annotate::coco::{categories, CocoAnnotation, CocoFile, CocoImage};
use crate::annotate::record::AnnotationRecord;
use crate::config::{ConfigError, GenConfig};
use crate::raster::{CanvasImage, RasterError};
use crate::rng::SeedTree;
use crate::sampler::sample_scene;
use crate::scene::{annotate_scene, render_scene};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const ANNOTATION_FILE: &str = "annotations/train.json";
pub const IMAGE_DIR: &str = "images";
pub const SPLIT: &str = "train";
pub const GENERATOR: &str = concat!("hollowshape ", env!("CARGO_PKG_VERSION"));

/// Images rendered in parallel before their annotations are flushed.
const CHUNK: u64 = 256;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: invalid JSON: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: PNG error: {message}")]
    Png { path: PathBuf, message: String },
    #[error("image {index}: {source}")]
    Raster {
        index: u64,
        #[source]
        source: RasterError,
    },
    #[error("cannot start worker pool: {0}")]
    Pool(String),
}

impl DatasetError {
    pub fn is_io(&self) -> bool {
        matches!(self, Self::Io { .. } | Self::Png { .. })
    }
}

pub(crate) fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> DatasetError + '_ {
    move |source| DatasetError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitFiles {
    pub annotation_file: String,
    pub images: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub generator: String,
    /// False while writing, and left false if generation fails.
    pub complete: bool,
    pub seed: u64,
    pub image_count: u64,
    pub config: GenConfig,
    pub splits: std::collections::BTreeMap<String, SplitFiles>,
    /// `sha256:` digest of the annotation file bytes.
    pub annotation_digest: String,
    /// `sha256:` digest over the per-image file digests, in image order.
    pub image_digest: String,
    pub notes: Vec<String>,
}

impl DatasetManifest {
    pub fn load(root: &Path) -> Result<Self, DatasetError> {
        let path = root.join(MANIFEST_FILE);
        let text = fs::read(&path).map_err(io_err(&path))?;
        serde_json::from_slice(&text).map_err(|source| DatasetError::Json { path, source })
    }

    fn write(&self, root: &Path) -> Result<(), DatasetError> {
        let path = root.join(MANIFEST_FILE);
        let mut bytes = serde_json::to_vec_pretty(self).expect("manifest serializes");
        bytes.push(b'\n');
        fs::write(&path, bytes).map_err(io_err(&path))
    }
}

pub fn image_file_name(index: u64) -> String {
    format!("{index:06}.png")
}

/// Image ids are 1-based: image index `i` has id `i + 1`.
pub fn image_id(index: u64) -> u64 {
    index + 1
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

/// Combined digest of an ordered sequence of per-file digests.
pub fn combined_digest<'a>(digests: impl IntoIterator<Item = &'a [u8; 32]>) -> String {
    let mut h = Sha256::new();
    for d in digests {
        h.update(d);
    }
    format!("sha256:{}", hex::encode(h.finalize()))
}

pub fn encode_png(image: &CanvasImage) -> Result<Vec<u8>, png::EncodingError> {
    let mut out = Vec::new();
    {
        let mut enc = png::Encoder::new(&mut out, image.width(), image.height());
        enc.set_color(png::ColorType::Rgb);
        enc.set_depth(png::BitDepth::Eight);
        let mut w = enc.write_header()?;
        w.write_image_data(image.as_rgb())?;
        w.finish()?;
    }
    Ok(out)
}

pub fn decode_png(path: &Path) -> Result<CanvasImage, DatasetError> {
    let png_err = |e: png::DecodingError| DatasetError::Png {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    let file = File::open(path).map_err(io_err(path))?;
    let mut decoder = png::Decoder::new(std::io::BufReader::new(file));
    decoder.set_transformations(png::Transformations::EXPAND | png::Transformations::STRIP_16);
    let mut reader = decoder.read_info().map_err(png_err)?;
    let mut buf = vec![0; reader.output_buffer_size()];
    let info = reader.next_frame(&mut buf).map_err(png_err)?;
    buf.truncate(info.buffer_size());
    let rgb = match info.color_type {
        png::ColorType::Rgb => buf,
        png::ColorType::Rgba => buf.chunks_exact(4).flat_map(|p| [p[0], p[1], p[2]]).collect(),
        png::ColorType::Grayscale => buf.iter().flat_map(|&v| [v, v, v]).collect(),
        png::ColorType::GrayscaleAlpha => buf.chunks_exact(2).flat_map(|p| [p[0]; 3]).collect(),
        png::ColorType::Indexed => {
            return Err(DatasetError::Png {
                path: path.to_path_buf(),
                message: "unexpanded palette image".into(),
            })
        }
    };
    CanvasImage::from_rgb(info.width, info.height, rgb).ok_or_else(|| DatasetError::Png {
        path: path.to_path_buf(),
        message: "unexpected buffer size".into(),
    })
}

/// Width and height from a PNG header.
pub fn png_dimensions(path: &Path) -> Result<(u32, u32), DatasetError> {
    let file = File::open(path).map_err(io_err(path))?;
    let reader = png::Decoder::new(std::io::BufReader::new(file))
        .read_info()
        .map_err(|e| DatasetError::Png {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
    let info = reader.info();
    Ok((info.width, info.height))
}

struct ImageOutput {
    num_instances: u32,
    records: Vec<AnnotationRecord>,
    digest: [u8; 32],
}

/// Samples, renders and annotates image `index`, writing its PNG under `image_dir`.
fn produce_image(
    config: &GenConfig,
    tree: &SeedTree,
    index: u64,
    image_dir: &Path,
) -> Result<ImageOutput, DatasetError> {
    let scene = sample_scene(config, index, tree);
    let rendered = render_scene(config, &scene).map_err(|source| DatasetError::Raster { index, source })?;
    let records = annotate_scene(config, &scene, &rendered.masks, image_id(index));
    let path = image_dir.join(image_file_name(index));
    let bytes = encode_png(&rendered.image).map_err(|e| DatasetError::Png {
        path: path.clone(),
        message: e.to_string(),
    })?;
    fs::write(&path, &bytes).map_err(io_err(&path))?;
    Ok(ImageOutput {
        num_instances: scene.instances.len() as u32,
        records,
        digest: Sha256::digest(&bytes).into(),
    })
}

/// Options for [`generate_dataset`].
#[derive(Debug, Clone)]
pub struct GenerateOptions {
    pub count: u64,
    pub workers: usize,
}

/// Generates `count` images with `config` into `out_dir`.
///
/// Output bytes depend only on the config (including its seed) and the count,
/// not on `workers`. `progress` is called with the number of finished images.
pub fn generate_dataset(
    config: &GenConfig,
    options: &GenerateOptions,
    out_dir: &Path,
    progress: &(dyn Fn(u64, u64) + Sync),
) -> Result<DatasetManifest, DatasetError> {
    let config = config.resolved()?;
    let image_dir = out_dir.join(IMAGE_DIR);
    let ann_path = out_dir.join(ANNOTATION_FILE);
    fs::create_dir_all(&image_dir).map_err(io_err(&image_dir))?;
    let ann_dir = ann_path.parent().expect("annotation path has a parent");
    fs::create_dir_all(ann_dir).map_err(io_err(ann_dir))?;

    let mut manifest = DatasetManifest {
        generator: GENERATOR.to_string(),
        complete: false,
        seed: config.seed,
        image_count: options.count,
        config: config.clone(),
        splits: [(
            SPLIT.to_string(),
            SplitFiles {
                annotation_file: ANNOTATION_FILE.to_string(),
                images: (0..options.count)
                    .map(|i| format!("{IMAGE_DIR}/{}", image_file_name(i)))
                    .collect(),
            },
        )]
        .into(),
        annotation_digest: String::new(),
        image_digest: String::new(),
        notes: vec![
            "instances are ordered back to front; annotations list visible pixels only".into(),
            "fully hidden instances are drawn but have no annotation".into(),
            format!(
                "mask_offset shifts every annotation by {} px in a per-instance random direction; images are not shifted",
                config.mask_offset
            ),
            "occlusion_rate scales the base radius range".into(),
        ],
    };
    manifest.write(out_dir)?;

    let result = write_contents(&config, options, out_dir, &image_dir, &ann_path, progress);
    match result {
        Ok((annotation_digest, image_digest)) => {
            manifest.annotation_digest = annotation_digest;
            manifest.image_digest = image_digest;
            manifest.complete = true;
            manifest.write(out_dir)?;
            Ok(manifest)
        }
        Err(e) => {
            // Leave an explicitly incomplete manifest behind.
            let _ = manifest.write(out_dir);
            Err(e)
        }
    }
}

fn write_contents(
    config: &GenConfig,
    options: &GenerateOptions,
    out_dir: &Path,
    image_dir: &Path,
    ann_path: &Path,
    progress: &(dyn Fn(u64, u64) + Sync),
) -> Result<(String, String), DatasetError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.workers.max(1))
        .build()
        .map_err(|e| DatasetError::Pool(e.to_string()))?;
    let tree = SeedTree::new(config.seed);

    // Annotations are staged while images are produced; the images array
    // must precede them in the final file.
    let staged_path = out_dir.join("annotations/.train.annotations.partial");
    let staged = File::create(&staged_path).map_err(io_err(&staged_path))?;
    let mut staged = BufWriter::new(staged);
    let mut images: Vec<CocoImage> = Vec::with_capacity(options.count as usize);
    let mut digests: Vec<[u8; 32]> = Vec::with_capacity(options.count as usize);
    let mut next_id = 1u64;
    let mut first = true;

    let mut start = 0u64;
    while start < options.count {
        let end = (start + CHUNK).min(options.count);
        let outputs: Vec<Result<ImageOutput, DatasetError>> = pool.install(|| {
            (start..end)
                .into_par_iter()
                .map(|i| produce_image(config, &tree, i, image_dir))
                .collect()
        });
        for (offset, out) in outputs.into_iter().enumerate() {
            let index = start + offset as u64;
            let out = out?;
            images.push(CocoImage {
                id: image_id(index),
                file_name: image_file_name(index),
                width: config.width,
                height: config.height,
                num_instances: Some(out.num_instances),
            });
            digests.push(out.digest);
            for mut record in out.records {
                record.id = next_id;
                next_id += 1;
                if !first {
                    staged.write_all(b",").map_err(io_err(&staged_path))?;
                }
                first = false;
                serde_json::to_writer(&mut staged, &CocoAnnotation::from_record(&record))
                    .map_err(|source| DatasetError::Json {
                        path: staged_path.clone(),
                        source,
                    })?;
            }
        }
        progress(end, options.count);
        start = end;
    }
    staged.flush().map_err(io_err(&staged_path))?;
    drop(staged);

    let file = File::create(ann_path).map_err(io_err(ann_path))?;
    let mut out = BufWriter::new(file);
    let json_err = |source| DatasetError::Json {
        path: ann_path.to_path_buf(),
        source,
    };
    out.write_all(b"{\"images\":").map_err(io_err(ann_path))?;
    serde_json::to_writer(&mut out, &images).map_err(json_err)?;
    out.write_all(b",\"annotations\":[").map_err(io_err(ann_path))?;
    let mut staged = File::open(&staged_path).map_err(io_err(&staged_path))?;
    std::io::copy(&mut staged, &mut out).map_err(io_err(ann_path))?;
    out.write_all(b"],\"categories\":").map_err(io_err(ann_path))?;
    serde_json::to_writer(&mut out, &categories(config.classes)).map_err(json_err)?;
    out.write_all(b"}\n").map_err(io_err(ann_path))?;
    out.flush().map_err(io_err(ann_path))?;
    drop(out);
    fs::remove_file(&staged_path).map_err(io_err(&staged_path))?;

    let annotation_digest = file_digest(ann_path)?;
    Ok((annotation_digest, combined_digest(&digests)))
}

pub fn file_digest(path: &Path) -> Result<String, DatasetError> {
    let mut f = File::open(path).map_err(io_err(path))?;
    let mut h = Sha256::new();
    let mut buf = vec![0u8; 1 << 16];
    loop {
        let n = f.read(&mut buf).map_err(io_err(path))?;
        if n == 0 {
            break;
        }
        h.update(&buf[..n]);
    }
    Ok(format!("sha256:{}", hex::encode(h.finalize())))
}

/// Parsed annotation file of a dataset.
pub fn load_annotations(root: &Path) -> Result<CocoFile, DatasetError> {
    let path = root.join(ANNOTATION_FILE);
    let bytes = fs::read(&path).map_err(io_err(&path))?;
    serde_json::from_slice(&bytes).map_err(|source| DatasetError::Json { path, source })
}
