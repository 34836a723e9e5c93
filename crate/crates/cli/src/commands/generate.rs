use std::time::Instant;

use anyhow::{anyhow, Result};
use hollowshape::config::ConfigError;
use hollowshape::dataset::{generate_dataset, GenerateOptions};
use hollowshape::GenConfig;

use super::exit_code;
use crate::{GenerateArgs, EXIT_INVALID, EXIT_IO, EXIT_OK};

/// File config first, then flag overrides.
pub fn build_config(args: &GenerateArgs) -> Result<GenConfig, ConfigError> {
    let mut config = match &args.config {
        Some(path) => GenConfig::load(path)?,
        None => GenConfig::default(),
    };
    if let Some(v) = args.seed {
        config.seed = v;
    }
    if let Some(v) = args.width {
        config.width = v;
    }
    if let Some(v) = args.height {
        config.height = v;
    }
    if let Some(v) = args.kmax {
        config.max_instances = v;
    }
    if let Some(v) = args.classes {
        config.classes = v;
    }
    if let Some(v) = args.occlusion_rate {
        config.occlusion_rate = v;
    }
    if let Some(v) = args.mask_offset {
        config.mask_offset = v;
    }
    if let Some(mode) = &args.label_mode {
        config.label_mode = mode.parse().map_err(|message| ConfigError::Invalid {
            field: "label_mode".into(),
            message,
        })?;
    }
    if args.antialias {
        config.antialias = true;
    }
    config.validate()?;
    Ok(config)
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

pub fn run(args: &GenerateArgs) -> u8 {
    let config = match build_config(args) {
        Ok(c) => c,
        Err(ConfigError::Io { path, source }) => {
            eprintln!("error: cannot read config {path}: {source}");
            return EXIT_IO;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INVALID;
        }
    };
    let workers = args.workers.unwrap_or_else(default_workers);
    if workers == 0 {
        eprintln!("error: --workers must be at least 1");
        return EXIT_INVALID;
    }
    let options = GenerateOptions {
        count: args.count,
        workers,
    };
    let started = Instant::now();
    let progress = |done: u64, total: u64| {
        eprintln!("generated {done}/{total} images ({:.1}s)", started.elapsed().as_secs_f64());
    };
    match generate_dataset(&config, &options, &args.out, &progress) {
        Ok(manifest) => match summarize(&args.out, &manifest) {
            Ok(line) => {
                super::emit(&line);
                EXIT_OK
            }
            Err(e) => {
                eprintln!("error: {e:#}");
                EXIT_IO
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn summarize(out: &std::path::Path, manifest: &hollowshape::dataset::DatasetManifest) -> Result<String> {
    let summary = serde_json::json!({
        "out": out.display().to_string(),
        "images": manifest.image_count,
        "seed": manifest.seed,
        "annotation_digest": manifest.annotation_digest,
        "image_digest": manifest.image_digest,
    });
    serde_json::to_string(&summary).map_err(|e| anyhow!(e))
}
