use std::path::{Path, PathBuf};

use hollowshape::annotate::coco::CocoFile;
use hollowshape::dataset::{decode_png, encode_png, load_annotations, DatasetError, IMAGE_DIR};
use hollowshape::raster::CanvasImage;

use super::exit_code;
use crate::{EXIT_INVALID, EXIT_IO, EXIT_OK};

/// Distinct, never-black color for the `i`-th annotation of an image.
pub fn instance_color(i: usize) -> [u8; 3] {
    let h = (i as u32).wrapping_mul(0x9E37_79B9).rotate_left(7);
    let c = [(h >> 16) as u8, (h >> 8) as u8, h as u8];
    // Keep every channel at least 48 so the color is visible and nonzero.
    c.map(|v| 48 + (u16::from(v) * 207 / 255) as u8)
}

/// `image | masks` composite of width `2W`; the right half is black except
/// where an annotation covers the pixel.
pub fn composite(coco: &CocoFile, image_id: u64, image: &CanvasImage) -> Result<CanvasImage, String> {
    let (w, h) = (image.width(), image.height());
    let mut out = CanvasImage::new(2 * w, h);
    for y in 0..h {
        for x in 0..w {
            out.put_pixel(x, y, image.pixel(x, y));
        }
    }
    for (i, ann) in coco.annotations.iter().filter(|a| a.image_id == image_id).enumerate() {
        let mask = ann
            .segmentation
            .to_rle()
            .and_then(|r| r.decode())
            .map_err(|e| format!("annotation {}: {e}", ann.id))?;
        if (mask.width(), mask.height()) != (w, h) {
            return Err(format!("annotation {}: mask size differs from image", ann.id));
        }
        let color = instance_color(i);
        for (x, y) in mask.iter_set() {
            out.put_pixel(w + x, y, color);
        }
    }
    Ok(out)
}

pub fn render(root: &Path, ids: &[u64], out_dir: &Path) -> Result<Vec<PathBuf>, (u8, String)> {
    let ds_err = |e: DatasetError| (exit_code(&e), e.to_string());
    let coco = load_annotations(root).map_err(ds_err)?;
    for id in ids {
        if !coco.images.iter().any(|i| i.id == *id) {
            return Err((EXIT_INVALID, format!("unknown image id {id}")));
        }
    }
    std::fs::create_dir_all(out_dir).map_err(|e| (EXIT_IO, format!("{}: {e}", out_dir.display())))?;
    let mut written = Vec::new();
    for &id in ids {
        let entry = coco.images.iter().find(|i| i.id == id).expect("checked above");
        let image = decode_png(&root.join(IMAGE_DIR).join(&entry.file_name)).map_err(ds_err)?;
        let comp = composite(&coco, id, &image).map_err(|m| (EXIT_INVALID, m))?;
        let path = out_dir.join(format!("preview_{id:06}.png"));
        let bytes = encode_png(&comp).map_err(|e| (EXIT_IO, e.to_string()))?;
        std::fs::write(&path, bytes).map_err(|e| (EXIT_IO, format!("{}: {e}", path.display())))?;
        written.push(path);
    }
    Ok(written)
}

pub fn run(root: &Path, ids: &[u64], out_dir: &Path) -> u8 {
    match render(root, ids, out_dir) {
        Ok(paths) => {
            for p in paths {
                super::emit(&p.display().to_string());
            }
            EXIT_OK
        }
        Err((code, message)) => {
            eprintln!("error: {message}");
            code
        }
    }
}
