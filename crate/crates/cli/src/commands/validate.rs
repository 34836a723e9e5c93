use std::path::Path;

use hollowshape::validate::validate_dataset;

use super::exit_code;
use crate::{EXIT_INVALID, EXIT_OK};

pub fn run(root: &Path) -> u8 {
    match validate_dataset(root) {
        Ok(report) => {
            for v in &report.violations {
                eprintln!("violation: {v}");
            }
            super::emit(&serde_json::to_string_pretty(&report).expect("report serializes"));
            if report.is_ok() {
                eprintln!(
                    "ok: {} images, {} annotations",
                    report.images_checked, report.annotations_checked
                );
                EXIT_OK
            } else {
                eprintln!("{} violation(s)", report.violations.len());
                EXIT_INVALID
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
