pub mod generate;
pub mod preview;
pub mod stats;
pub mod validate;

use hollowshape::dataset::DatasetError;

use crate::{EXIT_INVALID, EXIT_IO};

pub(crate) fn exit_code(e: &DatasetError) -> u8 {
    if e.is_io() {
        EXIT_IO
    } else {
        EXIT_INVALID
    }
}

/// Writes one line to stdout; a closed pipe (e.g. `| head`) is not an error.
pub(crate) fn emit(line: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout().lock(), "{line}");
}
