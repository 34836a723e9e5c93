//! Command-line front end: `generate`, `stats`, `preview` and `validate`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

pub mod commands;

/// Exit status for a successful run.
pub const EXIT_OK: u8 = 0;
/// Invalid configuration or a dataset that fails validation.
pub const EXIT_INVALID: u8 = 1;
/// Filesystem or encoding failure.
pub const EXIT_IO: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "hollowshape", version, about = "Synthetic hollow-contour instance segmentation datasets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a dataset.
    Generate(GenerateArgs),
    /// Summarize a dataset.
    Stats { dataset: PathBuf },
    /// Write side-by-side image / mask composites for selected images.
    Preview {
        dataset: PathBuf,
        /// Image ids to render.
        #[arg(long, value_delimiter = ',', required = true)]
        ids: Vec<u64>,
        /// Output directory for the composites.
        #[arg(long)]
        out: PathBuf,
    },
    /// Check every dataset invariant.
    Validate { dataset: PathBuf },
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    /// Number of images.
    #[arg(long, default_value_t = 100)]
    pub count: u64,
    /// Master seed (overrides the config file).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    /// TOML config file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub width: Option<u32>,
    #[arg(long)]
    pub height: Option<u32>,
    /// Maximum instances per image.
    #[arg(long)]
    pub kmax: Option<u32>,
    /// Number of categories.
    #[arg(long)]
    pub classes: Option<u32>,
    /// Radius range multiplier in percent (100 = unchanged).
    #[arg(long)]
    pub occlusion_rate: Option<f64>,
    /// Annotation shift in pixels.
    #[arg(long)]
    pub mask_offset: Option<u32>,
    /// `uniform` or `param-binned`.
    #[arg(long)]
    pub label_mode: Option<String>,
    /// Worker threads (default: available cores).
    #[arg(long)]
    pub workers: Option<usize>,
    /// Anti-aliased strokes in the images.
    #[arg(long)]
    pub antialias: bool,
}

/// Parses `args` and runs the selected command.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INVALID } else { EXIT_OK });
        }
    };
    let code = match cli.command {
        Command::Generate(args) => commands::generate::run(&args),
        Command::Stats { dataset } => commands::stats::run(&dataset),
        Command::Preview { dataset, ids, out } => commands::preview::run(&dataset, &ids, &out),
        Command::Validate { dataset } => commands::validate::run(&dataset),
    };
    ExitCode::from(code)
}
