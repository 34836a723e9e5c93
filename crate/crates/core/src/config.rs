//! Generation parameters.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum ConfigError {
    #[error("config field `{field}`: {message}")]
    Invalid { field: String, message: String },
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::sync::Arc<std::io::Error>,
    },
    #[error("cannot parse config {path}: {message}")]
    Parse { path: String, message: String },
}

fn invalid(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field: field.to_string(),
        message: message.into(),
    }
}

/// Closed integer range `[min, max]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntRange {
    pub min: u32,
    pub max: u32,
}

/// Closed real range `[min, max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RealRange {
    pub min: f64,
    pub max: f64,
}

impl RealRange {
    pub const fn new(min: f64, max: f64) -> Self {
        Self { min, max }
    }

    pub fn scaled(self, s: f64) -> Self {
        Self::new(self.min * s, self.max * s)
    }
}

/// How category labels are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LabelMode {
    /// Uniform over `1..=classes`, independent of shape.
    #[default]
    Uniform,
    /// Bucket of (vertex count, ring count) on a 16×16 grid.
    ParamBinned,
}

impl std::str::FromStr for LabelMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform" => Ok(Self::Uniform),
            "param-binned" => Ok(Self::ParamBinned),
            other => Err(format!("unknown label mode `{other}` (expected uniform or param-binned)")),
        }
    }
}

pub const MAX_DIMENSION: u32 = 16_384;
pub const MAX_INSTANCES: u32 = 4_096;
pub const MAX_RINGS: u32 = 10_000;
pub const MAX_VERTICES: u32 = 100_000;

/// Global generation parameters. Every field has a default; see [`GenConfig::default`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenConfig {
    pub width: u32,
    pub height: u32,
    /// Upper bound of the per-image instance count, drawn from `1..=max_instances`.
    pub max_instances: u32,
    /// Rings per instance.
    pub rings: IntRange,
    /// Vertices per ring.
    pub vertices: IntRange,
    pub classes: u32,
    /// Base radius range in pixels; `None` means `[S/64, S/6]` with `S = min(width, height)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<RealRange>,
    pub line_width: RealRange,
    pub aspect: RealRange,
    /// Noise amplitude range; the upper end is further capped at `0.9 × line width`.
    pub noise_scale: RealRange,
    /// Percent multiplier on the radius range; 100 leaves it unchanged.
    pub occlusion_rate: f64,
    /// Annotation shift in pixels; the rendered image is not shifted.
    pub mask_offset: u32,
    pub label_mode: LabelMode,
    pub seed: u64,
    /// Anti-aliased strokes in the image. Masks are always binary.
    pub antialias: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            width: 512,
            height: 512,
            max_instances: 32,
            rings: IntRange { min: 1, max: 50 },
            vertices: IntRange { min: 3, max: 502 },
            classes: 256,
            radius: None,
            line_width: RealRange::new(2.0, 12.0),
            aspect: RealRange::new(0.5, 2.0),
            noise_scale: RealRange::new(0.0, 10.8),
            occlusion_rate: 100.0,
            mask_offset: 0,
            label_mode: LabelMode::Uniform,
            seed: 0,
            antialias: false,
        }
    }
}

/// Fraction of the line width the noise amplitude may reach.
pub const NOISE_TO_LINE_WIDTH: f64 = 0.9;

impl GenConfig {
    pub fn from_toml_str(text: &str, origin: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse {
            path: origin.to_string(),
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.display().to_string(),
            source: std::sync::Arc::new(e),
        })?;
        Self::from_toml_str(&text, &path.display().to_string())
    }

    /// Base radius range before the occlusion-rate multiplier.
    pub fn radius_range(&self) -> RealRange {
        self.radius.unwrap_or_else(|| {
            let s = f64::from(self.width.min(self.height));
            RealRange::new(s / 64.0, s / 6.0)
        })
    }

    /// Copy with every derived default written out.
    pub fn resolved(&self) -> Result<Self, ConfigError> {
        self.validate()?;
        let mut out = self.clone();
        out.radius = Some(self.radius_range());
        Ok(out)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        for (field, v) in [("width", self.width), ("height", self.height)] {
            if v == 0 || v > MAX_DIMENSION {
                return Err(invalid(field, format!("must be in 1..={MAX_DIMENSION}, got {v}")));
            }
        }
        if self.max_instances == 0 || self.max_instances > MAX_INSTANCES {
            return Err(invalid(
                "max_instances",
                format!("must be in 1..={MAX_INSTANCES}, got {}", self.max_instances),
            ));
        }
        check_int("rings", self.rings, 1, MAX_RINGS)?;
        check_int("vertices", self.vertices, 3, MAX_VERTICES)?;
        if self.classes == 0 {
            return Err(invalid("classes", "must be at least 1"));
        }
        check_real("radius", self.radius_range(), false)?;
        check_real("line_width", self.line_width, false)?;
        check_real("aspect", self.aspect, false)?;
        check_real("noise_scale", self.noise_scale, true)?;
        if !(self.occlusion_rate.is_finite() && self.occlusion_rate > 0.0) {
            return Err(invalid(
                "occlusion_rate",
                format!("must be a positive percentage, got {}", self.occlusion_rate),
            ));
        }
        Ok(())
    }
}

fn check_int(field: &str, r: IntRange, lo: u32, hi: u32) -> Result<(), ConfigError> {
    if r.min < lo || r.max > hi || r.min > r.max {
        return Err(invalid(
            field,
            format!("need {lo} <= min <= max <= {hi}, got [{}, {}]", r.min, r.max),
        ));
    }
    Ok(())
}

fn check_real(field: &str, r: RealRange, allow_zero: bool) -> Result<(), ConfigError> {
    if !(r.min.is_finite() && r.max.is_finite()) || r.min > r.max {
        return Err(invalid(field, format!("need finite min <= max, got [{}, {}]", r.min, r.max)));
    }
    let ok = if allow_zero { r.min >= 0.0 } else { r.min > 0.0 };
    if !ok {
        let what = if allow_zero { "non-negative" } else { "positive" };
        return Err(invalid(field, format!("lower bound must be {what}, got {}", r.min)));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let c = GenConfig::default();
        c.validate().unwrap();
        assert_eq!(c.radius_range(), RealRange::new(8.0, 512.0 / 6.0));
        assert_eq!(c.resolved().unwrap().radius, Some(c.radius_range()));
    }

    #[test]
    fn empty_toml_is_default() {
        assert_eq!(GenConfig::from_toml_str("", "inline").unwrap(), GenConfig::default());
    }

    #[test]
    fn partial_toml_overrides() {
        let c = GenConfig::from_toml_str(
            "width = 64\nlabel_mode = \"param-binned\"\n[rings]\nmin = 2\nmax = 4\n",
            "inline",
        )
        .unwrap();
        assert_eq!(c.width, 64);
        assert_eq!(c.height, 512);
        assert_eq!(c.rings, IntRange { min: 2, max: 4 });
        assert_eq!(c.label_mode, LabelMode::ParamBinned);
    }

    #[test]
    fn unknown_field_rejected() {
        assert!(matches!(
            GenConfig::from_toml_str("widht = 3", "inline"),
            Err(ConfigError::Parse { .. })
        ));
    }

    #[test]
    fn resolved_round_trips_through_toml() {
        let c = GenConfig::default().resolved().unwrap();
        let text = toml::to_string(&c).unwrap();
        assert_eq!(GenConfig::from_toml_str(&text, "inline").unwrap(), c);
    }

    #[test]
    fn field_level_errors() {
        let field_of = |c: GenConfig| match c.validate() {
            Err(ConfigError::Invalid { field, .. }) => field,
            other => panic!("expected invalid, got {other:?}"),
        };
        let d = GenConfig::default;
        assert_eq!(field_of(GenConfig { width: 0, ..d() }), "width");
        assert_eq!(field_of(GenConfig { max_instances: 0, ..d() }), "max_instances");
        assert_eq!(field_of(GenConfig { vertices: IntRange { min: 2, max: 9 }, ..d() }), "vertices");
        assert_eq!(field_of(GenConfig { rings: IntRange { min: 5, max: 4 }, ..d() }), "rings");
        assert_eq!(field_of(GenConfig { classes: 0, ..d() }), "classes");
        assert_eq!(field_of(GenConfig { occlusion_rate: 0.0, ..d() }), "occlusion_rate");
        assert_eq!(
            field_of(GenConfig { line_width: RealRange::new(0.0, 3.0), ..d() }),
            "line_width"
        );
        assert_eq!(
            field_of(GenConfig { noise_scale: RealRange::new(-1.0, 3.0), ..d() }),
            "noise_scale"
        );
    }

    #[test]
    fn label_mode_parse() {
        assert_eq!("uniform".parse::<LabelMode>(), Ok(LabelMode::Uniform));
        assert_eq!("param-binned".parse::<LabelMode>(), Ok(LabelMode::ParamBinned));
        assert!("binned".parse::<LabelMode>().is_err());
    }
}
