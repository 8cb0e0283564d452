//! User-facing pair and render specifications.

use std::fmt;
use std::str::FromStr;

use poncelet_core::{AffineMap, ConcentricPair};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecKind {
    Incircle,
    AxisAligned,
    Confocal,
    Homothetic,
    AffineImage,
    Continuum,
}

impl FromStr for SpecKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "incircle" => SpecKind::Incircle,
            "axis_aligned" => SpecKind::AxisAligned,
            "confocal" => SpecKind::Confocal,
            "homothetic" => SpecKind::Homothetic,
            "affine_image" => SpecKind::AffineImage,
            "continuum" => SpecKind::Continuum,
            other => {
                return Err(format!(
                    "unknown kind '{other}' (expected incircle, axis_aligned, confocal, \
                     homothetic, affine_image or continuum)"
                ))
            }
        })
    }
}

impl fmt::Display for SpecKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SpecKind::Incircle => "incircle",
            SpecKind::AxisAligned => "axis_aligned",
            SpecKind::Confocal => "confocal",
            SpecKind::Homothetic => "homothetic",
            SpecKind::AffineImage => "affine_image",
            SpecKind::Continuum => "continuum",
        };
        f.write_str(s)
    }
}

/// Which pair to build. `affine` may accompany any base kind; `affine_image`
/// additionally names its base through `base` (default incircle).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairSpec {
    pub kind: SpecKind,
    pub a: f64,
    pub b: Option<f64>,
    pub a_c: Option<f64>,
    /// Free caustic minor axis for axis-aligned pairs; skips the Cayley derivation.
    pub b_c: Option<f64>,
    /// Row-major 2×2 linear part.
    pub affine: Option<[f64; 4]>,
    pub lambda: Option<f64>,
    pub base: Option<SpecKind>,
}

impl PairSpec {
    pub fn new(kind: SpecKind, a: f64) -> Self {
        Self {
            kind,
            a,
            b: None,
            a_c: None,
            b_c: None,
            affine: None,
            lambda: None,
            base: None,
        }
    }

    fn require(&self, field: Option<f64>, name: &str) -> Result<f64> {
        field.ok_or_else(|| CliError::InvalidSpec(format!("kind {} requires --{name}", self.kind)))
    }

    fn map(&self) -> Result<Option<AffineMap>> {
        self.affine
            .map(|[m11, m12, m21, m22]| {
                AffineMap::linear(m11, m12, m21, m22)
                    .map_err(|e| CliError::InvalidSpec(format!("--affine: {e}")))
            })
            .transpose()
    }

    /// Checks field presence and ranges that do not need geometry.
    pub fn validate(&self) -> Result<()> {
        let finite = |v: f64, name: &str| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(CliError::InvalidSpec(format!("--{name} must be finite")))
            }
        };
        finite(self.a, "a")?;
        for (v, name) in [
            (self.b, "b"),
            (self.a_c, "ac"),
            (self.b_c, "bc"),
            (self.lambda, "lambda"),
        ] {
            if let Some(v) = v {
                finite(v, name)?;
            }
        }
        match self.kind {
            SpecKind::Incircle | SpecKind::Confocal => {
                self.require(self.b, "b")?;
            }
            SpecKind::AxisAligned => {
                self.require(self.b, "b")?;
                self.require(self.a_c, "ac")?;
            }
            SpecKind::Homothetic => {}
            SpecKind::AffineImage => {
                if self.affine.is_none() {
                    return Err(CliError::InvalidSpec(
                        "kind affine_image requires --affine".into(),
                    ));
                }
                let base = self.base.unwrap_or(SpecKind::Incircle);
                if matches!(base, SpecKind::AffineImage | SpecKind::Continuum) {
                    return Err(CliError::InvalidSpec(format!(
                        "--base must be an axis-aligned kind, got {base}"
                    )));
                }
                PairSpec {
                    kind: base,
                    affine: None,
                    ..self.clone()
                }
                .validate()?;
            }
            SpecKind::Continuum => {
                self.require(self.b, "b")?;
                let l = self.require(self.lambda, "lambda")?;
                if !(0.0..=1.0).contains(&l) {
                    return Err(CliError::InvalidSpec(format!(
                        "--lambda must lie in [0, 1], got {l}"
                    )));
                }
            }
        }
        if self.b_c.is_some() && self.kind != SpecKind::AxisAligned {
            return Err(CliError::InvalidSpec(
                "--bc only applies to axis_aligned".into(),
            ));
        }
        self.map()?;
        Ok(())
    }

    /// Builds the pair, validating closure.
    pub fn build(&self) -> Result<ConcentricPair> {
        self.build_inner(true)
    }

    /// Builds the pair; an explicit `--bc` yields an unvalidated pair so that
    /// closure can be reported as a property instead of a construction error.
    pub fn build_for_verify(&self) -> Result<ConcentricPair> {
        self.build_inner(false)
    }

    fn build_inner(&self, checked: bool) -> Result<ConcentricPair> {
        self.validate()?;
        let b = self.b.unwrap_or(self.a);
        let geometry = |r: poncelet_core::Result<ConcentricPair>| r.map_err(CliError::Construction);
        let base_kind = match self.kind {
            SpecKind::AffineImage => self.base.unwrap_or(SpecKind::Incircle),
            k => k,
        };
        let base = match base_kind {
            SpecKind::Incircle => geometry(ConcentricPair::incircle(self.a, b))?,
            SpecKind::AxisAligned => {
                let a_c = self.a_c.expect("validated");
                match self.b_c {
                    Some(b_c) => {
                        let pair =
                            geometry(ConcentricPair::axis_aligned_unchecked(self.a, b, a_c, b_c))?;
                        if checked {
                            pair.validate().map_err(CliError::Construction)?;
                        }
                        pair
                    }
                    None => geometry(ConcentricPair::axis_aligned(self.a, b, a_c))?,
                }
            }
            SpecKind::Confocal => geometry(ConcentricPair::confocal(self.a, b))?,
            SpecKind::Homothetic => geometry(ConcentricPair::homothetic(self.a, b))?,
            SpecKind::Continuum => geometry(ConcentricPair::continuum(
                self.a,
                b,
                self.lambda.expect("validated"),
            ))?,
            SpecKind::AffineImage => unreachable!("base kind is never affine_image"),
        };
        match self.map()? {
            Some(map) => geometry(ConcentricPair::affine_image(&base, &map)),
            None => Ok(base),
        }
    }
}

/// Drawing layers of a rendered frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layers {
    pub outer: bool,
    pub caustic: bool,
    pub triangle: bool,
    pub anticevian: bool,
    pub blades: bool,
    pub excircles: bool,
    pub circumcircle: bool,
}

impl Layers {
    pub const ALL: Layers = Layers {
        outer: true,
        caustic: true,
        triangle: true,
        anticevian: true,
        blades: true,
        excircles: true,
        circumcircle: true,
    };

    pub const NONE: Layers = Layers {
        outer: false,
        caustic: false,
        triangle: false,
        anticevian: false,
        blades: false,
        excircles: false,
        circumcircle: false,
    };
}

impl FromStr for Layers {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let mut layers = Layers::NONE;
        for name in s.split(',').map(str::trim).filter(|n| !n.is_empty()) {
            match name {
                "all" => layers = Layers::ALL,
                "outer" => layers.outer = true,
                "caustic" => layers.caustic = true,
                "triangle" => layers.triangle = true,
                "anticevian" => layers.anticevian = true,
                "blades" => layers.blades = true,
                "excircles" => layers.excircles = true,
                "circumcircle" => layers.circumcircle = true,
                other => return Err(format!("unknown layer '{other}'")),
            }
        }
        Ok(layers)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RenderSpec {
    pub t: f64,
    pub width: u32,
    pub height: u32,
    pub layers: Layers,
}

impl RenderSpec {
    pub fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(CliError::InvalidSpec(format!(
                "image dimensions must be positive, got {}x{}",
                self.width, self.height
            )));
        }
        if !self.t.is_finite() {
            return Err(CliError::InvalidSpec("--t must be finite".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use poncelet_core::PairKind;

    #[test]
    fn missing_fields_are_invalid() {
        let spec = PairSpec::new(SpecKind::Incircle, 1.5);
        assert!(matches!(spec.build(), Err(CliError::InvalidSpec(_))));
        let spec = PairSpec::new(SpecKind::AffineImage, 1.5);
        assert!(matches!(spec.build(), Err(CliError::InvalidSpec(_))));
        let spec = PairSpec {
            b: Some(1.0),
            lambda: Some(2.0),
            ..PairSpec::new(SpecKind::Continuum, 1.5)
        };
        assert!(matches!(spec.build(), Err(CliError::InvalidSpec(_))));
    }

    #[test]
    fn geometry_failures_are_construction_errors() {
        let spec = PairSpec {
            b: Some(2.0),
            ..PairSpec::new(SpecKind::Incircle, 1.0)
        };
        assert!(matches!(spec.build(), Err(CliError::Construction(_))));
        let spec = PairSpec {
            b: Some(1.0),
            a_c: Some(0.6),
            b_c: Some(0.606),
            ..PairSpec::new(SpecKind::AxisAligned, 1.5)
        };
        assert!(matches!(spec.build(), Err(CliError::Construction(_))));
        assert!(spec.build_for_verify().is_ok());
    }

    #[test]
    fn affine_over_any_base() {
        let spec = PairSpec {
            b: Some(1.0),
            affine: Some([1.0, 0.5, 0.0, 1.0]),
            ..PairSpec::new(SpecKind::AffineImage, 1.5)
        };
        let pair = spec.build().unwrap();
        assert_eq!(pair.kind(), PairKind::AffineImage);
        assert_eq!(pair.root_kind(), PairKind::Incircle);

        let spec = PairSpec {
            b: Some(1.0),
            affine: Some([0.0, 1.0, -1.0, 0.0]),
            ..PairSpec::new(SpecKind::Confocal, 1.5)
        };
        assert_eq!(spec.build().unwrap().root_kind(), PairKind::Confocal);
    }

    #[test]
    fn layers_parse() {
        assert_eq!("all".parse::<Layers>().unwrap(), Layers::ALL);
        let l: Layers = "outer, blades".parse().unwrap();
        assert!(l.outer && l.blades && !l.caustic);
        assert!("wings".parse::<Layers>().is_err());
    }
}
