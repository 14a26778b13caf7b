//! X-ray and illumination certificates from antipodal coverings.
//!
//! For a body whose face Gauss images all fit in caps of radius `r`, an
//! antipodal set of `m` pairs with covering radius `R` and `r + R <= π/2`
//! gives `X <= m` and hence `I <= 2m`.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::constructions::config_to_json;
use crate::covering::{verify_antipodal, AntipodalConfig, CoveringError, RadiusMethod};

/// Tolerance on `r + R - π/2` for tightness and validity.
pub const MARGIN_TOL: f64 = 1e-9;
/// Samples used when the exact radius cannot be computed.
pub const FALLBACK_SAMPLES: usize = 1_000_000;

pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CertifyError {
    #[error("body classes need d >= 3, got {0}")]
    DimensionTooSmall(usize),
    #[error("config lives in E^{config} but the body class is in E^{class}")]
    DimensionMismatch { class: usize, config: usize },
    #[error("config is not closed under negation")]
    NotAntipodal,
    #[error("unknown body class {0:?} (expected almost_smooth or constant_width)")]
    UnknownClass(String),
    #[error(transparent)]
    Covering(#[from] CoveringError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BodyKind {
    AlmostSmooth,
    ConstantWidth,
}

impl BodyKind {
    pub fn parse(s: &str) -> Result<BodyKind, CertifyError> {
        match s.replace('-', "_").as_str() {
            "almost_smooth" => Ok(BodyKind::AlmostSmooth),
            "constant_width" => Ok(BodyKind::ConstantWidth),
            _ => Err(CertifyError::UnknownClass(s.to_string())),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            BodyKind::AlmostSmooth => "almost_smooth",
            BodyKind::ConstantWidth => "constant_width",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BodyClass {
    pub kind: BodyKind,
    pub dim: usize,
}

impl BodyClass {
    pub fn new(kind: BodyKind, dim: usize) -> Result<Self, CertifyError> {
        if dim < 3 {
            return Err(CertifyError::DimensionTooSmall(dim));
        }
        Ok(BodyClass { kind, dim })
    }

    /// Radius of a cap holding the Gauss image of any face of a body in the class.
    pub fn face_radius(&self) -> f64 {
        match self.kind {
            BodyKind::AlmostSmooth => jung_radius(self.dim),
            BodyKind::ConstantWidth => constant_width_radius(self.dim),
        }
    }

    /// Largest covering radius the class accepts.
    pub fn threshold(&self) -> f64 {
        FRAC_PI_2 - self.face_radius()
    }
}

impl fmt::Display for BodyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (d = {})", self.kind.as_str(), self.dim)
    }
}

/// Spherical Jung radius `acos sqrt((d-1)/d)`.
pub fn jung_radius(d: usize) -> f64 {
    let d = d as f64;
    ((d - 1.0) / d).sqrt().acos()
}

/// Circumradius of a regular spherical (d-1)-simplex with edge π/3:
/// `acos sqrt((d+1)/(2d))`.
pub fn constant_width_radius(d: usize) -> f64 {
    let d = d as f64;
    ((d + 1.0) / (2.0 * d)).sqrt().acos()
}

/// Schramm's illumination bound `5 d sqrt(d) (4 + ln d) (3/2)^(d/2)` for
/// bodies of constant width.
pub fn schramm_bound(d: usize) -> f64 {
    let d = d as f64;
    5.0 * d * d.sqrt() * (4.0 + d.ln()) * 1.5f64.powf(d / 2.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoveringCertificate {
    pub body_class: BodyClass,
    /// Number of antipodal pairs `m`.
    pub pairs: usize,
    pub covering_radius: f64,
    pub radius_method: RadiusMethod,
    pub face_radius: f64,
    pub threshold: f64,
    /// `π/2 - (r + R)`, minus the sampling bound for sampled radii.
    pub margin: f64,
    pub tight: bool,
    pub valid: bool,
    pub xray_bound: usize,
    pub illumination_bound: usize,
    pub config_reference: String,
    pub config_hash: String,
    pub toolkit_version: String,
    pub schramm_bound: Option<f64>,
    pub notes: Vec<String>,
}

impl CoveringCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// One line per field with angles in degrees.
    pub fn summary(&self) -> String {
        let deg = |x: f64| x.to_degrees();
        let mut s = format!(
            "class      {}\npairs      {}\nR          {:.6}° ({})\nr          {:.6}°\nR + r      {:.6}° (limit 90°)\nmargin     {:.6}°\nstatus     {}\n",
            self.body_class,
            self.pairs,
            deg(self.covering_radius),
            match &self.radius_method {
                RadiusMethod::Exact => "exact".to_string(),
                RadiusMethod::Sampled { samples, .. } => format!("sampled, {samples} points"),
            },
            deg(self.face_radius),
            deg(self.covering_radius + self.face_radius),
            deg(self.margin),
            match (self.valid, self.tight) {
                (true, true) => "valid (tight)",
                (true, false) => "valid",
                (false, _) => "INVALID",
            },
        );
        if self.valid {
            s += &format!(
                "conclusion X <= {}, I <= {}\n",
                self.xray_bound, self.illumination_bound
            );
        }
        if let Some(b) = self.schramm_bound {
            s += &format!("schramm    I < {b:.1}\n");
        }
        for n in &self.notes {
            s += &format!("note       {n}\n");
        }
        s
    }
}

/// Hex SHA-256 of the canonical config JSON.
pub fn config_hash(config: &AntipodalConfig) -> String {
    hex::encode(Sha256::digest(config_to_json(config).as_bytes()))
}

/// Certifies `X <= m` for `class` using the exact covering radius, falling
/// back to a sampled radius with a penalized margin.
pub fn certify(
    class: BodyClass,
    config: &AntipodalConfig,
) -> Result<CoveringCertificate, CertifyError> {
    certify_with(class, config, FALLBACK_SAMPLES, 0)
}

pub fn certify_with(
    class: BodyClass,
    config: &AntipodalConfig,
    fallback_samples: usize,
    seed: u64,
) -> Result<CoveringCertificate, CertifyError> {
    if class.dim < 3 {
        return Err(CertifyError::DimensionTooSmall(class.dim));
    }
    if config.dim() != class.dim {
        return Err(CertifyError::DimensionMismatch {
            class: class.dim,
            config: config.dim(),
        });
    }
    if !verify_antipodal(&config.expanded()) {
        return Err(CertifyError::NotAntipodal);
    }
    let radius = match config.covering_radius_exact() {
        Ok(r) => r,
        Err(CoveringError::Hull(_)) | Err(CoveringError::OriginNotInterior) => {
            config.covering_radius_sampled(fallback_samples, seed)
        }
        Err(e) => return Err(e.into()),
    };
    let r = class.face_radius();
    let margin = FRAC_PI_2 - (r + radius.radius) - radius.uncertainty();
    let tight = margin.abs() <= MARGIN_TOL;
    let valid = margin >= -MARGIN_TOL;
    let m = config.pairs();
    let d = class.dim;

    let mut notes = Vec::new();
    if tight {
        notes.push(
            "tight: r + R = π/2, so the covering great spheres may touch face Gauss images; \
             the bound holds after a generic rotation that avoids the finitely many \
             prohibited positions"
                .to_string(),
        );
    }
    if !valid {
        notes.push(format!(
            "invalid: covering radius exceeds the class limit of {:.6}°",
            class.threshold().to_degrees()
        ));
    }
    if let RadiusMethod::Sampled { bound, .. } = radius.method {
        notes.push(format!(
            "radius sampled; margin reduced by the sampling bound {:.3e} rad",
            bound
        ));
    }
    if class.kind == BodyKind::ConstantWidth && (d == 5 || d == 6) && valid && m <= 1 << (d - 1) {
        notes.push(format!(
            "for d = {d} this gives X <= 2^{} = {} and I <= 2^{d} = {}; a bound written as \
             X <= 2^{d} for this case is the illumination bound",
            d - 1,
            1usize << (d - 1),
            1usize << d
        ));
    }

    Ok(CoveringCertificate {
        body_class: class,
        pairs: m,
        covering_radius: radius.radius,
        radius_method: radius.method,
        face_radius: r,
        threshold: FRAC_PI_2,
        margin,
        tight,
        valid,
        xray_bound: m,
        illumination_bound: 2 * m,
        config_reference: config.provenance.to_string(),
        config_hash: config_hash(config),
        toolkit_version: TOOLKIT_VERSION.to_string(),
        schramm_bound: (class.kind == BodyKind::ConstantWidth).then(|| schramm_bound(d)),
        notes,
    })
}
