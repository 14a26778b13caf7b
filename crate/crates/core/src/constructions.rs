//! Explicit antipodal configurations, the orthogonal join, and the config
//! JSON format.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::covering::{AntipodalConfig, CoveringError, Provenance};
use crate::linalg::norm;
use crate::sphere::{UnitVector, UNIT_TOL};

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("a regular {0}-gon is not antipodal; need an even k >= 4")]
    OddPolygon(usize),
    #[error("covering radius {0} rad is not in (0, π/2)")]
    RadiusOutOfRange(f64),
    #[error("malformed config file: {0}")]
    Malformed(String),
    #[error("point {index} has {got} coordinates, expected {dim}")]
    PointDimension {
        index: usize,
        got: usize,
        dim: usize,
    },
    #[error("antipodal file lists an odd number ({0}) of points")]
    OddPointCount(usize),
    #[error("no shipped S² configuration with {0} pairs (available: 8, 16)")]
    UnknownFactor(usize),
    #[error("unknown construction {0:?}")]
    UnknownName(String),
    #[error(transparent)]
    Covering(#[from] CoveringError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// `e_1, ..., e_d`: the 2d vertices of the cross-polytope.
pub fn cross_polytope_config(d: usize) -> Result<AntipodalConfig, ConstructionError> {
    if d < 2 {
        return Err(ConstructionError::DimensionTooSmall(d));
    }
    let pts = (0..d).map(|i| UnitVector::axis(d, i)).collect();
    Ok(AntipodalConfig::new(
        d,
        pts,
        Provenance::Constructed(format!("cross-polytope-{d}")),
    )?)
}

/// Regular k-gon on S^1, k even; base points at angles `2πj/k`, `j < k/2`.
pub fn regular_polygon_config(k: usize) -> Result<AntipodalConfig, ConstructionError> {
    if k % 2 == 1 || k < 4 {
        return Err(ConstructionError::OddPolygon(k));
    }
    let pts = (0..k / 2)
        .map(|j| {
            let t = 2.0 * PI * j as f64 / k as f64;
            UnitVector::new(vec![t.cos(), t.sin()]).expect("unit")
        })
        .collect();
    Ok(AntipodalConfig::new(
        2,
        pts,
        Provenance::Constructed(format!("polygon-{k}")),
    )?)
}

/// Two unit-edge regular hexagons in totally orthogonal planes of E^4.
pub fn hexagon_pair_config() -> AntipodalConfig {
    let hex = regular_polygon_config(6).expect("hexagon");
    let mut joined = orthogonal_join(&hex, &hex);
    joined.provenance = Provenance::Constructed("hexagon-pair".into());
    joined
}

/// Embeds `left` in the first `k` coordinates and `right` in the remaining
/// ones; the two subspaces are totally orthogonal.
pub fn orthogonal_join(left: &AntipodalConfig, right: &AntipodalConfig) -> AntipodalConfig {
    let (k, l) = (left.dim(), right.dim());
    let d = k + l;
    let embed = |p: &UnitVector, offset: usize| {
        let mut v = vec![0.0; d];
        v[offset..offset + p.dim()].copy_from_slice(p.coords());
        UnitVector::new(v).expect("unit")
    };
    let pts = left
        .base_points()
        .iter()
        .map(|p| embed(p, 0))
        .chain(right.base_points().iter().map(|p| embed(p, k)))
        .collect();
    AntipodalConfig::new(
        d,
        pts,
        Provenance::Constructed(format!("join({},{})", left.provenance, right.provenance)),
    )
    .expect("points from orthogonal subspaces never coincide")
}

/// Predicted covering radius of an orthogonal join from the factors' radii.
///
/// A point `cos θ·u + sin θ·v` is at distance `acos(cos θ cos r_l)` from the
/// nearest left point and `acos(sin θ cos r_r)` from the nearest right point
/// in the worst case; equalizing the two and eliminating θ gives
/// `cos x = cos r_l cos r_r / sqrt(cos² r_l + cos² r_r)`.
pub fn join_covering_radius(r_left: f64, r_right: f64) -> Result<f64, ConstructionError> {
    for r in [r_left, r_right] {
        if !(r > 0.0 && r < FRAC_PI_2) {
            return Err(ConstructionError::RadiusOutOfRange(r));
        }
    }
    let (a, b) = (r_left.cos(), r_right.cos());
    Ok((a * b / (a * a + b * b).sqrt()).clamp(-1.0, 1.0).acos())
}

const SPHERE3_M8: &str = include_str!("../data/sphere3_m8.json");
const SPHERE3_M16: &str = include_str!("../data/sphere3_m16.json");

/// Optimized antipodal configurations on S² shipped with the crate:
/// 8 pairs (radius 33.547...°) and 16 pairs (radius 22.690...°). The stored
/// radius is checked against a fresh exact computation.
pub fn sphere3_factor_config(pairs: usize) -> Result<AntipodalConfig, ConstructionError> {
    let text = match pairs {
        8 => SPHERE3_M8,
        16 => SPHERE3_M16,
        other => return Err(ConstructionError::UnknownFactor(other)),
    };
    let loaded = config_from_json(text)?;
    let stored = loaded.config.covering_radius;
    let config = loaded.config.with_exact_radius()?;
    match stored {
        Some(r) if (r - config.covering_radius.unwrap_or(f64::NAN)).abs() <= 1e-12 => Ok(config),
        _ => Err(ConstructionError::Malformed(format!(
            "shipped {pairs}-pair configuration does not reproduce its stored radius"
        ))),
    }
}

/// Named constructions:
/// `cross-polytope-<d>`, `polygon-<k>`, `hexagon-pair`, `s2-8`, `s2-16`,
/// `d5` (16-gon joined with `s2-8`) and `d6` (`s2-16` joined with itself).
pub fn named_config(name: &str) -> Result<AntipodalConfig, ConstructionError> {
    let unknown = || ConstructionError::UnknownName(name.to_string());
    let number = |prefix: &str| -> Option<usize> { name.strip_prefix(prefix)?.parse().ok() };
    let config = match name {
        "hexagon-pair" => hexagon_pair_config(),
        "s2-8" => sphere3_factor_config(8)?,
        "s2-16" => sphere3_factor_config(16)?,
        "d5" => orthogonal_join(&regular_polygon_config(16)?, &sphere3_factor_config(8)?),
        "d6" => {
            let f = sphere3_factor_config(16)?;
            orthogonal_join(&f, &f)
        }
        _ => {
            if let Some(d) = number("cross-polytope-") {
                cross_polytope_config(d)?
            } else if let Some(k) = number("polygon-") {
                regular_polygon_config(k)?
            } else {
                return Err(unknown());
            }
        }
    };
    Ok(config)
}

/// Names accepted by [`named_config`] with fixed parameters.
pub const FIXED_NAMES: [&str; 5] = ["hexagon-pair", "s2-8", "s2-16", "d5", "d6"];

/// On-disk form of an [`AntipodalConfig`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConfigFile {
    pub dim: usize,
    pub antipodal: bool,
    pub base_points: Vec<Vec<f64>>,
    pub covering_radius_rad: Option<f64>,
    pub provenance: String,
}

/// A loaded config together with validation notes (e.g. renormalized points).
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: AntipodalConfig,
    pub warnings: Vec<String>,
}

impl From<&AntipodalConfig> for ConfigFile {
    fn from(c: &AntipodalConfig) -> Self {
        ConfigFile {
            dim: c.dim(),
            antipodal: true,
            base_points: c
                .base_points()
                .iter()
                .map(|p| p.coords().to_vec())
                .collect(),
            covering_radius_rad: c.covering_radius,
            provenance: c.provenance.to_string(),
        }
    }
}

impl ConfigFile {
    pub fn into_config(self) -> Result<LoadedConfig, ConstructionError> {
        let mut warnings = Vec::new();
        for (index, p) in self.base_points.iter().enumerate() {
            if p.len() != self.dim {
                return Err(ConstructionError::PointDimension {
                    index,
                    got: p.len(),
                    dim: self.dim,
                });
            }
        }
        if self.dim < 2 {
            return Err(ConstructionError::DimensionTooSmall(self.dim));
        }
        let raw = if self.antipodal {
            self.base_points
        } else {
            // a full point list: must pair up into antipodes
            if self.base_points.len() % 2 == 1 {
                return Err(ConstructionError::OddPointCount(self.base_points.len()));
            }
            let pts: Vec<UnitVector> = self
                .base_points
                .iter()
                .map(|p| UnitVector::new(p.clone()))
                .collect::<Result<_, _>>()
                .map_err(|e| ConstructionError::Malformed(e.to_string()))?;
            if !crate::covering::verify_antipodal(&pts) {
                return Err(ConstructionError::Malformed(
                    "point list is not closed under negation".into(),
                ));
            }
            pick_base_points(&self.base_points)
        };
        let mut pts = Vec::with_capacity(raw.len());
        for (index, p) in raw.into_iter().enumerate() {
            let n = norm(&p);
            if (n - 1.0).abs() > UNIT_TOL {
                warnings.push(format!("point {index} had norm {n:.17}; normalized"));
            }
            pts.push(UnitVector::new(p).map_err(|e| ConstructionError::Malformed(e.to_string()))?);
        }
        let mut config = AntipodalConfig::new(self.dim, pts, Provenance::parse(&self.provenance))?;
        config.covering_radius = self.covering_radius_rad;
        Ok(LoadedConfig { config, warnings })
    }
}

/// One representative from each antipodal pair of a full point list.
fn pick_base_points(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut taken = vec![false; points.len()];
    let mut out = Vec::new();
    for i in 0..points.len() {
        if taken[i] {
            continue;
        }
        taken[i] = true;
        if let Some(j) = (0..points.len()).find(|&j| {
            !taken[j]
                && points[i]
                    .iter()
                    .zip(&points[j])
                    .all(|(a, b)| (a + b).abs() <= crate::covering::ANTIPODAL_TOL)
        }) {
            taken[j] = true;
        }
        out.push(points[i].clone());
    }
    out
}

pub fn config_to_json(config: &AntipodalConfig) -> String {
    // serde_json writes f64 with shortest round-trip digits
    serde_json::to_string_pretty(&ConfigFile::from(config)).expect("serializable")
}

pub fn config_from_json(text: &str) -> Result<LoadedConfig, ConstructionError> {
    let file: ConfigFile =
        serde_json::from_str(text).map_err(|e| ConstructionError::Malformed(e.to_string()))?;
    file.into_config()
}

pub fn save_config(config: &AntipodalConfig, path: &Path) -> Result<(), ConstructionError> {
    fs::write(path, config_to_json(config) + "\n")?;
    Ok(())
}

pub fn load_config(path: &Path) -> Result<LoadedConfig, ConstructionError> {
    config_from_json(&fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::verify_antipodal;

    const DEG: f64 = PI / 180.0;

    #[test]
    fn cross_polytope_radii() {
        for d in [2usize, 3, 6] {
            let r = cross_polytope_config(d)
                .unwrap()
                .covering_radius_exact()
                .unwrap()
                .radius;
            assert!(
                (r - (1.0 / d as f64).sqrt().acos()).abs() < 1e-12,
                "d = {d}"
            );
        }
        assert!(matches!(
            cross_polytope_config(1),
            Err(ConstructionError::DimensionTooSmall(1))
        ));
    }

    #[test]
    fn polygon_radii() {
        for k in [4usize, 6, 16] {
            let r = regular_polygon_config(k)
                .unwrap()
                .covering_radius_exact()
                .unwrap()
                .radius;
            assert!((r - PI / k as f64).abs() < 1e-12, "k = {k}");
        }
        let r16 = regular_polygon_config(16)
            .unwrap()
            .covering_radius_exact()
            .unwrap()
            .radius;
        assert!((r16 / DEG - 11.25).abs() < 1e-10);
        assert!(matches!(
            regular_polygon_config(7),
            Err(ConstructionError::OddPolygon(7))
        ));
        assert!(matches!(
            regular_polygon_config(2),
            Err(ConstructionError::OddPolygon(2))
        ));
    }

    #[test]
    fn hexagon_pair_is_the_hexagon_self_join() {
        let hex = regular_polygon_config(6).unwrap();
        let a = hexagon_pair_config();
        let b = orthogonal_join(&hex, &hex);
        assert_eq!(a.base_points(), b.base_points());
        assert_eq!(a.pairs(), 6);
        assert!(verify_antipodal(&a.expanded()));
        let r = a.covering_radius_exact().unwrap().radius;
        assert!((r - (3.0f64 / 8.0).sqrt().acos()).abs() < 1e-9);
    }

    #[test]
    fn join_formula_values() {
        let f = |a: f64, b: f64| join_covering_radius(a * DEG, b * DEG).unwrap() / DEG;
        assert!((f(30.0, 30.0) - (3.0f64 / 8.0).sqrt().acos() / DEG).abs() < 1e-10);
        assert!((f(11.25, 33.547) - 50.572).abs() < 0.005);
        assert!((f(22.690, 22.690) - 49.278).abs() < 0.005);
        assert!(join_covering_radius(FRAC_PI_2, 0.3).is_err());
        assert!(join_covering_radius(0.0, 0.3).is_err());
    }

    #[test]
    fn join_formula_matches_two_equation_form() {
        // cos x = cos a cos y and cos x = cos b sin y  =>  tan y = cos a / cos b
        for &(a, b) in &[(11.25, 33.547), (22.69, 22.69), (5.0, 40.0), (30.0, 45.0)] {
            let (a, b) = (a * DEG, b * DEG);
            let y = (a.cos() / b.cos()).atan();
            let x1 = (a.cos() * y.cos()).acos();
            let x2 = (b.cos() * y.sin()).acos();
            assert!((x1 - x2).abs() < 1e-12);
            assert!((join_covering_radius(a, b).unwrap() - x1).abs() < 1e-12);
        }
    }

    #[test]
    fn join_formula_matches_exact_radius_of_join() {
        let hex = regular_polygon_config(6).unwrap();
        let g16 = regular_polygon_config(16).unwrap();
        let sq = regular_polygon_config(4).unwrap();
        let oct = cross_polytope_config(3).unwrap();
        for (l, r) in [(&hex, &hex), (&g16, &g16), (&g16, &oct), (&sq, &hex)] {
            let rl = l.covering_radius_exact().unwrap().radius;
            let rr = r.covering_radius_exact().unwrap().radius;
            let exact = orthogonal_join(l, r)
                .covering_radius_exact()
                .unwrap()
                .radius;
            assert!((join_covering_radius(rl, rr).unwrap() - exact).abs() < 1e-6);
        }
    }

    #[test]
    fn json_round_trip() {
        let cfg = hexagon_pair_config().with_exact_radius().unwrap();
        let back = config_from_json(&config_to_json(&cfg)).unwrap();
        assert!(back.warnings.is_empty());
        assert_eq!(back.config, cfg);
    }

    #[test]
    fn non_unit_points_are_normalized_with_warning() {
        let text = r#"{"dim": 2, "antipodal": true, "base_points": [[2.0, 0.0], [0.0, 1.0]],
                       "covering_radius_rad": null, "provenance": "hand"}"#;
        let loaded = config_from_json(text).unwrap();
        assert_eq!(loaded.warnings.len(), 1);
        assert_eq!(loaded.config.base_points()[0].coords(), &[1.0, 0.0]);
        assert_eq!(loaded.config.provenance, Provenance::Loaded("hand".into()));
    }

    #[test]
    fn full_point_lists_are_paired() {
        let text = r#"{"dim": 2, "antipodal": false,
                       "base_points": [[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]],
                       "covering_radius_rad": null, "provenance": "hand"}"#;
        assert_eq!(config_from_json(text).unwrap().config.pairs(), 2);
        let odd = r#"{"dim": 2, "antipodal": false, "base_points": [[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0]],
                      "covering_radius_rad": null, "provenance": "hand"}"#;
        assert!(matches!(
            config_from_json(odd),
            Err(ConstructionError::OddPointCount(3))
        ));
    }

    #[test]
    fn malformed_files_are_rejected() {
        assert!(matches!(
            config_from_json("{"),
            Err(ConstructionError::Malformed(_))
        ));
        let bad_dim = r#"{"dim": 3, "antipodal": true, "base_points": [[1.0, 0.0]],
                          "covering_radius_rad": null, "provenance": "x"}"#;
        assert!(matches!(
            config_from_json(bad_dim),
            Err(ConstructionError::PointDimension { .. })
        ));
    }

    fn truncated_degrees(r: f64, digits: i32) -> f64 {
        let scale = 10f64.powi(digits);
        (r.to_degrees() * scale).floor() / scale
    }

    #[test]
    fn shipped_sphere_factors_match_published_radii() {
        let m8 = sphere3_factor_config(8).unwrap();
        assert_eq!(m8.pairs(), 8);
        assert_eq!(truncated_degrees(m8.covering_radius.unwrap(), 3), 33.547);
        let m16 = sphere3_factor_config(16).unwrap();
        assert_eq!(m16.pairs(), 16);
        assert_eq!(truncated_degrees(m16.covering_radius.unwrap(), 3), 22.690);
        for c in [&m8, &m16] {
            assert!(verify_antipodal(&c.expanded()));
            assert!(matches!(c.provenance, Provenance::Optimized(_)));
        }
        assert!(matches!(
            sphere3_factor_config(12),
            Err(ConstructionError::UnknownFactor(12))
        ));
    }

    #[test]
    fn five_dimensional_join_beats_the_constant_width_threshold() {
        let cfg = named_config("d5").unwrap();
        assert_eq!((cfg.dim(), cfg.pairs()), (5, 16));
        let exact = cfg.covering_radius_exact().unwrap().radius;
        let factor = sphere3_factor_config(8).unwrap().covering_radius.unwrap();
        let predicted = join_covering_radius(PI / 16.0, factor).unwrap();
        assert!((exact - predicted).abs() < 1e-6);
        assert_eq!(truncated_degrees(exact, 3), 50.572);
        assert!(exact < (0.4f64).sqrt().acos());
    }

    #[test]
    fn six_dimensional_join_beats_the_constant_width_threshold() {
        let cfg = named_config("d6").unwrap();
        assert_eq!((cfg.dim(), cfg.pairs()), (6, 32));
        let exact = cfg.covering_radius_exact().unwrap().radius;
        let factor = sphere3_factor_config(16).unwrap().covering_radius.unwrap();
        let predicted = join_covering_radius(factor, factor).unwrap();
        assert!((exact - predicted).abs() < 1e-6);
        assert_eq!(truncated_degrees(exact, 3), 49.278);
        assert!(exact < (5.0f64 / 12.0).sqrt().acos());
    }

    #[test]
    fn named_constructions() {
        assert_eq!(named_config("cross-polytope-4").unwrap().dim(), 4);
        assert_eq!(named_config("polygon-16").unwrap().pairs(), 8);
        assert_eq!(named_config("hexagon-pair").unwrap(), hexagon_pair_config());
        for name in FIXED_NAMES {
            assert!(named_config(name).is_ok(), "{name}");
        }
        assert!(matches!(
            named_config("polygon-7"),
            Err(ConstructionError::OddPolygon(7))
        ));
        assert!(matches!(
            named_config("dodecahedron"),
            Err(ConstructionError::UnknownName(_))
        ));
    }
}
