//! Covering radii of finite point sets on S^(d-1).
//!
//! The exact method uses the hull: when the origin is interior, the points of
//! the sphere farthest from the set are the normalized feet of the facet
//! hyperplanes (spherical Voronoi vertices), so
//! `R = acos(min_F support_offset(F))`.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hull::{ConvexHull, HullError, HULL_TOL};
use crate::linalg::{dot, orthonormal_basis};
use crate::sphere::{angle_from_cos, SphereError, UnitVector};

/// Pairing tolerance for antipodality.
pub const ANTIPODAL_TOL: f64 = 1e-9;
/// Failure probability used for the reported sampling bound.
pub const SAMPLING_CONFIDENCE_FAILURE: f64 = 1e-6;
const SAMPLE_BLOCK: usize = 1 << 15;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoveringError {
    #[error("origin is not inside the hull of the configuration; use covering_radius_sampled")]
    OriginNotInterior,
    #[error("empty point set")]
    Empty,
    #[error("points have inconsistent dimensions")]
    DimensionMismatch,
    #[error("points {0} and {1} coincide in the expanded configuration")]
    Coincident(usize, usize),
    #[error(transparent)]
    Hull(#[from] HullError),
    #[error(transparent)]
    Sphere(#[from] SphereError),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RadiusMethod {
    Exact,
    /// `bound`: with probability at least 1 - 1e-6 the true radius is below
    /// the reported one plus `bound`.
    Sampled {
        samples: usize,
        seed: u64,
        bound: f64,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoveringRadiusResult {
    pub radius: f64,
    pub witness: UnitVector,
    pub method: RadiusMethod,
}

impl CoveringRadiusResult {
    /// Uncertainty to subtract from any margin built on this radius.
    pub fn uncertainty(&self) -> f64 {
        match self.method {
            RadiusMethod::Exact => 0.0,
            RadiusMethod::Sampled { bound, .. } => bound,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    Constructed(String),
    Optimized(String),
    Loaded(String),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Constructed(s) => write!(f, "constructed:{s}"),
            Provenance::Optimized(s) => write!(f, "optimized:{s}"),
            Provenance::Loaded(s) => write!(f, "{s}"),
        }
    }
}

impl Provenance {
    pub fn parse(s: &str) -> Provenance {
        if let Some(rest) = s.strip_prefix("constructed:") {
            Provenance::Constructed(rest.to_string())
        } else if let Some(rest) = s.strip_prefix("optimized:") {
            Provenance::Optimized(rest.to_string())
        } else {
            Provenance::Loaded(s.to_string())
        }
    }
}

/// `m` base points standing for the 2m points `{p_i, -p_i}`.
#[derive(Clone, Debug, PartialEq)]
pub struct AntipodalConfig {
    dim: usize,
    base_points: Vec<UnitVector>,
    pub covering_radius: Option<f64>,
    pub provenance: Provenance,
}

impl AntipodalConfig {
    pub fn new(
        dim: usize,
        base_points: Vec<UnitVector>,
        provenance: Provenance,
    ) -> Result<Self, CoveringError> {
        if base_points.is_empty() {
            return Err(CoveringError::Empty);
        }
        if base_points.iter().any(|p| p.dim() != dim) {
            return Err(CoveringError::DimensionMismatch);
        }
        let cfg = AntipodalConfig {
            dim,
            base_points,
            covering_radius: None,
            provenance,
        };
        let expanded = cfg.expanded();
        for i in 0..expanded.len() {
            for j in i + 1..expanded.len() {
                if 1.0 - expanded[i].dot(&expanded[j]) <= ANTIPODAL_TOL * ANTIPODAL_TOL / 2.0
                    || crate::linalg::norm(&crate::linalg::sub(
                        expanded[i].coords(),
                        expanded[j].coords(),
                    )) <= ANTIPODAL_TOL
                {
                    return Err(CoveringError::Coincident(i, j));
                }
            }
        }
        Ok(cfg)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of antipodal pairs.
    pub fn pairs(&self) -> usize {
        self.base_points.len()
    }

    pub fn base_points(&self) -> &[UnitVector] {
        &self.base_points
    }

    /// The full configuration `p_1, -p_1, p_2, -p_2, ...`.
    pub fn expanded(&self) -> Vec<UnitVector> {
        self.base_points
            .iter()
            .flat_map(|p| [p.clone(), p.neg()])
            .collect()
    }

    pub fn covering_radius_exact(&self) -> Result<CoveringRadiusResult, CoveringError> {
        covering_radius_exact(&self.expanded())
    }

    pub fn covering_radius_sampled(&self, samples: usize, seed: u64) -> CoveringRadiusResult {
        covering_radius_sampled(&self.expanded(), samples, seed)
    }

    /// Fills `covering_radius` from the exact method.
    pub fn with_exact_radius(mut self) -> Result<Self, CoveringError> {
        self.covering_radius = Some(self.covering_radius_exact()?.radius);
        Ok(self)
    }

    pub fn rotated(&self, q: &[Vec<f64>]) -> AntipodalConfig {
        AntipodalConfig {
            dim: self.dim,
            base_points: self.base_points.iter().map(|p| p.rotate(q)).collect(),
            covering_radius: self.covering_radius,
            provenance: self.provenance.clone(),
        }
    }
}

fn check_points(points: &[UnitVector]) -> Result<usize, CoveringError> {
    let d = points.first().ok_or(CoveringError::Empty)?.dim();
    if points.iter().any(|p| p.dim() != d) {
        return Err(CoveringError::DimensionMismatch);
    }
    Ok(d)
}

/// Exact covering radius from hull facets.
///
/// When the origin lies on the boundary of the hull (including a flat hull
/// whose relative interior holds the origin, e.g. one antipodal pair) the
/// radius is exactly π/2. An origin outside the hull is an error.
pub fn covering_radius_exact(points: &[UnitVector]) -> Result<CoveringRadiusResult, CoveringError> {
    let d = check_points(points)?;
    let coords: Vec<Vec<f64>> = points.iter().map(|p| p.coords().to_vec()).collect();
    match ConvexHull::new(&coords) {
        Ok(hull) => {
            let best = hull
                .facets()
                .iter()
                .min_by(|a, b| a.support_offset.total_cmp(&b.support_offset))
                .expect("hull has facets");
            if best.support_offset < -HULL_TOL {
                return Err(CoveringError::OriginNotInterior);
            }
            Ok(CoveringRadiusResult {
                radius: angle_from_cos(best.support_offset.max(0.0)),
                witness: best.outward_normal.clone(),
                method: RadiusMethod::Exact,
            })
        }
        Err(HullError::Degenerate { .. }) => flat_radius(points, d),
        Err(e) => Err(e.into()),
    }
}

/// Points spanning a proper linear subspace: the radius is π/2 iff the
/// origin is in the relative interior of their hull.
fn flat_radius(points: &[UnitVector], d: usize) -> Result<CoveringRadiusResult, CoveringError> {
    let basis = orthonormal_basis(points.iter().map(|p| p.coords()), 1e-10);
    let k = basis.len();
    if k == d {
        // affinely flat but linearly spanning: origin is off the affine hull
        return Err(CoveringError::OriginNotInterior);
    }
    let local: Vec<Vec<f64>> = points
        .iter()
        .map(|p| basis.iter().map(|b| dot(b, p.coords())).collect())
        .collect();
    let centered = if k == 1 {
        local.iter().any(|x| x[0] > 0.0) && local.iter().any(|x| x[0] < 0.0)
    } else {
        match ConvexHull::new(&local) {
            Ok(h) => crate::hull::contains_origin_interior(h.facets()),
            Err(_) => false,
        }
    };
    if !centered {
        return Err(CoveringError::OriginNotInterior);
    }
    // any unit vector orthogonal to the span is at distance π/2 from every point
    let witness = (0..d)
        .find_map(|i| {
            let mut extended = basis.clone();
            extended.push(UnitVector::axis(d, i).into_coords());
            let ob = orthonormal_basis(extended.iter().map(|v| v.as_slice()), 1e-6);
            (ob.len() > k).then(|| ob[k].clone())
        })
        .expect("a proper subspace has an orthogonal axis direction");
    let witness = UnitVector::new(witness)?;
    Ok(CoveringRadiusResult {
        radius: std::f64::consts::FRAC_PI_2,
        witness,
        method: RadiusMethod::Exact,
    })
}

/// Normalized area of a cap of angular radius `delta` on S^(d-1).
pub fn cap_fraction(d: usize, delta: f64) -> f64 {
    let s = delta.sin().powi(2);
    let half = 0.5 * statrs::function::beta::beta_reg((d as f64 - 1.0) / 2.0, 0.5, s);
    if delta <= std::f64::consts::FRAC_PI_2 {
        half
    } else {
        1.0 - half
    }
}

/// Smallest `delta` such that `samples` uniform points miss a fixed cap of
/// radius `delta` with probability at most `failure`.
pub fn sampling_bound(d: usize, samples: usize, failure: f64) -> f64 {
    // (1 - mu)^N <= failure  <=>  mu >= 1 - failure^(1/N)
    let target = -(failure.ln() / samples.max(1) as f64).exp_m1();
    let (mut lo, mut hi) = (0.0f64, std::f64::consts::PI);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if cap_fraction(d, mid) >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Monte Carlo lower bound: max over uniform samples of the distance to the
/// nearest configuration point. Deterministic for a given seed; blocks are
/// evaluated in parallel, each with its own ChaCha stream.
pub fn covering_radius_sampled(
    points: &[UnitVector],
    sample_count: usize,
    seed: u64,
) -> CoveringRadiusResult {
    let d = points[0].dim();
    let blocks = sample_count.div_ceil(SAMPLE_BLOCK).max(1);
    let best = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let n = SAMPLE_BLOCK.min(sample_count.max(1) - b * SAMPLE_BLOCK);
            let mut best: (f64, Vec<f64>) = (-2.0, Vec::new());
            let mut x = vec![0.0; d];
            for _ in 0..n {
                let mut len2 = 0.0f64;
                for xi in x.iter_mut() {
                    *xi = StandardNormal.sample(&mut rng);
                    len2 += *xi * *xi;
                }
                let inv = 1.0 / len2.sqrt();
                let nearest = points
                    .iter()
                    .map(|p| dot(p.coords(), &x))
                    .fold(f64::NEG_INFINITY, f64::max)
                    * inv;
                // farthest sample = smallest max-cosine
                if best.1.is_empty() || nearest < best.0 {
                    best = (nearest, x.iter().map(|v| v * inv).collect());
                }
            }
            best
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(None::<(f64, Vec<f64>)>, |acc, cur| match acc {
            Some(a) if a.0 <= cur.0 => Some(a),
            _ => Some(cur),
        })
        .expect("at least one block");
    CoveringRadiusResult {
        radius: angle_from_cos(best.0),
        witness: UnitVector::new(best.1).expect("sample is unit"),
        method: RadiusMethod::Sampled {
            samples: sample_count,
            seed,
            bound: sampling_bound(d, sample_count, SAMPLING_CONFIDENCE_FAILURE),
        },
    }
}

/// True iff the set is closed under negation (pairing tolerance 1e-9).
pub fn verify_antipodal(points: &[UnitVector]) -> bool {
    if points.is_empty() {
        return false;
    }
    let n = points.len();
    let mut used = vec![false; n];
    for i in 0..n {
        if used[i] {
            continue;
        }
        let partner = (0..n).find(|&j| {
            j != i
                && !used[j]
                && points[i].dim() == points[j].dim()
                && points[i]
                    .coords()
                    .iter()
                    .zip(points[j].coords())
                    .all(|(a, b)| (a + b).abs() <= ANTIPODAL_TOL)
        });
        match partner {
            Some(j) => {
                used[i] = true;
                used[j] = true;
            }
            None => return false,
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn uv(v: &[f64]) -> UnitVector {
        UnitVector::new(v.to_vec()).unwrap()
    }

    fn axes_pm(d: usize) -> Vec<UnitVector> {
        (0..d)
            .flat_map(|i| {
                let e = UnitVector::axis(d, i);
                [e.clone(), e.neg()]
            })
            .collect()
    }

    #[test]
    fn cross_polytope_radius() {
        for d in 2..=6 {
            let r = covering_radius_exact(&axes_pm(d)).unwrap();
            assert!((r.radius - (1.0 / d as f64).sqrt().acos()).abs() < 1e-12);
        }
    }

    #[test]
    fn single_pair_on_circle_is_quarter_turn() {
        let e = UnitVector::axis(2, 0);
        let r = covering_radius_exact(&[e.clone(), e.neg()]).unwrap();
        assert!((r.radius - FRAC_PI_2).abs() < 1e-15);
        assert!(r.witness.dot(&e).abs() < 1e-12);
    }

    #[test]
    fn single_pair_on_s2_sampled_approaches_quarter_turn() {
        let e = UnitVector::axis(3, 2);
        let pts = [e.clone(), e.neg()];
        assert!((covering_radius_exact(&pts).unwrap().radius - FRAC_PI_2).abs() < 1e-15);
        let s = covering_radius_sampled(&pts, 100_000, 5);
        assert!(s.radius <= FRAC_PI_2 + 1e-12 && s.radius > FRAC_PI_2 - 0.01);
    }

    #[test]
    fn origin_outside_is_an_error() {
        let pts = [
            uv(&[1.0, 0.0, 0.1]),
            uv(&[0.0, 1.0, 0.1]),
            uv(&[-1.0, -1.0, 0.3]),
            uv(&[0.0, 0.0, 1.0]),
        ];
        assert_eq!(
            covering_radius_exact(&pts),
            Err(CoveringError::OriginNotInterior)
        );
        let flat_off = [uv(&[1.0, 0.0, 0.0]), uv(&[0.0, 1.0, 0.0])];
        assert_eq!(
            covering_radius_exact(&flat_off),
            Err(CoveringError::OriginNotInterior)
        );
    }

    #[test]
    fn witness_realizes_radius() {
        let pts = axes_pm(4);
        let r = covering_radius_exact(&pts).unwrap();
        let min = pts
            .iter()
            .map(|p| angle_from_cos(p.dot(&r.witness)))
            .fold(PI, f64::min);
        assert!((min - r.radius).abs() < 1e-8);
    }

    #[test]
    fn sampled_is_deterministic_and_below_exact() {
        let pts = axes_pm(3);
        let a = covering_radius_sampled(&pts, 50_000, 42);
        let b = covering_radius_sampled(&pts, 50_000, 42);
        assert_eq!(a, b);
        let exact = covering_radius_exact(&pts).unwrap().radius;
        assert!(a.radius <= exact + 1e-12);
        assert!(exact - a.radius <= a.uncertainty());
    }

    #[test]
    fn cap_fraction_matches_closed_forms() {
        // S^2: (1 - cos δ) / 2
        for &delta in &[0.1, 0.7, 1.5, 2.0] {
            assert!((cap_fraction(3, delta) - (1.0 - f64::cos(delta)) / 2.0).abs() < 1e-12);
        }
        // S^1: δ / π
        assert!((cap_fraction(2, 0.3) - 0.3 / PI).abs() < 1e-12);
    }

    #[test]
    fn antipodal_verification() {
        assert!(verify_antipodal(&axes_pm(3)));
        assert!(!verify_antipodal(&[
            UnitVector::axis(3, 0),
            UnitVector::axis(3, 1)
        ]));
        let mut odd = axes_pm(3);
        odd.pop();
        assert!(!verify_antipodal(&odd));
    }

    #[test]
    fn config_rejects_coincident_points() {
        let e = UnitVector::axis(3, 0);
        let r = AntipodalConfig::new(3, vec![e.clone(), e.neg()], Provenance::Loaded("t".into()));
        assert!(matches!(r, Err(CoveringError::Coincident(..))));
    }

    #[test]
    fn adding_a_point_never_increases_radius() {
        let mut pts = axes_pm(3);
        let before = covering_radius_exact(&pts).unwrap().radius;
        pts.push(uv(&[1.0, 1.0, 1.0]));
        pts.push(uv(&[-1.0, -1.0, -1.0]));
        let after = covering_radius_exact(&pts).unwrap().radius;
        assert!(after <= before + 1e-12);
    }
}
