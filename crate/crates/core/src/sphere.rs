//! Points, distances and caps on the unit sphere S^(d-1).
//!
//! All angles are radians. Inner products are clamped to [-1, 1] before
//! `acos`; rounding drift there is at most a few ulps.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{dot, norm, solve};
use crate::lp::{LinearProgram, LpOutcome, Relation};

/// Norm tolerance for an already-normalized vector.
pub const UNIT_TOL: f64 = 1e-12;
/// Margin for the open-hemisphere feasibility test.
pub const HEMISPHERE_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SphereError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("sphere dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("cannot normalize a zero or non-finite vector")]
    ZeroVector,
    #[error("point set is empty")]
    Empty,
    #[error("points are not contained in any open hemisphere")]
    NoHemisphere,
    #[error("points are linearly dependent; no unique circumcenter")]
    Degenerate,
    #[error("circumcenter needs between 2 and {max} points, got {got}")]
    BadCount { got: usize, max: usize },
}

/// A point of S^(d-1); construction normalizes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct UnitVector(Vec<f64>);

impl UnitVector {
    pub fn new(coords: Vec<f64>) -> Result<Self, SphereError> {
        if coords.len() < 2 {
            return Err(SphereError::DimensionTooSmall(coords.len()));
        }
        let n = norm(&coords);
        if !(n.is_finite() && n > 0.0) {
            return Err(SphereError::ZeroVector);
        }
        if (n - 1.0).abs() <= UNIT_TOL {
            // already unit: keep the exact bits so serialized configs round-trip
            return Ok(UnitVector(coords));
        }
        Ok(UnitVector(coords.into_iter().map(|x| x / n).collect()))
    }

    /// The coordinate axis `e_{axis}` of E^d (zero based).
    pub fn axis(dim: usize, axis: usize) -> Self {
        assert!(dim >= 2 && axis < dim);
        let mut v = vec![0.0; dim];
        v[axis] = 1.0;
        UnitVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, other: &UnitVector) -> f64 {
        dot(&self.0, &other.0)
    }

    pub fn neg(&self) -> UnitVector {
        UnitVector(self.0.iter().map(|x| -x).collect())
    }

    /// Applies an orthogonal matrix given by rows.
    pub fn rotate(&self, q: &[Vec<f64>]) -> UnitVector {
        UnitVector::new(crate::linalg::mat_vec(q, &self.0)).expect("rotation keeps norm")
    }
}

impl TryFrom<Vec<f64>> for UnitVector {
    type Error = SphereError;
    fn try_from(v: Vec<f64>) -> Result<Self, Self::Error> {
        UnitVector::new(v)
    }
}

impl From<UnitVector> for Vec<f64> {
    fn from(u: UnitVector) -> Self {
        u.0
    }
}

impl fmt::Display for UnitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x:.6}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SphericalCap {
    pub center: UnitVector,
    pub radius: f64,
}

impl SphericalCap {
    pub fn contains(&self, p: &UnitVector, tol: f64) -> bool {
        angle_from_cos(self.center.dot(p)) <= self.radius + tol
    }
}

#[inline]
pub fn angle_from_cos(c: f64) -> f64 {
    c.clamp(-1.0, 1.0).acos()
}

pub fn geodesic_distance(p: &UnitVector, q: &UnitVector) -> Result<f64, SphereError> {
    if p.dim() != q.dim() {
        return Err(SphereError::DimensionMismatch(p.dim(), q.dim()));
    }
    Ok(angle_from_cos(p.dot(q)))
}

fn common_dim(points: &[UnitVector]) -> Result<usize, SphereError> {
    let d = points.first().ok_or(SphereError::Empty)?.dim();
    match points.iter().find(|p| p.dim() != d) {
        Some(p) => Err(SphereError::DimensionMismatch(d, p.dim())),
        None => Ok(d),
    }
}

/// Is there a `c` with `<c, p> > 0` for every point? Solved as
/// `max t  s.t. <c, p_i> >= t, |c_j| <= 1, t <= 1`.
pub fn in_open_hemisphere(points: &[UnitVector]) -> Result<bool, SphereError> {
    let d = common_dim(points)?;
    let mut lp = LinearProgram::new(d + 1).all_free().maximize({
        let mut o = vec![0.0; d + 1];
        o[d] = 1.0;
        o
    });
    for p in points {
        let mut row = p.coords().to_vec();
        row.push(-1.0);
        lp.constraint(row, Relation::Ge, 0.0);
    }
    for j in 0..=d {
        let mut row = vec![0.0; d + 1];
        row[j] = 1.0;
        lp.constraint(row.clone(), Relation::Le, 1.0);
        if j < d {
            lp.constraint(row, Relation::Ge, -1.0);
        }
    }
    Ok(match lp.solve() {
        LpOutcome::Optimal { value, .. } => value > HEMISPHERE_TOL,
        _ => false,
    })
}

/// Spherical circumcenter of 2..=d linearly independent points: the point of
/// their span, on their side, at equal distance from all of them.
pub fn circumcenter(points: &[UnitVector]) -> Result<(UnitVector, f64), SphereError> {
    let d = common_dim(points)?;
    let k = points.len();
    if !(2..=d).contains(&k) {
        return Err(SphereError::BadCount { got: k, max: d });
    }
    if !in_open_hemisphere(points)? {
        return Err(SphereError::NoHemisphere);
    }
    // c' = sum lambda_j p_j with Gram * lambda = 1 gives <c', p_i> = 1
    let gram: Vec<Vec<f64>> = points
        .iter()
        .map(|p| points.iter().map(|q| p.dot(q)).collect())
        .collect();
    let lambda = solve(gram, vec![1.0; k], 1e-12).ok_or(SphereError::Degenerate)?;
    let mut c = vec![0.0; d];
    for (l, p) in lambda.iter().zip(points) {
        c.iter_mut()
            .zip(p.coords())
            .for_each(|(ci, x)| *ci += l * x);
    }
    let len = norm(&c);
    if !(len.is_finite() && len > 0.0) {
        return Err(SphereError::Degenerate);
    }
    let center = UnitVector::new(c)?;
    Ok((center, angle_from_cos(1.0 / len)))
}

/// Result of a minimal enclosing cap computation: the cap plus the boundary
/// points whose nonnegative combination is the center direction.
#[derive(Clone, Debug)]
pub struct EnclosingCap {
    pub cap: SphericalCap,
    pub support: Vec<usize>,
    pub weights: Vec<f64>,
}

/// Smallest cap containing every point.
pub fn min_enclosing_cap(points: &[UnitVector]) -> Result<SphericalCap, SphereError> {
    min_enclosing_cap_with_support(points).map(|e| e.cap)
}

/// Smallest enclosing cap via the minimum-norm point of the Euclidean hull.
///
/// For points in an open hemisphere, `max_{|c|=1} min_i <c, p_i>` equals the
/// distance from the origin to `conv(points)` and is attained at the
/// normalized nearest point. Wolfe's algorithm finds that point together with
/// an affinely independent support set carrying positive weights.
pub fn min_enclosing_cap_with_support(points: &[UnitVector]) -> Result<EnclosingCap, SphereError> {
    let d = common_dim(points)?;
    if !in_open_hemisphere(points)? {
        return Err(SphereError::NoHemisphere);
    }
    let pts: Vec<&[f64]> = points.iter().map(|p| p.coords()).collect();
    let (x, support, weights) = wolfe_min_norm_point(&pts, d);
    let len = norm(&x);
    let center = UnitVector::new(x).map_err(|_| SphereError::NoHemisphere)?;
    // radius from the farthest point rather than |x|, which absorbs solver drift
    let radius = points
        .iter()
        .map(|p| angle_from_cos(center.dot(p)))
        .fold(angle_from_cos(len), f64::max);
    Ok(EnclosingCap {
        cap: SphericalCap { center, radius },
        support,
        weights,
    })
}

/// Wolfe's minimum-norm-point algorithm over `conv(points)`.
fn wolfe_min_norm_point(points: &[&[f64]], d: usize) -> (Vec<f64>, Vec<usize>, Vec<f64>) {
    const EPS: f64 = 1e-12;
    let start = (0..points.len())
        .min_by(|&a, &b| dot(points[a], points[a]).total_cmp(&dot(points[b], points[b])))
        .unwrap();
    let mut corral = vec![start];
    let mut weights = vec![1.0];
    let mut x = points[start].to_vec();

    for _ in 0..1000 {
        // major cycle: most negative <x, p>
        let (j, val) = (0..points.len())
            .map(|j| (j, dot(&x, points[j])))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if val > dot(&x, &x) - EPS || corral.contains(&j) {
            break;
        }
        corral.push(j);
        weights.push(0.0);

        loop {
            // affine minimizer of the corral
            let k = corral.len();
            let mut a = vec![vec![0.0; k + 1]; k + 1];
            for r in 0..k {
                for c in 0..k {
                    a[r][c] = dot(points[corral[r]], points[corral[c]]);
                }
                a[r][k] = 1.0;
                a[k][r] = 1.0;
            }
            let mut rhs = vec![0.0; k + 1];
            rhs[k] = 1.0;
            let Some(sol) = solve(a, rhs, 1e-14) else {
                // dependent corral: drop the newest point
                corral.pop();
                weights.pop();
                break;
            };
            let alpha = &sol[..k];
            if alpha.iter().all(|&v| v > EPS) {
                weights = alpha.to_vec();
                break;
            }
            // minor cycle: step toward alpha until a weight hits zero
            let theta = weights
                .iter()
                .zip(alpha)
                .filter(|(_, &al)| al <= EPS)
                .map(|(&w, &al)| w / (w - al))
                .fold(1.0f64, f64::min);
            for (w, &al) in weights.iter_mut().zip(alpha) {
                *w = theta * al + (1.0 - theta) * *w;
            }
            let mut i = 0;
            while i < corral.len() {
                if weights[i] <= EPS {
                    corral.remove(i);
                    weights.remove(i);
                } else {
                    i += 1;
                }
            }
        }
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        x = vec![0.0; d];
        for (w, &c) in weights.iter().zip(&corral) {
            x.iter_mut().zip(points[c]).for_each(|(xi, p)| *xi += w * p);
        }
    }
    (x, corral, weights)
}
