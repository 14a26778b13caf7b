//! Facet enumeration for convex hulls of small point sets in E^d.
//!
//! Two passes. The fast pass is beneath-beyond insertion on the raw input: a
//! new point removes the facets it sees and cones the horizon ridges to
//! itself. It gives up as soon as any point is within 1e-10 of a facet
//! hyperplane. The configurations fed in here are highly symmetric, so that
//! happens often; the fallback is gift wrapping over facets represented as
//! point sets (every input point within tolerance of the hyperplane), with
//! ridges of non-simplicial facets found by recursing one dimension down.
//! Non-simplicial facets are reported as triangulated pieces sharing one
//! normal.

use std::collections::{HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::linalg::{
    affine_dimension, dot, hyperplane_normal, norm, orthonormal_basis, solve, sub,
};
use crate::sphere::UnitVector;

/// Containment / incidence tolerance on facet hyperplanes.
pub const HULL_TOL: f64 = 1e-8;
/// Coplanarity threshold: points this close to a hyperplane lie on it.
pub const COPLANAR_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HullError {
    #[error("input is flat: affine dimension {affine_dim} < {dim}")]
    Degenerate { affine_dim: usize, dim: usize },
    #[error("points have inconsistent dimensions")]
    DimensionMismatch,
    #[error("hull dimension must be at least 2")]
    DimensionTooSmall,
    #[error("hull construction failed numerical validation")]
    Numerical,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HullFacet {
    /// Indices of the `d` input points spanning this (piece of a) facet, sorted.
    pub vertex_indices: Vec<usize>,
    pub outward_normal: UnitVector,
    /// `<outward_normal, x> = support_offset` on the facet; positive when the
    /// origin lies on the inner side.
    pub support_offset: f64,
    /// False for pieces of a triangulated non-simplicial facet.
    pub simplicial: bool,
    /// Pieces of the same geometric facet share a group id.
    pub group: usize,
}

/// A geometric facet: every input point lying on one facet hyperplane.
#[derive(Clone, Debug, PartialEq)]
pub struct FacetGroup {
    pub vertices: Vec<usize>,
    pub outward_normal: UnitVector,
    pub support_offset: f64,
}

#[derive(Clone, Debug)]
pub struct ConvexHull {
    dim: usize,
    facets: Vec<HullFacet>,
    groups: Vec<FacetGroup>,
    wrapped: bool,
}

impl ConvexHull {
    pub fn new(points: &[Vec<f64>]) -> Result<Self, HullError> {
        let dim = points.first().map(|p| p.len()).unwrap_or(0);
        if points.iter().any(|p| p.len() != dim) {
            return Err(HullError::DimensionMismatch);
        }
        if dim < 2 {
            return Err(HullError::DimensionTooSmall);
        }
        let (scaled, scale) = normalize_cloud(points);
        let greedy = if points.len() < dim + 1 {
            Err(affine_dimension(&scaled, COPLANAR_TOL))
        } else {
            initial_simplex(&scaled)
        };
        let greedy = greedy.map_err(|affine_dim| HullError::Degenerate { affine_dim, dim })?;

        let (planes, wrapped) = match incremental(&scaled, greedy) {
            Some(p) => (p, false),
            None => (wrap(&scaled)?, true),
        };
        let hull = assemble(&scaled, planes, wrapped)?;
        Ok(hull.rescaled(scale))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[HullFacet] {
        &self.facets
    }

    pub fn into_facets(self) -> Vec<HullFacet> {
        self.facets
    }

    pub fn groups(&self) -> &[FacetGroup] {
        &self.groups
    }

    /// Whether the degenerate-input (gift wrapping) pass was used.
    pub fn wrapped(&self) -> bool {
        self.wrapped
    }

    pub fn is_simplicial(&self) -> bool {
        self.facets.iter().all(|f| f.simplicial)
    }

    /// Input points that lie on at least one facet.
    pub fn vertices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .groups
            .iter()
            .flat_map(|g| g.vertices.iter().copied())
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    fn rescaled(mut self, scale: f64) -> Self {
        self.facets
            .iter_mut()
            .for_each(|f| f.support_offset *= scale);
        self.groups
            .iter_mut()
            .for_each(|g| g.support_offset *= scale);
        self
    }
}

/// Complete facet list of the hull of `points`.
pub fn convex_hull_facets(points: &[Vec<f64>]) -> Result<Vec<HullFacet>, HullError> {
    ConvexHull::new(points).map(ConvexHull::into_facets)
}

/// True iff the origin is strictly inside every facet.
pub fn contains_origin_interior(facets: &[HullFacet]) -> bool {
    !facets.is_empty() && facets.iter().all(|f| f.support_offset > HULL_TOL)
}

fn normalize_cloud(points: &[Vec<f64>]) -> (Vec<Vec<f64>>, f64) {
    let scale = points
        .iter()
        .flat_map(|p| p.iter())
        .fold(0.0f64, |m, x| m.max(x.abs()))
        .max(f64::MIN_POSITIVE);
    (
        points
            .iter()
            .map(|p| p.iter().map(|x| x / scale).collect())
            .collect(),
        scale,
    )
}

/// A facet as a point set plus its hyperplane `<normal, x> = offset`.
#[derive(Clone, Debug)]
struct Plane {
    members: Vec<usize>,
    normal: Vec<f64>,
    offset: f64,
}

fn centroid(points: &[Vec<f64>]) -> Vec<f64> {
    let mut c = vec![0.0; points[0].len()];
    for p in points {
        c.iter_mut()
            .zip(p)
            .for_each(|(ci, x)| *ci += x / points.len() as f64);
    }
    c
}

/// Hyperplane through `verts`, oriented away from `interior`.
fn oriented_plane(
    points: &[Vec<f64>],
    verts: &[usize],
    interior: &[f64],
) -> Option<(Vec<f64>, f64)> {
    let refs: Vec<&[f64]> = verts.iter().map(|&i| points[i].as_slice()).collect();
    let mut n = hyperplane_normal(&refs);
    let len = norm(&n);
    if !(len > COPLANAR_TOL) {
        return None;
    }
    n.iter_mut().for_each(|x| *x /= len);
    let mut offset = dot(&n, &points[verts[0]]);
    if dot(&n, interior) > offset {
        n.iter_mut().for_each(|x| *x = -*x);
        offset = -offset;
    }
    Some((n, offset))
}

/// Picks d+1 points spanning E^d greedily by distance to the current affine
/// hull; on failure returns the affine dimension reached.
fn initial_simplex(points: &[Vec<f64>]) -> Result<Vec<usize>, usize> {
    let d = points[0].len();
    let first = (0..points.len())
        .min_by(|&a, &b| points[a][0].total_cmp(&points[b][0]))
        .unwrap();
    let mut chosen = vec![first];
    // residuals of every point against the affine hull of `chosen`
    let mut residual: Vec<Vec<f64>> = points.iter().map(|p| sub(p, &points[first])).collect();
    while chosen.len() < d + 1 {
        let (best, len) = residual
            .iter()
            .map(|r| norm(r))
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if len <= COPLANAR_TOL {
            return Err(chosen.len() - 1);
        }
        let b: Vec<f64> = residual[best].iter().map(|x| x / len).collect();
        for r in residual.iter_mut() {
            let c = dot(r, &b);
            r.iter_mut().zip(&b).for_each(|(x, y)| *x -= c * y);
        }
        chosen.push(best);
    }
    Ok(chosen)
}

/// Walks the simplex until it holds the centroid of all points strictly
/// inside: a facet then never passes through the center, which removes the
/// systematic coplanarities of centrally symmetric input.
fn centered_simplex(points: &[Vec<f64>], fallback: Vec<usize>) -> Vec<usize> {
    let d = points[0].len();
    let c = centroid(points);
    // d points spanning E^d around the centroid, then the point farthest
    // beyond their hyperplane on the centroid's side
    let mut simplex: Vec<usize> = Vec::with_capacity(d + 1);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    while simplex.len() < d {
        let residual = |i: usize| {
            let mut r = sub(&points[i], &c);
            for b in &basis {
                let k = dot(&r, b);
                r.iter_mut().zip(b).for_each(|(x, y)| *x -= k * y);
            }
            r
        };
        let (best, len) = (0..points.len())
            .map(|i| (i, norm(&residual(i))))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if len <= COPLANAR_TOL {
            return fallback;
        }
        let r = residual(best);
        basis.extend(orthonormal_basis([r.as_slice()], 0.0));
        simplex.push(best);
    }
    let Some((normal, offset)) = oriented_plane(points, &simplex, &c) else {
        return fallback;
    };
    let apex = (0..points.len())
        .min_by(|&x, &y| dot(&normal, &points[x]).total_cmp(&dot(&normal, &points[y])));
    match apex {
        Some(j) if dot(&normal, &points[j]) < offset - COPLANAR_TOL => simplex.push(j),
        _ => return fallback,
    }
    for _ in 0..4 * d + 8 {
        let mut a: Vec<Vec<f64>> = (0..d)
            .map(|r| simplex.iter().map(|&i| points[i][r]).collect())
            .collect();
        a.push(vec![1.0; d + 1]);
        let mut rhs = c.clone();
        rhs.push(1.0);
        let Some(lambda) = solve(a, rhs, 1e-14) else {
            return fallback;
        };
        let (k, &low) = lambda
            .iter()
            .enumerate()
            .min_by(|x, y| x.1.total_cmp(y.1))
            .unwrap();
        if low > 1e-6 {
            return simplex;
        }
        let rest = omit(&simplex, k);
        let Some((normal, offset)) = oriented_plane(points, &rest, &points[simplex[k]]) else {
            return fallback;
        };
        // the point farthest beyond the facet that faces the centroid
        let next = (0..points.len())
            .filter(|i| !simplex.contains(i))
            .max_by(|&x, &y| dot(&normal, &points[x]).total_cmp(&dot(&normal, &points[y])));
        match next {
            Some(j) if dot(&normal, &points[j]) - offset > COPLANAR_TOL => simplex[k] = j,
            _ => return fallback,
        }
    }
    fallback
}

fn omit(verts: &[usize], skip: usize) -> Vec<usize> {
    verts
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != skip)
        .map(|(_, &v)| v)
        .collect()
}

/// Beneath-beyond on general-position input; `None` on any coplanarity.
fn incremental(points: &[Vec<f64>], greedy: Vec<usize>) -> Option<Vec<Plane>> {
    let d = points[0].len();
    let simplex = centered_simplex(points, greedy);
    let interior = centroid(
        &simplex
            .iter()
            .map(|&i| points[i].clone())
            .collect::<Vec<_>>(),
    );

    let mut facets: Vec<(Plane, bool)> = Vec::new();
    for skip in 0..=d {
        let mut verts = omit(&simplex, skip);
        verts.sort_unstable();
        let (normal, offset) = oriented_plane(points, &verts, &interior)?;
        facets.push((
            Plane {
                members: verts,
                normal,
                offset,
            },
            true,
        ));
    }

    let mut ridge_count: HashMap<Vec<usize>, usize> = HashMap::new();
    for p in 0..points.len() {
        if simplex.contains(&p) {
            continue;
        }
        let mut visible = Vec::new();
        for (fi, (f, alive)) in facets.iter().enumerate() {
            if !alive {
                continue;
            }
            let dist = dot(&f.normal, &points[p]) - f.offset;
            if dist.abs() <= COPLANAR_TOL {
                return None;
            }
            if dist > 0.0 {
                visible.push(fi);
            }
        }
        if visible.is_empty() {
            continue;
        }
        ridge_count.clear();
        for &fi in &visible {
            let verts = &facets[fi].0.members;
            for skip in 0..verts.len() {
                *ridge_count.entry(omit(verts, skip)).or_insert(0) += 1;
            }
            facets[fi].1 = false;
        }
        let mut horizon: Vec<&Vec<usize>> = ridge_count
            .iter()
            .filter(|&(_, &c)| c == 1)
            .map(|(r, _)| r)
            .collect();
        horizon.sort_unstable();
        for ridge in horizon {
            let mut verts = ridge.clone();
            verts.push(p);
            verts.sort_unstable();
            let (normal, offset) = oriented_plane(points, &verts, &interior)?;
            facets.push((
                Plane {
                    members: verts,
                    normal,
                    offset,
                },
                true,
            ));
        }
    }
    let planes: Vec<Plane> = facets
        .into_iter()
        .filter(|(_, alive)| *alive)
        .map(|(f, _)| f)
        .collect();
    // a vertex inserted early can still land on a later facet's hyperplane
    let touching = planes
        .iter()
        .any(|f| on_plane(points, &f.normal, f.offset).len() != f.members.len());
    (!touching).then_some(planes)
}

fn on_plane(points: &[Vec<f64>], normal: &[f64], offset: f64) -> Vec<usize> {
    (0..points.len())
        .filter(|&i| (dot(normal, &points[i]) - offset).abs() <= COPLANAR_TOL)
        .collect()
}

/// Rotates the supporting hyperplane `(normal, offset)` about the points
/// `anchor` towards `w` until it meets another point.
fn tilt(points: &[Vec<f64>], anchor: &[usize], normal: &[f64], w: &[f64]) -> Option<Plane> {
    let q = &points[anchor[0]];
    let mut best: Option<f64> = None;
    for (i, p) in points.iter().enumerate() {
        if anchor.contains(&i) {
            continue;
        }
        let r = sub(p, q);
        let (a, b) = (dot(normal, &r), dot(w, &r));
        let theta = (-a).max(0.0).atan2(b);
        if best.is_none_or(|t| theta < t) {
            best = Some(theta);
        }
    }
    let theta = best?;
    let (c, s) = (theta.cos(), theta.sin());
    let mut n: Vec<f64> = normal.iter().zip(w).map(|(x, y)| c * x + s * y).collect();
    let len = norm(&n);
    n.iter_mut().for_each(|x| *x /= len);
    let offset = dot(&n, q);
    Some(Plane {
        members: on_plane(points, &n, offset),
        normal: n,
        offset,
    })
}

/// Orthonormal coordinates of `members` inside their affine hull.
fn local_frame(points: &[Vec<f64>], members: &[usize]) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let origin = &points[members[0]];
    let diffs: Vec<Vec<f64>> = members[1..]
        .iter()
        .map(|&i| sub(&points[i], origin))
        .collect();
    let basis = orthonormal_basis(diffs.iter().map(|v| v.as_slice()), COPLANAR_TOL);
    let local = members
        .iter()
        .map(|&i| {
            let r = sub(&points[i], origin);
            basis.iter().map(|b| dot(b, &r)).collect()
        })
        .collect();
    (basis, local)
}

/// Ridges of a facet, each with the in-facet direction pointing out of it.
fn ridges(points: &[Vec<f64>], facet: &Plane) -> Result<Vec<(Vec<usize>, Vec<f64>)>, HullError> {
    let d = points[0].len();
    let m = &facet.members;
    if m.len() == d {
        return Ok((0..d)
            .map(|skip| {
                let ridge = omit(m, skip);
                let r0 = &points[ridge[0]];
                let mut dirs: Vec<Vec<f64>> =
                    ridge[1..].iter().map(|&i| sub(&points[i], r0)).collect();
                dirs.push(facet.normal.clone());
                dirs.push(sub(r0, &points[m[skip]]));
                let basis = orthonormal_basis(dirs.iter().map(|v| v.as_slice()), 0.0);
                (ridge, basis.last().cloned().unwrap_or_default())
            })
            .collect());
    }
    let (basis, local) = local_frame(points, m);
    if basis.len() != d - 1 {
        return Err(HullError::Numerical);
    }
    let sub_planes = if d - 1 == 1 {
        segment_ends(&local)
    } else {
        wrap(&local)?
    };
    Ok(sub_planes
        .into_iter()
        .map(|sp| {
            let ridge = sp.members.iter().map(|&k| m[k]).collect();
            let mut w = vec![0.0; d];
            for (coef, b) in sp.normal.iter().zip(&basis) {
                w.iter_mut().zip(b).for_each(|(wi, bi)| *wi += coef * bi);
            }
            (ridge, w)
        })
        .collect())
}

/// The two "facets" of a 1-dimensional point set.
fn segment_ends(local: &[Vec<f64>]) -> Vec<Plane> {
    let lo = local.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
    let hi = local.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
    let at = |v: f64| {
        (0..local.len())
            .filter(|&i| (local[i][0] - v).abs() <= COPLANAR_TOL)
            .collect()
    };
    vec![
        Plane {
            members: at(lo),
            normal: vec![-1.0],
            offset: -lo,
        },
        Plane {
            members: at(hi),
            normal: vec![1.0],
            offset: hi,
        },
    ]
}

/// Gift wrapping over full-dimensional `points` (dimension >= 2).
fn wrap(points: &[Vec<f64>]) -> Result<Vec<Plane>, HullError> {
    let d = points[0].len();
    let top = (0..points.len())
        .max_by(|&a, &b| points[a][0].total_cmp(&points[b][0]))
        .unwrap();
    let mut normal = vec![0.0; d];
    normal[0] = 1.0;
    let mut start = Plane {
        offset: points[top][0],
        members: on_plane(points, &normal, points[top][0]),
        normal,
    };
    // tilt the supporting hyperplane until it touches a full facet
    for _ in 0..d {
        let (basis, _) = local_frame(points, &start.members);
        if basis.len() >= d - 1 {
            break;
        }
        let mut spanned = basis.clone();
        spanned.push(start.normal.clone());
        let axes: Vec<Vec<f64>> = (0..d)
            .map(|i| UnitVector::axis(d, i).into_coords())
            .collect();
        spanned.extend(axes);
        let full = orthonormal_basis(spanned.iter().map(|v| v.as_slice()), 1e-6);
        let w = full[basis.len() + 1].clone();
        start = tilt(points, &start.members, &start.normal, &w).ok_or(HullError::Numerical)?;
    }

    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(start.members.clone());
    queue.push_back(start);
    while let Some(facet) = queue.pop_front() {
        for (ridge, w) in ridges(points, &facet)? {
            let next = tilt(points, &ridge, &facet.normal, &w).ok_or(HullError::Numerical)?;
            if next.members.len() < d {
                return Err(HullError::Numerical);
            }
            if seen.insert(next.members.clone()) {
                queue.push_back(next);
            }
        }
        out.push(facet);
        if out.len() > 1_000_000 {
            return Err(HullError::Numerical);
        }
    }
    Ok(out)
}

/// Pulling triangulation of a full-dimensional point set: cone the lowest
/// boundary index over every facet not containing it.
fn triangulate(points: &[Vec<f64>]) -> Result<Vec<Vec<usize>>, HullError> {
    let k = points[0].len();
    if k == 1 {
        let ends = segment_ends(points);
        return Ok(vec![vec![ends[0].members[0], ends[1].members[0]]]);
    }
    let planes = wrap(points)?;
    let apex = planes
        .iter()
        .flat_map(|p| p.members.iter())
        .copied()
        .min()
        .unwrap();
    let mut out = Vec::new();
    for p in planes.iter().filter(|p| !p.members.contains(&apex)) {
        let pieces = if p.members.len() == k {
            vec![p.members.clone()]
        } else {
            let (_, local) = local_frame(points, &p.members);
            triangulate(&local)?
                .into_iter()
                .map(|s| s.into_iter().map(|i| p.members[i]).collect())
                .collect()
        };
        for mut s in pieces {
            s.push(apex);
            out.push(s);
        }
    }
    Ok(out)
}

/// Refits planes, splits non-simplicial facets into pieces and validates
/// containment.
fn assemble(
    points: &[Vec<f64>],
    planes: Vec<Plane>,
    wrapped: bool,
) -> Result<ConvexHull, HullError> {
    let d = points[0].len();
    let interior = centroid(points);
    let mut groups = Vec::with_capacity(planes.len());
    let mut facets = Vec::new();
    for (gid, mut plane) in planes.into_iter().enumerate() {
        plane.members.sort_unstable();
        if plane.members.len() == d {
            let (n, off) =
                oriented_plane(points, &plane.members, &interior).ok_or(HullError::Numerical)?;
            plane.normal = n;
            plane.offset = off;
        } else if dot(&plane.normal, &interior) > plane.offset {
            return Err(HullError::Numerical);
        }
        if points
            .iter()
            .any(|p| dot(&plane.normal, p) > plane.offset + HULL_TOL)
        {
            return Err(HullError::Numerical);
        }
        let normal = UnitVector::new(plane.normal.clone()).map_err(|_| HullError::Numerical)?;
        if plane.members.len() == d {
            facets.push(HullFacet {
                vertex_indices: plane.members.clone(),
                outward_normal: normal.clone(),
                support_offset: plane.offset,
                simplicial: true,
                group: gid,
            });
        } else {
            let (_, local) = local_frame(points, &plane.members);
            for piece in triangulate(&local)? {
                let mut verts: Vec<usize> = piece.into_iter().map(|i| plane.members[i]).collect();
                verts.sort_unstable();
                facets.push(HullFacet {
                    vertex_indices: verts,
                    outward_normal: normal.clone(),
                    support_offset: plane.offset,
                    simplicial: false,
                    group: gid,
                });
            }
        }
        groups.push(FacetGroup {
            vertices: plane.members,
            outward_normal: normal,
            support_offset: plane.offset,
        });
    }
    Ok(ConvexHull {
        dim: d,
        facets,
        groups,
        wrapped,
    })
}
