//! Polytopes given by their vertices: normal cones, X-ray line checks, a
//! line-set search, and the antipodal / weakly neighbourly tests.
//!
//! A line `L` X-rays every point of a face `F` iff `L^⊥` misses the Gauss
//! image of `F`, i.e. iff all generators of the normal cone have inner
//! products of one strict sign with the direction of `L`. Every face cone is
//! a subcone of the cone of each of its vertices, so a line that X-rays a
//! vertex X-rays every face through it; checking vertices suffices.

use std::fs;
use std::path::Path;

use fixedbitset::FixedBitSet;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hull::{ConvexHull, HullError};
use crate::linalg::{dot, norm, orthonormal_basis, sub};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::sphere::{min_enclosing_cap, UnitVector};

/// Strictness of the sign test.
pub const SIGN_TOL: f64 = 1e-10;
/// Inner products below this in absolute value mark a vertex as marginal.
pub const MARGINAL_TOL: f64 = 1e-8;
/// Two directions closer than this (up to sign) are the same line.
pub const PARALLEL_TOL: f64 = 1e-9;
/// Largest candidate pool solved by exhaustive set cover.
pub const EXACT_COVER_LIMIT: usize = 20;

#[derive(Debug, Error)]
pub enum PolytopeError {
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("vertex {index} has {got} coordinates, expected {dim}")]
    PointDimension {
        index: usize,
        got: usize,
        dim: usize,
    },
    #[error("points are not in convex position: {0:?} are not vertices")]
    NotConvexPosition(Vec<usize>),
    #[error("vertex set {0:?} is not a face")]
    NotAFace(Vec<usize>),
    #[error("vertex index {0} out of range")]
    VertexIndex(usize),
    #[error("a pair test needs two distinct vertices, got {0} twice")]
    SameVertex(usize),
    #[error("line directions must live in E^{expected}, got E^{got}")]
    LineDimension { expected: usize, got: usize },
    #[error("no candidate line X-rays vertices {0:?}")]
    Uncoverable(Vec<usize>),
    #[error("linear program did not terminate")]
    LpStalled,
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error(transparent)]
    Hull(#[from] HullError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Facet {
    pub vertices: Vec<usize>,
    pub normal: UnitVector,
    pub offset: f64,
}

#[derive(Clone, Debug)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Vec<f64>>,
    facets: Vec<Facet>,
    /// Facet indices through each vertex.
    incidence: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct PolytopeFile {
    dim: usize,
    vertices: Vec<Vec<f64>>,
}

impl Polytope {
    /// Builds the facet structure; every input point must be a vertex.
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Self, PolytopeError> {
        let dim = vertices.first().map_or(0, |v| v.len());
        if dim < 2 {
            return Err(PolytopeError::DimensionTooSmall(dim));
        }
        for (index, v) in vertices.iter().enumerate() {
            if v.len() != dim {
                return Err(PolytopeError::PointDimension {
                    index,
                    got: v.len(),
                    dim,
                });
            }
        }
        let hull = ConvexHull::new(&vertices)?;
        let facets: Vec<Facet> = hull
            .groups()
            .iter()
            .map(|g| Facet {
                vertices: g.vertices.clone(),
                normal: g.outward_normal.clone(),
                offset: g.support_offset,
            })
            .collect();
        let mut incidence = vec![Vec::new(); vertices.len()];
        for (f, facet) in facets.iter().enumerate() {
            for &v in &facet.vertices {
                incidence[v].push(f);
            }
        }
        // a vertex is extreme iff the normals of its facets span E^d
        let interior: Vec<usize> = (0..vertices.len())
            .filter(|&v| {
                let rank = orthonormal_basis(
                    incidence[v].iter().map(|&f| facets[f].normal.coords()),
                    1e-9,
                )
                .len();
                rank < dim
            })
            .collect();
        if !interior.is_empty() {
            return Err(PolytopeError::NotConvexPosition(interior));
        }
        Ok(Polytope {
            dim,
            vertices,
            facets,
            incidence,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Facets containing vertex `v`.
    pub fn incident_facets(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    pub fn from_json(text: &str) -> Result<Self, PolytopeError> {
        let file: PolytopeFile =
            serde_json::from_str(text).map_err(|e| PolytopeError::Malformed(e.to_string()))?;
        if let Some(index) = file.vertices.iter().position(|v| v.len() != file.dim) {
            return Err(PolytopeError::PointDimension {
                index,
                got: file.vertices[index].len(),
                dim: file.dim,
            });
        }
        Polytope::new(file.vertices)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&PolytopeFile {
            dim: self.dim,
            vertices: self.vertices.clone(),
        })
        .expect("serializable")
    }

    pub fn load(path: &Path) -> Result<Self, PolytopeError> {
        Polytope::from_json(&fs::read_to_string(path)?)
    }

    fn check_vertex(&self, v: usize) -> Result<(), PolytopeError> {
        if v < self.vertices.len() {
            Ok(())
        } else {
            Err(PolytopeError::VertexIndex(v))
        }
    }

    fn centroid(&self) -> Vec<f64> {
        let n = self.vertices.len() as f64;
        (0..self.dim)
            .map(|j| self.vertices.iter().map(|v| v[j]).sum::<f64>() / n)
            .collect()
    }
}

/// Outward normals of the facets containing a face.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalCone {
    pub face: Vec<usize>,
    pub generators: Vec<UnitVector>,
}

/// The normal cone of the face with vertex set `face`.
pub fn normal_cone(p: &Polytope, face: &[usize]) -> Result<NormalCone, PolytopeError> {
    let mut face = face.to_vec();
    face.sort_unstable();
    face.dedup();
    if face.is_empty() {
        return Err(PolytopeError::NotAFace(face));
    }
    for &v in &face {
        p.check_vertex(v)?;
    }
    let containing: Vec<&Facet> = p.incidence[face[0]]
        .iter()
        .map(|&f| &p.facets[f])
        .filter(|f| face.iter().all(|v| f.vertices.contains(v)))
        .collect();
    if containing.is_empty() {
        return Err(PolytopeError::NotAFace(face));
    }
    // the face spanned by these facets is the intersection of their vertex sets
    let closure: Vec<usize> = containing[0]
        .vertices
        .iter()
        .copied()
        .filter(|v| containing.iter().all(|f| f.vertices.contains(v)))
        .collect();
    if closure != face {
        return Err(PolytopeError::NotAFace(face));
    }
    let generators: Vec<UnitVector> = containing.iter().map(|f| f.normal.clone()).collect();
    debug_assert!(
        crate::sphere::in_open_hemisphere(&generators).unwrap_or(false),
        "normal cone of a face of a full-dimensional polytope is pointed"
    );
    Ok(NormalCone { face, generators })
}

/// Smallest `|<g, dir>|` over generators when all have one strict sign, else `None`.
fn xray_strictness(cone: &NormalCone, dir: &[f64]) -> Option<f64> {
    let (mut pos, mut neg, mut least) = (true, true, f64::INFINITY);
    for g in &cone.generators {
        let t = dot(g.coords(), dir);
        pos &= t > SIGN_TOL;
        neg &= t < -SIGN_TOL;
        least = least.min(t.abs());
    }
    (pos || neg).then_some(least)
}

/// Whether the line spanned by `direction` X-rays every point of the face.
pub fn line_xrays_face(cone: &NormalCone, direction: &UnitVector) -> bool {
    xray_strictness(cone, direction.coords()).is_some()
}

/// Lines through the origin, one unit direction each, no two parallel.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineSet {
    pub dim: usize,
    pub lines: Vec<UnitVector>,
}

impl LineSet {
    /// Normalizes and drops repeated lines (either orientation).
    pub fn new(dim: usize, directions: Vec<UnitVector>) -> Result<Self, PolytopeError> {
        let mut lines: Vec<UnitVector> = Vec::with_capacity(directions.len());
        for d in directions {
            if d.dim() != dim {
                return Err(PolytopeError::LineDimension {
                    expected: dim,
                    got: d.dim(),
                });
            }
            if !lines.iter().any(|l| parallel(l, &d)) {
                lines.push(d);
            }
        }
        Ok(LineSet { dim, lines })
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn from_json(text: &str) -> Result<Self, PolytopeError> {
        #[derive(Deserialize)]
        struct Raw {
            dim: usize,
            lines: Vec<Vec<f64>>,
        }
        let raw: Raw =
            serde_json::from_str(text).map_err(|e| PolytopeError::Malformed(e.to_string()))?;
        let dirs = raw
            .lines
            .into_iter()
            .map(|l| UnitVector::new(l).map_err(|e| PolytopeError::Malformed(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        LineSet::new(raw.dim, dirs)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn load(path: &Path) -> Result<Self, PolytopeError> {
        LineSet::from_json(&fs::read_to_string(path)?)
    }
}

fn parallel(a: &UnitVector, b: &UnitVector) -> bool {
    let (x, y) = (a.coords(), b.coords());
    let minus = x
        .iter()
        .zip(y)
        .map(|(p, q)| (p - q).powi(2))
        .sum::<f64>()
        .sqrt();
    let plus = x
        .iter()
        .zip(y)
        .map(|(p, q)| (p + q).powi(2))
        .sum::<f64>()
        .sqrt();
    minus.min(plus) <= PARALLEL_TOL
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct XrayReport {
    pub covered: bool,
    /// Vertices no line X-rays.
    pub failing_vertices: Vec<usize>,
    /// Covered vertices whose best line has some `|<g, dir>| < 1e-8`; a small
    /// perturbation of the lines may uncover them.
    pub marginal_vertices: Vec<usize>,
    /// For each vertex, the index of its most strictly X-raying line.
    pub witness_lines: Vec<Option<usize>>,
}

/// Coverage matrix: `strictness[v][l]` for vertex cones against lines.
fn coverage(cones: &[NormalCone], lines: &[UnitVector]) -> Vec<Vec<Option<f64>>> {
    cones
        .par_iter()
        .map(|c| {
            lines
                .iter()
                .map(|l| xray_strictness(c, l.coords()))
                .collect()
        })
        .collect()
}

fn vertex_cones(p: &Polytope) -> Vec<NormalCone> {
    (0..p.vertex_count())
        .map(|v| normal_cone(p, &[v]).expect("a vertex is a face"))
        .collect()
}

/// Checks that every vertex cone, hence every face, is X-rayed by some line.
pub fn verify_xray_lines(p: &Polytope, lines: &LineSet) -> Result<XrayReport, PolytopeError> {
    if lines.dim != p.dim {
        return Err(PolytopeError::LineDimension {
            expected: p.dim,
            got: lines.dim,
        });
    }
    let matrix = coverage(&vertex_cones(p), &lines.lines);
    let mut report = XrayReport {
        covered: true,
        failing_vertices: Vec::new(),
        marginal_vertices: Vec::new(),
        witness_lines: Vec::new(),
    };
    for (v, row) in matrix.iter().enumerate() {
        let best = row
            .iter()
            .enumerate()
            .filter_map(|(l, s)| s.map(|s| (l, s)))
            .max_by(|a, b| a.1.total_cmp(&b.1));
        match best {
            None => {
                report.covered = false;
                report.failing_vertices.push(v);
            }
            Some((_, s)) if s < MARGINAL_TOL => report.marginal_vertices.push(v),
            Some(_) => {}
        }
        report.witness_lines.push(best.map(|b| b.0));
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct XraySearch {
    pub count: usize,
    pub lines: LineSet,
    /// Distinct candidate lines left after dominance pruning.
    pub candidates: usize,
    /// Whether the set cover was solved exhaustively (so `count` is minimal
    /// over the pool).
    pub exact: bool,
}

/// Candidate lines: facet normals, vertex directions from the centroid,
/// centers of the vertex Gauss images, and `random` uniform directions.
fn candidate_pool(p: &Polytope, random: usize, seed: u64) -> Vec<UnitVector> {
    let mut pool: Vec<UnitVector> = p.facets.iter().map(|f| f.normal.clone()).collect();
    let c = p.centroid();
    pool.extend(
        p.vertices
            .iter()
            .filter_map(|v| UnitVector::new(sub(v, &c)).ok()),
    );
    for cone in vertex_cones(p) {
        if let Ok(cap) = min_enclosing_cap(&cone.generators) {
            pool.push(cap.center);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random {
        let x: Vec<f64> = (0..p.dim)
            .map(|_| StandardNormal.sample(&mut rng))
            .collect();
        if norm(&x) > 1e-12 {
            pool.push(UnitVector::new(x).expect("nonzero"));
        }
    }
    pool
}

/// Removes empty and dominated columns; among equal ones the first survives.
fn prune(sets: Vec<(usize, FixedBitSet)>) -> Vec<(usize, FixedBitSet)> {
    let mut kept: Vec<(usize, FixedBitSet)> = Vec::new();
    let mut order = sets;
    // larger sets first so a dominated set always meets its dominator earlier
    order.sort_by(|a, b| {
        b.1.count_ones(..)
            .cmp(&a.1.count_ones(..))
            .then(a.0.cmp(&b.0))
    });
    for (idx, set) in order {
        if set.is_clear() || kept.iter().any(|(_, k)| set.is_subset(k)) {
            continue;
        }
        kept.push((idx, set));
    }
    kept.sort_by_key(|k| k.0);
    kept
}

fn greedy_cover(sets: &[(usize, FixedBitSet)], n: usize) -> Vec<usize> {
    let mut covered = FixedBitSet::with_capacity(n);
    let mut chosen = Vec::new();
    while covered.count_ones(..) < n {
        let (best, gain) = sets
            .iter()
            .enumerate()
            .map(|(i, (_, s))| (i, s.difference(&covered).count()))
            .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
            .expect("nonempty");
        if gain == 0 {
            break;
        }
        covered.union_with(&sets[best].1);
        chosen.push(best);
    }
    chosen
}

/// Smallest cover by increasing subset size; `None` if none beats `limit`.
fn exact_cover(sets: &[(usize, FixedBitSet)], n: usize, limit: usize) -> Option<Vec<usize>> {
    let k = sets.len();
    for size in 1..limit {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            let mut u = FixedBitSet::with_capacity(n);
            for &i in &combo {
                u.union_with(&sets[i].1);
            }
            if u.count_ones(..) == n {
                return Some(combo);
            }
            // next combination in lexicographic order
            let mut i = size;
            while i > 0 && combo[i - 1] == k - size + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            combo[i - 1] += 1;
            for j in i..size {
                combo[j] = combo[j - 1] + 1;
            }
        }
    }
    None
}

/// A verified X-ray line set found by set cover over a candidate pool. The
/// count is an upper bound on the X-ray number.
pub fn xray_upper_bound(
    p: &Polytope,
    pool_size: usize,
    seed: u64,
) -> Result<XraySearch, PolytopeError> {
    let pool = candidate_pool(p, pool_size, seed);
    let n = p.vertex_count();
    let matrix = coverage(&vertex_cones(p), &pool);
    let sets: Vec<(usize, FixedBitSet)> = (0..pool.len())
        .map(|l| {
            let mut s = FixedBitSet::with_capacity(n);
            for (v, row) in matrix.iter().enumerate() {
                if row[l].is_some() {
                    s.insert(v);
                }
            }
            (l, s)
        })
        .collect();
    let mut reachable = FixedBitSet::with_capacity(n);
    sets.iter().for_each(|(_, s)| reachable.union_with(s));
    if reachable.count_ones(..) < n {
        let missing = (0..n).filter(|&v| !reachable.contains(v)).collect();
        return Err(PolytopeError::Uncoverable(missing));
    }
    let sets = prune(sets);
    let greedy = greedy_cover(&sets, n);
    let (chosen, exact) = if sets.len() <= EXACT_COVER_LIMIT {
        (exact_cover(&sets, n, greedy.len()).unwrap_or(greedy), true)
    } else {
        (greedy, false)
    };
    let lines = LineSet::new(
        p.dim,
        chosen.iter().map(|&i| pool[sets[i].0].clone()).collect(),
    )?;
    let report = verify_xray_lines(p, &lines)?;
    if !report.covered {
        return Err(PolytopeError::Uncoverable(report.failing_vertices));
    }
    Ok(XraySearch {
        count: lines.len(),
        lines,
        candidates: sets.len(),
        exact,
    })
}

/// Whether `u` and `v` lie on distinct parallel supporting hyperplanes:
/// feasibility of `<c, u> >= <c, x> >= <c, v>` for all vertices `x` with
/// `<c, u - v> = 1`.
pub fn is_antipodal_pair(p: &Polytope, u: usize, v: usize) -> Result<bool, PolytopeError> {
    p.check_vertex(u)?;
    p.check_vertex(v)?;
    if u == v {
        return Err(PolytopeError::SameVertex(u));
    }
    let (pu, pv) = (&p.vertices[u], &p.vertices[v]);
    let mut lp = LinearProgram::new(p.dim).all_free();
    for (i, x) in p.vertices.iter().enumerate() {
        if i != u {
            lp.constraint(sub(pu, x), Relation::Ge, 0.0);
        }
        if i != v {
            lp.constraint(sub(x, pv), Relation::Ge, 0.0);
        }
    }
    lp.constraint(sub(pu, pv), Relation::Eq, 1.0);
    match lp.solve() {
        LpOutcome::IterationLimit => Err(PolytopeError::LpStalled),
        outcome => Ok(outcome.is_feasible()),
    }
}

/// Whether two vertices share a facet (equivalently, a proper face).
pub fn on_common_face(p: &Polytope, u: usize, v: usize) -> Result<bool, PolytopeError> {
    p.check_vertex(u)?;
    p.check_vertex(v)?;
    if u == v {
        return Err(PolytopeError::SameVertex(u));
    }
    Ok(p.incidence[u].iter().any(|f| p.incidence[v].contains(f)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WnaReport {
    pub dim: usize,
    pub vertex_count: usize,
    pub is_antipodal: bool,
    pub is_weakly_neighbourly: bool,
    /// First vertex pair failing the antipodality test.
    pub non_antipodal_pair: Option<(usize, usize)>,
    /// First vertex pair sharing no facet.
    pub separated_pair: Option<(usize, usize)>,
    /// `3 * 2^(d-2)`.
    pub conjecture_bound: u64,
    /// `2^d`, the vertex bound for antipodal polytopes.
    pub antipodal_vertex_bound: u64,
    /// `v` when the polytope is weakly neighbourly and antipodal.
    pub xray_lower_bound: Option<usize>,
    /// A weakly neighbourly antipodal polytope with more than `3 * 2^(d-2)` vertices.
    pub conjecture_violated: bool,
    /// An antipodal polytope with more than `2^d` vertices.
    pub antipodal_bound_violated: bool,
}

impl WnaReport {
    pub fn is_wna(&self) -> bool {
        self.is_antipodal && self.is_weakly_neighbourly
    }

    pub fn summary(&self) -> String {
        let yes = |b: bool| if b { "yes" } else { "no" };
        let mut s = format!(
            "dimension            {}\nvertices             {}\nantipodal            {}\nweakly neighbourly   {}\n",
            self.dim,
            self.vertex_count,
            yes(self.is_antipodal),
            yes(self.is_weakly_neighbourly)
        );
        if let Some((a, b)) = self.non_antipodal_pair {
            s += &format!("  vertices {a} and {b} have no parallel supporting hyperplanes\n");
        }
        if let Some((a, b)) = self.separated_pair {
            s += &format!("  vertices {a} and {b} share no facet\n");
        }
        if let Some(lb) = self.xray_lower_bound {
            s += &format!("X-ray lower bound    X >= {lb}\n");
        }
        s += &format!(
            "bounds               3*2^(d-2) = {}, 2^d = {}\n",
            self.conjecture_bound, self.antipodal_vertex_bound
        );
        if self.conjecture_violated {
            s += "!!! COUNTEREXAMPLE: weakly neighbourly antipodal polytope exceeds 3*2^(d-2) vertices !!!\n";
        }
        if self.antipodal_bound_violated {
            s += "!!! antipodal polytope exceeds 2^d vertices: numerical trouble suspected !!!\n";
        }
        s
    }
}

/// Runs both pairwise tests over all vertex pairs.
pub fn wna_check(p: &Polytope) -> Result<WnaReport, PolytopeError> {
    let n = p.vertex_count();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let separated_pair = pairs
        .iter()
        .copied()
        .find(|&(u, v)| !on_common_face(p, u, v).expect("valid pair"));
    let antipodal: Vec<bool> = pairs
        .par_iter()
        .map(|&(u, v)| is_antipodal_pair(p, u, v))
        .collect::<Result<_, _>>()?;
    let non_antipodal_pair = pairs
        .iter()
        .zip(&antipodal)
        .find(|(_, ok)| !**ok)
        .map(|(pair, _)| *pair);
    let is_antipodal = non_antipodal_pair.is_none();
    let is_weakly_neighbourly = separated_pair.is_none();
    let d = p.dim as u32;
    let conjecture_bound = 3 * 2u64.pow(d - 2);
    let antipodal_vertex_bound = 2u64.pow(d);
    let wna = is_antipodal && is_weakly_neighbourly;
    Ok(WnaReport {
        dim: p.dim,
        vertex_count: n,
        is_antipodal,
        is_weakly_neighbourly,
        non_antipodal_pair,
        separated_pair,
        conjecture_bound,
        antipodal_vertex_bound,
        xray_lower_bound: wna.then_some(n),
        conjecture_violated: wna && n as u64 > conjecture_bound,
        antipodal_bound_violated: is_antipodal && n as u64 > antipodal_vertex_bound,
    })
}

/// Small polytopes used by tests, examples and the CLI.
pub mod corpus {
    use super::*;
    use std::f64::consts::PI;

    /// `[-1, 1]^d`; vertex `i` has coordinate `j` equal to `+1` iff bit `j` of `i` is set.
    pub fn cube(d: usize) -> Polytope {
        let verts = (0..1usize << d)
            .map(|i| {
                (0..d)
                    .map(|j| if i >> j & 1 == 1 { 1.0 } else { -1.0 })
                    .collect()
            })
            .collect();
        Polytope::new(verts).expect("cube")
    }

    pub fn cross_polytope(d: usize) -> Polytope {
        let mut verts = Vec::new();
        for i in 0..d {
            for s in [1.0, -1.0] {
                let mut v = vec![0.0; d];
                v[i] = s;
                verts.push(v);
            }
        }
        Polytope::new(verts).expect("cross-polytope")
    }

    pub fn regular_polygon(k: usize) -> Polytope {
        let verts = (0..k)
            .map(|j| {
                let t = 2.0 * PI * j as f64 / k as f64;
                vec![t.cos(), t.sin()]
            })
            .collect();
        Polytope::new(verts).expect("polygon")
    }

    pub fn triangle() -> Polytope {
        regular_polygon(3)
    }

    /// Regular simplex with unit circumradius centered at the origin.
    pub fn regular_simplex(d: usize) -> Polytope {
        // e_1 .. e_(d+1) in E^(d+1), expressed in a basis of the hyperplane sum = 0
        let diffs: Vec<Vec<f64>> = (0..d)
            .map(|i| {
                let mut v = vec![0.0; d + 1];
                v[i] = 1.0;
                v[d] = -1.0;
                v
            })
            .collect();
        let basis = orthonormal_basis(diffs.iter().map(|v| v.as_slice()), 1e-12);
        let c = 1.0 / (d + 1) as f64;
        let verts: Vec<Vec<f64>> = (0..=d)
            .map(|i| {
                let mut e = vec![-c; d + 1];
                e[i] += 1.0;
                let local: Vec<f64> = basis.iter().map(|b| dot(b, &e)).collect();
                let r = norm(&local);
                local.iter().map(|x| x / r).collect()
            })
            .collect();
        Polytope::new(verts).expect("simplex")
    }

    /// Hull of the cube vertices off one (d-2)-face: the face
    /// `x_1 = x_2 = 1` is removed, leaving `3 * 2^(d-2)` vertices.
    pub fn cube_minus_face(d: usize) -> Polytope {
        let verts = cube(d)
            .vertices()
            .iter()
            .filter(|v| !(v[0] > 0.0 && v[1] > 0.0))
            .cloned()
            .collect();
        Polytope::new(verts).expect("cube minus a face")
    }

    /// Named members, as accepted by the CLI.
    pub fn named(name: &str) -> Option<Polytope> {
        let num = |prefix: &str| {
            name.strip_prefix(prefix)
                .and_then(|s| s.parse::<usize>().ok())
        };
        if name == "triangle" {
            return Some(triangle());
        }
        if let Some(d) = num("cube-minus-face-").filter(|&d| (3..=6).contains(&d)) {
            return Some(cube_minus_face(d));
        }
        if let Some(d) = num("cube-").filter(|&d| (2..=6).contains(&d)) {
            return Some(cube(d));
        }
        if let Some(d) = num("cross-polytope-").filter(|&d| (2..=7).contains(&d)) {
            return Some(cross_polytope(d));
        }
        if let Some(d) = num("simplex-").filter(|&d| (2..=7).contains(&d)) {
            return Some(regular_simplex(d));
        }
        if let Some(k) = num("polygon-").filter(|&k| k >= 3) {
            return Some(regular_polygon(k));
        }
        None
    }

    /// Every fixed member of the test corpus.
    pub fn all() -> Vec<(String, Polytope)> {
        let mut out = vec![("triangle".to_string(), triangle())];
        for k in [4, 5, 6] {
            out.push((format!("polygon-{k}"), regular_polygon(k)));
        }
        for d in 3..=4 {
            out.push((format!("cube-{d}"), cube(d)));
            out.push((format!("cross-polytope-{d}"), cross_polytope(d)));
            out.push((format!("simplex-{d}"), regular_simplex(d)));
            out.push((format!("cube-minus-face-{d}"), cube_minus_face(d)));
        }
        out
    }
}
