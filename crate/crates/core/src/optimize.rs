//! Simulated annealing for antipodal coverings of S^(d-1).
//!
//! Only base points are stored, so every candidate is antipodal by
//! construction. The objective is the covering radius of `{±p_i}`.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::covering::{AntipodalConfig, CoveringError, Provenance};
use crate::hull::{ConvexHull, HULL_TOL};
use crate::linalg::{dot, norm, solve};
use crate::sphere::{angle_from_cos, UnitVector};

/// Largest history length kept in a run artifact.
pub const MAX_HISTORY: usize = 1000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OptimizeError {
    #[error("need at least d = {dim} pairs for the origin to be interior, got {pairs}")]
    TooFewPairs { dim: usize, pairs: usize },
    #[error("dimension must be at least 2")]
    DimensionTooSmall,
    #[error("budget must be at least 1")]
    ZeroBudget,
    #[error("no restart produced a configuration with the origin inside its hull")]
    NoFeasibleStart,
    #[error(transparent)]
    Covering(#[from] CoveringError),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    /// Metropolis temperature at the start, radians of covering radius.
    pub initial_temperature: f64,
    /// Temperature multiplier applied every `cooling_interval` proposals.
    pub cooling_factor: f64,
    pub cooling_interval: usize,
    /// Standard deviation of the tangent perturbation at the initial
    /// temperature; shrinks in proportion to the temperature.
    pub initial_step: f64,
    pub min_step: f64,
    /// Proposals per restart.
    pub budget: usize,
    pub restarts: usize,
    /// Sequential-LP steps applied to each restart's best (exact objective only).
    pub refine_steps: usize,
    /// Perturb-and-refine rounds after the first refinement.
    pub basin_hops: usize,
    /// Tangent perturbation scale of a basin hop, radians.
    pub hop_step: f64,
    /// Run `polish` on the winning configuration.
    pub polish: bool,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule {
            initial_temperature: 5f64.to_radians(),
            cooling_factor: 0.98,
            cooling_interval: 100,
            initial_step: 0.25,
            min_step: 1e-6,
            budget: 10_000,
            restarts: 16,
            refine_steps: 400,
            basin_hops: 50,
            hop_step: 0.1,
            polish: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ObjectiveMode {
    Exact,
    Sampled { samples: usize },
}

impl ObjectiveMode {
    /// Hull-based objective in low dimension or for few points.
    pub fn for_problem(d: usize, m: usize) -> ObjectiveMode {
        if d <= 4 || 2 * m <= 40 {
            ObjectiveMode::Exact
        } else {
            ObjectiveMode::Sampled { samples: 20_000 }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistoryPoint {
    pub iteration: usize,
    pub radius: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RestartSummary {
    pub seed: u64,
    pub radius: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerRun {
    pub dim: usize,
    pub pairs: usize,
    pub seed: u64,
    pub schedule: Schedule,
    pub objective: ObjectiveMode,
    /// Exact covering radius of `best`.
    pub best_radius: f64,
    #[serde(with = "config_serde")]
    pub best: AntipodalConfig,
    /// Best-so-far radius of the winning restart (objective units), then the
    /// polish step.
    pub history: Vec<HistoryPoint>,
    pub restarts: Vec<RestartSummary>,
    pub winning_seed: u64,
}

mod config_serde {
    use super::*;
    use crate::constructions::ConfigFile;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(c: &AntipodalConfig, s: S) -> Result<S::Ok, S::Error> {
        ConfigFile::from(c).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<AntipodalConfig, D::Error> {
        ConfigFile::deserialize(d)?
            .into_config()
            .map(|l| l.config)
            .map_err(serde::de::Error::custom)
    }
}

impl OptimizerRun {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("run serializes")
    }
}

/// Objective evaluator; `None` marks infeasible candidates.
enum Objective {
    Exact,
    /// Fixed sample directions shared by every evaluation.
    Sampled(Vec<Vec<f64>>),
}

impl Objective {
    fn new(mode: ObjectiveMode, d: usize, seed: u64) -> Objective {
        match mode {
            ObjectiveMode::Exact => Objective::Exact,
            ObjectiveMode::Sampled { samples } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_5a3e);
                Objective::Sampled((0..samples).map(|_| random_unit(d, &mut rng)).collect())
            }
        }
    }

    fn eval(&self, base: &[Vec<f64>]) -> Option<f64> {
        match self {
            Objective::Exact => exact_radius(base),
            Objective::Sampled(dirs) => {
                let worst = dirs
                    .iter()
                    .map(|s| base.iter().map(|p| dot(p, s).abs()).fold(0.0, f64::max))
                    .fold(f64::INFINITY, f64::min);
                Some(angle_from_cos(worst))
            }
        }
    }
}

/// Covering radius of `{±p}` when the origin is strictly interior.
fn exact_radius(base: &[Vec<f64>]) -> Option<f64> {
    let expanded: Vec<Vec<f64>> = base
        .iter()
        .flat_map(|p| [p.clone(), p.iter().map(|x| -x).collect()])
        .collect();
    let hull = ConvexHull::new(&expanded).ok()?;
    let min = hull
        .facets()
        .iter()
        .map(|f| f.support_offset)
        .fold(f64::INFINITY, f64::min);
    (min > HULL_TOL).then(|| angle_from_cos(min))
}

fn random_unit<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
        let l = norm(&v);
        if l > 1e-6 {
            return v.into_iter().map(|x| x / l).collect();
        }
    }
}

/// Moves `p` along a Gaussian tangent vector of scale `sigma`, then
/// renormalizes.
fn perturb<R: Rng + ?Sized>(p: &[f64], sigma: f64, rng: &mut R) -> Vec<f64> {
    let g: Vec<f64> = (0..p.len())
        .map(|_| {
            let z: f64 = StandardNormal.sample(rng);
            sigma * z
        })
        .collect();
    let along = dot(&g, p);
    let moved: Vec<f64> = p.iter().zip(&g).map(|(x, y)| x + y - along * x).collect();
    let l = norm(&moved);
    moved.into_iter().map(|x| x / l).collect()
}

struct RestartResult {
    seed: u64,
    base: Vec<Vec<f64>>,
    radius: f64,
    history: Vec<HistoryPoint>,
}

fn anneal(
    d: usize,
    m: usize,
    seed: u64,
    schedule: &Schedule,
    objective: &Objective,
) -> Option<RestartResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = None;
    for _ in 0..100 {
        let base: Vec<Vec<f64>> = (0..m).map(|_| random_unit(d, &mut rng)).collect();
        if let Some(r) = objective.eval(&base) {
            current = Some((base, r));
            break;
        }
    }
    let (mut base, mut radius) = current?;
    let mut best = (base.clone(), radius);
    let mut history = vec![HistoryPoint {
        iteration: 0,
        radius,
    }];
    let mut temperature = schedule.initial_temperature;
    for it in 1..=schedule.budget {
        let step = (schedule.initial_step * temperature / schedule.initial_temperature)
            .max(schedule.min_step);
        let i = rng.random_range(0..m);
        let candidate = perturb(&base[i], step, &mut rng);
        let old = std::mem::replace(&mut base[i], candidate);
        let accepted = match objective.eval(&base) {
            Some(r) => {
                let delta = r - radius;
                let u: f64 = rng.random();
                if delta <= 0.0 || u < (-delta / temperature).exp() {
                    radius = r;
                    true
                } else {
                    false
                }
            }
            None => false,
        };
        if !accepted {
            base[i] = old;
        } else if radius < best.1 {
            best = (base.clone(), radius);
            history.push(HistoryPoint {
                iteration: it,
                radius,
            });
        }
        if it % schedule.cooling_interval.max(1) == 0 {
            temperature *= schedule.cooling_factor;
        }
    }
    Some(RestartResult {
        seed,
        base: best.0,
        radius: best.1,
        history,
    })
}

/// Sequential-LP refinement of an annealed configuration, followed by basin
/// hopping: perturb a few base points, refine again, keep strict improvements.
fn local_stage(mut r: RestartResult, schedule: &Schedule) -> RestartResult {
    let m = r.base.len();
    let mut rng = ChaCha8Rng::seed_from_u64(r.seed.rotate_left(17) ^ 0x0b5e_55ed);
    let mut iteration = schedule.budget;
    let accept = |r: &mut RestartResult, base: Vec<Vec<f64>>, iteration: usize| {
        if let Some(radius) = exact_radius(&base).filter(|&x| x < r.radius) {
            r.history.push(HistoryPoint { iteration, radius });
            r.base = base;
            r.radius = radius;
        }
    };
    iteration += 1;
    let refined = refine_points(r.base.clone(), schedule.refine_steps);
    accept(&mut r, refined, iteration);
    for _ in 0..schedule.basin_hops {
        iteration += 1;
        let mut trial = r.base.clone();
        for _ in 0..rng.random_range(1..=m.min(3)) {
            let i = rng.random_range(0..m);
            trial[i] = perturb(&trial[i], schedule.hop_step, &mut rng);
        }
        let trial = refine_points(trial, schedule.refine_steps);
        accept(&mut r, trial, iteration);
    }
    r
}

/// Keeps at most `max` points, always including the first and last.
fn decimate(history: Vec<HistoryPoint>, max: usize) -> Vec<HistoryPoint> {
    if history.len() <= max {
        return history;
    }
    let n = history.len();
    (0..max).map(|k| history[k * (n - 1) / (max - 1)]).collect()
}

/// Restart seeds derived from the master seed.
pub fn restart_seeds(seed: u64, restarts: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..restarts).map(|_| rng.next_u64()).collect()
}

fn to_config(d: usize, base: &[Vec<f64>], label: String) -> Result<AntipodalConfig, CoveringError> {
    let points = base
        .iter()
        .map(|p| UnitVector::new(p.clone()))
        .collect::<Result<Vec<_>, _>>()?;
    AntipodalConfig::new(d, points, Provenance::Optimized(label))
}

/// Searches for `m` antipodal pairs on S^(d-1) with small covering radius.
/// Deterministic in `(d, m, seed, schedule)`.
pub fn optimize_antipodal_covering(
    d: usize,
    m: usize,
    seed: u64,
    schedule: &Schedule,
) -> Result<OptimizerRun, OptimizeError> {
    if d < 2 {
        return Err(OptimizeError::DimensionTooSmall);
    }
    if m < d {
        return Err(OptimizeError::TooFewPairs { dim: d, pairs: m });
    }
    if schedule.budget == 0 {
        return Err(OptimizeError::ZeroBudget);
    }
    let mode = ObjectiveMode::for_problem(d, m);
    let objective = Objective::new(mode, d, seed);
    let seeds = restart_seeds(seed, schedule.restarts.max(1));
    let results: Vec<RestartResult> = seeds
        .par_iter()
        .filter_map(|&s| anneal(d, m, s, schedule, &objective))
        .map(|r| {
            if mode == ObjectiveMode::Exact && schedule.refine_steps > 0 {
                local_stage(r, schedule)
            } else {
                r
            }
        })
        .collect();
    let summaries = results
        .iter()
        .map(|r| RestartSummary {
            seed: r.seed,
            radius: r.radius,
        })
        .collect();
    let winner = results
        .into_iter()
        .min_by(|a, b| a.radius.total_cmp(&b.radius).then(a.seed.cmp(&b.seed)))
        .ok_or(OptimizeError::NoFeasibleStart)?;

    let label = format!("sa(d={d},m={m},seed={seed})");
    let mut best = to_config(d, &winner.base, label)?;
    let mut history = winner.history;
    if schedule.polish {
        best = polish(&best, winner.seed)?;
        let r = best.covering_radius.expect("polish fills the radius");
        history.push(HistoryPoint {
            iteration: schedule.budget + schedule.basin_hops + 2,
            radius: r.min(history.last().map_or(r, |h| h.radius)),
        });
    }
    let exact = best.covering_radius_exact()?;
    best.covering_radius = Some(exact.radius);
    Ok(OptimizerRun {
        dim: d,
        pairs: m,
        seed,
        schedule: schedule.clone(),
        objective: mode,
        best_radius: exact.radius,
        best,
        history: decimate(history, MAX_HISTORY),
        restarts: summaries,
        winning_seed: winner.seed,
    })
}

/// Coordinate-wise pattern search on the exact radius: each base point is
/// moved by `±step` along each vector of a tangent frame; the step halves
/// after a sweep without improvement. Never increases the radius.
pub fn polish(config: &AntipodalConfig, seed: u64) -> Result<AntipodalConfig, CoveringError> {
    let d = config.dim();
    let mut base: Vec<Vec<f64>> = config
        .base_points()
        .iter()
        .map(|p| p.coords().to_vec())
        .collect();
    let start = config.covering_radius_exact()?.radius;
    let mut radius = exact_radius(&base).unwrap_or(start);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut step = 1e-2;
    let mut evals = 0usize;
    while step > 1e-10 && evals < 200_000 {
        let mut improved = false;
        for i in 0..base.len() {
            let frame = tangent_frame(&base[i], &mut rng);
            for t in &frame {
                for sign in [1.0, -1.0] {
                    let moved: Vec<f64> = base[i]
                        .iter()
                        .zip(t)
                        .map(|(x, y)| x + sign * step * y)
                        .collect();
                    let l = norm(&moved);
                    let moved: Vec<f64> = moved.into_iter().map(|x| x / l).collect();
                    let old = std::mem::replace(&mut base[i], moved);
                    evals += 1;
                    match exact_radius(&base) {
                        Some(r) if r < radius => {
                            radius = r;
                            improved = true;
                            break;
                        }
                        _ => base[i] = old,
                    }
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    let label = match &config.provenance {
        Provenance::Optimized(s) => format!("{s}+polish"),
        other => format!("polish({other})"),
    };
    let mut out = to_config(d, &base, label)?;
    let r = out.covering_radius_exact()?.radius;
    if r <= start {
        out.covering_radius = Some(r);
        Ok(out)
    } else {
        let mut same = config.clone();
        same.covering_radius = Some(start);
        Ok(same)
    }
}

/// Random orthonormal basis of the tangent space at `p`.
fn tangent_frame<R: Rng + ?Sized>(p: &[f64], rng: &mut R) -> Vec<Vec<f64>> {
    let d = p.len();
    let mut vecs = vec![p.to_vec()];
    vecs.extend((0..d).map(|_| random_unit(d, rng)));
    let basis = crate::linalg::orthonormal_basis(vecs.iter().map(|v| v.as_slice()), 1e-8);
    basis.into_iter().skip(1).take(d - 1).collect()
}

/// Facets of the hull of `{±p_i}` for the exact objective.
struct FacetModel {
    min_offset: f64,
    /// (offset, normal, [(base index, sign, barycentric weight)])
    rows: Vec<(f64, Vec<f64>, Vec<(usize, f64, f64)>)>,
}

fn facet_model(base: &[Vec<f64>]) -> Option<FacetModel> {
    let expanded: Vec<Vec<f64>> = base
        .iter()
        .flat_map(|p| [p.clone(), p.iter().map(|x| -x).collect()])
        .collect();
    let hull = ConvexHull::new(&expanded).ok()?;
    let mut rows = Vec::with_capacity(hull.facets().len());
    let mut min_offset = f64::INFINITY;
    for f in hull.facets() {
        let h = f.support_offset;
        min_offset = min_offset.min(h);
        let n = f.outward_normal.coords().to_vec();
        // foot of the perpendicular = sum_k lambda_k v_k
        let d = n.len();
        let a: Vec<Vec<f64>> = (0..d)
            .map(|r| f.vertex_indices.iter().map(|&k| expanded[k][r]).collect())
            .collect();
        let foot: Vec<f64> = n.iter().map(|x| h * x).collect();
        let Some(lambda) = solve(a, foot, 1e-14) else {
            continue;
        };
        let terms = f
            .vertex_indices
            .iter()
            .zip(lambda)
            .map(|(&k, l)| (k / 2, if k % 2 == 0 { 1.0 } else { -1.0 }, l))
            .collect();
        rows.push((h, n, terms));
    }
    (min_offset > HULL_TOL).then_some(FacetModel { min_offset, rows })
}

/// Local minimax refinement by sequential linear programming.
///
/// Each facet offset `h_F` moves to first order by `sum_k lambda_k <n_F, dv_k>`,
/// `lambda` being the barycentric coordinates of the foot of the
/// perpendicular from the origin. One step maximizes the smallest linearized
/// offset over tangent moves in a box of half-width `rho`, and is kept only
/// if the true smallest offset grows. Never increases the radius.
pub fn refine(
    config: &AntipodalConfig,
    max_steps: usize,
) -> Result<AntipodalConfig, CoveringError> {
    let start = config.covering_radius_exact()?.radius;
    let base: Vec<Vec<f64>> = config
        .base_points()
        .iter()
        .map(|p| p.coords().to_vec())
        .collect();
    let base = refine_points(base, max_steps);
    let label = match &config.provenance {
        Provenance::Optimized(s) => format!("{s}+refine"),
        other => format!("refine({other})"),
    };
    let mut out = to_config(config.dim(), &base, label)?;
    let r = out.covering_radius_exact()?.radius;
    if r <= start {
        out.covering_radius = Some(r);
        Ok(out)
    } else {
        let mut same = config.clone();
        same.covering_radius = Some(start);
        Ok(same)
    }
}

fn refine_points(mut base: Vec<Vec<f64>>, max_steps: usize) -> Vec<Vec<f64>> {
    let d = base[0].len();
    let m = base.len();
    let Some(mut model) = facet_model(&base) else {
        return base;
    };
    let mut rho = 0.02;
    let frame_rng = &mut ChaCha8Rng::seed_from_u64(0);
    for _ in 0..max_steps {
        if rho < 1e-12 {
            break;
        }
        let frames: Vec<Vec<Vec<f64>>> = base.iter().map(|p| tangent_frame(p, frame_rng)).collect();
        let nv = m * (d - 1) + 1;
        let mut lp = microlp::Problem::new(microlp::OptimizationDirection::Maximize);
        let moves: Vec<microlp::Variable> =
            (0..nv - 1).map(|_| lp.add_var(0.0, (-rho, rho))).collect();
        let t = lp.add_var(1.0, (f64::NEG_INFINITY, f64::INFINITY));
        // only facets that can become the smallest within the trust region
        let window = model.min_offset + 4.0 * rho * (d as f64).sqrt();
        for (h, n, terms) in &model.rows {
            if *h > window {
                continue;
            }
            let mut row = vec![0.0; nv - 1];
            for &(i, sign, l) in terms {
                for (j, tv) in frames[i].iter().enumerate() {
                    row[i * (d - 1) + j] -= l * sign * dot(n, tv);
                }
            }
            let mut expr: Vec<(microlp::Variable, f64)> = moves
                .iter()
                .zip(&row)
                .filter(|(_, c)| **c != 0.0)
                .map(|(v, c)| (*v, *c))
                .collect();
            expr.push((t, 1.0));
            lp.add_constraint(expr.as_slice(), microlp::ComparisonOp::Le, *h);
        }
        let Some(solution) = lp.solve().ok().and_then(|o| o.into_solution().ok()) else {
            rho *= 0.25;
            continue;
        };
        let value = solution.objective();
        let x: Vec<f64> = moves.iter().map(|v| solution.var_value(*v)).collect();
        let predicted = value - model.min_offset;
        if predicted <= 1e-15 {
            rho *= 0.25;
            continue;
        }
        let trial: Vec<Vec<f64>> = base
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let mut q = p.clone();
                for (j, t) in frames[i].iter().enumerate() {
                    let y = x[i * (d - 1) + j];
                    q.iter_mut().zip(t).for_each(|(a, b)| *a += y * b);
                }
                let l = norm(&q);
                q.into_iter().map(|a| a / l).collect()
            })
            .collect();
        match facet_model(&trial) {
            Some(next) if next.min_offset > model.min_offset => {
                let actual = next.min_offset - model.min_offset;
                base = trial;
                model = next;
                if actual > 0.5 * predicted {
                    rho = (rho * 2.0).min(0.1);
                }
            }
            _ => rho *= 0.25,
        }
    }
    base
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{cross_polytope_config, regular_polygon_config};
    use crate::covering::{sampling_bound, verify_antipodal};

    fn quick() -> Schedule {
        Schedule {
            budget: 2_000,
            restarts: 3,
            basin_hops: 5,
            ..Schedule::default()
        }
    }

    /// Best antipodal covering radius of S^1 by 3 pairs, exhaustively over
    /// a 0.25° grid (first point fixed at 0°).
    fn circle_grid_optimum() -> f64 {
        let steps = 720;
        let mut best = f64::INFINITY;
        for a in 0..steps {
            for b in a..steps {
                let mut angles: Vec<f64> = [0.0, a as f64 * 0.25, b as f64 * 0.25]
                    .iter()
                    .flat_map(|&t| [t, t + 180.0])
                    .collect();
                angles.sort_by(f64::total_cmp);
                let gap = angles
                    .windows(2)
                    .map(|w| w[1] - w[0])
                    .fold(angles[0] + 360.0 - angles[5], f64::max);
                best = best.min(gap / 2.0);
            }
        }
        best
    }

    #[test]
    fn three_pairs_on_the_circle_reach_the_hexagon() {
        let oracle = circle_grid_optimum();
        assert!((oracle - 30.0).abs() < 1e-9);
        let run = optimize_antipodal_covering(2, 3, 7, &quick()).unwrap();
        assert!((run.best_radius.to_degrees() - oracle).abs() < 0.05);
        assert!(verify_antipodal(&run.best.expanded()));
    }

    #[test]
    fn reruns_are_bit_identical() {
        let a = optimize_antipodal_covering(3, 5, 42, &quick()).unwrap();
        let b = optimize_antipodal_covering(3, 5, 42, &quick()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_json(), b.to_json());
        let c = optimize_antipodal_covering(3, 5, 43, &quick()).unwrap();
        assert_ne!(a.best, c.best);
    }

    #[test]
    fn run_invariants() {
        let run = optimize_antipodal_covering(3, 6, 3, &quick()).unwrap();
        for p in run.best.base_points() {
            assert!((norm(p.coords()) - 1.0).abs() < 1e-12);
        }
        assert!(run.history.len() <= MAX_HISTORY);
        assert!(run.history.windows(2).all(|w| w[1].radius <= w[0].radius));
        assert!(run
            .history
            .windows(2)
            .all(|w| w[1].iteration > w[0].iteration));
        let exact = run.best.covering_radius_exact().unwrap().radius;
        assert_eq!(exact, run.best_radius);
        assert_eq!(run.restarts.len(), 3);
        assert!(run.restarts.iter().any(|r| r.seed == run.winning_seed));
    }

    #[test]
    fn rejects_too_few_pairs_and_zero_budget() {
        assert_eq!(
            optimize_antipodal_covering(4, 3, 0, &quick()),
            Err(OptimizeError::TooFewPairs { dim: 4, pairs: 3 })
        );
        let zero = Schedule {
            budget: 0,
            ..quick()
        };
        assert_eq!(
            optimize_antipodal_covering(3, 4, 0, &zero),
            Err(OptimizeError::ZeroBudget)
        );
    }

    #[test]
    fn history_decimation_keeps_endpoints() {
        let h: Vec<HistoryPoint> = (0..5000)
            .map(|i| HistoryPoint {
                iteration: i,
                radius: 1.0 / (i + 1) as f64,
            })
            .collect();
        let d = decimate(h, MAX_HISTORY);
        assert_eq!(d.len(), MAX_HISTORY);
        assert_eq!(d[0].iteration, 0);
        assert_eq!(d.last().unwrap().iteration, 4999);
    }

    #[test]
    fn polish_keeps_the_hexagon() {
        let hex = regular_polygon_config(6).unwrap();
        let r0 = hex.covering_radius_exact().unwrap().radius;
        let out = polish(&hex, 1).unwrap();
        assert!((out.covering_radius.unwrap() - r0).abs() < 1e-9);
        assert!(verify_antipodal(&out.expanded()));
    }

    fn perturbed_octahedron(seed: u64, eps: f64) -> AntipodalConfig {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = cross_polytope_config(3)
            .unwrap()
            .base_points()
            .iter()
            .map(|p| perturb(p.coords(), eps, &mut rng))
            .collect::<Vec<_>>();
        to_config(3, &base, "perturbed".into()).unwrap()
    }

    #[test]
    fn polish_recovers_the_octahedron() {
        let optimum = (1.0f64 / 3.0).sqrt().acos();
        for seed in 0..3 {
            let cfg = perturbed_octahedron(seed, 0.01);
            let before = cfg.covering_radius_exact().unwrap().radius;
            let out = polish(&cfg, seed).unwrap();
            let after = out.covering_radius.unwrap();
            assert!(after <= before + 1e-12);
            assert!(
                (after - optimum).to_degrees().abs() < 0.01,
                "{}",
                after.to_degrees()
            );
            assert!(verify_antipodal(&out.expanded()));
        }
    }

    #[test]
    fn refine_converges_to_the_octahedron() {
        let optimum = (1.0f64 / 3.0).sqrt().acos();
        let cfg = perturbed_octahedron(9, 0.05);
        let out = refine(&cfg, 200).unwrap();
        assert!((out.covering_radius.unwrap() - optimum).abs() < 1e-8);
    }

    #[test]
    fn sampled_objective_stays_above_exact_minus_bound() {
        // 2m = 42 > 40 points in E^5: the sampled objective is used
        let schedule = Schedule {
            budget: 300,
            restarts: 1,
            polish: false,
            ..Schedule::default()
        };
        let run = optimize_antipodal_covering(5, 21, 5, &schedule).unwrap();
        let ObjectiveMode::Sampled { samples } = run.objective else {
            panic!("expected the sampled objective");
        };
        let bound = sampling_bound(5, samples, crate::covering::SAMPLING_CONFIDENCE_FAILURE);
        for h in &run.history {
            assert!(h.radius >= run.best_radius - bound);
        }
    }

    #[test]
    fn run_artifact_round_trips() {
        let run = optimize_antipodal_covering(3, 4, 1, &quick()).unwrap();
        let back: OptimizerRun = serde_json::from_str(&run.to_json()).unwrap();
        assert_eq!(back.best_radius, run.best_radius);
        assert_eq!(back.history, run.history);
        assert_eq!(back.schedule, run.schedule);
        for (a, b) in back.best.base_points().iter().zip(run.best.base_points()) {
            assert_eq!(a.coords(), b.coords());
        }
    }
}
