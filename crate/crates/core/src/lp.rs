//! Dense two-phase simplex for the small feasibility problems in this crate.
//!
//! Problems have at most a few hundred constraints and variables, so a full
//! tableau is fine. Pivoting follows Bland's rule, which makes every solve
//! deterministic and cycle free.

/// Pivot and feasibility tolerance.
pub const LP_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal {
        x: Vec<f64>,
        value: f64,
    },
    Infeasible,
    Unbounded,
    /// Pivot limit reached; only possible through floating-point stalling.
    IterationLimit,
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpOutcome::Optimal { .. } | LpOutcome::Unbounded)
    }
}

/// `maximize objective · x` subject to `constraints`; variables are
/// nonnegative unless flagged free.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub free: Vec<bool>,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            objective: vec![0.0; num_vars],
            constraints: Vec::new(),
            free: vec![false; num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn all_free(mut self) -> Self {
        self.free.iter_mut().for_each(|f| *f = true);
        self
    }

    pub fn maximize(mut self, objective: Vec<f64>) -> Self {
        assert_eq!(objective.len(), self.num_vars());
        self.objective = objective;
        self
    }

    pub fn constraint(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) {
        assert_eq!(coeffs.len(), self.num_vars());
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn solve(&self) -> LpOutcome {
        // Column layout: [x+ ... | x- for free vars | slack/surplus | artificial]
        let n = self.num_vars();
        let free_idx: Vec<usize> = (0..n).filter(|&j| self.free[j]).collect();
        let n_struct = n + free_idx.len();
        let m = self.constraints.len();

        let mut rows: Vec<(Vec<f64>, Relation, f64)> = self
            .constraints
            .iter()
            .map(|c| {
                let mut r = c.coeffs.clone();
                r.extend(free_idx.iter().map(|&j| -c.coeffs[j]));
                (r, c.relation, c.rhs)
            })
            .collect();
        for (r, rel, rhs) in rows.iter_mut() {
            if *rhs < 0.0 {
                r.iter_mut().for_each(|v| *v = -*v);
                *rhs = -*rhs;
                *rel = match *rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
            }
        }

        let n_slack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
        let n_art = rows.iter().filter(|r| r.1 != Relation::Le).count();
        let art_start = n_struct + n_slack;
        let width = art_start + n_art;

        let mut tab = vec![vec![0.0; width + 1]; m];
        let mut basis = vec![0usize; m];
        let (mut s, mut a) = (n_struct, art_start);
        for (i, (r, rel, rhs)) in rows.iter().enumerate() {
            tab[i][..n_struct].copy_from_slice(r);
            tab[i][width] = *rhs;
            match rel {
                Relation::Le => {
                    tab[i][s] = 1.0;
                    basis[i] = s;
                    s += 1;
                }
                Relation::Ge => {
                    tab[i][s] = -1.0;
                    s += 1;
                    tab[i][a] = 1.0;
                    basis[i] = a;
                    a += 1;
                }
                Relation::Eq => {
                    tab[i][a] = 1.0;
                    basis[i] = a;
                    a += 1;
                }
            }
        }

        let mut solver = Tableau {
            tab,
            basis,
            width,
            blocked: vec![false; width],
        };

        if n_art > 0 {
            let mut phase1 = vec![0.0; width];
            phase1[art_start..].iter_mut().for_each(|c| *c = -1.0);
            // phase 1 is bounded by construction
            if solver.optimize(&phase1).is_err() {
                return LpOutcome::IterationLimit;
            }
            let infeasibility: f64 = solver
                .basis
                .iter()
                .enumerate()
                .filter(|&(_, &b)| b >= art_start)
                .map(|(i, _)| solver.tab[i][width])
                .sum();
            if infeasibility > LP_TOL {
                return LpOutcome::Infeasible;
            }
            // drive zero-level artificials out of the basis
            for i in 0..m {
                if solver.basis[i] >= art_start {
                    if let Some(j) = (0..art_start).find(|&j| solver.tab[i][j].abs() > LP_TOL) {
                        solver.pivot(i, j);
                    }
                }
            }
            for j in art_start..width {
                solver.blocked[j] = true;
            }
        }

        let mut phase2 = vec![0.0; width];
        phase2[..n].copy_from_slice(&self.objective);
        for (k, &j) in free_idx.iter().enumerate() {
            phase2[n + k] = -self.objective[j];
        }
        match solver.optimize(&phase2) {
            Err(Stop::Unbounded) => return LpOutcome::Unbounded,
            Err(Stop::Limit) => return LpOutcome::IterationLimit,
            Ok(()) => {}
        }

        let mut full = vec![0.0; width];
        for (i, &b) in solver.basis.iter().enumerate() {
            full[b] = solver.tab[i][width];
        }
        let mut x = full[..n].to_vec();
        for (k, &j) in free_idx.iter().enumerate() {
            x[j] -= full[n + k];
        }
        let value = self.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
        LpOutcome::Optimal { x, value }
    }
}

struct Tableau {
    tab: Vec<Vec<f64>>,
    basis: Vec<usize>,
    width: usize,
    blocked: Vec<bool>,
}

enum Stop {
    Unbounded,
    Limit,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.tab[row][col];
        self.tab[row].iter_mut().for_each(|v| *v /= p);
        let pivot_row = self.tab[row].clone();
        for (i, r) in self.tab.iter_mut().enumerate() {
            if i != row {
                let f = r[col];
                if f != 0.0 {
                    r.iter_mut()
                        .zip(&pivot_row)
                        .for_each(|(v, pv)| *v -= f * pv);
                }
            }
        }
        self.basis[row] = col;
    }

    fn reduced_costs(&self, cost: &[f64]) -> Vec<f64> {
        (0..self.width)
            .map(|j| {
                cost[j]
                    - self
                        .basis
                        .iter()
                        .enumerate()
                        .map(|(i, &b)| cost[b] * self.tab[i][j])
                        .sum::<f64>()
            })
            .collect()
    }

    /// Maximizes `cost · x` from the current basic feasible solution.
    fn optimize(&mut self, cost: &[f64]) -> Result<(), Stop> {
        let mut reduced = self.reduced_costs(cost);
        let mut basic = vec![false; self.width];
        self.basis.iter().for_each(|&b| basic[b] = true);
        let limit = 50 * (self.width + self.tab.len()) + 1000;
        for pivots in 1..=limit {
            // Bland: lowest eligible index enters
            let entering =
                (0..self.width).find(|&j| !self.blocked[j] && !basic[j] && reduced[j] > LP_TOL);
            let Some(col) = entering else {
                return Ok(());
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.tab.len() {
                let a = self.tab[i][col];
                if a > LP_TOL {
                    let ratio = self.tab[i][self.width] / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((k, best)) => {
                            if ratio < best - LP_TOL
                                || (ratio <= best + LP_TOL && self.basis[i] < self.basis[k])
                            {
                                Some((i, ratio))
                            } else {
                                Some((k, best))
                            }
                        }
                    };
                }
            }
            let Some((row, _)) = leave else {
                return Err(Stop::Unbounded);
            };
            basic[self.basis[row]] = false;
            basic[col] = true;
            self.pivot(row, col);
            if pivots % REFRESH_EVERY == 0 {
                reduced = self.reduced_costs(cost);
            } else {
                let f = reduced[col];
                reduced
                    .iter_mut()
                    .zip(&self.tab[row][..self.width])
                    .for_each(|(r, v)| *r -= f * v);
            }
        }
        Err(Stop::Limit)
    }
}

/// Pivots between full recomputations of the reduced costs.
const REFRESH_EVERY: usize = 32;
