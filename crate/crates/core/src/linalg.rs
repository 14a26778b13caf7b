//! Small dense linear algebra on `f64` slices.
//!
//! Dimensions here stay small (a dozen or so), so everything is plain
//! `Vec<f64>` with partial-pivoting elimination.

use rand::Rng;
use rand_distr::StandardNormal;

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

/// Determinant by Gaussian elimination with partial pivoting. Consumes the matrix.
pub fn determinant(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .unwrap();
        if m[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col];
        det *= p;
        for row in col + 1..n {
            let f = m[row][col] / p;
            if f != 0.0 {
                for k in col..n {
                    m[row][k] -= f * m[col][k];
                }
            }
        }
    }
    det
}

/// Unnormalized normal of the hyperplane through `d` points of E^d
/// (generalized cross product of the edge vectors from the first point).
pub fn hyperplane_normal(points: &[&[f64]]) -> Vec<f64> {
    let d = points[0].len();
    debug_assert_eq!(points.len(), d);
    if d == 3 {
        let u = sub(points[1], points[0]);
        let v = sub(points[2], points[0]);
        return vec![
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        ];
    }
    if d > STACK_DIM {
        let rows: Vec<Vec<f64>> = points[1..].iter().map(|p| sub(p, points[0])).collect();
        return (0..d)
            .map(|skip| {
                let minor: Vec<Vec<f64>> = rows
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|&(j, _)| j != skip)
                            .map(|(_, &v)| v)
                            .collect()
                    })
                    .collect();
                let sign = if skip % 2 == 0 { 1.0 } else { -1.0 };
                sign * determinant(minor)
            })
            .collect();
    }
    let mut rows = [[0.0; STACK_DIM]; STACK_DIM];
    for (r, p) in points[1..].iter().enumerate() {
        for j in 0..d {
            rows[r][j] = p[j] - points[0][j];
        }
    }
    (0..d)
        .map(|skip| {
            let mut minor = [[0.0; STACK_DIM]; STACK_DIM];
            for r in 0..d - 1 {
                let mut c = 0;
                for j in (0..d).filter(|&j| j != skip) {
                    minor[r][c] = rows[r][j];
                    c += 1;
                }
            }
            let sign = if skip % 2 == 0 { 1.0 } else { -1.0 };
            sign * small_determinant(&mut minor, d - 1)
        })
        .collect()
}

const STACK_DIM: usize = 8;

fn small_determinant(m: &mut [[f64; STACK_DIM]; STACK_DIM], n: usize) -> f64 {
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .unwrap();
        if m[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col];
        det *= p;
        for row in col + 1..n {
            let f = m[row][col] / p;
            if f != 0.0 {
                for k in col..n {
                    m[row][k] -= f * m[col][k];
                }
            }
        }
    }
    det
}

/// Solves `a x = b`; `None` when a pivot falls below `tol` times the largest
/// entry of `a`.
pub fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>, tol: f64) -> Option<Vec<f64>> {
    let n = a.len();
    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return None;
    }
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .unwrap();
        if a[pivot][col].abs() <= tol * scale {
            return None;
        }
        a.swap(pivot, col);
        b.swap(pivot, col);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f != 0.0 {
                for k in col..n {
                    a[row][k] -= f * a[col][k];
                }
                b[row] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

/// Gram-Schmidt orthonormal basis of the span of `vectors`; vectors whose
/// residual norm is below `tol` are skipped.
pub fn orthonormal_basis<'a, I>(vectors: I, tol: f64) -> Vec<Vec<f64>>
where
    I: IntoIterator<Item = &'a [f64]>,
{
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let mut r = v.to_vec();
        // two passes keep the basis orthogonal to working precision
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&r, b);
                r.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let n = norm(&r);
        if n > tol {
            basis.push(scale(&r, 1.0 / n));
        }
    }
    basis
}

/// Dimension of the affine hull of `points`.
pub fn affine_dimension(points: &[Vec<f64>], tol: f64) -> usize {
    match points.first() {
        None => 0,
        Some(p0) => {
            let diffs: Vec<Vec<f64>> = points[1..].iter().map(|p| sub(p, p0)).collect();
            orthonormal_basis(diffs.iter().map(|v| v.as_slice()), tol).len()
        }
    }
}

/// A Haar-ish random orthogonal matrix (Gram-Schmidt on a Gaussian matrix).
pub fn random_orthogonal<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<Vec<f64>> {
    loop {
        let rows: Vec<Vec<f64>> = (0..d)
            .map(|_| (0..d).map(|_| rng.sample(StandardNormal)).collect())
            .collect();
        let q = orthonormal_basis(rows.iter().map(|r| r.as_slice()), 1e-8);
        if q.len() == d {
            return q;
        }
    }
}

pub fn mat_vec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter().map(|row| dot(row, v)).collect()
}
