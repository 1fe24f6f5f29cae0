//! Small dense linear algebra, generic over the AD scalars.
//!
//! Everything here is written directly (no external kernels) because jets
//! must flow through the solves: the vertical/horizontal projectors and
//! basic lifts are differentiated by evaluating these routines on [`D2`]
//! inputs. Dimensions never exceed [`crate::ad::MAX_VARS`].

use crate::ad::Scalar;
use crate::error::{GeomError, Result};

pub type Mat<S> = Vec<Vec<S>>;

pub fn zeros<S: Scalar>(rows: usize, cols: usize) -> Mat<S> {
    vec![vec![S::zero(); cols]; rows]
}

pub fn identity<S: Scalar>(n: usize) -> Mat<S> {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = S::one();
    }
    m
}

pub fn mat_vec<S: Scalar>(m: &[Vec<S>], v: &[S]) -> Vec<S> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(S::zero(), |acc, (&a, &b)| acc + a * b)
        })
        .collect()
}

pub fn mat_mul<S: Scalar>(a: &[Vec<S>], b: &[Vec<S>]) -> Mat<S> {
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    let mut out = zeros(n, m);
    for i in 0..n {
        for j in 0..m {
            let mut acc = S::zero();
            for l in 0..k {
                acc = acc + a[i][l] * b[l][j];
            }
            out[i][j] = acc;
        }
    }
    out
}

/// Metric pairing `xᵀ g y`.
pub fn g_inner<S: Scalar>(g: &[Vec<S>], x: &[S], y: &[S]) -> S {
    let gy = mat_vec(g, y);
    x.iter()
        .zip(&gy)
        .fold(S::zero(), |acc, (&a, &b)| acc + a * b)
}

pub fn g_norm<S: Scalar>(g: &[Vec<S>], x: &[S]) -> S {
    g_inner(g, x, x).sqrt()
}

pub fn scale<S: Scalar>(v: &[S], s: S) -> Vec<S> {
    v.iter().map(|&x| x * s).collect()
}

pub fn add_vec<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(&x, &y)| x + y).collect()
}

pub fn sub_vec<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

pub fn axpy<S: Scalar>(a: S, x: &[S], y: &[S]) -> Vec<S> {
    x.iter().zip(y).map(|(&xi, &yi)| a * xi + yi).collect()
}

pub fn euclid_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Cholesky factorization of a symmetric matrix. Fails if any pivot has a
/// non-positive numeric part, which is the SPD test used by the charts.
pub fn cholesky<S: Scalar>(a: &[Vec<S>]) -> std::result::Result<Mat<S>, (usize, f64)> {
    let n = a.len();
    let mut l = zeros::<S>(n, n);
    for i in 0..n {
        for j in 0..=i {
            let mut sum = a[i][j];
            for k in 0..j {
                sum = sum - l[i][k] * l[j][k];
            }
            if i == j {
                if sum.value() <= 0.0 {
                    return Err((i, sum.value()));
                }
                l[i][j] = sum.sqrt();
            } else {
                l[i][j] = sum / l[j][j];
            }
        }
    }
    Ok(l)
}

/// Gaussian elimination with partial pivoting on the numeric part.
pub fn solve<S: Scalar>(a: &[Vec<S>], b: &[S]) -> Result<Vec<S>> {
    let n = a.len();
    let mut m: Mat<S> = a.to_vec();
    let mut rhs = b.to_vec();
    for col in 0..n {
        let (mut pivot_row, mut pivot_abs) = (col, m[col][col].value().abs());
        for (r, row) in m.iter().enumerate().skip(col + 1) {
            let cand = row[col].value().abs();
            if cand > pivot_abs {
                pivot_row = r;
                pivot_abs = cand;
            }
        }
        if pivot_abs < 1e-13 {
            return Err(GeomError::DegenerateInput(format!(
                "singular linear system (pivot {pivot_abs:.3e} in column {col})"
            )));
        }
        m.swap(col, pivot_row);
        rhs.swap(col, pivot_row);
        let inv = S::one() / m[col][col];
        for r in col + 1..n {
            let factor = m[r][col] * inv;
            for c in col..n {
                let sub = factor * m[col][c];
                m[r][c] = m[r][c] - sub;
            }
            let sub = factor * rhs[col];
            rhs[r] = rhs[r] - sub;
        }
    }
    let mut x = vec![S::zero(); n];
    for row in (0..n).rev() {
        let mut acc = rhs[row];
        for c in row + 1..n {
            acc = acc - m[row][c] * x[c];
        }
        x[row] = acc / m[row][row];
    }
    Ok(x)
}

/// Matrix inverse via column-by-column solves.
pub fn inverse<S: Scalar>(a: &[Vec<S>]) -> Result<Mat<S>> {
    let n = a.len();
    let mut out = zeros::<S>(n, n);
    for j in 0..n {
        let mut e = vec![S::zero(); n];
        e[j] = S::one();
        let col = solve(a, &e)?;
        for i in 0..n {
            out[i][j] = col[i];
        }
    }
    Ok(out)
}

/// Gram-Schmidt in the inner product `g`, with one reorthogonalization
/// pass. Returns the orthonormalized vectors; input vectors whose residual
/// falls below `pivot_tol` are rejected.
pub fn gram_schmidt_g<S: Scalar>(
    g: &[Vec<S>],
    basis: &[Vec<S>],
    pivot_tol: f64,
) -> Result<Vec<Vec<S>>> {
    let mut out: Vec<Vec<S>> = Vec::with_capacity(basis.len());
    for v in basis {
        let mut w = v.clone();
        for _pass in 0..2 {
            for e in &out {
                let c = g_inner(g, e, &w);
                w = axpy(-c, e, &w);
            }
        }
        let norm = g_norm(g, &w);
        if norm.value() < pivot_tol {
            return Err(GeomError::DegenerateInput(format!(
                "Gram-Schmidt pivot {:.3e} below {pivot_tol:.1e}",
                norm.value()
            )));
        }
        out.push(scale(&w, S::one() / norm));
    }
    Ok(out)
}

/// Like [`gram_schmidt_g`] but silently drops dependent vectors instead of
/// failing; used to extract a spanning subset from an overcomplete list.
pub fn gram_schmidt_g_pruned<S: Scalar>(
    g: &[Vec<S>],
    basis: &[Vec<S>],
    drop_tol: f64,
) -> Vec<Vec<S>> {
    let mut out: Vec<Vec<S>> = Vec::new();
    for v in basis {
        let mut w = v.clone();
        for _pass in 0..2 {
            for e in &out {
                let c = g_inner(g, e, &w);
                w = axpy(-c, e, &w);
            }
        }
        let norm = g_norm(g, &w);
        if norm.value() >= drop_tol {
            out.push(scale(&w, S::one() / norm));
        }
    }
    out
}

/// Symmetric Jacobi eigendecomposition (f64 only). Returns (eigenvalues,
/// eigenvectors as columns), unsorted.
pub fn jacobi_eigen(a: &[Vec<f64>]) -> (Vec<f64>, Mat<f64>) {
    let n = a.len();
    let mut m: Mat<f64> = a.to_vec();
    let mut v = identity::<f64>(n);
    for _sweep in 0..60 {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += m[i][j] * m[i][j];
            }
        }
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[k][p], m[k][q]);
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p][k], m[q][k]);
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[k][p], v[k][q]);
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let eig = (0..n).map(|i| m[i][i]).collect();
    (eig, v)
}

/// Orthonormal basis of the kernel of `a` (singular values below `tol`,
/// scaled by ‖a‖), via the Jacobi eigendecomposition of `aᵀa`. The
/// eigenvalues of `aᵀa` only resolve singular values down to √ε·‖a‖, so
/// candidates are re-thresholded with the directly computed residual
/// ‖a·v‖, which is accurate to ε·‖a‖.
pub fn nullspace(a: &[Vec<f64>], tol: f64) -> Vec<Vec<f64>> {
    let rows = a.len();
    if rows == 0 {
        return Vec::new();
    }
    let n = a[0].len();
    let norm_a = a
        .iter()
        .flat_map(|r| r.iter())
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt();
    let mut ata = zeros::<f64>(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0.0;
            for r in 0..rows {
                acc += a[r][i] * a[r][j];
            }
            ata[i][j] = acc;
        }
    }
    let (eig, vecs) = jacobi_eigen(&ata);
    let cutoff = tol * norm_a.max(1.0);
    let mut kernel = Vec::new();
    for (k, _) in eig.iter().enumerate() {
        let v: Vec<f64> = (0..n).map(|i| vecs[i][k]).collect();
        let residual = euclid_norm(&mat_vec(a, &v));
        if residual < cutoff {
            kernel.push(v);
        }
    }
    kernel
}

/// Numerical rank of `a`: singular values above `tol`.
pub fn rank(a: &[Vec<f64>], tol: f64) -> usize {
    let cols = if a.is_empty() { 0 } else { a[0].len() };
    cols - nullspace(a, tol).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ad::D2;

    #[test]
    fn solve_roundtrip() {
        let a = vec![
            vec![4.0, 1.0, 0.5],
            vec![1.0, 3.0, -0.2],
            vec![0.5, -0.2, 2.0],
        ];
        let x_true = [1.0, -2.0, 0.75];
        let b = mat_vec(&a, &x_true);
        let x = solve(&a, &b).unwrap();
        for i in 0..3 {
            assert!((x[i] - x_true[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn cholesky_detects_non_spd() {
        let a = vec![vec![1.0, 2.0], vec![2.0, 1.0]];
        assert!(cholesky(&a).is_err());
        let b = vec![vec![2.0, 0.3], vec![0.3, 1.0]];
        assert!(cholesky(&b).is_ok());
    }

    #[test]
    fn gram_schmidt_orthonormalizes_in_metric() {
        let g = vec![vec![2.0, 0.0], vec![0.0, 0.5]];
        let basis = vec![vec![1.0, 1.0], vec![0.0, 1.0]];
        let e = gram_schmidt_g(&g, &basis, 1e-12).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((g_inner(&g, &e[i], &e[j]) - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn gram_schmidt_rejects_repeated_vector() {
        let g = identity::<f64>(3);
        let basis = vec![vec![1.0, 0.0, 0.0], vec![1.0, 0.0, 0.0]];
        assert!(gram_schmidt_g(&g, &basis, 1e-12).is_err());
    }

    #[test]
    fn nullspace_of_zero_and_identity() {
        let zero = zeros::<f64>(2, 2);
        assert_eq!(nullspace(&zero, 1e-9).len(), 2);
        let id = identity::<f64>(3);
        assert!(nullspace(&id, 1e-9).is_empty());
    }

    #[test]
    fn nullspace_residual_bound() {
        // kernel vectors v must satisfy ‖A v‖ ≤ 10 tol ‖A‖
        let a = vec![vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0]];
        let tol = 1e-9;
        let kernel = nullspace(&a, tol);
        assert_eq!(kernel.len(), 2);
        let norm_a = a
            .iter()
            .flat_map(|r| r.iter())
            .map(|x| x * x)
            .sum::<f64>()
            .sqrt();
        for v in &kernel {
            let av = mat_vec(&a, v);
            assert!(euclid_norm(&av) <= 10.0 * tol * norm_a);
        }
    }

    #[test]
    fn solve_flows_through_jets() {
        // derivative of solution of (x-dependent system) matches closed form:
        // a(x) * y = 1 with a(x) = x  =>  y = 1/x, y' = -1/x².
        let x = D2::active(2.0, 0, 1);
        let a = vec![vec![x]];
        let y = solve(&a, &[D2::constant(1.0)]).unwrap();
        assert!((y[0].val() - 0.5).abs() < 1e-15);
        assert!((y[0].grad(0) + 0.25).abs() < 1e-15);
    }
}
