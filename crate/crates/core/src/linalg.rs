//! Small dense linear algebra: cyclic Jacobi eigensolver, PSD factorization
//! and modified Gram-Schmidt.
//!
//! Matrices are row-major `Vec<f64>` of size `n * n`.

use crate::error::{Error, Result};

/// Off-diagonal Frobenius norm at which Jacobi sweeps stop, relative to
/// `max(1, ||A||_F)`.
pub const JACOBI_TOLERANCE: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// `vectors[j]` is the unit eigenvector for `values[j]`, when requested.
    pub vectors: Option<Vec<Vec<f64>>>,
}

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j] * a[i * n + j];
            }
        }
    }
    s.sqrt()
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
pub fn symmetric_eigen(matrix: &[f64], n: usize, want_vectors: bool) -> Result<SymmetricEigen> {
    if matrix.len() != n * n {
        return Err(Error::Shape(format!(
            "expected {} entries for a {n}x{n} matrix, got {}",
            n * n,
            matrix.len()
        )));
    }
    let mut a = matrix.to_vec();
    let mut v = if want_vectors {
        let mut id = vec![0.0; n * n];
        for i in 0..n {
            id[i * n + i] = 1.0;
        }
        Some(id)
    } else {
        None
    };

    let scale = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
    let target = JACOBI_TOLERANCE * scale;
    let mut sweeps = 0;
    while off_diagonal_norm(&a, n) > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::Numerical {
                message: format!("Jacobi did not converge in {MAX_SWEEPS} sweeps"),
                dump: format!("off-diagonal norm {:e}", off_diagonal_norm(&a, n)),
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    let new_kp = c * akp - s * akq;
                    let new_kq = s * akp + c * akq;
                    a[k * n + p] = new_kp;
                    a[p * n + k] = new_kp;
                    a[k * n + q] = new_kq;
                    a[q * n + k] = new_kq;
                }
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = c * vkp - s * vkq;
                        v[k * n + q] = s * vkp + c * vkq;
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].total_cmp(&a[i * n + i]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let vectors = v.map(|v| {
        order
            .iter()
            .map(|&col| (0..n).map(|row| v[row * n + col]).collect())
            .collect()
    });
    Ok(SymmetricEigen { values, vectors })
}

/// Coordinates `X` with `X Xᵀ = G` for a positive semidefinite `G`.
#[derive(Debug, Clone)]
pub struct PsdFactor {
    /// One row per input index; columns follow the retained eigenvalues.
    pub rows: Vec<Vec<f64>>,
    pub min_eigenvalue: f64,
    /// Largest magnitude of a negative eigenvalue that was clipped to zero.
    pub clipped: f64,
}

/// Eigenvalues at or above this are treated as rounding and clipped.
pub const PSD_ACCEPT: f64 = -1e-9;
/// Eigenvalues below this reject the matrix outright.
pub const PSD_REJECT: f64 = -1e-6;

/// Factor a PSD matrix as `X Xᵀ` through its eigen-decomposition.
pub fn factor_psd(gram: &[f64], n: usize) -> Result<PsdFactor> {
    let eig = symmetric_eigen(gram, n, true)?;
    let min_eigenvalue = eig.values.last().copied().unwrap_or(0.0);
    if min_eigenvalue < PSD_REJECT {
        return Err(Error::NotPsd { min_eigenvalue });
    }
    let vectors = eig.vectors.expect("requested");
    let mut clipped: f64 = 0.0;
    let mut kept: Vec<(f64, &Vec<f64>)> = Vec::new();
    for (value, vec) in eig.values.iter().zip(vectors.iter()) {
        if *value > 0.0 {
            kept.push((value.sqrt(), vec));
        } else {
            clipped = clipped.max(-value);
        }
    }
    let rows = (0..n)
        .map(|i| kept.iter().map(|(root, vec)| root * vec[i]).collect())
        .collect();
    Ok(PsdFactor {
        rows,
        min_eigenvalue,
        clipped,
    })
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Orthonormal basis of the span of `vectors`, by modified Gram-Schmidt in
/// input order. A vector whose residual falls below `rel_tol` times its own
/// norm is treated as dependent and skipped.
pub fn gram_schmidt<'a, I>(vectors: I, rel_tol: f64) -> Vec<Vec<f64>>
where
    I: IntoIterator<Item = &'a [f64]>,
{
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let original = norm2(v);
        if original == 0.0 {
            continue;
        }
        let mut w = v.to_vec();
        // two passes keep orthogonality at machine precision
        for _ in 0..2 {
            for q in &basis {
                let c = dot(&w, q);
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= c * qi;
                }
            }
        }
        let r = norm2(&w);
        if r > rel_tol * original {
            w.iter_mut().for_each(|x| *x /= r);
            basis.push(w);
        }
    }
    basis
}
