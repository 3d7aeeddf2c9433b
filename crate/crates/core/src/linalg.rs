//! Small dense linear algebra: vector helpers, orthogonal factors,
//! a cyclic Jacobi eigensolver and a Cholesky solve.
//!
//! Problem dimensions here are the ones typical for optimal control
//! (n of the order of tens), so plain row-major `Vec<f64>` storage is
//! all that is needed.

use crate::error::{Error, Result};

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm1(x: &[f64]) -> f64 {
    x.iter().map(|v| v.abs()).sum()
}

pub fn norm2(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

pub fn norm_inf(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// `‖x‖_p` for finite `p ≥ 1`.
pub fn norm_p(x: &[f64], p: f64) -> f64 {
    x.iter().map(|v| v.abs().powf(p)).sum::<f64>().powf(1.0 / p)
}

/// Squared Euclidean distance between two equal-length vectors.
pub fn dist2_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Row-major dense orthogonal matrix whose columns form an orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalMatrix {
    n: usize,
    data: Vec<f64>,
}

impl OrthogonalMatrix {
    /// Per-entry tolerance on `PᵀP = I`.
    pub const ORTHOGONALITY_TOL: f64 = 1e-10;

    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::InvalidSpec(format!(
                "orthogonal factor has {} entries, expected {}x{}",
                data.len(),
                n,
                n
            )));
        }
        let m = Self { n, data };
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for k in 0..n {
                    s += m.data[k * n + i] * m.data[k * n + j];
                }
                let expect = if i == j { 1.0 } else { 0.0 };
                if (s - expect).abs() > Self::ORTHOGONALITY_TOL {
                    return Err(Error::InvalidSpec(format!(
                        "factor is not orthogonal: (PᵀP)[{i},{j}] = {s}"
                    )));
                }
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.n + col]
    }

    /// `P x`
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n];
        for i in 0..n {
            out[i] = dot(&self.data[i * n..(i + 1) * n], x);
        }
        out
    }

    /// `Pᵀ x`
    pub fn apply_transpose(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n];
        for (i, &xi) in x.iter().enumerate() {
            let row = &self.data[i * n..(i + 1) * n];
            for j in 0..n {
                out[j] += row[j] * xi;
            }
        }
        out
    }
}

/// Eigendecomposition `A = P diag(w) Pᵀ` of a dense symmetric matrix by
/// cyclic Jacobi rotations. Intended for the small matrices that appear
/// in problem files; rejects visibly asymmetric input.
pub fn jacobi_eigh(a: &[f64], n: usize) -> Result<(Vec<f64>, OrthogonalMatrix)> {
    if a.len() != n * n {
        return Err(Error::InvalidSpec(format!(
            "matrix has {} entries, expected {}x{}",
            a.len(),
            n,
            n
        )));
    }
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    for i in 0..n {
        for j in (i + 1)..n {
            if (a[i * n + j] - a[j * n + i]).abs() > 1e-10 * scale {
                return Err(Error::InvalidSpec(format!(
                    "matrix is not symmetric at ({i},{j})"
                )));
            }
        }
    }

    let mut m = a.to_vec();
    // v starts as the identity and accumulates the rotations; its columns
    // end up as the eigenvectors.
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    let off = |m: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += m[i * n + j] * m[i * n + j];
            }
        }
        s
    };

    for _sweep in 0..100 {
        if off(&m) <= 1e-26 * scale * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k * n + p];
                    let mkq = m[k * n + q];
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p * n + k];
                    let mqk = m[q * n + k];
                    m[p * n + k] = c * mpk - s * mqk;
                    m[q * n + k] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let eigenvalues: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    Ok((eigenvalues, OrthogonalMatrix::new(n, v)?))
}

/// Solve `A x = b` for symmetric positive definite `A` (row-major) by
/// Cholesky factorization. Returns `None` when the factorization breaks
/// down, so callers can regularize and retry.
pub fn solve_spd(a: &[f64], n: usize, b: &[f64]) -> Option<Vec<f64>> {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(b.len(), n);
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if s <= 0.0 || !s.is_finite() {
                    return None;
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    // Forward solve L y = b, then backward solve Lᵀ x = y.
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i * n + k] * y[k];
        }
        y[i] = s / l[i * n + i];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in (i + 1)..n {
            s -= l[k * n + i] * x[k];
        }
        x[i] = s / l[i * n + i];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_recovers_diagonal() {
        let a = vec![3.0, 0.0, 0.0, 1.0];
        let (w, p) = jacobi_eigh(&a, 2).unwrap();
        let mut w = w;
        w.sort_by(|x, y| x.partial_cmp(y).unwrap());
        assert!((w[0] - 1.0).abs() < 1e-12);
        assert!((w[1] - 3.0).abs() < 1e-12);
        // reconstruct
        let e1 = p.apply_transpose(&[1.0, 0.0]);
        assert!((e1[0] * e1[0] + e1[1] * e1[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn jacobi_reconstructs() {
        let a = vec![2.0, 1.0, 0.5, 1.0, 2.0, 1.0, 0.5, 1.0, 3.0];
        let (w, p) = jacobi_eigh(&a, 3).unwrap();
        // A x should equal P diag(w) Pᵀ x for a few vectors.
        for x in [[1.0, 0.0, 0.0], [0.3, -1.0, 2.0]] {
            let mut ax = vec![0.0; 3];
            for i in 0..3 {
                for j in 0..3 {
                    ax[i] += a[i * 3 + j] * x[j];
                }
            }
            let mut y = p.apply_transpose(&x);
            for (yi, wi) in y.iter_mut().zip(&w) {
                *yi *= wi;
            }
            let back = p.apply(&y);
            for i in 0..3 {
                assert!((ax[i] - back[i]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn jacobi_rejects_asymmetric() {
        let a = vec![1.0, 2.0, 0.0, 1.0];
        assert!(jacobi_eigh(&a, 2).is_err());
    }

    #[test]
    fn spd_solve_roundtrip() {
        let a = vec![4.0, 1.0, 1.0, 3.0];
        let x = solve_spd(&a, 2, &[1.0, 2.0]).unwrap();
        assert!((4.0 * x[0] + x[1] - 1.0).abs() < 1e-12);
        assert!((x[0] + 3.0 * x[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn spd_solve_rejects_indefinite() {
        let a = vec![1.0, 2.0, 2.0, 1.0];
        assert!(solve_spd(&a, 2, &[1.0, 1.0]).is_none());
    }
}
