//! Dense kernels for the small matrices that show up in the geometry code:
//! LU solves, Cholesky, symmetric (generalized) eigenproblems, determinants
//! and the matrix exponential.

use crate::error::{GeomError, Result};

use super::vector::{Matrix, Vector};

/// LU factorization with partial pivoting, stored in place.
struct Lu {
    lu: Matrix,
    perm: [usize; 4],
    sign: f64,
}

fn lu(a: &Matrix) -> Result<Lu> {
    let n = a.rows();
    assert_eq!(n, a.cols(), "LU of a non-square matrix");
    let mut lu = *a;
    let mut perm = [0, 1, 2, 3];
    let mut sign = 1.0;
    let scale = a.max_abs();
    for k in 0..n {
        let mut p = k;
        for i in k + 1..n {
            if lu[(i, k)].abs() > lu[(p, k)].abs() {
                p = i;
            }
        }
        if lu[(p, k)].abs() <= 1e-300_f64.max(scale * 1e-15) {
            return Err(GeomError::Singular);
        }
        if p != k {
            for j in 0..n {
                let t = lu[(k, j)];
                lu[(k, j)] = lu[(p, j)];
                lu[(p, j)] = t;
            }
            perm.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            let f = lu[(i, k)] / lu[(k, k)];
            lu[(i, k)] = f;
            for j in k + 1..n {
                lu[(i, j)] -= f * lu[(k, j)];
            }
        }
    }
    Ok(Lu { lu, perm, sign })
}

impl Lu {
    fn solve(&self, b: &Vector) -> Vector {
        let n = self.lu.rows();
        let mut x = Vector::from_fn(n, |i| b[self.perm[i]]);
        for i in 0..n {
            for j in 0..i {
                x[i] -= self.lu[(i, j)] * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                x[i] -= self.lu[(i, j)] * x[j];
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }
}

pub fn solve(a: &Matrix, b: &Vector) -> Result<Vector> {
    Ok(lu(a)?.solve(b))
}

pub fn inverse(a: &Matrix) -> Result<Matrix> {
    let n = a.rows();
    let f = lu(a)?;
    let cols: Vec<Vector> = (0..n).map(|j| f.solve(&Vector::basis(n, j))).collect();
    Ok(Matrix::from_columns(&cols))
}

pub fn det(a: &Matrix) -> f64 {
    match lu(a) {
        Ok(f) => (0..a.rows()).fold(f.sign, |acc, i| acc * f.lu[(i, i)]),
        Err(_) => 0.0,
    }
}

/// Lower-triangular `L` with `A = L Lᵀ`.
pub fn cholesky(a: &Matrix) -> Result<Matrix> {
    let n = a.rows();
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if d <= 0.0 || !d.is_finite() {
            return Err(GeomError::NotPositiveDefinite);
        }
        let djj = d.sqrt();
        l[(j, j)] = djj;
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / djj;
        }
    }
    Ok(l)
}

fn forward_sub(l: &Matrix, b: &Vector) -> Vector {
    let n = l.rows();
    let mut x = *b;
    for i in 0..n {
        for j in 0..i {
            x[i] -= l[(i, j)] * x[j];
        }
        x[i] /= l[(i, i)];
    }
    x
}

fn back_sub_transpose(l: &Matrix, b: &Vector) -> Vector {
    // Solves Lᵀ x = b.
    let n = l.rows();
    let mut x = *b;
    for i in (0..n).rev() {
        for j in i + 1..n {
            x[i] -= l[(j, i)] * x[j];
        }
        x[i] /= l[(i, i)];
    }
    x
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Eigenvalues come back ascending; eigenvectors are the matching columns.
pub fn sym_eigen(a: &Matrix) -> (Vec<f64>, Matrix) {
    let n = a.rows();
    let mut m = a.symmetrized();
    let mut v = Matrix::identity(n);
    for _sweep in 0..64 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += m[(p, q)] * m[(p, q)];
            }
        }
        if off <= 1e-300 || off.sqrt() <= 1e-17 * m.norm() {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].total_cmp(&m[(j, j)]));
    let vals = order.iter().map(|&i| m[(i, i)]).collect();
    let vecs = Matrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    (vals, vecs)
}

/// Solution of `B v = λ G v`.
#[derive(Clone, Debug)]
pub struct GeneralizedEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Columns are `G`-orthonormal eigenvectors.
    pub vectors: Matrix,
    /// `max |B − Bᵀ|` of the input before symmetrization.
    pub asymmetry: f64,
}

/// Symmetric-definite generalized eigenproblem, reduced to a standard one
/// through the Cholesky factor of `G`. `B` is symmetrized first.
pub fn sym_generalized_eigen(b: &Matrix, g: &Matrix) -> Result<GeneralizedEigen> {
    let n = b.rows();
    let asymmetry = b.asymmetry();
    let bs = b.symmetrized();
    let l = cholesky(&g.symmetrized())?;
    // C = L⁻¹ B L⁻ᵀ
    let mut y = Matrix::zeros(n, n);
    for j in 0..n {
        let col = forward_sub(&l, &bs.column(j));
        for i in 0..n {
            y[(i, j)] = col[i];
        }
    }
    let yt = y.transpose();
    let mut c = Matrix::zeros(n, n);
    for j in 0..n {
        let col = forward_sub(&l, &yt.column(j));
        for i in 0..n {
            c[(i, j)] = col[i];
        }
    }
    let (values, w) = sym_eigen(&c);
    let mut vectors = Matrix::zeros(n, n);
    for j in 0..n {
        let v = back_sub_transpose(&l, &w.column(j));
        for i in 0..n {
            vectors[(i, j)] = v[i];
        }
    }
    Ok(GeneralizedEigen { values, vectors, asymmetry })
}

/// Matrix exponential by scaling and squaring of a truncated Taylor series.
pub fn expm(a: &Matrix) -> Matrix {
    let n = a.rows();
    let norm = a.norm();
    let mut s = 0;
    while norm / f64::from(1u32 << s.min(30)) > 0.25 && s < 60 {
        s += 1;
    }
    let scaled = a.scale(0.5f64.powi(s));
    let mut result = Matrix::identity(n);
    let mut term = Matrix::identity(n);
    for k in 1..=20 {
        term = term.matmul(&scaled).scale(1.0 / k as f64);
        result = result.add(&term);
    }
    for _ in 0..s {
        result = result.matmul(&result);
    }
    result
}
