//! Small dense complex linear algebra.
//!
//! Everything here targets dimensions up to a few dozen, so matrices are
//! plain row-major `Vec<C64>` buffers and every loop runs in a fixed order;
//! identical inputs give bitwise-identical outputs on any IEEE-754 platform.

use std::ops::{Index, IndexMut};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from a row-major buffer of length `dim²`.
    pub fn from_vec(dim: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: data.len() });
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: row.len() });
            }
            data.extend(row);
        }
        Ok(Self { dim, data })
    }

    /// Diagonal matrix with real entries.
    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    /// Outer product `|u⟩⟨v|`.
    pub fn outer(u: &[C64], v: &[C64]) -> Result<Self> {
        check_len(u.len(), v.len())?;
        let dim = u.len();
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = u[i] * v[j].conj();
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C64]) -> Result<Vec<C64>> {
        check_len(self.dim, v.len())?;
        Ok((0..self.dim).map(|i| self.row(i).iter().zip(v).fold(ZERO, |acc, (a, x)| acc + a * x)).collect())
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        check_len(self.dim, rhs.dim)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a - b)
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&a| a * factor).collect() }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Induced ∞-norm (maximum absolute row sum).
    pub fn row_sum_norm(&self) -> f64 {
        (0..self.dim).map(|i| self.row(i).iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
    }

    /// Worst `|M_ij − conj(M_ji)|` with its location.
    pub fn hermiticity_residual(&self) -> (usize, usize, f64) {
        let mut worst = (0, 0, 0.0);
        for i in 0..self.dim {
            for j in i..self.dim {
                let r = (self[(i, j)] - self[(j, i)].conj()).norm();
                if r > worst.2 {
                    worst = (i, j, r);
                }
            }
        }
        worst
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        check_len(self.dim, rhs.dim)?;
        Ok(Self { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| f(a, b)).collect() })
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// `⟨u|v⟩ = Σ conj(u_i) v_i`.
pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    debug_assert_eq!(u.len(), v.len());
    u.iter().zip(v).fold(ZERO, |acc, (a, b)| acc + a.conj() * b)
}

pub fn norm_sqr(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

pub fn norm(v: &[C64]) -> f64 {
    norm_sqr(v).sqrt()
}

/// `a·u + b·v`, elementwise.
pub fn lincomb(a: C64, u: &[C64], b: C64, v: &[C64]) -> Vec<C64> {
    debug_assert_eq!(u.len(), v.len());
    u.iter().zip(v).map(|(&x, &y)| a * x + b * y).collect()
}

pub fn scaled(a: C64, v: &[C64]) -> Vec<C64> {
    v.iter().map(|&x| a * x).collect()
}

/// Result of a Householder QR factorization `A = Q R`.
#[derive(Debug, Clone)]
pub struct QrFactors {
    pub q: CMatrix,
    pub r: CMatrix,
}

/// Householder QR of a square complex matrix.
///
/// Columns are processed left to right; the reflector for column `k` maps
/// `x = A[k.., k]` onto `−e^{i·arg x₀}‖x‖·e₀`, so `r_kk` carries the phase
/// of the pivot. Fails with [`Error::DegenerateDraw`] if a column below the
/// diagonal has norm under `1e-300`.
pub fn householder_qr(a: &CMatrix) -> Result<QrFactors> {
    let n = a.dim();
    let mut r = a.clone();
    let mut q = CMatrix::identity(n);
    for k in 0..n {
        let x: Vec<C64> = (k..n).map(|i| r[(i, k)]).collect();
        let xnorm = norm(&x);
        if xnorm < 1e-300 {
            return Err(Error::DegenerateDraw(xnorm));
        }
        let phase = if x[0] == ZERO { ONE } else { x[0] / x[0].norm() };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vv = norm_sqr(&v);
        let beta = 2.0 / vv;
        // R ← H R on the trailing block
        for j in k..n {
            let w = (k..n).fold(ZERO, |acc, i| acc + v[i - k].conj() * r[(i, j)]);
            let w = w * beta;
            for i in k..n {
                let vi = v[i - k];
                r[(i, j)] -= vi * w;
            }
        }
        for i in (k + 1)..n {
            r[(i, k)] = ZERO;
        }
        r[(k, k)] = alpha;
        // Q ← Q H
        for i in 0..n {
            let w = (k..n).fold(ZERO, |acc, j| acc + q[(i, j)] * v[j - k]);
            let w = w * beta;
            for j in k..n {
                let vj = v[j - k];
                q[(i, j)] -= w * vj.conj();
            }
        }
    }
    Ok(QrFactors { q, r })
}

/// Eigendecomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors, `vectors[k]` belonging to `values[k]`.
    pub vectors: Vec<Vec<C64>>,
}

/// Cyclic complex Jacobi eigensolver for Hermitian matrices.
///
/// Each rotation first removes the phase of the pivot `a_pq` and then applies
/// a real Jacobi rotation. Only the Hermitian part of the input is used.
pub fn hermitian_eigen(m: &CMatrix) -> HermitianEigen {
    let n = m.dim();
    let mut a = m.clone();
    for i in 0..n {
        for j in i..n {
            let h = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = h;
            a[(j, i)] = h.conj();
        }
    }
    let mut w = CMatrix::identity(n);
    let total: f64 = a.as_slice().iter().map(|z| z.norm_sqr()).sum();

    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum();
        if off <= 1e-30 * total.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let e = (apq / mag).conj();
                // V = diag(1, e) · [[c, s], [-s, c]] on the (p, q) plane
                let vpp = C64::new(c, 0.0);
                let vpq = C64::new(s, 0.0);
                let vqp = e * (-s);
                let vqq = e * c;
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = aip * vpp + aiq * vqp;
                    a[(i, q)] = aip * vpq + aiq * vqq;
                    let wip = w[(i, p)];
                    let wiq = w[(i, q)];
                    w[(i, p)] = wip * vpp + wiq * vqp;
                    w[(i, q)] = wip * vpq + wiq * vqq;
                }
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = vpp.conj() * apj + vqp.conj() * aqj;
                    a[(q, j)] = vpq.conj() * apj + vqq.conj() * aqj;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    HermitianEigen {
        values: order.iter().map(|&k| a[(k, k)].re).collect(),
        vectors: order.iter().map(|&k| w.column(k)).collect(),
    }
}
