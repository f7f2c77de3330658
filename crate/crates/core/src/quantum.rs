//! Validated states, observables and density matrices, and the scalar
//! quantities every bound is built from.

use num_complex::Complex64 as C64;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{self, hermitian_eigen, inner, norm, norm_sqr, CMatrix, HermitianEigen};

/// Unit-norm pure state `|ψ⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<C64>,
}

impl StateVector {
    /// Validates finiteness and `|‖ψ‖² − 1| ≤ norm` tolerance.
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        Self::new_with(amps, &Tolerances::default())
    }

    pub fn new_with(amps: Vec<C64>, tol: &Tolerances) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        check_finite(&amps)?;
        let n2 = norm_sqr(&amps);
        if (n2 - 1.0).abs() > tol.norm {
            return Err(Error::NotNormalized(n2));
        }
        Ok(Self { amps })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalize(raw: Vec<C64>) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        check_finite(&raw)?;
        let n = norm(&raw);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NullProjection);
        }
        Ok(Self { amps: raw.into_iter().map(|z| z / n).collect() })
    }

    /// Computational basis vector `e_k`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if dim == 0 || k >= dim {
            return Err(Error::InvalidDimension(dim));
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[k] = C64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    /// Normalized real-amplitude state; convenience for tests and examples.
    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::normalize(amps.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    /// `e^{iθ}|ψ⟩`.
    pub fn with_phase(&self, theta: f64) -> Self {
        let p = C64::from_polar(1.0, theta);
        Self { amps: self.amps.iter().map(|&z| p * z).collect() }
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &StateVector) -> C64 {
        inner(&self.amps, &other.amps)
    }
}

/// Observable: a Hermitian matrix, validated at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: CMatrix,
}

impl HermitianOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        Self::new_with(matrix, &Tolerances::default())
    }

    pub fn new_with(matrix: CMatrix, tol: &Tolerances) -> Result<Self> {
        if matrix.dim() == 0 {
            return Err(Error::InvalidDimension(0));
        }
        check_finite(matrix.as_slice())?;
        let (row, col, residual) = matrix.hermiticity_residual();
        if residual > tol.herm {
            return Err(Error::NotHermitian { row, col, residual });
        }
        Ok(Self { matrix })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        Self::new(CMatrix::from_real_diagonal(diag))
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: CMatrix::identity(dim) }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        self.matrix.mul_vec(v)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(Self { matrix: self.matrix.add(&other.matrix)? })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(Self { matrix: self.matrix.sub(&other.matrix)? })
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self { matrix: self.matrix.scale(C64::new(factor, 0.0)) }
    }

    /// `O²`, Hermitian up to rounding.
    pub fn square(&self) -> Result<Self> {
        let sq = self.matrix.matmul(&self.matrix)?;
        Ok(Self { matrix: symmetrize(&sq) })
    }

    /// Maximum absolute row sum, used to scale the eigenstate threshold.
    pub fn spectral_scale(&self) -> f64 {
        self.matrix.row_sum_norm()
    }

    /// `ΔO` below which a state counts as an eigenstate of this observable.
    pub fn eigenstate_threshold(&self, tol: &Tolerances) -> f64 {
        tol.eig * self.spectral_scale().max(1.0)
    }

    pub fn eigen(&self) -> HermitianEigen {
        hermitian_eigen(&self.matrix)
    }
}

/// Mixed state `ρ`: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        Self::new_with(matrix, &Tolerances::default())
    }

    pub fn new_with(matrix: CMatrix, tol: &Tolerances) -> Result<Self> {
        if matrix.dim() == 0 {
            return Err(Error::InvalidDimension(0));
        }
        check_finite(matrix.as_slice())?;
        let (row, col, residual) = matrix.hermiticity_residual();
        if residual > tol.herm {
            return Err(Error::NotHermitian { row, col, residual });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > tol.norm || tr.im.abs() > tol.norm {
            return Err(Error::BadTrace(tr.re));
        }
        let min = hermitian_eigen(&matrix).values[0];
        if min < -tol.psd {
            return Err(Error::NotPositive(min));
        }
        Ok(Self { matrix })
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn from_pure(psi: &StateVector) -> Self {
        let m = CMatrix::outer(psi.amplitudes(), psi.amplitudes()).expect("outer product of a vector with itself");
        Self { matrix: m }
    }

    /// `Σ p_j |ψ_j⟩⟨ψ_j|` with `p_j ≥ 0`, `Σ p_j = 1`.
    pub fn from_ensemble(ensemble: &[(f64, StateVector)]) -> Result<Self> {
        let Some((_, first)) = ensemble.first() else {
            return Err(Error::InvalidArgument("empty ensemble".into()));
        };
        let dim = first.dim();
        let mut m = CMatrix::zeros(dim);
        let mut total = 0.0;
        for (p, psi) in ensemble {
            if !p.is_finite() || *p < 0.0 {
                return Err(Error::InvalidArgument(format!("weight {p} is not a probability")));
            }
            if psi.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: psi.dim() });
            }
            total += p;
            m = m.add(&CMatrix::outer(psi.amplitudes(), psi.amplitudes())?.scale(C64::new(*p, 0.0)))?;
        }
        if (total - 1.0).abs() > Tolerances::default().norm {
            return Err(Error::BadTrace(total));
        }
        Self::new(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn eigen(&self) -> HermitianEigen {
        hermitian_eigen(&self.matrix)
    }
}

/// `O|ψ⟩ = mean·|ψ⟩ + deviation·|perp⟩` with `perp ⊥ ψ`.
#[derive(Debug, Clone, PartialEq)]
pub struct VaidmanDecomposition {
    pub mean: f64,
    pub deviation: f64,
    pub perp: StateVector,
}

fn check_finite(v: &[C64]) -> Result<()> {
    match v.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
        Some(i) => Err(Error::NonFinite(i)),
        None => Ok(()),
    }
}

fn symmetrize(m: &CMatrix) -> CMatrix {
    let n = m.dim();
    let mut out = m.clone();
    for i in 0..n {
        for j in i..n {
            let h = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            out[(i, j)] = h;
            out[(j, i)] = h.conj();
        }
    }
    out
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// `⟨ψ|A|ψ⟩`, checked to be real.
pub fn expectation(a: &HermitianOperator, psi: &StateVector) -> Result<f64> {
    check_dim(a.dim(), psi.dim())?;
    let z = inner(psi.amplitudes(), &a.apply(psi.amplitudes())?);
    let bound = Tolerances::default().herm * a.spectral_scale().max(1.0);
    if z.im.abs() > bound {
        return Err(Error::NonRealExpectation(z.im));
    }
    Ok(z.re)
}

/// `Tr(Aρ)`, checked to be real.
pub fn expectation_mixed(a: &HermitianOperator, rho: &DensityMatrix) -> Result<f64> {
    check_dim(a.dim(), rho.dim())?;
    let z = trace_product(a.matrix(), rho.matrix());
    let bound = Tolerances::default().herm * a.spectral_scale().max(1.0);
    if z.im.abs() > bound {
        return Err(Error::NonRealExpectation(z.im));
    }
    Ok(z.re)
}

/// `Tr(XY)` without forming the product.
pub(crate) fn trace_product(x: &CMatrix, y: &CMatrix) -> C64 {
    let n = x.dim();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += x[(i, j)] * y[(j, i)];
        }
    }
    acc
}

/// `(⟨O⟩, (O − ⟨O⟩)|ψ⟩)`.
pub fn deviation_vector(o: &HermitianOperator, psi: &StateVector) -> Result<(f64, Vec<C64>)> {
    let mean = expectation(o, psi)?;
    let opsi = o.apply(psi.amplitudes())?;
    let dev = linalg::lincomb(C64::new(1.0, 0.0), &opsi, C64::new(-mean, 0.0), psi.amplitudes());
    Ok((mean, dev))
}

/// `ΔA² = ‖(A − ⟨A⟩)|ψ⟩‖²`.
pub fn variance(a: &HermitianOperator, psi: &StateVector) -> Result<f64> {
    let (_, dev) = deviation_vector(a, psi)?;
    Ok(norm_sqr(&dev))
}

/// `Tr(A²ρ) − Tr(Aρ)²`, clamped at zero.
pub fn variance_mixed(a: &HermitianOperator, rho: &DensityMatrix) -> Result<f64> {
    let mean = expectation_mixed(a, rho)?;
    let shifted = a.sub(&HermitianOperator::identity(a.dim()).scale(mean))?;
    let v = expectation_mixed(&shifted.square()?, rho)?;
    Ok(v.max(0.0))
}

/// Real number `c` with `⟨[A,B]⟩ = i·c`.
///
/// Evaluated as `⟨Aψ|Bψ⟩ − ⟨Bψ|Aψ⟩`, whose real part cancels exactly.
pub fn commutator_mean(a: &HermitianOperator, b: &HermitianOperator, psi: &StateVector) -> Result<f64> {
    check_dim(a.dim(), b.dim())?;
    check_dim(a.dim(), psi.dim())?;
    let u = a.apply(psi.amplitudes())?;
    let v = b.apply(psi.amplitudes())?;
    let z = inner(&u, &v) - inner(&v, &u);
    debug_assert!(z.re.abs() < 1e-12 * (1.0 + z.im.abs()));
    Ok(z.im)
}

/// `⟨ψ|(AB − BA)|ψ⟩` from explicit matrix products; its real part is the
/// rounding residual that [`commutator_mean`] discards.
pub fn commutator_expectation(a: &HermitianOperator, b: &HermitianOperator, psi: &StateVector) -> Result<C64> {
    check_dim(a.dim(), b.dim())?;
    check_dim(a.dim(), psi.dim())?;
    let k = commutator_matrix(a, b)?;
    Ok(inner(psi.amplitudes(), &k.mul_vec(psi.amplitudes())?))
}

pub(crate) fn commutator_matrix(a: &HermitianOperator, b: &HermitianOperator) -> Result<CMatrix> {
    a.matrix().matmul(b.matrix())?.sub(&b.matrix().matmul(a.matrix())?)
}

/// Real number `c` with `Tr([A,B]ρ) = i·c`.
pub fn commutator_mean_mixed(a: &HermitianOperator, b: &HermitianOperator, rho: &DensityMatrix) -> Result<f64> {
    check_dim(a.dim(), b.dim())?;
    check_dim(a.dim(), rho.dim())?;
    let z = trace_product(&commutator_matrix(a, b)?, rho.matrix());
    let bound = Tolerances::default().herm * (a.spectral_scale() * b.spectral_scale()).max(1.0);
    if z.re.abs() > bound {
        return Err(Error::NonRealExpectation(z.re));
    }
    Ok(z.im)
}

/// `½⟨{A,B}⟩ − ⟨A⟩⟨B⟩`, evaluated as `Re⟨(A−⟨A⟩)ψ|(B−⟨B⟩)ψ⟩`.
pub fn symmetrized_covariance(a: &HermitianOperator, b: &HermitianOperator, psi: &StateVector) -> Result<f64> {
    check_dim(a.dim(), b.dim())?;
    let (_, ca) = deviation_vector(a, psi)?;
    let (_, db) = deviation_vector(b, psi)?;
    Ok(inner(&ca, &db).re)
}

/// True when `ΔO` is at or below the scale-aware eigenstate threshold.
pub fn is_eigenstate(o: &HermitianOperator, psi: &StateVector, tol: &Tolerances) -> Result<bool> {
    Ok(variance(o, psi)?.sqrt() <= o.eigenstate_threshold(tol))
}

pub fn vaidman_decompose(o: &HermitianOperator, psi: &StateVector) -> Result<VaidmanDecomposition> {
    vaidman_decompose_with(o, psi, &Tolerances::default())
}

/// `(⟨O⟩, ΔO, (O − ⟨O⟩)|ψ⟩/ΔO)`; fails on eigenstates of `O`.
pub fn vaidman_decompose_with(
    o: &HermitianOperator,
    psi: &StateVector,
    tol: &Tolerances,
) -> Result<VaidmanDecomposition> {
    let (mean, dev) = deviation_vector(o, psi)?;
    let deviation = norm(&dev);
    if deviation <= o.eigenstate_threshold(tol) {
        return Err(Error::EigenstateNoPerp);
    }
    let perp = StateVector::normalize(dev)?;
    Ok(VaidmanDecomposition { mean, deviation, perp })
}

pub fn project_out(psi: &StateVector, chi: &[C64]) -> Result<StateVector> {
    project_out_with(psi, chi, &Tolerances::default())
}

/// `normalize((I − |ψ⟩⟨ψ|)χ)`.
///
/// The projection is applied twice (classical Gram–Schmidt with one
/// reorthogonalization pass) so the result is orthogonal to `ψ` to rounding.
pub fn project_out_with(psi: &StateVector, chi: &[C64], tol: &Tolerances) -> Result<StateVector> {
    check_dim(psi.dim(), chi.len())?;
    check_finite(chi)?;
    let one = C64::new(1.0, 0.0);
    let p = psi.amplitudes();
    let chi_norm = norm(chi);
    let mut v = linalg::lincomb(one, chi, -inner(p, chi), p);
    if norm(&v) <= tol.null_projection * chi_norm || chi_norm == 0.0 {
        return Err(Error::NullProjection);
    }
    v = linalg::lincomb(one, &v, -inner(p, &v), p);
    StateVector::normalize(v)
}
