//! Constructions of states `|ψ⊥⟩` orthogonal to `|ψ⟩`.
//!
//! Every function returns a unit vector orthogonal to `ψ` to rounding, or an
//! error; none of them hands back a silently invalid state.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{lincomb, norm, scaled};
use crate::quantum::{
    check_dim, commutator_mean, deviation_vector, is_eigenstate, project_out, project_out_with, vaidman_decompose_with,
    DensityMatrix, HermitianOperator, StateVector,
};
use crate::random::{haar_unitary, SeededRng};

/// Sign `s` in `A + s·iB`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SignChoice {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl SignChoice {
    pub fn value(self) -> f64 {
        match self {
            SignChoice::Plus => 1.0,
            SignChoice::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            SignChoice::Plus => SignChoice::Minus,
            SignChoice::Minus => SignChoice::Plus,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            SignChoice::Plus => "+",
            SignChoice::Minus => "-",
        }
    }
}

/// A sign as requested by a caller: fixed, or resolved from the state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignMode {
    Fixed(SignChoice),
    Auto,
}

impl From<SignChoice> for SignMode {
    fn from(s: SignChoice) -> Self {
        SignMode::Fixed(s)
    }
}

impl SignMode {
    pub fn resolve(self, a: &HermitianOperator, b: &HermitianOperator, psi: &StateVector) -> Result<SignChoice> {
        match self {
            SignMode::Fixed(s) => Ok(s),
            SignMode::Auto => select_sign(a, b, psi),
        }
    }

    /// Resolution from a precomputed commutator mean `c`.
    pub fn resolve_from_commutator(self, c: f64) -> SignChoice {
        match self {
            SignMode::Fixed(s) => s,
            SignMode::Auto => sign_for_commutator(c),
        }
    }
}

/// The sign making `s·i⟨[A,B]⟩ = −s·c` nonnegative; `c = 0` gives `Plus`.
pub fn sign_for_commutator(c: f64) -> SignChoice {
    if c > 0.0 {
        SignChoice::Minus
    } else {
        SignChoice::Plus
    }
}

pub fn select_sign(a: &HermitianOperator, b: &HermitianOperator, psi: &StateVector) -> Result<SignChoice> {
    Ok(sign_for_commutator(commutator_mean(a, b, psi)?))
}

/// How to build `|ψ⊥⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerpStrategy {
    VaidmanA,
    VaidmanB,
    Prescribed,
    OptimalSum,
    OptimalProduct,
    Random(u64),
}

impl PerpStrategy {
    pub fn construct(
        self,
        a: &HermitianOperator,
        b: &HermitianOperator,
        psi: &StateVector,
        sign: SignChoice,
    ) -> Result<StateVector> {
        let tol = Tolerances::default();
        match self {
            PerpStrategy::VaidmanA => Ok(vaidman_decompose_with(a, psi, &tol)?.perp),
            PerpStrategy::VaidmanB => Ok(vaidman_decompose_with(b, psi, &tol)?.perp),
            PerpStrategy::Prescribed => prescribed_perp(a, b, psi),
            PerpStrategy::OptimalSum => optimal_perp_sum(a, b, psi, sign),
            PerpStrategy::OptimalProduct => optimal_perp_product(a, b, psi, sign),
            PerpStrategy::Random(seed) => random_perp(psi, &mut SeededRng::new(seed)),
        }
    }
}

fn check_pair(a: &HermitianOperator, b: &HermitianOperator, psi: &StateVector) -> Result<()> {
    check_dim(a.dim(), b.dim())?;
    check_dim(a.dim(), psi.dim())?;
    if psi.dim() < 2 {
        return Err(Error::InvalidDimension(psi.dim()));
    }
    Ok(())
}

/// The `|ψ⊥⟩` that turns the sum bound with sign `s` into an equality.
///
/// The Schwarz term `|⟨ψ|A + s·iB|ψ⊥⟩|²` is maximal for
/// `|ψ⊥⟩ ∝ (A − s·iB − ⟨A − s·iB⟩)|ψ⟩`. When that vector vanishes the
/// commutator term alone already equals `ΔA² + ΔB²`, every `|ψ⊥⟩`
/// saturates, and the opposite-sign deviation is returned instead.
pub fn optimal_perp_sum(
    a: &HermitianOperator,
    b: &HermitianOperator,
    psi: &StateVector,
    sign: SignChoice,
) -> Result<StateVector> {
    check_pair(a, b, psi)?;
    let tol = Tolerances::default();
    if is_eigenstate(a, psi, &tol)? && is_eigenstate(b, psi, &tol)? {
        return Err(Error::JointEigenstate);
    }
    let (_, ca) = deviation_vector(a, psi)?;
    let (_, db) = deviation_vector(b, psi)?;
    let threshold = a.eigenstate_threshold(&tol).max(b.eigenstate_threshold(&tol));
    let one = C64::new(1.0, 0.0);
    let si = C64::new(0.0, sign.value());
    for candidate in [lincomb(one, &ca, -si, &db), lincomb(one, &ca, si, &db)] {
        if norm(&candidate) > threshold {
            return project_out(psi, &candidate);
        }
    }
    Err(Error::JointEigenstate)
}

/// The `|ψ⊥⟩` that turns the amended product bound with sign `s` into an
/// equality: `∝ (I − |ψ⟩⟨ψ|)(A/ΔA − s·iB/ΔB)|ψ⟩`, with the same
/// opposite-sign fallback as [`optimal_perp_sum`].
pub fn optimal_perp_product(
    a: &HermitianOperator,
    b: &HermitianOperator,
    psi: &StateVector,
    sign: SignChoice,
) -> Result<StateVector> {
    check_pair(a, b, psi)?;
    let tol = Tolerances::default();
    let (_, ca) = deviation_vector(a, psi)?;
    let (_, db) = deviation_vector(b, psi)?;
    let (da, dbv) = (norm(&ca), norm(&db));
    if da <= a.eigenstate_threshold(&tol) || dbv <= b.eigenstate_threshold(&tol) {
        return Err(Error::ZeroVariance);
    }
    let u = scaled(C64::new(1.0 / da, 0.0), &ca);
    let w = scaled(C64::new(1.0 / dbv, 0.0), &db);
    let one = C64::new(1.0, 0.0);
    let si = C64::new(0.0, sign.value());
    for candidate in [lincomb(one, &u, -si, &w), lincomb(one, &u, si, &w)] {
        if norm(&candidate) > tol.eig {
            return project_out(psi, &candidate);
        }
    }
    Err(Error::NullProjection)
}

/// Case analysis for a simple nontrivial `|ψ⊥⟩`:
///
/// * `ψ` eigenstate of `A` only: `ψ⊥_B`;
/// * `ψ` eigenstate of `B` only: `ψ⊥_A`;
/// * `ψ⊥_A` and `ψ⊥_B` the same ray: `ψ⊥_A`;
/// * otherwise `ψ⊥_A` with its `ψ⊥_B` component removed.
///
/// `ψ⊥_O` is the Vaidman deviation state `(O − ⟨O⟩)|ψ⟩/ΔO`.
pub fn prescribed_perp(a: &HermitianOperator, b: &HermitianOperator, psi: &StateVector) -> Result<StateVector> {
    check_pair(a, b, psi)?;
    let tol = Tolerances::default();
    let perp_a = vaidman_decompose_with(a, psi, &tol);
    let perp_b = vaidman_decompose_with(b, psi, &tol);
    match (perp_a, perp_b) {
        (Err(Error::EigenstateNoPerp), Err(Error::EigenstateNoPerp)) => Err(Error::JointEigenstate),
        (Err(Error::EigenstateNoPerp), Ok(vb)) => Ok(vb.perp),
        (Ok(va), Err(Error::EigenstateNoPerp)) => Ok(va.perp),
        (Ok(va), Ok(vb)) => {
            if va.perp.overlap(&vb.perp).norm() > 1.0 - 1e-10 {
                Ok(va.perp)
            } else {
                let t = project_out_with(&vb.perp, va.perp.amplitudes(), &tol)?;
                // ψ⊥_A and ψ⊥_B are both ⊥ ψ, so is the combination; clean up rounding
                project_out(psi, t.amplitudes())
            }
        }
        (Err(e), _) | (_, Err(e)) => Err(e),
    }
}

/// `∝ (I − |ψ⟩⟨ψ|)U|e₀⟩` for a Haar unitary `U`, redrawn on a null
/// projection up to 16 times.
pub fn random_perp(psi: &StateVector, rng: &mut SeededRng) -> Result<StateVector> {
    const ATTEMPTS: usize = 16;
    if psi.dim() < 2 {
        return Err(Error::InvalidDimension(psi.dim()));
    }
    for _ in 0..ATTEMPTS {
        let u = haar_unitary(psi.dim(), rng)?;
        match project_out(psi, &u.column(0)) {
            Err(Error::NullProjection) => continue,
            other => return other,
        }
    }
    Err(Error::RandomPerpFailed(ATTEMPTS))
}

/// Orthonormal basis of the kernel of `ρ` (eigenvalues below `tol.psd`);
/// `NoValidPerp` when `ρ` has full rank.
pub fn support_complement(rho: &DensityMatrix, tol: &Tolerances) -> Result<Vec<StateVector>> {
    let eig = rho.eigen();
    let kernel: Vec<StateVector> = eig
        .values
        .iter()
        .zip(eig.vectors)
        .filter(|(v, _)| v.abs() <= tol.psd)
        .map(|(_, vec)| StateVector::normalize(vec))
        .collect::<Result<_>>()?;
    if kernel.is_empty() {
        Err(Error::NoValidPerp)
    } else {
        Ok(kernel)
    }
}
