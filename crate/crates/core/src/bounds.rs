//! Uncertainty-relation bounds.
//!
//! Product bounds (`ΔA²ΔB² ≥ …`): [`hr_bound`], [`schroedinger_bound`];
//! amended product bound (`ΔAΔB ≥ …`): [`amended_hr_bound`].
//! Sum bounds (`ΔA² + ΔB² ≥ …`): [`weak_sum_bound`], [`mp_sum_bound_perp`],
//! [`mp_sum_bound_aplusb`], [`mp_combined_bound`], [`mp_triple_max_bound`],
//! and the mixed-state form [`mixed_sum_bound`]. Two-state relations:
//! [`holevo_bound`], [`two_state_sum_bound`]. Identities used by the
//! campaigns: [`parallelogram_sides`], [`skew_deviation_sides`].
//!
//! Throughout, `c` is the real number with `⟨[A,B]⟩ = i·c` and `s = ±1` is
//! the sign in `A + s·iB`, so the commutator term `s·i⟨[A,B]⟩` equals `−s·c`.
//! Caller-supplied `|ψ⊥⟩` are checked for orthogonality, never repaired.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{inner, lincomb, norm_sqr};
use crate::perp::{optimal_perp_product, optimal_perp_sum, PerpStrategy, SignChoice, SignMode};
use crate::quantum::{
    check_dim, commutator_mean, commutator_mean_mixed, deviation_vector, expectation, symmetrized_covariance,
    vaidman_decompose, variance, variance_mixed, DensityMatrix, HermitianOperator, StateVector,
};

fn check_pair(a: &HermitianOperator, b: &HermitianOperator, psi: &StateVector) -> Result<()> {
    check_dim(a.dim(), b.dim())?;
    check_dim(a.dim(), psi.dim())?;
    if psi.dim() < 2 {
        return Err(Error::InvalidDimension(psi.dim()));
    }
    Ok(())
}

fn check_perp(psi: &StateVector, perp: &StateVector) -> Result<()> {
    check_dim(psi.dim(), perp.dim())?;
    let overlap = psi.overlap(perp).norm();
    if overlap > Tolerances::default().ortho {
        return Err(Error::NotOrthogonal(overlap));
    }
    Ok(())
}

/// `|½⟨[A,B]⟩|²`.
pub fn hr_bound(a: &HermitianOperator, b: &HermitianOperator, psi: &StateVector) -> Result<f64> {
    check_pair(a, b, psi)?;
    let c = commutator_mean(a, b, psi)?;
    Ok(0.25 * c * c)
}

/// `|½⟨[A,B]⟩|² + |½⟨{A,B}⟩ − ⟨A⟩⟨B⟩|²`.
pub fn schroedinger_bound(a: &HermitianOperator, b: &HermitianOperator, psi: &StateVector) -> Result<f64> {
    let cov = symmetrized_covariance(a, b, psi)?;
    Ok(hr_bound(a, b, psi)? + cov * cov)
}

/// `|⟨[A,B]⟩|`, the sum bound implied by the product bound.
pub fn weak_sum_bound(a: &HermitianOperator, b: &HermitianOperator, psi: &StateVector) -> Result<f64> {
    check_pair(a, b, psi)?;
    Ok(commutator_mean(a, b, psi)?.abs())
}

/// `s·i⟨[A,B]⟩ + |⟨ψ|A + s·iB|ψ⊥⟩|²`.
///
/// Valid for either sign; [`SignMode::Auto`] picks the one making the first
/// term nonnegative.
pub fn mp_sum_bound_perp(
    a: &HermitianOperator,
    b: &HermitianOperator,
    psi: &StateVector,
    perp: &StateVector,
    sign: impl Into<SignMode>,
) -> Result<f64> {
    check_pair(a, b, psi)?;
    check_perp(psi, perp)?;
    let c = commutator_mean(a, b, psi)?;
    let s = sign.into().resolve_from_commutator(c);
    sum_bound_with(a, b, psi, perp, c, s)
}

fn sum_bound_with(
    a: &HermitianOperator,
    b: &HermitianOperator,
    psi: &StateVector,
    perp: &StateVector,
    c: f64,
    s: SignChoice,
) -> Result<f64> {
    let ap = a.apply(perp.amplitudes())?;
    let bp = b.apply(perp.amplitudes())?;
    let x = lincomb(C64::new(1.0, 0.0), &ap, C64::new(0.0, s.value()), &bp);
    let m = inner(psi.amplitudes(), &x);
    Ok(-s.value() * c + m.norm_sqr())
}

/// `½Δ(A+B)²`, evaluated in variance form so eigenstates of `A+B` give 0.
pub fn mp_sum_bound_aplusb(a: &HermitianOperator, b: &HermitianOperator, psi: &StateVector) -> Result<f64> {
    check_pair(a, b, psi)?;
    Ok(0.5 * variance(&a.add(b)?, psi)?)
}

/// `½|⟨ψ⊥_{A+B}|A+B|ψ⟩|²`, the matrix-element form of
/// [`mp_sum_bound_aplusb`]. Fails on eigenstates of `A+B`.
pub fn mp_sum_bound_aplusb_matrix_element(
    a: &HermitianOperator,
    b: &HermitianOperator,
    psi: &StateVector,
) -> Result<f64> {
    check_pair(a, b, psi)?;
    let sum = a.add(b)?;
    let d = vaidman_decompose(&sum, psi)?;
    let m = inner(d.perp.amplitudes(), &sum.apply(psi.amplitudes())?);
    Ok(0.5 * m.norm_sqr())
}

/// Which sum bound is the larger one in [`mp_combined_bound`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ActiveBound {
    #[serde(rename = "eq3")]
    PerpBound,
    #[serde(rename = "eq4")]
    SumObservableBound,
}

/// `max(mp_sum_bound_perp, mp_sum_bound_aplusb)` and which one won (ties go
/// to the `|ψ⊥⟩` bound).
pub fn mp_combined_bound(
    a: &HermitianOperator,
    b: &HermitianOperator,
    psi: &StateVector,
    perp: &StateVector,
    sign: impl Into<SignMode>,
) -> Result<(f64, ActiveBound)> {
    let with_perp = mp_sum_bound_perp(a, b, psi, perp, sign)?;
    let aplusb = mp_sum_bound_aplusb(a, b, psi)?;
    Ok(if with_perp >= aplusb {
        (with_perp, ActiveBound::PerpBound)
    } else {
        (aplusb, ActiveBound::SumObservableBound)
    })
}

/// `max(½Δ(A+B)², ΔA², ΔB²)`; zero only on joint eigenstates.
pub fn mp_triple_max_bound(a: &HermitianOperator, b: &HermitianOperator, psi: &StateVector) -> Result<f64> {
    let aplusb = mp_sum_bound_aplusb(a, b, psi)?;
    Ok(aplusb.max(variance(a, psi)?).max(variance(b, psi)?))
}

/// `1 − ½|⟨ψ|A/ΔA + s·iB/ΔB|ψ⊥⟩|²`, the denominator of the amended bound.
pub fn amended_hr_denominator(
    a: &HermitianOperator,
    b: &HermitianOperator,
    psi: &StateVector,
    perp: &StateVector,
    sign: impl Into<SignMode>,
) -> Result<(f64, SignChoice)> {
    check_pair(a, b, psi)?;
    check_perp(psi, perp)?;
    let tol = Tolerances::default();
    let va = variance(a, psi)?.sqrt();
    let vb = variance(b, psi)?.sqrt();
    if va <= a.eigenstate_threshold(&tol) || vb <= b.eigenstate_threshold(&tol) {
        return Err(Error::ZeroVariance);
    }
    let c = commutator_mean(a, b, psi)?;
    let s = sign.into().resolve_from_commutator(c);
    let ap = a.apply(perp.amplitudes())?;
    let bp = b.apply(perp.amplitudes())?;
    let x = lincomb(C64::new(1.0 / va, 0.0), &ap, C64::new(0.0, s.value() / vb), &bp);
    let m = inner(psi.amplitudes(), &x);
    Ok((1.0 - 0.5 * m.norm_sqr(), s))
}

/// `(s·i⟨[A,B]⟩/2) / (1 − ½|⟨ψ|A/ΔA + s·iB/ΔB|ψ⊥⟩|²)`, a lower bound on
/// `ΔAΔB`.
pub fn amended_hr_bound(
    a: &HermitianOperator,
    b: &HermitianOperator,
    psi: &StateVector,
    perp: &StateVector,
    sign: impl Into<SignMode>,
) -> Result<f64> {
    let (denominator, s) = amended_hr_denominator(a, b, psi, perp, sign)?;
    if denominator <= 1e-12 {
        return Err(Error::DegenerateDenominator(denominator));
    }
    let c = commutator_mean(a, b, psi)?;
    Ok(-s.value() * c / 2.0 / denominator)
}

/// Mixed-state sum bound
/// `s·i Tr([A,B]ρ) + Tr[(A + s·iB)|ψ⊥⟩⟨ψ⊥|(A − s·iB)ρ]`, for `|ψ⊥⟩`
/// orthogonal to the support of `ρ`. Reduces to [`mp_sum_bound_perp`]
/// on `ρ = |ψ⟩⟨ψ|`.
pub fn mixed_sum_bound(
    a: &HermitianOperator,
    b: &HermitianOperator,
    rho: &DensityMatrix,
    perp: &StateVector,
    sign: impl Into<SignMode>,
) -> Result<(f64, SignChoice)> {
    check_dim(a.dim(), b.dim())?;
    check_dim(a.dim(), rho.dim())?;
    check_dim(a.dim(), perp.dim())?;
    let rp = rho.matrix().mul_vec(perp.amplitudes())?;
    let leak = norm_sqr(&rp).sqrt();
    if leak >= Tolerances::default().ortho {
        return Err(Error::PerpNotOrthogonalToSupport(leak));
    }
    let c = commutator_mean_mixed(a, b, rho)?;
    let s = sign.into().resolve_from_commutator(c);
    let ap = a.apply(perp.amplitudes())?;
    let bp = b.apply(perp.amplitudes())?;
    let x = lincomb(C64::new(1.0, 0.0), &ap, C64::new(0.0, s.value()), &bp);
    let quad = inner(&x, &rho.matrix().mul_vec(&x)?).re;
    Ok((-s.value() * c + quad, s))
}

/// `ΔA²_ρ + ΔB²_ρ`.
pub fn mixed_sum_of_variances(a: &HermitianOperator, b: &HermitianOperator, rho: &DensityMatrix) -> Result<f64> {
    Ok(variance_mixed(a, rho)? + variance_mixed(b, rho)?)
}

fn overlap_modulus(psi: &StateVector, psi_prime: &StateVector) -> Result<(C64, f64)> {
    check_dim(psi.dim(), psi_prime.dim())?;
    let z = psi.overlap(psi_prime);
    Ok((z, z.norm()))
}

/// `(a − a′)|⟨ψ|ψ′⟩| / √(2(1 − |⟨ψ|ψ′⟩|))`, a lower bound on `ΔA + ΔA′`.
///
/// Implemented with the signed difference `a − a′`; the bound is vacuous
/// (negative) when `a < a′`. Callers wanting the symmetric form can swap
/// the states.
pub fn holevo_bound(a: &HermitianOperator, psi: &StateVector, psi_prime: &StateVector) -> Result<f64> {
    check_dim(a.dim(), psi.dim())?;
    let (_, r) = overlap_modulus(psi, psi_prime)?;
    if r >= 1.0 - 1e-12 {
        return Err(Error::StatesCoincide);
    }
    let mean = expectation(a, psi)?;
    let mean_prime = expectation(a, psi_prime)?;
    Ok((mean - mean_prime) * r / (2.0 * (1.0 - r)).sqrt())
}

/// Two-state sum bound for a fixed sign `s`:
/// `[Re(ε⟨ψ′|(−Ā + s·iB̄′)|ψ⟩)]² / (2(1 − |⟨ψ|ψ′⟩|)) + s·i(ε*⟨ψ|ĀB̄′|ψ′⟩ − ε⟨ψ′|B̄′Ā|ψ⟩)`
/// with `Ā = A − ⟨A⟩_ψ`, `B̄′ = B − ⟨B⟩_ψ′`, `ε = ⟨ψ|ψ′⟩/|⟨ψ|ψ′⟩|`.
/// Lower-bounds `ΔA²(ψ) + ΔB²(ψ′)`; tends to [`mp_sum_bound_perp`] with the
/// same sign as `ψ′ → ψ`.
pub fn two_state_sum_bound_signed(
    a: &HermitianOperator,
    b: &HermitianOperator,
    psi: &StateVector,
    psi_prime: &StateVector,
    sign: SignChoice,
) -> Result<f64> {
    check_pair(a, b, psi)?;
    let (z, r) = overlap_modulus(psi, psi_prime)?;
    if r <= 1e-12 {
        return Err(Error::StatesOrthogonal);
    }
    if r >= 1.0 - 1e-12 {
        return Err(Error::StatesCoincide);
    }
    let eps = z / r;
    let s = sign.value();
    let (_, abar_psi) = deviation_vector(a, psi)?;
    let (_, bbar_prime) = deviation_vector(b, psi_prime)?;
    // ⟨ψ′|(−Ā + s·iB̄′)|ψ⟩ = −⟨ψ′|Ā|ψ⟩ + s·i⟨B̄′ψ′|ψ⟩
    let bbar_psi = {
        let bpsi = b.apply(psi.amplitudes())?;
        let b_prime = expectation(b, psi_prime)?;
        lincomb(C64::new(1.0, 0.0), &bpsi, C64::new(-b_prime, 0.0), psi.amplitudes())
    };
    let elem = -inner(psi_prime.amplitudes(), &abar_psi) + C64::new(0.0, s) * inner(psi_prime.amplitudes(), &bbar_psi);
    let first = (eps * elem).re.powi(2) / (2.0 * (1.0 - r));
    // s·i(w − w*) = −2s·Im w, with w = ε*⟨Āψ|B̄′ψ′⟩
    let w = eps.conj() * inner(&abar_psi, &bbar_prime);
    let second = -2.0 * s * w.im;
    Ok(first + second)
}

/// [`two_state_sum_bound_signed`] maximized over the sign.
pub fn two_state_sum_bound(
    a: &HermitianOperator,
    b: &HermitianOperator,
    psi: &StateVector,
    psi_prime: &StateVector,
) -> Result<f64> {
    let plus = two_state_sum_bound_signed(a, b, psi, psi_prime, SignChoice::Plus)?;
    let minus = two_state_sum_bound_signed(a, b, psi, psi_prime, SignChoice::Minus)?;
    Ok(plus.max(minus))
}

/// `(2ΔA² + 2ΔB², ‖(C + αD)ψ‖² + ‖(C − αD)ψ‖²)` for `|α| = 1`,
/// `C = A − ⟨A⟩`, `D = B − ⟨B⟩`.
pub fn parallelogram_sides(
    a: &HermitianOperator,
    b: &HermitianOperator,
    psi: &StateVector,
    alpha: C64,
) -> Result<(f64, f64)> {
    check_pair(a, b, psi)?;
    if (alpha.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!("|alpha| = {} is not 1", alpha.norm())));
    }
    let (_, c) = deviation_vector(a, psi)?;
    let (_, d) = deviation_vector(b, psi)?;
    let one = C64::new(1.0, 0.0);
    let left = 2.0 * norm_sqr(&c) + 2.0 * norm_sqr(&d);
    let right = norm_sqr(&lincomb(one, &c, alpha, &d)) + norm_sqr(&lincomb(one, &c, -alpha, &d));
    Ok((left, right))
}

/// `(‖(C − s·iD)ψ‖², ΔA² + ΔB² − s·i⟨[A,B]⟩)`; the two agree identically.
pub fn skew_deviation_sides(
    a: &HermitianOperator,
    b: &HermitianOperator,
    psi: &StateVector,
    sign: SignChoice,
) -> Result<(f64, f64)> {
    check_pair(a, b, psi)?;
    let (_, c) = deviation_vector(a, psi)?;
    let (_, d) = deviation_vector(b, psi)?;
    let s = sign.value();
    let left = norm_sqr(&lincomb(C64::new(1.0, 0.0), &c, C64::new(0.0, -s), &d));
    let right = norm_sqr(&c) + norm_sqr(&d) + s * commutator_mean(a, b, psi)?;
    Ok((left, right))
}

/// How the report obtains `|ψ⊥⟩`.
#[derive(Debug, Clone, PartialEq)]
pub enum PerpSource {
    /// No `|ψ⊥⟩`: the `|ψ⊥⟩`-dependent bounds are omitted.
    None,
    /// Caller-supplied, checked for orthogonality.
    Given(StateVector),
    /// One construction shared by both `|ψ⊥⟩`-dependent bounds.
    Strategy(PerpStrategy),
    /// Each bound evaluated at its own saturating `|ψ⊥⟩`.
    Optimal,
}

/// Every bound for one `(A, B, ψ, ψ⊥)` instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub var_a: f64,
    pub var_b: f64,
    pub sum_of_variances: f64,
    pub product_of_variances: f64,
    pub commutator_mean: f64,
    pub sign: SignChoice,
    pub hr: f64,
    pub schroedinger: f64,
    pub weak_sum: f64,
    pub eq3: Option<f64>,
    pub eq4: f64,
    pub eq5: f64,
    pub triple_max: f64,
    pub amended_hr: Option<f64>,
    pub active_bound: ActiveBound,
    /// `LHS − RHS` per bound; negative beyond tolerance means a violation.
    pub residuals: BTreeMap<String, f64>,
}

impl BoundReport {
    pub fn compute(
        a: &HermitianOperator,
        b: &HermitianOperator,
        psi: &StateVector,
        perp: &PerpSource,
        sign: SignMode,
    ) -> Result<Self> {
        check_pair(a, b, psi)?;
        let var_a = variance(a, psi)?;
        let var_b = variance(b, psi)?;
        let sum = var_a + var_b;
        let product = var_a * var_b;
        let c = commutator_mean(a, b, psi)?;
        let s = sign.resolve_from_commutator(c);

        let hr = hr_bound(a, b, psi)?;
        let schroedinger = schroedinger_bound(a, b, psi)?;
        let weak_sum = weak_sum_bound(a, b, psi)?;
        let eq4 = mp_sum_bound_aplusb(a, b, psi)?;
        let triple_max = mp_triple_max_bound(a, b, psi)?;

        let (sum_perp, product_perp) = match perp {
            PerpSource::None => (None, None),
            PerpSource::Given(p) => (Some(p.clone()), Some(p.clone())),
            PerpSource::Strategy(strategy) => {
                let p = strategy.construct(a, b, psi, s)?;
                (Some(p.clone()), Some(p))
            }
            PerpSource::Optimal => {
                let p = optimal_perp_sum(a, b, psi, s)?;
                let q = match optimal_perp_product(a, b, psi, s) {
                    Ok(q) => Some(q),
                    Err(Error::ZeroVariance | Error::NullProjection) => None,
                    Err(e) => return Err(e),
                };
                (Some(p), q)
            }
        };

        let eq3 = sum_perp.as_ref().map(|p| mp_sum_bound_perp(a, b, psi, p, s)).transpose()?;
        let amended_hr = match product_perp {
            Some(p) => match amended_hr_bound(a, b, psi, &p, s) {
                Ok(v) => Some(v),
                Err(Error::ZeroVariance | Error::DegenerateDenominator(_)) => None,
                Err(e) => return Err(e),
            },
            None => None,
        };

        let (eq5, active_bound) = match eq3 {
            Some(v) if v >= eq4 => (v, ActiveBound::PerpBound),
            _ => (eq4, ActiveBound::SumObservableBound),
        };

        let mut residuals = BTreeMap::new();
        residuals.insert("hr".to_string(), product - hr);
        residuals.insert("schroedinger".to_string(), product - schroedinger);
        residuals.insert("weak_sum".to_string(), sum - weak_sum);
        residuals.insert("eq4".to_string(), sum - eq4);
        residuals.insert("eq5".to_string(), sum - eq5);
        residuals.insert("triple_max".to_string(), sum - triple_max);
        if let Some(v) = eq3 {
            residuals.insert("eq3".to_string(), sum - v);
        }
        if let Some(v) = amended_hr {
            residuals.insert("amended_hr".to_string(), product.sqrt() - v);
        }

        Ok(Self {
            var_a,
            var_b,
            sum_of_variances: sum,
            product_of_variances: product,
            commutator_mean: c,
            sign: s,
            hr,
            schroedinger,
            weak_sum,
            eq3,
            eq4,
            eq5,
            triple_max,
            amended_hr,
            active_bound,
            residuals,
        })
    }

    /// Smallest `LHS − RHS` over all bounds.
    pub fn min_residual(&self) -> f64 {
        self.residuals.values().copied().fold(f64::INFINITY, f64::min)
    }

    /// True when no bound exceeds its left-hand side by more than `tol`.
    pub fn is_consistent(&self, tol: f64) -> bool {
        self.min_residual() >= -tol
    }
}

/// Mixed-state counterpart of [`BoundReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixedBoundReport {
    pub var_a: f64,
    pub var_b: f64,
    pub sum_of_variances: f64,
    pub commutator_mean: f64,
    pub sign: SignChoice,
    pub bound: f64,
    pub residual: f64,
}

impl MixedBoundReport {
    pub fn compute(
        a: &HermitianOperator,
        b: &HermitianOperator,
        rho: &DensityMatrix,
        perp: &StateVector,
        sign: SignMode,
    ) -> Result<Self> {
        let (bound, s) = mixed_sum_bound(a, b, rho, perp, sign)?;
        let var_a = variance_mixed(a, rho)?;
        let var_b = variance_mixed(b, rho)?;
        let sum = var_a + var_b;
        Ok(Self {
            var_a,
            var_b,
            sum_of_variances: sum,
            commutator_mean: commutator_mean_mixed(a, b, rho)?,
            sign: s,
            bound,
            residual: sum - bound,
        })
    }
}
