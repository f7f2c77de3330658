//! Seeded random matrices: Haar unitaries, Haar-random pure states and
//! GUE observables.
//!
//! The generator is ChaCha20 (`rand_chacha`), seeded through
//! `SeedableRng::seed_from_u64`. Uniform doubles take the top 53 bits of
//! `next_u64`; Gaussians come from Box–Muller on consecutive uniform pairs
//! `(u₁, u₂)`, real part from the cosine branch and imaginary part from the
//! sine branch. Matrices are filled in row-major order. Sub-streams derive
//! their seed from the parent seed and the stream index only (SplitMix64
//! mixing), never from the parent's position, so a campaign split across
//! threads draws exactly what the serial run draws.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use num_complex::Complex64 as C64;
use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::linalg::{householder_qr, CMatrix};
use crate::quantum::{HermitianOperator, StateVector};

/// Deterministic random source. Single owner; use [`SeededRng::substream`]
/// to hand independent generators to parallel tasks.
#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    inner: ChaCha20Rng,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self { seed, inner: ChaCha20Rng::seed_from_u64(seed) }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent generator for stream `index`, a function of
    /// `(self.seed, index)` alone.
    pub fn substream(&self, index: u64) -> SeededRng {
        SeededRng::new(splitmix64(self.seed ^ splitmix64(index.wrapping_add(0xA076_1D64_78BD_642F))))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Two independent standard normals (Box–Muller).
    pub fn normal_pair(&mut self) -> (f64, f64) {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (TAU * u2).sin_cos();
        (r * c, r * s)
    }

    /// Standard complex Gaussian, `E|z|² = 1`.
    pub fn complex_normal(&mut self) -> C64 {
        let (x, y) = self.normal_pair();
        C64::new(x * FRAC_1_SQRT_2, y * FRAC_1_SQRT_2)
    }

    /// Uniformly random point on the unit circle.
    pub fn unit_complex(&mut self) -> C64 {
        C64::from_polar(1.0, TAU * self.uniform())
    }
}

/// `dim × dim` matrix of independent standard complex Gaussians.
pub fn ginibre(dim: usize, rng: &mut SeededRng) -> CMatrix {
    let data = (0..dim * dim).map(|_| rng.complex_normal()).collect();
    CMatrix::from_vec(dim, data).expect("buffer has dim² entries")
}

/// Haar-distributed unitary: Ginibre draw, Householder QR, then
/// `U = Q·diag(r_ii/|r_ii|)`. A degenerate draw is retried once.
pub fn haar_unitary(dim: usize, rng: &mut SeededRng) -> Result<CMatrix> {
    if dim == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let mut last = Error::DegenerateDraw(0.0);
    for _ in 0..2 {
        let g = ginibre(dim, rng);
        match householder_qr(&g) {
            Ok(qr) => {
                let mut u = qr.q;
                for k in 0..dim {
                    let rkk = qr.r[(k, k)];
                    let phase = rkk / rkk.norm();
                    for i in 0..dim {
                        u[(i, k)] *= phase;
                    }
                }
                return Ok(u);
            }
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// Haar-random pure state: the first column of a Haar unitary.
pub fn random_state(dim: usize, rng: &mut SeededRng) -> Result<StateVector> {
    let u = haar_unitary(dim, rng)?;
    StateVector::normalize(u.column(0))
}

/// GUE observable `(G + G†)/2`, Hermitian bit-for-bit.
pub fn random_hermitian(dim: usize, rng: &mut SeededRng) -> Result<HermitianOperator> {
    if dim == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let g = ginibre(dim, rng);
    let mut h = CMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            h[(i, j)] = (g[(i, j)] + g[(j, i)].conj()) * 0.5;
        }
    }
    HermitianOperator::new(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haar_is_unitary() {
        let mut rng = SeededRng::new(11);
        for dim in 1..=8 {
            for _ in 0..20 {
                let u = haar_unitary(dim, &mut rng).unwrap();
                let uu = u.adjoint().matmul(&u).unwrap();
                assert!(uu.sub(&CMatrix::identity(dim)).unwrap().max_abs() < 1e-12);
            }
        }
    }

    #[test]
    fn dim_one_is_a_phase() {
        let mut rng = SeededRng::new(3);
        let u = haar_unitary(1, &mut rng).unwrap();
        assert!((u[(0, 0)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn haar_first_moment() {
        // E|U₀₀|² = 1/d, Var = (d−1)/(d²(d+1)) for Haar on U(d)
        let mut rng = SeededRng::new(2024);
        let n = 100_000;
        let d = 3.0;
        let mean: f64 = (0..n).map(|_| haar_unitary(3, &mut rng).unwrap()[(0, 0)].norm_sqr()).sum::<f64>() / n as f64;
        let se = ((d - 1.0) / (d * d * (d + 1.0)) / n as f64).sqrt();
        assert!((mean - 1.0 / 3.0).abs() < 3.0 * se, "mean {mean}, se {se}");
    }

    #[test]
    fn random_state_moment_and_norm() {
        let mut rng = SeededRng::new(99);
        let n = 100_000;
        let mut sum = 0.0;
        for _ in 0..n {
            let psi = random_state(2, &mut rng).unwrap();
            assert!((crate::linalg::norm_sqr(psi.amplitudes()) - 1.0).abs() < 1e-12);
            sum += psi.amplitudes()[0].norm_sqr();
        }
        // |⟨0|ψ⟩|² is uniform on [0, 1] in d = 2
        let se = (1.0 / 12.0 / n as f64).sqrt();
        assert!((sum / n as f64 - 0.5).abs() < 3.0 * se);
    }

    #[test]
    fn distinct_seeds_give_distinct_states() {
        let states: Vec<_> = (0..1000).map(|s| random_state(3, &mut SeededRng::new(s)).unwrap()).collect();
        for i in 0..states.len() {
            for j in 0..i {
                assert!(states[i] != states[j]);
            }
        }
    }

    #[test]
    fn gue_trace_mean() {
        // Tr H = Σ Re g_ii, each N(0, 1/2): Var(Tr H) = d/2
        let mut rng = SeededRng::new(5);
        let n = 10_000;
        let d = 4;
        let mean: f64 =
            (0..n).map(|_| random_hermitian(d, &mut rng).unwrap().matrix().trace().re).sum::<f64>() / n as f64;
        let se = (d as f64 / 2.0 / n as f64).sqrt();
        assert!(mean.abs() < 3.0 * se);
        let h = random_hermitian(5, &mut rng).unwrap();
        assert_eq!(h.matrix().hermiticity_residual().2, 0.0);
        assert!(h.eigen().values.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn determinism_and_substreams() {
        let a = haar_unitary(4, &mut SeededRng::new(42)).unwrap();
        let b = haar_unitary(4, &mut SeededRng::new(42)).unwrap();
        assert_eq!(a, b);

        let parent = SeededRng::new(7);
        let mut advanced = parent.clone();
        advanced.next_u64();
        let x = parent.substream(5).next_u64();
        // substreams ignore the parent's position
        assert_eq!(advanced.substream(5).next_u64(), x);
        assert_ne!(parent.substream(6).next_u64(), x);
    }

    #[test]
    fn uniform_range() {
        let mut rng = SeededRng::new(0);
        for _ in 0..10_000 {
            let u = rng.uniform();
            assert!((0.0..1.0).contains(&u));
        }
    }
}
