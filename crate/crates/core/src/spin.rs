//! Angular-momentum matrices (`ħ = 1`) in the descending-`m` basis
//! `|j, j⟩, |j, j−1⟩, …, |j, −j⟩`.

use num_complex::Complex64 as C64;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::quantum::{HermitianOperator, StateVector};

/// `J_x, J_y, J_z` for one spin `j`, stored as `2j`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinTriple {
    pub two_j: u32,
    pub jx: HermitianOperator,
    pub jy: HermitianOperator,
    pub jz: HermitianOperator,
}

impl SpinTriple {
    pub fn j(&self) -> f64 {
        f64::from(self.two_j) / 2.0
    }

    pub fn dim(&self) -> usize {
        self.two_j as usize + 1
    }
}

/// Spin operators for `j = two_j / 2`, with the default dimension cap.
pub fn spin_operators(two_j: u32) -> Result<SpinTriple> {
    spin_operators_with(two_j, &Tolerances::default())
}

pub fn spin_operators_with(two_j: u32, tol: &Tolerances) -> Result<SpinTriple> {
    let dim = two_j as usize + 1;
    if dim > tol.max_dim {
        return Err(Error::InvalidSpin(two_j));
    }
    let j = f64::from(two_j) / 2.0;
    let m = |k: usize| j - k as f64;

    // J₊|j,m⟩ = √(j(j+1) − m(m+1)) |j,m+1⟩; index k−1 holds m+1
    let mut jplus = CMatrix::zeros(dim);
    for k in 1..dim {
        let mk = m(k);
        jplus[(k - 1, k)] = C64::new((j * (j + 1.0) - mk * (mk + 1.0)).sqrt(), 0.0);
    }
    let jminus = jplus.adjoint();

    let half = C64::new(0.5, 0.0);
    let jx = jplus.add(&jminus)?.scale(half);
    // (J₊ − J₋)/(2i) = −(i/2)(J₊ − J₋)
    let jy = jplus.sub(&jminus)?.scale(C64::new(0.0, -0.5));
    let jz = CMatrix::from_real_diagonal(&(0..dim).map(m).collect::<Vec<_>>());

    Ok(SpinTriple {
        two_j,
        jx: HermitianOperator::new(jx)?,
        jy: HermitianOperator::new(jy)?,
        jz: HermitianOperator::new(jz)?,
    })
}

/// Spin-1 family `cos φ |+⟩ + sin φ |−⟩`.
pub fn figure1_state(phi: f64) -> StateVector {
    let (s, c) = phi.sin_cos();
    StateVector::new(vec![C64::new(c, 0.0), C64::new(0.0, 0.0), C64::new(s, 0.0)]).expect("cos² + sin² = 1 to rounding")
}
