//! Numerical tolerances shared by every module.

use serde::{Deserialize, Serialize};

/// All tolerance constants in one place. `Tolerances::default()` holds the
/// values every public constructor and operation uses unless a `*_with`
/// variant is called with an explicit record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// `|‖ψ‖² − 1|` and `|Tr ρ − 1|` allowed at construction.
    pub norm: f64,
    /// Entrywise `|M_ij − conj(M_ji)|` allowed at construction.
    pub herm: f64,
    /// `|⟨ψ|ψ⊥⟩|` allowed for a state declared orthogonal.
    pub ortho: f64,
    /// Most negative eigenvalue admitted in a density matrix.
    pub psd: f64,
    /// Relative cutoff below which a state counts as an eigenstate:
    /// `ΔO ≤ eig · max(1, ‖O‖_∞)`.
    pub eig: f64,
    /// Slack allowed when checking `LHS ≥ RHS` of an inequality.
    pub violation: f64,
    /// Slack allowed when checking an identity `LHS = RHS`.
    pub identity: f64,
    /// Relative norm below which a projection counts as null.
    pub null_projection: f64,
    /// Largest Hilbert-space dimension accepted by the spin constructor.
    pub max_dim: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            norm: 1e-12,
            herm: 1e-12,
            ortho: 1e-10,
            psd: 1e-10,
            eig: 1e-10,
            violation: 1e-9,
            identity: 1e-10,
            null_projection: 1e-12,
            max_dim: 64,
        }
    }
}
