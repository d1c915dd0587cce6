//! Gaussian states of bosonic modes in the complex representation.
//!
//! A state of `N` modes is described by its displacement `d = ⟨A⟩` and
//! covariance `Γ_ij = ⟨A_i A_j† + A_j† A_i⟩ − 2⟨A_i⟩⟨A_j†⟩`, where
//! `A = (a_1 … a_N, a_1† … a_N†)`. Vacuum has `Γ = I`. A Gaussian unitary
//! acts as `d → S d`, `Γ → S Γ S†` with `S K S† = K`, `K = diag(I, −I)`.

mod circuit;
mod fisher;
mod state;
mod transform;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub use circuit::{gravity_encoding, roles, run_circuit, CircuitSpec, EncodingCoupling, MODES};
pub use fisher::{
    encoded_derivative, gaussian_qfi, qcrb, qfi, qfi_checked, qfi_closed_form, DerivativeMethod,
    QfiEvaluation, StateDerivative, MAX_CONDITION, REGULARIZATION,
};
pub use state::GaussianState;
pub use transform::SymplecticTransform;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// `K = diag(I_N, −I_N)`.
pub fn k_matrix(modes: usize) -> CMatrix {
    CMatrix::from_fn(2 * modes, 2 * modes, |i, j| {
        if i != j {
            Complex64::ZERO
        } else if i < modes {
            Complex64::ONE
        } else {
            -Complex64::ONE
        }
    })
}

pub(crate) fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
