use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use super::{max_abs, CMatrix, CVector, CircuitSpec, GaussianState, SymplecticTransform};
use crate::constants::HBAR;
use crate::{Error, Result};

/// Relative ridge added to Γ when it is badly conditioned.
pub const REGULARIZATION: f64 = 1e-12;
/// Condition number above which Γ is regularized before inversion.
pub const MAX_CONDITION: f64 = 1e12;

/// `(∂d/∂a, ∂Γ/∂a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateDerivative {
    pub displacement: CVector,
    pub covariance: CMatrix,
}

impl StateDerivative {
    /// Derivative of `S·ρ(a)·S†` for an `a`-independent `S`.
    pub fn transformed(&self, s: &SymplecticTransform) -> Self {
        let m = s.matrix();
        Self {
            displacement: m * &self.displacement,
            covariance: m * &self.covariance * m.adjoint(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum DerivativeMethod {
    #[default]
    Analytic,
    /// Step `h = relative_step · max(|a|, 1/|∂s/∂a|)`.
    CentralDifference { relative_step: f64 },
}

/// Quantum Fisher information of a pure Gaussian state:
/// `F = ¼ Tr[(Γ⁻¹ Γ̇)²] + 2 ḋ† Γ⁻¹ ḋ`.
///
/// Returns the value and the condition number of Γ. Γ is regularized by
/// `REGULARIZATION · λ_max` when its condition number exceeds `MAX_CONDITION`;
/// a non-positive spectrum is an error.
pub fn gaussian_qfi(state: &GaussianState, derivative: &StateDerivative) -> Result<(f64, f64)> {
    let dim = state.covariance().nrows();
    if derivative.displacement.len() != dim || derivative.covariance.nrows() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: derivative.displacement.len(),
        });
    }
    let gamma = super::state::hermitian_part(state.covariance());
    let eig = SymmetricEigen::new(gamma.clone());
    let lo = eig.eigenvalues.min();
    let hi = eig.eigenvalues.max();
    if !(lo > 0.0) || !hi.is_finite() {
        return Err(Error::Conditioning {
            condition: f64::INFINITY,
        });
    }
    let condition = hi / lo;
    let gamma = if condition > MAX_CONDITION {
        log::warn!("covariance condition number {condition:.3e}; regularizing");
        gamma + CMatrix::identity(dim, dim) * Complex64::from(REGULARIZATION * hi)
    } else {
        gamma
    };
    let inv = gamma
        .try_inverse()
        .ok_or(Error::Conditioning { condition })?;
    let p = &inv * &derivative.covariance;
    let trace_term = (&p * &p).trace().re / 4.0;
    let disp = &derivative.displacement;
    let disp_term = 2.0 * (disp.adjoint() * &inv * disp)[(0, 0)].re;
    Ok((trace_term + disp_term, condition))
}

/// Derivative of the encoded state with respect to the acceleration.
pub fn encoded_derivative(
    spec: &CircuitSpec,
    acceleration: f64,
    method: DerivativeMethod,
) -> Result<StateDerivative> {
    let rate = spec.encoding.squeeze_per_acceleration();
    match method {
        DerivativeMethod::Analytic => {
            let state = spec.encoded_state(acceleration)?;
            // S(a) = exp(s(a) X), so ∂S/∂a = s' X S.
            let x = SymplecticTransform::squeezer_generator(
                super::roles::PHONON_N,
                super::roles::PHONON_L,
                0.0,
                super::MODES,
            ) * Complex64::from(rate);
            let g = state.covariance();
            Ok(StateDerivative {
                displacement: &x * state.displacement(),
                covariance: &x * g + g * x.adjoint(),
            })
        }
        DerivativeMethod::CentralDifference { relative_step } => {
            if !(relative_step > 0.0) || rate == 0.0 {
                return Err(Error::domain(
                    "finite difference needs a positive step and a non-zero coupling",
                ));
            }
            let h = relative_step * acceleration.abs().max(1.0 / rate.abs());
            let plus = spec.encoded_state(acceleration + h)?;
            let minus = spec.encoded_state(acceleration - h)?;
            let scale = Complex64::from(1.0 / (2.0 * h));
            Ok(StateDerivative {
                displacement: (plus.displacement() - minus.displacement()) * scale,
                covariance: (plus.covariance() - minus.covariance()) * scale,
            })
        }
    }
}

/// QFI of the interferometer with respect to the acceleration at `acceleration`.
///
/// The closing inverse tritter and squeezer are unitary and leave the QFI
/// unchanged, so it is evaluated on the encoded state.
pub fn qfi(spec: &CircuitSpec, acceleration: f64, method: DerivativeMethod) -> Result<f64> {
    let state = spec.encoded_state(acceleration)?;
    let derivative = encoded_derivative(spec, acceleration, method)?;
    gaussian_qfi(&state, &derivative).map(|(f, _)| f)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QfiEvaluation {
    pub analytic: f64,
    pub finite_difference: f64,
    pub condition: f64,
    /// `|F_fd / F_analytic − 1|`.
    pub derivative_agreement: f64,
    /// Largest deviation of the encoded state from purity.
    pub purity_defect: f64,
}

/// QFI with an analytic/finite-difference cross-check and purity diagnostic.
pub fn qfi_checked(
    spec: &CircuitSpec,
    acceleration: f64,
    relative_step: f64,
) -> Result<QfiEvaluation> {
    let state = spec.encoded_state(acceleration)?;
    let analytic_d = encoded_derivative(spec, acceleration, DerivativeMethod::Analytic)?;
    let fd_d = encoded_derivative(
        spec,
        acceleration,
        DerivativeMethod::CentralDifference { relative_step },
    )?;
    let (analytic, condition) = gaussian_qfi(&state, &analytic_d)?;
    let (finite_difference, _) = gaussian_qfi(&state, &fd_d)?;
    if !analytic.is_finite() || analytic <= 0.0 {
        return Err(Error::DegenerateFit(format!(
            "quantum Fisher information is {analytic}"
        )));
    }
    Ok(QfiEvaluation {
        analytic,
        finite_difference,
        condition,
        derivative_agreement: (finite_difference / analytic - 1.0).abs(),
        purity_defect: pure_state_defect(&state),
    })
}

/// For a pure state `Γ⁻¹ = K Γ K`; returns `max |Γ K Γ K − I|`.
fn pure_state_defect(state: &GaussianState) -> f64 {
    let k = super::k_matrix(state.modes());
    let g = state.covariance();
    let dim = g.nrows();
    max_abs(&(g * &k * g * &k - CMatrix::identity(dim, dim)))
}

/// `F = 8 (|M_nl| t / ħ)² θ² N0 Np`.
pub fn qfi_closed_form(
    coupling: f64,
    duration: f64,
    tritter_angle: f64,
    condensed_atoms: f64,
    phonons: f64,
) -> f64 {
    8.0 * (coupling * duration / HBAR).powi(2) * tritter_angle.powi(2) * condensed_atoms * phonons
}

/// `Δa = 1/√(N_m F)`; infinite when there is no information.
pub fn qcrb(fisher: f64, measurements: f64) -> f64 {
    if fisher > 0.0 && measurements > 0.0 {
        1.0 / (measurements * fisher).sqrt()
    } else {
        f64::INFINITY
    }
}
