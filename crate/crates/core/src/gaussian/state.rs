use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use super::{k_matrix, max_abs, CMatrix, CVector, SymplecticTransform};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    displacement: CVector,
    covariance: CMatrix,
}

impl GaussianState {
    pub fn vacuum(modes: usize) -> Self {
        Self {
            displacement: CVector::zeros(2 * modes),
            covariance: CMatrix::identity(2 * modes, 2 * modes),
        }
    }

    /// Coherent amplitude `alpha` in `mode`, vacuum elsewhere.
    pub fn coherent(alpha: Complex64, mode: usize, modes: usize) -> Result<Self> {
        if mode >= modes {
            return Err(Error::DimensionMismatch {
                expected: modes,
                found: mode + 1,
            });
        }
        let mut state = Self::vacuum(modes);
        state.displacement[mode] = alpha;
        state.displacement[modes + mode] = alpha.conj();
        Ok(state)
    }

    pub fn from_moments(displacement: CVector, covariance: CMatrix) -> Result<Self> {
        let dim = displacement.len();
        if !dim.is_multiple_of(2) || dim == 0 {
            return Err(Error::DimensionMismatch {
                expected: dim + 1,
                found: dim,
            });
        }
        if covariance.nrows() != dim || covariance.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: covariance.nrows(),
            });
        }
        Ok(Self {
            displacement,
            covariance,
        })
    }

    pub fn modes(&self) -> usize {
        self.displacement.len() / 2
    }

    pub fn displacement(&self) -> &CVector {
        &self.displacement
    }

    pub fn covariance(&self) -> &CMatrix {
        &self.covariance
    }

    /// `(S d, S Γ S†)`.
    pub fn apply(&self, s: &SymplecticTransform) -> Result<Self> {
        if s.modes() != self.modes() {
            return Err(Error::DimensionMismatch {
                expected: self.modes(),
                found: s.modes(),
            });
        }
        let m = s.matrix();
        Ok(Self {
            displacement: m * &self.displacement,
            covariance: m * &self.covariance * m.adjoint(),
        })
    }

    /// Mean occupation `⟨b†b⟩ = (Γ_mm − 1)/2 + |d_m|²`.
    pub fn phonon_number(&self, mode: usize) -> Result<f64> {
        if mode >= self.modes() {
            return Err(Error::DimensionMismatch {
                expected: self.modes(),
                found: mode + 1,
            });
        }
        Ok((self.covariance[(mode, mode)].re - 1.0) / 2.0 + self.displacement[mode].norm_sqr())
    }

    pub fn total_number(&self) -> f64 {
        (0..self.modes())
            .map(|m| self.phonon_number(m).unwrap_or(0.0))
            .sum()
    }

    /// `max |Γ − Γ†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        max_abs(&(&self.covariance - self.covariance.adjoint()))
    }

    /// Largest violation of the block-conjugate structure of `Γ` and of
    /// `d_{N+k} = conj(d_k)`.
    pub fn structure_defect(&self) -> f64 {
        let n = self.modes();
        let g = &self.covariance;
        let mut worst = 0.0f64;
        for i in 0..n {
            worst = worst.max((self.displacement[n + i] - self.displacement[i].conj()).norm());
            for j in 0..n {
                worst = worst.max((g[(n + i, n + j)] - g[(i, j)].conj()).norm());
                worst = worst.max((g[(n + i, j)] - g[(i, n + j)].conj()).norm());
            }
        }
        worst
    }

    /// Eigenvalues of `Γ`, ascending. `Γ` is Hermitian positive definite for
    /// any physical state.
    pub fn covariance_eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(hermitian_part(&self.covariance))
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Symplectic eigenvalues `ν_k ≥ 1`, ascending: the positive spectrum of
    /// `Γ^{1/2} K Γ^{1/2}`.
    pub fn symplectic_eigenvalues(&self) -> Vec<f64> {
        let eig = SymmetricEigen::new(hermitian_part(&self.covariance));
        let sqrt_vals = eig.eigenvalues.map(|v| Complex64::from(v.max(0.0).sqrt()));
        let v = &eig.eigenvectors;
        let root = v * CMatrix::from_diagonal(&sqrt_vals) * v.adjoint();
        let m = &root * k_matrix(self.modes()) * &root;
        let mut nus: Vec<f64> = SymmetricEigen::new(hermitian_part(&m))
            .eigenvalues
            .iter()
            .copied()
            .filter(|v| *v > 0.0)
            .collect();
        nus.sort_by(f64::total_cmp);
        nus
    }

    /// Uncertainty principle `ν_min ≥ 1`. The eigenvalues lose accuracy in
    /// proportion to `‖Γ‖`, so `tol` is scaled by it.
    pub fn is_physical(&self, tol: f64) -> bool {
        let nus = self.symplectic_eigenvalues();
        let slack = tol * max_abs(&self.covariance).max(1.0);
        nus.len() == self.modes() && nus.first().is_some_and(|nu| *nu >= 1.0 - slack)
    }

    /// Largest entry-wise difference in `d` and `Γ`.
    pub fn max_difference(&self, other: &GaussianState) -> f64 {
        let dd = (&self.displacement - &other.displacement)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        dd.max(max_abs(&(&self.covariance - &other.covariance)))
    }
}

pub(crate) fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * Complex64::from(0.5)
}
