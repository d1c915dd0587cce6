use num_complex::Complex64;

use super::{k_matrix, max_abs, CMatrix};
use crate::{Error, Result};

/// A `2N × 2N` complex matrix `S` with `S K S† = K`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticTransform {
    matrix: CMatrix,
}

/// Entry-wise tolerance on `S K S† − K`, scaled by `1 + max|S|²`.
const SYMPLECTIC_TOL: f64 = 1e-10;

impl SymplecticTransform {
    pub fn identity(modes: usize) -> Self {
        Self {
            matrix: CMatrix::identity(2 * modes, 2 * modes),
        }
    }

    /// Wraps a matrix after checking it is square, even-sized and symplectic.
    pub fn from_matrix(matrix: CMatrix) -> Result<Self> {
        let dim = matrix.nrows();
        if matrix.ncols() != dim || !dim.is_multiple_of(2) || dim == 0 {
            return Err(Error::DimensionMismatch {
                expected: dim + dim % 2,
                found: matrix.ncols(),
            });
        }
        let s = Self { matrix };
        let scale = 1.0 + max_abs(&s.matrix).powi(2);
        if s.symplectic_defect() > SYMPLECTIC_TOL * scale {
            return Err(Error::domain("matrix is not symplectic"));
        }
        Ok(s)
    }

    /// `S = exp(−i K H)` for a Hermitian quadratic form `H = [[A, B], [B̄, Ā]]`
    /// (A Hermitian, B symmetric) of `Ĥ = ½ A† H A`, evolved for unit time.
    pub fn from_hamiltonian(hamiltonian: &CMatrix) -> Result<Self> {
        let dim = hamiltonian.nrows();
        if hamiltonian.ncols() != dim || !dim.is_multiple_of(2) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: hamiltonian.ncols(),
            });
        }
        let k = k_matrix(dim / 2);
        let generator = (k * hamiltonian) * Complex64::new(0.0, -1.0);
        Self::from_matrix(generator.exp())
    }

    /// Passive (number-conserving) transform from an `N × N` unitary acting
    /// on the annihilation operators.
    pub fn passive(unitary: &CMatrix) -> Result<Self> {
        let n = unitary.nrows();
        if unitary.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: unitary.ncols(),
            });
        }
        let mut m = CMatrix::zeros(2 * n, 2 * n);
        m.view_mut((0, 0), (n, n)).copy_from(unitary);
        m.view_mut((n, n), (n, n))
            .copy_from(&unitary.map(|z| z.conj()));
        Self::from_matrix(m)
    }

    /// Generator `X` of the two-mode squeezer on `(j, k)` with phase `φ`:
    /// the squeezer of strength `s` is `exp(s X)`.
    pub fn squeezer_generator(j: usize, k: usize, phase: f64, modes: usize) -> CMatrix {
        let e = Complex64::from_polar(1.0, phase);
        let mut x = CMatrix::zeros(2 * modes, 2 * modes);
        x[(j, modes + k)] = e;
        x[(k, modes + j)] = e;
        x[(modes + j, k)] = e.conj();
        x[(modes + k, j)] = e.conj();
        x
    }

    /// `exp(r b_j† b_k† − r̄ b_j b_k)`:
    /// `b_j → cosh|r| b_j + e^{iθ} sinh|r| b_k†` and symmetrically for `b_k`.
    pub fn two_mode_squeezer(j: usize, k: usize, r: Complex64, modes: usize) -> Result<Self> {
        if j == k {
            return Err(Error::domain(format!(
                "two-mode squeezer needs distinct modes, got {j} twice"
            )));
        }
        if j.max(k) >= modes {
            return Err(Error::DimensionMismatch {
                expected: modes,
                found: j.max(k) + 1,
            });
        }
        Ok(Self::real_squeezer(j, k, r.norm(), r.arg(), modes))
    }

    /// `exp(s X_φ)` in closed form; `s` may be negative.
    pub(crate) fn real_squeezer(
        j: usize,
        k: usize,
        strength: f64,
        phase: f64,
        modes: usize,
    ) -> Self {
        let mut m = CMatrix::identity(2 * modes, 2 * modes);
        let ch = Complex64::from(strength.cosh());
        let sh = strength.sinh();
        for idx in [j, k, modes + j, modes + k] {
            m[(idx, idx)] = ch;
        }
        let x = Self::squeezer_generator(j, k, phase, modes);
        m += x * Complex64::from(sh);
        Self { matrix: m }
    }

    /// Tritter mixing `ground` with the symmetric combination of the two
    /// phonon modes: generated by `(θ/√2)[e^{iϑ} a₀†(b_n + b_l) + h.c.]`.
    pub fn tritter(
        theta: f64,
        vartheta: f64,
        ground: usize,
        phonons: (usize, usize),
        modes: usize,
    ) -> Result<Self> {
        let (pn, pl) = phonons;
        if ground == pn || ground == pl || pn == pl {
            return Err(Error::domain("tritter needs three distinct modes"));
        }
        if ground.max(pn).max(pl) >= modes {
            return Err(Error::DimensionMismatch {
                expected: modes,
                found: ground.max(pn).max(pl) + 1,
            });
        }
        let c = Complex64::from_polar(theta / std::f64::consts::SQRT_2, vartheta);
        let mut h = CMatrix::zeros(2 * modes, 2 * modes);
        for p in [pn, pl] {
            h[(ground, p)] = c;
            h[(p, ground)] = c.conj();
            h[(modes + ground, modes + p)] = c.conj();
            h[(modes + p, modes + ground)] = c;
        }
        Self::from_hamiltonian(&h)
    }

    pub fn modes(&self) -> usize {
        self.matrix.nrows() / 2
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `next ∘ self`: apply `self` first.
    pub fn then(&self, next: &SymplecticTransform) -> Result<Self> {
        if next.modes() != self.modes() {
            return Err(Error::DimensionMismatch {
                expected: self.modes(),
                found: next.modes(),
            });
        }
        Ok(Self {
            matrix: &next.matrix * &self.matrix,
        })
    }

    /// `S⁻¹ = K S† K`.
    pub fn inverse(&self) -> Self {
        let k = k_matrix(self.modes());
        Self {
            matrix: &k * self.matrix.adjoint() * &k,
        }
    }

    /// `max |S K S† − K|`.
    pub fn symplectic_defect(&self) -> f64 {
        let k = k_matrix(self.modes());
        max_abs(&(&self.matrix * &k * self.matrix.adjoint() - k))
    }

    /// True when `S` does not mix annihilation and creation operators.
    pub fn is_passive(&self, tol: f64) -> bool {
        let n = self.modes();
        let upper = self.matrix.view((0, n), (n, n));
        let lower = self.matrix.view((n, 0), (n, n));
        upper
            .iter()
            .chain(lower.iter())
            .map(|z| z.norm())
            .fold(0.0, f64::max)
            <= tol
    }
}
