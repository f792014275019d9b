//! Matrix primitives shared by every other module, plus the criterion for
//! two Hermitian generators to be unitarily conjugate up to a scalar shift.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::eigenlists::EigenvalueList;
use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::ComplexMatrix;

/// Hermiticity tolerance relative to the spectral norm.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Absolute tolerance for the density-matrix invariants.
pub const STATE_TOL: f64 = 1e-12;

/// A normal state on `M_n`: positive semidefinite with unit trace.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        m.require_square()?;
        let defect = m.hermitian_defect();
        if defect > STATE_TOL {
            return Err(Error::NonHermitian { defect });
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::NotNormalized { sum: tr.re });
        }
        let min = linalg::min_eigenvalue(&m)?;
        if min < -STATE_TOL {
            return Err(Error::InvalidList("density matrix has a negative eigenvalue"));
        }
        Ok(Self(m))
    }

    pub(crate) fn new_unchecked(m: ComplexMatrix) -> Self {
        Self(m)
    }

    /// Pure state `|ψ⟩⟨ψ|` for a (not necessarily normalized) vector.
    pub fn pure(psi: &[crate::C64]) -> Self {
        let norm2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        let n = psi.len();
        Self(ComplexMatrix::from_fn(n, n, |r, c| psi[r] * psi[c].conj() / norm2))
    }

    pub fn maximally_mixed(n: usize) -> Self {
        Self(ComplexMatrix::identity(n).scale_real(1.0 / n as f64))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    /// Eigenvalue list of the state, i.e. its spectrum arranged nonincreasingly.
    pub fn eigenvalue_list(&self) -> Result<EigenvalueList> {
        eig_descending(&self.0)?.to_list()
    }

    /// `⟨ρ, a⟩ = tr(ρ a)`.
    pub fn expectation(&self, a: &ComplexMatrix) -> crate::C64 {
        (&self.0 * a).trace()
    }
}

/// Spectral decomposition with eigenvalues sorted nonincreasingly.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub values: Vec<f64>,
    /// Unitary whose columns are eigenvectors matching `values`.
    pub vectors: ComplexMatrix,
}

impl Spectrum {
    /// Converts a positive semidefinite spectrum into an eigenvalue list,
    /// clamping roundoff-level negatives to zero.
    pub fn to_list(&self) -> Result<EigenvalueList> {
        let scale = self.values.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        if self.values.iter().any(|&x| x < -HERMITIAN_TOL * scale) {
            return Err(Error::InvalidList("spectrum has a negative eigenvalue"));
        }
        EigenvalueList::new(self.values.iter().map(|&x| x.max(0.0)).collect())
    }
}

fn check_hermitian(a: &ComplexMatrix) -> Result<()> {
    a.require_square()?;
    let defect = a.hermitian_defect();
    let scale = a.op_norm();
    if defect > HERMITIAN_TOL * scale {
        return Err(Error::NonHermitian { defect });
    }
    Ok(())
}

/// Eigenvalues of a Hermitian matrix, nonincreasing and counted with
/// multiplicity, with a unitary diagonalizer.
pub fn eig_descending(a: &ComplexMatrix) -> Result<Spectrum> {
    check_hermitian(a)?;
    let (mut values, u) = linalg::hermitian_eigen(a)?;
    let n = values.len();
    values.reverse();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| u[(r, n - 1 - c)]);
    Ok(Spectrum { values, vectors })
}

/// Sum of singular values.
pub fn trace_norm(a: &ComplexMatrix) -> Result<f64> {
    a.require_square()?;
    Ok(linalg::singular_values(a).iter().sum())
}

/// `exp(tA)`.
pub fn expm(a: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    linalg::expm(a, t)
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

/// Returns the real `λ` such that `W (X + λ·1) W* = Y` for some unitary
/// `W`, if one exists.
///
/// Two Hermitian matrices are unitarily equivalent exactly when their
/// spectra agree, so the criterion reduces to `spec(X) + λ = spec(Y)`. The
/// only candidate is the difference of the spectral means; it is accepted
/// when the sorted spectra agree entrywise after the shift. Equivalently
/// `W X W* = Y − λ·1`.
pub fn conjugacy_shift(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<Option<f64>> {
    check_hermitian(x)?;
    check_hermitian(y)?;
    if x.rows() != y.rows() {
        return Err(Error::DimensionMismatch { expected: x.rows(), found: y.rows() });
    }
    let sx = eig_descending(x)?.values;
    let sy = eig_descending(y)?.values;
    let n = sx.len();
    if n == 0 {
        return Ok(Some(0.0));
    }
    let mean = |s: &[f64]| s.iter().sum::<f64>() / n as f64;
    let lambda = mean(&sy) - mean(&sx);
    let scale = 1.0f64.max(x.op_norm()).max(y.op_norm());
    let ok = sx.iter().zip(&sy).all(|(a, b)| (a + lambda - b).abs() <= 1e-9 * scale);
    Ok(if ok { Some(lambda) } else { None })
}
