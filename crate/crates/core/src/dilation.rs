//! Stinespring dilation of a single CP map and exhaustive Kraus-word
//! expectations.
//!
//! [`kraus_word_expectation`] expands `E(α_{t₁}(a₁)⋯α_{t_k}(a_k))` for the
//! discrete dilation of a unital CP map as a plain sum over Kraus words. It
//! never touches the moment-polynomial recursion, so agreement between the
//! two is a genuine cross-check.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::cpdyn::{CpMap, LinearMap};
use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::ComplexMatrix;
use crate::C64;

/// Relative eigenvalue threshold defining the Choi rank.
pub const CHOI_RANK_TOL: f64 = 1e-9;
/// Tolerance for unitality and projection checks.
pub const UNITAL_TOL: f64 = 1e-10;
/// Maximum number of Kraus words enumerated by [`kraus_word_expectation`].
pub const WORD_BUDGET: u128 = 1_000_000;

/// Minimal Stinespring data `φ(a) = V*(a ⊗ 1_r)V`.
#[derive(Clone, Debug)]
pub struct StinespringTriple {
    /// `V : ℂⁿ → ℂⁿ ⊗ ℂʳ`, an `n·r × n` matrix; an isometry when `φ` is unital.
    pub v: ComplexMatrix,
    /// Multiplicity `r`, equal to the Choi rank.
    pub rep_rank: usize,
    /// Minimal Kraus family read off the Choi eigenvectors.
    pub kraus: Vec<ComplexMatrix>,
}

impl StinespringTriple {
    pub fn dim(&self) -> usize {
        self.v.cols()
    }

    /// `V*(a ⊗ 1_r)V`.
    pub fn compress(&self, a: &ComplexMatrix) -> ComplexMatrix {
        let pi = a.kron(&ComplexMatrix::identity(self.rep_rank));
        &(&self.v.adjoint() * &pi) * &self.v
    }

    /// Largest entrywise deviation of `V*(E_ij ⊗ 1)V` from `φ(E_ij)` over
    /// all matrix units.
    pub fn residual(&self, phi: &LinearMap) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let e = ComplexMatrix::unit(n, i, j);
                let want = phi.apply(&e).expect("unit has the map's dimension");
                worst = worst.max(self.compress(&e).max_diff(&want));
            }
        }
        worst
    }
}

/// Minimal Stinespring decomposition of a Kraus-presented map.
pub fn stinespring(phi: &CpMap, unital: bool) -> Result<StinespringTriple> {
    stinespring_of_map(&phi.to_linear_map(), unital)
}

/// Minimal Stinespring decomposition of a map given by its action matrix.
///
/// Fails with [`Error::NotCp`] when the Choi matrix has a negative
/// eigenvalue beyond `CHOI_RANK_TOL` relative to its largest one.
pub fn stinespring_of_map(phi: &LinearMap, unital: bool) -> Result<StinespringTriple> {
    let n = phi.dim();
    if unital {
        let defect = (&phi.image_of_identity() - &ComplexMatrix::identity(n)).frobenius_norm();
        if defect > UNITAL_TOL {
            return Err(Error::NotUnital { defect });
        }
    }
    let choi = phi.choi();
    let (vals, vecs) = linalg::hermitian_eigen(&choi)?;
    let top = vals.last().copied().unwrap_or(0.0).max(0.0);
    let min = vals.first().copied().unwrap_or(0.0);
    if min < -CHOI_RANK_TOL * top.max(f64::MIN_POSITIVE) {
        return Err(Error::NotCp { min_eig: min });
    }
    let mut kraus = Vec::new();
    for (m, &mu) in vals.iter().enumerate().rev() {
        if mu <= CHOI_RANK_TOL * top {
            continue;
        }
        let scale = mu.sqrt();
        // Choi eigenvector blocks hold K*·e_i, so K[i, r] = conj(v[i·n + r]).
        let k = ComplexMatrix::from_fn(n, n, |i, r| (vecs[(i * n + r, m)] * scale).conj());
        kraus.push(k);
    }
    if kraus.is_empty() {
        kraus.push(ComplexMatrix::zeros(n, n));
    }
    let r = kraus.len();
    let v = ComplexMatrix::from_fn(n * r, n, |row, j| kraus[row % r][(row / r, j)]);
    Ok(StinespringTriple { v, rep_rank: r, kraus })
}

/// `Σ_w K_{w₀}* a₁ K_{w₁}* a₂ ⋯ a_k ⋯ K_{w₁} K_{w₀}`, the sum running over
/// Kraus words `w_j` of lengths `t₁, t₂ − t₁, …`, enumerated depth-first.
pub fn kraus_word_expectation(phi: &CpMap, times: &[u32], mats: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    let n = phi.dim();
    if times.len() != mats.len() {
        return Err(Error::LengthMismatch { left: times.len(), right: mats.len() });
    }
    if times.is_empty() {
        return Err(Error::Empty("expectation needs at least one time"));
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::NotSorted);
    }
    for m in mats {
        if m.rows() != n || m.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: m.rows() });
        }
    }
    let defect = phi.unital_defect();
    if defect > UNITAL_TOL {
        return Err(Error::NotUnital { defect });
    }
    let r = phi.kraus().len() as u128;
    let t_max = *times.last().expect("nonempty");
    let needed = r.checked_pow(t_max).unwrap_or(u128::MAX);
    if needed > WORD_BUDGET {
        return Err(Error::BudgetExceeded { needed, budget: WORD_BUDGET });
    }

    let gaps: Vec<u32> = times.iter().enumerate().map(|(j, &t)| if j == 0 { t } else { t - times[j - 1] }).collect();
    let kraus: Vec<(ComplexMatrix, ComplexMatrix)> = phi.kraus().iter().map(|k| (k.adjoint(), k.clone())).collect();
    let mut walker = WordWalker { kraus: &kraus, mats, gaps: &gaps, acc: ComplexMatrix::zeros(n, n) };
    let id = ComplexMatrix::identity(n);
    walker.walk(0, gaps[0], &id, &id);
    Ok(walker.acc)
}

struct WordWalker<'a> {
    kraus: &'a [(ComplexMatrix, ComplexMatrix)],
    mats: &'a [ComplexMatrix],
    gaps: &'a [u32],
    acc: ComplexMatrix,
}

impl WordWalker<'_> {
    fn walk(&mut self, segment: usize, remaining: u32, left: &ComplexMatrix, right: &ComplexMatrix) {
        if remaining > 0 {
            for (kd, k) in self.kraus {
                let l = left * kd;
                let r = k * right;
                self.walk(segment, remaining - 1, &l, &r);
            }
            return;
        }
        let l = left * &self.mats[segment];
        if segment + 1 == self.mats.len() {
            self.acc += &(&l * right);
        } else {
            self.walk(segment + 1, self.gaps[segment + 1], &l, right);
        }
    }
}

/// Order classification of a projection under one step of a unital CP map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProjectionClass {
    /// `α(p) ⪰ p`.
    pub increasing: bool,
    /// `α(1 − p) ⪯ 1 − p`.
    pub coinvariant: bool,
}

pub(crate) fn check_projection(p: &ComplexMatrix) -> Result<()> {
    p.require_square()?;
    let idem = (&(p * p) - p).max_abs();
    let herm = p.hermitian_defect();
    if idem > UNITAL_TOL || herm > UNITAL_TOL {
        return Err(Error::NotProjection);
    }
    Ok(())
}

/// Tests whether `p` is increasing and/or coinvariant for `α`.
///
/// For unital `α` the two conditions are equivalent, since
/// `1 − p − α(1 − p) = α(p) − p`; both are still evaluated, and coinvariance
/// is reported whenever increase is.
pub fn projection_class(alpha: &CpMap, p: &ComplexMatrix) -> Result<ProjectionClass> {
    check_projection(p)?;
    let n = alpha.dim();
    if p.rows() != n {
        return Err(Error::DimensionMismatch { expected: n, found: p.rows() });
    }
    let defect = alpha.unital_defect();
    if defect > UNITAL_TOL {
        return Err(Error::NotUnital { defect });
    }
    let q = &ComplexMatrix::identity(n) - p;
    let gain = &alpha.apply(p)? - p;
    let loss = &q - &alpha.apply(&q)?;
    let increasing = linalg::min_eigenvalue(&gain)? >= -UNITAL_TOL;
    let coinvariant = increasing || linalg::min_eigenvalue(&loss)? >= -UNITAL_TOL;
    Ok(ProjectionClass { increasing, coinvariant })
}

/// Conjugation `a ↦ U* a U` as a unital CP map.
pub fn unitary_conjugation(u: &ComplexMatrix) -> Result<CpMap> {
    let n = u.require_square()?;
    let defect = (&(&u.adjoint() * u) - &ComplexMatrix::identity(n)).frobenius_norm();
    if defect > UNITAL_TOL {
        return Err(Error::NotUnitary { defect });
    }
    CpMap::new(n, alloc::vec![u.clone()])
}

/// Rotation by `angle` in the `(0, 1)` coordinate plane of `ℂⁿ`.
pub fn plane_rotation(n: usize, angle: f64) -> ComplexMatrix {
    let mut u = ComplexMatrix::identity(n);
    let (s, c) = angle.sin_cos();
    u[(0, 0)] = C64::new(c, 0.0);
    u[(0, 1)] = C64::new(-s, 0.0);
    u[(1, 0)] = C64::new(s, 0.0);
    u[(1, 1)] = C64::new(c, 0.0);
    u
}
