//! Completely positive maps and GKLS semigroups on `M_n`.
//!
//! Linear maps on `M_n` are carried as their `n² × n²` action on
//! column-stacked coordinates (`vec(a)[i + j·n] = a[i, j]`), so that
//! `vec(X a Y) = (Yᵀ ⊗ X) vec(a)` and a semigroup `exp(tL)` is a single
//! matrix exponential. Kraus maps are in the Heisenberg picture,
//! `φ(a) = Σ Kᵢ* a Kᵢ`.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::eigenlists::EigenvalueList;
use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::ComplexMatrix;
use crate::moments::Semigroup;
use crate::opalg::DensityMatrix;
use crate::C64;

/// Slack allowed on `Σ Kᵢ*Kᵢ ⪯ 1`.
pub const CONTRACTION_TOL: f64 = 1e-10;
/// Relative threshold separating the kernel of `L_*` from the rest of its
/// singular values.
pub const KERNEL_TOL: f64 = 1e-8;

/// A linear map on `M_n` by its action matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMap {
    dim: usize,
    action: ComplexMatrix,
}

impl LinearMap {
    pub fn from_action(dim: usize, action: ComplexMatrix) -> Result<Self> {
        let n2 = dim * dim;
        if action.rows() != n2 || action.cols() != n2 {
            return Err(Error::DimensionMismatch { expected: n2, found: action.rows() });
        }
        Ok(Self { dim, action })
    }

    pub fn identity(dim: usize) -> Self {
        Self { dim, action: ComplexMatrix::identity(dim * dim) }
    }

    /// `a ↦ aᵀ`.
    pub fn transpose_map(dim: usize) -> Self {
        let n2 = dim * dim;
        let mut action = ComplexMatrix::zeros(n2, n2);
        for i in 0..dim {
            for j in 0..dim {
                action[(j + i * dim, i + j * dim)] = C64::new(1.0, 0.0);
            }
        }
        Self { dim, action }
    }

    /// `a ↦ X a Y`.
    pub fn sandwich(x: &ComplexMatrix, y: &ComplexMatrix) -> Self {
        Self { dim: x.rows(), action: y.transpose().kron(x) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self) -> &ComplexMatrix {
        &self.action
    }

    pub fn apply(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        if a.rows() != self.dim || a.cols() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: a.rows() });
        }
        let v = self.action.mul_vec(&a.vec_col());
        ComplexMatrix::from_vec_col(self.dim, self.dim, &v)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearMap) -> LinearMap {
        LinearMap { dim: self.dim, action: &self.action * &other.action }
    }

    pub fn combine(&self, s: f64, other: &LinearMap, t: f64) -> LinearMap {
        LinearMap { dim: self.dim, action: &self.action.scale_real(s) + &other.action.scale_real(t) }
    }

    /// Choi matrix `Σᵢⱼ Eᵢⱼ ⊗ φ(Eᵢⱼ)`.
    pub fn choi(&self) -> ComplexMatrix {
        let n = self.dim;
        let mut c = ComplexMatrix::zeros(n * n, n * n);
        for i in 0..n {
            for j in 0..n {
                let img = self.apply(&ComplexMatrix::unit(n, i, j)).expect("unit matrix has the map's dimension");
                c.set_block(i * n, j * n, &img);
            }
        }
        c
    }

    /// `φ(1)`.
    pub fn image_of_identity(&self) -> ComplexMatrix {
        self.apply(&ComplexMatrix::identity(self.dim)).expect("identity has the map's dimension")
    }

    /// Dual map under the trace pairing, `tr(φ_*(ρ) a) = tr(ρ φ(a))`.
    pub fn dual(&self) -> LinearMap {
        // With column stacking, tr(ρ a) = vec(ρᵀ)ᵀ vec(a); the dual action is
        // the transpose conjugated by the vec-transpose permutation.
        let t = LinearMap::transpose_map(self.dim);
        let at = self.action.transpose();
        LinearMap { dim: self.dim, action: &(&t.action * &at) * &t.action }
    }
}

/// Complete-positivity test on the Choi matrix.
pub fn is_completely_positive(map: &LinearMap, tol: f64) -> bool {
    match linalg::hermitian_eigenvalues(&map.choi()) {
        Ok(vals) => {
            let min = vals.first().copied().unwrap_or(0.0);
            let max = vals.last().copied().unwrap_or(0.0);
            map.choi().hermitian_defect() <= 1e-9 * map.choi().frobenius_norm().max(1.0) && min >= -tol * max.max(1.0)
        }
        Err(_) => false,
    }
}

/// Completely positive contraction `φ(a) = Σ Kᵢ* a Kᵢ`.
#[derive(Clone, Debug, PartialEq)]
pub struct CpMap {
    dim: usize,
    kraus: Vec<ComplexMatrix>,
}

impl CpMap {
    pub fn new(dim: usize, kraus: Vec<ComplexMatrix>) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::Empty("Kraus family"));
        }
        for k in &kraus {
            if k.rows() != dim || k.cols() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: k.rows() });
            }
        }
        let map = Self { dim, kraus };
        let excess = linalg::hermitian_eigenvalues(&map.kraus_sum())?.last().copied().unwrap_or(0.0);
        if excess > 1.0 + CONTRACTION_TOL {
            return Err(Error::NotCp { min_eig: 1.0 - excess });
        }
        Ok(map)
    }

    pub(crate) fn new_unchecked(dim: usize, kraus: Vec<ComplexMatrix>) -> Self {
        Self { dim, kraus }
    }

    pub fn identity(dim: usize) -> Self {
        Self { dim, kraus: alloc::vec![ComplexMatrix::identity(dim)] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    /// `Σ Kᵢ*Kᵢ = φ(1)`.
    pub fn kraus_sum(&self) -> ComplexMatrix {
        let mut s = ComplexMatrix::zeros(self.dim, self.dim);
        for k in &self.kraus {
            s += &(&k.adjoint() * k);
        }
        s
    }

    /// Frobenius distance of `φ(1)` from `1`.
    pub fn unital_defect(&self) -> f64 {
        (&self.kraus_sum() - &ComplexMatrix::identity(self.dim)).frobenius_norm()
    }

    pub fn is_unital(&self, tol: f64) -> bool {
        self.unital_defect() <= tol
    }

    pub fn apply(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        if a.rows() != self.dim || a.cols() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: a.rows() });
        }
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for k in &self.kraus {
            out += &(&(&k.adjoint() * a) * k);
        }
        Ok(out)
    }

    /// Action matrix `Σ Kᵀ ⊗ K*`.
    pub fn to_linear_map(&self) -> LinearMap {
        let n2 = self.dim * self.dim;
        let mut action = ComplexMatrix::zeros(n2, n2);
        for k in &self.kraus {
            action += &k.transpose().kron(&k.adjoint());
        }
        LinearMap { dim: self.dim, action }
    }

    pub fn choi(&self) -> ComplexMatrix {
        self.to_linear_map().choi()
    }

    /// `φⁿ` as a linear map.
    pub fn power(&self, n: u32) -> LinearMap {
        let base = self.to_linear_map();
        let mut out = LinearMap::identity(self.dim);
        for _ in 0..n {
            out = base.compose(&out);
        }
        out
    }
}

/// Choi matrix of a Kraus-presented map.
pub fn choi(phi: &CpMap) -> ComplexMatrix {
    phi.choi()
}

/// Generator `L(a) = i[H, a] + Σ (Vₖ* a Vₖ − ½{Vₖ*Vₖ, a})` of a unital
/// CP semigroup (Heisenberg picture).
#[derive(Clone, Debug, PartialEq)]
pub struct GklsGenerator {
    hamiltonian: ComplexMatrix,
    jumps: Vec<ComplexMatrix>,
}

impl GklsGenerator {
    pub fn new(hamiltonian: ComplexMatrix, jumps: Vec<ComplexMatrix>) -> Result<Self> {
        let n = hamiltonian.require_square()?;
        let defect = hamiltonian.hermitian_defect();
        if defect > crate::opalg::HERMITIAN_TOL * hamiltonian.frobenius_norm().max(1.0) {
            return Err(Error::NonHermitian { defect });
        }
        for v in &jumps {
            if v.rows() != n || v.cols() != n {
                return Err(Error::DimensionMismatch { expected: n, found: v.rows() });
            }
        }
        Ok(Self { hamiltonian, jumps })
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.rows()
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix {
        &self.hamiltonian
    }

    pub fn jumps(&self) -> &[ComplexMatrix] {
        &self.jumps
    }

    /// Heisenberg-picture generator `L` as an action matrix.
    pub fn heisenberg(&self) -> LinearMap {
        let n = self.dim();
        let id = ComplexMatrix::identity(n);
        let i = C64::new(0.0, 1.0);
        let h = &self.hamiltonian;
        // i(Ha − aH)
        let mut action = (&id.kron(h) - &h.transpose().kron(&id)).scale(i);
        for v in &self.jumps {
            let vdv = &v.adjoint() * v;
            action += &v.transpose().kron(&v.adjoint());
            action -= &(&id.kron(&vdv) + &vdv.transpose().kron(&id)).scale_real(0.5);
        }
        LinearMap { dim: n, action }
    }

    /// Schrödinger-picture generator `L_*(ρ) = −i[H, ρ] + Σ (VρV* − ½{V*V, ρ})`.
    pub fn schrodinger(&self) -> LinearMap {
        let n = self.dim();
        let id = ComplexMatrix::identity(n);
        let i = C64::new(0.0, 1.0);
        let h = &self.hamiltonian;
        let mut action = (&id.kron(h) - &h.transpose().kron(&id)).scale(-i);
        for v in &self.jumps {
            let vdv = &v.adjoint() * v;
            action += &v.conj().kron(v);
            action -= &(&id.kron(&vdv) + &vdv.transpose().kron(&id)).scale_real(0.5);
        }
        LinearMap { dim: n, action }
    }

    /// `L(a)`.
    pub fn apply(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        let i = C64::new(0.0, 1.0);
        let mut out = self.hamiltonian.commutator(a).scale(i);
        for v in &self.jumps {
            let vd = v.adjoint();
            out += &(&(&vd * a) * v);
            out -= &(&vd * v).anticommutator(a).scale_real(0.5);
        }
        Ok(out)
    }
}

/// Heisenberg-picture semigroup element `P_t = exp(tL)`.
pub fn evolve(gen: &GklsGenerator, t: f64) -> Result<LinearMap> {
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    let l = gen.heisenberg();
    Ok(LinearMap { dim: l.dim, action: linalg::expm(&l.action, t)? })
}

/// Schrödinger evolution `ρ ↦ ρ∘P_t`.
pub fn evolve_state(gen: &GklsGenerator, rho: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    let l = gen.schrodinger();
    let p = LinearMap { dim: l.dim, action: linalg::expm(&l.action, t)? };
    p.apply(rho)
}

/// The unique normal invariant state of the semigroup.
///
/// Fails with [`Error::DegenerateKernel`] unless the kernel of `L_*` is
/// one-dimensional, i.e. the second-smallest singular value exceeds
/// `KERNEL_TOL·‖L_*‖`.
pub fn stationary_state(gen: &GklsGenerator) -> Result<DensityMatrix> {
    let n = gen.dim();
    let l = gen.schrodinger();
    let (sigma, _, v) = linalg::svd(&l.action);
    let n2 = sigma.len();
    let top = sigma.first().copied().unwrap_or(0.0);
    let kernel_dim = sigma.iter().filter(|&&s| s <= KERNEL_TOL * top).count();
    if top == 0.0 || kernel_dim != 1 {
        return Err(Error::DegenerateKernel { dim: if top == 0.0 { n2 } else { kernel_dim } });
    }
    let null = v.column(n2 - 1);
    let m = ComplexMatrix::from_vec_col(n, n, &null)?;
    let tr = m.trace();
    let rho = m.scale(tr.inv()).hermitian_part();
    let min = linalg::min_eigenvalue(&rho)?;
    if min < -1e-10 {
        return Err(Error::InvalidList("stationary solution is not positive"));
    }
    Ok(DensityMatrix::new_unchecked(rho))
}

/// Unital generator whose invariant state is `diag(λ)`.
///
/// Birth–death embedding of a Metropolis chain: jumps `√r_ij·E_ij` for
/// `i ≠ j` with `r_ij = min(1, λᵢ/λⱼ)` and `H = 0`. The rates satisfy
/// detailed balance `λⱼ r_ij = λᵢ r_ji`, so `diag(λ)` is invariant, and
/// every coherence decays, so it is the only invariant state.
pub fn generator_with_spectrum(lam: &EigenvalueList, n: usize) -> Result<GklsGenerator> {
    if !lam.is_normalized() {
        return Err(Error::InvalidList("eigenvalue list must sum to 1"));
    }
    if lam.len() != n || lam.support() != n {
        return Err(Error::InvalidList("need exactly n strictly positive eigenvalues"));
    }
    let l = lam.values();
    let mut jumps = Vec::with_capacity(n * (n - 1));
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let rate = (l[i] / l[j]).min(1.0);
                jumps.push(ComplexMatrix::unit(n, i, j).scale_real(rate.sqrt()));
            }
        }
    }
    GklsGenerator::new(ComplexMatrix::zeros(n, n), jumps)
}

/// The compressed map `x ↦ p φ(x) p`, with Kraus operators `p K p`.
///
/// When `p` is coinvariant (`φ(1 − p) ⪯ 1 − p`) every Kraus operator maps
/// the range of `p` into itself, and on `pMp` this agrees with
/// `pxp ↦ p φ(x) p`; iterating it reproduces the compression of `φⁿ`.
pub fn compress(phi: &CpMap, p: &ComplexMatrix) -> Result<CpMap> {
    crate::dilation::check_projection(p)?;
    if p.rows() != phi.dim() {
        return Err(Error::DimensionMismatch { expected: phi.dim(), found: p.rows() });
    }
    let kraus = phi.kraus().iter().map(|k| &(p * k) * p).collect();
    Ok(CpMap::new_unchecked(phi.dim(), kraus))
}

/// Semigroup `t ↦ exp(tL)` of a GKLS generator.
#[derive(Clone, Debug)]
pub struct GklsSemigroup {
    dim: usize,
    generator: ComplexMatrix,
}

impl GklsSemigroup {
    pub fn new(gen: &GklsGenerator) -> Self {
        Self { dim: gen.dim(), generator: gen.heisenberg().action }
    }

    pub fn at(&self, t: f64) -> Result<LinearMap> {
        if t < 0.0 {
            return Err(Error::NegativeTime(t));
        }
        Ok(LinearMap { dim: self.dim, action: linalg::expm(&self.generator, t)? })
    }
}

impl Semigroup for GklsSemigroup {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, t: f64, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        if t == 0.0 {
            return Ok(a.clone());
        }
        self.at(t)?.apply(a)
    }
}

/// Discrete semigroup `n ↦ φⁿ` of a single CP map, defined at integer times.
#[derive(Clone, Debug)]
pub struct DiscreteSemigroup {
    map: CpMap,
}

impl DiscreteSemigroup {
    pub fn new(map: CpMap) -> Self {
        Self { map }
    }

    pub fn map(&self) -> &CpMap {
        &self.map
    }
}

impl Semigroup for DiscreteSemigroup {
    fn dim(&self) -> usize {
        self.map.dim()
    }

    fn apply(&self, t: f64, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        if t < 0.0 {
            return Err(Error::NegativeTime(t));
        }
        let steps = t.round();
        if (t - steps).abs() > 1e-9 {
            return Err(Error::NotInteger);
        }
        let mut x = a.clone();
        for _ in 0..steps as u64 {
            x = self.map.apply(&x)?;
        }
        Ok(x)
    }
}
