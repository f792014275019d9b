//! Units of exponential product systems, their covariance kernels, the
//! index, and the gauge group `ℝ × H × U(H)`.

use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::ComplexMatrix;
use crate::C64;

/// Hermitian-symmetry tolerance for kernels.
pub const KERNEL_SYMMETRY_TOL: f64 = 1e-12;
/// Relative eigenvalue threshold for the index rank.
pub const INDEX_RANK_TOL: f64 = 1e-8;
/// Tolerance on conditional positive definiteness.
pub const COND_PD_TOL: f64 = 1e-10;
/// Unitarity tolerance for gauge elements.
pub const UNITARY_TOL: f64 = 1e-10;

/// `⟨ξ, η⟩ = Σ ξᵢ η̄ᵢ`, linear in the first argument.
pub fn inner(xi: &[C64], eta: &[C64]) -> C64 {
    xi.iter().zip(eta).map(|(a, b)| a * b.conj()).sum()
}

/// The unit `u(t) = e^{ta} exp(χ_(0,t) ⊗ ζ)` of the exponential system.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpUnit {
    pub a: C64,
    pub zeta: Vec<C64>,
}

impl ExpUnit {
    pub fn new(a: C64, zeta: Vec<C64>) -> Result<Self> {
        if !a.re.is_finite() || !a.im.is_finite() || zeta.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidList("unit has a non-finite entry"));
        }
        Ok(Self { a, zeta })
    }

    pub fn dim(&self) -> usize {
        self.zeta.len()
    }
}

/// `c(u, v) = a + b̄ + ⟨ζ, ω⟩` for `u = u^(a,ζ)`, `v = u^(b,ω)`.
pub fn covariance(u: &ExpUnit, v: &ExpUnit) -> Result<C64> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch { expected: u.dim(), found: v.dim() });
    }
    Ok(u.a + v.a.conj() + inner(&u.zeta, &v.zeta))
}

/// A covariance kernel `c(uᵢ, uⱼ)` on a finite label set.
#[derive(Clone, Debug, PartialEq)]
pub struct CovKernel {
    c: ComplexMatrix,
}

impl CovKernel {
    pub fn new(c: ComplexMatrix) -> Result<Self> {
        c.require_square()?;
        let defect = c.hermitian_defect();
        if defect > KERNEL_SYMMETRY_TOL * 1f64.max(c.max_abs()) {
            return Err(Error::NonHermitian { defect });
        }
        Ok(Self { c })
    }

    pub fn from_units(units: &[ExpUnit]) -> Result<Self> {
        let n = units.len();
        let mut c = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                c[(i, j)] = covariance(&units[i], &units[j])?;
            }
        }
        Ok(Self { c })
    }

    /// The kernel that vanishes on `n` labels.
    pub fn zero(n: usize) -> Self {
        Self { c: ComplexMatrix::zeros(n, n) }
    }

    pub fn len(&self) -> usize {
        self.c.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.c.rows() == 0
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.c
    }

    /// `Bᵀ c B` for an orthonormal basis `B` of `{λ : Σλ = 0}`.
    pub fn reduced_gram(&self) -> ComplexMatrix {
        let b = helmert_basis(self.len());
        &(&b.transpose() * &self.c) * &b
    }
}

/// Orthonormal real basis of the zero-sum hyperplane in `ℂⁿ`, as the
/// columns of an `n × (n−1)` matrix.
fn helmert_basis(n: usize) -> ComplexMatrix {
    let cols = n.saturating_sub(1);
    ComplexMatrix::from_fn(n, cols, |r, k| {
        let k1 = k + 1;
        let norm = ((k1 * (k1 + 1)) as f64).sqrt();
        let v = if r < k1 {
            1.0
        } else if r == k1 {
            -(k1 as f64)
        } else {
            0.0
        };
        C64::new(v / norm, 0.0)
    })
}

/// Dimension of the Hilbert space the kernel induces on `Σλ = 0`.
///
/// Counts eigenvalues of the reduced Gram above `INDEX_RANK_TOL` relative
/// to the largest one. For exponential units this is
/// `dim span{ζᵢ − ζⱼ}`; for arbitrary kernels sampled on finitely many
/// units it is a lower bound for the index.
pub fn index_dimension(kernel: &CovKernel) -> Result<usize> {
    if kernel.len() < 2 {
        return Ok(0);
    }
    let g = kernel.reduced_gram();
    let vals = linalg::hermitian_eigenvalues(&g.hermitian_part())?;
    let top = vals.last().copied().unwrap_or(0.0);
    let min = vals.first().copied().unwrap_or(0.0);
    if min < -COND_PD_TOL * 1f64.max(top) {
        return Err(Error::NotCondPd { min_eig: min });
    }
    let floor = (INDEX_RANK_TOL * top).max(1e-12 * 1f64.max(kernel.c.max_abs()));
    Ok(vals.iter().filter(|&&x| x > floor).count())
}

/// Index of the unit set of an exponential system.
pub fn index_of_units(units: &[ExpUnit]) -> Result<usize> {
    index_dimension(&CovKernel::from_units(units)?)
}

/// Kernel of the product system on the label set `E × F`:
/// `c((u,v), (u′,v′)) = c_E(u,u′) + c_F(v,v′)`, with `(i, j)` stored at
/// `i·|F| + j`.
pub fn kernel_direct_sum(ce: &CovKernel, cf: &CovKernel) -> CovKernel {
    let (m, n) = (ce.len(), cf.len());
    let c = ComplexMatrix::from_fn(m * n, m * n, |r, s| ce.c[(r / n, s / n)] + cf.c[(r % n, s % n)]);
    CovKernel { c }
}

/// Index values including the infinite cardinals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexValue {
    Finite(usize),
    AlephNull,
    Continuum,
}

impl fmt::Display for IndexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexValue::Finite(n) => write!(f, "{n}"),
            IndexValue::AlephNull => f.write_str("aleph0"),
            IndexValue::Continuum => f.write_str("continuum"),
        }
    }
}

impl core::str::FromStr for IndexValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "aleph0" | "ℵ₀" | "aleph_0" => Ok(IndexValue::AlephNull),
            "continuum" | "2^aleph0" => Ok(IndexValue::Continuum),
            t => t.parse().map(IndexValue::Finite).map_err(|_| Error::InvalidList("unrecognized index value")),
        }
    }
}

/// Two CP semigroups of type I can be paired into an E₀-semigroup exactly
/// when their indices agree.
pub fn pairing_possible(a: IndexValue, b: IndexValue) -> bool {
    a == b
}

/// An element `(λ, ξ, U)` of the gauge group.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeElement {
    pub lambda: f64,
    pub xi: Vec<C64>,
    pub u: ComplexMatrix,
}

impl GaugeElement {
    pub fn new(lambda: f64, xi: Vec<C64>, u: ComplexMatrix) -> Result<Self> {
        let n = u.require_square()?;
        if xi.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: xi.len() });
        }
        let defect = (&(&u.adjoint() * &u) - &ComplexMatrix::identity(n)).max_abs();
        if defect > UNITARY_TOL {
            return Err(Error::NotUnitary { defect });
        }
        Ok(Self { lambda, xi, u })
    }

    /// `(0, 0, 1)`.
    pub fn identity(n: usize) -> Self {
        Self { lambda: 0.0, xi: alloc::vec![C64::new(0.0, 0.0); n], u: ComplexMatrix::identity(n) }
    }

    pub fn dim(&self) -> usize {
        self.xi.len()
    }

    /// Largest componentwise difference.
    pub fn max_diff(&self, other: &GaugeElement) -> f64 {
        let dxi = self.xi.iter().zip(&other.xi).fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
        (self.lambda - other.lambda).abs().max(dxi).max(self.u.max_diff(&other.u))
    }
}

/// `ω(ξ, η) = Im⟨ξ, η⟩`.
pub fn symplectic(xi: &[C64], eta: &[C64]) -> f64 {
    inner(xi, eta).im
}

/// `(λ, ξ, U)(μ, η, V) = (λ + μ + ω(ξ, Uη), ξ + Uη, UV)`.
pub fn gauge_mul(g: &GaugeElement, h: &GaugeElement) -> Result<GaugeElement> {
    if g.dim() != h.dim() {
        return Err(Error::DimensionMismatch { expected: g.dim(), found: h.dim() });
    }
    let u_eta = g.u.mul_vec(&h.xi);
    let lambda = g.lambda + h.lambda + symplectic(&g.xi, &u_eta);
    let xi = g.xi.iter().zip(&u_eta).map(|(a, b)| a + b).collect();
    Ok(GaugeElement { lambda, xi, u: &g.u * &h.u })
}

/// `(λ, ξ, U)⁻¹ = (−λ, −U⁻¹ξ, U⁻¹)`.
///
/// This is the two-sided inverse under [`gauge_mul`]: the `ω` correction
/// vanishes because `ω(ξ, −ξ) = 0`.
pub fn gauge_inverse(g: &GaugeElement) -> GaugeElement {
    let u_inv = g.u.adjoint();
    let xi = u_inv.mul_vec(&g.xi).into_iter().map(|z| -z).collect();
    GaugeElement { lambda: -g.lambda, xi, u: u_inv }
}
