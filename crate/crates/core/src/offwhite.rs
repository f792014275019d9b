//! Off-white noise: the correlation profile `C_θ`, Gram matrices of cell
//! indicators under `⟨f, g⟩ = ∫ (C_θ * f) ḡ`, a finite-grid
//! quasiorthogonality diagnostic, and the Gaussian-measure toolkit
//! (Kakutani mean, measure-class inner product, Feldman–Hájek operator,
//! straightening of quasiorthogonal pairs).
//!
//! Cell integrals are closed form. With `L = −log t`, on `(0, δ]`
//! `∫₀ˢ C = L^{1−θ}/(θ−1)` and `∫₀ˢ u·C(u) du = Γ(1−θ, L)`, the upper
//! incomplete gamma function, evaluated by its continued fraction. Past
//! `δ` the profile is linear.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::{ComplexMatrix, RealMatrix};
use crate::C64;

/// Upper end of the default `δ`.
pub const DEFAULT_DELTA: f64 = 0.05;
/// Positive-definiteness threshold for Gram matrices, relative to the
/// largest eigenvalue.
pub const GRAM_PD_TOL: f64 = 1e-10;

/// `1/(|t|·|log|t||^θ)`, the profile without any cutoff.
pub fn tsirelson_profile(theta: f64, t: f64) -> Result<f64> {
    if t == 0.0 {
        return Err(Error::AtZero);
    }
    let a = t.abs();
    Ok(1.0 / (a * a.ln().abs().powf(theta)))
}

/// `Γ(a, x)` for `x > max(0, a + 1)`, by the Legendre continued fraction
/// (modified Lentz).
fn upper_gamma(a: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..500 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x + a * x.ln()).exp() * h
}

/// `C_θ` with the singular profile on `(0, δ]`, continued past `δ` by its
/// tangent line clipped at zero, and extended evenly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorrelationSpec {
    theta: f64,
    delta: f64,
    epsilon: f64,
    /// `C(δ)` and `C′(δ)`.
    c0: f64,
    c1: f64,
    /// `∫₀^δ C` and `∫₀^δ u·C(u) du`.
    mass_delta: f64,
    moment_delta: f64,
}

impl CorrelationSpec {
    /// Requires `θ > 1`, `δ ∈ (0, 1)` small enough that the profile is
    /// decreasing and convex on `(0, δ]` (in particular `δ < e^{−θ}`), and
    /// a zero crossing `ε < 1`.
    pub fn new(theta: f64, delta: f64) -> Result<Self> {
        if !(theta > 1.0 && theta.is_finite()) {
            return Err(Error::BadCorrelation("theta must exceed 1"));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::BadCorrelation("delta must lie in (0, 1)"));
        }
        let l = -delta.ln();
        if l <= theta {
            return Err(Error::BadCorrelation("profile is not decreasing up to delta; need delta < exp(-theta)"));
        }
        // C″ ∝ 2L² − 3θL + θ(θ+1), which has real roots only for θ ≥ 8.
        if theta >= 8.0 && l < (3.0 * theta + (theta * theta - 8.0 * theta).sqrt()) / 4.0 {
            return Err(Error::BadCorrelation("profile is not convex up to delta"));
        }
        let epsilon = delta * (2.0 * l - theta) / (l - theta);
        if epsilon >= 1.0 {
            return Err(Error::BadCorrelation("zero crossing must be below 1"));
        }
        let c0 = 1.0 / (delta * l.powf(theta));
        let c1 = (theta - l) / (delta * delta * l.powf(theta + 1.0));
        let mass_delta = l.powf(1.0 - theta) / (theta - 1.0);
        let moment_delta = upper_gamma(1.0 - theta, l);
        Ok(Self { theta, delta, epsilon, c0, c1, mass_delta, moment_delta })
    }

    /// Uses `δ = min(0.05, e^{−θ}/2)`.
    pub fn with_default_delta(theta: f64) -> Result<Self> {
        Self::new(theta, default_delta(theta))
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Support radius: `C ≡ 0` on `[ε, ∞)`.
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn value(&self, t: f64) -> Result<f64> {
        if t == 0.0 {
            return Err(Error::AtZero);
        }
        let a = t.abs();
        Ok(if a <= self.delta {
            1.0 / (a * (-a.ln()).powf(self.theta))
        } else if a < self.epsilon {
            (self.c0 + self.c1 * (a - self.delta)).max(0.0)
        } else {
            0.0
        })
    }

    /// `∫_ℝ C`.
    pub fn total_mass(&self) -> f64 {
        let w = self.epsilon - self.delta;
        2.0 * (self.mass_delta + self.c0 * w + self.c1 * w * w / 2.0)
    }

    /// `Ψ(s) = ∫₀^{|s|} (|s| − u) C(u) du`, so that `Ψ″ = C`.
    pub fn second_antiderivative(&self, s: f64) -> f64 {
        let s = s.abs();
        if s == 0.0 {
            return 0.0;
        }
        if s <= self.delta {
            let l = -s.ln();
            let mass = l.powf(1.0 - self.theta) / (self.theta - 1.0);
            return s * mass - upper_gamma(1.0 - self.theta, l);
        }
        let base = s * self.mass_delta - self.moment_delta;
        if s < self.epsilon {
            let w = s - self.delta;
            return base + self.c0 * w * w / 2.0 + self.c1 * w * w * w / 6.0;
        }
        let w = self.epsilon - self.delta;
        let mass = self.c0 * w + self.c1 * w * w / 2.0;
        let first = self.c0 * w * w / 2.0 + self.c1 * w * w * w / 3.0;
        base + (s - self.delta) * mass - first
    }

    /// `∫_{x₀}^{x₁} ∫_{y₀}^{y₁} C(x − y) dy dx`.
    pub fn box_inner(&self, x0: f64, x1: f64, y0: f64, y1: f64) -> f64 {
        let gap = (y0 - x1).max(x0 - y1);
        if gap >= self.epsilon {
            return 0.0;
        }
        let psi = |s: f64| self.second_antiderivative(s);
        psi(x1 - y0) - psi(x1 - y1) - psi(x0 - y0) + psi(x0 - y1)
    }

    /// Inner product of indicators of two cells of width `h` whose left
    /// ends differ by `k·h`.
    pub fn offset_weight(&self, h: f64, k: usize) -> f64 {
        if k >= 1 && (k - 1) as f64 * h >= self.epsilon {
            return 0.0;
        }
        let psi = |j: f64| self.second_antiderivative(j * h);
        let k = k as f64;
        if k == 0.0 {
            2.0 * psi(1.0)
        } else {
            psi(k + 1.0) - 2.0 * psi(k) + psi(k - 1.0)
        }
    }
}

/// `min(0.05, e^{−θ}/2)`.
pub fn default_delta(theta: f64) -> f64 {
    DEFAULT_DELTA.min((-theta).exp() / 2.0)
}

/// `n` equal cells on `[left, right]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub left: f64,
    pub right: f64,
    pub n: usize,
}

impl Grid {
    pub fn new(left: f64, right: f64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::BadGrid("grid needs at least one cell"));
        }
        if !(left.is_finite() && right.is_finite() && right > left) {
            return Err(Error::BadGrid("grid needs finite left < right"));
        }
        Ok(Self { left, right, n })
    }

    pub fn width(&self) -> f64 {
        (self.right - self.left) / self.n as f64
    }

    pub fn shifted(&self, s: f64) -> Result<Self> {
        Self::new(self.left + s, self.right + s, self.n)
    }
}

/// Gram matrix of the cell indicators of a grid.
#[derive(Clone, Debug)]
pub struct GramOperator {
    pub grid: Grid,
    pub entries: RealMatrix,
}

impl GramOperator {
    /// Largest deviation of an entry from the entry on the same diagonal
    /// in the first row or column.
    pub fn toeplitz_defect(&self) -> f64 {
        let n = self.grid.n;
        let g = &self.entries;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let reference = if j >= i { g[(0, j - i)] } else { g[(i - j, 0)] };
                worst = worst.max((g[(i, j)] - reference).abs());
            }
        }
        worst
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(linalg::symmetric_eigen(&self.entries)?.0)
    }
}

/// `G[i][j] = ⟨1_{cell i}, 1_{cell j}⟩`, assembled from offset weights.
pub fn gram_matrix(spec: &CorrelationSpec, grid: &Grid) -> GramOperator {
    let h = grid.width();
    let w: Vec<f64> = (0..grid.n).map(|k| spec.offset_weight(h, k)).collect();
    let entries = RealMatrix::from_fn(grid.n, grid.n, |i, j| w[i.abs_diff(j)]);
    GramOperator { grid: *grid, entries }
}

/// Gram matrix of arbitrary cells given by their endpoints.
pub fn gram_of_cells(spec: &CorrelationSpec, cells: &[(f64, f64)]) -> RealMatrix {
    let n = cells.len();
    let mut g = RealMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = spec.box_inner(cells[i].0, cells[i].1, cells[j].0, cells[j].1);
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    g
}

/// One refinement level of the quasiorthogonality diagnostic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuasiRow {
    /// Cells per unit length.
    pub n: usize,
    pub sigma_min: f64,
    pub hs_defect: f64,
}

/// Finite-grid evidence for quasiorthogonality. It is a bounded-defect
/// report and certifies nothing about the continuum.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiReport {
    pub rows: Vec<QuasiRow>,
}

impl QuasiReport {
    /// `σ_min > floor` at every level and all defects within a factor
    /// `ratio` of each other.
    pub fn is_stable(&self, floor: f64, ratio: f64) -> bool {
        let lo = self.rows.iter().map(|r| r.hs_defect).fold(f64::INFINITY, f64::min);
        let hi = self.rows.iter().map(|r| r.hs_defect).fold(0.0, f64::max);
        self.rows.iter().all(|r| r.sigma_min > floor) && (hi == 0.0 || hi <= ratio * lo)
    }
}

fn check_intervals(intervals: &[(f64, f64)]) -> Result<()> {
    let mut sorted = intervals.to_vec();
    for &(a, b) in &sorted {
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(Error::BadGrid("interval needs finite a < b"));
        }
    }
    sorted.sort_by(|x, y| x.0.total_cmp(&y.0));
    if sorted.windows(2).any(|w| w[0].1 > w[1].0) {
        return Err(Error::OverlappingIntervals);
    }
    Ok(())
}

/// Discretizes each interval into cells of width about `1/n`, orthonormalizes
/// each cell span in the Gram inner product, and reports `σ_min(L)` and
/// `‖1 − L*L‖_HS` for the sum map `L` on the direct sum.
pub fn quasiorthogonality_diagnostic(spec: &CorrelationSpec, intervals: &[(f64, f64)], refinements: &[usize]) -> Result<QuasiReport> {
    check_intervals(intervals)?;
    if intervals.is_empty() {
        return Err(Error::Empty("no intervals"));
    }
    let mut rows = Vec::with_capacity(refinements.len());
    for &n in refinements {
        if n == 0 {
            return Err(Error::BadGrid("refinement must be positive"));
        }
        let mut cells = Vec::new();
        let mut blocks = Vec::new();
        for &(a, b) in intervals {
            let m = (((b - a) * n as f64).round() as usize).max(1);
            let h = (b - a) / m as f64;
            blocks.push((cells.len(), m));
            cells.extend((0..m).map(|i| (a + i as f64 * h, if i + 1 == m { b } else { a + (i + 1) as f64 * h })));
        }
        let g = gram_of_cells(spec, &cells);
        let total = cells.len();
        let mut w = RealMatrix::zeros(total, total);
        for &(start, m) in &blocks {
            let (vals, vecs) = linalg::symmetric_eigen(&g.block(start, start, m, m))?;
            let top = vals.last().copied().unwrap_or(0.0);
            if vals[0] <= GRAM_PD_TOL * top {
                return Err(Error::SingularGram);
            }
            for r in 0..m {
                for c in 0..m {
                    w[(start + r, start + c)] = vecs[(r, c)] / vals[c].sqrt();
                }
            }
        }
        let lsl = &(&w.transpose() * &g) * &w;
        let defect = &RealMatrix::identity(total) - &lsl;
        let (vals, _) = linalg::symmetric_eigen(&lsl)?;
        rows.push(QuasiRow { n, sigma_min: vals[0].max(0.0).sqrt(), hs_defect: defect.frobenius_norm() });
    }
    Ok(QuasiReport { rows })
}

/// A finite measure on atoms `0..len`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteMeasure {
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidList("weights must be finite and nonnegative"));
        }
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `h·μ` for a nonnegative density `h`.
    pub fn with_density(&self, h: &[f64]) -> Result<Self> {
        if h.len() != self.len() {
            return Err(Error::AtomMismatch { left: self.len(), right: h.len() });
        }
        Self::new(self.weights.iter().zip(h).map(|(w, d)| w * d).collect())
    }

    fn require_atoms(&self, other: &DiscreteMeasure) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::AtomMismatch { left: self.len(), right: other.len() });
        }
        Ok(())
    }
}

/// `√(μν)`, atom by atom.
pub fn kakutani_mean(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<DiscreteMeasure> {
    mu.require_atoms(nu)?;
    Ok(DiscreteMeasure { weights: mu.weights.iter().zip(&nu.weights).map(|(a, b)| (a * b).sqrt()).collect() })
}

/// `⟨f√μ, g√ν⟩ = ∫ f ḡ d√(μν)`.
pub fn mc_inner(f: &[C64], mu: &DiscreteMeasure, g: &[C64], nu: &DiscreteMeasure) -> Result<C64> {
    let k = kakutani_mean(mu, nu)?;
    if f.len() != k.len() {
        return Err(Error::AtomMismatch { left: k.len(), right: f.len() });
    }
    if g.len() != k.len() {
        return Err(Error::AtomMismatch { left: k.len(), right: g.len() });
    }
    Ok(f.iter().zip(g).zip(&k.weights).map(|((a, b), w)| a * b.conj() * *w).sum())
}

fn require_pd(g: &ComplexMatrix) -> Result<()> {
    g.require_square()?;
    if g.hermitian_defect() > GRAM_PD_TOL * 1f64.max(g.max_abs()) {
        return Err(Error::SingularGram);
    }
    let vals = linalg::hermitian_eigenvalues(&g.hermitian_part())?;
    let top = vals.last().copied().unwrap_or(0.0);
    if vals.first().map_or(true, |&m| m <= GRAM_PD_TOL * top) {
        return Err(Error::SingularGram);
    }
    Ok(())
}

/// The operator `B` with `⟨zᵢ, zⱼ⟩_Q = ⟨B zᵢ, zⱼ⟩_P`, given the Grams
/// `gp[i][j] = ⟨zᵢ, zⱼ⟩_P` and `gq` likewise. Its matrix satisfies
/// `Bᵀ·gp = gq`.
pub fn feldman_hajek_b(gp: &ComplexMatrix, gq: &ComplexMatrix) -> Result<ComplexMatrix> {
    require_pd(gp)?;
    require_pd(gq)?;
    if gp.rows() != gq.rows() {
        return Err(Error::DimensionMismatch { expected: gp.rows(), found: gq.rows() });
    }
    // Bᵀ = gq·gp⁻¹, so B = gp⁻ᵀ·gqᵀ solves gpᵀ·B = gqᵀ.
    linalg::solve(&gp.transpose(), &gq.transpose())
}

/// `max |Bᵀ·gp − gq|`.
pub fn feldman_hajek_residual(gp: &ComplexMatrix, gq: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (&b.transpose() * gp).max_diff(gq)
}

/// `1 − L*L`.
pub fn equivalence_defect(l: &ComplexMatrix) -> ComplexMatrix {
    &ComplexMatrix::identity(l.cols()) - &(&l.adjoint() * l)
}

/// Output of [`straighten`].
#[derive(Clone, Debug)]
pub struct Straightened {
    /// Gram of the basis `m₁…m_p, n₁…n_q` of `M + N` in the new inner product.
    pub q_gram: ComplexMatrix,
    /// Gram of the same basis in the original inner product.
    pub p_gram: ComplexMatrix,
    /// Smallest singular value of the sum map `M ⊕ N → M + N`.
    pub sigma_min: f64,
    /// Feldman–Hájek operator taking the old inner product to the new one.
    pub b: ComplexMatrix,
}

/// Replaces the inner product on `M + N` by `⟨L⁻¹z₁, L⁻¹z₂⟩_{M⊕N}`, making
/// `M` and `N` orthogonal while keeping each one's own inner product.
///
/// `gm`, `gn` are the Grams of bases of `M` and `N`, and
/// `cross[i][j] = ⟨mᵢ, nⱼ⟩`.
pub fn straighten(gm: &ComplexMatrix, gn: &ComplexMatrix, cross: &ComplexMatrix) -> Result<Straightened> {
    let p = gm.require_square()?;
    let q = gn.require_square()?;
    if cross.rows() != p || cross.cols() != q {
        return Err(Error::BadShape { expected: p * q, found: cross.rows() * cross.cols() });
    }
    require_pd(gm)?;
    require_pd(gn)?;
    let mut g = ComplexMatrix::zeros(p + q, p + q);
    g.set_block(0, 0, gm);
    g.set_block(p, p, gn);
    g.set_block(0, p, cross);
    g.set_block(p, 0, &cross.adjoint());
    let mut d = ComplexMatrix::zeros(p + q, p + q);
    d.set_block(0, 0, gm);
    d.set_block(p, p, gn);

    let d_inv_sqrt = linalg::hermitian_function(&d, |x| 1.0 / x.sqrt())?;
    let lsl = &(&d_inv_sqrt * &g) * &d_inv_sqrt;
    let lam_min = linalg::hermitian_eigenvalues(&lsl.hermitian_part())?[0];
    let sigma_min = lam_min.max(0.0).sqrt();
    if sigma_min <= 1e-10 {
        return Err(Error::SumMapSingular { sigma_min });
    }

    // Coordinates in a P-orthonormal basis: zᵢ = F eᵢ with F*F = gᵀ.
    let f = linalg::hermitian_function(&g.transpose(), |x| x.max(0.0).sqrt())?;
    // L sends coefficient vectors to coordinates via F; pull each zᵢ back.
    let x = linalg::solve(&f, &f)?;
    let q_gram = &(&x.transpose() * &d) * &x.conj();
    let b = feldman_hajek_b(&g, &q_gram)?;
    Ok(Straightened { q_gram, p_gram: g, sigma_min, b })
}
