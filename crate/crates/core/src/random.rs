//! Random instances for property tests, acceptance runs and CLI sweeps.
//!
//! Only `rand_core::RngCore` is required so the samplers stay usable
//! without `std`. Gaussians come from Box–Muller on 53-bit uniforms.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand_core::RngCore;

use crate::cpdyn::{CpMap, GklsGenerator};
use crate::eigenlists::EigenvalueList;
use crate::matrix::ComplexMatrix;
use crate::opalg::DensityMatrix;
use crate::C64;

/// Uniform sample in `[0, 1)`.
pub fn uniform<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

pub fn uniform_range<R: RngCore + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * uniform(rng)
}

/// Uniform integer in `0..n`.
pub fn index<R: RngCore + ?Sized>(rng: &mut R, n: usize) -> usize {
    ((uniform(rng) * n as f64) as usize).min(n.saturating_sub(1))
}

pub fn standard_normal<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u1 = uniform(rng);
        if u1 > 0.0 {
            let u2 = uniform(rng);
            return (-2.0 * u1.ln()).sqrt() * (core::f64::consts::TAU * u2).cos();
        }
    }
}

/// Complex Gaussian with `E|z|² = 1`.
pub fn complex_normal<R: RngCore + ?Sized>(rng: &mut R) -> C64 {
    let s = core::f64::consts::FRAC_1_SQRT_2;
    C64::new(standard_normal(rng) * s, standard_normal(rng) * s)
}

pub fn complex_vector<R: RngCore + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    (0..n).map(|_| complex_normal(rng)).collect()
}

/// Ginibre matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: RngCore + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

pub fn hermitian<R: RngCore + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    ginibre(rng, n, n).hermitian_part()
}

/// Haar-distributed unitary via Gram–Schmidt on a Ginibre matrix.
pub fn unitary<R: RngCore + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    isometry(rng, n, n)
}

/// Random isometry `ℂ^cols → ℂ^rows` (orthonormal columns), `rows ≥ cols`.
pub fn isometry<R: RngCore + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    assert!(rows >= cols, "isometry needs rows >= cols");
    loop {
        let g = ginibre(rng, rows, cols);
        let mut q: Vec<Vec<C64>> = Vec::with_capacity(cols);
        let mut ok = true;
        for j in 0..cols {
            let mut v = g.column(j);
            // Two passes of modified Gram–Schmidt.
            for _ in 0..2 {
                for prev in &q {
                    let proj: C64 = prev.iter().zip(&v).map(|(p, x)| p.conj() * x).sum();
                    for (x, p) in v.iter_mut().zip(prev) {
                        *x -= proj * p;
                    }
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-8 {
                ok = false;
                break;
            }
            v.iter_mut().for_each(|x| *x /= norm);
            q.push(v);
        }
        if ok {
            return ComplexMatrix::from_fn(rows, cols, |r, c| q[c][r]);
        }
    }
}

/// Full-rank density matrix `W W* / tr(W W*)`.
pub fn density<R: RngCore + ?Sized>(rng: &mut R, n: usize) -> DensityMatrix {
    let w = ginibre(rng, n, n);
    let p = &w * &w.adjoint();
    let tr = p.trace().re;
    DensityMatrix::new_unchecked(p.scale_real(1.0 / tr).hermitian_part())
}

/// Unital CP map on `M_n` with `r` Kraus operators, cut from a random
/// isometry `ℂ^n → ℂ^{n r}` so that `Σ K*K = 1`.
pub fn unital_cp_map<R: RngCore + ?Sized>(rng: &mut R, n: usize, r: usize) -> CpMap {
    let v = isometry(rng, n * r, n);
    let kraus = (0..r).map(|k| v.block(k * n, 0, n, n)).collect();
    CpMap::new_unchecked(n, kraus)
}

/// GKLS generator with a random Hamiltonian and `jumps` random jump
/// operators, each scaled by `rate`.
pub fn gkls_generator<R: RngCore + ?Sized>(rng: &mut R, n: usize, jumps: usize, rate: f64) -> GklsGenerator {
    let h = hermitian(rng, n);
    let vs = (0..jumps).map(|_| ginibre(rng, n, n).scale_real(rate.sqrt() / (n as f64).sqrt())).collect();
    GklsGenerator::new(h, vs).expect("random generator has consistent shapes")
}

/// Normalized eigenvalue list of length `n` with strictly positive entries
/// bounded below by `floor / n`.
pub fn positive_list<R: RngCore + ?Sized>(rng: &mut R, n: usize, floor: f64) -> EigenvalueList {
    let raw: Vec<f64> = (0..n).map(|_| floor + uniform(rng)).collect();
    let sum: f64 = raw.iter().sum();
    EigenvalueList::normalized(raw.iter().map(|x| x / sum).collect()).expect("positive weights normalize")
}
