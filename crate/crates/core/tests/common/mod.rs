#![allow(dead_code)]

use ncdyn_core::cpdyn::CpMap;
use ncdyn_core::freeprod::{FreeWord, Section, Time};
use ncdyn_core::linalg;
use ncdyn_core::random;
use ncdyn_core::{ComplexMatrix, C64};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn matrix(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    random::ginibre(rng, n, n).scale_real(1.0 / (n as f64).sqrt())
}

/// Time word of length `1..=max_len` over the letters `0..=max_time`, with
/// occasional half-integer letters.
pub fn word(rng: &mut ChaCha8Rng, max_len: usize, max_time: i64) -> FreeWord {
    let len = rng.gen_range(1..=max_len);
    let mut times: Vec<Time> = Vec::with_capacity(len);
    while times.len() < len {
        let t = if rng.gen_bool(0.2) {
            Time::new(2 * rng.gen_range(0..max_time) + 1, 2)
        } else {
            Time::from_integer(rng.gen_range(0..=max_time))
        };
        if times.last() != Some(&t) {
            times.push(t);
        }
    }
    FreeWord::new(times).unwrap()
}

/// Sum of `terms` random elementary tensors over random words.
pub fn section(rng: &mut ChaCha8Rng, n: usize, terms: usize, max_len: usize, max_time: i64) -> Section {
    let mut s = Section::zero(n);
    for _ in 0..terms {
        let w = word(rng, max_len, max_time);
        let t = (0..w.len()).map(|_| matrix(rng, n)).collect();
        s.push(w, t).unwrap();
    }
    s
}

/// Unital CP map on `M_n` (`r` Kraus operators) for which the projection
/// onto the first `m` basis vectors is coinvariant.
pub fn coinvariant_map(rng: &mut ChaCha8Rng, n: usize, m: usize, r: usize) -> (CpMap, ComplexMatrix) {
    let raw: Vec<ComplexMatrix> = (0..r)
        .map(|_| {
            let mut k = random::ginibre(rng, n, n);
            for i in m..n {
                for j in 0..m {
                    k[(i, j)] = C64::new(0.0, 0.0);
                }
            }
            k
        })
        .collect();
    let sum = raw.iter().fold(ComplexMatrix::zeros(n, n), |acc, k| &acc + &(&k.adjoint() * k));
    let r_inv = linalg::inverse(&linalg::cholesky(&sum.hermitian_part()).unwrap()).unwrap();
    let kraus = raw.iter().map(|k| k * &r_inv).collect();
    let diag: Vec<f64> = (0..n).map(|i| if i < m { 1.0 } else { 0.0 }).collect();
    (CpMap::new(n, kraus).unwrap(), ComplexMatrix::from_real_diag(&diag))
}

/// Nondecreasing integer tuple of length `1..=max_k` with entries `≤ t_max`.
pub fn sorted_ints(rng: &mut ChaCha8Rng, max_k: usize, t_max: u32) -> Vec<u32> {
    let k = rng.gen_range(1..=max_k);
    let mut t: Vec<u32> = (0..k).map(|_| rng.gen_range(0..=t_max)).collect();
    t.sort_unstable();
    t
}
