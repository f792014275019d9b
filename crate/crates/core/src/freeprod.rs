//! The *-semigroup `S` of time words with distinct neighbors, and
//! finitely supported sections of the fibered algebra over it.
//!
//! Times are exact rationals so that the neighbor test and the boundary
//! merge in `s·t` are decided exactly. A [`Section`] stores, for each word,
//! a formal sum of elementary tensors `a₁ ⊗ ⋯ ⊗ a_k`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::moments::{moment, Semigroup};

pub type Time = Ratio<i64>;

/// A nonempty sequence of nonnegative rational times with no equal
/// adjacent entries.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FreeWord(Vec<Time>);

impl FreeWord {
    pub fn new(times: Vec<Time>) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::Empty("words have at least one letter"));
        }
        if let Some(t) = times.iter().find(|t| **t < Time::zero()) {
            return Err(Error::NegativeTime(t.to_f64().unwrap_or(f64::NAN)));
        }
        if times.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::AdjacentRepeat);
        }
        Ok(Self(times))
    }

    /// Word from integer times.
    pub fn from_ints(times: &[i64]) -> Result<Self> {
        Self::new(times.iter().map(|&t| Time::from_integer(t)).collect())
    }

    pub fn single(t: Time) -> Result<Self> {
        Self::new(alloc::vec![t])
    }

    pub fn times(&self) -> &[Time] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Time {
        self.0[0]
    }

    pub fn last(&self) -> Time {
        self.0[self.0.len() - 1]
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(|t| t.to_f64().unwrap_or(f64::NAN)).collect()
    }

    /// Whether `self·other` merges the boundary letters.
    pub fn merges_with(&self, other: &FreeWord) -> bool {
        self.last() == other.first()
    }
}

/// Conditional concatenation.
pub fn word_mul(s: &FreeWord, t: &FreeWord) -> FreeWord {
    let skip = usize::from(s.merges_with(t));
    let mut out = s.0.clone();
    out.extend_from_slice(&t.0[skip..]);
    FreeWord(out)
}

pub fn word_star(s: &FreeWord) -> FreeWord {
    let mut out = s.0.clone();
    out.reverse();
    FreeWord(out)
}

/// Translates every letter by `t ≥ 0`.
pub fn word_shift(s: &FreeWord, t: Time) -> Result<FreeWord> {
    if t < Time::zero() {
        return Err(Error::NegativeTime(t.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(FreeWord(s.0.iter().map(|x| x + t).collect()))
}

/// An elementary tensor `a₁ ⊗ ⋯ ⊗ a_k`.
pub type Tensor = Vec<ComplexMatrix>;

/// Finitely supported section: word ↦ sum of elementary tensors.
#[derive(Clone, Debug, PartialEq)]
pub struct Section {
    dim: usize,
    terms: BTreeMap<FreeWord, Vec<Tensor>>,
}

impl Section {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: BTreeMap::new() }
    }

    /// `δ_w · a₁ ⊗ ⋯ ⊗ a_k`.
    pub fn elementary(word: FreeWord, tensor: Tensor) -> Result<Self> {
        let dim = tensor.first().map(|a| a.rows()).ok_or(Error::Empty("tensor has no factors"))?;
        let mut s = Self::zero(dim);
        s.push(word, tensor)?;
        Ok(s)
    }

    /// `θ_t(a) = δ_(t) · a`.
    pub fn theta(t: Time, a: ComplexMatrix) -> Result<Self> {
        Self::elementary(FreeWord::single(t)?, alloc::vec![a])
    }

    /// `θ₀(a)`.
    pub fn theta0(a: ComplexMatrix) -> Self {
        Self::theta(Time::zero(), a).expect("time zero is a valid word")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FreeWord, &[Tensor])> {
        self.terms.iter().map(|(w, t)| (w, t.as_slice()))
    }

    pub fn num_words(&self) -> usize {
        self.terms.len()
    }

    /// Adds one elementary tensor over `word`.
    pub fn push(&mut self, word: FreeWord, tensor: Tensor) -> Result<()> {
        if tensor.len() != word.len() {
            return Err(Error::LengthMismatch { left: word.len(), right: tensor.len() });
        }
        for a in &tensor {
            if a.rows() != self.dim || a.cols() != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, found: a.rows() });
            }
        }
        self.terms.entry(word).or_default().push(tensor);
        Ok(())
    }

    pub fn add(&self, other: &Section) -> Result<Section> {
        self.require_dim(other)?;
        let mut out = self.clone();
        for (w, ts) in &other.terms {
            out.terms.entry(w.clone()).or_default().extend(ts.iter().cloned());
        }
        Ok(out)
    }

    /// Multiplies every tensor by `s` (applied to its first factor).
    pub fn scale(&self, s: crate::C64) -> Section {
        let mut out = self.clone();
        for ts in out.terms.values_mut() {
            for t in ts {
                t[0] = t[0].scale(s);
            }
        }
        out
    }

    /// `Σ_words Σ_tensors ∏ ‖aᵢ‖`, an upper bound for the ℓ¹ norm.
    pub fn l1_bound(&self) -> f64 {
        self.terms.values().flatten().map(|t| t.iter().map(|a| a.op_norm()).product::<f64>()).sum()
    }

    /// Dense fiber of each word: the sum of `a₁ ⊗ ⋯ ⊗ a_k` as Kronecker
    /// products.
    pub fn fibers(&self) -> BTreeMap<FreeWord, ComplexMatrix> {
        self.terms
            .iter()
            .map(|(w, ts)| {
                let side = self.dim.pow(w.len() as u32);
                let mut acc = ComplexMatrix::zeros(side, side);
                for t in ts {
                    let k = t.iter().skip(1).fold(t[0].clone(), |m, a| m.kron(a));
                    acc += &k;
                }
                (w.clone(), acc)
            })
            .collect()
    }

    /// Largest entrywise difference between the dense fibers of two
    /// sections, treating absent words as zero.
    pub fn max_diff(&self, other: &Section) -> f64 {
        let a = self.fibers();
        let b = other.fibers();
        let mut worst: f64 = 0.0;
        for (w, fa) in &a {
            worst = worst.max(match b.get(w) {
                Some(fb) => fa.max_diff(fb),
                None => fa.max_abs(),
            });
        }
        for (w, fb) in &b {
            if !a.contains_key(w) {
                worst = worst.max(fb.max_abs());
            }
        }
        worst
    }

    fn require_dim(&self, other: &Section) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }
}

fn tensor_mul(a: &Tensor, b: &Tensor, merge: bool) -> Tensor {
    let mut out = a.clone();
    if merge {
        let last = out.pop().expect("tensors are nonempty");
        out.push(&last * &b[0]);
        out.extend(b[1..].iter().cloned());
    } else {
        out.extend(b.iter().cloned());
    }
    out
}

/// Convolution product `(f*g)(ν) = Σ_{λ·μ=ν} f(λ)·g(μ)`.
pub fn section_mul(f: &Section, g: &Section) -> Result<Section> {
    f.require_dim(g)?;
    let mut out = Section::zero(f.dim);
    for (wf, tf) in &f.terms {
        for (wg, tg) in &g.terms {
            let merge = wf.merges_with(wg);
            let w = word_mul(wf, wg);
            let slot = out.terms.entry(w).or_default();
            for a in tf {
                for b in tg {
                    slot.push(tensor_mul(a, b, merge));
                }
            }
        }
    }
    Ok(out)
}

/// `f*(μ) = f(μ*)*`: reverses words and maps `a₁ ⊗ ⋯ ⊗ a_k` to
/// `a_k* ⊗ ⋯ ⊗ a₁*`.
pub fn section_star(f: &Section) -> Section {
    let mut out = Section::zero(f.dim);
    for (w, ts) in &f.terms {
        let slot = out.terms.entry(word_star(w)).or_default();
        for t in ts {
            slot.push(t.iter().rev().map(|a| a.adjoint()).collect());
        }
    }
    out
}

/// `σ_t`: translates every word by `t ≥ 0`.
pub fn shift_section(f: &Section, t: Time) -> Result<Section> {
    let mut out = Section::zero(f.dim);
    for (w, ts) in &f.terms {
        out.terms.entry(word_shift(w, t)?).or_default().extend(ts.iter().cloned());
    }
    Ok(out)
}

/// `E₀`, the linear extension of `δ_(t₁…t_k)·a₁⊗⋯⊗a_k ↦ [t₁,…,t_k; a₁,…,a_k]`.
pub fn expect_e0<S: Semigroup + ?Sized>(f: &Section, sg: &S) -> Result<ComplexMatrix> {
    if sg.dim() != f.dim {
        return Err(Error::DimensionMismatch { expected: f.dim, found: sg.dim() });
    }
    let mut acc = ComplexMatrix::zeros(f.dim, f.dim);
    for (w, ts) in &f.terms {
        let times = w.to_f64();
        for t in ts {
            acc += &moment(sg, &times, t)?;
        }
    }
    Ok(acc)
}

/// Block matrix whose `(j, i)` block is `aⱼ* E₀(fⱼ* * fᵢ) aᵢ`.
///
/// Complete positivity of `E₀` makes this positive semidefinite.
pub fn positivity_block<S: Semigroup + ?Sized>(fs: &[Section], mats: &[ComplexMatrix], sg: &S) -> Result<ComplexMatrix> {
    if fs.len() != mats.len() {
        return Err(Error::LengthMismatch { left: fs.len(), right: mats.len() });
    }
    let n = sg.dim();
    let m = fs.len();
    let stars: Vec<Section> = fs.iter().map(section_star).collect();
    let mut out = ComplexMatrix::zeros(n * m, n * m);
    for j in 0..m {
        for i in 0..m {
            let e = expect_e0(&section_mul(&stars[j], &fs[i])?, sg)?;
            let block = &(&mats[j].adjoint() * &e) * &mats[i];
            out.set_block(j * n, i * n, &block);
        }
    }
    Ok(out)
}
