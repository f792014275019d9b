//! Eigenvalue lists: nonincreasing sequences of nonnegative reals with
//! finite sum, stored as a finite prefix followed by implicit zeros.
//!
//! The central quantity is the ℓ¹ distance between the tensor squares of
//! two lists, which bounds from below how far apart the past and future
//! absorbing states of an interaction must be.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Tolerance on `Σλ = 1` for normalized lists.
pub const NORMALIZATION_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct EigenvalueList {
    values: Vec<f64>,
    normalized: bool,
}

impl EigenvalueList {
    /// Builds a list from arbitrary nonnegative values, sorting them
    /// nonincreasingly.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidList("non-finite entry"));
        }
        if values.iter().any(|&x| x < 0.0) {
            return Err(Error::InvalidList("negative entry"));
        }
        values.sort_by(|a, b| b.total_cmp(a));
        let sum: f64 = values.iter().sum();
        Ok(Self { values, normalized: (sum - 1.0).abs() <= NORMALIZATION_TOL })
    }

    /// Like [`EigenvalueList::new`] but additionally requires `Σλ = 1`.
    pub fn normalized(values: Vec<f64>) -> Result<Self> {
        let list = Self::new(values)?;
        list.require_normalized()?;
        Ok(list)
    }

    /// `p` copies of `1/p`.
    pub fn uniform(p: usize) -> Self {
        let values = alloc::vec![1.0 / p as f64; p];
        let sum: f64 = values.iter().sum();
        Self { values, normalized: (sum - 1.0).abs() <= NORMALIZATION_TOL }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Entry `k`, with zeros past the stored prefix.
    pub fn get(&self, k: usize) -> f64 {
        self.values.get(k).copied().unwrap_or(0.0)
    }

    /// Number of strictly positive entries.
    pub fn support(&self) -> usize {
        self.values.iter().take_while(|&&x| x > 0.0).count()
    }

    fn require_normalized(&self) -> Result<()> {
        if self.normalized {
            Ok(())
        } else {
            Err(Error::NotNormalized { sum: self.sum() })
        }
    }
}

/// Eigenvalue list of `A ⊗ B`: all products `λᵢμⱼ`, rearranged
/// nonincreasingly.
///
/// With `max_terms = None` every product is kept. A bound may only drop
/// zero products; dropping a nonzero one is a [`Error::TruncationLoss`].
pub fn tensor_product(a: &EigenvalueList, b: &EigenvalueList, max_terms: Option<usize>) -> Result<EigenvalueList> {
    let mut products: Vec<f64> = Vec::with_capacity(a.len() * b.len());
    for &x in a.values() {
        for &y in b.values() {
            products.push(x * y);
        }
    }
    products.sort_by(|p, q| q.total_cmp(p));
    if let Some(m) = max_terms {
        if products.len() > m {
            if products[m] > 0.0 {
                return Err(Error::TruncationLoss { max_terms: m });
            }
            products.truncate(m);
        }
    }
    let sum: f64 = products.iter().sum();
    Ok(EigenvalueList { values: products, normalized: (sum - 1.0).abs() <= NORMALIZATION_TOL })
}

/// `Σₖ |λₖ − λ′ₖ|`, padding the shorter list with zeros.
pub fn l1_distance(a: &EigenvalueList, b: &EigenvalueList) -> f64 {
    let n = a.len().max(b.len());
    (0..n).map(|k| (a.get(k) - b.get(k)).abs()).sum()
}

/// `‖Λ₋ ⊗ Λ₋ − Λ₊ ⊗ Λ₊‖₁` for two normalized lists: the lower bound on the
/// distance between the past and future states of an interaction.
pub fn interaction_lower_bound(minus: &EigenvalueList, plus: &EigenvalueList) -> Result<f64> {
    Ok(interaction_report(minus, plus)?.bound)
}

/// The bound together with the two tensor squares it was computed from.
#[derive(Clone, Debug)]
pub struct InteractionReport {
    pub bound: f64,
    pub tensor_minus: EigenvalueList,
    pub tensor_plus: EigenvalueList,
}

pub fn interaction_report(minus: &EigenvalueList, plus: &EigenvalueList) -> Result<InteractionReport> {
    minus.require_normalized()?;
    plus.require_normalized()?;
    let tensor_minus = tensor_product(minus, minus, None)?;
    let tensor_plus = tensor_product(plus, plus, None)?;
    let bound = l1_distance(&tensor_minus, &tensor_plus);
    Ok(InteractionReport { bound, tensor_minus, tensor_plus })
}
