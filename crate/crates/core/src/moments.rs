//! Moment polynomials `[t₁,…,t_k; a₁,…,a_k]` of a semigroup `{P_t}`.
//!
//! They are the unique multilinear maps satisfying
//!
//! * shift: `P_s([t̄; ā]) = [t̄ + s; ā]`;
//! * split: if `t_ℓ = 0` then `[t̄; ā] = [t₁..t_{ℓ−1}; a₁..a_{ℓ−1}] · a_ℓ · [t_{ℓ+1}..t_k; a_{ℓ+1}..a_k]`,
//!   with the empty bracket equal to `1`.
//!
//! [`moment`] evaluates them by that recursion, pulling out the minimum
//! time and then splitting at the leftmost zero. [`ordered_moment`] is the
//! closed form on nondecreasing tuples and serves as an independent check.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Times within this distance of the current minimum are treated as equal to it.
pub const TIME_TOL: f64 = 1e-12;

/// A one-parameter semigroup of linear maps on `M_n`, `P_{s+t} = P_s ∘ P_t`,
/// `P_0 = id`. Implementations must be pure.
pub trait Semigroup {
    fn dim(&self) -> usize;
    fn apply(&self, t: f64, a: &ComplexMatrix) -> Result<ComplexMatrix>;
}

impl<S: Semigroup + ?Sized> Semigroup for &S {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn apply(&self, t: f64, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        (**self).apply(t, a)
    }
}

/// Semigroup given by an evaluator closure.
pub struct FnSemigroup<F> {
    dim: usize,
    eval: F,
}

impl<F> FnSemigroup<F>
where
    F: Fn(f64, &ComplexMatrix) -> Result<ComplexMatrix>,
{
    pub fn new(dim: usize, eval: F) -> Self {
        Self { dim, eval }
    }
}

impl<F> Semigroup for FnSemigroup<F>
where
    F: Fn(f64, &ComplexMatrix) -> Result<ComplexMatrix>,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, t: f64, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        (self.eval)(t, a)
    }
}

/// A finite tuple of nonnegative times, any order, repeats allowed.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeTuple(Vec<f64>);

impl TimeTuple {
    pub fn new(times: Vec<f64>) -> Result<Self> {
        if let Some(&t) = times.iter().find(|t| !(**t >= 0.0) || !t.is_finite()) {
            return Err(Error::NegativeTime(t));
        }
        Ok(Self(times))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn shifted(&self, s: f64) -> Self {
        Self(self.0.iter().map(|t| t + s).collect())
    }

    pub fn reversed(&self) -> Self {
        Self(self.0.iter().rev().copied().collect())
    }
}

fn check_inputs(dim: usize, times: &[f64], mats: &[ComplexMatrix]) -> Result<()> {
    if times.len() != mats.len() {
        return Err(Error::LengthMismatch { left: times.len(), right: mats.len() });
    }
    if times.is_empty() {
        return Err(Error::Empty("moment needs at least one time"));
    }
    if let Some(&t) = times.iter().find(|t| !(**t >= 0.0)) {
        return Err(Error::NegativeTime(t));
    }
    for m in mats {
        if m.rows() != dim || m.cols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: m.rows() });
        }
    }
    Ok(())
}

/// `[t̄; ā]`, splitting at the leftmost zero.
pub fn moment<S: Semigroup + ?Sized>(sg: &S, times: &[f64], mats: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    moment_with_split(sg, times, mats, |zeros| zeros[0])
}

/// `[t̄; ā]` where `pick` chooses which zero to split at (it receives the
/// zero positions in increasing order and returns one of them). Every
/// choice yields the same value; this entry point exists so that can be
/// checked.
pub fn moment_with_split<S, F>(sg: &S, times: &[f64], mats: &[ComplexMatrix], pick: F) -> Result<ComplexMatrix>
where
    S: Semigroup + ?Sized,
    F: Fn(&[usize]) -> usize,
{
    check_inputs(sg.dim(), times, mats)?;
    moment_rec(sg, times, mats, &pick)
}

fn moment_rec<S, F>(sg: &S, times: &[f64], mats: &[ComplexMatrix], pick: &F) -> Result<ComplexMatrix>
where
    S: Semigroup + ?Sized,
    F: Fn(&[usize]) -> usize,
{
    if times.is_empty() {
        return Ok(ComplexMatrix::identity(sg.dim()));
    }
    let min = times.iter().copied().fold(f64::INFINITY, f64::min);
    if min > TIME_TOL {
        let shifted: Vec<f64> = times.iter().map(|&t| if t - min <= TIME_TOL { 0.0 } else { t - min }).collect();
        let inner = moment_rec(sg, &shifted, mats, pick)?;
        return sg.apply(min, &inner);
    }
    let zeros: Vec<usize> = (0..times.len()).filter(|&i| times[i] <= TIME_TOL).collect();
    let l = pick(&zeros);
    let left = moment_rec(sg, &times[..l], &mats[..l], pick)?;
    let right = moment_rec(sg, &times[l + 1..], &mats[l + 1..], pick)?;
    Ok(&(&left * &mats[l]) * &right)
}

/// `P_{t₁}(a₁ P_{t₂−t₁}(a₂ ⋯ P_{t_k−t_{k−1}}(a_k)⋯))` for nondecreasing times.
pub fn ordered_moment<S: Semigroup + ?Sized>(sg: &S, times: &[f64], mats: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    check_inputs(sg.dim(), times, mats)?;
    if times.windows(2).any(|w| w[1] < w[0] - TIME_TOL) {
        return Err(Error::NotSorted);
    }
    let k = times.len();
    let mut x = mats[k - 1].clone();
    for j in (0..k).rev() {
        let gap = if j == 0 { times[0] } else { (times[j] - times[j - 1]).max(0.0) };
        if gap > TIME_TOL {
            x = sg.apply(gap, &x)?;
        }
        if j > 0 {
            x = &mats[j - 1] * &x;
        }
    }
    Ok(x)
}

/// Parenthesization produced by the recursion, e.g.
/// `P2(a·P1(P3(b)·c·P1(d)))` for times `2,6,3,4` and names `a,b,c,d`.
pub fn render(times: &[f64], names: &[&str]) -> Result<String> {
    if times.len() != names.len() {
        return Err(Error::LengthMismatch { left: times.len(), right: names.len() });
    }
    if times.is_empty() {
        return Err(Error::Empty("moment needs at least one time"));
    }
    if let Some(&t) = times.iter().find(|t| !(**t >= 0.0)) {
        return Err(Error::NegativeTime(t));
    }
    Ok(render_rec(times, names))
}

fn render_rec(times: &[f64], names: &[&str]) -> String {
    if times.is_empty() {
        return String::new();
    }
    let min = times.iter().copied().fold(f64::INFINITY, f64::min);
    if min > TIME_TOL {
        let shifted: Vec<f64> = times.iter().map(|&t| if t - min <= TIME_TOL { 0.0 } else { t - min }).collect();
        return format!("P{}({})", min, render_rec(&shifted, names));
    }
    let l = times.iter().position(|&t| t <= TIME_TOL).expect("minimum is a zero");
    let parts = [render_rec(&times[..l], &names[..l]), names[l].to_string(), render_rec(&times[l + 1..], &names[l + 1..])];
    parts.iter().filter(|s| !s.is_empty()).cloned().collect::<Vec<_>>().join("·")
}

/// Default slot names `a, b, c, …`, then `a27, a28, …` past the alphabet.
pub fn default_names(k: usize) -> Vec<String> {
    (0..k).map(|i| if i < 26 { ((b'a' + i as u8) as char).to_string() } else { format!("a{}", i + 1) }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cpdyn::{GklsGenerator, GklsSemigroup};
    use crate::C64;
    use alloc::vec;

    fn sg() -> GklsSemigroup {
        let h = ComplexMatrix::new(2, 2, vec![C64::new(0.5, 0.0), C64::new(0.1, 0.2), C64::new(0.1, -0.2), C64::new(-0.3, 0.0)]).unwrap();
        let v = ComplexMatrix::new(2, 2, vec![C64::new(0.2, 0.0), C64::new(0.6, 0.0), C64::new(0.0, 0.1), C64::new(0.3, 0.0)]).unwrap();
        GklsSemigroup::new(&GklsGenerator::new(h, vec![v]).unwrap())
    }

    fn mats(k: usize) -> Vec<ComplexMatrix> {
        (0..k)
            .map(|i| ComplexMatrix::from_fn(2, 2, |r, c| C64::new((i + r) as f64 * 0.3 - 0.2, (c as f64 - 0.5) * (i as f64 + 1.0))))
            .collect()
    }

    #[test]
    fn linear_cases() {
        let s = sg();
        let a = mats(1);
        assert_eq!(moment(&s, &[0.0], &a).unwrap(), a[0]);
        let direct = s.apply(1.7, &a[0]).unwrap();
        assert!(moment(&s, &[1.7], &a).unwrap().max_diff(&direct) < 1e-15);
        assert!(ordered_moment(&s, &[1.7], &a).unwrap().max_diff(&direct) < 1e-15);
    }

    #[test]
    fn worked_examples_match_direct_expressions() {
        let s = sg();
        let m = mats(4);
        let (a, b, c, d) = (&m[0], &m[1], &m[2], &m[3]);
        let p = |t: f64, x: &ComplexMatrix| s.apply(t, x).unwrap();
        // P2(a P1(P3(b) c P1(d)))
        let want = p(2.0, &(a * &p(1.0, &(&(&p(3.0, b) * c) * &p(1.0, d)))));
        let got = moment(&s, &[2.0, 6.0, 3.0, 4.0], &m).unwrap();
        assert!(got.max_diff(&want) < 1e-12);
        // P2(P2(P2(a) b) c P1(d))
        let want = p(2.0, &(&(&p(2.0, &(&p(2.0, a) * b)) * c) * &p(1.0, d)));
        let got = moment(&s, &[6.0, 4.0, 2.0, 3.0], &m).unwrap();
        assert!(got.max_diff(&want) < 1e-12);
    }

    #[test]
    fn zero_gap_multiplies() {
        let s = sg();
        let m = mats(2);
        let want = s.apply(1.0, &(&m[0] * &m[1])).unwrap();
        assert!(ordered_moment(&s, &[1.0, 1.0], &m).unwrap().max_diff(&want) < 1e-14);
        assert!(moment(&s, &[1.0, 1.0], &m).unwrap().max_diff(&want) < 1e-14);
    }

    #[test]
    fn rendering() {
        assert_eq!(render(&[2.0, 6.0, 3.0, 4.0], &["a", "b", "c", "d"]).unwrap(), "P2(a·P1(P3(b)·c·P1(d)))");
        assert_eq!(render(&[6.0, 4.0, 2.0, 3.0], &["a", "b", "c", "d"]).unwrap(), "P2(P2(P2(a)·b)·c·P1(d))");
        assert_eq!(render(&[0.0], &["a"]).unwrap(), "a");
        assert_eq!(render(&[0.5, 0.5], &["x", "y"]).unwrap(), "P0.5(x·y)");
    }

    #[test]
    fn input_errors() {
        let s = sg();
        assert!(matches!(moment(&s, &[1.0, 2.0], &mats(1)), Err(Error::LengthMismatch { .. })));
        assert!(matches!(moment(&s, &[1.0], &[ComplexMatrix::identity(3)]), Err(Error::DimensionMismatch { .. })));
        assert_eq!(ordered_moment(&s, &[2.0, 1.0], &mats(2)).unwrap_err(), Error::NotSorted);
        assert!(matches!(moment(&s, &[-1.0], &mats(1)), Err(Error::NegativeTime(_))));
    }

    #[test]
    fn default_names_alphabet() {
        assert_eq!(default_names(3), ["a", "b", "c"]);
        assert_eq!(default_names(28)[27], "a28");
    }
}
