//! Fock states of `M = sum_alpha M_alpha` and the untwisted Heisenberg action.
//!
//! A basis vector `a^{i1}(-k1) ... a^{ir}(-kr) 1 (x) e^alpha` is a
//! [`FockMonomial`]: a module label plus a canonically sorted multiset of
//! creation parts. Colors are zero-based in code and one-based in text.

mod modes;
mod vertex;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Sub};
use std::sync::Arc;

pub use modes::{alpha_mode, apply_mode, virasoro_mode};
pub use vertex::{field_coefficient, vertex_mode};

use crate::error::{Error, Result};
use crate::scalars::{GaussRat, Scalar};

/// A module label `alpha` in `Q(i)^l`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(Arc<[GaussRat]>);

impl Label {
    pub fn new(components: Vec<GaussRat>) -> Label {
        Label(components.into())
    }

    pub fn zero(rank: usize) -> Label {
        Label::new(vec![GaussRat::zero(); rank])
    }

    /// A rank-one label.
    pub fn scalar(value: GaussRat) -> Label {
        Label::new(vec![value])
    }

    pub fn from_ints(values: &[i64]) -> Label {
        Label::new(values.iter().map(|&v| GaussRat::int(v)).collect())
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[GaussRat] {
        &self.0
    }

    pub fn component(&self, i: usize) -> &GaussRat {
        &self.0[i]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(GaussRat::is_zero)
    }

    /// The Euclidean pairing `alpha . beta = sum_i alpha^i beta^i` (no conjugation).
    pub fn dot(&self, other: &Label) -> GaussRat {
        self.0.iter().zip(other.0.iter()).fold(GaussRat::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn norm2(&self) -> GaussRat {
        self.dot(self)
    }

    pub fn neg(&self) -> Label {
        Label::new(self.0.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, c: &GaussRat) -> Label {
        Label::new(self.0.iter().map(|x| x * c).collect())
    }

    pub fn check_rank(&self, rank: usize) -> Result<()> {
        if self.rank() == rank {
            Ok(())
        } else {
            Err(Error::RankMismatch { expected: rank, got: self.rank() })
        }
    }
}

impl<'a> Add<&'a Label> for &'a Label {
    type Output = Label;
    fn add(self, rhs: &'a Label) -> Label {
        Label::new(self.0.iter().zip(rhs.0.iter()).map(|(a, b)| a + b).collect())
    }
}

impl<'a> Sub<&'a Label> for &'a Label {
    type Output = Label;
    fn sub(self, rhs: &'a Label) -> Label {
        Label::new(self.0.iter().zip(rhs.0.iter()).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

/// One creation operator `a^color(-level)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Part {
    pub color: usize,
    pub level: u32,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FockMonomial {
    label: Label,
    parts: Vec<Part>,
}

impl FockMonomial {
    pub fn new(label: Label, mut parts: Vec<Part>) -> FockMonomial {
        debug_assert!(parts.iter().all(|p| p.level > 0 && p.color < label.rank()));
        parts.sort_unstable();
        FockMonomial { label, parts }
    }

    pub fn vacuum(label: Label) -> FockMonomial {
        FockMonomial { label, parts: Vec::new() }
    }

    pub fn label(&self) -> &Label {
        &self.label
    }

    pub fn parts(&self) -> &[Part] {
        &self.parts
    }

    /// Sum of creation levels: the integer part of the `L(0)` weight.
    pub fn depth(&self) -> usize {
        self.parts.iter().map(|p| p.level as usize).sum()
    }

    /// `L(0)` eigenvalue `alpha.alpha / 2 + depth`.
    pub fn weight(&self) -> GaussRat {
        self.label.norm2().checked_div(&GaussRat::int(2)).unwrap().add_int(self.depth() as i64)
    }

    pub fn with_label(&self, label: Label) -> FockMonomial {
        FockMonomial { label, parts: self.parts.clone() }
    }

    pub(crate) fn insert(&self, part: Part) -> FockMonomial {
        let mut parts = self.parts.clone();
        let pos = parts.partition_point(|p| *p < part);
        parts.insert(pos, part);
        FockMonomial { label: self.label.clone(), parts }
    }

    /// Removes one copy of `part`, returning the multiplicity it had.
    pub(crate) fn remove(&self, part: Part) -> Option<(usize, FockMonomial)> {
        let count = self.parts.iter().filter(|p| **p == part).count();
        if count == 0 {
            return None;
        }
        let mut parts = self.parts.clone();
        let pos = parts.iter().position(|p| *p == part).unwrap();
        parts.remove(pos);
        Some((count, FockMonomial { label: self.label.clone(), parts }))
    }
}

impl fmt::Display for FockMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.parts {
            write!(f, "a[{},-{}]", p.color + 1, p.level)?;
        }
        write!(f, "|{}>", self.label)
    }
}

impl fmt::Debug for FockMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A finite linear combination of Fock monomials with [`Scalar`] coefficients.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct State {
    terms: BTreeMap<FockMonomial, Scalar>,
}

impl State {
    pub fn zero() -> State {
        State::default()
    }

    /// `1 (x) e^label`.
    pub fn vacuum(label: Label) -> State {
        State::from(FockMonomial::vacuum(label))
    }

    pub fn term(mono: FockMonomial, coeff: Scalar) -> State {
        let mut s = State::zero();
        s.add_term(mono, coeff);
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FockMonomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, mono: &FockMonomial) -> Scalar {
        self.terms.get(mono).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, mono: FockMonomial, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_assign_ref(&coeff);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &State) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn add_scaled(&mut self, other: &State, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    pub fn scale(&self, c: &Scalar) -> State {
        let mut out = State::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn scale_gauss(&self, c: &GaussRat) -> State {
        if c.is_zero() {
            return State::zero();
        }
        State { terms: self.terms.iter().map(|(m, v)| (m.clone(), v.scale(c))).collect() }
    }

    /// The common label of all terms; `None` for the zero state or mixed labels.
    pub fn label(&self) -> Option<&Label> {
        let mut it = self.terms.keys().map(FockMonomial::label);
        let first = it.next()?;
        it.all(|l| l == first).then_some(first)
    }

    pub fn homogeneous_label(&self) -> Result<Label> {
        self.label().cloned().ok_or(Error::Inhomogeneous)
    }

    pub fn max_depth(&self) -> usize {
        self.terms.keys().map(FockMonomial::depth).max().unwrap_or(0)
    }

    /// Splits the state by module label.
    pub fn by_label(&self) -> BTreeMap<Label, State> {
        let mut out: BTreeMap<Label, State> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.label().clone()).or_default().add_term(m.clone(), c.clone());
        }
        out
    }

    /// Applies a linear map defined on monomials.
    pub fn map_linear<F>(&self, mut f: F) -> Result<State>
    where
        F: FnMut(&FockMonomial) -> Result<State>,
    {
        let mut out = State::zero();
        for (m, c) in &self.terms {
            let image = f(m)?;
            out.add_scaled(&image, c);
        }
        Ok(out)
    }

    /// Shifts every label by `shift` (the operator `e^{shift . q}`), no cocycle.
    pub fn shift_label(&self, shift: &Label) -> State {
        State {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.with_label(m.label() + shift), c.clone()))
                .collect(),
        }
    }
}

impl From<FockMonomial> for State {
    fn from(m: FockMonomial) -> State {
        State::term(m, Scalar::one())
    }
}

impl<'a> Add<&'a State> for &'a State {
    type Output = State;
    fn add(self, rhs: &'a State) -> State {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl<'a> Sub<&'a State> for &'a State {
    type Output = State;
    fn sub(self, rhs: &'a State) -> State {
        let mut out = self.clone();
        out.add_scaled(rhs, &Scalar::int(-1));
        out
    }
}

impl fmt::Display for State {
    /// `c * a[i,-k]...|alpha> + ...`, or `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let rendered: Vec<String> = self.terms.iter().map(|(m, c)| format!("{c} * {m}")).collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

impl fmt::Debug for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// All Fock monomials of the given depth in `M_label`.
pub fn basis(label: &Label, depth: usize) -> Vec<FockMonomial> {
    fn rec(rank: usize, remaining: usize, min: Part, acc: &mut Vec<Part>, out: &mut Vec<Vec<Part>>) {
        if remaining == 0 {
            out.push(acc.clone());
            return;
        }
        for color in min.color..rank {
            let start = if color == min.color { min.level } else { 1 };
            for level in start..=remaining as u32 {
                let part = Part { color, level };
                acc.push(part);
                rec(rank, remaining - level as usize, part, acc, out);
                acc.pop();
            }
        }
    }
    let mut raw = Vec::new();
    rec(label.rank(), depth, Part { color: 0, level: 1 }, &mut Vec::new(), &mut raw);
    raw.into_iter().map(|parts| FockMonomial::new(label.clone(), parts)).collect()
}

/// All Fock monomials of depth at most `max_depth` in `M_label`.
pub fn basis_up_to(label: &Label, max_depth: usize) -> Vec<FockMonomial> {
    (0..=max_depth).flat_map(|d| basis(label, d)).collect()
}

/// Convenience constructor: `a^{c1}(-k1)... 1 (x) e^label` from one-based `(color, level)` pairs.
pub fn monomial(label: &Label, parts: &[(usize, u32)]) -> FockMonomial {
    FockMonomial::new(
        label.clone(),
        parts.iter().map(|&(c, k)| Part { color: c - 1, level: k }).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_counts() {
        let l1 = Label::zero(1);
        let counts: Vec<usize> = (0..6).map(|d| basis(&l1, d).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7]);
        let l2 = Label::zero(2);
        let counts: Vec<usize> = (0..6).map(|d| basis(&l2, d).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 10, 20, 36]);
    }

    #[test]
    fn weight_includes_label_norm() {
        let l = Label::scalar(GaussRat::from_ratio(1, 2));
        let m = monomial(&l, &[(1, 2)]);
        assert_eq!(m.weight(), GaussRat::from_ratio(17, 8));
        assert_eq!(m.to_string(), "a[1,-2]|1/2>");
    }
}
