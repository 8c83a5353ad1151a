use std::collections::HashMap;
use std::sync::Mutex;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::State;
use crate::report::VerificationReport;
use crate::scalars::{binom, GaussRat, Scalar};

/// A two-variable coefficient source `F(z_outer, z_inner)`, for example
/// `calY(x, z1) calY(y, z2) s` with `z1` outer.
pub trait Composite: Sync {
    /// Coefficient of `z_outer^outer z_inner^inner`.
    fn coeff(&self, outer: &GaussRat, inner: &GaussRat) -> Result<State>;
    /// Every inner exponent with a nonzero coefficient is at least this (lower truncation).
    fn inner_floor(&self) -> GaussRat;
}

/// Memoizes a [`Composite`].
pub struct Cached<C> {
    inner: C,
    memo: Mutex<HashMap<(GaussRat, GaussRat), State>>,
}

impl<C: Composite> Cached<C> {
    pub fn new(inner: C) -> Self {
        Cached { inner, memo: Mutex::new(HashMap::new()) }
    }
}

impl<C: Composite> Composite for Cached<C> {
    fn coeff(&self, outer: &GaussRat, inner: &GaussRat) -> Result<State> {
        let key = (outer.clone(), inner.clone());
        if let Some(v) = self.memo.lock().expect("memo poisoned").get(&key) {
            return Ok(v.clone());
        }
        let v = self.inner.coeff(outer, inner)?;
        self.memo.lock().expect("memo poisoned").insert(key, v.clone());
        Ok(v)
    }

    fn inner_floor(&self) -> GaussRat {
        self.inner.inner_floor()
    }
}

/// One Jacobi-type identity
///
/// ```text
/// z0^{-1} ((z1-z2)/z0)^kappa delta((z1-z2)/z0) P(z1, z2)
///   - c12 z0^{-1} ((z2-z1)/z0)^kappa delta((z2-z1)/(-z0)) Q(z2, z1)
///   = z2^{-1} delta((z1-z0)/z2) R(z2, z0) ((z1-z0)/z2)^rho
/// ```
///
/// with `P = F(z1 outer, z2 inner)`, `Q = F(z2 outer, z1 inner)`, `R = F(z2 outer, z0 inner)`.
pub struct JacobiIdentity<'a> {
    pub name: String,
    pub kappa: GaussRat,
    pub c12: Scalar,
    pub rho: GaussRat,
    /// Coset representatives of the `z0`, `z1`, `z2` exponents.
    pub bases: [GaussRat; 3],
    pub p: &'a dyn Composite,
    pub q: &'a dyn Composite,
    pub r: &'a dyn Composite,
    /// Extra binomial terms past the lower-truncation bound.
    pub slack: i64,
}

fn alternating(c: GaussRat, odd: bool) -> Scalar {
    Scalar::from(if odd { -c } else { c })
}

/// `max(0, floor(x))` as an index bound; `None` if negative.
fn index_bound(x: &GaussRat) -> Option<i64> {
    let (k, _) = x.split_floor();
    let k: i64 = k.try_into().ok()?;
    (k >= 0).then_some(k)
}

fn parity(n: i64) -> bool {
    n.rem_euclid(2) == 1
}

/// Outcome of one coefficient of a Jacobi identity.
pub enum Triple {
    Compared(Vec<GaussRat>, State, State),
    Skipped,
}

impl JacobiIdentity<'_> {
    /// Both sides at `z0^A z1^B z2^C`.
    pub fn sides(&self, a: &GaussRat, b: &GaussRat, c: &GaussRat) -> Result<(State, State)> {
        let one = GaussRat::one();
        let p = &(-a) - &one;
        let n = p.int_offset_from(&self.kappa)?;
        let mut left = State::zero();
        // first term: expand (z1-z2)^p in z2
        if let Some(bound) = index_bound(&(c - &self.p.inner_floor())) {
            for m in 0..=bound + self.slack {
                let state = self.p.coeff(&(&(b - &p) + &GaussRat::int(m)), &c.add_int(-m))?;
                if !state.is_zero() {
                    left.add_scaled(&state, &alternating(binom(&p, m as u64), parity(m)));
                }
            }
        }
        // second term: expand (z2-z1)^p in z1
        if let Some(bound) = index_bound(&(b - &self.q.inner_floor())) {
            let mut acc = State::zero();
            for m in 0..=bound + self.slack {
                let state = self.q.coeff(&(&(c - &p) + &GaussRat::int(m)), &b.add_int(-m))?;
                if !state.is_zero() {
                    acc.add_scaled(&state, &alternating(binom(&p, m as u64), parity(n + m)));
                }
            }
            left.add_scaled(&acc, &(-&self.c12));
        }
        let mut right = State::zero();
        // expand (z1-z0)^{B+m} in z0
        if let Some(bound) = index_bound(&(a - &self.r.inner_floor())) {
            (b - &self.rho).int_offset_from(&GaussRat::zero())?;
            for m in 0..=bound + self.slack {
                let power = b.add_int(m);
                let outer = &(c + b).add_int(m + 1);
                let state = self.r.coeff(outer, &a.add_int(-m))?;
                if !state.is_zero() {
                    right.add_scaled(&state, &alternating(binom(&power, m as u64), parity(m)));
                }
            }
        }
        Ok((left, right))
    }

    fn triple(&self, a: &GaussRat, b: &GaussRat, c: &GaussRat) -> Result<Triple> {
        match self.sides(a, b, c) {
            Ok((l, r)) => Ok(Triple::Compared(vec![a.clone(), b.clone(), c.clone()], l, r)),
            Err(Error::Cutoff { .. }) => Ok(Triple::Skipped),
            Err(e) => Err(e),
        }
    }

    /// Compares every `(A, B, C) = bases + (i, j, k)` with `i, j, k` in `[lo, hi]`.
    pub fn verify(&self, lo: i64, hi: i64) -> Result<VerificationReport> {
        let mut points = Vec::new();
        for i in lo..=hi {
            for j in lo..=hi {
                for k in lo..=hi {
                    points.push((self.bases[0].add_int(i), self.bases[1].add_int(j), self.bases[2].add_int(k)));
                }
            }
        }
        let results: Vec<Result<Triple>> = points.par_iter().map(|(a, b, c)| self.triple(a, b, c)).collect();
        let mut report = VerificationReport::new(self.name.clone(), (lo, hi));
        for r in results {
            match r? {
                Triple::Compared(exps, l, r) => report.push(exps, l, r),
                Triple::Skipped => report.skipped += 1,
            }
        }
        Ok(report)
    }
}
