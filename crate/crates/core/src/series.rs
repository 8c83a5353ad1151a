//! Windowed formal series in one variable with exponents in a coset `kappa + Z`.
//!
//! A [`WindowedSeries`] knows its coefficients exactly on an integer window
//! `[lo, hi]` (exponent `offset + n`). Outside the window a coefficient is
//! unknown unless the series is flagged as vanishing below `lo` or above `hi`.
//! Arithmetic never turns an unknown coefficient into a zero.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::fock::State;
use crate::scalars::{binom, GaussRat, Scalar};

/// A coefficient space: a module over [`Scalar`].
pub trait Coefficient: Clone + PartialEq + fmt::Display {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign_ref(&mut self, other: &Self);
    fn scaled(&self, c: &Scalar) -> Self;
}

impl Coefficient for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add_assign_ref(&mut self, other: &Self) {
        Scalar::add_assign_ref(self, other)
    }
    fn scaled(&self, c: &Scalar) -> Self {
        self * c
    }
}

impl Coefficient for State {
    fn zero() -> Self {
        State::zero()
    }
    fn is_zero(&self) -> bool {
        State::is_zero(self)
    }
    fn add_assign_ref(&mut self, other: &Self) {
        State::add_assign_ref(self, other)
    }
    fn scaled(&self, c: &Scalar) -> Self {
        self.scale(c)
    }
}

#[derive(Clone, PartialEq)]
pub struct WindowedSeries<C> {
    offset: GaussRat,
    lo: i64,
    hi: i64,
    coeffs: BTreeMap<i64, C>,
    zero_below: bool,
    zero_above: bool,
}

/// Splits `offset` into its normalized representative (real part in `[0, 1)`)
/// and the integer shift to apply to indices.
fn normalize_offset(offset: &GaussRat) -> (GaussRat, i64) {
    let (k, frac) = offset.split_floor();
    let k: i64 = k.try_into().expect("exponent offset out of range");
    (frac, k)
}

impl<C: Coefficient> WindowedSeries<C> {
    /// A series `sum_n coeffs[n] z^{offset + n}` known exactly on `[lo, hi]`.
    pub fn new(offset: GaussRat, lo: i64, hi: i64, coeffs: impl IntoIterator<Item = (i64, C)>) -> Self {
        let (offset, shift) = normalize_offset(&offset);
        let coeffs = coeffs
            .into_iter()
            .filter(|(n, c)| *n >= lo && *n <= hi && !c.is_zero())
            .map(|(n, c)| (n + shift, c))
            .collect();
        WindowedSeries { offset, lo: lo + shift, hi: hi + shift, coeffs, zero_below: false, zero_above: false }
    }

    /// A Laurent polynomial: known everywhere, zero outside `[lo, hi]`.
    pub fn polynomial(offset: GaussRat, lo: i64, hi: i64, coeffs: impl IntoIterator<Item = (i64, C)>) -> Self {
        Self::new(offset, lo, hi, coeffs).with_zero_below(true).with_zero_above(true)
    }

    /// `c z^offset`.
    pub fn monomial(offset: GaussRat, c: C) -> Self {
        Self::polynomial(offset, 0, 0, [(0, c)])
    }

    pub fn with_zero_below(mut self, flag: bool) -> Self {
        self.zero_below = flag;
        self
    }

    pub fn with_zero_above(mut self, flag: bool) -> Self {
        self.zero_above = flag;
        self
    }

    pub fn offset(&self) -> &GaussRat {
        &self.offset
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn zero_below(&self) -> bool {
        self.zero_below
    }

    pub fn zero_above(&self) -> bool {
        self.zero_above
    }

    fn known(&self, n: i64) -> bool {
        (n >= self.lo || self.zero_below) && (n <= self.hi || self.zero_above)
    }

    /// Coefficient of `z^{offset + n}`; `None` when unknown.
    pub fn coeff(&self, n: i64) -> Option<C> {
        if !self.known(n) {
            return None;
        }
        Some(self.coeffs.get(&n).cloned().unwrap_or_else(C::zero))
    }

    /// Coefficient of `z^e`; a coset error if `e` is not in `offset + Z`.
    pub fn coeff_at(&self, e: &GaussRat) -> Result<Option<C>> {
        Ok(self.coeff(e.int_offset_from(&self.offset)?))
    }

    /// Exponent of the coefficient at window index `n`.
    pub fn exponent(&self, n: i64) -> GaussRat {
        self.offset.add_int(n)
    }

    /// Nonzero in-window coefficients, by index.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &C)> {
        self.coeffs.iter().map(|(n, c)| (*n, c))
    }

    /// Index shift taking `other`'s indexing to ours; errors unless the offsets agree mod Z.
    fn alignment(&self, other_offset: &GaussRat) -> Result<i64> {
        other_offset
            .int_offset_from(&self.offset)
            .map_err(|_| Error::OffsetMismatch(self.offset.clone(), other_offset.clone()))
    }

    /// Restricts to a sub-window.
    pub fn restrict(&self, lo: i64, hi: i64) -> Self {
        let lo2 = lo.max(self.lo);
        let hi2 = hi.min(self.hi);
        WindowedSeries {
            offset: self.offset.clone(),
            lo: lo2,
            hi: hi2,
            coeffs: self.coeffs.range(lo2..=hi2).map(|(n, c)| (*n, c.clone())).collect(),
            zero_below: self.zero_below && lo2 == self.lo,
            zero_above: self.zero_above && hi2 == self.hi,
        }
    }

    /// Sum, defined on the intersection of the windows.
    pub fn add(&self, other: &Self) -> Result<Self> {
        let shift = self.alignment(&other.offset)?;
        let olo = other.lo + shift;
        let ohi = other.hi + shift;
        let lo = match (self.zero_below, other.zero_below) {
            (true, true) => self.lo.min(olo),
            (true, false) => olo,
            (false, true) => self.lo,
            (false, false) => self.lo.max(olo),
        };
        let hi = match (self.zero_above, other.zero_above) {
            (true, true) => self.hi.max(ohi),
            (true, false) => ohi,
            (false, true) => self.hi,
            (false, false) => self.hi.min(ohi),
        };
        if lo > hi {
            return Err(Error::EmptyWindow(format!("sum window [{lo}, {hi}]")));
        }
        let mut coeffs: BTreeMap<i64, C> = BTreeMap::new();
        for n in lo..=hi {
            let mut c = self.coeff(n).unwrap_or_else(C::zero);
            if let Some(d) = other.coeff(n - shift) {
                c.add_assign_ref(&d);
            }
            if !c.is_zero() {
                coeffs.insert(n, c);
            }
        }
        Ok(WindowedSeries {
            offset: self.offset.clone(),
            lo,
            hi,
            coeffs,
            zero_below: self.zero_below && other.zero_below,
            zero_above: self.zero_above && other.zero_above,
        })
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = self.clone();
        out.coeffs = self
            .coeffs
            .iter()
            .map(|(n, v)| (*n, v.scaled(c)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        out
    }

    /// Termwise `d/dz`: the coefficient at `offset + n` moves to `offset + n - 1`
    /// with factor `offset + n`.
    pub fn derive(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(n, c)| (*n - 1, c.scaled(&Scalar::from(self.offset.add_int(*n)))))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        WindowedSeries {
            offset: self.offset.clone(),
            lo: self.lo - 1,
            hi: self.hi - 1,
            coeffs,
            zero_below: self.zero_below,
            zero_above: self.zero_above,
        }
    }

    /// Multiplies by `z^k`.
    pub fn shift_exponent(&self, k: &GaussRat) -> Self {
        let (offset, shift) = normalize_offset(&(&self.offset + k));
        WindowedSeries {
            offset,
            lo: self.lo + shift,
            hi: self.hi + shift,
            coeffs: self.coeffs.iter().map(|(n, c)| (n + shift, c.clone())).collect(),
            zero_below: self.zero_below,
            zero_above: self.zero_above,
        }
    }

    /// Equality on the common window; `None` if the windows do not meet.
    pub fn agrees_with(&self, other: &Self) -> Result<Option<bool>> {
        let shift = self.alignment(&other.offset)?;
        let lo = self.lo.max(other.lo + shift);
        let hi = self.hi.min(other.hi + shift);
        if lo > hi {
            return Ok(None);
        }
        Ok(Some((lo..=hi).all(|n| self.coeff(n) == other.coeff(n - shift))))
    }
}

/// Interval of indices, `None` meaning unbounded.
type Bound = Option<i64>;

fn complete_at<A: Coefficient, B: Coefficient>(a: &WindowedSeries<A>, b: &WindowedSeries<B>, n: i64) -> bool {
    // indices i where a_i may be nonzero and b_{n-i} may be nonzero
    let pa_lo: Bound = a.zero_below.then_some(a.lo);
    let pa_hi: Bound = a.zero_above.then_some(a.hi);
    let pb_lo: Bound = b.zero_below.then_some(b.lo);
    let pb_hi: Bound = b.zero_above.then_some(b.hi);
    let lo = match (pa_lo, pb_hi.map(|h| n - h)) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, y) => x.or(y),
    };
    let hi = match (pa_hi, pb_lo.map(|l| n - l)) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    };
    match (lo, hi) {
        (Some(lo), Some(hi)) => {
            lo > hi || (lo >= a.lo && hi <= a.hi && n - hi >= b.lo && n - lo <= b.hi)
        }
        _ => false,
    }
}

/// Cauchy product of a scalar series with a series over any coefficient space.
/// The output window is the largest integer window on which every coefficient
/// is a complete convolution of known input coefficients.
pub fn series_mul<C: Coefficient>(a: &WindowedSeries<Scalar>, b: &WindowedSeries<C>) -> Result<WindowedSeries<C>> {
    let start = a.lo + b.lo;
    let end = a.hi + b.hi;
    let valid: Vec<i64> = (start..=end).filter(|&n| complete_at(a, b, n)).collect();
    let (lo, hi) = match (valid.first(), valid.last()) {
        (Some(&l), Some(&h)) if (h - l + 1) as usize == valid.len() => (l, h),
        (Some(_), Some(_)) => {
            // keep the longest contiguous run
            let mut best = (valid[0], valid[0]);
            let mut cur = (valid[0], valid[0]);
            for &n in &valid[1..] {
                if n == cur.1 + 1 {
                    cur.1 = n;
                } else {
                    cur = (n, n);
                }
                if cur.1 - cur.0 > best.1 - best.0 {
                    best = cur;
                }
            }
            best
        }
        _ => return Err(Error::EmptyWindow("no complete product coefficient".into())),
    };
    let mut coeffs = BTreeMap::new();
    for n in lo..=hi {
        let mut acc = C::zero();
        for (i, ca) in a.iter() {
            if let Some(cb) = b.coeffs.get(&(n - i)) {
                acc.add_assign_ref(&cb.scaled(ca));
            }
        }
        if !acc.is_zero() {
            coeffs.insert(n, acc);
        }
    }
    let raw = WindowedSeries {
        offset: &a.offset + &b.offset,
        lo,
        hi,
        coeffs,
        zero_below: a.zero_below && b.zero_below && lo == start,
        zero_above: a.zero_above && b.zero_above && hi == end,
    };
    Ok(raw.shift_exponent(&GaussRat::zero()))
}

/// The expansion `(x + sign*y)^kappa = sum_{m >= 0} binom(kappa, m) x^{kappa-m} (sign*y)^m`
/// in nonnegative powers of the second summand `y`.
#[derive(Clone, Debug)]
pub struct BinomialExpansion {
    pub kappa: GaussRat,
    pub sign: i64,
}

impl BinomialExpansion {
    pub fn new(kappa: GaussRat, sign: i64) -> Self {
        assert!(sign == 1 || sign == -1, "sign must be +1 or -1");
        BinomialExpansion { kappa, sign }
    }

    /// Coefficient of `x^{kappa-m} y^m`.
    pub fn coeff(&self, m: u64) -> GaussRat {
        let c = binom(&self.kappa, m);
        if self.sign < 0 && m % 2 == 1 {
            -c
        } else {
            c
        }
    }

    /// `(x exponent, y exponent, coefficient)` for `m` in `0..=max_m`.
    pub fn terms(&self, max_m: u64) -> impl Iterator<Item = (GaussRat, u64, GaussRat)> + '_ {
        (0..=max_m).map(move |m| (self.kappa.add_int(-(m as i64)), m, self.coeff(m)))
    }

    /// The expansion with `x = 1`: a scalar series in `y`, known on `[0, max_m]`.
    pub fn as_series(&self, max_m: u64) -> WindowedSeries<Scalar> {
        WindowedSeries::new(
            GaussRat::zero(),
            0,
            max_m as i64,
            (0..=max_m).map(|m| (m as i64, Scalar::from(self.coeff(m)))),
        )
        .with_zero_below(true)
        .with_zero_above(self.kappa.as_integer().is_some_and(|k| k >= 0 && (k as u64) <= max_m))
    }
}

impl<C: Coefficient> fmt::Display for WindowedSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z^({}) * [", self.offset)?;
        let parts: Vec<String> = self.coeffs.iter().map(|(n, c)| format!("{n}: {c}")).collect();
        write!(f, "{}] on [{}, {}]", parts.join("; "), self.lo, self.hi)
    }
}

impl<C: Coefficient> fmt::Debug for WindowedSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
