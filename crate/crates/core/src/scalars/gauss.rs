//! Gaussian rationals `a + b i` with `a, b` arbitrary-precision rationals.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GaussRat {
    re: BigRational,
    im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        GaussRat::real(BigRational::new(num.into(), den.into()))
    }

    pub fn real(re: BigRational) -> Self {
        GaussRat { re, im: BigRational::zero() }
    }

    pub fn int(n: i64) -> Self {
        GaussRat::real(BigRational::from_integer(n.into()))
    }

    pub fn i() -> Self {
        GaussRat { re: BigRational::zero(), im: BigRational::one() }
    }

    /// `re + im*i` from two integer fractions `(num, den)`.
    pub fn complex(re: (i64, i64), im: (i64, i64)) -> Self {
        GaussRat {
            re: BigRational::new(re.0.into(), re.1.into()),
            im: BigRational::new(im.0.into(), im.1.into()),
        }
    }

    pub fn zero() -> Self {
        GaussRat::default()
    }

    pub fn one() -> Self {
        GaussRat::int(1)
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    /// The integer value, if this is a rational integer that fits in `i64`.
    pub fn as_integer(&self) -> Option<i64> {
        if self.im.is_zero() && self.re.is_integer() {
            self.re.to_integer().to_i64()
        } else {
            None
        }
    }

    pub fn is_integer(&self) -> bool {
        self.im.is_zero() && self.re.is_integer()
    }

    pub fn conj(&self) -> Self {
        GaussRat { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let norm = &self.re * &self.re + &self.im * &self.im;
        Ok(GaussRat { re: &self.re / &norm, im: -&self.im / &norm })
    }

    pub fn checked_div(&self, rhs: &GaussRat) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn scale_int(&self, n: i64) -> Self {
        let n = BigRational::from_integer(n.into());
        GaussRat { re: &self.re * &n, im: &self.im * &n }
    }

    /// Splits off the integer part of the real component: returns `(k, r)` with
    /// `self = k + r`, `k` an integer and `0 <= re(r) < 1`.
    pub fn split_floor(&self) -> (BigInt, GaussRat) {
        let k = self.re.floor().to_integer();
        let frac = &self.re - BigRational::from_integer(k.clone());
        (k, GaussRat { re: frac, im: self.im.clone() })
    }

    /// `self - base` as an integer, or a coset error.
    pub fn int_offset_from(&self, base: &GaussRat) -> Result<i64> {
        (self - base).as_integer().ok_or_else(|| Error::Coset {
            exponent: self.clone(),
            coset: base.clone(),
        })
    }

    pub fn add_int(&self, n: i64) -> Self {
        GaussRat { re: &self.re + BigRational::from_integer(n.into()), im: self.im.clone() }
    }

    /// Positivity for the ordering `x > 0` iff `Re x > 0`, or `Re x = 0` and `Im x > 0`.
    pub fn is_positive_ordered(&self) -> bool {
        self.re.is_positive() || (self.re.is_zero() && self.im.is_positive())
    }
}

/// Generalized binomial coefficient `kappa (kappa-1) ... (kappa-m+1) / m!`.
pub fn binom(kappa: &GaussRat, m: u64) -> GaussRat {
    let mut acc = GaussRat::one();
    for j in 0..m {
        let factor = kappa.add_int(-(j as i64));
        acc = &acc * &factor;
        acc = GaussRat {
            re: acc.re / BigRational::from_integer((j + 1).into()),
            im: acc.im / BigRational::from_integer((j + 1).into()),
        };
    }
    acc
}

/// Integer binomial `binom(n, k)` for arbitrary integer `n`, `k >= 0`.
pub fn binom_int(n: i64, k: u64) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..k {
        num *= BigInt::from(n - j as i64);
        den *= BigInt::from(j + 1);
    }
    num / den
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<'a> $tr<&'a GaussRat> for &'a GaussRat {
            type Output = GaussRat;
            fn $method(self, rhs: &'a GaussRat) -> GaussRat {
                let f: fn(&GaussRat, &GaussRat) -> GaussRat = $body;
                f(self, rhs)
            }
        }
        impl $tr<GaussRat> for GaussRat {
            type Output = GaussRat;
            fn $method(self, rhs: GaussRat) -> GaussRat {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a GaussRat> for GaussRat {
            type Output = GaussRat;
            fn $method(self, rhs: &'a GaussRat) -> GaussRat {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| GaussRat { re: &a.re + &b.re, im: &a.im + &b.im });
forward_binop!(Sub, sub, |a, b| GaussRat { re: &a.re - &b.re, im: &a.im - &b.im });
forward_binop!(Mul, mul, |a, b| GaussRat {
    re: &a.re * &b.re - &a.im * &b.im,
    im: &a.re * &b.im + &a.im * &b.re,
});

impl AddAssign<&GaussRat> for GaussRat {
    fn add_assign(&mut self, rhs: &GaussRat) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat { re: -self.re, im: -self.im }
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat { re: -&self.re, im: -&self.im }
    }
}

impl From<i64> for GaussRat {
    fn from(n: i64) -> Self {
        GaussRat::int(n)
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussRat {
    /// Text form `a/b+c/d*i`; zero parts are omitted, `0` for zero.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", fmt_rat(&self.re)),
            (re_zero, false) => {
                if !re_zero {
                    write!(f, "{}", fmt_rat(&self.re))?;
                    if self.im.is_positive() {
                        write!(f, "+")?;
                    }
                }
                if self.im.is_one() {
                    write!(f, "i")
                } else if (-&self.im).is_one() {
                    write!(f, "-i")
                } else {
                    write!(f, "{}*i", fmt_rat(&self.im))
                }
            }
        }
    }
}

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn parse_rat(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("invalid rational '{s}'"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num.trim().parse().map_err(|_| bad())?;
    let den: BigInt = den.trim().parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(BigRational::new(num, den))
}

impl FromStr for GaussRat {
    type Err = Error;

    /// Accepts sums of signed terms, each a rational or a rational times `i`:
    /// `1/2`, `-3`, `i`, `-2/3*i`, `1/2+1/3*i`, `1/2 - i`.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty number".into()));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = compact.as_bytes();
        for (idx, &b) in bytes.iter().enumerate() {
            if (b == b'+' || b == b'-') && idx > start {
                terms.push(&compact[start..idx]);
                start = idx;
            }
        }
        terms.push(&compact[start..]);
        let mut out = GaussRat::zero();
        for term in terms {
            let (neg, body) = match term.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, term.strip_prefix('+').unwrap_or(term)),
            };
            let value = if let Some(rest) = body.strip_prefix('i').filter(|r| r.starts_with(['/', '*'])) {
                let r = match rest.strip_prefix('*') {
                    Some(coef) => parse_rat(coef)?,
                    None => parse_rat(&format!("1{rest}"))?,
                };
                GaussRat { re: BigRational::zero(), im: r }
            } else if let Some(coef) = body.strip_suffix('i') {
                let coef = coef.strip_suffix('*').unwrap_or(coef);
                let r = if coef.is_empty() { BigRational::one() } else { parse_rat(coef)? };
                GaussRat { re: BigRational::zero(), im: r }
            } else {
                GaussRat::real(parse_rat(body)?)
            };
            out = if neg { out - value } else { out + value };
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GaussRat {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display() {
        for s in ["0", "1/2", "-3", "i", "-i", "1/2+1/3*i", "-2/3*i", "5-7/2*i"] {
            assert_eq!(g(s).to_string(), s);
        }
        assert_eq!(g("2/4"), g("1/2"));
        assert!("1/0".parse::<GaussRat>().is_err());
        assert!("abc".parse::<GaussRat>().is_err());
        assert_eq!(g("i/3"), g("1/3i"));
        assert_eq!(g("-i*2/5"), g("-2/5i"));
        assert!("i2".parse::<GaussRat>().is_err());
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binom(&g("7/3+i"), 0), GaussRat::one());
        assert_eq!(binom(&g("1/2"), 2), g("-1/8"));
        assert_eq!(binom(&g("i"), 1), g("i"));
        assert_eq!(binom(&g("-1"), 2), g("1"));
        assert_eq!(binom_int(-1, 3), BigInt::from(-1));
        assert_eq!(binom_int(5, 2), BigInt::from(10));
    }

    #[test]
    fn binomial_recurrence() {
        for kappa in ["1/2", "-3/4+i", "1/3*i", "5", "-2"] {
            let kappa = g(kappa);
            for m in 0..20u64 {
                let lhs = &binom(&kappa, m) * &kappa.add_int(-(m as i64));
                let lhs = lhs.checked_div(&GaussRat::int(m as i64 + 1)).unwrap();
                assert_eq!(lhs, binom(&kappa, m + 1));
            }
        }
    }

    #[test]
    fn field_ops() {
        let a = g("1/2+1/3*i");
        assert_eq!(&a * &a.inv().unwrap(), GaussRat::one());
        assert_eq!(GaussRat::zero().inv(), Err(Error::DivisionByZero));
        let (k, r) = g("-3/2+i").split_floor();
        assert_eq!(k, BigInt::from(-2));
        assert_eq!(r, g("1/2+i"));
    }
}
