//! The coefficient ring: the group algebra over `Q(i)` of the free abelian
//! group of formal units `E(k) lambda^a zeta^b`.
//!
//! `E(k)` stands for the branch phase `exp(i pi k)`. Its only relations are
//! `E(k1) E(k2) = E(k1 + k2)` and `E(m) = (-1)^m` for integer `m`; the sign is
//! folded into the rational coefficient so that a stored `E` exponent always
//! has real part in `[0, 1)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;

use super::GaussRat;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Debug)]
pub struct Unit {
    e_exp: GaussRat,
    lambda_exp: GaussRat,
    zeta_exp: GaussRat,
}

impl Unit {
    /// Builds a normalized unit, returning the sign folded out of `E`.
    pub fn normalized(e_exp: GaussRat, lambda_exp: GaussRat, zeta_exp: GaussRat) -> (Unit, bool) {
        let (k, frac) = e_exp.split_floor();
        (Unit { e_exp: frac, lambda_exp, zeta_exp }, k.is_odd())
    }

    pub fn one() -> Unit {
        Unit::default()
    }

    pub fn is_one(&self) -> bool {
        self.e_exp.is_zero() && self.lambda_exp.is_zero() && self.zeta_exp.is_zero()
    }

    pub fn e_exp(&self) -> &GaussRat {
        &self.e_exp
    }

    pub fn lambda_exp(&self) -> &GaussRat {
        &self.lambda_exp
    }

    pub fn zeta_exp(&self) -> &GaussRat {
        &self.zeta_exp
    }

    fn mul(&self, other: &Unit) -> (Unit, bool) {
        Unit::normalized(
            &self.e_exp + &other.e_exp,
            &self.lambda_exp + &other.lambda_exp,
            &self.zeta_exp + &other.zeta_exp,
        )
    }

    fn inv(&self) -> (Unit, bool) {
        Unit::normalized(-&self.e_exp, -&self.lambda_exp, -&self.zeta_exp)
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.e_exp.is_zero() {
            parts.push(format!("E({})", self.e_exp));
        }
        if !self.lambda_exp.is_zero() {
            parts.push(format!("lambda^({})", self.lambda_exp));
        }
        if !self.zeta_exp.is_zero() {
            parts.push(format!("zeta^({})", self.zeta_exp));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// A finite `Q(i)`-linear combination of units. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Scalar {
    terms: BTreeMap<Unit, GaussRat>,
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar::default()
    }

    pub fn one() -> Scalar {
        Scalar::from(GaussRat::one())
    }

    pub fn int(n: i64) -> Scalar {
        Scalar::from(GaussRat::int(n))
    }

    pub fn monomial(coeff: GaussRat, unit: Unit) -> Scalar {
        let mut s = Scalar::zero();
        s.add_term(unit, coeff);
        s
    }

    /// The formal phase `E(k) = exp(i pi k)`.
    pub fn phase(k: &GaussRat) -> Scalar {
        let (unit, neg) = Unit::normalized(k.clone(), GaussRat::zero(), GaussRat::zero());
        let c = if neg { -GaussRat::one() } else { GaussRat::one() };
        Scalar::monomial(c, unit)
    }

    pub fn lambda_pow(k: &GaussRat) -> Scalar {
        Scalar::monomial(GaussRat::one(), Unit::normalized(GaussRat::zero(), k.clone(), GaussRat::zero()).0)
    }

    pub fn zeta_pow(k: &GaussRat) -> Scalar {
        Scalar::monomial(GaussRat::one(), Unit::normalized(GaussRat::zero(), GaussRat::zero(), k.clone()).0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Unit::one()).is_some_and(GaussRat::is_one)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Unit, &GaussRat)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The rational value, if this scalar involves no formal units.
    pub fn as_gauss(&self) -> Option<GaussRat> {
        match self.terms.len() {
            0 => Some(GaussRat::zero()),
            1 => self.terms.get(&Unit::one()).cloned(),
            _ => None,
        }
    }

    fn add_term(&mut self, unit: Unit, coeff: GaussRat) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(unit) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &Scalar) {
        for (u, c) in &other.terms {
            self.add_term(u.clone(), c.clone());
        }
    }

    pub fn scale(&self, c: &GaussRat) -> Scalar {
        if c.is_zero() {
            return Scalar::zero();
        }
        Scalar { terms: self.terms.iter().map(|(u, v)| (u.clone(), v * c)).collect() }
    }

    /// Inverse of a single-term scalar. Sums of two or more units (and zero)
    /// are not units of the group algebra in general and are rejected.
    pub fn invert_monomial(&self) -> Result<Scalar> {
        if self.terms.len() != 1 {
            return Err(Error::NotInvertible(self.to_string()));
        }
        let (unit, coeff) = self.terms.iter().next().unwrap();
        let (inv, neg) = unit.inv();
        let mut c = coeff.inv()?;
        if neg {
            c = -c;
        }
        Ok(Scalar::monomial(c, inv))
    }

    pub fn pow_monomial(&self, n: i64) -> Result<Scalar> {
        let base = if n < 0 { self.invert_monomial()? } else { self.clone() };
        let mut acc = Scalar::one();
        for _ in 0..n.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }
}

impl From<GaussRat> for Scalar {
    fn from(c: GaussRat) -> Scalar {
        Scalar::monomial(c, Unit::one())
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(mut self, rhs: Scalar) -> Scalar {
        self.add_assign_ref(&rhs);
        self
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (ua, ca) in &self.terms {
            for (ub, cb) in &rhs.terms {
                let (u, neg) = ua.mul(ub);
                let c = ca * cb;
                out.add_term(u, if neg { -c } else { c });
            }
        }
        out
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { terms: self.terms.iter().map(|(u, c)| (u.clone(), -c)).collect() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    /// `0`, a bare coefficient, or a bracketed sum of `(c)*unit` terms.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|(u, c)| if u.is_one() { format!("({c})") } else { format!("({c})*{u}") })
            .collect();
        if rendered.len() == 1 {
            write!(f, "{}", rendered[0])
        } else {
            write!(f, "[{}]", rendered.join(" + "))
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The branch phase `exp(i pi N kappa)` for odd `N`.
pub fn branch_phase(kappa: &GaussRat, n: i64) -> Result<Scalar> {
    if n % 2 == 0 {
        return Err(Error::EvenBranch(n));
    }
    Ok(Scalar::phase(&kappa.scale_int(n)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GaussRat {
        s.parse().unwrap()
    }

    #[test]
    fn branch_phase_examples() {
        assert_eq!(branch_phase(&g("1"), 1).unwrap(), Scalar::int(-1));
        assert_eq!(branch_phase(&g("2"), 3).unwrap(), Scalar::one());
        let half = branch_phase(&g("1/2"), 1).unwrap();
        let (unit, c) = half.terms().next().unwrap();
        assert_eq!(unit.e_exp(), &g("1/2"));
        assert!(c.is_one());
        assert_eq!(branch_phase(&g("1/2"), 2), Err(Error::EvenBranch(2)));
    }

    #[test]
    fn phase_relations() {
        let a = Scalar::phase(&g("1/2"));
        let b = Scalar::phase(&g("3/2"));
        assert_eq!(&a * &b, Scalar::one());
        let x = Scalar::zeta_pow(&g("1/3")) + Scalar::from(g("2+i"));
        assert_eq!(&Scalar::phase(&g("1")) * &x, -x.clone());
        let l = Scalar::lambda_pow(&g("2"));
        assert_eq!(&l * &Scalar::lambda_pow(&g("-2")), Scalar::one());
        assert_eq!(&a * &a, Scalar::int(-1));
    }

    #[test]
    fn inversion() {
        let m = Scalar::monomial(g("2/3+i"), Unit::normalized(g("1/3+i"), g("-1/2"), g("7")).0);
        assert_eq!(&m * &m.invert_monomial().unwrap(), Scalar::one());
        let two = Scalar::one() + Scalar::zeta_pow(&g("1"));
        assert!(matches!(two.invert_monomial(), Err(Error::NotInvertible(_))));
        assert!(Scalar::zero().invert_monomial().is_err());
    }
}
