//! Coefficientwise verification of Jacobi-type identities, skew-symmetry,
//! the commutator formula, normal ordering and locality for creative intertwiners.
//!
//! Delta kernels are never expanded as three-variable series: the `z0` exponent
//! of a target coefficient pins the delta index, and lower truncation leaves a
//! finite binomial sum.

mod engine;

pub use engine::{Cached, Composite, JacobiIdentity, Triple};

use crate::error::{Error, Result};
use crate::fock::{vertex_mode, virasoro_mode, Label, State};
use crate::intertwiner::{IntertwinerSpec, Intertwining};
use crate::report::VerificationReport;
use crate::scalars::{binom, branch_phase, GaussRat, Scalar};

/// `calY(outer_head, z_outer) calY(inner_head, z_inner) s`.
pub struct Product<'a> {
    ctx: &'a Intertwining,
    outer: IntertwinerSpec,
    inner: IntertwinerSpec,
    s: State,
}

impl<'a> Product<'a> {
    pub fn new(ctx: &'a Intertwining, outer: IntertwinerSpec, inner: IntertwinerSpec, s: State) -> Self {
        Product { ctx, outer, inner, s }
    }
}

impl Composite for Product<'_> {
    fn coeff(&self, outer: &GaussRat, inner: &GaussRat) -> Result<State> {
        let v = self.ctx.coefficient(&self.inner, &self.s, inner)?;
        if v.is_zero() {
            return Ok(v);
        }
        self.ctx.coefficient(&self.outer, &v, outer)
    }

    fn inner_floor(&self) -> GaussRat {
        let gamma = self.s.label().cloned().unwrap_or_else(|| Label::zero(self.inner.alpha().rank()));
        let depth = self.inner.head().max_depth() + self.s.max_depth();
        self.inner.alpha().dot(&gamma).add_int(-(depth as i64))
    }
}

/// The iterate `calY(calY(x, z_inner) y, z_outer) s`.
pub struct Iterate<'a> {
    ctx: &'a Intertwining,
    x: IntertwinerSpec,
    y: State,
    s: State,
}

impl<'a> Iterate<'a> {
    pub fn new(ctx: &'a Intertwining, x: IntertwinerSpec, y: State, s: State) -> Self {
        Iterate { ctx, x, y, s }
    }
}

impl Composite for Iterate<'_> {
    fn coeff(&self, outer: &GaussRat, inner: &GaussRat) -> Result<State> {
        let w = self.ctx.coefficient(&self.x, &self.y, inner)?;
        if w.is_zero() {
            return Ok(w);
        }
        self.ctx.coefficient(&IntertwinerSpec::new(w)?, &self.s, outer)
    }

    fn inner_floor(&self) -> GaussRat {
        let beta = self.y.label().cloned().unwrap_or_else(|| Label::zero(self.x.alpha().rank()));
        let depth = self.x.head().max_depth() + self.y.max_depth();
        self.x.alpha().dot(&beta).add_int(-(depth as i64))
    }
}

fn homogeneous(s: &State) -> Result<Label> {
    s.homogeneous_label()
}

impl Intertwining {
    /// Coefficient of `z1^b z2^c` in `calY(x, z1) calY(y, z2) s`.
    pub fn coeff_product(&self, x: &IntertwinerSpec, y: &IntertwinerSpec, s: &State, b: &GaussRat, c: &GaussRat) -> Result<State> {
        let gamma = homogeneous(s)?;
        let coset_c = y.alpha().dot(&gamma);
        c.int_offset_from(&coset_c)?;
        let coset_b = x.alpha().dot(&(y.alpha() + &gamma));
        b.int_offset_from(&coset_b)?;
        Product::new(self, x.clone(), y.clone(), s.clone()).coeff(b, c)
    }

    /// The generalized Jacobi identity for `calY(x, z1)`, `calY(y, z2)` on `s`,
    /// over integer offsets `[lo, hi]` in each of `z0, z1, z2`.
    pub fn verify_generalized_jacobi(&self, x: &IntertwinerSpec, y: &IntertwinerSpec, s: &State, lo: i64, hi: i64) -> Result<VerificationReport> {
        self.verify_generalized_jacobi_with_slack(x, y, s, lo, hi, 0)
    }

    /// As [`Self::verify_generalized_jacobi`], summing `slack` binomial terms past the truncation bound.
    pub fn verify_generalized_jacobi_with_slack(
        &self,
        x: &IntertwinerSpec,
        y: &IntertwinerSpec,
        s: &State,
        lo: i64,
        hi: i64,
        slack: i64,
    ) -> Result<VerificationReport> {
        let (alpha, beta) = (x.alpha(), y.alpha());
        let gamma = homogeneous(s)?;
        let p = Cached::new(Product::new(self, x.clone(), y.clone(), s.clone()));
        let q = Cached::new(Product::new(self, y.clone(), x.clone(), s.clone()));
        let r = Cached::new(Iterate::new(self, x.clone(), y.head().clone(), s.clone()));
        let ab = alpha.dot(beta);
        let identity = JacobiIdentity {
            name: "generalized Jacobi".into(),
            kappa: -ab.clone(),
            c12: self.cocycle().commutator(alpha, beta)?,
            rho: alpha.dot(&gamma),
            bases: [ab, alpha.dot(&gamma), beta.dot(&gamma)],
            p: &p,
            q: &q,
            r: &r,
            slack,
        };
        identity.verify(lo, hi)
    }

    /// `calY(x, z) y = E(-N alpha.beta) C(alpha, beta) e^{z L(-1)} calY(y, -z) x`
    /// at `z^{alpha.beta + k}`, resolving `(-z)^kappa = E(N kappa) z^kappa`.
    pub fn verify_skew_symmetry(&self, x: &IntertwinerSpec, y: &State, lo: i64, hi: i64, n: i64) -> Result<VerificationReport> {
        let beta = homogeneous(y)?;
        let alpha = x.alpha().clone();
        let ab = alpha.dot(&beta);
        let yspec = IntertwinerSpec::new(y.clone())?;
        let prefactor = &branch_phase(&-ab.clone(), n)? * &self.cocycle().commutator(&alpha, &beta)?;
        let floor = -((x.head().max_depth() + y.max_depth()) as i64);
        let mut report = VerificationReport::new(format!("skew-symmetry (N = {n})"), (lo, hi));
        for k in lo..=hi {
            let e = ab.add_int(k);
            let left = match self.coefficient(x, y, &e) {
                Ok(v) => v,
                Err(Error::Cutoff { .. }) => {
                    report.skipped += 1;
                    continue;
                }
                Err(err) => return Err(err),
            };
            let mut right = State::zero();
            let mut term_ok = true;
            for i in 0..=(k - floor).max(0) {
                let ei = ab.add_int(k - i);
                let inner = match self.coefficient(&yspec, x.head(), &ei) {
                    Ok(v) => v,
                    Err(Error::Cutoff { .. }) => {
                        term_ok = false;
                        break;
                    }
                    Err(err) => return Err(err),
                };
                let mut v = inner.scale(&branch_phase(&ei, n)?);
                for j in 1..=i {
                    v = virasoro_mode(-1, &v).scale_gauss(&GaussRat::from_ratio(1, j));
                }
                right.add_assign_ref(&v);
            }
            if !term_ok {
                report.skipped += 1;
                continue;
            }
            report.push(vec![e], left, right.scale(&prefactor));
        }
        Ok(report)
    }

    /// `u(k) calY(w, z) - calY(w, z) u(k) = sum_j binom(k, j) calY(u(j) w, z) z^{k-j}` on `t`.
    pub fn verify_commutator(&self, u: &State, w: &IntertwinerSpec, k: i64, t: &State, lo: i64, hi: i64) -> Result<VerificationReport> {
        let beta = homogeneous(t)?;
        let base = w.alpha().dot(&beta);
        let mut report = VerificationReport::new(format!("commutator formula (k = {k})"), (lo, hi));
        let ukt = vertex_mode(u, k, t)?;
        let top = (u.max_depth() + w.head().max_depth()) as i64;
        let mut rhs_heads = Vec::new();
        for j in 0..=top {
            let h = vertex_mode(u, j, w.head())?;
            if !h.is_zero() {
                rhs_heads.push((j, IntertwinerSpec::new(h)?));
            }
        }
        for i in lo..=hi {
            let e = base.add_int(i);
            let attempt = || -> Result<(State, State)> {
                let mut left = vertex_mode(u, k, &self.coefficient(w, t, &e)?)?;
                if !ukt.is_zero() {
                    left = &left - &self.coefficient(w, &ukt, &e)?;
                }
                let mut right = State::zero();
                for (j, spec) in &rhs_heads {
                    let c = binom(&GaussRat::int(k), *j as u64);
                    if c.is_zero() {
                        continue;
                    }
                    right.add_assign_ref(&self.coefficient(spec, t, &e.add_int(j - k))?.scale_gauss(&c));
                }
                Ok((left, right))
            };
            match attempt() {
                Ok((l, r)) => report.push(vec![e], l, r),
                Err(Error::Cutoff { .. }) => report.skipped += 1,
                Err(err) => return Err(err),
            }
        }
        Ok(report)
    }

    /// `:Y(u, z) calY(w, z): = calY(u(-1) w, z)` on `t`.
    pub fn verify_normal_order(&self, u: &State, w: &IntertwinerSpec, t: &State, lo: i64, hi: i64) -> Result<VerificationReport> {
        let beta = homogeneous(t)?;
        let base = w.alpha().dot(&beta);
        let floor = -((w.head().max_depth() + t.max_depth()) as i64);
        let top = (u.max_depth() + t.max_depth()) as i64;
        let head = vertex_mode(u, -1, w.head())?;
        let rhs_spec = if head.is_zero() { None } else { Some(IntertwinerSpec::new(head)?) };
        let mut report = VerificationReport::new("normal ordering", (lo, hi));
        for i in lo..=hi {
            let e = base.add_int(i);
            let attempt = || -> Result<(State, State)> {
                let mut left = State::zero();
                // creation part: n < 0, the intertwiner coefficient index i + n + 1 >= floor
                for n in (floor - i - 1).min(-1)..0 {
                    let inner = self.coefficient(w, t, &e.add_int(n + 1))?;
                    left.add_assign_ref(&vertex_mode(u, n, &inner)?);
                }
                for n in 0..=top {
                    let un = vertex_mode(u, n, t)?;
                    if !un.is_zero() {
                        left.add_assign_ref(&self.coefficient(w, &un, &e.add_int(n + 1))?);
                    }
                }
                let right = match &rhs_spec {
                    Some(spec) => self.coefficient(spec, t, &e)?,
                    None => State::zero(),
                };
                Ok((left, right))
            };
            match attempt() {
                Ok((l, r)) => report.push(vec![e], l, r),
                Err(Error::Cutoff { .. }) => report.skipped += 1,
                Err(err) => return Err(err),
            }
        }
        Ok(report)
    }

    /// `(z1 - z2)^m Y(u, z1) calY(w, z2) t = (z1 - z2)^m calY(w, z2) Y(u, z1) t`
    /// at `z1^b z2^{alpha.beta + c}` for integer offsets `b, c` in `[lo, hi]`.
    pub fn verify_locality(&self, u: &State, w: &IntertwinerSpec, m: u32, t: &State, lo: i64, hi: i64) -> Result<VerificationReport> {
        let beta = homogeneous(t)?;
        let base = w.alpha().dot(&beta);
        let mut report = VerificationReport::new(format!("locality (m = {m})"), (lo, hi));
        for b in lo..=hi {
            for c in lo..=hi {
                let attempt = || -> Result<(State, State)> {
                    let mut left = State::zero();
                    let mut right = State::zero();
                    for j in 0..=m as i64 {
                        let coef = binom(&GaussRat::int(m as i64), j as u64);
                        let coef = Scalar::from(if j % 2 == 1 { -coef } else { coef });
                        // coefficient of z1^{b-m+j} z2^{c-j} in each ordering
                        let mode = -(b - m as i64 + j) - 1;
                        let e2 = base.add_int(c - j);
                        let l = vertex_mode(u, mode, &self.coefficient(w, t, &e2)?)?;
                        let ut = vertex_mode(u, mode, t)?;
                        let r = if ut.is_zero() { State::zero() } else { self.coefficient(w, &ut, &e2)? };
                        left.add_scaled(&l, &coef);
                        right.add_scaled(&r, &coef);
                    }
                    Ok((left, right))
                };
                match attempt() {
                    Ok((l, r)) => report.push(vec![GaussRat::int(b), base.add_int(c)], l, r),
                    Err(Error::Cutoff { .. }) => report.skipped += 1,
                    Err(err) => return Err(err),
                }
            }
        }
        Ok(report)
    }
}
