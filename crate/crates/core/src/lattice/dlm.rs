use std::fmt;

use crate::error::{Error, Result};
use crate::fock::{Label, State};
use crate::intertwiner::{yplus_terms, IntertwinerSpec, Intertwining};
use crate::jacobi::{Cached, Composite, JacobiIdentity};
use crate::report::VerificationReport;
use crate::scalars::{branch_phase, GaussRat, Scalar};
use crate::series::WindowedSeries;

use super::IntegralLattice;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DlmVariant {
    /// Right factor `Delta(alpha, -z)`, with `(-z)^kappa = E(N kappa) z^kappa`.
    Delta,
    /// Right factor `Y_+(alpha, z) z^{alpha(0)}`.
    Hat,
}

impl fmt::Display for DlmVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DlmVariant::Delta => "delta",
            DlmVariant::Hat => "hat",
        })
    }
}

/// `eta_ij = -alpha_i.alpha_j - mu_i.alpha_j - mu_j.alpha_i`.
pub fn eta(alpha_i: &Label, mu_i: &Label, alpha_j: &Label, mu_j: &Label) -> GaussRat {
    let s = &(&alpha_i.dot(alpha_j) + &mu_i.dot(alpha_j)) + &mu_j.dot(alpha_i);
    -s
}

/// The generalized vertex operators `Y_alpha` on `V_{L + alpha}` for all twists `alpha`.
///
/// A twisted state is a pair `(s, alpha)` with `s` homogeneous of label `mu + alpha`, `mu` in `L`.
pub struct Dlm<'a> {
    ctx: &'a Intertwining,
    lattice: &'a IntegralLattice,
    variant: DlmVariant,
    n: i64,
}

impl<'a> Dlm<'a> {
    pub fn new(ctx: &'a Intertwining, lattice: &'a IntegralLattice, variant: DlmVariant, n: i64) -> Result<Self> {
        if n % 2 == 0 {
            return Err(Error::EvenBranch(n));
        }
        Ok(Dlm { ctx, lattice, variant, n })
    }

    pub fn variant(&self) -> DlmVariant {
        self.variant
    }

    /// The lattice part `mu` of a twisted state.
    pub fn untwist(&self, s: &State, twist: &Label) -> Result<Label> {
        let mu = &s.homogeneous_label()? - twist;
        self.lattice.coordinates(&mu)?;
        Ok(mu)
    }

    /// `E(N alpha.mu2) eps(mu1, mu2) / eps(mu1 + alpha, mu2 + beta)`, without the phase for the hat variant.
    pub fn prefactor(&self, mu1: &Label, alpha: &Label, mu2: &Label, beta: &Label) -> Result<Scalar> {
        let cs = self.ctx.cocycle();
        let ratio = &cs.epsilon(mu1, mu2)? * &cs.epsilon(&(mu1 + alpha), &(mu2 + beta))?.invert_monomial()?;
        Ok(match self.variant {
            DlmVariant::Delta => &branch_phase(&alpha.dot(mu2), self.n)? * &ratio,
            DlmVariant::Hat => ratio,
        })
    }

    /// Coefficient of `z^e` in
    /// `Y_alpha(x, z) t = psi_{-alpha-beta} Y_-(alpha, z) calY(psi_alpha Delta(beta, z) x, z) R(alpha, z) psi_beta t`,
    /// with `psi_a` the label shift by `-a` and `R` the variant's right factor.
    pub fn coefficient(&self, x: &State, alpha: &Label, t: &State, beta: &Label, e: &GaussRat) -> Result<State> {
        let mu1 = self.untwist(x, alpha)?;
        let mu2 = self.untwist(t, beta)?;
        let t0 = t.shift_label(&beta.neg());
        let power = alpha.dot(&mu2);
        let phase = match self.variant {
            DlmVariant::Delta => branch_phase(&power, self.n)?,
            DlmVariant::Hat => Scalar::one(),
        };
        let right: Vec<(GaussRat, State)> = yplus_terms(alpha, &t0)
            .into_iter()
            .enumerate()
            .filter(|(_, s)| !s.is_zero())
            .map(|(k, s)| (power.add_int(-(k as i64)), s))
            .collect();
        let back = alpha.neg();
        let base = mu1.dot(&mu2);
        let cutoff = self.ctx.cutoff() as i64;
        let mut out = State::zero();
        for (eh, w) in self.ctx.delta_terms(beta, x) {
            let head = IntertwinerSpec::new(w.shift_label(&back))?;
            for (et, tk) in &right {
                let Ok(offset) = (&(e - &eh) - et).int_offset_from(&base) else { continue };
                let floor = -((head.head().max_depth() + tk.max_depth()) as i64);
                for p in 0..=(offset - floor) {
                    let v = self.ctx.coefficient(&head, tk, &base.add_int(offset - p))?;
                    if v.is_zero() {
                        continue;
                    }
                    let depth = v.max_depth() as i64 + p;
                    if depth > cutoff {
                        return Err(Error::Cutoff { depth, cutoff: self.ctx.cutoff() });
                    }
                    out.add_assign_ref(&self.ctx.yminus_coeff(alpha, p as usize, &v));
                }
            }
        }
        Ok(out.shift_label(&(alpha + beta)).scale(&phase))
    }

    /// The same coefficient from the closed form `prefactor * calY(x, z) t`.
    pub fn closed_form_coefficient(&self, x: &State, alpha: &Label, t: &State, beta: &Label, e: &GaussRat) -> Result<State> {
        let mu1 = self.untwist(x, alpha)?;
        let mu2 = self.untwist(t, beta)?;
        let c = self.prefactor(&mu1, alpha, &mu2, beta)?;
        Ok(self.ctx.coefficient(&IntertwinerSpec::new(x.clone())?, t, e)?.scale(&c))
    }

    /// `Y_alpha(x, z) t` on offsets `[lo, hi]` around `label(x).label(t)`.
    pub fn vertex(&self, x: &State, alpha: &Label, t: &State, beta: &Label, lo: i64, hi: i64) -> Result<WindowedSeries<State>> {
        let base = x.homogeneous_label()?.dot(&t.homogeneous_label()?);
        let mut coeffs = Vec::new();
        for k in lo..=hi {
            coeffs.push((k, self.coefficient(x, alpha, t, beta, &base.add_int(k))?));
        }
        let floor = -((x.max_depth() + t.max_depth()) as i64);
        Ok(WindowedSeries::new(base, lo, hi, coeffs).with_zero_below(lo <= floor))
    }

    /// The defining composition against the closed form.
    pub fn verify_closed_form(&self, x: &State, alpha: &Label, t: &State, beta: &Label, lo: i64, hi: i64) -> Result<VerificationReport> {
        let base = x.homogeneous_label()?.dot(&t.homogeneous_label()?);
        let mut report = VerificationReport::new(format!("generalized vertex operator closed form ({})", self.variant), (lo, hi));
        for k in lo..=hi {
            let e = base.add_int(k);
            let attempt = || -> Result<(State, State)> {
                Ok((self.coefficient(x, alpha, t, beta, &e)?, self.closed_form_coefficient(x, alpha, t, beta, &e)?))
            };
            match attempt() {
                Ok((l, r)) => report.push(vec![e], l, r),
                Err(Error::Cutoff { .. }) => report.skipped += 1,
                Err(err) => return Err(err),
            }
        }
        Ok(report)
    }

    /// `C12 = E(N(alpha1.mu2 - alpha2.mu1)) (-1)^{mu1^2 mu2^2}`, or the parity sign alone for the hat variant.
    pub fn commutator(&self, mu1: &Label, alpha1: &Label, mu2: &Label, alpha2: &Label) -> Result<Scalar> {
        let sign = self.lattice.parity_sign(mu1, mu2)?;
        Ok(match self.variant {
            DlmVariant::Delta => &branch_phase(&(&alpha1.dot(mu2) - &alpha2.dot(mu1)), self.n)? * &sign,
            DlmVariant::Hat => sign,
        })
    }

    /// The generalized Jacobi identity for `Y_{alpha1}(x, z1)`, `Y_{alpha2}(y, z2)` on `(s, alpha3)`,
    /// with powers `eta12` on the left and `-eta13` on the right.
    ///
    /// Exponent cosets: `z0` in `-eta12 + Z`, `z1` in `-eta13 + Z`, and `z2` in
    /// `(mu2 + alpha2).(mu3 + alpha3) + Z`, the exponents of `Y_{alpha2}(y, z2) s`.
    pub fn verify_jacobi(&self, x: (&State, &Label), y: (&State, &Label), s: (&State, &Label), lo: i64, hi: i64) -> Result<VerificationReport> {
        let mu1 = self.untwist(x.0, x.1)?;
        let mu2 = self.untwist(y.0, y.1)?;
        let mu3 = self.untwist(s.0, s.1)?;
        let eta12 = eta(x.1, &mu1, y.1, &mu2);
        let eta13 = eta(x.1, &mu1, s.1, &mu3);
        let third = y.0.homogeneous_label()?.dot(&s.0.homogeneous_label()?);
        let owned = |v: (&State, &Label)| (v.0.clone(), v.1.clone());
        let p = Cached::new(DlmProduct { dlm: self, outer: owned(x), inner: owned(y), s: owned(s) });
        let q = Cached::new(DlmProduct { dlm: self, outer: owned(y), inner: owned(x), s: owned(s) });
        let r = Cached::new(DlmIterate { dlm: self, x: owned(x), y: owned(y), s: owned(s) });
        let identity = JacobiIdentity {
            name: format!(
                "generalized vertex operator Jacobi ({}, N = {}); cosets z0: {} + Z, z1: {} + Z, z2: {} + Z",
                self.variant,
                self.n,
                -eta12.clone(),
                -eta13.clone(),
                third
            ),
            kappa: eta12.clone(),
            c12: self.commutator(&mu1, x.1, &mu2, y.1)?,
            rho: -eta13.clone(),
            bases: [-eta12, -eta13, third],
            p: &p,
            q: &q,
            r: &r,
            slack: 0,
        };
        identity.verify(lo, hi)
    }
}

type Twisted = (State, Label);

/// `Y_{a}(outer, z_outer) Y_{b}(inner, z_inner) s`.
struct DlmProduct<'a> {
    dlm: &'a Dlm<'a>,
    outer: Twisted,
    inner: Twisted,
    s: Twisted,
}

impl Composite for DlmProduct<'_> {
    fn coeff(&self, outer: &GaussRat, inner: &GaussRat) -> Result<State> {
        let v = self.dlm.coefficient(&self.inner.0, &self.inner.1, &self.s.0, &self.s.1, inner)?;
        if v.is_zero() {
            return Ok(v);
        }
        let twist = &self.inner.1 + &self.s.1;
        self.dlm.coefficient(&self.outer.0, &self.outer.1, &v, &twist, outer)
    }

    fn inner_floor(&self) -> GaussRat {
        let depth = (self.inner.0.max_depth() + self.s.0.max_depth()) as i64;
        label_dot(&self.inner.0, &self.s.0).add_int(-depth)
    }
}

/// `Y_{a + b}(Y_a(x, z_inner) y, z_outer) s`.
struct DlmIterate<'a> {
    dlm: &'a Dlm<'a>,
    x: Twisted,
    y: Twisted,
    s: Twisted,
}

impl Composite for DlmIterate<'_> {
    fn coeff(&self, outer: &GaussRat, inner: &GaussRat) -> Result<State> {
        let w = self.dlm.coefficient(&self.x.0, &self.x.1, &self.y.0, &self.y.1, inner)?;
        if w.is_zero() {
            return Ok(w);
        }
        let twist = &self.x.1 + &self.y.1;
        self.dlm.coefficient(&w, &twist, &self.s.0, &self.s.1, outer)
    }

    fn inner_floor(&self) -> GaussRat {
        let depth = (self.x.0.max_depth() + self.y.0.max_depth()) as i64;
        label_dot(&self.x.0, &self.y.0).add_int(-depth)
    }
}

fn label_dot(a: &State, b: &State) -> GaussRat {
    match (a.label(), b.label()) {
        (Some(x), Some(y)) => x.dot(y),
        _ => GaussRat::zero(),
    }
}
