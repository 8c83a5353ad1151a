use crate::algebra::{verify_heisenberg_algebra, verify_virasoro_algebra};
use crate::error::{Error, Result};
use crate::fock::{alpha_mode, apply_mode, basis_up_to, virasoro_mode, Label, State};
use crate::intertwiner::{IntertwinerSpec, Intertwining};
use crate::jacobi::{Cached, Iterate, JacobiIdentity, Product};
use crate::report::VerificationReport;
use crate::scalars::GaussRat;
use crate::series::WindowedSeries;

use super::IntegralLattice;

/// A mode of the twisted module structure on `V_L`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// `a_g^color(n)`, colors counted from zero.
    Heisenberg(usize, i64),
    /// `L_g(n)`.
    Virasoro(i64),
}

/// The automorphism `g = e^{-2 pi i alpha(0)}` of `V_L`.
#[derive(Clone, Debug)]
pub struct TwistData<'a> {
    lattice: &'a IntegralLattice,
    alpha: Label,
}

impl<'a> TwistData<'a> {
    pub fn new(lattice: &'a IntegralLattice, alpha: Label) -> Result<Self> {
        alpha.check_rank(lattice.dim())?;
        Ok(TwistData { lattice, alpha })
    }

    pub fn lattice(&self) -> &IntegralLattice {
        self.lattice
    }

    pub fn alpha(&self) -> &Label {
        &self.alpha
    }

    fn lattice_label(&self, s: &State) -> Result<Label> {
        let mu = s.homogeneous_label()?;
        self.lattice.coordinates(&mu)?;
        Ok(mu)
    }

    /// `a_g^i(n) = a^i(n) + alpha^i delta_{n,0}` and `L_g(n) = L(n) + alpha(n) + alpha^2/2 delta_{n,0}`.
    pub fn twisted_mode(&self, mode: Mode, s: &State) -> State {
        match mode {
            Mode::Heisenberg(i, n) => {
                let mut out = apply_mode(i, n, s);
                if n == 0 {
                    out.add_assign_ref(&s.scale_gauss(self.alpha.component(i)));
                }
                out
            }
            Mode::Virasoro(n) => {
                let mut out = virasoro_mode(n, s);
                out.add_assign_ref(&alpha_mode(&self.alpha, n, s));
                if n == 0 {
                    let half = &self.alpha.norm2() * &GaussRat::from_ratio(1, 2);
                    out.add_assign_ref(&s.scale_gauss(&half));
                }
                out
            }
        }
    }

    /// `L_alpha(n) = L(n) + (n + 1) alpha(n)`, the modes of `omega - alpha(-2) 1`.
    pub fn shifted_virasoro(&self, n: i64, s: &State) -> State {
        let mut out = virasoro_mode(n, s);
        out.add_assign_ref(&alpha_mode(&self.alpha, n, s).scale_gauss(&GaussRat::int(n + 1)));
        out
    }

    /// `c_alpha = l - 12 alpha^2`.
    pub fn shifted_central_charge(&self) -> GaussRat {
        &GaussRat::int(self.alpha.rank() as i64) - &self.alpha.norm2().scale_int(12)
    }

    /// Coefficient of `z^e` in `Y_g(x, z) t = calY(Delta(alpha, z) x, z) t`.
    pub fn twisted_coefficient(&self, ctx: &Intertwining, x: &State, t: &State, e: &GaussRat) -> Result<State> {
        self.lattice_label(x)?;
        self.lattice_label(t)?;
        let mut out = State::zero();
        for (shift, w) in ctx.delta_terms(&self.alpha, x) {
            out.add_assign_ref(&ctx.coefficient(&IntertwinerSpec::new(w)?, t, &(e - &shift))?);
        }
        Ok(out)
    }

    /// `Y_g(x, z) t` on offsets `[lo, hi]` around `mu.(nu + alpha)`.
    pub fn twisted_vertex(&self, ctx: &Intertwining, x: &State, t: &State, lo: i64, hi: i64) -> Result<WindowedSeries<State>> {
        let mu = self.lattice_label(x)?;
        let nu = self.lattice_label(t)?;
        let base = mu.dot(&(&nu + &self.alpha));
        let mut coeffs = Vec::new();
        for k in lo..=hi {
            coeffs.push((k, self.twisted_coefficient(ctx, x, t, &base.add_int(k))?));
        }
        let floor = -((x.max_depth() + t.max_depth()) as i64);
        Ok(WindowedSeries::new(base, lo, hi, coeffs).with_zero_below(lo <= floor))
    }

    /// `(e^alpha)^{-1} calY(x, z) e^alpha t = C(mu, alpha) Y_g(x, z) t` for `t` in `V_L`.
    pub fn verify_li_equivalence(&self, ctx: &Intertwining, x: &State, t: &State, lo: i64, hi: i64) -> Result<VerificationReport> {
        let mu = self.lattice_label(x)?;
        let nu = self.lattice_label(t)?;
        let spec = IntertwinerSpec::new(x.clone())?;
        let cs = ctx.cocycle();
        let shifted = cs.apply_e(&self.alpha, t)?;
        let c = cs.commutator(&mu, &self.alpha)?;
        let base = mu.dot(&(&nu + &self.alpha));
        let mut report = VerificationReport::new("twisted module equivalence", (lo, hi));
        for k in lo..=hi {
            let e = base.add_int(k);
            let attempt = || -> Result<(State, State)> {
                let left = cs.apply_e_inv(&self.alpha, &ctx.coefficient(&spec, &shifted, &e)?)?;
                let right = self.twisted_coefficient(ctx, x, t, &e)?.scale(&c);
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

    /// `L_g(0)` on `M_mu` against `L(0)` on `M_{mu + alpha}`, for every basis
    /// monomial of depth at most `depth` over each lattice vector in `labels`.
    pub fn verify_grading(&self, labels: &[Label], depth: usize) -> Result<VerificationReport> {
        let mut report = VerificationReport::new("twisted grading", (0, depth as i64));
        let back = self.alpha.neg();
        for mu in labels {
            self.lattice.coordinates(mu)?;
            for m in basis_up_to(mu, depth) {
                let weight = m.weight();
                let s = State::from(m);
                let left = self.twisted_mode(Mode::Virasoro(0), &s);
                let right = virasoro_mode(0, &s.shift_label(&self.alpha)).shift_label(&back);
                report.push(vec![weight], left, right);
            }
        }
        Ok(report)
    }

    /// `[a_g^i(m), a_g^j(n)] = m delta_{ij} delta_{m+n,0}` on each state.
    pub fn verify_heisenberg_algebra(&self, states: &[State], range: (i64, i64)) -> VerificationReport {
        let op = |i: usize, n: i64, s: &State| self.twisted_mode(Mode::Heisenberg(i, n), s);
        verify_heisenberg_algebra("twisted Heisenberg algebra", op, self.alpha.rank(), states, range)
    }

    /// `[L_g(m), L_g(n)] = (m - n) L_g(m + n) + l/12 (m^3 - m) delta_{m+n,0}` on each state.
    pub fn verify_twisted_virasoro(&self, states: &[State], range: (i64, i64)) -> VerificationReport {
        let c = GaussRat::int(self.alpha.rank() as i64);
        verify_virasoro_algebra("twisted Virasoro algebra", |n, s| self.twisted_mode(Mode::Virasoro(n), s), &c, states, range)
    }

    /// `[L_alpha(m), L_alpha(n)]` with central charge `c_alpha`.
    pub fn verify_shifted_virasoro(&self, states: &[State], range: (i64, i64)) -> VerificationReport {
        let c = self.shifted_central_charge();
        verify_virasoro_algebra("shifted Virasoro algebra", |n, s| self.shifted_virasoro(n, s), &c, states, range)
    }

    /// `(L_alpha(0) - c_alpha/24) s = (L_g(0) - l/24) s`.
    pub fn verify_shifted_grading(&self, states: &[State]) -> VerificationReport {
        let c = self.shifted_central_charge();
        let l = GaussRat::int(self.alpha.rank() as i64);
        let mut report = VerificationReport::new("L_alpha(0) - c_alpha/24 = L_g(0) - l/24", (0, 0));
        for s in states {
            let left = &self.shifted_virasoro(0, s) - &s.scale_gauss(&(&c * &GaussRat::from_ratio(1, 24)));
            let right = &self.twisted_mode(Mode::Virasoro(0), s) - &s.scale_gauss(&(&l * &GaussRat::from_ratio(1, 24)));
            report.push(vec![], left, right);
        }
        report
    }

    /// The twisted-module Jacobi identity for `Y_g` realized as `calY` on `V_{L+alpha}`:
    /// `x = u (x) e^{mu1}`, `y = v (x) e^{mu2}`, `s = w (x) e^{mu3 + alpha}`.
    pub fn verify_twisted_jacobi(&self, ctx: &Intertwining, x: &State, y: &State, s: &State, lo: i64, hi: i64) -> Result<VerificationReport> {
        let mu1 = self.lattice_label(x)?;
        let mu2 = self.lattice_label(y)?;
        let gamma = s.homogeneous_label()?;
        self.lattice.coordinates(&(&gamma - &self.alpha))?;
        let (xs, ys) = (IntertwinerSpec::new(x.clone())?, IntertwinerSpec::new(y.clone())?);
        let p = Cached::new(Product::new(ctx, xs.clone(), ys.clone(), s.clone()));
        let q = Cached::new(Product::new(ctx, ys, xs.clone(), s.clone()));
        let r = Cached::new(Iterate::new(ctx, xs, y.clone(), s.clone()));
        let identity = JacobiIdentity {
            name: "twisted module Jacobi".into(),
            kappa: GaussRat::zero(),
            c12: self.lattice.parity_sign(&mu1, &mu2)?,
            rho: mu1.dot(&self.alpha),
            bases: [mu1.dot(&mu2), mu1.dot(&gamma), mu2.dot(&gamma)],
            p: &p,
            q: &q,
            r: &r,
            slack: 0,
        };
        identity.verify(lo, hi)
    }
}
