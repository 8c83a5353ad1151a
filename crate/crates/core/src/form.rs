//! The invariant bilinear form on `M` and adjoint intertwiners.
//!
//! `lambda` stays a formal unit throughout. The branch `(-1)^kappa = E(N kappa)` enters
//! through the Moebius substitution `z -> lambda^2 / (e^{i pi N} z)`.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::fock::{apply_mode, basis, vertex_mode, virasoro_mode, FockMonomial, Label, Part, State};
use crate::intertwiner::{creation_product, yplus_terms, IntertwinerSpec, Intertwining};
use crate::report::VerificationReport;
use crate::scalars::{GaussRat, Scalar};

/// `a^i(n)^dagger s = (-1)^{n+1} lambda^{2n} a^i(-n) s`.
pub fn adjoint_mode(color: usize, n: i64, s: &State) -> State {
    let sign = if (n + 1).rem_euclid(2) == 1 { -1 } else { 1 };
    apply_mode(color, -n, s).scale(&(&Scalar::int(sign) * &Scalar::lambda_pow(&GaussRat::int(2 * n))))
}

fn inv_factorial(n: usize) -> GaussRat {
    GaussRat::from_ratio(1, (1..=n as i64).product())
}

fn lambda(k: &GaussRat) -> Scalar {
    Scalar::lambda_pow(k)
}

fn sign(odd: bool) -> Scalar {
    Scalar::int(if odd { -1 } else { 1 })
}

/// Splits a state into its depth-homogeneous components.
fn by_depth(s: &State) -> Vec<(usize, State)> {
    let mut out: Vec<(usize, State)> = Vec::new();
    for (m, c) in s.iter() {
        let d = m.depth();
        match out.iter_mut().find(|(k, _)| *k == d) {
            Some((_, st)) => st.add_term(m.clone(), c.clone()),
            None => out.push((d, State::term(m.clone(), c.clone()))),
        }
    }
    out
}

/// The form together with its branch parameter `N`.
pub struct Form<'a> {
    ctx: &'a Intertwining,
    n: i64,
    memo: Mutex<HashMap<(Vec<Part>, FockMonomial), Scalar>>,
}

impl<'a> Form<'a> {
    pub fn new(ctx: &'a Intertwining, n: i64) -> Result<Self> {
        if n % 2 == 0 {
            return Err(Error::EvenBranch(n));
        }
        Ok(Form { ctx, n, memo: Mutex::new(HashMap::new()) })
    }

    pub fn branch(&self) -> i64 {
        self.n
    }

    fn phase(&self, k: &GaussRat) -> Scalar {
        Scalar::phase(&k.scale_int(self.n))
    }

    /// `<v, w>` on Fock parts, moving the creation modes of `v` across as adjoints.
    fn fock_pair(&self, v: &[Part], w: &FockMonomial) -> Scalar {
        if v.is_empty() {
            return if w.parts().is_empty() { Scalar::one() } else { Scalar::zero() };
        }
        let total_v: u32 = v.iter().map(|p| p.level).sum();
        if total_v as usize != w.depth() {
            return Scalar::zero();
        }
        let key = (v.to_vec(), w.clone());
        if let Some(c) = self.memo.lock().expect("memo poisoned").get(&key) {
            return c.clone();
        }
        let first = v[0];
        let k = first.level as i64;
        // <a(-k) v', w> = <v', a(-k)^dagger w>, a(-k)^dagger = (-1)^{k+1} lambda^{-2k} a(k)
        let image = adjoint_mode(first.color, -k, &State::from(w.clone()));
        let mut acc = Scalar::zero();
        for (m, c) in image.iter() {
            acc.add_assign_ref(&(c * &self.fock_pair(&v[1..], m)));
        }
        self.memo.lock().expect("memo poisoned").insert(key, acc.clone());
        acc
    }

    /// `<x, y>`, with `<v (x) e^beta, w (x) e^gamma> = delta_{beta+gamma,0} eps(beta,-beta) lambda^{-beta^2} <v, w>`.
    pub fn gram(&self, x: &State, y: &State) -> Result<Scalar> {
        let mut acc = Scalar::zero();
        for (xm, xc) in x.iter() {
            let beta = xm.label();
            let prefactor = &self.ctx.cocycle().epsilon(beta, &beta.neg())? * &lambda(&-beta.norm2());
            for (ym, yc) in y.iter() {
                if !(beta + ym.label()).is_zero() {
                    continue;
                }
                let v = self.fock_pair(xm.parts(), ym);
                if v.is_zero() {
                    continue;
                }
                acc.add_assign_ref(&(&(&(xc * yc) * &v) * &prefactor));
            }
        }
        Ok(acc)
    }

    /// Gram matrix between the depth-`d` bases of `M_beta` and `M_{-beta}`.
    pub fn gram_matrix(&self, beta: &Label, depth: usize) -> Result<Vec<Vec<Scalar>>> {
        let left = basis(beta, depth);
        let right = basis(&beta.neg(), depth);
        left.iter()
            .map(|x| right.iter().map(|y| self.gram(&State::from(x.clone()), &State::from(y.clone()))).collect())
            .collect()
    }

    /// The `z^e` coefficient of `e^{alpha dagger}`-side operator chain, by definition:
    /// `calY(e^{-z lambda^{-2} L(1)} (lambda / (e^{i pi N} z))^{2 L(0)} x, lambda^2 / (e^{i pi N} z)) t`.
    pub fn adjoint_coefficient(&self, x: &IntertwinerSpec, t: &State, e: &GaussRat) -> Result<State> {
        let alpha = x.alpha();
        let a2 = alpha.norm2();
        let mut out = State::zero();
        for (d, xd) in by_depth(x.head()) {
            let weight2 = a2.add_int(2 * d as i64);
            let lfactor = &lambda(&weight2) * &self.phase(&-a2.clone());
            let mut head = xd;
            for j in 0..=d {
                if j > 0 {
                    head = virasoro_mode(1, &head);
                }
                if head.is_zero() {
                    break;
                }
                // z power: -(2 wt) + j - kappa = e
                let kappa = &(-weight2.clone()).add_int(j as i64) - e;
                let jfactor = &(&sign(j % 2 == 1) * &lambda(&GaussRat::int(-2 * j as i64))) * &Scalar::from(inv_factorial(j));
                let subst = &lambda(&kappa.scale_int(2)) * &self.phase(&-kappa.clone());
                let coeff = self.ctx.coefficient(&IntertwinerSpec::new(head.clone())?, t, &kappa)?;
                if coeff.is_zero() {
                    continue;
                }
                out.add_scaled(&coeff, &(&(&lfactor * &jfactor) * &subst));
            }
        }
        Ok(out)
    }

    /// The same coefficient from the factored form
    /// `z^{-alpha(0)} Y_-(alpha, -lambda^2/z) Y^dagger(u, z) Y_+(alpha, -lambda^2/z) e^{alpha dagger}`.
    pub fn adjoint_coefficient_factored(&self, x: &IntertwinerSpec, t: &State, e: &GaussRat) -> Result<State> {
        let alpha = x.alpha();
        let mut out = State::zero();
        for (gamma, part) in t.by_label() {
            let target = alpha + &gamma;
            let mu = alpha.dot(&target);
            let Ok(shift) = (e + &mu).int_offset_from(&GaussRat::zero()) else { continue };
            // e^{alpha dagger}
            let s0 = self.ctx.cocycle().apply_e(alpha, &part)?;
            let s0 = s0.scale(&(&self.phase(&-mu.clone()) * &lambda(&(&mu.scale_int(2) - &alpha.norm2()))));
            let ds0 = s0.max_depth() as i64;
            let fock = x.head().shift_label(&alpha.neg());
            for (kp, s1) in yplus_terms(alpha, &s0).into_iter().enumerate() {
                let kp = kp as i64;
                if s1.is_zero() {
                    continue;
                }
                let s1 = s1.scale(&(&sign(kp % 2 == 1) * &lambda(&GaussRat::int(-2 * kp))));
                for (d, ud) in by_depth(&fock) {
                    let d = d as i64;
                    let top = ds0 - d - shift;
                    let mut h = ud;
                    for j in 0..=d {
                        if j > 0 {
                            h = virasoro_mode(1, &h);
                        }
                        if h.is_zero() {
                            break;
                        }
                        let hfactor = &(&sign(j % 2 == 1) * &lambda(&GaussRat::int(2 * d - 2 * j))) * &Scalar::from(inv_factorial(j as usize));
                        for k in 0..=top {
                            // z: -mu - k + j - 2d + n + 1 + kp = e
                            let n = shift + k - j + 2 * d - kp - 1;
                            let v = vertex_mode(&h, n, &s1)?;
                            if v.is_zero() {
                                continue;
                            }
                            // (-lambda^2)^{-n-1} from the mode, (-lambda^2)^k from Y_-
                            let mode_factor = &sign((n + 1).rem_euclid(2) == 1) * &lambda(&GaussRat::int(-2 * (n + 1)));
                            let ym_factor = &sign(k % 2 == 1) * &lambda(&GaussRat::int(2 * k));
                            let v = creation_product(&self.ctx.yminus_vacuum(alpha, k as usize), &v);
                            out.add_scaled(&v, &(&(&hfactor * &mode_factor) * &ym_factor));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Both realizations of `calY^dagger(x, z) t` at `z^{e0 + k}`, `k` in `[lo, hi]`,
    /// where `e0 = -alpha.(alpha + gamma)`.
    pub fn verify_adjoint_routes(&self, x: &IntertwinerSpec, t: &State, lo: i64, hi: i64) -> Result<VerificationReport> {
        let gamma = t.homogeneous_label()?;
        let base = -x.alpha().dot(&(x.alpha() + &gamma));
        let mut report = VerificationReport::new("adjoint intertwiner, two routes", (lo, hi));
        for k in lo..=hi {
            let e = base.add_int(k);
            match (self.adjoint_coefficient(x, t, &e), self.adjoint_coefficient_factored(x, t, &e)) {
                (Ok(a), Ok(b)) => report.push(vec![e], a, b),
                (Err(Error::Cutoff { .. }), _) | (_, Err(Error::Cutoff { .. })) => report.skipped += 1,
                (Err(err), _) | (_, Err(err)) => return Err(err),
            }
        }
        Ok(report)
    }

    /// `<calY(x, z) y, t> = E(-N alpha.beta) C(alpha, beta) <y, calY^dagger(x, z) t>` at `z^{alpha.beta + k}`.
    pub fn verify_invariance(&self, x: &IntertwinerSpec, y: &State, t: &State, lo: i64, hi: i64) -> Result<VerificationReport> {
        let beta = y.homogeneous_label()?;
        let alpha = x.alpha();
        let ab = alpha.dot(&beta);
        let prefactor = &self.phase(&-ab.clone()) * &self.ctx.cocycle().commutator(alpha, &beta)?;
        let mut report = VerificationReport::new(format!("invariance (N = {})", self.n), (lo, hi));
        let vac = Label::zero(alpha.rank());
        for k in lo..=hi {
            let e = ab.add_int(k);
            let attempt = || -> Result<(State, State)> {
                let left = self.gram(&self.ctx.coefficient(x, y, &e)?, t)?;
                let right = self.gram(y, &self.adjoint_coefficient(x, t, &e)?)?;
                Ok((State::term(FockMonomial::vacuum(vac.clone()), left), State::term(FockMonomial::vacuum(vac.clone()), &right * &prefactor)))
            };
            match attempt() {
                Ok((l, r)) => report.push(vec![e], l, r),
                Err(Error::Cutoff { .. }) => report.skipped += 1,
                Err(err) => return Err(err),
            }
        }
        Ok(report)
    }

    /// `<e^alpha y, t>` computed directly and through `e^{alpha dagger}`.
    pub fn remark_sides(&self, alpha: &Label, y: &State, t: &State) -> Result<(Scalar, Scalar)> {
        let beta = y.homogeneous_label()?;
        let gamma = t.homogeneous_label()?;
        let direct = self.gram(&self.ctx.cocycle().apply_e(alpha, y)?, t)?;
        let mu = alpha.dot(&(alpha + &gamma));
        let edag = self
            .ctx
            .cocycle()
            .apply_e(alpha, t)?
            .scale(&(&self.phase(&-mu.clone()) * &lambda(&(&mu.scale_int(2) - &alpha.norm2()))));
        let prefactor = &self.phase(&-alpha.dot(&beta)) * &self.ctx.cocycle().commutator(alpha, &beta)?;
        Ok((direct, &prefactor * &self.gram(y, &edag)?))
    }
}

/// Determinant by Laplace expansion along the sparsest row.
pub fn determinant(m: &[Vec<Scalar>]) -> Scalar {
    let n = m.len();
    if n == 0 {
        return Scalar::one();
    }
    let rows: Vec<usize> = (0..n).collect();
    let cols: Vec<usize> = (0..n).collect();
    minor(m, &rows, &cols)
}

fn minor(m: &[Vec<Scalar>], rows: &[usize], cols: &[usize]) -> Scalar {
    if rows.is_empty() {
        return Scalar::one();
    }
    let (ri, _) = rows
        .iter()
        .enumerate()
        .min_by_key(|(_, &r)| cols.iter().filter(|&&c| !m[r][c].is_zero()).count())
        .expect("nonempty");
    let r = rows[ri];
    let rest_rows: Vec<usize> = rows.iter().copied().filter(|&x| x != r).collect();
    let mut acc = Scalar::zero();
    for (ci, &c) in cols.iter().enumerate() {
        if m[r][c].is_zero() {
            continue;
        }
        let rest_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let sub = minor(m, &rest_rows, &rest_cols);
        let term = &m[r][c] * &sub;
        if (ri + ci) % 2 == 1 {
            acc = &acc - &term;
        } else {
            acc.add_assign_ref(&term);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::fock::{basis_up_to, monomial};
    use crate::intertwiner::CocycleSystem;
    use crate::scalars::strategies::gauss;

    fn g(s: &str) -> GaussRat {
        s.parse().unwrap()
    }

    fn ctx(rank: usize) -> Intertwining {
        let g2: Vec<Vec<GaussRat>> = (0..rank).map(|i| (0..rank).map(|j| GaussRat::from_ratio((i + 2 * j + 1) as i64, 5)).collect()).collect();
        let f2: Vec<Vec<GaussRat>> = (0..rank).map(|i| (0..rank).map(|j| GaussRat::from_ratio((3 * i + j) as i64, 4)).collect()).collect();
        Intertwining::new(CocycleSystem::new(f2, g2).unwrap(), 8)
    }

    fn assert_pass(r: &VerificationReport) {
        assert!(r.all_pass(), "{}", r.render(true));
    }

    #[test]
    fn adjoint_mode_examples() {
        let vac = State::vacuum(Label::zero(1));
        let s = apply_mode(0, -1, &vac);
        assert_eq!(adjoint_mode(0, 1, &vac), s.scale(&Scalar::lambda_pow(&g("2"))));
        let b = State::vacuum(Label::scalar(g("1/2")));
        assert_eq!(adjoint_mode(0, 0, &b), b.scale_gauss(&g("-1/2")));
        assert_eq!(adjoint_mode(0, -1, &s), vac.scale(&Scalar::lambda_pow(&g("-2"))));
    }

    #[test]
    fn gram_examples() {
        let c = ctx(1);
        let f = Form::new(&c, 1).unwrap();
        let vac = State::vacuum(Label::zero(1));
        assert!(f.gram(&vac, &vac).unwrap().is_one());
        let beta = Label::scalar(g("1/3-i"));
        let expected = &c.cocycle().epsilon(&beta, &beta.neg()).unwrap() * &Scalar::lambda_pow(&-beta.norm2());
        assert_eq!(f.gram(&State::vacuum(beta.clone()), &State::vacuum(beta.neg())).unwrap(), expected);
        let a = apply_mode(0, -1, &vac);
        assert_eq!(f.gram(&a, &a).unwrap(), Scalar::lambda_pow(&g("-2")));
        assert!(f.gram(&State::vacuum(beta.clone()), &State::vacuum(beta)).unwrap().is_zero());
        assert!(Form::new(&c, 2).is_err());
    }

    #[test]
    fn diagonal_fix_normalizes_gram() {
        let c = Intertwining::new(CocycleSystem::from_zeta(vec![vec![g("2/7")]]).unwrap().with_diagonal_fix(true), 4);
        let f = Form::new(&c, 1).unwrap();
        let beta = Label::scalar(g("-3/2+i"));
        assert_eq!(f.gram(&State::vacuum(beta.clone()), &State::vacuum(beta.neg())).unwrap(), Scalar::lambda_pow(&-beta.norm2()));
    }

    #[test]
    fn gram_symmetric_and_invertible() {
        let c = ctx(2);
        let f = Form::new(&c, 3).unwrap();
        let beta = Label::new(vec![g("1/2"), g("-1/3+i")]);
        for d in 0..=3 {
            let m = f.gram_matrix(&beta, d).unwrap();
            let mt = f.gram_matrix(&beta.neg(), d).unwrap();
            for i in 0..m.len() {
                for j in 0..m.len() {
                    assert_eq!(m[i][j], mt[j][i]);
                }
            }
            let det = determinant(&m);
            assert!(det.invert_monomial().is_ok(), "depth {d}: det = {det}");
        }
    }

    #[test]
    fn determinant_small() {
        let m = vec![vec![Scalar::int(2), Scalar::int(1)], vec![Scalar::int(3), Scalar::int(4)]];
        assert_eq!(determinant(&m), Scalar::int(5));
    }

    #[test]
    fn adjoint_heisenberg_field_matches_adjoint_modes() {
        let c = ctx(1);
        let f = Form::new(&c, 1).unwrap();
        let zero = Label::zero(1);
        let x = IntertwinerSpec::new(State::from(monomial(&zero, &[(1, 1)]))).unwrap();
        for t in basis_up_to(&Label::scalar(g("1/4")), 3) {
            let t = State::from(t);
            for n in -3..=3 {
                // Y(a, z)^dagger = sum_n a^dagger(n) z^{-n-1}
                let e = GaussRat::int(-n - 1);
                assert_eq!(f.adjoint_coefficient(&x, &t, &e).unwrap(), adjoint_mode(0, n, &t));
            }
        }
        let id = IntertwinerSpec::new(State::vacuum(zero)).unwrap();
        let t = State::from(monomial(&Label::scalar(g("i")), &[(1, 2)]));
        assert_eq!(f.adjoint_coefficient(&id, &t, &GaussRat::zero()).unwrap(), t);
        assert!(f.adjoint_coefficient(&id, &t, &GaussRat::one()).unwrap().is_zero());
    }

    #[test]
    fn adjoint_routes_agree() {
        let c = ctx(2);
        let f = Form::new(&c, 1).unwrap();
        let alpha = Label::new(vec![g("1/2"), g("1/3*i")]);
        let gamma = Label::new(vec![g("-1/4"), g("1")]);
        let heads = [
            State::vacuum(alpha.clone()),
            State::from(monomial(&alpha, &[(1, 1)])),
            &State::from(monomial(&alpha, &[(1, 1), (2, 1)])) + &State::from(monomial(&alpha, &[(2, 2)])),
        ];
        for h in heads {
            let x = IntertwinerSpec::new(h).unwrap();
            for t in basis_up_to(&gamma, 1) {
                assert_pass(&f.verify_adjoint_routes(&x, &State::from(t), -3, 2).unwrap());
            }
        }
    }

    #[test]
    fn e_dagger_on_opposite_vacuum() {
        let c = ctx(1);
        let f = Form::new(&c, 1).unwrap();
        let alpha = Label::scalar(g("1/2+1/3*i"));
        let x = IntertwinerSpec::new(State::vacuum(alpha.clone())).unwrap();
        let t = State::vacuum(alpha.neg());
        // coefficient of z^0 in the factored form isolates e^{alpha dagger}
        let got = f.adjoint_coefficient_factored(&x, &t, &GaussRat::zero()).unwrap();
        let a2 = alpha.norm2();
        let expect = &c.cocycle().epsilon(&alpha, &alpha.neg()).unwrap() * &Scalar::lambda_pow(&-a2.clone());
        // alpha(0) eigenvalue on e^alpha t is zero, so only the lambda^{-alpha^2} factor survives
        assert_eq!(got, State::vacuum(Label::zero(1)).scale(&expect));
    }

    #[test]
    fn invariance_untwisted() {
        let c = ctx(1);
        let f = Form::new(&c, 1).unwrap();
        let zero = Label::zero(1);
        let vac = State::vacuum(zero.clone());
        let id = IntertwinerSpec::new(vac.clone()).unwrap();
        assert_pass(&f.verify_invariance(&id, &vac, &vac, -2, 2).unwrap());
        for u in basis_up_to(&zero, 2) {
            let x = IntertwinerSpec::new(State::from(u)).unwrap();
            for v in basis_up_to(&zero, 2) {
                for w in basis_up_to(&zero, 2) {
                    let r = f.verify_invariance(&x, &State::from(v.clone()), &State::from(w), -4, 3).unwrap();
                    assert_pass(&r);
                }
            }
        }
    }

    #[test]
    fn invariance_complex_labels() {
        let c = ctx(2);
        for n in [1, -1, 3] {
            let f = Form::new(&c, n).unwrap();
            let alpha = Label::new(vec![g("1/2"), g("-1/3+1/2*i")]);
            let beta = Label::new(vec![g("1/5*i"), g("2/3")]);
            let gamma = &(&alpha + &beta).neg() + &Label::zero(2);
            let x = IntertwinerSpec::new(State::from(monomial(&alpha, &[(2, 1)]))).unwrap();
            let mut nonzero = 0;
            for y in basis_up_to(&beta, 1) {
                for t in basis_up_to(&gamma, 2) {
                    let r = f.verify_invariance(&x, &State::from(y.clone()), &State::from(t), -3, 3).unwrap();
                    assert_pass(&r);
                    nonzero += r.nonzero();
                }
            }
            assert!(nonzero > 5);
        }
    }

    fn label1() -> impl Strategy<Value = Label> {
        gauss().prop_map(Label::scalar)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn remark_consistency(a in label1(), b in label1(), fix in prop::bool::ANY) {
            let cs = CocycleSystem::new(vec![vec![g("1/3")]], vec![vec![g("2/5")]]).unwrap().with_diagonal_fix(fix);
            let c = Intertwining::new(cs, 4);
            let f = Form::new(&c, 1).unwrap();
            let gamma = (&a + &b).neg();
            let y = State::vacuum(b.clone());
            let t = State::vacuum(gamma);
            let (l, r) = f.remark_sides(&a, &y, &t).unwrap();
            prop_assert_eq!(l, r);
        }

        #[test]
        fn a_zero_antisymmetry(b in label1()) {
            let c = ctx(1);
            let f = Form::new(&c, 1).unwrap();
            for x in basis_up_to(&b, 2) {
                for y in basis_up_to(&b.neg(), 2) {
                    let (x, y) = (State::from(x.clone()), State::from(y));
                    let l = f.gram(&apply_mode(0, 0, &x), &y).unwrap();
                    let r = f.gram(&x, &apply_mode(0, 0, &y)).unwrap();
                    prop_assert_eq!(l, -r);
                }
            }
        }
    }

    #[test]
    fn remark_detects_corruption() {
        let cs = CocycleSystem::new(vec![vec![g("1/3")]], vec![vec![g("2/5")]]).unwrap().corrupted();
        let c = Intertwining::new(cs, 4);
        let f = Form::new(&c, 1).unwrap();
        let (a, b) = (Label::scalar(g("1/2")), Label::scalar(g("3/2")));
        let (l, r) = f.remark_sides(&a, &State::vacuum(b.clone()), &State::vacuum((&a + &b).neg())).unwrap();
        assert_ne!(l, r);
    }
}
