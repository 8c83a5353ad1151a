use proptest::prelude::*;

use super::*;
use crate::fock::{apply_mode, basis_up_to, monomial, virasoro_mode, State};
use crate::form::Form;
use crate::intertwiner::{IntertwinerSpec, Intertwining};
use crate::scalars::branch_phase;

fn g(s: &str) -> GaussRat {
    s.parse().unwrap()
}

fn lat(gram: &[&[i64]]) -> IntegralLattice {
    IntegralLattice::new(gram.iter().map(|r| r.to_vec()).collect()).unwrap()
}

fn ctx_for(l: &IntegralLattice, cutoff: usize) -> Intertwining {
    Intertwining::new(lattice_cocycle(l), cutoff)
}

fn sign(odd: bool) -> Scalar {
    Scalar::int(if odd { -1 } else { 1 })
}

fn test_grams() -> Vec<Vec<Vec<i64>>> {
    vec![vec![vec![1]], vec![vec![2]], vec![vec![2, 1], vec![1, 2]], vec![vec![1, 0], vec![0, 1]], vec![vec![3, 1], vec![1, 1]]]
}

fn assert_pass(r: &crate::report::VerificationReport) {
    assert!(r.all_pass(), "{}", r.render(true));
}

fn vac(l: &Label) -> State {
    State::vacuum(l.clone())
}

fn a1(l: &Label) -> State {
    State::from(monomial(l, &[(1, 1)]))
}

fn omega(rank: usize) -> State {
    let zero = Label::zero(rank);
    let mut w = State::zero();
    for c in 1..=rank {
        w.add_assign_ref(&State::from(monomial(&zero, &[(c, 1), (c, 1)])));
    }
    w.scale_gauss(&g("1/2"))
}

#[test]
fn embedding_reproduces_gram() {
    for gram in test_grams() {
        let l = IntegralLattice::new(gram.clone()).unwrap();
        for i in 0..l.rank() {
            for j in 0..l.rank() {
                let mut ei = vec![0; l.rank()];
                let mut ej = vec![0; l.rank()];
                ei[i] = 1;
                ej[j] = 1;
                assert_eq!(l.vector(&ei).dot(&l.vector(&ej)), GaussRat::int(gram[i][j]));
            }
        }
    }
    assert_eq!(lat(&[&[1]]).dim(), 1);
    assert_eq!(lat(&[&[4]]).dim(), 1);
    assert_eq!(lat(&[&[2]]).dim(), 2);
}

#[test]
fn lattice_errors() {
    assert_eq!(IntegralLattice::new(vec![vec![1, 0], vec![1, 1]]), Err(Error::NonSymmetricGram));
    assert_eq!(IntegralLattice::new(vec![vec![1, 2], vec![2, 1]]), Err(Error::NotPositiveDefinite));
    let l = lat(&[&[1]]);
    assert!(matches!(l.coordinates(&Label::scalar(g("1/2"))), Err(Error::NotInLattice(_))));
    assert_eq!(l.coordinates(&Label::scalar(g("-3"))).unwrap(), vec![-3]);
}

#[test]
fn parity_examples() {
    let z = lat(&[&[1]]);
    let a1l = lat(&[&[2]]);
    assert_eq!(z.parity(&z.vector(&[1])).unwrap(), 1);
    assert_eq!(a1l.parity(&a1l.vector(&[1])).unwrap(), 0);
    assert_eq!(z.parity(&z.vector(&[0])).unwrap(), 0);
    assert_eq!(z.parity(&z.vector(&[2])).unwrap(), 0);
}

#[test]
fn cocycle_commutator_examples() {
    let z = lat(&[&[1]]);
    let one = z.vector(&[1]);
    assert_eq!(lattice_cocycle(&z).commutator(&one, &one).unwrap(), Scalar::one());
    let a = lat(&[&[2]]);
    let one = a.vector(&[1]);
    assert_eq!(lattice_cocycle(&a).commutator(&one, &one).unwrap(), Scalar::one());
    let z2 = lat(&[&[1, 0], &[0, 1]]);
    let c = lattice_cocycle(&z2).commutator(&z2.vector(&[1, 0]), &z2.vector(&[0, 1])).unwrap();
    assert_eq!(c, Scalar::int(-1));
}

#[test]
fn cocycle_commutator_on_basis_pairs() {
    for gram in test_grams() {
        let l = IntegralLattice::new(gram.clone()).unwrap();
        let cs = lattice_cocycle(&l);
        for i in 0..l.rank() {
            for j in 0..l.rank() {
                let mut ei = vec![0; l.rank()];
                let mut ej = vec![0; l.rank()];
                ei[i] = 1;
                ej[j] = 1;
                let want = sign((gram[i][j] + gram[i][i] * gram[j][j]) % 2 == 1);
                assert_eq!(cs.commutator(&l.vector(&ei), &l.vector(&ej)).unwrap(), want, "gram {gram:?} pair ({i}, {j})");
            }
        }
    }
}

proptest! {
    #[test]
    fn cocycle_commutator_everywhere(gi in 0usize..5, n in prop::collection::vec(-3i64..=3, 2), m in prop::collection::vec(-3i64..=3, 2)) {
        let gram = test_grams()[gi].clone();
        let l = IntegralLattice::new(gram).unwrap();
        let (n, m) = (&n[..l.rank()], &m[..l.rank()]);
        let (a, b) = (l.vector(n), l.vector(m));
        prop_assert_eq!(l.coordinates(&a).unwrap(), n.to_vec());
        let e = l.pairing(n, m) + l.pairing(n, n) * l.pairing(m, m);
        prop_assert_eq!(lattice_cocycle(&l).commutator(&a, &b).unwrap(), sign(e.rem_euclid(2) == 1));
        prop_assert_eq!(l.commutator(&a, &b).unwrap(), sign(e.rem_euclid(2) == 1));
    }
}

#[test]
fn twisted_mode_examples() {
    let l = lat(&[&[1, 0], &[0, 1]]);
    let alpha = Label::new(vec![g("1/2"), g("1/3*i")]);
    let td = TwistData::new(&l, alpha.clone()).unwrap();
    let mu = l.vector(&[1, -2]);
    let s = vac(&mu);
    let shifted = &mu + &alpha;
    for i in 0..2 {
        assert_eq!(td.twisted_mode(Mode::Heisenberg(i, 0), &s), s.scale_gauss(shifted.component(i)));
    }
    let half = &shifted.norm2() * &g("1/2");
    assert_eq!(td.twisted_mode(Mode::Virasoro(0), &s), s.scale_gauss(&half));
    let plain = TwistData::new(&l, Label::zero(2)).unwrap();
    let t = State::from(monomial(&mu, &[(1, 2), (2, 1)]));
    for n in -2..=2 {
        assert_eq!(plain.twisted_mode(Mode::Virasoro(n), &t), virasoro_mode(n, &t));
        assert_eq!(plain.twisted_mode(Mode::Heisenberg(1, n), &t), apply_mode(1, n, &t));
    }
}

#[test]
fn twisted_modes_are_conjugated_modes() {
    let l = lat(&[&[2, 1], &[1, 2]]);
    assert_eq!(l.dim(), 4);
    let alpha = Label::new(vec![g("1/2"), g("-1/3"), g("1/5+i"), g("0")]);
    let td = TwistData::new(&l, alpha.clone()).unwrap();
    let mu = l.vector(&[1, 1]);
    let back = alpha.neg();
    for m in basis_up_to(&mu, 2) {
        let s = State::from(m);
        for n in -2..=2 {
            let conj = virasoro_mode(n, &s.shift_label(&alpha)).shift_label(&back);
            assert_eq!(td.twisted_mode(Mode::Virasoro(n), &s), conj);
            for i in 0..l.dim() {
                let conj = apply_mode(i, n, &s.shift_label(&alpha)).shift_label(&back);
                assert_eq!(td.twisted_mode(Mode::Heisenberg(i, n), &s), conj);
            }
        }
    }
}

#[test]
fn twisted_algebras() {
    let l = lat(&[&[1, 0], &[0, 1]]);
    let td = TwistData::new(&l, Label::new(vec![g("1/2"), g("-1/3+i")])).unwrap();
    let states: Vec<State> = basis_up_to(&l.vector(&[1, 0]), 2).into_iter().map(State::from).collect();
    assert_pass(&td.verify_heisenberg_algebra(&states, (-2, 2)));
    assert_pass(&td.verify_twisted_virasoro(&states, (-3, 3)));
}

#[test]
fn shifted_virasoro_central_charge() {
    let l = lat(&[&[1]]);
    for a in ["1/2", "1/3", "1/2*i"] {
        let td = TwistData::new(&l, Label::scalar(g(a))).unwrap();
        let c = td.shifted_central_charge();
        assert_eq!(c, &GaussRat::int(1) - &(&g(a) * &g(a)).scale_int(12));
        let mut states = Vec::new();
        for mu in [0, 1] {
            states.extend(basis_up_to(&l.vector(&[mu]), 4).into_iter().filter(|m| m.weight().re() <= &num_rational::BigRational::from_integer(4.into())).map(State::from));
        }
        assert_pass(&td.verify_shifted_virasoro(&states, (-3, 3)));
        assert_pass(&td.verify_shifted_grading(&states));
        // [L_a(2), L_a(-2)] 1 = (4 L_a(0) + c_a / 2) 1
        let v = vac(&Label::zero(1));
        let left = &td.shifted_virasoro(2, &td.shifted_virasoro(-2, &v)) - &td.shifted_virasoro(-2, &td.shifted_virasoro(2, &v));
        let mut right = td.shifted_virasoro(0, &v).scale_gauss(&GaussRat::int(4));
        right.add_assign_ref(&v.scale_gauss(&(&c * &g("1/2"))));
        assert_eq!(left, right);
        // L_a(0) - c_a/24 = L_g(0) - l/24
        for s in &states {
            let lhs = &td.shifted_virasoro(0, s) - &s.scale_gauss(&(&c * &g("1/24")));
            let rhs = &td.twisted_mode(Mode::Virasoro(0), s) - &s.scale_gauss(&g("1/24"));
            assert_eq!(lhs, rhs);
            assert_eq!(td.shifted_virasoro(0, s), &virasoro_mode(0, s) + &crate::fock::alpha_mode(td.alpha(), 0, s));
        }
    }
}

#[test]
fn twisted_vertex_examples() {
    let l = lat(&[&[1]]);
    let ctx = ctx_for(&l, 8);
    let zero = Label::zero(1);
    let one = l.vector(&[1]);
    // alpha = 0: ordinary lattice vertex operator
    let plain = TwistData::new(&l, zero.clone()).unwrap();
    let x = a1(&one);
    let t = a1(&l.vector(&[-1]));
    let got = plain.twisted_vertex(&ctx, &x, &t, -3, 2).unwrap();
    let want = ctx.intertwine(&IntertwinerSpec::new(x.clone()).unwrap(), &t, -3, 2).unwrap();
    assert_eq!(got.agrees_with(&want).unwrap(), Some(true));
    // vacuum acts as the identity
    let td = TwistData::new(&l, Label::scalar(g("1/2"))).unwrap();
    let t = State::from(monomial(&l.vector(&[2]), &[(1, 2)]));
    let series = td.twisted_vertex(&ctx, &vac(&zero), &t, -3, 3).unwrap();
    for k in -3..=3 {
        let c = series.coeff(k).unwrap();
        assert_eq!(c, if k == 0 { t.clone() } else { State::zero() });
    }
    // leading term on the vacuum
    let series = td.twisted_vertex(&ctx, &vac(&one), &vac(&zero), 0, 2).unwrap();
    assert_eq!(series.offset(), &g("1/2"));
    let eps = ctx.cocycle().epsilon(&one, &zero).unwrap();
    assert_eq!(series.coeff(0).unwrap(), vac(&one).scale(&eps));
    // modes of Y_g(a(-1) 1, z) are a_g(n), modes of Y_g(omega, z) are L_g(n)
    let s = State::from(monomial(&one, &[(1, 1)]));
    let a = a1(&zero);
    let w = omega(1);
    for n in -2..=2 {
        let c = td.twisted_coefficient(&ctx, &a, &s, &GaussRat::int(-n - 1)).unwrap();
        assert_eq!(c, td.twisted_mode(Mode::Heisenberg(0, n), &s));
        let c = td.twisted_coefficient(&ctx, &w, &s, &GaussRat::int(-n - 2)).unwrap();
        assert_eq!(c, td.twisted_mode(Mode::Virasoro(n), &s));
    }
}

#[test]
fn li_equivalence() {
    let l = lat(&[&[1]]);
    let ctx = ctx_for(&l, 8);
    let td = TwistData::new(&l, Label::scalar(g("1/2"))).unwrap();
    let one = l.vector(&[1]);
    let zero = Label::zero(1);
    let r = td.verify_li_equivalence(&ctx, &vac(&one), &vac(&zero), -1, 2).unwrap();
    assert_pass(&r);
    assert!(r.records.iter().all(|rec| (&rec.exponents[0] - &g("1/2")).is_integer()));
    assert!(r.nonzero() >= 3);
    let td = TwistData::new(&l, Label::scalar(g("1/3-1/2*i"))).unwrap();
    assert_pass(&td.verify_li_equivalence(&ctx, &a1(&l.vector(&[-1])), &a1(&l.vector(&[2])), -3, 3).unwrap());
    let z2 = lat(&[&[1, 0], &[0, 1]]);
    let ctx2 = ctx_for(&z2, 6);
    let td = TwistData::new(&z2, Label::new(vec![g("1/2"), g("1/4*i")])).unwrap();
    let r = td.verify_li_equivalence(&ctx2, &a1(&z2.vector(&[1, 1])), &vac(&z2.vector(&[0, 1])), -2, 2).unwrap();
    assert_pass(&r);
    let labels: Vec<Label> = (-1..=1).map(|n| l.vector(&[n])).collect();
    let td = TwistData::new(&l, Label::scalar(g("1/2"))).unwrap();
    assert_pass(&td.verify_grading(&labels, 3).unwrap());
}

#[test]
fn twisted_jacobi_example() {
    let l = lat(&[&[1]]);
    let ctx = ctx_for(&l, 8);
    let td = TwistData::new(&l, Label::scalar(g("1/2"))).unwrap();
    let one = l.vector(&[1]);
    let s = vac(td.alpha());
    let r = td.verify_twisted_jacobi(&ctx, &vac(&one), &vac(&one), &s, -3, 3).unwrap();
    assert_pass(&r);
    assert!(r.nonzero() > 20);
    // odd . odd: the parity sign is -1
    assert_eq!(l.parity_sign(&one, &one).unwrap(), Scalar::int(-1));
}

#[test]
fn twisted_jacobi_with_fock_parts() {
    let l = lat(&[&[1, 0], &[0, 1]]);
    let ctx = ctx_for(&l, 8);
    let alpha = Label::new(vec![g("1/3"), g("-1/2*i")]);
    let td = TwistData::new(&l, alpha.clone()).unwrap();
    let x = a1(&l.vector(&[1, 0]));
    let y = vac(&l.vector(&[0, 1]));
    let s = vac(&(&l.vector(&[1, 1]) + &alpha));
    assert_pass(&td.verify_twisted_jacobi(&ctx, &x, &y, &s, -2, 2).unwrap());
    // untwisted: the lattice vertex superalgebra itself
    let plain = TwistData::new(&l, Label::zero(2)).unwrap();
    let r = plain.verify_twisted_jacobi(&ctx, &x, &y, &vac(&l.vector(&[1, 0])), -2, 2).unwrap();
    assert_pass(&r);
    // a cocycle with the wrong commutator breaks it
    let bad = Intertwining::new(crate::intertwiner::CocycleSystem::trivial(2), 8);
    let r = td.verify_twisted_jacobi(&bad, &x, &y, &s, -2, 2).unwrap();
    assert!(r.nonzero() > 0 && !r.all_pass());
}

#[test]
fn eta_example() {
    let l = lat(&[&[1]]);
    let e = eta(&Label::scalar(g("1/2")), &l.vector(&[1]), &Label::scalar(g("1/3")), &l.vector(&[2]));
    assert_eq!(e, g("-3/2"));
}

#[test]
fn dlm_prefactor_example() {
    let l = lat(&[&[1]]);
    let ctx = ctx_for(&l, 6);
    let one = l.vector(&[1]);
    let half = Label::scalar(g("1/2"));
    let zero = Label::zero(1);
    let d = Dlm::new(&ctx, &l, DlmVariant::Delta, 1).unwrap();
    let h = Dlm::new(&ctx, &l, DlmVariant::Hat, 1).unwrap();
    let cs = ctx.cocycle();
    let ratio = &cs.epsilon(&one, &one).unwrap() * &cs.epsilon(&(&one + &half), &one).unwrap().invert_monomial().unwrap();
    assert_eq!(d.prefactor(&one, &half, &one, &zero).unwrap(), &Scalar::phase(&g("1/2")) * &ratio);
    assert_eq!(h.prefactor(&one, &half, &one, &zero).unwrap(), ratio);
    assert!(matches!(Dlm::new(&ctx, &l, DlmVariant::Delta, 2), Err(Error::EvenBranch(2))));
}

#[test]
fn dlm_untwisted_is_lattice_operator() {
    let l = lat(&[&[1]]);
    let ctx = ctx_for(&l, 7);
    let zero = Label::zero(1);
    let x = a1(&l.vector(&[1]));
    let t = State::from(monomial(&l.vector(&[-2]), &[(1, 2)]));
    for variant in [DlmVariant::Delta, DlmVariant::Hat] {
        let d = Dlm::new(&ctx, &l, variant, 1).unwrap();
        let got = d.vertex(&x, &zero, &t, &zero, -4, 2).unwrap();
        let want = ctx.intertwine(&IntertwinerSpec::new(x.clone()).unwrap(), &t, -4, 2).unwrap();
        assert_eq!(got.agrees_with(&want).unwrap(), Some(true));
    }
}

#[test]
fn dlm_definition_matches_closed_form() {
    let l = lat(&[&[1]]);
    let ctx = ctx_for(&l, 8);
    let al = Label::scalar(g("1/2"));
    let be = Label::scalar(g("1/3+i"));
    let cases = [
        (vac(&(&l.vector(&[1]) + &al)), vac(&(&l.vector(&[1]) + &be))),
        (a1(&(&l.vector(&[-1]) + &al)), vac(&(&l.vector(&[2]) + &be))),
        (a1(&(&l.vector(&[1]) + &al)), State::from(monomial(&(&l.vector(&[0]) + &be), &[(1, 2), (1, 1)]))),
    ];
    for n in [1, -1, 3] {
        for variant in [DlmVariant::Delta, DlmVariant::Hat] {
            let d = Dlm::new(&ctx, &l, variant, n).unwrap();
            for (x, t) in &cases {
                let r = d.verify_closed_form(x, &al, t, &be, -4, 3).unwrap();
                assert_pass(&r);
                assert!(r.nonzero() > 0);
            }
        }
    }
}

#[test]
fn dlm_commutator_values() {
    let l = lat(&[&[1]]);
    let ctx = ctx_for(&l, 6);
    let (a1l, a2l) = (Label::scalar(g("1/2")), Label::scalar(g("1/3")));
    let (m1, m2) = (l.vector(&[1]), l.vector(&[1]));
    let d1 = Dlm::new(&ctx, &l, DlmVariant::Delta, 1).unwrap();
    let d3 = Dlm::new(&ctx, &l, DlmVariant::Delta, 3).unwrap();
    let h = Dlm::new(&ctx, &l, DlmVariant::Hat, 1).unwrap();
    let e = &a1l.dot(&m2) - &a2l.dot(&m1);
    assert_eq!(d1.commutator(&m1, &a1l, &m2, &a2l).unwrap(), &branch_phase(&e, 1).unwrap() * &Scalar::int(-1));
    assert_ne!(d1.commutator(&m1, &a1l, &m2, &a2l).unwrap(), d3.commutator(&m1, &a1l, &m2, &a2l).unwrap());
    assert_eq!(h.commutator(&m1, &a1l, &m2, &a2l).unwrap(), Scalar::int(-1));
}

#[test]
fn dlm_jacobi_untwisted() {
    let l = lat(&[&[1]]);
    let ctx = ctx_for(&l, 7);
    let zero = Label::zero(1);
    let d = Dlm::new(&ctx, &l, DlmVariant::Delta, 1).unwrap();
    let (x, y, s) = (vac(&l.vector(&[1])), a1(&l.vector(&[1])), vac(&l.vector(&[-1])));
    assert_pass(&d.verify_jacobi((&x, &zero), (&y, &zero), (&s, &zero), -2, 2).unwrap());
}

#[test]
fn dlm_jacobi_both_variants_any_branch() {
    let l = lat(&[&[1]]);
    let ctx = ctx_for(&l, 7);
    let (a1l, a2l, a3l) = (Label::scalar(g("1/2")), Label::scalar(g("1/3")), Label::scalar(g("-1/4")));
    let x = vac(&(&l.vector(&[1]) + &a1l));
    let y = vac(&(&l.vector(&[1]) + &a2l));
    let s = vac(&(&l.vector(&[0]) + &a3l));
    for variant in [DlmVariant::Delta, DlmVariant::Hat] {
        for n in [1, 3, -1] {
            let d = Dlm::new(&ctx, &l, variant, n).unwrap();
            let r = d.verify_jacobi((&x, &a1l), (&y, &a2l), (&s, &a3l), -2, 2).unwrap();
            assert_pass(&r);
            assert!(r.nonzero() > 10);
        }
    }
}

#[test]
fn dlm_jacobi_with_fock_parts() {
    let l = lat(&[&[1, 0], &[0, 1]]);
    let ctx = ctx_for(&l, 7);
    let a1l = Label::new(vec![g("1/2"), g("0")]);
    let a2l = Label::new(vec![g("0"), g("1/3*i")]);
    let a3l = Label::new(vec![g("1/5"), g("1/5")]);
    let x = a1(&(&l.vector(&[1, 0]) + &a1l));
    let y = vac(&(&l.vector(&[1, 1]) + &a2l));
    let s = vac(&(&l.vector(&[0, 1]) + &a3l));
    let d = Dlm::new(&ctx, &l, DlmVariant::Delta, 1).unwrap();
    assert_pass(&d.verify_jacobi((&x, &a1l), (&y, &a2l), (&s, &a3l), -1, 1).unwrap());
}

#[test]
fn invariant_form_on_lattice_vosa() {
    let l = lat(&[&[1]]);
    let ctx = ctx_for(&l, 8);
    for n in [1, -1] {
        let form = Form::new(&ctx, n).unwrap();
        let x = IntertwinerSpec::new(a1(&l.vector(&[1]))).unwrap();
        let y = vac(&l.vector(&[-2]));
        let t = a1(&l.vector(&[1]));
        let r = form.verify_invariance(&x, &y, &t, -2, 2).unwrap();
        assert_pass(&r);
        assert!(r.nonzero() > 0);
    }
}
