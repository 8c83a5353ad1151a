use crate::error::{Error, Result};
use crate::fock::{Label, State};
use crate::scalars::{GaussRat, Scalar};

pub type Matrix = Vec<Vec<GaussRat>>;

/// `alpha . m . beta`.
pub fn bilinear(alpha: &Label, m: &Matrix, beta: &Label) -> GaussRat {
    let mut acc = GaussRat::zero();
    for (i, a) in alpha.components().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in beta.components().iter().enumerate() {
            if !m[i][j].is_zero() && !b.is_zero() {
                acc += &(&(a * &m[i][j]) * b);
            }
        }
    }
    acc
}

/// The two-cocycle `eps(alpha, beta) = E(alpha.f.beta) zeta^{alpha.g.beta}`,
/// optionally renormalized so that `eps(alpha, -alpha) = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct CocycleSystem {
    f: Matrix,
    g: Matrix,
    diagonal_fix: bool,
    corrupt: bool,
    rank: usize,
}

fn zero_matrix(rank: usize) -> Matrix {
    vec![vec![GaussRat::zero(); rank]; rank]
}

impl CocycleSystem {
    pub fn new(f: Matrix, g: Matrix) -> Result<Self> {
        let rank = f.len();
        for m in [&f, &g] {
            if m.len() != rank {
                return Err(Error::RankMismatch { expected: rank, got: m.len() });
            }
            if let Some(row) = m.iter().find(|r| r.len() != rank) {
                return Err(Error::RankMismatch { expected: rank, got: row.len() });
            }
        }
        Ok(CocycleSystem { f, g, diagonal_fix: false, corrupt: false, rank })
    }

    /// `eps = 1`.
    pub fn trivial(rank: usize) -> Self {
        CocycleSystem { f: zero_matrix(rank), g: zero_matrix(rank), diagonal_fix: false, corrupt: false, rank }
    }

    /// Only a `zeta` part.
    pub fn from_zeta(g: Matrix) -> Result<Self> {
        let rank = g.len();
        Self::new(zero_matrix(rank), g)
    }

    /// Only an `E` part.
    pub fn from_phase(f: Matrix) -> Result<Self> {
        let rank = f.len();
        Self::new(f, zero_matrix(rank))
    }

    pub fn with_diagonal_fix(mut self, on: bool) -> Self {
        self.diagonal_fix = on;
        self
    }

    /// Multiplies `eps` by `zeta^{(alpha.beta)^2}`: symmetric, so the
    /// commutator is unchanged, but no longer associative.
    pub fn corrupted(mut self) -> Self {
        self.corrupt = true;
        self
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn f(&self) -> &Matrix {
        &self.f
    }

    pub fn g(&self) -> &Matrix {
        &self.g
    }

    pub fn diagonal_fix(&self) -> bool {
        self.diagonal_fix
    }

    pub fn is_corrupt(&self) -> bool {
        self.corrupt
    }

    fn raw(&self, alpha: &Label, beta: &Label) -> Scalar {
        let mut s = &Scalar::phase(&bilinear(alpha, &self.f, beta)) * &Scalar::zeta_pow(&bilinear(alpha, &self.g, beta));
        if self.corrupt {
            let d = alpha.dot(beta);
            s = &s * &Scalar::zeta_pow(&(&d * &d));
        }
        s
    }

    /// The renormalization factor `eps_alpha`.
    fn diagonal_factor(&self, alpha: &Label) -> Result<Scalar> {
        let positive = alpha
            .components()
            .iter()
            .find(|c| !c.is_zero())
            .is_some_and(GaussRat::is_positive_ordered);
        if positive {
            self.raw(alpha, &alpha.neg()).invert_monomial()
        } else {
            Ok(Scalar::one())
        }
    }

    pub fn epsilon(&self, alpha: &Label, beta: &Label) -> Result<Scalar> {
        alpha.check_rank(self.rank)?;
        beta.check_rank(self.rank)?;
        let raw = self.raw(alpha, beta);
        if !self.diagonal_fix {
            return Ok(raw);
        }
        let sum = alpha + beta;
        let fix = &(&self.diagonal_factor(alpha)? * &self.diagonal_factor(beta)?) * &self.diagonal_factor(&sum)?.invert_monomial()?;
        Ok(&fix * &raw)
    }

    /// `C(alpha, beta) = eps(alpha, beta) / eps(beta, alpha)`.
    pub fn commutator(&self, alpha: &Label, beta: &Label) -> Result<Scalar> {
        Ok(&self.epsilon(alpha, beta)? * &self.epsilon(beta, alpha)?.invert_monomial()?)
    }

    /// `e^alpha`: label `beta` goes to `alpha + beta` with factor `eps(alpha, beta)`.
    pub fn apply_e(&self, alpha: &Label, s: &State) -> Result<State> {
        let mut out = State::zero();
        for (label, part) in s.by_label() {
            let eps = self.epsilon(alpha, &label)?;
            out.add_assign_ref(&part.shift_label(alpha).scale(&eps));
        }
        Ok(out)
    }

    /// `(e^alpha)^{-1}`: label `nu` goes to `nu - alpha` with factor `eps(alpha, nu - alpha)^{-1}`.
    pub fn apply_e_inv(&self, alpha: &Label, s: &State) -> Result<State> {
        let mut out = State::zero();
        let minus = alpha.neg();
        for (label, part) in s.by_label() {
            let eps = self.epsilon(alpha, &(&label - alpha))?.invert_monomial()?;
            out.add_assign_ref(&part.shift_label(&minus).scale(&eps));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::scalars::strategies::gauss;

    fn label2() -> impl Strategy<Value = Label> {
        (gauss(), gauss()).prop_map(|(a, b)| Label::new(vec![a, b]))
    }

    fn matrix2() -> impl Strategy<Value = Matrix> {
        prop::collection::vec(gauss(), 4).prop_map(|v| vec![vec![v[0].clone(), v[1].clone()], vec![v[2].clone(), v[3].clone()]])
    }

    fn system() -> impl Strategy<Value = CocycleSystem> {
        (matrix2(), matrix2(), prop::bool::ANY)
            .prop_map(|(f, g, fix)| CocycleSystem::new(f, g).unwrap().with_diagonal_fix(fix))
    }

    #[test]
    fn commutator_example() {
        let g = vec![vec![GaussRat::zero(), GaussRat::one()], vec![GaussRat::zero(), GaussRat::zero()]];
        let cs = CocycleSystem::from_zeta(g).unwrap();
        let c = cs.commutator(&Label::from_ints(&[1, 0]), &Label::from_ints(&[0, 1])).unwrap();
        assert_eq!(c, Scalar::zeta_pow(&GaussRat::one()));
    }

    #[test]
    fn e_on_vacuum() {
        let cs = CocycleSystem::from_zeta(vec![vec![GaussRat::from_ratio(1, 3)]]).unwrap();
        let a = Label::scalar("1/2+i".parse().unwrap());
        let e = cs.apply_e(&a, &State::vacuum(Label::zero(1))).unwrap();
        assert_eq!(e, State::vacuum(a.clone()));
        assert_eq!(cs.apply_e_inv(&a, &e).unwrap(), State::vacuum(Label::zero(1)));
    }

    #[test]
    fn rank_checked() {
        let cs = CocycleSystem::trivial(2);
        assert!(matches!(cs.epsilon(&Label::zero(1), &Label::zero(2)), Err(Error::RankMismatch { .. })));
        assert!(CocycleSystem::new(zero_matrix(2), zero_matrix(3)).is_err());
    }

    #[test]
    fn corruption_breaks_associativity_only() {
        let cs = CocycleSystem::from_zeta(vec![vec![GaussRat::from_ratio(1, 2)]]).unwrap().corrupted();
        let (a, b, c) = (Label::from_ints(&[1]), Label::from_ints(&[1]), Label::from_ints(&[2]));
        let l = &cs.epsilon(&a, &b).unwrap() * &cs.epsilon(&(&a + &b), &c).unwrap();
        let r = &cs.epsilon(&b, &c).unwrap() * &cs.epsilon(&a, &(&b + &c)).unwrap();
        assert_ne!(l, r);
        let clean = CocycleSystem::from_zeta(vec![vec![GaussRat::from_ratio(1, 2)]]).unwrap();
        assert_eq!(cs.commutator(&a, &c).unwrap(), clean.commutator(&a, &c).unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn unit_and_associative(cs in system(), a in label2(), b in label2(), c in label2()) {
            let zero = Label::zero(2);
            prop_assert!(cs.epsilon(&a, &zero).unwrap().is_one());
            prop_assert!(cs.epsilon(&zero, &a).unwrap().is_one());
            let l = &cs.epsilon(&a, &b).unwrap() * &cs.epsilon(&(&a + &b), &c).unwrap();
            let r = &cs.epsilon(&b, &c).unwrap() * &cs.epsilon(&a, &(&b + &c)).unwrap();
            prop_assert_eq!(l, r);
        }

        #[test]
        fn commutator_bilinear_skew(cs in system(), a in label2(), b in label2(), c in label2()) {
            let cab = cs.commutator(&a, &b).unwrap();
            let cba = cs.commutator(&b, &a).unwrap();
            prop_assert!((&cab * &cba).is_one());
            prop_assert!(cs.commutator(&a, &a).unwrap().is_one());
            prop_assert!(cs.commutator(&a, &a.neg()).unwrap().is_one());
            let lhs = cs.commutator(&(&a + &b), &c).unwrap();
            let rhs = &cs.commutator(&a, &c).unwrap() * &cs.commutator(&b, &c).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn diagonal_fix_properties(f in matrix2(), g in matrix2(), a in label2(), b in label2()) {
            let plain = CocycleSystem::new(f, g).unwrap();
            let fixed = plain.clone().with_diagonal_fix(true);
            prop_assert!(fixed.epsilon(&a, &a.neg()).unwrap().is_one());
            prop_assert_eq!(plain.commutator(&a, &b).unwrap(), fixed.commutator(&a, &b).unwrap());
        }

        #[test]
        fn e_operators(cs in system(), a in label2(), b in label2(), c in label2()) {
            let s = State::vacuum(c);
            let ab = cs.apply_e(&a, &cs.apply_e(&b, &s).unwrap()).unwrap();
            let direct = cs.apply_e(&(&a + &b), &s).unwrap().scale(&cs.epsilon(&a, &b).unwrap());
            prop_assert_eq!(&ab, &direct);
            let ba = cs.apply_e(&b, &cs.apply_e(&a, &s).unwrap()).unwrap();
            prop_assert_eq!(&ab, &ba.scale(&cs.commutator(&a, &b).unwrap()));
            prop_assert_eq!(cs.apply_e_inv(&a, &cs.apply_e(&a, &s).unwrap()).unwrap(), s);
        }
    }
}
