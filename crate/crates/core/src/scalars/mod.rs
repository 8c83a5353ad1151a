//! Exact coefficient arithmetic.

mod gauss;
mod scalar;

pub use gauss::{binom, binom_int, GaussRat};
pub use scalar::{branch_phase, Scalar, Unit};


#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::strategies::*;
    use super::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn ring_axioms(a in scalar(), b in scalar(), c in scalar()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn branch_phase_is_homomorphism(k1 in gauss(), k2 in gauss(), n in -3i64..=3) {
            let n = 2 * n + 1;
            let lhs = branch_phase(&(&k1 + &k2), n).unwrap();
            let rhs = &branch_phase(&k1, n).unwrap() * &branch_phase(&k2, n).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn stored_phase_exponent_is_reduced(k in gauss()) {
            let p = Scalar::phase(&k);
            let (unit, _) = p.terms().next().unwrap();
            let (floor, _) = unit.e_exp().split_floor();
            prop_assert_eq!(floor, num_bigint::BigInt::from(0));
        }
    }
}
