//! Modes of the untwisted vertex operators `Y(u, z)` for `u` in `M_0`, acting on any `M_beta`.
//!
//! For `u = a^{i1}(-k1) ... a^{ir}(-kr) 1` the field is the normal-ordered product
//! of the derivative fields `d^{k-1}/(k-1)! a^i(z) = sum_m binom(-m-1, k-1) a^i(m) z^{-m-k}`,
//! which is what the recursion `Y(a(-k-1) v, z) = :d^k a(z)/k! Y(v, z):` unfolds to.
//! Annihilation modes (`m >= 0`) stand to the right.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::modes::apply_mode_mono;
use super::{FockMonomial, Part, State};
use crate::error::{Error, Result};
use crate::scalars::{binom_int, GaussRat, Scalar};

fn derivative_weight(m: i64, k: u32) -> BigInt {
    binom_int(-m - 1, (k - 1) as u64)
}

/// Ordered compositions of `total` into `count` positive parts.
fn compositions(total: i64, count: usize, f: &mut dyn FnMut(&[i64])) {
    fn rec(remaining: i64, slots: usize, acc: &mut Vec<i64>, f: &mut dyn FnMut(&[i64])) {
        if slots == 0 {
            if remaining == 0 {
                f(acc);
            }
            return;
        }
        let max = remaining - (slots as i64 - 1);
        for v in 1..=max {
            acc.push(v);
            rec(remaining - v, slots - 1, acc, f);
            acc.pop();
        }
    }
    if count == 0 {
        if total == 0 {
            f(&[]);
        }
        return;
    }
    if total < count as i64 {
        return;
    }
    rec(total, count, &mut Vec::with_capacity(count), f);
}

/// `u(n) t` for a single `M_0` monomial `u` and a single target monomial `t`.
fn mode_on_monomial(u: &[Part], n: i64, t: &FockMonomial) -> State {
    let weight: i64 = u.iter().map(|p| p.level as i64).sum();
    let total = n + 1 - weight;
    let r = u.len();
    let depth = t.depth() as i64;
    let mut out = State::zero();
    for mask in 0u32..(1 << r) {
        let ann: Vec<usize> = (0..r).filter(|j| mask & (1 << j) != 0).collect();
        let cre: Vec<usize> = (0..r).filter(|j| mask & (1 << j) == 0).collect();
        let start = State::from(t.clone());
        annihilators(u, &ann, 0, depth, &start, BigInt::from(1), 0, &mut |inner, factor, ann_sum| {
            let creator_total = ann_sum - total;
            compositions(creator_total, cre.len(), &mut |levels| {
                let mut factor = factor.clone();
                for (slot, &j) in cre.iter().enumerate() {
                    factor *= derivative_weight(-levels[slot], u[j].level);
                }
                if factor == BigInt::from(0) {
                    return;
                }
                let scalar = Scalar::from(GaussRat::real(BigRational::from_integer(factor)));
                for (mono, c) in inner.iter() {
                    let mut m = mono.clone();
                    for (slot, &j) in cre.iter().enumerate() {
                        m = m.insert(Part { color: u[j].color, level: levels[slot] as u32 });
                    }
                    out.add_term(m, c * &scalar);
                }
            });
        });
    }
    out
}

/// Enumerates annihilation indices `m >= 0` for the parts in `ann`, applying
/// them to `inner`; positive indices may total at most `budget`.
#[allow(clippy::too_many_arguments)]
fn annihilators(
    u: &[Part],
    ann: &[usize],
    slot: usize,
    budget: i64,
    inner: &State,
    factor: BigInt,
    ann_sum: i64,
    f: &mut dyn FnMut(&State, &BigInt, i64),
) {
    if slot == ann.len() {
        f(inner, &factor, ann_sum);
        return;
    }
    let part = u[ann[slot]];
    for m in 0..=budget {
        let w = derivative_weight(m, part.level);
        if w == BigInt::from(0) {
            continue;
        }
        let mut next = State::zero();
        for (mono, c) in inner.iter() {
            next.add_scaled(&apply_mode_mono(part.color, m, mono), c);
        }
        if next.is_zero() {
            continue;
        }
        annihilators(u, ann, slot + 1, budget - m, &next, &factor * &w, ann_sum + m, f);
    }
}

/// The mode `u(n)` of `Y(u, z) = sum_n u(n) z^{-n-1}` applied to `s`.
/// `u` must lie in `M_0`; `s` may have any labels.
pub fn vertex_mode(u: &State, n: i64, s: &State) -> Result<State> {
    let mut out = State::zero();
    for (um, uc) in u.iter() {
        if !um.label().is_zero() {
            return Err(Error::NonzeroLabel(um.label().to_string()));
        }
        for (t, tc) in s.iter() {
            let image = mode_on_monomial(um.parts(), n, t);
            out.add_scaled(&image, &(uc * tc));
        }
    }
    Ok(out)
}

/// The coefficient of `z^e` in `Y(u, z) s`, i.e. `u(-e-1) s`.
pub fn field_coefficient(u: &State, e: i64, s: &State) -> Result<State> {
    vertex_mode(u, -e - 1, s)
}

#[cfg(test)]
mod tests {
    use super::super::{apply_mode, basis_up_to, monomial, virasoro_mode, Label};
    use super::*;

    #[test]
    fn generator_field_is_the_mode() {
        let a = State::from(monomial(&Label::zero(2), &[(2, 1)]));
        let target = Label::new(vec!["1/2".parse().unwrap(), "i".parse().unwrap()]);
        for t in basis_up_to(&target, 3) {
            let s = State::from(t);
            for n in -4..=4 {
                assert_eq!(vertex_mode(&a, n, &s).unwrap(), apply_mode(1, n, &s));
            }
        }
    }

    #[test]
    fn vacuum_field_is_identity() {
        let vac = State::vacuum(Label::zero(1));
        let s = State::from(monomial(&Label::scalar(GaussRat::from_ratio(1, 3)), &[(1, 2)]));
        assert_eq!(vertex_mode(&vac, -1, &s).unwrap(), s);
        assert!(vertex_mode(&vac, 0, &s).unwrap().is_zero());
        assert!(vertex_mode(&vac, -2, &s).unwrap().is_zero());
    }

    #[test]
    fn creativity() {
        let vac = State::vacuum(Label::zero(2));
        for u in basis_up_to(&Label::zero(2), 4) {
            let u = State::from(u);
            assert_eq!(vertex_mode(&u, -1, &vac).unwrap(), u);
            for n in 0..4 {
                assert!(vertex_mode(&u, n, &vac).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn conformal_vector_modes_match_virasoro() {
        let zero = Label::zero(1);
        let omega = State::from(monomial(&zero, &[(1, 1), (1, 1)])).scale_gauss(&GaussRat::from_ratio(1, 2));
        for label in [Label::zero(1), Label::scalar("1/2-i".parse().unwrap())] {
            for t in basis_up_to(&label, 4) {
                let s = State::from(t);
                for n in -3..=3 {
                    assert_eq!(vertex_mode(&omega, n + 1, &s).unwrap(), virasoro_mode(n, &s));
                }
            }
        }
    }

    #[test]
    fn rejects_labelled_head() {
        let u = State::vacuum(Label::scalar(GaussRat::one()));
        assert!(matches!(vertex_mode(&u, 0, &u), Err(Error::NonzeroLabel(_))));
    }
}
