use super::{FockMonomial, Label, Part, State};
use crate::scalars::{GaussRat, Scalar};

/// `a^color(n)` on a single monomial.
pub(crate) fn apply_mode_mono(color: usize, n: i64, m: &FockMonomial) -> State {
    match n.cmp(&0) {
        std::cmp::Ordering::Less => State::from(m.insert(Part { color, level: (-n) as u32 })),
        std::cmp::Ordering::Equal => {
            let value = m.label().component(color);
            if value.is_zero() {
                State::zero()
            } else {
                State::term(m.clone(), Scalar::from(value.clone()))
            }
        }
        std::cmp::Ordering::Greater => {
            if n as usize > m.depth() {
                return State::zero();
            }
            match m.remove(Part { color, level: n as u32 }) {
                Some((count, rest)) => State::term(rest, Scalar::int(n * count as i64)),
                None => State::zero(),
            }
        }
    }
}

/// The Heisenberg mode `a^color(n)`: creation for `n < 0`, the label
/// component for `n = 0`, contraction with `[a^i(n), a^j(m)] = n delta` for `n > 0`.
pub fn apply_mode(color: usize, n: i64, s: &State) -> State {
    let mut out = State::zero();
    for (m, c) in s.iter() {
        out.add_scaled(&apply_mode_mono(color, n, m), c);
    }
    out
}

/// `alpha(n) = sum_i alpha^i a^i(n)`.
pub fn alpha_mode(alpha: &Label, n: i64, s: &State) -> State {
    let mut out = State::zero();
    for (i, a) in alpha.components().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let image = apply_mode(i, n, s);
        out.add_scaled(&image, &Scalar::from(a.clone()));
    }
    out
}

fn normal_pair(color: usize, p: i64, q: i64, m: &FockMonomial) -> State {
    // annihilator (index >= 0) acts first
    let (first, second) = if p >= 0 && q < 0 { (p, q) } else { (q, p) };
    let inner = apply_mode_mono(color, first, m);
    apply_mode(color, second, &inner)
}

/// `L(n) = 1/2 sum_i sum_m :a^i(n-m) a^i(m):`, evaluated directly.
pub fn virasoro_mode(n: i64, s: &State) -> State {
    let half = GaussRat::from_ratio(1, 2);
    let mut out = State::zero();
    for (m, c) in s.iter() {
        let depth = m.depth() as i64;
        let lo = (n - depth).min(0);
        let hi = depth.max(0);
        let mut acc = State::zero();
        for color in 0..m.label().rank() {
            for k in lo..=hi {
                acc.add_assign_ref(&normal_pair(color, n - k, k, m));
            }
        }
        out.add_scaled(&acc.scale_gauss(&half), c);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::{basis_up_to, monomial};
    use super::*;

    fn vac(rank: usize) -> State {
        State::vacuum(Label::zero(rank))
    }

    #[test]
    fn heisenberg_examples() {
        let s = apply_mode(0, -1, &vac(1));
        assert_eq!(apply_mode(0, 1, &s), vac(1));
        assert!(apply_mode(0, 2, &s).is_zero());
        let alpha = Label::scalar("1/2+i".parse().unwrap());
        let e = State::vacuum(alpha.clone());
        assert_eq!(apply_mode(0, 0, &e), e.scale_gauss(alpha.component(0)));
    }

    #[test]
    fn l0_on_level_two() {
        let s = State::from(monomial(&Label::zero(1), &[(1, 2)]));
        assert_eq!(virasoro_mode(0, &s), s.scale_gauss(&GaussRat::int(2)));
    }

    #[test]
    fn l0_eigenvalue_is_weight() {
        let label = Label::new(vec!["1/3".parse().unwrap(), "-i".parse().unwrap()]);
        for m in basis_up_to(&label, 4) {
            let s = State::from(m.clone());
            assert_eq!(virasoro_mode(0, &s), s.scale_gauss(&m.weight()));
        }
    }

    #[test]
    fn central_term_on_vacuum() {
        for rank in 1..=3 {
            let v = vac(rank);
            let lhs = &virasoro_mode(2, &virasoro_mode(-2, &v)) - &virasoro_mode(-2, &virasoro_mode(2, &v));
            assert_eq!(lhs, v.scale_gauss(&GaussRat::from_ratio(rank as i64, 2)));
        }
    }

    #[test]
    fn l_minus_one_on_label_vacuum() {
        let alpha = Label::new(vec!["1/2".parse().unwrap(), "i".parse().unwrap()]);
        let v = State::vacuum(alpha.clone());
        assert_eq!(virasoro_mode(-1, &v), alpha_mode(&alpha, -1, &v));
    }
}
