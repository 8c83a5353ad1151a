//! Bracket relations for families of Heisenberg and Virasoro modes.

use crate::fock::State;
use crate::report::VerificationReport;
use crate::scalars::{GaussRat, Scalar};

/// `[a^i(m), a^j(n)] = m delta_{ij} delta_{m+n,0}` for a family `op(color, n, s)` over `rank` colors.
pub fn verify_heisenberg_algebra<F>(name: &str, op: F, rank: usize, states: &[State], range: (i64, i64)) -> VerificationReport
where
    F: Fn(usize, i64, &State) -> State,
{
    let mut report = VerificationReport::new(name, range);
    for s in states {
        for i in 0..rank {
            for j in 0..rank {
                for m in range.0..=range.1 {
                    for n in range.0..=range.1 {
                        let left = &op(i, m, &op(j, n, s)) - &op(j, n, &op(i, m, s));
                        let right = if i == j && m + n == 0 { s.scale_gauss(&GaussRat::int(m)) } else { State::zero() };
                        report.push(vec![GaussRat::int(i as i64), GaussRat::int(j as i64), GaussRat::int(m), GaussRat::int(n)], left, right);
                    }
                }
            }
        }
    }
    report
}

/// `[L(m), L(n)] = (m - n) L(m + n) + c/12 (m^3 - m) delta_{m+n,0}` for a family `op(n, s)`.
pub fn verify_virasoro_algebra<F>(name: &str, op: F, c: &GaussRat, states: &[State], range: (i64, i64)) -> VerificationReport
where
    F: Fn(i64, &State) -> State,
{
    let mut report = VerificationReport::new(name, range);
    for s in states {
        for m in range.0..=range.1 {
            for n in range.0..=range.1 {
                let left = &op(m, &op(n, s)) - &op(n, &op(m, s));
                let mut right = op(m + n, s).scale_gauss(&GaussRat::int(m - n));
                if m + n == 0 {
                    right.add_scaled(s, &Scalar::from(c * &GaussRat::from_ratio(m * m * m - m, 12)));
                }
                report.push(vec![GaussRat::int(m), GaussRat::int(n)], left, right);
            }
        }
    }
    report
}
