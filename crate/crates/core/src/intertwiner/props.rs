//! Coefficientwise checks of the conjugation identities for `Y_+-`, `e^{alpha.q}`,
//! translation, creativity and `e^beta`-conjugation of intertwiners.

use std::collections::hash_map::Entry;
use std::collections::HashMap;

use super::ops::{creation_product, yplus_terms, IntertwinerSpec, Intertwining};
use crate::error::Result;
use crate::fock::{vertex_mode, virasoro_mode, Label, State};
use crate::report::VerificationReport;
use crate::scalars::{binom, GaussRat};

fn signed(s: &State, odd: bool) -> State {
    if odd {
        s.scale_gauss(&GaussRat::int(-1))
    } else {
        s.clone()
    }
}

fn inv_factorial(n: usize) -> GaussRat {
    let f: i64 = (1..=n as i64).product();
    GaussRat::from_ratio(1, f)
}

fn gi(n: i64) -> GaussRat {
    GaussRat::int(n)
}

/// `sum_i c^i / i! L(n)^i` applied to `s`, truncated at `max`, as a list of `z^i` coefficients.
fn exp_virasoro(n: i64, sign: i64, s: &State, max: usize) -> Vec<State> {
    let mut out = vec![s.clone()];
    for i in 1..=max {
        let next = virasoro_mode(n, &out[i - 1]);
        out.push(next);
    }
    out.into_iter()
        .enumerate()
        .map(|(i, t)| {
            let c = inv_factorial(i);
            let c = if sign < 0 && i % 2 == 1 { -c } else { c };
            t.scale_gauss(&c)
        })
        .collect()
}

impl Intertwining {
    /// `Y_+(alpha, z1) Y_-(beta, z2) = (1 - z2/z1)^{alpha.beta} Y_-(beta, z2) Y_+(alpha, z1)`
    /// at `z1^{-p} z2^q` for `p, q` up to the given bounds.
    pub fn verify_ypm_commutation(&self, alpha: &Label, beta: &Label, s: &State, p_max: i64, q_max: i64) -> Result<VerificationReport> {
        let mut report = VerificationReport::new("Y+ Y- commutation", (-p_max, q_max));
        let ab = alpha.dot(beta);
        let t_s = yplus_terms(alpha, s);
        let t_at = |p: i64| t_s.get(p as usize).cloned().unwrap_or_default();
        for q in 0..=q_max {
            let sq = self.yminus_coeff(beta, q as usize, s);
            let t_sq = yplus_terms(alpha, &sq);
            for p in 0..=p_max {
                let left = t_sq.get(p as usize).cloned().unwrap_or_default();
                let mut right = State::zero();
                for j in 0..=p.min(q) {
                    let c = binom(&ab, j as u64);
                    let c = if j % 2 == 1 { -c } else { c };
                    let inner = self.yminus_coeff(beta, (q - j) as usize, &t_at(p - j));
                    right.add_assign_ref(&inner.scale_gauss(&c));
                }
                report.push(vec![gi(-p), gi(q)], left, right);
            }
        }
        Ok(report)
    }

    /// `Y(Y_+(alpha, -z1) u, z1) Y_-(alpha, z2) = Y_-(alpha, z2) Y(Y_+(alpha, -z1 + z2) u, z1)`
    /// at `z1^e z2^q`.
    pub fn verify_yu_conj_minus(&self, alpha: &Label, u: &State, s: &State, e_range: (i64, i64), q_max: i64) -> Result<VerificationReport> {
        let mut report = VerificationReport::new("Y(Y+ u) Y- conjugation", e_range);
        let tu = yplus_terms(alpha, u);
        for e in e_range.0..=e_range.1 {
            for q in 0..=q_max {
                let sq = self.yminus_coeff(alpha, q as usize, s);
                let mut left = State::zero();
                for (k, tk) in tu.iter().enumerate() {
                    let k = k as i64;
                    left.add_assign_ref(&signed(&vertex_mode(tk, -e - k - 1, &sq)?, k % 2 == 1));
                }
                let mut right = State::zero();
                for j in 0..=q {
                    for (k, tk) in tu.iter().enumerate() {
                        let k = k as i64;
                        let c = binom(&gi(-k), j as u64);
                        if c.is_zero() {
                            continue;
                        }
                        let c = if (k + j) % 2 == 1 { -c } else { c };
                        let inner = vertex_mode(tk, -e - k - j - 1, s)?;
                        right.add_assign_ref(&self.yminus_coeff(alpha, (q - j) as usize, &inner).scale_gauss(&c));
                    }
                }
                report.push(vec![gi(e), gi(q)], left, right);
            }
        }
        Ok(report)
    }

    /// `Y_+(alpha, z1) Y(u, z2) = Y(Y_+(alpha, z1 - z2) u, z2) Y_+(alpha, z1)` at `z1^{-p} z2^e`.
    pub fn verify_yu_conj_plus(&self, alpha: &Label, u: &State, s: &State, e_range: (i64, i64), p_max: i64) -> Result<VerificationReport> {
        let mut report = VerificationReport::new("Y+ Y(u) conjugation", e_range);
        let tu = yplus_terms(alpha, u);
        let ts = yplus_terms(alpha, s);
        for e in e_range.0..=e_range.1 {
            let ue = vertex_mode(u, -e - 1, s)?;
            let t_ue = yplus_terms(alpha, &ue);
            for p in 0..=p_max {
                let left = t_ue.get(p as usize).cloned().unwrap_or_default();
                let mut right = State::zero();
                for (k, tk) in tu.iter().enumerate() {
                    let k = k as i64;
                    for j in 0..=(p - k) {
                        let Some(t_rest) = ts.get((p - k - j) as usize) else { continue };
                        let c = binom(&gi(-k), j as u64);
                        if c.is_zero() {
                            continue;
                        }
                        let c = if j % 2 == 1 { -c } else { c };
                        right.add_assign_ref(&vertex_mode(tk, -e + j - 1, t_rest)?.scale_gauss(&c));
                    }
                }
                report.push(vec![gi(-p), gi(e)], left, right);
            }
        }
        Ok(report)
    }

    /// `Y(Y_-(alpha, z1) u, z2) Y_+(alpha, z2) = z2^{-alpha(0)} (z2 + z1)^{alpha(0)}
    /// Y_-(-alpha, z2) Y_-(alpha, z1 + z2) Y(u, z2) Y_+(alpha, z2 + z1)` at `z1^k z2^e`.
    pub fn verify_yy_conj(&self, alpha: &Label, u: &State, s: &State, k_max: i64, e_range: (i64, i64)) -> Result<VerificationReport> {
        let mut report = VerificationReport::new("Y(Y- u) Y+ conjugation", e_range);
        let gamma = s.homogeneous_label()?;
        let ag = alpha.dot(&gamma);
        let minus = alpha.neg();
        let ts = yplus_terms(alpha, s);
        let du = u.max_depth() as i64;
        let ds = s.max_depth() as i64;
        let mut terms: HashMap<(i64, i64, i64, i64), State> = HashMap::new();
        for k in 0..=k_max {
            let sku = creation_product(&self.yminus_vacuum(alpha, k as usize), u);
            for e in e_range.0..=e_range.1 {
                let mut left = State::zero();
                for (j, tj) in ts.iter().enumerate() {
                    left.add_assign_ref(&vertex_mode(&sku, -e - j as i64 - 1, tj)?);
                }
                let bound = ds + du + e + k;
                // a + d + f = k, so u(n) only depends on (t, c, b); collect scalars first
                let mut coeffs: HashMap<(i64, i64, i64), GaussRat> = HashMap::new();
                if bound >= 0 {
                    for a in 0..=k {
                        let ca = binom(&ag, a as u64);
                        if ca.is_zero() {
                            continue;
                        }
                        for d in 0..=(k - a) {
                            let f = k - a - d;
                            for (t, tt) in ts.iter().enumerate() {
                                let t = t as i64;
                                let cf = binom(&gi(-t), f as u64);
                                if cf.is_zero() || tt.is_zero() {
                                    continue;
                                }
                                let caf = &ca * &cf;
                                for c in d..=bound {
                                    let coeff = &caf * &binom(&gi(c), d as u64);
                                    for b in 0..=(bound - c) {
                                        *coeffs.entry((t, c, b)).or_insert_with(GaussRat::zero) += &coeff;
                                    }
                                }
                            }
                        }
                    }
                }
                let mut keys: Vec<_> = coeffs.keys().copied().collect();
                keys.sort_unstable();
                let mut right = State::zero();
                for (t, c, b) in keys {
                    let coeff = &coeffs[&(t, c, b)];
                    if coeff.is_zero() {
                        continue;
                    }
                    let n = -e - k + b + c - t - 1;
                    let v = match terms.entry((t, n, c, b)) {
                        Entry::Occupied(slot) => slot.into_mut(),
                        Entry::Vacant(slot) => {
                            let v = vertex_mode(u, n, &ts[t as usize])?;
                            slot.insert(if v.is_zero() {
                                v
                            } else {
                                self.yminus_coeff(&minus, b as usize, &self.yminus_coeff(alpha, c as usize, &v))
                            })
                        }
                    };
                    right.add_assign_ref(&v.scale_gauss(coeff));
                }
                report.push(vec![gi(k), gi(e)], left, right);
            }
        }
        Ok(report)
    }

    /// `e^{-alpha.q} e^{z L(n)} e^{alpha.q} e^{-z L(n)} s` for `n = -1` (against `Y_-(alpha, z)`)
    /// or `n = 1` (against `Y_+(alpha, -1/z)`), at `z^k`. The operator `e^{alpha.q}` is the bare label shift.
    pub fn verify_virasoro_conj(&self, n: i64, alpha: &Label, s: &State, k_max: usize) -> Result<VerificationReport> {
        let name = if n < 0 { "e^{-aq} e^{zL(-1)} conjugation" } else { "e^{-aq} e^{zL(1)} conjugation" };
        let mut report = VerificationReport::new(name, (0, k_max as i64));
        let right_factors = exp_virasoro(n, -1, s, k_max);
        let minus = alpha.neg();
        let tplus = yplus_terms(alpha, s);
        for k in 0..=k_max {
            let mut left = State::zero();
            for j in 0..=k {
                let shifted = right_factors[j].shift_label(alpha);
                let outer = exp_virasoro(n, 1, &shifted, k - j);
                left.add_assign_ref(&outer[k - j].shift_label(&minus));
            }
            let right = if n < 0 {
                self.yminus_coeff(alpha, k, s)
            } else {
                signed(&tplus.get(k).cloned().unwrap_or_default(), k % 2 == 1)
            };
            report.push(vec![gi(k as i64)], left, right);
        }
        Ok(report)
    }

    /// `e^{-alpha.q} Y(u, z) e^{alpha.q} = Y(Y_+(alpha, -z) u, z)` at `z^e`.
    pub fn verify_yu_q_conj(&self, alpha: &Label, u: &State, s: &State, e_range: (i64, i64)) -> Result<VerificationReport> {
        let mut report = VerificationReport::new("e^{-aq} Y(u) e^{aq} conjugation", e_range);
        let tu = yplus_terms(alpha, u);
        let shifted = s.shift_label(alpha);
        let minus = alpha.neg();
        for e in e_range.0..=e_range.1 {
            let left = vertex_mode(u, -e - 1, &shifted)?.shift_label(&minus);
            let mut right = State::zero();
            for (k, tk) in tu.iter().enumerate() {
                let k = k as i64;
                right.add_assign_ref(&signed(&vertex_mode(tk, -e - k - 1, s)?, k % 2 == 1));
            }
            report.push(vec![gi(e)], left, right);
        }
        Ok(report)
    }

    /// `calY(L(-1) w, z) = d/dz calY(w, z)` on `t`, at `z^{alpha.beta + k}`.
    pub fn verify_translation(&self, spec: &IntertwinerSpec, t: &State, lo: i64, hi: i64) -> Result<VerificationReport> {
        let mut report = VerificationReport::new("translation", (lo, hi));
        let beta = t.homogeneous_label()?;
        let base = spec.alpha().dot(&beta);
        let dhead = virasoro_mode(-1, spec.head());
        let dspec = if dhead.is_zero() { None } else { Some(IntertwinerSpec::new(dhead)?) };
        for k in lo..=hi {
            let e = base.add_int(k);
            let left = match &dspec {
                Some(d) => self.coefficient(d, t, &e)?,
                None => State::zero(),
            };
            let e1 = base.add_int(k + 1);
            let right = self.coefficient(spec, t, &e1)?.scale_gauss(&e1);
            report.push(vec![e], left, right);
        }
        Ok(report)
    }

    /// `calY(w, z) 1 = w + O(z)`, with nothing in negative powers down to `lo`.
    pub fn verify_creativity(&self, spec: &IntertwinerSpec, lo: i64) -> Result<VerificationReport> {
        let mut report = VerificationReport::new("creativity", (lo, 0));
        let vac = State::vacuum(Label::zero(spec.alpha().rank()));
        for k in lo..=0 {
            let left = self.coefficient(spec, &vac, &gi(k))?;
            let right = if k == 0 { spec.head().clone() } else { State::zero() };
            report.push(vec![gi(k)], left, right);
        }
        Ok(report)
    }

    /// `(e^beta)^{-1} calY(w, z) e^beta t = C(alpha, beta) calY(Delta(beta, z) w, z) t`
    /// at `z^{alpha.(beta + gamma) + k}`.
    pub fn verify_e_conjugation(&self, spec: &IntertwinerSpec, beta: &Label, t: &State, lo: i64, hi: i64) -> Result<VerificationReport> {
        let mut report = VerificationReport::new("e^beta conjugation of calY", (lo, hi));
        let gamma = t.homogeneous_label()?;
        let alpha = spec.alpha();
        let base = alpha.dot(&(beta + &gamma));
        let et = self.cocycle().apply_e(beta, t)?;
        let c = self.cocycle().commutator(alpha, beta)?;
        let deltas: Vec<(GaussRat, IntertwinerSpec)> = self
            .delta_terms(beta, spec.head())
            .into_iter()
            .map(|(exp, w)| Ok((exp, IntertwinerSpec::new(w)?)))
            .collect::<Result<_>>()?;
        for k in lo..=hi {
            let e = base.add_int(k);
            let left = self.cocycle().apply_e_inv(beta, &self.coefficient(spec, &et, &e)?)?;
            let mut right = State::zero();
            for (exp, ws) in &deltas {
                right.add_assign_ref(&self.coefficient(ws, t, &(&e - exp))?);
            }
            report.push(vec![e], left, right.scale(&c));
        }
        Ok(report)
    }
}
