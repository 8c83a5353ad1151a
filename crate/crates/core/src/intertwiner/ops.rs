use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::cocycle::CocycleSystem;
use crate::error::{Error, Result};
use crate::fock::{alpha_mode, vertex_mode, FockMonomial, Label, State};
use crate::scalars::GaussRat;
use crate::series::WindowedSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// Prepends the creation parts of `a` (a state in `M_0`) to every monomial of `v`.
/// Creation operators commute, so this is `a(-1 ...) v` for any ordering.
pub fn creation_product(a: &State, v: &State) -> State {
    let mut out = State::zero();
    for (am, ac) in a.iter() {
        for (vm, vc) in v.iter() {
            let mut parts = vm.parts().to_vec();
            parts.extend_from_slice(am.parts());
            out.add_term(FockMonomial::new(vm.label().clone(), parts), ac * vc);
        }
    }
    out
}

/// `S_k 1`, the `z^k` coefficient of `Y_-(alpha, z) 1`, for `k = 0..=max`.
/// `k S_k = sum_{n=1}^{k} alpha(-n) S_{k-n}`.
pub fn yminus_vacuum_terms(alpha: &Label, max: usize) -> Vec<State> {
    let mut out = vec![State::vacuum(Label::zero(alpha.rank()))];
    for k in 1..=max {
        let mut acc = State::zero();
        for n in 1..=k {
            acc.add_assign_ref(&alpha_mode(alpha, -(n as i64), &out[k - n]));
        }
        out.push(acc.scale_gauss(&GaussRat::from_ratio(1, k as i64)));
    }
    out
}

/// `T_k s`, the `z^{-k}` coefficient of `Y_+(alpha, z) s`, for `k = 0..=depth(s)`.
/// `k T_k = -sum_{n=1}^{k} alpha(n) T_{k-n}`.
pub fn yplus_terms(alpha: &Label, s: &State) -> Vec<State> {
    let max = s.max_depth();
    let mut out = vec![s.clone()];
    for k in 1..=max {
        let mut acc = State::zero();
        for n in 1..=k {
            acc.add_assign_ref(&alpha_mode(alpha, n as i64, &out[k - n]));
        }
        out.push(acc.scale_gauss(&GaussRat::from_ratio(-1, k as i64)));
    }
    while out.len() > 1 && out.last().is_some_and(State::is_zero) {
        out.pop();
    }
    out
}

/// Shared state for intertwiner computations: the cocycle, the depth cutoff `W`,
/// and a cache of `Y_-` vacuum coefficients.
pub struct Intertwining {
    cocycle: CocycleSystem,
    cutoff: usize,
    yminus: Mutex<HashMap<Label, Arc<Vec<State>>>>,
}

/// A head `w = u (x) e^alpha` defining `calY(w, z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntertwinerSpec {
    head: State,
    alpha: Label,
    /// `u` as a state in `M_0`.
    fock: State,
}

impl IntertwinerSpec {
    pub fn new(head: State) -> Result<Self> {
        let alpha = head.homogeneous_label()?;
        let fock = head.shift_label(&alpha.neg());
        Ok(IntertwinerSpec { head, alpha, fock })
    }

    pub fn head(&self) -> &State {
        &self.head
    }

    pub fn alpha(&self) -> &Label {
        &self.alpha
    }
}

impl Intertwining {
    pub fn new(cocycle: CocycleSystem, cutoff: usize) -> Self {
        Intertwining { cocycle, cutoff, yminus: Mutex::new(HashMap::new()) }
    }

    pub fn cocycle(&self) -> &CocycleSystem {
        &self.cocycle
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    fn check_depth(&self, depth: i64) -> Result<()> {
        if depth > self.cutoff as i64 {
            return Err(Error::Cutoff { depth, cutoff: self.cutoff });
        }
        Ok(())
    }

    /// `S_k 1` for `Y_-(alpha, z)`, cached.
    pub fn yminus_vacuum(&self, alpha: &Label, k: usize) -> State {
        {
            let cache = self.yminus.lock().expect("cache poisoned");
            if let Some(v) = cache.get(alpha) {
                if k < v.len() {
                    return v[k].clone();
                }
            }
        }
        let len = (k + 1).max(self.cutoff + 1);
        let terms = Arc::new(yminus_vacuum_terms(alpha, len - 1));
        let out = terms[k].clone();
        self.yminus.lock().expect("cache poisoned").insert(alpha.clone(), terms);
        out
    }

    /// The `z^k` coefficient of `Y_-(alpha, z) s`.
    pub fn yminus_coeff(&self, alpha: &Label, k: usize, s: &State) -> State {
        if alpha.is_zero() {
            return if k == 0 { s.clone() } else { State::zero() };
        }
        creation_product(&self.yminus_vacuum(alpha, k), s)
    }

    /// `Y_-(alpha, z) s` (nonnegative powers, window `[0, hi]`) or
    /// `Y_+(alpha, z) s` (a polynomial in `z^{-1}`).
    pub fn apply_ypm(&self, alpha: &Label, sign: Sign, s: &State, hi: i64) -> Result<WindowedSeries<State>> {
        match sign {
            Sign::Minus => {
                self.check_depth(s.max_depth() as i64 + hi)?;
                let coeffs = (0..=hi.max(0)).map(|k| (k, self.yminus_coeff(alpha, k as usize, s)));
                Ok(WindowedSeries::new(GaussRat::zero(), 0, hi, coeffs).with_zero_below(true))
            }
            Sign::Plus => {
                let terms = yplus_terms(alpha, s);
                let lo = -(terms.len() as i64 - 1);
                Ok(WindowedSeries::polynomial(
                    GaussRat::zero(),
                    lo,
                    0,
                    terms.into_iter().enumerate().map(|(k, t)| (-(k as i64), t)),
                ))
            }
        }
    }

    /// `Delta(beta, z) s = z^{beta(0)} Y_+(beta, -z) s`, as `(exponent, coefficient)` pairs.
    pub fn delta_terms(&self, beta: &Label, s: &State) -> Vec<(GaussRat, State)> {
        let mut out = Vec::new();
        for (label, part) in s.by_label() {
            let base = beta.dot(&label);
            for (k, t) in yplus_terms(beta, &part).into_iter().enumerate() {
                if t.is_zero() {
                    continue;
                }
                let t = if k % 2 == 1 { t.scale_gauss(&GaussRat::int(-1)) } else { t };
                out.push((base.add_int(-(k as i64)), t));
            }
        }
        out
    }

    /// `Delta(beta, z) s` as a single series; errors if the labels of `s`
    /// put its terms in different exponent cosets.
    pub fn apply_delta(&self, beta: &Label, s: &State) -> Result<WindowedSeries<State>> {
        let mut acc: Option<WindowedSeries<State>> = None;
        for (label, part) in s.by_label() {
            let base = beta.dot(&label);
            let terms = yplus_terms(beta, &part);
            let lo = -(terms.len() as i64 - 1);
            let series = WindowedSeries::polynomial(
                base,
                lo,
                0,
                terms.into_iter().enumerate().map(|(k, t)| {
                    let t = if k % 2 == 1 { t.scale_gauss(&GaussRat::int(-1)) } else { t };
                    (-(k as i64), t)
                }),
            );
            acc = Some(match acc {
                None => series,
                Some(a) => a.add(&series)?,
            });
        }
        Ok(acc.unwrap_or_else(|| WindowedSeries::polynomial(GaussRat::zero(), 0, 0, [])))
    }

    /// Coefficient of `z^{alpha.beta + k}` in `calY(w, z) t` for `t` homogeneous of label `beta`.
    fn coeff_homogeneous(&self, spec: &IntertwinerSpec, t: &State, beta: &Label, k: i64) -> Result<State> {
        let du = spec.fock.max_depth() as i64;
        let dt = t.max_depth() as i64;
        let depth = du + dt + k;
        if depth < 0 {
            return Ok(State::zero());
        }
        self.check_depth(depth)?;
        let alpha = &spec.alpha;
        let mut out = State::zero();
        for (j, tj) in yplus_terms(alpha, t).iter().enumerate() {
            if tj.is_zero() {
                continue;
            }
            let j = j as i64;
            for n in (-k - 1 - j)..=(dt - j + du - 1) {
                let p = k + n + 1 + j;
                let v = vertex_mode(&spec.fock, n, tj)?;
                if v.is_zero() {
                    continue;
                }
                out.add_assign_ref(&self.yminus_coeff(alpha, p as usize, &v));
            }
        }
        let eps = self.cocycle.epsilon(alpha, beta)?;
        Ok(out.shift_label(alpha).scale(&eps))
    }

    /// Coefficient of `z^e` in `calY(w, z) t`, for any `t`.
    /// Label components of `t` whose exponent coset differs from `e` contribute nothing.
    pub fn coefficient(&self, spec: &IntertwinerSpec, t: &State, e: &GaussRat) -> Result<State> {
        let mut out = State::zero();
        for (beta, part) in t.by_label() {
            let base = spec.alpha.dot(&beta);
            if let Ok(k) = e.int_offset_from(&base) {
                out.add_assign_ref(&self.coeff_homogeneous(spec, &part, &beta, k)?);
            }
        }
        Ok(out)
    }

    /// `calY(w, z) t` on the index window `[lo, hi]` around the offset `alpha.beta`.
    pub fn intertwine(&self, spec: &IntertwinerSpec, t: &State, lo: i64, hi: i64) -> Result<WindowedSeries<State>> {
        let beta = t.homogeneous_label()?;
        let base = spec.alpha.dot(&beta);
        let mut coeffs = Vec::new();
        for k in lo..=hi {
            coeffs.push((k, self.coeff_homogeneous(spec, t, &beta, k)?));
        }
        let floor = -((spec.fock.max_depth() + t.max_depth()) as i64);
        Ok(WindowedSeries::new(base, lo, hi, coeffs).with_zero_below(lo <= floor))
    }
}
