//! The verifier suites a scenario can select. Each suite expands into cases,
//! and each case carries one report.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::{LatticeScenario, Scenario};
use crate::algebra::{verify_heisenberg_algebra, verify_virasoro_algebra};
use crate::error::{Error, Result};
use crate::fock::{apply_mode, basis_up_to, vertex_mode, virasoro_mode, Label, State};
use crate::form::{determinant, Form};
use crate::intertwiner::{IntertwinerSpec, Intertwining};
use crate::lattice::{lattice_cocycle, Dlm, DlmVariant, TwistData};
use crate::report::VerificationReport;
use crate::scalars::{GaussRat, Scalar};

#[derive(Clone, Debug)]
pub struct Case {
    pub description: String,
    pub report: VerificationReport,
}

#[derive(Clone, Debug)]
pub struct SuiteResult {
    pub name: String,
    pub cases: Vec<Case>,
}

fn heads(label: &Label, depth: usize) -> Vec<State> {
    basis_up_to(label, depth).into_iter().map(State::from).collect()
}

fn spec(s: &State) -> Result<IntertwinerSpec> {
    IntertwinerSpec::new(s.clone())
}

fn scalar_state(rank: usize, c: &Scalar) -> State {
    State::vacuum(Label::zero(rank)).scale(c)
}

/// Folds several reports into one case.
fn merged(name: &str, window: (i64, i64), reports: impl IntoIterator<Item = VerificationReport>) -> VerificationReport {
    let mut out = VerificationReport::new(name, window);
    for r in reports {
        out.extend(r);
    }
    out
}

struct Cases(Vec<Case>);

impl Cases {
    fn push(&mut self, description: impl Into<String>, report: VerificationReport) {
        self.0.push(Case { description: description.into(), report });
    }
}

/// Runs every selected suite; results are ordered by suite name.
pub fn run_suites(scenario: &Scenario) -> Result<Vec<SuiteResult>> {
    scenario
        .suites
        .par_iter()
        .map(|name| {
            let cases = run_suite(scenario, name).map_err(|e| match e {
                Error::Config(m) => Error::Config(format!("suite {name}: {m}")),
                other => Error::Config(format!("suite {name}: {other}")),
            })?;
            Ok(SuiteResult { name: name.clone(), cases })
        })
        .collect()
}

pub fn run_suite(s: &Scenario, name: &str) -> Result<Vec<Case>> {
    let mut cases = Cases(Vec::new());
    match name {
        "heisenberg" => heisenberg(s, &mut cases),
        "virasoro" => virasoro(s, &mut cases),
        "intertwiner-props" => intertwiner_props(s, &mut cases)?,
        "jacobi" => jacobi(s, &mut cases)?,
        "commutator" => commutator(s, &mut cases)?,
        "normal-order" => normal_order(s, &mut cases)?,
        "locality" => locality(s, &mut cases)?,
        "skew" => skew(s, &mut cases)?,
        "form" => form(s, &mut cases)?,
        "lattice-twist" => lattice_twist(s, lattice_of(s)?, &mut cases)?,
        "dlm" => dlm(s, lattice_of(s)?, &mut cases)?,
        other => return Err(Error::Config(format!("unknown suite {other:?}"))),
    }
    Ok(cases.0)
}

fn lattice_of(s: &Scenario) -> Result<&LatticeScenario> {
    s.lattice.as_ref().ok_or_else(|| Error::Config("missing [lattice] table".into()))
}

fn context(s: &Scenario) -> Intertwining {
    Intertwining::new(s.cocycle.clone(), s.cutoff)
}

fn fock_labels(s: &Scenario) -> Vec<Label> {
    let mut out = vec![Label::zero(s.rank)];
    out.extend(s.labels.first().cloned());
    out
}

fn heisenberg(s: &Scenario, cases: &mut Cases) {
    let range = (-s.mode_range, s.mode_range);
    for label in fock_labels(s) {
        let states = heads(&label, s.weight);
        let r = verify_heisenberg_algebra("[a^i(m), a^j(n)] = m delta", apply_mode, s.rank, &states, range);
        cases.push(format!("M_{label}, rank {}, depth <= {}", s.rank, s.weight), r);
    }
}

fn virasoro(s: &Scenario, cases: &mut Cases) {
    let range = (-s.mode_range, s.mode_range);
    let c = GaussRat::int(s.rank as i64);
    for label in fock_labels(s) {
        let states = heads(&label, s.weight);
        let r = verify_virasoro_algebra("[L(m), L(n)] with c = l", virasoro_mode, &c, &states, range);
        cases.push(format!("M_{label}, rank {}, depth <= {}", s.rank, s.weight), r);
    }
}

/// All of `us x ss`, or `samples` of them drawn without replacement.
fn head_pairs<'s>(us: &'s [State], ss: &'s [State], samples: usize, seed: u64) -> Vec<(&'s State, &'s State)> {
    let all: Vec<_> = us.iter().flat_map(|u| ss.iter().map(move |t| (u, t))).collect();
    if samples == 0 || samples >= all.len() {
        return all;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = sample(&mut rng, all.len(), samples).into_vec();
    picked.sort_unstable();
    picked.into_iter().map(|k| all[k]).collect()
}

fn intertwiner_props(s: &Scenario, cases: &mut Cases) -> Result<()> {
    let ctx = context(s);
    let w = s.window;
    let d = s.head_depth;
    let zero = Label::zero(s.rank);
    let us = heads(&zero, d);
    for (i, (alpha, beta)) in s.pairs().iter().enumerate() {
        let ss = heads(beta, d);
        let tag = format!("pair {i}: alpha = {alpha}, beta = {beta}");
        let mut ypm = Vec::new();
        let mut minus = Vec::new();
        let mut plus = Vec::new();
        let mut yy = Vec::new();
        let mut lconj = Vec::new();
        let mut qconj = Vec::new();
        for t in &ss {
            ypm.push(ctx.verify_ypm_commutation(alpha, beta, t, w, w)?);
            lconj.push(ctx.verify_virasoro_conj(-1, alpha, t, w as usize)?);
            lconj.push(ctx.verify_virasoro_conj(1, alpha, t, w as usize)?);
        }
        for (u, t) in head_pairs(&us, &ss, s.fock_samples, s.seed.wrapping_add(i as u64)) {
            minus.push(ctx.verify_yu_conj_minus(alpha, u, t, (-w, w), w)?);
            plus.push(ctx.verify_yu_conj_plus(alpha, u, t, (-w, w), w)?);
            yy.push(ctx.verify_yy_conj(alpha, u, t, w, (-w, w))?);
            qconj.push(ctx.verify_yu_q_conj(alpha, u, t, (-w, w))?);
        }
        cases.push(format!("{tag}: Y+ Y- commutation"), merged("Y+ Y- commutation", (-w, w), ypm));
        cases.push(format!("{tag}: Y_-(a) conjugation of Y(u)"), merged("Y_-(a) conjugation of Y(u)", (-w, w), minus));
        cases.push(format!("{tag}: Y_+(a) conjugation of Y(u)"), merged("Y_+(a) conjugation of Y(u)", (-w, w), plus));
        cases.push(format!("{tag}: Y_-(a) Y(u) Y_+(a) conjugation"), merged("Y_-(a) Y(u) Y_+(a) conjugation", (-w, w), yy));
        cases.push(format!("{tag}: e^{{aq}} conjugation of e^{{zL(+-1)}}"), merged("e^{aq} conjugation of e^{zL(+-1)}", (0, w), lconj));
        cases.push(format!("{tag}: e^{{aq}} conjugation of Y(u)"), merged("e^{aq} conjugation of Y(u)", (-w, w), qconj));
        let mut trans = Vec::new();
        let mut create = Vec::new();
        let mut econj = Vec::new();
        for h in heads(alpha, d.min(2)) {
            let sp = spec(&h)?;
            create.push(ctx.verify_creativity(&sp, -w)?);
            for t in heads(beta, 1) {
                trans.push(ctx.verify_translation(&sp, &t, -w, w)?);
                econj.push(ctx.verify_e_conjugation(&sp, beta, &t, -w, w)?);
            }
        }
        cases.push(format!("{tag}: translation"), merged("translation", (-w, w), trans));
        cases.push(format!("{tag}: creativity"), merged("creativity", (-w, 0), create));
        cases.push(format!("{tag}: e^beta conjugation"), merged("e^beta conjugation of calY", (-w, w), econj));
    }
    Ok(())
}

/// Runs independent cases in parallel, keeping their order.
fn par_cases<J: Sync>(jobs: Vec<J>, cases: &mut Cases, run: impl Fn(&J) -> Result<(String, VerificationReport)> + Sync + Send) -> Result<()> {
    let done: Vec<_> = jobs.par_iter().map(run).collect::<Result<_>>()?;
    for (d, r) in done {
        cases.push(d, r);
    }
    Ok(())
}

fn jacobi(s: &Scenario, cases: &mut Cases) -> Result<()> {
    let ctx = context(s);
    let mut jobs = Vec::new();
    for (i, [a, b, c]) in s.triples.iter().enumerate() {
        for x in heads(a, s.head_depth) {
            for y in heads(b, s.head_depth) {
                jobs.push((i, x.clone(), y, State::vacuum(c.clone())));
            }
        }
    }
    par_cases(jobs, cases, |(i, x, y, t)| {
        let r = ctx.verify_generalized_jacobi(&spec(x)?, &spec(y)?, t, -s.window, s.window)?;
        Ok((format!("triple {i}: x = {x}, y = {y}, s = {t}"), r))
    })
}

fn skew(s: &Scenario, cases: &mut Cases) -> Result<()> {
    let ctx = context(s);
    let mut jobs = Vec::new();
    for (i, [a, b, _]) in s.triples.iter().enumerate() {
        for x in heads(a, s.head_depth) {
            for y in heads(b, s.head_depth) {
                for &n in &s.skew_branches {
                    jobs.push((i, x.clone(), y.clone(), n));
                }
            }
        }
    }
    par_cases(jobs, cases, |(i, x, y, n)| {
        let r = ctx.verify_skew_symmetry(&spec(x)?, y, -s.window, s.window, *n)?;
        Ok((format!("triple {i}: x = {x}, y = {y}, N = {n}"), r))
    })
}

fn commutator(s: &Scenario, cases: &mut Cases) -> Result<()> {
    let ctx = context(s);
    let zero = Label::zero(s.rank);
    for (i, [a, b, _]) in s.triples.iter().enumerate() {
        for u in heads(&zero, s.head_depth) {
            let mut reports = Vec::new();
            for w in heads(a, 1) {
                for t in heads(b, 1) {
                    for k in -1..=2 {
                        reports.push(ctx.verify_commutator(&u, &spec(&w)?, k, &t, -s.window, s.window)?);
                    }
                }
            }
            cases.push(format!("triple {i}: u = {u}"), merged("commutator formula", (-s.window, s.window), reports));
        }
    }
    Ok(())
}

fn normal_order(s: &Scenario, cases: &mut Cases) -> Result<()> {
    let ctx = context(s);
    let zero = Label::zero(s.rank);
    for (i, [a, b, _]) in s.triples.iter().enumerate() {
        for u in heads(&zero, s.head_depth) {
            let mut reports = Vec::new();
            for w in heads(a, 1) {
                for t in heads(b, 1) {
                    reports.push(ctx.verify_normal_order(&u, &spec(&w)?, &t, -s.window, s.window)?);
                }
            }
            cases.push(format!("triple {i}: u = {u}"), merged("normal ordering", (-s.window, s.window), reports));
        }
    }
    Ok(())
}

/// The least `m` with `(z1 - z2)^m [Y(u, z1), calY(w, z2)] = 0`: one past the top nonvanishing `u(n) w`.
pub fn locality_order(u: &State, w: &State) -> Result<u32> {
    let top = (u.max_depth() + w.max_depth()) as i64 + 1;
    let mut order = 0;
    for n in 0..=top {
        if !vertex_mode(u, n, w)?.is_zero() {
            order = n as u32 + 1;
        }
    }
    Ok(order)
}

fn locality(s: &Scenario, cases: &mut Cases) -> Result<()> {
    let ctx = context(s);
    let zero = Label::zero(s.rank);
    for (i, [a, b, _]) in s.triples.iter().enumerate() {
        let t = State::vacuum(b.clone());
        for u in heads(&zero, s.head_depth) {
            for w in heads(a, 1) {
                let need = locality_order(&u, &w)?;
                for &m in &s.locality_orders {
                    let mut r = ctx.verify_locality(&u, &spec(&w)?, m, &t, -s.window, s.window)?;
                    let mut description = format!("triple {i}: u = {u}, w = {w}, m = {m}");
                    if m < need {
                        r = r.expecting_failure();
                        description.push_str(&format!(" (below the order {need})"));
                    }
                    cases.push(description, r);
                }
            }
        }
    }
    Ok(())
}

fn form(s: &Scenario, cases: &mut Cases) -> Result<()> {
    let ctx = context(s);
    let f = Form::new(&ctx, s.branch_n)?;
    let rank = s.rank;
    let mut betas = vec![Label::zero(rank)];
    betas.extend(s.labels.iter().cloned());
    for beta in &betas {
        let mut r = VerificationReport::new("Gram matrix symmetry and unit determinant", (0, s.form_depth as i64));
        for d in 0..=s.form_depth {
            let m = f.gram_matrix(beta, d)?;
            let mt = f.gram_matrix(&beta.neg(), d)?;
            for i in 0..m.len() {
                for j in 0..m.len() {
                    r.push(vec![GaussRat::int(d as i64)], scalar_state(rank, &m[i][j]), scalar_state(rank, &mt[j][i]));
                }
            }
            // a unit monomial times its inverse is one
            let det = determinant(&m);
            let unit = det.invert_monomial().map(|inv| &det * &inv).unwrap_or_else(|_| Scalar::zero());
            r.push(vec![GaussRat::int(d as i64)], scalar_state(rank, &unit), scalar_state(rank, &Scalar::one()));
        }
        let vac = f.gram(&State::vacuum(beta.clone()), &State::vacuum(beta.neg()))?;
        let want = &ctx.cocycle().epsilon(beta, &beta.neg())? * &Scalar::lambda_pow(&-beta.norm2());
        r.push(vec![], scalar_state(rank, &vac), scalar_state(rank, &want));
        cases.push(format!("beta = {beta}, depth <= {}", s.form_depth), r);
    }
    let w = s.window;
    for (i, alpha) in s.labels.iter().enumerate() {
        let beta = s.labels.get(i + 1).cloned().unwrap_or_else(|| Label::zero(rank));
        let gamma = (alpha + &beta).neg();
        let mut inv = Vec::new();
        let mut routes = Vec::new();
        for x in heads(alpha, 1) {
            let xs = spec(&x)?;
            for y in heads(&beta, 1) {
                for t in heads(&gamma, 1) {
                    inv.push(f.verify_invariance(&xs, &y, &t, -w, w)?);
                }
            }
            for t in heads(&(&beta + &gamma), 1) {
                routes.push(f.verify_adjoint_routes(&xs, &t, -w, w)?);
            }
        }
        cases.push(format!("invariance: alpha = {alpha}, beta = {beta}, N = {}", s.branch_n), merged("invariant form", (-w, w), inv));
        cases.push(format!("adjoint routes: alpha = {alpha}"), merged("adjoint intertwiner routes", (-w, w), routes));
    }
    Ok(())
}

fn lattice_twist(s: &Scenario, ls: &LatticeScenario, cases: &mut Cases) -> Result<()> {
    let l = &ls.lattice;
    let ctx = Intertwining::new(lattice_cocycle(l), s.cutoff);
    let dim = l.dim();
    let mu = |i: usize| ls.vectors.get(i).cloned().unwrap_or_else(|| Label::zero(dim));
    let (mu1, mu2, mu3) = (mu(0), mu(1), mu(2));
    let w = s.window;
    let mut twists = vec![Label::zero(dim)];
    twists.extend(ls.twists.iter().cloned());
    for alpha in &twists {
        let td = TwistData::new(l, alpha.clone())?;
        let tag = format!("alpha = {alpha}");
        let target = State::vacuum(&mu3 + alpha);
        let y = State::vacuum(mu2.clone());
        for x in heads(&mu1, 1) {
            let r = td.verify_twisted_jacobi(&ctx, &x, &y, &target, -w, w)?;
            cases.push(format!("{tag}: twisted Jacobi, x = {x}, y = {y}, s = {target}"), r);
        }
        let mut li = Vec::new();
        for x in heads(&mu1, 1) {
            for t in heads(&mu3, 1) {
                li.push(td.verify_li_equivalence(&ctx, &x, &t, -w, 2)?);
            }
        }
        cases.push(format!("{tag}: twisted module equivalence"), merged("twisted module equivalence", (-w, 2), li));
        let labels = [Label::zero(dim), mu1.clone(), mu2.clone(), mu3.clone()];
        cases.push(format!("{tag}: grading"), td.verify_grading(&labels, 3)?);
        let mut states = heads(&Label::zero(dim), 4);
        states.extend(heads(&mu1, 2));
        let range = (-s.mode_range, s.mode_range);
        cases.push(format!("{tag}: twisted Heisenberg algebra"), td.verify_heisenberg_algebra(&heads(&mu1, 2), range));
        cases.push(format!("{tag}: twisted Virasoro algebra"), td.verify_twisted_virasoro(&heads(&mu1, 2), range));
        cases.push(format!("{tag}: shifted Virasoro, c_alpha = {}", td.shifted_central_charge()), td.verify_shifted_virasoro(&states, range));
        cases.push(format!("{tag}: L_alpha(0) - c_alpha/24 = L_g(0) - l/24"), td.verify_shifted_grading(&states));
    }
    Ok(())
}

fn dlm(s: &Scenario, ls: &LatticeScenario, cases: &mut Cases) -> Result<()> {
    let l = &ls.lattice;
    let ctx = Intertwining::new(lattice_cocycle(l), s.cutoff);
    let dim = l.dim();
    let pick = |v: &[Label], i: usize| v.get(i).cloned().unwrap_or_else(|| Label::zero(dim));
    let (a1, a2, a3) = (pick(&ls.twists, 0), pick(&ls.twists, 1), pick(&ls.twists, 2));
    let (m1, m2, m3) = (pick(&ls.vectors, 0), pick(&ls.vectors, 1), pick(&ls.vectors, 2));
    let x = State::vacuum(&m1 + &a1);
    let y = State::vacuum(&m2 + &a2);
    let t = State::vacuum(&m3 + &a3);
    let w = s.window;
    for (variant, n) in [(DlmVariant::Delta, s.branch_n), (DlmVariant::Hat, s.branch_n)] {
        let d = Dlm::new(&ctx, l, variant, n)?;
        let mut closed = Vec::new();
        for hx in heads(&(&m1 + &a1), 1) {
            for ht in heads(&(&m2 + &a2), 1) {
                closed.push(d.verify_closed_form(&hx, &a1, &ht, &a2, -w, w)?);
            }
        }
        cases.push(format!("{variant}, N = {n}: closed form"), merged("generalized vertex operator closed form", (-w, w), closed));
        let r = d.verify_jacobi((&x, &a1), (&y, &a2), (&t, &a3), -w, w)?;
        cases.push(format!("{variant}, N = {n}: Jacobi, twists {a1}, {a2}, {a3}"), r);
    }
    Ok(())
}
