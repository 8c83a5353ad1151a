//! Scenario files: TOML with exact rationals written as strings such as `"1/3-1/2*i"`.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::fock::Label;
use crate::intertwiner::{CocycleSystem, Matrix};
use crate::lattice::IntegralLattice;
use crate::scalars::GaussRat;

pub const SUITES: [&str; 11] = [
    "commutator",
    "dlm",
    "form",
    "heisenberg",
    "intertwiner-props",
    "jacobi",
    "lattice-twist",
    "locality",
    "normal-order",
    "skew",
    "virasoro",
];

const LATTICE_SUITES: [&str; 2] = ["dlm", "lattice-twist"];

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    rank: usize,
    cutoff: usize,
    #[serde(default = "default_window")]
    window: i64,
    #[serde(default = "default_branch")]
    branch_n: i64,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    suites: Vec<String>,
    #[serde(default = "default_weight")]
    weight: usize,
    #[serde(default = "default_mode_range")]
    mode_range: i64,
    #[serde(default = "default_head_depth")]
    head_depth: usize,
    #[serde(default = "default_form_depth")]
    form_depth: usize,
    #[serde(default = "default_min_compared")]
    min_compared: usize,
    #[serde(default)]
    cocycle: RawCocycle,
    #[serde(default)]
    samples: RawSamples,
    #[serde(default)]
    locality: RawLocality,
    #[serde(default)]
    skew: RawSkew,
    lattice: Option<RawLattice>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCocycle {
    f: Option<Vec<Vec<String>>>,
    g: Option<Vec<Vec<String>>>,
    #[serde(default)]
    diagonal_fix: bool,
    #[serde(default)]
    corrupt: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSamples {
    #[serde(default)]
    triples: Vec<[Vec<String>; 3]>,
    #[serde(default)]
    labels: Vec<Vec<String>>,
    #[serde(default)]
    random_pairs: usize,
    #[serde(default)]
    fock_samples: usize,
    #[serde(default = "default_bound")]
    numerator_bound: i64,
    #[serde(default = "default_bound")]
    denominator_bound: i64,
}

impl Default for RawSamples {
    fn default() -> Self {
        RawSamples {
            triples: Vec::new(),
            labels: Vec::new(),
            random_pairs: 0,
            fock_samples: 0,
            numerator_bound: default_bound(),
            denominator_bound: default_bound(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLocality {
    #[serde(default = "default_orders")]
    orders: Vec<u32>,
}

impl Default for RawLocality {
    fn default() -> Self {
        RawLocality { orders: default_orders() }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSkew {
    branches: Option<Vec<i64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLattice {
    gram: Vec<Vec<i64>>,
    #[serde(default)]
    twists: Vec<Vec<String>>,
    #[serde(default)]
    vectors: Vec<Vec<i64>>,
}

fn default_window() -> i64 {
    3
}
fn default_branch() -> i64 {
    1
}
fn default_weight() -> usize {
    5
}
fn default_mode_range() -> i64 {
    3
}
fn default_head_depth() -> usize {
    2
}
fn default_form_depth() -> usize {
    3
}
fn default_min_compared() -> usize {
    1
}
fn default_bound() -> i64 {
    4
}
fn default_orders() -> Vec<u32> {
    vec![0, 1, 2]
}

/// Overrides from the command line.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub suites: Vec<String>,
    pub window: Option<i64>,
    pub cutoff: Option<usize>,
    pub branch_n: Option<i64>,
    pub seed: Option<u64>,
}

/// The lattice part of a scenario: gram, twists and vectors as Heisenberg labels.
#[derive(Clone, Debug)]
pub struct LatticeScenario {
    pub lattice: IntegralLattice,
    pub twists: Vec<Label>,
    pub vectors: Vec<Label>,
}

/// A validated scenario.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub rank: usize,
    pub cutoff: usize,
    pub window: i64,
    pub branch_n: i64,
    pub seed: u64,
    pub suites: Vec<String>,
    pub weight: usize,
    pub mode_range: i64,
    pub head_depth: usize,
    pub form_depth: usize,
    pub min_compared: usize,
    pub cocycle: CocycleSystem,
    /// `(alpha, beta, gamma)` label triples.
    pub triples: Vec<[Label; 3]>,
    /// Explicit labels plus the first label of each triple.
    pub labels: Vec<Label>,
    /// Seeded random `(alpha, beta)` pairs.
    pub random_pairs: Vec<(Label, Label)>,
    /// `(u, s)` head pairs drawn per label pair in `intertwiner-props`; zero means all.
    pub fock_samples: usize,
    pub locality_orders: Vec<u32>,
    pub skew_branches: Vec<i64>,
    pub lattice: Option<LatticeScenario>,
}

fn config(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn parse_gauss(s: &str) -> Result<GaussRat> {
    s.parse().map_err(|e: Error| config(format!("bad number {s:?}: {e}")))
}

fn parse_label(v: &[String], rank: usize, what: &str) -> Result<Label> {
    if v.len() != rank {
        return Err(config(format!("{what}: expected {rank} components, got {}", v.len())));
    }
    Ok(Label::new(v.iter().map(|s| parse_gauss(s)).collect::<Result<_>>()?))
}

fn parse_matrix(m: &[Vec<String>], rank: usize, what: &str) -> Result<Matrix> {
    if m.len() != rank || m.iter().any(|r| r.len() != rank) {
        return Err(config(format!("{what}: expected a {rank}x{rank} matrix")));
    }
    m.iter().map(|r| r.iter().map(|s| parse_gauss(s)).collect()).collect()
}

fn random_gauss(rng: &mut ChaCha8Rng, num: i64, den: i64) -> GaussRat {
    let mut part = || GaussRat::from_ratio(rng.gen_range(-num..=num), rng.gen_range(1..=den));
    let re = part();
    let im = part();
    &re + &(&im * &GaussRat::i())
}

fn random_label(rng: &mut ChaCha8Rng, rank: usize, num: i64, den: i64) -> Label {
    Label::new((0..rank).map(|_| random_gauss(rng, num, den)).collect())
}

impl Scenario {
    pub fn from_toml(text: &str, overrides: &Overrides) -> Result<Scenario> {
        let raw: RawScenario = toml::from_str(text).map_err(|e| config(e.to_string()))?;
        Scenario::build(raw, overrides)
    }

    pub fn load(path: &Path, overrides: &Overrides) -> Result<Scenario> {
        let text = std::fs::read_to_string(path).map_err(|e| config(format!("{}: {e}", path.display())))?;
        Scenario::from_toml(&text, overrides)
    }

    fn build(raw: RawScenario, o: &Overrides) -> Result<Scenario> {
        let rank = raw.rank;
        if rank == 0 {
            return Err(config("rank must be positive"));
        }
        let window = o.window.unwrap_or(raw.window);
        let cutoff = o.cutoff.unwrap_or(raw.cutoff);
        let branch_n = o.branch_n.unwrap_or(raw.branch_n);
        let seed = o.seed.unwrap_or(raw.seed);
        if window < 0 {
            return Err(config("window radius must be nonnegative"));
        }
        if (cutoff as i64) < window {
            return Err(config(format!("cutoff {cutoff} is below the window radius {window}")));
        }
        if branch_n % 2 == 0 {
            return Err(config(format!("branch_n must be odd, got {branch_n}")));
        }
        let mut suites = if o.suites.is_empty() { raw.suites } else { o.suites.clone() };
        if suites.is_empty() {
            return Err(config("no suites selected"));
        }
        if let Some(bad) = suites.iter().find(|s| !SUITES.contains(&s.as_str())) {
            return Err(config(format!("unknown suite {bad:?}; known: {}", SUITES.join(", "))));
        }
        suites.sort();
        suites.dedup();

        let zero = || vec![vec!["0".to_string(); rank]; rank];
        let f = parse_matrix(raw.cocycle.f.as_deref().unwrap_or(&zero()), rank, "cocycle.f")?;
        let g = parse_matrix(raw.cocycle.g.as_deref().unwrap_or(&zero()), rank, "cocycle.g")?;
        let mut cocycle = CocycleSystem::new(f, g)?.with_diagonal_fix(raw.cocycle.diagonal_fix);
        if raw.cocycle.corrupt {
            cocycle = cocycle.corrupted();
        }

        let s = raw.samples;
        let triples = s
            .triples
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let what = format!("samples.triples[{i}]");
                Ok([parse_label(&t[0], rank, &what)?, parse_label(&t[1], rank, &what)?, parse_label(&t[2], rank, &what)?])
            })
            .collect::<Result<Vec<_>>>()?;
        let mut labels = s
            .labels
            .iter()
            .enumerate()
            .map(|(i, l)| parse_label(l, rank, &format!("samples.labels[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        for t in &triples {
            if !labels.contains(&t[0]) {
                labels.push(t[0].clone());
            }
        }
        if s.numerator_bound < 0 || s.denominator_bound < 1 {
            return Err(config("sampling bounds need numerator_bound >= 0 and denominator_bound >= 1"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let random_pairs = (0..s.random_pairs)
            .map(|_| {
                let a = random_label(&mut rng, rank, s.numerator_bound, s.denominator_bound);
                let b = random_label(&mut rng, rank, s.numerator_bound, s.denominator_bound);
                (a, b)
            })
            .collect();

        let skew_branches = raw.skew.branches.unwrap_or_else(|| vec![branch_n]);
        if let Some(n) = skew_branches.iter().find(|n| *n % 2 == 0) {
            return Err(config(format!("skew.branches must be odd, got {n}")));
        }

        let lattice = match raw.lattice {
            None => None,
            Some(l) => {
                if l.gram.len() != rank {
                    return Err(config(format!("lattice.gram has rank {}, scenario rank is {rank}", l.gram.len())));
                }
                let lattice = IntegralLattice::new(l.gram).map_err(|e| config(format!("lattice.gram: {e}")))?;
                // twists are given in lattice coordinates
                let twists = l
                    .twists
                    .iter()
                    .enumerate()
                    .map(|(i, t)| {
                        let c = parse_label(t, rank, &format!("lattice.twists[{i}]"))?;
                        Ok(lattice_combination(&lattice, &c))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let vectors = if l.vectors.is_empty() { vec![unit(rank, 0), unit(rank, 0), vec![0; rank]] } else { l.vectors };
                if let Some(v) = vectors.iter().find(|v| v.len() != rank) {
                    return Err(config(format!("lattice.vectors: {v:?} does not have {rank} coordinates")));
                }
                let vectors = vectors.iter().map(|v| lattice.vector(v)).collect();
                Some(LatticeScenario { lattice, twists, vectors })
            }
        };
        if lattice.is_none() {
            if let Some(s) = suites.iter().find(|s| LATTICE_SUITES.contains(&s.as_str())) {
                return Err(config(format!("suite {s} needs a [lattice] table")));
            }
        }

        Ok(Scenario {
            rank,
            cutoff,
            window,
            branch_n,
            seed,
            suites,
            weight: raw.weight,
            mode_range: raw.mode_range,
            head_depth: raw.head_depth,
            form_depth: raw.form_depth,
            min_compared: raw.min_compared,
            cocycle,
            triples,
            labels,
            random_pairs,
            fock_samples: s.fock_samples,
            locality_orders: raw.locality.orders,
            skew_branches,
            lattice,
        })
    }

    /// `(alpha, beta)` from every triple, then the random pairs.
    pub fn pairs(&self) -> Vec<(Label, Label)> {
        let mut out: Vec<(Label, Label)> = self.triples.iter().map(|t| (t[0].clone(), t[1].clone())).collect();
        out.extend(self.random_pairs.iter().cloned());
        out
    }
}

fn unit(rank: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; rank];
    v[i] = 1;
    v
}

/// `sum_i c_i b_i` over the lattice basis `b_i`.
fn lattice_combination(lattice: &IntegralLattice, c: &Label) -> Label {
    let mut out = vec![GaussRat::zero(); lattice.dim()];
    for (ci, row) in c.components().iter().zip(lattice.basis()) {
        for (slot, b) in out.iter_mut().zip(row) {
            *slot += &(ci * b);
        }
    }
    Label::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "rank = 1\ncutoff = 4\nsuites = [\"virasoro\"]\n";

    #[test]
    fn minimal_scenario() {
        let s = Scenario::from_toml(MINIMAL, &Overrides::default()).unwrap();
        assert_eq!((s.rank, s.cutoff, s.window, s.branch_n), (1, 4, 3, 1));
        assert_eq!(s.suites, vec!["virasoro"]);
    }

    #[test]
    fn malformed_scenarios() {
        let bad = [
            "rank = 1\nsuites = [\"virasoro\"]\n",
            "rank = 1\ncutoff = 4\nsuites = [\"nope\"]\n",
            "rank = 1\ncutoff = 4\nbranch_n = 2\nsuites = [\"virasoro\"]\n",
            "rank = 1\ncutoff = 2\nwindow = 3\nsuites = [\"virasoro\"]\n",
            "rank = 1\ncutoff = 4\nsuites = [\"jacobi\"]\n[samples]\ntriples = [[[\"1/2\", \"0\"], [\"1\"], [\"0\"]]]\n",
            "rank = 1\ncutoff = 4\nsuites = [\"jacobi\"]\n[samples]\nlabels = [[\"1/0\"]]\n",
            "rank = 1\ncutoff = 4\nsuites = [\"lattice-twist\"]\n",
            "rank = 2\ncutoff = 4\nsuites = [\"dlm\"]\n[lattice]\ngram = [[1, 0], [1, 1]]\n",
            "rank = 1\ncutoff = 4\nsuites = [\"virasoro\"]\ncolour = 3\n",
        ];
        for text in bad {
            assert!(matches!(Scenario::from_toml(text, &Overrides::default()), Err(Error::Config(_))), "{text}");
        }
    }

    #[test]
    fn overrides_apply() {
        let o = Overrides { suites: vec!["heisenberg".into()], window: Some(2), cutoff: Some(9), branch_n: Some(-3), seed: Some(5) };
        let s = Scenario::from_toml(MINIMAL, &o).unwrap();
        assert_eq!((s.window, s.cutoff, s.branch_n, s.seed), (2, 9, -3, 5));
        assert_eq!(s.suites, vec!["heisenberg"]);
    }

    #[test]
    fn random_pairs_follow_the_seed() {
        let text = "rank = 2\ncutoff = 4\nsuites = [\"skew\"]\n[samples]\nrandom_pairs = 5\n";
        let a = Scenario::from_toml(text, &Overrides::default()).unwrap();
        let b = Scenario::from_toml(text, &Overrides::default()).unwrap();
        let c = Scenario::from_toml(text, &Overrides { seed: Some(1), ..Default::default() }).unwrap();
        assert_eq!(a.random_pairs, b.random_pairs);
        assert_ne!(a.random_pairs, c.random_pairs);
        assert_eq!(a.random_pairs.len(), 5);
    }

    #[test]
    fn lattice_twists_are_lattice_coordinates() {
        let text = "rank = 1\ncutoff = 4\nsuites = [\"dlm\"]\n[lattice]\ngram = [[2]]\ntwists = [[\"1/2\"]]\n";
        let s = Scenario::from_toml(text, &Overrides::default()).unwrap();
        let l = s.lattice.unwrap();
        assert_eq!(l.twists[0].norm2(), GaussRat::from_ratio(1, 2));
        assert_eq!(l.vectors.len(), 3);
    }
}
