//! Seeded generators and fixed instances.
//!
//! # Random stream contract
//!
//! All randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64`. Independent parts of one instance read disjoint ChaCha
//! streams selected with `set_stream`: stream 0 for the outer digraph (or the
//! whole digraph), stream 1 for factor sizes, stream `2 + i` for factor `i`.
//! Rejection-sampling attempt `a` and corpus instance `i` get their own seeds
//! through [`derive_seed`], a SplitMix64 step applied to `seed + index`.
//!
//! Within a stream, pairs are visited in canonical order (`i < j`, row by
//! row; ordered pairs `(u, v)`, `u != v`, row by row for Erdős–Rényi). A fair
//! coin is `gen_bool(0.5)`; `true` orients a pair from the smaller id.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::composition::Composition;
use crate::digraph::Digraph;
use crate::error::{Error, Result};

pub const DEFAULT_RETRY_CAP: usize = 10_000;

/// SplitMix64 finalizer of `seed + index`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index).wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GenKind {
    Tournament,
    Semicomplete,
    ErdosRenyi,
    Composition,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Constraint {
    StrongOuter,
    NoSinkOuter,
    NoSourceOuter,
}

impl Constraint {
    pub fn holds(self, d: &Digraph) -> bool {
        match self {
            Constraint::StrongOuter => d.is_strong(),
            Constraint::NoSinkOuter => !d.has_sink(),
            Constraint::NoSourceOuter => !d.has_source(),
        }
    }
}

/// Everything needed to regenerate an instance.
///
/// For digraph kinds `n` is the vertex count. For `Composition`, `t` is the
/// outer order, `outer` its kind, and factor orders are drawn uniformly from
/// `sizes` (inclusive); factors are Erdős–Rényi with probability `p`.
/// Constraints apply to the outer digraph (to the digraph itself for the
/// plain kinds).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub seed: u64,
    pub kind: GenKind,
    #[serde(default)]
    pub n: usize,
    #[serde(default)]
    pub t: usize,
    #[serde(default = "default_sizes")]
    pub sizes: (usize, usize),
    #[serde(default = "default_p")]
    pub p: f64,
    #[serde(default)]
    pub p2: f64,
    #[serde(default = "default_outer")]
    pub outer: GenKind,
    #[serde(default)]
    pub constraints: Vec<Constraint>,
}

fn default_sizes() -> (usize, usize) {
    (1, 3)
}

fn default_p() -> f64 {
    0.5
}

fn default_outer() -> GenKind {
    GenKind::Semicomplete
}

impl GenSpec {
    pub fn digraph(kind: GenKind, n: usize, seed: u64) -> Self {
        GenSpec {
            seed,
            kind,
            n,
            t: 0,
            sizes: default_sizes(),
            p: default_p(),
            p2: 0.0,
            outer: default_outer(),
            constraints: Vec::new(),
        }
    }

    pub fn composition(outer: GenKind, t: usize, sizes: (usize, usize), seed: u64) -> Self {
        GenSpec {
            seed,
            kind: GenKind::Composition,
            n: 0,
            t,
            sizes,
            p: default_p(),
            p2: 0.0,
            outer,
            constraints: Vec::new(),
        }
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = p;
        self
    }

    pub fn with_p2(mut self, p2: f64) -> Self {
        self.p2 = p2;
        self
    }

    pub fn with_constraints(mut self, c: &[Constraint]) -> Self {
        self.constraints = c.to_vec();
        self
    }

    fn check(&self) -> Result<()> {
        for (name, v) in [("p", self.p), ("p2", self.p2)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Precondition(format!("{name} = {v} is not a probability")));
            }
        }
        Ok(())
    }

    fn describe(&self) -> String {
        serde_json::to_string(self).unwrap_or_else(|_| format!("{self:?}"))
    }
}

/// Each pair `i < j` oriented by one fair coin.
pub fn random_tournament(n: usize, seed: u64) -> Digraph {
    tournament_from(&mut stream(seed, 0), n)
}

fn tournament_from(rng: &mut ChaCha8Rng, n: usize) -> Digraph {
    let mut arcs = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            arcs.push(if rng.gen_bool(0.5) { (i, j) } else { (j, i) });
        }
    }
    Digraph::new(n, arcs).expect("generated arcs are valid")
}

/// Each pair gets both arcs with probability `p2`, otherwise one fair-coin arc.
pub fn random_semicomplete(n: usize, seed: u64, p2: f64) -> Digraph {
    semicomplete_from(&mut stream(seed, 0), n, p2)
}

fn semicomplete_from(rng: &mut ChaCha8Rng, n: usize, p2: f64) -> Digraph {
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p2) {
                arcs.extend([(i, j), (j, i)]);
            } else if rng.gen_bool(0.5) {
                arcs.push((i, j));
            } else {
                arcs.push((j, i));
            }
        }
    }
    Digraph::new(n, arcs).expect("generated arcs are valid")
}

/// Every ordered pair is an arc independently with probability `p`.
pub fn random_erdos_renyi(n: usize, seed: u64, p: f64) -> Digraph {
    erdos_renyi_from(&mut stream(seed, 0), n, p)
}

fn erdos_renyi_from(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Digraph {
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(p) {
                arcs.push((u, v));
            }
        }
    }
    Digraph::new(n, arcs).expect("generated arcs are valid")
}

/// Strong semicomplete digraph on the Hamiltonian cycle `0 -> 1 -> ... -> n-1 -> 0`
/// whose remaining pairs point backwards with probability `1 - q` (both ways
/// with probability `p2`). Small `q` yields large eccentricities, which is
/// where non-kings live.
pub fn random_backbone_semicomplete(n: usize, seed: u64, q: f64, p2: f64) -> Digraph {
    let mut rng = stream(seed, 0);
    let mut arcs: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    if n >= 2 {
        arcs.push((n - 1, 0));
    }
    for i in 0..n {
        for j in i + 2..n {
            if (i, j) == (0, n - 1) {
                continue;
            }
            if rng.gen_bool(p2) {
                arcs.extend([(i, j), (j, i)]);
            } else if rng.gen_bool(q) {
                arcs.push((i, j));
            } else {
                arcs.push((j, i));
            }
        }
    }
    Digraph::new(n, arcs).expect("generated arcs are valid")
}

fn digraph_of_kind(rng: &mut ChaCha8Rng, kind: GenKind, n: usize, spec: &GenSpec) -> Digraph {
    match kind {
        GenKind::Tournament => tournament_from(rng, n),
        GenKind::Semicomplete | GenKind::Composition => semicomplete_from(rng, n, spec.p2),
        GenKind::ErdosRenyi => erdos_renyi_from(rng, n, spec.p),
    }
}

/// A plain digraph per `spec.kind` and `spec.n`, honouring the constraints.
pub fn random_digraph(spec: &GenSpec) -> Result<Digraph> {
    spec.check()?;
    if spec.kind == GenKind::Composition {
        return Err(Error::Precondition("use random_composition for compositions".into()));
    }
    for attempt in 0..DEFAULT_RETRY_CAP {
        let seed = if attempt == 0 { spec.seed } else { derive_seed(spec.seed, attempt as u64) };
        let d = digraph_of_kind(&mut stream(seed, 0), spec.kind, spec.n, spec);
        if spec.constraints.iter().all(|c| c.holds(&d)) {
            return Ok(d);
        }
    }
    Err(Error::RetryCapExhausted {
        attempts: DEFAULT_RETRY_CAP,
        spec: spec.describe(),
    })
}

/// A composition per `spec`; constraints are met by rejection sampling.
pub fn random_composition(spec: &GenSpec) -> Result<Composition> {
    random_composition_with_cap(spec, DEFAULT_RETRY_CAP)
}

pub fn random_composition_with_cap(spec: &GenSpec, retry_cap: usize) -> Result<Composition> {
    spec.check()?;
    if spec.t < 2 || spec.sizes.0 < 1 || spec.sizes.0 > spec.sizes.1 {
        return Err(Error::Precondition(format!(
            "composition needs t >= 2 and 1 <= min size <= max size: {}",
            spec.describe()
        )));
    }
    let outer_kind = match spec.kind {
        GenKind::Composition => spec.outer,
        k => k,
    };
    for attempt in 0..retry_cap {
        let seed = if attempt == 0 { spec.seed } else { derive_seed(spec.seed, attempt as u64) };
        let outer = digraph_of_kind(&mut stream(seed, 0), outer_kind, spec.t, spec);
        if !spec.constraints.iter().all(|c| c.holds(&outer)) {
            continue;
        }
        let mut size_rng = stream(seed, 1);
        let sizes: Vec<usize> = (0..spec.t)
            .map(|_| size_rng.gen_range(spec.sizes.0..=spec.sizes.1))
            .collect();
        let factors = sizes
            .iter()
            .enumerate()
            .map(|(i, &n)| erdos_renyi_from(&mut stream(seed, 2 + i as u64), n, spec.p))
            .collect();
        return Composition::new(outer, factors);
    }
    Err(Error::RetryCapExhausted {
        attempts: retry_cap,
        spec: spec.describe(),
    })
}

/// The composition `TT_3[P, K_1, K_1]` where `TT_3` is the transitive
/// tournament `u_1 => u_2 => u_3` and `P` is the bidirected path on seven
/// vertices. Its only 3-king is the middle of the path, flat id 3.
pub fn remark_fixture() -> Composition {
    remark_fixture_with_path(7)
}

/// The same construction with a six-vertex path, read literally. This one
/// has two 3-kings (flat ids 2 and 3).
pub fn remark_fixture_literal() -> Composition {
    remark_fixture_with_path(6)
}

fn remark_fixture_with_path(len: usize) -> Composition {
    let outer = Digraph::new(3, [(0, 1), (0, 2), (1, 2)]).expect("valid");
    let path = Digraph::new(len, (1..len).flat_map(|j| [(j - 1, j), (j, j - 1)])).expect("valid");
    Composition::new(outer, vec![path, Digraph::empty(1), Digraph::empty(1)]).expect("valid")
}

/// Every labelled tournament on `n` vertices, in binary-counter order over
/// the canonical pair list.
pub fn all_tournaments(n: usize) -> impl Iterator<Item = Digraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let m = pairs.len();
    assert!(m < 32, "too many tournaments to enumerate");
    (0..1u64 << m).map(move |mask| {
        let arcs = pairs
            .iter()
            .enumerate()
            .map(|(b, &(i, j))| if mask >> b & 1 == 0 { (i, j) } else { (j, i) });
        Digraph::new(n, arcs).expect("valid")
    })
}

/// Every labelled semicomplete digraph on `n` vertices (each pair forward,
/// backward, or both).
pub fn all_semicomplete(n: usize) -> impl Iterator<Item = Digraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let total = 3u64.checked_pow(pairs.len() as u32).expect("too many digraphs to enumerate");
    (0..total).map(move |mut code| {
        let mut arcs = Vec::new();
        for &(i, j) in &pairs {
            match code % 3 {
                0 => arcs.push((i, j)),
                1 => arcs.push((j, i)),
                _ => arcs.extend([(i, j), (j, i)]),
            }
            code /= 3;
        }
        Digraph::new(n, arcs).expect("valid")
    })
}
