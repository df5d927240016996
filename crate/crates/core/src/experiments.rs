//! Corpus experiments: each structural result checked against brute force on seeded
//! random (and, where cheap, exhaustive) instances.
//!
//! Instances are evaluated in parallel and aggregated in instance order, so a
//! summary depends only on the configuration.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::composition::Composition;
use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::format::{write_composition, write_digraph};
use crate::gen::{self, derive_seed, Constraint, GenKind, GenSpec};
use crate::kernels::{self, CertificateKind};
use crate::kings;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExperimentId {
    Thma,
    Thmd,
    Thmc,
    Thme,
    Thmf,
    Thm012,
    Thm011,
    Thmb1,
    Thmc1,
    Thmd2Poly,
    Thmd2Reduction,
    Lem11,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 12] = [
        ExperimentId::Thma,
        ExperimentId::Thmd,
        ExperimentId::Thmc,
        ExperimentId::Thme,
        ExperimentId::Thmf,
        ExperimentId::Thm012,
        ExperimentId::Thm011,
        ExperimentId::Thmb1,
        ExperimentId::Thmc1,
        ExperimentId::Thmd2Poly,
        ExperimentId::Thmd2Reduction,
        ExperimentId::Lem11,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentId::Thma => "thma",
            ExperimentId::Thmd => "thmd",
            ExperimentId::Thmc => "thmc",
            ExperimentId::Thme => "thme",
            ExperimentId::Thmf => "thmf",
            ExperimentId::Thm012 => "thm012",
            ExperimentId::Thm011 => "thm011",
            ExperimentId::Thmb1 => "thmb1",
            ExperimentId::Thmc1 => "thmc1",
            ExperimentId::Thmd2Poly => "thmd2-poly",
            ExperimentId::Thmd2Reduction => "thmd2-reduction",
            ExperimentId::Lem11 => "lem11",
        }
    }

    /// Corpus size used when the caller does not pick one.
    pub fn default_instances(self) -> usize {
        match self {
            ExperimentId::Thma | ExperimentId::Thmd => 2000,
            ExperimentId::Thmc => 400,
            ExperimentId::Thme => 200,
            ExperimentId::Thmf => 1000,
            ExperimentId::Thm012 => 5000,
            ExperimentId::Thm011 | ExperimentId::Thmb1 => 1000,
            ExperimentId::Thmc1 => 300,
            ExperimentId::Thmd2Poly | ExperimentId::Lem11 => 500,
            ExperimentId::Thmd2Reduction => 200,
        }
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentId::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown experiment `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub instances: usize,
    pub max_n: usize,
    pub seed: u64,
    pub oracle_cap: usize,
}

impl ExperimentConfig {
    pub fn new(id: ExperimentId) -> Self {
        ExperimentConfig {
            instances: id.default_instances(),
            max_n: 12,
            seed: 0x6b6b,
            oracle_cap: kernels::DEFAULT_ORACLE_CAP,
        }
    }

    pub fn with_instances(mut self, instances: usize) -> Self {
        self.instances = instances;
        self
    }

    pub fn with_max_n(mut self, max_n: usize) -> Self {
        self.max_n = max_n;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// The first instance on which a check failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub instance: usize,
    pub message: String,
    /// The offending instance in the text file format.
    pub instance_text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExperimentSummary {
    pub experiment: String,
    pub instances: usize,
    pub checks: u64,
    pub violations: usize,
    pub counters: BTreeMap<String, u64>,
    pub first_violation: Option<Violation>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl ExperimentSummary {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub fn counter(&self, name: &str) -> u64 {
        self.counters.get(name).copied().unwrap_or(0)
    }
}

#[derive(Default)]
struct Outcome {
    checks: u64,
    counters: Vec<(&'static str, u64)>,
    violation: Option<(String, String)>,
}

impl Outcome {
    fn check(&mut self, ok: bool, message: impl FnOnce() -> String, text: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.violation.is_none() {
            self.violation = Some((message(), text()));
        }
    }

    fn count(&mut self, name: &'static str, by: u64) {
        self.counters.push((name, by));
    }

    /// An operation error counts as a violation of this instance.
    fn fail(&mut self, e: Error, text: impl FnOnce() -> String) {
        self.check(false, || e.to_string(), text);
    }
}

fn aggregate(id: ExperimentId, outcomes: Vec<Outcome>, started: Instant) -> ExperimentSummary {
    let mut counters = BTreeMap::new();
    let mut checks = 0;
    let mut violations = 0;
    let mut first_violation = None;
    let instances = outcomes.len();
    for (i, o) in outcomes.into_iter().enumerate() {
        checks += o.checks;
        for (name, by) in o.counters {
            *counters.entry(name.to_string()).or_insert(0) += by;
        }
        if let Some((message, instance_text)) = o.violation {
            violations += 1;
            first_violation.get_or_insert(Violation {
                instance: i,
                message,
                instance_text,
            });
        }
    }
    ExperimentSummary {
        experiment: id.name().to_string(),
        instances,
        checks,
        violations,
        counters,
        first_violation,
        elapsed: started.elapsed(),
    }
}

fn par_run(n: usize, f: impl Fn(usize) -> Outcome + Sync + Send) -> Vec<Outcome> {
    (0..n).into_par_iter().map(f).collect()
}

pub fn run(id: ExperimentId, cfg: &ExperimentConfig) -> Result<ExperimentSummary> {
    if cfg.max_n < 3 {
        return Err(Error::Precondition("max-n must be at least 3".into()));
    }
    let started = Instant::now();
    let outcomes = match id {
        ExperimentId::Thma => par_run(cfg.instances, |i| thma(cfg, i)),
        ExperimentId::Thmd => par_run(cfg.instances, |i| thmd(cfg, i)),
        ExperimentId::Thmc => par_run(cfg.instances, |i| thmc(cfg, i)),
        ExperimentId::Thme => {
            let outers = establishable_outers(cfg);
            let mut head = Outcome::default();
            head.count("exhaustive_outers", outers.iter().filter(|(_, ex)| *ex).count() as u64);
            head.count("searched_outers", outers.iter().filter(|(_, ex)| !*ex).count() as u64);
            if outers.is_empty() {
                return Err(Error::Precondition("no establishable outer digraph found".into()));
            }
            let mut v = par_run(cfg.instances, |i| thme(cfg, &outers, i));
            if let Some(first) = v.first_mut() {
                first.counters.extend(head.counters);
            }
            v
        }
        ExperimentId::Thmf => par_run(cfg.instances, |i| thmf(cfg, i)),
        ExperimentId::Thm012 => par_run(cfg.instances, |i| thm012(cfg, i)),
        ExperimentId::Thm011 => {
            let mut v = thm011_exhaustive();
            v.extend(par_run(cfg.instances, |i| thm011_random(cfg, i)));
            v
        }
        ExperimentId::Thmb1 => par_run(cfg.instances, |i| thmb1(cfg, i)),
        ExperimentId::Thmc1 => par_run(cfg.instances, |i| thmc1(cfg, i)),
        ExperimentId::Thmd2Poly => par_run(cfg.instances, |i| thmd2_poly(cfg, i)),
        ExperimentId::Thmd2Reduction => {
            let mut v = reduction_exhaustive(cfg);
            v.extend(par_run(cfg.instances, |i| reduction_random(cfg, i)));
            v
        }
        ExperimentId::Lem11 => par_run(cfg.instances, |i| lem11(cfg, i)),
    };
    Ok(aggregate(id, outcomes, started))
}

const OUTER_KINDS: [GenKind; 3] = [GenKind::Tournament, GenKind::Semicomplete, GenKind::ErdosRenyi];
const PROBS: [f64; 3] = [0.2, 0.5, 0.8];

/// Largest factor order keeping `t` factors within `max_n` vertices.
fn max_factor(t: usize, max_n: usize, cap: usize) -> usize {
    (max_n / t).clamp(1, cap)
}

fn comp_text(c: &Composition) -> impl FnOnce() -> String + '_ {
    move || write_composition(c)
}

/// Random strong semicomplete composition with `t` in `2..=max_t`.
fn strong_semicomplete(cfg: &ExperimentConfig, i: usize, salt: u64, max_t: usize, max_size: usize) -> Result<Composition> {
    let seed = derive_seed(cfg.seed ^ salt, i as u64);
    let t = 2 + (seed % (max_t as u64 - 1)) as usize;
    let spec = GenSpec::composition(GenKind::Semicomplete, t, (1, max_factor(t, cfg.max_n, max_size)), seed)
        .with_p(PROBS[(seed >> 8) as usize % 3])
        .with_p2(if t == 2 { 0.5 } else { [0.0, 0.2, 0.5][(seed >> 16) as usize % 3] })
        .with_constraints(&[Constraint::StrongOuter]);
    gen::random_composition(&spec)
}

/// Strong semicomplete composition over a backbone outer, rich in non-kings.
fn backbone_composition(cfg: &ExperimentConfig, seed: u64, t: usize, max_size: usize) -> Composition {
    let outer = gen::random_backbone_semicomplete(t, seed, 0.15, 0.1);
    let hi = max_factor(t, cfg.max_n, max_size);
    let factors = (0..t)
        .map(|j| {
            let s = derive_seed(seed, 100 + j as u64);
            let n = 1 + (s % hi as u64) as usize;
            gen::random_erdos_renyi(n, s, PROBS[(s >> 8) as usize % 3])
        })
        .collect();
    Composition::new(outer, factors).expect("valid composition")
}

fn thma(cfg: &ExperimentConfig, i: usize) -> Outcome {
    let mut o = Outcome::default();
    let seed = derive_seed(cfg.seed, i as u64);
    let t = 2 + i % 4;
    let kind = OUTER_KINDS[(i / 4) % 3];
    let spec = GenSpec::composition(kind, t, (1, max_factor(t, cfg.max_n, 3)), seed)
        .with_p(PROBS[(i / 12) % 3])
        .with_p2(0.3);
    let c = match gen::random_composition(&spec) {
        Ok(c) => c,
        Err(e) => {
            o.fail(e, || format!("{spec:?}"));
            return o;
        }
    };
    let q = c.flatten();
    let outer_n = c.t();
    for k in 2..=6 {
        let brute = kings::k_kings(q, k).expect("k >= 2");
        let outer = kings::k_kings(c.outer(), k).expect("k >= 2");
        let exists = kings::has_k_king_by_characterization(&c, k).expect("k >= 2");
        o.check(
            exists.exists == !brute.kings.is_empty(),
            || format!("k={k}: characterization says exists={}, brute force found {:?}", exists.exists, brute.kings),
            comp_text(&c),
        );
        if let Some(f) = exists.witness_factor {
            o.check(
                c.factor_range(f).any(|v| brute.is_king(v)),
                || format!("k={k}: witness factor {} holds no k-king", f + 1),
                comp_text(&c),
            );
        }
        let all = kings::all_k_kings_by_characterization(&c, k).expect("k >= 2");
        o.check(
            all == (brute.kings.len() == q.n()),
            || format!("k={k}: all-kings characterization says {all}, brute force found {} of {}", brute.kings.len(), q.n()),
            comp_text(&c),
        );
        for &v in &brute.kings {
            let f = c.factor_of(v);
            o.check(
                outer.is_king(f),
                || format!("k={k}: {v} is a king but u_{} is not a king of T", f + 1),
                comp_text(&c),
            );
        }
        o.count("with_king", u64::from(exists.exists));
        o.count("all_kings", u64::from(all));
    }
    o.count("outer_vertices", outer_n as u64);
    o
}

fn thmd(cfg: &ExperimentConfig, i: usize) -> Outcome {
    let mut o = Outcome::default();
    match strong_semicomplete(cfg, i, 0xd, 6, 3) {
        Ok(c) => {
            let brute = kings::k_kings(c.flatten(), 3).expect("k >= 2");
            o.check(
                brute.kings.len() >= 2,
                || format!("strong semicomplete composition has 3-kings {:?}", brute.kings),
                comp_text(&c),
            );
            match kings::classify_three_kings(&c) {
                Ok(cl) => o.check(
                    cl.three_kings(&c) == brute.kings,
                    || format!("classification gives {:?}, brute force {:?}", cl.three_kings(&c), brute.kings),
                    comp_text(&c),
                ),
                Err(e) => o.fail(e, comp_text(&c)),
            }
        }
        Err(e) => o.fail(e, String::new),
    }

    // non-strong clause: no source in T and some 3-king gives at least two
    let seed = derive_seed(cfg.seed ^ 0xd0, i as u64);
    let t = 3 + i % 4;
    let spec = GenSpec::composition(GenKind::Semicomplete, t, (1, max_factor(t, cfg.max_n, 3)), seed)
        .with_p(PROBS[i % 3])
        .with_p2(0.3)
        .with_constraints(&[Constraint::NoSourceOuter]);
    match gen::random_composition(&spec) {
        Ok(c) => {
            let brute = kings::k_kings(c.flatten(), 3).expect("k >= 2");
            o.count(
                "nonstrong_with_3king",
                u64::from(!c.outer().is_strong() && !brute.kings.is_empty()),
            );
            o.check(
                brute.kings.is_empty() || brute.kings.len() >= 2,
                || format!("source-free outer but 3-kings {:?}", brute.kings),
                comp_text(&c),
            );
        }
        Err(e) => o.fail(e, String::new),
    }
    o
}

fn thmc(cfg: &ExperimentConfig, i: usize) -> Outcome {
    let mut o = Outcome::default();
    let seed = derive_seed(cfg.seed ^ 0xc, i as u64);
    let c = if i % 4 != 3 {
        backbone_composition(cfg, seed, 4 + (seed % 4) as usize, 2)
    } else {
        match strong_semicomplete(cfg, i, 0xc, 7, 2) {
            Ok(c) => c,
            Err(e) => {
                o.fail(e, String::new);
                return o;
            }
        }
    };
    let q = c.flatten();
    let dm = q.distance_matrix();
    let three = kings::k_kings(q, 3).expect("k >= 2");
    let non: Vec<usize> = q.vertices().filter(|&v| !three.is_king(v)).collect();
    o.count("instances_with_nonkings", u64::from(!non.is_empty()));
    for &u in &non {
        o.count("nonkings_checked", 1);
        for &v in &three.kings {
            o.check(q.adjacent(u, v), || format!("3-king {v} and non-king {u} are not adjacent"), comp_text(&c));
        }
        match kings::non_king_dominator_witness(&c, u) {
            Ok(v) => o.check(
                three.is_king(v) && q.has_arc(v, u) && dm.get(u, v).at_least(4),
                || format!("witness {v} for non-king {u} does not validate"),
                comp_text(&c),
            ),
            Err(e) => o.fail(e, comp_text(&c)),
        }
    }
    o
}

/// Strong semicomplete outers passing the establishment condition: every
/// labelled tournament on 4..=6 vertices, then seeded semicomplete search.
/// The flag marks the exhaustive ones.
fn establishable_outers(cfg: &ExperimentConfig) -> Vec<(Digraph, bool)> {
    let mut out: Vec<(Digraph, bool)> = (4..=6usize)
        .flat_map(|n| gen::all_tournaments(n).collect::<Vec<_>>())
        .collect::<Vec<_>>()
        .into_par_iter()
        .filter(|t| t.is_strong() && kings::can_establish(t).map(|c| c.ok).unwrap_or(false))
        .map(|t| (t, true))
        .collect();
    let searched: Vec<(Digraph, bool)> = (0..2000u64)
        .into_par_iter()
        .filter_map(|j| {
            let seed = derive_seed(cfg.seed ^ 0xe, j);
            let n = 5 + (seed % 3) as usize;
            let t = gen::random_backbone_semicomplete(n, seed, 0.4, 0.15);
            (kings::can_establish(&t).map(|c| c.ok).unwrap_or(false)).then_some((t, false))
        })
        .collect();
    out.extend(searched);
    out
}

fn thme(cfg: &ExperimentConfig, outers: &[(Digraph, bool)], i: usize) -> Outcome {
    let mut o = Outcome::default();
    let seed = derive_seed(cfg.seed ^ 0xe0, i as u64);
    let (t, exhaustive) = &outers[(seed % outers.len() as u64) as usize];
    let hi = max_factor(t.n(), cfg.max_n, 2);
    let factors = (0..t.n())
        .map(|j| {
            let s = derive_seed(seed, j as u64);
            gen::random_erdos_renyi(1 + (s % hi as u64) as usize, s, 0.5)
        })
        .collect();
    let c = Composition::new(t.clone(), factors).expect("valid composition");
    o.count(if *exhaustive { "from_exhaustive" } else { "from_search" }, 1);
    match kings::establish(&c) {
        Ok(e) => {
            let original: Vec<usize> = (0..c.n()).collect();
            let kings3 = kings::k_kings(e.flatten(), 3).expect("k >= 2").kings;
            o.check(kings3 == original, || format!("3-kings of established digraph: {kings3:?}"), comp_text(&c));
            o.check(
                e.flatten().induced(&original) == *c.flatten(),
                || "original digraph is not an induced subdigraph".into(),
                comp_text(&c),
            );
            o.check(e.is_semicomplete(), || "established composition not semicomplete".into(), comp_text(&c));
        }
        Err(err) => o.fail(err, comp_text(&c)),
    }
    o
}

fn thmf(cfg: &ExperimentConfig, i: usize) -> Outcome {
    let mut o = Outcome::default();
    let mut attempt = 0u64;
    let c = loop {
        let j = i as u64 * 64 + attempt;
        attempt += 1;
        let c = if j.is_multiple_of(2) {
            let seed = derive_seed(cfg.seed ^ 0xf, j);
            backbone_composition(cfg, seed, 3 + (seed % 5) as usize, 3)
        } else {
            match strong_semicomplete(cfg, j as usize, 0xf, 6, 4) {
                Ok(c) => c,
                Err(e) => {
                    o.fail(e, String::new);
                    return o;
                }
            }
        };
        if c.n() >= 6 && c.n() <= cfg.max_n.max(6) {
            break c;
        }
    };
    match kings::four_king_bound_report(&c) {
        Ok(r) => {
            o.count("no_three_king_instances", u64::from(r.three_kings == 0));
            o.check(
                r.bound_satisfied,
                || format!("n={} four_kings={} three_kings={}", r.n, r.four_kings, r.three_kings),
                comp_text(&c),
            );
        }
        Err(e) => o.fail(e, comp_text(&c)),
    }
    o
}

fn thm012(cfg: &ExperimentConfig, i: usize) -> Outcome {
    let mut o = Outcome::default();
    let seed = derive_seed(cfg.seed ^ 0x12, i as u64);
    let n = 1 + (seed % 14) as usize;
    let p = [0.1, 0.3, 0.5, 0.8][i % 4];
    let d = gen::random_erdos_renyi(n, seed, p);
    let qk = kernels::quasi_kernel(&d);
    let ok = kernels::validate_certificate(&d, &qk).unwrap_or(false);
    o.check(ok, || format!("quasi-kernel {:?} does not validate", qk.vertices), || write_digraph(&d));
    o
}

fn singleton_qk_check(o: &mut Outcome, d: &Digraph) {
    if d.has_sink() {
        return;
    }
    o.count("sink_free", 1);
    match kernels::singleton_quasi_kernel_vertices(d) {
        Ok(s) => o.check(
            s.len() >= 2,
            || format!("singleton quasi-kernels {s:?}"),
            || write_digraph(d),
        ),
        Err(e) => o.fail(e, || write_digraph(d)),
    }
}

fn thm011_exhaustive() -> Vec<Outcome> {
    (2..=5usize)
        .flat_map(|n| gen::all_semicomplete(n).collect::<Vec<_>>())
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|d| {
            let mut o = Outcome::default();
            o.count("exhaustive", 1);
            singleton_qk_check(&mut o, &d);
            o
        })
        .collect()
}

fn thm011_random(cfg: &ExperimentConfig, i: usize) -> Outcome {
    let mut o = Outcome::default();
    let seed = derive_seed(cfg.seed ^ 0x11, i as u64);
    let n = 2 + (seed % 9) as usize;
    let spec = GenSpec::digraph(GenKind::Semicomplete, n, seed)
        .with_p2([0.1, 0.3, 0.5][i % 3])
        .with_constraints(&[Constraint::NoSinkOuter]);
    match gen::random_digraph(&spec) {
        Ok(d) => {
            o.count("random", 1);
            singleton_qk_check(&mut o, &d);
        }
        Err(e) => o.fail(e, String::new),
    }
    o
}

fn thmb1(cfg: &ExperimentConfig, i: usize) -> Outcome {
    let mut o = Outcome::default();
    let seed = derive_seed(cfg.seed ^ 0xb1, i as u64);
    let t = 2 + i % 4;
    let spec = GenSpec::composition(GenKind::Semicomplete, t, (1, max_factor(t, cfg.max_n, 3)), seed)
        .with_p(PROBS[(i / 4) % 3])
        .with_p2([0.1, 0.3, 0.5][(i / 12) % 3])
        .with_constraints(&[Constraint::NoSinkOuter]);
    let c = match gen::random_composition(&spec) {
        Ok(c) => c,
        Err(e) => {
            o.fail(e, String::new);
            return o;
        }
    };
    match kernels::disjoint_quasi_kernels(&c) {
        Ok((a, b)) => {
            let q = c.flatten();
            let valid = |k: &kernels::KernelCertificate| {
                k.kind == CertificateKind::QuasiKernel && kernels::validate_certificate(q, k).unwrap_or(false)
            };
            o.check(valid(&a) && valid(&b), || format!("{:?} / {:?} do not validate", a.vertices, b.vertices), comp_text(&c));
            o.check(
                a.vertices.iter().all(|v| !b.vertices.contains(v)),
                || format!("{:?} and {:?} intersect", a.vertices, b.vertices),
                comp_text(&c),
            );
        }
        Err(e) => o.fail(e, comp_text(&c)),
    }
    o
}

fn thmc1(cfg: &ExperimentConfig, i: usize) -> Outcome {
    let mut o = Outcome::default();
    let seed = derive_seed(cfg.seed ^ 0xc1, i as u64);
    let t = 2 + i % 4;
    let spec = GenSpec::composition(OUTER_KINDS[i % 2], t, (1, max_factor(t, cfg.max_n, 3)), seed)
        .with_p(PROBS[(i / 2) % 3])
        .with_p2(0.2);
    let c = match gen::random_composition(&spec) {
        Ok(c) => c,
        Err(e) => {
            o.fail(e, String::new);
            return o;
        }
    };
    for k in 3..=5 {
        match kernels::k_kernel_brute_force(c.flatten(), k, cfg.oracle_cap) {
            Ok(Some(cert)) => {
                o.count("kernels_found", 1);
                let f = c.factor_of(cert.vertices[0]);
                o.check(
                    cert.vertices.iter().all(|&v| c.factor_of(v) == f),
                    || format!("k={k}: kernel {:?} spans several factors", cert.vertices),
                    comp_text(&c),
                );
                o.check(
                    cert.vertices.iter().any(|&v| kernels::reduced_singleton_absorbent(&c, v, k - 1)),
                    || format!("k={k}: no vertex of {:?} is absorbent in its reduced digraph", cert.vertices),
                    comp_text(&c),
                );
            }
            Ok(None) => {}
            Err(e) => o.fail(e, comp_text(&c)),
        }
    }
    o
}

fn thmd2_poly(cfg: &ExperimentConfig, i: usize) -> Outcome {
    let mut o = Outcome::default();
    let c = match strong_semicomplete(cfg, i, 0xd2, 6, 3) {
        Ok(c) => c,
        Err(e) => {
            o.fail(e, String::new);
            return o;
        }
    };
    for k in 4..=6 {
        let started = Instant::now();
        let poly = kernels::k_kernel_strong_semicomplete(&c, k);
        o.count("poly_nanos", started.elapsed().as_nanos() as u64);
        let oracle = kernels::k_kernel_brute_force(c.flatten(), k, cfg.oracle_cap);
        match (poly, oracle) {
            (Ok(p), Ok(b)) => {
                o.count("kernels_found", u64::from(p.is_some()));
                o.check(
                    p.is_some() == b.is_some(),
                    || format!("k={k}: poly {:?}, oracle {:?}", p.as_ref().map(|c| &c.vertices), b.as_ref().map(|c| &c.vertices)),
                    comp_text(&c),
                );
                if let Some(p) = &p {
                    o.check(
                        kernels::validate_certificate(c.flatten(), p).unwrap_or(false),
                        || format!("k={k}: certificate {:?} does not validate", p.vertices),
                        comp_text(&c),
                    );
                }
            }
            (Err(e), _) | (_, Err(e)) => o.fail(e, comp_text(&c)),
        }
    }
    o
}

fn reduction_check(o: &mut Outcome, d: &Digraph, cap: usize) {
    let gadget = match kernels::c3_gadget(d) {
        Ok(g) => g,
        Err(e) => return o.fail(e, || write_digraph(d)),
    };
    match (
        kernels::k_kernel_brute_force(d, 3, cap),
        kernels::k_kernel_brute_force(gadget.flatten(), 3, cap),
    ) {
        (Ok(a), Ok(b)) => {
            o.count("with_3kernel", u64::from(a.is_some()));
            o.check(
                a.is_some() == b.is_some(),
                || format!("D has 3-kernel: {}, gadget has 3-kernel: {}", a.is_some(), b.is_some()),
                || write_digraph(d),
            );
        }
        (Err(e), _) | (_, Err(e)) => o.fail(e, || write_digraph(d)),
    }
}

/// Every digraph on at most four vertices.
fn reduction_exhaustive(cfg: &ExperimentConfig) -> Vec<Outcome> {
    let mut all = Vec::new();
    for n in 1..=4usize {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))).collect();
        for mask in 0..1u32 << pairs.len() {
            let arcs = pairs.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &a)| a);
            all.push(Digraph::new(n, arcs).expect("valid"));
        }
    }
    all.into_par_iter()
        .map(|d| {
            let mut o = Outcome::default();
            o.count("exhaustive", 1);
            reduction_check(&mut o, &d, cfg.oracle_cap);
            o
        })
        .collect()
}

fn reduction_random(cfg: &ExperimentConfig, i: usize) -> Outcome {
    let mut o = Outcome::default();
    let seed = derive_seed(cfg.seed ^ 0xd23, i as u64);
    let n = 1 + (seed % 4) as usize;
    let d = gen::random_erdos_renyi(n, seed, [0.2, 0.4, 0.6, 0.8][i % 4]);
    o.count("random", 1);
    reduction_check(&mut o, &d, cfg.oracle_cap);
    o
}

fn lem11(cfg: &ExperimentConfig, i: usize) -> Outcome {
    let mut o = Outcome::default();
    let seed = derive_seed(cfg.seed ^ 0x11e, i as u64);
    let t = 2 + i % 4;
    let spec = GenSpec::composition(OUTER_KINDS[i % 3], t, (1, max_factor(t, cfg.max_n, 3)), seed)
        .with_p(PROBS[(i / 3) % 3])
        .with_p2(0.2);
    let c = match gen::random_composition(&spec) {
        Ok(c) => c,
        Err(e) => {
            o.fail(e, String::new);
            return o;
        }
    };
    for k in 3..=5 {
        for v in 0..c.n() {
            let reduced = kernels::reduced_singleton_absorbent(&c, v, k);
            let outer = kernels::outer_singleton_absorbent(c.outer(), c.factor_of(v), k);
            o.count("absorbent", u64::from(outer));
            o.check(
                reduced == outer,
                || format!("k={k}, v={v}: reduced digraph says {reduced}, outer says {outer}"),
                comp_text(&c),
            );
        }
    }
    o
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for id in ExperimentId::ALL {
            assert_eq!(id.name().parse::<ExperimentId>().unwrap(), id);
        }
        assert!("thmz".parse::<ExperimentId>().is_err());
    }

    #[test]
    fn small_runs_are_clean_and_deterministic() {
        for id in ExperimentId::ALL {
            if id == ExperimentId::Thme {
                continue;
            }
            let cfg = ExperimentConfig::new(id).with_instances(20);
            let a = run(id, &cfg).unwrap();
            assert!(a.passed(), "{id}: {:?}", a.first_violation);
            let b = run(id, &cfg).unwrap();
            let strip = |mut s: ExperimentSummary| {
                s.counters.remove("poly_nanos");
                s.elapsed = Duration::ZERO;
                s
            };
            assert_eq!(strip(a), strip(b));
        }
    }
}
