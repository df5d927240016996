//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::time::{Duration, Instant};

use kk_core::experiments::{self, ExperimentConfig, ExperimentId, ExperimentSummary};
use kk_core::gen::{self, derive_seed};
use kk_core::{kings, CompositionVertex, Digraph, GenKind, GenSpec};

struct Verdict {
    pass: bool,
    detail: String,
}

fn run(id: ExperimentId, instances: usize) -> ExperimentSummary {
    let cfg = ExperimentConfig::new(id).with_instances(instances).with_max_n(12);
    experiments::run(id, &cfg).expect("experiment configuration is valid")
}

fn describe(s: &ExperimentSummary) -> String {
    let mut d = format!("{} instances, {} checks, {} violations", s.instances, s.checks, s.violations);
    if let Some(v) = &s.first_violation {
        d += &format!(" (first: instance {}: {})", v.instance, v.message);
    }
    d
}

/// k-king sets from a Floyd-Warshall closure, independent of the library's BFS.
fn kings_by_closure(d: &Digraph, k: u32) -> Vec<usize> {
    const INF: u32 = u32::MAX;
    let n = d.n();
    let mut m = vec![vec![INF; n]; n];
    for (v, row) in m.iter_mut().enumerate() {
        row[v] = 0;
    }
    for (u, v) in d.arcs() {
        m[u][v] = 1;
    }
    for w in 0..n {
        for u in 0..n {
            for v in 0..n {
                if m[u][w] != INF && m[w][v] != INF && m[u][w] + m[w][v] < m[u][v] {
                    m[u][v] = m[u][w] + m[w][v];
                }
            }
        }
    }
    (0..n).filter(|&u| m[u].iter().all(|&x| x <= k)).collect()
}

fn characterization_equivalence() -> Verdict {
    let started = Instant::now();
    let s = run(ExperimentId::Thma, 2000);
    // independent pass over a separately generated corpus
    let kinds = [GenKind::Tournament, GenKind::Semicomplete, GenKind::ErdosRenyi];
    let mut disagreements = 0;
    for i in 0..2000u64 {
        let t = 2 + (i % 4) as usize;
        let spec = GenSpec::composition(kinds[(i / 4 % 3) as usize], t, (1, (12 / t).min(3)), derive_seed(99, i))
            .with_p([0.2, 0.5, 0.8][(i / 12 % 3) as usize])
            .with_p2(0.3);
        let c = gen::random_composition(&spec).unwrap();
        for k in 2..=6 {
            let brute = kings_by_closure(c.flatten(), k as u32);
            let has = kings::has_k_king_by_characterization(&c, k).unwrap().exists;
            let all = kings::all_k_kings_by_characterization(&c, k).unwrap();
            if has == brute.is_empty() || all != (brute.len() == c.n()) {
                disagreements += 1;
            }
        }
    }
    let elapsed = started.elapsed();
    Verdict {
        pass: s.passed() && s.instances >= 2000 && disagreements == 0 && elapsed < Duration::from_secs(60),
        detail: format!(
            "{}; closure oracle disagreements {disagreements}; {:.1}s",
            describe(&s),
            elapsed.as_secs_f64()
        ),
    }
}

fn two_three_kings() -> Verdict {
    let s = run(ExperimentId::Thmd, 2000);
    Verdict {
        pass: s.passed() && s.instances >= 2000,
        detail: describe(&s),
    }
}

fn non_king_adjacency() -> Verdict {
    let s = run(ExperimentId::Thmc, 400);
    let with = s.counter("instances_with_nonkings");
    Verdict {
        pass: s.passed() && with >= 50,
        detail: format!("{}; {with} instances with non-kings, {} non-kings", describe(&s), s.counter("nonkings_checked")),
    }
}

fn establishment() -> Verdict {
    let s = run(ExperimentId::Thme, 200);
    Verdict {
        pass: s.passed() && s.instances >= 50,
        detail: format!(
            "{}; {} exhaustive and {} searched outers",
            describe(&s),
            s.counter("exhaustive_outers"),
            s.counter("searched_outers")
        ),
    }
}

fn four_king_bounds() -> Verdict {
    let s = run(ExperimentId::Thmf, 1000);
    Verdict {
        pass: s.passed() && s.instances >= 1,
        detail: format!(
            "{}; {} instances without a 3-king",
            describe(&s),
            s.counter("no_three_king_instances")
        ),
    }
}

fn quasi_kernel_validity() -> Verdict {
    let s = run(ExperimentId::Thm012, 5000);
    Verdict {
        pass: s.passed() && s.instances >= 5000,
        detail: describe(&s),
    }
}

fn disjoint_quasi_kernels() -> Verdict {
    let b = run(ExperimentId::Thmb1, 1000);
    let s = run(ExperimentId::Thm011, 1000);
    Verdict {
        pass: b.passed() && b.instances >= 1000 && s.passed() && s.counter("random") >= 1000,
        detail: format!(
            "disjoint: {}; singleton: {} ({} exhaustive, {} random, {} sink-free)",
            describe(&b),
            describe(&s),
            s.counter("exhaustive"),
            s.counter("random"),
            s.counter("sink_free")
        ),
    }
}

fn poly_vs_oracle() -> Verdict {
    let s = run(ExperimentId::Thmd2Poly, 500);
    let poly = Duration::from_nanos(s.counter("poly_nanos"));
    Verdict {
        pass: s.passed() && s.instances >= 500 && poly < Duration::from_secs(5),
        detail: format!("{}; poly side {:.3}s", describe(&s), poly.as_secs_f64()),
    }
}

fn reduction_soundness() -> Verdict {
    let s = run(ExperimentId::Thmd2Reduction, 200);
    Verdict {
        pass: s.passed() && s.counter("random") >= 200,
        detail: format!(
            "{}; {} without a 3-kernel",
            describe(&s),
            s.instances as u64 - s.counter("with_3kernel")
        ),
    }
}

fn lem11_equivalence() -> Verdict {
    let s = run(ExperimentId::Lem11, 500);
    Verdict {
        pass: s.passed() && s.instances >= 500,
        detail: describe(&s),
    }
}

fn fixture_regression() -> Verdict {
    let c = gen::remark_fixture();
    let q = c.flatten();
    let u14 = c.flat_id(CompositionVertex { factor: 0, inner: 3 });
    let u11 = c.flat_id(CompositionVertex { factor: 0, inner: 0 });
    let no_source = !q.has_source();
    let outer_source = c.outer().has_source();
    let unique = kings_by_closure(q, 3) == vec![u14];
    let apart = !q.adjacent(u14, u11);
    Verdict {
        pass: no_source && outer_source && unique && apart,
        detail: format!(
            "Q source-free {no_source}, T has source {outer_source}, unique 3-king u_(1,4) {unique}, u_(1,4) and u_(1,1) non-adjacent {apart}"
        ),
    }
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 11] = [
        ("characterization equivalence", characterization_equivalence),
        ("two 3-kings bound", two_three_kings),
        ("non-king adjacency", non_king_adjacency),
        ("establishment", establishment),
        ("four-king bounds", four_king_bounds),
        ("quasi-kernel validity", quasi_kernel_validity),
        ("disjoint quasi-kernels", disjoint_quasi_kernels),
        ("poly vs oracle k-kernel", poly_vs_oracle),
        ("reduction soundness", reduction_soundness),
        ("absorbent singleton equivalence", lem11_equivalence),
        ("fixture regression", fixture_regression),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        if !v.pass {
            failed += 1;
        }
        println!("{} criterion {:>2} {name}: {}", if v.pass { "PASS" } else { "FAIL" }, i + 1, v.detail);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
