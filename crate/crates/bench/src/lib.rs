//! Seeded inputs shared by the benchmarks.

use kk_core::{gen, Composition, Constraint, Digraph, GenKind, GenSpec};

/// Strong semicomplete composition with `t` outer vertices and factors of
/// order 1 to `max_size`.
pub fn strong_composition(t: usize, max_size: usize, seed: u64) -> Composition {
    let spec = GenSpec::composition(GenKind::Semicomplete, t, (1, max_size), seed)
        .with_p2(0.3)
        .with_constraints(&[Constraint::StrongOuter]);
    gen::random_composition(&spec).expect("strong outers are common at this density")
}

pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Digraph {
    gen::random_erdos_renyi(n, seed, p)
}
