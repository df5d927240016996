//! Dense digraphs on vertex ids `0..n` with the reachability primitives the
//! rest of the crate builds on.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Length of a shortest directed path, or [`Distance::Unreachable`].
///
/// The derived ordering puts every finite value below `Unreachable`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(u32),
    Unreachable,
}

impl Distance {
    pub const ZERO: Distance = Distance::Finite(0);

    pub fn finite(self) -> Option<u32> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Unreachable => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Distance::Finite(_))
    }

    /// `true` when the distance is finite and at most `bound`.
    pub fn within(self, bound: usize) -> bool {
        matches!(self, Distance::Finite(d) if (d as usize) <= bound)
    }

    /// `true` when the distance is at least `bound`; unreachable always is.
    pub fn at_least(self, bound: usize) -> bool {
        match self {
            Distance::Finite(d) => d as usize >= bound,
            Distance::Unreachable => true,
        }
    }

    pub fn plus_one(self) -> Distance {
        match self {
            Distance::Finite(d) => Distance::Finite(d + 1),
            Distance::Unreachable => Distance::Unreachable,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Unreachable => f.write_str("inf"),
        }
    }
}

impl Serialize for Distance {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.finite().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Distance {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(match Option::<u32>::deserialize(d)? {
            Some(v) => Distance::Finite(v),
            None => Distance::Unreachable,
        })
    }
}

/// A loopless digraph without parallel arcs.
///
/// Both adjacency directions are kept, each list sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "DigraphRepr", into = "DigraphRepr")]
pub struct Digraph {
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct DigraphRepr {
    n: usize,
    arcs: Vec<[usize; 2]>,
}

impl TryFrom<DigraphRepr> for Digraph {
    type Error = Error;

    fn try_from(r: DigraphRepr) -> Result<Self> {
        Digraph::new(r.n, r.arcs.into_iter().map(|[u, v]| (u, v)))
    }
}

impl From<Digraph> for DigraphRepr {
    fn from(d: Digraph) -> Self {
        DigraphRepr {
            n: d.n(),
            arcs: d.arcs().map(|(u, v)| [u, v]).collect(),
        }
    }
}

impl Digraph {
    /// Builds a digraph from an arc list. Repeated arcs collapse into one.
    pub fn new(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut out_adj = vec![Vec::new(); n];
        for (u, v) in arcs {
            if u >= n || v >= n {
                return Err(Error::ArcOutOfRange { u, v, n });
            }
            if u == v {
                return Err(Error::LoopArc { u, v });
            }
            out_adj[u].push(v);
        }
        Ok(Self::from_out_lists(out_adj))
    }

    /// `n` isolated vertices.
    pub fn empty(n: usize) -> Self {
        Digraph {
            out_adj: vec![Vec::new(); n],
            in_adj: vec![Vec::new(); n],
        }
    }

    /// Caller guarantees ids are in range and there are no loops.
    pub(crate) fn from_out_lists(mut out_adj: Vec<Vec<usize>>) -> Self {
        let n = out_adj.len();
        let mut in_adj = vec![Vec::new(); n];
        for (u, outs) in out_adj.iter_mut().enumerate() {
            outs.sort_unstable();
            outs.dedup();
            for &v in outs.iter() {
                debug_assert!(v < n && v != u);
                in_adj[v].push(u);
            }
        }
        // in-lists are filled in increasing u, so already sorted
        Digraph { out_adj, in_adj }
    }

    pub fn n(&self) -> usize {
        self.out_adj.len()
    }

    pub fn arc_count(&self) -> usize {
        self.out_adj.iter().map(Vec::len).sum()
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out_adj[v]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.in_adj[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_adj[v].len()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_adj[v].len()
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out_adj[u].binary_search(&v).is_ok()
    }

    /// `true` when at least one of `u -> v`, `v -> u` is present.
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.has_arc(u, v) || self.has_arc(v, u)
    }

    /// All arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out_adj
            .iter()
            .enumerate()
            .flat_map(|(u, outs)| outs.iter().map(move |&v| (u, v)))
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.n()
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { v, n: self.n() })
        }
    }

    /// Every arc reversed.
    pub fn converse(&self) -> Digraph {
        Digraph {
            out_adj: self.in_adj.clone(),
            in_adj: self.out_adj.clone(),
        }
    }

    /// The subdigraph induced by `keep` (in the given order). Vertex `i` of
    /// the result is `keep[i]` of `self`.
    pub fn induced(&self, keep: &[usize]) -> Digraph {
        let mut new_id = vec![usize::MAX; self.n()];
        for (i, &v) in keep.iter().enumerate() {
            new_id[v] = i;
        }
        let out = keep
            .iter()
            .map(|&v| {
                self.out_adj[v]
                    .iter()
                    .filter_map(|&w| (new_id[w] != usize::MAX).then_some(new_id[w]))
                    .collect()
            })
            .collect();
        Digraph::from_out_lists(out)
    }

    /// Breadth-first distances from `s` to every vertex.
    pub fn distances_from(&self, s: usize) -> Vec<Distance> {
        bfs(&self.out_adj, s)
    }

    /// Breadth-first distances from every vertex to `t`.
    pub fn distances_to(&self, t: usize) -> Vec<Distance> {
        bfs(&self.in_adj, t)
    }

    pub fn distance_matrix(&self) -> DistanceMatrix {
        let n = self.n();
        let mut data = Vec::with_capacity(n * n);
        for s in 0..n {
            data.extend(self.distances_from(s));
        }
        DistanceMatrix { n, data }
    }

    /// Length of a shortest directed cycle through `v`.
    pub fn min_cycle_len_through(&self, v: usize) -> Distance {
        let to_v = self.distances_to(v);
        self.out_adj[v]
            .iter()
            .map(|&w| to_v[w].plus_one())
            .min()
            .unwrap_or(Distance::Unreachable)
    }

    pub fn strong_decomposition(&self) -> StrongDecomposition {
        StrongDecomposition::compute(self)
    }

    pub fn is_strong(&self) -> bool {
        self.n() <= 1 || self.strong_decomposition().components.len() == 1
    }

    pub fn is_semicomplete(&self) -> bool {
        let n = self.n();
        (0..n).all(|u| (u + 1..n).all(|v| self.adjacent(u, v)))
    }

    pub fn classify(&self) -> DigraphClass {
        let n = self.n();
        let is_semicomplete = self.is_semicomplete();
        let has_two_cycle = self.arcs().any(|(u, v)| u < v && self.has_arc(v, u));
        DigraphClass {
            is_semicomplete,
            is_tournament: is_semicomplete && !has_two_cycle,
            sources: (0..n).filter(|&v| self.in_degree(v) == 0).collect(),
            sinks: (0..n).filter(|&v| self.out_degree(v) == 0).collect(),
            is_strong: self.strong_decomposition().components.len() == 1,
        }
    }

    pub fn has_sink(&self) -> bool {
        self.vertices().any(|v| self.out_degree(v) == 0)
    }

    pub fn has_source(&self) -> bool {
        self.vertices().any(|v| self.in_degree(v) == 0)
    }

    /// Graphviz rendering.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph G {\n");
        for v in self.vertices() {
            s.push_str(&format!("  {v};\n"));
        }
        for (u, v) in self.arcs() {
            s.push_str(&format!("  {u} -> {v};\n"));
        }
        s.push_str("}\n");
        s
    }
}

fn bfs(adj: &[Vec<usize>], s: usize) -> Vec<Distance> {
    let mut dist = vec![Distance::Unreachable; adj.len()];
    dist[s] = Distance::ZERO;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        let next = dist[u].plus_one();
        for &w in &adj[u] {
            if dist[w] == Distance::Unreachable {
                dist[w] = next;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// All-pairs distances, row `u` holding `d(u, .)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<Distance>,
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, from: usize, to: usize) -> Distance {
        self.data[from * self.n + to]
    }

    pub fn row(&self, from: usize) -> &[Distance] {
        &self.data[from * self.n..(from + 1) * self.n]
    }

    /// Largest distance from `v` to any other vertex; zero on one vertex.
    pub fn out_eccentricity(&self, v: usize) -> Distance {
        self.row(v).iter().copied().max().unwrap_or(Distance::ZERO)
    }
}

/// Partition of the vertex set into strong components.
///
/// Components are numbered in a topological order of the condensation, so
/// every arc between two components goes from a lower id to a higher one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrongDecomposition {
    pub component_of: Vec<usize>,
    pub components: Vec<Vec<usize>>,
    pub initial_ids: Vec<usize>,
}

impl StrongDecomposition {
    fn compute(d: &Digraph) -> Self {
        let n = d.n();
        const UNVISITED: usize = usize::MAX;
        let mut index = vec![UNVISITED; n];
        let mut lowlink = vec![0; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut call: Vec<(usize, usize)> = Vec::new();
        let mut next_index = 0;
        let mut found: Vec<Vec<usize>> = Vec::new();

        for root in 0..n {
            if index[root] != UNVISITED {
                continue;
            }
            index[root] = next_index;
            lowlink[root] = next_index;
            next_index += 1;
            stack.push(root);
            on_stack[root] = true;
            call.push((root, 0));

            while let Some(&mut (v, ref mut pos)) = call.last_mut() {
                if let Some(&w) = d.out_adj[v].get(*pos) {
                    *pos += 1;
                    if index[w] == UNVISITED {
                        index[w] = next_index;
                        lowlink[w] = next_index;
                        next_index += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        lowlink[v] = lowlink[v].min(index[w]);
                    }
                    continue;
                }
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    lowlink[parent] = lowlink[parent].min(lowlink[v]);
                }
                if lowlink[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    found.push(comp);
                }
            }
        }

        // Tarjan emits components in reverse topological order.
        found.reverse();
        let mut component_of = vec![0; n];
        for (c, comp) in found.iter().enumerate() {
            for &v in comp {
                component_of[v] = c;
            }
        }
        let mut entered = vec![false; found.len()];
        for (u, v) in d.arcs() {
            if component_of[u] != component_of[v] {
                entered[component_of[v]] = true;
            }
        }
        let initial_ids = (0..found.len()).filter(|&c| !entered[c]).collect();
        StrongDecomposition {
            component_of,
            components: found,
            initial_ids,
        }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

/// Structural flags of a digraph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DigraphClass {
    pub is_semicomplete: bool,
    pub is_tournament: bool,
    pub sources: Vec<usize>,
    pub sinks: Vec<usize>,
    pub is_strong: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use Distance::{Finite, Unreachable};

    fn path3() -> Digraph {
        Digraph::new(3, [(0, 1), (1, 2)]).unwrap()
    }

    fn cycle3() -> Digraph {
        Digraph::new(3, [(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn tour4() -> Digraph {
        Digraph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3)]).unwrap()
    }

    #[test]
    fn build_examples() {
        let one = Digraph::new(1, []).unwrap();
        assert_eq!(one.n(), 1);
        assert_eq!(one.arc_count(), 0);

        let two = Digraph::new(2, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(two.out_neighbors(0), &[1]);
        assert_eq!(two.in_neighbors(0), &[1]);

        let dup = Digraph::new(3, [(0, 1), (0, 1), (1, 2)]).unwrap();
        assert_eq!(dup.arc_count(), 2);
    }

    #[test]
    fn build_rejects_bad_arcs() {
        assert_eq!(
            Digraph::new(2, [(0, 1), (1, 1)]),
            Err(Error::LoopArc { u: 1, v: 1 })
        );
        assert_eq!(
            Digraph::new(2, [(0, 2)]),
            Err(Error::ArcOutOfRange { u: 0, v: 2, n: 2 })
        );
    }

    #[test]
    fn distances() {
        assert_eq!(path3().distances_from(0), vec![Finite(0), Finite(1), Finite(2)]);
        assert_eq!(path3().distances_from(2), vec![Unreachable, Unreachable, Finite(0)]);
        assert_eq!(cycle3().distances_from(0), vec![Finite(0), Finite(1), Finite(2)]);
        assert!(Finite(1_000_000) < Unreachable);
    }

    #[test]
    fn strong_components() {
        let sd = cycle3().strong_decomposition();
        assert_eq!(sd.components, vec![vec![0, 1, 2]]);
        assert_eq!(sd.initial_ids, vec![0]);

        let sd = path3().strong_decomposition();
        assert_eq!(sd.components, vec![vec![0], vec![1], vec![2]]);
        assert_eq!(sd.initial_ids, vec![sd.component_of[0]]);

        let d = Digraph::new(3, [(0, 1), (1, 0), (1, 2)]).unwrap();
        let sd = d.strong_decomposition();
        assert_eq!(sd.len(), 2);
        assert_eq!(sd.components[sd.component_of[0]], vec![0, 1]);
        assert_eq!(sd.components[sd.component_of[2]], vec![2]);
        assert_eq!(sd.initial_ids, vec![sd.component_of[0]]);
    }

    #[test]
    fn classify_examples() {
        let c = Digraph::new(2, [(0, 1), (1, 0)]).unwrap().classify();
        assert!(c.is_semicomplete && !c.is_tournament && c.is_strong);
        assert!(c.sources.is_empty() && c.sinks.is_empty());

        let c = Digraph::new(3, [(0, 1), (0, 2), (1, 2)]).unwrap().classify();
        assert!(c.is_tournament && !c.is_strong);
        assert_eq!(c.sources, vec![0]);
        assert_eq!(c.sinks, vec![2]);

        let c = Digraph::empty(2).classify();
        assert!(!c.is_semicomplete);
        assert_eq!(c.sources, vec![0, 1]);
        assert_eq!(c.sinks, vec![0, 1]);
    }

    #[test]
    fn shortest_cycles() {
        for v in 0..3 {
            assert_eq!(cycle3().min_cycle_len_through(v), Finite(3));
        }
        let d = Digraph::new(3, [(0, 1), (1, 0), (1, 2)]).unwrap();
        assert_eq!(d.min_cycle_len_through(2), Unreachable);
        assert_eq!(d.min_cycle_len_through(0), Finite(2));
        // 0 -> 2 -> 3 -> 0 (0 -> 1 -> 3 -> 0 also has length 3)
        assert_eq!(tour4().min_cycle_len_through(0), Finite(3));
    }

    #[test]
    fn converse_examples() {
        assert_eq!(path3().converse(), Digraph::new(3, [(2, 1), (1, 0)]).unwrap());
        let two = Digraph::new(2, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(two.converse(), two);
        assert_eq!(Digraph::empty(3).converse(), Digraph::empty(3));
    }

    #[test]
    fn induced_keeps_order() {
        let d = tour4().induced(&[3, 0, 2]);
        // 3->0, 0->2, 2->3 in old ids
        assert_eq!(d, Digraph::new(3, [(0, 1), (1, 2), (2, 0)]).unwrap());
    }

    #[test]
    fn json_shape() {
        let s = serde_json::to_string(&path3()).unwrap();
        assert_eq!(s, r#"{"n":3,"arcs":[[0,1],[1,2]]}"#);
        let back: Digraph = serde_json::from_str(&s).unwrap();
        assert_eq!(back, path3());
        assert!(serde_json::from_str::<Digraph>(r#"{"n":2,"arcs":[[0,0]]}"#).is_err());
    }
}
