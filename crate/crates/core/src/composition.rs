//! Two-level compositions `T[H_1, ..., H_t]`.
//!
//! Each outer vertex `u_i` of `T` is replaced by the factor `H_i`, and every
//! outer arc `u_i -> u_p` becomes the complete bundle from `H_i` to `H_p`.
//! Factor and inner indices are 0-based here; reports add one to the factor
//! index.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::digraph::Digraph;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CompositionRepr", into = "CompositionRepr")]
pub struct Composition {
    outer: Digraph,
    factors: Vec<Digraph>,
    offsets: Vec<usize>,
    flat: Digraph,
}

#[derive(Serialize, Deserialize)]
struct CompositionRepr {
    outer: Digraph,
    factors: Vec<Digraph>,
}

impl TryFrom<CompositionRepr> for Composition {
    type Error = Error;

    fn try_from(r: CompositionRepr) -> Result<Self> {
        Composition::new(r.outer, r.factors)
    }
}

impl From<Composition> for CompositionRepr {
    fn from(c: Composition) -> Self {
        CompositionRepr {
            outer: c.outer,
            factors: c.factors,
        }
    }
}

/// A vertex `u_{factor, inner}` of the composition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CompositionVertex {
    pub factor: usize,
    pub inner: usize,
}

/// Structural summary of the outer digraph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OuterReport {
    pub outer_semicomplete: bool,
    pub outer_strong: bool,
    pub outer_sources: Vec<usize>,
    pub outer_sinks: Vec<usize>,
}

impl OuterReport {
    pub fn is_semicomplete_composition(&self) -> bool {
        self.outer_semicomplete
    }

    pub fn is_strong_semicomplete_composition(&self) -> bool {
        self.outer_semicomplete && self.outer_strong
    }
}

impl Composition {
    pub fn new(outer: Digraph, factors: Vec<Digraph>) -> Result<Self> {
        let t = outer.n();
        if t < 2 {
            return Err(Error::TooFewOuterVertices { t });
        }
        if factors.len() != t {
            return Err(Error::FactorCountMismatch {
                outer: t,
                factors: factors.len(),
            });
        }
        if let Some(index) = factors.iter().position(|h| h.n() == 0) {
            return Err(Error::EmptyFactor { index });
        }
        let mut offsets = Vec::with_capacity(t);
        let mut total = 0;
        for h in &factors {
            offsets.push(total);
            total += h.n();
        }
        let flat = expand(&outer, &factors, &offsets, total);
        Ok(Composition {
            outer,
            factors,
            offsets,
            flat,
        })
    }

    /// Composition whose factors are all single vertices; flattens to `T`.
    pub fn trivial(outer: Digraph) -> Result<Self> {
        let factors = vec![Digraph::empty(1); outer.n()];
        Composition::new(outer, factors)
    }

    pub fn outer(&self) -> &Digraph {
        &self.outer
    }

    pub fn factors(&self) -> &[Digraph] {
        &self.factors
    }

    pub fn factor(&self, i: usize) -> &Digraph {
        &self.factors[i]
    }

    pub fn t(&self) -> usize {
        self.outer.n()
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn factor_sizes(&self) -> Vec<usize> {
        self.factors.iter().map(Digraph::n).collect()
    }

    /// The flattened digraph `Q`.
    pub fn flatten(&self) -> &Digraph {
        &self.flat
    }

    pub fn n(&self) -> usize {
        self.flat.n()
    }

    /// Flat ids occupied by factor `i`.
    pub fn factor_range(&self, i: usize) -> Range<usize> {
        self.offsets[i]..self.offsets[i] + self.factors[i].n()
    }

    pub fn flat_id(&self, v: CompositionVertex) -> usize {
        debug_assert!(v.inner < self.factors[v.factor].n());
        self.offsets[v.factor] + v.inner
    }

    pub fn vertex(&self, flat: usize) -> CompositionVertex {
        assert!(flat < self.n(), "flat id {flat} out of range");
        // offsets are strictly increasing, so the owning factor is the last
        // offset not exceeding `flat`
        let factor = self.offsets.partition_point(|&o| o <= flat) - 1;
        CompositionVertex {
            factor,
            inner: flat - self.offsets[factor],
        }
    }

    pub fn factor_of(&self, flat: usize) -> usize {
        self.vertex(flat).factor
    }

    pub fn outer_report(&self) -> OuterReport {
        let class = self.outer.classify();
        OuterReport {
            outer_semicomplete: class.is_semicomplete,
            outer_strong: class.is_strong,
            outer_sources: class.sources,
            outer_sinks: class.sinks,
        }
    }

    pub fn is_semicomplete(&self) -> bool {
        self.outer.is_semicomplete()
    }

    pub(crate) fn require_semicomplete(&self) -> Result<()> {
        if self.outer.is_semicomplete() {
            Ok(())
        } else {
            Err(Error::Precondition(
                "composition is not semicomplete (outer digraph has a non-adjacent pair)".into(),
            ))
        }
    }

    pub(crate) fn require_strong_semicomplete(&self) -> Result<()> {
        self.require_semicomplete()?;
        if self.outer.is_strong() {
            Ok(())
        } else {
            Err(Error::Precondition(
                "semicomplete composition is not strong (outer digraph is not strong)".into(),
            ))
        }
    }

    /// Graphviz rendering of the flattened digraph with one cluster per factor.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph Q {\n");
        for i in 0..self.t() {
            s.push_str(&format!("  subgraph cluster_{} {{\n    label=\"H{}\";\n", i + 1, i + 1));
            for v in self.factor_range(i) {
                s.push_str(&format!("    {v};\n"));
            }
            s.push_str("  }\n");
        }
        for (u, v) in self.flat.arcs() {
            s.push_str(&format!("  {u} -> {v};\n"));
        }
        s.push_str("}\n");
        s
    }
}

fn expand(outer: &Digraph, factors: &[Digraph], offsets: &[usize], total: usize) -> Digraph {
    let mut out = vec![Vec::new(); total];
    for (i, h) in factors.iter().enumerate() {
        for (a, b) in h.arcs() {
            out[offsets[i] + a].push(offsets[i] + b);
        }
    }
    for (i, p) in outer.arcs() {
        let targets = offsets[p]..offsets[p] + factors[p].n();
        for list in &mut out[offsets[i]..offsets[i] + factors[i].n()] {
            list.extend(targets.clone());
        }
    }
    Digraph::from_out_lists(out)
}
