//! k-kings of digraphs and of compositions.
//!
//! The composition-level routines read the outer digraph and the factors
//! directly; they never rediscover structure from the flattened digraph.
//! Every one of them has a brute-force counterpart (`k_kings` on
//! [`Composition::flatten`]) that the tests compare against.

use serde::{Serialize, Serializer};

use crate::composition::Composition;
use crate::digraph::{Digraph, Distance};
use crate::error::{Error, Result};

/// Per-vertex king status for a fixed `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KingReport {
    pub k: usize,
    pub kings: Vec<usize>,
    pub strict: Vec<usize>,
    #[serde(rename = "ecc")]
    pub ecc_out: Vec<Distance>,
}

impl KingReport {
    pub fn is_king(&self, v: usize) -> bool {
        self.kings.binary_search(&v).is_ok()
    }

    pub fn is_strict(&self, v: usize) -> bool {
        self.strict.binary_search(&v).is_ok()
    }
}

fn check_k(k: usize, min: usize) -> Result<()> {
    if k < min {
        Err(Error::KTooSmall { k, min })
    } else {
        Ok(())
    }
}

/// Exact k-king set by one BFS per vertex.
pub fn k_kings(d: &Digraph, k: usize) -> Result<KingReport> {
    check_k(k, 2)?;
    let ecc_out: Vec<Distance> = d
        .vertices()
        .map(|v| d.distances_from(v).into_iter().max().unwrap_or(Distance::ZERO))
        .collect();
    Ok(report_from_ecc(k, ecc_out))
}

fn report_from_ecc(k: usize, ecc_out: Vec<Distance>) -> KingReport {
    let kings = (0..ecc_out.len()).filter(|&v| ecc_out[v].within(k)).collect();
    let strict = (0..ecc_out.len())
        .filter(|&v| ecc_out[v] == Distance::Finite(k as u32))
        .collect();
    KingReport {
        k,
        kings,
        strict,
        ecc_out,
    }
}

/// Vertices that are not 3-kings.
pub fn non_kings(d: &Digraph) -> Vec<usize> {
    let r = k_kings(d, 3).expect("k = 3 is valid");
    d.vertices().filter(|&v| !r.is_king(v)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum KingReason {
    /// The factor itself has a k-king (always true for a single vertex).
    FactorHasKing,
    /// The factor has two or more vertices and its outer vertex lies on a
    /// cycle of length at most k.
    ShortOuterCycle,
}

/// Outcome of the existence characterization. `witness_factor` is 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KingExistence {
    pub exists: bool,
    pub witness_factor: Option<usize>,
    pub reason: Option<KingReason>,
}

impl Serialize for KingExistence {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            exists: bool,
            witness_factor: Option<usize>,
            reason: Option<KingReason>,
        }
        Repr {
            exists: self.exists,
            witness_factor: self.witness_factor.map(|i| i + 1),
            reason: self.reason,
        }
        .serialize(s)
    }
}

/// Per-factor data shared by both characterizations.
struct FactorView {
    outer_king: bool,
    short_cycle: bool,
    factor_kings: usize,
    size: usize,
}

fn factor_views(c: &Composition, k: usize) -> Result<Vec<FactorView>> {
    let outer = k_kings(c.outer(), k)?;
    (0..c.t())
        .map(|i| {
            let h = c.factor(i);
            Ok(FactorView {
                outer_king: outer.is_king(i),
                short_cycle: h.n() >= 2 && c.outer().min_cycle_len_through(i).within(k),
                factor_kings: k_kings(h, k)?.kings.len(),
                size: h.n(),
            })
        })
        .collect()
}

/// Whether the flattened composition has a k-king, decided from the outer
/// digraph and the factors alone. Returns the smallest qualifying factor.
pub fn has_k_king_by_characterization(c: &Composition, k: usize) -> Result<KingExistence> {
    check_k(k, 2)?;
    for (i, f) in factor_views(c, k)?.into_iter().enumerate() {
        if !f.outer_king {
            continue;
        }
        let reason = if f.factor_kings > 0 {
            KingReason::FactorHasKing
        } else if f.short_cycle {
            KingReason::ShortOuterCycle
        } else {
            continue;
        };
        return Ok(KingExistence {
            exists: true,
            witness_factor: Some(i),
            reason: Some(reason),
        });
    }
    Ok(KingExistence {
        exists: false,
        witness_factor: None,
        reason: None,
    })
}

/// Whether every vertex of the flattened composition is a k-king.
pub fn all_k_kings_by_characterization(c: &Composition, k: usize) -> Result<bool> {
    check_k(k, 2)?;
    Ok(factor_views(c, k)?
        .iter()
        .all(|f| f.outer_king && (f.factor_kings == f.size || f.short_cycle)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorFlag {
    All3Kings,
    No3Kings,
}

impl Serialize for FactorFlag {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(match self {
            FactorFlag::All3Kings => "ALL",
            FactorFlag::No3Kings => "NONE",
        })
    }
}

/// 3-king status of whole factors in a strong semicomplete composition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorKingClassification {
    pub flags: Vec<FactorFlag>,
    pub outer_three_kings: Vec<usize>,
}

impl FactorKingClassification {
    /// Flat ids of all 3-kings of the composition.
    pub fn three_kings(&self, c: &Composition) -> Vec<usize> {
        self.flags
            .iter()
            .enumerate()
            .filter(|(_, f)| **f == FactorFlag::All3Kings)
            .flat_map(|(i, _)| c.factor_range(i))
            .collect()
    }
}

/// Serialized as `{"1": "ALL", "2": "NONE", ...}` with 1-based keys.
impl Serialize for FactorKingClassification {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(self.flags.len()))?;
        for (i, f) in self.flags.iter().enumerate() {
            map.serialize_entry(&(i + 1).to_string(), f)?;
        }
        map.end()
    }
}

/// In a strong semicomplete composition a factor is either entirely 3-kings
/// or has none, according to whether its outer vertex is a 3-king of `T`.
pub fn classify_three_kings(c: &Composition) -> Result<FactorKingClassification> {
    c.require_strong_semicomplete()?;
    let outer = k_kings(c.outer(), 3)?;
    let flags = (0..c.t())
        .map(|i| {
            if outer.is_king(i) {
                FactorFlag::All3Kings
            } else {
                FactorFlag::No3Kings
            }
        })
        .collect();
    Ok(FactorKingClassification {
        flags,
        outer_three_kings: outer.kings,
    })
}

/// For a non-king `u` of a strong semicomplete composition, the smallest
/// 3-king `v` with `v -> u` and `d(u, v) > 3`.
pub fn non_king_dominator_witness(c: &Composition, u: usize) -> Result<usize> {
    c.require_strong_semicomplete()?;
    let q = c.flatten();
    q.check_vertex(u)?;
    let dm = q.distance_matrix();
    let is_three_king = |v: usize| dm.out_eccentricity(v).within(3);
    if is_three_king(u) {
        return Err(Error::Precondition(format!("vertex {u} is a 3-king, not a non-king")));
    }
    q.in_neighbors(u)
        .iter()
        .copied()
        .find(|&v| is_three_king(v) && dm.get(u, v).at_least(4))
        .ok_or_else(|| {
            Error::Anomaly(format!(
                "non-king {u} has no dominating 3-king at distance > 3"
            ))
        })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EstablishCheck {
    pub ok: bool,
    pub strict3kings: Vec<usize>,
    pub two_kings: Vec<usize>,
    pub blocking_two_kings: Vec<usize>,
}

/// Sufficient condition for establishment: a strict 3-king exists and every
/// 2-king has an in-neighbour among the strict 3-kings.
pub fn can_establish(t: &Digraph) -> Result<EstablishCheck> {
    if !t.is_semicomplete() || !t.is_strong() {
        return Err(Error::Precondition(
            "outer digraph must be strong and semicomplete".into(),
        ));
    }
    let strict3kings = k_kings(t, 3)?.strict;
    let two_kings = k_kings(t, 2)?.kings;
    let blocking_two_kings: Vec<usize> = two_kings
        .iter()
        .copied()
        .filter(|&w| !t.in_neighbors(w).iter().any(|x| strict3kings.contains(x)))
        .collect();
    Ok(EstablishCheck {
        ok: !strict3kings.is_empty() && blocking_two_kings.is_empty(),
        strict3kings,
        two_kings,
        blocking_two_kings,
    })
}

/// Embeds `c` into a larger semicomplete composition whose 3-kings are
/// exactly the original vertices.
///
/// One singleton factor `v_a` is appended per strict 3-king `s_a` of the
/// outer digraph. `v_a` dominates `H_{s_a}` only, is dominated by every
/// other original factor, and the new vertices copy the arcs among their
/// strict 3-kings. Original flat ids are preserved.
pub fn establish(c: &Composition) -> Result<Composition> {
    c.require_strong_semicomplete()?;
    let check = can_establish(c.outer())?;
    if !check.ok {
        return Err(Error::Precondition(format!(
            "outer digraph cannot be established (strict 3-kings {:?}, undominated 2-kings {:?})",
            check.strict3kings, check.blocking_two_kings
        )));
    }
    let t = c.t();
    let strict = &check.strict3kings;
    let p = strict.len();
    let mut arcs: Vec<(usize, usize)> = c.outer().arcs().collect();
    for (a, &s) in strict.iter().enumerate() {
        arcs.push((t + a, s));
        arcs.extend((0..t).filter(|&j| j != s).map(|j| (j, t + a)));
        for (b, &r) in strict.iter().enumerate() {
            if c.outer().has_arc(s, r) {
                arcs.push((t + a, t + b));
            }
        }
    }
    let outer = Digraph::new(t + p, arcs)?;
    let mut factors = c.factors().to_vec();
    factors.extend(std::iter::repeat_n(Digraph::empty(1), p));
    let established = Composition::new(outer, factors)?;

    let kings = k_kings(established.flatten(), 3)?.kings;
    if kings != (0..c.n()).collect::<Vec<_>>() {
        return Err(Error::Anomaly(format!(
            "established composition has 3-kings {kings:?}, expected exactly 0..{}",
            c.n()
        )));
    }
    Ok(established)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FourKingReport {
    pub n: usize,
    pub four_kings: usize,
    pub three_kings: usize,
    pub bound_satisfied: bool,
}

/// At least five 4-kings once there are six vertices, and at least eight
/// whenever there is no 3-king.
pub fn four_king_bound_report(c: &Composition) -> Result<FourKingReport> {
    c.require_strong_semicomplete()?;
    let q = c.flatten();
    let four_kings = k_kings(q, 4)?.kings.len();
    let three_kings = k_kings(q, 3)?.kings.len();
    let n = q.n();
    let bound_satisfied = (n < 6 || four_kings >= 5) && (three_kings > 0 || four_kings >= 8);
    Ok(FourKingReport {
        n,
        four_kings,
        three_kings,
        bound_satisfied,
    })
}
