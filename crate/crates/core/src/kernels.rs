//! Quasi-kernels, k-kernels, and the exact subset-enumeration oracle.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::composition::Composition;
use crate::digraph::{Digraph, DistanceMatrix};
use crate::error::{Error, Result};

/// Largest digraph the brute-force oracle accepts unless told otherwise.
pub const DEFAULT_ORACLE_CAP: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CertificateKind {
    QuasiKernel,
    KKernel,
}

/// A vertex set together with the property it is claimed to have.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelCertificate {
    pub kind: CertificateKind,
    pub k: Option<usize>,
    pub vertices: Vec<usize>,
    pub validated: bool,
}

impl KernelCertificate {
    pub fn quasi_kernel(vertices: Vec<usize>) -> Self {
        KernelCertificate {
            kind: CertificateKind::QuasiKernel,
            k: None,
            vertices,
            validated: false,
        }
    }

    pub fn k_kernel(k: usize, vertices: Vec<usize>) -> Self {
        KernelCertificate {
            kind: CertificateKind::KKernel,
            k: Some(k),
            vertices,
            validated: false,
        }
    }

    fn into_validated(mut self, d: &Digraph) -> Result<Self> {
        if validate_certificate(d, &self)? {
            self.validated = true;
            Ok(self)
        } else {
            Err(Error::Anomaly(format!(
                "constructed {:?} {:?} fails validation",
                self.kind, self.vertices
            )))
        }
    }
}

/// Pairwise distances at least `k` in both directions.
pub fn is_k_independent(dm: &DistanceMatrix, set: &[usize], k: usize) -> bool {
    set.iter().enumerate().all(|(i, &x)| {
        set[i + 1..]
            .iter()
            .all(|&y| dm.get(x, y).at_least(k) && dm.get(y, x).at_least(k))
    })
}

/// Every vertex outside `set` reaches some member within `l` steps.
pub fn is_absorbent(dm: &DistanceMatrix, set: &[usize], l: usize) -> bool {
    (0..dm.n()).all(|x| set.iter().any(|&y| x == y || dm.get(x, y).within(l)))
}

fn is_k_kernel_dm(dm: &DistanceMatrix, set: &[usize], k: usize) -> bool {
    is_k_independent(dm, set, k) && is_absorbent(dm, set, k - 1)
}

/// Checks both defining conditions of the certificate against `d`.
pub fn validate_certificate(d: &Digraph, cert: &KernelCertificate) -> Result<bool> {
    for &v in &cert.vertices {
        d.check_vertex(v)?;
    }
    let mut set = cert.vertices.clone();
    set.sort_unstable();
    if set.windows(2).any(|w| w[0] == w[1]) {
        return Ok(false);
    }
    let dm = d.distance_matrix();
    Ok(match cert.kind {
        CertificateKind::QuasiKernel => is_k_independent(&dm, &set, 2) && is_absorbent(&dm, &set, 2),
        CertificateKind::KKernel => {
            let k = cert.k.ok_or_else(|| Error::Precondition("k-kernel certificate without k".into()))?;
            if k < 2 {
                return Err(Error::KTooSmall { k, min: 2 });
            }
            is_k_kernel_dm(&dm, &set, k)
        }
    })
}

/// A quasi-kernel built by the Chvátal–Lovász induction.
///
/// Pivot on the smallest remaining vertex, drop its closed in-neighbourhood,
/// recurse, then add the pivot back unless it already has an out-neighbour in
/// the recursive answer. The recursion is unrolled: pivots are collected
/// going down and resolved in reverse.
pub fn quasi_kernel(d: &Digraph) -> KernelCertificate {
    let n = d.n();
    let mut alive = vec![true; n];
    let mut pivots = Vec::new();
    for v in 0..n {
        if !alive[v] {
            continue;
        }
        pivots.push(v);
        alive[v] = false;
        for &x in d.in_neighbors(v) {
            alive[x] = false;
        }
    }
    let mut in_set = vec![false; n];
    for &v in pivots.iter().rev() {
        if !d.out_neighbors(v).iter().any(|&w| in_set[w]) {
            in_set[v] = true;
        }
    }
    let cert = KernelCertificate {
        validated: true,
        ..KernelCertificate::quasi_kernel((0..n).filter(|&v| in_set[v]).collect())
    };
    debug_assert!(validate_certificate(d, &cert).unwrap());
    cert
}

/// Vertices `v` for which `{v}` is a quasi-kernel: every other vertex reaches
/// `v` within two steps.
pub fn singleton_quasi_kernel_vertices(d: &Digraph) -> Result<Vec<usize>> {
    if !d.is_semicomplete() {
        return Err(Error::Precondition("digraph is not semicomplete".into()));
    }
    let found: Vec<usize> = d
        .vertices()
        .filter(|&v| d.distances_to(v).iter().all(|dist| dist.within(2)))
        .collect();
    if found.len() < 2 && d.n() >= 2 && !d.has_sink() {
        return Err(Error::Anomaly(format!(
            "sink-free semicomplete digraph has singleton quasi-kernels {found:?}, expected two"
        )));
    }
    Ok(found)
}

/// Two disjoint quasi-kernels of a semicomplete composition whose outer
/// digraph has no sink, each lying inside one factor.
pub fn disjoint_quasi_kernels(c: &Composition) -> Result<(KernelCertificate, KernelCertificate)> {
    c.require_semicomplete()?;
    if c.outer().has_sink() {
        return Err(Error::Precondition("outer digraph has a sink".into()));
    }
    let singles = singleton_quasi_kernel_vertices(c.outer())?;
    let (&i, &j) = match singles.as_slice() {
        [i, j, ..] => (i, j),
        _ => {
            return Err(Error::Anomaly(format!(
                "outer digraph has singleton quasi-kernels {singles:?}, expected two"
            )))
        }
    };
    let lift = |f: usize| {
        let off = c.offsets()[f];
        let inner = quasi_kernel(c.factor(f));
        KernelCertificate::quasi_kernel(inner.vertices.iter().map(|v| v + off).collect())
            .into_validated(c.flatten())
    };
    Ok((lift(i)?, lift(j)?))
}

/// `{u_i}` is `l`-absorbent in the outer digraph.
pub fn outer_singleton_absorbent(t: &Digraph, i: usize, l: usize) -> bool {
    t.distances_to(i).iter().all(|d| d.within(l))
}

/// `{v}` is `l`-absorbent in the digraph obtained from the flattened
/// composition by deleting the rest of `v`'s factor.
pub fn reduced_singleton_absorbent(c: &Composition, v: usize, l: usize) -> bool {
    let own = c.factor_range(c.factor_of(v));
    let keep: Vec<usize> = (0..c.n()).filter(|&x| x == v || !own.contains(&x)).collect();
    let pos = keep.iter().position(|&x| x == v).expect("v is kept");
    let reduced = c.flatten().induced(&keep);
    reduced.distances_to(pos).iter().all(|d| d.within(l))
}

/// Polynomial k-kernel decision for strong semicomplete compositions, k >= 4.
///
/// A k-kernel exists exactly when some outer vertex is reached from every
/// other outer vertex within `k - 1` steps; the smallest vertex of that
/// factor is then a singleton k-kernel.
pub fn k_kernel_strong_semicomplete(c: &Composition, k: usize) -> Result<Option<KernelCertificate>> {
    if k < 4 {
        return Err(Error::KTooSmall { k, min: 4 });
    }
    c.require_strong_semicomplete()?;
    match (0..c.t()).find(|&i| outer_singleton_absorbent(c.outer(), i, k - 1)) {
        Some(i) => {
            let v = c.offsets()[i];
            Ok(Some(KernelCertificate::k_kernel(k, vec![v]).into_validated(c.flatten())?))
        }
        None => Ok(None),
    }
}

/// Minimum-cardinality k-kernel by exhaustive search.
///
/// Subsets are visited by increasing size and lexicographically within a
/// size, so the answer is deterministic.
pub fn k_kernel_brute_force(d: &Digraph, k: usize, cap: usize) -> Result<Option<KernelCertificate>> {
    if k < 2 {
        return Err(Error::KTooSmall { k, min: 2 });
    }
    let n = d.n();
    if n > cap {
        return Err(Error::OracleCapExceeded { n, cap });
    }
    let dm = d.distance_matrix();
    let found = (0..=n).find_map(|size| {
        (0..n)
            .combinations(size)
            .find(|set| is_k_kernel_dm(&dm, set, k))
    });
    Ok(found.map(|vertices| KernelCertificate {
        validated: true,
        ..KernelCertificate::k_kernel(k, vertices)
    }))
}

/// `C_3[D, D, D]`: three copies of `D` joined cyclically.
pub fn c3_gadget(d: &Digraph) -> Result<Composition> {
    if d.n() == 0 {
        return Err(Error::Precondition("gadget needs a nonempty digraph".into()));
    }
    let outer = Digraph::new(3, [(0, 1), (1, 2), (2, 0)])?;
    Composition::new(outer, vec![d.clone(), d.clone(), d.clone()])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(n: usize, arcs: &[(usize, usize)]) -> Digraph {
        Digraph::new(n, arcs.iter().copied()).unwrap()
    }

    fn cycle(n: usize) -> Digraph {
        d(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
    }

    fn two_cycle() -> Digraph {
        d(2, &[(0, 1), (1, 0)])
    }

    #[test]
    fn certificate_checks() {
        assert!(validate_certificate(&Digraph::empty(1), &KernelCertificate::k_kernel(2, vec![0])).unwrap());
        assert!(!validate_certificate(&two_cycle(), &KernelCertificate::k_kernel(2, vec![0, 1])).unwrap());
        assert!(validate_certificate(&cycle(4), &KernelCertificate::k_kernel(2, vec![0, 2])).unwrap());
        assert_eq!(
            validate_certificate(&cycle(4), &KernelCertificate::k_kernel(2, vec![7])),
            Err(Error::VertexOutOfRange { v: 7, n: 4 })
        );
    }

    #[test]
    fn quasi_kernel_examples() {
        assert_eq!(quasi_kernel(&Digraph::empty(1)).vertices, vec![0]);
        // pivots 0, 1, 2; unwinding gives {2}, keeps it past 1, adds 0
        let qk = quasi_kernel(&d(3, &[(0, 1), (1, 2)]));
        assert_eq!(qk.vertices, vec![0, 2]);
        assert!(validate_certificate(&d(3, &[(0, 1), (1, 2)]), &qk).unwrap());
        let qk = quasi_kernel(&cycle(3));
        assert_eq!(qk.vertices.len(), 1);
        assert!(validate_certificate(&cycle(3), &qk).unwrap());
        assert!(quasi_kernel(&Digraph::empty(0)).vertices.is_empty());
    }

    #[test]
    fn singleton_quasi_kernels() {
        assert_eq!(singleton_quasi_kernel_vertices(&two_cycle()).unwrap(), vec![0, 1]);
        assert_eq!(singleton_quasi_kernel_vertices(&cycle(3)).unwrap(), vec![0, 1, 2]);
        assert_eq!(
            singleton_quasi_kernel_vertices(&d(3, &[(0, 1), (0, 2), (1, 2)])).unwrap(),
            vec![2]
        );
        assert!(singleton_quasi_kernel_vertices(&Digraph::empty(2)).is_err());
    }

    #[test]
    fn disjoint_pairs() {
        let (a, b) = disjoint_quasi_kernels(&Composition::trivial(two_cycle()).unwrap()).unwrap();
        assert_eq!((a.vertices, b.vertices), (vec![0], vec![1]));

        let c = Composition::new(two_cycle(), vec![two_cycle(), cycle(3)]).unwrap();
        let (a, b) = disjoint_quasi_kernels(&c).unwrap();
        assert!(a.validated && b.validated);
        assert!(a.vertices.iter().all(|v| *v < 2));
        assert!(b.vertices.iter().all(|v| (2..5).contains(v)));

        let tt = Composition::trivial(d(3, &[(0, 1), (0, 2), (1, 2)])).unwrap();
        assert!(matches!(disjoint_quasi_kernels(&tt), Err(Error::Precondition(_))));
    }

    #[test]
    fn polynomial_k_kernel() {
        let c = Composition::trivial(cycle(3)).unwrap();
        assert_eq!(k_kernel_strong_semicomplete(&c, 4).unwrap().unwrap().vertices, vec![0]);

        let c = Composition::new(cycle(3), vec![two_cycle(), Digraph::empty(1), Digraph::empty(1)]).unwrap();
        let cert = k_kernel_strong_semicomplete(&c, 4).unwrap().unwrap();
        assert!(validate_certificate(c.flatten(), &cert).unwrap());
        assert!(k_kernel_brute_force(c.flatten(), 4, 16).unwrap().is_some());

        // The converse of a semicomplete digraph has a king, so some outer
        // vertex is always 2-absorbent and the answer is never absent.
        for t in (2..=5).flat_map(crate::gen::all_semicomplete) {
            if !t.is_strong() {
                continue;
            }
            let c = Composition::trivial(t).unwrap();
            for k in 4..=6 {
                let cert = k_kernel_strong_semicomplete(&c, k).unwrap().unwrap();
                assert!(cert.validated);
            }
        }

        assert_eq!(
            k_kernel_strong_semicomplete(&c, 3),
            Err(Error::KTooSmall { k: 3, min: 4 })
        );
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(k_kernel_brute_force(&Digraph::empty(1), 2, 16).unwrap().unwrap().vertices, vec![0]);
        assert_eq!(k_kernel_brute_force(&two_cycle(), 2, 16).unwrap().unwrap().vertices, vec![0]);
        assert_eq!(k_kernel_brute_force(&cycle(4), 3, 16).unwrap(), None);
        assert_eq!(
            k_kernel_brute_force(&Digraph::empty(17), 2, 16),
            Err(Error::OracleCapExceeded { n: 17, cap: 16 })
        );
    }

    #[test]
    fn gadget_examples() {
        let g = c3_gadget(&Digraph::empty(1)).unwrap();
        assert_eq!(g.flatten(), &cycle(3));
        assert!(k_kernel_brute_force(g.flatten(), 3, 16).unwrap().is_some());

        let g = c3_gadget(&Digraph::empty(2)).unwrap();
        assert_eq!(g.n(), 6);
        assert!(k_kernel_brute_force(&Digraph::empty(2), 3, 16).unwrap().is_some());
        assert!(k_kernel_brute_force(g.flatten(), 3, 16).unwrap().is_some());

        let g = c3_gadget(&cycle(4)).unwrap();
        assert_eq!(g.n(), 12);
        assert_eq!(k_kernel_brute_force(g.flatten(), 3, 16).unwrap(), None);

        assert!(c3_gadget(&Digraph::empty(0)).is_err());
    }

    #[test]
    fn certificate_json() {
        let c = KernelCertificate::k_kernel(3, vec![1, 4]);
        assert_eq!(
            serde_json::to_string(&c).unwrap(),
            r#"{"kind":"K_KERNEL","k":3,"vertices":[1,4],"validated":false}"#
        );
    }
}
