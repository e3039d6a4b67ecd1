//! Finite / affine / indefinite trichotomy for generalized Cartan matrices,
//! catalog identification of finite components, Weyl-group numerical data,
//! and positive-root enumeration.
//!
//! The trichotomy is decided per indecomposable component by exact integer
//! principal minors: finite iff every principal minor is positive, affine
//! iff every proper principal minor is positive and the full determinant is
//! zero, indefinite otherwise. Catalog identification is a separate route
//! (labeled-graph isomorphism against built-in templates), which doubles as
//! an independent check on the minor criterion.

use crate::gcm::{graph_isomorphic, Gcm, Label, NodeSet};
use crate::linalg::{det_int, Int};
use num::{One, Signed, Zero};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CatalogType {
    A(u32),
    B(u32),
    C(u32),
    D(u32),
    E6,
    E7,
    E8,
    F4,
    G2,
}

impl CatalogType {
    pub fn rank(&self) -> u32 {
        match *self {
            CatalogType::A(n) | CatalogType::B(n) | CatalogType::C(n) | CatalogType::D(n) => n,
            CatalogType::E6 => 6,
            CatalogType::E7 => 7,
            CatalogType::E8 => 8,
            CatalogType::F4 => 4,
            CatalogType::G2 => 2,
        }
    }

    /// All catalog members of the given rank, in a fixed matching order.
    pub fn of_rank(n: u32) -> Vec<CatalogType> {
        let mut out = Vec::new();
        if n >= 1 {
            out.push(CatalogType::A(n));
        }
        if n >= 2 {
            out.push(CatalogType::B(n));
        }
        if n >= 3 {
            out.push(CatalogType::C(n));
        }
        if n >= 4 {
            out.push(CatalogType::D(n));
        }
        match n {
            2 => out.push(CatalogType::G2),
            4 => out.push(CatalogType::F4),
            6 => out.push(CatalogType::E6),
            7 => out.push(CatalogType::E7),
            8 => out.push(CatalogType::E8),
            _ => {}
        }
        out
    }

    pub fn parse(s: &str) -> Option<CatalogType> {
        let s = s.trim();
        if s.len() < 2 {
            return None;
        }
        let (head, tail) = s.split_at(1);
        let n: u32 = tail.parse().ok()?;
        let t = match head {
            "A" | "a" => CatalogType::A(n),
            "B" | "b" => CatalogType::B(n),
            "C" | "c" => CatalogType::C(n),
            "D" | "d" => CatalogType::D(n),
            "E" | "e" => match n {
                6 => CatalogType::E6,
                7 => CatalogType::E7,
                8 => CatalogType::E8,
                _ => return None,
            },
            "F" | "f" if n == 4 => CatalogType::F4,
            "G" | "g" if n == 2 => CatalogType::G2,
            _ => return None,
        };
        let ok = match t {
            CatalogType::A(k) => k >= 1,
            CatalogType::B(k) => k >= 2,
            CatalogType::C(k) => k >= 3,
            CatalogType::D(k) => k >= 4,
            _ => true,
        };
        ok.then_some(t)
    }
}

impl fmt::Display for CatalogType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CatalogType::A(n) => write!(f, "A{n}"),
            CatalogType::B(n) => write!(f, "B{n}"),
            CatalogType::C(n) => write!(f, "C{n}"),
            CatalogType::D(n) => write!(f, "D{n}"),
            CatalogType::E6 => write!(f, "E6"),
            CatalogType::E7 => write!(f, "E7"),
            CatalogType::E8 => write!(f, "E8"),
            CatalogType::F4 => write!(f, "F4"),
            CatalogType::G2 => write!(f, "G2"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComponentVerdict {
    Finite(CatalogType),
    Affine,
    Indefinite,
}

impl fmt::Display for ComponentVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentVerdict::Finite(t) => write!(f, "Finite({t})"),
            ComponentVerdict::Affine => write!(f, "Affine"),
            ComponentVerdict::Indefinite => write!(f, "Indefinite"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentReport {
    pub nodes: NodeSet,
    pub verdict: ComponentVerdict,
    pub determinant: Int,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub components: Vec<ComponentReport>,
    pub is_finite: bool,
}

impl Classification {
    /// Catalog types of the components, available only when all are finite.
    pub fn catalog_types(&self) -> Option<Vec<CatalogType>> {
        self.components
            .iter()
            .map(|c| match &c.verdict {
                ComponentVerdict::Finite(t) => Some(*t),
                _ => None,
            })
            .collect()
    }
}

#[derive(Debug, Clone, Error)]
pub enum ClassifyError {
    #[error(
        "component {{{0:?}}} passed the principal-minor test but matched no catalog template; \
         this indicates a bug in the catalog or the isomorphism search"
    )]
    CatalogMismatch(NodeSet),
}

/// Builds the Dynkin template for a catalog type on nodes 1..=rank.
///
/// Conventions: the chain runs 1-2-...-n. B has the double bond a_{n-1,n} =
/// -2 pointing at the last node; C is its transpose. D attaches node n to
/// node n-2. E types attach the branch node n to the chain so the three
/// arms have lengths (1, 2, rank-4). F4 doubles the middle bond, G2 is
/// [[2,-1],[-3,2]].
pub fn catalog_template(t: CatalogType) -> Gcm {
    let n = t.rank() as usize;
    let nodes: Vec<Label> = (1..=n as i64).collect();
    let mut rows = vec![vec![0i64; n]; n];
    for i in 0..n {
        rows[i][i] = 2;
    }
    fn bond(rows: &mut [Vec<i64>], i: usize, j: usize, a: i64, b: i64) {
        rows[i - 1][j - 1] = a;
        rows[j - 1][i - 1] = b;
    }
    fn chain_until(rows: &mut [Vec<i64>], k: usize) {
        for i in 1..k {
            rows[i - 1][i] = -1;
            rows[i][i - 1] = -1;
        }
    }
    match t {
        CatalogType::A(_) => chain_until(&mut rows, n),
        CatalogType::B(_) => {
            chain_until(&mut rows, n - 1);
            bond(&mut rows, n - 1, n, -2, -1);
        }
        CatalogType::C(_) => {
            chain_until(&mut rows, n - 1);
            bond(&mut rows, n - 1, n, -1, -2);
        }
        CatalogType::D(_) => {
            chain_until(&mut rows, n - 1);
            bond(&mut rows, n - 2, n, -1, -1);
        }
        CatalogType::E6 | CatalogType::E7 | CatalogType::E8 => {
            chain_until(&mut rows, n - 1);
            // Branch placed so the arms are (1, 2, n-4).
            bond(&mut rows, 3, n, -1, -1);
        }
        CatalogType::F4 => {
            bond(&mut rows, 1, 2, -1, -1);
            bond(&mut rows, 2, 3, -2, -1);
            bond(&mut rows, 3, 4, -1, -1);
        }
        CatalogType::G2 => {
            bond(&mut rows, 1, 2, -1, -3);
        }
    }
    Gcm::new(nodes, rows).expect("catalog templates are valid GCMs")
}

/// Classifies each indecomposable component of a GCM by exact integer
/// principal minors, attaching the catalog type (found by labeled-graph
/// isomorphism against the built-in templates) to finite verdicts.
pub fn classify(g: &Gcm) -> Result<Classification, ClassifyError> {
    let mut components = Vec::new();
    let mut all_finite = true;
    for comp in g.components() {
        let sub = g.restrict(&comp).expect("component labels come from g");
        let (verdict, det) = component_verdict(&sub);
        let verdict = match verdict {
            MinorVerdict::Finite => {
                let t = match_catalog(&sub).ok_or_else(|| ClassifyError::CatalogMismatch(comp.clone()))?;
                ComponentVerdict::Finite(t)
            }
            MinorVerdict::Affine => ComponentVerdict::Affine,
            MinorVerdict::Indefinite => ComponentVerdict::Indefinite,
        };
        if !matches!(verdict, ComponentVerdict::Finite(_)) {
            all_finite = false;
        }
        components.push(ComponentReport {
            nodes: comp,
            verdict,
            determinant: det,
        });
    }
    Ok(Classification {
        components,
        is_finite: all_finite,
    })
}

/// Convenience wrapper: true iff every component of the restriction of `g`
/// to `subset` is of finite type. The empty subset is finite.
pub fn is_finite_type(g: &Gcm, subset: &NodeSet) -> bool {
    let sub = g.restrict(subset).expect("subset labels come from g");
    classify(&sub).map(|c| c.is_finite).unwrap_or(false)
}

enum MinorVerdict {
    Finite,
    Affine,
    Indefinite,
}

/// Checks all 2^k - 1 principal minors of a connected GCM. Early exit on
/// the first nonpositive proper minor (then nothing can rescue finiteness
/// or affineness).
fn component_verdict(sub: &Gcm) -> (MinorVerdict, Int) {
    let k = sub.rank();
    if k == 0 {
        return (MinorVerdict::Finite, Int::one());
    }
    let full_det = principal_minor(sub, (1u32 << k) - 1);
    // Proper subsets, sizes ascending via counting order is fine: any
    // nonpositive proper minor settles it.
    for mask in 1..((1u32 << k) - 1) {
        let d = principal_minor(sub, mask);
        if !d.is_positive() {
            return (MinorVerdict::Indefinite, full_det);
        }
    }
    if full_det.is_positive() {
        (MinorVerdict::Finite, full_det)
    } else if full_det.is_zero() {
        (MinorVerdict::Affine, full_det)
    } else {
        (MinorVerdict::Indefinite, full_det)
    }
}

fn principal_minor(sub: &Gcm, mask: u32) -> Int {
    let idx: Vec<usize> = (0..sub.rank()).filter(|&i| mask & (1 << i) != 0).collect();
    let rows: Vec<Vec<i64>> = idx
        .iter()
        .map(|&i| idx.iter().map(|&j| sub.entry_at(i, j)).collect())
        .collect();
    det_int(&rows)
}

fn match_catalog(sub: &Gcm) -> Option<CatalogType> {
    let n = sub.rank() as u32;
    if n == 0 {
        // Rank 0 has no catalog entry; callers treat it as vacuously finite
        // before reaching here.
        return None;
    }
    let dg = sub.dynkin_graph();
    for t in CatalogType::of_rank(n) {
        let template = catalog_template(t);
        if graph_isomorphic(&dg, &template.dynkin_graph()).is_some() {
            return Some(t);
        }
    }
    None
}

// ---------------------------------------------------------------------
// Weyl-group numerical data
// ---------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylData {
    pub catalog: CatalogType,
    pub order: Int,
    pub degrees: Vec<u32>,
    pub positive_root_count: u64,
}

/// Embedded invariant-degree table for the catalog types. The order is the
/// product of the degrees; the positive-root count is the sum of (d_i - 1).
pub fn weyl_data(t: CatalogType) -> WeylData {
    let degrees: Vec<u32> = match t {
        CatalogType::A(n) => (2..=n + 1).collect(),
        CatalogType::B(n) | CatalogType::C(n) => (1..=n).map(|k| 2 * k).collect(),
        CatalogType::D(n) => {
            let mut v: Vec<u32> = (1..n).map(|k| 2 * k).collect();
            v.push(n);
            v.sort_unstable();
            v
        }
        CatalogType::E6 => vec![2, 5, 6, 8, 9, 12],
        CatalogType::E7 => vec![2, 6, 8, 10, 12, 14, 18],
        CatalogType::E8 => vec![2, 8, 12, 14, 18, 20, 24, 30],
        CatalogType::F4 => vec![2, 6, 8, 12],
        CatalogType::G2 => vec![2, 6],
    };
    let order: Int = degrees.iter().fold(Int::one(), |acc, &d| acc * Int::from(d));
    let positive_root_count: u64 = degrees.iter().map(|&d| (d - 1) as u64).sum();
    WeylData {
        catalog: t,
        order,
        degrees,
        positive_root_count,
    }
}

// ---------------------------------------------------------------------
// Positive roots by reflection closure
// ---------------------------------------------------------------------

#[derive(Debug, Clone, Error)]
pub enum RootError {
    #[error("root closure exceeded the cap of {cap} vectors; the input is not of finite type")]
    NonTerminating { cap: usize },
}

pub const DEFAULT_ROOT_CAP: usize = 10_000;

/// Closes the simple roots under the reflections s_i(v) = v - (sum_j a_{ij}
/// v_j) e_i, keeping vectors with all coordinates nonnegative. Terminates
/// with the full positive system for finite type; hits the cap otherwise.
pub fn positive_roots(g: &Gcm, cap: usize) -> Result<BTreeSet<Vec<i64>>, RootError> {
    let n = g.rank();
    let mut roots: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut frontier: Vec<Vec<i64>> = Vec::new();
    for i in 0..n {
        let mut e = vec![0i64; n];
        e[i] = 1;
        roots.insert(e.clone());
        frontier.push(e);
    }
    while let Some(v) = frontier.pop() {
        for i in 0..n {
            let pairing: i64 = (0..n).map(|j| g.entry_at(i, j) * v[j]).sum();
            let mut w = v.clone();
            w[i] -= pairing;
            if w.iter().all(|&x| x >= 0) && roots.insert(w.clone()) {
                if roots.len() > cap {
                    return Err(RootError::NonTerminating { cap });
                }
                frontier.push(w);
            }
        }
    }
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gcm::rank2;

    fn chain(n: usize) -> Gcm {
        catalog_template(CatalogType::A(n as u32))
    }

    #[test]
    fn rank2_trichotomy() {
        // det = 4 - ab.
        let aff = classify(&rank2(2, 2)).unwrap();
        assert_eq!(aff.components[0].verdict, ComponentVerdict::Affine);
        assert_eq!(aff.components[0].determinant, Int::zero());

        let ind = classify(&rank2(2, 3)).unwrap();
        assert_eq!(ind.components[0].verdict, ComponentVerdict::Indefinite);
        assert_eq!(ind.components[0].determinant, Int::from(-2));

        let a2 = classify(&chain(2)).unwrap();
        assert_eq!(
            a2.components[0].verdict,
            ComponentVerdict::Finite(CatalogType::A(2))
        );
        assert!(a2.is_finite);
    }

    #[test]
    fn rank0_is_finite() {
        let c = classify(&Gcm::empty()).unwrap();
        assert!(c.is_finite);
        assert!(c.components.is_empty());
    }

    #[test]
    fn catalog_types_distinguished() {
        for n in 1..=8u32 {
            for t in CatalogType::of_rank(n) {
                let g = catalog_template(t);
                let c = classify(&g).unwrap();
                assert_eq!(
                    c.components[0].verdict,
                    ComponentVerdict::Finite(t),
                    "template {t} must classify as itself"
                );
            }
        }
    }

    #[test]
    fn b3_and_c3_are_not_isomorphic() {
        let b3 = catalog_template(CatalogType::B(3)).dynkin_graph();
        let c3 = catalog_template(CatalogType::C(3)).dynkin_graph();
        assert!(graph_isomorphic(&b3, &c3).is_none());
    }

    #[test]
    fn weyl_table_identities_small() {
        let a2 = weyl_data(CatalogType::A(2));
        assert_eq!(a2.order, Int::from(6));
        assert_eq!(a2.degrees, vec![2, 3]);
        assert_eq!(a2.positive_root_count, 3);

        let a1 = weyl_data(CatalogType::A(1));
        assert_eq!(a1.order, Int::from(2));
        assert_eq!(a1.degrees, vec![2]);
        assert_eq!(a1.positive_root_count, 1);

        let e8 = weyl_data(CatalogType::E8);
        assert_eq!(e8.positive_root_count, 120);
    }

    #[test]
    fn positive_roots_small() {
        let a1 = positive_roots(&chain(1), DEFAULT_ROOT_CAP).unwrap();
        assert_eq!(a1.len(), 1);

        let a2 = positive_roots(&chain(2), DEFAULT_ROOT_CAP).unwrap();
        let expect: BTreeSet<Vec<i64>> =
            [vec![1, 0], vec![0, 1], vec![1, 1]].into_iter().collect();
        assert_eq!(a2, expect);
    }

    #[test]
    fn positive_roots_nonterminating_on_affine() {
        let err = positive_roots(&rank2(2, 2), 50).unwrap_err();
        assert!(matches!(err, RootError::NonTerminating { cap: 50 }));
    }

    #[test]
    fn transpose_stability_of_verdict_rank3() {
        // Exhaustive over connected rank <= 3 GCMs with entries in {0,-1,-2,-3}.
        let opts: Vec<(i64, i64)> = {
            let mut v = vec![(0, 0)];
            for a in 1..=3 {
                for b in 1..=3 {
                    v.push((-a, -b));
                }
            }
            v
        };
        for &(a12, a21) in &opts {
            for &(a13, a31) in &opts {
                for &(a23, a32) in &opts {
                    let rows = vec![
                        vec![2, a12, a13],
                        vec![a21, 2, a23],
                        vec![a31, a32, 2],
                    ];
                    let g = Gcm::new(vec![1, 2, 3], rows).unwrap();
                    if g.components().len() != 1 {
                        continue;
                    }
                    let v1 = classify(&g).unwrap();
                    let v2 = classify(&g.transpose()).unwrap();
                    let kind = |c: &Classification| match c.components[0].verdict {
                        ComponentVerdict::Finite(_) => 0,
                        ComponentVerdict::Affine => 1,
                        ComponentVerdict::Indefinite => 2,
                    };
                    assert_eq!(kind(&v1), kind(&v2));
                }
            }
        }
    }
}
