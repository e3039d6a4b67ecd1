//! Generalized Cartan matrices, their Dynkin graphs, and structural
//! operations: validation, restriction to node subsets, connected
//! components, and labeled-graph isomorphism.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

/// Node labels are arbitrary integers; extension families use negative
/// labels for the appended chain, so labels are not assumed to be 1..n.
pub type Label = i64;

/// A subset of a GCM's node set, kept sorted.
pub type NodeSet = BTreeSet<Label>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AxiomViolation {
    #[error("diagonal entry at node {node} is {value}, expected 2")]
    DiagonalNotTwo { node: Label, value: i64 },
    #[error("off-diagonal entry ({i},{j}) = {value} must be <= 0")]
    PositiveOffDiagonal { i: Label, j: Label, value: i64 },
    #[error("entry ({i},{j}) is zero but ({j},{i}) = {other} is not")]
    AsymmetricZero { i: Label, j: Label, other: i64 },
    #[error("node label {label} appears more than once")]
    DuplicateLabel { label: Label },
}

#[derive(Debug, Clone, Error)]
pub enum GcmError {
    #[error("matrix is not square: {rows} rows x {cols} cols for {labels} labels")]
    NotSquare {
        rows: usize,
        cols: usize,
        labels: usize,
    },
    #[error("matrix violates the Cartan axioms: {}", format_violations(.0))]
    Axioms(Vec<AxiomViolation>),
    #[error("unknown node label {0}")]
    UnknownLabel(Label),
    #[error("malformed GCM document: {0}")]
    BadDocument(String),
}

fn format_violations(v: &[AxiomViolation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// A validated generalized Cartan matrix.
///
/// Immutable after construction; all operations are pure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gcm {
    nodes: Vec<Label>,
    pos: BTreeMap<Label, usize>,
    /// Row-major entries, `a[i*n + j]` with i, j positions in `nodes`.
    a: Vec<i64>,
}

impl Gcm {
    /// Validates a square integer matrix with node labels against the three
    /// Cartan axioms. On failure every violated axiom is reported, each
    /// naming the offending entry.
    pub fn new(nodes: Vec<Label>, rows: Vec<Vec<i64>>) -> Result<Self, GcmError> {
        let n = nodes.len();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(GcmError::NotSquare {
                rows: rows.len(),
                cols: rows.first().map_or(0, |r| r.len()),
                labels: n,
            });
        }
        let mut violations = Vec::new();
        let mut seen = BTreeSet::new();
        for &l in &nodes {
            if !seen.insert(l) {
                violations.push(AxiomViolation::DuplicateLabel { label: l });
            }
        }
        for i in 0..n {
            if rows[i][i] != 2 {
                violations.push(AxiomViolation::DiagonalNotTwo {
                    node: nodes[i],
                    value: rows[i][i],
                });
            }
            for j in 0..n {
                if i == j {
                    continue;
                }
                if rows[i][j] > 0 {
                    violations.push(AxiomViolation::PositiveOffDiagonal {
                        i: nodes[i],
                        j: nodes[j],
                        value: rows[i][j],
                    });
                }
                if rows[i][j] == 0 && rows[j][i] != 0 {
                    violations.push(AxiomViolation::AsymmetricZero {
                        i: nodes[i],
                        j: nodes[j],
                        other: rows[j][i],
                    });
                }
            }
        }
        if !violations.is_empty() {
            return Err(GcmError::Axioms(violations));
        }
        let pos = nodes.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let a = rows.into_iter().flatten().collect();
        Ok(Gcm { nodes, pos, a })
    }

    /// The rank-0 GCM on no nodes. Legal: it is the bottom of every
    /// spherical poset.
    pub fn empty() -> Self {
        Gcm {
            nodes: Vec::new(),
            pos: BTreeMap::new(),
            a: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[Label] {
        &self.nodes
    }

    pub fn node_set(&self) -> NodeSet {
        self.nodes.iter().copied().collect()
    }

    pub fn has_node(&self, l: Label) -> bool {
        self.pos.contains_key(&l)
    }

    /// Entry a_{ij} by label.
    pub fn entry(&self, i: Label, j: Label) -> i64 {
        let (pi, pj) = (self.pos[&i], self.pos[&j]);
        self.a[pi * self.nodes.len() + pj]
    }

    /// Entry by position in the node list.
    pub fn entry_at(&self, pi: usize, pj: usize) -> i64 {
        self.a[pi * self.nodes.len() + pj]
    }

    pub fn position(&self, l: Label) -> Option<usize> {
        self.pos.get(&l).copied()
    }

    /// The sub-GCM obtained by restricting rows and columns to `subset`.
    /// Restriction is functorial: restricting twice equals restricting once
    /// to the smaller set. Node order of the result is ascending by label.
    pub fn restrict(&self, subset: &NodeSet) -> Result<Gcm, GcmError> {
        for &l in subset {
            if !self.pos.contains_key(&l) {
                return Err(GcmError::UnknownLabel(l));
            }
        }
        let nodes: Vec<Label> = subset.iter().copied().collect();
        let n = nodes.len();
        let mut a = Vec::with_capacity(n * n);
        for &i in &nodes {
            for &j in &nodes {
                a.push(self.entry(i, j));
            }
        }
        let pos = nodes.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        Ok(Gcm { nodes, pos, a })
    }

    /// Transposed matrix on the same node list. The transpose of a valid
    /// GCM is again a valid GCM.
    pub fn transpose(&self) -> Gcm {
        let n = self.nodes.len();
        let mut a = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                a[j * n + i] = self.a[i * n + j];
            }
        }
        Gcm {
            nodes: self.nodes.clone(),
            pos: self.pos.clone(),
            a,
        }
    }

    /// Connected components of the Dynkin graph, as sorted node sets in a
    /// deterministic order (ascending by smallest member).
    pub fn components(&self) -> Vec<NodeSet> {
        let n = self.nodes.len();
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut stack = vec![start];
            let mut comp = NodeSet::new();
            seen[start] = true;
            while let Some(u) = stack.pop() {
                comp.insert(self.nodes[u]);
                for v in 0..n {
                    if !seen[v] && self.a[u * n + v] != 0 {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            comps.push(comp);
        }
        comps.sort_by_key(|c| c.iter().next().copied());
        comps
    }

    /// The labeled Dynkin graph: an edge between distinct nodes i, j
    /// whenever a_{ij} != 0, carrying the ordered pair (-a_{ij}, -a_{ji}).
    pub fn dynkin_graph(&self) -> DynkinGraph {
        let n = self.nodes.len();
        let mut edges = BTreeMap::new();
        for pi in 0..n {
            for pj in (pi + 1)..n {
                let aij = self.a[pi * n + pj];
                if aij != 0 {
                    let aji = self.a[pj * n + pi];
                    let (i, j) = (self.nodes[pi], self.nodes[pj]);
                    let (lo, hi, albl, blbl) = if i < j {
                        (i, j, (-aij) as u64, (-aji) as u64)
                    } else {
                        (j, i, (-aji) as u64, (-aij) as u64)
                    };
                    edges.insert((lo, hi), (albl, blbl));
                }
            }
        }
        DynkinGraph {
            nodes: self.node_set(),
            edges,
        }
    }

    /// Serializes to the on-disk JSON document. Deterministic: entries are
    /// listed sorted by (i, j), only nonzero off-diagonal entries appear,
    /// the diagonal is implied. Round-trips bit-exactly.
    pub fn to_json(&self) -> String {
        let mut entries = Vec::new();
        let n = self.nodes.len();
        let mut pairs: Vec<(Label, Label)> = Vec::new();
        for pi in 0..n {
            for pj in 0..n {
                if pi != pj && self.a[pi * n + pj] != 0 {
                    pairs.push((self.nodes[pi], self.nodes[pj]));
                }
            }
        }
        pairs.sort();
        for (i, j) in pairs {
            entries.push((i, j, self.entry(i, j)));
        }
        let doc = GcmDoc {
            nodes: self.nodes.clone(),
            entries,
        };
        serde_json::to_string(&doc).expect("GCM serialization cannot fail")
    }

    /// Parses and validates the JSON document format.
    pub fn from_json(s: &str) -> Result<Gcm, GcmError> {
        let doc: GcmDoc =
            serde_json::from_str(s).map_err(|e| GcmError::BadDocument(e.to_string()))?;
        let n = doc.nodes.len();
        let pos: BTreeMap<Label, usize> =
            doc.nodes.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        if pos.len() != n {
            // fall through to Gcm::new which reports the duplicate labels
        }
        let mut rows = vec![vec![0i64; n]; n];
        for i in 0..n {
            rows[i][i] = 2;
        }
        for &(i, j, v) in &doc.entries {
            let (pi, pj) = match (pos.get(&i), pos.get(&j)) {
                (Some(&pi), Some(&pj)) => (pi, pj),
                _ => {
                    return Err(GcmError::BadDocument(format!(
                        "entry ({i},{j}) references a label not in nodes"
                    )))
                }
            };
            if pi == pj {
                return Err(GcmError::BadDocument(format!(
                    "diagonal entry ({i},{j}) must not be listed"
                )));
            }
            rows[pi][pj] = v;
        }
        Gcm::new(doc.nodes, rows)
    }
}

#[derive(Serialize, Deserialize)]
struct GcmDoc {
    nodes: Vec<Label>,
    entries: Vec<(Label, Label, i64)>,
}

/// Labeled Dynkin graph. Edge labels are the positive integers
/// (-a_{ij}, -a_{ji}), stored against the edge's (min, max) label pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynkinGraph {
    pub nodes: NodeSet,
    /// (i, j) with i < j maps to (-a_{ij}, -a_{ji}).
    pub edges: BTreeMap<(Label, Label), (u64, u64)>,
}

impl DynkinGraph {
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Label pair read from `from` toward `to`, if the edge exists.
    pub fn label_from(&self, from: Label, to: Label) -> Option<(u64, u64)> {
        if from < to {
            self.edges.get(&(from, to)).copied()
        } else {
            self.edges.get(&(to, from)).map(|&(a, b)| (b, a))
        }
    }

    pub fn neighbors(&self, v: Label) -> Vec<Label> {
        let mut out: Vec<Label> = self
            .edges
            .keys()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    fn degree(&self, v: Label) -> usize {
        self.edges.keys().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// Multiset fingerprint of a node: degree plus the sorted outgoing
    /// label pairs. Isomorphic images must share fingerprints.
    fn signature(&self, v: Label) -> (usize, Vec<(u64, u64)>) {
        let mut labels: Vec<(u64, u64)> = self
            .neighbors(v)
            .into_iter()
            .map(|w| self.label_from(v, w).unwrap())
            .collect();
        labels.sort_unstable();
        (labels.len(), labels)
    }
}

impl fmt::Display for DynkinGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "nodes {{")?;
        for (k, v) in self.nodes.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}; edges ")?;
        if self.edges.is_empty() {
            return write!(f, "none");
        }
        for (k, (&(i, j), &(a, b))) in self.edges.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            if a * b == 1 {
                write!(f, "{i}-{j}")?;
            } else {
                write!(f, "{i}-{j}({a},{b})")?;
            }
        }
        Ok(())
    }
}

/// Tests labeled-graph isomorphism by backtracking over degree- and
/// label-refined candidate maps; returns a witness relabeling when the
/// graphs are isomorphic. Diagrams of interest stay under ~20 nodes, so
/// nothing more sophisticated is warranted.
pub fn graph_isomorphic(g1: &DynkinGraph, g2: &DynkinGraph) -> Option<BTreeMap<Label, Label>> {
    if g1.nodes.len() != g2.nodes.len() || g1.edges.len() != g2.edges.len() {
        return None;
    }
    let mut sig1: Vec<(usize, Vec<(u64, u64)>)> =
        g1.nodes.iter().map(|&v| g1.signature(v)).collect();
    let mut sig2: Vec<(usize, Vec<(u64, u64)>)> =
        g2.nodes.iter().map(|&v| g2.signature(v)).collect();
    sig1.sort();
    sig2.sort();
    if sig1 != sig2 {
        return None;
    }

    // Order source nodes most-constrained first (highest degree), then
    // extend a partial map depth-first.
    let mut order: Vec<Label> = g1.nodes.iter().copied().collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g1.degree(v)));

    let mut mapping: BTreeMap<Label, Label> = BTreeMap::new();
    let mut used: BTreeSet<Label> = BTreeSet::new();

    fn extend(
        g1: &DynkinGraph,
        g2: &DynkinGraph,
        order: &[Label],
        k: usize,
        mapping: &mut BTreeMap<Label, Label>,
        used: &mut BTreeSet<Label>,
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let v = order[k];
        let vsig = g1.signature(v);
        for &w in &g2.nodes {
            if used.contains(&w) || g2.signature(w) != vsig {
                continue;
            }
            // Every already-mapped neighbor relation must be preserved with
            // identical oriented labels, and non-edges must stay non-edges.
            let ok = mapping.iter().all(|(&u, &x)| {
                g1.label_from(v, u) == g2.label_from(w, x)
            });
            if !ok {
                continue;
            }
            mapping.insert(v, w);
            used.insert(w);
            if extend(g1, g2, order, k + 1, mapping, used) {
                return true;
            }
            mapping.remove(&v);
            used.remove(&w);
        }
        false
    }

    if extend(g1, g2, &order, 0, &mut mapping, &mut used) {
        Some(mapping)
    } else {
        None
    }
}

/// Convenience: the rank-2 matrix A(a,b) = [[2,-a],[-b,2]] on nodes 1, 2.
pub fn rank2(a: i64, b: i64) -> Gcm {
    Gcm::new(vec![1, 2], vec![vec![2, -a], vec![-b, 2]]).expect("rank-2 GCM with a,b >= 0")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> Gcm {
        let nodes: Vec<Label> = (1..=n as i64).collect();
        let mut rows = vec![vec![0i64; n]; n];
        for i in 0..n {
            rows[i][i] = 2;
            if i + 1 < n {
                rows[i][i + 1] = -1;
                rows[i + 1][i] = -1;
            }
        }
        Gcm::new(nodes, rows).unwrap()
    }

    #[test]
    fn validates_rank2_with_large_entries() {
        let g = rank2(5, 7);
        assert_eq!(g.entry(1, 2), -5);
        assert_eq!(g.entry(2, 1), -7);
    }

    #[test]
    fn validates_rank1_and_rank0() {
        let g = Gcm::new(vec![3], vec![vec![2]]).unwrap();
        assert_eq!(g.rank(), 1);
        let e = Gcm::empty();
        assert_eq!(e.rank(), 0);
        assert!(e.dynkin_graph().edges.is_empty());
    }

    #[test]
    fn rejects_asymmetric_zero() {
        let err = Gcm::new(vec![1, 2], vec![vec![2, 0], vec![-1, 2]]).unwrap_err();
        match err {
            GcmError::Axioms(v) => {
                assert!(v.iter().any(|x| matches!(
                    x,
                    AxiomViolation::AsymmetricZero { i: 1, j: 2, .. }
                )));
            }
            other => panic!("expected axiom violations, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_diagonal_and_positive_offdiag() {
        let err = Gcm::new(vec![1, 2], vec![vec![1, 3], vec![2, 2]]).unwrap_err();
        let GcmError::Axioms(v) = err else {
            panic!("expected axiom violations")
        };
        assert!(v
            .iter()
            .any(|x| matches!(x, AxiomViolation::DiagonalNotTwo { node: 1, value: 1 })));
        assert!(v.iter().any(|x| matches!(
            x,
            AxiomViolation::PositiveOffDiagonal { i: 1, j: 2, value: 3 }
        )));
    }

    #[test]
    fn restrict_chain_prefix_is_chain() {
        let g = chain(6);
        let sub: NodeSet = (1..=3).collect();
        let r = g.restrict(&sub).unwrap();
        let iso = graph_isomorphic(&r.dynkin_graph(), &chain(3).dynkin_graph());
        assert!(iso.is_some());
    }

    #[test]
    fn restrict_is_functorial() {
        let g = chain(6);
        let big: NodeSet = [1, 2, 3, 5].into_iter().collect();
        let small: NodeSet = [1, 3].into_iter().collect();
        let once = g.restrict(&small).unwrap();
        let twice = g.restrict(&big).unwrap().restrict(&small).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn restrict_to_empty_is_rank0() {
        let g = chain(4);
        let r = g.restrict(&NodeSet::new()).unwrap();
        assert_eq!(r.rank(), 0);
    }

    #[test]
    fn restrict_unknown_label_errors() {
        let g = chain(2);
        let sub: NodeSet = [9].into_iter().collect();
        assert!(matches!(g.restrict(&sub), Err(GcmError::UnknownLabel(9))));
    }

    #[test]
    fn components_of_block_diagonal() {
        let g = Gcm::new(vec![1, 2], vec![vec![2, 0], vec![0, 2]]).unwrap();
        let comps = g.components();
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|c| c.len() == 1));
    }

    #[test]
    fn dynkin_graph_labels() {
        let g = rank2(2, 3);
        let dg = g.dynkin_graph();
        assert_eq!(dg.edges.get(&(1, 2)), Some(&(2, 3)));
        // Simple edge (a12 a21 = 1) renders without a label.
        let a2 = chain(2);
        assert!(format!("{}", a2.dynkin_graph()).contains("1-2"));
        assert!(!format!("{}", a2.dynkin_graph()).contains("(1,1)"));
    }

    #[test]
    fn iso_chain_reversal_and_transpose_pair() {
        let g = chain(5);
        let rev_nodes: Vec<Label> = (1..=5).rev().collect();
        let mut rows = vec![vec![0i64; 5]; 5];
        for i in 0..5 {
            rows[i][i] = 2;
            if i + 1 < 5 {
                rows[i][i + 1] = -1;
                rows[i + 1][i] = -1;
            }
        }
        let h = Gcm::new(rev_nodes, rows).unwrap();
        assert!(graph_isomorphic(&g.dynkin_graph(), &h.dynkin_graph()).is_some());

        let p = rank2(2, 3);
        let q = rank2(3, 2);
        let w = graph_isomorphic(&p.dynkin_graph(), &q.dynkin_graph()).unwrap();
        assert_eq!(w.get(&1), Some(&2));
    }

    #[test]
    fn iso_distinguishes_chain_from_discrete() {
        let a3 = chain(3);
        let mut rows = vec![vec![0i64; 3]; 3];
        for i in 0..3 {
            rows[i][i] = 2;
        }
        let disc = Gcm::new(vec![1, 2, 3], rows).unwrap();
        assert!(graph_isomorphic(&a3.dynkin_graph(), &disc.dynkin_graph()).is_none());
    }

    #[test]
    fn transpose_of_valid_gcm_is_valid() {
        let g = rank2(2, 5);
        let t = g.transpose();
        assert_eq!(t.entry(1, 2), -5);
        assert_eq!(t.entry(2, 1), -2);
        assert_eq!(t.transpose(), g);
    }

    #[test]
    fn json_round_trip_bit_exact() {
        let g = rank2(2, 3);
        let s = g.to_json();
        let h = Gcm::from_json(&s).unwrap();
        assert_eq!(g, h);
        assert_eq!(h.to_json(), s);
        assert_eq!(
            s,
            r#"{"nodes":[1,2],"entries":[[1,2,-2],[2,1,-3]]}"#
        );
    }

    #[test]
    fn json_rejects_unknown_labels() {
        let s = r#"{"nodes":[1,2],"entries":[[1,3,-1]]}"#;
        assert!(matches!(Gcm::from_json(s), Err(GcmError::BadDocument(_))));
    }
}
