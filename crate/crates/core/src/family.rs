//! Node-extension families: attach a simply-laced chain to a distinguished
//! pivot node, the new nodes carrying negative labels -1, ..., -n. Members
//! of a family are nested GCMs, so comparing them needs no bookkeeping.
//!
//! `find_stable_base` probes such a family for the first member from which
//! every later member's spherical subsets are controlled by the base
//! (the extension-compatibility property checked by `verify_observation`).

use crate::classify::{classify, CatalogType, ComponentVerdict};
use crate::gcm::{Gcm, Label, NodeSet};
use crate::poset::verify_observation;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum FamilyError {
    #[error("pivot label {0} is not a node of the base")]
    PivotMissing(Label),
    #[error("base node labels must be nonnegative after relabeling; found {0}")]
    NegativeBaseLabel(Label),
}

/// A family member specification: a base GCM whose labels are all >= 0
/// with the pivot at label 0, plus the extension length.
#[derive(Debug, Clone)]
pub struct FamilySpec {
    pub base: Gcm,
    pub n: u32,
}

impl FamilySpec {
    pub fn new(base: Gcm, n: u32) -> Result<Self, FamilyError> {
        if let Some(&l) = base.nodes().iter().find(|&&l| l < 0) {
            return Err(FamilyError::NegativeBaseLabel(l));
        }
        if !base.has_node(0) {
            return Err(FamilyError::PivotMissing(0));
        }
        Ok(FamilySpec { base, n })
    }
}

/// Relabels a GCM so that `pivot` becomes node 0 and the remaining nodes
/// become 1, 2, ... in their original order. This is the normal form
/// `extend` consumes.
pub fn relabel_with_pivot(g: &Gcm, pivot: Label) -> Result<Gcm, FamilyError> {
    if !g.has_node(pivot) {
        return Err(FamilyError::PivotMissing(pivot));
    }
    let mut new_labels = Vec::with_capacity(g.rank());
    let mut next = 1i64;
    for &l in g.nodes() {
        if l == pivot {
            new_labels.push(0);
        } else {
            new_labels.push(next);
            next += 1;
        }
    }
    let n = g.rank();
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| g.entry_at(i, j)).collect())
        .collect();
    Ok(Gcm::new(new_labels, rows).expect("relabeling preserves validity"))
}

/// Extends the base at node 0 by a simply-laced chain on nodes -1, ..., -n:
/// a(0,-1) = a(-1,0) = -1 and a(-k,-k-1) = a(-k-1,-k) = -1, all other new
/// entries zero. Extension by n = 0 returns the base unchanged.
pub fn extend(spec: &FamilySpec) -> Gcm {
    let base = &spec.base;
    let n_ext = spec.n as i64;
    let mut nodes: Vec<Label> = base.nodes().to_vec();
    for k in 1..=n_ext {
        nodes.push(-k);
    }
    let total = nodes.len();
    let mut rows = vec![vec![0i64; total]; total];
    for (i, &li) in nodes.iter().enumerate() {
        for (j, &lj) in nodes.iter().enumerate() {
            // New bonds: pivot to -1, and consecutive negatives.
            let chain_bond = (li == 0 && lj == -1)
                || (li == -1 && lj == 0)
                || (li < 0 && lj < 0 && (li - lj).abs() == 1);
            rows[i][j] = if li >= 0 && lj >= 0 {
                base.entry(li, lj)
            } else if i == j {
                2
            } else if chain_bond {
                -1
            } else {
                0
            };
        }
    }
    Gcm::new(nodes, rows).expect("extension of a valid GCM is valid")
}

/// Summary of one family member's classification for the report trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub n: u32,
    pub is_finite: bool,
    pub catalog: Option<Vec<CatalogType>>,
    pub verdicts: Vec<ComponentVerdict>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StableBaseVerdict {
    /// Every probed member is of finite type (an infinite family of
    /// compact groups as far as the probe can see).
    AlwaysFinite,
    /// The member at extension length n0 satisfies the subset-control
    /// property against every later probed member.
    StableFrom { n0: u32 },
    /// No probed member controls all its successors.
    NoStableBaseFound,
}

#[derive(Debug, Clone)]
pub struct StableBaseReport {
    pub verdict: StableBaseVerdict,
    pub n_probe: u32,
    pub trace: Vec<TraceEntry>,
}

impl fmt::Display for StableBaseVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StableBaseVerdict::AlwaysFinite => write!(f, "AlwaysFinite"),
            StableBaseVerdict::StableFrom { n0 } => write!(f, "StableFrom(n0={n0})"),
            StableBaseVerdict::NoStableBaseFound => write!(f, "NoStableBaseFound"),
        }
    }
}

/// Scans extension lengths 0..=n_probe. Returns AlwaysFinite when every
/// member classifies finite, otherwise the smallest n0 whose member
/// controls the spherical subsets of all later probed members. The verdict
/// is only "up to n_probe" and the report says so.
pub fn find_stable_base(base: &Gcm, pivot: Label, n_probe: u32) -> Result<StableBaseReport, FamilyError> {
    let normalized = relabel_with_pivot(base, pivot)?;
    let members: Vec<Gcm> = (0..=n_probe)
        .map(|n| {
            extend(&FamilySpec {
                base: normalized.clone(),
                n,
            })
        })
        .collect();
    let mut trace = Vec::new();
    for (n, m) in members.iter().enumerate() {
        let c = classify(m).expect("family members stay within the catalog when finite");
        trace.push(TraceEntry {
            n: n as u32,
            is_finite: c.is_finite,
            catalog: c.catalog_types(),
            verdicts: c.components.iter().map(|x| x.verdict.clone()).collect(),
        });
    }
    if trace.iter().all(|t| t.is_finite) {
        return Ok(StableBaseReport {
            verdict: StableBaseVerdict::AlwaysFinite,
            n_probe,
            trace,
        });
    }
    for n0 in 0..=n_probe {
        let candidate = &members[n0 as usize];
        let i0: NodeSet = candidate.node_set();
        let controls_all = (n0 + 1..=n_probe).all(|m| {
            verify_observation(candidate, &members[m as usize], &i0).holds
        });
        if controls_all {
            return Ok(StableBaseReport {
                verdict: StableBaseVerdict::StableFrom { n0 },
                n_probe,
                trace,
            });
        }
    }
    Ok(StableBaseReport {
        verdict: StableBaseVerdict::NoStableBaseFound,
        n_probe,
        trace,
    })
}

/// The rank-`rank` member of the canonical E-series, built directly (not
/// via `extend`, so regressions against it are a genuine second route):
/// a chain labeled 7, 6, 5, ..., 0, -1, ... from the short end, with the
/// branch node 8 attached to node 5. The arms around node 5 have lengths
/// (1, 2, rank - 4); rank 9 is the affine member.
pub fn e_series(rank: u32) -> Gcm {
    assert!(rank >= 6, "E-series starts at rank 6");
    let chain_len = (rank - 1) as i64;
    let mut nodes: Vec<Label> = (0..chain_len).map(|k| 7 - k).collect();
    nodes.push(8);
    let total = nodes.len();
    let mut rows = vec![vec![0i64; total]; total];
    for i in 0..total {
        rows[i][i] = 2;
    }
    for i in 0..(chain_len as usize - 1) {
        rows[i][i + 1] = -1;
        rows[i + 1][i] = -1;
    }
    // Branch: node 8 (last position) bonds to node 5 (position 2).
    rows[total - 1][2] = -1;
    rows[2][total - 1] = -1;
    Gcm::new(nodes, rows).expect("E-series diagrams are valid GCMs")
}
