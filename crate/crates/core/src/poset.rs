//! The inclusion poset of spherical subsets (subsets whose restricted GCM
//! is of finite type), chain enumeration over it, the extension
//! subcategory, and the two combinatorial checks the extension families
//! rest on: subset control by the base and cofinality of the subcategory.

use crate::classify::is_finite_type;
use crate::gcm::{Gcm, Label, NodeSet};
use std::collections::{BTreeMap, HashMap, HashSet};
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum PosetError {
    #[error("rank {0} exceeds the 30-node mask limit of the poset engine")]
    TooLarge(usize),
    #[error("chain enumeration would exceed the guardrail of {guardrail} chains")]
    ChainGuardrail { guardrail: usize },
}

/// The poset of spherical subsets of a GCM's node set, ordered by
/// inclusion. Elements are stored as bitmasks over the parent's sorted
/// node list, in lexicographic order of their sorted label lists.
#[derive(Debug, Clone)]
pub struct SphericalPoset {
    parent: Gcm,
    node_order: Vec<Label>,
    elems: Vec<u32>,
    index: HashMap<u32, u32>,
    /// For each element, the indices of its strict supersets (ascending).
    supersets: Vec<Vec<u32>>,
}

/// Lexicographic comparison of two subsets by their sorted label lists.
/// Bit k of a mask is the k-th smallest node label, so this walks both
/// masks from the low bits up.
fn lex_cmp_masks(mut a: u32, mut b: u32) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    loop {
        match (a == 0, b == 0) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            (false, false) => {}
        }
        let la = a.trailing_zeros();
        let lb = b.trailing_zeros();
        match la.cmp(&lb) {
            Ordering::Equal => {
                a &= a - 1;
                b &= b - 1;
            }
            other => return other,
        }
    }
}

impl SphericalPoset {
    /// Enumerates exactly the finite-type subsets of `g`, growing layer by
    /// layer: a k-set is a candidate only if all its maximal proper subsets
    /// survived layer k-1 (sphericality is downward closed), and candidates
    /// are then settled by exact classification.
    pub fn enumerate(g: &Gcm) -> Result<SphericalPoset, PosetError> {
        let n = g.rank();
        if n > 30 {
            return Err(PosetError::TooLarge(n));
        }
        let mut node_order: Vec<Label> = g.nodes().to_vec();
        node_order.sort_unstable();
        let mut accepted: Vec<u32> = vec![0];
        let mut prev: HashSet<u32> = [0u32].into_iter().collect();
        for _size in 1..=n {
            let mut candidates: HashSet<u32> = HashSet::new();
            for &j in &prev {
                for v in 0..n {
                    let bit = 1u32 << v;
                    if j & bit == 0 {
                        candidates.insert(j | bit);
                    }
                }
            }
            let mut next: HashSet<u32> = HashSet::new();
            let mut cand: Vec<u32> = candidates.into_iter().collect();
            cand.sort_unstable();
            for c in cand {
                let mut all_facets_in = true;
                let mut m = c;
                while m != 0 {
                    let bit = m & m.wrapping_neg();
                    if !prev.contains(&(c & !bit)) {
                        all_facets_in = false;
                        break;
                    }
                    m &= m - 1;
                }
                if !all_facets_in {
                    continue;
                }
                let subset = mask_to_set(c, &node_order);
                if is_finite_type(g, &subset) {
                    next.insert(c);
                }
            }
            if next.is_empty() {
                break;
            }
            accepted.extend(next.iter().copied());
            prev = next;
        }
        accepted.sort_by(|&a, &b| lex_cmp_masks(a, b));
        Ok(Self::from_masks(g.clone(), node_order, accepted))
    }

    /// Builds a (sub)poset from explicit elements; used for subcategories
    /// and for tests. Elements are reordered canonically.
    pub fn from_elements(parent: Gcm, elements: impl IntoIterator<Item = NodeSet>) -> SphericalPoset {
        let mut node_order: Vec<Label> = parent.nodes().to_vec();
        node_order.sort_unstable();
        let mut masks: Vec<u32> = elements
            .into_iter()
            .map(|s| set_to_mask(&s, &node_order))
            .collect();
        masks.sort_by(|&a, &b| lex_cmp_masks(a, b));
        masks.dedup();
        Self::from_masks(parent, node_order, masks)
    }

    fn from_masks(parent: Gcm, node_order: Vec<Label>, elems: Vec<u32>) -> SphericalPoset {
        let index: HashMap<u32, u32> = elems
            .iter()
            .enumerate()
            .map(|(i, &m)| (m, i as u32))
            .collect();
        let n = elems.len();
        let mut supersets = vec![Vec::new(); n];
        for i in 0..n {
            for j in 0..n {
                if i != j && elems[i] & elems[j] == elems[i] {
                    supersets[i].push(j as u32);
                }
            }
        }
        SphericalPoset {
            parent,
            node_order,
            elems,
            index,
            supersets,
        }
    }

    pub fn parent(&self) -> &Gcm {
        &self.parent
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn masks(&self) -> &[u32] {
        &self.elems
    }

    pub fn node_order(&self) -> &[Label] {
        &self.node_order
    }

    pub fn element(&self, idx: u32) -> NodeSet {
        mask_to_set(self.elems[idx as usize], &self.node_order)
    }

    /// Indices of the strict supersets of an element, ascending.
    pub fn supersets_of(&self, idx: u32) -> &[u32] {
        &self.supersets[idx as usize]
    }

    pub fn elements(&self) -> Vec<NodeSet> {
        (0..self.elems.len() as u32).map(|i| self.element(i)).collect()
    }

    pub fn contains(&self, s: &NodeSet) -> bool {
        self.index.contains_key(&set_to_mask(s, &self.node_order))
    }

    pub fn position_of(&self, s: &NodeSet) -> Option<u32> {
        self.index.get(&set_to_mask(s, &self.node_order)).copied()
    }

    /// True when every subset of every element is again an element.
    pub fn is_downward_closed(&self) -> bool {
        self.elems.iter().all(|&m| {
            let mut bits = m;
            while bits != 0 {
                let bit = bits & bits.wrapping_neg();
                if !self.index.contains_key(&(m & !bit)) {
                    return false;
                }
                bits &= bits - 1;
            }
            true
        })
    }

    /// Number of covering pairs (Hasse diagram edges): J covered by
    /// J plus one node.
    pub fn hasse_edge_count(&self) -> usize {
        self.elems
            .iter()
            .map(|&m| {
                (0..self.node_order.len())
                    .filter(|&v| {
                        let bit = 1u32 << v;
                        m & bit == 0 && self.index.contains_key(&(m | bit))
                    })
                    .count()
            })
            .sum()
    }

    /// Length (number of strict steps) of the longest chain.
    pub fn longest_chain(&self) -> usize {
        // Elements are topologically compatible with popcount; DP over
        // supersets in descending size order.
        let n = self.elems.len();
        let mut best = vec![0usize; n];
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(self.elems[i].count_ones()));
        for &i in &order {
            for &s in &self.supersets[i] {
                best[i] = best[i].max(best[s as usize] + 1);
            }
        }
        best.into_iter().max().unwrap_or(0)
    }

    /// Calls `f` on every strictly increasing p-chain (as element indices,
    /// lexicographic order). p = 0 yields the elements themselves.
    pub fn for_each_chain(&self, p: usize, f: &mut impl FnMut(&[u32])) {
        self.for_each_chain_until(p, &mut |c| {
            f(c);
            true
        });
    }

    /// Like `for_each_chain` but stops as soon as `f` returns false.
    pub fn for_each_chain_until(&self, p: usize, f: &mut impl FnMut(&[u32]) -> bool) {
        let mut chain: Vec<u32> = Vec::with_capacity(p + 1);
        for start in 0..self.elems.len() as u32 {
            chain.push(start);
            let keep_going = self.extend_chain(p, &mut chain, f);
            chain.pop();
            if !keep_going {
                return;
            }
        }
    }

    fn extend_chain(&self, p: usize, chain: &mut Vec<u32>, f: &mut impl FnMut(&[u32]) -> bool) -> bool {
        if chain.len() == p + 1 {
            return f(chain);
        }
        let last = *chain.last().unwrap() as usize;
        for &next in &self.supersets[last] {
            chain.push(next);
            let keep_going = self.extend_chain(p, chain, f);
            chain.pop();
            if !keep_going {
                return false;
            }
        }
        true
    }

    pub fn chain_count(&self, p: usize) -> usize {
        let mut c = 0usize;
        self.for_each_chain(p, &mut |_| c += 1);
        c
    }

    /// Materializes all chains of length <= p_max, for inspection and for
    /// small complexes. Larger consumers stream with `for_each_chain`.
    pub fn chains(&self, p_max: usize, guardrail: usize) -> Result<ChainSet, PosetError> {
        let mut per_p = Vec::with_capacity(p_max + 1);
        let mut total = 0usize;
        for p in 0..=p_max {
            let mut list = Vec::new();
            self.for_each_chain(p, &mut |c| list.push(c.to_vec()));
            total += list.len();
            if total > guardrail {
                return Err(PosetError::ChainGuardrail { guardrail });
            }
            if p > 0 && list.is_empty() {
                per_p.push(list);
                break;
            }
            per_p.push(list);
        }
        Ok(ChainSet { per_p })
    }

    /// The subposet of elements that contain every node outside `i0`
    /// (the extension subcategory: all negative labels present).
    pub fn extended_subcategory(&self, i0: &NodeSet) -> SphericalPoset {
        let required: u32 = self
            .node_order
            .iter()
            .enumerate()
            .filter(|(_, l)| !i0.contains(l))
            .map(|(k, _)| 1u32 << k)
            .sum();
        let masks: Vec<u32> = self
            .elems
            .iter()
            .copied()
            .filter(|&m| m & required == required)
            .collect();
        Self::from_masks(self.parent.clone(), self.node_order.clone(), masks)
    }
}

/// Strict chains of a poset up to a fixed length, grouped by length.
#[derive(Debug, Clone)]
pub struct ChainSet {
    per_p: Vec<Vec<Vec<u32>>>,
}

impl ChainSet {
    pub fn max_length(&self) -> usize {
        self.per_p.len().saturating_sub(1)
    }

    pub fn count(&self, p: usize) -> usize {
        self.per_p.get(p).map_or(0, |v| v.len())
    }

    pub fn chains(&self, p: usize) -> &[Vec<u32>] {
        self.per_p.get(p).map_or(&[], |v| v.as_slice())
    }
}

fn mask_to_set(mask: u32, order: &[Label]) -> NodeSet {
    order
        .iter()
        .enumerate()
        .filter(|(k, _)| mask & (1 << k) != 0)
        .map(|(_, &l)| l)
        .collect()
}

fn set_to_mask(s: &NodeSet, order: &[Label]) -> u32 {
    let mut m = 0u32;
    for (k, l) in order.iter().enumerate() {
        if s.contains(l) {
            m |= 1 << k;
        }
    }
    m
}

/// Outcome of the subset-control check for an extension pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservationReport {
    pub holds: bool,
    /// A subset J violating the biconditional, when one exists.
    pub witness: Option<NodeSet>,
}

/// Checks, for every subset J of the extended diagram's nodes, that J is
/// spherical in the extension if and only if J intersected with `i0` is
/// spherical in the base. Exhaustive over all 2^rank subsets; returns the
/// first violating subset as a witness.
pub fn verify_observation(base: &Gcm, extended: &Gcm, i0: &NodeSet) -> ObservationReport {
    let ext_nodes: Vec<Label> = {
        let mut v = extended.nodes().to_vec();
        v.sort_unstable();
        v
    };
    let n = ext_nodes.len();
    assert!(n <= 25, "exhaustive subset check is desk-scale only");
    let mut base_cache: HashMap<u64, bool> = HashMap::new();
    for mask in 0..(1u64 << n) {
        let subset: NodeSet = ext_nodes
            .iter()
            .enumerate()
            .filter(|(k, _)| mask & (1 << k) != 0)
            .map(|(_, &l)| l)
            .collect();
        let inter: NodeSet = subset.iter().copied().filter(|l| i0.contains(l)).collect();
        let inter_mask: u64 = ext_nodes
            .iter()
            .enumerate()
            .filter(|(_, l)| inter.contains(l))
            .map(|(k, _)| 1u64 << k)
            .sum();
        let base_ok = *base_cache
            .entry(inter_mask)
            .or_insert_with(|| is_finite_type(base, &inter));
        let ext_ok = is_finite_type(extended, &subset);
        if base_ok != ext_ok {
            return ObservationReport {
                holds: false,
                witness: Some(subset),
            };
        }
    }
    ObservationReport {
        holds: true,
        witness: None,
    }
}

/// Outcome of the cofinality check.
#[derive(Debug, Clone)]
pub struct CofinalReport {
    pub cofinal: bool,
    /// For each element of the full poset, its minimum upper bound in the
    /// subposet (present when cofinal).
    pub minima: BTreeMap<NodeSet, NodeSet>,
    /// An element of the full poset with no minimum upper bound, when not
    /// cofinal.
    pub failure: Option<NodeSet>,
}

/// True iff every element of `full` has a nonempty up-set in `sub` with a
/// minimum element. Minimum upper bounds make the relevant comma
/// categories contractible, which is what reindexing along the inclusion
/// needs. Both posets must share the same parent node list.
pub fn is_cofinal(sub: &SphericalPoset, full: &SphericalPoset) -> CofinalReport {
    assert_eq!(
        sub.node_order, full.node_order,
        "cofinality requires posets over the same parent"
    );
    let mut minima = BTreeMap::new();
    for &j in &full.elems {
        let ups: Vec<u32> = sub
            .elems
            .iter()
            .copied()
            .filter(|&e| e & j == j)
            .collect();
        let min = ups
            .iter()
            .copied()
            .find(|&m| ups.iter().all(|&other| other & m == m));
        match min {
            Some(m) => {
                minima.insert(
                    mask_to_set(j, &full.node_order),
                    mask_to_set(m, &full.node_order),
                );
            }
            None => {
                return CofinalReport {
                    cofinal: false,
                    minima: BTreeMap::new(),
                    failure: Some(mask_to_set(j, &full.node_order)),
                };
            }
        }
    }
    CofinalReport {
        cofinal: true,
        minima,
        failure: None,
    }
}

/// Naive reference enumeration: classify every subset. Quadratic-ish and
/// only for cross-checks at desk scale.
pub fn enumerate_spherical_naive(g: &Gcm) -> Vec<NodeSet> {
    let mut order: Vec<Label> = g.nodes().to_vec();
    order.sort_unstable();
    let n = order.len();
    let mut out = Vec::new();
    for mask in 0..(1u64 << n) {
        let subset: NodeSet = order
            .iter()
            .enumerate()
            .filter(|(k, _)| mask & (1 << k) != 0)
            .map(|(_, &l)| l)
            .collect();
        if is_finite_type(g, &subset) {
            out.push(subset);
        }
    }
    out
}
