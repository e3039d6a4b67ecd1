//! Higher limits of graded invariant functors over spherical posets: the
//! cochain complex on strict poset chains, exact rank computations, the
//! resulting E2 tables, and stability scans across extension families.
//!
//! Two execution paths share the same differential convention:
//!
//! * a materialized path for functors with genuine coefficient spaces,
//!   using exact fraction-free sparse elimination;
//! * a streaming path for one-dimensional (constant) functors, which never
//!   materializes the matrices and switches to certified modular ranks
//!   above a size threshold (the caller certifies via Euler counts).
//!
//! The differential is (dc)(J_0 c ... c J_{p+1}) = rho(c(d_0 tau)) +
//! sum_{k>=1} (-1)^k c(d_k tau), verified to square to zero on every
//! materialized complex.

use crate::family::{extend, FamilySpec};
use crate::gcm::{Gcm, NodeSet};
use crate::invariants::{GradedInvariantModel, InvariantError, restriction_matrix};
use crate::linalg::{
    int_sign, sparse_rank_int, sparse_rank_modp, Int, QMat, Rat, DEFAULT_MODULAR_PRIME,
};
use crate::poset::{verify_observation, PosetError, SphericalPoset};
use num::{One, Zero};
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum LimitsError {
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error("complex would have {components} components, over the guardrail {guardrail}; raise it explicitly to proceed")]
    Guardrail { components: usize, guardrail: usize },
    #[error("requested chain depth {requested} exceeds the configured cap {cap}")]
    ChainDepthExceeded { requested: usize, cap: usize },
    #[error("family member n={n} violates the subset-control property; witness {witness:?}")]
    ObservationFailed { n: u32, witness: NodeSet },
    #[error("poset with {elements} elements cannot stream chains of {depth} sets; lower the depth")]
    PosetTooLargeForDepth { elements: usize, depth: usize },
}

/// Tunables for the limit engine. `guardrail` bounds the total number of
/// components a complex may have; `modular_threshold` is where the scalar
/// path switches from exact to modular ranks.
#[derive(Debug, Clone)]
pub struct LimitsConfig {
    pub guardrail: usize,
    pub modular_threshold: usize,
    pub prime: u32,
    pub depth_cap: usize,
    /// Number of top-dimensional rows on which the streaming path
    /// re-verifies the square-zero identity.
    pub d2_sample: usize,
}

impl Default for LimitsConfig {
    fn default() -> Self {
        LimitsConfig {
            guardrail: 5_000_000,
            modular_threshold: 250_000,
            prime: DEFAULT_MODULAR_PRIME,
            depth_cap: 12,
            d2_sample: 20_000,
        }
    }
}

// ---------------------------------------------------------------------
// Functor data
// ---------------------------------------------------------------------

/// A degree slice of the invariant model over a poset: one coefficient
/// space per element, one restriction matrix per comparable pair.
#[derive(Debug, Clone)]
pub struct PosetFunctor {
    pub poset: SphericalPoset,
    pub degree: usize,
    pub dims: Vec<usize>,
    /// Restriction rho for each strict pair (sub, super), keyed by element
    /// indices.
    restr: HashMap<(u32, u32), QMat>,
    scalar: bool,
}

impl PosetFunctor {
    /// The constant one-dimensional functor with identity restrictions.
    pub fn constant(poset: SphericalPoset) -> Self {
        let n = poset.len();
        PosetFunctor {
            poset,
            degree: 0,
            dims: vec![1; n],
            restr: HashMap::new(),
            scalar: true,
        }
    }

    /// Degree-d slice of the invariant models (one model per element, all
    /// over the same ambient space).
    pub fn from_models(
        poset: SphericalPoset,
        models: &[GradedInvariantModel],
        d: usize,
    ) -> Result<Self, InvariantError> {
        assert_eq!(models.len(), poset.len());
        let dims: Vec<usize> = models.iter().map(|m| m.dim(d)).collect();
        let mut restr = HashMap::new();
        let mut scalar = dims.iter().all(|&x| x == 1);
        for i in 0..poset.len() as u32 {
            for &s in poset_supersets(&poset, i) {
                let m = restriction_matrix(&models[i as usize], &models[s as usize], d)?;
                if scalar && !(m.rows == 1 && m.cols == 1 && m[(0, 0)].is_one()) {
                    scalar = false;
                }
                restr.insert((i, s), m);
            }
        }
        Ok(PosetFunctor {
            poset,
            degree: d,
            dims,
            restr,
            scalar,
        })
    }

    /// Builds the full graded stack for a GCM and poset once; degree
    /// slices are then cheap.
    pub fn build_models(
        g: &Gcm,
        poset: &SphericalPoset,
        cutoff: usize,
    ) -> Result<Vec<GradedInvariantModel>, InvariantError> {
        (0..poset.len() as u32)
            .map(|i| GradedInvariantModel::build(g, &poset.element(i), cutoff))
            .collect()
    }

    pub fn restriction(&self, sub: u32, sup: u32) -> &QMat {
        &self.restr[&(sub, sup)]
    }

    pub fn is_scalar(&self) -> bool {
        self.scalar
    }
}

fn poset_supersets(p: &SphericalPoset, i: u32) -> &[u32] {
    // Thin wrapper so PosetFunctor construction reads clearly.
    p.supersets_of(i)
}

// ---------------------------------------------------------------------
// Materialized cochain complex
// ---------------------------------------------------------------------

/// A materialized complex: chains per length, component offsets, and the
/// differentials as sparse column buckets.
pub struct CochainComplex {
    pub dims: Vec<usize>,
    pub chain_counts: Vec<usize>,
    /// deltas[p] = columns of the map C^p -> C^{p+1}.
    pub deltas: Vec<Vec<Vec<(u32, Rat)>>>,
}

/// Builds the complex of a functor up to chain length p_max (inclusive),
/// checking the square-zero identity exactly.
pub fn cochain_complex(
    f: &PosetFunctor,
    p_max: usize,
    cfg: &LimitsConfig,
) -> Result<CochainComplex, LimitsError> {
    if p_max > cfg.depth_cap {
        return Err(LimitsError::ChainDepthExceeded {
            requested: p_max,
            cap: cfg.depth_cap,
        });
    }
    let p_eff = p_max.min(f.poset.longest_chain());
    // Enumerate chains and offsets.
    let mut chains: Vec<Vec<Vec<u32>>> = Vec::with_capacity(p_eff + 1);
    let mut offsets: Vec<Vec<usize>> = Vec::with_capacity(p_eff + 1);
    let mut dims: Vec<usize> = Vec::with_capacity(p_eff + 1);
    let mut total = 0usize;
    for p in 0..=p_eff {
        let mut list = Vec::new();
        f.poset.for_each_chain(p, &mut |c| list.push(c.to_vec()));
        let mut offs = Vec::with_capacity(list.len());
        let mut dim = 0usize;
        for c in &list {
            offs.push(dim);
            dim += f.dims[c[0] as usize];
        }
        total += dim;
        if total > cfg.guardrail {
            return Err(LimitsError::Guardrail {
                components: total,
                guardrail: cfg.guardrail,
            });
        }
        chains.push(list);
        offsets.push(offs);
        dims.push(dim);
    }
    let chain_counts: Vec<usize> = chains.iter().map(|c| c.len()).collect();
    // Index maps for facet lookup.
    let index: Vec<HashMap<&[u32], u32>> = chains
        .iter()
        .map(|list| {
            list.iter()
                .enumerate()
                .map(|(i, c)| (c.as_slice(), i as u32))
                .collect()
        })
        .collect();
    // Assemble column buckets of each delta^p from the rows indexed by
    // (p+1)-chains.
    let mut deltas: Vec<Vec<Vec<(u32, Rat)>>> = Vec::new();
    for p in 0..p_eff {
        let mut cols: Vec<Vec<(u32, Rat)>> = vec![Vec::new(); dims[p]];
        for (ti, tau) in chains[p + 1].iter().enumerate() {
            let row_off = offsets[p + 1][ti] as u32;
            let bottom_dim = f.dims[tau[0] as usize];
            let mut facet: Vec<u32> = Vec::with_capacity(tau.len() - 1);
            for k in 0..tau.len() {
                facet.clear();
                facet.extend_from_slice(&tau[..k]);
                facet.extend_from_slice(&tau[k + 1..]);
                let si = index[p][facet.as_slice()];
                let col_off = offsets[p][si as usize];
                if k == 0 {
                    let rho = f.restriction(tau[0], tau[1]);
                    debug_assert_eq!(rho.rows, bottom_dim);
                    for c in 0..rho.cols {
                        for r in 0..rho.rows {
                            if !rho[(r, c)].is_zero() {
                                cols[col_off + c].push((row_off + r as u32, rho[(r, c)].clone()));
                            }
                        }
                    }
                } else {
                    let sgn = int_sign(k);
                    for r in 0..bottom_dim {
                        cols[col_off + r].push((
                            row_off + r as u32,
                            Rat::from_integer(Int::from(sgn)),
                        ));
                    }
                }
            }
        }
        for col in &mut cols {
            col.sort_by_key(|&(r, _)| r);
        }
        deltas.push(cols);
    }
    let complex = CochainComplex {
        dims,
        chain_counts,
        deltas,
    };
    complex.check_d_squared();
    Ok(complex)
}

impl CochainComplex {
    /// Exact check that consecutive differentials compose to zero.
    pub fn check_d_squared(&self) {
        for p in 0..self.deltas.len().saturating_sub(1) {
            let next = &self.deltas[p + 1];
            for col in &self.deltas[p] {
                let mut acc: HashMap<u32, Rat> = HashMap::new();
                for &(mid, ref v) in col {
                    for &(row, ref w) in &next[mid as usize] {
                        let add = v * w;
                        *acc.entry(row).or_insert_with(Rat::zero) += add;
                    }
                }
                assert!(
                    acc.values().all(|x| x.is_zero()),
                    "differential does not square to zero"
                );
            }
        }
    }

    /// Ranks of the differentials, exact, with clearing between levels.
    pub fn delta_ranks(&self) -> Vec<usize> {
        let mut ranks = Vec::with_capacity(self.deltas.len());
        let mut cleared: Option<Vec<bool>> = None;
        for p in 0..self.deltas.len() {
            let nrows = *self.dims.get(p + 1).unwrap_or(&0);
            let cleared_now = cleared.take();
            let cols = self.deltas[p].iter().enumerate().map(|(ci, col)| {
                if cleared_now.as_ref().is_some_and(|c| c[ci]) {
                    None
                } else {
                    Some(
                        col.iter()
                            .map(|&(r, ref v)| (r, v.clone()))
                            .collect::<Vec<_>>(),
                    )
                }
            });
            let scaled = cols.map(|c| c.map(scale_col_to_int));
            let res = sparse_rank_int(nrows, scaled);
            ranks.push(res.rank);
            cleared = Some(res.claimed_rows);
        }
        ranks
    }
}

fn scale_col_to_int(col: Vec<(u32, Rat)>) -> Vec<(u32, Int)> {
    use num::Integer as _;
    let mut lcm = Int::one();
    for (_, v) in &col {
        lcm = lcm.lcm(v.denom());
    }
    col.into_iter()
        .map(|(r, v)| {
            let scaled = v.numer() * (&lcm / v.denom());
            (r, scaled)
        })
        .collect()
}

// ---------------------------------------------------------------------
// Scalar streaming path
// ---------------------------------------------------------------------

struct PackedChains {
    bits: u32,
    /// Sorted packed chains for one fixed length.
    keys: Vec<u128>,
}

impl PackedChains {
    fn pack(bits: u32, chain: &[u32]) -> u128 {
        let mut acc = 0u128;
        for &e in chain {
            acc = (acc << bits) | (e as u128 + 1);
        }
        acc
    }

    fn enumerate(poset: &SphericalPoset, p: usize, bits: u32) -> PackedChains {
        let mut keys = Vec::new();
        poset.for_each_chain(p, &mut |c| keys.push(Self::pack(bits, c)));
        // Chains are emitted in lexicographic index order, which matches
        // ascending packed order for a fixed length.
        debug_assert!(keys.windows(2).all(|w| w[0] < w[1]));
        PackedChains { bits, keys }
    }

    fn lookup(&self, chain: &[u32]) -> u32 {
        let key = Self::pack(self.bits, chain);
        self.keys.binary_search(&key).expect("facet must be a known chain") as u32
    }
}

struct ScalarLim {
    dims: Vec<usize>,
    chain_counts: Vec<usize>,
    modular: bool,
}

/// Higher limits of the constant functor over a poset, streaming the
/// boundary columns chain by chain. Descending over chain lengths with
/// clearing keeps the zero-reduction count equal to the cohomology it
/// finds, which is what makes the large nerve computations tractable.
fn scalar_lim(
    poset: &SphericalPoset,
    i_max: usize,
    cfg: &LimitsConfig,
) -> Result<ScalarLim, LimitsError> {
    if i_max + 1 > cfg.depth_cap {
        return Err(LimitsError::ChainDepthExceeded {
            requested: i_max + 1,
            cap: cfg.depth_cap,
        });
    }
    let longest = poset.longest_chain();
    let p_top = i_max.min(longest);
    let mut chain_counts: Vec<usize> = Vec::with_capacity(p_top + 2);
    let mut total = 0usize;
    for p in 0..=p_top + 1 {
        let c = if p <= longest { poset.chain_count(p) } else { 0 };
        total += c;
        if total > cfg.guardrail {
            return Err(LimitsError::Guardrail {
                components: total,
                guardrail: cfg.guardrail,
            });
        }
        chain_counts.push(c);
    }
    let modular = total > cfg.modular_threshold;
    let bits = {
        let mut b = 1u32;
        while (1u128 << b) <= poset.len() as u128 {
            b += 1;
        }
        b
    };
    if bits as usize * (p_top + 2) > 128 {
        return Err(LimitsError::PosetTooLargeForDepth {
            elements: poset.len(),
            depth: p_top + 2,
        });
    }

    // rank_delta[p] = rank of delta^p = rank of the boundary on (p+1)-chains.
    let mut rank_delta = vec![0usize; i_max + 1];
    let mut cleared: Option<Vec<bool>> = None;
    let mut d2_checked = false;
    for p in (0..=p_top.min(i_max)).rev() {
        if chain_counts.get(p + 1).copied().unwrap_or(0) == 0 {
            cleared = None;
            continue;
        }
        let rows = PackedChains::enumerate(poset, p, bits);
        if !d2_checked && p + 2 <= longest && cfg.d2_sample > 0 {
            sample_check_d_squared(poset, p, cfg.d2_sample);
            d2_checked = true;
        }
        let cleared_now = cleared.take();
        let nrows = rows.keys.len();
        // Stream columns: one per (p+1)-chain, entries (-1)^k at the k-th
        // facet.
        let mut col_index = 0usize;
        let mut columns: Vec<Option<Vec<(u32, i64)>>> = Vec::new();
        poset.for_each_chain(p + 1, &mut |tau| {
            let skip = cleared_now.as_ref().is_some_and(|c| c[col_index]);
            col_index += 1;
            if skip {
                columns.push(None);
                return;
            }
            let mut entries: Vec<(u32, i64)> = Vec::with_capacity(tau.len());
            let mut facet: Vec<u32> = Vec::with_capacity(tau.len() - 1);
            for k in 0..tau.len() {
                facet.clear();
                facet.extend_from_slice(&tau[..k]);
                facet.extend_from_slice(&tau[k + 1..]);
                entries.push((rows.lookup(&facet), int_sign(k)));
            }
            entries.sort_by_key(|&(r, _)| r);
            columns.push(Some(entries));
        });
        let res = if modular {
            sparse_rank_modp(nrows, cfg.prime, columns.into_iter())
        } else {
            let exact = columns.into_iter().map(|c| {
                c.map(|v| v.into_iter().map(|(r, x)| (r, Int::from(x))).collect())
            });
            sparse_rank_int(nrows, exact)
        };
        rank_delta[p] = res.rank;
        cleared = Some(res.claimed_rows);
    }
    let mut dims = Vec::with_capacity(i_max + 1);
    for i in 0..=i_max {
        let c = chain_counts.get(i).copied().unwrap_or(0);
        let r_i = rank_delta.get(i).copied().unwrap_or(0);
        let r_prev = if i == 0 { 0 } else { rank_delta[i - 1] };
        dims.push(c - r_i - r_prev);
    }
    Ok(ScalarLim {
        dims,
        chain_counts,
        modular,
    })
}

/// Verifies, on a deterministic sample of (p+2)-chains, that the signed
/// facets-of-facets cancel in pairs. The identity is structural in the
/// chain indices, so a sample over the largest dimension plus the full
/// exact check on every materialized complex covers the streaming path.
fn sample_check_d_squared(poset: &SphericalPoset, p: usize, sample: usize) {
    let mut seen = 0usize;
    poset.for_each_chain_until(p + 2, &mut |omega| {
        if seen >= sample {
            return false;
        }
        seen += 1;
        let mut acc: HashMap<Vec<u32>, i64> = HashMap::new();
        for k in 0..omega.len() {
            let sgn_k = int_sign(k);
            let mut tau: Vec<u32> = Vec::with_capacity(omega.len() - 1);
            tau.extend_from_slice(&omega[..k]);
            tau.extend_from_slice(&omega[k + 1..]);
            for l in 0..tau.len() {
                let mut sigma: Vec<u32> = Vec::with_capacity(tau.len() - 1);
                sigma.extend_from_slice(&tau[..l]);
                sigma.extend_from_slice(&tau[l + 1..]);
                *acc.entry(sigma).or_insert(0) += sgn_k * int_sign(l);
            }
        }
        assert!(
            acc.values().all(|&v| v == 0),
            "streaming differential does not square to zero"
        );
        true
    });
}

// ---------------------------------------------------------------------
// lim^i and E2 pages
// ---------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct LimResult {
    /// dims[i] = dimension of lim^i over Q.
    pub dims: Vec<usize>,
    pub chain_counts: Vec<usize>,
    /// True when the modular fast path produced the ranks.
    pub modular: bool,
}

/// Derived-limit dimensions lim^i, i <= i_max, of a functor slice.
pub fn lim_i(f: &PosetFunctor, i_max: usize, cfg: &LimitsConfig) -> Result<LimResult, LimitsError> {
    if f.is_scalar() {
        let s = scalar_lim(&f.poset, i_max, cfg)?;
        return Ok(LimResult {
            dims: s.dims,
            chain_counts: s.chain_counts,
            modular: s.modular,
        });
    }
    let complex = cochain_complex(f, i_max + 1, cfg)?;
    let ranks = complex.delta_ranks();
    let mut dims = Vec::with_capacity(i_max + 1);
    for i in 0..=i_max {
        let c = complex.dims.get(i).copied().unwrap_or(0);
        let r_i = ranks.get(i).copied().unwrap_or(0);
        let r_prev = if i == 0 {
            0
        } else {
            ranks.get(i - 1).copied().unwrap_or(0)
        };
        dims.push(c - r_i - r_prev);
    }
    Ok(LimResult {
        dims,
        chain_counts: complex.chain_counts,
        modular: false,
    })
}

/// Convenience: lim^i of the constant functor over a poset.
pub fn lim_i_constant(
    poset: &SphericalPoset,
    i_max: usize,
    cfg: &LimitsConfig,
) -> Result<LimResult, LimitsError> {
    lim_i(&PosetFunctor::constant(poset.clone()), i_max, cfg)
}

/// The E2 table of a GCM: cell (i, j = 2d) holds dim lim^i of the degree-d
/// invariant slice. Odd rows vanish identically and are omitted from the
/// map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct E2Page {
    pub window: usize,
    pub i_max: usize,
    pub poset_size: usize,
    pub cells: BTreeMap<(usize, usize), usize>,
    pub modular_rows: Vec<usize>,
}

impl E2Page {
    pub fn dim(&self, i: usize, j: usize) -> usize {
        if j % 2 == 1 {
            return 0;
        }
        self.cells.get(&(i, j)).copied().unwrap_or(0)
    }
}

/// E2 page over an explicitly given poset (used for subcategory
/// comparisons); `e2_page` enumerates the full spherical poset first.
pub fn e2_over_poset(
    g: &Gcm,
    poset: &SphericalPoset,
    window: usize,
    i_max: usize,
    cfg: &LimitsConfig,
) -> Result<E2Page, LimitsError> {
    let d_top = window / 2;
    let models = PosetFunctor::build_models(g, poset, d_top)?;
    let mut cells = BTreeMap::new();
    let mut modular_rows = Vec::new();
    for d in 0..=d_top {
        let j = 2 * d;
        let i_top = i_max.min(window - j);
        let f = PosetFunctor::from_models(poset.clone(), &models, d)?;
        let lim = lim_i(&f, i_top, cfg)?;
        if lim.modular {
            modular_rows.push(j);
        }
        for (i, &dim) in lim.dims.iter().enumerate() {
            cells.insert((i, j), dim);
        }
    }
    Ok(E2Page {
        window,
        i_max,
        poset_size: poset.len(),
        cells,
        modular_rows,
    })
}

pub fn e2_page(
    g: &Gcm,
    window: usize,
    i_max: usize,
    cfg: &LimitsConfig,
) -> Result<E2Page, LimitsError> {
    let poset = SphericalPoset::enumerate(g)?;
    e2_over_poset(g, &poset, window, i_max, cfg)
}

// ---------------------------------------------------------------------
// Family scans
// ---------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct StabilityReport {
    pub window: usize,
    pub i_max: usize,
    /// (n, page over the full spherical poset).
    pub pages: Vec<(u32, E2Page)>,
    /// (n, page over the extension subcategory, agrees with full page).
    pub cofinal_pages: Vec<(u32, E2Page, bool)>,
    /// Per cell: the smallest probed n from which the value is constant.
    pub thresholds: BTreeMap<(usize, usize), u32>,
    /// True when every cell is constant on a tail of length at least two.
    pub stabilized: bool,
}

/// Computes E2 pages for family members n in 0..=n_max over the full
/// spherical posets, recomputes them over the reindexed extension
/// subcategories for n <= cofinal_max, and reports per-cell stabilization
/// thresholds. The base (n = 0 member) must control all probed members'
/// spherical subsets.
pub fn stability_scan(
    base: &Gcm,
    n_max: u32,
    window: usize,
    i_max: usize,
    cofinal_max: u32,
    cfg: &LimitsConfig,
) -> Result<StabilityReport, LimitsError> {
    let spec0 = FamilySpec::new(base.clone(), 0).expect("base must be pivot-normalized");
    let members: Vec<Gcm> = (0..=n_max)
        .map(|n| {
            extend(&FamilySpec {
                base: spec0.base.clone(),
                n,
            })
        })
        .collect();
    let i0 = base.node_set();
    for (n, m) in members.iter().enumerate().skip(1) {
        let rep = verify_observation(base, m, &i0);
        if !rep.holds {
            return Err(LimitsError::ObservationFailed {
                n: n as u32,
                witness: rep.witness.unwrap_or_default(),
            });
        }
    }
    let mut pages = Vec::new();
    let mut cofinal_pages = Vec::new();
    for (n, m) in members.iter().enumerate() {
        let poset = SphericalPoset::enumerate(m)?;
        let page = e2_over_poset(m, &poset, window, i_max, cfg)?;
        if (n as u32) <= cofinal_max && n > 0 {
            let sub = poset.extended_subcategory(&i0);
            let cpage = e2_over_poset(m, &sub, window, i_max, cfg)?;
            let agree = cpage.cells == page.cells;
            cofinal_pages.push((n as u32, cpage, agree));
        }
        pages.push((n as u32, page));
    }
    let mut thresholds = BTreeMap::new();
    let mut stabilized = true;
    let cell_keys: Vec<(usize, usize)> = pages
        .first()
        .map(|(_, p)| p.cells.keys().copied().collect())
        .unwrap_or_default();
    for key in cell_keys {
        let values: Vec<usize> = pages.iter().map(|(_, p)| p.dim(key.0, key.1)).collect();
        let mut threshold = n_max;
        for start in (0..values.len()).rev() {
            if values[start..].iter().all(|&v| v == values[values.len() - 1]) {
                threshold = start as u32;
            } else {
                break;
            }
        }
        if (n_max - threshold) < 1 {
            stabilized = false;
        }
        thresholds.insert(key, threshold);
    }
    Ok(StabilityReport {
        window,
        i_max,
        pages,
        cofinal_pages,
        thresholds,
        stabilized,
    })
}

#[derive(Debug, Clone)]
pub struct WeylScanReport {
    pub i_max: usize,
    /// (n, lim^i dims of the constant functor over the member's poset).
    pub per_n: Vec<(u32, Vec<usize>)>,
    pub thresholds: Vec<u32>,
    pub stabilized: bool,
}

/// Constant-functor limit dimensions across a family: the rational shadow
/// of the Weyl-group decomposition. Coefficientwise this is nerve
/// cohomology of the spherical posets.
pub fn weyl_family_scan(
    base: &Gcm,
    n_max: u32,
    i_max: usize,
    cfg: &LimitsConfig,
) -> Result<WeylScanReport, LimitsError> {
    let spec0 = FamilySpec::new(base.clone(), 0).expect("base must be pivot-normalized");
    let mut per_n = Vec::new();
    for n in 0..=n_max {
        let m = extend(&FamilySpec {
            base: spec0.base.clone(),
            n,
        });
        let poset = SphericalPoset::enumerate(&m)?;
        let lim = lim_i_constant(&poset, i_max, cfg)?;
        per_n.push((n, lim.dims));
    }
    let mut thresholds = Vec::with_capacity(i_max + 1);
    let mut stabilized = true;
    for i in 0..=i_max {
        let values: Vec<usize> = per_n.iter().map(|(_, v)| v[i]).collect();
        let mut threshold = n_max;
        for start in (0..values.len()).rev() {
            if values[start..].iter().all(|&v| v == values[values.len() - 1]) {
                threshold = start as u32;
            } else {
                break;
            }
        }
        if (n_max - threshold) < 1 {
            stabilized = false;
        }
        thresholds.push(threshold);
    }
    Ok(WeylScanReport {
        i_max,
        per_n,
        thresholds,
        stabilized,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{catalog_template, CatalogType};
    use crate::family::relabel_with_pivot;
    use crate::gcm::rank2;
    use crate::invariants::hilbert_series;

    fn cfg() -> LimitsConfig {
        LimitsConfig::default()
    }

    #[test]
    fn one_element_poset_is_trivial() {
        let g = Gcm::empty();
        let poset = SphericalPoset::enumerate(&g).unwrap();
        assert_eq!(poset.len(), 1);
        let lim = lim_i_constant(&poset, 3, &cfg()).unwrap();
        assert_eq!(lim.dims, vec![1, 0, 0, 0]);
    }

    #[test]
    fn contractible_two_element_poset() {
        let g = catalog_template(CatalogType::A(1));
        let poset = SphericalPoset::enumerate(&g).unwrap();
        let lim = lim_i_constant(&poset, 2, &cfg()).unwrap();
        assert_eq!(lim.dims, vec![1, 0, 0]);
    }

    #[test]
    fn finite_type_parent_concentrates_in_column_zero() {
        let g = catalog_template(CatalogType::A(2));
        let page = e2_page(&g, 8, 3, &cfg()).unwrap();
        let hs = hilbert_series(&g, &g.node_set(), 4).unwrap();
        for d in 0..=4usize {
            assert_eq!(page.dim(0, 2 * d), hs.coeff(d) as usize, "degree {d}");
            for i in 1..=3usize.min(8 - 2 * d) {
                assert_eq!(page.dim(i, 2 * d), 0, "lim^{i} at degree {d}");
            }
        }
        // Odd cohomological rows are identically zero in this model.
        for j in [1usize, 3, 5, 7] {
            for i in 0..=3usize {
                assert_eq!(page.dim(i, j), 0);
            }
        }
    }

    #[test]
    fn rank2_cochain_dimensions() {
        // Poset {0,{1},{2}} at degree 1: C^0 = 2+1+1, C^1 = 2+2.
        let g = rank2(3, 3);
        let poset = SphericalPoset::enumerate(&g).unwrap();
        let models = PosetFunctor::build_models(&g, &poset, 1).unwrap();
        let f = PosetFunctor::from_models(poset, &models, 1).unwrap();
        let complex = cochain_complex(&f, 1, &cfg()).unwrap();
        assert_eq!(complex.dims, vec![4, 4]);
    }

    #[test]
    fn rank2_lims_match_two_map_oracle() {
        // Over the three-element poset, lim^0 is the intersection of the
        // two invariant lines inside the ambient space and lim^1 is the
        // cokernel of their sum; check both for affine and indefinite.
        for (a, b) in [(2i64, 2i64), (3, 3), (2, 3)] {
            let g = rank2(a, b);
            let poset = SphericalPoset::enumerate(&g).unwrap();
            for d in 1..=4usize {
                let models = PosetFunctor::build_models(&g, &poset, d).unwrap();
                let f = PosetFunctor::from_models(poset.clone(), &models, d).unwrap();
                let lim = lim_i(&f, 2, &cfg()).unwrap();
                // Oracle: dims from subspace arithmetic.
                let idx_empty = poset.position_of(&NodeSet::new()).unwrap() as usize;
                let one: NodeSet = [1].into_iter().collect();
                let two: NodeSet = [2].into_iter().collect();
                let m_empty = &models[idx_empty];
                let m1 = &models[poset.position_of(&one).unwrap() as usize];
                let m2 = &models[poset.position_of(&two).unwrap() as usize];
                // dim(F1 + F2) via rank of stacked vectors.
                let mut stacked: Vec<Vec<i64>> = Vec::new();
                for v in m1.bases[d].iter().chain(m2.bases[d].iter()) {
                    stacked.push(v.iter().map(|x| i64::try_from(x.clone()).unwrap()).collect());
                }
                let sum_dim = if stacked.is_empty() {
                    0
                } else {
                    crate::linalg::rank_dense(&QMat::from_int_rows(&stacked))
                };
                let inter = m1.dim(d) + m2.dim(d) - sum_dim;
                let coker = m_empty.dim(d) - sum_dim;
                assert_eq!(lim.dims[0], inter, "lim0 A({a},{b}) d={d}");
                assert_eq!(lim.dims[1], coker, "lim1 A({a},{b}) d={d}");
                assert_eq!(lim.dims[2], 0);
            }
        }
    }

    #[test]
    fn affine_rank2_has_nonzero_lim1_at_odd_degrees() {
        let g = rank2(2, 2);
        let page = e2_page(&g, 6, 3, &cfg()).unwrap();
        assert_eq!(page.dim(0, 2), 1);
        assert_eq!(page.dim(1, 2), 1);
        // Indefinite neighbours have vanishing lim^1 in this window.
        let h = rank2(2, 3);
        let page_h = e2_page(&h, 6, 3, &cfg()).unwrap();
        for j in [0usize, 2, 4, 6] {
            assert_eq!(page_h.dim(1, j), 0);
        }
    }

    #[test]
    fn guardrail_refuses_oversized_complexes() {
        let g = catalog_template(CatalogType::A(3));
        let poset = SphericalPoset::enumerate(&g).unwrap();
        let mut small = cfg();
        small.guardrail = 5;
        let err = lim_i_constant(&poset, 3, &small).unwrap_err();
        assert!(matches!(err, LimitsError::Guardrail { .. }));
    }

    #[test]
    fn depth_cap_is_enforced() {
        let g = catalog_template(CatalogType::A(2));
        let poset = SphericalPoset::enumerate(&g).unwrap();
        let mut c = cfg();
        c.depth_cap = 2;
        assert!(matches!(
            lim_i_constant(&poset, 3, &c),
            Err(LimitsError::ChainDepthExceeded { .. })
        ));
    }

    #[test]
    fn modular_and_exact_agree_on_medium_poset() {
        // Force the modular path on a poset small enough to also run
        // exactly; the boundary ranks must agree.
        let g = catalog_template(CatalogType::A(4));
        let poset = SphericalPoset::enumerate(&g).unwrap();
        let exact = lim_i_constant(&poset, 4, &cfg()).unwrap();
        assert!(!exact.modular);
        let mut force = cfg();
        force.modular_threshold = 1;
        let modular = lim_i_constant(&poset, 4, &force).unwrap();
        assert!(modular.modular);
        assert_eq!(exact.dims, modular.dims);
    }

    #[test]
    fn e2_vanishes_above_longest_chain() {
        let g = rank2(3, 3);
        let poset = SphericalPoset::enumerate(&g).unwrap();
        assert_eq!(poset.longest_chain(), 1);
        let lim = lim_i_constant(&poset, 5, &cfg()).unwrap();
        assert_eq!(&lim.dims[2..], &[0, 0, 0, 0]);
    }

    #[test]
    fn stability_scan_small_window() {
        let base = relabel_with_pivot(&rank2(2, 2), 1).unwrap();
        let report = stability_scan(&base, 3, 4, 4, 2, &cfg()).unwrap();
        assert_eq!(report.pages.len(), 4);
        for (n, _page, agree) in &report.cofinal_pages {
            assert!(*agree, "cofinal page disagrees at n={n}");
        }
        // Degree-0 row: lim^0 = 1, higher vanish (posets have a bottom).
        for (_, page) in &report.pages {
            assert_eq!(page.dim(0, 0), 1);
            assert_eq!(page.dim(1, 0), 0);
        }
    }

    #[test]
    fn indefinite_rank2_family_also_stabilizes() {
        // A second family exhibit: an indefinite base controls all its
        // extensions from the start, and the window stabilizes as well.
        let base = relabel_with_pivot(&rank2(2, 3), 1).unwrap();
        let report = stability_scan(&base, 3, 4, 4, 2, &cfg()).unwrap();
        assert!(report.stabilized);
        for (n, _page, agree) in &report.cofinal_pages {
            assert!(*agree, "cofinal disagreement at n={n}");
        }
        // Indefinite rank-2 bases have no first-column classes beyond the
        // invariant-quadric tower, and no lim^1 anywhere in the window.
        for (_, page) in &report.pages {
            assert_eq!(page.dim(0, 0), 1);
            assert_eq!(page.dim(0, 4), 1);
            assert_eq!(page.dim(1, 2), 0);
        }
    }

    #[test]
    fn stability_scan_rejects_uncontrolled_base() {
        // A finite base whose extension crosses into affine type cannot
        // control its extensions: the full node set is the witness.
        let e8 = crate::family::e_series(8);
        let base = relabel_with_pivot(&e8, 1).unwrap();
        let err = stability_scan(&base, 1, 2, 1, 0, &cfg()).unwrap_err();
        match err {
            LimitsError::ObservationFailed { n: 1, witness } => {
                assert_eq!(witness.len(), 9);
            }
            other => panic!("expected observation failure, got {other:?}"),
        }
    }

    #[test]
    fn weyl_scan_is_constant_for_bottomed_posets() {
        let base = relabel_with_pivot(&rank2(2, 2), 1).unwrap();
        let report = weyl_family_scan(&base, 3, 4, &cfg()).unwrap();
        for (n, dims) in &report.per_n {
            assert_eq!(dims[0], 1, "n={n}");
            assert!(dims[1..].iter().all(|&v| v == 0));
        }
        assert!(report.stabilized);
    }
}
