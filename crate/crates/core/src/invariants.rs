//! Rational invariant models: simple-reflection actions on the ambient
//! node space, bases of invariant subspaces of symmetric powers, Hilbert
//! series from the invariant-degree table, and the Molien-series oracle
//! that recomputes those series by averaging over the finite reflection
//! group.
//!
//! Everything is exact. The project-wide convention is the row-index
//! action s_i(e_k) = e_k - a_{ik} e_i; restriction maps between invariant
//! subspaces are genuine inclusions under this convention.

use crate::classify::{classify, weyl_data, ComponentVerdict};
use crate::gcm::{Gcm, Label, NodeSet};
use crate::linalg::{
    binomial, char_poly_rev, express_in_basis, kernel_basis_int, series_inverse, Int,
    QMat, Rat,
};
use num::{One, Signed, Zero};
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum InvariantError {
    #[error("degree {d} exceeds the configured cutoff {cutoff}")]
    CutoffExceeded { d: usize, cutoff: usize },
    #[error("subset is not spherical: component verdict {0}")]
    NotSpherical(String),
    #[error("reflection group exceeds the order bound {bound}")]
    GroupTooLarge { bound: usize },
    #[error("restriction solve left a nonzero residual; the models are inconsistent")]
    InconsistentSubspace,
    #[error("models disagree on ambient space or degree")]
    ModelMismatch,
}

/// The simple reflections indexed by a spherical subset, acting on the
/// full ambient node space.
#[derive(Debug, Clone)]
pub struct ReflectionAction {
    /// Ambient node labels, ascending; the space is their Q-span.
    pub ambient: Vec<Label>,
    /// (node label, matrix) per generator; column k is the image of e_k.
    pub generators: Vec<(Label, Vec<Vec<i64>>)>,
}

impl ReflectionAction {
    pub fn dim(&self) -> usize {
        self.ambient.len()
    }
}

/// Builds the reflection matrices M_i, i in `j`: e_k -> e_k - a_{ik} e_i.
/// Each M_i is an involution of determinant -1 fixing every basis vector
/// not adjacent to i.
pub fn reflection_matrices(g: &Gcm, j: &NodeSet) -> ReflectionAction {
    let mut ambient: Vec<Label> = g.nodes().to_vec();
    ambient.sort_unstable();
    let n = ambient.len();
    let pos: HashMap<Label, usize> = ambient.iter().enumerate().map(|(k, &l)| (l, k)).collect();
    let mut generators = Vec::new();
    for &i in j {
        let pi = pos[&i];
        let mut m = vec![vec![0i64; n]; n];
        for (k, &lk) in ambient.iter().enumerate() {
            m[k][k] = 1;
            let a_ik = g.entry(i, lk);
            m[pi][k] -= a_ik;
        }
        generators.push((i, m));
    }
    ReflectionAction {
        ambient,
        generators,
    }
}

/// Exponent vectors of total degree d in n variables, graded-lex order
/// (descending on the exponent vector). This order is fixed crate-wide;
/// bases and cached results depend on it.
pub fn monomials(n: usize, d: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::with_capacity(binomial(n + d - 1, d).min(1 << 24) as usize);
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    let mut cur = vec![0u8; n];
    fn rec(cur: &mut Vec<u8>, idx: usize, left: usize, out: &mut Vec<Vec<u8>>) {
        if idx + 1 == cur.len() {
            cur[idx] = left as u8;
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur[idx] = e as u8;
            rec(cur, idx + 1, left - e, out);
        }
        cur[idx] = 0;
    }
    rec(&mut cur, 0, d, &mut out);
    out
}

/// Matrix of the induced action on degree-d polynomials over the monomial
/// basis; column per source monomial.
fn sym_power_matrix(m: &[Vec<i64>], monos: &[Vec<u8>], index: &HashMap<Vec<u8>, usize>) -> QMat {
    let dim = monos.len();
    let n = m.len();
    let mut out = QMat::zeros(dim, dim);
    for (col, alpha) in monos.iter().enumerate() {
        // Expand prod_k (M e_k)^{alpha_k}.
        let mut poly: BTreeMap<Vec<u8>, Int> = BTreeMap::new();
        poly.insert(vec![0u8; n], Int::one());
        for (k, &e) in alpha.iter().enumerate() {
            for _ in 0..e {
                let mut next: BTreeMap<Vec<u8>, Int> = BTreeMap::new();
                for (mono, coef) in &poly {
                    for r in 0..n {
                        let c = m[r][k];
                        if c == 0 {
                            continue;
                        }
                        let mut m2 = mono.clone();
                        m2[r] += 1;
                        let add = coef * Int::from(c);
                        *next.entry(m2).or_insert_with(Int::zero) += add;
                    }
                }
                poly = next;
            }
        }
        for (mono, coef) in poly {
            if coef.is_zero() {
                continue;
            }
            let row = index[&mono];
            out[(row, col)] = Rat::from_integer(coef);
        }
    }
    out
}

/// Basis of the degree-d subspace fixed by every generator, as primitive
/// integer vectors over the monomial basis, computed by exact kernel
/// elimination of the stacked (Sym^d M_i - Id). Deterministic reduced
/// echelon shape.
pub fn invariant_basis(
    act: &ReflectionAction,
    d: usize,
    cutoff: usize,
) -> Result<Vec<Vec<Int>>, InvariantError> {
    if d > cutoff {
        return Err(InvariantError::CutoffExceeded { d, cutoff });
    }
    let n = act.dim();
    let monos = monomials(n, d);
    let dim = monos.len();
    if act.generators.is_empty() {
        // Whole space; identity basis in monomial order.
        return Ok((0..dim)
            .map(|k| {
                let mut v = vec![Int::zero(); dim];
                v[k] = Int::one();
                v
            })
            .collect());
    }
    let index: HashMap<Vec<u8>, usize> =
        monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
    let mut stacked = QMat::zeros(dim * act.generators.len(), dim);
    for (gi, (_, m)) in act.generators.iter().enumerate() {
        let sym = sym_power_matrix(m, &monos, &index);
        for r in 0..dim {
            for c in 0..dim {
                let mut v = sym[(r, c)].clone();
                if r == c {
                    v -= Rat::one();
                }
                stacked[(gi * dim + r, c)] = v;
            }
        }
    }
    Ok(kernel_basis_int(&stacked))
}

/// Dimensions of homogeneous slices of an invariant ring, by polynomial
/// degree. Cohomological degree is twice the polynomial degree; odd
/// cohomological degrees vanish in this model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertSeries {
    pub coeffs: Vec<u64>,
}

impl HilbertSeries {
    pub fn coeff(&self, d: usize) -> u64 {
        self.coeffs.get(d).copied().unwrap_or(0)
    }

    pub fn cutoff(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }
}

fn one_series(cutoff: usize) -> Vec<u64> {
    let mut v = vec![0; cutoff + 1];
    v[0] = 1;
    v
}

fn mul_geometric(series: &mut [u64], step: usize) {
    // series *= 1/(1 - t^step), i.e. prefix sums with stride `step`.
    for d in step..series.len() {
        series[d] += series[d - step];
    }
}

/// Hilbert series of the invariant model for a spherical subset: the
/// product over the subset's finite components of 1/(1 - t^{d_i}) over
/// their invariant degrees, times 1/(1-t)^{N - |J|} for the complementary
/// torus directions.
pub fn hilbert_series(g: &Gcm, j: &NodeSet, cutoff: usize) -> Result<HilbertSeries, InvariantError> {
    let sub = g
        .restrict(j)
        .map_err(|e| InvariantError::NotSpherical(e.to_string()))?;
    let cls = classify(&sub).map_err(|e| InvariantError::NotSpherical(e.to_string()))?;
    let mut coeffs = one_series(cutoff);
    for comp in &cls.components {
        match &comp.verdict {
            ComponentVerdict::Finite(t) => {
                for &deg in &weyl_data(*t).degrees {
                    mul_geometric(&mut coeffs, deg as usize);
                }
            }
            other => return Err(InvariantError::NotSpherical(other.to_string())),
        }
    }
    for _ in 0..(g.rank() - j.len()) {
        mul_geometric(&mut coeffs, 1);
    }
    Ok(HilbertSeries { coeffs })
}

/// Independent oracle: averages 1/det(1 - t w) over the group generated by
/// the action's matrices (closed by exact multiplication, bounded order).
pub fn molien_oracle(
    act: &ReflectionAction,
    cutoff: usize,
    order_bound: usize,
) -> Result<HilbertSeries, InvariantError> {
    let n = act.dim();
    let id: Vec<i64> = {
        let mut v = vec![0i64; n * n];
        for i in 0..n {
            v[i * n + i] = 1;
        }
        v
    };
    let gens: Vec<Vec<i64>> = act
        .generators
        .iter()
        .map(|(_, m)| m.iter().flatten().copied().collect())
        .collect();
    let mut elements: Vec<Vec<i64>> = vec![id.clone()];
    let mut seen: std::collections::HashSet<Vec<i64>> = [id].into_iter().collect();
    let mut head = 0usize;
    while head < elements.len() {
        let cur = elements[head].clone();
        head += 1;
        for gmat in &gens {
            let mut prod = vec![0i64; n * n];
            for i in 0..n {
                for k in 0..n {
                    let v = gmat[i * n + k];
                    if v == 0 {
                        continue;
                    }
                    for jj in 0..n {
                        prod[i * n + jj] += v * cur[k * n + jj];
                    }
                }
            }
            if seen.insert(prod.clone()) {
                if elements.len() >= order_bound {
                    return Err(InvariantError::GroupTooLarge { bound: order_bound });
                }
                elements.push(prod);
            }
        }
    }
    let mut acc = vec![Int::zero(); cutoff + 1];
    for w in &elements {
        let rows: Vec<Vec<i64>> = (0..n).map(|i| w[i * n..(i + 1) * n].to_vec()).collect();
        let denom = char_poly_rev(&rows);
        let inv = series_inverse(&denom, cutoff);
        for (a, b) in acc.iter_mut().zip(inv) {
            *a += b;
        }
    }
    let order = Int::from(elements.len() as u64);
    let mut coeffs = Vec::with_capacity(cutoff + 1);
    for a in acc {
        let (q, r) = num::Integer::div_rem(&a, &order);
        assert!(
            r.is_zero() && !q.is_negative(),
            "Molien average must have nonnegative integer coefficients"
        );
        coeffs.push(u64::try_from(q).expect("Molien coefficient fits u64"));
    }
    Ok(HilbertSeries { coeffs })
}

/// Degree-sliced invariant bases for one subset, with the echelon pivot
/// positions kept alongside so that restriction solves are cheap readoffs.
#[derive(Debug, Clone)]
pub struct GradedInvariantModel {
    pub j: NodeSet,
    pub ambient: Vec<Label>,
    pub cutoff: usize,
    /// bases[d] = list of primitive integer vectors over the degree-d
    /// monomial basis.
    pub bases: Vec<Vec<Vec<Int>>>,
    /// pivots[d][k] = the coordinate where the k-th basis vector is the
    /// only nonzero one (its free column in the kernel echelon form).
    pub pivots: Vec<Vec<usize>>,
}

impl GradedInvariantModel {
    pub fn build(g: &Gcm, j: &NodeSet, cutoff: usize) -> Result<Self, InvariantError> {
        let act = reflection_matrices(g, j);
        let mut bases = Vec::with_capacity(cutoff + 1);
        let mut pivots = Vec::with_capacity(cutoff + 1);
        for d in 0..=cutoff {
            let b = invariant_basis(&act, d, cutoff)?;
            let p = echelon_pivots(&b);
            bases.push(b);
            pivots.push(p);
        }
        Ok(GradedInvariantModel {
            j: j.clone(),
            ambient: act.ambient,
            cutoff,
            bases,
            pivots,
        })
    }

    pub fn dim(&self, d: usize) -> usize {
        self.bases.get(d).map_or(0, |b| b.len())
    }
}

/// Locates, for each basis vector, a coordinate where it is the only
/// nonzero vector of the family. Kernel bases produced by the crate always
/// have such coordinates (their own free columns).
fn echelon_pivots(basis: &[Vec<Int>]) -> Vec<usize> {
    let mut out = Vec::with_capacity(basis.len());
    for (k, v) in basis.iter().enumerate() {
        let pos = (0..v.len())
            .find(|&c| {
                !v[c].is_zero()
                    && basis
                        .iter()
                        .enumerate()
                        .all(|(k2, w)| k2 == k || w[c].is_zero())
            })
            .expect("kernel basis vectors own a free coordinate");
        out.push(pos);
    }
    out
}

/// The matrix expressing each basis vector of the larger subset's
/// invariants (`model_big`, a subspace) in the basis of the smaller
/// subset's invariants (`model_small`). Exact; errors if any vector falls
/// outside the smaller space, which would mean the two models disagree.
pub fn restriction_matrix(
    model_small: &GradedInvariantModel,
    model_big: &GradedInvariantModel,
    d: usize,
) -> Result<QMat, InvariantError> {
    if model_small.ambient != model_big.ambient
        || d > model_small.cutoff
        || d > model_big.cutoff
    {
        return Err(InvariantError::ModelMismatch);
    }
    let small = &model_small.bases[d];
    let piv = &model_small.pivots[d];
    let big = &model_big.bases[d];
    let mut out = QMat::zeros(small.len(), big.len());
    for (col, w) in big.iter().enumerate() {
        // Read off coordinates at the small basis's own columns, then
        // verify the residual is exactly zero.
        let coeffs: Vec<Rat> = (0..small.len())
            .map(|k| {
                Rat::new(w[piv[k]].clone(), small[k][piv[k]].clone())
            })
            .collect();
        let dim = w.len();
        for row in 0..dim {
            let mut resid = Rat::from_integer(w[row].clone());
            for (k, c) in coeffs.iter().enumerate() {
                if !small[k][row].is_zero() {
                    resid -= c * Rat::from_integer(small[k][row].clone());
                }
            }
            if !resid.is_zero() {
                return Err(InvariantError::InconsistentSubspace);
            }
        }
        for (k, c) in coeffs.into_iter().enumerate() {
            out[(k, col)] = c;
        }
    }
    Ok(out)
}

/// Slow general fallback used in tests: coordinates via full elimination.
pub fn restriction_matrix_by_elimination(
    model_small: &GradedInvariantModel,
    model_big: &GradedInvariantModel,
    d: usize,
) -> Result<QMat, InvariantError> {
    let small = &model_small.bases[d];
    let big = &model_big.bases[d];
    let mut out = QMat::zeros(small.len(), big.len());
    for (col, w) in big.iter().enumerate() {
        let coeffs =
            express_in_basis(small, w).ok_or(InvariantError::InconsistentSubspace)?;
        for (k, c) in coeffs.into_iter().enumerate() {
            out[(k, col)] = c;
        }
    }
    Ok(out)
}
