//! Exact linear algebra: arbitrary-precision rational dense elimination,
//! fraction-free integer determinants, characteristic polynomials, and a
//! sparse column-reduction rank engine used by the cochain machinery.
//!
//! No floating point. Every routine is deterministic: fixed pivot choices,
//! fixed iteration orders.

use num::{BigInt, BigRational, Integer, One, Signed, Zero};
use std::collections::HashMap;

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn rat_int(v: i64) -> Rat {
    Rat::from_integer(Int::from(v))
}

/// Small dense matrix over the rationals, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMat {
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<Rat>,
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMat {
            rows,
            cols,
            a: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = QMat::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = rat_int(v);
            }
        }
        m
    }

    pub fn mul(&self, other: &QMat) -> QMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = QMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    if other[(k, j)].is_zero() {
                        continue;
                    }
                    let add = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += add;
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|x| x.is_zero())
    }
}

impl std::ops::Index<(usize, usize)> for QMat {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.a[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.a[i * self.cols + j]
    }
}

/// In-place reduced row echelon form; returns the pivot columns in order.
/// Pivot choice is the first nonzero row below the current one, so the
/// result is deterministic.
pub fn rref(m: &mut QMat) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols {
        if row >= m.rows {
            break;
        }
        let Some(p) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
            continue;
        };
        if p != row {
            for j in 0..m.cols {
                let tmp = m[(p, j)].clone();
                m[(p, j)] = m[(row, j)].clone();
                m[(row, j)] = tmp;
            }
        }
        let inv = m[(row, col)].clone();
        for j in col..m.cols {
            let v = &m[(row, j)] / &inv;
            m[(row, j)] = v;
        }
        for r in 0..m.rows {
            if r != row && !m[(r, col)].is_zero() {
                let f = m[(r, col)].clone();
                for j in col..m.cols {
                    let sub = &f * &m[(row, j)];
                    m[(r, j)] -= sub;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank_dense(m: &QMat) -> usize {
    let mut c = m.clone();
    rref(&mut c).len()
}

fn primitive_scaled(v: &[Rat]) -> Vec<Int> {
    let mut lcm = Int::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let mut out: Vec<Int> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut g = Int::zero();
    for x in &out {
        g = g.gcd(x);
    }
    if !g.is_zero() && !g.is_one() {
        for x in &mut out {
            *x = &*x / &g;
        }
    }
    out
}

/// Basis of the right kernel { x : m x = 0 }, one primitive integer vector
/// per free column, in ascending free-column order. Each vector has a
/// positive unit coordinate at its own free column and zeros at the other
/// free columns, which makes the basis a reduced echelon set.
pub fn kernel_basis_int(m: &QMat) -> Vec<Vec<Int>> {
    let mut r = m.clone();
    let pivots = rref(&mut r);
    let pivot_set: Vec<Option<usize>> = {
        let mut v = vec![None; m.cols];
        for (row, &col) in pivots.iter().enumerate() {
            v[col] = Some(row);
        }
        v
    };
    let mut basis = Vec::new();
    for free in 0..m.cols {
        if pivot_set[free].is_some() {
            continue;
        }
        let mut vec_q = vec![Rat::zero(); m.cols];
        vec_q[free] = Rat::one();
        for (row, &pc) in pivots.iter().enumerate() {
            vec_q[pc] = -r[(row, free)].clone();
        }
        basis.push(primitive_scaled(&vec_q));
    }
    basis
}

/// Expresses `target` as a rational combination of the (independent)
/// integer `basis` vectors. Returns the coordinates, or None if `target`
/// is not in their span.
pub fn express_in_basis(basis: &[Vec<Int>], target: &[Int]) -> Option<Vec<Rat>> {
    let n = target.len();
    let k = basis.len();
    if k == 0 {
        return if target.iter().all(|x| x.is_zero()) {
            Some(Vec::new())
        } else {
            None
        };
    }
    let mut m = QMat::zeros(n, k + 1);
    for (j, b) in basis.iter().enumerate() {
        assert_eq!(b.len(), n, "basis vector length mismatch");
        for i in 0..n {
            m[(i, j)] = Rat::from_integer(b[i].clone());
        }
    }
    for i in 0..n {
        m[(i, k)] = Rat::from_integer(target[i].clone());
    }
    let pivots = rref(&mut m);
    if pivots.contains(&k) {
        return None; // inconsistent: target has a component outside the span
    }
    let mut coeffs = vec![Rat::zero(); k];
    for (row, &col) in pivots.iter().enumerate() {
        coeffs[col] = m[(row, k)].clone();
    }
    Some(coeffs)
}

// ---------------------------------------------------------------------
// Integer determinants (Bareiss fraction-free elimination)
// ---------------------------------------------------------------------

fn bareiss_i128(mut a: Vec<i128>, n: usize) -> Option<i128> {
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k * n + k] == 0 {
            let Some(swap) = (k + 1..n).find(|&r| a[r * n + k] != 0) else {
                return Some(0);
            };
            for j in 0..n {
                a.swap(k * n + j, swap * n + j);
            }
            sign = -sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let t1 = a[i * n + j].checked_mul(a[k * n + k])?;
                let t2 = a[i * n + k].checked_mul(a[k * n + j])?;
                let num = t1.checked_sub(t2)?;
                a[i * n + j] = num / prev; // exact division in Bareiss
            }
            a[i * n + k] = 0;
        }
        prev = a[k * n + k];
    }
    Some(sign * a[(n - 1) * n + (n - 1)])
}

fn bareiss_bigint(rows: &[Vec<i64>]) -> Int {
    let n = rows.len();
    let mut a: Vec<Int> = rows.iter().flatten().map(|&v| Int::from(v)).collect();
    let mut sign = 1i64;
    let mut prev = Int::one();
    for k in 0..n {
        if a[k * n + k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !a[r * n + k].is_zero()) else {
                return Int::zero();
            };
            for j in 0..n {
                a.swap(k * n + j, swap * n + j);
            }
            sign = -sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let num = &a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j];
                a[i * n + j] = num / &prev;
            }
            a[i * n + k] = Int::zero();
        }
        prev = a[k * n + k].clone();
    }
    Int::from(sign) * a[(n - 1) * n + (n - 1)].clone()
}

/// Exact determinant of a small integer matrix. Uses i128 fraction-free
/// elimination while it provably cannot overflow, else falls back to
/// arbitrary precision.
pub fn det_int(rows: &[Vec<i64>]) -> Int {
    let n = rows.len();
    if n == 0 {
        return Int::one();
    }
    debug_assert!(rows.iter().all(|r| r.len() == n));
    // Hadamard-style bound: Bareiss intermediates are minors, so their
    // magnitude is at most (max * sqrt(n))^n; stay on i128 while the bit
    // count provably fits. Integer arithmetic only.
    let max = rows
        .iter()
        .flatten()
        .map(|v| v.unsigned_abs())
        .max()
        .unwrap_or(0)
        .max(1);
    let entry_bits = (u64::BITS - max.leading_zeros()) as usize;
    let sqrt_n_bits = (usize::BITS - n.leading_zeros()) as usize; // > log2(sqrt n)
    let minor_bits = n * (entry_bits + sqrt_n_bits);
    if minor_bits < 120 {
        let a: Vec<i128> = rows.iter().flatten().map(|&v| v as i128).collect();
        if let Some(d) = bareiss_i128(a, n) {
            return Int::from(d);
        }
    }
    bareiss_bigint(rows)
}

/// Coefficients of det(I - t M) for an integer square matrix M, via traces
/// of powers and Newton's identities. Index k holds the t^k coefficient.
pub fn char_poly_rev(m: &[Vec<i64>]) -> Vec<Int> {
    let n = m.len();
    let mut power: Vec<Vec<Int>> = (0..n)
        .map(|i| (0..n).map(|j| Int::from(m[i][j])).collect())
        .collect();
    let mut traces: Vec<Int> = Vec::with_capacity(n + 1);
    traces.push(Int::from(n as i64)); // tr(M^0)
    for step in 1..=n {
        let tr: Int = (0..n).map(|i| power[i][i].clone()).sum();
        traces.push(tr);
        if step < n {
            // power <- power * M
            let mut next = vec![vec![Int::zero(); n]; n];
            for i in 0..n {
                for k in 0..n {
                    if power[i][k].is_zero() {
                        continue;
                    }
                    for j in 0..n {
                        if m[k][j] != 0 {
                            let add = &power[i][k] * Int::from(m[k][j]);
                            next[i][j] += add;
                        }
                    }
                }
            }
            power = next;
        }
    }
    // Newton: k e_k = sum_{i=1..k} (-1)^{i-1} e_{k-i} p_i, with p_i = traces.
    let mut e: Vec<Rat> = vec![Rat::one()];
    for k in 1..=n {
        let mut acc = Rat::zero();
        for i in 1..=k {
            let term = &e[k - i] * Rat::from_integer(traces[i].clone());
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        e.push(acc / rat_int(k as i64));
    }
    // det(I - tM) = sum_k (-1)^k e_k t^k; e_k are integers for integer M.
    e.iter()
        .enumerate()
        .map(|(k, v)| {
            debug_assert!(v.denom().is_one(), "char poly coefficient not integral");
            let x = v.numer().clone();
            if k % 2 == 1 {
                -x
            } else {
                x
            }
        })
        .collect()
}

/// Reciprocal power series of an integer polynomial with constant term 1,
/// to the given cutoff (inclusive). Coefficients stay integral.
pub fn series_inverse(poly: &[Int], cutoff: usize) -> Vec<Int> {
    assert!(poly.first().map(|c| c.is_one()).unwrap_or(false));
    let mut out = vec![Int::zero(); cutoff + 1];
    out[0] = Int::one();
    for m in 1..=cutoff {
        let mut acc = Int::zero();
        for k in 1..poly.len().min(m + 1) {
            acc += &poly[k] * &out[m - k];
        }
        out[m] = -acc;
    }
    out
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

// ---------------------------------------------------------------------
// Sparse rank via column reduction (boundary-matrix orientation)
// ---------------------------------------------------------------------

/// Result of a sparse reduction: the rank, plus the set of rows claimed as
/// pivots. For a chain complex, claimed rows of the boundary in dimension
/// p+1 index columns of the dimension-p boundary that are known images and
/// may be skipped ("clearing").
pub struct SparseRankResult {
    pub rank: usize,
    pub claimed_rows: Vec<bool>,
}

/// Exact rank over Q of a sparse integer matrix presented column by column
/// (each column sorted by ascending row index). Columns passed as `None`
/// are skipped. Fraction-free two-term combinations with gcd pruning keep
/// entries integral; pivot policy is "largest row index", which is what
/// makes clearing across a complex valid.
pub fn sparse_rank_int(
    nrows: usize,
    cols: impl Iterator<Item = Option<Vec<(u32, Int)>>>,
) -> SparseRankResult {
    let mut owner: HashMap<u32, Vec<(u32, Int)>> = HashMap::new();
    let mut claimed = vec![false; nrows];
    let mut rank = 0usize;
    for col in cols {
        let Some(mut col) = col else { continue };
        col.retain(|(_, v)| !v.is_zero());
        loop {
            let Some(&(lead_row, _)) = col.last() else {
                break;
            };
            if let Some(piv) = owner.get(&lead_row) {
                col = int_eliminate(col, piv);
            } else {
                normalize_int_col(&mut col);
                claimed[lead_row as usize] = true;
                owner.insert(lead_row, col);
                rank += 1;
                break;
            }
        }
    }
    SparseRankResult {
        rank,
        claimed_rows: claimed,
    }
}

fn normalize_int_col(col: &mut [(u32, Int)]) {
    let mut g = Int::zero();
    for (_, v) in col.iter() {
        g = g.gcd(v);
    }
    let negate = col.last().map(|(_, v)| v.is_negative()).unwrap_or(false);
    if negate {
        g = -g;
    }
    if !g.is_one() && !g.is_zero() {
        for (_, v) in col.iter_mut() {
            *v = &*v / &g;
        }
    }
}

/// col <- piv_lead * col - col_lead * piv, merged by row; the shared
/// leading row cancels exactly. Entries are gcd-reduced afterwards.
fn int_eliminate(col: Vec<(u32, Int)>, piv: &[(u32, Int)]) -> Vec<(u32, Int)> {
    let col_lead = col.last().unwrap().1.clone();
    let piv_lead = piv.last().unwrap().1.clone();
    let mut out: Vec<(u32, Int)> = Vec::with_capacity(col.len() + piv.len());
    let (mut i, mut j) = (0usize, 0usize);
    while i < col.len() || j < piv.len() {
        let take_col = match (col.get(i), piv.get(j)) {
            (Some(&(r1, _)), Some(&(r2, _))) => {
                if r1 == r2 {
                    let v = &col[i].1 * &piv_lead - &col_lead * &piv[j].1;
                    if !v.is_zero() {
                        out.push((r1, v));
                    }
                    i += 1;
                    j += 1;
                    continue;
                }
                r1 < r2
            }
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (None, None) => break,
        };
        if take_col {
            let v = &col[i].1 * &piv_lead;
            out.push((col[i].0, v));
            i += 1;
        } else {
            let v = -(&col_lead * &piv[j].1);
            out.push((piv[j].0, v));
            j += 1;
        }
    }
    // The leading rows were equal by construction, so the last entry is gone;
    // gcd-prune to keep growth down.
    let mut g = Int::zero();
    for (_, v) in &out {
        g = g.gcd(v);
    }
    if !g.is_zero() && !g.is_one() {
        for (_, v) in out.iter_mut() {
            *v = &*v / &g;
        }
    }
    out
}

/// Default prime for the modular rank path: 2^31 - 1.
pub const DEFAULT_MODULAR_PRIME: u32 = 2_147_483_647;

/// Rank over F_p of a sparse matrix presented column by column with small
/// integer entries. Same pivot policy as the exact path. Used as a fast
/// path for very large scalar complexes; callers that need a rational
/// answer must certify it (modular ranks never exceed rational ranks).
pub fn sparse_rank_modp(
    nrows: usize,
    p: u32,
    cols: impl Iterator<Item = Option<Vec<(u32, i64)>>>,
) -> SparseRankResult {
    let pm = p as u64;
    let reduce = |v: i64| -> u32 {
        let r = v.rem_euclid(p as i64);
        r as u32
    };
    let mut owner: Vec<Option<Box<[(u32, u32)]>>> = vec![None; nrows];
    let mut claimed = vec![false; nrows];
    let mut rank = 0usize;
    let inv = |a: u64| -> u64 {
        // Fermat inverse, p prime.
        let mut base = a % pm;
        let mut exp = pm - 2;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % pm;
            }
            base = base * base % pm;
            exp >>= 1;
        }
        acc
    };
    let mut scratch: Vec<(u32, u32)> = Vec::new();
    for col in cols {
        let Some(col) = col else { continue };
        let mut cur: Vec<(u32, u32)> = col
            .into_iter()
            .map(|(r, v)| (r, reduce(v)))
            .filter(|&(_, v)| v != 0)
            .collect();
        loop {
            let Some(&(lead_row, lead_val)) = cur.last() else {
                break;
            };
            match &owner[lead_row as usize] {
                Some(piv) => {
                    // cur <- cur - factor * piv, factor = lead/piv_lead.
                    let piv_lead = piv.last().unwrap().1 as u64;
                    let factor = lead_val as u64 * inv(piv_lead) % pm;
                    scratch.clear();
                    let (mut i, mut j) = (0usize, 0usize);
                    while i < cur.len() || j < piv.len() {
                        match (cur.get(i), piv.get(j)) {
                            (Some(&(r1, v1)), Some(&(r2, v2))) if r1 == r2 => {
                                let sub = factor * v2 as u64 % pm;
                                let v = (v1 as u64 + pm - sub) % pm;
                                if v != 0 {
                                    scratch.push((r1, v as u32));
                                }
                                i += 1;
                                j += 1;
                            }
                            (Some(&(r1, v1)), Some(&(r2, _))) if r1 < r2 => {
                                scratch.push((r1, v1));
                                i += 1;
                            }
                            (Some(_), Some(&(r2, v2))) => {
                                let v = (pm - factor * v2 as u64 % pm) % pm;
                                if v != 0 {
                                    scratch.push((r2, v as u32));
                                }
                                j += 1;
                            }
                            (Some(&(r1, v1)), None) => {
                                scratch.push((r1, v1));
                                i += 1;
                            }
                            (None, Some(&(r2, v2))) => {
                                let v = (pm - factor * v2 as u64 % pm) % pm;
                                if v != 0 {
                                    scratch.push((r2, v as u32));
                                }
                                j += 1;
                            }
                            (None, None) => break,
                        }
                    }
                    std::mem::swap(&mut cur, &mut scratch);
                }
                None => {
                    claimed[lead_row as usize] = true;
                    owner[lead_row as usize] = Some(cur.into_boxed_slice());
                    rank += 1;
                    break;
                }
            }
        }
    }
    SparseRankResult {
        rank,
        claimed_rows: claimed,
    }
}

/// Sign helper used by cochain assembly.
pub fn int_sign(k: usize) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}
