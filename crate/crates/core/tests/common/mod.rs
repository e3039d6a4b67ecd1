//! Independent oracles for the acceptance suite. Everything here computes
//! expected values by routes that share no code with the library paths
//! they check: dense simplicial cochain complexes, closed-form chain
//! counts, two-map subspace arithmetic, and brute-force group closure.

use kmstab::gcm::{Gcm, Label, NodeSet};
use kmstab::invariants::ReflectionAction;
use kmstab::linalg::{rank_dense, QMat};
use std::collections::{BTreeSet, HashMap, HashSet};

/// Unreduced rational cohomology of an abstract simplicial complex given
/// by its faces (each a nonempty sorted vertex set). Dense exact
/// elimination on the standard signed coboundary.
pub fn simplicial_cohomology(faces: &[BTreeSet<usize>], top: usize) -> Vec<usize> {
    let mut by_dim: Vec<Vec<Vec<usize>>> = vec![Vec::new(); top + 2];
    for f in faces {
        let p = f.len() - 1;
        if p <= top + 1 {
            by_dim[p].push(f.iter().copied().collect());
        }
    }
    for list in &mut by_dim {
        list.sort();
    }
    let index: Vec<HashMap<&[usize], usize>> = by_dim
        .iter()
        .map(|list| {
            list.iter()
                .enumerate()
                .map(|(i, f)| (f.as_slice(), i))
                .collect()
        })
        .collect();
    // delta^p: C^p -> C^{p+1} via (delta c)(tau) = sum_k (-1)^k c(tau \ k).
    let mut ranks = vec![0usize; top + 1];
    for p in 0..=top {
        let rows = by_dim[p + 1].len();
        let cols = by_dim[p].len();
        if rows == 0 || cols == 0 {
            continue;
        }
        let mut m = QMat::zeros(rows, cols);
        for (r, tau) in by_dim[p + 1].iter().enumerate() {
            for k in 0..tau.len() {
                let mut facet = tau.clone();
                facet.remove(k);
                let c = index[p][facet.as_slice()];
                let sign = if k % 2 == 0 { 1 } else { -1 };
                m[(r, c)] = kmstab::linalg::rat_int(sign);
            }
        }
        ranks[p] = rank_dense(&m);
    }
    (0..=top)
        .map(|i| {
            let dim = by_dim[i].len();
            let r_i = ranks[i];
            let r_prev = if i == 0 { 0 } else { ranks[i - 1] };
            dim - r_i - r_prev
        })
        .collect()
}

/// All faces of the boundary of the (n-1)-simplex on vertices 0..n:
/// nonempty proper subsets.
pub fn boundary_simplex_faces(n: usize) -> Vec<BTreeSet<usize>> {
    let mut out = Vec::new();
    for mask in 1u32..((1 << n) - 1) {
        out.push((0..n).filter(|&v| mask & (1 << v) != 0).collect());
    }
    out
}

/// All faces of the full (n-1)-simplex: nonempty subsets.
pub fn full_simplex_faces(n: usize) -> Vec<BTreeSet<usize>> {
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        out.push((0..n).filter(|&v| mask & (1 << v) != 0).collect());
    }
    out
}

/// Closed-form count of strict p-chains of subsets of an n-set, by
/// inclusion-exclusion over the occupancy zones (the p+2 zones are: inside
/// the bottom set, the p successive differences, and the outside). The
/// differences must be nonempty; `bottom_nonempty` and `proper` control
/// the two end zones.
pub fn chain_count_formula(n: u32, p: u32, bottom_nonempty: bool, proper: bool) -> i128 {
    let zones = p + 2;
    let mut must = p; // differences between consecutive sets: p of them
    if bottom_nonempty {
        must += 1;
    }
    if proper {
        must += 1;
    }
    // Count functions [n] -> zones with `must` specified zones nonempty.
    let mut total: i128 = 0;
    for k in 0..=must {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let choose = binom(must as i128, k as i128);
        let base = (zones - k) as i128;
        total += sign * choose * base.pow(n);
    }
    total
}

fn binom(n: i128, k: i128) -> i128 {
    if k < 0 || k > n {
        return 0;
    }
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Rank of the span of a family of integer vectors.
pub fn span_rank(vectors: &[Vec<kmstab::linalg::Int>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let rows = vectors.len();
    let cols = vectors[0].len();
    let mut m = QMat::zeros(rows, cols);
    for (i, v) in vectors.iter().enumerate() {
        for (j, x) in v.iter().enumerate() {
            m[(i, j)] = kmstab::linalg::Rat::from_integer(x.clone());
        }
    }
    rank_dense(&m)
}

/// Basis of the intersection of two integer spans inside the same ambient
/// space: pairs (x, y) with A^T x = B^T y are found by a kernel
/// computation, and the intersection is spanned by the resulting A^T x.
pub fn intersect_spans(
    a: &[Vec<kmstab::linalg::Int>],
    b: &[Vec<kmstab::linalg::Int>],
) -> Vec<Vec<kmstab::linalg::Int>> {
    use kmstab::linalg::{kernel_basis_int, Int, Rat};
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let dim = a[0].len();
    let cols = a.len() + b.len();
    let mut m = QMat::zeros(dim, cols);
    for (j, v) in a.iter().enumerate() {
        for i in 0..dim {
            m[(i, j)] = Rat::from_integer(v[i].clone());
        }
    }
    for (j, v) in b.iter().enumerate() {
        for i in 0..dim {
            m[(i, a.len() + j)] = -Rat::from_integer(v[i].clone());
        }
    }
    let kernel = kernel_basis_int(&m);
    let mut out = Vec::new();
    for combo in kernel {
        let mut vec = vec![Int::from(0); dim];
        for (j, c) in combo.iter().take(a.len()).enumerate() {
            for i in 0..dim {
                vec[i] += c * &a[j][i];
            }
        }
        if vec.iter().any(|x| x != &Int::from(0)) {
            out.push(vec);
        }
    }
    out
}

/// Dimension of the intersection of several integer spans.
pub fn multi_intersection_dim(spans: &[Vec<Vec<kmstab::linalg::Int>>]) -> usize {
    let Some(first) = spans.first() else { return 0 };
    let mut acc = first.clone();
    for s in &spans[1..] {
        acc = intersect_spans(&acc, s);
        if acc.is_empty() {
            return 0;
        }
    }
    span_rank(&acc)
}

/// Two-map oracle for a rank-2 poset {0, {1}, {2}}: lim^0 is the
/// dimension of the intersection of the two invariant subspaces, lim^1
/// the codimension of their sum in the ambient degree-d space.
pub fn two_map_oracle(g: &Gcm, d: usize) -> (usize, usize) {
    let one: NodeSet = [1 as Label].into_iter().collect();
    let two: NodeSet = [2 as Label].into_iter().collect();
    let act1 = kmstab::invariants::reflection_matrices(g, &one);
    let act2 = kmstab::invariants::reflection_matrices(g, &two);
    let b1 = kmstab::invariants::invariant_basis(&act1, d, d).unwrap();
    let b2 = kmstab::invariants::invariant_basis(&act2, d, d).unwrap();
    let ambient = kmstab::linalg::binomial(g.rank() + d - 1, d) as usize;
    let mut all = b1.clone();
    all.extend(b2.iter().cloned());
    let sum = span_rank(&all);
    let inter = b1.len() + b2.len() - sum;
    let coker = ambient - sum;
    (inter, coker)
}

/// Brute-force order of the group generated by an action's matrices.
pub fn group_order(act: &ReflectionAction, bound: usize) -> usize {
    let n = act.dim();
    let id: Vec<i64> = {
        let mut v = vec![0i64; n * n];
        for i in 0..n {
            v[i * n + i] = 1;
        }
        v
    };
    let mut seen: HashSet<Vec<i64>> = [id.clone()].into_iter().collect();
    let mut queue = vec![id];
    while let Some(cur) = queue.pop() {
        for (_, g) in &act.generators {
            let mut prod = vec![0i64; n * n];
            for i in 0..n {
                for k in 0..n {
                    if g[i][k] == 0 {
                        continue;
                    }
                    for j in 0..n {
                        prod[i * n + j] += g[i][k] * cur[k * n + j];
                    }
                }
            }
            if seen.insert(prod.clone()) {
                assert!(seen.len() <= bound, "group closure exceeded test bound");
                queue.push(prod);
            }
        }
    }
    seen.len()
}

/// Deterministic xorshift stream for reproducible random-instance tests.
pub struct XorShift(pub u64);

impl XorShift {
    pub fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }
}

/// Random GCM with entries in {0,-1,-2,-3} on labels 1..=rank.
pub fn random_gcm(rng: &mut XorShift, rank: usize) -> Gcm {
    let nodes: Vec<Label> = (1..=rank as i64).collect();
    let mut rows = vec![vec![0i64; rank]; rank];
    for i in 0..rank {
        rows[i][i] = 2;
    }
    for i in 0..rank {
        for j in (i + 1)..rank {
            let pick = rng.next() % 10;
            let (a, b) = if pick == 0 {
                (0, 0)
            } else {
                let a = ((pick - 1) / 3 + 1) as i64;
                let b = ((pick - 1) % 3 + 1) as i64;
                (-a, -b)
            };
            rows[i][j] = a;
            rows[j][i] = b;
        }
    }
    Gcm::new(nodes, rows).unwrap()
}
