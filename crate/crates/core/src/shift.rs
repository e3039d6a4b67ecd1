//! Signed cyclic shift matrices sigma_m and their block composition law.
//! These are integer identities, so everything here is exact integer
//! arithmetic on small dense matrices.

use crate::linalg::det_int;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum ShiftError {
    #[error("cannot embed a {needed}x{needed} block into a {total}x{total} matrix")]
    SizeMismatch { needed: usize, total: usize },
}

/// Dense integer matrix, row-major, with columns acting on basis vectors
/// (column j is the image of e_{j+1}).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub n: usize,
    pub a: Vec<i64>,
}

impl IntMatrix {
    pub fn identity(n: usize) -> Self {
        let mut a = vec![0; n * n];
        for i in 0..n {
            a[i * n + i] = 1;
        }
        IntMatrix { n, a }
    }

    pub fn at(&self, i: usize, j: usize) -> i64 {
        self.a[i * self.n + j]
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = vec![0i64; n * n];
        for i in 0..n {
            for k in 0..n {
                let v = self.a[i * n + k];
                if v == 0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += v * other.a[k * n + j];
                }
            }
        }
        IntMatrix { n, a: out }
    }

    pub fn det(&self) -> num::BigInt {
        let rows: Vec<Vec<i64>> = (0..self.n)
            .map(|i| self.a[i * self.n..(i + 1) * self.n].to_vec())
            .collect();
        det_int(&rows)
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix {
            n: self.n,
            a: self.a.iter().map(|&v| -v).collect(),
        }
    }
}

/// The shift element on m+1 basis vectors: e_i -> e_{i-1} for i > 1 and
/// e_1 -> (-1)^m e_{m+1}. Always has determinant 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftMatrix {
    pub m: usize,
    pub matrix: IntMatrix,
}

pub fn sigma(m: usize) -> ShiftMatrix {
    assert!(m >= 1);
    let n = m + 1;
    let mut a = vec![0i64; n * n];
    // Column j = image of e_{j+1}.
    for j in 1..n {
        a[(j - 1) * n + j] = 1; // e_{j+1} -> e_j
    }
    let sign = if m % 2 == 0 { 1 } else { -1 };
    a[(n - 1) * n] = sign; // e_1 -> (-1)^m e_{m+1}
    let matrix = IntMatrix { n, a };
    debug_assert_eq!(matrix.det(), num::BigInt::from(1));
    ShiftMatrix { m, matrix }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockPosition {
    /// Leading diagonal block.
    Low,
    /// Trailing diagonal block.
    High,
}

/// Places the shift block into a larger identity matrix, leading or
/// trailing.
pub fn block_embed(
    s: &ShiftMatrix,
    total: usize,
    position: BlockPosition,
) -> Result<IntMatrix, ShiftError> {
    let k = s.matrix.n;
    if k > total {
        return Err(ShiftError::SizeMismatch { needed: k, total });
    }
    let mut out = IntMatrix::identity(total);
    let off = match position {
        BlockPosition::Low => 0,
        BlockPosition::High => total - k,
    };
    for i in 0..k {
        for j in 0..k {
            out.a[(off + i) * total + (off + j)] = s.matrix.at(i, j);
        }
    }
    Ok(out)
}

/// Checks the composition law in size m1 + m2 + 1: the high copy of
/// sigma_{m2} composed after the low copy of sigma_{m1} equals
/// sigma_{m1+m2}, exactly. This block pairing is the one that makes the
/// law hold; the regression tests pin it.
pub fn verify_composition(m1: usize, m2: usize) -> bool {
    let total = m1 + m2 + 1;
    let low = block_embed(&sigma(m1), total, BlockPosition::Low).expect("fits");
    let high = block_embed(&sigma(m2), total, BlockPosition::High).expect("fits");
    let product = high.mul(&low);
    product == sigma(m1 + m2).matrix
}
