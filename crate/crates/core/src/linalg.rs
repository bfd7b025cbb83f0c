//! Small dense linear algebra used across the crate.
//!
//! Matrices are row-major `Vec<f64>` with an explicit dimension. Everything
//! here is sized for desk-scale problems: determinants up to 12×12 and
//! Cholesky factorizations up to a few thousand rows.

use nalgebra::{DMatrix, SymmetricEigen};

/// Dot product with four independent accumulators so the loop vectorizes.
#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = [0.0f64; 4];
    let ca = a.chunks_exact(4);
    let cb = b.chunks_exact(4);
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        acc[0] += x[0] * y[0];
        acc[1] += x[1] * y[1];
        acc[2] += x[2] * y[2];
        acc[3] += x[3] * y[3];
    }
    let mut tail = 0.0;
    for (x, y) in ra.iter().zip(rb) {
        tail += x * y;
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Sum with a fixed pairwise reduction tree. The result depends only on the
/// order of `values`, never on how they were produced.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2 => values[0] + values[1],
        n => {
            let (lo, hi) = values.split_at(n / 2);
            pairwise_sum(lo) + pairwise_sum(hi)
        }
    }
}

/// Determinant of a square matrix given as rows, by LU with partial pivoting.
pub fn det_rows(rows: &[&[f64]]) -> f64 {
    let n = rows.len();
    if n == 0 {
        return 1.0;
    }
    let mut a: Vec<f64> = Vec::with_capacity(n * n);
    for r in rows {
        debug_assert_eq!(r.len(), n);
        a.extend_from_slice(r);
    }
    det_in_place(&mut a, n)
}

/// Determinant of a row-major `n × n` matrix; the buffer is destroyed.
pub fn det_in_place(a: &mut [f64], n: usize) -> f64 {
    match n {
        0 => return 1.0,
        1 => return a[0],
        2 => return a[0] * a[3] - a[1] * a[2],
        3 => {
            return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6])
                + a[2] * (a[3] * a[7] - a[4] * a[6])
        }
        _ => {}
    }
    let mut det = 1.0;
    for col in 0..n {
        let mut piv = col;
        let mut best = a[col * n + col].abs();
        for r in col + 1..n {
            let v = a[r * n + col].abs();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best == 0.0 {
            return 0.0;
        }
        if piv != col {
            for c in 0..n {
                a.swap(col * n + c, piv * n + c);
            }
            det = -det;
        }
        let p = a[col * n + col];
        det *= p;
        for r in col + 1..n {
            let f = a[r * n + col] / p;
            if f != 0.0 {
                for c in col + 1..n {
                    a[r * n + c] -= f * a[col * n + c];
                }
            }
        }
    }
    det
}

/// Generalized cross product: a vector orthogonal to the `n - 1` given
/// vectors in `Rⁿ`, with length equal to the `(n-1)`-volume of the
/// parallelotope they span. Zero when they are linearly dependent.
pub fn cross_normal(vectors: &[&[f64]], n: usize) -> Vec<f64> {
    debug_assert_eq!(vectors.len() + 1, n);
    if n == 1 {
        return vec![1.0];
    }
    let m = n - 1;
    let mut out = vec![0.0; n];
    let mut minor = vec![0.0; m * m];
    for (i, o) in out.iter_mut().enumerate() {
        for (r, v) in vectors.iter().enumerate() {
            let mut c2 = 0;
            for (c, x) in v.iter().enumerate() {
                if c != i {
                    minor[r * m + c2] = *x;
                    c2 += 1;
                }
            }
        }
        let d = det_in_place(&mut minor, m);
        *o = if i % 2 == 0 { d } else { -d };
    }
    out
}

/// Orthonormal basis of the span of `vectors` by Gram–Schmidt with
/// pivoting on the largest residual. Residuals below `tol` are treated as
/// zero, so the basis length is the numerical rank.
pub fn orthonormal_basis(vectors: &[Vec<f64>], tol: f64) -> Vec<Vec<f64>> {
    let mut residuals: Vec<Vec<f64>> = vectors.to_vec();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let dim = vectors.first().map_or(0, |v| v.len());
    while basis.len() < dim {
        let (best, len) = residuals
            .iter()
            .enumerate()
            .map(|(i, r)| (i, norm2(r)))
            .fold(
                (usize::MAX, 0.0),
                |acc, (i, l)| if l > acc.1 { (i, l) } else { acc },
            );
        if best == usize::MAX || len <= tol {
            break;
        }
        let q: Vec<f64> = residuals[best].iter().map(|x| x / len).collect();
        for r in residuals.iter_mut() {
            // twice is enough
            for _ in 0..2 {
                let c = dot(r, &q);
                for (x, y) in r.iter_mut().zip(&q) {
                    *x -= c * y;
                }
            }
        }
        basis.push(q);
    }
    basis
}

/// Lower-triangular Cholesky factor `A = L Lᵀ`, stored row-major.
#[derive(Debug, Clone)]
pub struct Cholesky {
    n: usize,
    l: Vec<f64>,
    min_pivot: f64,
}

/// Failure of [`Cholesky::factor`]: the first row whose pivot fell below the
/// threshold, and that pivot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PivotFailure {
    pub row: usize,
    pub pivot: f64,
}

impl Cholesky {
    /// Factor the symmetric row-major matrix `a`. A pivot (diagonal of the
    /// running Schur complement) at or below `rel_threshold × max diagonal`
    /// aborts the factorization.
    pub fn factor(a: &[f64], n: usize, rel_threshold: f64) -> Result<Self, PivotFailure> {
        assert_eq!(a.len(), n * n);
        let max_diag = (0..n).map(|i| a[i * n + i]).fold(0.0f64, f64::max);
        let threshold = rel_threshold * max_diag;
        let mut l = vec![0.0; n * n];
        let mut min_pivot = f64::INFINITY;
        for i in 0..n {
            for j in 0..i {
                let (head, tail) = l.split_at_mut(i * n);
                let row_j = &head[j * n..j * n + j];
                let row_i = &tail[..j];
                let s = a[i * n + j] - dot(row_i, row_j);
                tail[j] = s / head[j * n + j];
            }
            let row_i = &l[i * n..i * n + i];
            let pivot = a[i * n + i] - dot(row_i, row_i);
            if !(pivot > threshold) {
                return Err(PivotFailure { row: i, pivot });
            }
            min_pivot = min_pivot.min(pivot);
            l[i * n + i] = pivot.sqrt();
        }
        Ok(Cholesky { n, l, min_pivot })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Smallest pivot encountered; an upper bound on the smallest eigenvalue.
    pub fn min_pivot(&self) -> f64 {
        if self.n == 0 {
            1.0
        } else {
            self.min_pivot
        }
    }

    /// Solve `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        assert_eq!(b.len(), n);
        let mut y = vec![0.0; n];
        for i in 0..n {
            let s = b[i] - dot(&self.l[i * n..i * n + i], &y[..i]);
            y[i] = s / self.l[i * n + i];
        }
        let mut x = y;
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in i + 1..n {
                s -= self.l[k * n + i] * x[k];
            }
            x[i] = s / self.l[i * n + i];
        }
        x
    }
}

/// Smallest eigenvalue of a symmetric row-major matrix.
pub fn symmetric_min_eigenvalue(a: &[f64], n: usize) -> f64 {
    if n == 0 {
        return f64::INFINITY;
    }
    let m = DMatrix::from_row_slice(n, n, a);
    let eig = SymmetricEigen::new(m);
    eig.eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// `m × n` matrix (as rows) times a vector.
pub fn mat_vec(rows: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    rows.iter().map(|r| dot(r, x)).collect()
}

/// Iterator over all `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Combinations {
    Combinations {
        n,
        idx: (0..k).collect(),
        done: k > n,
    }
}

pub struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Binomial coefficient, saturating.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}
