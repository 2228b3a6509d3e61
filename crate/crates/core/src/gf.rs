//! Arithmetic in the prime field GF(p) and dense linear algebra over it.
//!
//! Field elements are plain `u32` values kept in `[0, p)`. Vectors are
//! `Vec<u32>` (see [`FpVector`]); the [`PrimeField`] value that produced them
//! is the only thing that knows the modulus, so every vector operation goes
//! through a field method. [`FpMatrix`] carries its field and refuses to mix
//! with a matrix over a different one.

use crate::error::{Error, Result};

/// A coordinate vector over GF(p). Entries are reduced mod p.
pub type FpVector = Vec<u32>;

/// The prime field GF(p).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    /// Largest characteristic accepted. Products of two reduced elements must
    /// fit in a `u64`, and exhaustive sweeps are hopeless long before this.
    pub const MAX_P: u32 = 1 << 16;

    pub fn new(p: u32) -> Result<Self> {
        if !is_prime(p) || p > Self::MAX_P {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    /// Number of elements, as a `u64` for counting sweeps.
    #[inline]
    pub fn order(self) -> u64 {
        self.p as u64
    }

    #[inline]
    pub fn reduce(self, a: i64) -> u32 {
        a.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(self, a: u32, mut e: u64) -> u32 {
        let mut base = a % self.p;
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, by the extended Euclidean algorithm.
    pub fn inv(self, a: u32) -> Result<u32> {
        let a = a % self.p;
        if a == 0 {
            return Err(Error::DivisionByZero { p: self.p });
        }
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Ok(self.reduce(t0))
    }

    /// `(-1)^k` as a field element.
    #[inline]
    pub fn sign(self, k: usize) -> u32 {
        if k.is_multiple_of(2) {
            1 % self.p
        } else {
            self.neg(1)
        }
    }

    /// The image of an integer in the field.
    #[inline]
    pub fn from_int(self, a: i64) -> u32 {
        self.reduce(a)
    }

    pub fn zero_vec(self, n: usize) -> FpVector {
        vec![0; n]
    }

    pub fn unit_vec(self, n: usize, i: usize) -> FpVector {
        let mut v = vec![0; n];
        v[i] = 1 % self.p;
        v
    }

    /// Reduce every entry of a vector of integers.
    pub fn vector(self, entries: &[i64]) -> FpVector {
        entries.iter().map(|&a| self.reduce(a)).collect()
    }

    /// `a += b`
    #[inline]
    pub fn add_assign(self, a: &mut [u32], b: &[u32]) {
        debug_assert_eq!(a.len(), b.len());
        for (x, &y) in a.iter_mut().zip(b) {
            *x = self.add(*x, y);
        }
    }

    /// `a -= b`
    #[inline]
    pub fn sub_assign(self, a: &mut [u32], b: &[u32]) {
        debug_assert_eq!(a.len(), b.len());
        for (x, &y) in a.iter_mut().zip(b) {
            *x = self.sub(*x, y);
        }
    }

    /// `a += s * b`
    #[inline]
    pub fn axpy(self, a: &mut [u32], s: u32, b: &[u32]) {
        debug_assert_eq!(a.len(), b.len());
        if s == 0 {
            return;
        }
        for (x, &y) in a.iter_mut().zip(b) {
            *x = self.add(*x, self.mul(s, y));
        }
    }

    pub fn add_vec(self, a: &[u32], b: &[u32]) -> FpVector {
        let mut out = a.to_vec();
        self.add_assign(&mut out, b);
        out
    }

    pub fn sub_vec(self, a: &[u32], b: &[u32]) -> FpVector {
        let mut out = a.to_vec();
        self.sub_assign(&mut out, b);
        out
    }

    pub fn scale(self, s: u32, v: &[u32]) -> FpVector {
        v.iter().map(|&x| self.mul(s, x)).collect()
    }

    pub fn neg_vec(self, v: &[u32]) -> FpVector {
        v.iter().map(|&x| self.neg(x)).collect()
    }

    pub fn dot(self, a: &[u32], b: &[u32]) -> u32 {
        a.iter()
            .zip(b)
            .fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }

    /// All `p^n` vectors of length `n`, in lexicographic order with the first
    /// coordinate varying slowest.
    pub fn all_vectors(self, n: usize) -> AllVectors {
        AllVectors {
            p: self.p,
            next: Some(vec![0; n]),
        }
    }

    /// Position of `v` in the order of [`PrimeField::all_vectors`].
    pub fn index_of(self, v: &[u32]) -> usize {
        v.iter()
            .fold(0usize, |acc, &a| acc * self.p as usize + a as usize)
    }

    /// `p^n`, saturating at `u64::MAX`.
    pub fn count_vectors(self, n: usize) -> u64 {
        (self.p as u64).checked_pow(n as u32).unwrap_or(u64::MAX)
    }
}

/// Iterator over every vector of `GF(p)^n`; see [`PrimeField::all_vectors`].
#[derive(Debug, Clone)]
pub struct AllVectors {
    p: u32,
    next: Option<FpVector>,
}

impl Iterator for AllVectors {
    type Item = FpVector;

    fn next(&mut self) -> Option<FpVector> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut i = succ.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            succ[i] += 1;
            if succ[i] < self.p {
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(current)
    }
}

/// Outcome of [`FpMatrix::solve`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    /// One particular solution of `M x = b`.
    Unique(FpVector),
    /// A particular solution; the system has a kernel of the given dimension.
    Particular { x: FpVector, kernel_dim: usize },
    /// `b` is not in the column space of `M`.
    Inconsistent,
}

impl Solution {
    /// The solution vector, if one exists.
    pub fn vector(&self) -> Option<&FpVector> {
        match self {
            Solution::Unique(x) | Solution::Particular { x, .. } => Some(x),
            Solution::Inconsistent => None,
        }
    }

    pub fn into_vector(self) -> Option<FpVector> {
        match self {
            Solution::Unique(x) | Solution::Particular { x, .. } => Some(x),
            Solution::Inconsistent => None,
        }
    }
}

/// A dense matrix over GF(p), stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Result of Gauss-Jordan elimination.
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: FpMatrix,
    /// Pivot column of each nonzero row, in row order.
    pub pivots: Vec<usize>,
}

impl FpMatrix {
    /// Build from row-major entries; entries are reduced mod p.
    pub fn new(field: PrimeField, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        let p = field.p();
        let data = data.into_iter().map(|a| a % p).collect();
        Ok(FpMatrix {
            field,
            rows,
            cols,
            data,
        })
    }

    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        FpMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Build from integer rows (reduced mod p). All rows must have equal length.
    pub fn from_rows(field: PrimeField, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend(r.iter().map(|&a| field.reduce(a)));
        }
        Ok(FpMatrix {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// The matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(field: PrimeField, rows: usize, columns: &[FpVector]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for (i, &a) in c.iter().enumerate() {
                m.set(i, j, a % field.p());
            }
        }
        m
    }

    /// The matrix whose rows are the given vectors.
    pub fn from_vectors(field: PrimeField, cols: usize, rows: &[FpVector]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "row length");
            data.extend(r.iter().map(|&a| a % field.p()));
        }
        FpMatrix {
            field,
            rows: rows.len(),
            cols,
            data,
        }
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, a: u32) {
        self.data[i * self.cols + j] = a % self.field.p();
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> FpVector {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<FpVector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&a| a == 0)
    }

    fn check_field(&self, other: &FpMatrix) {
        assert_eq!(
            self.field,
            other.field,
            "mixing matrices over GF({}) and GF({})",
            self.field.p(),
            other.field.p()
        );
    }

    pub fn mul_vec(&self, v: &[u32]) -> FpVector {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| self.field.dot(self.row(i), v))
            .collect()
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        self.check_field(other);
        assert_eq!(self.cols, other.rows, "inner dimensions");
        let f = self.field;
        let mut out = FpMatrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                f.axpy(dst, a, row);
            }
        }
        out
    }

    pub fn add(&self, other: &FpMatrix) -> FpMatrix {
        self.check_field(other);
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        self.field.add_assign(&mut out.data, &other.data);
        out
    }

    pub fn sub(&self, other: &FpMatrix) -> FpMatrix {
        self.check_field(other);
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        self.field.sub_assign(&mut out.data, &other.data);
        out
    }

    pub fn scale(&self, s: u32) -> FpMatrix {
        FpMatrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.field.scale(s, &self.data),
        }
    }

    /// `self^e` for a square matrix.
    pub fn pow(&self, mut e: u64) -> FpMatrix {
        assert_eq!(self.rows, self.cols, "power of a non-square matrix");
        let mut acc = FpMatrix::identity(self.field, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut out = FpMatrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Stack `other` below `self`.
    pub fn vstack(&self, other: &FpMatrix) -> FpMatrix {
        self.check_field(other);
        assert_eq!(self.cols, other.cols, "column counts");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        FpMatrix {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Append a row.
    pub fn push_row(&mut self, row: &[u32]) {
        assert_eq!(row.len(), self.cols, "row length");
        self.data.extend(row.iter().map(|&a| a % self.field.p()));
        self.rows += 1;
    }

    /// Reduced row echelon form by Gauss-Jordan elimination.
    pub fn rref(&self) -> Rref {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(piv) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if piv != r {
                for j in 0..m.cols {
                    m.data.swap(piv * m.cols + j, r * m.cols + j);
                }
            }
            let inv = f.inv(m.get(r, c)).expect("pivot is nonzero");
            for j in c..m.cols {
                let a = m.get(r, j);
                m.data[r * m.cols + j] = f.mul(a, inv);
            }
            let pivot_row: Vec<u32> = m.row(r).to_vec();
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let a = m.get(i, c);
                if a != 0 {
                    let dst = &mut m.data[i * m.cols..(i + 1) * m.cols];
                    f.axpy(dst, f.neg(a), &pivot_row);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Dimension of the column space; equal to the rank.
    pub fn image_dim(&self) -> usize {
        self.rank()
    }

    /// A basis of `{v : M v = 0}`, one vector per free column, in increasing
    /// order of the free column index.
    pub fn kernel_basis(&self) -> Vec<FpVector> {
        let f = self.field;
        let Rref { matrix, pivots } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0; self.cols];
            v[free] = 1;
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = f.neg(matrix.get(r, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Solve `M x = b`. Free variables are set to zero.
    pub fn solve(&self, b: &[u32]) -> Solution {
        assert_eq!(b.len(), self.rows, "right-hand side length");
        let f = self.field;
        let mut aug = FpMatrix::zeros(f, self.rows, self.cols + 1);
        for (i, &bi) in b.iter().enumerate() {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, bi);
        }
        let Rref { matrix, pivots } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Solution::Inconsistent;
        }
        let mut x = vec![0; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = matrix.get(r, self.cols);
        }
        let kernel_dim = self.cols - pivots.len();
        if kernel_dim == 0 {
            Solution::Unique(x)
        } else {
            Solution::Particular { x, kernel_dim }
        }
    }

    /// Determinant of a square matrix.
    pub fn det(&self) -> u32 {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let f = self.field;
        let n = self.rows;
        let mut m = self.clone();
        let mut det = 1 % f.p();
        for c in 0..n {
            let Some(piv) = (c..n).find(|&i| m.get(i, c) != 0) else {
                return 0;
            };
            if piv != c {
                for j in 0..n {
                    m.data.swap(piv * n + j, c * n + j);
                }
                det = f.neg(det);
            }
            let a = m.get(c, c);
            det = f.mul(det, a);
            let inv = f.inv(a).expect("pivot is nonzero");
            for i in c + 1..n {
                let factor = f.mul(m.get(i, c), inv);
                if factor != 0 {
                    for j in c..n {
                        let v = f.sub(m.get(i, j), f.mul(factor, m.get(c, j)));
                        m.data[i * n + j] = v;
                    }
                }
            }
        }
        det
    }

    /// Inverse of a square matrix, if it is invertible.
    pub fn inverse(&self) -> Option<FpMatrix> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let f = self.field;
        let mut aug = FpMatrix::zeros(f, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let Rref { matrix, pivots } = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut out = FpMatrix::zeros(f, n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, matrix.get(i, n + j));
            }
        }
        Some(out)
    }
}

/// Rank of the span of a list of vectors of length `n`.
pub fn span_rank(field: PrimeField, n: usize, vectors: &[FpVector]) -> usize {
    FpMatrix::from_vectors(field, n, vectors).rank()
}

/// Whether `v` lies in the span of `vectors`.
pub fn in_span(field: PrimeField, vectors: &[FpVector], v: &[u32]) -> bool {
    let n = v.len();
    let r = span_rank(field, n, vectors);
    let mut with = vectors.to_vec();
    with.push(v.to_vec());
    span_rank(field, n, &with) == r
}

/// Homogeneous linear equations accumulated one row at a time.
///
/// Rows are periodically replaced by a reduced basis of their span, so a
/// system with many redundant equations (one per vector of a sweep, say)
/// stays small.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    field: PrimeField,
    cols: usize,
    rows: FpMatrix,
}

impl LinearSystem {
    pub fn new(field: PrimeField, cols: usize) -> Self {
        LinearSystem {
            field,
            cols,
            rows: FpMatrix::zeros(field, 0, cols),
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn push(&mut self, row: &[u32]) {
        if row.iter().all(|&a| a == 0) {
            return;
        }
        self.rows.push_row(row);
        if self.rows.rows() > 4 * self.cols + 16 {
            self.compact();
        }
    }

    /// Replace the rows by a basis of their span.
    pub fn compact(&mut self) {
        let Rref { matrix, pivots } = self.rows.rref();
        let kept: Vec<FpVector> = (0..pivots.len()).map(|r| matrix.row(r).to_vec()).collect();
        self.rows = FpMatrix::from_vectors(self.field, self.cols, &kept);
    }

    pub fn rank(&self) -> usize {
        self.rows.rank()
    }

    pub fn kernel_basis(&self) -> Vec<FpVector> {
        self.rows.kernel_basis()
    }

    pub fn matrix(&self) -> &FpMatrix {
        &self.rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn construction_rejects_composites() {
        assert_eq!(PrimeField::new(4), Err(Error::NotPrime(4)));
        assert_eq!(PrimeField::new(1), Err(Error::NotPrime(1)));
        assert_eq!(PrimeField::new(0), Err(Error::NotPrime(0)));
        assert!(PrimeField::new(2).is_ok());
        assert!(PrimeField::new(7919).is_ok());
    }

    fn inv_by_search(f: PrimeField, a: u32) -> u32 {
        (1..f.p()).find(|&b| f.mul(a, b) == 1).unwrap()
    }

    #[test]
    fn inverses() {
        assert_eq!(gf(5).inv(2), Ok(3));
        assert_eq!(gf(3).inv(1), Ok(1));
        assert_eq!(gf(7).inv(3), Ok(5));
        assert_eq!(gf(7).inv(0), Err(Error::DivisionByZero { p: 7 }));
        for p in [2, 3, 5, 7, 11, 13] {
            let f = gf(p);
            for a in 1..p {
                assert_eq!(f.inv(a).unwrap(), inv_by_search(f, a));
            }
        }
    }

    #[test]
    fn kernel_examples() {
        let f3 = gf(3);
        let z = FpMatrix::zeros(f3, 2, 3);
        assert_eq!(z.kernel_basis().len(), 3);
        assert!(FpMatrix::identity(gf(5), 3).kernel_basis().is_empty());

        let m = FpMatrix::from_rows(f3, &[vec![1, 2]]).unwrap();
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        // exhaustive: the nonzero solutions of v1 + 2 v2 = 0 are (1,1) and (2,2)
        let sols: Vec<_> = f3
            .all_vectors(2)
            .filter(|v| v.iter().any(|&a| a != 0) && m.mul_vec(v) == vec![0])
            .collect();
        assert_eq!(sols, vec![vec![1, 1], vec![2, 2]]);
        assert!(sols.contains(&k[0]));
    }

    #[test]
    fn image_dim_examples() {
        let f5 = gf(5);
        assert_eq!(FpMatrix::zeros(f5, 3, 4).image_dim(), 0);
        assert_eq!(FpMatrix::identity(f5, 4).image_dim(), 4);
        let m = FpMatrix::from_rows(f5, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(m.image_dim(), 1);
    }

    #[test]
    fn solve_examples() {
        let f5 = gf(5);
        let id = FpMatrix::identity(f5, 3);
        assert_eq!(id.solve(&[4, 0, 2]), Solution::Unique(vec![4, 0, 2]));
        let z = FpMatrix::zeros(f5, 2, 2);
        assert_eq!(z.solve(&[1, 0]), Solution::Inconsistent);
        let m = FpMatrix::from_rows(f5, &[vec![2]]).unwrap();
        assert_eq!(m.solve(&[1]), Solution::Unique(vec![3]));
    }

    #[test]
    fn det_and_inverse() {
        let f7 = gf(7);
        let m = FpMatrix::from_rows(f7, &[vec![1, 2], vec![3, 4]]).unwrap();
        assert_eq!(m.det(), f7.reduce(-2));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), FpMatrix::identity(f7, 2));
        let s = FpMatrix::from_rows(f7, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(s.det(), 0);
        assert!(s.inverse().is_none());
    }

    #[test]
    fn all_vectors_enumerates_in_order() {
        let v: Vec<_> = gf(2).all_vectors(2).collect();
        assert_eq!(v, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(gf(3).all_vectors(3).count(), 27);
        assert_eq!(gf(3).all_vectors(0).count(), 1);
    }

    #[test]
    #[should_panic(expected = "mixing matrices")]
    fn mixed_fields_panic() {
        let a = FpMatrix::identity(gf(3), 2);
        let b = FpMatrix::identity(gf(5), 2);
        let _ = a.mul(&b);
    }
}
