//! Prime-field arithmetic and dense exact linear algebra.
//!
//! Every rank and kernel in the crate bottoms out here. Elimination keeps a
//! `u64` working copy of the matrix and defers the modular reduction of row
//! updates: a row update adds `c * pivot[k]` with both factors below `p`, so a
//! row can absorb `(2^64 - p) / (p - 1)^2` updates before it must be reduced.
//! For the default prime that bound is never reached, which leaves the inner
//! loop as a plain multiply-add.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default modulus: large enough that random points behave generically,
/// small enough that products fit comfortably in a machine word.
pub const DEFAULT_PRIME: u32 = 31991;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct FieldSpec {
    prime: u32,
}

impl FieldSpec {
    /// Accepts odd primes below 2^31; characteristic 2 is rejected.
    pub fn new(prime: u64) -> Result<Self> {
        if prime == 2 || prime >= 1 << 31 {
            return Err(Error::UnsupportedPrime(prime));
        }
        if !is_prime(prime) {
            return Err(Error::NotPrime(prime));
        }
        Ok(FieldSpec {
            prime: prime as u32,
        })
    }

    pub fn prime(self) -> u32 {
        self.prime
    }

    /// Reduces an arbitrary integer into `[0, p)`.
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.prime as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.prime as u64) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.prime as u64 - b as u64) % self.prime as u64) as u32
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.prime - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.prime as u64) as u32
    }

    pub fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1u32;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(
            !a.is_multiple_of(self.prime),
            "inverse of zero in GF({})",
            self.prime
        );
        self.pow(a, self.prime as u64 - 2)
    }
}

impl Default for FieldSpec {
    fn default() -> Self {
        FieldSpec {
            prime: DEFAULT_PRIME,
        }
    }
}

impl TryFrom<u64> for FieldSpec {
    type Error = Error;
    fn try_from(p: u64) -> Result<Self> {
        FieldSpec::new(p)
    }
}

impl From<FieldSpec> for u64 {
    fn from(f: FieldSpec) -> u64 {
        f.prime as u64
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Dense row-major matrix over GF(p).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

/// Reduced row echelon form: the nonzero rows and the pivot column of each.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub cols: usize,
    pub rows: Vec<Vec<u32>>,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from row-major entries, reducing each mod p.
    pub fn from_entries(field: FieldSpec, rows: usize, cols: usize, entries: Vec<u32>) -> Self {
        assert_eq!(
            entries.len(),
            rows * cols,
            "entry count must be rows * cols"
        );
        let p = field.prime();
        let entries = entries.into_iter().map(|x| x % p).collect();
        Matrix {
            field,
            rows,
            cols,
            entries,
        }
    }

    pub fn from_rows(field: FieldSpec, cols: usize, rows: &[Vec<u32>]) -> Self {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            entries.extend_from_slice(r);
        }
        Matrix::from_entries(field, rows.len(), cols, entries)
    }

    /// The matrix whose columns are the given vectors.
    pub fn from_columns(field: FieldSpec, rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Matrix::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x % field.prime());
            }
        }
        m
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: u32) {
        debug_assert!(x < self.field.prime());
        self.entries[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.entries[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let p = self.field.prime() as u64;
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        let mut acc = vec![0u64; other.cols];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|x| *x = 0);
            for k in 0..self.cols {
                let a = self.get(i, k) as u64;
                if a == 0 {
                    continue;
                }
                for (slot, &b) in acc.iter_mut().zip(other.row(k)) {
                    *slot = (*slot + a * b as u64) % p;
                }
            }
            for (j, &x) in acc.iter().enumerate() {
                out.entries[i * other.cols + j] = x as u32;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        let p = self.field.prime() as u64;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0u64, |s, (&a, &b)| (s + a as u64 * b as u64) % p) as u32
            })
            .collect()
    }

    /// Rank over GF(p).
    pub fn rank(&self) -> usize {
        self.eliminate(false).1.len()
    }

    /// Reduced row echelon form.
    pub fn rref(&self) -> Echelon {
        let (data, pivots) = self.eliminate(true);
        let rows = data
            .chunks(self.cols.max(1))
            .take(pivots.len())
            .map(<[u32]>::to_vec)
            .collect();
        Echelon {
            cols: self.cols,
            rows,
            pivots,
        }
    }

    /// Basis of the right null space, one vector per non-pivot column in
    /// increasing column order. The vector for free column `f` has a 1 in
    /// position `f` and 0 in every other free position.
    pub fn kernel_basis(&self) -> Vec<Vec<u32>> {
        self.rref().kernel_basis(self.field)
    }

    /// Some solution of `self * x = b`, or `None` if the system is inconsistent.
    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(self.field, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, b[i] % self.field.prime());
        }
        let ech = aug.rref();
        if ech.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0u32; self.cols];
        for (row, &c) in ech.rows.iter().zip(&ech.pivots) {
            x[c] = row[self.cols];
        }
        Some(x)
    }

    /// Gaussian elimination with lazy reduction. Returns the first `rank`
    /// rows of the (reduced, when `full` is set) echelon form, flattened, and
    /// the pivot columns.
    fn eliminate(&self, full: bool) -> (Vec<u32>, Vec<usize>) {
        let (m, n) = (self.rows, self.cols);
        let p = self.field.prime() as u64;
        let limit = ((u64::MAX - p) / ((p - 1) * (p - 1))).max(1);
        let mut work: Vec<u64> = self.entries.iter().map(|&x| x as u64).collect();
        let mut pending = vec![0u64; m];
        let mut pivot_row = vec![0u32; n];
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..n {
            if r == m {
                break;
            }
            let found = (r..m).find(|&i| {
                let v = work[i * n + c] % p;
                work[i * n + c] = v;
                v != 0
            });
            let Some(i) = found else { continue };
            if i != r {
                for k in 0..n {
                    work.swap(i * n + k, r * n + k);
                }
                pending.swap(i, r);
            }
            let inv = self.field.inv(work[r * n + c] as u32) as u64;
            for k in c..n {
                let v = work[r * n + k] % p * inv % p;
                work[r * n + k] = v;
                pivot_row[k] = v as u32;
            }
            pending[r] = 0;
            let start = if full { 0 } else { r + 1 };
            for i in start..m {
                if i == r {
                    continue;
                }
                let row = &mut work[i * n..(i + 1) * n];
                let f = row[c] % p;
                if f == 0 {
                    row[c] = 0;
                    continue;
                }
                let mult = (p - f) as u32;
                for (x, &y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                    *x += mult as u64 * y as u64;
                }
                row[c] = 0;
                pending[i] += 1;
                if pending[i] >= limit {
                    row[c..].iter_mut().for_each(|x| *x %= p);
                    pending[i] = 0;
                }
            }
            pivots.push(c);
            r += 1;
        }
        let data = work[..r * n].iter().map(|&x| (x % p) as u32).collect();
        (data, pivots)
    }
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Free (non-pivot) columns in increasing order.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.cols];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        (0..self.cols).filter(|&c| !is_pivot[c]).collect()
    }

    pub fn kernel_basis(&self, field: FieldSpec) -> Vec<Vec<u32>> {
        self.free_columns()
            .into_iter()
            .map(|f| {
                let mut v = vec![0u32; self.cols];
                v[f] = 1;
                for (row, &c) in self.rows.iter().zip(&self.pivots) {
                    v[c] = field.neg(row[f]);
                }
                v
            })
            .collect()
    }

    /// Reduces `v` modulo the row space; the result is zero exactly when `v`
    /// lies in the row space. Requires a fully reduced form.
    pub fn normal_form(&self, field: FieldSpec, v: &mut [u32]) {
        let p = field.prime() as u64;
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let f = v[c];
            if f == 0 {
                continue;
            }
            let mult = (p - f as u64) % p;
            for (x, &y) in v.iter_mut().zip(row) {
                *x = ((*x as u64 + mult * y as u64) % p) as u32;
            }
        }
    }
}
