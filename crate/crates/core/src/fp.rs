//! Exact arithmetic and dense linear algebra over a prime field GF(p).
//!
//! Residues are stored canonically in `[0, p)`. The modulus is carried by
//! every value; combining values with different moduli is a programming
//! error and panics at the operation boundary.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FpError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("singular matrix: rank {rank} < size {size}")]
    SingularMatrix { size: usize, rank: usize },
}

/// A validated prime modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u32);

impl Prime {
    pub const FIVE: Prime = Prime(5);

    pub fn new(p: u64) -> Result<Self, FpError> {
        if p < 2 || p > u32::MAX as u64 {
            return Err(FpError::NotPrime(p));
        }
        let mut d = 2u64;
        while d * d <= p {
            if p.is_multiple_of(d) {
                return Err(FpError::NotPrime(p));
            }
            d += 1;
        }
        Ok(Prime(p as u32))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// Canonical residue of an arbitrary integer.
    #[inline]
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.0 as u64 - b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    pub fn pow(self, a: u32, mut e: u64) -> u32 {
        let mut base = a % self.0;
        let mut acc = 1 % self.0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(
            !a.is_multiple_of(self.0),
            "inverse of zero in GF({})",
            self.0
        );
        self.pow(a, self.0 as u64 - 2)
    }

    /// Representative in `(-p/2, p/2]`.
    #[inline]
    pub fn signed_lift(self, a: u32) -> i64 {
        let a = a as i64;
        let p = self.0 as i64;
        if 2 * a > p {
            a - p
        } else {
            a
        }
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A single element of GF(p).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpScalar {
    value: u32,
    p: Prime,
}

impl FpScalar {
    pub fn new(p: Prime, x: i64) -> Self {
        FpScalar {
            value: p.reduce(x),
            p,
        }
    }

    pub fn zero(p: Prime) -> Self {
        FpScalar { value: 0, p }
    }

    pub fn one(p: Prime) -> Self {
        FpScalar::new(p, 1)
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> Prime {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn signed(self) -> i64 {
        self.p.signed_lift(self.value)
    }

    pub fn inv(self) -> Option<Self> {
        (self.value != 0).then(|| FpScalar {
            value: self.p.inv(self.value),
            p: self.p,
        })
    }

    pub fn pow(self, e: u64) -> Self {
        FpScalar {
            value: self.p.pow(self.value, e),
            p: self.p,
        }
    }

    #[inline]
    fn check(self, other: Self) -> Prime {
        assert_eq!(self.p, other.p, "mixing residues of different moduli");
        self.p
    }
}

impl Add for FpScalar {
    type Output = FpScalar;
    fn add(self, rhs: Self) -> Self {
        let p = self.check(rhs);
        FpScalar {
            value: p.add(self.value, rhs.value),
            p,
        }
    }
}

impl Sub for FpScalar {
    type Output = FpScalar;
    fn sub(self, rhs: Self) -> Self {
        let p = self.check(rhs);
        FpScalar {
            value: p.sub(self.value, rhs.value),
            p,
        }
    }
}

impl Mul for FpScalar {
    type Output = FpScalar;
    fn mul(self, rhs: Self) -> Self {
        let p = self.check(rhs);
        FpScalar {
            value: p.mul(self.value, rhs.value),
            p,
        }
    }
}

impl Neg for FpScalar {
    type Output = FpScalar;
    fn neg(self) -> Self {
        FpScalar {
            value: self.p.neg(self.value),
            p: self.p,
        }
    }
}

impl fmt::Display for FpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Dense row-major matrix over GF(p).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    p: Prime,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FpMatrix {
    pub fn zeros(p: Prime, rows: usize, cols: usize) -> Self {
        FpMatrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: Prime, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % p.get();
        }
        m
    }

    pub fn from_fn(
        p: Prime,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> i64,
    ) -> Self {
        let mut m = Self::zeros(p, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = p.reduce(f(i, j));
            }
        }
        m
    }

    /// Builds a matrix from integer rows (any representatives); all rows
    /// must have the same length.
    pub fn from_rows<R: AsRef<[i64]>>(p: Prime, rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        assert!(
            rows.iter().all(|r| r.as_ref().len() == cols),
            "ragged matrix rows"
        );
        Self::from_fn(p, rows.len(), cols, |i, j| rows[i].as_ref()[j])
    }

    /// Builds a matrix whose columns are the given residue vectors.
    pub fn from_columns(p: Prime, rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(p, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, &x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x % p.get();
            }
        }
        m
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.p
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn scalar(&self, i: usize, j: usize) -> FpScalar {
        FpScalar {
            value: self.get(i, j),
            p: self.p,
        }
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: u32) {
        self.data[i * self.cols + j] = x % self.p.get();
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Rows as signed lifts in `(-p/2, p/2]`.
    pub fn signed_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|&x| self.p.signed_lift(x)).collect())
            .collect()
    }

    pub fn residue_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn mul(&self, rhs: &FpMatrix) -> FpMatrix {
        assert_eq!(self.p, rhs.p, "mixing matrices of different moduli");
        assert_eq!(self.cols, rhs.rows, "incompatible shapes for product");
        let p = self.p;
        let mut out = FpMatrix::zeros(p, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let idx = i * rhs.cols + j;
                    out.data[idx] = p.add(out.data[idx], p.mul(a, rhs.get(k, j)));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len(), "incompatible vector length");
        let p = self.p;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| p.add(acc, p.mul(a, b)))
            })
            .collect()
    }

    /// Reduced row echelon form. Pivots are chosen by scanning columns left
    /// to right and taking the first nonzero entry at or below the current
    /// pivot row.
    pub fn rref(&self) -> Rref {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(src) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if src != r {
                for j in 0..m.cols {
                    m.data.swap(src * m.cols + j, r * m.cols + j);
                }
            }
            let inv = p.inv(m.get(r, c));
            for j in c..m.cols {
                let x = m.get(r, j);
                m.data[r * m.cols + j] = p.mul(x, inv);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor == 0 {
                    continue;
                }
                for j in c..m.cols {
                    let x = p.sub(m.get(i, j), p.mul(factor, m.get(r, j)));
                    m.data[i * m.cols + j] = x;
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { reduced: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank()
    }

    pub fn kernel_basis(&self) -> Vec<Vec<u32>> {
        self.rref().kernel_basis()
    }

    pub fn invert(&self) -> Result<FpMatrix, FpError> {
        if !self.is_square() {
            return Err(FpError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut aug = FpMatrix::zeros(self.p, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.data[i * 2 * n + j] = self.get(i, j);
            }
            aug.data[i * 2 * n + n + i] = 1 % self.p.get();
        }
        let rref = aug.rref();
        let rank = rref.pivots.iter().take_while(|&&c| c < n).count();
        if rank < n {
            return Err(FpError::SingularMatrix { size: n, rank });
        }
        Ok(FpMatrix::from_fn(self.p, n, n, |i, j| {
            rref.reduced.get(i, n + j) as i64
        }))
    }

    /// A solution of `self * x = b`, or `None` when the system is
    /// inconsistent.
    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let mut aug = FpMatrix::zeros(self.p, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.data[i * (self.cols + 1) + j] = self.get(i, j);
            }
            aug.data[i * (self.cols + 1) + self.cols] = b[i] % self.p.get();
        }
        let rref = aug.rref();
        if rref.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (r, &c) in rref.pivots.iter().enumerate() {
            x[c] = rref.reduced.get(r, self.cols);
        }
        Some(x)
    }
}

impl fmt::Display for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .data
            .iter()
            .map(|x| x.to_string().len())
            .max()
            .unwrap_or(1);
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| format!("{x:>width$}")).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Result of Gaussian elimination.
#[derive(Debug, Clone)]
pub struct Rref {
    pub reduced: FpMatrix,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Basis of the right null space, one vector per free column, in
    /// increasing free-column order.
    pub fn kernel_basis(&self) -> Vec<Vec<u32>> {
        let m = &self.reduced;
        let p = m.p;
        let mut is_pivot = vec![false; m.cols];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        (0..m.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0; m.cols];
                v[free] = 1 % p.get();
                for (r, &c) in self.pivots.iter().enumerate() {
                    v[c] = p.neg(m.get(r, free));
                }
                v
            })
            .collect()
    }

    /// Coordinates of column `j` of the original matrix with respect to the
    /// pivot columns.
    pub fn pivot_coordinates(&self, j: usize) -> Vec<u32> {
        (0..self.rank()).map(|r| self.reduced.get(r, j)).collect()
    }
}

/// Adds `scale * src` into `dst`.
pub fn axpy(p: Prime, dst: &mut [u32], scale: u32, src: &[u32]) {
    if scale == 0 {
        return;
    }
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = p.add(*d, p.mul(scale, s));
    }
}
