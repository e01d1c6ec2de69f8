//! Dense matrices over a prime field `F_p`.

use std::fmt;

use thiserror::Error;

use crate::decision::is_prime;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("{op}: incompatible shapes {left:?} and {right:?}")]
    Dimension {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("moduli {0} and {1} differ")]
    Modulus(u64, u64),
    #[error("expected {expected} entries, got {got}")]
    Length { expected: usize, got: usize },
}

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

/// Inverse of a nonzero residue modulo a prime.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "zero has no inverse");
    pow_mod(a, p - 2, p)
}

/// Row-major matrix with entries in `[0, p)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatrixFp {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl fmt::Debug for MatrixFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}{:?}", self.p, self.to_rows())
    }
}

impl MatrixFp {
    pub fn new(p: u64, rows: usize, cols: usize, data: Vec<u64>) -> Result<Self, LinalgError> {
        if !is_prime(p) {
            return Err(LinalgError::NotPrime(p));
        }
        if data.len() != rows * cols {
            return Err(LinalgError::Length {
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(MatrixFp {
            p,
            rows,
            cols,
            data: data.into_iter().map(|x| x % p).collect(),
        })
    }

    /// Signed entries, reduced into `[0, p)`.
    pub fn from_rows(p: u64, rows: &[Vec<i64>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(LinalgError::Length {
                expected: cols,
                got: r.len(),
            });
        }
        let data = rows
            .iter()
            .flatten()
            .map(|&x| x.rem_euclid(p as i64) as u64)
            .collect();
        Self::new(p, rows.len(), cols, data)
    }

    /// Matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_columns(p: u64, rows: usize, columns: &[Vec<u64>]) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(p, rows, columns.len())?;
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(LinalgError::Length {
                    expected: rows,
                    got: c.len(),
                });
            }
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        Ok(m)
    }

    pub fn zeros(p: u64, rows: usize, cols: usize) -> Result<Self, LinalgError> {
        Self::new(p, rows, cols, vec![0; rows * cols])
    }

    pub fn identity(p: u64, n: usize) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(p, n, n)?;
        for i in 0..n {
            m.set(i, i, 1);
        }
        Ok(m)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: u64) {
        self.data[i * self.cols + j] = x % self.p;
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u64>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn same_field(&self, other: &Self) -> Result<(), LinalgError> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(LinalgError::Modulus(self.p, other.p))
        }
    }

    fn mismatch(&self, op: &'static str, other: &Self) -> LinalgError {
        LinalgError::Dimension {
            op,
            left: self.shape(),
            right: other.shape(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinalgError> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return Err(self.mismatch("mul", other));
        }
        let p = self.p;
        let mut data = vec![0u64; self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let cell = &mut data[i * other.cols + j];
                    *cell = (*cell + mul_mod(a, other.get(k, j), p)) % p;
                }
            }
        }
        Ok(MatrixFp {
            p,
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    pub fn mul_vec(&self, v: &[u64]) -> Result<Vec<u64>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::Length {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).fold(0, |acc, j| (acc + mul_mod(self.get(i, j), v[j], self.p)) % self.p))
            .collect())
    }

    fn zip_with(&self, other: &Self, op: &'static str, f: impl Fn(u64, u64) -> u64) -> Result<Self, LinalgError> {
        self.same_field(other)?;
        if self.shape() != other.shape() {
            return Err(self.mismatch(op, other));
        }
        Ok(MatrixFp {
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
            ..self.clone()
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinalgError> {
        let p = self.p;
        self.zip_with(other, "add", |a, b| (a + b) % p)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LinalgError> {
        let p = self.p;
        self.zip_with(other, "sub", |a, b| (a + p - b) % p)
    }

    pub fn scale(&self, k: u64) -> Self {
        let k = k % self.p;
        MatrixFp {
            data: self.data.iter().map(|&a| mul_mod(a, k, self.p)).collect(),
            ..self.clone()
        }
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j));
            }
        }
        MatrixFp {
            p: self.p,
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn hstack(&self, other: &Self) -> Result<Self, LinalgError> {
        self.same_field(other)?;
        if self.rows != other.rows {
            return Err(self.mismatch("hstack", other));
        }
        let mut data = Vec::with_capacity(self.data.len() + other.data.len());
        for i in 0..self.rows {
            data.extend_from_slice(&self.data[i * self.cols..(i + 1) * self.cols]);
            data.extend_from_slice(&other.data[i * other.cols..(i + 1) * other.cols]);
        }
        Ok(MatrixFp {
            p: self.p,
            rows: self.rows,
            cols: self.cols + other.cols,
            data,
        })
    }

    pub fn vstack(&self, other: &Self) -> Result<Self, LinalgError> {
        self.same_field(other)?;
        if self.cols != other.cols {
            return Err(self.mismatch("vstack", other));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(MatrixFp {
            p: self.p,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Rows `start..end`.
    pub fn row_block(&self, start: usize, end: usize) -> Self {
        MatrixFp {
            p: self.p,
            rows: end - start,
            cols: self.cols,
            data: self.data[start * self.cols..end * self.cols].to_vec(),
        }
    }

    /// Columns `start..end`.
    pub fn col_block(&self, start: usize, end: usize) -> Self {
        let mut data = Vec::with_capacity(self.rows * (end - start));
        for i in 0..self.rows {
            data.extend_from_slice(&self.data[i * self.cols + start..i * self.cols + end]);
        }
        MatrixFp {
            p: self.p,
            rows: self.rows,
            cols: end - start,
            data,
        }
    }

    /// Reduced row-echelon form and its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    m.data.swap(pr * m.cols + j, r * m.cols + j);
                }
            }
            let inv = inv_mod(m.get(r, c), p);
            for j in c..m.cols {
                let v = mul_mod(m.get(r, j), inv, p);
                m.set(r, j, v);
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
                    let v = (m.get(i, j) + p - mul_mod(factor, m.get(r, j), p)) % p;
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : self·x = 0}` as the columns of a `cols × k` matrix, one
    /// vector per free column with a 1 in that position.
    pub fn nullspace(&self) -> Self {
        let p = self.p;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = MatrixFp {
            p,
            rows: self.cols,
            cols: free.len(),
            data: vec![0; self.cols * free.len()],
        };
        for (k, &fc) in free.iter().enumerate() {
            basis.set(fc, k, 1);
            for (row, &pc) in pivots.iter().enumerate() {
                basis.set(pc, k, (p - r.get(row, fc)) % p);
            }
        }
        basis
    }

    /// Basis of the column space: the pivot columns of `self`.
    pub fn image(&self) -> Self {
        let (_, pivots) = self.rref();
        let cols: Vec<Vec<u64>> = pivots.iter().map(|&c| self.column(c)).collect();
        Self::from_columns(self.p, self.rows, &cols).expect("same field")
    }

    /// Some `x` with `self·x = b`, if one exists.
    pub fn solve(&self, b: &[u64]) -> Result<Option<Vec<u64>>, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::Length {
                expected: self.rows,
                got: b.len(),
            });
        }
        let rhs = Self::from_columns(self.p, self.rows, &[b.to_vec()])?;
        let (r, pivots) = self.hstack(&rhs)?.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![0; self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(row, self.cols);
        }
        Ok(Some(x))
    }

    /// Solves `self·X = B` column by column.
    pub fn solve_matrix(&self, b: &Self) -> Result<Option<Self>, LinalgError> {
        let mut cols = Vec::with_capacity(b.cols);
        for c in b.columns() {
            match self.solve(&c)? {
                Some(x) => cols.push(x),
                None => return Ok(None),
            }
        }
        Self::from_columns(self.p, self.cols, &cols).map(Some)
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let id = Self::identity(self.p, n).expect("prime");
        let (r, pivots) = self.hstack(&id).expect("same rows").rref();
        if n > 0 && pivots[n - 1] != n - 1 {
            return None;
        }
        Some(r.col_block(n, 2 * n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }
}
