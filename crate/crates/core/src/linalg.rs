//! Dense exact linear algebra over ℚ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<Scalar>>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![vec![Scalar::zero(); cols]; rows] }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        Matrix { rows: rows.len(), cols, data: rows }
    }

    /// Builds a matrix from its columns; `rows` fixes the height when there are none.
    pub fn from_columns(rows: usize, columns: &[Vec<Scalar>]) -> Self {
        let mut m = Matrix::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column height");
            for (i, v) in c.iter().enumerate() {
                m.data[i][j] = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i][j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().flatten().all(|v| v.is_zero())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k][j];
                    if !b.is_zero() {
                        out.data[i][j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        self.data.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn permute_columns(&self, perm: &[usize]) -> Matrix {
        let data = self.data.iter().map(|r| perm.iter().map(|&j| r[j].clone()).collect()).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn permute_rows(&self, perm: &[usize]) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: perm.iter().map(|&i| self.data[i].clone()).collect() }
    }

    /// Rank by fraction-free (Bareiss) elimination over ℤ after clearing
    /// denominators row by row.
    pub fn rank(&self) -> usize {
        let mut a: Vec<Vec<BigInt>> = self
            .data
            .iter()
            .map(|r| {
                let l = r.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
                r.iter().map(|v| v.numer() * (&l / v.denom())).collect()
            })
            .collect();
        let (m, n) = (self.rows, self.cols);
        let mut prev = BigInt::one();
        let mut r = 0;
        for c in 0..n {
            if r == m {
                break;
            }
            let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else { continue };
            a.swap(r, p);
            for i in r + 1..m {
                for j in c + 1..n {
                    let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                    a[i][j] = v / &prev;
                }
                a[i][c] = BigInt::zero();
            }
            prev = a[r][c].clone();
            r += 1;
        }
        r
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut a = self.data.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !a[i][c].is_zero()) else { continue };
            a.swap(r, p);
            let inv = Scalar::one() / &a[r][c];
            for v in a[r].iter_mut() {
                *v = &*v * &inv;
            }
            for i in 0..self.rows {
                if i != r && !a[i][c].is_zero() {
                    let f = a[i][c].clone();
                    let pivot_row = a[r].clone();
                    for (x, p) in a[i].iter_mut().zip(&pivot_row).skip(c) {
                        *x -= &f * p;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (Matrix { rows: self.rows, cols: self.cols, data: a }, pivots)
    }

    /// Some `x` with `A x = b`, or `None` if the system is inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows, "right-hand side height");
        let aug = Matrix::from_rows(self.data.iter().zip(b).map(|(r, v)| r.iter().cloned().chain([v.clone()]).collect()).collect());
        let aug = if self.rows == 0 { Matrix { rows: 0, cols: self.cols + 1, data: vec![] } } else { aug };
        let (red, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = red.data[i][self.cols].clone();
        }
        Some(x)
    }

    /// A basis of the null space.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let (red, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Scalar::zero(); self.cols];
                v[f] = Scalar::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -red.data[i][f].clone();
                }
                v
            })
            .collect()
    }
}
