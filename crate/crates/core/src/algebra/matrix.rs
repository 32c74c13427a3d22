use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Sparse integer matrix stored row by row; each row is sorted by column and
/// holds no zero entries.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, BigInt)>>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ExactMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i].push((i, BigInt::one()));
        }
        m
    }

    /// Sums duplicate positions and drops zeros.
    ///
    /// # Panics
    /// If an index is out of range.
    pub fn from_triplets<T: Into<BigInt>>(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, T)>,
    ) -> Self {
        let mut data: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); rows];
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "entry ({r},{c}) outside {rows}x{cols}");
            data[r].push((c, v.into()));
        }
        for row in &mut data {
            row.sort_by_key(|e| e.0);
            let mut merged: Vec<(usize, BigInt)> = Vec::with_capacity(row.len());
            for (c, v) in row.drain(..) {
                match merged.last_mut() {
                    Some((lc, lv)) if *lc == c => *lv += v,
                    _ => merged.push((c, v)),
                }
            }
            merged.retain(|e| !e.1.is_zero());
            *row = merged;
        }
        ExactMatrix { rows, cols, data }
    }

    pub fn from_dense(dense: &[Vec<BigInt>], cols: usize) -> Self {
        let data = dense
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(c, v)| (c, v.clone()))
                    .collect()
            })
            .collect();
        ExactMatrix {
            rows: dense.len(),
            cols,
            data,
        }
    }

    /// Dense constructor from small integers, row-major.
    pub fn from_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let dense: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "ragged rows");
                r.iter().map(|&v| BigInt::from(v)).collect()
            })
            .collect();
        ExactMatrix::from_dense(&dense, cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn row(&self, r: usize) -> &[(usize, BigInt)] {
        &self.data[r]
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        match self.data[r].binary_search_by_key(&c, |e| e.0) {
            Ok(i) => self.data[r][i].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    /// Iterates `(row, col, value)` over stored entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut d = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (r, c, v) in self.entries() {
            d[r][c] = v.clone();
        }
        d
    }

    pub fn transpose(&self) -> Self {
        let mut data: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); self.cols];
        for (r, c, v) in self.entries() {
            data[c].push((r, v.clone()));
        }
        ExactMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Matrix product `self · other`.
    ///
    /// # Panics
    /// If the inner dimensions differ.
    pub fn mul(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut acc: Vec<BigInt> = vec![BigInt::zero(); other.cols];
        let mut touched: Vec<usize> = Vec::new();
        let mut data = Vec::with_capacity(self.rows);
        for row in &self.data {
            for (k, a) in row {
                for (c, b) in &other.data[*k] {
                    if acc[*c].is_zero() {
                        touched.push(*c);
                    }
                    acc[*c] += a * b;
                }
            }
            touched.sort_unstable();
            touched.dedup();
            let mut out = Vec::with_capacity(touched.len());
            for &c in &touched {
                let v = std::mem::take(&mut acc[c]);
                if !v.is_zero() {
                    out.push((c, v));
                }
            }
            touched.clear();
            data.push(out);
        }
        ExactMatrix {
            rows: self.rows,
            cols: other.cols,
            data,
        }
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.cols, "vector length differs from column count");
        self.data
            .iter()
            .map(|row| row.iter().fold(BigInt::zero(), |s, (c, v)| s + v * &x[*c]))
            .collect()
    }

    pub fn add(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shapes differ");
        let trip = self
            .entries()
            .chain(other.entries())
            .map(|(r, c, v)| (r, c, v.clone()));
        ExactMatrix::from_triplets(self.rows, self.cols, trip)
    }

    pub fn neg(&self) -> ExactMatrix {
        let data = self
            .data
            .iter()
            .map(|r| r.iter().map(|(c, v)| (*c, -v)).collect())
            .collect();
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Columns `range` as a new matrix.
    pub fn column_slice(&self, range: std::ops::Range<usize>) -> ExactMatrix {
        let width = range.len();
        let data = self
            .data
            .iter()
            .map(|r| {
                r.iter()
                    .filter(|(c, _)| range.contains(c))
                    .map(|(c, v)| (c - range.start, v.clone()))
                    .collect()
            })
            .collect();
        ExactMatrix {
            rows: self.rows,
            cols: width,
            data,
        }
    }

    /// Rows `range` as a new matrix.
    pub fn row_slice(&self, range: std::ops::Range<usize>) -> ExactMatrix {
        ExactMatrix {
            rows: range.len(),
            cols: self.cols,
            data: self.data[range].to_vec(),
        }
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn max_abs(&self) -> BigInt {
        self.entries().map(|(_, _, v)| v.abs()).max().unwrap_or_default()
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.to_dense();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        if n == 0 {
            return BigInt::one();
        }
        sign * &a[n - 1][n - 1]
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for r in self.to_dense() {
            let cells: Vec<String> = r.iter().map(|v| v.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_merge_and_drop_zeros() {
        let m = ExactMatrix::from_triplets(2, 2, [(0, 0, 1), (0, 0, -1), (1, 1, 2), (1, 1, 3)]);
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(1, 1), BigInt::from(5));
    }

    #[test]
    fn product_and_transpose() {
        let a = ExactMatrix::from_rows(&[&[1, 2], &[3, 4]]);
        let b = ExactMatrix::from_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(a.mul(&b), ExactMatrix::from_rows(&[&[2, 1], &[4, 3]]));
        assert_eq!(a.transpose(), ExactMatrix::from_rows(&[&[1, 3], &[2, 4]]));
        assert_eq!(a.determinant(), BigInt::from(-2));
    }
}
