use num_integer::Integer;

use super::ExactMatrix;

/// Dense matrix over the two-element field, each row packed into `u64` words.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    words: Vec<u64>,
}

impl std::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let s: String = (0..self.cols).map(|c| if self.get(r, c) { '1' } else { '.' }).collect();
            writeln!(f, "  {s}")?;
        }
        Ok(())
    }
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = cols.div_ceil(64);
        BitMatrix {
            rows,
            cols,
            stride,
            words: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Reduction mod 2 of an integer matrix.
    pub fn from_exact(a: &ExactMatrix) -> Self {
        let mut m = BitMatrix::zeros(a.rows(), a.cols());
        for (r, c, v) in a.entries() {
            if v.is_odd() {
                m.set(r, c, true);
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

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.words[r * self.stride + c / 64] >> (c % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        let w = &mut self.words[r * self.stride + c / 64];
        if value {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    #[inline]
    pub fn flip(&mut self, r: usize, c: usize) {
        self.words[r * self.stride + c / 64] ^= 1 << (c % 64);
    }

    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.words[r * self.stride..(r + 1) * self.stride]
    }

    fn xor_row(&mut self, dst: usize, src: usize) {
        let s = self.stride;
        if dst == src || s == 0 {
            return;
        }
        let (d, sr) = if dst < src {
            let (lo, hi) = self.words.split_at_mut(src * s);
            (&mut lo[dst * s..dst * s + s], &hi[..s])
        } else {
            let (lo, hi) = self.words.split_at_mut(dst * s);
            (&mut hi[..s], &lo[src * s..src * s + s])
        };
        for (a, b) in d.iter_mut().zip(sr) {
            *a ^= *b;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.stride {
            self.words.swap(a * self.stride + k, b * self.stride + k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                if self.get(r, k) {
                    let s = out.stride;
                    for w in 0..s {
                        out.words[r * s + w] ^= other.words[k * s + w];
                    }
                }
            }
        }
        out
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c)) else { continue };
            self.swap_rows(r, p);
            for i in 0..self.rows {
                if i != r && self.get(i, c) {
                    self.xor_row(i, r);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Rank by forward elimination only.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| m.get(i, c)) else { continue };
            m.swap_rows(r, p);
            for i in r + 1..m.rows {
                if m.get(i, c) {
                    m.xor_row(i, r);
                }
            }
            r += 1;
        }
        r
    }

    /// Basis of the null space `{x : A x = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<bool>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![false; self.cols];
                v[free] = true;
                for (row, &p) in pivots.iter().enumerate() {
                    if m.get(row, free) {
                        v[p] = true;
                    }
                }
                v
            })
            .collect()
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(height: usize, columns: &[Vec<bool>]) -> BitMatrix {
        let mut m = BitMatrix::zeros(height, columns.len());
        for (c, col) in columns.iter().enumerate() {
            for (r, &b) in col.iter().enumerate() {
                if b {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    /// Some solution of `A x = b`, if one exists.
    pub fn solve(&self, b: &[bool]) -> Option<Vec<bool>> {
        assert_eq!(b.len(), self.rows, "right-hand side length");
        let mut aug = BitMatrix::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    aug.set(r, c, true);
                }
            }
            if b[r] {
                aug.set(r, self.cols, true);
            }
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![false; self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = aug.get(row, self.cols);
        }
        Some(x)
    }

    pub fn mul_vec(&self, x: &[bool]) -> Vec<bool> {
        (0..self.rows)
            .map(|r| (0..self.cols).filter(|&c| x[c] && self.get(r, c)).count() % 2 == 1)
            .collect()
    }
}

/// Rank over the two-element field of an integer matrix.
pub fn rank_mod2(a: &ExactMatrix) -> usize {
    if a.is_zero() {
        return 0;
    }
    BitMatrix::from_exact(a).rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_reduces_mod_two() {
        let a = ExactMatrix::from_rows(&[&[2, 4], &[4, 8]]);
        assert_eq!(rank_mod2(&a), 0);
        let b = ExactMatrix::from_rows(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
        assert_eq!(rank_mod2(&b), 2);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let b = BitMatrix::from_exact(&ExactMatrix::from_rows(&[&[1, 1, 0, 1], &[0, 1, 1, 1]]));
        let k = b.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(b.mul_vec(v).iter().all(|x| !x));
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = BitMatrix::from_exact(&ExactMatrix::from_rows(&[&[1, 1], &[1, 1]]));
        assert!(a.solve(&[true, false]).is_none());
        let x = a.solve(&[true, true]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![true, true]);
    }

    #[test]
    fn wide_rows_span_words() {
        let mut m = BitMatrix::zeros(3, 130);
        m.set(0, 129, true);
        m.set(1, 129, true);
        m.set(1, 64, true);
        m.set(2, 0, true);
        assert_eq!(m.rank(), 3);
        assert_eq!(m.transpose().rank(), 3);
    }
}
