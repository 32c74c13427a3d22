use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::ExactMatrix;

/// Smith normal form `U·A·V = D` with the inverses of both transforms.
#[derive(Debug, Clone)]
pub struct SmithForm {
    /// Nonzero diagonal entries `d₁ | d₂ | …`, all positive.
    pub diagonal: Vec<BigInt>,
    pub rows: usize,
    pub cols: usize,
    pub u: ExactMatrix,
    pub u_inv: ExactMatrix,
    pub v: ExactMatrix,
    pub v_inv: ExactMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    /// The diagonal matrix `D` with the shape of the input.
    pub fn d(&self) -> ExactMatrix {
        ExactMatrix::from_triplets(
            self.rows,
            self.cols,
            self.diagonal.iter().enumerate().map(|(i, v)| (i, i, v.clone())),
        )
    }

    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

/// Dense square transform with its inverse, updated in lockstep.
struct Transform {
    m: Vec<Vec<BigInt>>,
    inv: Vec<Vec<BigInt>>,
}

impl Transform {
    fn identity(n: usize) -> Self {
        let eye = |i: usize| -> Vec<BigInt> {
            (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()
        };
        Transform {
            m: (0..n).map(eye).collect(),
            inv: (0..n).map(eye).collect(),
        }
    }

    // Row transform `T ← E·T`, so the inverse picks up `E⁻¹` on the right.
    fn row_swap(&mut self, a: usize, b: usize) {
        self.m.swap(a, b);
        for row in &mut self.inv {
            row.swap(a, b);
        }
    }

    fn row_negate(&mut self, a: usize) {
        for v in &mut self.m[a] {
            *v = -std::mem::take(v);
        }
        for row in &mut self.inv {
            row[a] = -std::mem::take(&mut row[a]);
        }
    }

    /// `row_dst += q · row_src`.
    fn row_add(&mut self, dst: usize, src: usize, q: &BigInt) {
        let (d, s) = pair_mut(&mut self.m, dst, src);
        for (x, y) in d.iter_mut().zip(s.iter()) {
            *x += q * y;
        }
        for row in &mut self.inv {
            let t = q * &row[dst];
            row[src] -= t;
        }
    }
}

fn pair_mut<T>(v: &mut [T], a: usize, b: usize) -> (&mut T, &T) {
    assert_ne!(a, b);
    if a < b {
        let (lo, hi) = v.split_at_mut(b);
        (&mut lo[a], &hi[0])
    } else {
        let (lo, hi) = v.split_at_mut(a);
        (&mut hi[0], &lo[b])
    }
}

struct Work {
    a: Vec<Vec<BigInt>>,
    rows: usize,
    cols: usize,
    u: Option<Transform>,
    // column transform stored transposed: column ops on A are row ops on Vᵀ
    vt: Option<Transform>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            self.a.swap(i, j);
            if let Some(u) = &mut self.u {
                u.row_swap(i, j);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for row in &mut self.a {
                row.swap(i, j);
            }
            if let Some(v) = &mut self.vt {
                v.row_swap(i, j);
            }
        }
    }

    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        let (d, s) = pair_mut(&mut self.a, dst, src);
        for (x, y) in d.iter_mut().zip(s.iter()) {
            if !y.is_zero() {
                *x += q * y;
            }
        }
        if let Some(u) = &mut self.u {
            u.row_add(dst, src, q);
        }
    }

    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        for row in &mut self.a {
            if !row[src].is_zero() {
                let t = q * &row[src];
                row[dst] += t;
            }
        }
        if let Some(v) = &mut self.vt {
            v.row_add(dst, src, q);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for v in &mut self.a[i] {
            *v = -std::mem::take(v);
        }
        if let Some(u) = &mut self.u {
            u.row_negate(i);
        }
    }

    /// Smallest nonzero magnitude in the trailing block, ties by lowest (row, col).
    fn find_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let v = &self.a[i][j];
                if v.is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bi, bj)) => v.magnitude() < self.a[bi][bj].magnitude(),
                };
                if better {
                    best = Some((i, j));
                    if v.magnitude().is_one() {
                        return best;
                    }
                }
            }
        }
        best
    }

    /// Clears row and column `t` outside the pivot and enforces divisibility.
    fn reduce_at(&mut self, t: usize) {
        loop {
            let p = self.a[t][t].clone();
            let mut clean = true;
            for i in t + 1..self.rows {
                if self.a[i][t].is_zero() {
                    continue;
                }
                let q = self.a[i][t].div_floor(&p);
                if !q.is_zero() {
                    self.add_row(i, t, &-q);
                }
                if !self.a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..self.cols {
                if self.a[t][j].is_zero() {
                    continue;
                }
                let q = self.a[t][j].div_floor(&p);
                if !q.is_zero() {
                    self.add_col(j, t, &-q);
                }
                if !self.a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                // a smaller remainder sits in row or column t; make it the pivot
                let mut best = (t, t);
                for i in t + 1..self.rows {
                    if !self.a[i][t].is_zero()
                        && self.a[i][t].magnitude() < self.a[best.0][best.1].magnitude()
                    {
                        best = (i, t);
                    }
                }
                for j in t + 1..self.cols {
                    if !self.a[t][j].is_zero()
                        && self.a[t][j].magnitude() < self.a[best.0][best.1].magnitude()
                    {
                        best = (t, j);
                    }
                }
                self.swap_rows(t, best.0);
                self.swap_cols(t, best.1);
                continue;
            }
            if p.magnitude().is_one() {
                break;
            }
            let bad = (t + 1..self.rows).find(|&i| {
                (t + 1..self.cols).any(|j| !self.a[i][j].is_zero() && !self.a[i][j].is_multiple_of(&p))
            });
            match bad {
                Some(i) => self.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if self.a[t][t].is_negative() {
            self.negate_row(t);
        }
    }
}

fn run(a: &ExactMatrix, track: bool) -> (Vec<BigInt>, Option<Transform>, Option<Transform>) {
    let (rows, cols) = (a.rows(), a.cols());
    let mut w = Work {
        a: a.to_dense(),
        rows,
        cols,
        u: track.then(|| Transform::identity(rows)),
        vt: track.then(|| Transform::identity(cols)),
    };
    let mut diagonal = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((i, j)) = w.find_pivot(t) else { break };
        w.swap_rows(t, i);
        w.swap_cols(t, j);
        w.reduce_at(t);
        diagonal.push(w.a[t][t].clone());
        t += 1;
    }
    (diagonal, w.u, w.vt)
}

fn to_exact(m: Vec<Vec<BigInt>>) -> ExactMatrix {
    let n = m.len();
    ExactMatrix::from_dense(&m, n)
}

fn transpose_dense(m: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let n = m.len();
    let mut out = vec![vec![BigInt::zero(); n]; n];
    for (i, row) in m.into_iter().enumerate() {
        for (j, v) in row.into_iter().enumerate() {
            out[j][i] = v;
        }
    }
    out
}

/// Smith normal form with unimodular transforms `U`, `V` and their inverses.
pub fn smith_normal_form(a: &ExactMatrix) -> SmithForm {
    let (diagonal, u, vt) = run(a, true);
    let u = u.expect("tracked");
    let vt = vt.expect("tracked");
    SmithForm {
        diagonal,
        rows: a.rows(),
        cols: a.cols(),
        u: to_exact(u.m),
        u_inv: to_exact(u.inv),
        v: to_exact(transpose_dense(vt.m)),
        v_inv: to_exact(transpose_dense(vt.inv)),
    }
}

/// Nonzero invariant factors only, without tracking transforms.
pub fn invariant_factors(a: &ExactMatrix) -> Vec<BigInt> {
    run(a, false).0
}

/// Rank over the integers (equivalently over the rationals).
pub fn rank(a: &ExactMatrix) -> usize {
    if a.is_zero() {
        return 0;
    }
    invariant_factors(a).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &ExactMatrix) -> SmithForm {
        let s = smith_normal_form(a);
        assert_eq!(s.u.mul(a).mul(&s.v), s.d());
        assert_eq!(s.u.mul(&s.u_inv), ExactMatrix::identity(a.rows()));
        assert_eq!(s.v.mul(&s.v_inv), ExactMatrix::identity(a.cols()));
        for w in s.diagonal.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        s
    }

    #[test]
    fn identity_is_its_own_form() {
        let s = check(&ExactMatrix::identity(3));
        assert_eq!(s.diagonal, vec![BigInt::one(); 3]);
    }

    #[test]
    fn zero_matrix() {
        let s = check(&ExactMatrix::zeros(2, 3));
        assert!(s.diagonal.is_empty());
    }

    // [[2,4],[4,8]]: subtract twice row 1 from row 2, then twice column 1
    // from column 2, leaving diag(2, 0).
    #[test]
    fn rank_one_example() {
        let s = check(&ExactMatrix::from_rows(&[&[2, 4], &[4, 8]]));
        assert_eq!(s.diagonal, vec![BigInt::from(2)]);
    }

    #[test]
    fn divisibility_fix_up() {
        // diag(2, 3) has Smith form diag(1, 6)
        let s = check(&ExactMatrix::from_rows(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.diagonal, vec![BigInt::from(1), BigInt::from(6)]);
        let s = check(&ExactMatrix::from_rows(&[&[4, 0, 0], &[0, 6, 0], &[0, 0, 10]]));
        assert_eq!(s.diagonal, vec![BigInt::from(2), BigInt::from(2), BigInt::from(60)]);
    }

    #[test]
    fn empty_shapes() {
        check(&ExactMatrix::zeros(0, 3));
        check(&ExactMatrix::zeros(4, 0));
        assert_eq!(rank(&ExactMatrix::zeros(0, 0)), 0);
    }
}
