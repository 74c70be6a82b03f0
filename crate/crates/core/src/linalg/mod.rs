//! Exact dense linear algebra over the rationals.
//!
//! Elimination is fraction-free (Bareiss) on integer-scaled rows; rational
//! arithmetic only appears in the final back-substitution.

pub mod modular;

use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{check_dim, Error, Result};
use crate::poly::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Index<(usize, usize)> for Matrix {
    type Output = Rational;
    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rational {
        &mut self.data[r * self.cols + c]
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            check_dim(cols, row.len())?;
            data.extend(row);
        }
        Ok(Matrix { rows: r, cols, data })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<Rational>]) -> Result<Self> {
        let rows = cols.first().map_or(0, Vec::len);
        let mut m = Matrix::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            check_dim(rows, c.len())?;
            for (i, v) in c.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_identity(&self) -> bool {
        *self == Matrix::identity(self.rows) && self.is_square()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Rational) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        check_dim(self.rows, other.rows)?;
        check_dim(self.cols, other.cols)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        check_dim(self.cols, other.rows)?;
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        check_dim(self.cols, v.len())?;
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    /// Bilinear form `x^T M y`.
    pub fn bilinear(&self, x: &[Rational], y: &[Rational]) -> Result<Rational> {
        check_dim(self.rows, x.len())?;
        let my = self.mul_vec(y)?;
        Ok(x.iter().zip(&my).map(|(a, b)| a * b).sum())
    }

    pub fn det(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Rational::one());
        }
        let (mut rows, scales) = integer_rows(self, None);
        let echelon = bareiss(&mut rows, n);
        if echelon.pivots.len() < n {
            return Ok(Rational::zero());
        }
        // last pivot of a full Bareiss run is the determinant of the scaled
        // matrix, up to the sign of the row permutation
        let mut d = Rational::from_integer(rows[n - 1][n - 1].clone());
        if echelon.swaps % 2 == 1 {
            d = -d;
        }
        let scale: BigInt = scales.iter().product();
        Ok(d / Rational::from_integer(scale))
    }

    pub fn rank(&self) -> usize {
        let (mut rows, _) = integer_rows(self, None);
        bareiss(&mut rows, self.cols).pivots.len()
    }

    /// Basis of the right kernel `{v : M v = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        match solve_linear(self, &vec![Rational::zero(); self.rows]) {
            Ok(LinearSolution::Affine { basis, .. }) => basis,
            _ => Vec::new(),
        }
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        // Gauss-Jordan on [M | I]
        let mut a: Vec<Vec<Rational>> = self.to_rows();
        let mut inv: Vec<Vec<Rational>> = Matrix::identity(n).to_rows();
        for c in 0..n {
            let p = (c..n).find(|&r| !a[r][c].is_zero()).ok_or(Error::SingularMatrix)?;
            a.swap(c, p);
            inv.swap(c, p);
            let piv = a[c][c].clone();
            for v in a[c].iter_mut().chain(inv[c].iter_mut()) {
                *v /= &piv;
            }
            for r in 0..n {
                if r == c || a[r][c].is_zero() {
                    continue;
                }
                let f = a[r][c].clone();
                let (src_a, src_i) = (a[c].clone(), inv[c].clone());
                for (x, y) in a[r].iter_mut().zip(&src_a) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
                for (x, y) in inv[r].iter_mut().zip(&src_i) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        Matrix::from_rows(inv)
    }
}

/// Outcome of an exact linear solve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearSolution {
    Inconsistent {
        rank: usize,
    },
    Unique {
        solution: Vec<Rational>,
    },
    /// `particular + span(basis)`; the basis is non-empty.
    Affine {
        rank: usize,
        particular: Vec<Rational>,
        basis: Vec<Vec<Rational>>,
    },
}

impl LinearSolution {
    /// Rank of the coefficient matrix.
    pub fn rank(&self) -> usize {
        match self {
            LinearSolution::Inconsistent { rank } | LinearSolution::Affine { rank, .. } => *rank,
            LinearSolution::Unique { solution } => solution.len(),
        }
    }

    pub fn is_consistent(&self) -> bool {
        !matches!(self, LinearSolution::Inconsistent { .. })
    }
}

pub(crate) struct Echelon {
    pub pivots: Vec<usize>,
    pub swaps: usize,
}

/// Scales each row (and the optional right-hand side entry) by the lcm of
/// its denominators. Returns integer rows and the per-row scale factors.
fn integer_rows(m: &Matrix, rhs: Option<&[Rational]>) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
    let mut rows = Vec::with_capacity(m.rows);
    let mut scales = Vec::with_capacity(m.rows);
    for r in 0..m.rows {
        let mut entries: Vec<&Rational> = m.row(r).iter().collect();
        if let Some(b) = rhs {
            entries.push(&b[r]);
        }
        let l = entries
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        rows.push(
            entries
                .iter()
                .map(|v| v.numer() * (&l / v.denom()))
                .collect(),
        );
        scales.push(l);
    }
    (rows, scales)
}

/// Fraction-free row echelon form over the first `width` columns.
///
/// After the run, row `r < rank` holds the pivot `rows[r][pivots[r]]`;
/// entries are minors of the input, so every division is exact.
pub(crate) fn bareiss(rows: &mut [Vec<BigInt>], width: usize) -> Echelon {
    let m = rows.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut pivots = Vec::new();
    let mut swaps = 0;
    for c in 0..width {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            rows.swap(p, r);
            swaps += 1;
        }
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let piv = pivot_row[c].clone();
        for row in tail.iter_mut() {
            let lead = std::mem::take(&mut row[c]);
            for j in c + 1..row.len() {
                let v = &piv * &row[j] - &lead * &pivot_row[j];
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    Echelon { pivots, swaps }
}

/// Solves `M x = b` exactly.
pub fn solve_linear(m: &Matrix, b: &[Rational]) -> Result<LinearSolution> {
    check_dim(m.rows, b.len())?;
    let cols = m.cols;
    let (mut rows, _) = integer_rows(m, Some(b));
    let ech = bareiss(&mut rows, cols + 1);
    if ech.pivots.last() == Some(&cols) {
        return Ok(LinearSolution::Inconsistent {
            rank: ech.pivots.len() - 1,
        });
    }
    let rank = ech.pivots.len();
    let is_pivot = {
        let mut v = vec![false; cols];
        for &p in &ech.pivots {
            v[p] = true;
        }
        v
    };
    // back-substitution: fixed values for free columns, rhs column given
    let back = |rhs_col: Option<usize>, free: Option<usize>| -> Vec<Rational> {
        let mut x = vec![Rational::zero(); cols];
        if let Some(f) = free {
            x[f] = Rational::one();
        }
        for r in (0..rank).rev() {
            let pc = ech.pivots[r];
            let row = &rows[r];
            let mut acc = match rhs_col {
                Some(k) => Rational::from_integer(row[k].clone()),
                None => Rational::zero(),
            };
            for j in pc + 1..cols {
                if !row[j].is_zero() && !x[j].is_zero() {
                    acc -= Rational::from_integer(row[j].clone()) * &x[j];
                }
            }
            x[pc] = acc / Rational::from_integer(row[pc].clone());
        }
        x
    };
    let particular = back(Some(cols), None);
    if rank == cols {
        return Ok(LinearSolution::Unique {
            solution: particular,
        });
    }
    let basis = (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|c| back(None, Some(c)))
        .collect();
    Ok(LinearSolution::Affine {
        rank,
        particular,
        basis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{point, rat, ratio};
    use proptest::prelude::*;

    fn mat(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| point(r)).collect()).unwrap()
    }

    #[test]
    fn identity_system_is_unique() {
        let b = point(&[3, -1, 7]);
        assert_eq!(
            solve_linear(&Matrix::identity(3), &b).unwrap(),
            LinearSolution::Unique { solution: b }
        );
    }

    #[test]
    fn zero_matrix_with_nonzero_rhs_is_inconsistent() {
        let s = solve_linear(&Matrix::zeros(2, 2), &point(&[0, 1])).unwrap();
        assert_eq!(s, LinearSolution::Inconsistent { rank: 0 });
    }

    #[test]
    fn underdetermined_line() {
        let s = solve_linear(&mat(&[&[1, 1]]), &point(&[1])).unwrap();
        match s {
            LinearSolution::Affine {
                rank,
                particular,
                basis,
            } => {
                assert_eq!(rank, 1);
                assert_eq!(&particular[0] + &particular[1], rat(1));
                assert_eq!(basis.len(), 1);
                assert_eq!(&basis[0][0] + &basis[0][1], rat(0));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rational_entries_and_skipped_columns() {
        // second column is zero, forcing a pivot skip
        let m = Matrix::from_rows(vec![
            vec![ratio(1, 2), rat(0), rat(3)],
            vec![rat(2), rat(0), ratio(-1, 3)],
            vec![rat(1), rat(0), rat(1)],
        ])
        .unwrap();
        let x = vec![rat(2), rat(0), ratio(5, 7)];
        let b = m.mul_vec(&x).unwrap();
        let s = solve_linear(&m, &b).unwrap();
        assert_eq!(s.rank(), 2);
        if let LinearSolution::Affine { particular, .. } = s {
            assert_eq!(m.mul_vec(&particular).unwrap(), b);
        } else {
            panic!("expected affine solution");
        }
    }

    #[test]
    fn det_and_inverse() {
        let m = mat(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(m.det().unwrap(), rat(18));
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).unwrap().is_identity());
        let p = mat(&[&[0, 1], &[1, 0]]);
        assert_eq!(p.det().unwrap(), rat(-1));
        let s = mat(&[&[1, 2], &[2, 4]]);
        assert_eq!(s.det().unwrap(), rat(0));
        assert_eq!(s.inverse(), Err(Error::SingularMatrix));
        let half = Matrix::identity(3).scale(&ratio(1, 2));
        assert_eq!(half.det().unwrap(), ratio(1, 8));
    }

    proptest! {
        #[test]
        fn solutions_satisfy_the_system(
            entries in proptest::collection::vec(-4i64..=4, 12),
            rhs in proptest::collection::vec(-5i64..=5, 3),
        ) {
            let m = Matrix::from_rows(entries.chunks(4).map(point).collect()).unwrap();
            let b = point(&rhs);
            let s = solve_linear(&m, &b).unwrap();
            let rank = m.rank();
            prop_assert_eq!(s.rank(), rank);
            match s {
                LinearSolution::Unique { solution } => {
                    prop_assert_eq!(m.mul_vec(&solution).unwrap(), b);
                }
                LinearSolution::Affine { particular, basis, .. } => {
                    prop_assert_eq!(m.mul_vec(&particular).unwrap(), b.clone());
                    prop_assert_eq!(basis.len(), 4 - rank);
                    for v in basis {
                        prop_assert!(m.mul_vec(&v).unwrap().iter().all(Zero::is_zero));
                    }
                }
                LinearSolution::Inconsistent { .. } => {
                    // augmenting with b must raise the rank
                    let mut rows = m.to_rows();
                    for (r, v) in rows.iter_mut().zip(&b) {
                        r.push(v.clone());
                    }
                    prop_assert_eq!(Matrix::from_rows(rows).unwrap().rank(), rank + 1);
                }
            }
        }

        #[test]
        fn det_is_multiplicative(
            a in proptest::collection::vec(-3i64..=3, 9),
            b in proptest::collection::vec(-3i64..=3, 9),
        ) {
            let ma = Matrix::from_rows(a.chunks(3).map(point).collect()).unwrap();
            let mb = Matrix::from_rows(b.chunks(3).map(point).collect()).unwrap();
            let lhs = ma.mul(&mb).unwrap().det().unwrap();
            prop_assert_eq!(lhs, ma.det().unwrap() * mb.det().unwrap());
        }
    }
}
