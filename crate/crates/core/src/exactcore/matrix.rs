use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::Rational;
use crate::error::{Error, Result};

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

/// `left * m * right == diagonal`, with the diagonal entries forming a
/// divisor chain and both transforms in GL(Z).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub left: IntMatrix,
    pub diagonal: IntMatrix,
    pub right: IntMatrix,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch {
                    expected: c,
                    found: row.len(),
                });
            }
            entries.extend(row.iter().cloned().map(Into::into));
        }
        Ok(IntMatrix {
            rows: r,
            cols: c,
            entries,
        })
    }

    pub fn from_vec(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(IntMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn mul_rational_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(a, b)| b * a)
                    .fold(Rational::zero(), |acc, x| acc + x)
            })
            .collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }

    pub fn is_unimodular(&self) -> Result<bool> {
        Ok(self.determinant()?.abs().is_one())
    }

    /// Inverse of a unimodular matrix, exact over the integers.
    pub fn unimodular_inverse(&self) -> Result<Self> {
        if !self.is_unimodular()? {
            return Err(Error::invalid("matrix is not unimodular"));
        }
        let inv = self.rational_inverse().expect("unimodular matrices are invertible");
        let entries = inv
            .into_iter()
            .flatten()
            .map(|x| {
                debug_assert!(x.is_integer());
                x.to_integer()
            })
            .collect();
        Ok(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Gauss-Jordan inverse over Q, `None` when singular.
    pub fn rational_inverse(&self) -> Option<Vec<Vec<Rational>>> {
        let n = self.rows;
        if !self.is_square() {
            return None;
        }
        let rows: Vec<Vec<Rational>> = self
            .to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(Rational::from_integer).collect())
            .collect();
        invert_rational(rows, n)
    }

    /// Smith normal form with transforms.
    pub fn smith_normal_form(&self) -> SmithForm {
        let (m, n) = (self.rows, self.cols);
        let mut d = self.clone();
        let mut left = IntMatrix::identity(m);
        let mut right = IntMatrix::identity(n);

        let mut t = 0;
        while t < m.min(n) {
            // Pivot: smallest nonzero |entry| in the trailing block.
            let pivot = (t..m)
                .flat_map(|i| (t..n).map(move |j| (i, j)))
                .filter(|&(i, j)| !d.get(i, j).is_zero())
                .min_by_key(|&(i, j)| d.get(i, j).abs());
            let Some((pi, pj)) = pivot else { break };
            d.swap_rows(t, pi);
            left.swap_rows(t, pi);
            d.swap_cols(t, pj);
            right.swap_cols(t, pj);

            loop {
                let mut dirty = false;
                for i in t + 1..m {
                    if d.get(i, t).is_zero() {
                        continue;
                    }
                    let q = d.get(i, t).div_floor(d.get(t, t));
                    d.add_row_multiple(i, t, &-&q);
                    left.add_row_multiple(i, t, &-&q);
                    if !d.get(i, t).is_zero() {
                        d.swap_rows(t, i);
                        left.swap_rows(t, i);
                        dirty = true;
                    }
                }
                for j in t + 1..n {
                    if d.get(t, j).is_zero() {
                        continue;
                    }
                    let q = d.get(t, j).div_floor(d.get(t, t));
                    d.add_col_multiple(j, t, &-&q);
                    right.add_col_multiple(j, t, &-&q);
                    if !d.get(t, j).is_zero() {
                        d.swap_cols(t, j);
                        right.swap_cols(t, j);
                        dirty = true;
                    }
                }
                if dirty {
                    continue;
                }
                // Divisibility: fold any offending entry into row t.
                let offending = (t + 1..m)
                    .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                    .find(|&(i, j)| !d.get(i, j).is_multiple_of(d.get(t, t)));
                match offending {
                    Some((i, _)) => {
                        d.add_row_multiple(t, i, &BigInt::one());
                        left.add_row_multiple(t, i, &BigInt::one());
                    }
                    None => break,
                }
            }
            if d.get(t, t).is_negative() {
                d.negate_row(t);
                left.negate_row(t);
            }
            t += 1;
        }
        SmithForm {
            left,
            diagonal: d,
            right,
        }
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    pub(crate) fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(src, j) * k;
            self.entries[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += k * col[src]
    pub(crate) fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, src) * k;
            self.entries[i * self.cols + dst] += v;
        }
    }

    pub(crate) fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }
}

/// A matrix in GL_n(Z) whose first row is `v / gcd(v)`. The row is the
/// normal of a hyperplane `v·y = c`; applying the matrix sends the hyperplane
/// to `{y_1 = c / gcd(v)}`.
pub(crate) fn completion_with_first_row(v: &[BigInt]) -> Result<IntMatrix> {
    let n = v.len();
    if v.iter().all(Zero::is_zero) {
        return Err(Error::invalid("zero vector has no unimodular completion"));
    }
    let row = IntMatrix::from_vec(1, n, v.to_vec())?;
    let snf = row.smith_normal_form();
    // left * v * right = (g, 0, ..., 0) with left = ±1, so
    // v = ±g · (first row of right⁻¹).
    let mut inv = snf.right.unimodular_inverse()?;
    if snf.left.get(0, 0).is_negative() {
        inv.negate_row(0);
    }
    Ok(inv)
}

pub(crate) fn invert_rational(mut a: Vec<Vec<Rational>>, n: usize) -> Option<Vec<Vec<Rational>>> {
    let mut inv: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, p);
        inv.swap(col, p);
        let piv = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &piv;
            inv[col][j] = &inv[col][j] / &piv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let x = &f * &a[col][j];
                    a[r][j] -= x;
                    let y = &f * &inv[col][j];
                    inv[r][j] -= y;
                }
            }
        }
    }
    Some(inv)
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = a * rhs.get(k, j);
                    out.entries[i * rhs.cols + j] += v;
                }
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = self
            .to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(|x| x.to_string()).collect())
            .collect();
        write!(f, "{rows:?}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn check_smith(a: &IntMatrix) {
        let s = a.smith_normal_form();
        assert_eq!(&(&s.left * a) * &s.right, s.diagonal);
        assert!(s.left.is_unimodular().unwrap());
        assert!(s.right.is_unimodular().unwrap());
        let d = &s.diagonal;
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                if i != j {
                    assert!(d.get(i, j).is_zero(), "off-diagonal entry in {d:?}");
                }
            }
        }
        let diag: Vec<BigInt> = (0..d.rows().min(d.cols())).map(|i| d.get(i, i).clone()).collect();
        for w in diag.windows(2) {
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!(w[1].is_multiple_of(&w[0]), "divisor chain broken: {diag:?}");
            }
            assert!(!w[0].is_negative());
        }
    }

    #[test]
    fn smith_identity() {
        let i = IntMatrix::identity(2);
        let s = i.smith_normal_form();
        assert_eq!(s.diagonal, i);
        assert_eq!(s.left, i);
        assert_eq!(s.right, i);
    }

    #[test]
    fn smith_two_by_two() {
        let a = m(&[vec![2, 4], vec![6, 8]]);
        let s = a.smith_normal_form();
        assert_eq!(s.diagonal, m(&[vec![2, 0], vec![0, 4]]));
        check_smith(&a);
    }

    #[test]
    fn smith_zero() {
        let a = m(&[vec![0]]);
        assert_eq!(a.smith_normal_form().diagonal, a);
    }

    #[test]
    fn unimodular_cases() {
        assert!(IntMatrix::identity(3).is_unimodular().unwrap());
        assert!(!m(&[vec![2, 0], vec![0, 1]]).is_unimodular().unwrap());
        assert!(m(&[vec![1, 1], vec![0, 1]]).is_unimodular().unwrap());
        assert!(matches!(
            m(&[vec![1, 2, 3]]).is_unimodular(),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn determinant_matches_expansion() {
        let a = m(&[vec![2, -1, 3], vec![0, 4, 1], vec![5, 2, -2]]);
        // 2(-8-2) + 1(0-5) + 3(0-20)
        assert_eq!(a.determinant().unwrap(), BigInt::from(-85));
    }

    #[test]
    fn completion_first_row() {
        let v: Vec<BigInt> = [6, 10, 15].iter().map(|&x| BigInt::from(x)).collect();
        let c = completion_with_first_row(&v).unwrap();
        assert!(c.is_unimodular().unwrap());
        assert_eq!(c.row(0), v.as_slice());
        let w: Vec<BigInt> = [4, -6].iter().map(|&x| BigInt::from(x)).collect();
        let c = completion_with_first_row(&w).unwrap();
        assert_eq!(c.row(0), &[BigInt::from(2), BigInt::from(-3)]);
    }

    proptest! {
        #[test]
        fn smith_random(rows in 1usize..4, cols in 1usize..4, seed in proptest::collection::vec(-6i64..7, 16)) {
            let data: Vec<BigInt> = seed.iter().take(rows * cols).map(|&x| BigInt::from(x)).collect();
            let a = IntMatrix::from_vec(rows, cols, data).unwrap();
            check_smith(&a);
        }

        #[test]
        fn unimodular_inverse_roundtrip(a in -3i64..4, b in -3i64..4) {
            // [[1,a],[b,ab+1]] has determinant 1
            let u = m(&[vec![1, a], vec![b, a * b + 1]]);
            let inv = u.unimodular_inverse().unwrap();
            prop_assert_eq!(&u * &inv, IntMatrix::identity(2));
        }
    }
}
