//! Dense matrices over arbitrary-precision integers.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{Serialize, SerializeSeq, Serializer};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Panics if the rows have different lengths.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r.iter().cloned().map(Into::into));
        }
        IntMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    pub fn diagonal(entries: &[BigInt]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, d) in entries.iter().enumerate() {
            m[(i, i)] = d.clone();
        }
        m
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

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.rows)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn abs(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].abs())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] * k)
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] - &other[(i, j)])
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] + &other[(i, j)])
    }

    /// Rows `start..end`.
    pub fn row_range(&self, start: usize, end: usize) -> Self {
        Self::from_fn(end - start, self.cols, |i, j| self[(start + i, j)].clone())
    }

    /// Columns `start..end`.
    pub fn col_range(&self, start: usize, end: usize) -> Self {
        Self::from_fn(self.rows, end - start, |i, j| self[(i, start + j)].clone())
    }

    /// Rows and columns restricted to the given index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| {
            self[(rows[i], cols[j])].clone()
        })
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    pub fn pow(&self, n: u32) -> Self {
        assert!(self.is_square());
        let mut result = Self::identity(self.rows);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn row_sums(&self) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn trace(&self) -> BigInt {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)].clone())
            .sum()
    }

    /// Entries as `i64`, if they all fit.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(ToPrimitive::to_i64).collect())
            .collect()
    }

    /// Rank by fraction-free Gaussian elimination.
    pub fn rank(&self) -> usize {
        bareiss(self.clone()).0
    }

    /// Determinant by fraction-free elimination. Panics unless square.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        if self.rows == 0 {
            return BigInt::one();
        }
        let (rank, last, sign) = bareiss(self.clone());
        if rank < self.rows {
            BigInt::zero()
        } else {
            last * sign
        }
    }

    /// Coefficients `c_0, ..., c_n` of `det(xI - A)`, lowest degree first.
    pub fn charpoly(&self) -> Vec<BigInt> {
        assert!(self.is_square());
        let n = self.rows;
        let mut c = vec![BigInt::zero(); n + 1];
        c[n] = BigInt::one();
        let mut m = Self::zeros(n, n);
        for k in 1..=n {
            let mut next = self * &m;
            for i in 0..n {
                next[(i, i)] += &c[n - k + 1];
            }
            m = next;
            let t = (self * &m).trace();
            let (q, r) = t.div_rem(&BigInt::from(k));
            debug_assert!(r.is_zero());
            c[n - k] = -q;
        }
        c
    }

    // Elementary operations used by the Smith normal form.

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row[dst] += q * row[src]`.
    pub(crate) fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * q;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// `col[dst] += q * col[src]`.
    pub(crate) fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * q;
            self.data[i * self.cols + dst] += v;
        }
    }

    pub(crate) fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = &mut self.data[i * self.cols + j];
            *v = -std::mem::take(v);
        }
    }

    pub(crate) fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = &mut self.data[i * self.cols + j];
            *v = -std::mem::take(v);
        }
    }
}

/// Returns (rank, last pivot, sign of the row permutation).
fn bareiss(mut a: IntMatrix) -> (usize, BigInt, i32) {
    let (rows, cols) = (a.rows, a.cols);
    let mut prev = BigInt::one();
    let mut rank = 0;
    let mut sign = 1;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        if p != rank {
            a.swap_rows(p, rank);
            sign = -sign;
        }
        for i in rank + 1..rows {
            for j in c + 1..cols {
                let v = (&a[(rank, c)] * &a[(i, j)] - &a[(i, c)] * &a[(rank, j)]) / &prev;
                a[(i, j)] = v;
            }
            a[(i, c)] = BigInt::zero();
        }
        prev = a[(rank, c)].clone();
        rank += 1;
    }
    (rank, prev, sign)
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of bounds"
        );
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of bounds"
        );
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Entries that fit in `i64` are written as numbers, others as decimal strings.
pub(crate) struct Entry<'a>(pub &'a BigInt);

impl Serialize for Entry<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

/// A list of integers serialized like a matrix row.
pub(crate) struct Ints<'a>(pub &'a [BigInt]);

impl Serialize for Ints<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for v in self.0 {
            seq.serialize_element(&Entry(v))?;
        }
        seq.end()
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            seq.serialize_element(&Ints(self.row(i)))?;
        }
        seq.end()
    }
}

/// Serializes a list of integers with the same rules as matrix entries.
pub(crate) fn serialize_ints<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    Ints(v).serialize(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    fn cofactor_det(a: &IntMatrix) -> BigInt {
        let n = a.rows();
        if n == 0 {
            return BigInt::one();
        }
        let mut total = BigInt::zero();
        for j in 0..n {
            let rest: Vec<usize> = (0..n).filter(|&c| c != j).collect();
            let rows: Vec<usize> = (1..n).collect();
            let minor = cofactor_det(&a.select(&rows, &rest));
            let term = &a[(0, j)] * minor;
            if j % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    #[test]
    fn small_examples() {
        let a = m(&[&[1, 2], &[3, 4]]);
        assert_eq!(a.det(), BigInt::from(-2));
        assert_eq!(a.rank(), 2);
        assert_eq!(m(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(IntMatrix::zeros(3, 2).rank(), 0);
        assert_eq!(&a * &IntMatrix::identity(2), a,);
        assert_eq!(a.pow(3), &(&a * &a) * &a);
        assert_eq!(a.pow(0), IntMatrix::identity(2));
        let cp: Vec<i64> = a.charpoly().iter().map(|c| c.to_i64().unwrap()).collect();
        assert_eq!(cp, vec![-2, -5, 1]);
    }

    #[test]
    fn serializes_as_nested_arrays() {
        let a = m(&[&[1, -2], &[0, 5]]);
        assert_eq!(serde_json::to_string(&a).unwrap(), "[[1,-2],[0,5]]");
    }

    fn arb_square() -> impl Strategy<Value = IntMatrix> {
        (1usize..=5).prop_flat_map(|n| {
            proptest::collection::vec(proptest::collection::vec(-6i64..=6, n), n)
                .prop_map(|rows| IntMatrix::from_rows(&rows))
        })
    }

    proptest! {
        #[test]
        fn det_matches_cofactor_expansion(a in arb_square()) {
            prop_assert_eq!(a.det(), cofactor_det(&a));
            prop_assert_eq!(a.rank() == a.rows(), !a.det().is_zero());
        }

        #[test]
        fn charpoly_constant_term_is_signed_det(a in arb_square()) {
            let n = a.rows();
            let c = a.charpoly();
            let sign = if n % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            prop_assert_eq!(&c[0], &(sign * a.det()));
            prop_assert_eq!(&c[n - 1], &(-a.trace()));
        }
    }
}
