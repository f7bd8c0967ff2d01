use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::matrix::IntMatrix;

/// `u * m * v = d` with `u`, `v` unimodular and `d` diagonal, each nonzero
/// diagonal entry dividing the next. The inverses of `u` and `v` are kept.
#[derive(Clone, Debug, Serialize)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    #[serde(skip)]
    pub u_inv: IntMatrix,
    #[serde(skip)]
    pub v_inv: IntMatrix,
    /// The nonzero diagonal entries of `d`.
    #[serde(serialize_with = "crate::matrix::serialize_ints")]
    pub invariants: Vec<BigInt>,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.invariants.len()
    }
}

struct Work {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    /// `row[dst] += q * row[src]`.
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.a.add_row(dst, src, q);
        self.u.add_row(dst, src, q);
        self.u_inv.add_col(src, dst, &-q);
    }

    /// `col[dst] += q * col[src]`.
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.a.add_col(dst, src, q);
        self.v.add_col(dst, src, q);
        self.v_inv.add_row(src, dst, &-q);
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    /// Position of a smallest nonzero entry in the trailing block from `t`.
    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = &self.a[(i, j)];
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < self.a[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    /// Clears row and column `t` off the diagonal. Returns false if a
    /// nonzero remainder was left, in which case the pivot must be redone.
    fn clear_cross(&mut self, t: usize) -> bool {
        let mut clean = true;
        for i in t + 1..self.a.rows() {
            if self.a[(i, t)].is_zero() {
                continue;
            }
            let q = self.a[(i, t)].div_floor(&self.a[(t, t)]);
            self.add_row(i, t, &-q);
            clean &= self.a[(i, t)].is_zero();
        }
        for j in t + 1..self.a.cols() {
            if self.a[(t, j)].is_zero() {
                continue;
            }
            let q = self.a[(t, j)].div_floor(&self.a[(t, t)]);
            self.add_col(j, t, &-q);
            clean &= self.a[(t, j)].is_zero();
        }
        clean
    }

    fn non_divisible_row(&self, t: usize) -> Option<usize> {
        let p = &self.a[(t, t)];
        (t + 1..self.a.rows())
            .find(|&i| (t + 1..self.a.cols()).any(|j| !self.a[(i, j)].is_multiple_of(p)))
    }
}

/// Smith normal form over the integers.
///
/// ```
/// use tilespace::homology::smith_normal_form;
/// use tilespace::matrix::IntMatrix;
///
/// let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
/// let s = smith_normal_form(&m);
/// assert_eq!(s.d, IntMatrix::from_rows(&[vec![1, 0], vec![0, 6]]));
/// assert_eq!(&(&s.u * &m) * &s.v, s.d);
/// ```
pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Work {
        a: m.clone(),
        u: IntMatrix::identity(rows),
        u_inv: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
        v_inv: IntMatrix::identity(cols),
    };
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((i, j)) = w.min_entry(t) else {
            break;
        };
        w.swap_rows(t, i);
        w.swap_cols(t, j);
        if !w.clear_cross(t) {
            continue;
        }
        if let Some(i) = w.non_divisible_row(t) {
            w.add_row(t, i, &BigInt::one());
            continue;
        }
        if w.a[(t, t)].is_negative() {
            w.negate_row(t);
        }
        t += 1;
    }
    let invariants = (0..t).map(|i| w.a[(i, i)].clone()).collect();
    SnfResult {
        u: w.u,
        d: w.a,
        v: w.v,
        u_inv: w.u_inv,
        v_inv: w.v_inv,
        invariants,
    }
}
