//! Smith normal form over the integers with explicit change-of-basis matrices.
//!
//! Pivots are chosen by minimal absolute value and reduced with nearest-integer
//! quotients, which keeps intermediate entries small on the boundary matrices
//! this crate works with.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntegerMatrix;

/// `U * M * V = D` with `U`, `V` unimodular and `D` diagonal.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntegerMatrix,
    pub d: IntegerMatrix,
    pub v: IntegerMatrix,
    /// Inverse of `u`.
    pub u_inv: IntegerMatrix,
    /// Inverse of `v`.
    pub v_inv: IntegerMatrix,
    /// `min(rows, cols)` nonnegative entries, each dividing the next; zeros trail.
    pub diagonal: Vec<BigInt>,
    pub rank: usize,
}

impl SmithDecomposition {
    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal
            .iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .cloned()
            .collect()
    }
}

struct Work {
    a: IntegerMatrix,
    u: IntegerMatrix,
    u_inv: IntegerMatrix,
    v: IntegerMatrix,
    v_inv: IntegerMatrix,
}

impl Work {
    fn row_add(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.a.add_row_multiple(dst, src, q);
        self.u.add_row_multiple(dst, src, q);
        self.u_inv.add_col_multiple(src, dst, &-q);
    }

    fn col_add(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.a.add_col_multiple(dst, src, q);
        self.v.add_col_multiple(dst, src, q);
        self.v_inv.add_row_multiple(src, dst, &-q);
    }

    fn row_swap(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn col_swap(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    fn row_negate(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }
}

fn nearest_quotient(a: &BigInt, p: &BigInt) -> BigInt {
    let (q, r) = a.div_mod_floor(p);
    if (&r * 2u32).abs() > p.abs() {
        q + 1
    } else {
        q
    }
}

fn smallest_entry(a: &IntegerMatrix, cells: impl Iterator<Item = (usize, usize)>) -> Option<(usize, usize)> {
    cells
        .filter(|&(i, j)| !a.get(i, j).is_zero())
        .min_by(|&(i, j), &(k, l)| a.get(i, j).abs().cmp(&a.get(k, l).abs()))
}

/// Computes the Smith normal form of `m`. Total on all inputs, including
/// matrices with zero rows or columns.
pub fn smith_normal_form(m: &IntegerMatrix) -> SmithDecomposition {
    let (rows, cols) = m.shape();
    let mut w = Work {
        a: m.clone(),
        u: IntegerMatrix::identity(rows),
        u_inv: IntegerMatrix::identity(rows),
        v: IntegerMatrix::identity(cols),
        v_inv: IntegerMatrix::identity(cols),
    };
    let steps = rows.min(cols);
    let mut rank = 0;

    for t in 0..steps {
        let sub = (t..rows).flat_map(|i| (t..cols).map(move |j| (i, j)));
        let Some((pi, pj)) = smallest_entry(&w.a, sub) else {
            break;
        };
        w.row_swap(t, pi);
        w.col_swap(t, pj);

        loop {
            // Bring the smallest entry of the pivot cross to (t, t).
            let cross = (t..rows).map(|i| (i, t)).chain((t + 1..cols).map(|j| (t, j)));
            let (ci, cj) = smallest_entry(&w.a, cross).expect("pivot cross cannot vanish");
            if ci != t {
                w.row_swap(t, ci);
            }
            if cj != t {
                w.col_swap(t, cj);
            }

            let pivot = w.a.get(t, t).clone();
            for i in t + 1..rows {
                if !w.a.get(i, t).is_zero() {
                    let q = nearest_quotient(w.a.get(i, t), &pivot);
                    w.row_add(i, t, &-q);
                }
            }
            for j in t + 1..cols {
                if !w.a.get(t, j).is_zero() {
                    let q = nearest_quotient(w.a.get(t, j), &pivot);
                    w.col_add(j, t, &-q);
                }
            }

            let cross_clear =
                (t + 1..rows).all(|i| w.a.get(i, t).is_zero()) && (t + 1..cols).all(|j| w.a.get(t, j).is_zero());
            if !cross_clear {
                continue;
            }

            // Enforce divisibility of the remaining block by the pivot.
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !w.a.get(i, j).mod_floor(&pivot).is_zero()));
            match offender {
                Some(i) => w.row_add(t, i, &BigInt::one()),
                None => break,
            }
        }

        if w.a.get(t, t).is_negative() {
            w.row_negate(t);
        }
        rank = t + 1;
    }

    let diagonal = (0..steps).map(|t| w.a.get(t, t).clone()).collect();
    SmithDecomposition {
        u: w.u,
        d: w.a,
        v: w.v,
        u_inv: w.u_inv,
        v_inv: w.v_inv,
        diagonal,
        rank,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::matrix::to_big;

    fn check(m: &IntegerMatrix) -> SmithDecomposition {
        let s = smith_normal_form(m);
        assert_eq!(&(&s.u * m) * &s.v, s.d);
        assert_eq!(&s.u * &s.u_inv, IntegerMatrix::identity(m.rows()));
        assert_eq!(&s.v * &s.v_inv, IntegerMatrix::identity(m.cols()));
        for (i, j) in (0..m.rows()).flat_map(|i| (0..m.cols()).map(move |j| (i, j))) {
            if i != j {
                assert!(s.d.get(i, j).is_zero());
            }
        }
        for w in s.diagonal.windows(2) {
            if w[1].is_zero() {
                continue;
            }
            assert!(!w[0].is_zero(), "zeros must trail");
            assert!(w[1].mod_floor(&w[0]).is_zero());
        }
        s
    }

    #[test]
    fn coprime_diagonal_merges() {
        let s = check(&IntegerMatrix::from_i64(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.diagonal, to_big(&[1, 6]));
    }

    #[test]
    fn zero_one_by_one() {
        let s = check(&IntegerMatrix::from_i64(&[&[0]]));
        assert_eq!(s.diagonal, to_big(&[0]));
        assert_eq!(s.rank, 0);
    }

    #[test]
    fn identity_is_fixed() {
        let s = check(&IntegerMatrix::identity(4));
        assert_eq!(s.diagonal, to_big(&[1, 1, 1, 1]));
    }

    #[test]
    fn empty_shapes() {
        for (r, c) in [(0, 0), (0, 3), (3, 0)] {
            let s = check(&IntegerMatrix::zeros(r, c));
            assert!(s.diagonal.is_empty());
        }
    }

    #[test]
    fn negative_and_rectangular() {
        let s = check(&IntegerMatrix::from_i64(&[&[-4, 6, 2], &[2, -2, 8]]));
        assert_eq!(s.diagonal, to_big(&[2, 2]));
        let s = check(&IntegerMatrix::from_i64(&[&[2], &[4], &[6]]));
        assert_eq!(s.diagonal, to_big(&[2]));
    }
}
