//! Smith and Hermite normal forms over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::vector::{IntMatrix, LatticeVector};

/// `left * a * right == diag`, with `left`, `right` unimodular and the
/// diagonal entries nonnegative and forming a divisibility chain.
///
/// The inverses of both transforms are tracked alongside them so callers can
/// move between coordinate systems without rational arithmetic.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub left: IntMatrix,
    pub diag: IntMatrix,
    pub right: IntMatrix,
    pub left_inv: IntMatrix,
    pub right_inv: IntMatrix,
}

impl SmithDecomposition {
    /// Nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let n = self.diag.rows().min(self.diag.cols());
        (0..n).map(|i| self.diag[(i, i)].clone()).take_while(|d| !d.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

struct Work {
    m: IntMatrix,
    left: IntMatrix,
    left_inv: IntMatrix,
    right: IntMatrix,
    right_inv: IntMatrix,
}

impl Work {
    fn row_add(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.m.add_row_multiple(dst, src, k);
        self.left.add_row_multiple(dst, src, k);
        self.left_inv.add_col_multiple(src, dst, &-k);
    }

    fn col_add(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.m.add_col_multiple(dst, src, k);
        self.right.add_col_multiple(dst, src, k);
        self.right_inv.add_row_multiple(src, dst, &-k);
    }

    fn row_swap(&mut self, a: usize, b: usize) {
        self.m.swap_rows(a, b);
        self.left.swap_rows(a, b);
        self.left_inv.swap_cols(a, b);
    }

    fn col_swap(&mut self, a: usize, b: usize) {
        self.m.swap_cols(a, b);
        self.right.swap_cols(a, b);
        self.right_inv.swap_rows(a, b);
    }

    fn row_negate(&mut self, i: usize) {
        self.m.negate_row(i);
        self.left.negate_row(i);
        self.left_inv.negate_col(i);
    }

    /// Moves the smallest nonzero entry of row `t` / column `t` (from `t` on)
    /// to the pivot. Returns false if both are zero.
    fn pivot_line(&mut self, t: usize) -> bool {
        let mut best: Option<(BigInt, usize, bool)> = None;
        for i in t..self.m.rows() {
            let x = self.m[(i, t)].abs();
            if !x.is_zero() && best.as_ref().map_or(true, |b| x < b.0) {
                best = Some((x, i, true));
            }
        }
        for j in t..self.m.cols() {
            let x = self.m[(t, j)].abs();
            if !x.is_zero() && best.as_ref().map_or(true, |b| x < b.0) {
                best = Some((x, j, false));
            }
        }
        match best {
            None => false,
            Some((_, i, true)) => {
                self.row_swap(t, i);
                true
            }
            Some((_, j, false)) => {
                self.col_swap(t, j);
                true
            }
        }
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (r, c) = (a.rows(), a.cols());
    let mut w = Work {
        m: a.clone(),
        left: IntMatrix::identity(r),
        left_inv: IntMatrix::identity(r),
        right: IntMatrix::identity(c),
        right_inv: IntMatrix::identity(c),
    };
    for t in 0..r.min(c) {
        // bring some nonzero entry of the remaining block into row/column t
        let mut found = None;
        'search: for i in t..r {
            for j in t..c {
                if !w.m[(i, j)].is_zero() {
                    found = Some((i, j));
                    break 'search;
                }
            }
        }
        let Some((i0, j0)) = found else { break };
        w.row_swap(t, i0);
        w.col_swap(t, j0);

        loop {
            if !w.pivot_line(t) {
                unreachable!("pivot block is nonzero");
            }
            let p = w.m[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..r {
                if !w.m[(i, t)].is_zero() {
                    let q = w.m[(i, t)].div_floor(&p);
                    w.row_add(i, t, &-q);
                    clean &= w.m[(i, t)].is_zero();
                }
            }
            for j in t + 1..c {
                if !w.m[(t, j)].is_zero() {
                    let q = w.m[(t, j)].div_floor(&p);
                    w.col_add(j, t, &-q);
                    clean &= w.m[(t, j)].is_zero();
                }
            }
            if !clean {
                continue;
            }
            // divisibility of the remaining block by the pivot
            let mut bad_row = None;
            'div: for i in t + 1..r {
                for j in t + 1..c {
                    if !w.m[(i, j)].is_multiple_of(&p) {
                        bad_row = Some(i);
                        break 'div;
                    }
                }
            }
            match bad_row {
                Some(i) => w.row_add(t, i, &BigInt::one()),
                None => break,
            }
        }
        if w.m[(t, t)].is_negative() {
            w.row_negate(t);
        }
    }
    SmithDecomposition {
        left: w.left,
        diag: w.m,
        right: w.right,
        left_inv: w.left_inv,
        right_inv: w.right_inv,
    }
}

/// Row-style Hermite normal form of the lattice spanned by `rows`: echelon
/// form with positive pivots and entries above each pivot reduced into
/// `[0, pivot)`. Zero rows are dropped, so the result is a basis.
pub fn hermite_rows(rows: &[LatticeVector], cols: usize) -> Vec<LatticeVector> {
    let mut m = IntMatrix::from_rows(rows, cols);
    let nrows = m.rows();
    let mut r = 0;
    for col in 0..cols {
        if r == nrows {
            break;
        }
        loop {
            let mut best: Option<(BigInt, usize)> = None;
            for i in r..nrows {
                let x = m[(i, col)].abs();
                if !x.is_zero() && best.as_ref().map_or(true, |b| x < b.0) {
                    best = Some((x, i));
                }
            }
            let Some((_, i)) = best else { break };
            m.swap_rows(r, i);
            let p = m[(r, col)].clone();
            let mut done = true;
            for i in r + 1..nrows {
                if !m[(i, col)].is_zero() {
                    let q = m[(i, col)].div_floor(&p);
                    m.add_row_multiple(i, r, &-q);
                    done &= m[(i, col)].is_zero();
                }
            }
            if done {
                break;
            }
        }
        if m[(r, col)].is_zero() {
            continue;
        }
        if m[(r, col)].is_negative() {
            m.negate_row(r);
        }
        let p = m[(r, col)].clone();
        for i in 0..r {
            let q = m[(i, col)].div_floor(&p);
            m.add_row_multiple(i, r, &-q);
        }
        r += 1;
    }
    (0..r).map(|i| m.row(i)).collect()
}

/// Reduces `v` modulo the lattice with Hermite basis `hnf`, giving the
/// canonical representative of its coset.
pub fn hermite_reduce(v: &LatticeVector, hnf: &[LatticeVector]) -> LatticeVector {
    let mut out = v.clone();
    for b in hnf {
        let Some(col) = b.0.iter().position(|x| !x.is_zero()) else { continue };
        let q = out.0[col].div_floor(&b.0[col]);
        if !q.is_zero() {
            out = &out - &b.scale(&q);
        }
    }
    out
}

/// Basis (Hermite form) of the integer right kernel `{x : a x = 0}`.
pub fn integer_kernel(a: &IntMatrix) -> Vec<LatticeVector> {
    let snf = smith_normal_form(a);
    let rank = snf.rank();
    let cols: Vec<_> = (rank..a.cols()).map(|j| snf.right.column(j)).collect();
    hermite_rows(&cols, a.cols())
}

/// Basis of `span(rows) ∩ Z^n`, the saturation of the lattice spanned by `rows`.
pub fn saturated_span(rows: &[LatticeVector], n: usize) -> Vec<LatticeVector> {
    let a = IntMatrix::from_rows(rows, n);
    let orth = integer_kernel(&a);
    integer_kernel(&IntMatrix::from_rows(&orth, n))
}
