//! Smith normal form with unimodular transforms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;

/// `u * a * v = d` with `d` diagonal, `d[i] | d[i+1]`, and `u`, `v`
/// unimodular. Inverses are tracked alongside.
#[derive(Clone, Debug)]
pub struct Snf {
    pub diagonal: Vec<BigInt>,
    pub rank: usize,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

struct Work {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Work {
    fn add_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.a.add_row(dst, src, c);
        self.u.add_row(dst, src, c);
        self.u_inv.add_col(src, dst, &-c);
    }

    fn add_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.a.add_col(dst, src, c);
        self.v.add_col(dst, src, c);
        self.v_inv.add_row(src, dst, &-c);
    }

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

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    /// Smallest nonzero entry of the trailing block starting at `t`.
    fn smallest(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| x.abs() < self.a[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }
}

pub fn smith(a: &IntMatrix) -> Snf {
    let (m, n) = (a.rows(), a.cols());
    let mut w = Work {
        a: a.clone(),
        u: IntMatrix::identity(m),
        u_inv: IntMatrix::identity(m),
        v: IntMatrix::identity(n),
        v_inv: IntMatrix::identity(n),
    };
    let mut t = 0;
    while t < m.min(n) {
        let Some((i, j)) = w.smallest(t) else { break };
        w.swap_rows(t, i);
        w.swap_cols(t, j);
        loop {
            let p = w.a[(t, t)].clone();
            let mut dirty = false;
            for i in t + 1..m {
                if w.a[(i, t)].is_zero() {
                    continue;
                }
                let q = w.a[(i, t)].div_floor(&p);
                w.add_row(i, t, &-q);
                dirty |= !w.a[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if w.a[(t, j)].is_zero() {
                    continue;
                }
                let q = w.a[(t, j)].div_floor(&p);
                w.add_col(j, t, &-q);
                dirty |= !w.a[(t, j)].is_zero();
            }
            if dirty {
                let (i, j) = w.smallest_in_cross(t);
                w.swap_rows(t, i);
                w.swap_cols(t, j);
                continue;
            }
            let bad = (t + 1..m)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !w.a[(i, j)].is_multiple_of(&p));
            match bad {
                Some((i, _)) => w.add_row(t, i, &BigInt::from(1)),
                None => break,
            }
        }
        if w.a[(t, t)].is_negative() {
            w.negate_row(t);
        }
        t += 1;
    }
    let diagonal = (0..m.min(n)).map(|i| w.a[(i, i)].clone()).collect::<Vec<_>>();
    let rank = diagonal.iter().filter(|d| !d.is_zero()).count();
    Snf {
        diagonal,
        rank,
        u: w.u,
        u_inv: w.u_inv,
        v: w.v,
        v_inv: w.v_inv,
    }
}

impl Work {
    /// Smallest nonzero entry in row `t` or column `t`, from `t` on.
    fn smallest_in_cross(&self, t: usize) -> (usize, usize) {
        let mut best = (t, t);
        let mut val: Option<BigInt> = None;
        let cands = (t..self.a.rows())
            .map(|i| (i, t))
            .chain((t..self.a.cols()).map(|j| (t, j)));
        for (i, j) in cands {
            let x = self.a[(i, j)].abs();
            if !x.is_zero() && val.as_ref().is_none_or(|v| x < *v) {
                val = Some(x);
                best = (i, j);
            }
        }
        best
    }
}
