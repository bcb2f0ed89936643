//! Dense exact linear algebra over a [`Scalar`].

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solve<T> {
    Unique(T),
    Inconsistent,
    Underdetermined,
}

/// Row-reduces `m` in place and returns the pivot columns.
fn row_reduce<S: Scalar>(m: &mut [Vec<S>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row >= m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = S::one() / m[row][col].clone();
        for x in m[row].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in 0..m[r].len() {
                    let delta = factor.clone() * m[row][c].clone();
                    m[r][c] = m[r][c].clone() - delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank<S: Scalar>(rows: &[Vec<S>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut m = rows.to_vec();
    row_reduce(&mut m, cols).len()
}

/// Solves `a x = b` where `a` is given row-major.
pub fn solve<S: Scalar>(a: &[Vec<S>], b: &[S]) -> Solve<Vec<S>> {
    let n = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<S>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = row_reduce(&mut m, n + 1);
    if pivots.last() == Some(&n) {
        return Solve::Inconsistent;
    }
    if pivots.len() < n {
        return Solve::Underdetermined;
    }
    Solve::Unique(m.into_iter().take(n).map(|r| r[n].clone()).collect())
}

pub fn det<S: Scalar>(m: &[Vec<S>]) -> S {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = S::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return S::zero();
        };
        if p != col {
            a.swap(p, col);
            d = -d;
        }
        d = d * a[col][col].clone();
        let (upper, lower) = a.split_at_mut(col + 1);
        let pivot = &upper[col];
        for row in lower.iter_mut() {
            if !row[col].is_zero() {
                let factor = row[col].clone() / pivot[col].clone();
                for (x, p) in row[col..].iter_mut().zip(&pivot[col..]) {
                    *x = x.clone() - factor.clone() * p.clone();
                }
            }
        }
    }
    d
}

/// Affine independence of a point list.
pub fn affinely_independent<S: Scalar>(points: &[&[S]]) -> bool {
    if points.len() <= 1 {
        return true;
    }
    let base = points[0];
    let diffs: Vec<Vec<S>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a.clone() - b.clone()).collect())
        .collect();
    rank(&diffs) == points.len() - 1
}

/// Barycentric coordinates of `x` with respect to affinely independent
/// `vertices`; `None` when `x` is off their affine hull.
pub fn barycentric<S: Scalar>(vertices: &[&[S]], x: &[S]) -> Option<Vec<S>> {
    let k = vertices.len();
    let p = x.len();
    let mut a = Vec::with_capacity(p + 1);
    let mut b = Vec::with_capacity(p + 1);
    for i in 0..p {
        a.push(vertices.iter().map(|v| v[i].clone()).collect::<Vec<S>>());
        b.push(x[i].clone());
    }
    a.push(vec![S::one(); k]);
    b.push(S::one());
    match solve(&a, &b) {
        Solve::Unique(l) => Some(l),
        _ => None,
    }
}

/// Affine combination `Σ w_i p_i`.
pub fn combine<S: Scalar>(weights: &[S], points: &[&[S]]) -> Vec<S> {
    let dim = points.first().map_or(0, |p| p.len());
    let mut out = vec![S::zero(); dim];
    for (w, p) in weights.iter().zip(points) {
        if w.is_zero() {
            continue;
        }
        for (o, c) in out.iter_mut().zip(p.iter()) {
            *o = o.clone() + w.clone() * c.clone();
        }
    }
    out
}

pub fn centroid<S: Scalar>(points: &[&[S]]) -> Vec<S> {
    let w = crate::scalar::recip_count::<S>(points.len());
    combine(&vec![w; points.len()], points)
}
