//! Exact two-phase simplex method, used for open-simplex intersection tests.

use crate::scalar::{is_positive, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome<S> {
    Infeasible,
    Unbounded,
    Optimal { value: S, x: Vec<S> },
}

struct Tableau<S> {
    rows: Vec<Vec<S>>,
    basis: Vec<usize>,
    cols: usize,
}

impl<S: Scalar> Tableau<S> {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = S::one() / self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..self.rows.len() {
            if i != r && !self.rows[i][c].is_zero() {
                let f = self.rows[i][c].clone();
                for j in 0..=self.cols {
                    let d = f.clone() * self.rows[r][j].clone();
                    self.rows[i][j] = self.rows[i][j].clone() - d;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Reduced costs of `objective` (maximisation) over the allowed columns.
    fn reduced(&self, objective: &[S], allowed: usize) -> Vec<S> {
        (0..allowed)
            .map(|j| {
                let mut v = objective[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    v = v - objective[b].clone() * self.rows[i][j].clone();
                }
                v
            })
            .collect()
    }

    /// Bland's rule; returns `false` when unbounded.
    fn optimise(&mut self, objective: &[S], allowed: usize) -> bool {
        loop {
            let rc = self.reduced(objective, allowed);
            let Some(enter) = (0..allowed).find(|&j| is_positive(&rc[j])) else {
                return true;
            };
            let mut best: Option<(usize, S)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][enter];
                if is_positive(a) {
                    let ratio = self.rows[i][self.cols].clone() / a.clone();
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => {
                            ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                        }
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, enter),
                None => return false,
            }
        }
    }

    fn value(&self, objective: &[S]) -> S {
        let mut v = S::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            v = v + objective[b].clone() * self.rows[i][self.cols].clone();
        }
        v
    }
}

/// Maximises `c·x` subject to `a x = b`, `x ≥ 0`.
pub fn maximize<S: Scalar>(c: &[S], a: &[Vec<S>], b: &[S]) -> LpOutcome<S> {
    let n = c.len();
    let m = a.len();
    let cols = n + m;
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let neg = b[i] < S::zero();
        let mut row: Vec<S> = a[i]
            .iter()
            .map(|x| if neg { -x.clone() } else { x.clone() })
            .collect();
        for k in 0..m {
            row.push(if k == i { S::one() } else { S::zero() });
        }
        row.push(if neg { -b[i].clone() } else { b[i].clone() });
        rows.push(row);
    }
    let mut t = Tableau {
        rows,
        basis: (n..cols).collect(),
        cols,
    };
    let mut phase1 = vec![S::zero(); cols];
    for x in phase1.iter_mut().skip(n) {
        *x = -S::one();
    }
    t.optimise(&phase1, cols);
    if t.value(&phase1) < S::zero() {
        return LpOutcome::Infeasible;
    }
    // drive artificials out of the basis; rows with no usable column are redundant
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => {
                    t.pivot(i, j);
                    i += 1;
                }
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                }
            }
        } else {
            i += 1;
        }
    }
    let mut objective = c.to_vec();
    objective.extend(std::iter::repeat_n(S::zero(), m));
    if !t.optimise(&objective, n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![S::zero(); n];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < n {
            x[b] = t.rows[i][cols].clone();
        }
    }
    LpOutcome::Optimal {
        value: t.value(&objective),
        x,
    }
}

/// Whether the convex hulls of `a` and `b` intersect, where an `open` hull
/// means its relative interior (all barycentric weights strictly positive).
pub fn hulls_intersect<S: Scalar>(a: &[&[S]], a_open: bool, b: &[&[S]], b_open: bool) -> bool {
    let ka = a.len();
    let kb = b.len();
    let dim = a.first().or(b.first()).map_or(0, |p| p.len());
    let uses_t = a_open || b_open;
    let nvars = ka + kb + usize::from(uses_t);
    let tcol = ka + kb;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();

    let mut row = vec![S::zero(); nvars];
    for x in row.iter_mut().take(ka) {
        *x = S::one();
    }
    if a_open {
        row[tcol] = S::from_int(ka as i64);
    }
    rows.push(row);
    rhs.push(S::one());

    let mut row = vec![S::zero(); nvars];
    for x in row.iter_mut().skip(ka).take(kb) {
        *x = S::one();
    }
    if b_open {
        row[tcol] = S::from_int(kb as i64);
    }
    rows.push(row);
    rhs.push(S::one());

    for d in 0..dim {
        let mut row = vec![S::zero(); nvars];
        let mut tcoef = S::zero();
        for (i, p) in a.iter().enumerate() {
            row[i] = p[d].clone();
            if a_open {
                tcoef = tcoef + p[d].clone();
            }
        }
        for (j, p) in b.iter().enumerate() {
            row[ka + j] = -p[d].clone();
            if b_open {
                tcoef = tcoef - p[d].clone();
            }
        }
        if uses_t {
            row[tcol] = tcoef;
        }
        rows.push(row);
        rhs.push(S::zero());
    }

    let mut c = vec![S::zero(); nvars];
    if uses_t {
        c[tcol] = S::one();
    }
    match maximize(&c, &rows, &rhs) {
        LpOutcome::Infeasible => false,
        // t is bounded by the weight constraints
        LpOutcome::Unbounded => true,
        LpOutcome::Optimal { value, .. } => !uses_t || is_positive(&value),
    }
}
