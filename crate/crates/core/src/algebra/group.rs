use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::matrix::IntMatrix;
use super::snf::smith;

/// A finitely generated abelian group `Z^rank + Z/d1 + ...` with
/// `d1 | d2 | ...`, each `d > 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        AbelianGroup {
            rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup {
            rank,
            torsion: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Number of generators in the normal form.
    pub fn generator_count(&self) -> usize {
        self.rank + self.torsion.len()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// The quotient `Z^m / span(relations)` with coordinates: each vector of
/// `Z^m` maps to normal-form coordinates, torsion coordinates first and
/// reduced modulo their order.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: AbelianGroup,
    /// `k x m`: vector to coordinates.
    coords: IntMatrix,
    /// Order of each coordinate, zero for free ones.
    moduli: Vec<BigInt>,
    /// `m x k`: representative of each generator.
    generators: IntMatrix,
}

impl Quotient {
    /// `relations` is `m x l`, one relation per column.
    pub fn new(relations: &IntMatrix) -> Self {
        let m = relations.rows();
        let s = smith(relations);
        let mut keep = Vec::new();
        let mut moduli = Vec::new();
        for i in 0..m {
            let d = s.diagonal.get(i).cloned().unwrap_or_else(BigInt::zero);
            if d.is_one() {
                continue;
            }
            keep.push(i);
            moduli.push(d);
        }
        let torsion: Vec<BigInt> = moduli.iter().filter(|d| !d.is_zero()).cloned().collect();
        let rank = moduli.len() - torsion.len();
        Quotient {
            group: AbelianGroup { rank, torsion },
            coords: s.u.select_rows(&keep),
            moduli,
            generators: s.u_inv.select_columns(&keep),
        }
    }

    pub fn ambient(&self) -> usize {
        self.coords.cols()
    }

    pub fn moduli(&self) -> &[BigInt] {
        &self.moduli
    }

    pub fn reduce(&self, mut c: Vec<BigInt>) -> Vec<BigInt> {
        for (x, d) in c.iter_mut().zip(&self.moduli) {
            if !d.is_zero() {
                *x = x.mod_floor(d);
            }
        }
        c
    }

    pub fn coordinates(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.reduce(self.coords.mul_vec(v))
    }

    pub fn is_zero(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).iter().all(Zero::is_zero)
    }

    pub fn generator(&self, i: usize) -> Vec<BigInt> {
        self.generators.column(i)
    }

    /// The relation lattice of the normal form: `d_i e_i` for torsion and
    /// nothing for free coordinates, as columns.
    pub fn relation_lattice(&self) -> IntMatrix {
        let k = self.moduli.len();
        let cols: Vec<Vec<BigInt>> = self
            .moduli
            .iter()
            .enumerate()
            .filter(|(_, d)| !d.is_zero())
            .map(|(i, d)| {
                let mut c = vec![BigInt::zero(); k];
                c[i] = d.clone();
                c
            })
            .collect();
        IntMatrix::from_columns(k, &cols)
    }
}

/// Whether `v` lies in the integer span of the columns of `basis`.
pub fn in_lattice(basis: &IntMatrix, v: &[BigInt]) -> bool {
    let s = smith(basis);
    let y = s.u.mul_vec(v);
    y.iter().enumerate().all(|(i, yi)| match s.diagonal.get(i) {
        Some(d) if i < s.rank => yi.is_multiple_of(d),
        _ => yi.is_zero(),
    })
}

/// An integer solution of `a x = b`, if one exists.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let s = smith(a);
    let c = s.u.mul_vec(b);
    let mut y = vec![BigInt::zero(); a.cols()];
    for (i, ci) in c.iter().enumerate() {
        if i < s.rank {
            if !ci.is_multiple_of(&s.diagonal[i]) {
                return None;
            }
            y[i] = ci / &s.diagonal[i];
        } else if !ci.is_zero() {
            return None;
        }
    }
    Some(s.v.mul_vec(&y))
}

/// Whether `m` induces an isomorphism `Z^a / source -> Z^b / target`,
/// relations given as lattice columns.
pub fn is_isomorphism(m: &IntMatrix, source: &IntMatrix, target: &IntMatrix) -> bool {
    let b = m.rows();
    let onto = same_lattice(&m.hstack(target), &IntMatrix::identity(b));
    let k = kernel(&m.hstack(target));
    let idx: Vec<usize> = (0..m.cols()).collect();
    let into = same_lattice(&k.select_rows(&idx).hstack(source), source);
    onto && into
}

/// Integer kernel basis of `a`, as columns.
pub fn kernel(a: &IntMatrix) -> IntMatrix {
    let s = smith(a);
    let n = a.cols();
    let idx: Vec<usize> = (s.rank..n).collect();
    s.v.select_columns(&idx)
}

/// Lattices spanned by the columns of `a` and `b` coincide.
pub fn same_lattice(a: &IntMatrix, b: &IntMatrix) -> bool {
    (0..a.cols()).all(|j| in_lattice(b, &a.column(j))) && (0..b.cols()).all(|j| in_lattice(a, &b.column(j)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printing() {
        assert_eq!(AbelianGroup::trivial().to_string(), "0");
        assert_eq!(AbelianGroup::free(1).to_string(), "Z");
        let g = AbelianGroup {
            rank: 2,
            torsion: vec![BigInt::from(2)],
        };
        assert_eq!(g.to_string(), "Z^2 + Z/2");
    }

    #[test]
    fn quotient_of_z2_by_diagonal() {
        // Z^2 / <(2, 2)> = Z + Z/2
        let q = Quotient::new(&IntMatrix::from_rows(&[vec![2], vec![2]]));
        assert_eq!(q.group.to_string(), "Z + Z/2");
        let v = [BigInt::from(1), BigInt::from(1)];
        assert!(!q.is_zero(&v));
        let w = [BigInt::from(2), BigInt::from(2)];
        assert!(q.is_zero(&w));
    }

    #[test]
    fn lattice_membership() {
        let b = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        assert!(in_lattice(&b, &[BigInt::from(4), BigInt::from(-3)]));
        assert!(!in_lattice(&b, &[BigInt::from(1), BigInt::from(0)]));
        let k = kernel(&IntMatrix::from_rows(&[vec![1, 1]]));
        assert_eq!(k.cols(), 1);
        assert!(in_lattice(&k, &[BigInt::from(3), BigInt::from(-3)]));
    }
}
