//! The long exact homology sequence of a pair, checked node by node.

use num_bigint::BigInt;
use num_traits::One;

use super::chain::{induced, ChainComplex, Homology, HomologyClassMap};
use super::group::{kernel, same_lattice, AbelianGroup};
use super::matrix::IntMatrix;
use crate::complex::Complex;
use crate::error::Result;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LesNode {
    pub label: String,
    pub group: AbelianGroup,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LesReport {
    /// From the top dimension down to `H_0(X, A)`.
    pub nodes: Vec<LesNode>,
    /// `maps[i]` goes from `nodes[i]` to `nodes[i + 1]`.
    pub maps: Vec<HomologyClassMap>,
}

impl LesReport {
    pub fn is_exact(&self) -> bool {
        self.nodes.iter().all(|n| n.exact)
    }
}

/// Whether `image(f) = kernel(g)` at the middle group `mid`.
pub fn exact_at(f: &IntMatrix, mid: &Homology, g: &IntMatrix, after: &IntMatrix) -> bool {
    let rel = mid.relation_lattice();
    let image = f.hstack(&rel);
    let k = kernel(&g.hstack(after));
    let h = mid.group().generator_count();
    let idx: Vec<usize> = (0..h).collect();
    let ker = k.select_rows(&idx).hstack(&rel);
    same_lattice(&image, &ker)
}

fn inclusion(from: &ChainComplex, to: &ChainComplex, n: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(to.rank(n), from.rank(n));
    for (j, s) in from.basis(n).iter().enumerate() {
        if let Some(i) = to.position(n, s) {
            m[(i, j)] = BigInt::one();
        }
    }
    m
}

pub fn verify_les<S: Scalar>(x: &Complex<S>, a: &Complex<S>) -> Result<LesReport> {
    let cx = ChainComplex::new(x)?;
    let ca = ChainComplex::new(a)?;
    let cr = ChainComplex::relative(x, a)?;
    let top = cx.top();

    let mut homs: Vec<(String, Homology)> = Vec::new();
    let mut chain_maps: Vec<IntMatrix> = Vec::new();
    for n in (0..top).rev() {
        homs.push((format!("H{n}(A)"), ca.homology(n)));
        homs.push((format!("H{n}(X)"), cx.homology(n)));
        homs.push((format!("H{n}(X,A)"), cr.homology(n)));
        chain_maps.push(inclusion(&ca, &cx, n));
        chain_maps.push(inclusion(&cx, &cr, n));
        if n > 0 {
            // lift, take the boundary in X, restrict to A
            let lift = inclusion(&cr, &cx, n);
            let restrict = inclusion(&cx, &ca, n - 1);
            chain_maps.push(restrict.mul(&cx.boundary(n)).mul(&lift));
        }
    }

    let maps: Vec<HomologyClassMap> = chain_maps
        .iter()
        .enumerate()
        .map(|(i, m)| induced(&homs[i].1, &homs[i + 1].1, m))
        .collect();

    let mut nodes = Vec::new();
    for (i, (label, h)) in homs.iter().enumerate() {
        let size = h.group().generator_count();
        let incoming = if i == 0 {
            IntMatrix::zeros(size, 0)
        } else {
            maps[i - 1].matrix.clone()
        };
        let (outgoing, after) = match maps.get(i) {
            Some(m) => (m.matrix.clone(), homs[i + 1].1.relation_lattice()),
            None => (IntMatrix::zeros(0, size), IntMatrix::zeros(0, 0)),
        };
        nodes.push(LesNode {
            label: label.clone(),
            group: h.group().clone(),
            exact: exact_at(&incoming, h, &outgoing, &after),
        });
    }
    Ok(LesReport { nodes, maps })
}
