use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::group::{AbelianGroup, Quotient};
use super::matrix::IntMatrix;
use super::snf::smith;
use crate::complex::{Complex, Simplex};
use crate::error::{Error, Result};
use crate::plmap::PlMap;
use crate::scalar::Scalar;
use crate::subdivision::{relative_volume, SubdivisionWitness};

/// Simplicial chains with the sorted-vertex orientation.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    basis: Vec<Vec<Simplex>>,
    index: Vec<BTreeMap<Simplex, usize>>,
    /// `boundary[n]` maps `C_n` to `C_{n-1}`.
    boundary: Vec<IntMatrix>,
}

impl ChainComplex {
    fn from_basis(basis: Vec<Vec<Simplex>>) -> Self {
        let index: Vec<BTreeMap<Simplex, usize>> = basis
            .iter()
            .map(|b| b.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        let mut boundary = Vec::with_capacity(basis.len());
        for n in 0..basis.len() {
            let rows = if n == 0 { 0 } else { basis[n - 1].len() };
            let mut d = IntMatrix::zeros(rows, basis[n].len());
            if n > 0 {
                for (j, s) in basis[n].iter().enumerate() {
                    for (i, f) in s.facets().into_iter().enumerate() {
                        if let Some(&r) = index[n - 1].get(&f) {
                            d[(r, j)] = if i % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                        }
                    }
                }
            }
            boundary.push(d);
        }
        ChainComplex { basis, index, boundary }
    }

    fn bases<S: Scalar>(k: &Complex<S>, skip: impl Fn(&Simplex) -> bool) -> Vec<Vec<Simplex>> {
        let top = k.dim().map_or(0, |d| d + 1);
        let mut basis = vec![Vec::new(); top];
        for s in k.simplices().filter(|s| !skip(s)) {
            basis[s.dim()].push(s.clone());
        }
        basis
    }

    pub fn new<S: Scalar>(k: &Complex<S>) -> Result<Self> {
        k.require_closed()?;
        Ok(ChainComplex::from_basis(Self::bases(k, |_| false)))
    }

    /// Chains of `k` modulo chains of the closed subcomplex `a`.
    pub fn relative<S: Scalar>(k: &Complex<S>, a: &Complex<S>) -> Result<Self> {
        k.require_closed()?;
        a.is_subcomplex_of(k)?;
        a.require_closed()?;
        Ok(ChainComplex::from_basis(Self::bases(k, |s| a.contains(s))))
    }

    /// Rank of `C_n`.
    pub fn rank(&self, n: usize) -> usize {
        self.basis.get(n).map_or(0, Vec::len)
    }

    pub fn basis(&self, n: usize) -> &[Simplex] {
        self.basis.get(n).map_or(&[], Vec::as_slice)
    }

    pub fn position(&self, n: usize, s: &Simplex) -> Option<usize> {
        self.index.get(n)?.get(s).copied()
    }

    pub fn top(&self) -> usize {
        self.basis.len()
    }

    /// `∂_n : C_n -> C_{n-1}`, empty outside the range.
    pub fn boundary(&self, n: usize) -> IntMatrix {
        match self.boundary.get(n) {
            Some(d) => d.clone(),
            None => IntMatrix::zeros(if n == 0 { 0 } else { self.rank(n - 1) }, self.rank(n)),
        }
    }

    pub fn boundary_squared_vanishes(&self) -> bool {
        (1..self.top()).all(|n| self.boundary(n).mul(&self.boundary(n + 1)).is_zero())
    }

    pub fn homology(&self, n: usize) -> Homology {
        let d = self.boundary(n);
        let cn = self.rank(n);
        let s = smith(&d);
        let to_cycle = s.v_inv.rows_from(s.rank);
        let idx: Vec<usize> = (s.rank..cn).collect();
        let cycle_basis = s.v.select_columns(&idx);
        let next = self.boundary(n + 1);
        let relations = to_cycle.mul(&next);
        Homology {
            n,
            quotient: Quotient::new(&relations),
            to_cycle,
            cycle_basis,
        }
    }

    pub fn chain(&self, n: usize, terms: &[(Simplex, i64)]) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.rank(n)];
        for (s, c) in terms {
            if let Some(i) = self.position(n, s) {
                v[i] += BigInt::from(*c);
            }
        }
        v
    }
}

/// `H_n` with coordinates for cycles.
#[derive(Clone, Debug)]
pub struct Homology {
    pub n: usize,
    quotient: Quotient,
    to_cycle: IntMatrix,
    cycle_basis: IntMatrix,
}

impl Homology {
    pub fn group(&self) -> &AbelianGroup {
        &self.quotient.group
    }

    /// Normal-form coordinates of the class of a cycle.
    pub fn coordinates(&self, cycle: &[BigInt]) -> Vec<BigInt> {
        self.quotient.coordinates(&self.to_cycle.mul_vec(cycle))
    }

    /// Cycle representing the `i`-th normal-form generator.
    pub fn generator(&self, i: usize) -> Vec<BigInt> {
        self.cycle_basis.mul_vec(&self.quotient.generator(i))
    }

    pub fn generators(&self) -> Vec<Vec<BigInt>> {
        (0..self.quotient.group.generator_count()).map(|i| self.generator(i)).collect()
    }

    pub fn moduli(&self) -> &[BigInt] {
        self.quotient.moduli()
    }

    pub fn relation_lattice(&self) -> IntMatrix {
        self.quotient.relation_lattice()
    }

    pub fn reduce(&self, c: Vec<BigInt>) -> Vec<BigInt> {
        self.quotient.reduce(c)
    }
}

/// A homomorphism between homology groups in normal-form coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyClassMap {
    pub source: AbelianGroup,
    pub target: AbelianGroup,
    /// Target coordinates by source generators.
    pub matrix: IntMatrix,
}

/// Matrix of the map induced by `chain_map : C_n -> C'_n`.
pub fn induced(source: &Homology, target: &Homology, chain_map: &IntMatrix) -> HomologyClassMap {
    let cols: Vec<Vec<BigInt>> = source
        .generators()
        .iter()
        .map(|g| target.coordinates(&chain_map.mul_vec(g)))
        .collect();
    HomologyClassMap {
        source: source.group().clone(),
        target: target.group().clone(),
        matrix: IntMatrix::from_columns(target.group().generator_count(), &cols),
    }
}

/// Subdivision chain map `C_n(K) -> C_n(K')`: each coarse simplex goes to
/// the fine simplices of the same dimension it carries, oriented alike.
pub fn subdivision_chain_map<S: Scalar>(
    w: &SubdivisionWitness<S>,
    coarse: &ChainComplex,
    fine: &ChainComplex,
    n: usize,
) -> IntMatrix {
    let mut m = IntMatrix::zeros(fine.rank(n), coarse.rank(n));
    for (t, c) in &w.carrier {
        if t.dim() != n || c.dim() != n {
            continue;
        }
        let (Some(i), Some(j)) = (fine.position(n, t), coarse.position(n, c)) else {
            continue;
        };
        let vol = relative_volume(&w.coarse.points_of(c), &w.fine.points_of(t)).expect("carried simplex");
        m[(i, j)] = if vol.is_positive() { BigInt::one() } else { -BigInt::one() };
    }
    m
}

/// Chain map `C_n(K') -> C_n(L)` of a simplicial map given on fine vertices.
pub fn vertex_chain_map<S: Scalar>(g: &PlMap<S>, fine: &ChainComplex, target: &ChainComplex, n: usize) -> Result<IntMatrix> {
    let vmap = g.vertex_map().ok_or_else(|| {
        let bad = g
            .vertex_image
            .iter()
            .find(|(_, p)| g.codomain.locate(p.coords()).map_or(true, |l| l.simplex.len() != 1))
            .map(|(v, _)| v.clone())
            .unwrap_or_else(|| "?".into());
        Error::NotSimplicial(bad)
    })?;
    let mut m = IntMatrix::zeros(target.rank(n), fine.rank(n));
    for (j, t) in fine.basis(n).iter().enumerate() {
        let image: Vec<_> = t.vertices().iter().map(|v| vmap[v].clone()).collect();
        let s = Simplex::new(image.iter().cloned());
        if s.len() != image.len() {
            continue;
        }
        let Some(i) = target.position(n, &s) else {
            continue;
        };
        m[(i, j)] = BigInt::from(permutation_sign(&image));
    }
    Ok(m)
}

fn permutation_sign<T: Ord>(items: &[T]) -> i64 {
    let mut sign = 1;
    for i in 0..items.len() {
        for j in i + 1..items.len() {
            if items[i] > items[j] {
                sign = -sign;
            }
        }
    }
    sign
}

/// Chain map of a simplicial PL map on the coarse domain: subdivision
/// followed by the vertex map.
pub fn simplicial_chain_map<S: Scalar>(g: &PlMap<S>, n: usize) -> Result<(ChainComplex, ChainComplex, IntMatrix)> {
    let source = ChainComplex::new(g.domain())?;
    let fine = ChainComplex::new(g.fine())?;
    let target = ChainComplex::new(&g.codomain)?;
    let sd = subdivision_chain_map(&g.dom_subdivision, &source, &fine, n);
    let v = vertex_chain_map(g, &fine, &target, n)?;
    Ok((source, target, v.mul(&sd)))
}

/// `g_* : H_n(K) -> H_n(L)` for a simplicial map.
pub fn induced_map<S: Scalar>(g: &PlMap<S>, n: usize) -> Result<HomologyClassMap> {
    let (source, target, m) = simplicial_chain_map(g, n)?;
    Ok(induced(&source.homology(n), &target.homology(n), &m))
}

pub fn homology<S: Scalar>(k: &Complex<S>, n: usize) -> Result<AbelianGroup> {
    Ok(ChainComplex::new(k)?.homology(n).group().clone())
}

pub fn relative_homology<S: Scalar>(k: &Complex<S>, a: &Complex<S>, n: usize) -> Result<AbelianGroup> {
    Ok(ChainComplex::relative(k, a)?.homology(n).group().clone())
}

pub fn euler_characteristic<S: Scalar>(k: &Complex<S>) -> i64 {
    k.euler_characteristic()
}

/// The chosen generator of `H_n(I^n, ∂I^n)`.
#[derive(Clone, Debug)]
pub struct FundamentalClass {
    pub n: usize,
    pub chains: ChainComplex,
    pub homology: Homology,
    /// Relative chain: top simplices with their orientation signs.
    pub chain: Vec<BigInt>,
}

impl FundamentalClass {
    /// Whether `c` generates `H_n(I^n, ∂I^n) = Z`.
    pub fn is_generator(&self, c: &[BigInt]) -> bool {
        let x = self.homology.coordinates(c);
        x.len() == 1 && x[0].abs().is_one()
    }
}

/// `z_n` for `n` in `{1, 2}`: the sum of the top simplices of the unit cube
/// oriented by the standard orientation of `R^n`.
pub fn fundamental_class(n: usize) -> Result<FundamentalClass> {
    let name = match n {
        1 => "cube1",
        2 => "cube2",
        _ => return Err(Error::Invalid(format!("no cube of dimension {n}"))),
    };
    let doc = crate::corpus::load(name)?;
    let cube = &doc.complex;
    let boundary = doc.subcomplex("boundary")?;
    let chains = ChainComplex::relative(cube, boundary)?;
    let mut chain = vec![BigInt::zero(); chains.rank(n)];
    for (j, s) in chains.basis(n).iter().enumerate() {
        let pts = cube.points_of(s);
        let rows: Vec<Vec<_>> = pts[1..]
            .iter()
            .map(|p| p.iter().zip(pts[0]).map(|(a, b)| a.clone() - b.clone()).collect())
            .collect();
        let det = crate::linalg::det(&rows);
        chain[j] = if det.is_positive() { BigInt::one() } else { -BigInt::one() };
    }
    let homology = chains.homology(n);
    Ok(FundamentalClass {
        n,
        chains,
        homology,
        chain,
    })
}
