//! Integer homology of simplicial complexes and pairs.
//!
//! Homology is simplicial, computed from Smith normal forms of the boundary
//! matrices with arbitrary-precision integers. Groups come with normal-form
//! coordinates so that induced maps and connecting homomorphisms are plain
//! integer matrices.

mod chain;
mod group;
mod les;
mod matrix;
mod snf;

pub use chain::{
    euler_characteristic, fundamental_class, homology, induced, induced_map, relative_homology,
    simplicial_chain_map, subdivision_chain_map, vertex_chain_map, ChainComplex, FundamentalClass, Homology,
    HomologyClassMap,
};
pub use group::{in_lattice, is_isomorphism, kernel, same_lattice, solve_integer, AbelianGroup, Quotient};
pub use les::{exact_at, verify_les, LesNode, LesReport};
pub use matrix::IntMatrix;
pub use snf::{smith, Snf};

#[cfg(test)]
mod tests {
    use num_bigint::BigInt;

    use super::*;
    use crate::complex::Simplex;
    use crate::corpus;
    use crate::plmap::PlMap;
    use crate::subdivision::barycentric_subdivide;

    fn z(r: usize) -> AbelianGroup {
        AbelianGroup::free(r)
    }

    #[test]
    fn circle_boundary_matrix() {
        let c = ChainComplex::new(&corpus::load("tri3").unwrap().complex).unwrap();
        let d = c.boundary(1);
        assert_eq!((d.rows(), d.cols()), (3, 3));
        for j in 0..3 {
            let s: BigInt = d.column(j).iter().sum();
            assert_eq!(s, BigInt::from(0));
        }
    }

    #[test]
    fn torus_sizes() {
        let c = ChainComplex::new(&corpus::load("torus7").unwrap().complex).unwrap();
        assert_eq!((c.boundary(1).rows(), c.boundary(1).cols()), (7, 21));
        assert_eq!((c.boundary(2).rows(), c.boundary(2).cols()), (21, 14));
        assert!(c.boundary_squared_vanishes());
    }

    #[test]
    fn relative_groups() {
        let doc = corpus::load("disk").unwrap();
        let tri3 = doc.subcomplex("tri3").unwrap();
        assert_eq!(relative_homology(&doc.complex, tri3, 2).unwrap(), z(1));
        assert_eq!(relative_homology(&doc.complex, tri3, 1).unwrap(), z(0));
        let all = &doc.complex;
        for n in 0..3 {
            assert!(relative_homology(all, all, n).unwrap().is_trivial());
        }
    }

    #[test]
    fn identity_and_constant_maps() {
        let tri3 = corpus::load("tri3").unwrap().complex;
        let id = PlMap::identity(&tri3).unwrap();
        assert_eq!(induced_map(&id, 1).unwrap().matrix, IntMatrix::identity(1));
        let a = tri3.point(&"a".into()).unwrap().clone();
        let c = PlMap::constant(crate::subdivision::SubdivisionWitness::identity(&tri3), tri3.clone(), a).unwrap();
        assert!(induced_map(&c, 1).unwrap().matrix.is_zero());
        assert_eq!(induced_map(&c, 0).unwrap().matrix, IntMatrix::identity(1));
    }

    #[test]
    fn fundamental_classes() {
        for n in [1, 2] {
            let z = fundamental_class(n).unwrap();
            assert_eq!(z.homology.group(), &AbelianGroup::free(1));
            assert!(z.is_generator(&z.chain));
            let twice: Vec<BigInt> = z.chain.iter().map(|x| x * 2).collect();
            assert!(!z.is_generator(&twice));
        }
        assert!(fundamental_class(3).is_err());
    }

    #[test]
    fn subdivision_chain_map_preserves_circle_class() {
        let tri3 = corpus::load("tri3").unwrap().complex;
        let w = barycentric_subdivide(&tri3).unwrap().witness;
        let coarse = ChainComplex::new(&tri3).unwrap();
        let fine = ChainComplex::new(&w.fine).unwrap();
        let m = subdivision_chain_map(&w, &coarse, &fine, 1);
        let map = induced(&coarse.homology(1), &fine.homology(1), &m);
        assert_eq!(map.matrix[(0, 0)].magnitude(), &num_bigint::BigUint::from(1u8));
        let d = fine.boundary(1).mul(&m);
        assert_eq!(d, subdivision_chain_map(&w, &coarse, &fine, 0).mul(&coarse.boundary(1)));
        let cyc = coarse.chain(1, &[(Simplex::new(["a", "b"]), 1), (Simplex::new(["b", "c"]), 1), (Simplex::new(["a", "c"]), -1)]);
        assert!(coarse.boundary(1).mul_vec(&cyc).iter().all(|x| *x == BigInt::from(0)));
    }

    #[test]
    fn disk_pair_sequence() {
        let doc = corpus::load("disk").unwrap();
        let report = verify_les(&doc.complex, doc.subcomplex("tri3").unwrap()).unwrap();
        assert!(report.is_exact(), "{report:?}");
        // H2(X,A) -> H1(A) is an isomorphism Z -> Z
        let i = report.nodes.iter().position(|n| n.label == "H2(X,A)").unwrap();
        let m = &report.maps[i].matrix;
        assert_eq!((m.rows(), m.cols()), (1, 1));
        assert_eq!(m[(0, 0)].magnitude(), &num_bigint::BigUint::from(1u8));
    }
}
