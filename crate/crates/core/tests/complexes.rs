//! Structural invariants of complexes and barycentric subdivision.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use plhtpy_core::algebra::homology;
use plhtpy_core::subdivision::barycentric_subdivide;
use plhtpy_core::{corpus, Complex, Rational, Simplex, VertexId};
use proptest::prelude::*;
use proptest::sample::subsequence;

fn tetra() -> &'static Complex {
    static K: OnceLock<Complex> = OnceLock::new();
    K.get_or_init(|| corpus::simplex_closure(3))
}

fn all_simplices(k: &Complex) -> Vec<Simplex> {
    k.simplices().cloned().collect()
}

/// An arbitrary, possibly non-closed, subcollection of the closed 3-simplex.
fn sub_collection() -> impl Strategy<Value = Complex> {
    let all = all_simplices(tetra());
    let n = all.len();
    subsequence(all, 0..=n).prop_map(|picked| tetra().restrict(&picked))
}

fn meets(s: &Simplex, a: &Complex) -> bool {
    s.faces().iter().any(|f| a.contains(f))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closure_is_idempotent(k in sub_collection()) {
        let c = k.closure();
        prop_assert!(c.is_closed());
        prop_assert_eq!(c.closure(), c.clone());
        for s in k.simplices() {
            prop_assert!(c.contains(s));
        }
    }

    #[test]
    fn core_is_the_largest_closed_part(k in sub_collection()) {
        let core = k.core();
        prop_assert!(core.is_closed());
        core.is_subcomplex_of(&k).unwrap();
        for s in k.minus(&core).simplices() {
            let faces: Vec<Simplex> = s.faces().into_iter().filter(|f| k.contains(f)).collect();
            let grown = core.union(&k.restrict(&faces));
            prop_assert!(!grown.is_closed(), "adding {} keeps closedness", s);
        }
    }

    #[test]
    fn star_holds_everything_meeting_the_set(picked in subsequence(all_simplices(tetra()), 0..=4)) {
        let a = tetra().restrict(&picked).closure();
        let star = tetra().star(&a);
        for s in tetra().simplices() {
            prop_assert_eq!(star.contains(s), meets(s, &a), "{}", s);
        }
    }

    /// Barycentric coordinates with a random support; the support is the
    /// only simplex whose open realization holds the point.
    #[test]
    fn locate_finds_the_support(weights in proptest::collection::vec(0i64..4, 4)) {
        prop_assume!(weights.iter().any(|w| *w > 0));
        let total: i64 = weights.iter().sum();
        let names = ["x0", "x1", "x2", "x3"];
        let mut x = vec![Rational::from_integer(0.into()); 3];
        for (i, w) in weights.iter().enumerate().skip(1) {
            x[i - 1] = Rational::new((*w).into(), total.into());
        }
        let support = Simplex::new(
            names.iter().zip(&weights).filter(|(_, w)| **w > 0).map(|(n, _)| VertexId::new(*n)),
        );
        let loc = tetra().locate(&x).unwrap();
        prop_assert_eq!(loc.simplex, support.clone());
        let hits = tetra().simplices().filter(|s| tetra().open_contains(s, &x)).count();
        prop_assert_eq!(hits, 1);
    }
}

#[test]
fn vertex_stars_are_open() {
    let k = corpus::load("disk").unwrap().complex;
    for v in k.vertex_simplices() {
        let rest = k.minus(&k.vertex_star(&v));
        assert!(rest.is_closed(), "complement of the star of {v}");
    }
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

#[test]
fn subdivided_simplex_counts() {
    for n in 0..=3 {
        let sd = barycentric_subdivide(&corpus::simplex_closure(n)).unwrap();
        assert_eq!(sd.witness.fine.simplices_of_dim(n).len(), factorial(n + 1));
    }
}

/// Every clique of the 1-skeleton of a first barycentric subdivision spans
/// a simplex of it.
fn is_flag(k: &Complex) -> bool {
    let edges: BTreeSet<(VertexId, VertexId)> = k
        .simplices_of_dim(1)
        .iter()
        .map(|e| (e.vertices()[0].clone(), e.vertices()[1].clone()))
        .collect();
    let joined = |u: &VertexId, v: &VertexId| edges.contains(&(u.clone(), v.clone())) || edges.contains(&(v.clone(), u.clone()));
    let vertices = k.vertex_simplices();
    let mut cliques: Vec<Vec<VertexId>> = vertices.iter().map(|v| vec![v.clone()]).collect();
    let mut frontier = cliques.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for c in &frontier {
            for v in vertices.iter().filter(|v| *v > c.last().unwrap()) {
                if c.iter().all(|u| joined(u, v)) {
                    let mut grown = c.clone();
                    grown.push(v.clone());
                    next.push(grown);
                }
            }
        }
        cliques.extend(next.iter().cloned());
        frontier = next;
    }
    cliques.into_iter().all(|c| k.contains(&Simplex::new(c)))
}

#[test]
fn subdivision_preserves_the_basics() {
    for name in ["tri3", "disk", "s2", "wedge2", "cube1", "cube2", "rp6", "torus7"] {
        let k = corpus::load(name).unwrap().complex;
        let sd = barycentric_subdivide(&k).unwrap();
        let fine = &sd.witness.fine;
        assert!(fine.is_closed(), "{name}");
        assert_eq!(fine.euler_characteristic(), k.euler_characteristic(), "{name}");
        assert!(sd.witness.verify().is_empty(), "{name}");
        assert!(is_flag(fine), "{name}");
        for n in 0..=k.dim().unwrap() {
            assert_eq!(homology(fine, n).unwrap(), homology(&k, n).unwrap(), "{name} H{n}");
        }
    }
}
