//! The built-in example complexes and a few maps between them.

use std::collections::BTreeMap;

use crate::complex::{Complex, Point, Simplex, VertexId};
use crate::error::{Error, Result};
use crate::plmap::PlMap;
use crate::scalar::{Rational, Scalar};
use crate::scx::{parse_scx, ScxDocument};
use crate::subdivision::{barycentric_subdivide, extend_normal, PlHomeo, SubdivisionWitness};

pub const NAMES: [&str; 8] = ["tri3", "disk", "torus7", "rp6", "s2", "wedge2", "cube1", "cube2"];

pub fn text(name: &str) -> Option<&'static str> {
    Some(match name {
        "tri3" => include_str!("../corpus/tri3.scx"),
        "disk" => include_str!("../corpus/disk.scx"),
        "torus7" => include_str!("../corpus/torus7.scx"),
        "rp6" => include_str!("../corpus/rp6.scx"),
        "s2" => include_str!("../corpus/s2.scx"),
        "wedge2" => include_str!("../corpus/wedge2.scx"),
        "cube1" => include_str!("../corpus/cube1.scx"),
        "cube2" => include_str!("../corpus/cube2.scx"),
        _ => return None,
    })
}

pub fn load(name: &str) -> Result<ScxDocument<Rational>> {
    let text = text(name).ok_or_else(|| Error::Invalid(format!("no corpus entry `{name}`")))?;
    parse_scx(text)
}

fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

fn point(k: &Complex, v: &str) -> Point {
    k.point(&VertexId::from(v)).expect("corpus vertex").clone()
}

fn midpoint(k: &Complex, u: &str, v: &str) -> Point {
    let (a, b) = (point(k, u), point(k, v));
    Point(a.0.iter().zip(&b.0).map(|(x, y)| (x + y) / q(2, 1)).collect())
}

/// The closed standard `n`-simplex on vertices `x0..xn`.
pub fn simplex_closure(n: usize) -> Complex {
    let mut vertices = BTreeMap::new();
    for i in 0..=n {
        let coords = (0..n).map(|j| if i == j + 1 { q(1, 1) } else { q(0, 1) }).collect();
        vertices.insert(VertexId::new(format!("x{i}")), Point(coords));
    }
    let top = Simplex::new(vertices.keys().cloned());
    let simplices = top.faces();
    Complex::new(n, vertices, simplices).expect("standard simplex")
}

/// Degree-two map of the circle: the subdivided triangle boundary wraps
/// twice around `tri3`.
pub fn deg2() -> PlMap {
    let tri3 = load("tri3").expect("corpus").complex;
    let sd = barycentric_subdivide(&tri3).expect("closed").witness;
    let assign = [
        ("a", "a"),
        ("a.b^bary", "b"),
        ("b", "c"),
        ("b.c^bary", "a"),
        ("c", "b"),
        ("a.c^bary", "c"),
    ];
    let map: BTreeMap<VertexId, VertexId> = assign.iter().map(|(v, w)| ((*v).into(), (*w).into())).collect();
    PlMap::simplicial(sd, tri3, &map).expect("simplicial")
}

/// Rotation of `tri3` by half an edge: vertices go to edge midpoints and
/// midpoints to the next vertex.
pub fn rot() -> PlMap {
    let tri3 = load("tri3").expect("corpus").complex;
    let sd = barycentric_subdivide(&tri3).expect("closed").witness;
    let image = BTreeMap::from([
        ("a".into(), midpoint(&tri3, "a", "b")),
        ("a.b^bary".into(), point(&tri3, "b")),
        ("b".into(), midpoint(&tri3, "b", "c")),
        ("b.c^bary".into(), point(&tri3, "c")),
        ("c".into(), midpoint(&tri3, "c", "a")),
        ("a.c^bary".into(), point(&tri3, "a")),
    ]);
    PlMap::new(sd, tri3, image).expect("rotation")
}

/// A map of the disk to itself that is the identity on the boundary and
/// moves the centre of a stellar subdivision. Returns the map and the
/// boundary.
pub fn perturbed_disk() -> (PlMap, Complex) {
    let doc = load("disk").expect("corpus");
    let tri3 = doc.subcomplexes["tri3"].clone();
    let id = PlHomeo::identity(SubdivisionWitness::identity(&tri3));
    let stellar = extend_normal(&doc.complex, &tri3, &id).expect("normal extension").witness;
    let mut image: BTreeMap<VertexId, Point> = stellar.fine.vertex_table().clone();
    image.insert("a.b.c^bary".into(), Point(vec![q(2, 7), q(3, 8)]));
    let f = PlMap::new(stellar, doc.complex, image).expect("perturbed disk");
    (f, tri3)
}

/// Normal homeomorphism of the subdivided `tri3` sliding each edge midpoint
/// to the point a third of the way along its edge.
pub fn slide_homeo() -> PlHomeo {
    let tri3 = load("tri3").expect("corpus").complex;
    let w = barycentric_subdivide(&tri3).expect("closed").witness;
    let mut image: BTreeMap<VertexId, Point> = w.fine.vertex_table().clone();
    for (u, v) in [("a", "b"), ("a", "c"), ("b", "c")] {
        let (pu, pv) = (point(&tri3, u), point(&tri3, v));
        let third = pu.0.iter().zip(&pv.0).map(|(x, y)| (q(2, 1) * x + y) / q(3, 1)).collect();
        image.insert(VertexId::new(format!("{u}.{v}^bary")), Point(third));
    }
    PlHomeo::from_images(w, image).expect("slide")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_parses() {
        for name in NAMES {
            let doc = load(name).unwrap();
            assert!(doc.complex.is_closed(), "{name}");
        }
        assert!(load("nope").is_err());
    }

    #[test]
    fn advertised_sizes() {
        let t = load("torus7").unwrap().complex;
        assert_eq!(t.simplices_of_dim(2).len(), 14);
        assert_eq!(t.euler_characteristic(), 0);
        let r = load("rp6").unwrap().complex;
        assert_eq!(r.simplices_of_dim(2).len(), 10);
        assert_eq!(r.euler_characteristic(), 1);
        assert_eq!(load("s2").unwrap().complex.euler_characteristic(), 2);
        assert_eq!(load("wedge2").unwrap().complex.euler_characteristic(), -1);
        assert_eq!(simplex_closure(3).len(), 15);
    }

    #[test]
    fn example_maps_build() {
        assert!(deg2().is_simplicial());
        assert!(!rot().is_simplicial());
        let (f, kc) = perturbed_disk();
        assert!(!f.is_simplicial());
        assert_eq!(kc.len(), 6);
        assert!(crate::subdivision::verify_normal(&slide_homeo(), &[]).is_normal());
    }
}
