//! Geometric complexes of open simplices with exact coordinates.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg;
use crate::lp;
use crate::scalar::{is_nonneg, is_positive, Rational, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(String);

impl VertexId {
    pub fn new(id: impl Into<String>) -> Self {
        VertexId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for VertexId {
    fn from(s: &str) -> Self {
        VertexId(s.to_string())
    }
}

impl From<String> for VertexId {
    fn from(s: String) -> Self {
        VertexId(s)
    }
}

/// An abstract simplex: a sorted, duplicate-free vertex list. The sorted
/// order is the orientation used by every boundary matrix.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex(Vec<VertexId>);

impl Simplex {
    pub fn new<I, V>(vertices: I) -> Self
    where
        I: IntoIterator<Item = V>,
        V: Into<VertexId>,
    {
        let mut v: Vec<VertexId> = vertices.into_iter().map(Into::into).collect();
        v.sort();
        v.dedup();
        Simplex(v)
    }

    pub fn vertex(id: impl Into<VertexId>) -> Self {
        Simplex(vec![id.into()])
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Dimension; the empty simplex is reported as dimension 0 with `len() == 0`.
    pub fn dim(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn contains(&self, v: &VertexId) -> bool {
        self.0.binary_search(v).is_ok()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.contains(v))
    }

    /// Codimension-one faces; entry `i` omits vertex `i`.
    pub fn facets(&self) -> Vec<Simplex> {
        if self.0.len() <= 1 {
            return Vec::new();
        }
        (0..self.0.len())
            .map(|i| {
                let mut v = self.0.clone();
                v.remove(i);
                Simplex(v)
            })
            .collect()
    }

    /// All nonempty faces, including the simplex itself.
    pub fn faces(&self) -> Vec<Simplex> {
        let n = self.0.len();
        (1u64..(1u64 << n))
            .map(|mask| {
                Simplex(
                    (0..n)
                        .filter(|i| mask & (1 << i) != 0)
                        .map(|i| self.0[i].clone())
                        .collect(),
                )
            })
            .collect()
    }

    pub fn with_vertex(&self, v: VertexId) -> Simplex {
        let mut out = self.0.clone();
        out.push(v);
        Simplex::new(out)
    }

    /// Dot-joined vertex list, used to derive names of new vertices.
    pub fn name(&self) -> String {
        self.0.iter().map(VertexId::as_str).collect::<Vec<_>>().join(".")
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Point<S: Scalar = Rational>(pub Vec<S>);

impl<S: Scalar> Point<S> {
    pub fn coords(&self) -> &[S] {
        &self.0
    }

    pub fn key(&self) -> String {
        self.0.iter().map(Scalar::canonical).collect::<Vec<_>>().join(" ")
    }
}

impl<S: Scalar> fmt::Display for Point<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", "))
    }
}

impl<S: Scalar> From<Vec<S>> for Point<S> {
    fn from(v: Vec<S>) -> Self {
        Point(v)
    }
}

/// The open simplex containing a point, with its barycentric coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Location<S: Scalar = Rational> {
    pub simplex: Simplex,
    pub coords: Vec<S>,
}

/// A finite set of pairwise disjoint open simplices in `S^ambient`.
///
/// Subcomplexes are plain `Complex` values whose simplex set is contained in
/// the parent's; see [`Complex::is_subcomplex_of`].
#[derive(Clone, Debug, PartialEq)]
pub struct Complex<S: Scalar = Rational> {
    ambient: usize,
    vertices: BTreeMap<VertexId, Point<S>>,
    simplices: BTreeSet<Simplex>,
}

fn bbox_disjoint<S: Scalar>(a: &[&[S]], b: &[&[S]]) -> bool {
    let dim = a[0].len();
    (0..dim).any(|d| {
        let amin = a.iter().map(|p| &p[d]).fold(None::<&S>, |m, x| match m {
            Some(m) if m <= x => Some(m),
            _ => Some(x),
        });
        let amax = a.iter().map(|p| &p[d]).fold(None::<&S>, |m, x| match m {
            Some(m) if m >= x => Some(m),
            _ => Some(x),
        });
        let bmin = b.iter().map(|p| &p[d]).fold(None::<&S>, |m, x| match m {
            Some(m) if m <= x => Some(m),
            _ => Some(x),
        });
        let bmax = b.iter().map(|p| &p[d]).fold(None::<&S>, |m, x| match m {
            Some(m) if m >= x => Some(m),
            _ => Some(x),
        });
        amax < bmin || bmax < amin
    })
}

impl<S: Scalar> Complex<S> {
    pub fn empty(ambient: usize) -> Self {
        Complex {
            ambient,
            vertices: BTreeMap::new(),
            simplices: BTreeSet::new(),
        }
    }

    /// Builds and fully validates a complex. `simplices` is a list so that
    /// repeated entries can be reported.
    pub fn new(
        ambient: usize,
        vertices: BTreeMap<VertexId, Point<S>>,
        simplices: Vec<Simplex>,
    ) -> Result<Self> {
        let mut set = BTreeSet::new();
        for s in simplices {
            if s.is_empty() {
                return Err(Error::Invalid("empty simplex".into()));
            }
            if !set.insert(s.clone()) {
                return Err(Error::DuplicateSimplex(s));
            }
        }
        let k = Complex {
            ambient,
            vertices,
            simplices: set,
        };
        k.validate()?;
        Ok(k)
    }

    /// Assembles a complex without the geometric checks. Callers must
    /// guarantee disjointness and affine independence.
    pub fn assemble(
        ambient: usize,
        vertices: BTreeMap<VertexId, Point<S>>,
        simplices: BTreeSet<Simplex>,
    ) -> Self {
        let k = Complex {
            ambient,
            vertices,
            simplices,
        };
        debug_assert!(k.simplices.iter().all(|s| s.vertices().iter().all(|v| k.vertices.contains_key(v))));
        k
    }

    /// Checks every invariant: known vertices, arity, distinct positions,
    /// affine independence and pairwise disjointness of open simplices.
    pub fn validate(&self) -> Result<()> {
        let mut seen: BTreeMap<String, &VertexId> = BTreeMap::new();
        for (id, p) in &self.vertices {
            if p.0.len() != self.ambient {
                return Err(Error::WrongArity(id.clone(), p.0.len(), self.ambient));
            }
            if let Some(other) = seen.insert(p.key(), id) {
                return Err(Error::CoincidentVertices(other.clone(), id.clone()));
            }
        }
        for s in &self.simplices {
            for v in s.vertices() {
                if !self.vertices.contains_key(v) {
                    return Err(Error::UnknownVertex(v.clone()));
                }
            }
            if !linalg::affinely_independent(&self.points_of(s)) {
                return Err(Error::AffinelyDependent(s.clone()));
            }
        }
        let list: Vec<&Simplex> = self.simplices.iter().collect();
        let pts: Vec<Vec<&[S]>> = list.iter().map(|s| self.points_of(s)).collect();
        for i in 0..list.len() {
            for j in i + 1..list.len() {
                if list[i].is_face_of(list[j]) || list[j].is_face_of(list[i]) {
                    continue;
                }
                if bbox_disjoint(&pts[i], &pts[j]) {
                    continue;
                }
                if lp::hulls_intersect(&pts[i], true, &pts[j], true) {
                    return Err(Error::OverlappingSimplices(list[i].clone(), list[j].clone()));
                }
            }
        }
        Ok(())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn vertex_table(&self) -> &BTreeMap<VertexId, Point<S>> {
        &self.vertices
    }

    pub fn point(&self, v: &VertexId) -> Option<&Point<S>> {
        self.vertices.get(v)
    }

    /// Coordinates of the vertices of `s`; panics on unknown vertices.
    pub fn points_of(&self, s: &Simplex) -> Vec<&[S]> {
        s.vertices()
            .iter()
            .map(|v| {
                self.vertices
                    .get(v)
                    .unwrap_or_else(|| panic!("unknown vertex {v}"))
                    .coords()
            })
            .collect()
    }

    pub fn simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter()
    }

    pub fn simplex_set(&self) -> &BTreeSet<Simplex> {
        &self.simplices
    }

    pub fn simplices_of_dim(&self, d: usize) -> Vec<&Simplex> {
        self.simplices.iter().filter(|s| s.dim() == d).collect()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.simplices.contains(s)
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn dim(&self) -> Option<usize> {
        self.simplices.iter().map(Simplex::dim).max()
    }

    /// Vertices that are themselves 0-simplices of the complex.
    pub fn vertex_simplices(&self) -> Vec<VertexId> {
        self.simplices
            .iter()
            .filter(|s| s.len() == 1)
            .map(|s| s.vertices()[0].clone())
            .collect()
    }

    /// Vertices used by at least one simplex.
    pub fn used_vertices(&self) -> BTreeSet<VertexId> {
        self.simplices.iter().flat_map(|s| s.vertices().iter().cloned()).collect()
    }

    pub fn barycenter(&self, s: &Simplex) -> Point<S> {
        Point(linalg::centroid(&self.points_of(s)))
    }

    /// Subcomplex on the given simplex set, keeping only the vertex
    /// positions it uses.
    pub fn restrict<'a>(&self, members: impl IntoIterator<Item = &'a Simplex>) -> Complex<S> {
        let simplices: BTreeSet<Simplex> = members
            .into_iter()
            .filter(|s| self.simplices.contains(*s))
            .cloned()
            .collect();
        let used: BTreeSet<&VertexId> = simplices.iter().flat_map(|s| s.vertices()).collect();
        let vertices = self
            .vertices
            .iter()
            .filter(|(k, _)| used.contains(k))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        Complex {
            ambient: self.ambient,
            vertices,
            simplices,
        }
    }

    pub fn is_subcomplex_of(&self, parent: &Complex<S>) -> Result<()> {
        for s in &self.simplices {
            if !parent.contains(s) {
                return Err(Error::NotSubcomplex(s.clone()));
            }
        }
        Ok(())
    }

    /// Union of two subcomplexes of a common parent.
    pub fn union(&self, other: &Complex<S>) -> Complex<S> {
        let mut k = self.clone();
        for (v, p) in &other.vertices {
            k.vertices.entry(v.clone()).or_insert_with(|| p.clone());
        }
        k.simplices.extend(other.simplices.iter().cloned());
        k
    }

    pub fn minus(&self, other: &Complex<S>) -> Complex<S> {
        self.restrict(self.simplices.iter().filter(|s| !other.contains(s)))
    }

    pub fn closure(&self) -> Complex<S> {
        let simplices = self.simplices.iter().flat_map(Simplex::faces).collect();
        Complex {
            ambient: self.ambient,
            vertices: self.vertices.clone(),
            simplices,
        }
    }

    pub fn missing_face(&self) -> Option<(Simplex, Simplex)> {
        for s in &self.simplices {
            for f in s.facets() {
                if !self.simplices.contains(&f) {
                    return Some((s.clone(), f));
                }
            }
        }
        None
    }

    pub fn is_closed(&self) -> bool {
        self.missing_face().is_none()
    }

    pub fn require_closed(&self) -> Result<()> {
        match self.missing_face() {
            Some((simplex, face)) => Err(Error::NotClosed { simplex, face }),
            None => Ok(()),
        }
    }

    /// Whether `x` lies in the closed simplex `s`.
    pub fn closure_contains(&self, s: &Simplex, x: &[S]) -> bool {
        linalg::barycentric(&self.points_of(s), x).is_some_and(|l| l.iter().all(is_nonneg))
    }

    /// Whether `x` lies in the open simplex `s`.
    pub fn open_contains(&self, s: &Simplex, x: &[S]) -> bool {
        linalg::barycentric(&self.points_of(s), x).is_some_and(|l| l.iter().all(is_positive))
    }

    /// The unique open simplex containing `x`.
    pub fn locate(&self, x: &[S]) -> Result<Location<S>> {
        for s in self.simplices.iter().rev() {
            if let Some(coords) = linalg::barycentric(&self.points_of(s), x) {
                if coords.iter().all(is_positive) {
                    return Ok(Location {
                        simplex: s.clone(),
                        coords,
                    });
                }
            }
        }
        Err(Error::PointOutsidePolyhedron(Point(x.to_vec()).to_string()))
    }

    fn closure_meets_open(&self, s: &Simplex, other: &Complex<S>, t: &Simplex, closed: bool) -> bool {
        if t.is_face_of(s) {
            return true;
        }
        if closed {
            return false;
        }
        let a = self.points_of(s);
        let b = other.points_of(t);
        !bbox_disjoint(&a, &b) && lp::hulls_intersect(&a, false, &b, true)
    }

    /// Star of a subcomplex: simplices whose closure meets `|a|`.
    pub fn star(&self, a: &Complex<S>) -> Complex<S> {
        let closed = self.is_closed() && a.simplices.iter().all(|t| self.contains(t));
        self.restrict(
            self.simplices
                .iter()
                .filter(|s| a.simplices.iter().any(|t| self.closure_meets_open(s, a, t, closed))),
        )
    }

    /// Star of a finite point set.
    pub fn star_of_points(&self, points: &[Point<S>]) -> Result<Complex<S>> {
        for p in points {
            self.locate(p.coords())?;
        }
        Ok(self.restrict(
            self.simplices
                .iter()
                .filter(|s| points.iter().any(|p| self.closure_contains(s, p.coords()))),
        ))
    }

    pub fn vertex_star(&self, v: &VertexId) -> Complex<S> {
        let sub = self.restrict([&Simplex::vertex(v.clone())]);
        if sub.is_empty() {
            let p = self.vertices[v].clone();
            return self.star_of_points(&[p]).unwrap_or_else(|_| Complex::empty(self.ambient));
        }
        self.star(&sub)
    }

    /// Largest subcomplex that contains all faces of its simplices.
    pub fn core(&self) -> Complex<S> {
        let mut set = self.simplices.clone();
        loop {
            let drop: Vec<Simplex> = set
                .iter()
                .filter(|s| s.facets().iter().any(|f| !set.contains(f)))
                .cloned()
                .collect();
            if drop.is_empty() {
                break;
            }
            for s in drop {
                set.remove(&s);
            }
        }
        self.restrict(set.iter())
    }

    /// Simplices of dimension at most `m`, optionally together with `with`.
    pub fn skeleton(&self, m: usize, with: Option<&Complex<S>>) -> Complex<S> {
        let base = self.restrict(self.simplices.iter().filter(|s| s.dim() <= m));
        match with {
            Some(z) => base.union(&self.restrict(z.simplices.iter())),
            None => base,
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.simplices
            .iter()
            .map(|s| if s.dim() % 2 == 0 { 1 } else { -1 })
            .sum()
    }

    /// Adds a vertex position; internal builders use this before inserting simplices.
    pub(crate) fn insert_vertex(&mut self, v: VertexId, p: Point<S>) {
        self.vertices.insert(v, p);
    }

    pub(crate) fn insert_simplex(&mut self, s: Simplex) {
        self.simplices.insert(s);
    }
}
