//! Piecewise-linear maps between polyhedra and their simplicial
//! approximation.
//!
//! A [`PlMap`] is affine on each simplex of a subdivision of its domain and
//! records, per fine simplex, a closed codomain simplex containing the image.
//! The star condition is decided from those target carriers alone.
//!
//! Where a normal triangulation partitioning preimages would be used in
//! general, maps here are refined by iterated barycentric subdivision until
//! the star condition holds. Over the rationals this terminates for PL maps.

use std::collections::{BTreeMap, BTreeSet};

use crate::certificate::HomotopyCertificate;
use crate::complex::{Complex, Point, Simplex, VertexId};
use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{Rational, Scalar};
use crate::subdivision::{image_points, SubdivisionWitness};

#[derive(Clone, Debug, PartialEq)]
pub struct PlMap<S: Scalar = Rational> {
    pub dom_subdivision: SubdivisionWitness<S>,
    pub codomain: Complex<S>,
    pub vertex_image: BTreeMap<VertexId, Point<S>>,
    pub target_carrier: BTreeMap<Simplex, Simplex>,
}

/// Smallest closed simplex of `l` containing all `points`.
pub fn minimal_carrier<S: Scalar>(l: &Complex<S>, points: &[&[S]]) -> Option<Simplex> {
    let loc = l.locate(&linalg::centroid(points)).ok()?;
    points
        .iter()
        .all(|p| l.closure_contains(&loc.simplex, p))
        .then_some(loc.simplex)
}

/// Whether every simplex of `finer` lies inside a simplex of `coarser`.
pub fn refines<S: Scalar>(finer: &Complex<S>, coarser: &Complex<S>) -> bool {
    if finer.simplex_set() == coarser.simplex_set() {
        return true;
    }
    finer.simplices().all(|t| {
        let pts = finer.points_of(t);
        match coarser.locate(&linalg::centroid(&pts)) {
            Ok(loc) => pts.iter().all(|p| coarser.closure_contains(&loc.simplex, p)),
            Err(_) => false,
        }
    })
}

/// The finer of two subdivisions of the same complex, if one refines the
/// other.
pub fn common_refinement<S: Scalar>(
    a: &SubdivisionWitness<S>,
    b: &SubdivisionWitness<S>,
) -> Result<SubdivisionWitness<S>> {
    if a.coarse.simplex_set() != b.coarse.simplex_set() {
        return Err(Error::NoCommonRefinement);
    }
    if refines(&b.fine, &a.fine) {
        Ok(b.clone())
    } else if refines(&a.fine, &b.fine) {
        Ok(a.clone())
    } else {
        Err(Error::NoCommonRefinement)
    }
}

/// Vertices of `l` that are 0-simplices, keyed by position.
fn vertex_points<S: Scalar>(l: &Complex<S>) -> BTreeMap<String, VertexId> {
    l.vertex_simplices()
        .into_iter()
        .filter_map(|w| l.point(&w).map(|p| (p.key(), w.clone())))
        .collect()
}

fn fine_vertices<S: Scalar>(w: &SubdivisionWitness<S>) -> BTreeSet<VertexId> {
    w.fine.used_vertices()
}

impl<S: Scalar> PlMap<S> {
    /// Map with minimal target carriers computed from the vertex images.
    pub fn new(
        dom_subdivision: SubdivisionWitness<S>,
        codomain: Complex<S>,
        vertex_image: BTreeMap<VertexId, Point<S>>,
    ) -> Result<Self> {
        codomain.require_closed()?;
        let mut target_carrier = BTreeMap::new();
        for t in dom_subdivision.fine.simplices() {
            let pts = image_points(&vertex_image, t)?;
            for p in &pts {
                codomain.locate(p)?;
            }
            let c = minimal_carrier(&codomain, &pts).ok_or_else(|| Error::CarrierClash(t.clone()))?;
            target_carrier.insert(t.clone(), c);
        }
        Ok(PlMap {
            dom_subdivision,
            codomain,
            vertex_image,
            target_carrier,
        })
    }

    /// Map with given carriers, checked.
    pub fn with_carriers(
        dom_subdivision: SubdivisionWitness<S>,
        codomain: Complex<S>,
        vertex_image: BTreeMap<VertexId, Point<S>>,
        target_carrier: BTreeMap<Simplex, Simplex>,
    ) -> Result<Self> {
        let f = PlMap {
            dom_subdivision,
            codomain,
            vertex_image,
            target_carrier,
        };
        f.check()?;
        Ok(f)
    }

    pub fn identity(k: &Complex<S>) -> Result<Self> {
        let image = k
            .used_vertices()
            .into_iter()
            .map(|v| {
                let p = k.point(&v).expect("vertex").clone();
                (v, p)
            })
            .collect();
        PlMap::new(SubdivisionWitness::identity(k), k.clone(), image)
    }

    /// Simplicial map given by a vertex assignment on the fine complex.
    pub fn simplicial(
        dom_subdivision: SubdivisionWitness<S>,
        codomain: Complex<S>,
        vertex_map: &BTreeMap<VertexId, VertexId>,
    ) -> Result<Self> {
        let mut image = BTreeMap::new();
        for v in fine_vertices(&dom_subdivision) {
            let w = vertex_map.get(&v).ok_or_else(|| Error::MissingImage(v.clone()))?;
            let p = codomain.point(w).ok_or_else(|| Error::UnknownVertex(w.clone()))?;
            image.insert(v, p.clone());
        }
        PlMap::new(dom_subdivision, codomain, image)
    }

    /// Constant map to a point of the codomain.
    pub fn constant(dom_subdivision: SubdivisionWitness<S>, codomain: Complex<S>, p: Point<S>) -> Result<Self> {
        let image = fine_vertices(&dom_subdivision).into_iter().map(|v| (v, p.clone())).collect();
        PlMap::new(dom_subdivision, codomain, image)
    }

    pub fn domain(&self) -> &Complex<S> {
        &self.dom_subdivision.coarse
    }

    pub fn fine(&self) -> &Complex<S> {
        &self.dom_subdivision.fine
    }

    pub fn image_of(&self, t: &Simplex) -> Result<Vec<&[S]>> {
        image_points(&self.vertex_image, t)
    }

    /// Checks images and carriers of every fine simplex.
    pub fn check(&self) -> Result<()> {
        self.codomain.require_closed()?;
        for t in self.fine().simplices() {
            let pts = self.image_of(t)?;
            let c = self
                .target_carrier
                .get(t)
                .ok_or_else(|| Error::MissingCarrier(t.clone()))?;
            if !self.codomain.contains(c) || !pts.iter().all(|p| self.codomain.closure_contains(c, p)) {
                return Err(Error::ImageOutsideCarrier {
                    simplex: t.clone(),
                    carrier: c.clone(),
                });
            }
        }
        Ok(())
    }

    pub fn evaluate(&self, x: &[S]) -> Result<Point<S>> {
        let loc = self.fine().locate(x)?;
        let pts = self.image_of(&loc.simplex)?;
        Ok(Point(linalg::combine(&loc.coords, &pts)))
    }

    /// The same map on a subdivision refining the current one.
    pub fn on(&self, finer: &SubdivisionWitness<S>) -> Result<Self> {
        if finer.fine.simplex_set() == self.fine().simplex_set() {
            return Ok(PlMap {
                dom_subdivision: finer.clone(),
                ..self.clone()
            });
        }
        if finer.coarse.simplex_set() != self.domain().simplex_set() || !refines(&finer.fine, self.fine()) {
            return Err(Error::NoCommonRefinement);
        }
        let mut image = BTreeMap::new();
        for v in fine_vertices(finer) {
            let p = finer.fine.point(&v).expect("vertex");
            image.insert(v, self.evaluate(p.coords())?);
        }
        PlMap::new(finer.clone(), self.codomain.clone(), image)
    }

    /// The same map on the barycentric subdivision of its fine complex.
    pub fn refine(&self) -> Result<Self> {
        let sd = self.dom_subdivision.refine()?;
        let mut image = BTreeMap::new();
        for (v, origin) in &sd.origin {
            let pts = self.image_of(origin)?;
            image.insert(v.clone(), Point(linalg::centroid(&pts)));
        }
        PlMap::new(sd.witness, self.codomain.clone(), image)
    }

    /// The codomain vertex each fine vertex is sent to, when the map is
    /// simplicial.
    pub fn vertex_map(&self) -> Option<BTreeMap<VertexId, VertexId>> {
        let by_point = vertex_points(&self.codomain);
        let mut out = BTreeMap::new();
        for v in fine_vertices(&self.dom_subdivision) {
            let p = self.vertex_image.get(&v)?;
            out.insert(v, by_point.get(&p.key())?.clone());
        }
        Some(out)
    }

    pub fn is_simplicial(&self) -> bool {
        self.vertex_map().is_some()
    }

    /// Whether both maps agree as functions on the domain.
    pub fn agrees_with(&self, other: &PlMap<S>) -> Result<bool> {
        let w = common_refinement(&self.dom_subdivision, &other.dom_subdivision)?;
        let (fine, coarse) = if w.fine.simplex_set() == self.fine().simplex_set() {
            (self, other)
        } else {
            (other, self)
        };
        for (v, p) in &fine.vertex_image {
            let x = fine.fine().point(v).expect("vertex");
            if coarse.evaluate(x.coords())? != *p {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Vertices of fine simplices lying over the given subcomplex of the domain.
pub(crate) fn vertices_over<S: Scalar>(w: &SubdivisionWitness<S>, sub: &Complex<S>) -> BTreeSet<VertexId> {
    w.carrier
        .iter()
        .filter(|(_, c)| sub.contains(c))
        .flat_map(|(t, _)| t.vertices().iter().cloned())
        .collect()
}

fn incidence<S: Scalar>(fine: &Complex<S>) -> BTreeMap<&VertexId, Vec<&Simplex>> {
    let mut out: BTreeMap<&VertexId, Vec<&Simplex>> = BTreeMap::new();
    for s in fine.simplices() {
        for v in s.vertices() {
            out.entry(v).or_default().push(s);
        }
    }
    out
}

fn star_vertex<S: Scalar>(f: &PlMap<S>, v: &VertexId, star: &[&Simplex]) -> Option<VertexId> {
    let fv = f.vertex_image.get(v)?;
    let home = f.codomain.locate(fv.coords()).ok()?.simplex;
    home.vertices()
        .iter()
        .find(|w| star.iter().all(|s| f.target_carrier.get(*s).is_some_and(|c| c.contains(w))))
        .cloned()
}

/// A codomain vertex `w` whose open star contains the image of the open
/// star of the fine vertex `v`, if any.
pub fn check_star_condition<S: Scalar>(f: &PlMap<S>, v: &VertexId) -> Option<VertexId> {
    let star: Vec<&Simplex> = f.fine().simplices().filter(|s| s.contains(v)).collect();
    if star.is_empty() {
        return None;
    }
    star_vertex(f, v, &star)
}

#[derive(Clone, Debug)]
pub struct Approximation<S: Scalar = Rational> {
    pub map: PlMap<S>,
    pub certificate: HomotopyCertificate<S>,
    pub rounds: usize,
}

/// Simplicial approximation of `f`, subdividing the domain barycentrically
/// until the star condition holds at every fine vertex.
pub fn simplicial_approximation<S: Scalar>(f: &PlMap<S>, max_rounds: usize) -> Result<Approximation<S>> {
    f.check()?;
    let mut current = f.clone();
    let mut rounds = 0;
    loop {
        let inc = incidence(current.fine());
        let mut assignment = BTreeMap::new();
        let mut failing = Vec::new();
        for (v, star) in &inc {
            match star_vertex(&current, v, star) {
                Some(w) => {
                    assignment.insert((*v).clone(), w);
                }
                None => failing.push((*v).clone()),
            }
        }
        if failing.is_empty() {
            let g = PlMap::simplicial(current.dom_subdivision.clone(), current.codomain.clone(), &assignment)?;
            let certificate = straight_line_homotopy(&current, &g, &Complex::empty(f.domain().ambient_dim()))?;
            return Ok(Approximation {
                map: g,
                certificate,
                rounds,
            });
        }
        if rounds == max_rounds {
            return Err(Error::RoundsExhausted { rounds, failing });
        }
        current = current.refine()?;
        rounds += 1;
    }
}

/// Straight-line homotopy `(1-s) f + s g` with per-simplex common carriers,
/// constant on `fixed`.
pub fn straight_line_homotopy<S: Scalar>(
    f: &PlMap<S>,
    g: &PlMap<S>,
    fixed: &Complex<S>,
) -> Result<HomotopyCertificate<S>> {
    if f.codomain != g.codomain {
        return Err(Error::Invalid("maps have different codomains".into()));
    }
    fixed.is_subcomplex_of(f.domain())?;
    let w = common_refinement(&f.dom_subdivision, &g.dom_subdivision)?;
    let f = f.on(&w)?;
    let g = g.on(&w)?;
    let mut common = BTreeMap::new();
    for t in w.fine.simplices() {
        let mut pts = f.image_of(t)?;
        pts.extend(g.image_of(t)?);
        let c = minimal_carrier(&f.codomain, &pts).ok_or_else(|| Error::CarrierClash(t.clone()))?;
        common.insert(t.clone(), c);
    }
    for v in vertices_over(&w, fixed) {
        if f.vertex_image[&v] != g.vertex_image[&v] {
            return Err(Error::FixedSetMismatch(v));
        }
    }
    Ok(HomotopyCertificate::single(
        f.domain().clone(),
        f.codomain.clone(),
        fixed.clone(),
        w,
        f.vertex_image,
        g.vertex_image,
        common,
    ))
}

/// A PL function to `[0, 1]`, affine on each simplex of `complex`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlFunction<S: Scalar = Rational> {
    pub complex: Complex<S>,
    pub values: BTreeMap<VertexId, S>,
}

impl<S: Scalar> PlFunction<S> {
    pub fn evaluate(&self, x: &[S]) -> Result<S> {
        let loc = self.complex.locate(x)?;
        let mut out = S::zero();
        for (c, v) in loc.coords.iter().zip(loc.simplex.vertices()) {
            let value = self.values.get(v).ok_or_else(|| Error::MissingImage(v.clone()))?;
            out = out + c.clone() * value.clone();
        }
        Ok(out)
    }

    /// Simplices on which the function vanishes identically.
    pub fn zero_set(&self) -> Complex<S> {
        self.complex.restrict(
            self.complex
                .simplices()
                .filter(|s| s.vertices().iter().all(|v| self.values[v].is_zero())),
        )
    }
}

/// Separating function: `0` exactly on `|kc|`, `1` off the interior of `|ke|`.
pub fn urysohn<S: Scalar>(k: &Complex<S>, kc: &Complex<S>, ke: &Complex<S>) -> Result<PlFunction<S>> {
    k.require_closed()?;
    kc.is_subcomplex_of(k)?;
    ke.is_subcomplex_of(k)?;
    kc.require_closed()?;
    ke.require_closed()?;
    let zero = kc.used_vertices();
    for s in k.simplices() {
        if s.vertices().iter().all(|v| zero.contains(v)) && !kc.contains(s) {
            return Err(Error::NotFull(s.clone()));
        }
    }
    for s in k.simplices() {
        if s.vertices().iter().any(|v| zero.contains(v)) && !ke.contains(s) {
            return Err(Error::BarrierViolation(s.clone()));
        }
    }
    let values = k
        .used_vertices()
        .into_iter()
        .map(|v| {
            let x = if zero.contains(&v) { S::zero() } else { S::one() };
            (v, x)
        })
        .collect();
    Ok(PlFunction {
        complex: k.clone(),
        values,
    })
}

/// Output of [`simplicialize_rel`].
#[derive(Clone, Debug)]
pub struct RelSimplicialization<S: Scalar = Rational> {
    pub result: PlMap<S>,
    pub certificate: HomotopyCertificate<S>,
    /// `f` on the subdivision the blend lives on.
    pub start: PlMap<S>,
    pub mu: PlMap<S>,
    pub lambda: PlFunction<S>,
    /// `kc` in the once-subdivided fine complex.
    pub fixed: Complex<S>,
    pub barrier_e: Complex<S>,
    pub barrier_d: Complex<S>,
    pub rounds: usize,
}

impl<S: Scalar> RelSimplicialization<S> {
    /// The blend `(1 - s λ(x)) f(x) + s λ(x) μ(x)` evaluated pointwise.
    pub fn blend(&self, x: &[S], s: &S) -> Result<Point<S>> {
        let l = s.clone() * self.lambda.evaluate(x)?;
        let fx = self.start.evaluate(x)?;
        let mx = self.mu.evaluate(x)?;
        let w = [S::one() - l.clone(), l];
        Ok(Point(linalg::combine(&w, &[fx.coords(), mx.coords()])))
    }

    /// Whether the result is simplicial wherever `λ = 1`, which includes
    /// everything off the interior of the barrier.
    pub fn simplicial_off_barrier(&self) -> Result<bool> {
        let vertices = vertex_points(&self.result.codomain);
        for (v, p) in &self.result.vertex_image {
            let x = self.result.fine().point(v).expect("vertex");
            if self.lambda.evaluate(x.coords())?.is_one() && !vertices.contains_key(&p.key()) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Homotopes `f` rel `|kc|` to a map that is simplicial off a neighbourhood
/// of `|kc|`, given that `f` is already simplicial over `kc`.
pub fn simplicialize_rel<S: Scalar>(
    f: &PlMap<S>,
    kc: &Complex<S>,
    max_rounds: usize,
) -> Result<RelSimplicialization<S>> {
    f.check()?;
    f.domain().require_closed()?;
    kc.is_subcomplex_of(f.domain())?;
    kc.require_closed()?;
    let vertices = vertex_points(&f.codomain);
    for v in vertices_over(&f.dom_subdivision, kc) {
        if !vertices.contains_key(&f.vertex_image[&v].key()) {
            return Err(Error::NotSimplicial(v));
        }
    }

    // one subdivision makes the part over `kc` full and leaves room for
    // the barriers
    let refined = !kc.is_empty();
    let f1 = if refined { f.refine()? } else { f.clone() };
    let fine1 = f1.fine().clone();
    let fixed = f1.dom_subdivision.fine_part(kc);
    let barrier_e = fine1.star(&fixed).closure();
    let barrier_d = fine1.star(&barrier_e).closure();
    for s in fine1.star(&barrier_e).simplices() {
        if !barrier_d.contains(s) {
            return Err(Error::BarrierViolation(s.clone()));
        }
    }
    let lambda = urysohn(&fine1, &fixed, &barrier_e)?;

    let approx = simplicial_approximation(&f1, max_rounds)?;
    let mu = approx.map;
    let w = mu.dom_subdivision.clone();
    let start = f1.on(&w)?;
    let mut image = BTreeMap::new();
    for (v, fv) in &start.vertex_image {
        let x = w.fine.point(v).expect("vertex");
        let l = lambda.evaluate(x.coords())?;
        let weights = [S::one() - l.clone(), l];
        let p = linalg::combine(&weights, &[fv.coords(), mu.vertex_image[v].coords()]);
        image.insert(v.clone(), Point(p));
    }
    let result = PlMap::new(w, f.codomain.clone(), image)?;
    let first = straight_line_homotopy(&start, &result, kc)?;
    let certificate = match straight_line_homotopy(&result, &mu, kc) {
        Ok(second) => first.then(second)?,
        Err(Error::FixedSetMismatch(_)) => first,
        Err(e) => return Err(e),
    };
    Ok(RelSimplicialization {
        result,
        certificate,
        start,
        mu,
        lambda,
        fixed,
        barrier_e,
        barrier_d,
        rounds: approx.rounds + usize::from(refined),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::subdivision::barycentric_subdivide;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn identity_evaluates_to_itself() {
        let disk = corpus::load("disk").unwrap().complex;
        let id = PlMap::identity(&disk).unwrap();
        let x = vec![q(1, 3), q(1, 3)];
        assert_eq!(id.evaluate(&x).unwrap().0, x);
        assert!(id.is_simplicial());
        for v in disk.used_vertices() {
            assert_eq!(check_star_condition(&id, &v), Some(v));
        }
    }

    #[test]
    fn degree_two_map_interpolates() {
        let f = corpus::deg2();
        let v1 = f.fine().point(&"a.b^bary".into()).unwrap().clone();
        assert_eq!(f.evaluate(v1.coords()).unwrap(), f.codomain.point(&"b".into()).unwrap().clone());
        assert_eq!(check_star_condition(&f, &"a".into()), Some("a".into()));
        // halfway from a to the midpoint of ab lands halfway along ab
        let x = vec![q(1, 4), q(0, 1)];
        assert_eq!(f.evaluate(&x).unwrap().0, vec![q(1, 2), q(0, 1)]);
    }

    #[test]
    fn identity_against_constant_clashes_on_circle() {
        let tri3 = corpus::load("tri3").unwrap().complex;
        let id = PlMap::identity(&tri3).unwrap();
        let a = tri3.point(&"a".into()).unwrap().clone();
        let c = PlMap::constant(SubdivisionWitness::identity(&tri3), tri3.clone(), a).unwrap();
        let empty = Complex::empty(2);
        assert_eq!(
            straight_line_homotopy(&id, &c, &empty).unwrap_err(),
            Error::CarrierClash(Simplex::new(["b", "c"]))
        );
    }

    #[test]
    fn fixed_set_mismatch_is_reported() {
        let disk = corpus::load("disk").unwrap().complex;
        let id = PlMap::identity(&disk).unwrap();
        let a = disk.point(&"a".into()).unwrap().clone();
        let c = PlMap::constant(SubdivisionWitness::identity(&disk), disk.clone(), a).unwrap();
        let fixed = disk.restrict([&Simplex::vertex("b")]);
        assert_eq!(
            straight_line_homotopy(&id, &c, &fixed).unwrap_err(),
            Error::FixedSetMismatch("b".into())
        );
        assert!(straight_line_homotopy(&id, &c, &Complex::empty(2)).is_ok());
    }

    #[test]
    fn approximation_of_rotation_needs_no_rounds() {
        let rot = corpus::rot();
        let approx = simplicial_approximation(&rot, 2).unwrap();
        assert!(approx.rounds <= 2);
        assert!(approx.map.is_simplicial());
        approx.certificate.verify().unwrap();
        assert!(approx.certificate.starts_at(&rot).unwrap());
        assert!(approx.certificate.ends_at(&approx.map).unwrap());
    }

    #[test]
    fn urysohn_on_a_vertex_star() {
        let disk = corpus::load("disk").unwrap().complex;
        let k = barycentric_subdivide(&disk).unwrap().witness.fine;
        let kc = k.restrict([&Simplex::vertex("a")]);
        let ke = k.star(&kc).closure();
        let l = urysohn(&k, &kc, &ke).unwrap();
        assert_eq!(l.values[&VertexId::from("a")], q(0, 1));
        assert_eq!(l.values.values().filter(|x| **x == q(0, 1)).count(), 1);
        assert_eq!(l.zero_set().simplex_set().len(), 1);
        let tiny = kc.restrict(kc.simplices());
        assert!(matches!(urysohn(&k, &tiny, &kc), Err(Error::BarrierViolation(_))));
    }

    #[test]
    fn urysohn_rejects_non_full_subcomplex() {
        let disk = corpus::load("disk").unwrap().complex;
        let tri3 = corpus::load("disk").unwrap().subcomplexes["tri3"].clone();
        assert!(matches!(urysohn(&disk, &tri3, &disk), Err(Error::NotFull(_))));
    }

    #[test]
    fn simplicial_map_is_left_alone() {
        let f = corpus::deg2();
        let r = simplicialize_rel(&f, &Complex::empty(2), 4).unwrap();
        assert!(r.result.agrees_with(&f).unwrap());
        r.certificate.verify().unwrap();
    }
}
