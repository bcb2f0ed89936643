//! Cylinders `|K| x I`, the retraction of a cylinder onto
//! `(|K_A| x I) u (|K| x {0})` and homotopy extension.
//!
//! The height is the last coordinate. Prism vertices are named `<v>@0` and
//! `<v>@1`. The retraction is built simplex by simplex in increasing
//! dimension: the prism over a simplex `σ` not in `K_A` is cut into frustums
//! by the rays from `(σ̂, 2)` through the already triangulated part of its
//! boundary, and each frustum is collapsed onto its bottom. New vertices on
//! the top face are named `<y>~<σ>`. With `K_A` empty the retraction is the
//! vertical collapse onto the bottom.

use std::collections::{BTreeMap, BTreeSet};

use crate::complex::{Complex, Point, Simplex, VertexId};
use crate::error::{Error, Result};
use crate::linalg;
use crate::plmap::PlMap;
use crate::scalar::Scalar;
use crate::subdivision::{relative_volume, SubdivisionWitness};

pub fn level_id(v: &VertexId, top: bool) -> VertexId {
    VertexId::new(format!("{v}@{}", u8::from(top)))
}

fn lift<S: Scalar>(p: &[S], h: S) -> Point<S> {
    let mut c = p.to_vec();
    c.push(h);
    Point(c)
}

fn height<S: Scalar>(p: &Point<S>) -> &S {
    p.coords().last().expect("cylinder points have a height")
}

/// Staircase triangulation of `|K| x [0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PrismComplex<S: Scalar = crate::scalar::Rational> {
    pub base: Complex<S>,
    pub cylinder: Complex<S>,
    /// Each cylinder simplex to the base simplex under it.
    pub projection: BTreeMap<Simplex, Simplex>,
    /// Each base vertex to its bottom and top copies.
    pub level: BTreeMap<VertexId, (VertexId, VertexId)>,
}

pub fn prism_triangulate<S: Scalar>(k: &Complex<S>) -> Result<PrismComplex<S>> {
    k.require_closed()?;
    let mut vertices = BTreeMap::new();
    let mut level = BTreeMap::new();
    let mut down = BTreeMap::new();
    for v in k.used_vertices() {
        let p = k.point(&v).expect("vertex").coords().to_vec();
        let (v0, v1) = (level_id(&v, false), level_id(&v, true));
        vertices.insert(v0.clone(), lift(&p, S::zero()));
        vertices.insert(v1.clone(), lift(&p, S::one()));
        down.insert(v0.clone(), v.clone());
        down.insert(v1.clone(), v.clone());
        level.insert(v, (v0, v1));
    }
    let mut simplices = BTreeSet::new();
    for s in k.simplices() {
        let vs = s.vertices();
        for i in 0..vs.len() {
            let cell = Simplex::new(
                vs[..=i]
                    .iter()
                    .map(|v| level[v].0.clone())
                    .chain(vs[i..].iter().map(|v| level[v].1.clone())),
            );
            simplices.extend(cell.faces());
        }
    }
    let projection = simplices
        .iter()
        .map(|c: &Simplex| (c.clone(), Simplex::new(c.vertices().iter().map(|v| down[v].clone()))))
        .collect();
    Ok(PrismComplex {
        base: k.clone(),
        cylinder: Complex::assemble(k.ambient_dim() + 1, vertices, simplices),
        projection,
        level,
    })
}

impl<S: Scalar> PrismComplex<S> {
    /// The cylinder over a subcomplex of the base.
    pub fn over(&self, sub: &Complex<S>) -> Result<Complex<S>> {
        sub.is_subcomplex_of(&self.base)?;
        Ok(self
            .cylinder
            .restrict(self.projection.iter().filter(|(_, b)| sub.contains(b)).map(|(c, _)| c)))
    }

    fn at_level(&self, top: bool) -> Complex<S> {
        self.cylinder.restrict(
            self.base
                .simplices()
                .map(|s| Simplex::new(s.vertices().iter().map(|v| level_id(v, top))))
                .collect::<Vec<_>>()
                .iter(),
        )
    }

    pub fn bottom(&self) -> Complex<S> {
        self.at_level(false)
    }

    pub fn top(&self) -> Complex<S> {
        self.at_level(true)
    }

    /// `(|K_A| x I) u (|K| x {0})` as a subcomplex of the cylinder.
    pub fn retraction_target(&self, ka: &Complex<S>) -> Result<Complex<S>> {
        Ok(self.over(ka)?.union(&self.bottom()))
    }
}

/// Where a vertex of the frustum triangulation ends up.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Anchor {
    Bottom(VertexId),
    Side(VertexId),
}

struct Frustums<S: Scalar> {
    fine: Complex<S>,
    /// Each fine vertex to the target vertex it collapses onto.
    collapse: BTreeMap<VertexId, VertexId>,
    anchor: BTreeMap<VertexId, Anchor>,
}

/// Cuts `|K| x I` into frustums over a triangulation of the target given by
/// `bottom` (a subdivision of `K`, placed at height 0) and `side` (a
/// subdivision of the prism over `K_A`).
fn frustums<S: Scalar>(
    prism: &PrismComplex<S>,
    ka: &Complex<S>,
    bottom: &SubdivisionWitness<S>,
    side: &SubdivisionWitness<S>,
) -> Result<Frustums<S>> {
    let ambient = prism.cylinder.ambient_dim();
    if ka.is_empty() {
        let flat = prism_triangulate(&bottom.fine)?;
        let mut collapse = BTreeMap::new();
        let mut anchor = BTreeMap::new();
        for (x, (x0, x1)) in &flat.level {
            collapse.insert(x0.clone(), x0.clone());
            collapse.insert(x1.clone(), x0.clone());
            anchor.insert(x0.clone(), Anchor::Bottom(x.clone()));
        }
        return Ok(Frustums {
            fine: flat.cylinder,
            collapse,
            anchor,
        });
    }
    let mut vertices: BTreeMap<VertexId, Point<S>> = BTreeMap::new();
    let mut anchor = BTreeMap::new();
    let mut collapse = BTreeMap::new();

    let add = |id: VertexId, p: Point<S>, vertices: &mut BTreeMap<VertexId, Point<S>>| -> Result<()> {
        if let Some(q) = vertices.get(&id) {
            if *q != p {
                return Err(Error::Invalid(format!("vertex name `{id}` is used for two points")));
            }
        }
        vertices.insert(id, p);
        Ok(())
    };

    let mut bottom_name = BTreeMap::new();
    for x in bottom.fine.used_vertices() {
        let id = level_id(&x, false);
        add(id.clone(), lift(bottom.fine.point(&x).expect("vertex").coords(), S::zero()), &mut vertices)?;
        anchor.insert(id.clone(), Anchor::Bottom(x.clone()));
        collapse.insert(id.clone(), id.clone());
        bottom_name.insert(x, id);
    }
    let bottom_keys: BTreeMap<String, VertexId> = vertices.iter().map(|(id, p)| (p.key(), id.clone())).collect();
    let mut side_name = BTreeMap::new();
    for y in side.fine.used_vertices() {
        let p = side.fine.point(&y).expect("vertex").clone();
        let id = if height(&p).is_zero() {
            bottom_keys
                .get(&p.key())
                .cloned()
                .ok_or_else(|| Error::Invalid(format!("side vertex `{y}` is not a vertex of the bottom triangulation")))?
        } else {
            add(y.clone(), p, &mut vertices)?;
            anchor.insert(y.clone(), Anchor::Side(y.clone()));
            collapse.insert(y.clone(), y.clone());
            y.clone()
        };
        side_name.insert(y, id);
    }
    let rename = |s: &Simplex, names: &BTreeMap<VertexId, VertexId>| Simplex::new(s.vertices().iter().map(|v| names[v].clone()));

    let bottom_pieces: Vec<(Simplex, &Simplex)> = bottom
        .fine
        .simplices()
        .map(|t| Ok((rename(t, &bottom_name), bottom.carrier_of(t)?)))
        .collect::<Result<_>>()?;
    let bottom_set: BTreeSet<&Simplex> = bottom_pieces.iter().map(|(t, _)| t).collect();
    let mut side_pieces: Vec<(Simplex, Simplex)> = Vec::new();
    for t in side.fine.simplices() {
        let c = side.carrier_of(t)?;
        let under = prism
            .projection
            .get(c)
            .ok_or_else(|| Error::NotSubcomplex(c.clone()))?
            .clone();
        let r = rename(t, &side_name);
        let flat = r.vertices().iter().all(|v| height(&vertices[v]).is_zero());
        if flat && !bottom_set.contains(&r) {
            return Err(Error::Invalid(format!("side simplex {t} is not a simplex of the bottom triangulation")));
        }
        side_pieces.push((r, under));
    }
    for (t, c) in &bottom_pieces {
        if ka.contains(c) && !side_pieces.iter().any(|(r, _)| r == t) {
            return Err(Error::Invalid(format!("bottom simplex {t} is missing from the side triangulation")));
        }
    }

    let mut cells: BTreeMap<Simplex, BTreeSet<Simplex>> = BTreeMap::new();
    let mut order: Vec<&Simplex> = prism.base.simplices().collect();
    order.sort_by_key(|s| s.len());
    for sigma in order {
        let mut cell: BTreeSet<Simplex> = BTreeSet::new();
        if ka.contains(sigma) {
            cell.extend(side_pieces.iter().filter(|(_, b)| b.is_face_of(sigma)).map(|(t, _)| t.clone()));
            cells.insert(sigma.clone(), cell);
            continue;
        }
        let mut boundary: BTreeSet<Simplex> = bottom_pieces
            .iter()
            .filter(|(_, c)| c.is_face_of(sigma))
            .map(|(t, _)| t.clone())
            .collect();
        for rho in sigma.faces() {
            if rho != *sigma {
                boundary.extend(cells[&rho].iter().cloned());
            }
        }
        let base_pts = prism.base.points_of(sigma);
        let centre = linalg::centroid(&base_pts);
        let n = sigma.len();
        for f in boundary.iter().filter(|t| t.len() == n) {
            let ys = f.vertices();
            let mut lifted = Vec::with_capacity(ys.len());
            for y in ys {
                let p = vertices[y].clone();
                let h = height(&p).clone();
                if h.is_one() {
                    lifted.push(y.clone());
                    continue;
                }
                let id = VertexId::new(format!("{y}~{}", sigma.name()));
                if !vertices.contains_key(&id) {
                    let scale = S::from_int(2) - h;
                    let x = &p.coords()[..ambient - 1];
                    let top: Vec<S> = centre
                        .iter()
                        .zip(x)
                        .map(|(c, xi)| c.clone() + (xi.clone() - c.clone()) / scale.clone())
                        .collect();
                    add(id.clone(), lift(&top, S::one()), &mut vertices)?;
                    let target = collapse[y].clone();
                    collapse.insert(id.clone(), target);
                }
                lifted.push(id);
            }
            for i in 0..ys.len() {
                if ys[i] == lifted[i] {
                    continue;
                }
                let s = Simplex::new(ys[..=i].iter().chain(&lifted[i..]).cloned());
                cell.extend(s.faces());
            }
        }
        cell.extend(boundary);
        cells.insert(sigma.clone(), cell);
    }
    let simplices: BTreeSet<Simplex> = cells.into_values().flatten().collect();
    Ok(Frustums {
        fine: Complex::assemble(ambient, vertices, simplices),
        collapse,
        anchor,
    })
}

/// A PL retraction of the cylinder onto `(|K_A| x I) u (|K| x {0})`.
#[derive(Clone, Debug)]
pub struct CylinderRetraction<S: Scalar = crate::scalar::Rational> {
    pub domain: PrismComplex<S>,
    pub subcomplex: Complex<S>,
    pub target: Complex<S>,
    /// Defined on its own triangulation of `|K| x I`, which subdivides every
    /// prism cell `σ x I`.
    pub map: PlMap<S>,
}

/// Outcome of checking a retraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RetractionReport {
    pub fixes_target: bool,
    pub image_in_target: bool,
    pub covers_cylinder: bool,
    pub witness: Option<String>,
}

impl RetractionReport {
    pub fn holds(&self) -> bool {
        self.fixes_target && self.image_in_target && self.covers_cylinder
    }
}

pub fn cylinder_retraction<S: Scalar>(k: &Complex<S>, ka: &Complex<S>) -> Result<CylinderRetraction<S>> {
    let domain = prism_triangulate(k)?;
    ka.require_closed()?;
    let side_prism = domain.over(ka)?;
    let built = frustums(
        &domain,
        ka,
        &SubdivisionWitness::identity(k),
        &SubdivisionWitness::identity(&side_prism),
    )?;
    let image = built
        .fine
        .used_vertices()
        .into_iter()
        .map(|v| {
            let t = &built.collapse[&v];
            (v, built.fine.point(t).expect("target vertex").clone())
        })
        .collect();
    let map = PlMap::new(SubdivisionWitness::identity(&built.fine), domain.cylinder.clone(), image)?;
    Ok(CylinderRetraction {
        target: domain.retraction_target(ka)?,
        subcomplex: ka.clone(),
        domain,
        map,
    })
}

/// Total volume of the top simplices of `fine` over `σ x I`, relative to
/// the volume of `σ x I`.
fn prism_share<S: Scalar>(base: &Complex<S>, fine: &Complex<S>, sigma: &Simplex) -> S {
    let base_pts = base.points_of(sigma);
    // a cone over the bottom face; the prism holds `dim σ + 1` of these
    let mut frame: Vec<Vec<S>> = base_pts.iter().map(|p| lift(p, S::zero()).0).collect();
    frame.push(lift(base_pts[0], S::one()).0);
    let frame: Vec<&[S]> = frame.iter().map(Vec::as_slice).collect();
    let mut total = S::zero();
    for t in fine.simplices().filter(|t| t.len() == sigma.len() + 1) {
        let pts = fine.points_of(t);
        let centre = linalg::centroid(&pts);
        if !base.open_contains(sigma, &centre[..centre.len() - 1]) {
            continue;
        }
        match relative_volume(&frame, &pts) {
            Some(v) => total = total + v.abs(),
            None => return S::zero(),
        }
    }
    total / S::from_int(sigma.len() as i64)
}

impl<S: Scalar> CylinderRetraction<S> {
    pub fn fine(&self) -> &Complex<S> {
        self.map.fine()
    }

    pub fn evaluate(&self, x: &[S]) -> Result<Point<S>> {
        self.map.evaluate(x)
    }

    pub fn verify(&self) -> RetractionReport {
        let mut witness = None;
        let mut fixes_target = true;
        for (v, p) in self.fine().vertex_table() {
            if self.target.locate(p.coords()).is_ok() && self.map.vertex_image.get(v) != Some(p) {
                fixes_target = false;
                witness.get_or_insert_with(|| format!("vertex `{v}` is moved"));
            }
        }
        let mut image_in_target = true;
        for (t, c) in &self.map.target_carrier {
            if !self.target.contains(c) {
                image_in_target = false;
                witness.get_or_insert_with(|| format!("simplex {t} leaves the target"));
            }
        }
        let mut covers_cylinder = self.map.check().is_ok();
        for sigma in self.domain.base.simplices() {
            if prism_share(&self.domain.base, self.fine(), sigma) != S::one() {
                covers_cylinder = false;
                witness.get_or_insert_with(|| format!("prism over {sigma} is not tiled"));
            }
        }
        RetractionReport {
            fixes_target,
            image_in_target,
            covers_cylinder,
            witness,
        }
    }
}

/// The straight homotopy on the staircase prism with the given end values.
pub fn prism_homotopy<S: Scalar>(
    prism: &PrismComplex<S>,
    codomain: &Complex<S>,
    start: &BTreeMap<VertexId, Point<S>>,
    end: &BTreeMap<VertexId, Point<S>>,
) -> Result<PlMap<S>> {
    let mut image = BTreeMap::new();
    for (v, (v0, v1)) in &prism.level {
        image.insert(v0.clone(), start.get(v).ok_or_else(|| Error::MissingImage(v.clone()))?.clone());
        image.insert(v1.clone(), end.get(v).ok_or_else(|| Error::MissingImage(v.clone()))?.clone());
    }
    PlMap::new(SubdivisionWitness::identity(&prism.cylinder), codomain.clone(), image)
}

/// The extension `G` with its retraction and the checked postconditions.
#[derive(Clone, Debug)]
pub struct Extension<S: Scalar = crate::scalar::Rational> {
    pub map: PlMap<S>,
    pub retraction: CylinderRetraction<S>,
    pub report: ExtensionReport,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionReport {
    /// `G(x, 0) = f(x)` at every fine vertex of `f`.
    pub starts_at_f: bool,
    /// `G = H` at every fine vertex of `H`.
    pub extends_h: bool,
    pub retraction: RetractionReport,
    pub witness: Option<String>,
}

impl ExtensionReport {
    pub fn holds(&self) -> bool {
        self.starts_at_f && self.extends_h && self.retraction.holds()
    }
}

/// Extends `H` on `|K_A| x I` and `f` on `|K| x {0}` to `G` on `|K| x I` as
/// `H' ∘ r`.
pub fn extend_homotopy<S: Scalar>(f: &PlMap<S>, h: &PlMap<S>, r: &CylinderRetraction<S>) -> Result<Extension<S>> {
    let prism = &r.domain;
    let ka = &r.subcomplex;
    if f.domain().simplex_set() != prism.base.simplex_set() {
        return Err(Error::Invalid("f is not defined on the base of the cylinder".into()));
    }
    let side_prism = prism.over(ka)?;
    if h.domain().simplex_set() != side_prism.simplex_set() {
        return Err(Error::Invalid("H is not defined on the cylinder over the subcomplex".into()));
    }
    if f.codomain != h.codomain {
        return Err(Error::Invalid("f and H have different codomains".into()));
    }
    for (y, p) in h.fine().vertex_table() {
        if !h.fine().used_vertices().contains(y) || !height(p).is_zero() {
            continue;
        }
        let x = &p.coords()[..p.coords().len() - 1];
        if f.evaluate(x)? != h.vertex_image[y] {
            return Err(Error::Incompatible(y.clone()));
        }
    }
    for x in f.fine().used_vertices() {
        let p = f.fine().point(&x).expect("vertex");
        if ka.locate(p.coords()).is_ok() && h.evaluate(lift(p.coords(), S::zero()).coords())? != f.vertex_image[&x] {
            return Err(Error::Incompatible(x));
        }
    }

    let built = frustums(prism, ka, &f.dom_subdivision, &h.dom_subdivision)?;
    let mut image = BTreeMap::new();
    let mut r_image = BTreeMap::new();
    for v in built.fine.used_vertices() {
        let t = &built.collapse[&v];
        let value = match &built.anchor[t] {
            Anchor::Bottom(x) => f.vertex_image[x].clone(),
            Anchor::Side(y) => h.vertex_image[y].clone(),
        };
        r_image.insert(v.clone(), built.fine.point(t).expect("target vertex").clone());
        image.insert(v, value);
    }
    let witness = SubdivisionWitness::identity(&built.fine);
    let map = PlMap::new(witness.clone(), f.codomain.clone(), image)?;
    let retraction = CylinderRetraction {
        domain: prism.clone(),
        subcomplex: ka.clone(),
        target: r.target.clone(),
        map: PlMap::new(witness, prism.cylinder.clone(), r_image)?,
    };

    let mut note = None;
    let mut starts_at_f = true;
    for x in f.fine().used_vertices() {
        let p = lift(f.fine().point(&x).expect("vertex").coords(), S::zero());
        if map.evaluate(p.coords())? != f.vertex_image[&x] {
            starts_at_f = false;
            note.get_or_insert_with(|| format!("G(`{x}`, 0) differs from f"));
        }
    }
    let mut extends_h = true;
    for y in h.fine().used_vertices() {
        let p = h.fine().point(&y).expect("vertex");
        if map.evaluate(p.coords())? != h.vertex_image[&y] {
            extends_h = false;
            note.get_or_insert_with(|| format!("G differs from H at `{y}`"));
        }
    }
    let retraction_report = retraction.verify();
    if let Some(w) = &retraction_report.witness {
        note.get_or_insert_with(|| w.clone());
    }
    Ok(Extension {
        map,
        retraction,
        report: ExtensionReport {
            starts_at_f,
            extends_h,
            retraction: retraction_report,
            witness: note,
        },
    })
}
