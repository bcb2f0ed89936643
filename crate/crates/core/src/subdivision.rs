//! Subdivisions, normal triangulations and their extension over a complex.
//!
//! A [`SubdivisionWitness`] pairs a fine complex with the coarse complex it
//! subdivides and records, for every fine simplex, the coarse simplex that
//! contains it. A [`PlHomeo`] adds a piecewise-linear homeomorphism given by
//! vertex images. Normality of such a homeomorphism is checked exactly by
//! [`verify_normal`]; [`extend_normal`] extends a normal homeomorphism from a
//! closed subcomplex to the whole complex by coning over barycenters, one
//! skeleton at a time.

use std::collections::{BTreeMap, BTreeSet};

use sha2::{Digest, Sha256};

use crate::certificate::{HomotopyCertificate, HomotopyStep};
use crate::complex::{Complex, Point, Simplex, VertexId};
use crate::error::{Error, Result};
use crate::linalg;
use crate::lp;
use crate::scalar::{is_nonneg, is_positive, Rational, Scalar};

const MAX_NAME: usize = 48;

/// Name of the vertex placed at the barycenter of `s`.
pub fn bary_name(s: &Simplex) -> VertexId {
    if s.len() == 1 {
        return s.vertices()[0].clone();
    }
    let joined = s.name();
    if joined.len() + 5 <= MAX_NAME {
        VertexId::new(format!("{joined}^bary"))
    } else {
        let h = hex::encode(Sha256::digest(joined.as_bytes()));
        VertexId::new(format!("h{}^bary", &h[..16]))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubdivisionWitness<S: Scalar = Rational> {
    pub fine: Complex<S>,
    pub coarse: Complex<S>,
    pub carrier: BTreeMap<Simplex, Simplex>,
}

/// A fine simplex with the coordinates of its vertices.
type Piece<S> = (Simplex, Vec<Vec<S>>);

/// One entry of a verification report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub fine: Simplex,
    pub coarse: Simplex,
    pub reason: String,
}

impl Violation {
    fn new(fine: &Simplex, coarse: &Simplex, reason: impl Into<String>) -> Self {
        Violation {
            fine: fine.clone(),
            coarse: coarse.clone(),
            reason: reason.into(),
        }
    }
}

/// Barycentric coordinates of the vertices of `piece` inside `outer`.
fn coords_in<S: Scalar>(outer: &[&[S]], piece: &[&[S]]) -> Option<Vec<Vec<S>>> {
    piece.iter().map(|p| linalg::barycentric(outer, p)).collect()
}

/// Signed volume of `piece` relative to `outer`, both of the same dimension:
/// `1` when they coincide with matching vertex order.
pub fn relative_volume<S: Scalar>(outer: &[&[S]], piece: &[&[S]]) -> Option<S> {
    let d = outer.len() - 1;
    if piece.len() != d + 1 {
        return None;
    }
    if d == 0 {
        return Some(S::one());
    }
    let l = coords_in(outer, piece)?;
    let rows: Vec<Vec<S>> = (1..=d)
        .map(|i| (1..=d).map(|j| l[i][j].clone() - l[0][j].clone()).collect())
        .collect();
    Some(linalg::det(&rows))
}

/// Whether the open hull of `piece` lies inside the open simplex `outer`.
fn open_inside<S: Scalar>(outer: &[&[S]], piece: &[&[S]]) -> bool {
    let Some(l) = coords_in(outer, piece) else {
        return false;
    };
    if !l.iter().all(|c| c.iter().all(is_nonneg)) {
        return false;
    }
    let bary = linalg::centroid(piece);
    linalg::barycentric(outer, &bary).is_some_and(|c| c.iter().all(is_positive))
}

/// Checks that open pieces tile an open simplex `outer` of dimension `d`:
/// the top-dimensional pieces have total relative volume one and every face
/// of a top piece that falls into the interior of `outer` is itself a piece.
fn tiles<S: Scalar>(
    outer: &[&[S]],
    pieces: &[(Simplex, Vec<Vec<S>>)],
    is_piece: impl Fn(&Simplex) -> bool,
) -> std::result::Result<(), String> {
    let d = outer.len() - 1;
    let mut total = S::zero();
    for (s, pts) in pieces.iter().filter(|(s, _)| s.dim() == d) {
        let refs: Vec<&[S]> = pts.iter().map(Vec::as_slice).collect();
        let v = relative_volume(outer, &refs).ok_or_else(|| format!("{s} is off the affine hull"))?;
        if v.is_zero() {
            return Err(format!("{s} is degenerate"));
        }
        total = total + v.abs();
        for face in s.faces() {
            if face == *s || is_piece(&face) {
                continue;
            }
            let idx: Vec<usize> = face
                .vertices()
                .iter()
                .map(|v| s.vertices().iter().position(|w| w == v).expect("face vertex"))
                .collect();
            let fp: Vec<&[S]> = idx.iter().map(|&i| refs[i]).collect();
            let bary = linalg::centroid(&fp);
            if linalg::barycentric(outer, &bary).is_some_and(|c| c.iter().all(is_positive)) {
                return Err(format!("interior face {face} of {s} is missing"));
            }
        }
    }
    if total != S::one() {
        return Err(format!("pieces cover relative volume {total}, expected 1"));
    }
    Ok(())
}

/// A barycentric subdivision together with the simplex each new vertex is
/// the barycenter of.
#[derive(Clone, Debug)]
pub struct Barycentric<S: Scalar = Rational> {
    pub witness: SubdivisionWitness<S>,
    pub origin: BTreeMap<VertexId, Simplex>,
}

/// First barycentric subdivision of a closed complex.
pub fn barycentric_subdivide<S: Scalar>(k: &Complex<S>) -> Result<Barycentric<S>> {
    k.require_closed()?;
    let mut fine = Complex::empty(k.ambient_dim());
    let mut origin = BTreeMap::new();
    for s in k.simplices() {
        let id = bary_name(s);
        let p = k.barycenter(s);
        if let Some(existing) = fine.point(&id) {
            if *existing != p {
                return Err(Error::Invalid(format!("vertex name clash on `{id}`")));
            }
        }
        if k.point(&id).is_some_and(|q| *q != p) {
            return Err(Error::Invalid(format!("vertex name clash on `{id}`")));
        }
        fine.insert_vertex(id.clone(), p);
        origin.insert(id, s.clone());
    }
    // chains of faces ending at each simplex
    let mut chains: BTreeMap<Simplex, Vec<Vec<Simplex>>> = BTreeMap::new();
    let mut by_dim: Vec<&Simplex> = k.simplices().collect();
    by_dim.sort_by_key(|s| s.len());
    for s in by_dim {
        let mut mine = vec![vec![s.clone()]];
        for f in s.faces().into_iter().filter(|f| f != s) {
            for chain in &chains[&f] {
                let mut c = chain.clone();
                c.push(s.clone());
                mine.push(c);
            }
        }
        chains.insert(s.clone(), mine);
    }
    let mut carrier = BTreeMap::new();
    for (top, list) in &chains {
        for chain in list {
            let fs = Simplex::new(chain.iter().map(bary_name));
            carrier.insert(fs.clone(), top.clone());
            fine.insert_simplex(fs);
        }
    }
    Ok(Barycentric {
        witness: SubdivisionWitness {
            fine,
            coarse: k.clone(),
            carrier,
        },
        origin,
    })
}

impl<S: Scalar> SubdivisionWitness<S> {
    /// `K` as a subdivision of itself.
    pub fn identity(k: &Complex<S>) -> Self {
        SubdivisionWitness {
            fine: k.clone(),
            coarse: k.clone(),
            carrier: k.simplices().map(|s| (s.clone(), s.clone())).collect(),
        }
    }

    /// Barycentric subdivision of the fine complex, carriers composed back to
    /// the coarse complex.
    pub fn refine(&self) -> Result<Barycentric<S>> {
        let sd = barycentric_subdivide(&self.fine)?;
        let carrier = sd
            .witness
            .carrier
            .iter()
            .map(|(t, mid)| (t.clone(), self.carrier[mid].clone()))
            .collect();
        Ok(Barycentric {
            witness: SubdivisionWitness {
                fine: sd.witness.fine,
                coarse: self.coarse.clone(),
                carrier,
            },
            origin: sd.origin,
        })
    }

    /// Fine simplices lying in the given coarse subcomplex.
    pub fn fine_part(&self, sub: &Complex<S>) -> Complex<S> {
        self.fine
            .restrict(self.carrier.iter().filter(|(_, c)| sub.contains(c)).map(|(t, _)| t))
    }

    pub fn carrier_of(&self, fine: &Simplex) -> Result<&Simplex> {
        self.carrier.get(fine).ok_or_else(|| Error::MissingCarrier(fine.clone()))
    }

    /// Exact check of the subdivision relation; an empty list means valid.
    pub fn verify(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut good: BTreeMap<&Simplex, Vec<Piece<S>>> = BTreeMap::new();
        for t in self.fine.simplices() {
            let Some(c) = self.carrier.get(t) else {
                out.push(Violation::new(t, t, "no carrier"));
                continue;
            };
            if !self.coarse.contains(c) {
                out.push(Violation::new(t, c, "carrier is not a coarse simplex"));
                continue;
            }
            let tp = self.fine.points_of(t);
            if !open_inside(&self.coarse.points_of(c), &tp) {
                out.push(Violation::new(t, c, "fine simplex is not inside its carrier"));
                continue;
            }
            good.entry(c)
                .or_default()
                .push((t.clone(), tp.iter().map(|p| p.to_vec()).collect()));
        }
        for c in self.coarse.simplices() {
            let pieces = good.get(c).map(Vec::as_slice).unwrap_or(&[]);
            if let Err(reason) = tiles(&self.coarse.points_of(c), pieces, |f| self.fine.contains(f)) {
                out.push(Violation::new(c, c, reason));
            }
        }
        out
    }
}

/// A piecewise-linear homeomorphism `|K'| -> |K|` given by vertex images on
/// the fine complex of a subdivision, with a target carrier in `K` per fine
/// simplex.
#[derive(Clone, Debug, PartialEq)]
pub struct PlHomeo<S: Scalar = Rational> {
    pub witness: SubdivisionWitness<S>,
    pub image: BTreeMap<VertexId, Point<S>>,
    pub target: BTreeMap<Simplex, Simplex>,
}

impl<S: Scalar> PlHomeo<S> {
    pub fn identity(witness: SubdivisionWitness<S>) -> Self {
        let image = witness
            .fine
            .used_vertices()
            .into_iter()
            .map(|v| {
                let p = witness.fine.point(&v).expect("vertex").clone();
                (v, p)
            })
            .collect();
        let target = witness.carrier.clone();
        PlHomeo {
            witness,
            image,
            target,
        }
    }

    /// Homeomorphism from vertex images, target carriers located in `K`.
    pub fn from_images(witness: SubdivisionWitness<S>, image: BTreeMap<VertexId, Point<S>>) -> Result<Self> {
        let mut target = BTreeMap::new();
        for t in witness.fine.simplices() {
            let pts = image_points(&image, t)?;
            let loc = witness.coarse.locate(&linalg::centroid(&pts))?;
            target.insert(t.clone(), loc.simplex);
        }
        Ok(PlHomeo {
            witness,
            image,
            target,
        })
    }

    pub fn image_of(&self, t: &Simplex) -> Result<Vec<&[S]>> {
        image_points(&self.image, t)
    }

    pub fn evaluate(&self, x: &[S]) -> Result<Point<S>> {
        let loc = self.witness.fine.locate(x)?;
        let pts = self.image_of(&loc.simplex)?;
        Ok(Point(linalg::combine(&loc.coords, &pts)))
    }
}

pub(crate) fn image_points<'a, S: Scalar>(
    image: &'a BTreeMap<VertexId, Point<S>>,
    t: &Simplex,
) -> Result<Vec<&'a [S]>> {
    t.vertices()
        .iter()
        .map(|v| image.get(v).map(Point::coords).ok_or_else(|| Error::MissingImage(v.clone())))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalityReport {
    pub partitions_simplices: bool,
    pub is_subdivision: bool,
    pub carrier_respecting: bool,
    pub partitions_targets: bool,
    pub violations: Vec<Violation>,
}

impl NormalityReport {
    pub fn is_normal(&self) -> bool {
        self.partitions_simplices && self.is_subdivision && self.carrier_respecting && self.partitions_targets
    }
}

/// Exact check of the three normality conditions. Each entry of `targets`
/// is a set of fine simplices whose union must be a union of images.
pub fn verify_normal<S: Scalar>(phi: &PlHomeo<S>, targets: &[BTreeSet<Simplex>]) -> NormalityReport {
    let w = &phi.witness;
    let mut violations = Vec::new();
    let mut partitions = true;
    let mut respecting = true;

    // where each open image lies in K
    let mut image_home: BTreeMap<&Simplex, Simplex> = BTreeMap::new();
    let mut per_coarse: BTreeMap<Simplex, Vec<Piece<S>>> = BTreeMap::new();
    for t in w.fine.simplices() {
        let pts = match phi.image_of(t) {
            Ok(p) => p,
            Err(e) => {
                partitions = false;
                violations.push(Violation::new(t, t, e.to_string()));
                continue;
            }
        };
        if !linalg::affinely_independent(&pts) {
            partitions = false;
            violations.push(Violation::new(t, t, "image is degenerate"));
            continue;
        }
        let home = match w.coarse.locate(&linalg::centroid(&pts)) {
            Ok(loc) => loc.simplex,
            Err(_) => {
                partitions = false;
                violations.push(Violation::new(t, t, "image leaves |K|"));
                continue;
            }
        };
        if !pts.iter().all(|p| w.coarse.closure_contains(&home, p)) {
            partitions = false;
            violations.push(Violation::new(t, &home, "image is not inside a single simplex"));
            continue;
        }
        if phi.target.get(t).is_some_and(|declared| *declared != home) {
            partitions = false;
            violations.push(Violation::new(t, &home, "declared target carrier is wrong"));
        }
        per_coarse
            .entry(home.clone())
            .or_default()
            .push((t.clone(), pts.iter().map(|p| p.to_vec()).collect()));
        image_home.insert(t, home);
    }

    for s in w.coarse.simplices() {
        let pieces = per_coarse.get(s).map(Vec::as_slice).unwrap_or(&[]);
        let outer = w.coarse.points_of(s);
        if let Err(reason) = tiles(&outer, pieces, |f| w.fine.contains(f)) {
            partitions = false;
            violations.push(Violation::new(s, s, format!("images do not partition: {reason}")));
        }
        for i in 0..pieces.len() {
            for j in i + 1..pieces.len() {
                let (a, ap) = &pieces[i];
                let (b, bp) = &pieces[j];
                if a.is_face_of(b) || b.is_face_of(a) {
                    continue;
                }
                let ar: Vec<&[S]> = ap.iter().map(Vec::as_slice).collect();
                let br: Vec<&[S]> = bp.iter().map(Vec::as_slice).collect();
                if lp::hulls_intersect(&ar, true, &br, true) {
                    partitions = false;
                    violations.push(Violation::new(a, b, "images overlap"));
                }
            }
        }
    }

    let sub = w.verify();
    let is_subdivision = sub.is_empty();
    violations.extend(sub);

    for t in w.fine.simplices() {
        let (Some(c), Some(home)) = (w.carrier.get(t), image_home.get(t)) else {
            continue;
        };
        if c != home {
            respecting = false;
            violations.push(Violation::new(t, c, "image leaves the carrier"));
        }
    }

    let mut partitions_targets = true;
    for target in targets {
        for t in w.fine.simplices() {
            let Some(home) = image_home.get(t) else { continue };
            let img: Vec<&[S]> = match phi.image_of(t) {
                Ok(p) => p,
                Err(_) => continue,
            };
            let mut inside = false;
            let mut outside = false;
            let mut witness = None;
            for (rho, c) in &w.carrier {
                if c != home {
                    continue;
                }
                if lp::hulls_intersect(&img, true, &w.fine.points_of(rho), true) {
                    if target.contains(rho) {
                        inside = true;
                    } else {
                        outside = true;
                    }
                    witness = Some(rho.clone());
                }
            }
            if inside && outside {
                partitions_targets = false;
                violations.push(Violation::new(
                    t,
                    &witness.expect("witness"),
                    "image straddles a partition target",
                ));
            }
        }
    }

    NormalityReport {
        partitions_simplices: partitions,
        is_subdivision,
        carrier_respecting: respecting,
        partitions_targets,
        violations,
    }
}

/// Extends a normal homeomorphism `phi0` of the closed subcomplex `kz` to a
/// normal homeomorphism of the closed complex `k`, keeping `phi0`'s fine
/// complex and values.
///
/// Skeleton induction: vertices of `k` outside `kz` are added fixed; then for
/// each dimension `m` and each `m`-simplex `s` outside `kz`, the fine
/// simplices triangulating its boundary are coned to the barycenter of `s`,
/// and the map on a cone is the affine extension sending the barycenter to
/// itself.
pub fn extend_normal<S: Scalar>(k: &Complex<S>, kz: &Complex<S>, phi0: &PlHomeo<S>) -> Result<PlHomeo<S>> {
    k.require_closed()?;
    kz.is_subcomplex_of(k)?;
    kz.require_closed()?;
    if phi0.witness.coarse.simplex_set() != kz.simplex_set() {
        return Err(Error::NotNormalInput("homeomorphism is not over the given subcomplex".into()));
    }
    let report = verify_normal(phi0, &[]);
    if !report.is_normal() {
        let first = report.violations.first().map(|v| format!("{} in {}: {}", v.fine, v.coarse, v.reason));
        return Err(Error::NotNormalInput(first.unwrap_or_default()));
    }

    let mut fine = phi0.witness.fine.clone();
    let mut carrier = phi0.witness.carrier.clone();
    let mut image = phi0.image.clone();
    let mut target = phi0.target.clone();

    for s in k.simplices_of_dim(0) {
        if kz.contains(s) {
            continue;
        }
        let v = &s.vertices()[0];
        let p = k.point(v).expect("vertex").clone();
        fine.insert_vertex(v.clone(), p.clone());
        fine.insert_simplex(s.clone());
        carrier.insert(s.clone(), s.clone());
        target.insert(s.clone(), s.clone());
        image.insert(v.clone(), p);
    }

    let top = k.dim().unwrap_or(0);
    for m in 1..=top {
        let stage: Vec<&Simplex> = k.simplices_of_dim(m).into_iter().filter(|s| !kz.contains(s)).collect();
        let mut additions = Vec::new();
        for s in stage {
            let boundary: Vec<Simplex> = carrier
                .iter()
                .filter(|(_, c)| *c != s && c.is_face_of(s))
                .map(|(t, _)| t.clone())
                .collect();
            let hat = bary_name(s);
            if fine.point(&hat).is_some() || k.point(&hat).is_some() {
                return Err(Error::Invalid(format!("vertex name clash on `{hat}`")));
            }
            additions.push((s.clone(), hat, k.barycenter(s), boundary));
        }
        for (s, hat, p, boundary) in additions {
            fine.insert_vertex(hat.clone(), p.clone());
            image.insert(hat.clone(), p);
            let apex = Simplex::vertex(hat.clone());
            fine.insert_simplex(apex.clone());
            carrier.insert(apex.clone(), s.clone());
            target.insert(apex, s.clone());
            for t in boundary {
                let cone = t.with_vertex(hat.clone());
                fine.insert_simplex(cone.clone());
                carrier.insert(cone.clone(), s.clone());
                target.insert(cone, s.clone());
            }
        }
    }

    Ok(PlHomeo {
        witness: SubdivisionWitness {
            fine,
            coarse: k.clone(),
            carrier,
        },
        image,
        target,
    })
}

/// The straight-line homotopy from the identity of `|K'|` to `phi`, with the
/// coarse carrier of each fine simplex as its witness.
pub fn canonical_homotopy<S: Scalar>(phi: &PlHomeo<S>) -> Result<HomotopyCertificate<S>> {
    let report = verify_normal(phi, &[]);
    if !report.is_normal() {
        let first = report.violations.first().map(|v| format!("{} in {}: {}", v.fine, v.coarse, v.reason));
        return Err(Error::NotNormal(first.unwrap_or_default()));
    }
    let w = &phi.witness;
    let from = w
        .fine
        .used_vertices()
        .into_iter()
        .map(|v| {
            let p = w.fine.point(&v).expect("vertex").clone();
            (v, p)
        })
        .collect();
    Ok(HomotopyCertificate {
        domain: w.coarse.clone(),
        codomain: w.coarse.clone(),
        fixed: Complex::empty(w.coarse.ambient_dim()),
        steps: vec![HomotopyStep {
            refinement: w.clone(),
            from,
            to: phi.image.clone(),
            common: w.carrier.clone(),
        }],
    })
}
