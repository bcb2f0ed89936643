//! Homotopy certificates: sequences of straight-line homotopies whose
//! validity can be re-checked from the stored witnesses alone.

use std::collections::BTreeMap;

use crate::complex::{Complex, Point, Simplex, VertexId};
use crate::error::{Error, Result};
use crate::linalg;
use crate::plmap::{vertices_over, PlMap};
use crate::scalar::{Rational, Scalar};
use crate::subdivision::{image_points, SubdivisionWitness};

/// One straight-line step between two maps on a shared subdivision.
#[derive(Clone, Debug, PartialEq)]
pub struct HomotopyStep<S: Scalar = Rational> {
    pub refinement: SubdivisionWitness<S>,
    pub from: BTreeMap<VertexId, Point<S>>,
    pub to: BTreeMap<VertexId, Point<S>>,
    /// Closed codomain simplex containing both images of each fine simplex.
    pub common: BTreeMap<Simplex, Simplex>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HomotopyCertificate<S: Scalar = Rational> {
    pub domain: Complex<S>,
    pub codomain: Complex<S>,
    pub fixed: Complex<S>,
    pub steps: Vec<HomotopyStep<S>>,
}

fn invalid(step: usize, what: impl std::fmt::Display) -> Error {
    Error::InvalidCertificate(format!("step {step}: {what}"))
}

impl<S: Scalar> HomotopyCertificate<S> {
    pub fn single(
        domain: Complex<S>,
        codomain: Complex<S>,
        fixed: Complex<S>,
        refinement: SubdivisionWitness<S>,
        from: BTreeMap<VertexId, Point<S>>,
        to: BTreeMap<VertexId, Point<S>>,
        common: BTreeMap<Simplex, Simplex>,
    ) -> Self {
        HomotopyCertificate {
            domain,
            codomain,
            fixed,
            steps: vec![HomotopyStep {
                refinement,
                from,
                to,
                common,
            }],
        }
    }

    /// Constant homotopy at `f`.
    pub fn constant(f: &PlMap<S>, fixed: &Complex<S>) -> Self {
        HomotopyCertificate::single(
            f.domain().clone(),
            f.codomain.clone(),
            fixed.clone(),
            f.dom_subdivision.clone(),
            f.vertex_image.clone(),
            f.vertex_image.clone(),
            f.target_carrier.clone(),
        )
    }

    /// Concatenation; both certificates must share domain, codomain and
    /// fixed set.
    pub fn then(mut self, other: HomotopyCertificate<S>) -> Result<Self> {
        if self.domain != other.domain || self.codomain != other.codomain || self.fixed != other.fixed {
            return Err(Error::Invalid("certificates do not chain".into()));
        }
        self.steps.extend(other.steps);
        Ok(self)
    }

    fn map(&self, step: &HomotopyStep<S>, image: &BTreeMap<VertexId, Point<S>>) -> PlMap<S> {
        PlMap {
            dom_subdivision: step.refinement.clone(),
            codomain: self.codomain.clone(),
            vertex_image: image.clone(),
            target_carrier: step.common.clone(),
        }
    }

    pub fn from_map(&self, i: usize) -> PlMap<S> {
        self.map(&self.steps[i], &self.steps[i].from)
    }

    pub fn to_map(&self, i: usize) -> PlMap<S> {
        self.map(&self.steps[i], &self.steps[i].to)
    }

    pub fn starts_at(&self, f: &PlMap<S>) -> Result<bool> {
        match self.steps.first() {
            Some(_) => self.from_map(0).agrees_with(f),
            None => Ok(false),
        }
    }

    pub fn ends_at(&self, g: &PlMap<S>) -> Result<bool> {
        match self.steps.len() {
            0 => Ok(false),
            n => self.to_map(n - 1).agrees_with(g),
        }
    }

    /// `H(x, t)`, with the steps spread evenly over `[0, 1]`.
    pub fn evaluate(&self, x: &[S], t: &S) -> Result<Point<S>> {
        let n = self.steps.len();
        if n == 0 {
            return Err(Error::InvalidCertificate("no steps".into()));
        }
        let scaled = t.clone() * S::from_int(n as i64);
        let mut i = 0;
        while i + 1 < n && scaled >= S::from_int(i as i64 + 1) {
            i += 1;
        }
        let s = scaled - S::from_int(i as i64);
        let step = &self.steps[i];
        let loc = step.refinement.fine.locate(x)?;
        let f = linalg::combine(&loc.coords, &image_points(&step.from, &loc.simplex)?);
        let g = linalg::combine(&loc.coords, &image_points(&step.to, &loc.simplex)?);
        let w = [S::one() - s.clone(), s];
        Ok(Point(linalg::combine(&w, &[&f, &g])))
    }

    /// Re-checks every witness: subdivisions, common carriers, constancy on
    /// the fixed set and composition of consecutive steps.
    pub fn verify(&self) -> Result<()> {
        self.codomain
            .require_closed()
            .map_err(|e| Error::InvalidCertificate(e.to_string()))?;
        self.fixed
            .is_subcomplex_of(&self.domain)
            .map_err(|e| Error::InvalidCertificate(e.to_string()))?;
        if self.steps.is_empty() {
            return Err(Error::InvalidCertificate("no steps".into()));
        }
        for (i, step) in self.steps.iter().enumerate() {
            let w = &step.refinement;
            if w.coarse != self.domain {
                return Err(invalid(i, "refinement is not over the domain"));
            }
            if let Some(v) = w.verify().first() {
                return Err(invalid(i, format!("{} in {}: {}", v.fine, v.coarse, v.reason)));
            }
            if let Some((s, f)) = w.fine.missing_face() {
                return Err(invalid(i, format!("face {f} of {s} missing")));
            }
            for t in w.fine.simplices() {
                let c = step.common.get(t).ok_or_else(|| invalid(i, format!("no carrier for {t}")))?;
                if !self.codomain.contains(c) {
                    return Err(invalid(i, format!("{c} is not a codomain simplex")));
                }
                for image in [&step.from, &step.to] {
                    let pts = image_points(image, t).map_err(|e| invalid(i, e))?;
                    if !pts.iter().all(|p| self.codomain.closure_contains(c, p)) {
                        return Err(invalid(i, format!("image of {t} leaves {c}")));
                    }
                }
            }
            for v in vertices_over(w, &self.fixed) {
                if step.from[&v] != step.to[&v] {
                    return Err(invalid(i, format!("moves fixed vertex `{v}`")));
                }
            }
            if i > 0 {
                let agree = self
                    .to_map(i - 1)
                    .agrees_with(&self.from_map(i))
                    .map_err(|e| invalid(i, e))?;
                if !agree {
                    return Err(invalid(i, "does not start where the previous step ends"));
                }
            }
        }
        Ok(())
    }
}
