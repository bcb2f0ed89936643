//! SCX-M documents: PL maps, PL homeomorphisms and homotopy certificates.
//!
//! Every document is one top-level block. A subdivision is written as a
//! `domain` block (the coarse complex), a `fine` block and `carrier` lines.
//!
//! ```text
//! begin plmap
//! begin domain ... end domain
//! begin fine ... end fine
//! carrier a a.b^bary -> a b
//! begin codomain ... end codomain
//! image a 0 0
//! target a a.b^bary -> a b
//! end plmap
//! ```
//!
//! Homeomorphisms use the block name `homeo` and no codomain. Certificates
//! hold `domain` and `codomain` blocks, `fixed` lines and one `step` block
//! per straight-line step with `from`, `to` and `common` lines.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use crate::certificate::{HomotopyCertificate, HomotopyStep};
use crate::complex::{Complex, Point, Simplex, VertexId};
use crate::error::{Error, Result};
use crate::plmap::PlMap;
use crate::scalar::Scalar;
use crate::scx::{
    coords_text, parse_arrow, parse_coords, read_complex, simplex_words, sorted_by_dim, wrap_block, write_complex,
    Block, Entry, ScxDocument,
};
use crate::subdivision::{PlHomeo, SubdivisionWitness};

/// Any document the toolkit reads.
#[derive(Clone, Debug)]
pub enum Artifact<S: Scalar> {
    Complex(ScxDocument<S>),
    Map(PlMap<S>),
    Homeo(PlHomeo<S>),
    Certificate(HomotopyCertificate<S>),
}

impl<S: Scalar> Artifact<S> {
    pub fn kind(&self) -> &'static str {
        match self {
            Artifact::Complex(_) => "complex",
            Artifact::Map(_) => "plmap",
            Artifact::Homeo(_) => "homeo",
            Artifact::Certificate(_) => "certificate",
        }
    }
}

fn complex_text<S: Scalar>(k: &Complex<S>) -> String {
    write_complex(k, &BTreeMap::new())
}

fn arrow_lines(out: &mut String, keyword: &str, map: &BTreeMap<Simplex, Simplex>) {
    for s in sorted_by_dim(map.keys()) {
        writeln!(out, "{keyword} {} -> {}", simplex_words(s), simplex_words(&map[s])).unwrap();
    }
}

fn point_lines<S: Scalar>(out: &mut String, keyword: &str, map: &BTreeMap<VertexId, Point<S>>) {
    for (v, p) in map {
        writeln!(out, "{keyword} {v} {}", coords_text(p)).unwrap();
    }
}

fn witness_text<S: Scalar>(w: &SubdivisionWitness<S>) -> String {
    let mut out = wrap_block("domain", &complex_text(&w.coarse));
    out.push_str(&wrap_block("fine", &complex_text(&w.fine)));
    arrow_lines(&mut out, "carrier", &w.carrier);
    out
}

pub fn write_plmap<S: Scalar>(f: &PlMap<S>) -> String {
    let mut body = witness_text(&f.dom_subdivision);
    body.push_str(&wrap_block("codomain", &complex_text(&f.codomain)));
    point_lines(&mut body, "image", &f.vertex_image);
    arrow_lines(&mut body, "target", &f.target_carrier);
    wrap_block("plmap", &body)
}

pub fn write_homeo<S: Scalar>(phi: &PlHomeo<S>) -> String {
    let mut body = witness_text(&phi.witness);
    point_lines(&mut body, "image", &phi.image);
    arrow_lines(&mut body, "target", &phi.target);
    wrap_block("homeo", &body)
}

pub fn write_certificate<S: Scalar>(c: &HomotopyCertificate<S>) -> String {
    let mut body = wrap_block("domain", &complex_text(&c.domain));
    body.push_str(&wrap_block("codomain", &complex_text(&c.codomain)));
    for s in sorted_by_dim(c.fixed.simplices()) {
        writeln!(body, "fixed {}", simplex_words(s)).unwrap();
    }
    for step in &c.steps {
        let mut s = wrap_block("fine", &complex_text(&step.refinement.fine));
        arrow_lines(&mut s, "carrier", &step.refinement.carrier);
        point_lines(&mut s, "from", &step.from);
        point_lines(&mut s, "to", &step.to);
        arrow_lines(&mut s, "common", &step.common);
        body.push_str(&wrap_block("step", &s));
    }
    wrap_block("certificate", &body)
}

fn complex_block<S: Scalar>(block: &Block, name: &str) -> Result<Complex<S>> {
    Ok(read_complex(block.block(name)?, true)?.complex)
}

fn arrows(block: &Block, keyword: &str) -> Result<BTreeMap<Simplex, Simplex>> {
    let mut out = BTreeMap::new();
    for line in block.lines_with(keyword) {
        let (a, b) = parse_arrow(line)?;
        if out.insert(a.clone(), b).is_some() {
            return Err(line.error(format!("second `{keyword}` line for {a}")));
        }
    }
    Ok(out)
}

fn points<S: Scalar>(block: &Block, keyword: &str) -> Result<BTreeMap<VertexId, Point<S>>> {
    let mut out = BTreeMap::new();
    for line in block.lines_with(keyword) {
        let id = line
            .args()
            .first()
            .ok_or_else(|| line.error(format!("`{keyword}` needs a vertex")))?;
        let p = parse_coords(line, &line.args()[1..])?;
        if out.insert(VertexId::from(id.as_str()), p).is_some() {
            return Err(line.error(format!("second `{keyword}` line for `{id}`")));
        }
    }
    Ok(out)
}

fn witness<S: Scalar>(block: &Block, coarse: Complex<S>) -> Result<SubdivisionWitness<S>> {
    Ok(SubdivisionWitness {
        fine: complex_block(block, "fine")?,
        coarse,
        carrier: arrows(block, "carrier")?,
    })
}

fn read_plmap_block<S: Scalar>(block: &Block) -> Result<PlMap<S>> {
    let w = witness(block, complex_block(block, "domain")?)?;
    PlMap::with_carriers(
        w,
        complex_block(block, "codomain")?,
        points(block, "image")?,
        arrows(block, "target")?,
    )
}

fn read_homeo_block<S: Scalar>(block: &Block) -> Result<PlHomeo<S>> {
    Ok(PlHomeo {
        witness: witness(block, complex_block(block, "domain")?)?,
        image: points(block, "image")?,
        target: arrows(block, "target")?,
    })
}

fn read_certificate_block<S: Scalar>(block: &Block) -> Result<HomotopyCertificate<S>> {
    let domain: Complex<S> = complex_block(block, "domain")?;
    let codomain = complex_block(block, "codomain")?;
    let mut fixed = BTreeSet::new();
    for line in block.lines_with("fixed") {
        let s = Simplex::new(line.args().iter().map(|t| VertexId::from(t.as_str())));
        if !domain.contains(&s) {
            return Err(line.error(format!("fixed simplex {s} is not in the domain")));
        }
        fixed.insert(s);
    }
    let fixed = domain.restrict(fixed.iter());
    let steps = block
        .blocks("step")
        .map(|b| {
            Ok(HomotopyStep {
                refinement: witness(b, domain.clone())?,
                from: points(b, "from")?,
                to: points(b, "to")?,
                common: arrows(b, "common")?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HomotopyCertificate {
        domain,
        codomain,
        fixed,
        steps,
    })
}

/// Reads a plain SCX document or one SCX-M block.
pub fn read_artifact<S: Scalar>(text: &str) -> Result<Artifact<S>> {
    let root = Block::parse(text)?;
    let blocks: Vec<(&String, usize, &Block)> = root
        .entries
        .iter()
        .filter_map(|e| match e {
            Entry::Block { name, number, body } => Some((name, *number, body)),
            Entry::Line(_) => None,
        })
        .collect();
    match blocks.as_slice() {
        [] => Ok(Artifact::Complex(crate::scx::parse_scx(text)?)),
        [(name, number, body)] => {
            if let Some(line) = root.lines().next() {
                return Err(line.error("stray line outside the document block"));
            }
            match name.as_str() {
                "plmap" => read_plmap_block(body).map(Artifact::Map),
                "homeo" => read_homeo_block(body).map(Artifact::Homeo),
                "certificate" => read_certificate_block(body).map(Artifact::Certificate),
                other => Err(Error::Parse {
                    line: *number,
                    message: format!("unknown document block `{other}`"),
                }),
            }
        }
        [_, (_, number, _), ..] => Err(Error::Parse {
            line: *number,
            message: "more than one document block".into(),
        }),
    }
}

fn expect<S: Scalar, T>(a: Artifact<S>, want: &str, pick: impl FnOnce(Artifact<S>) -> Option<T>) -> Result<T> {
    let kind = a.kind();
    pick(a).ok_or_else(|| Error::Invalid(format!("expected a {want} document, found a {kind}")))
}

pub fn read_plmap<S: Scalar>(text: &str) -> Result<PlMap<S>> {
    expect(read_artifact(text)?, "plmap", |a| match a {
        Artifact::Map(f) => Some(f),
        _ => None,
    })
}

pub fn read_homeo<S: Scalar>(text: &str) -> Result<PlHomeo<S>> {
    expect(read_artifact(text)?, "homeo", |a| match a {
        Artifact::Homeo(h) => Some(h),
        _ => None,
    })
}

pub fn read_certificate<S: Scalar>(text: &str) -> Result<HomotopyCertificate<S>> {
    expect(read_artifact(text)?, "certificate", |a| match a {
        Artifact::Certificate(c) => Some(c),
        _ => None,
    })
}
