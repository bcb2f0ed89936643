//! The SCX text format and its block-structured extension SCX-M.
//!
//! SCX is line oriented, one declaration per line, `#` starts a comment:
//!
//! ```text
//! ambient 2
//! vertex a 0 0
//! vertex b 1 0
//! vertex c 0 1/2
//! simplex a b
//! subcomplex ends a b
//! ```
//!
//! Subcomplex members are simplices written as comma-joined vertex lists.
//! SCX-M adds `image`, `carrier`, `target`, `common` and `fixed` lines plus
//! nested `begin <role>` / `end <role>` blocks holding further complexes.

use std::collections::BTreeMap;
use std::fmt::Write;

use sha2::{Digest, Sha256};

use crate::complex::{Complex, Point, Simplex, VertexId};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line {
    pub number: usize,
    pub tokens: Vec<String>,
}

impl Line {
    pub fn keyword(&self) -> &str {
        &self.tokens[0]
    }

    pub fn args(&self) -> &[String] {
        &self.tokens[1..]
    }

    pub fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.number,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Entry {
    Line(Line),
    Block { name: String, number: usize, body: Block },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Block {
    pub entries: Vec<Entry>,
}

impl Block {
    pub fn parse(text: &str) -> Result<Block> {
        let mut stack: Vec<(String, usize, Block)> = vec![(String::new(), 0, Block::default())];
        for (i, raw) in text.lines().enumerate() {
            let number = i + 1;
            let content = raw.split('#').next().unwrap_or("");
            let tokens: Vec<String> = content.split_whitespace().map(str::to_string).collect();
            if tokens.is_empty() {
                continue;
            }
            match tokens[0].as_str() {
                "begin" => {
                    let name = tokens.get(1).cloned().ok_or(Error::Parse {
                        line: number,
                        message: "`begin` needs a block name".into(),
                    })?;
                    stack.push((name, number, Block::default()));
                }
                "end" => {
                    if stack.len() == 1 {
                        return Err(Error::Parse {
                            line: number,
                            message: "`end` without `begin`".into(),
                        });
                    }
                    let (name, start, body) = stack.pop().expect("nonempty stack");
                    if let Some(n) = tokens.get(1) {
                        if *n != name {
                            return Err(Error::Parse {
                                line: number,
                                message: format!("`end {n}` closes block `{name}`"),
                            });
                        }
                    }
                    stack.last_mut().expect("root").2.entries.push(Entry::Block {
                        name,
                        number: start,
                        body,
                    });
                }
                _ => stack
                    .last_mut()
                    .expect("root")
                    .2
                    .entries
                    .push(Entry::Line(Line { number, tokens })),
            }
        }
        if stack.len() != 1 {
            let (name, start, _) = stack.pop().expect("open block");
            return Err(Error::Parse {
                line: start,
                message: format!("block `{name}` is never closed"),
            });
        }
        Ok(stack.pop().expect("root").2)
    }

    pub fn lines(&self) -> impl Iterator<Item = &Line> {
        self.entries.iter().filter_map(|e| match e {
            Entry::Line(l) => Some(l),
            Entry::Block { .. } => None,
        })
    }

    pub fn blocks<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a Block> + 'a {
        self.entries.iter().filter_map(move |e| match e {
            Entry::Block { name: n, body, .. } if n == name => Some(body),
            _ => None,
        })
    }

    pub fn block<'a>(&'a self, name: &'a str) -> Result<&'a Block> {
        self.blocks(name)
            .next()
            .ok_or_else(|| Error::Parse {
                line: 0,
                message: format!("missing block `{name}`"),
            })
    }

    pub fn lines_with<'a>(&'a self, keyword: &'a str) -> impl Iterator<Item = &'a Line> + 'a {
        self.lines().filter(move |l| l.keyword() == keyword)
    }
}

/// A parsed SCX document: the complex plus its named subcomplexes.
#[derive(Debug, Clone, PartialEq)]
pub struct ScxDocument<S: Scalar> {
    pub complex: Complex<S>,
    pub subcomplexes: BTreeMap<String, Complex<S>>,
}

impl<S: Scalar> ScxDocument<S> {
    pub fn new(complex: Complex<S>) -> Self {
        ScxDocument {
            complex,
            subcomplexes: BTreeMap::new(),
        }
    }

    pub fn subcomplex(&self, name: &str) -> Result<&Complex<S>> {
        self.subcomplexes
            .get(name)
            .ok_or_else(|| Error::UnknownSubcomplex(name.to_string()))
    }
}

const COMPLEX_KEYWORDS: [&str; 4] = ["ambient", "vertex", "simplex", "subcomplex"];

pub fn parse_simplex_token(token: &str) -> Simplex {
    Simplex::new(token.split(',').filter(|s| !s.is_empty()).map(VertexId::from))
}

/// Parses `a b c -> x y` into a pair of simplices.
pub fn parse_arrow(line: &Line) -> Result<(Simplex, Simplex)> {
    let args = line.args();
    let pos = args
        .iter()
        .position(|t| t == "->")
        .ok_or_else(|| line.error("expected `->`"))?;
    if pos == 0 || pos + 1 == args.len() {
        return Err(line.error("empty simplex around `->`"));
    }
    Ok((
        Simplex::new(args[..pos].iter().map(|s| VertexId::from(s.as_str()))),
        Simplex::new(args[pos + 1..].iter().map(|s| VertexId::from(s.as_str()))),
    ))
}

pub fn parse_coords<S: Scalar>(line: &Line, tokens: &[String]) -> Result<Point<S>> {
    tokens
        .iter()
        .map(|t| S::parse_coord(t).ok_or_else(|| line.error(format!("bad coordinate `{t}`"))))
        .collect::<Result<Vec<S>>>()
        .map(Point)
}

/// Reads the complex declarations of a block, validating geometry when
/// `validate` is set. Lines with other keywords are ignored here.
pub fn read_complex<S: Scalar>(block: &Block, validate: bool) -> Result<ScxDocument<S>> {
    let mut ambient: Option<usize> = None;
    let mut vertices = BTreeMap::new();
    let mut simplices = Vec::new();
    let mut subs: Vec<(&Line, String, Vec<Simplex>)> = Vec::new();
    for line in block.lines() {
        match line.keyword() {
            "ambient" => {
                let p = line
                    .args()
                    .first()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| line.error("`ambient` needs a dimension"))?;
                ambient = Some(p);
            }
            "vertex" => {
                let args = line.args();
                let id = args.first().ok_or_else(|| line.error("`vertex` needs an id"))?;
                if id.contains(',') {
                    return Err(line.error("vertex ids may not contain `,`"));
                }
                let p = parse_coords(line, &args[1..])?;
                if vertices.insert(VertexId::from(id.as_str()), p).is_some() {
                    return Err(line.error(format!("vertex `{id}` declared twice")));
                }
            }
            "simplex" => {
                if line.args().is_empty() {
                    return Err(line.error("`simplex` needs vertices"));
                }
                let s = Simplex::new(line.args().iter().map(|t| VertexId::from(t.as_str())));
                if s.len() != line.args().len() {
                    return Err(line.error("repeated vertex in simplex"));
                }
                simplices.push(s);
            }
            "subcomplex" => {
                let name = line
                    .args()
                    .first()
                    .ok_or_else(|| line.error("`subcomplex` needs a name"))?;
                let members = line.args()[1..].iter().map(|t| parse_simplex_token(t)).collect();
                subs.push((line, name.clone(), members));
            }
            _ => {}
        }
    }
    let ambient = ambient.ok_or(Error::Parse {
        line: 0,
        message: "missing `ambient` declaration".into(),
    })?;
    let complex = if validate {
        Complex::new(ambient, vertices, simplices)?
    } else {
        let mut set = std::collections::BTreeSet::new();
        for s in simplices {
            if !set.insert(s.clone()) {
                return Err(Error::DuplicateSimplex(s));
            }
        }
        for s in &set {
            for v in s.vertices() {
                if !vertices.contains_key(v) {
                    return Err(Error::UnknownVertex(v.clone()));
                }
            }
        }
        Complex::assemble(ambient, vertices, set)
    };
    let mut subcomplexes = BTreeMap::new();
    for (line, name, members) in subs {
        for m in &members {
            if !complex.contains(m) {
                return Err(line.error(format!("subcomplex `{name}`: {m} is not a simplex")));
            }
        }
        subcomplexes.insert(name, complex.restrict(members.iter()));
    }
    Ok(ScxDocument {
        complex,
        subcomplexes,
    })
}

/// Parses and validates a standalone SCX document. Only complex keywords
/// are accepted.
pub fn parse_scx<S: Scalar>(text: &str) -> Result<ScxDocument<S>> {
    let block = Block::parse(text)?;
    if let Some(Entry::Block { number, .. }) = block.entries.iter().find(|e| matches!(e, Entry::Block { .. })) {
        return Err(Error::Parse {
            line: *number,
            message: "blocks are not allowed in plain SCX".into(),
        });
    }
    for line in block.lines() {
        if !COMPLEX_KEYWORDS.contains(&line.keyword()) {
            return Err(line.error(format!("unknown keyword `{}`", line.keyword())));
        }
    }
    read_complex(&block, true)
}

pub fn simplex_token(s: &Simplex) -> String {
    s.vertices().iter().map(VertexId::as_str).collect::<Vec<_>>().join(",")
}

pub fn simplex_words(s: &Simplex) -> String {
    s.vertices().iter().map(VertexId::as_str).collect::<Vec<_>>().join(" ")
}

pub fn coords_text<S: Scalar>(p: &Point<S>) -> String {
    p.coords().iter().map(Scalar::canonical).collect::<Vec<_>>().join(" ")
}

fn by_dim(a: &&Simplex, b: &&Simplex) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// Canonical SCX text for a complex and named subcomplexes.
pub fn write_complex<S: Scalar>(k: &Complex<S>, subs: &BTreeMap<String, Complex<S>>) -> String {
    let mut out = String::new();
    writeln!(out, "ambient {}", k.ambient_dim()).unwrap();
    for (id, p) in k.vertex_table() {
        writeln!(out, "vertex {id} {}", coords_text(p)).unwrap();
    }
    let mut list: Vec<&Simplex> = k.simplices().collect();
    list.sort_by(by_dim);
    for s in list {
        writeln!(out, "simplex {}", simplex_words(s)).unwrap();
    }
    for (name, sub) in subs {
        let mut members: Vec<&Simplex> = sub.simplices().collect();
        members.sort_by(by_dim);
        write!(out, "subcomplex {name}").unwrap();
        for m in members {
            write!(out, " {}", simplex_token(m)).unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn write_doc<S: Scalar>(doc: &ScxDocument<S>) -> String {
    write_complex(&doc.complex, &doc.subcomplexes)
}

/// Wraps `body` in a named block.
pub fn wrap_block(name: &str, body: &str) -> String {
    let mut out = format!("begin {name}\n");
    out.push_str(body);
    if !body.ends_with('\n') && !body.is_empty() {
        out.push('\n');
    }
    writeln!(out, "end {name}").unwrap();
    out
}

pub fn sorted_by_dim<'a>(it: impl IntoIterator<Item = &'a Simplex>) -> Vec<&'a Simplex> {
    let mut v: Vec<&Simplex> = it.into_iter().collect();
    v.sort_by(by_dim);
    v
}

pub fn digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

pub fn complex_digest<S: Scalar>(k: &Complex<S>) -> String {
    digest(&write_complex(k, &BTreeMap::new()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    const DISK: &str = "# disk\nambient 2\nvertex a 0 0\nvertex b 1 0\nvertex c 0 1\n\
        simplex a\nsimplex b\nsimplex c\nsimplex a b\nsimplex b c\nsimplex a c\nsimplex a b c\n\
        subcomplex tri3 a b c a,b b,c a,c\n";

    #[test]
    fn parses_disk_with_subcomplex() {
        let doc: ScxDocument<Rational> = parse_scx(DISK).unwrap();
        assert_eq!(doc.complex.len(), 7);
        assert_eq!(doc.subcomplex("tri3").unwrap().len(), 6);
        assert!(doc.subcomplex("nope").is_err());
    }

    #[test]
    fn rejects_repeated_simplex() {
        let text = "ambient 1\nvertex a 0\nvertex b 1\nsimplex a b\nsimplex b a\n";
        assert!(matches!(parse_scx::<Rational>(text), Err(Error::DuplicateSimplex(_))));
    }

    #[test]
    fn reports_line_numbers() {
        let text = "ambient 1\nvertex a zero\n";
        assert_eq!(
            parse_scx::<Rational>(text).unwrap_err(),
            Error::Parse {
                line: 2,
                message: "bad coordinate `zero`".into()
            }
        );
    }

    #[test]
    fn canonical_text_round_trips() {
        let doc: ScxDocument<Rational> = parse_scx(DISK).unwrap();
        let text = write_doc(&doc);
        let again: ScxDocument<Rational> = parse_scx(&text).unwrap();
        assert_eq!(again, doc);
        assert_eq!(write_doc(&again), text);
    }

    #[test]
    fn nested_blocks() {
        let b = Block::parse("x 1\nbegin outer\nbegin inner\ny 2\nend inner\nend outer\n").unwrap();
        assert_eq!(b.lines().count(), 1);
        let outer = b.block("outer").unwrap();
        assert_eq!(outer.block("inner").unwrap().lines().count(), 1);
        assert!(Block::parse("begin a\n").is_err());
        assert!(Block::parse("end\n").is_err());
    }
}
