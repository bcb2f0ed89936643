use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use plhtpy_core::io::{read_artifact, write_certificate, write_homeo, write_plmap, Artifact};
use plhtpy_core::scx::{digest, write_doc, ScxDocument};
use plhtpy_core::{corpus, Complex, Simplex};

/// Built-in maps and homeomorphisms, addressed like corpus complexes.
pub const MAP_NAMES: [&str; 4] = ["deg2", "rot", "perturbed-disk", "slide"];

pub fn builtin_map_text(name: &str) -> Option<String> {
    Some(match name {
        "deg2" => write_plmap(&corpus::deg2()),
        "rot" => write_plmap(&corpus::rot()),
        "perturbed-disk" => write_plmap(&corpus::perturbed_disk().0),
        "slide" => write_homeo(&corpus::slide_homeo()),
        _ => return None,
    })
}

fn corpus_dir() -> Option<PathBuf> {
    std::env::var_os("PLHTPY_CORPUS").map(PathBuf::from)
}

/// Text behind a reference: `corpus:<name>` or a file path.
pub fn load_text(reference: &str) -> Result<String> {
    if let Some(name) = reference.strip_prefix("corpus:") {
        if let Some(dir) = corpus_dir() {
            for ext in ["scx", "scxm"] {
                let path = dir.join(format!("{name}.{ext}"));
                if path.exists() {
                    return std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()));
                }
            }
            bail!("no `{name}.scx` or `{name}.scxm` in {}", dir.display());
        }
        if let Some(text) = corpus::text(name) {
            return Ok(text.to_string());
        }
        return builtin_map_text(name).ok_or_else(|| {
            anyhow!(
                "unknown corpus entry `{name}`; try one of {}, {}",
                corpus::NAMES.join(", "),
                MAP_NAMES.join(", ")
            )
        });
    }
    std::fs::read_to_string(reference).with_context(|| format!("reading {reference}"))
}

/// Canonical text of an artifact, the basis of its digest.
pub fn canonical(a: &Artifact<plhtpy_core::Rational>) -> String {
    match a {
        Artifact::Complex(d) => write_doc(d),
        Artifact::Map(f) => write_plmap(f),
        Artifact::Homeo(h) => write_homeo(h),
        Artifact::Certificate(c) => write_certificate(c),
    }
}

pub struct Loaded {
    pub artifact: Artifact<plhtpy_core::Rational>,
    pub digest: String,
}

pub fn load(reference: &str) -> Result<Loaded> {
    let (path, sub) = split_ref(reference);
    if sub.is_some() {
        bail!("`{reference}`: a subcomplex reference is not a document");
    }
    let text = load_text(path)?;
    let artifact = read_artifact(&text).with_context(|| format!("reading {path}"))?;
    let digest = digest(&canonical(&artifact));
    Ok(Loaded { artifact, digest })
}

pub fn load_complex(reference: &str) -> Result<(ScxDocument<plhtpy_core::Rational>, String)> {
    let loaded = load(reference)?;
    match loaded.artifact {
        Artifact::Complex(d) => Ok((d, loaded.digest)),
        other => bail!("`{reference}` is a {} document, expected a complex", other.kind()),
    }
}

fn split_ref(reference: &str) -> (&str, Option<&str>) {
    match reference.split_once('#') {
        Some((p, s)) => (p, Some(s)),
        None => (reference, None),
    }
}

/// Resolves a subcomplex of `host`: a name declared in `doc`, `@empty`,
/// `@all`, `@vertex:<id>` or `<reference>#<name>`.
pub fn subcomplex(given: &str, host: &Complex, doc: Option<&ScxDocument<plhtpy_core::Rational>>) -> Result<Complex> {
    let sub = if given == "@empty" {
        Complex::empty(host.ambient_dim())
    } else if given == "@all" {
        host.clone()
    } else if let Some(v) = given.strip_prefix("@vertex:") {
        let s = Simplex::vertex(v);
        if !host.contains(&s) {
            bail!("`{v}` is not a vertex of the complex");
        }
        host.restrict([&s])
    } else if let (path, Some(name)) = split_ref(given) {
        let (d, _) = load_complex(path)?;
        d.subcomplex(name)?.clone()
    } else {
        let d = doc.ok_or_else(|| anyhow!("`{given}`: name a subcomplex as <reference>#<name>"))?;
        d.subcomplex(given)?.clone()
    };
    sub.is_subcomplex_of(host)
        .with_context(|| format!("`{given}` is not a subcomplex of the input"))?;
    Ok(sub)
}
