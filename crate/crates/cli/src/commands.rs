use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use plhtpy_core::algebra::{homology, induced_map, relative_homology, verify_les, IntMatrix};
use plhtpy_core::cylinder::{cylinder_retraction, extend_homotopy};
use plhtpy_core::io::{write_certificate, write_homeo, write_plmap, Artifact};
use plhtpy_core::pi_one::{
    abelianization, beta_action, edge_path_presentation, hurewicz_h1, GroupVerdict, pi0, pi2_via_hurewicz, Presentation, Word,
};
use plhtpy_core::plmap::{simplicial_approximation, simplicialize_rel};
use plhtpy_core::scalar::Scalar;
use plhtpy_core::scx::{complex_digest, digest, write_complex};
use plhtpy_core::subdivision::{barycentric_subdivide, canonical_homotopy, extend_normal, verify_normal, NormalityReport};
use plhtpy_core::{corpus, Complex, Error, PlHomeo, PlMap, Rational, SubdivisionWitness, VertexId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::input::{builtin_map_text, load, load_complex, subcomplex, MAP_NAMES};
use crate::report::Report;

/// Settings shared by all subcommands.
pub struct Settings {
    pub seed: u64,
    pub max_rounds: usize,
}

fn f_vector(k: &Complex) -> String {
    let d = k.dim().map_or(0, |d| d + 1);
    (0..d)
        .map(|i| k.simplices_of_dim(i).len().to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn matrix_text(m: &IntMatrix) -> String {
    if m.rows() == 0 || m.cols() == 0 {
        return format!("[] ({}x{})", m.rows(), m.cols());
    }
    (0..m.rows())
        .map(|i| m.row(i).iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("; ")
}

fn write_artifact(report: &mut Report, out: &Option<PathBuf>, text: &str) -> Result<()> {
    if let Some(path) = out {
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
        report.artifacts.push(format!("{} sha256:{}", path.display(), digest(text)));
    }
    Ok(())
}

fn complex_input(report: &mut Report, reference: &str) -> Result<plhtpy_core::scx::ScxDocument<Rational>> {
    let (doc, d) = load_complex(reference)?;
    report.input(reference, d);
    Ok(doc)
}

fn map_input(report: &mut Report, reference: &str) -> Result<PlMap> {
    let l = load(reference)?;
    report.input(reference, l.digest);
    match l.artifact {
        Artifact::Map(f) => Ok(f),
        other => bail!("`{reference}` is a {} document, expected a plmap", other.kind()),
    }
}

fn homeo_input(report: &mut Report, reference: &str) -> Result<PlHomeo> {
    let l = load(reference)?;
    report.input(reference, l.digest);
    match l.artifact {
        Artifact::Homeo(h) => Ok(h),
        other => bail!("`{reference}` is a {} document, expected a homeo", other.kind()),
    }
}

fn base_vertex(k: &Complex, base: &Option<String>) -> Result<VertexId> {
    match base {
        Some(b) => Ok(VertexId::from(b.as_str())),
        None => k
            .used_vertices()
            .into_iter()
            .next()
            .ok_or_else(|| anyhow::anyhow!("the complex has no vertices")),
    }
}

fn normality_checks(report: &mut Report, n: &NormalityReport) {
    let witness = n
        .violations
        .first()
        .map(|v| format!("{} in {}: {}", v.fine, v.coarse, v.reason));
    report.check("partitions_simplices", n.partitions_simplices, witness.clone());
    report.check("is_subdivision", n.is_subdivision, witness.clone());
    report.check("carrier_respecting", n.carrier_respecting, witness.clone());
    report.check("partitions_targets", n.partitions_targets, witness);
}

fn random_word(rng: &mut ChaCha8Rng, generators: usize) -> Word {
    if generators == 0 {
        return Word::empty();
    }
    let len = rng.gen_range(0..7);
    Word::new((0..len).map(|_| {
        let g = rng.gen_range(1..=generators as i32);
        if rng.gen_bool(0.5) {
            g
        } else {
            -g
        }
    }))
}

pub fn validate(input: &str) -> Result<Report> {
    let mut report = Report::new("validate");
    let l = load(input)?;
    report.input(input, l.digest);
    report.value("kind", l.artifact.kind());
    match &l.artifact {
        Artifact::Complex(d) => {
            report.value("vertices", d.complex.used_vertices().len());
            report.value("simplices", d.complex.len());
            report.value("f_vector", f_vector(&d.complex));
            report.value("closed", d.complex.is_closed());
            if !d.subcomplexes.is_empty() {
                report.value("subcomplexes", d.subcomplexes.keys().cloned().collect::<Vec<_>>().join(" "));
            }
            report.check("valid", true, None);
        }
        Artifact::Map(f) => {
            let v = f.dom_subdivision.verify();
            let w = v.first().map(|v| format!("{} in {}: {}", v.fine, v.coarse, v.reason));
            report.check("subdivision", v.is_empty(), w);
            report.check("carriers", f.check().is_ok(), f.check().err().map(|e| e.to_string()));
            report.value("simplicial", f.is_simplicial());
        }
        Artifact::Homeo(h) => {
            let v = h.witness.verify();
            let w = v.first().map(|v| format!("{} in {}: {}", v.fine, v.coarse, v.reason));
            report.check("subdivision", v.is_empty(), w);
        }
        Artifact::Certificate(c) => {
            report.value("steps", c.steps.len());
            let r = c.verify();
            report.check("certificate", r.is_ok(), r.err().map(|e| e.to_string()));
        }
    }
    Ok(report)
}

pub fn subdivide(
    input: &str,
    times: usize,
    out: &Option<PathBuf>,
    witness_out: &Option<PathBuf>,
) -> Result<Report> {
    let mut report = Report::new("subdivide");
    let doc = complex_input(&mut report, input)?;
    if times == 0 {
        bail!("--times must be at least 1");
    }
    let mut w = barycentric_subdivide(&doc.complex)?.witness;
    for _ in 1..times {
        w = w.refine()?.witness;
    }
    report.value("times", times);
    report.value("f_vector", f_vector(&w.fine));
    report.value("fine_digest", complex_digest(&w.fine));
    let v = w.verify();
    let witness = v.first().map(|v| format!("{} in {}: {}", v.fine, v.coarse, v.reason));
    report.check("subdivision", v.is_empty(), witness);
    let subs = doc.subcomplexes.iter().map(|(n, a)| (n.clone(), w.fine_part(a))).collect();
    write_artifact(&mut report, out, &write_complex(&w.fine, &subs))?;
    write_artifact(&mut report, witness_out, &write_homeo(&PlHomeo::identity(w)))?;
    Ok(report)
}

pub fn star(input: &str, sub: &str, out: &Option<PathBuf>) -> Result<Report> {
    let mut report = Report::new("star");
    let doc = complex_input(&mut report, input)?;
    let a = subcomplex(sub, &doc.complex, Some(&doc))?;
    let st = doc.complex.star(&a);
    report.value("subcomplex", sub);
    report.value("simplices", st.len());
    report.value("closed", st.is_closed());
    report.value("digest", complex_digest(&st));
    write_artifact(&mut report, out, &write_complex(&st, &Default::default()))?;
    Ok(report)
}

pub fn core(input: &str, out: &Option<PathBuf>) -> Result<Report> {
    let mut report = Report::new("core");
    let doc = complex_input(&mut report, input)?;
    let c = doc.complex.core();
    report.value("simplices", c.len());
    report.value("f_vector", f_vector(&c));
    report.value("digest", complex_digest(&c));
    report.check("closed", c.is_closed(), c.missing_face().map(|(s, f)| format!("face {f} of {s}")));
    write_artifact(&mut report, out, &write_complex(&c, &Default::default()))?;
    Ok(report)
}

/// Writes the straight-line homotopy from the identity to `phi` when asked.
fn canonical_cert(report: &mut Report, phi: &PlHomeo, cert: &Option<PathBuf>) -> Result<()> {
    if cert.is_none() {
        return Ok(());
    }
    match canonical_homotopy(phi) {
        Ok(c) => {
            let v = c.verify();
            report.check("canonical_homotopy", v.is_ok(), v.err().map(|e| e.to_string()));
            write_artifact(report, cert, &write_certificate(&c))
        }
        Err(e) => {
            report.check("canonical_homotopy", false, Some(e.to_string()));
            Ok(())
        }
    }
}

pub fn extend_normal_cmd(
    input: &str,
    sub: &str,
    phi: &Option<String>,
    out: &Option<PathBuf>,
    cert: &Option<PathBuf>,
) -> Result<Report> {
    let mut report = Report::new("extend-normal");
    let doc = complex_input(&mut report, input)?;
    let kz = subcomplex(sub, &doc.complex, Some(&doc))?;
    let phi0 = match phi {
        Some(r) => homeo_input(&mut report, r)?,
        None => PlHomeo::identity(SubdivisionWitness::identity(&kz)),
    };
    let result = extend_normal(&doc.complex, &kz, &phi0)?;
    report.value("f_vector", f_vector(&result.witness.fine));
    report.value("fine_digest", complex_digest(&result.witness.fine));
    normality_checks(&mut report, &verify_normal(&result, &[]));
    let missing = phi0
        .witness
        .fine
        .simplices()
        .find(|s| !result.witness.fine.contains(s))
        .map(|s| format!("{s} is not in the extension"));
    report.check("contains_input_subdivision", missing.is_none(), missing);
    let moved = phi0
        .image
        .iter()
        .find(|(v, p)| result.image.get(*v) != Some(*p))
        .map(|(v, _)| format!("vertex `{v}`"));
    report.check("restricts_to_input", moved.is_none(), moved);
    write_artifact(&mut report, out, &write_homeo(&result))?;
    canonical_cert(&mut report, &result, cert)?;
    Ok(report)
}

pub fn verify_normal_cmd(input: &str, cert: &Option<PathBuf>) -> Result<Report> {
    let mut report = Report::new("verify-normal");
    let phi = homeo_input(&mut report, input)?;
    normality_checks(&mut report, &verify_normal(&phi, &[]));
    canonical_cert(&mut report, &phi, cert)?;
    Ok(report)
}

fn induced_values(report: &mut Report, g: &PlMap) -> Result<()> {
    let top = g.domain().dim().unwrap_or(0);
    for n in 0..=top {
        let m = induced_map(g, n)?;
        report.value(&format!("H{n}_map"), format!("{} -> {}: {}", m.source, m.target, matrix_text(&m.matrix)));
    }
    Ok(())
}

pub fn approximate(s: &Settings, input: &str, out: &Option<PathBuf>, cert: &Option<PathBuf>) -> Result<Report> {
    let mut report = Report::new("approximate");
    let f = map_input(&mut report, input)?;
    report.value("max_rounds", s.max_rounds);
    let a = match simplicial_approximation(&f, s.max_rounds) {
        Ok(a) => a,
        Err(e @ Error::RoundsExhausted { .. }) => {
            report.check("terminated", false, Some(e.to_string()));
            return Ok(report);
        }
        Err(e) => return Err(e.into()),
    };
    report.value("rounds", a.rounds);
    report.check("terminated", true, None);
    report.check("simplicial", a.map.is_simplicial(), None);
    let v = a.certificate.verify();
    report.check("certificate", v.is_ok(), v.err().map(|e| e.to_string()));
    report.check("certificate_starts_at_input", a.certificate.starts_at(&f)?, None);
    report.check("certificate_ends_at_output", a.certificate.ends_at(&a.map)?, None);
    induced_values(&mut report, &a.map)?;
    write_artifact(&mut report, out, &write_plmap(&a.map))?;
    write_artifact(&mut report, cert, &write_certificate(&a.certificate))?;
    Ok(report)
}

pub fn simplicialize(
    s: &Settings,
    input: &str,
    fixed: &str,
    out: &Option<PathBuf>,
    cert: &Option<PathBuf>,
) -> Result<Report> {
    let mut report = Report::new("simplicialize");
    let f = map_input(&mut report, input)?;
    let kc = subcomplex(fixed, f.domain(), None)?;
    report.value("fixed", fixed);
    let r = match simplicialize_rel(&f, &kc, s.max_rounds) {
        Ok(r) => r,
        Err(e @ Error::RoundsExhausted { .. }) => {
            report.check("terminated", false, Some(e.to_string()));
            return Ok(report);
        }
        Err(e) => return Err(e.into()),
    };
    report.value("rounds", r.rounds);
    report.value("barrier_e", r.barrier_e.len());
    report.value("barrier_d", r.barrier_d.len());

    let mut moved = None;
    for (v, p) in &r.result.vertex_image {
        let x = r.result.fine().point(v).expect("vertex");
        if kc.locate(x.coords()).is_ok() && f.evaluate(x.coords())? != *p {
            moved.get_or_insert_with(|| format!("vertex `{v}`"));
        }
    }
    report.check("equal_on_fixed", moved.is_none(), moved);
    report.check("simplicial_off_barrier", r.simplicial_off_barrier()?, None);
    let v = r.certificate.verify();
    report.check("certificate", v.is_ok(), v.err().map(|e| e.to_string()));
    report.check("certificate_fixed_set", r.certificate.fixed == kc, None);

    // H(x, 0) = g(x) everywhere and H(x, s) = g(x) on the fixed part,
    // sampled at barycentres of fine simplices
    let samples = [
        Rational::from_int(0),
        Rational::from_ratio(1, 3),
        Rational::from_ratio(1, 1),
    ];
    let mut blend_bad = None;
    let mut count = 0usize;
    for t in r.result.fine().simplices() {
        let x = r.result.fine().barycenter(t);
        let g = r.start.evaluate(x.coords())?;
        if r.blend(x.coords(), &samples[0])? != g {
            blend_bad.get_or_insert_with(|| format!("H(x, 0) at barycentre of {t}"));
        }
        if kc.locate(x.coords()).is_ok() {
            for s in &samples {
                if r.blend(x.coords(), s)? != g {
                    blend_bad.get_or_insert_with(|| format!("H(x, {s}) at barycentre of {t}"));
                }
            }
        }
        count += 1;
    }
    report.value("blend_samples", count);
    report.check("blend", blend_bad.is_none(), blend_bad);
    write_artifact(&mut report, out, &write_plmap(&r.result))?;
    write_artifact(&mut report, cert, &write_certificate(&r.certificate))?;
    Ok(report)
}

pub fn verify_cert(input: &str) -> Result<Report> {
    let mut report = Report::new("verify-cert");
    let l = load(input)?;
    report.input(input, l.digest);
    let c = match l.artifact {
        Artifact::Certificate(c) => c,
        other => bail!("`{input}` is a {} document, expected a certificate", other.kind()),
    };
    report.value("steps", c.steps.len());
    report.value("fixed_simplices", c.fixed.len());
    let v = c.verify();
    report.check("certificate", v.is_ok(), v.err().map(|e| e.to_string()));
    Ok(report)
}

pub fn extend_homotopy_cmd(f: &str, h: &str, sub: &str, out: &Option<PathBuf>) -> Result<Report> {
    let mut report = Report::new("extend-homotopy");
    let f = map_input(&mut report, f)?;
    let h = map_input(&mut report, h)?;
    let ka = subcomplex(sub, f.domain(), None)?;
    report.value("subcomplex", sub);
    let r = cylinder_retraction(f.domain(), &ka)?;
    let e = extend_homotopy(&f, &h, &r)?;
    report.value("f_vector", f_vector(e.map.fine()));
    report.value("fine_digest", complex_digest(e.map.fine()));
    let w = e.report.witness.clone();
    report.check("starts_at_f", e.report.starts_at_f, w.clone());
    report.check("extends_h", e.report.extends_h, w.clone());
    report.check("retraction_fixes_target", e.report.retraction.fixes_target, w.clone());
    report.check("retraction_image_in_target", e.report.retraction.image_in_target, w.clone());
    report.check("retraction_covers_cylinder", e.report.retraction.covers_cylinder, w);
    let c = e.map.check();
    report.check("carriers", c.is_ok(), c.err().map(|e| e.to_string()));
    write_artifact(&mut report, out, &write_plmap(&e.map))?;
    Ok(report)
}

fn dims(k: &Complex, dim: Option<usize>) -> Vec<usize> {
    match dim {
        Some(n) => vec![n],
        None => (0..=k.dim().unwrap_or(0)).collect(),
    }
}

pub fn homology_cmd(input: &str, dim: Option<usize>) -> Result<Report> {
    let mut report = Report::new("homology");
    let doc = complex_input(&mut report, input)?;
    doc.complex.require_closed()?;
    for n in dims(&doc.complex, dim) {
        report.value(&format!("H{n}"), homology(&doc.complex, n)?);
    }
    Ok(report)
}

pub fn rel_homology_cmd(input: &str, sub: &str, dim: Option<usize>) -> Result<Report> {
    let mut report = Report::new("rel-homology");
    let doc = complex_input(&mut report, input)?;
    let a = subcomplex(sub, &doc.complex, Some(&doc))?;
    report.value("subcomplex", sub);
    for n in dims(&doc.complex, dim) {
        report.value(&format!("H{n}(X,A)"), relative_homology(&doc.complex, &a, n)?);
    }
    Ok(report)
}

pub fn les_cmd(input: &str, sub: &str) -> Result<Report> {
    let mut report = Report::new("les");
    let doc = complex_input(&mut report, input)?;
    let a = subcomplex(sub, &doc.complex, Some(&doc))?;
    report.value("subcomplex", sub);
    let les = verify_les(&doc.complex, &a)?;
    for (i, node) in les.nodes.iter().enumerate() {
        let mut line = format!("{}", node.group);
        if let Some(m) = les.maps.get(i) {
            line.push_str(&format!(" -> [{}]", matrix_text(&m.matrix)));
        }
        report.value(&node.label, line);
    }
    let bad = les.nodes.iter().find(|n| !n.exact).map(|n| format!("not exact at {}", n.label));
    report.check("exact", bad.is_none(), bad);
    Ok(report)
}

pub fn pi0_cmd(input: &str) -> Result<Report> {
    let mut report = Report::new("pi0");
    let doc = complex_input(&mut report, input)?;
    let comps = pi0(&doc.complex);
    report.value("components", comps.len());
    for (i, c) in comps.iter().enumerate() {
        let names: Vec<&str> = c.iter().map(VertexId::as_str).collect();
        report.value(&format!("component{i}"), names.join(" "));
    }
    Ok(report)
}

fn presentation_values(report: &mut Report, p: &Presentation) {
    report.value("base", &p.base);
    report.value("generators", p.generators.len());
    report.value("relators", p.relators.len());
    report.value("presentation", p);
}

pub fn pi1_cmd(s: &Settings, input: &str, base: &Option<String>) -> Result<Report> {
    let mut report = Report::new("pi1");
    let doc = complex_input(&mut report, input)?;
    let b = base_vertex(&doc.complex, base)?;
    let p = edge_path_presentation(&doc.complex, &b)?;
    presentation_values(&mut report, &p);
    let ab = abelianization(&p);
    report.value("abelianization", &ab.group);
    report.value("group", p.verdict());
    report.value("seed", s.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let n = p.generators.len();
    let mut bad = None;
    for _ in 0..64 {
        let (u, v) = (random_word(&mut rng, n), random_word(&mut rng, n));
        if ab.project(&beta_action(&u, &v)) != ab.project(&v) {
            bad.get_or_insert_with(|| format!("u = {u}, v = {v}"));
        }
        if beta_action(&Word::empty(), &v) != v {
            bad.get_or_insert_with(|| format!("empty u moves {v}"));
        }
    }
    report.check("beta_abelian_invariance", bad.is_none(), bad);
    Ok(report)
}

pub fn hurewicz_cmd(s: &Settings, input: &str, base: &Option<String>) -> Result<Report> {
    let mut report = Report::new("hurewicz");
    let doc = complex_input(&mut report, input)?;
    let b = base_vertex(&doc.complex, base)?;
    let h = hurewicz_h1(&doc.complex, &b)?;
    presentation_values(&mut report, &h.presentation);
    report.value("abelianization", &h.abelianization.group);
    report.value("H1", h.homology.group());
    report.value("matrix", matrix_text(&h.matrix));
    report.check("isomorphism", h.is_isomorphism(), None);
    let missing = (0..h.homology.group().generator_count())
        .find(|j| h.preimage(*j).is_none())
        .map(|j| format!("H1 generator {j} has no preimage word"));
    report.check("onto", missing.is_none(), missing);
    report.value("seed", s.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let n = h.presentation.generators.len();
    let mut bad = None;
    for _ in 0..64 {
        let (u, v) = (random_word(&mut rng, n), random_word(&mut rng, n));
        let c = Word::commutator(&u, &v);
        if h.image(&c).iter().any(|x| x != &0.into()) {
            bad.get_or_insert_with(|| format!("[{u}, {v}]"));
        }
    }
    report.check("commutators_vanish", bad.is_none(), bad);
    Ok(report)
}

pub fn pi2_cmd(input: &str, base: &Option<String>) -> Result<Report> {
    let mut report = Report::new("pi2");
    let doc = complex_input(&mut report, input)?;
    let b = base_vertex(&doc.complex, base)?;
    match pi2_via_hurewicz(&doc.complex, &b, true) {
        Ok(p) => {
            report.value("pi2", &p.group);
            report.value("provenance", &p.provenance);
            report.check("simply_connected", true, None);
        }
        Err(Error::NotCertifiablySimplyConnected(why)) => {
            let e = format!("NotCertifiablySimplyConnected: {why}");
            let undecided = edge_path_presentation(&doc.complex, &b)
                .map(|p| p.verdict() == GroupVerdict::Unknown)
                .unwrap_or(false);
            if undecided {
                report.unknown("simply_connected", e);
            } else {
                report.check("simply_connected", false, Some(e));
            }
        }
        Err(e) => return Err(e.into()),
    }
    Ok(report)
}

pub fn euler_cmd(input: &str) -> Result<Report> {
    let mut report = Report::new("euler");
    let doc = complex_input(&mut report, input)?;
    let k = &doc.complex;
    let chi = k.euler_characteristic();
    report.value("euler_characteristic", chi);
    if k.is_closed() {
        let mut alt = 0i64;
        for n in 0..=k.dim().unwrap_or(0) {
            let r = homology(k, n)?.rank as i64;
            alt += if n % 2 == 0 { r } else { -r };
        }
        report.value("betti_sum", alt);
        report.check("matches_homology", alt == chi, Some(format!("{alt} != {chi}")));
    }
    Ok(report)
}

pub fn corpus_list() -> Report {
    let mut report = Report::new("corpus list");
    report.value("complexes", corpus::NAMES.join(" "));
    report.value("maps", MAP_NAMES.join(" "));
    report
}

/// Canonical text of a corpus entry.
pub fn corpus_text(name: &str) -> Result<String> {
    let l = load(&format!("corpus:{name}"))?;
    Ok(crate::input::canonical(&l.artifact))
}

pub fn corpus_emit(name: &str, out: &Path) -> Result<Report> {
    let mut report = Report::new("corpus emit");
    let text = corpus_text(name)?;
    report.input(&format!("corpus:{name}"), digest(&text));
    std::fs::write(out, &text).with_context(|| format!("writing {}", out.display()))?;
    report.artifacts.push(format!("{} sha256:{}", out.display(), digest(&text)));
    if builtin_map_text(name).is_none() {
        let back = plhtpy_core::scx::parse_scx::<Rational>(&std::fs::read_to_string(out)?)?;
        report.check(
            "round_trip",
            plhtpy_core::scx::write_doc(&back) == text,
            Some("re-read text differs".into()),
        );
    }
    Ok(report)
}
