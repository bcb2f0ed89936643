//! Acceptance run: one pass/fail line per criterion, then a nonzero exit
//! if any failed.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;

use plhtpy_core::cylinder::{prism_homotopy, prism_triangulate};
use plhtpy_core::io::write_plmap;
use plhtpy_core::pi_one::{abelianization, beta_action, edge_path_presentation, naturality_check};
use plhtpy_core::scx::write_complex;
use plhtpy_core::{corpus, ChainComplex, Complex, PlMap, Point, Rational, Scalar, Simplex, SubdivisionWitness, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn(&Env) -> Outcome);

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn has(&self, line: &str) -> bool {
        self.stdout.lines().any(|l| l == line)
    }

    fn value(&self, key: &str) -> Option<&str> {
        self.stdout.lines().find_map(|l| l.strip_prefix(key)?.strip_prefix(": "))
    }
}

struct Env {
    dir: tempfile::TempDir,
}

impl Env {
    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn p(&self, name: &str) -> String {
        self.path(name).display().to_string()
    }

    fn run(&self, args: &[&str]) -> Run {
        let out = Command::new(env!("CARGO_BIN_EXE_plhtpy"))
            .args(args)
            .current_dir(self.dir.path())
            .env_remove("PLHTPY_CORPUS")
            .output()
            .expect("binary runs");
        Run {
            code: out.status.code().unwrap_or(-1),
            stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
            stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
        }
    }

    /// Runs and requires exit 0.
    fn ok(&self, args: &[&str]) -> Result<Run, String> {
        let r = self.run(args);
        if r.code != 0 {
            return Err(format!("`{}` exited {}: {}{}", args.join(" "), r.code, r.stdout, r.stderr));
        }
        Ok(r)
    }
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn expect(r: &Run, line: &str) -> Outcome {
    ensure(r.has(line), || format!("missing `{line}` in\n{}", r.stdout))
}

fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

const COMPLEXES: [&str; 8] = corpus::NAMES;
const NORMALITY: [&str; 4] = ["partitions_simplices", "is_subdivision", "carrier_respecting", "partitions_targets"];

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).expect("temp file");
}

/// The closed 3-simplex with its boundary declared as `boundary`.
fn tetra_file(env: &Env) -> String {
    let k = corpus::simplex_closure(3);
    let boundary = k.restrict(k.simplices().filter(|s| s.len() < 4));
    let subs = [("boundary".to_string(), boundary)].into_iter().collect();
    let path = env.path("tetra.scx");
    write(&path, &write_complex(&k, &subs));
    path.display().to_string()
}

fn criterion_1(env: &Env) -> Outcome {
    let tetra = tetra_file(env);
    let cases = [
        ("disk-id", "corpus:disk", "tri3", None),
        ("disk-slide", "corpus:disk", "tri3", Some("corpus:slide")),
        ("tetra", tetra.as_str(), "boundary", None),
    ];
    for (tag, k, sub, phi) in cases {
        let out = env.p(&format!("{tag}.scxm"));
        let cert = env.p(&format!("{tag}.cert"));
        let mut args = vec!["extend-normal", k, "--sub", sub, "--out", &out, "--cert", &cert];
        if let Some(phi) = phi {
            args.extend(["--phi", phi]);
        }
        let r = env.ok(&args)?;
        for c in NORMALITY.iter().chain(&["contains_input_subdivision", "restricts_to_input"]) {
            expect(&r, &format!("check {c}: pass"))?;
        }
        let v = env.ok(&["verify-normal", &out])?;
        for c in NORMALITY {
            expect(&v, &format!("check {c}: pass"))?;
        }
    }
    Ok(())
}

/// Points the first `common` line of a subdivided vertex at a coarse
/// vertex outside its carrier.
fn tamper(cert: &str) -> Option<(String, String)> {
    let vertices: Vec<&str> = cert
        .lines()
        .skip_while(|l| *l != "begin domain")
        .take_while(|l| *l != "end domain")
        .filter_map(|l| l.strip_prefix("vertex "))
        .filter_map(|l| l.split_whitespace().next())
        .collect();
    let mut lines: Vec<String> = cert.lines().map(str::to_string).collect();
    for line in lines.iter_mut() {
        let Some((src, dst)) = line.strip_prefix("common ").and_then(|r| r.split_once(" -> ")) else {
            continue;
        };
        let carrier: Vec<&str> = dst.split_whitespace().collect();
        if !src.contains('^') || src.contains(' ') || carrier.len() < 2 {
            continue;
        }
        let Some(other) = vertices.iter().find(|v| !carrier.contains(v)) else {
            continue;
        };
        let src = src.to_string();
        *line = format!("common {src} -> {other}");
        return Some((lines.join("\n") + "\n", src));
    }
    None
}

fn criterion_2(env: &Env) -> Outcome {
    for tag in ["disk-id", "disk-slide", "tetra"] {
        let cert = env.p(&format!("{tag}.cert"));
        let r = env.ok(&["verify-cert", &cert])?;
        expect(&r, "check certificate: pass")?;
    }
    let text = std::fs::read_to_string(env.path("disk-slide.cert")).map_err(|e| e.to_string())?;
    let (broken, simplex) = tamper(&text).ok_or("nothing to tamper with")?;
    let path = env.path("tampered.cert");
    write(&path, &broken);
    let r = env.run(&["verify-cert", &path.display().to_string()]);
    ensure(r.code == 1, || format!("tampered certificate exited {}", r.code))?;
    let line = r.stdout.lines().find(|l| l.starts_with("check certificate: fail")).unwrap_or("");
    ensure(line.contains(&format!("[{simplex}]")), || format!("witness does not name [{simplex}]: {line}"))
}

fn criterion_3(env: &Env) -> Outcome {
    let cert = env.p("rot.cert");
    let out = env.p("rot.scxm");
    let r = env.ok(&["approximate", "corpus:rot", "--out", &out, "--cert", &cert])?;
    let rounds: usize = r.value("rounds").and_then(|v| v.parse().ok()).ok_or("no rounds")?;
    ensure(rounds <= 2, || format!("{rounds} rounds"))?;
    expect(&r, "check simplicial: pass")?;
    expect(&r, "H1_map: Z -> Z: 1")?;
    expect(&env.ok(&["verify-cert", &cert])?, "check certificate: pass")?;
    let d = env.ok(&["approximate", "corpus:deg2", "--cert", &env.p("deg2.cert")])?;
    expect(&d, "H1_map: Z -> Z: 2")?;
    expect(&env.ok(&["verify-cert", &env.p("deg2.cert")])?, "check certificate: pass")
}

fn criterion_4(env: &Env) -> Outcome {
    let cert = env.p("pinned.cert");
    let r = env.ok(&["simplicialize", "corpus:perturbed-disk", "--fixed", "corpus:disk#tri3", "--cert", &cert])?;
    for c in ["equal_on_fixed", "simplicial_off_barrier", "certificate", "certificate_fixed_set", "blend"] {
        expect(&r, &format!("check {c}: pass"))?;
    }
    let samples: usize = r.value("blend_samples").and_then(|v| v.parse().ok()).unwrap_or(0);
    ensure(samples > 0, || "no blend samples".into())?;
    expect(&env.ok(&["verify-cert", &cert])?, "check certificate: pass")
}

/// Writes `f` (the inclusion of `k` into `codomain`) and a homotopy on the
/// prism over `ka` from the inclusion to `end`.
fn homotopy_pair(
    env: &Env,
    tag: &str,
    k: &Complex,
    ka: &Complex,
    codomain: &Complex,
    end: BTreeMap<plhtpy_core::VertexId, Point>,
) -> (String, String) {
    let f = PlMap::new(SubdivisionWitness::identity(k), codomain.clone(), k.vertex_table().clone()).unwrap();
    let side = prism_triangulate(ka).unwrap();
    let h = prism_homotopy(&side, codomain, ka.vertex_table(), &end).unwrap();
    let (fp, hp) = (env.path(&format!("{tag}.f.scxm")), env.path(&format!("{tag}.h.scxm")));
    write(&fp, &write_plmap(&f));
    write(&hp, &write_plmap(&h));
    (fp.display().to_string(), hp.display().to_string())
}

fn homotopy_pairs(env: &Env) -> Vec<(String, String, String)> {
    let edge = corpus::load("cube1").unwrap().complex;
    let disk = corpus::load("disk").unwrap();
    let square = corpus::load("cube2").unwrap();
    let x0 = edge.restrict([&Simplex::vertex("x0")]);
    let mut out = Vec::new();

    let end = [("x0".into(), Point(vec![q(1, 2)]))].into_iter().collect();
    let (f, h) = homotopy_pair(env, "edge-pinned", &edge, &x0, &edge, end);
    out.push((f, h, "@vertex:x0".to_string()));

    let (f, h) = homotopy_pair(env, "edge-free", &edge, &Complex::empty(1), &edge, BTreeMap::new());
    out.push((f, h, "@empty".to_string()));

    let tri3 = disk.subcomplex("tri3").unwrap();
    let corner = disk.complex.point(&"a".into()).unwrap().clone();
    let end = tri3.vertex_table().keys().map(|v| (v.clone(), corner.clone())).collect();
    let (f, h) = homotopy_pair(env, "disk", &disk.complex, tri3, &disk.complex, end);
    out.push((f, h, "corpus:disk#tri3".to_string()));

    let boundary = square.subcomplex("boundary").unwrap();
    let end = boundary
        .vertex_table()
        .iter()
        .map(|(v, p)| (v.clone(), Point(p.0.iter().map(|c| (c + q(1, 2)) / q(2, 1)).collect())))
        .collect();
    let (f, h) = homotopy_pair(env, "square", &square.complex, boundary, &square.complex, end);
    out.push((f, h, "corpus:cube2#boundary".to_string()));
    out
}

fn criterion_5(env: &Env) -> Outcome {
    for (f, h, sub) in homotopy_pairs(env) {
        let r = env.ok(&["extend-homotopy", &f, &h, "--sub", &sub])?;
        for c in [
            "starts_at_f",
            "extends_h",
            "retraction_fixes_target",
            "retraction_image_in_target",
            "retraction_covers_cylinder",
            "carriers",
        ] {
            expect(&r, &format!("check {c}: pass")).map_err(|e| format!("{sub}: {e}"))?;
        }
    }
    Ok(())
}

/// Closure of random faces of the standard 6-simplex.
fn random_closed(full: &Complex, rng: &mut ChaCha8Rng) -> Complex {
    let faces: Vec<&Simplex> = full.simplices().filter(|s| s.len() <= 4).collect();
    let picked: Vec<&Simplex> = (0..rng.gen_range(1..14)).map(|_| faces[rng.gen_range(0..faces.len())]).collect();
    full.restrict(picked).closure()
}

fn criterion_6(env: &Env) -> Outcome {
    for (name, dim, group) in [("tri3", 1, "Z"), ("torus7", 1, "Z^2"), ("torus7", 2, "Z"), ("rp6", 1, "Z/2"), ("s2", 2, "Z")] {
        let r = env.ok(&["homology", &format!("corpus:{name}"), "--dim", &dim.to_string()])?;
        expect(&r, &format!("H{dim}: {group}")).map_err(|e| format!("{name}: {e}"))?;
    }
    let r = env.ok(&["rel-homology", "corpus:disk", "--sub", "tri3", "--dim", "2"])?;
    expect(&r, "H2(X,A): Z")?;
    // tri3 is a circle: three vertices, three edges
    for (name, chi) in [("tri3", 0), ("torus7", 0), ("rp6", 1), ("s2", 2), ("disk", 1)] {
        let r = env.ok(&["euler", &format!("corpus:{name}")])?;
        expect(&r, &format!("euler_characteristic: {chi}")).map_err(|e| format!("{name}: {e}"))?;
    }
    let full = corpus::simplex_closure(6);
    let mut rng = ChaCha8Rng::seed_from_u64(20240917);
    for i in 0..100 {
        let k = random_closed(&full, &mut rng);
        let c = ChainComplex::new(&k).map_err(|e| e.to_string())?;
        ensure(c.boundary_squared_vanishes(), || format!("random complex {i}"))?;
    }
    let mut pairs = vec![("corpus:disk".to_string(), "tri3".to_string()), ("corpus:torus7".into(), "@vertex:v0".into())];
    pairs.extend(COMPLEXES.iter().map(|n| (format!("corpus:{n}"), "@all".to_string())));
    for (k, sub) in pairs {
        let r = env.ok(&["les", &k, "--sub", &sub])?;
        expect(&r, "check exact: pass").map_err(|e| format!("{k} / {sub}: {e}"))?;
    }
    Ok(())
}

fn criterion_7(env: &Env) -> Outcome {
    for name in ["tri3", "wedge2", "torus7", "rp6", "disk", "s2"] {
        let fine = env.p(&format!("sd-{name}.scx"));
        env.ok(&["subdivide", &format!("corpus:{name}"), "--out", &fine])?;
        for input in [format!("corpus:{name}"), fine] {
            let r = env.ok(&["hurewicz", &input])?;
            for c in ["isomorphism", "onto", "commutators_vanish"] {
                expect(&r, &format!("check {c}: pass")).map_err(|e| format!("{input}: {e}"))?;
            }
            ensure(r.value("abelianization") == r.value("H1"), || format!("{input}: groups differ"))?;
            if name == "torus7" && input.starts_with("corpus:") {
                expect(&r, "matrix: 1 0; 0 1")?;
            }
        }
    }
    Ok(())
}

fn criterion_8(env: &Env) -> Outcome {
    expect(&env.ok(&["pi2", "corpus:s2"])?, "pi2: Z")?;
    let r = env.run(&["pi2", "corpus:torus7"]);
    ensure(r.code == 1, || format!("torus7 exited {}", r.code))?;
    ensure(
        r.stdout.lines().any(|l| l.starts_with("check simply_connected: fail (NotCertifiablySimplyConnected")),
        || r.stdout.clone(),
    )
}

fn random_word(rng: &mut ChaCha8Rng, gens: usize) -> Word {
    let len = rng.gen_range(0..10);
    Word::new((0..len).map(|_| {
        let g = rng.gen_range(1..=gens as i32);
        if rng.gen_bool(0.5) {
            g
        } else {
            -g
        }
    }))
}

fn criterion_9(env: &Env) -> Outcome {
    expect(&env.ok(&["pi1", "corpus:wedge2"])?, "check beta_abelian_invariance: pass")?;
    let wedge = corpus::load("wedge2").unwrap().complex;
    let p = edge_path_presentation(&wedge, &"a".into()).map_err(|e| e.to_string())?;
    let ab = abelianization(&p);
    let mut rng = ChaCha8Rng::seed_from_u64(20240917);
    for _ in 0..1000 {
        let (u, v) = (random_word(&mut rng, 2), random_word(&mut rng, 2));
        ensure(beta_action(&Word::empty(), &v) == v, || format!("β_1({v})"))?;
        ensure(ab.project(&beta_action(&u, &v)) == ab.project(&v), || format!("β_{u}({v})"))?;
    }
    for name in COMPLEXES {
        let k = corpus::load(name).unwrap().complex;
        let p = edge_path_presentation(&k, &k.vertex_simplices()[0]).map_err(|e| e.to_string())?;
        let id = PlMap::identity(&k).map_err(|e| e.to_string())?;
        let constant = PlMap::constant(SubdivisionWitness::identity(&k), k.clone(), k.point(&p.base).unwrap().clone())
            .map_err(|e| e.to_string())?;
        let n = p.generators.len();
        for _ in 0..10 {
            let (u, v) = if n == 0 {
                (Word::empty(), Word::empty())
            } else {
                (random_word(&mut rng, n), random_word(&mut rng, n))
            };
            for psi in [&id, &constant] {
                let c = naturality_check(psi, &p, &p, &u, &v).map_err(|e| e.to_string())?;
                ensure(c.holds(), || format!("{name}: {u}, {v}"))?;
            }
        }
    }
    let tri3 = corpus::load("tri3").unwrap().complex;
    let p = edge_path_presentation(&tri3, &"a".into()).map_err(|e| e.to_string())?;
    let deg2 = corpus::deg2();
    for _ in 0..20 {
        let (u, v) = (random_word(&mut rng, 1), random_word(&mut rng, 1));
        let c = naturality_check(&deg2, &p, &p, &u, &v).map_err(|e| e.to_string())?;
        ensure(c.holds(), || format!("deg2: {u}, {v}"))?;
    }
    Ok(())
}

/// Every subcommand on every corpus input, twice.
fn criterion_10(env: &Env) -> Outcome {
    let mut runs: Vec<Vec<String>> = Vec::new();
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    for name in COMPLEXES {
        let k = corpus::load(name).unwrap().complex;
        let v = k.vertex_simplices()[0].to_string();
        let input = format!("corpus:{name}");
        let vertex = format!("@vertex:{v}");
        let homeo = env.p(&format!("det-{name}.scxm"));
        let fine = env.p(&format!("det-{name}.scx"));
        for args in [
            s(&["validate", &input]),
            s(&["subdivide", &input, "--out", &fine]),
            s(&["star", &input, "--sub", &vertex]),
            s(&["core", &input]),
            s(&["extend-normal", &input, "--sub", "@empty", "--out", &homeo]),
            s(&["verify-normal", &homeo]),
            s(&["homology", &input]),
            s(&["rel-homology", &input, "--sub", &vertex]),
            s(&["les", &input, "--sub", &vertex]),
            s(&["pi0", &input]),
            s(&["pi1", &input]),
            s(&["hurewicz", &input]),
            s(&["pi2", &input]),
            s(&["euler", &input]),
            s(&["corpus", "emit", name]),
            s(&["homology", &input, "--format", "json"]),
        ] {
            runs.push(args);
        }
    }
    let cert = env.p("det.cert");
    runs.push(s(&["approximate", "corpus:deg2", "--cert", &cert]));
    runs.push(s(&["verify-cert", &cert]));
    runs.push(s(&["approximate", "corpus:rot"]));
    runs.push(s(&["simplicialize", "corpus:perturbed-disk", "--fixed", "corpus:disk#tri3"]));
    runs.push(s(&["corpus", "list"]));
    for (f, h, sub) in homotopy_pairs(env) {
        runs.push(s(&["extend-homotopy", &f, &h, "--sub", &sub]));
    }
    for args in runs {
        let a: Vec<&str> = args.iter().map(String::as_str).collect();
        let first = env.run(&a);
        let second = env.run(&a);
        ensure(first.code != 2, || format!("`{}`: {}", args.join(" "), first.stderr))?;
        ensure(
            first.code == second.code && first.stdout == second.stdout,
            || format!("`{}` differs between runs", args.join(" ")),
        )?;
        if args[0] != "corpus" {
            let digested = first.stdout.contains("sha256:") || first.stdout.contains("\"digest\"");
            ensure(digested, || format!("`{}` has no input digest", args.join(" ")))?;
        }
    }
    Ok(())
}

fn main() {
    let env = Env {
        dir: tempfile::tempdir().expect("temp dir"),
    };
    let criteria: [Criterion; 10] = [
        ("normal extension", criterion_1),
        ("canonical homotopy certificates", criterion_2),
        ("simplicial approximation", criterion_3),
        ("relative simplicialization", criterion_4),
        ("homotopy extension", criterion_5),
        ("homology oracles", criterion_6),
        ("first Hurewicz map", criterion_7),
        ("second homotopy group", criterion_8),
        ("conjugation action and naturality", criterion_9),
        ("determinism", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check(&env) {
            Ok(()) => println!("criterion {:>2} {name}: pass", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2} {name}: fail\n    {}", i + 1, e.replace('\n', "\n    "));
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
