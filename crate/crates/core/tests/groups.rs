//! Edge-path groups: words, the conjugation action, Hurewicz and
//! naturality under simplicial maps.

use num_bigint::BigInt;
use num_traits::Zero;
use plhtpy_core::algebra::homology;
use plhtpy_core::pi_one::{
    abelianization, beta_action, edge_path_presentation, hurewicz_h1, naturality_check, pi0, GroupVerdict,
};
use plhtpy_core::subdivision::barycentric_subdivide;
use plhtpy_core::{corpus, Complex, PlMap, Presentation, SubdivisionWitness, VertexId, Word};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CONNECTED: [&str; 8] = ["tri3", "disk", "torus7", "rp6", "s2", "wedge2", "cube1", "cube2"];

fn base(k: &Complex) -> VertexId {
    k.vertex_simplices()[0].clone()
}

fn presentation(k: &Complex) -> Presentation {
    edge_path_presentation(k, &base(k)).unwrap()
}

fn word(max_gen: i32) -> impl Strategy<Value = Word> {
    proptest::collection::vec((1..=max_gen, any::<bool>()), 0..12)
        .prop_map(|v| Word::new(v.into_iter().map(|(g, inv)| if inv { -g } else { g })))
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

fn is_reduced(w: &Word) -> bool {
    w.letters().windows(2).all(|p| p[0] != -p[1])
}

proptest! {
    #[test]
    fn words_stay_reduced(u in word(3), v in word(3)) {
        prop_assert!(is_reduced(&u.then(&v)));
        prop_assert!(u.then(&u.inverse()).is_empty());
        prop_assert_eq!(u.inverse().inverse(), u.clone());
        prop_assert_eq!(u.then(&v).inverse(), v.inverse().then(&u.inverse()));
        prop_assert_eq!(Word::parse(&u.to_string()).unwrap(), u);
    }

    #[test]
    fn concatenation_is_associative(u in word(3), v in word(3), w in word(3)) {
        prop_assert_eq!(u.then(&v).then(&w), u.then(&v.then(&w)));
    }

    #[test]
    fn beta_is_an_action(u in word(2), w in word(2), v in word(2)) {
        prop_assert_eq!(beta_action(&Word::empty(), &v), v.clone());
        prop_assert_eq!(beta_action(&u, &beta_action(&w, &v)), beta_action(&u.then(&w), &v));
    }
}

#[test]
fn beta_is_invisible_after_abelianizing() {
    let k = corpus::load("wedge2").unwrap().complex;
    let p = presentation(&k);
    let ab = abelianization(&p);
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for _ in 0..1000 {
        let u = random_word(&mut rng, p.generators.len());
        let v = random_word(&mut rng, p.generators.len());
        assert_eq!(ab.project(&beta_action(&u, &v)), ab.project(&v), "u = {u}, v = {v}");
        assert!(ab.is_trivial_word(&Word::commutator(&u, &v)));
    }
}

fn check_hurewicz(name: &str, k: &Complex, rng: &mut ChaCha8Rng) {
    let h = hurewicz_h1(k, &base(k)).unwrap();
    assert!(h.is_isomorphism(), "{name}");
    assert_eq!(h.abelianization.group, homology(k, 1).unwrap(), "{name}");
    for j in 0..h.homology.group().generator_count() {
        let w = h.preimage(j).unwrap_or_else(|| panic!("{name}: no preimage of generator {j}"));
        let mut e = vec![BigInt::zero(); h.homology.group().generator_count()];
        e[j] = 1.into();
        assert_eq!(h.image(&w), h.homology.reduce(e), "{name}: generator {j}");
    }
    let n = h.presentation.generators.len();
    if n > 0 {
        for _ in 0..20 {
            let (u, v) = (random_word(rng, n), random_word(rng, n));
            assert!(h.image(&Word::commutator(&u, &v)).iter().all(Zero::is_zero), "{name}");
        }
    }
}

#[test]
fn hurewicz_on_the_corpus_and_its_subdivisions() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for name in CONNECTED {
        let k = corpus::load(name).unwrap().complex;
        check_hurewicz(name, &k, &mut rng);
        let fine = barycentric_subdivide(&k).unwrap().witness.fine;
        check_hurewicz(&format!("sd {name}"), &fine, &mut rng);
        assert_eq!(abelianization(&presentation(&fine)).group, abelianization(&presentation(&k)).group);
    }
}

#[test]
fn free_verdicts() {
    for (name, free) in [("tri3", true), ("wedge2", true), ("cube1", true), ("disk", false), ("torus7", false)] {
        let p = presentation(&corpus::load(name).unwrap().complex);
        assert_eq!(p.is_free(), free, "{name}");
    }
    for name in ["disk", "s2", "cube2"] {
        assert_eq!(presentation(&corpus::load(name).unwrap().complex).verdict(), GroupVerdict::Trivial);
    }
    let torus = presentation(&corpus::load("torus7").unwrap().complex);
    assert_ne!(torus.verdict(), GroupVerdict::Trivial);
}

fn samples(p: &Presentation, rng: &mut ChaCha8Rng) -> Vec<(Word, Word)> {
    let n = p.generators.len();
    let mut out = vec![(Word::empty(), Word::empty())];
    for i in 1..=n {
        for j in 1..=n {
            out.push((Word::generator(i), Word::generator(j)));
        }
    }
    if n > 0 {
        out.extend((0..10).map(|_| (random_word(rng, n), random_word(rng, n))));
    }
    out
}

#[test]
fn naturality_for_identity_constant_and_doubling() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for name in CONNECTED {
        let k = corpus::load(name).unwrap().complex;
        let p = presentation(&k);
        let id = PlMap::identity(&k).unwrap();
        let at_base = PlMap::constant(
            SubdivisionWitness::identity(&k),
            k.clone(),
            k.point(&p.base).unwrap().clone(),
        )
        .unwrap();
        for (u, v) in samples(&p, &mut rng) {
            let n = naturality_check(&id, &p, &p, &u, &v).unwrap();
            assert!(n.free_equal, "{name}: identity on {u}, {v}");
            let c = naturality_check(&at_base, &p, &p, &u, &v).unwrap();
            assert!(c.holds() && c.left.is_empty(), "{name}: constant on {u}, {v}");
        }
    }
    let f = corpus::deg2();
    let tri3 = corpus::load("tri3").unwrap().complex;
    let p = edge_path_presentation(&tri3, &"a".into()).unwrap();
    for (u, v) in samples(&p, &mut rng) {
        let n = naturality_check(&f, &p, &p, &u, &v).unwrap();
        assert!(n.holds(), "deg2 on {u}, {v}");
    }
}

#[test]
fn components() {
    let wedge = corpus::load("wedge2").unwrap().complex;
    assert_eq!(pi0(&wedge).len(), 1);
    let boundary = corpus::load("cube1").unwrap().subcomplex("boundary").unwrap().clone();
    assert_eq!(pi0(&boundary).len(), 2);
}
