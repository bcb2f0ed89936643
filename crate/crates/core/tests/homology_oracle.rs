//! Homology against an independent oracle: ranks of boundary matrices over
//! Q and over F_p, built here from scratch, checked through the universal
//! coefficient theorem.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::Zero;
use plhtpy_core::algebra::{homology, relative_homology, ChainComplex};
use plhtpy_core::{corpus, AbelianGroup, Complex, Simplex};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Boundary matrix of dimension `n`, rows indexed by (n-1)-simplices.
fn boundary(k: &Complex, n: usize) -> Vec<Vec<i64>> {
    let rows: Vec<&Simplex> = if n == 0 { Vec::new() } else { k.simplices_of_dim(n - 1) };
    let index: BTreeMap<&Simplex, usize> = rows.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let cols = k.simplices_of_dim(n);
    let mut m = vec![vec![0i64; cols.len()]; rows.len()];
    for (j, s) in cols.iter().enumerate() {
        if n == 0 {
            continue;
        }
        for i in 0..s.len() {
            let mut face: Vec<_> = s.vertices().to_vec();
            face.remove(i);
            let f = Simplex::new(face);
            m[index[&f]][j] = if i % 2 == 0 { 1 } else { -1 };
        }
    }
    m
}

fn rank_q(m: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer((*x).into())).collect())
        .collect();
    gauss(&mut a, |x| x.is_zero(), |p, x| x / p, |x, f, y| x - f * y)
}

fn rank_p(m: &[Vec<i64>], p: i64) -> usize {
    let mut a: Vec<Vec<i64>> = m.iter().map(|r| r.iter().map(|x| x.rem_euclid(p)).collect()).collect();
    let inv = |x: i64| -> i64 {
        (1..p).find(|y| (x * y) % p == 1).expect("prime modulus")
    };
    gauss(
        &mut a,
        |x| *x == 0,
        |piv, x| (x * inv(*piv)) % p,
        |x, f, y| (x - f * y).rem_euclid(p),
    )
}

fn gauss<T: Clone>(
    a: &mut [Vec<T>],
    is_zero: impl Fn(&T) -> bool,
    div: impl Fn(&T, &T) -> T,
    sub: impl Fn(&T, &T, &T) -> T,
) -> usize {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !is_zero(&a[i][c])) else {
            continue;
        };
        a.swap(r, p);
        for i in 0..rows {
            if i != r && !is_zero(&a[i][c]) {
                let f = div(&a[r][c], &a[i][c]);
                let pivot_row = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                    *x = sub(x, &f, y);
                }
            }
        }
        r += 1;
    }
    r
}

/// Betti numbers over a field given by a rank function.
fn betti(k: &Complex, top: usize, rank: impl Fn(&[Vec<i64>]) -> usize) -> Vec<usize> {
    (0..=top)
        .map(|n| {
            let c = k.simplices_of_dim(n).len();
            c - rank(&boundary(k, n)) - rank(&boundary(k, n + 1))
        })
        .collect()
}

fn groups(k: &Complex, top: usize) -> Vec<AbelianGroup> {
    (0..=top).map(|n| homology(k, n).unwrap()).collect()
}

/// Checks all groups against the Q and F_2, F_3 ranks.
fn agrees_with_oracle(k: &Complex) -> Result<(), String> {
    let top = k.dim().unwrap_or(0);
    let g = groups(k, top);
    let q = betti(k, top, rank_q);
    for n in 0..=top {
        if g[n].rank != q[n] {
            return Err(format!("rank of H{n}: {} vs {}", g[n].rank, q[n]));
        }
    }
    for p in [2i64, 3] {
        let fp = betti(k, top, |m| rank_p(m, p));
        let divisible = |gr: &AbelianGroup| {
            gr.torsion
                .iter()
                .filter(|d| (*d % num_bigint::BigInt::from(p)).is_zero())
                .count()
        };
        for n in 0..=top {
            let below = if n == 0 { 0 } else { divisible(&g[n - 1]) };
            let predicted = g[n].rank + divisible(&g[n]) + below;
            if predicted != fp[n] {
                return Err(format!("H{n}(F_{p}): predicted {predicted}, oracle {}", fp[n]));
            }
        }
    }
    Ok(())
}

fn z(r: usize) -> AbelianGroup {
    AbelianGroup::free(r)
}

#[test]
fn corpus_groups() {
    let h = |name: &str, n: usize| homology(&corpus::load(name).unwrap().complex, n).unwrap();
    assert_eq!(h("tri3", 1), z(1));
    assert_eq!(h("torus7", 1), z(2));
    assert_eq!(h("torus7", 2), z(1));
    assert_eq!(h("rp6", 1).to_string(), "Z/2");
    assert_eq!(h("rp6", 2), z(0));
    assert_eq!(h("s2", 2), z(1));
    assert_eq!(h("wedge2", 1), z(2));
    let disk = corpus::load("disk").unwrap();
    assert_eq!(relative_homology(&disk.complex, disk.subcomplex("tri3").unwrap(), 2).unwrap(), z(1));
    for name in corpus::NAMES {
        agrees_with_oracle(&corpus::load(name).unwrap().complex).unwrap();
    }
}

#[test]
fn euler_characteristics() {
    // tri3, torus7, rp6, s2, disk: V - E + F counted by hand
    for (name, chi) in [("tri3", 0), ("torus7", 0), ("rp6", 1), ("s2", 2), ("disk", 1)] {
        let k = corpus::load(name).unwrap().complex;
        assert_eq!(k.euler_characteristic(), chi, "{name}");
        let q = betti(&k, k.dim().unwrap(), rank_q);
        let alt: i64 = q.iter().enumerate().map(|(n, b)| if n % 2 == 0 { *b as i64 } else { -(*b as i64) }).sum();
        assert_eq!(alt, chi, "{name}");
    }
}

/// Closure of random faces of the standard 6-simplex, which is always
/// a geometric complex.
fn random_closed(rng: &mut ChaCha8Rng) -> Complex {
    static FULL: OnceLock<Complex> = OnceLock::new();
    let full = FULL.get_or_init(|| corpus::simplex_closure(6));
    let faces: Vec<&Simplex> = full.simplices().filter(|s| s.len() <= 4).collect();
    let count = rng.gen_range(1..14);
    let picked: Vec<&Simplex> = (0..count).map(|_| faces[rng.gen_range(0..faces.len())]).collect();
    full.restrict(picked).closure()
}

#[test]
fn boundary_squared_vanishes_on_random_complexes() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..100 {
        let k = random_closed(&mut rng);
        assert!(k.is_closed());
        assert!(ChainComplex::new(&k).unwrap().boundary_squared_vanishes());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn random_complexes_match_the_oracle(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = random_closed(&mut rng);
        prop_assert_eq!(agrees_with_oracle(&k), Ok(()));
    }

    #[test]
    fn relative_to_itself_is_trivial(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = random_closed(&mut rng);
        for n in 0..=k.dim().unwrap_or(0) {
            prop_assert!(relative_homology(&k, &k, n).unwrap().is_trivial());
        }
    }
}
