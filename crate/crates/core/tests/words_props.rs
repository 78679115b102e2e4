use num_integer::Integer;
use num_rational::Rational64;
use proptest::prelude::*;
use smplab_core::words::{
    all_words, christoffel, christoffel_tree, is_lyndon, is_primitive, is_sturmian_word, least_rotation,
    lyndon_rotation, mechanical_prefix, signature, LyndonWords, Param, Variant,
};
use smplab_core::BinaryWord;

fn w(s: &str) -> BinaryWord {
    s.parse().unwrap()
}

fn word() -> impl Strategy<Value = BinaryWord> {
    prop::collection::vec(0u8..2, 1..24).prop_map(|v| BinaryWord::new(v).unwrap())
}

/// Brute-force least rotation: the minimum of all rotations.
fn min_rotation(w: &BinaryWord) -> BinaryWord {
    w.rotations().min().unwrap()
}

#[test]
fn christoffel_words_are_lyndon_and_primitive() {
    for q in 2..=30u64 {
        for p in 1..q {
            if p.gcd(&q) != 1 {
                continue;
            }
            let c = christoffel(p, q).unwrap();
            assert!(is_primitive(&c) && is_lyndon(&c), "{p}/{q}: {c}");
            assert_eq!(c.len() as u64, q);
            assert_eq!(c.ones() as u64, p);
        }
    }
}

#[test]
fn christoffel_tree_enumerates_each_word_once() {
    let nodes = christoffel_tree(8);
    assert_eq!(nodes.len(), (1 << 9) - 1);
    let mut words: Vec<BinaryWord> = nodes.iter().map(|n| n.word()).collect();
    for n in &nodes {
        let uv = n.word();
        assert_eq!(christoffel(uv.ones() as u64, uv.len() as u64).unwrap(), uv);
        // both factors are Christoffel words as well
        for f in [&n.u, &n.v] {
            assert_eq!(christoffel(f.ones() as u64, f.len() as u64).unwrap(), *f);
        }
    }
    let total = words.len();
    words.sort();
    words.dedup();
    assert_eq!(words.len(), total);
    // depth 8 reaches every slope with denominator <= 10
    for q in 2..=10u64 {
        for p in (1..q).filter(|p| p.gcd(&q) == 1) {
            assert!(words.binary_search(&christoffel(p, q).unwrap()).is_ok(), "{p}/{q}");
        }
    }
}

#[test]
fn mechanical_slope_is_frequency() {
    for q in 1..=25i64 {
        for p in 0..=q {
            let g = Param::Exact(Rational64::new(p, q));
            let zero = Param::Exact(Rational64::from_integer(0));
            let lower = mechanical_prefix(g, zero, Variant::Lower, q as usize).unwrap();
            assert_eq!(lower.ones() as i64, p, "{p}/{q}");
            let upper = mechanical_prefix(g, zero, Variant::Upper, q as usize).unwrap();
            assert_eq!(upper.ones() as i64, p, "{p}/{q}");
        }
    }
}

#[test]
fn power_signatures() {
    for n in 1..12 {
        let s = signature(&BinaryWord::a_pow_b(n)).unwrap();
        assert_eq!((s.m, s.k, s.l), (n, 1, 1));
        let s = signature(&BinaryWord::a_b_pow(n)).unwrap();
        assert_eq!((s.m, s.k, s.l), (1, n, 1));
    }
    // (n,1,1) and (1,m,1) vectors: any two distinct ones are independent
    let sigs: Vec<[i64; 3]> = (1..8).map(|n| [n, 1, 1]).chain((2..8).map(|n| [1, n, 1])).collect();
    for (i, a) in sigs.iter().enumerate() {
        for b in &sigs[i + 1..] {
            let cross = [
                a[1] * b[2] - a[2] * b[1],
                a[2] * b[0] - a[0] * b[2],
                a[0] * b[1] - a[1] * b[0],
            ];
            assert_ne!(cross, [0, 0, 0], "{a:?} {b:?}");
        }
    }
}

#[test]
fn sturmian_recognition() {
    for q in 1..=16i64 {
        for p in 0..=q {
            for i in 0..q {
                let prefix = mechanical_prefix(
                    Param::Exact(Rational64::new(p, q)),
                    Param::Exact(Rational64::new(i, q)),
                    Variant::Lower,
                    q as usize,
                )
                .unwrap();
                assert!(is_sturmian_word(&prefix).is_some(), "{p}/{q} + {i}/{q}: {prefix}");
            }
        }
    }
    assert!(is_sturmian_word(&w("0011")).is_none());
    assert!(is_sturmian_word(&w("010011")).is_none());
}

#[test]
fn lyndon_enumeration_matches_brute_force() {
    let fast: Vec<BinaryWord> = LyndonWords::new(14).collect();
    let mut slow: Vec<BinaryWord> = (1..=14).flat_map(all_words).filter(is_lyndon_slow).collect();
    slow.sort();
    let mut sorted = fast.clone();
    sorted.sort();
    assert_eq!(sorted, slow);
    // necklace counts: number of binary Lyndon words of length n
    let counts = [2, 1, 2, 3, 6, 9, 18, 30, 56, 99, 186, 335, 630, 1161];
    for (n, &c) in counts.iter().enumerate() {
        assert_eq!(fast.iter().filter(|w| w.len() == n + 1).count(), c, "n = {}", n + 1);
    }
}

fn is_lyndon_slow(w: &BinaryWord) -> bool {
    (1..w.len()).all(|k| w.rotate(k) > *w)
}

proptest! {
    #[test]
    fn least_rotation_is_minimum(v in word()) {
        prop_assert_eq!(least_rotation(&v), min_rotation(&v));
    }

    #[test]
    fn lyndon_rotation_iff_primitive(v in word()) {
        let primitive = (1..v.len()).all(|k| v.rotate(k) != v);
        prop_assert_eq!(is_primitive(&v), primitive);
        match lyndon_rotation(&v) {
            Ok(l) => {
                prop_assert!(primitive);
                prop_assert!(is_lyndon_slow(&l));
                prop_assert!(v.rotations().any(|r| r == l));
            }
            Err(_) => prop_assert!(!primitive),
        }
    }

    #[test]
    fn signature_is_rotation_invariant(v in word(), k in 0usize..24) {
        prop_assume!(is_primitive(&v));
        prop_assert_eq!(signature(&v).unwrap(), signature(&v.rotate(k % v.len())).unwrap());
    }

    #[test]
    fn word_display_round_trip(v in word()) {
        prop_assert_eq!(v.to_string().parse::<BinaryWord>().unwrap(), v.clone());
        let json = serde_json::to_string(&v).unwrap();
        prop_assert_eq!(serde_json::from_str::<BinaryWord>(&json).unwrap(), v);
    }
}
