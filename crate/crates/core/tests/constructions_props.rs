mod common;

use common::{normal_pairs, normal_pairs_where, TOL};
use proptest::prelude::*;
use smplab_core::constructions::{counterexample_family, lambert_c, realize_from_tuple, symmetrize, verify_example};
use smplab_core::linalg::{realizable, word_product};
use smplab_core::regions::classify;
use smplab_core::words::all_words;
use smplab_core::{BinaryWord, FiveTuple};

fn tuple_close(a: &FiveTuple, b: &FiveTuple, tol: f64) -> bool {
    let s = 1.0 + a.as_array().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    a.as_array()
        .iter()
        .zip(b.as_array())
        .all(|(x, y)| (x - y).abs() <= tol * s * s)
}

#[test]
fn realize_round_trip() {
    for p in normal_pairs(601, 10_000) {
        let t = p.five_tuple();
        let q = realize_from_tuple(&t).unwrap();
        assert!(tuple_close(&q.five_tuple(), &t, 1e-9), "{t:?} -> {:?}", q.five_tuple());
    }
}

#[test]
fn symmetrized_pairs_are_strictly_submultiplicative() {
    let mut checked = 0;
    for p in normal_pairs_where(602, 100, |p| classify(p, TOL).in_cross.is_true()) {
        let Ok(s) = symmetrize(&p, TOL) else { continue };
        checked += 1;
        assert!(s.a.is_symmetric() && s.b.is_symmetric());
        assert!(tuple_close(&s.five_tuple(), &p.five_tuple(), 1e-9));
        let (na, nb) = (s.a.operator_norm_2(), s.b.operator_norm_2());
        for n in 2..=6 {
            for w in all_words(n).filter(|w| w.zeros() > 0 && w.ones() > 0) {
                let bound = na.powi(w.zeros() as i32) * nb.powi(w.ones() as i32);
                let norm = word_product(&s, &w).operator_norm_2();
                assert!(norm < bound * (1.0 - 1e-12), "{w}: {norm} vs {bound}");
            }
        }
    }
    assert!(checked >= 95, "{checked}");
}

#[test]
fn lambert_constant() {
    let c = lambert_c();
    assert!(c > 0.278 && c < 0.279);
    // c e^c = 1/e
    assert!((c * c.exp() - (-1.0f64).exp()).abs() < 1e-15);
}

#[test]
fn family_invariants() {
    for n in 1..=8 {
        let fam = counterexample_family(n).unwrap();
        let s = &fam.polygon;
        assert!((s.operator_norm(&fam.a) - 1.0).abs() <= 1e-12, "n={n}");
        assert!((s.operator_norm(&fam.b) - 1.0).abs() <= 1e-12, "n={n}");
        for v in s.vertices() {
            assert!(s.gauge(fam.a.apply(v)) <= 1.0 + 1e-12);
            assert!(s.gauge(fam.b.apply(v)) <= 1.0 + 1e-12);
        }
        let smp = word_product(&fam.pair(), &fam.smp_word());
        assert!((smp.spectral_radius() - 1.0).abs() <= 1e-10, "n={n}");
    }
}

#[test]
fn family_graph_structure() {
    for n in 1..=8 {
        let fam = counterexample_family(n).unwrap();
        let s = &fam.polygon;
        let v = fam.v();
        let close = |p: [f64; 2], q: [f64; 2]| (p[0] - q[0]).hypot(p[1] - q[1]) <= 1e-10;
        let is_vertex = |p: [f64; 2]| s.vertices().iter().any(|&q| close(p, q));
        for i in 0..n {
            assert!(close(fam.a.apply(v[i]), v[i + 1]), "n={n} i={i}");
        }
        let an = fam.a.apply(v[n]);
        assert!(
            !is_vertex(an) && s.gauge(an) < 1.0 - 1e-9,
            "n={n}: A v_n gauge {}",
            s.gauge(an)
        );
        assert!(close(fam.b.apply(v[n]), v[0]), "n={n}");
        for (i, &vi) in v.iter().enumerate().take(n) {
            assert!(s.gauge(fam.b.apply(vi)) <= 1.0 + 1e-12, "n={n} i={i}");
        }
    }
}

#[test]
fn family_smp_is_unique() {
    for n in 1..=4 {
        let r = verify_example(n, 2 * n + 4).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.best_word, BinaryWord::a_pow_b(n));
        assert!(r.gap > 0.0);
    }
}

proptest! {
    #[test]
    fn realize_any_realizable_tuple(x in -5.0f64..5.0, y in -5.0f64..5.0, z in -20.0f64..20.0, u in -5.0f64..5.0, v in -5.0f64..5.0) {
        let t = FiveTuple::new(x, y, z, u, v);
        prop_assume!(realizable(&t));
        let p = realize_from_tuple(&t).unwrap();
        prop_assert!(tuple_close(&p.five_tuple(), &t, 1e-9), "{:?} -> {:?}", t, p.five_tuple());
    }
}
