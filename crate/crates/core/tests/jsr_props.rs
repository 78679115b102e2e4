mod common;

use common::{normal_pairs, normal_pairs_where, pair, TOL};
use proptest::prelude::*;
use smplab_core::jsr::{brute_force, certify, gelfand_scan, Direction, Norm, MAX_BRUTE_FORCE_LEN};
use smplab_core::linalg::word_product;
use smplab_core::regions::classify;
use smplab_core::words::{all_words, least_rotation};
use smplab_core::{Error, Mat2, MatrixPair};

/// Exhaustive oracle over all `2ᵏ` words: `(max ρ^{1/k}` over primitive words,
/// `max ‖·‖^{1/k}` over all words) per length.
fn naive_bounds(p: &MatrixPair, max_len: usize) -> Vec<(f64, f64)> {
    (1..=max_len)
        .map(|k| {
            all_words(k).fold((0.0f64, 0.0f64), |(r, n), w| {
                let m = word_product(p, &w);
                let e = 1.0 / k as f64;
                let rho = if w.is_primitive() {
                    m.spectral_radius().powf(e)
                } else {
                    0.0
                };
                (r.max(rho), n.max(m.operator_norm_2().powf(e)))
            })
        })
        .collect()
}

#[test]
fn brute_force_matches_naive_enumeration() {
    for p in normal_pairs(401, 60) {
        let r = brute_force(&p, 9, &Norm::Euclid).unwrap();
        let naive = naive_bounds(&p, 9);
        for (b, (rho, norm)) in r.per_length.iter().zip(&naive) {
            assert!(
                (b.rho_root - rho).abs() <= 1e-12 * rho.max(1.0),
                "k={} {} {}",
                b.k,
                b.rho_root,
                rho
            );
            assert!(
                (b.norm_root - norm).abs() <= 1e-12 * norm.max(1.0),
                "k={} {} {}",
                b.k,
                b.norm_root,
                norm
            );
        }
        let lower = naive.iter().map(|x| x.0).fold(0.0, f64::max);
        let upper = naive.iter().map(|x| x.1).fold(f64::INFINITY, f64::min);
        assert!((r.lower - lower).abs() <= 1e-12 * lower.max(1.0));
        assert!((r.upper - upper).abs() <= 1e-12 * upper.max(1.0));
    }
}

#[test]
fn cross_pairs_have_single_letter_smps() {
    for p in normal_pairs_where(402, 100, |p| classify(p, TOL).in_cross.is_true()) {
        let r = brute_force(&p, 10, &Norm::Euclid).unwrap();
        let rho = p.a.spectral_radius().max(p.b.spectral_radius());
        assert_eq!(r.best_word.len(), 1, "{p:?}");
        assert!((r.lower - rho).abs() <= 1e-9 * rho);
        for b in &r.per_length[1..] {
            // no mixed word reaches the letter value
            assert!(
                b.rho_root < rho * (1.0 - 1e-9) || b.best_word.len() == 1,
                "{p:?} k={}",
                b.k
            );
        }
    }
}

#[test]
fn negative_determinant_smps() {
    for p in normal_pairs_where(403, 100, |p| classify(p, TOL).in_neg.is_true()) {
        let r = brute_force(&p, 10, &Norm::Euclid).unwrap();
        assert!(
            ["0", "1", "01"].contains(&r.best_word.to_string().as_str()),
            "{p:?}: {}",
            r.best_word
        );
    }
}

#[test]
fn mixed_determinant_smps_are_oriented_powers() {
    let pairs = normal_pairs_where(404, 100, |p| {
        let f = classify(p, TOL);
        f.in_mix.is_true() && !f.reducible.is_true() && p.a.det() * p.b.det() < 0.0
    });
    for p in pairs {
        let r = brute_force(&p, 12, &Norm::Euclid).unwrap();
        let dir = if p.a.det() > 0.0 {
            Direction::APowB
        } else {
            Direction::BPowA
        };
        let ok = r.best_word.len() == 1 || (1..12).any(|n| least_rotation(&dir.word(n)) == r.best_word);
        assert!(ok, "{p:?}: {}", r.best_word);
    }
}

#[test]
fn certified_values_match_brute_force() {
    let mut certified = 0;
    for p in normal_pairs(405, 300) {
        let c = certify(&p, TOL).unwrap();
        if !c.candidate.certified {
            continue;
        }
        certified += 1;
        let jsr = c.jsr.unwrap();
        let r = brute_force(&p, 12, &Norm::Euclid).unwrap();
        assert!(
            r.lower <= jsr * (1.0 + 1e-9),
            "{p:?}: brute {} > certified {jsr}",
            r.lower
        );
        if c.candidate.word.len() <= 12 {
            assert!((r.lower - jsr).abs() <= 1e-9 * jsr, "{p:?}: {} vs {jsr}", r.lower);
        }
        assert!(jsr <= r.upper * (1.0 + 1e-12));
    }
    assert!(certified > 150, "{certified}");
}

#[test]
fn gelfand_scan_finds_known_peak() {
    // A = diag(1, 0.5)-like contraction, B rank one: ρ(AⁿB) = |(Aⁿ)_{11}|·1 peaks at n = 0
    let p = MatrixPair::new(Mat2::diag(1.0, 0.5), Mat2::new(2.0, 0.0, 0.0, 0.0));
    let g = gelfand_scan(&p, Direction::APowB).unwrap();
    assert!(g.terminated);
    assert_eq!(g.n_star, Some(0));
    assert!((g.value - 2.0).abs() < 1e-12);
    // the zero slot is reported by name
    let z = MatrixPair::new(Mat2::ZERO, Mat2::IDENTITY);
    assert!(matches!(
        gelfand_scan(&z, Direction::APowB),
        Err(Error::ZeroMatrix("A"))
    ));
    assert!(matches!(
        gelfand_scan(&z, Direction::BPowA),
        Err(Error::ZeroMatrix("A"))
    ));
}

#[test]
fn length_limit_is_enforced() {
    let p = normal_pairs(406, 1)[0];
    assert!(matches!(
        brute_force(&p, MAX_BRUTE_FORCE_LEN + 1, &Norm::Euclid),
        Err(Error::WordTooLong { .. })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sandwich(p in pair()) {
        prop_assume!(p.a.max_abs() > 1e-3 || p.b.max_abs() > 1e-3);
        let r = brute_force(&p, 10, &Norm::Euclid).unwrap();
        prop_assert!(r.lower <= r.upper * (1.0 + 1e-12));
        let pl = &r.per_length;
        for b in pl {
            prop_assert!(b.rho_root <= b.norm_root * (1.0 + 1e-12));
            if 2 * b.k <= pl.len() {
                prop_assert!(pl[2 * b.k - 1].norm_root <= b.norm_root * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn jsr_bounds_scale_linearly(p in pair(), s in 0.1f64..5.0) {
        prop_assume!(p.a.max_abs() > 1e-3 || p.b.max_abs() > 1e-3);
        let r = brute_force(&p, 8, &Norm::Euclid).unwrap();
        let q = brute_force(&p.scaled(s, s), 8, &Norm::Euclid).unwrap();
        prop_assert!((q.lower - s * r.lower).abs() <= 1e-10 * s * r.lower.max(1e-300));
        prop_assert!((q.upper - s * r.upper).abs() <= 1e-10 * s * r.upper);
    }

    #[test]
    fn swap_preserves_bounds(p in pair()) {
        prop_assume!(p.a.max_abs() > 1e-3 || p.b.max_abs() > 1e-3);
        let r = brute_force(&p, 8, &Norm::Euclid).unwrap();
        let q = brute_force(&p.swapped(), 8, &Norm::Euclid).unwrap();
        prop_assert!((q.lower - r.lower).abs() <= 1e-12 * r.lower.max(1e-300));
        prop_assert!((q.upper - r.upper).abs() <= 1e-12 * r.upper);
    }
}
