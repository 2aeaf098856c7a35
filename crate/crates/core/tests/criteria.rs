mod common;

use common::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use waring_core::criteria::*;
use waring_core::gen::gen_unidentifiable;
use waring_core::octic::{certify_octic14, SystemMode};
use waring_core::{CriteriaError, PointSet, PrimeField, Verdict};

fn generic(seed: u64, n: usize, len: usize, degree: u32) -> Instance {
    let f = PrimeField::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = random_generic_points(&mut rng, f, n, len);
    let lambda = vec![1; len];
    instance(pts, degree, &lambda)
}

#[test]
fn kruskal_eleven_points_split_332() {
    let inst = generic(1, 2, 11, 8);
    let cert = reshaped_kruskal_certify(&inst, (3, 3, 2)).unwrap();
    assert_eq!(cert.get_int("k_3(A)"), Some(10));
    assert_eq!(cert.get_int("k_2(A)"), Some(6));
    assert_eq!(cert.get_int("kruskal_sum_minus_2"), Some(24));
    assert_eq!(cert.verdict, Verdict::IdentifiableOfRank { rank: 11 });
    assert_eq!(reshaped_kruskal_best(&inst).unwrap().verdict, Verdict::IdentifiableOfRank { rank: 11 });
}

#[test]
fn kruskal_fourteen_points_is_inconclusive() {
    let cert = reshaped_kruskal_best(&optics_t1()).unwrap();
    assert!(matches!(cert.verdict, Verdict::Inconclusive { .. }));
    // best bound over all splits of 8 is 12 < 14, i.e. sum - 2 = 25 < 28
    assert_eq!(cert.get_int("kruskal_sum_minus_2"), Some(25));
}

#[test]
fn kruskal_five_points_cubic() {
    let inst = generic(2, 2, 5, 3);
    let cert = reshaped_kruskal_certify(&inst, (1, 1, 1)).unwrap();
    assert_eq!(cert.get_int("kruskal_sum_minus_2"), Some(7));
    assert!(matches!(cert.verdict, Verdict::Inconclusive { .. }));
}

#[test]
fn kruskal_rejects_bad_splits_and_redundancy() {
    let inst = generic(3, 2, 5, 4);
    assert!(matches!(reshaped_kruskal_certify(&inst, (2, 1, 0)), Err(CriteriaError::BadSplit(_))));
    assert!(matches!(reshaped_kruskal_certify(&inst, (1, 2, 1)), Err(CriteriaError::BadSplit(_))));
    let mut lambda = vec![1i64; 5];
    lambda[2] = 0;
    let zero = instance(inst.points().clone(), 4, &lambda);
    assert!(matches!(
        reshaped_kruskal_certify(&zero, (2, 1, 1)),
        Err(CriteriaError::RedundancyDetected(_))
    ));
}

#[test]
fn range_thirteen_points_octic() {
    let cert = range_certify(&generic(4, 2, 13, 8)).unwrap();
    assert_eq!(cert.get_int("k_3(A)"), Some(10));
    assert_eq!(cert.get_int("h_A(4)"), Some(13));
    assert_eq!(cert.verdict, Verdict::IdentifiableOfRank { rank: 13 });
}

#[test]
fn range_fourteen_points_octic_is_inconclusive() {
    let cert = range_certify(&optics_t1()).unwrap();
    assert!(matches!(cert.verdict, Verdict::Inconclusive { .. }));
    assert_eq!(cert.get_int("rank_bound"), Some(13));
}

#[test]
fn range_seven_points_quintic() {
    let cert = range_certify(&generic(5, 2, 7, 5)).unwrap();
    assert_eq!(cert.get_int("rank_bound"), Some(7));
    assert_eq!(cert.get_int("k_2(A)"), Some(6));
    assert_eq!(cert.get_int("h_A(3)"), Some(7));
    assert_eq!(cert.verdict, Verdict::IdentifiableOfRank { rank: 7 });
}

#[test]
fn ranger_examples() {
    let cert = ranger_certify(&optics_t1()).unwrap();
    assert_eq!(cert.get_int("h_A(4)"), Some(14));
    assert_eq!(cert.get_int("rank_bound"), Some(15));
    assert_eq!(cert.verdict, Verdict::ComputesRank { rank: 14 });

    let cert = ranger_certify(&generic(6, 2, 10, 6)).unwrap();
    assert_eq!(cert.get_int("h_A(3)"), Some(10));
    assert_eq!(cert.verdict, Verdict::ComputesRank { rank: 10 });

    let cert = ranger_certify(&generic(7, 2, 16, 8)).unwrap();
    assert!(matches!(cert.verdict, Verdict::Inconclusive { .. }));
}

#[test]
fn criteria_need_a_plane() {
    let inst = generic(8, 3, 5, 4);
    assert!(matches!(range_certify(&inst), Err(CriteriaError::NotApplicable(_))));
    assert!(matches!(ranger_certify(&inst), Err(CriteriaError::NotApplicable(_))));
}

#[test]
fn mo_examples() {
    let cert = mo_certify(&generic(9, 3, 9, 6)).unwrap();
    assert_eq!(cert.get_int("h_A(2)"), Some(9));
    assert_eq!(cert.verdict, Verdict::IdentifiableOfRank { rank: 9 });

    // r <= n + 1 points in general position
    let cert = mo_certify(&generic(10, 3, 4, 4)).unwrap();
    assert_eq!(cert.verdict, Verdict::IdentifiableOfRank { rank: 4 });

    // five points in the plane x3 = 0 of P^3
    let f = PrimeField::default();
    let pts: Vec<Vec<i64>> = vec![
        vec![1, 0, 0, 0],
        vec![0, 1, 0, 0],
        vec![0, 0, 1, 0],
        vec![1, 1, 1, 0],
        vec![1, 2, 3, 0],
    ];
    let flat = instance(PointSet::from_signed(f, 3, &pts).unwrap(), 4, &[1; 5]);
    assert!(matches!(mo_certify(&flat), Err(CriteriaError::NotConcise { h1: 3, expected: 4 })));
}

#[test]
fn mo_odd_degree_needs_kruskal() {
    // d = 7, m = 3: h_A(2) = 6 meets the bound, then k_3 = 6 is required
    let cert = mo_certify(&generic(12, 3, 6, 7)).unwrap();
    assert_eq!(cert.get_int("h_A(2)"), Some(6));
    assert_eq!(cert.get_int("k_3(A)"), Some(6));
    assert_eq!(cert.verdict, Verdict::IdentifiableOfRank { rank: 6 });

    // d = 5, m = 2: h_A(1) = 4 is too small for r = 6, so Kruskal never runs
    let cert = mo_certify(&generic(12, 3, 6, 5)).unwrap();
    assert_eq!(cert.get_int("k_2(A)"), None);
    assert!(matches!(cert.verdict, Verdict::Inconclusive { .. }));
}

#[test]
fn certificates_are_reproducible() {
    let inst = generic(13, 2, 11, 8);
    assert_eq!(range_certify(&inst).unwrap(), range_certify(&inst).unwrap());
    let cert = reshaped_kruskal_certify(&inst, (3, 3, 2)).unwrap();
    assert_eq!(cert.get_int("k_3(A)"), Some(inst.points().kruskal_rank(3).rank as i64));
}

#[test]
fn range_is_sound_on_generated_unidentifiable_instances() {
    for seed in 0..4 {
        let g = gen_unidentifiable(seed, PrimeField::default()).unwrap();
        let cert = range_certify(&g.instance).unwrap();
        assert!(matches!(cert.verdict, Verdict::Inconclusive { .. }), "seed {seed}");
        let kr = reshaped_kruskal_best(&g.instance).unwrap();
        assert!(!matches!(kr.verdict, Verdict::IdentifiableOfRank { .. }));
        assert!(matches!(
            certify_octic14(&g.instance, SystemMode::Full).verdict,
            Verdict::NotIdentifiable { .. }
        ));
    }
}
