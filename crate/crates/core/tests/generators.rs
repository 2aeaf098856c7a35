mod common;

use common::*;
use waring_core::gen::*;
use waring_core::octic::{certify_octic14, check_preconditions, hilbert_burch, SystemMode};
use waring_core::{PrimeField, Verdict};

// smallest primes where admissible 14-point sets are common; at p = 101
// nearly every sample has a dependent 10-subset of cubic images
fn small() -> PrimeField {
    PrimeField::new(1009).unwrap()
}

#[test]
fn admissible_sets_pass_the_octic_preconditions() {
    for seed in 0..5 {
        let g = gen_identifiable(seed, PrimeField::default()).unwrap();
        assert!(check_preconditions(&g.instance).is_ok());
        assert!(g.attempts >= 1);
    }
}

#[test]
fn optics_points_pass_the_gate() {
    assert!(admissible(&optics_points(PrimeField::default())).is_ok());
}

#[test]
fn eleven_points_on_a_conic_are_rejected() {
    // x0 x2 = x1^2 is parametrized by (1, t, t^2)
    let mut pts: Vec<[i64; 3]> = (1..=11).map(|t| [1, t, t * t]).collect();
    pts.extend([[3, -7, 11], [5, 2, -9], [-4, 13, 6]]);
    let set = signed_points(PrimeField::default(), &pts);
    assert!(admissible(&set).is_err());
}

#[test]
fn generation_is_deterministic() {
    let f = PrimeField::default();
    assert_eq!(gen_identifiable(7, f).unwrap(), gen_identifiable(7, f).unwrap());
    assert_eq!(gen_unidentifiable(7, f).unwrap(), gen_unidentifiable(7, f).unwrap());
    assert_ne!(gen_identifiable(7, f).unwrap(), gen_identifiable(8, f).unwrap());
}

#[test]
fn identifiable_instances_certify() {
    for seed in 0..5 {
        let g = gen_identifiable(seed, PrimeField::default()).unwrap();
        assert_eq!(g.ground_truth, GroundTruth::ExpectedIdentifiable);
        let cert = certify_octic14(&g.instance, SystemMode::Full);
        assert_eq!(cert.verdict, Verdict::IdentifiableOfRank { rank: 14 }, "seed {seed}");
    }
}

#[test]
fn unidentifiable_instances_round_trip() {
    for seed in 0..5 {
        let g = gen_unidentifiable(seed, PrimeField::default()).unwrap();
        let f = g.instance.points().field();
        let wd = g.witness_data.as_ref().unwrap();
        let t = g.instance.tensor();
        assert_eq!(wd.ideal_b8.len(), 31);
        for c in wd.ideal_b8.iter().chain(g.instance.points().ideal_basis(8).iter()) {
            assert_eq!(f.dot(&t, c), 0);
        }
        assert!(g.instance.lambda().iter().all(|&l| l != 0));
        let cert = certify_octic14(&g.instance, SystemMode::Full);
        assert!(matches!(cert.verdict, Verdict::NotIdentifiable { .. }), "seed {seed}: {:?}", cert.verdict);
    }
}

#[test]
fn residual_recovery_over_a_small_prime() {
    let f = small();
    let g = gen_unidentifiable(3, f).unwrap();
    let a = g.instance.points();
    let hb = hilbert_burch(a).unwrap();
    let fam = waring_core::octic::residual_family(&hb).unwrap();
    let params = g.witness_data.unwrap().params.unwrap();
    let minors = fam.minors_at(&params);
    let found = recover_residual_points(a, &hb.quartic, &minors, SCAN_LIMIT).unwrap();
    assert!(found.len() <= 14);
    for pt in &found {
        assert!(!a.contains(pt));
        assert_eq!(hb.quartic.eval(pt), 0);
        assert!(minors.iter().all(|m| m.eval(pt) == 0));
    }
}

#[test]
fn split_instances_have_rational_residual_sets() {
    let f = small();
    let g = gen_unidentifiable_split(1, f).unwrap();
    let wd = g.witness_data.as_ref().unwrap();
    let b = waring_core::PointSet::new(f, 2, wd.points_b.clone().unwrap()).unwrap();
    let a = g.instance.points();
    let z = a.union(&b).unwrap();
    assert_eq!(z.len(), 28);
    assert_eq!(z.hilbert_profile(10).differences, vec![1, 2, 3, 4, 4, 4, 4, 3, 2, 1, 0]);
    assert_eq!(z.h1_defect(8), 1);
    assert_eq!(a.span_intersection_dim(&b, 8).unwrap(), 0);

    let cert = certify_octic14(&g.instance, SystemMode::Full);
    let Verdict::NotIdentifiable { witness } = &cert.verdict else {
        panic!("{:?}", cert.verdict);
    };
    let hb = hilbert_burch(a).unwrap();
    let fam = waring_core::octic::residual_family(&hb).unwrap();
    let minors = fam.minors_at(&witness.params);
    let found = recover_residual_points(a, &hb.quartic, &minors, SCAN_LIMIT).unwrap();
    let recovered = waring_core::PointSet::new(f, 2, found).unwrap();
    assert_eq!(recovered.len(), 14);
    assert_eq!(recovered.intersection_len(&b), 14);
}

#[test]
fn rational_complete_intersections_over_101() {
    let f = PrimeField::new(101).unwrap();
    for seed in 0..3 {
        let (q, z) = rational_complete_intersection(seed, f).unwrap();
        assert_eq!(z.len(), 28);
        assert!(z.points().iter().all(|pt| q.eval(pt) == 0));
        assert_eq!(z.hilbert_profile(10).differences, vec![1, 2, 3, 4, 4, 4, 4, 3, 2, 1, 0]);
        assert!(z.cb_check(8).unwrap());
    }
}
