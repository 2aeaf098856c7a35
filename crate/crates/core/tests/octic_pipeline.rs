mod common;

use common::*;
use waring_core::octic::*;
use waring_core::poly::{det_poly, MonomialBasis};
use waring_core::{PrimeField, Verdict};

#[test]
fn optics_preconditions() {
    let pre = check_preconditions(&optics_t1()).unwrap();
    assert_eq!((pre.octic_rank, pre.h4, pre.k3, pre.k3_subsets), (14, 14, 10, 1001));
}

#[test]
fn hilbert_burch_structure() {
    let inst = optics_t1();
    let hb = hilbert_burch(inst.points()).unwrap();
    for pt in inst.points().points() {
        assert_eq!(hb.quartic.eval(pt), 0);
        for q in &hb.quintics {
            assert_eq!(q.eval(pt), 0);
        }
    }
    // every column of M is a syzygy of (Q, Q1..Q4)
    let gens = hb.generators();
    let m = hb.matrix();
    for c in 0..4 {
        let mut acc = m[0][c].mul(&gens[0]);
        for j in 1..5 {
            acc = acc.add(&m[j][c].mul(&gens[j])).unwrap();
        }
        assert!(acc.is_zero(), "column {c} is not a syzygy");
    }
    // maximal minors are proportional to the generators
    for row in 0..5 {
        let minor = hb.signed_minor(row);
        assert!(minor.ratio_to(&gens[row]).is_some_and(|r| r != 0), "minor {row}");
    }
    let rows: Vec<_> = m[1..].to_vec();
    let det = det_poly(&rows).unwrap();
    assert!(det.ratio_to(&hb.quartic).is_some());
    assert_eq!(hb.quartic.coeffs().iter().find(|&&c| c != 0), Some(&1));
    assert_eq!(hb.syzygy_map.rows(), 28);
    assert_eq!(hb.syzygy_map.cols(), 18);
}

#[test]
fn normalization_is_full_rank() {
    let hb = hilbert_burch(optics_t1().points()).unwrap();
    let n = normalization_check(&hb);
    assert_eq!(n.matrix.rows(), 12);
    assert_eq!(n.rank, 12);
}

#[test]
fn residual_minors_match_specialized_determinants() {
    let inst = optics_t1();
    let f = inst.points().field();
    let hb = hilbert_burch(inst.points()).unwrap();
    let fam = residual_family(&hb).unwrap();
    let a: Vec<u64> = (0..12).map(|k| (7 * k * k + 3 * k + 1) % f.modulus()).collect();
    let sm = fam.specialized_matrix(&a);
    let minors = fam.minors_at(&a);
    for r in 0..4 {
        let rows: Vec<_> = (0..5).filter(|&i| i != r + 1).map(|i| sm[i].clone()).collect();
        let mut det = det_poly(&rows).unwrap();
        if r % 2 == 0 {
            det = det.scale(f.neg(1));
        }
        assert_eq!(det, minors[r], "minor {r}");
    }
    assert_eq!(MonomialBasis::get(3, 5).len(), minors[0].coeffs().len());
}

#[test]
fn optics_t1_is_identifiable_in_both_modes() {
    for mode in [SystemMode::Full, SystemMode::Paper13] {
        let cert = certify_octic14(&optics_t1(), mode);
        assert_eq!(cert.verdict, Verdict::IdentifiableOfRank { rank: 14 }, "{mode:?}");
        assert_eq!(cert.get_int("system_rank"), Some(12));
    }
    let cert = certify_octic14(&optics_t1(), SystemMode::Paper13);
    assert_eq!(cert.get_int("system_rows"), Some(13));
}

#[test]
fn optics_t2_has_a_verified_second_decomposition() {
    for mode in [SystemMode::Full, SystemMode::Paper13] {
        let cert = certify_octic14(&optics_t2(), mode);
        assert_eq!(cert.get_int("system_rank"), Some(11), "{mode:?}");
        match &cert.verdict {
            Verdict::NotIdentifiable { witness } => {
                assert_eq!(witness.quintic_piece_dim, 7);
                assert_eq!(witness.octic_piece_dim, 31);
                assert_eq!(witness.sum_dim, 44);
                assert_eq!(witness.annihilated_generators, 55);
            }
            other => panic!("{mode:?}: {other:?}"),
        }
    }
}

// T1 = sum of the 14 eighth powers as printed, monomial by monomial
const T1_PRINTED: [([u32; 3], i64); 45] = [
    ([8, 0, 0], -4160),
    ([7, 1, 0], 10086),
    ([6, 2, 0], -10592),
    ([5, 3, 0], -13805),
    ([4, 4, 0], -5415),
    ([3, 5, 0], -728),
    ([2, 6, 0], -10682),
    ([1, 7, 0], 11924),
    ([0, 8, 0], 11680),
    ([7, 0, 1], -10568),
    ([6, 1, 1], 2172),
    ([5, 2, 1], 4949),
    ([4, 3, 1], -12129),
    ([3, 4, 1], 10744),
    ([2, 5, 1], 2672),
    ([1, 6, 1], -12873),
    ([0, 7, 1], -1107),
    ([6, 0, 2], -9188),
    ([5, 1, 2], 9276),
    ([4, 2, 2], 732),
    ([3, 3, 2], 11721),
    ([2, 4, 2], -13726),
    ([1, 5, 2], 3431),
    ([0, 6, 2], -8124),
    ([5, 0, 3], 12437),
    ([4, 1, 3], 15504),
    ([3, 2, 3], 9356),
    ([2, 3, 3], -14840),
    ([1, 4, 3], -4473),
    ([0, 5, 3], 2175),
    ([4, 0, 4], -12329),
    ([3, 1, 4], -1390),
    ([2, 2, 4], 6775),
    ([1, 3, 4], -2372),
    ([0, 4, 4], -9493),
    ([3, 0, 5], -7958),
    ([2, 1, 5], -13661),
    ([1, 2, 5], -11117),
    ([0, 3, 5], 3342),
    ([2, 0, 6], -5685),
    ([1, 1, 6], -9054),
    ([0, 2, 6], 1829),
    ([1, 0, 7], -1350),
    ([0, 1, 7], 7453),
    ([0, 0, 8], 12146),
];

#[test]
fn optics_t1_matches_the_printed_form() {
    let f = PrimeField::default();
    let t = optics_t1().tensor();
    let basis = MonomialBasis::get(3, 8);
    for (exp, coeff) in T1_PRINTED {
        assert_eq!(f.to_signed(t[basis.index_of(&exp)]), coeff, "{exp:?}");
    }
}
