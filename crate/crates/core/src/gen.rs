//! Seeded generators of octic instances with known ground truth.
//!
//! Identifiable instances are an admissible point set with random
//! coefficients. Unidentifiable instances are synthesized from the
//! parameter side: pick a residual set `B(a)` from the Hilbert-Burch family
//! of `A`, take the unique form `t` annihilated by `(I_A)_8 + (I_B)_8`, and
//! write it in the basis `v_8(A)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criteria::Instance;
use crate::error::{GenError, OcticError, PreconditionTest};
use crate::field::PrimeField;
use crate::matrix::DenseMatrix;
use crate::octic::{hilbert_burch, residual_family, verify_witness, ResidualFamily, PARAMS};
use crate::points::PointSet;
use crate::poly::{monomial_multiples, GradedPoly};

/// Resamples allowed per gate.
pub const ATTEMPT_BUDGET: usize = 1000;
/// Largest prime for which the exhaustive `P^2` scan runs by default.
pub const SCAN_LIMIT: u64 = 1 << 14;

const POINTS: usize = 14;
const DEGREE: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroundTruth {
    ExpectedIdentifiable,
    KnownUnidentifiable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessData {
    /// Residual-family parameters, when `B` was built from them.
    pub params: Option<Vec<u64>>,
    /// Basis of `(I_B)_8` as coefficient vectors.
    pub ideal_b8: Vec<Vec<u64>>,
    pub points_b: Option<Vec<Vec<u64>>>,
    /// Coefficients of `T` on `v_8(B)`, when `B`'s points are known.
    pub lambda_b: Option<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedInstance {
    pub instance: Instance,
    pub ground_truth: GroundTruth,
    pub witness_data: Option<WitnessData>,
    pub seed: u64,
    pub attempts: usize,
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn nonzero(rng: &mut ChaCha8Rng, field: PrimeField) -> u64 {
    rng.gen_range(1..field.modulus())
}

fn random_point(rng: &mut ChaCha8Rng, field: PrimeField) -> Vec<u64> {
    loop {
        let pt: Vec<u64> = (0..3).map(|_| rng.gen_range(0..field.modulus())).collect();
        if pt.iter().any(|&c| c != 0) {
            return pt;
        }
    }
}

/// The admissibility gate: independent octic images, `h(4) = 14`,
/// `k_3 = 10`.
pub fn admissible(points: &PointSet) -> Result<(), OcticError> {
    if points.n() != 2 || points.len() != POINTS {
        return Err(OcticError::Shape(format!("need 14 points of P^2, got {}", points.len())));
    }
    let checks = [
        (PreconditionTest::NonRedundant, DEGREE, POINTS),
        (PreconditionTest::FourthHilbert, 4, POINTS),
    ];
    for (test, degree, expected) in checks {
        let value = points.hilbert_value(degree);
        if value != expected {
            return Err(OcticError::PreconditionFailed { test, value });
        }
    }
    let k3 = points.kruskal_rank(3).rank;
    if k3 != 10 {
        return Err(OcticError::PreconditionFailed {
            test: PreconditionTest::ThirdKruskal,
            value: k3,
        });
    }
    Ok(())
}

fn sample_admissible(rng: &mut ChaCha8Rng, field: PrimeField) -> Result<(PointSet, usize), GenError> {
    for attempt in 1..=ATTEMPT_BUDGET {
        let pts = (0..POINTS).map(|_| random_point(rng, field)).collect();
        let Ok(set) = PointSet::new(field, 2, pts) else {
            continue;
        };
        if admissible(&set).is_ok() {
            return Ok((set, attempt));
        }
    }
    Err(GenError::GenerationExhausted(ATTEMPT_BUDGET))
}

/// Rejection-samples 14 uniform points until they pass [`admissible`].
/// Returns the set and the number of attempts used.
pub fn random_admissible_pointset(seed: u64, field: PrimeField) -> Result<(PointSet, usize), GenError> {
    sample_admissible(&mut rng_for(seed), field)
}

pub fn gen_identifiable(seed: u64, field: PrimeField) -> Result<GeneratedInstance, GenError> {
    let mut rng = rng_for(seed);
    let (points, attempts) = sample_admissible(&mut rng, field)?;
    let lambda: Vec<u64> = (0..POINTS).map(|_| nonzero(&mut rng, field)).collect();
    let instance = Instance::new(points, DEGREE, lambda).expect("14 coefficients");
    Ok(GeneratedInstance {
        instance,
        ground_truth: GroundTruth::ExpectedIdentifiable,
        witness_data: None,
        seed,
        attempts,
    })
}

/// Generators `Q * S^4` and `minors * S^3` of `(I_B)_8`.
fn residual_octic_generators(fam: &ResidualFamily, params: &[u64]) -> Vec<Vec<u64>> {
    let mut gens = monomial_multiples(&fam.base.quartic, 4);
    for m in fam.minors_at(params) {
        gens.extend(monomial_multiples(&m, 3));
    }
    gens
}

fn column_basis(field: PrimeField, rows: usize, vectors: &[Vec<u64>]) -> Vec<Vec<u64>> {
    DenseMatrix::from_columns(field, rows, vectors)
        .pivot_columns()
        .into_iter()
        .map(|c| vectors[c].clone())
        .collect()
}

/// The form annihilated by `(I_A)_8 + (I_B)_8` written on `v_8(A)`; `None`
/// unless the annihilator is a single line and every coefficient is nonzero.
fn common_form(
    field: PrimeField,
    a: &PointSet,
    ideal_b: &[Vec<u64>],
) -> Result<Option<(Vec<u64>, Vec<u64>)>, GenError> {
    let mut sum = a.ideal_basis(DEGREE);
    sum.extend(ideal_b.iter().cloned());
    let annihilator = DenseMatrix::from_rows(field, 45, &sum).kernel_basis();
    if annihilator.len() != 1 {
        return Err(GenError::AnnihilatorDimension(annihilator.len()));
    }
    let t = annihilator.into_iter().next().expect("one vector");
    let va = a.evaluation_matrix(DEGREE).transpose();
    let Ok(sol) = va.solve(&t) else {
        return Ok(None);
    };
    if sol.x.iter().any(|&l| l == 0) {
        return Ok(None);
    }
    Ok(Some((t, sol.x)))
}

/// An admissible `A` and coefficients `λ` such that `Σ λ_i v_8(P_i)` also
/// lies in the span of a residual set `B(a)`.
pub fn gen_unidentifiable(seed: u64, field: PrimeField) -> Result<GeneratedInstance, GenError> {
    let mut rng = rng_for(seed);
    let (points, mut attempts) = sample_admissible(&mut rng, field)?;
    let fam = residual_family(&hilbert_burch(&points)?)?;
    for _ in 0..ATTEMPT_BUDGET {
        attempts += 1;
        let params: Vec<u64> = (0..PARAMS).map(|_| rng.gen_range(0..field.modulus())).collect();
        if params.iter().all(|&a| a == 0) {
            continue;
        }
        let gens = residual_octic_generators(&fam, &params);
        let ideal_b8 = column_basis(field, 45, &gens);
        if ideal_b8.len() != 31 {
            continue;
        }
        let lambda = match common_form(field, &points, &ideal_b8) {
            Ok(Some((_, lambda))) => lambda,
            Ok(None) | Err(GenError::AnnihilatorDimension(_)) => continue,
            Err(e) => return Err(e),
        };
        let instance = Instance::new(points.clone(), DEGREE, lambda).expect("14 coefficients");
        if verify_witness(&instance, &fam, &params).is_err() {
            continue;
        }
        return Ok(GeneratedInstance {
            instance,
            ground_truth: GroundTruth::KnownUnidentifiable,
            witness_data: Some(WitnessData {
                params: Some(params),
                ideal_b8,
                points_b: None,
                lambda_b: None,
            }),
            seed,
            attempts,
        });
    }
    Err(GenError::GenerationExhausted(ATTEMPT_BUDGET))
}

/// Points of `P^2(F_p)` in the order `(1, y, z)`, `(0, 1, z)`, `(0, 0, 1)`.
fn plane_points(field: PrimeField) -> impl ParallelIterator<Item = Vec<u64>> {
    let p = field.modulus();
    let affine = (0..p).into_par_iter().flat_map_iter(move |y| (0..p).map(move |z| vec![1, y, z]));
    let infinity = (0..p)
        .into_par_iter()
        .map(|z| vec![0, 1, z])
        .chain(rayon::iter::once(vec![0, 0, 1]));
    affine.chain(infinity)
}

fn check_scan_budget(field: PrimeField, limit: u64) -> Result<(), GenError> {
    if field.modulus() > limit {
        return Err(GenError::ScanBudgetExceeded {
            prime: field.modulus(),
            limit,
        });
    }
    Ok(())
}

/// Rational points where `quartic` and all `quintics` vanish, minus the
/// points of `a`. Best effort: residual points that are not rational over
/// `F_p` are simply missing from the result.
pub fn recover_residual_points(
    a: &PointSet,
    quartic: &GradedPoly,
    quintics: &[GradedPoly],
    limit: u64,
) -> Result<Vec<Vec<u64>>, GenError> {
    let field = a.field();
    check_scan_budget(field, limit)?;
    Ok(plane_points(field)
        .filter(|pt| quartic.eval(pt) == 0 && quintics.iter().all(|q| q.eval(pt) == 0) && !a.contains(pt))
        .collect())
}

/// Rational points of the curve `f = 0`.
pub fn rational_points(f: &GradedPoly, limit: u64) -> Result<Vec<Vec<u64>>, GenError> {
    let field = f.field();
    check_scan_budget(field, limit)?;
    Ok(plane_points(field).filter(|pt| f.eval(pt) == 0).collect())
}

fn line_through(field: PrimeField, p: &[u64], q: &[u64]) -> [u64; 3] {
    // cross product
    [
        field.sub(field.mul(p[1], q[2]), field.mul(p[2], q[1])),
        field.sub(field.mul(p[2], q[0]), field.mul(p[0], q[2])),
        field.sub(field.mul(p[0], q[1]), field.mul(p[1], q[0])),
    ]
}

/// A `(4, 7)` complete intersection with all 28 points rational: a random
/// quartic `Q` cut by 7 lines, each meeting `Q` in 4 distinct rational
/// points. Returns `Q` and the 7 quadruples.
fn sample_rational_complete_intersection(
    rng: &mut ChaCha8Rng,
    field: PrimeField,
    attempts: &mut usize,
) -> Result<(GradedPoly, Vec<Vec<Vec<u64>>>), GenError> {
    while *attempts < ATTEMPT_BUDGET {
        *attempts += 1;
        let coeffs: Vec<u64> = (0..15).map(|_| rng.gen_range(0..field.modulus())).collect();
        let quartic = GradedPoly::from_coeffs(field, 3, 4, coeffs).expect("15 coefficients");
        let on_q = rational_points(&quartic, SCAN_LIMIT)?;
        if on_q.len() < 28 {
            continue;
        }
        if let Some(quadruples) = pick_lines(rng, field, &on_q) {
            return Ok((quartic, quadruples));
        }
    }
    Err(GenError::GenerationExhausted(ATTEMPT_BUDGET))
}

/// The 28 points of a rational `(4, 7)` complete intersection (quartic times
/// a product of 7 lines), grouped by line. Needs no admissibility gate, so it
/// works over very small primes.
pub fn rational_complete_intersection(seed: u64, field: PrimeField) -> Result<(GradedPoly, PointSet), GenError> {
    let mut attempts = 0;
    let (quartic, quads) = sample_rational_complete_intersection(&mut rng_for(seed), field, &mut attempts)?;
    let points = quads.into_iter().flatten().collect();
    Ok((quartic, PointSet::new(field, 2, points).expect("distinct points")))
}

/// Unidentifiable instance whose second decomposition is fully rational:
/// `A` takes 2 points from each line of a rational complete intersection and
/// `B` is the rest; both must pass the admissibility gate. Only practical for
/// small primes, and those must not be too small for the gate (p around 1000).
pub fn gen_unidentifiable_split(seed: u64, field: PrimeField) -> Result<GeneratedInstance, GenError> {
    let mut rng = rng_for(seed);
    let mut attempts = 0;
    while attempts < ATTEMPT_BUDGET {
        let (_, quadruples) = sample_rational_complete_intersection(&mut rng, field, &mut attempts)?;
        for _ in 0..16 {
            attempts += 1;
            let mut a_pts = Vec::new();
            let mut b_pts = Vec::new();
            for quad in &quadruples {
                let mut idx = [0usize, 1, 2, 3];
                for i in (1..4).rev() {
                    idx.swap(i, rng.gen_range(0..=i));
                }
                a_pts.extend(idx[..2].iter().map(|&i| quad[i].clone()));
                b_pts.extend(idx[2..].iter().map(|&i| quad[i].clone()));
            }
            let a = PointSet::new(field, 2, a_pts).expect("distinct points");
            let b = PointSet::new(field, 2, b_pts).expect("distinct points");
            if admissible(&a).is_err() || admissible(&b).is_err() {
                continue;
            }
            let ideal_b8 = b.ideal_basis(DEGREE);
            let (t, lambda) = match common_form(field, &a, &ideal_b8) {
                Ok(Some(found)) => found,
                Ok(None) | Err(GenError::AnnihilatorDimension(_)) => continue,
                Err(e) => return Err(e),
            };
            let Ok(sol_b) = b.evaluation_matrix(DEGREE).transpose().solve(&t) else {
                continue;
            };
            if sol_b.x.iter().any(|&l| l == 0) {
                continue;
            }
            let instance = Instance::new(a, DEGREE, lambda).expect("14 coefficients");
            return Ok(GeneratedInstance {
                instance,
                ground_truth: GroundTruth::KnownUnidentifiable,
                witness_data: Some(WitnessData {
                    params: None,
                    ideal_b8,
                    points_b: Some(b.points().to_vec()),
                    lambda_b: Some(sol_b.x),
                }),
                seed,
                attempts,
            });
        }
    }
    Err(GenError::GenerationExhausted(ATTEMPT_BUDGET))
}

/// Seven lines, each through exactly 4 of `on_q`, with disjoint quadruples.
fn pick_lines(rng: &mut ChaCha8Rng, field: PrimeField, on_q: &[Vec<u64>]) -> Option<Vec<Vec<Vec<u64>>>> {
    let mut used = vec![false; on_q.len()];
    let mut quads = Vec::new();
    for _ in 0..400 {
        if quads.len() == 7 {
            break;
        }
        let i = rng.gen_range(0..on_q.len());
        let j = rng.gen_range(0..on_q.len());
        if i == j || used[i] || used[j] {
            continue;
        }
        let line = line_through(field, &on_q[i], &on_q[j]);
        let hits: Vec<usize> = (0..on_q.len()).filter(|&k| field.dot(&line, &on_q[k]) == 0).collect();
        if hits.len() != 4 || hits.iter().any(|&k| used[k]) {
            continue;
        }
        for &k in &hits {
            used[k] = true;
        }
        quads.push(hits.iter().map(|&k| on_q[k].clone()).collect());
    }
    (quads.len() == 7).then_some(quads)
}
