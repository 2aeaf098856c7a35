//! Identifiability of plane octics of rank 14.
//!
//! For an admissible decomposition `A` of 14 points (independent octic
//! Veronese images, `h_A(4) = 14`, `k_3(A) = 10`) the ideal of `A` is
//! generated by one quartic `Q` and four quintics, with a 5x4 Hilbert-Burch
//! matrix `M` (a row of conics over a 4x4 block of linear forms). Every other
//! 14-point decomposition of a form in `<v_8(A)>` is residual to `A` in a
//! complete intersection of `Q` with a septic, and these residual sets are
//! parametrized by replacing the conic row of `M^T`'s completion with
//! `(0, q2(a), 0, q4(a))`, `a ∈ F_p^12`. A form `T` with coefficient vector
//! `p` has a second decomposition exactly when some `a != 0` makes `p`
//! orthogonal to the degree-8 part of the residual ideal, which is a linear
//! system in `a`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::criteria::{Certificate, Criterion, Instance, Verdict, Witness};
use crate::error::{OcticError, PreconditionTest};
use crate::field::PrimeField;
use crate::matrix::DenseMatrix;
use crate::poly::{det_poly, monomial_count, monomial_multiples, mult_map, GradedPoly, MonomialBasis, ParamPoly};

/// Number of residual-family parameters: two conics.
pub const PARAMS: usize = 12;
const NVARS: usize = 3;
const RANK: usize = 14;
/// dim of the degree-8 ideal piece of 14 points: 45 - 14.
const OCTIC_IDEAL_DIM: usize = 31;
/// retries for the paper13 column selection
const SELECTION_RETRIES: u64 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemMode {
    /// all 40 quintic-times-cubic generators (40x12 system)
    #[default]
    Full,
    /// 13 generators completing (I_A)_8 to a hyperplane (13x12 system)
    Paper13,
}

impl std::str::FromStr for SystemMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "full" => Ok(SystemMode::Full),
            "paper13" => Ok(SystemMode::Paper13),
            other => Err(format!("unknown mode '{other}' (expected full or paper13)")),
        }
    }
}

/// Values computed by the three admissibility tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreconditionEvidence {
    pub octic_rank: usize,
    pub h4: usize,
    pub k3: usize,
    pub k3_subsets: u64,
}

fn require_shape(inst: &Instance) -> Result<(), OcticError> {
    let pts = inst.points();
    if pts.n() != 2 || inst.degree() != 8 || pts.len() != RANK {
        return Err(OcticError::Shape(format!(
            "need 14 points of P^2 and degree 8, got {} points of P^{} and degree {}",
            pts.len(),
            pts.n(),
            inst.degree()
        )));
    }
    Ok(())
}

/// Tests 1-3: independent octic images with nonzero coefficients,
/// `h_A(4) = 14`, `k_3(A) = 10`.
pub fn check_preconditions(inst: &Instance) -> Result<PreconditionEvidence, OcticError> {
    require_shape(inst)?;
    let pts = inst.points();
    let octic_rank = pts.hilbert_value(8);
    if octic_rank != RANK {
        return Err(OcticError::PreconditionFailed {
            test: PreconditionTest::NonRedundant,
            value: octic_rank,
        });
    }
    if let Some(i) = inst.lambda().iter().position(|&l| l == 0) {
        return Err(OcticError::PreconditionFailed {
            test: PreconditionTest::NonRedundant,
            value: i,
        });
    }
    let h4 = pts.hilbert_value(4);
    if h4 != RANK {
        return Err(OcticError::PreconditionFailed {
            test: PreconditionTest::FourthHilbert,
            value: h4,
        });
    }
    let k3 = pts.kruskal_rank(3);
    if k3.rank != 10 {
        return Err(OcticError::PreconditionFailed {
            test: PreconditionTest::ThirdKruskal,
            value: k3.rank,
        });
    }
    Ok(PreconditionEvidence {
        octic_rank,
        h4,
        k3: k3.rank,
        k3_subsets: k3.subsets_examined,
    })
}

/// The unique quartic through `A`, scaled so its first nonzero coefficient
/// is 1.
pub fn unique_quartic(points: &crate::points::PointSet) -> Result<GradedPoly, OcticError> {
    let kernel = points.ideal_basis(4);
    if kernel.len() != 1 {
        return Err(OcticError::QuarticNotUnique(kernel.len()));
    }
    let q = GradedPoly::from_coeffs(points.field(), NVARS, 4, kernel[0].clone())
        .expect("kernel vector has 15 entries");
    Ok(q.normalized())
}

/// Generators and Hilbert-Burch matrix of the ideal of an admissible `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertBurch {
    pub quartic: GradedPoly,
    pub quintics: Vec<GradedPoly>,
    /// First row of `M`: one conic per column.
    pub conics: Vec<GradedPoly>,
    /// Rows 2-5 of `M`: `linear[i][c]` is the linear form in row `i + 2`,
    /// column `c + 1`. In the usual labelling row 2 is `L1..L4`, row 3 is
    /// `L5..L8`, row 4 is `L9..L12` and row 5 is `L13..L16`.
    pub linear: Vec<Vec<GradedPoly>>,
    /// The 28x18 matrix of `(f, g1..g4) -> f Q + sum g_j Q_j`.
    pub syzygy_map: DenseMatrix,
}

impl HilbertBurch {
    /// `M` as a 5x4 array of forms.
    pub fn matrix(&self) -> Vec<Vec<GradedPoly>> {
        let mut rows = vec![self.conics.clone()];
        rows.extend(self.linear.iter().cloned());
        rows
    }

    /// `(-1)^row` times the 4x4 minor of `M` leaving out `row` (0-based).
    pub fn signed_minor(&self, row: usize) -> GradedPoly {
        let m = self.matrix();
        let kept: Vec<Vec<GradedPoly>> = (0..5).filter(|&r| r != row).map(|r| m[r].clone()).collect();
        let det = det_poly(&kept).expect("rows of M have uniform degrees");
        if row % 2 == 1 {
            det.scale(det.field().neg(1))
        } else {
            det
        }
    }

    /// Generators `(Q, Q1, .., Q4)` as used to build the syzygy map.
    pub fn generators(&self) -> Vec<GradedPoly> {
        let mut g = vec![self.quartic.clone()];
        g.extend(self.quintics.iter().cloned());
        g
    }
}

/// Builds `Q`, a basis `Q1..Q4` of `(I_A)_5` modulo `x·Q`, and the
/// Hilbert-Burch matrix as the kernel of the degree-6 syzygy map.
pub fn hilbert_burch(points: &crate::points::PointSet) -> Result<HilbertBurch, OcticError> {
    let field = points.field();
    let quartic = unique_quartic(points)?;

    let quintic_ideal = points.ideal_basis(5);
    if quintic_ideal.len() != 7 {
        return Err(OcticError::QuinticDimension(quintic_ideal.len()));
    }
    // greedy completion of {x0 Q, x1 Q, x2 Q} inside (I_A)_5
    let mut columns = monomial_multiples(&quartic, 1);
    columns.extend(quintic_ideal.iter().cloned());
    let pivots = DenseMatrix::from_columns(field, monomial_count(NVARS, 5), &columns).pivot_columns();
    let chosen: Vec<usize> = pivots.iter().filter(|&&c| c >= 3).map(|&c| c - 3).collect();
    if pivots.len() != 7 || chosen.len() != 4 {
        return Err(OcticError::QuinticDimension(pivots.len()));
    }
    let quintics: Vec<GradedPoly> = chosen
        .iter()
        .map(|&i| GradedPoly::from_coeffs(field, NVARS, 5, quintic_ideal[i].clone()).expect("21 entries"))
        .collect();

    let mut blocks = vec![mult_map(&quartic, 6).expect("6 >= 4")];
    for q in &quintics {
        blocks.push(mult_map(q, 6).expect("6 >= 5"));
    }
    let syzygy_map = blocks[1..]
        .iter()
        .try_fold(blocks[0].clone(), |acc, b| acc.hstack(b))
        .expect("all blocks have 28 rows");
    let kernel = syzygy_map.kernel_basis();
    if kernel.len() != 4 {
        return Err(OcticError::SyzygyDimension(kernel.len()));
    }

    let conics = kernel
        .iter()
        .map(|v| GradedPoly::from_coeffs(field, NVARS, 2, v[0..6].to_vec()).expect("6 entries"))
        .collect();
    let linear = (0..4)
        .map(|row| {
            kernel
                .iter()
                .map(|v| GradedPoly::linear(field, &v[6 + 3 * row..9 + 3 * row]))
                .collect()
        })
        .collect();
    let hb = HilbertBurch {
        quartic,
        quintics,
        conics,
        linear,
        syzygy_map,
    };
    if hb.signed_minor(0).is_zero() {
        return Err(OcticError::MinorDegenerate);
    }
    Ok(hb)
}

/// The 12x12 matrix of the system that clears the first and third entries of
/// the residual conic row, with its rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalization {
    pub matrix: DenseMatrix,
    pub rank: usize,
}

/// Rows: coefficients of `x0^2, x0x1, x0x2, x1^2, x1x2, x2^2` in
/// `ℓ1 L1 + .. + ℓ4 L4` then in `ℓ1 L9 + .. + ℓ4 L12`; columns: the three
/// coefficients of each unknown linear form `ℓi`.
pub fn normalization_check(hb: &HilbertBurch) -> Normalization {
    let field = hb.quartic.field();
    let mut c = DenseMatrix::zeros(field, 12, 12);
    for (eq, row) in [0usize, 2].into_iter().enumerate() {
        for i in 0..4 {
            let block = mult_map(&hb.linear[row][i], 2).expect("2 >= 1");
            for r in 0..6 {
                for h in 0..3 {
                    c.set(6 * eq + r, 3 * i + h, block.get(r, h));
                }
            }
        }
    }
    let rank = c.rank();
    Normalization { matrix: c, rank }
}

/// The residual family: `SM(a)` has first row `(0, q2(a), 0, q4(a))` and the
/// transpose of `M`'s linear block below it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualFamily {
    pub base: HilbertBurch,
    /// `sm_lower[i][c] = linear[c][i]`
    pub sm_lower: Vec<Vec<GradedPoly>>,
    /// `(-1)^(r+1)` times the minor of `SM` leaving out row `r + 1`, linear
    /// in the 12 parameters.
    pub param_minors: Vec<ParamPoly>,
    /// `det(sm_lower) = quartic_ratio * Q`
    pub quartic_ratio: u64,
}

/// The parametrized conic row entries `q2(a)` (parameters 1-6) and `q4(a)`
/// (parameters 7-12), plain monomial coefficients.
pub fn conic_row(field: PrimeField) -> (ParamPoly, ParamPoly) {
    let basis = MonomialBasis::get(NVARS, 2);
    let zero = GradedPoly::zero(field, NVARS, 2);
    let mut q2 = vec![zero.clone(); PARAMS];
    let mut q4 = vec![zero; PARAMS];
    for (k, exp) in basis.exponents().iter().enumerate() {
        q2[k] = GradedPoly::monomial(field, exp, 1);
        q4[6 + k] = GradedPoly::monomial(field, exp, 1);
    }
    (
        ParamPoly::new(q2).expect("uniform degree"),
        ParamPoly::new(q4).expect("uniform degree"),
    )
}

pub fn residual_family(hb: &HilbertBurch) -> Result<ResidualFamily, OcticError> {
    let field = hb.quartic.field();
    let sm_lower: Vec<Vec<GradedPoly>> = (0..4)
        .map(|i| (0..4).map(|c| hb.linear[c][i].clone()).collect())
        .collect();
    let det = det_poly(&sm_lower).expect("linear entries");
    let quartic_ratio = det.ratio_to(&hb.quartic).ok_or(OcticError::MinorDegenerate)?;
    if quartic_ratio == 0 {
        return Err(OcticError::MinorDegenerate);
    }

    let (q2, q4) = conic_row(field);
    let mut param_minors = Vec::with_capacity(4);
    let mut all_zero = true;
    for r in 0..4 {
        let rows: Vec<&Vec<GradedPoly>> = (0..4).filter(|&i| i != r).map(|i| &sm_lower[i]).collect();
        let cofactor = |skip: usize| {
            let entries: Vec<Vec<GradedPoly>> = rows
                .iter()
                .map(|row| (0..4).filter(|&c| c != skip).map(|c| row[c].clone()).collect())
                .collect();
            det_poly(&entries).expect("linear entries")
        };
        let d1 = cofactor(1);
        let d3 = cofactor(3);
        all_zero &= d1.is_zero() && d3.is_zero();
        // expansion along the first row gives -(q2 D1 + q4 D3); the
        // Hilbert-Burch sign for row r + 1 is (-1)^(r+1)
        let minor = q2.mul_poly(&d1).add(&q4.mul_poly(&d3)).expect("same shape");
        param_minors.push(if r % 2 == 0 { minor } else { minor.scale(field.neg(1)) });
    }
    if all_zero {
        return Err(OcticError::DegenerateCofactors);
    }
    Ok(ResidualFamily {
        base: hb.clone(),
        sm_lower,
        param_minors,
        quartic_ratio,
    })
}

impl ResidualFamily {
    /// `SM(a)` as a 5x4 array.
    pub fn specialized_matrix(&self, params: &[u64]) -> Vec<Vec<GradedPoly>> {
        let field = self.base.quartic.field();
        let (q2, q4) = conic_row(field);
        let zero = GradedPoly::zero(field, NVARS, 2);
        let mut rows = vec![vec![zero.clone(), q2.specialize(params), zero, q4.specialize(params)]];
        rows.extend(self.sm_lower.iter().cloned());
        rows
    }

    pub fn minors_at(&self, params: &[u64]) -> Vec<GradedPoly> {
        self.param_minors.iter().map(|m| m.specialize(params)).collect()
    }
}

/// Outcome of the linear-system test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Octic14Report {
    pub mode: SystemMode,
    pub preconditions: PreconditionEvidence,
    pub normalization_rank: usize,
    pub system_matrix: DenseMatrix,
    pub system_rank: usize,
    /// paper13: indices `4 * cubic + minor`... see [`system_row_labels`]
    pub selected_rows: Vec<usize>,
    pub selection_attempts: u64,
    pub witness: Option<Witness>,
}

/// Label of row `i` of the full 40x12 system: `(minor index, cubic monomial)`.
pub fn system_row_labels() -> Vec<(usize, String)> {
    let cubics = MonomialBasis::get(NVARS, 3);
    (0..4)
        .flat_map(|r| (0..cubics.len()).map(move |c| (r, c)))
        .map(|(r, c)| (r, cubics.display(c)))
        .collect()
}

/// Row `(r, ν)`, coefficient `k`: `p · coeffs(ν * part_k(minor_r))`.
fn full_system(p: &[u64], fam: &ResidualFamily) -> DenseMatrix {
    let field = fam.base.quartic.field();
    let mut rows = Vec::with_capacity(40);
    for minor in &fam.param_minors {
        let per_part: Vec<Vec<Vec<u64>>> = minor
            .parts()
            .iter()
            .map(|part| monomial_multiples(part, 3))
            .collect();
        for nu in 0..monomial_count(NVARS, 3) {
            rows.push(per_part.iter().map(|mults| field.dot(p, &mults[nu])).collect());
        }
    }
    DenseMatrix::from_rows(field, PARAMS, &rows)
}

/// 45-vectors `ν * minor_r(a)` in the row order of [`full_system`].
fn candidate_columns(fam: &ResidualFamily, params: &[u64]) -> Vec<Vec<u64>> {
    fam.minors_at(params)
        .iter()
        .flat_map(|m| monomial_multiples(m, 3))
        .collect()
}

fn random_params(rng: &mut ChaCha8Rng, field: PrimeField) -> Vec<u64> {
    loop {
        let a: Vec<u64> = (0..PARAMS).map(|_| rng.gen_range(0..field.modulus())).collect();
        if a.iter().any(|&x| x != 0) {
            return a;
        }
    }
}

/// Builds and ranks the linear system in the residual parameters; a rank of
/// 12 leaves only `a = 0`, i.e. no second decomposition.
pub fn second_decomposition_system(
    inst: &Instance,
    fam: &ResidualFamily,
    mode: SystemMode,
) -> Result<(DenseMatrix, Vec<usize>, u64), OcticError> {
    let p = inst.tensor();
    let full = full_system(&p, fam);
    match mode {
        SystemMode::Full => Ok((full, (0..40).collect(), 0)),
        SystemMode::Paper13 => {
            let field = inst.points().field();
            let a_ideal = inst.points().ideal_basis(8);
            let mut best = 0;
            for attempt in 0..SELECTION_RETRIES {
                let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0013 + attempt);
                let params = random_params(&mut rng, field);
                let mut columns = a_ideal.clone();
                columns.extend(candidate_columns(fam, &params));
                let pivots = DenseMatrix::from_columns(field, 45, &columns).pivot_columns();
                best = best.max(pivots.len());
                if pivots.len() == 44 && pivots[..OCTIC_IDEAL_DIM] == (0..OCTIC_IDEAL_DIM).collect::<Vec<_>>()[..] {
                    let selected: Vec<usize> = pivots[OCTIC_IDEAL_DIM..]
                        .iter()
                        .map(|&c| c - OCTIC_IDEAL_DIM)
                        .collect();
                    return Ok((full.select_rows(&selected), selected, attempt + 1));
                }
            }
            Err(OcticError::SelectionFailed(best))
        }
    }
}

/// Checks that `params` defines a residual set `B` whose ideal has the
/// expected graded pieces and annihilates `T`.
pub fn verify_witness(inst: &Instance, fam: &ResidualFamily, params: &[u64]) -> Result<Witness, OcticError> {
    if params.len() != PARAMS || params.iter().all(|&a| a == 0) {
        return Err(OcticError::ZeroWitness);
    }
    let field = inst.points().field();
    let q = &fam.base.quartic;
    let minors = fam.minors_at(params);

    let mut quintic_cols = monomial_multiples(q, 1);
    quintic_cols.extend(minors.iter().map(|m| m.coeffs().to_vec()));
    let quintic_piece_dim = DenseMatrix::from_columns(field, 21, &quintic_cols).rank();
    if quintic_piece_dim != 7 {
        return Err(OcticError::WitnessRejected(format!(
            "degree-5 piece has dimension {quintic_piece_dim}, expected 7"
        )));
    }

    let mut octic_gens = monomial_multiples(q, 4);
    for m in &minors {
        octic_gens.extend(monomial_multiples(m, 3));
    }
    let octic_piece_dim = DenseMatrix::from_columns(field, 45, &octic_gens).rank();
    if octic_piece_dim != OCTIC_IDEAL_DIM {
        return Err(OcticError::WitnessRejected(format!(
            "degree-8 piece has dimension {octic_piece_dim}, expected 31"
        )));
    }

    let mut sum = inst.points().ideal_basis(8);
    sum.extend(octic_gens.iter().cloned());
    let sum_dim = DenseMatrix::from_columns(field, 45, &sum).rank();
    if sum_dim != 44 {
        return Err(OcticError::WitnessRejected(format!(
            "(I_A)_8 + (I_B)_8 has dimension {sum_dim}, expected 44"
        )));
    }

    let p = inst.tensor();
    let failing = octic_gens.iter().filter(|c| field.dot(&p, c) != 0).count();
    if failing > 0 {
        return Err(OcticError::WitnessRejected(format!(
            "{failing} generator(s) of (I_B)_8 do not annihilate T"
        )));
    }
    Ok(Witness {
        params: params.to_vec(),
        system_rank: 0,
        quintic_piece_dim,
        octic_piece_dim,
        sum_dim,
        annihilated_generators: octic_gens.len(),
    })
}

/// Everything computed by the pipeline short of the verdict.
pub fn run_octic14(inst: &Instance, mode: SystemMode) -> Result<(Octic14Report, ResidualFamily), OcticError> {
    let preconditions = check_preconditions(inst)?;
    let hb = hilbert_burch(inst.points())?;
    let normalization = normalization_check(&hb);
    if normalization.rank < 12 {
        return Err(OcticError::NormalizationRank(normalization.rank));
    }
    let fam = residual_family(&hb)?;
    let (system_matrix, selected_rows, selection_attempts) = second_decomposition_system(inst, &fam, mode)?;
    let system_rank = system_matrix.rank();
    let mut witness = None;
    let mut rejection = None;
    if system_rank < PARAMS {
        for candidate in system_matrix.kernel_basis() {
            match verify_witness(inst, &fam, &candidate) {
                Ok(mut w) => {
                    w.system_rank = system_rank;
                    witness = Some(w);
                    break;
                }
                Err(e) => rejection = Some(e),
            }
        }
        if witness.is_none() {
            return Err(rejection.unwrap_or(OcticError::ZeroWitness));
        }
    }
    Ok((
        Octic14Report {
            mode,
            preconditions,
            normalization_rank: normalization.rank,
            system_matrix,
            system_rank,
            selected_rows,
            selection_attempts,
            witness,
        },
        fam,
    ))
}

/// Full certification: identifiable of rank 14, not identifiable with a
/// verified witness, or a non-verdict explaining which step failed.
pub fn certify_octic14(inst: &Instance, mode: SystemMode) -> Certificate {
    let mut cert = Certificate::new(Criterion::Octic14);
    cert.text("mode", match mode {
        SystemMode::Full => "full",
        SystemMode::Paper13 => "paper13",
    });
    let verdict = match run_octic14(inst, mode) {
        Ok((report, _)) => {
            let pre = report.preconditions;
            cert.int("r", RANK)
                .int("test1_rank_v8", pre.octic_rank)
                .int("test2_h_A(4)", pre.h4)
                .int("test3_k_3(A)", pre.k3)
                .int("test3_subsets", pre.k3_subsets)
                .int("normalization_rank", report.normalization_rank)
                .int("system_rows", report.system_matrix.rows())
                .int("system_rank", report.system_rank);
            if mode == SystemMode::Paper13 {
                cert.int("selection_attempts", report.selection_attempts);
            }
            match report.witness {
                None if report.system_rank == PARAMS => Verdict::IdentifiableOfRank { rank: RANK },
                None => Verdict::Degenerate {
                    reason: "rank-deficient system without a witness".into(),
                },
                Some(w) => {
                    cert.int("witness_quintic_dim", w.quintic_piece_dim)
                        .int("witness_octic_dim", w.octic_piece_dim)
                        .int("witness_sum_dim", w.sum_dim);
                    Verdict::NotIdentifiable { witness: w }
                }
            }
        }
        Err(OcticError::Shape(s)) => Verdict::Inconclusive { reason: s },
        Err(e @ OcticError::PreconditionFailed { test, value }) => {
            cert.text("failed_test", format!("{test:?}")).int("failed_value", value);
            match test {
                PreconditionTest::NonRedundant => Verdict::Degenerate { reason: e.to_string() },
                _ => Verdict::Inconclusive { reason: e.to_string() },
            }
        }
        Err(e) => Verdict::Degenerate { reason: e.to_string() },
    };
    cert.verdict = verdict;
    cert
}
