//! Finite point sets in projective space and their linear-algebraic
//! invariants: evaluation matrices, Hilbert functions, Kruskal ranks, the
//! Cayley-Bacharach property and span intersections of Veronese images.
//!
//! Coordinates are used as given; the ideal of the dual set in the dual plane
//! is the kernel of the same evaluation matrices, so no separate dual type
//! exists.

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::PointSetError;
use crate::field::PrimeField;
use crate::matrix::DenseMatrix;
use crate::poly::{monomial_count, monomial_values};

/// An ordered list of distinct points of `P^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    field: PrimeField,
    n: usize,
    points: Vec<Vec<u64>>,
}

/// `true` when the two coordinate vectors span the same line.
pub fn projectively_equal(field: PrimeField, a: &[u64], b: &[u64]) -> bool {
    a.len() == b.len()
        && (0..a.len()).all(|i| {
            (i + 1..a.len()).all(|j| field.mul(a[i], b[j]) == field.mul(a[j], b[i]))
        })
}

impl PointSet {
    /// Validating constructor: coordinates are reduced modulo p, and zero or
    /// repeated points are rejected.
    pub fn new(field: PrimeField, n: usize, points: Vec<Vec<u64>>) -> Result<Self, PointSetError> {
        let p = field.modulus();
        let points: Vec<Vec<u64>> = points
            .into_iter()
            .map(|pt| pt.into_iter().map(|c| c % p).collect())
            .collect();
        for (i, pt) in points.iter().enumerate() {
            if pt.len() != n + 1 {
                return Err(PointSetError::Arity {
                    index: i,
                    got: pt.len(),
                    expected: n + 1,
                });
            }
            if pt.iter().all(|&c| c == 0) {
                return Err(PointSetError::ZeroPoint(i));
            }
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if projectively_equal(field, &points[i], &points[j]) {
                    return Err(PointSetError::Duplicate(i, j));
                }
            }
        }
        Ok(PointSet { field, n, points })
    }

    pub fn from_signed(field: PrimeField, n: usize, points: &[Vec<i64>]) -> Result<Self, PointSetError> {
        let pts = points
            .iter()
            .map(|pt| pt.iter().map(|&c| field.from_i64(c)).collect())
            .collect();
        Self::new(field, n, pts)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// Ambient projective dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<u64>] {
        &self.points
    }

    pub fn contains(&self, point: &[u64]) -> bool {
        self.points
            .iter()
            .any(|q| projectively_equal(self.field, q, point))
    }

    pub fn subset(&self, idx: &[usize]) -> PointSet {
        PointSet {
            field: self.field,
            n: self.n,
            points: idx.iter().map(|&i| self.points[i].clone()).collect(),
        }
    }

    pub fn without(&self, skip: usize) -> PointSet {
        let idx: Vec<usize> = (0..self.len()).filter(|&i| i != skip).collect();
        self.subset(&idx)
    }

    fn compatible(&self, other: &PointSet) -> Result<(), PointSetError> {
        if self.field != other.field || self.n != other.n {
            return Err(PointSetError::Incompatible);
        }
        Ok(())
    }

    /// `A ∪ B`, keeping the order of `A` followed by the new points of `B`.
    pub fn union(&self, other: &PointSet) -> Result<PointSet, PointSetError> {
        self.compatible(other)?;
        let mut points = self.points.clone();
        for q in &other.points {
            if !self.contains(q) {
                points.push(q.clone());
            }
        }
        Ok(PointSet {
            field: self.field,
            n: self.n,
            points,
        })
    }

    pub fn intersection_len(&self, other: &PointSet) -> usize {
        other.points.iter().filter(|q| self.contains(q)).count()
    }

    /// `ℓ(Z) × binomial(n+d, n)` matrix whose rows are the Veronese vectors of
    /// the points. Its kernel is the degree-d piece of the ideal of `Z`.
    pub fn evaluation_matrix(&self, degree: u32) -> DenseMatrix {
        let cols = monomial_count(self.n + 1, degree);
        let rows: Vec<Vec<u64>> = self
            .points
            .iter()
            .map(|pt| monomial_values(self.field, pt, degree))
            .collect();
        DenseMatrix::from_rows(self.field, cols, &rows)
    }

    /// `h_Z(j)`.
    pub fn hilbert_value(&self, degree: u32) -> usize {
        if self.is_empty() {
            return 0;
        }
        self.evaluation_matrix(degree).rank()
    }

    /// Basis of the degree-d piece of the ideal (kernel of the evaluation
    /// matrix), in canonical kernel order.
    pub fn ideal_basis(&self, degree: u32) -> Vec<Vec<u64>> {
        if self.is_empty() {
            let cols = monomial_count(self.n + 1, degree);
            return (0..cols)
                .map(|c| (0..cols).map(|r| u64::from(r == c)).collect())
                .collect();
        }
        self.evaluation_matrix(degree).kernel_basis()
    }

    pub fn hilbert_profile(&self, j_max: u32) -> HilbertProfile {
        let values: Vec<usize> = (0..=j_max).map(|j| self.hilbert_value(j)).collect();
        HilbertProfile::from_values(values, self.len())
    }

    /// `h^1_Z(d) = ℓ(Z) - h_Z(d)`.
    pub fn h1_defect(&self, degree: u32) -> usize {
        self.len() - self.hilbert_value(degree)
    }

    /// Cayley-Bacharach in degree d: removing any single point leaves the
    /// value of the Hilbert function in degree d unchanged.
    pub fn cb_check(&self, degree: u32) -> Result<bool, PointSetError> {
        if self.len() < 2 {
            return Err(PointSetError::TooFewPoints);
        }
        let full = self.hilbert_value(degree);
        Ok((0..self.len())
            .into_par_iter()
            .all(|i| self.without(i).hilbert_value(degree) == full))
    }

    /// Kruskal rank in degree d.
    pub fn kruskal_rank(&self, degree: u32) -> KruskalReport {
        kruskal_rank(self, degree)
    }

    /// `dim(<v_d(A)> ∩ <v_d(B)>)` (projective; -1 for empty), from the three
    /// Hilbert values by Grassmann's formula.
    pub fn span_intersection_dim(&self, other: &PointSet, degree: u32) -> Result<i64, PointSetError> {
        self.compatible(other)?;
        let union = self.union(other)?;
        let ha = self.hilbert_value(degree) as i64;
        let hb = other.hilbert_value(degree) as i64;
        let hu = union.hilbert_value(degree) as i64;
        Ok((ha - 1) + (hb - 1) - (hu - 1))
    }

    /// The other side of the span-intersection identity:
    /// `ℓ(A ∩ B) - 1 + h^1_{A∪B}(d)`.
    pub fn span_intersection_formula(&self, other: &PointSet, degree: u32) -> Result<i64, PointSetError> {
        let union = self.union(other)?;
        Ok(self.intersection_len(other) as i64 - 1 + union.h1_defect(degree) as i64)
    }
}

/// Values of `h_Z` and its first difference on `0..=j_max`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HilbertProfile {
    pub values: Vec<usize>,
    pub differences: Vec<usize>,
    pub length: usize,
}

impl HilbertProfile {
    pub fn from_values(values: Vec<usize>, length: usize) -> Self {
        let differences = values
            .iter()
            .scan(0usize, |prev, &v| {
                let d = v.checked_sub(*prev).expect("Hilbert function must be nondecreasing");
                *prev = v;
                Some(d)
            })
            .collect();
        HilbertProfile {
            values,
            differences,
            length,
        }
    }

    /// `Dh(j)`, zero outside the computed range on the left and, once the
    /// profile has reached the length, on the right.
    pub fn dh(&self, j: i64) -> usize {
        if j < 0 {
            return 0;
        }
        match self.differences.get(j as usize) {
            Some(&d) => d,
            None => {
                assert!(
                    self.values.last() == Some(&self.length),
                    "Dh({j}) requested beyond an unstabilized profile"
                );
                0
            }
        }
    }

    pub fn h(&self, j: i64) -> usize {
        if j < 0 {
            return 0;
        }
        match self.values.get(j as usize) {
            Some(&v) => v,
            None => self.dh(j) + self.values.last().copied().unwrap_or(0),
        }
    }

    pub fn is_stable(&self) -> bool {
        self.values.last() == Some(&self.length)
    }
}

/// Outcome of a Kruskal-rank search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KruskalReport {
    pub degree: u32,
    pub rank: usize,
    /// Number of `rank`-subsets verified independent (all of them).
    pub subsets_examined: u64,
}

/// Largest k such that every k-subset has linearly independent Veronese
/// images. The search descends from `min(binomial(n+d, n), ℓ)`; independence
/// of all k-subsets implies it for all smaller subsets.
pub fn kruskal_rank(set: &PointSet, degree: u32) -> KruskalReport {
    let l = set.len();
    let cols = monomial_count(set.n + 1, degree);
    let rows = set.evaluation_matrix(degree);
    let mut k = cols.min(l);
    loop {
        if k == 0 {
            return KruskalReport {
                degree,
                rank: 0,
                subsets_examined: 1,
            };
        }
        let all_independent = (0..l)
            .combinations(k)
            .par_bridge()
            .all(|idx| rows.select_rows(&idx).rank() == k);
        if all_independent {
            return KruskalReport {
                degree,
                rank: k,
                subsets_examined: crate::poly::binomial(l as u64, k as u64),
            };
        }
        k -= 1;
    }
}
