//! Homogeneous polynomials in `n + 1` variables over a prime field.
//!
//! Every degree-d form is a coefficient vector in the graded-lex monomial
//! basis of `S^d` with `x0 > x1 > ... > xn`: exponent tuples sorted in
//! decreasing lexicographic order. Coefficients are the plain monomial
//! coefficients (no multinomial weights), so `dot(F, veronese_vector(P, d))`
//! is exactly `F(P)`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::PolyError;
use crate::field::PrimeField;
use crate::matrix::DenseMatrix;

/// `binomial(n, k)` for small arguments.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of degree-d monomials in `nvars` variables.
pub fn monomial_count(nvars: usize, degree: u32) -> usize {
    if nvars == 0 {
        return usize::from(degree == 0);
    }
    binomial(degree as u64 + nvars as u64 - 1, nvars as u64 - 1) as usize
}

/// The monomials of one degree in graded-lex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialBasis {
    nvars: usize,
    degree: u32,
    exps: Vec<Vec<u32>>,
}

impl MonomialBasis {
    /// Shared, cached basis for `(nvars, degree)`.
    pub fn get(nvars: usize, degree: u32) -> Arc<MonomialBasis> {
        static CACHE: OnceLock<Mutex<HashMap<(usize, u32), Arc<MonomialBasis>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("monomial cache poisoned");
        guard
            .entry((nvars, degree))
            .or_insert_with(|| Arc::new(Self::build(nvars, degree)))
            .clone()
    }

    fn build(nvars: usize, degree: u32) -> Self {
        assert!(nvars >= 1, "need at least one variable");
        let mut exps = Vec::with_capacity(monomial_count(nvars, degree));
        let mut current = vec![0u32; nvars];
        fill(&mut exps, &mut current, 0, degree);
        MonomialBasis {
            nvars,
            degree,
            exps,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponents(&self) -> &[Vec<u32>] {
        &self.exps
    }

    /// Position of an exponent tuple, computed without lookup tables by
    /// counting the tuples that precede it.
    pub fn index_of(&self, exp: &[u32]) -> usize {
        debug_assert_eq!(exp.len(), self.nvars);
        debug_assert_eq!(exp.iter().sum::<u32>(), self.degree);
        let mut idx = 0;
        let mut rem = self.degree;
        for (i, &e) in exp.iter().enumerate().take(self.nvars - 1) {
            let tail = self.nvars - i - 1;
            for v in e + 1..=rem {
                idx += monomial_count(tail, rem - v);
            }
            rem -= e;
        }
        idx
    }

    /// Human-readable monomial, e.g. `x0^2*x2`.
    pub fn display(&self, i: usize) -> String {
        let parts: Vec<String> = self.exps[i]
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(v, &e)| if e == 1 { format!("x{v}") } else { format!("x{v}^{e}") })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

fn fill(out: &mut Vec<Vec<u32>>, current: &mut Vec<u32>, pos: usize, rem: u32) {
    if pos + 1 == current.len() {
        current[pos] = rem;
        out.push(current.clone());
        return;
    }
    for e in (0..=rem).rev() {
        current[pos] = e;
        fill(out, current, pos + 1, rem - e);
    }
}

/// Values of all degree-d monomials at `point`, in basis order.
pub fn veronese_vector(field: PrimeField, point: &[u64], degree: u32) -> Result<Vec<u64>, PolyError> {
    if point.iter().all(|&c| c % field.modulus() == 0) {
        return Err(PolyError::ZeroPoint);
    }
    Ok(monomial_values(field, point, degree))
}

/// Monomial evaluation without the zero-point check.
pub(crate) fn monomial_values(field: PrimeField, point: &[u64], degree: u32) -> Vec<u64> {
    let basis = MonomialBasis::get(point.len(), degree);
    // powers[v][e] = point[v]^e
    let powers: Vec<Vec<u64>> = point
        .iter()
        .map(|&c| {
            let mut row = Vec::with_capacity(degree as usize + 1);
            let mut acc = 1;
            for _ in 0..=degree {
                row.push(acc);
                acc = field.mul(acc, c % field.modulus());
            }
            row
        })
        .collect();
    basis
        .exponents()
        .iter()
        .map(|exp| {
            exp.iter()
                .enumerate()
                .fold(1, |acc, (v, &e)| field.mul(acc, powers[v][e as usize]))
        })
        .collect()
}

/// A homogeneous polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedPoly {
    field: PrimeField,
    nvars: usize,
    degree: u32,
    coeffs: Vec<u64>,
}

impl GradedPoly {
    pub fn zero(field: PrimeField, nvars: usize, degree: u32) -> Self {
        GradedPoly {
            field,
            nvars,
            degree,
            coeffs: vec![0; monomial_count(nvars, degree)],
        }
    }

    pub fn from_coeffs(
        field: PrimeField,
        nvars: usize,
        degree: u32,
        coeffs: Vec<u64>,
    ) -> Result<Self, PolyError> {
        let expected = monomial_count(nvars, degree);
        if coeffs.len() != expected {
            return Err(PolyError::DegreeMismatch(format!(
                "{} coefficients for degree {degree} in {nvars} variables (expected {expected})",
                coeffs.len()
            )));
        }
        let p = field.modulus();
        Ok(GradedPoly {
            field,
            nvars,
            degree,
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
        })
    }

    pub fn monomial(field: PrimeField, exp: &[u32], coeff: u64) -> Self {
        let degree = exp.iter().sum();
        let mut poly = Self::zero(field, exp.len(), degree);
        let idx = poly.basis().index_of(exp);
        poly.coeffs[idx] = coeff % field.modulus();
        poly
    }

    pub fn variable(field: PrimeField, nvars: usize, var: usize) -> Self {
        let mut exp = vec![0; nvars];
        exp[var] = 1;
        Self::monomial(field, &exp, 1)
    }

    /// Linear form `sum c_i x_i`.
    pub fn linear(field: PrimeField, coeffs: &[u64]) -> Self {
        Self::from_coeffs(field, coeffs.len(), 1, coeffs.to_vec()).expect("length matches")
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn basis(&self) -> Arc<MonomialBasis> {
        MonomialBasis::get(self.nvars, self.degree)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn same_space(&self, other: &GradedPoly) -> Result<(), PolyError> {
        if self.nvars != other.nvars || self.degree != other.degree || self.field != other.field {
            return Err(PolyError::DegreeMismatch(format!(
                "degree {} vs {} (variables {} vs {})",
                self.degree, other.degree, self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &GradedPoly) -> Result<GradedPoly, PolyError> {
        self.same_space(other)?;
        let f = self.field;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Ok(GradedPoly {
            coeffs,
            ..self.clone()
        })
    }

    pub fn sub(&self, other: &GradedPoly) -> Result<GradedPoly, PolyError> {
        self.add(&other.scale(self.field.neg(1)))
    }

    pub fn scale(&self, c: u64) -> GradedPoly {
        let f = self.field;
        GradedPoly {
            coeffs: self.coeffs.iter().map(|&a| f.mul(a, c)).collect(),
            ..self.clone()
        }
    }

    pub fn mul(&self, other: &GradedPoly) -> GradedPoly {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let f = self.field;
        let mut out = GradedPoly::zero(f, self.nvars, self.degree + other.degree);
        let (ba, bb, bo) = (self.basis(), other.basis(), out.basis());
        let mut exp = vec![0u32; self.nvars];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                for (v, slot) in exp.iter_mut().enumerate() {
                    *slot = ba.exps[i][v] + bb.exps[j][v];
                }
                let k = bo.index_of(&exp);
                out.coeffs[k] = f.mul_add(out.coeffs[k], a, b);
            }
        }
        out
    }

    pub fn eval(&self, point: &[u64]) -> u64 {
        assert_eq!(point.len(), self.nvars, "point arity mismatch");
        self.field
            .dot(&self.coeffs, &monomial_values(self.field, point, self.degree))
    }

    /// Scale so that the first nonzero coefficient is 1. Zero stays zero.
    pub fn normalized(&self) -> GradedPoly {
        match self.coeffs.iter().find(|&&c| c != 0) {
            Some(&lead) => self.scale(self.field.inv(lead)),
            None => self.clone(),
        }
    }

    /// `c` with `self = c * other`, if the two are proportional and `other`
    /// is nonzero.
    pub fn ratio_to(&self, other: &GradedPoly) -> Option<u64> {
        if self.same_space(other).is_err() {
            return None;
        }
        let pivot = other.coeffs.iter().position(|&c| c != 0)?;
        let f = self.field;
        let c = f.mul(self.coeffs[pivot], f.inv(other.coeffs[pivot]));
        (other.scale(c) == *self).then_some(c)
    }

    /// Partial derivative coefficient of a linear form, `d/dx_var`.
    pub fn linear_coeff(&self, var: usize) -> u64 {
        assert_eq!(self.degree, 1, "linear_coeff on a form of degree {}", self.degree);
        self.coeffs[var]
    }

    pub fn to_string_signed(&self) -> String {
        let basis = self.basis();
        let mut out = String::new();
        for (i, &c) in self.coeffs.iter().enumerate().filter(|(_, &c)| c != 0) {
            let c = self.field.to_signed(c);
            let sign = if c < 0 { "-" } else { "+" };
            if out.is_empty() {
                out.push_str(if c < 0 { "-" } else { "" });
            } else {
                out.push_str(&format!(" {sign} "));
            }
            if self.degree == 0 {
                out.push_str(&c.abs().to_string());
            } else {
                if c.abs() != 1 {
                    out.push_str(&format!("{}*", c.abs()));
                }
                out.push_str(&basis.display(i));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// Matrix of `g -> f * g` from `S^(d - deg f)` to `S^d`.
pub fn mult_map(f: &GradedPoly, target_degree: u32) -> Result<DenseMatrix, PolyError> {
    if target_degree < f.degree {
        return Err(PolyError::DegreeMismatch(format!(
            "target degree {target_degree} below factor degree {}",
            f.degree
        )));
    }
    let field = f.field;
    let source = MonomialBasis::get(f.nvars, target_degree - f.degree);
    let target = MonomialBasis::get(f.nvars, target_degree);
    let fb = f.basis();
    let mut m = DenseMatrix::zeros(field, target.len(), source.len());
    let mut exp = vec![0u32; f.nvars];
    for (col, src) in source.exponents().iter().enumerate() {
        for (i, &c) in f.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (v, slot) in exp.iter_mut().enumerate() {
                *slot = src[v] + fb.exps[i][v];
            }
            let row = target.index_of(&exp);
            m.set(row, col, field.add(m.get(row, col), c));
        }
    }
    Ok(m)
}

/// Products `m * f` for every monomial `m` of the given degree, as
/// coefficient vectors of `S^(deg f + degree)`.
pub fn monomial_multiples(f: &GradedPoly, degree: u32) -> Vec<Vec<u64>> {
    MonomialBasis::get(f.nvars, degree)
        .exponents()
        .iter()
        .map(|exp| GradedPoly::monomial(f.field, exp, 1).mul(f).coeffs)
        .collect()
}

/// Determinant of a square array of forms by cofactor expansion along the
/// first row.
pub fn det_poly(entries: &[Vec<GradedPoly>]) -> Result<GradedPoly, PolyError> {
    let k = entries.len();
    if k == 0 || entries.iter().any(|row| row.len() != k) {
        return Err(PolyError::DegreeMismatch("determinant of a non-square array".into()));
    }
    let cols: Vec<usize> = (0..k).collect();
    det_rec(entries, 0, &cols)
}

fn det_rec(entries: &[Vec<GradedPoly>], row: usize, cols: &[usize]) -> Result<GradedPoly, PolyError> {
    if cols.len() == 1 {
        return Ok(entries[row][cols[0]].clone());
    }
    let mut acc: Option<GradedPoly> = None;
    for (pos, &c) in cols.iter().enumerate() {
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = det_rec(entries, row + 1, &rest)?;
        let mut term = entries[row][c].mul(&minor);
        if pos % 2 == 1 {
            term = term.scale(term.field.neg(1));
        }
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term).map_err(|_| PolyError::InhomogeneousDeterminant)?,
        });
    }
    Ok(acc.expect("at least one column"))
}

/// A form whose coefficients are linear functions of parameters
/// `a_1..a_k` (no constant part): `sum_k a_k * parts[k]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamPoly {
    parts: Vec<GradedPoly>,
}

impl ParamPoly {
    pub fn new(parts: Vec<GradedPoly>) -> Result<Self, PolyError> {
        let Some(first) = parts.first() else {
            return Err(PolyError::DegreeMismatch("parametric form without parameters".into()));
        };
        for p in &parts[1..] {
            first.same_space(p)?;
        }
        Ok(ParamPoly { parts })
    }

    pub fn nparams(&self) -> usize {
        self.parts.len()
    }

    pub fn degree(&self) -> u32 {
        self.parts[0].degree
    }

    pub fn parts(&self) -> &[GradedPoly] {
        &self.parts
    }

    /// The linear form in the parameters giving coefficient `monomial`.
    pub fn coeff_form(&self, monomial: usize) -> Vec<u64> {
        self.parts.iter().map(|p| p.coeffs[monomial]).collect()
    }

    pub fn specialize(&self, params: &[u64]) -> GradedPoly {
        assert_eq!(params.len(), self.parts.len(), "parameter count mismatch");
        let f = self.parts[0].field;
        let mut out = GradedPoly::zero(f, self.parts[0].nvars, self.degree());
        for (part, &a) in self.parts.iter().zip(params) {
            if a == 0 {
                continue;
            }
            for (o, &c) in out.coeffs.iter_mut().zip(&part.coeffs) {
                *o = f.mul_add(*o, a % f.modulus(), c);
            }
        }
        out
    }

    pub fn mul_poly(&self, g: &GradedPoly) -> ParamPoly {
        ParamPoly {
            parts: self.parts.iter().map(|p| p.mul(g)).collect(),
        }
    }

    pub fn add(&self, other: &ParamPoly) -> Result<ParamPoly, PolyError> {
        if self.parts.len() != other.parts.len() {
            return Err(PolyError::DegreeMismatch("parameter count mismatch".into()));
        }
        let parts = self
            .parts
            .iter()
            .zip(&other.parts)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_, _>>()?;
        Ok(ParamPoly { parts })
    }

    pub fn scale(&self, c: u64) -> ParamPoly {
        ParamPoly {
            parts: self.parts.iter().map(|p| p.scale(c)).collect(),
        }
    }
}
