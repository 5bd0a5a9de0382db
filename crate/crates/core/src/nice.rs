//! Nice functions: finite sums of `poly(x) * exp(-π x·Q x + b·x)` terms with
//! `Q` symmetric positive-definite and `b` complex.
//!
//! Every operation returns a canonical [`NiceFunction`]: terms with equal
//! `(quad, shift)` keys are merged, negligible coefficients are dropped and
//! terms are sorted by key.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::ops::Deref;

use num_complex::Complex64;

use crate::error::{check_dim, Error, Result};
use crate::linalg::{approx_eq, LinearMap, SpdForm, KEY_TOL};
use crate::multi_index::MultiIndex;
use crate::poly::MPolynomial;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Key tolerance used when matching terms across two functions for distance.
pub const MATCH_TOL: f64 = 1e-7;

/// A vector in `C^n`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ComplexVector(pub Vec<Complex64>);

impl ComplexVector {
    pub fn zeros(dim: usize) -> Self {
        ComplexVector(vec![ZERO; dim])
    }

    pub fn real(values: &[f64]) -> Self {
        ComplexVector(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl Deref for ComplexVector {
    type Target = [Complex64];
    fn deref(&self) -> &[Complex64] {
        &self.0
    }
}

impl From<Vec<Complex64>> for ComplexVector {
    fn from(v: Vec<Complex64>) -> Self {
        ComplexVector(v)
    }
}

/// The bilinear product `z·w = Σ z_j w_j` (no conjugation).
pub fn dot(z: &[Complex64], w: &[Complex64]) -> Complex64 {
    z.iter().zip(w).map(|(a, b)| a * b).sum()
}

fn shifts_approx_eq(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(x, y)| approx_eq(x.re, y.re, tol) && approx_eq(x.im, y.im, tol))
}

fn key_cmp(a: &NiceTerm, b: &NiceTerm) -> Ordering {
    let qa = a.quad.entries().iter();
    let qb = b.quad.entries().iter();
    for (x, y) in qa.zip(qb) {
        match x.total_cmp(y) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    for (x, y) in a.shift.iter().zip(b.shift.iter()) {
        match x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    Ordering::Equal
}

/// One building block `poly(x) * exp(-π x·quad x + shift·x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NiceTerm {
    pub(crate) poly: MPolynomial,
    pub(crate) quad: SpdForm,
    pub(crate) shift: ComplexVector,
}

impl NiceTerm {
    pub fn new(poly: MPolynomial, quad: SpdForm, shift: ComplexVector) -> Result<Self> {
        check_dim(quad.dim(), poly.dim())?;
        check_dim(quad.dim(), shift.dim())?;
        if shift.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Invalid("non-finite shift".into()));
        }
        Ok(NiceTerm { poly, quad, shift })
    }

    /// `c * exp(-π x·quad x + shift·x)`.
    pub fn gaussian(quad: SpdForm, shift: ComplexVector, c: Complex64) -> Result<Self> {
        let poly = MPolynomial::constant(quad.dim(), c);
        NiceTerm::new(poly, quad, shift)
    }

    pub fn dim(&self) -> usize {
        self.quad.dim()
    }

    pub fn poly(&self) -> &MPolynomial {
        &self.poly
    }

    pub fn quad(&self) -> &SpdForm {
        &self.quad
    }

    pub fn shift(&self) -> &ComplexVector {
        &self.shift
    }

    pub fn same_key(&self, other: &NiceTerm, tol: f64) -> bool {
        self.quad.approx_eq(&other.quad, tol) && shifts_approx_eq(&self.shift, &other.shift, tol)
    }

    /// Value of the exponential factor alone at `z`.
    pub fn exponential(&self, z: &[Complex64]) -> Complex64 {
        (-PI * self.quad.bilinear(z, z) + dot(&self.shift, z)).exp()
    }

    pub fn evaluate(&self, z: &[Complex64]) -> Complex64 {
        if self.poly.is_zero() {
            return ZERO;
        }
        self.poly.eval(z) * self.exponential(z)
    }

    fn with_poly(&self, poly: MPolynomial) -> NiceTerm {
        NiceTerm {
            poly,
            quad: self.quad.clone(),
            shift: self.shift.clone(),
        }
    }

    /// One application of `∂_j` to the term.
    fn partial(&self, j: usize) -> NiceTerm {
        self.with_poly(GaussianDerivatives::step(
            &self.poly,
            &self.quad,
            &self.shift,
            j,
        ))
    }
}

/// Polynomial parts of `∂^β exp(-π x·Q x + b·x)`, memoized by `β`.
///
/// Each step uses `∂_j (p e) = (∂_j p + p · (b_j - 2π (Q x)_j)) e`.
#[derive(Debug, Clone)]
pub struct GaussianDerivatives {
    quad: SpdForm,
    shift: ComplexVector,
    cache: BTreeMap<MultiIndex, MPolynomial>,
}

impl GaussianDerivatives {
    pub fn new(quad: SpdForm, shift: ComplexVector) -> Self {
        let n = quad.dim();
        let mut cache = BTreeMap::new();
        cache.insert(MultiIndex::zero(n), MPolynomial::constant(n, ONE));
        GaussianDerivatives { quad, shift, cache }
    }

    /// The degree-one multiplier `b_j - 2π (Q x)_j`.
    pub fn multiplier(quad: &SpdForm, shift: &[Complex64], j: usize) -> MPolynomial {
        let n = quad.dim();
        let coeffs: Vec<Complex64> = (0..n)
            .map(|k| Complex64::new(-2.0 * PI * quad.get(j, k), 0.0))
            .collect();
        MPolynomial::linear(shift[j], &coeffs)
    }

    pub fn step(poly: &MPolynomial, quad: &SpdForm, shift: &[Complex64], j: usize) -> MPolynomial {
        let mut out = poly.partial(j);
        out.add_assign(&poly.mul(&GaussianDerivatives::multiplier(quad, shift, j)));
        out
    }

    pub fn get(&mut self, beta: &MultiIndex) -> MPolynomial {
        if let Some(p) = self.cache.get(beta) {
            return p.clone();
        }
        let (j, rest) = beta.split_first().expect("zero index is always cached");
        let prev = self.get(&rest);
        let p = GaussianDerivatives::step(&prev, &self.quad, &self.shift, j);
        self.cache.insert(beta.clone(), p.clone());
        p
    }
}

/// A finite sum of [`NiceTerm`]s, kept in canonical form.
#[derive(Debug, Clone, PartialEq)]
pub struct NiceFunction {
    dim: usize,
    terms: Vec<NiceTerm>,
}

impl NiceFunction {
    pub fn zero(dim: usize) -> Self {
        NiceFunction {
            dim,
            terms: Vec::new(),
        }
    }

    /// Validates dimensions and canonicalizes.
    pub fn new(dim: usize, terms: Vec<NiceTerm>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Invalid("dimension must be positive".into()));
        }
        for t in &terms {
            check_dim(dim, t.dim())?;
        }
        Ok(NiceFunction { dim, terms }.canonicalize())
    }

    pub fn from_term(term: NiceTerm) -> Self {
        let dim = term.dim();
        NiceFunction {
            dim,
            terms: vec![term],
        }
        .canonicalize()
    }

    /// The standard Gaussian `exp(-π x·x)`.
    pub fn standard_gaussian(dim: usize) -> Self {
        NiceFunction::from_term(
            NiceTerm::gaussian(SpdForm::identity(dim), ComplexVector::zeros(dim), ONE)
                .expect("identity Gaussian is valid"),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[NiceTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Merges equal keys, drops negligible coefficients and sorts by key.
    pub fn canonicalize(self) -> NiceFunction {
        let mut merged: Vec<NiceTerm> = Vec::with_capacity(self.terms.len());
        for t in self.terms {
            match merged.iter_mut().find(|m| m.same_key(&t, KEY_TOL)) {
                Some(m) => m.poly.add_assign(&t.poly),
                None => merged.push(t),
            }
        }
        for t in &mut merged {
            t.poly.prune();
        }
        merged.retain(|t| !t.poly.is_zero());
        merged.sort_by(key_cmp);
        NiceFunction {
            dim: self.dim,
            terms: merged,
        }
    }

    pub fn evaluate(&self, z: &[Complex64]) -> Result<Complex64> {
        check_dim(self.dim, z.len())?;
        Ok(self.terms.iter().map(|t| t.evaluate(z)).sum())
    }

    pub fn evaluate_real(&self, x: &[f64]) -> Result<Complex64> {
        self.evaluate(&ComplexVector::real(x))
    }

    pub fn add(&self, other: &NiceFunction) -> Result<NiceFunction> {
        check_dim(self.dim, other.dim)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(NiceFunction {
            dim: self.dim,
            terms,
        }
        .canonicalize())
    }

    pub fn sub(&self, other: &NiceFunction) -> Result<NiceFunction> {
        self.add(&other.scale(-ONE))
    }

    pub fn scale(&self, s: Complex64) -> NiceFunction {
        self.map_terms(|t| t.with_poly(t.poly.scale(s)))
    }

    fn map_terms<F: Fn(&NiceTerm) -> NiceTerm>(&self, f: F) -> NiceFunction {
        NiceFunction {
            dim: self.dim,
            terms: self.terms.iter().map(f).collect(),
        }
        .canonicalize()
    }

    /// Pointwise product: polynomials multiply, forms and shifts add.
    pub fn multiply(&self, other: &NiceFunction) -> Result<NiceFunction> {
        check_dim(self.dim, other.dim)?;
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let shift: Vec<Complex64> = a
                    .shift
                    .iter()
                    .zip(b.shift.iter())
                    .map(|(x, y)| x + y)
                    .collect();
                terms.push(NiceTerm {
                    poly: a.poly.mul(&b.poly),
                    quad: a.quad.add(&b.quad)?,
                    shift: shift.into(),
                });
            }
        }
        Ok(NiceFunction {
            dim: self.dim,
            terms,
        }
        .canonicalize())
    }

    /// Termwise complex conjugate; matches `conj(f(x))` for real `x`.
    pub fn conjugate(&self) -> NiceFunction {
        self.map_terms(|t| NiceTerm {
            poly: t.poly.conj(),
            quad: t.quad.clone(),
            shift: t
                .shift
                .iter()
                .map(Complex64::conj)
                .collect::<Vec<_>>()
                .into(),
        })
    }

    /// `x -> f(x - a)`, for complex `a`.
    pub fn translate(&self, a: &[Complex64]) -> Result<NiceFunction> {
        check_dim(self.dim, a.len())?;
        let n = self.dim;
        let identity: Vec<Vec<Complex64>> = (0..n)
            .map(|j| (0..n).map(|k| if j == k { ONE } else { ZERO }).collect())
            .collect();
        let neg_a: Vec<Complex64> = a.iter().map(|v| -v).collect();
        Ok(self.map_terms(|t| {
            let qa = t.quad.apply(a);
            let factor = (-PI * dot(a, &qa) - dot(&t.shift, a)).exp();
            let poly = t.poly.compose_affine(&identity, &neg_a).scale(factor);
            let shift: Vec<Complex64> = t
                .shift
                .iter()
                .zip(&qa)
                .map(|(s, q)| s + 2.0 * PI * q)
                .collect();
            NiceTerm {
                poly,
                quad: t.quad.clone(),
                shift: shift.into(),
            }
        }))
    }

    /// Multiplies by `exp(-2πi x·b)`.
    pub fn modulate(&self, b: &[Complex64]) -> Result<NiceFunction> {
        check_dim(self.dim, b.len())?;
        let minus_two_pi_i = Complex64::new(0.0, -2.0 * PI);
        Ok(self.map_terms(|t| {
            let shift: Vec<Complex64> = t
                .shift
                .iter()
                .zip(b)
                .map(|(s, bj)| s + minus_two_pi_i * bj)
                .collect();
            NiceTerm {
                poly: t.poly.clone(),
                quad: t.quad.clone(),
                shift: shift.into(),
            }
        }))
    }

    /// The mixed partial derivative `∂^alpha f`.
    pub fn differentiate(&self, alpha: &MultiIndex) -> Result<NiceFunction> {
        check_dim(self.dim, alpha.dim())?;
        Ok(self.map_terms(|t| {
            let mut t = t.clone();
            for (j, &k) in alpha.entries().iter().enumerate() {
                for _ in 0..k {
                    t = t.partial(j);
                }
            }
            t
        }))
    }

    /// Multiplies by the monomial `x^alpha`.
    pub fn monomial_multiply(&self, alpha: &MultiIndex) -> Result<NiceFunction> {
        check_dim(self.dim, alpha.dim())?;
        Ok(self.map_terms(|t| t.with_poly(t.poly.mul_monomial(alpha))))
    }

    /// `x -> f(T x)`.
    pub fn compose_linear(&self, t: &LinearMap) -> Result<NiceFunction> {
        check_dim(self.dim, t.dim())?;
        let rows: Vec<Vec<Complex64>> = t
            .rows()
            .into_iter()
            .map(|r| r.into_iter().map(|v| Complex64::new(v, 0.0)).collect())
            .collect();
        let zero_offset = vec![ZERO; self.dim];
        let tt = t.transpose();
        let mut terms = Vec::with_capacity(self.terms.len());
        for term in &self.terms {
            terms.push(NiceTerm {
                poly: term.poly.compose_affine(&rows, &zero_offset),
                quad: term.quad.congruence(t)?,
                shift: tt.apply(&term.shift).into(),
            });
        }
        Ok(NiceFunction {
            dim: self.dim,
            terms,
        }
        .canonicalize())
    }

    /// Largest polynomial degree across terms.
    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|t| t.poly.degree())
            .max()
            .unwrap_or(0)
    }

    /// Canonical coefficient distance.
    ///
    /// Terms are matched by key within [`MATCH_TOL`]. A matched pair
    /// contributes its largest coefficient difference plus the key drift
    /// weighted by coefficient size; unmatched terms contribute the sum of
    /// their coefficient magnitudes. The result is the largest matched
    /// discrepancy plus the total unmatched mass.
    pub fn distance(&self, other: &NiceFunction) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        let mut used = vec![false; other.terms.len()];
        let mut matched: f64 = 0.0;
        let mut unmatched = 0.0;
        for a in &self.terms {
            let hit = other
                .terms
                .iter()
                .enumerate()
                .find(|(k, b)| !used[*k] && a.same_key(b, MATCH_TOL));
            match hit {
                Some((k, b)) => {
                    used[k] = true;
                    let drift = key_drift(a, b);
                    let weight = a.poly.max_abs_coeff().max(b.poly.max_abs_coeff());
                    matched = matched.max(a.poly.max_coeff_distance(&b.poly) + drift * weight);
                }
                None => unmatched += poly_mass(&a.poly),
            }
        }
        for (k, b) in other.terms.iter().enumerate() {
            if !used[k] {
                unmatched += poly_mass(&b.poly);
            }
        }
        matched + unmatched
    }
}

fn poly_mass(p: &MPolynomial) -> f64 {
    p.terms().map(|(_, c)| c.norm()).sum()
}

fn key_drift(a: &NiceTerm, b: &NiceTerm) -> f64 {
    let q = a
        .quad
        .entries()
        .iter()
        .zip(b.quad.entries())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    let s = a
        .shift
        .iter()
        .zip(b.shift.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    q.max(s)
}
