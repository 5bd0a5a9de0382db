//! Conversion between monomial-type blocks `x^α e^Q` and derivative-type
//! blocks `∂^β e^Q`, where `e^Q = exp(-π x·Q x + b·x)` shares one key.
//!
//! `∂^β e^Q` has polynomial part of exact degree `|β|` whose top homogeneous
//! component is `Π_j (-2π (Q x)_j)^{β_j}`. Ordering both bases graded-lex makes
//! the change of basis block lower-triangular by degree, so the coefficients
//! are found by solving one block per degree from the top down.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{Lu, SpdForm};
use crate::multi_index::MultiIndex;
use crate::nice::{ComplexVector, GaussianDerivatives, NiceFunction, NiceTerm};
use crate::poly::MPolynomial;

/// Smallest admissible ratio of pivots in a degree block.
pub const PIVOT_RATIO_TOL: f64 = 1e-10;

/// `∂^order exp(-π x·quad x + shift·x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeBasisElement {
    pub order: MultiIndex,
    pub quad: SpdForm,
    pub shift: ComplexVector,
}

/// `Σ_β coeffs[β] ∂^β exp(-π x·quad x + shift·x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeExpansion {
    pub coeffs: BTreeMap<MultiIndex, Complex64>,
    pub quad: SpdForm,
    pub shift: ComplexVector,
}

impl DerivativeExpansion {
    /// Back to monomial form.
    pub fn expand(&self) -> NiceFunction {
        let n = self.quad.dim();
        let mut derivs = GaussianDerivatives::new(self.quad.clone(), self.shift.clone());
        let mut poly = MPolynomial::zero(n);
        for (beta, &c) in &self.coeffs {
            poly.add_assign(&derivs.get(beta).scale(c));
        }
        let term = NiceTerm::new(poly, self.quad.clone(), self.shift.clone())
            .expect("expansion has consistent dimensions");
        NiceFunction::from_term(term)
    }

    /// Largest coefficient difference; infinite if the keys differ.
    pub fn distance(&self, other: &DerivativeExpansion) -> f64 {
        if self.quad != other.quad || self.shift != other.shift {
            return f64::INFINITY;
        }
        let mut d: f64 = 0.0;
        for (beta, c) in &self.coeffs {
            let o = other.coeffs.get(beta).copied().unwrap_or_default();
            d = d.max((c - o).norm());
        }
        for (beta, c) in &other.coeffs {
            if !self.coeffs.contains_key(beta) {
                d = d.max(c.norm());
            }
        }
        d
    }
}

pub fn expand_derivative_element(e: &DerivativeBasisElement) -> NiceFunction {
    let mut coeffs = BTreeMap::new();
    coeffs.insert(e.order.clone(), Complex64::new(1.0, 0.0));
    DerivativeExpansion {
        coeffs,
        quad: e.quad.clone(),
        shift: e.shift.clone(),
    }
    .expand()
}

/// Rewrites one term in the derivative basis of its own key.
pub fn to_derivative_basis(t: &NiceTerm) -> Result<DerivativeExpansion> {
    let n = t.dim();
    let top = t.poly().degree();
    let mut derivs = GaussianDerivatives::new(t.quad().clone(), t.shift().clone());
    let mut residual = t.poly().clone();
    let mut coeffs = BTreeMap::new();

    for degree in (0..=top).rev() {
        let basis = MultiIndex::of_degree(n, degree);
        let size = basis.len();
        let polys: Vec<MPolynomial> = basis.iter().map(|beta| derivs.get(beta)).collect();
        // rows: monomials of this degree; columns: β of this degree
        let mut block = vec![0.0; size * size];
        for (col, p) in polys.iter().enumerate() {
            for (row, mono) in basis.iter().enumerate() {
                block[row * size + col] = p.coeff(mono).re;
            }
        }
        let lu = Lu::new(size, &block);
        let ratio = lu.pivot_ratio();
        if !(ratio >= PIVOT_RATIO_TOL) {
            return Err(Error::SolveFailure { ratio });
        }
        let rhs: Vec<Complex64> = basis.iter().map(|m| residual.coeff(m)).collect();
        let solution = lu.solve(&rhs);
        for ((beta, p), c) in basis.into_iter().zip(&polys).zip(solution) {
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            residual.add_assign(&p.scale(-c));
            coeffs.insert(beta, c);
        }
    }

    Ok(DerivativeExpansion {
        coeffs,
        quad: t.quad().clone(),
        shift: t.shift().clone(),
    })
}

/// One expansion per `(quad, shift)` key, in canonical term order.
pub fn function_to_derivative_basis(f: &NiceFunction) -> Result<Vec<DerivativeExpansion>> {
    f.terms().iter().map(to_derivative_basis).collect()
}
