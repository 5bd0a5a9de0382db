//! Closed-form Fourier analysis with the convention
//! `f̂(ξ) = ∫ f(x) exp(-2πi x·ξ) dx`.
//!
//! A term `p(x) exp(-π x·Q x + b·x)` transforms to
//!
//! ```text
//! det(Q)^{-1/2} exp(b·Q⁻¹b / 4π) · Σ_α p_α (-2πi)^{-|α|} ∂^α [exp(-π ξ·Q⁻¹ξ - i (Q⁻¹b)·ξ)]
//! ```
//!
//! so the transform of a nice function is again nice and is computed exactly
//! up to floating-point rounding.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{check_dim, Result};
use crate::linalg::LinearMap;
use crate::multi_index::MultiIndex;
use crate::nice::{dot, ComplexVector, GaussianDerivatives, NiceFunction, NiceTerm};
use crate::poly::MPolynomial;

/// The value of an `L²` pairing `∫ f conj(g)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerProductValue {
    pub value: Complex64,
}

fn transform_term(term: &NiceTerm) -> NiceTerm {
    let quad_inv = term.quad().inverse();
    let b = term.shift();
    let qinv_b = quad_inv.apply(b);
    let constant =
        Complex64::new(term.quad().inv_sqrt_det(), 0.0) * (dot(b, &qinv_b) / (4.0 * PI)).exp();
    let i = Complex64::new(0.0, 1.0);
    let new_shift: ComplexVector = qinv_b.iter().map(|v| -i * v).collect::<Vec<_>>().into();

    let mut derivs = GaussianDerivatives::new(quad_inv.clone(), new_shift.clone());
    let mut poly = MPolynomial::zero(term.dim());
    let minus_two_pi_i_inv = Complex64::new(0.0, -2.0 * PI).inv();
    for (alpha, &coeff) in term.poly().terms() {
        let factor = coeff * constant * minus_two_pi_i_inv.powu(alpha.degree());
        poly.add_assign(&derivs.get(alpha).scale(factor));
    }
    NiceTerm::new(poly, quad_inv, new_shift).expect("transform preserves dimensions")
}

/// The Fourier transform, term by term in input order.
pub fn fourier_transform(f: &NiceFunction) -> NiceFunction {
    let terms = f.terms().iter().map(transform_term).collect();
    NiceFunction::new(f.dim(), terms).expect("transform preserves dimensions")
}

/// The inverse transform `ǧ(x) = ĝ(-x)`.
pub fn inverse_transform(g: &NiceFunction) -> NiceFunction {
    fourier_transform(g)
        .compose_linear(&LinearMap::scalar(g.dim(), -1.0))
        .expect("negation is invertible")
}

/// `∫ f(x) dx`, read off as `f̂(0)`.
pub fn integral(f: &NiceFunction) -> Complex64 {
    let origin = ComplexVector::zeros(f.dim());
    fourier_transform(f)
        .evaluate(&origin)
        .expect("origin has the function's dimension")
}

/// `⟨f, g⟩ = ∫ f(x) conj(g(x)) dx`.
pub fn inner_product(f: &NiceFunction, g: &NiceFunction) -> Result<InnerProductValue> {
    let product = f.multiply(&g.conjugate())?;
    Ok(InnerProductValue {
        value: integral(&product),
    })
}

/// `(f ∗ g)(x) = ∫ f(y) g(x - y) dy`, computed as the inverse transform of `f̂ ĝ`.
pub fn convolve(f: &NiceFunction, g: &NiceFunction) -> Result<NiceFunction> {
    check_dim(f.dim(), g.dim())?;
    let spectrum = fourier_transform(f).multiply(&fourier_transform(g))?;
    Ok(inverse_transform(&spectrum))
}

/// Discrepancies of the four transform rules, each as a canonical distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RulesReport {
    /// `FT(∂^α f) = (2πi)^{|α|} ξ^α f̂`
    pub derivative: f64,
    /// `FT(f(· - a)) = exp(-2πi ξ·a) f̂`
    pub translation: f64,
    /// `FT(f · exp(-2πi x·b)) = f̂(· + b)`
    pub modulation: f64,
    /// `FT(f ∘ T) = |det T|⁻¹ f̂ ∘ T̃`
    pub change_of_variables: f64,
}

impl RulesReport {
    pub fn max(&self) -> f64 {
        self.derivative
            .max(self.translation)
            .max(self.modulation)
            .max(self.change_of_variables)
    }
}

/// Checks the derivative, translation, modulation and change-of-variables
/// rules symbolically by computing both sides of each identity.
pub fn transform_rules_check(
    f: &NiceFunction,
    alpha: &MultiIndex,
    a: &[Complex64],
    b: &[Complex64],
    t: &LinearMap,
) -> Result<RulesReport> {
    check_dim(f.dim(), alpha.dim())?;
    check_dim(f.dim(), a.len())?;
    check_dim(f.dim(), b.len())?;
    check_dim(f.dim(), t.dim())?;
    let f_hat = fourier_transform(f);

    let lhs = fourier_transform(&f.differentiate(alpha)?);
    let rhs = f_hat
        .monomial_multiply(alpha)?
        .scale(Complex64::new(0.0, 2.0 * PI).powu(alpha.degree()));
    let derivative = lhs.distance(&rhs);

    let lhs = fourier_transform(&f.translate(a)?);
    let rhs = f_hat.modulate(a)?;
    let translation = lhs.distance(&rhs);

    let lhs = fourier_transform(&f.modulate(b)?);
    let minus_b: Vec<Complex64> = b.iter().map(|v| -v).collect();
    let rhs = f_hat.translate(&minus_b)?;
    let modulation = lhs.distance(&rhs);

    let lhs = fourier_transform(&f.compose_linear(t)?);
    let rhs = f_hat
        .compose_linear(&t.inverse_transpose())?
        .scale(Complex64::new(1.0 / t.det().abs(), 0.0));
    let change_of_variables = lhs.distance(&rhs);

    Ok(RulesReport {
        derivative,
        translation,
        modulation,
        change_of_variables,
    })
}
