//! Exact symbolic engine for nice functions on `R^n`: finite sums of
//! `polynomial × exp(-π x·Q x + b·x)` terms with `Q` symmetric
//! positive-definite and `b ∈ C^n`.
//!
//! The class is closed under products, translation, modulation,
//! differentiation, linear change of variables, convolution and the Fourier
//! transform `f̂(ξ) = ∫ f(x) exp(-2πi x·ξ) dx`; all of these are computed in
//! closed form. The [`oracle`] module integrates the defining integrals
//! numerically to cross-check the closed forms.

// `!(x > tol)` is used on purpose so that NaN fails the check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod basis;
pub mod cli;
pub mod error;
pub mod expr;
pub mod json;
pub mod linalg;
pub mod multi_index;
pub mod nice;
pub mod oracle;
pub mod poly;
pub mod transform;

pub use num_complex::Complex64;

/// Coefficient field for every value in the crate.
pub type ComplexScalar = Complex64;

pub use basis::{
    expand_derivative_element, function_to_derivative_basis, to_derivative_basis,
    DerivativeBasisElement, DerivativeExpansion,
};
pub use error::{Error, Result};
pub use linalg::{LinearMap, SpdForm};
pub use multi_index::MultiIndex;
pub use nice::{ComplexVector, NiceFunction, NiceTerm};
pub use poly::MPolynomial;
pub use transform::{
    convolve, fourier_transform, inner_product, integral, inverse_transform, transform_rules_check,
    InnerProductValue, RulesReport,
};
