//! Numerical oracle: direct tensor-product quadrature of the defining
//! integrals and finite-difference derivatives. Shares nothing with the
//! closed-form transform code beyond pointwise evaluation of nice functions.

pub mod gauss_legendre;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{check_dim, Error, Result};
use crate::nice::{NiceFunction, NiceTerm};

/// Largest dimension the oracle accepts.
pub const MAX_DIM: usize = 3;
/// Relative tail estimate a spec must stay below.
pub const TAIL_TOL: f64 = 1e-9;
/// Default truncation radius in units of the slowest decay length.
pub const DEFAULT_RADII: f64 = 6.0;

/// Truncated box `[-half_width, half_width]^dim` sampled with a composite
/// Gauss–Legendre rule of `points_per_axis` nodes per axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub dim: usize,
    pub half_width: f64,
    pub points_per_axis: usize,
}

/// Decay of one Gaussian factor: `|·| <~ poly · exp(-π λ |x - center|²)`.
#[derive(Debug, Clone)]
struct Profile {
    lambda: f64,
    center: Vec<f64>,
    degree: u32,
}

impl Profile {
    /// Profile of a term whose real linear coefficient is `Re(shift) + extra`.
    fn of_term(term: &NiceTerm, extra: &[f64]) -> Profile {
        let r: Vec<Complex64> = term
            .shift()
            .iter()
            .zip(extra)
            .map(|(b, e)| Complex64::new((b.re + e) / (2.0 * PI), 0.0))
            .collect();
        let center = term.quad().solve(&r).into_iter().map(|v| v.re).collect();
        Profile {
            lambda: term.quad().min_eigen_lower_bound(),
            center,
            degree: term.poly().degree(),
        }
    }

    fn offset(&self) -> f64 {
        self.center.iter().map(|c| c.abs()).fold(0.0, f64::max)
    }

    /// Relative mass outside the box.
    fn tail(&self, half_width: f64, dim: usize) -> f64 {
        let margin = half_width - self.offset();
        if !(margin > 0.0) {
            return f64::INFINITY;
        }
        let growth = (1.0 + self.offset() + half_width).powi(self.degree as i32);
        let volume = (2.0 * half_width).max(1.0).powi(dim as i32);
        (-PI * self.lambda * margin * margin).exp() * growth * volume
    }
}

impl QuadratureSpec {
    pub fn new(dim: usize, half_width: f64, points_per_axis: usize) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::SpecRejected(format!(
                "dimension {dim} outside 1..={MAX_DIM}"
            )));
        }
        if !(half_width > 0.0) || !half_width.is_finite() || points_per_axis == 0 {
            return Err(Error::SpecRejected(
                "half_width and points_per_axis must be positive".into(),
            ));
        }
        Ok(QuadratureSpec {
            dim,
            half_width,
            points_per_axis,
        })
    }

    pub fn default_points(dim: usize) -> usize {
        match dim {
            1 => 200,
            2 => 120,
            _ => 60,
        }
    }

    fn from_profiles(dim: usize, profiles: &[Profile]) -> Result<Self> {
        let lambda = profiles
            .iter()
            .map(|p| p.lambda)
            .fold(f64::INFINITY, f64::min);
        let lambda = if lambda.is_finite() { lambda } else { 1.0 };
        let offset = profiles.iter().map(Profile::offset).fold(0.0, f64::max);
        QuadratureSpec::new(
            dim,
            DEFAULT_RADII / lambda.sqrt() + offset,
            QuadratureSpec::default_points(dim),
        )
    }

    /// Default box for integrating `f` against a real-frequency kernel.
    pub fn default_for(f: &NiceFunction) -> Result<Self> {
        QuadratureSpec::from_profiles(f.dim(), &function_profiles(f, &vec![0.0; f.dim()]))
    }

    /// Default box for the convolution integrand `y -> f(y) g(x - y)`.
    pub fn default_for_convolution(
        f: &NiceFunction,
        g: &NiceFunction,
        x: &[Complex64],
    ) -> Result<Self> {
        let mut profiles = function_profiles(f, &vec![0.0; f.dim()]);
        profiles.extend(reflected_profiles(g, x));
        QuadratureSpec::from_profiles(f.dim(), &profiles)
    }

    fn check(&self, dim: usize) -> Result<()> {
        check_dim(self.dim, dim)
    }

    fn reject_if_tail(&self, tail: f64) -> Result<()> {
        if tail < TAIL_TOL {
            Ok(())
        } else {
            Err(Error::SpecRejected(format!(
                "tail estimate {tail:e} exceeds {TAIL_TOL:e} for half_width {}",
                self.half_width
            )))
        }
    }

    fn max_tail(&self, profiles: &[Profile]) -> f64 {
        profiles
            .iter()
            .map(|p| p.tail(self.half_width, self.dim))
            .fold(0.0, f64::max)
    }

    /// Tensor-product quadrature of `integrand` over the box, summed in
    /// row-major grid order.
    pub fn integrate<F>(&self, mut integrand: F) -> Complex64
    where
        F: FnMut(&[Complex64]) -> Complex64,
    {
        let (nodes, weights) =
            gauss_legendre::composite(-self.half_width, self.half_width, self.points_per_axis);
        let m = nodes.len();
        let n = self.dim;
        let mut idx = vec![0usize; n];
        let mut point = vec![Complex64::new(nodes[0], 0.0); n];
        let mut sum = Complex64::new(0.0, 0.0);
        loop {
            let mut w = 1.0;
            for (k, &i) in idx.iter().enumerate() {
                point[k] = Complex64::new(nodes[i], 0.0);
                w *= weights[i];
            }
            sum += integrand(&point) * w;
            // advance the last axis fastest
            let mut axis = n;
            loop {
                if axis == 0 {
                    return sum;
                }
                axis -= 1;
                idx[axis] += 1;
                if idx[axis] < m {
                    break;
                }
                idx[axis] = 0;
            }
        }
    }
}

fn function_profiles(f: &NiceFunction, extra: &[f64]) -> Vec<Profile> {
    f.terms()
        .iter()
        .map(|t| Profile::of_term(t, extra))
        .collect()
}

/// Profiles of `y -> g(x - y)`.
fn reflected_profiles(g: &NiceFunction, x: &[Complex64]) -> Vec<Profile> {
    let zero = vec![0.0; g.dim()];
    g.terms()
        .iter()
        .map(|t| {
            let mut p = Profile::of_term(t, &zero);
            for (c, xj) in p.center.iter_mut().zip(x) {
                *c = xj.re - *c;
            }
            p
        })
        .collect()
}

/// Direct quadrature of `∫ f(x) exp(-2πi x·ξ) dx`.
pub fn quad_fourier(
    f: &NiceFunction,
    xi: &[Complex64],
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    check_dim(f.dim(), xi.len())?;
    spec.check(f.dim())?;
    let extra: Vec<f64> = xi.iter().map(|v| 2.0 * PI * v.im).collect();
    spec.reject_if_tail(spec.max_tail(&function_profiles(f, &extra)))?;
    if f.is_zero() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let minus_two_pi_i = Complex64::new(0.0, -2.0 * PI);
    Ok(spec.integrate(|x| {
        let phase: Complex64 = x.iter().zip(xi).map(|(a, b)| a * b).sum();
        f.evaluate(x).expect("dimension checked") * (minus_two_pi_i * phase).exp()
    }))
}

/// Direct quadrature of `∫ f(x) dx`.
pub fn quad_integral(f: &NiceFunction, spec: &QuadratureSpec) -> Result<Complex64> {
    quad_fourier(f, &vec![Complex64::new(0.0, 0.0); f.dim()], spec)
}

/// Direct quadrature of `∫ |f(x)| dx`.
pub fn quad_abs_integral(f: &NiceFunction, spec: &QuadratureSpec) -> Result<f64> {
    spec.check(f.dim())?;
    spec.reject_if_tail(spec.max_tail(&function_profiles(f, &vec![0.0; f.dim()])))?;
    Ok(spec
        .integrate(|x| Complex64::new(f.evaluate(x).expect("dimension checked").norm(), 0.0))
        .re)
}

/// Direct quadrature of `∫ f(x) conj(g(x)) dx`.
pub fn quad_inner(f: &NiceFunction, g: &NiceFunction, spec: &QuadratureSpec) -> Result<Complex64> {
    check_dim(f.dim(), g.dim())?;
    spec.check(f.dim())?;
    let zero = vec![0.0; f.dim()];
    let pf = function_profiles(f, &zero);
    let pg = function_profiles(g, &zero);
    spec.reject_if_tail(pair_tail(spec, &pf, &pg))?;
    Ok(spec.integrate(|x| {
        f.evaluate(x).expect("dimension checked") * g.evaluate(x).expect("dimension checked").conj()
    }))
}

fn pair_tail(spec: &QuadratureSpec, a: &[Profile], b: &[Profile]) -> f64 {
    let mut worst: f64 = 0.0;
    for pa in a {
        for pb in b {
            let t = pa
                .tail(spec.half_width, spec.dim)
                .min(pb.tail(spec.half_width, spec.dim));
            worst = worst.max(t);
        }
    }
    worst
}

/// Direct quadrature of `(f ∗ g)(x) = ∫ f(y) g(x - y) dy`, for `dim <= 2`.
pub fn quad_convolve(
    f: &NiceFunction,
    g: &NiceFunction,
    x: &[Complex64],
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    check_dim(f.dim(), g.dim())?;
    check_dim(f.dim(), x.len())?;
    spec.check(f.dim())?;
    if f.dim() > 2 {
        return Err(Error::SpecRejected(
            "convolution quadrature supports dim <= 2".into(),
        ));
    }
    let pf = function_profiles(f, &vec![0.0; f.dim()]);
    let pg = reflected_profiles(g, x);
    spec.reject_if_tail(pair_tail(spec, &pf, &pg))?;
    if f.is_zero() || g.is_zero() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mut diff = vec![Complex64::new(0.0, 0.0); f.dim()];
    Ok(spec.integrate(|y| {
        for ((d, xj), yj) in diff.iter_mut().zip(x).zip(y) {
            *d = xj - yj;
        }
        f.evaluate(y).expect("dimension checked") * g.evaluate(&diff).expect("dimension checked")
    }))
}

/// Central difference `(f(x + h e_j) - f(x - h e_j)) / 2h`.
pub fn finite_difference(f: &NiceFunction, axis: usize, x: &[f64], h: f64) -> Result<Complex64> {
    check_dim(f.dim(), x.len())?;
    if axis >= x.len() {
        return Err(Error::Invalid(format!("axis {axis} out of range")));
    }
    if !(h > 0.0) {
        return Err(Error::Invalid("step must be positive".into()));
    }
    let mut plus = x.to_vec();
    let mut minus = x.to_vec();
    plus[axis] += h;
    minus[axis] -= h;
    Ok((f.evaluate_real(&plus)? - f.evaluate_real(&minus)?) / (2.0 * h))
}

/// Outcome of [`compare`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison {
    pub pass: bool,
    pub residual: f64,
}

/// Passes iff `|symbolic - numeric| <= abs_tol + rel_tol * |symbolic|`.
pub fn compare(symbolic: Complex64, numeric: Complex64, abs_tol: f64, rel_tol: f64) -> Comparison {
    let residual = (symbolic - numeric).norm();
    Comparison {
        pass: residual <= abs_tol + rel_tol * symbolic.norm(),
        residual,
    }
}
