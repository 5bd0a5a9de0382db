use std::f64::consts::PI;

use num_complex::Complex64;

use super::ast::{ExpForm, ExpItem, Expr, ExprKind};
use super::ExprError;
use crate::error::Error;
use crate::linalg::SpdForm;
use crate::multi_index::MultiIndex;
use crate::nice::{ComplexVector, NiceFunction, NiceTerm};
use crate::poly::MPolynomial;

/// A term before SPD validation: the quadratic form may be zero or indefinite.
#[derive(Debug, Clone)]
struct Partial {
    poly: MPolynomial,
    quad: Vec<f64>,
    shift: Vec<Complex64>,
}

impl Partial {
    fn constant(dim: usize, c: Complex64) -> Self {
        Partial {
            poly: MPolynomial::constant(dim, c),
            quad: vec![0.0; dim * dim],
            shift: vec![Complex64::new(0.0, 0.0); dim],
        }
    }

    fn mul(&self, other: &Partial) -> Partial {
        Partial {
            poly: self.poly.mul(&other.poly),
            quad: self
                .quad
                .iter()
                .zip(&other.quad)
                .map(|(a, b)| a + b)
                .collect(),
            shift: self
                .shift
                .iter()
                .zip(&other.shift)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

fn literal_dim(item: &ExpItem) -> usize {
    match &item.form {
        ExpForm::Quadratic(m) => m.len(),
        ExpForm::Linear(v) => v.len(),
    }
}

/// Dimension implied by the matrix and vector literals, if any.
pub fn infer_dim(expr: &Expr) -> Result<Option<usize>, ExprError> {
    let mut found = None;
    visit_dims(expr, &mut found)?;
    Ok(found)
}

fn visit_dims(expr: &Expr, found: &mut Option<usize>) -> Result<(), ExprError> {
    match &expr.kind {
        ExprKind::Sum(items) => items.iter().try_for_each(|(_, e)| visit_dims(e, found)),
        ExprKind::Product(items) => items.iter().try_for_each(|e| visit_dims(e, found)),
        ExprKind::Exp(items) => {
            for it in items {
                let d = literal_dim(it);
                match *found {
                    None => *found = Some(d),
                    Some(expected) if expected != d => {
                        return Err(Error::DimensionMismatch { expected, found: d }.into())
                    }
                    _ => {}
                }
            }
            Ok(())
        }
        _ => Ok(()),
    }
}

fn lower_exp(items: &[ExpItem], dim: usize) -> Result<Partial, ExprError> {
    let mut out = Partial::constant(dim, Complex64::new(1.0, 0.0));
    let mut has_quadratic = false;
    for item in items {
        let d = literal_dim(item);
        if d != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: d,
            }
            .into());
        }
        let (c, pi_power) = item.coefficient();
        match &item.form {
            ExpForm::Quadratic(m) => {
                has_quadratic = true;
                for (i, row) in m.iter().enumerate() {
                    for (j, &v) in row.iter().enumerate().take(i) {
                        if v != m[j][i] {
                            return Err(Error::NotPositiveDefinite(format!(
                                "matrix literal is not symmetric at ({},{})",
                                i + 1,
                                j + 1
                            ))
                            .into());
                        }
                    }
                }
                // exponent c π^k x·M x is stored as -π x·quad x
                let scale = -c * PI.powi(pi_power - 1);
                for (slot, v) in out.quad.iter_mut().zip(m.iter().flatten()) {
                    *slot += scale * v;
                }
            }
            ExpForm::Linear(v) => {
                let scale = c * PI.powi(pi_power);
                for (slot, v) in out.shift.iter_mut().zip(v) {
                    *slot += v * scale;
                }
            }
        }
    }
    if has_quadratic {
        SpdForm::new(dim, out.quad.clone())?;
    }
    Ok(out)
}

fn lower_partial(expr: &Expr, dim: usize) -> Result<Vec<Partial>, ExprError> {
    Ok(match &expr.kind {
        ExprKind::Sum(items) => {
            let mut out = Vec::new();
            for (sign, e) in items {
                for mut p in lower_partial(e, dim)? {
                    p.poly = p.poly.scale(Complex64::new(sign.value(), 0.0));
                    out.push(p);
                }
            }
            out
        }
        ExprKind::Product(items) => {
            let mut acc = vec![Partial::constant(dim, Complex64::new(1.0, 0.0))];
            for e in items {
                let rhs = lower_partial(e, dim)?;
                acc = acc
                    .iter()
                    .flat_map(|a| rhs.iter().map(move |b| a.mul(b)))
                    .collect();
            }
            acc
        }
        ExprKind::Scalar(c) => vec![Partial::constant(dim, *c)],
        ExprKind::Constant(k) => vec![Partial::constant(dim, k.value())],
        ExprKind::Monomial { var, power } => {
            if *var > dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: *var,
                }
                .into());
            }
            let mut alpha = vec![0; dim];
            alpha[var - 1] = *power;
            let mut p = Partial::constant(dim, Complex64::new(1.0, 0.0));
            p.poly = MPolynomial::monomial(MultiIndex::new(alpha), Complex64::new(1.0, 0.0));
            vec![p]
        }
        ExprKind::Exp(items) => vec![lower_exp(items, dim)?],
    })
}

/// Lowers an AST to a canonical nice function on `R^dim`.
///
/// Every surviving term must carry a positive-definite quadratic form.
pub fn lower(expr: &Expr, dim: usize) -> Result<NiceFunction, ExprError> {
    if dim == 0 {
        return Err(Error::Invalid("dimension must be positive".into()).into());
    }
    let mut terms = Vec::new();
    for p in lower_partial(expr, dim)? {
        if p.poly.is_zero() {
            continue;
        }
        let quad = SpdForm::new(dim, p.quad).map_err(|e| match e {
            Error::NotPositiveDefinite(msg) => {
                Error::NotPositiveDefinite(format!("term lacks a decaying Gaussian factor ({msg})"))
            }
            other => other,
        })?;
        terms.push(NiceTerm::new(p.poly, quad, ComplexVector(p.shift))?);
    }
    Ok(NiceFunction::new(dim, terms)?)
}
