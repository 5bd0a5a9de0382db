//! JSON interchange for nice functions and derivative expansions.
//!
//! ```json
//! {"dim": 1, "terms": [{"poly": [{"alpha": [0], "re": 1, "im": 0}],
//!                       "quad": [[1]], "shift": [{"re": 0, "im": 0}]}]}
//! ```
//!
//! Floats are written like C's `%.17g`, which round-trips every double.

use std::collections::BTreeMap;
use std::io;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::ser::{CompactFormatter, Formatter};

use crate::basis::DerivativeExpansion;
use crate::error::{check_dim, Error, Result};
use crate::linalg::SpdForm;
use crate::multi_index::MultiIndex;
use crate::nice::{ComplexVector, NiceFunction, NiceTerm};
use crate::poly::MPolynomial;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonomialJson {
    pub alpha: Vec<u32>,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub poly: Vec<MonomialJson>,
    pub quad: Vec<Vec<f64>>,
    pub shift: Vec<ComplexJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionJson {
    pub dim: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffJson {
    pub beta: Vec<u32>,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionJson {
    pub quad: Vec<Vec<f64>>,
    pub shift: Vec<ComplexJson>,
    pub coeffs: Vec<CoeffJson>,
}

impl From<Complex64> for ComplexJson {
    fn from(c: Complex64) -> Self {
        ComplexJson { re: c.re, im: c.im }
    }
}

impl From<ComplexJson> for Complex64 {
    fn from(c: ComplexJson) -> Self {
        Complex64::new(c.re, c.im)
    }
}

impl From<&NiceFunction> for FunctionJson {
    fn from(f: &NiceFunction) -> Self {
        FunctionJson {
            dim: f.dim(),
            terms: f
                .terms()
                .iter()
                .map(|t| TermJson {
                    poly: t
                        .poly()
                        .terms()
                        .map(|(a, c)| MonomialJson {
                            alpha: a.entries().to_vec(),
                            re: c.re,
                            im: c.im,
                        })
                        .collect(),
                    quad: t.quad().rows(),
                    shift: t.shift().iter().map(|&c| c.into()).collect(),
                })
                .collect(),
        }
    }
}

impl TryFrom<FunctionJson> for NiceFunction {
    type Error = Error;

    fn try_from(j: FunctionJson) -> Result<Self> {
        let dim = j.dim;
        let mut terms = Vec::with_capacity(j.terms.len());
        for t in j.terms {
            let mut poly = MPolynomial::zero(dim);
            for m in t.poly {
                check_dim(dim, m.alpha.len())?;
                check_finite(m.re)?;
                check_finite(m.im)?;
                poly.add_term(MultiIndex::new(m.alpha), Complex64::new(m.re, m.im));
            }
            check_dim(dim, t.quad.len())?;
            let quad = SpdForm::from_rows(&t.quad)?;
            check_dim(dim, t.shift.len())?;
            let shift: ComplexVector = t
                .shift
                .into_iter()
                .map(Complex64::from)
                .collect::<Vec<_>>()
                .into();
            terms.push(NiceTerm::new(poly, quad, shift)?);
        }
        NiceFunction::new(dim, terms)
    }
}

impl From<&DerivativeExpansion> for ExpansionJson {
    fn from(e: &DerivativeExpansion) -> Self {
        ExpansionJson {
            quad: e.quad.rows(),
            shift: e.shift.iter().map(|&c| c.into()).collect(),
            coeffs: e
                .coeffs
                .iter()
                .map(|(b, c)| CoeffJson {
                    beta: b.entries().to_vec(),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
    }
}

impl TryFrom<ExpansionJson> for DerivativeExpansion {
    type Error = Error;

    fn try_from(j: ExpansionJson) -> Result<Self> {
        let quad = SpdForm::from_rows(&j.quad)?;
        let dim = quad.dim();
        check_dim(dim, j.shift.len())?;
        let mut coeffs = BTreeMap::new();
        for c in j.coeffs {
            check_dim(dim, c.beta.len())?;
            *coeffs.entry(MultiIndex::new(c.beta)).or_default() += Complex64::new(c.re, c.im);
        }
        Ok(DerivativeExpansion {
            coeffs,
            quad,
            shift: j
                .shift
                .into_iter()
                .map(Complex64::from)
                .collect::<Vec<_>>()
                .into(),
        })
    }
}

fn check_finite(v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::Invalid("non-finite number".into()))
    }
}

/// Formats like C's `%.17g`.
pub fn format_g17(x: f64) -> String {
    // negative zero is written as 0 so equal functions serialize identically
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        let m = trim_zeros(mantissa.to_string());
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0');
    t.trim_end_matches('.').to_string()
}

/// Compact JSON formatter writing floats with [`format_g17`].
#[derive(Debug, Default, Clone, Copy)]
pub struct G17Formatter;

impl Formatter for G17Formatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if !value.is_finite() {
            return Err(io::Error::new(
                io::ErrorKind::InvalidData,
                "non-finite number cannot be written as JSON",
            ));
        }
        writer.write_all(format_g17(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    fn write_i64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: i64) -> io::Result<()> {
        CompactFormatter.write_i64(writer, value)
    }
}

/// Serializes any value with the 17-digit float formatter.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, G17Formatter);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::Invalid(e.to_string()))?;
    Ok(String::from_utf8(out).expect("JSON output is UTF-8"))
}

pub fn function_to_json(f: &NiceFunction) -> Result<String> {
    to_json_string(&FunctionJson::from(f))
}

pub fn function_from_json(text: &str) -> Result<NiceFunction> {
    let j: FunctionJson =
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("bad JSON: {e}")))?;
    NiceFunction::try_from(j)
}

pub fn expansions_to_json(e: &[DerivativeExpansion]) -> Result<String> {
    let v: Vec<ExpansionJson> = e.iter().map(ExpansionJson::from).collect();
    to_json_string(&v)
}

pub fn expansions_from_json(text: &str) -> Result<Vec<DerivativeExpansion>> {
    let v: Vec<ExpansionJson> =
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("bad JSON: {e}")))?;
    v.into_iter().map(DerivativeExpansion::try_from).collect()
}
