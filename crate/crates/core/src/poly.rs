//! Sparse multivariate polynomials with complex coefficients.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::multi_index::MultiIndex;

/// Relative threshold below which coefficients are dropped by [`MPolynomial::prune`].
pub const DROP_THRESHOLD: f64 = 1e-12;

/// A polynomial on `C^n`, stored as a sparse map from exponent to coefficient.
///
/// Zero coefficients are never stored. Iteration follows graded-lex order.
#[derive(Debug, Clone, PartialEq)]
pub struct MPolynomial {
    dim: usize,
    terms: BTreeMap<MultiIndex, Complex64>,
}

impl MPolynomial {
    pub fn zero(dim: usize) -> Self {
        MPolynomial {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Complex64) -> Self {
        MPolynomial::monomial(MultiIndex::zero(dim), c)
    }

    pub fn monomial(alpha: MultiIndex, c: Complex64) -> Self {
        let mut p = MPolynomial::zero(alpha.dim());
        p.add_term(alpha, c);
        p
    }

    /// `c_0 + Σ_k c_k x_k`.
    pub fn linear(constant: Complex64, coeffs: &[Complex64]) -> Self {
        let dim = coeffs.len();
        let mut p = MPolynomial::constant(dim, constant);
        for (k, &c) in coeffs.iter().enumerate() {
            p.add_term(MultiIndex::unit(dim, k), c);
        }
        p
    }

    /// Builds a polynomial from `(alpha, coeff)` pairs, summing repeats.
    pub fn from_terms<I>(dim: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (MultiIndex, Complex64)>,
    {
        let mut p = MPolynomial::zero(dim);
        for (alpha, c) in terms {
            p.add_term(alpha, c);
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Complex64 {
        self.terms.get(alpha).copied().unwrap_or_default()
    }

    /// Total degree; zero for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(MultiIndex::degree).max().unwrap_or(0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn add_term(&mut self, alpha: MultiIndex, c: Complex64) {
        assert_eq!(alpha.dim(), self.dim, "multi-index length mismatch");
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        match self.terms.entry(alpha) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == Complex64::new(0.0, 0.0) {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &MPolynomial) -> MPolynomial {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &MPolynomial) {
        for (alpha, &c) in &other.terms {
            self.add_term(alpha.clone(), c);
        }
    }

    pub fn scale(&self, s: Complex64) -> MPolynomial {
        if s == Complex64::new(0.0, 0.0) {
            return MPolynomial::zero(self.dim);
        }
        MPolynomial::from_terms(
            self.dim,
            self.terms.iter().map(|(a, &c)| (a.clone(), c * s)),
        )
    }

    pub fn mul(&self, other: &MPolynomial) -> MPolynomial {
        let mut out = MPolynomial::zero(self.dim);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                out.add_term(a.add(b), ca * cb);
            }
        }
        out
    }

    /// Multiplies by the monomial `x^alpha`.
    pub fn mul_monomial(&self, alpha: &MultiIndex) -> MPolynomial {
        MPolynomial {
            dim: self.dim,
            terms: self.terms.iter().map(|(a, &c)| (a.add(alpha), c)).collect(),
        }
    }

    pub fn conj(&self) -> MPolynomial {
        MPolynomial {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (a.clone(), c.conj()))
                .collect(),
        }
    }

    /// Partial derivative with respect to `x_j`.
    pub fn partial(&self, j: usize) -> MPolynomial {
        let mut out = MPolynomial::zero(self.dim);
        for (alpha, &c) in &self.terms {
            let k = alpha.entries()[j];
            if k == 0 {
                continue;
            }
            let mut e = alpha.entries().to_vec();
            e[j] -= 1;
            out.add_term(MultiIndex::new(e), c * k as f64);
        }
        out
    }

    /// Evaluates at a complex point, with `z_j^0 = 1`.
    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        assert_eq!(z.len(), self.dim, "evaluation point has wrong length");
        let mut sum = Complex64::new(0.0, 0.0);
        for (alpha, &c) in &self.terms {
            let mut m = c;
            for (zj, &aj) in z.iter().zip(alpha.entries()) {
                if aj > 0 {
                    m *= zj.powu(aj);
                }
            }
            sum += m;
        }
        sum
    }

    /// Substitutes the affine map `x_j -> Σ_k m[j][k] x_k + offset_j` and expands.
    pub fn compose_affine(&self, m: &[Vec<Complex64>], offset: &[Complex64]) -> MPolynomial {
        let n = self.dim;
        let images: Vec<MPolynomial> = (0..n)
            .map(|j| MPolynomial::linear(offset[j], &m[j]))
            .collect();
        let max_pow = self.degree() as usize;
        // powers[j][k] = images[j]^k
        let powers: Vec<Vec<MPolynomial>> = images
            .iter()
            .map(|img| {
                let mut v = vec![MPolynomial::constant(n, Complex64::new(1.0, 0.0))];
                for k in 1..=max_pow {
                    let next = v[k - 1].mul(img);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = MPolynomial::zero(n);
        for (alpha, &c) in &self.terms {
            let mut acc = MPolynomial::constant(n, c);
            for (j, &aj) in alpha.entries().iter().enumerate() {
                if aj > 0 {
                    acc = acc.mul(&powers[j][aj as usize]);
                }
            }
            out.add_assign(&acc);
        }
        out
    }

    /// Drops coefficients below `DROP_THRESHOLD` times the largest magnitude.
    pub fn prune(&mut self) {
        let cutoff = DROP_THRESHOLD * self.max_abs_coeff();
        self.terms
            .retain(|_, c| c.norm() >= cutoff && c.norm() > 0.0);
    }

    /// Largest coefficientwise difference `max |a_α - b_α|`.
    pub fn max_coeff_distance(&self, other: &MPolynomial) -> f64 {
        let mut d: f64 = 0.0;
        for (alpha, &c) in &self.terms {
            d = d.max((c - other.coeff(alpha)).norm());
        }
        for (alpha, &c) in &other.terms {
            if !self.terms.contains_key(alpha) {
                d = d.max(c.norm());
            }
        }
        d
    }
}
