//! Seeded random generators shared by the integration tests.

#![allow(dead_code)]

pub mod exprs;

use nicefn::{Complex64, LinearMap, MPolynomial, MultiIndex, NiceFunction, NiceTerm, SpdForm};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex(rng: &mut impl Rng, scale: f64) -> Complex64 {
    Complex64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
}

pub fn real_point(rng: &mut impl Rng, dim: usize, scale: f64) -> Vec<f64> {
    (0..dim).map(|_| rng.gen_range(-scale..scale)).collect()
}

pub fn complex_point(rng: &mut impl Rng, dim: usize, scale: f64) -> Vec<Complex64> {
    (0..dim).map(|_| complex(rng, scale)).collect()
}

/// Complex vector with Euclidean norm at most `radius`.
pub fn shift(rng: &mut impl Rng, dim: usize, radius: f64) -> Vec<Complex64> {
    let v = complex_point(rng, dim, radius);
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if norm > radius {
        v.into_iter().map(|c| c * (radius / norm)).collect()
    } else {
        v
    }
}

/// Random orthogonal matrix (row-major) by Gram–Schmidt.
pub fn orthogonal(rng: &mut impl Rng, dim: usize) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    while rows.len() < dim {
        let mut v = real_point(rng, dim, 1.0);
        for r in &rows {
            let d: f64 = v.iter().zip(r).map(|(a, b)| a * b).sum();
            for (x, y) in v.iter_mut().zip(r) {
                *x -= d * y;
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-3 {
            rows.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    rows
}

/// `O diag(λ) Oᵗ` together with its eigen-decomposition.
pub struct SpdSample {
    pub form: SpdForm,
    pub basis: Vec<Vec<f64>>,
    pub eigenvalues: Vec<f64>,
}

impl SpdSample {
    /// `O diag(g(λ)) Oᵗ` in row-major order.
    pub fn spectral(&self, g: impl Fn(f64) -> f64) -> Vec<f64> {
        let n = self.eigenvalues.len();
        let o = &self.basis;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = (0..n)
                    .map(|k| o[k][i] * g(self.eigenvalues[k]) * o[k][j])
                    .sum();
            }
        }
        out
    }
}

/// Eigenvalues log-uniform in `[lo, hi]`, so the condition number is at most `hi / lo`.
pub fn spd_sample(rng: &mut impl Rng, dim: usize, lo: f64, hi: f64) -> SpdSample {
    let basis = orthogonal(rng, dim);
    let eigenvalues: Vec<f64> = (0..dim)
        .map(|_| (rng.gen_range(lo.ln()..=hi.ln())).exp())
        .collect();
    let mut sample = SpdSample {
        form: SpdForm::identity(dim),
        basis,
        eigenvalues,
    };
    sample.form = SpdForm::symmetrized(dim, sample.spectral(|l| l)).unwrap();
    sample
}

pub fn spd(rng: &mut impl Rng, dim: usize, lo: f64, hi: f64) -> SpdForm {
    spd_sample(rng, dim, lo, hi).form
}

pub fn invertible(rng: &mut impl Rng, dim: usize) -> LinearMap {
    loop {
        let entries = (0..dim * dim).map(|_| rng.gen_range(-1.5..1.5)).collect();
        if let Ok(t) = LinearMap::new(dim, entries) {
            if t.det().abs() > 0.3 {
                return t;
            }
        }
    }
}

/// `O₁ diag(±σ) O₂` with singular values in `[lo, hi]`.
pub fn conditioned_map(rng: &mut impl Rng, dim: usize, lo: f64, hi: f64) -> LinearMap {
    let left = orthogonal(rng, dim);
    let right = orthogonal(rng, dim);
    let sigma: Vec<f64> = (0..dim)
        .map(|_| rng.gen_range(lo..=hi) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 })
        .collect();
    let mut entries = vec![0.0; dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            entries[i * dim + j] = (0..dim).map(|k| left[i][k] * sigma[k] * right[k][j]).sum();
        }
    }
    LinearMap::new(dim, entries).unwrap()
}

pub fn multi_index(rng: &mut impl Rng, dim: usize, max_degree: u32) -> MultiIndex {
    let degree = rng.gen_range(0..=max_degree);
    let mut alpha = vec![0u32; dim];
    for _ in 0..degree {
        alpha[rng.gen_range(0..dim)] += 1;
    }
    MultiIndex::new(alpha)
}

pub fn poly(rng: &mut impl Rng, dim: usize, max_degree: u32) -> MPolynomial {
    loop {
        let mut p = MPolynomial::zero(dim);
        for _ in 0..rng.gen_range(1..=4) {
            p.add_term(multi_index(rng, dim, max_degree), complex(rng, 1.0));
        }
        if !p.is_zero() {
            return p;
        }
    }
}

/// Shape of a random nice function.
#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub dim: usize,
    pub max_terms: usize,
    pub max_degree: u32,
    pub shift_radius: f64,
    pub eig_lo: f64,
    pub eig_hi: f64,
}

impl Shape {
    pub fn new(dim: usize) -> Self {
        Shape {
            dim,
            max_terms: 3,
            max_degree: 4,
            shift_radius: 2.0,
            eig_lo: 0.5,
            eig_hi: 2.0,
        }
    }

    pub fn terms(mut self, n: usize) -> Self {
        self.max_terms = n;
        self
    }

    pub fn degree(mut self, d: u32) -> Self {
        self.max_degree = d;
        self
    }

    pub fn shift_radius(mut self, r: f64) -> Self {
        self.shift_radius = r;
        self
    }
}

pub fn term(rng: &mut impl Rng, shape: &Shape) -> NiceTerm {
    NiceTerm::new(
        poly(rng, shape.dim, shape.max_degree),
        spd(rng, shape.dim, shape.eig_lo, shape.eig_hi),
        shift(rng, shape.dim, shape.shift_radius).into(),
    )
    .unwrap()
}

pub fn function(rng: &mut impl Rng, shape: &Shape) -> NiceFunction {
    let count = rng.gen_range(1..=shape.max_terms);
    let terms = (0..count).map(|_| term(rng, shape)).collect();
    NiceFunction::new(shape.dim, terms).unwrap()
}

/// `max |a - b| / max(1, |a|)`.
pub fn rel_err(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(1.0)
}

/// Total coefficient mass, used to make coefficient distances relative.
pub fn mass(f: &NiceFunction) -> f64 {
    f.distance(&NiceFunction::zero(f.dim()))
}
