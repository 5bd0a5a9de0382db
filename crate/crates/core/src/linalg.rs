//! Small dense linear algebra: SPD quadratic forms, invertible linear maps,
//! and a partially pivoted LU solver. Matrices are row-major `Vec<f64>`.

use num_complex::Complex64;

use crate::error::{check_dim, Error, Result};

/// Relative pivot floor for SPD certification.
pub const SPD_PIVOT_TOL: f64 = 1e-12;
/// Relative determinant floor for invertibility of a linear map.
pub const SINGULAR_TOL: f64 = 1e-12;
/// Absolute and relative tolerance for treating two keys as equal.
pub const KEY_TOL: f64 = 1e-12;

pub(crate) fn approx_eq(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol + tol * a.abs().max(b.abs())
}

pub(crate) fn cholesky(dim: usize, a: &[f64]) -> Result<Vec<f64>> {
    let max_diag = (0..dim).map(|i| a[i * dim + i].abs()).fold(0.0, f64::max);
    if max_diag == 0.0 || !max_diag.is_finite() {
        return Err(Error::NotPositiveDefinite(
            "diagonal is zero or non-finite".into(),
        ));
    }
    let floor = SPD_PIVOT_TOL * max_diag;
    let mut l = vec![0.0; dim * dim];
    for j in 0..dim {
        let mut d = a[j * dim + j];
        for k in 0..j {
            d -= l[j * dim + k] * l[j * dim + k];
        }
        if !(d > floor) {
            return Err(Error::NotPositiveDefinite(format!(
                "pivot {j} is {d:e}, below {floor:e}"
            )));
        }
        let ljj = d.sqrt();
        l[j * dim + j] = ljj;
        for i in j + 1..dim {
            let mut s = a[i * dim + j];
            for k in 0..j {
                s -= l[i * dim + k] * l[j * dim + k];
            }
            l[i * dim + j] = s / ljj;
        }
    }
    Ok(l)
}

/// A symmetric positive-definite form `x -> x·A x` with its Cholesky factor.
#[derive(Debug, Clone)]
pub struct SpdForm {
    dim: usize,
    entries: Vec<f64>,
    factor: Vec<f64>,
    det: f64,
}

impl SpdForm {
    /// Validates symmetry (exact) and positive-definiteness (by factorization).
    pub fn new(dim: usize, entries: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Invalid("dimension must be positive".into()));
        }
        check_dim(dim * dim, entries.len())?;
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::NotPositiveDefinite("non-finite entry".into()));
        }
        for i in 0..dim {
            for j in 0..i {
                if entries[i * dim + j] != entries[j * dim + i] {
                    return Err(Error::NotPositiveDefinite(format!(
                        "matrix is not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        let factor = cholesky(dim, &entries)?;
        let diag_prod: f64 = (0..dim).map(|i| factor[i * dim + i]).product();
        Ok(SpdForm {
            dim,
            entries,
            factor,
            det: diag_prod * diag_prod,
        })
    }

    /// Symmetrizes `(M + M^T) / 2` before validating.
    pub fn symmetrized(dim: usize, mut entries: Vec<f64>) -> Result<Self> {
        check_dim(dim * dim, entries.len())?;
        for i in 0..dim {
            for j in 0..i {
                let avg = 0.5 * (entries[i * dim + j] + entries[j * dim + i]);
                entries[i * dim + j] = avg;
                entries[j * dim + i] = avg;
            }
        }
        SpdForm::new(dim, entries)
    }

    pub fn identity(dim: usize) -> Self {
        let mut e = vec![0.0; dim * dim];
        for i in 0..dim {
            e[i * dim + i] = 1.0;
        }
        SpdForm::new(dim, e).expect("identity is SPD")
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        for r in rows {
            check_dim(dim, r.len())?;
        }
        SpdForm::new(dim, rows.concat())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.dim).map(<[f64]>::to_vec).collect()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    /// Lower-triangular `L` with `A = L L^T`, row-major.
    pub fn factor(&self) -> &[f64] {
        &self.factor
    }

    pub fn det(&self) -> f64 {
        self.det
    }

    /// `det(A)^{-1/2}` from the factor diagonal.
    pub fn inv_sqrt_det(&self) -> f64 {
        let d: f64 = (0..self.dim)
            .map(|i| self.factor[i * self.dim + i])
            .product();
        1.0 / d
    }

    /// `A z` for complex `z`.
    pub fn apply(&self, z: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim;
        (0..n)
            .map(|i| (0..n).map(|j| z[j] * self.entries[i * n + j]).sum())
            .collect()
    }

    /// The bilinear form `z·A w` (no conjugation).
    pub fn bilinear(&self, z: &[Complex64], w: &[Complex64]) -> Complex64 {
        self.apply(w).iter().zip(z).map(|(a, b)| a * b).sum()
    }

    /// Solves `A x = b` by two triangular solves.
    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim;
        let l = &self.factor;
        let mut y = b.to_vec();
        for i in 0..n {
            for k in 0..i {
                let t = y[k] * l[i * n + k];
                y[i] -= t;
            }
            y[i] /= l[i * n + i];
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let t = y[k] * l[k * n + i];
                y[i] -= t;
            }
            y[i] /= l[i * n + i];
        }
        y
    }

    fn solve_real(&self, b: &[f64]) -> Vec<f64> {
        let z: Vec<Complex64> = b.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.solve(&z).into_iter().map(|v| v.re).collect()
    }

    /// `A^{-1}`, computed column by column through the factor and symmetrized.
    pub fn inverse(&self) -> SpdForm {
        let n = self.dim;
        let mut inv = vec![0.0; n * n];
        for j in 0..n {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            let col = self.solve_real(&e);
            for i in 0..n {
                inv[i * n + j] = col[i];
            }
        }
        SpdForm::symmetrized(n, inv).expect("inverse of an SPD form is SPD")
    }

    pub fn add(&self, other: &SpdForm) -> Result<SpdForm> {
        check_dim(self.dim, other.dim)?;
        let e = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        SpdForm::new(self.dim, e)
    }

    pub fn scale(&self, s: f64) -> Result<SpdForm> {
        SpdForm::new(self.dim, self.entries.iter().map(|a| a * s).collect())
    }

    /// `T^t A T`, symmetrized.
    pub fn congruence(&self, t: &LinearMap) -> Result<SpdForm> {
        check_dim(self.dim, t.dim())?;
        let n = self.dim;
        let at = matmul(n, &self.entries, t.entries());
        let tt = transpose(n, t.entries());
        SpdForm::symmetrized(n, matmul(n, &tt, &at))
    }

    /// Lower bound on the smallest eigenvalue: `1 / ||L^{-1}||_F^2`.
    pub fn min_eigen_lower_bound(&self) -> f64 {
        let n = self.dim;
        let l = &self.factor;
        let mut frob = 0.0;
        for j in 0..n {
            // column j of L^{-1} by forward substitution
            let mut y = vec![0.0; n];
            y[j] = 1.0;
            for i in 0..n {
                for k in 0..i {
                    y[i] -= l[i * n + k] * y[k];
                }
                y[i] /= l[i * n + i];
            }
            frob += y.iter().map(|v| v * v).sum::<f64>();
        }
        1.0 / frob
    }

    /// Equality within the merge tolerance.
    pub fn approx_eq(&self, other: &SpdForm, tol: f64) -> bool {
        self.dim == other.dim
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(&a, &b)| approx_eq(a, b, tol))
    }
}

impl PartialEq for SpdForm {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.entries == other.entries
    }
}

pub(crate) fn matmul(n: usize, a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut c = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            for j in 0..n {
                c[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    c
}

pub(crate) fn transpose(n: usize, a: &[f64]) -> Vec<f64> {
    let mut t = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            t[j * n + i] = a[i * n + j];
        }
    }
    t
}

/// LU factorization with partial pivoting of a square real matrix.
#[derive(Debug, Clone)]
pub struct Lu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
    sign: f64,
}

impl Lu {
    pub fn new(n: usize, a: &[f64]) -> Self {
        let mut lu = a.to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| lu[i * n + k].abs().total_cmp(&lu[j * n + k].abs()))
                .unwrap_or(k);
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let pivot = lu[k * n + k];
            if pivot == 0.0 {
                continue;
            }
            for i in k + 1..n {
                let f = lu[i * n + k] / pivot;
                lu[i * n + k] = f;
                for j in k + 1..n {
                    lu[i * n + j] -= f * lu[k * n + j];
                }
            }
        }
        Lu { n, lu, perm, sign }
    }

    pub fn det(&self) -> f64 {
        self.sign
            * (0..self.n)
                .map(|i| self.lu[i * self.n + i])
                .product::<f64>()
    }

    /// Ratio of smallest to largest pivot magnitude; zero when singular.
    pub fn pivot_ratio(&self) -> f64 {
        let piv: Vec<f64> = (0..self.n).map(|i| self.lu[i * self.n + i].abs()).collect();
        let max = piv.iter().copied().fold(0.0, f64::max);
        let min = piv.iter().copied().fold(f64::INFINITY, f64::min);
        if max == 0.0 {
            0.0
        } else {
            min / max
        }
    }

    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for k in 0..i {
                let t = x[k] * self.lu[i * n + k];
                x[i] -= t;
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let t = x[k] * self.lu[i * n + k];
                x[i] -= t;
            }
            x[i] /= self.lu[i * n + i];
        }
        x
    }
}

/// An invertible linear map `T` on `R^n` with cached transpose and inverse.
#[derive(Debug, Clone)]
pub struct LinearMap {
    dim: usize,
    entries: Vec<f64>,
    det: f64,
    inverse: Vec<f64>,
}

impl LinearMap {
    /// Fails with `SingularMap` when `|det T| < 1e-12 * max|T_ij|^n`.
    pub fn new(dim: usize, entries: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Invalid("dimension must be positive".into()));
        }
        check_dim(dim * dim, entries.len())?;
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::Invalid("non-finite matrix entry".into()));
        }
        let lu = Lu::new(dim, &entries);
        let det = lu.det();
        let scale = entries.iter().map(|v| v.abs()).fold(0.0, f64::max);
        if scale == 0.0 || det.abs() < SINGULAR_TOL * scale.powi(dim as i32) {
            return Err(Error::SingularMap { det });
        }
        let mut inverse = vec![0.0; dim * dim];
        for j in 0..dim {
            let mut e = vec![Complex64::new(0.0, 0.0); dim];
            e[j] = Complex64::new(1.0, 0.0);
            for (i, v) in lu.solve(&e).into_iter().enumerate() {
                inverse[i * dim + j] = v.re;
            }
        }
        Ok(LinearMap {
            dim,
            entries,
            det,
            inverse,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        for r in rows {
            check_dim(dim, r.len())?;
        }
        LinearMap::new(dim, rows.concat())
    }

    pub fn identity(dim: usize) -> Self {
        LinearMap::scalar(dim, 1.0)
    }

    /// `s * I`.
    pub fn scalar(dim: usize, s: f64) -> Self {
        let mut e = vec![0.0; dim * dim];
        for i in 0..dim {
            e[i * dim + i] = s;
        }
        LinearMap::new(dim, e).expect("nonzero scalar map is invertible")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.dim).map(<[f64]>::to_vec).collect()
    }

    pub fn det(&self) -> f64 {
        self.det
    }

    pub fn transpose(&self) -> LinearMap {
        let n = self.dim;
        LinearMap {
            dim: n,
            entries: transpose(n, &self.entries),
            det: self.det,
            inverse: transpose(n, &self.inverse),
        }
    }

    pub fn inverse(&self) -> LinearMap {
        LinearMap {
            dim: self.dim,
            entries: self.inverse.clone(),
            det: 1.0 / self.det,
            inverse: self.entries.clone(),
        }
    }

    /// `(T^t)^{-1}`, equal to `(T^{-1})^t`.
    pub fn inverse_transpose(&self) -> LinearMap {
        self.inverse().transpose()
    }

    /// The product `self ∘ other`.
    pub fn compose(&self, other: &LinearMap) -> Result<LinearMap> {
        check_dim(self.dim, other.dim)?;
        LinearMap::new(self.dim, matmul(self.dim, &self.entries, &other.entries))
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim;
        (0..n)
            .map(|i| (0..n).map(|j| v[j] * self.entries[i * n + j]).sum())
            .collect()
    }

    pub fn apply_real(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim;
        (0..n)
            .map(|i| (0..n).map(|j| v[j] * self.entries[i * n + j]).sum())
            .collect()
    }
}
