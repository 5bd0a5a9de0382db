use std::f64::consts::PI;

use num_complex::Complex64;

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedConstant {
    Pi,
    I,
}

impl NamedConstant {
    pub fn value(self) -> Complex64 {
        match self {
            NamedConstant::Pi => Complex64::new(PI, 0.0),
            NamedConstant::I => Complex64::new(0.0, 1.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Sum(Vec<(Sign, Expr)>),
    Product(Vec<Expr>),
    /// A real (`2.5`) or imaginary (`2.5i`) literal.
    Scalar(Complex64),
    Constant(NamedConstant),
    /// `x<var>^<power>`, with `var` 1-based.
    Monomial {
        var: usize,
        power: u32,
    },
    Exp(Vec<ExpItem>),
}

/// One summand of an `exp(...)` argument: `sign * factors * form`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpItem {
    pub sign: Sign,
    pub factors: Vec<ExpFactor>,
    pub form: ExpForm,
    pub span: Span,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExpFactor {
    Number(f64),
    Pi,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExpForm {
    /// `M[x,x]`, the quadratic form `x·M x`.
    Quadratic(Vec<Vec<f64>>),
    /// `v.x`, the bilinear product `v·x`.
    Linear(Vec<Complex64>),
}

impl ExpItem {
    /// Signed product of the numeric factors, and the power of π among them.
    pub fn coefficient(&self) -> (f64, i32) {
        let mut c = self.sign.value();
        let mut pi_power = 0;
        for f in &self.factors {
            match f {
                ExpFactor::Number(v) => c *= v,
                ExpFactor::Pi => pi_power += 1,
            }
        }
        (c, pi_power)
    }

    fn value(&self, x: &[Complex64]) -> Complex64 {
        let (c, k) = self.coefficient();
        let c = c * PI.powi(k);
        match &self.form {
            ExpForm::Quadratic(m) => {
                let mut s = Complex64::new(0.0, 0.0);
                for (i, row) in m.iter().enumerate() {
                    for (j, &a) in row.iter().enumerate() {
                        s += x[i] * x[j] * a;
                    }
                }
                s * c
            }
            ExpForm::Linear(v) => v.iter().zip(x).map(|(a, b)| a * b).sum::<Complex64>() * c,
        }
    }
}

impl Expr {
    /// Evaluates the expression tree directly at `x`.
    ///
    /// Panics if a monomial or literal refers past the end of `x`.
    pub fn interpret(&self, x: &[Complex64]) -> Complex64 {
        match &self.kind {
            ExprKind::Sum(items) => items.iter().map(|(s, e)| e.interpret(x) * s.value()).sum(),
            ExprKind::Product(items) => items.iter().map(|e| e.interpret(x)).product(),
            ExprKind::Scalar(c) => *c,
            ExprKind::Constant(k) => k.value(),
            ExprKind::Monomial { var, power } => x[var - 1].powu(*power),
            ExprKind::Exp(items) => items.iter().map(|it| it.value(x)).sum::<Complex64>().exp(),
        }
    }
}
