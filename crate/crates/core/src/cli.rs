//! The `nicefn` command-line front end.
//!
//! Inputs are files (or `-` for stdin) holding either the JSON interchange
//! format or an expression; `--expr` supplies an expression inline. Exit
//! status is 0 on success, 1 when a verification fails and 2 for usage,
//! parse and input errors. Errors are reported on stderr as
//! `error[CODE]: message`.

use std::fs;
use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::function_to_derivative_basis;
use crate::error::Error;
use crate::expr::{self, ExprError, ExprKind};
use crate::json::{self, ComplexJson, FunctionJson};
use crate::linalg::LinearMap;
use crate::multi_index::MultiIndex;
use crate::nice::NiceFunction;
use crate::oracle::{self, QuadratureSpec};
use crate::transform;

#[derive(Debug, Parser)]
#[command(
    name = "nicefn",
    version,
    about = "Closed-form Fourier analysis of polynomial-times-Gaussian functions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Input {
    /// Input file (JSON or expression); `-` reads stdin
    #[arg(default_value = "-")]
    pub input: String,
    /// Inline expression instead of an input file
    #[arg(short, long, conflicts_with = "input")]
    pub expr: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    /// Output file; `-` writes stdout
    #[arg(short, long, default_value = "-")]
    pub output: String,
    /// Output encoding for functions
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Expr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Rule {
    Ft,
    Conv,
    Plancherel,
    Deriv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fourier transform
    Ft {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
        /// Emit {"input": f, "transform": f̂} for later verification
        #[arg(long)]
        pair: bool,
    },
    /// Inverse Fourier transform
    Ift {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// Convolution A ∗ B
    Conv {
        a: String,
        b: String,
        #[command(flatten)]
        output: Output,
    },
    /// Pointwise product A · B
    Mul {
        a: String,
        b: String,
        #[command(flatten)]
        output: Output,
    },
    /// Mixed partial derivative
    Diff {
        /// Multi-index, e.g. `1,0`
        #[arg(long)]
        alpha: String,
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// x -> f(x - a), `a` complex
    Translate {
        /// Vector, e.g. `1+2i,0`
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// Multiply by exp(-2πi x·b)
    Modulate {
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// x -> f(T x)
    Compose {
        /// Matrix literal `[[..],[..]]`, `I`, `-I` or a scalar
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// L² inner product ∫ A conj(B)
    Inner {
        a: String,
        b: String,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// ∫ f
    Integral {
        #[command(flatten)]
        input: Input,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// Rewrite in the derivative basis ∂^β exp(...)
    ToDerivBasis {
        #[command(flatten)]
        input: Input,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// Check a closed form against the numerical oracle
    Verify {
        #[arg(long, value_enum)]
        rule: Rule,
        /// Tolerance (default: 1e-6 for ft/conv/deriv, 1e-9 for plancherel)
        #[arg(long)]
        tol: Option<f64>,
        /// Second function for `conv` and `plancherel`
        #[arg(long)]
        with: Option<String>,
        #[command(flatten)]
        input: Input,
    },
    /// CSV samples on a grid
    Sample {
        /// `lo:hi:steps`
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        /// Vary only this axis (1-based); the others sit at `--at`
        #[arg(long)]
        axis: Option<usize>,
        /// Base point for fixed axes, e.g. `0,0.5`
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
        #[command(flatten)]
        input: Input,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// Canonical pretty-print
    Fmt {
        #[command(flatten)]
        input: Input,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
}

/// A function together with a claimed transform, as written by `ft --pair`.
#[derive(Debug, Serialize, Deserialize)]
pub struct TransformPair {
    pub input: FunctionJson,
    pub transform: FunctionJson,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Expr(ExprError),
    Core(Error),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "E_USAGE",
            CliError::Io(_) => "E_IO",
            CliError::Expr(e) => e.code(),
            CliError::Core(e) => e.code(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => write!(f, "{m}"),
            CliError::Expr(e) => write!(f, "{e}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<ExprError> for CliError {
    fn from(e: ExprError) -> Self {
        CliError::Expr(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Loaded input: a function, plus a claimed transform when the file is a pair.
struct Loaded {
    function: NiceFunction,
    transform: Option<NiceFunction>,
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
}

impl Io<'_> {
    fn read_source(&mut self, path: &str) -> CliResult<String> {
        if path == "-" {
            let mut s = String::new();
            self.stdin
                .read_to_string(&mut s)
                .map_err(|e| CliError::Io(format!("stdin: {e}")))?;
            Ok(s)
        } else {
            fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))
        }
    }

    fn load_path(&mut self, path: &str) -> CliResult<Loaded> {
        let text = self.read_source(path)?;
        load_text(&text)
    }

    fn load(&mut self, input: &Input) -> CliResult<Loaded> {
        match &input.expr {
            Some(e) => load_text(e),
            None => self.load_path(&input.input),
        }
    }

    fn write(&mut self, path: &str, text: &str) -> CliResult<()> {
        let mut body = text.to_string();
        if !body.ends_with('\n') {
            body.push('\n');
        }
        if path == "-" {
            self.stdout
                .write_all(body.as_bytes())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))
        } else {
            fs::write(path, body).map_err(|e| CliError::Io(format!("{path}: {e}")))
        }
    }

    fn write_function(&mut self, out: &Output, f: &NiceFunction) -> CliResult<()> {
        let text = match out.format {
            Format::Json => json::function_to_json(f)?,
            Format::Expr => expr::print_function(f),
        };
        self.write(&out.output, &text)
    }
}

fn load_text(text: &str) -> CliResult<Loaded> {
    if text.trim_start().starts_with('{') {
        let value: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| CliError::Core(Error::Invalid(format!("bad JSON: {e}"))))?;
        if value.get("transform").is_some() {
            let pair: TransformPair = serde_json::from_value(value)
                .map_err(|e| CliError::Core(Error::Invalid(format!("bad transform pair: {e}"))))?;
            return Ok(Loaded {
                function: NiceFunction::try_from(pair.input)?,
                transform: Some(NiceFunction::try_from(pair.transform)?),
            });
        }
        let f: FunctionJson = serde_json::from_value(value)
            .map_err(|e| CliError::Core(Error::Invalid(format!("bad JSON: {e}"))))?;
        Ok(Loaded {
            function: NiceFunction::try_from(f)?,
            transform: None,
        })
    } else {
        Ok(Loaded {
            function: expr::parse_function(text)?,
            transform: None,
        })
    }
}

fn constant_value(text: &str) -> CliResult<Complex64> {
    fn is_constant(e: &expr::Expr) -> bool {
        match &e.kind {
            ExprKind::Sum(items) => items.iter().all(|(_, e)| is_constant(e)),
            ExprKind::Product(items) => items.iter().all(is_constant),
            ExprKind::Scalar(_) | ExprKind::Constant(_) => true,
            ExprKind::Monomial { .. } | ExprKind::Exp(_) => false,
        }
    }
    let ast = expr::parse(text)?;
    if !is_constant(&ast) {
        return Err(CliError::Usage(format!("'{text}' is not a constant")));
    }
    Ok(ast.interpret(&[]))
}

fn split_list(text: &str) -> Vec<&str> {
    text.trim()
        .trim_start_matches('[')
        .trim_end_matches(']')
        .split(',')
        .map(str::trim)
        .collect()
}

fn parse_vector(text: &str, dim: usize) -> CliResult<Vec<Complex64>> {
    let v = split_list(text)
        .into_iter()
        .map(constant_value)
        .collect::<CliResult<Vec<_>>>()?;
    if v.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: v.len(),
        }
        .into());
    }
    Ok(v)
}

fn parse_real_vector(text: &str, dim: usize) -> CliResult<Vec<f64>> {
    let v = parse_vector(text, dim)?;
    if v.iter().any(|c| c.im != 0.0) {
        return Err(CliError::Usage(format!("'{text}' must be real")));
    }
    Ok(v.into_iter().map(|c| c.re).collect())
}

fn parse_alpha(text: &str, dim: usize) -> CliResult<MultiIndex> {
    let entries = split_list(text)
        .into_iter()
        .map(|s| {
            s.parse::<u32>()
                .map_err(|_| CliError::Usage(format!("bad multi-index entry '{s}'")))
        })
        .collect::<CliResult<Vec<_>>>()?;
    if entries.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: entries.len(),
        }
        .into());
    }
    Ok(MultiIndex::new(entries))
}

fn parse_matrix(text: &str, dim: usize) -> CliResult<LinearMap> {
    let t = text.trim();
    match t {
        "I" => return Ok(LinearMap::identity(dim)),
        "-I" => return Ok(LinearMap::scalar(dim, -1.0)),
        _ => {}
    }
    if let Ok(s) = t.parse::<f64>() {
        return Ok(LinearMap::new(dim, {
            let mut e = vec![0.0; dim * dim];
            for i in 0..dim {
                e[i * dim + i] = s;
            }
            e
        })?);
    }
    let rows: Vec<Vec<f64>> =
        serde_json::from_str(t).map_err(|e| CliError::Usage(format!("bad matrix '{t}': {e}")))?;
    if rows.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: rows.len(),
        }
        .into());
    }
    Ok(LinearMap::from_rows(&rows)?)
}

fn parse_grid(text: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || CliError::Usage(format!("bad grid '{text}', expected lo:hi:steps"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let steps: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if steps == 0 {
        return Err(bad());
    }
    if steps == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..steps)
        .map(|k| lo + (hi - lo) * k as f64 / (steps - 1) as f64)
        .collect())
}

fn complex_json(c: Complex64) -> CliResult<String> {
    Ok(json::to_json_string(&ComplexJson::from(c))?)
}

/// Deterministic probe points `t (1 + j/4)_j` for `t` in `{-1, -1/2, 0, 1/2, 1}`.
pub fn probe_points(dim: usize) -> Vec<Vec<f64>> {
    [-1.0, -0.5, 0.0, 0.5, 1.0]
        .iter()
        .map(|t| (0..dim).map(|j| t * (1.0 + 0.25 * j as f64)).collect())
        .collect()
}

/// Result line of `verify`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verdict {
    pub pass: bool,
    pub residual: f64,
    pub tol: f64,
}

fn verify(rule: Rule, tol: Option<f64>, f: &Loaded, g: Option<&Loaded>) -> CliResult<Verdict> {
    let f_fn = &f.function;
    let n = f_fn.dim();
    let mut worst: f64 = 0.0;
    let mut pass = true;
    let tol = tol.unwrap_or(match rule {
        Rule::Plancherel => 1e-9,
        _ => 1e-6,
    });
    match rule {
        Rule::Ft => {
            let f_hat = f
                .transform
                .clone()
                .unwrap_or_else(|| transform::fourier_transform(f_fn));
            let spec = QuadratureSpec::default_for(f_fn)?;
            for p in probe_points(n) {
                let xi: Vec<Complex64> = p.iter().map(|&v| Complex64::new(v, 0.0)).collect();
                let numeric = oracle::quad_fourier(f_fn, &xi, &spec)?;
                let c = oracle::compare(f_hat.evaluate(&xi)?, numeric, tol, 0.0);
                pass &= c.pass;
                worst = worst.max(c.residual);
            }
        }
        Rule::Conv => {
            let g_fn = g.map(|l| &l.function).unwrap_or(f_fn);
            let symbolic = transform::convolve(f_fn, g_fn)?;
            for p in probe_points(n) {
                let x: Vec<Complex64> = p.iter().map(|&v| Complex64::new(v, 0.0)).collect();
                let spec = QuadratureSpec::default_for_convolution(f_fn, g_fn, &x)?;
                let numeric = oracle::quad_convolve(f_fn, g_fn, &x, &spec)?;
                let c = oracle::compare(symbolic.evaluate(&x)?, numeric, tol, 0.0);
                pass &= c.pass;
                worst = worst.max(c.residual);
            }
        }
        Rule::Plancherel => {
            let g = g.unwrap_or(f);
            let f_hat = f
                .transform
                .clone()
                .unwrap_or_else(|| transform::fourier_transform(f_fn));
            let g_hat = g
                .transform
                .clone()
                .unwrap_or_else(|| transform::fourier_transform(&g.function));
            let lhs = transform::inner_product(f_fn, &g.function)?.value;
            let rhs = transform::inner_product(&f_hat, &g_hat)?.value;
            worst = (lhs - rhs).norm();
            pass = worst <= tol * (1.0 + lhs.norm());
        }
        Rule::Deriv => {
            for axis in 0..n {
                let d = f_fn.differentiate(&MultiIndex::unit(n, axis))?;
                for p in probe_points(n) {
                    let numeric = oracle::finite_difference(f_fn, axis, &p, 1e-5)?;
                    let c = oracle::compare(d.evaluate_real(&p)?, numeric, tol, tol);
                    pass &= c.pass;
                    worst = worst.max(c.residual);
                }
            }
        }
    }
    Ok(Verdict {
        pass,
        residual: worst,
        tol,
    })
}

fn rule_name(rule: Rule) -> &'static str {
    match rule {
        Rule::Ft => "ft",
        Rule::Conv => "conv",
        Rule::Plancherel => "plancherel",
        Rule::Deriv => "deriv",
    }
}

fn execute(command: Command, io: &mut Io<'_>) -> CliResult<i32> {
    match command {
        Command::Ft {
            input,
            output,
            pair,
        } => {
            let f = io.load(&input)?.function;
            let f_hat = transform::fourier_transform(&f);
            if pair {
                let p = TransformPair {
                    input: FunctionJson::from(&f),
                    transform: FunctionJson::from(&f_hat),
                };
                io.write(&output.output, &json::to_json_string(&p)?)?;
            } else {
                io.write_function(&output, &f_hat)?;
            }
        }
        Command::Ift { input, output } => {
            let f = io.load(&input)?.function;
            io.write_function(&output, &transform::inverse_transform(&f))?;
        }
        Command::Conv { a, b, output } => {
            let fa = io.load_path(&a)?.function;
            let fb = io.load_path(&b)?.function;
            io.write_function(&output, &transform::convolve(&fa, &fb)?)?;
        }
        Command::Mul { a, b, output } => {
            let fa = io.load_path(&a)?.function;
            let fb = io.load_path(&b)?.function;
            io.write_function(&output, &fa.multiply(&fb)?)?;
        }
        Command::Diff {
            alpha,
            input,
            output,
        } => {
            let f = io.load(&input)?.function;
            let alpha = parse_alpha(&alpha, f.dim())?;
            io.write_function(&output, &f.differentiate(&alpha)?)?;
        }
        Command::Translate { a, input, output } => {
            let f = io.load(&input)?.function;
            let a = parse_vector(&a, f.dim())?;
            io.write_function(&output, &f.translate(&a)?)?;
        }
        Command::Modulate { b, input, output } => {
            let f = io.load(&input)?.function;
            let b = parse_vector(&b, f.dim())?;
            io.write_function(&output, &f.modulate(&b)?)?;
        }
        Command::Compose {
            matrix,
            input,
            output,
        } => {
            let f = io.load(&input)?.function;
            let t = parse_matrix(&matrix, f.dim())?;
            io.write_function(&output, &f.compose_linear(&t)?)?;
        }
        Command::Inner { a, b, output } => {
            let fa = io.load_path(&a)?.function;
            let fb = io.load_path(&b)?.function;
            let v = transform::inner_product(&fa, &fb)?.value;
            io.write(&output, &complex_json(v)?)?;
        }
        Command::Integral { input, output } => {
            let f = io.load(&input)?.function;
            io.write(&output, &complex_json(transform::integral(&f))?)?;
        }
        Command::ToDerivBasis { input, output } => {
            let f = io.load(&input)?.function;
            let e = function_to_derivative_basis(&f)?;
            io.write(&output, &json::expansions_to_json(&e)?)?;
        }
        Command::Verify {
            rule,
            tol,
            with,
            input,
        } => {
            if let Some(t) = tol {
                if !(t > 0.0) {
                    return Err(CliError::Usage("--tol must be positive".into()));
                }
            }
            let f = io.load(&input)?;
            let g = match with {
                Some(path) => Some(io.load_path(&path)?),
                None => None,
            };
            if let Some(g) = &g {
                if g.function.dim() != f.function.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: f.function.dim(),
                        found: g.function.dim(),
                    }
                    .into());
                }
            }
            let v = verify(rule, tol, &f, g.as_ref())?;
            let line = format!(
                "rule={} residual={:e} tol={:e} status={}",
                rule_name(rule),
                v.residual,
                v.tol,
                if v.pass { "pass" } else { "fail" }
            );
            io.write("-", &line)?;
            return Ok(if v.pass { 0 } else { 1 });
        }
        Command::Sample {
            grid,
            axis,
            at,
            input,
            output,
        } => {
            let f = io.load(&input)?.function;
            let n = f.dim();
            let values = parse_grid(&grid)?;
            let base = match at {
                Some(s) => parse_real_vector(&s, n)?,
                None => vec![0.0; n],
            };
            let axes: Vec<usize> = match axis {
                Some(k) if k >= 1 && k <= n => vec![k - 1],
                Some(k) => return Err(CliError::Usage(format!("axis {k} out of range 1..={n}"))),
                None => (0..n).collect(),
            };
            let mut csv = String::new();
            let header: Vec<String> = (1..=n).map(|j| format!("x{j}")).collect();
            csv.push_str(&header.join(","));
            csv.push_str(",re,im\n");
            let mut idx = vec![0usize; axes.len()];
            loop {
                let mut p = base.clone();
                for (a, &i) in axes.iter().zip(&idx) {
                    p[*a] = values[i];
                }
                let v = f.evaluate_real(&p)?;
                let coords: Vec<String> = p.iter().map(|x| format!("{x}")).collect();
                csv.push_str(&format!("{},{},{}\n", coords.join(","), v.re, v.im));
                let mut k = axes.len();
                let done = loop {
                    if k == 0 {
                        break true;
                    }
                    k -= 1;
                    idx[k] += 1;
                    if idx[k] < values.len() {
                        break false;
                    }
                    idx[k] = 0;
                };
                if done {
                    break;
                }
            }
            io.write(&output, &csv)?;
        }
        Command::Fmt { input, output } => {
            let f = io.load(&input)?.function;
            io.write(&output, &expr::print_function(&f))?;
        }
    }
    Ok(0)
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(stdout, "{rendered}");
            } else {
                let _ = write!(stderr, "error[E_USAGE]: {rendered}");
            }
            return code;
        }
    };
    let mut io = Io { stdin, stdout };
    match execute(cli.command, &mut io) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error[{}]: {e}", e.code());
            2
        }
    }
}
