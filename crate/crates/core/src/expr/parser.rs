//! Tokenizer and recursive-descent parser for the expression language.
//!
//! ```text
//! expr     := [sign] term { sign term }
//! term     := factor { "*" factor }
//! factor   := number | number"i" | "i" | "pi" | monomial
//!           | "exp" "(" exparg ")" | "(" expr ")"
//! monomial := "x"<index> [ "^" integer ]
//! exparg   := [sign] item { sign item }
//! item     := { (number | "pi") "*" } ( matrix "[x,x]" | vector ".x" )
//! ```

use num_complex::Complex64;

use super::ast::{ExpFactor, ExpForm, ExpItem, Expr, ExprKind, NamedConstant, Sign, Span};
use super::ExprError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Number(f64),
    Imag(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Dot,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Number(v) => format!("number {v}"),
            Tok::Imag(v) => format!("imaginary {v}i"),
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBracket => "'['".into(),
            Tok::RBracket => "']'".into(),
            Tok::Comma => "','".into(),
            Tok::Dot => "'.'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    span: Span,
}

fn parse_error(span: Span, expected: &[&str], found: String) -> ExprError {
    ExprError::Parse {
        line: span.line,
        column: span.column,
        expected: expected.iter().map(|s| s.to_string()).collect(),
        found,
    }
}

fn tokenize(text: &str) -> Result<Vec<Token>, ExprError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let mut line = 1;
    let mut col = 1;
    while i < chars.len() {
        let c = chars[i];
        let span = Span { line, column: col };
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ',' => Some(Tok::Comma),
            '.' if !chars.get(i + 1).is_some_and(char::is_ascii_digit) => Some(Tok::Dot),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token { tok, span });
            i += 1;
            col += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() || c == '.' {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len()
                && chars[i] == '.'
                && chars.get(i + 1).is_some_and(char::is_ascii_digit)
            {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let literal: String = chars[start..i].iter().collect();
            let value: f64 = literal
                .parse()
                .map_err(|_| parse_error(span, &["number"], format!("'{literal}'")))?;
            let imaginary = i < chars.len()
                && chars[i] == 'i'
                && !chars.get(i + 1).is_some_and(|c| c.is_ascii_alphanumeric());
            if imaginary {
                i += 1;
                out.push(Token {
                    tok: Tok::Imag(value),
                    span,
                });
            } else {
                out.push(Token {
                    tok: Tok::Number(value),
                    span,
                });
            }
            col += i - start;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let ident: String = chars[start..i].iter().collect();
            out.push(Token {
                tok: Tok::Ident(ident),
                span,
            });
            col += i - start;
            continue;
        }
        return Err(parse_error(span, &["token"], format!("character '{c}'")));
    }
    out.push(Token {
        tok: Tok::Eof,
        span: Span { line, column: col },
    });
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T, ExprError> {
        let t = self.peek();
        Err(parse_error(t.span, expected, t.tok.describe()))
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Span, ExprError> {
        if self.peek().tok == tok {
            Ok(self.bump().span)
        } else {
            self.fail(&[what])
        }
    }

    fn expect_ident(&mut self, name: &str) -> Result<(), ExprError> {
        match &self.peek().tok {
            Tok::Ident(s) if s == name => {
                self.bump();
                Ok(())
            }
            _ => self.fail(&[&format!("'{name}'")]),
        }
    }

    fn sign(&mut self) -> Option<Sign> {
        match self.peek().tok {
            Tok::Plus => {
                self.bump();
                Some(Sign::Plus)
            }
            Tok::Minus => {
                self.bump();
                Some(Sign::Minus)
            }
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let span = self.peek().span;
        let lead = self.sign();
        let first = self.term()?;
        let mut items = vec![(lead.unwrap_or(Sign::Plus), first)];
        while let Some(s) = self.sign() {
            items.push((s, self.term()?));
        }
        if items.len() == 1 && lead.is_none() {
            return Ok(items.pop().expect("one item").1);
        }
        Ok(Expr {
            kind: ExprKind::Sum(items),
            span,
        })
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let span = self.peek().span;
        let mut factors = vec![self.factor()?];
        while self.peek().tok == Tok::Star {
            self.bump();
            factors.push(self.factor()?);
        }
        if factors.len() == 1 {
            return Ok(factors.pop().expect("one factor"));
        }
        Ok(Expr {
            kind: ExprKind::Product(factors),
            span,
        })
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        const EXPECTED: &[&str] = &["number", "'i'", "'pi'", "monomial", "'exp'", "'('"];
        let span = self.peek().span;
        let kind = match self.peek().tok.clone() {
            Tok::Number(v) => {
                self.bump();
                ExprKind::Scalar(Complex64::new(v, 0.0))
            }
            Tok::Imag(v) => {
                self.bump();
                ExprKind::Scalar(Complex64::new(0.0, v))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                return Ok(inner);
            }
            Tok::Ident(name) => match name.as_str() {
                "pi" => {
                    self.bump();
                    ExprKind::Constant(NamedConstant::Pi)
                }
                "i" => {
                    self.bump();
                    ExprKind::Constant(NamedConstant::I)
                }
                "exp" => {
                    self.bump();
                    self.expect(Tok::LParen, "'('")?;
                    let items = self.exparg()?;
                    self.expect(Tok::RParen, "')'")?;
                    ExprKind::Exp(items)
                }
                _ => {
                    let var = monomial_index(&name)
                        .ok_or_else(|| parse_error(span, EXPECTED, format!("'{name}'")))?;
                    self.bump();
                    let mut power = 1;
                    if self.peek().tok == Tok::Caret {
                        self.bump();
                        power = self.integer()?;
                    }
                    ExprKind::Monomial { var, power }
                }
            },
            _ => return self.fail(EXPECTED),
        };
        Ok(Expr { kind, span })
    }

    fn integer(&mut self) -> Result<u32, ExprError> {
        match self.peek().tok {
            Tok::Number(v) if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 => {
                self.bump();
                Ok(v as u32)
            }
            _ => self.fail(&["nonnegative integer"]),
        }
    }

    fn exparg(&mut self) -> Result<Vec<ExpItem>, ExprError> {
        let lead = self.sign().unwrap_or(Sign::Plus);
        let mut items = vec![self.exp_item(lead)?];
        while let Some(s) = self.sign() {
            items.push(self.exp_item(s)?);
        }
        Ok(items)
    }

    fn exp_item(&mut self, sign: Sign) -> Result<ExpItem, ExprError> {
        let span = self.peek().span;
        let mut factors = Vec::new();
        loop {
            match self.peek().tok.clone() {
                Tok::Number(v) => {
                    self.bump();
                    factors.push(ExpFactor::Number(v));
                }
                Tok::Ident(s) if s == "pi" => {
                    self.bump();
                    factors.push(ExpFactor::Pi);
                }
                Tok::LBracket => break,
                _ => return self.fail(&["number", "'pi'", "'['"]),
            }
            self.expect(Tok::Star, "'*'")?;
        }
        let form = self.exp_form()?;
        Ok(ExpItem {
            sign,
            factors,
            form,
            span,
        })
    }

    fn exp_form(&mut self) -> Result<ExpForm, ExprError> {
        let open = self.expect(Tok::LBracket, "'['")?;
        if self.peek().tok == Tok::LBracket {
            let mut rows = vec![self.real_row()?];
            while self.peek().tok == Tok::Comma {
                self.bump();
                rows.push(self.real_row()?);
            }
            self.expect(Tok::RBracket, "']'")?;
            if rows.iter().any(|r| r.len() != rows.len()) {
                return Err(parse_error(
                    open,
                    &["square matrix"],
                    "ragged matrix".into(),
                ));
            }
            self.expect(Tok::LBracket, "'[x,x]'")?;
            self.expect_ident("x")?;
            self.expect(Tok::Comma, "','")?;
            self.expect_ident("x")?;
            self.expect(Tok::RBracket, "']'")?;
            Ok(ExpForm::Quadratic(rows))
        } else {
            let mut entries = vec![self.complex_entry()?];
            while self.peek().tok == Tok::Comma {
                self.bump();
                entries.push(self.complex_entry()?);
            }
            self.expect(Tok::RBracket, "']'")?;
            self.expect(Tok::Dot, "'.x'")?;
            self.expect_ident("x")?;
            Ok(ExpForm::Linear(entries))
        }
    }

    fn real_row(&mut self) -> Result<Vec<f64>, ExprError> {
        self.expect(Tok::LBracket, "'['")?;
        let mut row = vec![self.real()?];
        while self.peek().tok == Tok::Comma {
            self.bump();
            row.push(self.real()?);
        }
        self.expect(Tok::RBracket, "']'")?;
        Ok(row)
    }

    fn real(&mut self) -> Result<f64, ExprError> {
        let s = self.sign().unwrap_or(Sign::Plus).value();
        match self.peek().tok {
            Tok::Number(v) => {
                self.bump();
                Ok(s * v)
            }
            _ => self.fail(&["number"]),
        }
    }

    fn complex_entry(&mut self) -> Result<Complex64, ExprError> {
        let mut sign = self.sign().unwrap_or(Sign::Plus).value();
        let mut value = Complex64::new(0.0, 0.0);
        loop {
            let part = match self.peek().tok.clone() {
                Tok::Number(v) => Complex64::new(v, 0.0),
                Tok::Imag(v) => Complex64::new(0.0, v),
                Tok::Ident(s) if s == "i" => Complex64::new(0.0, 1.0),
                _ => return self.fail(&["number", "imaginary number"]),
            };
            self.bump();
            value += part * sign;
            match self.sign() {
                Some(s) => sign = s.value(),
                None => return Ok(value),
            }
        }
    }
}

fn monomial_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('x')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    match digits.parse::<usize>() {
        Ok(k) if k >= 1 => Some(k),
        _ => None,
    }
}

/// Parses an expression into an AST with source spans.
pub fn parse(text: &str) -> Result<Expr, ExprError> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, pos: 0 };
    let e = p.expr()?;
    if p.peek().tok != Tok::Eof {
        return p.fail(&["'+'", "'-'", "'*'", "end of input"]);
    }
    Ok(e)
}
