//! Random expressions in the textual language.

use rand::seq::SliceRandom;
use rand::Rng;

fn decimal(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo..hi) * 100.0).round() / 100.0
}

fn scalar(rng: &mut impl Rng) -> String {
    let re = decimal(rng, -3.0, 3.0);
    let im = decimal(rng, -3.0, 3.0);
    match rng.gen_range(0..4) {
        0 if re < 0.0 => format!("({re})"),
        0 => format!("{re}"),
        1 if im < 0.0 => format!("({im}i)"),
        1 => format!("{im}i"),
        2 => format!("({re}{}{}i)", if im < 0.0 { "-" } else { "+" }, im.abs()),
        _ => ["pi", "i", "2*pi"].choose(rng).unwrap().to_string(),
    }
}

#[allow(clippy::needless_range_loop)]
fn matrix(rng: &mut impl Rng, dim: usize) -> String {
    // diagonally dominant, hence positive-definite
    let mut m = vec![vec![0.0; dim]; dim];
    for i in 0..dim {
        m[i][i] = decimal(rng, 1.0, 3.0);
        for j in 0..i {
            let v = decimal(rng, -0.4, 0.4);
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    let rows: Vec<String> = m
        .iter()
        .map(|r| {
            format!(
                "[{}]",
                r.iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            )
        })
        .collect();
    format!("[{}]", rows.join(","))
}

fn vector(rng: &mut impl Rng, dim: usize) -> String {
    let entries: Vec<String> = (0..dim)
        .map(|_| {
            let re = decimal(rng, -1.0, 1.0);
            let im = decimal(rng, -1.0, 1.0);
            match rng.gen_range(0..3) {
                0 => format!("{re}"),
                1 => format!("{im}i"),
                _ => format!("{re}{}{}i", if im < 0.0 { "-" } else { "+" }, im.abs()),
            }
        })
        .collect();
    format!("[{}]", entries.join(","))
}

fn exponential(rng: &mut impl Rng, dim: usize) -> String {
    let lead = ["-pi*", "-1*pi*", "-0.5*pi*", "-2*pi*"]
        .choose(rng)
        .unwrap();
    let mut arg = format!("{lead}{}[x,x]", matrix(rng, dim));
    if rng.gen_bool(0.6) {
        let sign = if rng.gen_bool(0.5) { "+" } else { "-" };
        let k = ["", "pi*", "2*pi*", "0.5*"].choose(rng).unwrap();
        arg.push_str(&format!(" {sign} {k}{}.x", vector(rng, dim)));
    }
    format!("exp({arg})")
}

fn monomials(rng: &mut impl Rng, dim: usize) -> Vec<String> {
    (0..rng.gen_range(0..3))
        .map(|_| {
            let v = rng.gen_range(1..=dim);
            match rng.gen_range(0..3) {
                0 => format!("x{v}"),
                _ => format!("x{v}^{}", rng.gen_range(0..4)),
            }
        })
        .collect()
}

fn term(rng: &mut impl Rng, dim: usize, depth: u32) -> String {
    let mut factors = vec![scalar(rng)];
    factors.extend(monomials(rng, dim));
    if depth > 0 && rng.gen_bool(0.3) {
        // a parenthesized polynomial factor
        let inner: Vec<String> = (0..rng.gen_range(1..3))
            .map(|_| {
                let mut f = vec![scalar(rng)];
                f.extend(monomials(rng, dim));
                f.join("*")
            })
            .collect();
        factors.push(format!("({})", inner.join(" + ")));
    }
    factors.push(exponential(rng, dim));
    if rng.gen_bool(0.2) {
        factors.push(format!("exp({}.x)", vector(rng, dim)));
    }
    factors.shuffle(rng);
    factors.join("*")
}

/// A well-formed expression on `R^dim` that lowers successfully.
pub fn expression(rng: &mut impl Rng, dim: usize) -> String {
    let mut s = String::new();
    for k in 0..rng.gen_range(1..=3) {
        if k > 0 {
            s.push_str(if rng.gen_bool(0.7) { " + " } else { " - " });
        }
        s.push_str(&term(rng, dim, 1));
    }
    s
}

/// Randomly deletes, duplicates or replaces a few characters.
pub fn mutate(rng: &mut impl Rng, text: &str) -> String {
    const NOISE: &[char] = &[
        '(', ')', '[', ']', ',', '+', '-', '*', '^', '.', 'x', 'i', '9', ' ', 'e', 'p',
    ];
    let mut chars: Vec<char> = text.chars().collect();
    for _ in 0..rng.gen_range(1..4) {
        if chars.is_empty() {
            break;
        }
        let k = rng.gen_range(0..chars.len());
        match rng.gen_range(0..3) {
            0 => {
                chars.remove(k);
            }
            1 => chars.insert(k, chars[k]),
            _ => chars[k] = *NOISE.choose(rng).unwrap(),
        }
    }
    chars.into_iter().collect()
}
