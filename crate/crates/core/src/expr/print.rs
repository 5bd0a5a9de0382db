use num_complex::Complex64;

use crate::nice::{NiceFunction, NiceTerm};

/// Significant digits used for display.
pub const DISPLAY_DIGITS: usize = 6;

/// Formats with [`DISPLAY_DIGITS`] significant digits when that reproduces the
/// value exactly, otherwise with the shortest representation that does, so
/// printing never loses information.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let rounded: f64 = format!("{:.*e}", DISPLAY_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses");
    if rounded == x {
        format!("{rounded}")
    } else {
        format!("{x}")
    }
}

/// `a`, `bi` or `a+bi` without surrounding parentheses.
fn format_complex(c: Complex64) -> String {
    match (c.re == 0.0, c.im == 0.0) {
        (_, true) => format_number(c.re),
        (true, false) => format!("{}i", format_number(c.im)),
        (false, false) => {
            let sign = if c.im < 0.0 { '-' } else { '+' };
            format!(
                "{}{sign}{}i",
                format_number(c.re),
                format_number(c.im.abs())
            )
        }
    }
}

fn format_term(t: &NiceTerm) -> String {
    let monomials: Vec<String> = t
        .poly()
        .terms()
        .map(|(alpha, &c)| {
            let mut s = format!("({})", format_complex(c));
            for (j, &k) in alpha.entries().iter().enumerate() {
                match k {
                    0 => {}
                    1 => s.push_str(&format!("*x{}", j + 1)),
                    _ => s.push_str(&format!("*x{}^{k}", j + 1)),
                }
            }
            s
        })
        .collect();
    let rows: Vec<String> = t
        .quad()
        .rows()
        .iter()
        .map(|r| {
            let entries: Vec<String> = r.iter().map(|&v| format_number(v)).collect();
            format!("[{}]", entries.join(","))
        })
        .collect();
    let mut exparg = format!("-pi*[{}][x,x]", rows.join(","));
    if t.shift().iter().any(|c| *c != Complex64::new(0.0, 0.0)) {
        let entries: Vec<String> = t.shift().iter().map(|&c| format_complex(c)).collect();
        exparg.push_str(&format!(" + [{}].x", entries.join(",")));
    }
    format!("({})*exp({exparg})", monomials.join(" + "))
}

/// Renders a nice function in the expression language.
///
/// The zero function prints as `0*exp(-pi*I[x,x])` so its dimension survives.
pub fn print_function(f: &NiceFunction) -> String {
    if f.is_zero() {
        let n = f.dim();
        let rows: Vec<String> = (0..n)
            .map(|i| {
                let r: Vec<&str> = (0..n).map(|j| if i == j { "1" } else { "0" }).collect();
                format!("[{}]", r.join(","))
            })
            .collect();
        return format!("0*exp(-pi*[{}][x,x])", rows.join(","));
    }
    f.terms()
        .iter()
        .map(format_term)
        .collect::<Vec<_>>()
        .join(" + ")
}
