//! Gauss–Legendre nodes and weights, and composite rules on an interval.

use std::f64::consts::PI;

/// Nodes per panel in composite rules.
pub const PANEL_ORDER: usize = 20;

/// Nodes and weights of the `order`-point rule on `[-1, 1]`, by Newton
/// iteration on `P_order` from Chebyshev-like initial guesses.
pub fn nodes_weights(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order > 0, "rule order must be positive");
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let m = order.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (order as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(order, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(order, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Composite rule on `[lo, hi]` with `points` nodes split into equal panels of
/// [`PANEL_ORDER`] nodes (a single panel when `points < PANEL_ORDER`).
pub fn composite(lo: f64, hi: f64, points: usize) -> (Vec<f64>, Vec<f64>) {
    let (panels, order) = if points < PANEL_ORDER {
        (1, points.max(1))
    } else {
        (points / PANEL_ORDER, PANEL_ORDER)
    };
    let (x, w) = nodes_weights(order);
    let width = (hi - lo) / panels as f64;
    let mut nodes = Vec::with_capacity(panels * order);
    let mut weights = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let a = lo + p as f64 * width;
        let mid = a + 0.5 * width;
        for (xi, wi) in x.iter().zip(&w) {
            nodes.push(mid + 0.5 * width * xi);
            weights.push(0.5 * width * wi);
        }
    }
    (nodes, weights)
}
