//! Nodes clustered towards `x = 0` and three-point difference stencils on
//! nonuniform grids.

use crate::error::{invalid, Result};

/// `x_i = X (e^{beta ξ_i} - 1) / (e^beta - 1)` with `ξ_i = i / (n - 1)`;
/// `beta = 0` gives uniform spacing.
pub fn stretched_grid(x_max: f64, n: usize, beta: f64) -> Result<Vec<f64>> {
    if n < 3 {
        return Err(invalid("N", format!("need at least 3 nodes, got {n}")));
    }
    if !(x_max.is_finite() && x_max > 0.0) {
        return Err(invalid("X", format!("must be finite and > 0, got {x_max}")));
    }
    let last = (n - 1) as f64;
    let mut x: Vec<f64> = (0..n)
        .map(|i| {
            let xi = i as f64 / last;
            if beta == 0.0 {
                x_max * xi
            } else {
                x_max * (beta * xi).exp_m1() / beta.exp_m1()
            }
        })
        .collect();
    x[n - 1] = x_max;
    Ok(x)
}

/// Weights `(w_prev, w_mid, w_next)` of the second derivative at an
/// interior node with left spacing `h1` and right spacing `h2`.
pub fn second_derivative_weights(h1: f64, h2: f64) -> [f64; 3] {
    let s = h1 + h2;
    [2.0 / (h1 * s), -2.0 / (h1 * h2), 2.0 / (h2 * s)]
}

/// Weights of the first derivative at an interior node.
pub fn central_first_weights(h1: f64, h2: f64) -> [f64; 3] {
    let s = h1 + h2;
    [-h2 / (h1 * s), (h2 - h1) / (h1 * h2), h1 / (h2 * s)]
}

/// Weights on `(f_0, f_1, f_2)` of the second-order forward first
/// derivative at node 0, with `h1 = x_1 - x_0`, `h2 = x_2 - x_1`.
pub fn forward_first_weights(h1: f64, h2: f64) -> [f64; 3] {
    let s = h1 + h2;
    [-(2.0 * h1 + h2) / (h1 * s), s / (h1 * h2), -h1 / (h2 * s)]
}

/// Weights on `(f_n, f_{n-1}, f_{n-2})` of the second-order backward first
/// derivative at the last node, with `h1 = x_n - x_{n-1}`, `h2 = x_{n-1} - x_{n-2}`.
pub fn backward_first_weights(h1: f64, h2: f64) -> [f64; 3] {
    let [a, b, c] = forward_first_weights(h1, h2);
    [-a, -b, -c]
}

/// Nodal first and second derivatives of sampled values: central stencils
/// inside, one-sided first derivatives at the ends, and second derivatives
/// at the ends extrapolated quadratically from the three nearest interior
/// nodes.
pub fn derivatives(x: &[f64], f: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = x.len();
    let mut d1 = vec![0.0; n];
    let mut d2 = vec![0.0; n];
    for i in 1..n - 1 {
        let (h1, h2) = (x[i] - x[i - 1], x[i + 1] - x[i]);
        let w1 = central_first_weights(h1, h2);
        let w2 = second_derivative_weights(h1, h2);
        d1[i] = w1[0] * f[i - 1] + w1[1] * f[i] + w1[2] * f[i + 1];
        d2[i] = w2[0] * f[i - 1] + w2[1] * f[i] + w2[2] * f[i + 1];
    }
    let w = forward_first_weights(x[1] - x[0], x[2] - x[1]);
    d1[0] = w[0] * f[0] + w[1] * f[1] + w[2] * f[2];
    let w = backward_first_weights(x[n - 1] - x[n - 2], x[n - 2] - x[n - 3]);
    d1[n - 1] = w[0] * f[n - 1] + w[1] * f[n - 2] + w[2] * f[n - 3];
    if n >= 5 {
        d2[0] = extrapolate(x[0], [x[1], x[2], x[3]], [d2[1], d2[2], d2[3]]);
        d2[n - 1] = extrapolate(
            x[n - 1],
            [x[n - 2], x[n - 3], x[n - 4]],
            [d2[n - 2], d2[n - 3], d2[n - 4]],
        );
    } else {
        d2[0] = d2[1];
        d2[n - 1] = d2[n - 2];
    }
    (d1, d2)
}

/// Quadratic Lagrange extrapolation to `t`.
fn extrapolate(t: f64, xs: [f64; 3], ys: [f64; 3]) -> f64 {
    let mut value = 0.0;
    for i in 0..3 {
        let mut basis = 1.0;
        for j in 0..3 {
            if i != j {
                basis *= (t - xs[j]) / (xs[i] - xs[j]);
            }
        }
        value += basis * ys[i];
    }
    value
}
