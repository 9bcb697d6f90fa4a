//! Quadrature on non-uniform grids.

/// Cumulative trapezoid: `out[i] = ∫_{x₀}^{xᵢ} f`.
pub fn cumulative_trapezoid(x: &[f64], f: &[f64]) -> Vec<f64> {
    assert_eq!(x.len(), f.len());
    let mut out = Vec::with_capacity(x.len());
    let mut acc = 0.0;
    for i in 0..x.len() {
        if i > 0 {
            acc += 0.5 * (x[i] - x[i - 1]) * (f[i] + f[i - 1]);
        }
        out.push(acc);
    }
    out
}

/// Cumulative integral where each interval uses the quadratic through it
/// and its nearest neighbour; third order on smooth grids.
pub fn cumulative_quadratic(x: &[f64], f: &[f64]) -> Vec<f64> {
    assert_eq!(x.len(), f.len());
    let n = x.len();
    if n < 3 {
        return cumulative_trapezoid(x, f);
    }
    let mut out = Vec::with_capacity(n);
    let mut acc = 0.0;
    out.push(acc);
    for i in 0..n - 1 {
        let j = if i == 0 { 0 } else { i - 1 };
        acc += quad_integral(x[j], x[j + 1], x[j + 2], f[j], f[j + 1], f[j + 2], x[i], x[i + 1]);
        out.push(acc);
    }
    out
}

/// Composite Simpson on pairs of (possibly unequal) intervals.
pub fn simpson(x: &[f64], f: &[f64]) -> f64 {
    assert_eq!(x.len(), f.len());
    let n = x.len();
    if n < 2 {
        return 0.0;
    }
    if n == 2 {
        return 0.5 * (x[1] - x[0]) * (f[0] + f[1]);
    }
    // An odd interval count puts the single quadratic-fit interval at the
    // start, where the integrands used here are smallest.
    let mut total = 0.0;
    let mut i = 0;
    if (n - 1) % 2 == 1 {
        total += quad_integral(x[0], x[1], x[2], f[0], f[1], f[2], x[0], x[1]);
        i = 1;
    }
    while i + 2 < n {
        total += simpson_pair(x[i], x[i + 1], x[i + 2], f[i], f[i + 1], f[i + 2]);
        i += 2;
    }
    total
}

fn simpson_pair(x0: f64, x1: f64, x2: f64, f0: f64, f1: f64, f2: f64) -> f64 {
    let h0 = x1 - x0;
    let h1 = x2 - x1;
    let hs = h0 + h1;
    hs / 6.0 * ((2.0 - h1 / h0) * f0 + hs * hs / (h0 * h1) * f1 + (2.0 - h0 / h1) * f2)
}

/// ∫ over [a, b] of the Lagrange quadratic through three points.
#[allow(clippy::too_many_arguments)]
fn quad_integral(x0: f64, x1: f64, x2: f64, f0: f64, f1: f64, f2: f64, a: f64, b: f64) -> f64 {
    let o = x1;
    let (x0, x1, x2, a, b) = (x0 - o, 0.0, x2 - o, a - o, b - o);
    // antiderivative of each Lagrange basis polynomial
    let basis = |xi: f64, xj: f64, xk: f64, fi: f64| {
        let d = (xi - xj) * (xi - xk);
        let anti = |x: f64| x * x * x / 3.0 - (xj + xk) * x * x / 2.0 + xj * xk * x;
        fi * (anti(b) - anti(a)) / d
    };
    basis(x0, x1, x2, f0) + basis(x1, x0, x2, f1) + basis(x2, x0, x1, f2)
}
