//! Small quadrature helpers: composite Gauss–Legendre panels with automatic
//! refinement, and closed-form logarithmic tail integrals.

/// 16-point Gauss–Legendre nodes/weights on [-1, 1] (positive half; mirror for the rest).
const GL16_X: [f64; 8] = [
    0.0950125098376374,
    0.2816035507792589,
    0.4580167776572274,
    0.6178762444026438,
    0.7554044083550030,
    0.8656312023878318,
    0.9445750230732326,
    0.9894009349916499,
];
const GL16_W: [f64; 8] = [
    0.1894506104550685,
    0.1826034150449236,
    0.1691565193950025,
    0.1495959888165767,
    0.1246289712555339,
    0.0951585116824928,
    0.0622535239386479,
    0.0271524594117541,
];

/// 16-point Gauss–Legendre on [a, b].
pub fn gauss16<F: Fn(f64) -> f64>(a: f64, b: f64, f: &F) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut s = 0.0;
    for i in 0..8 {
        s += GL16_W[i] * (f(c + h * GL16_X[i]) + f(c - h * GL16_X[i]));
    }
    s * h
}

/// Composite Gauss–Legendre over the given panel edges, each panel bisected
/// until its value is converged to ~1e-13 relative.
pub fn gauss_panels<F: Fn(f64) -> f64>(edges: &[f64], f: F) -> f64 {
    let mut total = 0.0;
    for w in edges.windows(2) {
        total += adaptive_panel(w[0], w[1], &f, 0);
    }
    total
}

fn adaptive_panel<F: Fn(f64) -> f64>(a: f64, b: f64, f: &F, depth: usize) -> f64 {
    let whole = gauss16(a, b, f);
    let m = 0.5 * (a + b);
    let halves = gauss16(a, m, f) + gauss16(m, b, f);
    if (whole - halves).abs() <= 1e-13 * (1.0 + halves.abs()) || depth >= 24 {
        halves
    } else {
        adaptive_panel(a, m, f, depth + 1) + adaptive_panel(m, b, f, depth + 1)
    }
}

/// `∫_R^∞ (log r)^n / r³ dr = (1/2R²) Σ_{j=0}^n n!/(j! 2^{n-j}) (log R)^j`.
pub fn log_power_tail(n: usize, big_r: f64) -> f64 {
    let lr = big_r.ln();
    let mut s = 0.0;
    let nfac: f64 = (1..=n).map(|i| i as f64).product::<f64>().max(1.0);
    let mut jfac = 1.0;
    for j in 0..=n {
        if j > 0 {
            jfac *= j as f64;
        }
        s += nfac / jfac / 2f64.powi((n - j) as i32) * lr.powi(j as i32);
    }
    s / (2.0 * big_r * big_r)
}

/// `∫_R^∞ 8 P(log r)/r³ dr` for a polynomial with the given coefficients
/// (ascending powers). This is the leading tail of `r Z₀ e^U f(·)` integrands.
pub fn poly_log_tail(coeffs: &[f64], big_r: f64) -> f64 {
    8.0 * coeffs
        .iter()
        .enumerate()
        .map(|(n, c)| c * log_power_tail(n, big_r))
        .sum::<f64>()
}

/// Multiply two small polynomials (ascending coefficients).
pub fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// a - b, padding with zeros.
pub fn poly_sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().max(b.len());
    let mut out = vec![0.0; n];
    for (i, o) in out.iter_mut().enumerate() {
        *o = a.get(i).copied().unwrap_or(0.0) - b.get(i).copied().unwrap_or(0.0);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gauss_exact_on_polynomials() {
        let v = gauss16(0.0, 2.0, &|x: f64| x.powi(7) - 3.0 * x * x + 1.0);
        assert_abs_diff_eq!(v, 256.0 / 8.0 - 8.0 + 2.0, epsilon = 1e-12);
    }

    #[test]
    fn tail_formula_matches_quadrature() {
        for n in 0..5 {
            let direct = gauss_panels(&[10.0, 100.0, 1e4, 1e8], |r: f64| r.ln().powi(n) / r.powi(3));
            // remainder beyond 1e8 is ~(ln 1e8)^n/1e16, add it from the formula itself
            let rest = log_power_tail(n as usize, 1e8);
            assert_abs_diff_eq!(
                direct + rest,
                log_power_tail(n as usize, 10.0),
                epsilon = 1e-12
            );
        }
    }
}
