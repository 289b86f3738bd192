//! Closed-form Liouville bubbles, kernel elements of the linearized equation,
//! and the nonlinear right-hand sides driving the correction profiles.

/// The radial entire solution of `-ΔU = e^U`, peak value `log 8` at the origin.
pub fn bubble_u(r: f64) -> f64 {
    8f64.ln() - 2.0 * (r * r).ln_1p()
}

/// `e^{U(r)} = 8/(1+r²)²`, evaluated without forming `exp(U)`.
pub fn bubble_eu(r: f64) -> f64 {
    let d = 1.0 + r * r;
    8.0 / (d * d)
}

/// `U'(r) = -4r/(1+r²)`.
pub fn bubble_u_prime(r: f64) -> f64 {
    -4.0 * r / (1.0 + r * r)
}

/// Kernel of `Δ + e^U` on the plane: the radial element.
pub fn z0(r: f64) -> f64 {
    (r * r - 1.0) / (r * r + 1.0)
}

/// Kernel elements at a point, `i ∈ {0,1,2}`. `Z₀` is radial, `Z₁`/`Z₂`
/// are odd in the first/second coordinate.
pub fn kernel_z(i: usize, y: [f64; 2]) -> f64 {
    let d = y[0] * y[0] + y[1] * y[1] + 1.0;
    match i {
        0 => (y[0] * y[0] + y[1] * y[1] - 1.0) / d,
        1 => 4.0 * y[0] / d,
        2 => 4.0 * y[1] / d,
        _ => panic!("kernel index {i} out of range (0..=2)"),
    }
}

/// `dZ₀/dr = 4r/(1+r²)²`.
pub fn z0_prime(r: f64) -> f64 {
    let d = 1.0 + r * r;
    4.0 * r / (d * d)
}

/// First-order right-hand side `f₁(u) = u²/2`.
pub fn rhs_f1(u: f64) -> f64 {
    0.5 * u * u
}

/// Second-order right-hand side `f₂(u,v) = uv - u³/3 - ½(v - u²/2)²`.
///
/// The cubic coefficient is 1/3: it is pinned by the p⁻² term of the
/// expansion `(1 + a/p + b/p² + c/p³)^p = e^a(1 + (b-a²/2)/p +
/// (c - ab + a³/3 + ½(b-a²/2)²)/p² + …)`, which the second-order profile
/// has to cancel.
pub fn rhs_f2(u: f64, v: f64) -> f64 {
    let s = v - 0.5 * u * u;
    u * v - u * u * u / 3.0 - 0.5 * s * s
}

/// Dispatch on profile order.
pub fn rhs_f(order: u8, u: f64, v: f64) -> f64 {
    match order {
        1 => rhs_f1(u),
        2 => rhs_f2(u, v),
        _ => panic!("profile order {order} out of range (1..=2)"),
    }
}

/// Pointwise residual of the Liouville equation `U'' + U'/r + e^U` at `r > 0`.
pub fn liouville_residual(r: f64) -> f64 {
    let d = 1.0 + r * r;
    let upp = -4.0 * (1.0 - r * r) / (d * d);
    upp + bubble_u_prime(r) / r + bubble_eu(r)
}

/// Residual of `ΔZᵢ + e^U Zᵢ` at `y ≠ 0`, using the analytic angular-mode
/// Laplacians (`Z₀` is the m=0 mode, `Z₁`, `Z₂` the m=1 modes).
pub fn kernel_residual(i: usize, y: [f64; 2]) -> f64 {
    let r = (y[0] * y[0] + y[1] * y[1]).sqrt();
    let d = 1.0 + r * r;
    match i {
        0 => {
            // Z₀ = 1 - 2/(1+r²); ΔZ₀ = Z₀'' + Z₀'/r
            let zpp = 4.0 * (1.0 - 3.0 * r * r) / (d * d * d);
            zpp + z0_prime(r) / r + bubble_eu(r) * z0(r)
        }
        1 | 2 => {
            // f(r) = 4r/(1+r²); Δ(f cosθ) = (f'' + f'/r - f/r²) cosθ
            let f = 4.0 * r / d;
            let fp = 4.0 * (1.0 - r * r) / (d * d);
            let fpp = 8.0 * r * (r * r - 3.0) / (d * d * d);
            let ang = if i == 1 { y[0] / r } else { y[1] / r };
            (fpp + fp / r - f / (r * r) + bubble_eu(r) * f) * ang
        }
        _ => panic!("kernel index {i} out of range (0..=2)"),
    }
}
