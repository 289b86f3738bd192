//! Limit constants of the cluster construction, admissibility of the free
//! parameter, the nonlinear relations tying the concentration scales to the
//! exponent, and the large-power Taylor expansion utility.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Closed-form limits of the construction as the exponent grows.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LimitConstants {
    pub k: u32,
    /// Limit of the amplitude ratio η.
    pub eta_inf: f64,
    /// Limit of τ·p.
    pub t_k: f64,
    /// Decay rate of the inner concentration scale: α ~ e^{-a_k p}.
    pub a_k: f64,
    /// Decay rate of the ring concentration scale: β ~ e^{-b_k p}.
    pub b_k: f64,
    /// Decay rate of the ring radius: ρ ~ e^{-r_k p}.
    pub r_k: f64,
    /// Limit of p ∫ |u|^{p+1} (total energy).
    pub e_total: f64,
    /// Limit of p ∫ (u⁺)^{p+1}.
    pub e_plus: f64,
    /// Limit of p ∫ (u⁻)^{p+1}.
    pub e_minus: f64,
}

/// All constants are elementary closed forms; no root-finding involved.
pub fn limit_constants(k: u32) -> LimitConstants {
    assert!(k >= 2, "k must be at least 2");
    let kf = k as f64;
    let eta_inf = 2.0 / (kf - 1.0);
    let lg = ((kf - 1.0) / 2.0).ln();
    let kp1sq = (kf + 1.0) * (kf + 1.0);
    let t_k = std::f64::consts::E.sqrt() * eta_inf.powf(-4.0 * kf / kp1sq);
    let a_k = 0.25 * (1.0 + 8.0 * kf / kp1sq * lg);
    let b_k = (1.0 + 2.0 * (kf - 1.0) * (kf - 1.0) / kp1sq * lg) / (4.0 * kf);
    let r_k = (kf - 1.0) / kp1sq * lg;
    let pie8 = 8.0 * std::f64::consts::PI * std::f64::consts::E;
    let e_plus = pie8 * ((kf - 1.0) / 2.0).powf(8.0 * kf / kp1sq);
    let e_minus = pie8 * kf * eta_inf.powf(2.0 * (kf - 1.0) * (kf - 1.0) / kp1sq);
    let e_total = pie8
        * ((kf + 1.0) / (kf - 1.0)).powi(2)
        * ((kf - 1.0) / 2.0).powf(8.0 * kf / kp1sq);
    LimitConstants {
        k,
        eta_inf,
        t_k,
        a_k,
        b_k,
        r_k,
        e_total,
        e_plus,
        e_minus,
    }
}

/// Objective whose unique root in (3, 6) separates the clustering regime:
/// `1/2 - ((k-1)/(k+1)) log((k-1)/2)`.
pub fn k0_objective(k: f64) -> f64 {
    0.5 - (k - 1.0) / (k + 1.0) * ((k - 1.0) / 2.0).ln()
}

/// Bisection for the threshold symmetry order on the fixed bracket (3, 6).
pub fn find_k0(tol: f64) -> f64 {
    assert!(tol > 0.0);
    let (mut lo, mut hi) = (3.0f64, 6.0f64);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if k0_objective(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Result of the admissibility test for (k, η).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub ok: bool,
    /// Margins of the four inequalities, in order:
    /// 2/k < η < 1 (min of the two sides), then the three log-inequalities.
    pub margins: [f64; 4],
    /// Explicit separation rate (¼ min{...}); only meaningful when `ok`.
    pub epsilon: Option<f64>,
}

/// Evaluates the four inequalities that keep the concentration scales ordered.
pub fn check_admissible(k: u32, eta: f64) -> AdmissibilityReport {
    let kf = k as f64;
    let m1 = (eta - 2.0 / kf).min(1.0 - eta);
    let le = eta.ln();
    let m2 = 0.5 + le / (eta + 1.0);
    let den = (kf * eta - 1.0) * (eta + 1.0);
    let m3 = 0.5 + kf * eta * eta / den * le;
    let m4 = 0.5 + (kf + 1.0) * eta / (2.0 * den) * le;
    let margins = [m1, m2, m3, m4];
    let ok = eta > 0.0 && margins.iter().all(|&m| m > 0.0);
    let epsilon = if ok {
        Some(0.25 * (1.0f64).min(m2 / kf).min(m3))
    } else {
        None
    };
    AdmissibilityReport {
        ok,
        margins,
        epsilon,
    }
}

/// The scale parameters of the two-bubble ansatz together with the constants
/// entering their defining relations.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BubbleParams {
    pub k: u32,
    pub p: f64,
    pub eta: f64,
    /// Raw scales; these underflow to zero for large p — the log fields
    /// below are the primary representation.
    pub tau: f64,
    pub alpha: f64,
    pub beta: f64,
    pub rho: f64,
    pub log_tau: f64,
    pub log_alpha: f64,
    pub log_beta: f64,
    pub log_rho: f64,
    pub robin_00: f64,
    pub c1: f64,
    pub c2: f64,
    /// Far-field constants of the correction profiles in use (zero for the
    /// far-const-zero normalization).
    pub v_inf: f64,
    pub w_inf: f64,
    /// Max residual of the four defining relations in normalized log form.
    pub residual: f64,
}

impl BubbleParams {
    pub fn rho_k(&self) -> f64 {
        (self.k as f64 * self.log_rho).exp()
    }
    pub fn beta_k(&self) -> f64 {
        (self.k as f64 * self.log_beta).exp()
    }
}

/// The four defining relations in normalized log form (each original relation
/// taken to the power 1/p). Returns the residual vector.
fn system_residual(
    x: &[f64; 4], // (log τ, log α, log β, log ρ)
    k: u32,
    p: f64,
    eta: f64,
    robin_00: f64,
    c1: f64,
    c2: f64,
    v_inf: f64,
    w_inf: f64,
) -> [f64; 4] {
    let kf = k as f64;
    let q = 4.0 - c1 / p - c2 / (p * p);
    let (lt, la, lb, lr) = (x[0], x[1], x[2], x[3]);
    let pi = std::f64::consts::PI;
    let fc = v_inf / p + w_inf / (p * p);
    [
        (lt - 2.0 * la) / p - p.ln() - lt,
        (lt + eta.ln() + 2.0 * kf.ln() + (2.0 * kf - 2.0) * lr - 2.0 * kf * lb) / p
            - p.ln()
            - lt
            - eta.ln(),
        (q * (kf * eta * lr - la) - 8f64.ln() + 2.0 * pi * (kf * eta - 1.0) * q * robin_00 - fc)
            / p
            - 1.0,
        (q * (lr / eta - kf * lb) - 8f64.ln() - 2.0 * pi * (kf - 1.0 / eta) * q * robin_00 - fc)
            / p
            - 1.0,
    ]
}

/// Leading-order closed forms for the four scales, reconstructed from the
/// defining relations; used as the Newton seed.
pub fn asymptotic_parameters(
    k: u32,
    p: f64,
    eta: f64,
    robin_00: f64,
    c1: f64,
) -> (f64, f64, f64, f64) {
    let kf = k as f64;
    let pi = std::f64::consts::PI;
    let den = (kf * eta - 1.0) * (eta + 1.0);
    let log_rho =
        (p - 1.0) * eta * eta.ln() / (2.0 * den) - 2.0 * pi * robin_00 - eta * kf.ln() / den;
    let log_alpha = kf * eta * log_rho - p / 4.0 - c1 / 16.0 - 8f64.ln() / 4.0
        + 0.5 * pi * (kf * eta - 1.0) * robin_00;
    let log_beta = log_rho / (kf * eta) - p / (4.0 * kf) - c1 / (16.0 * kf)
        - 8f64.ln() / (4.0 * kf)
        - 0.5 * pi * (kf - 1.0 / eta) * robin_00 / kf;
    let log_tau = -(p * p.ln() + 2.0 * log_alpha) / (p - 1.0);
    (log_tau, log_alpha, log_beta, log_rho)
}

/// Solver options; the far-field constants default to zero (the calibrated
/// profile normalization).
#[derive(Debug, Clone, Copy)]
pub struct ParamInputs {
    pub k: u32,
    pub p: f64,
    pub eta: f64,
    pub robin_00: f64,
    pub c1: f64,
    pub c2: f64,
    pub v_inf: f64,
    pub w_inf: f64,
}

impl ParamInputs {
    pub fn new(k: u32, p: f64, eta: f64, robin_00: f64, c1: f64, c2: f64) -> Self {
        ParamInputs {
            k,
            p,
            eta,
            robin_00,
            c1,
            c2,
            v_inf: 0.0,
            w_inf: 0.0,
        }
    }
}

/// Newton solve of the four relations in the log variables, seeded by the
/// asymptotic closed forms. The system is linear in the logs, so this
/// converges in one step plus refinement.
pub fn solve_parameter_system(inp: ParamInputs, seed: Option<[f64; 4]>) -> Result<BubbleParams> {
    let ParamInputs {
        k,
        p,
        eta,
        robin_00,
        c1,
        c2,
        v_inf,
        w_inf,
    } = inp;
    if p <= 1.0 {
        return Err(Error::InvalidParameter(format!("p = {p} must exceed 1")));
    }
    if eta <= 1.0 / k as f64 {
        return Err(Error::InvalidParameter(format!(
            "eta = {eta} at or below the pole 1/k"
        )));
    }
    let mut x = seed.unwrap_or_else(|| {
        let (lt, la, lb, lr) = asymptotic_parameters(k, p, eta, robin_00, c1);
        [lt, la, lb, lr]
    });

    let f = |x: &[f64; 4]| system_residual(x, k, p, eta, robin_00, c1, c2, v_inf, w_inf);
    let mut best = f(&x);
    for _ in 0..50 {
        let r0 = f(&x);
        let norm0 = r0.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        if norm0 <= 1e-13 {
            break;
        }
        // finite-difference Jacobian (the system is linear; this is exact
        // up to rounding)
        let mut jac = [[0.0f64; 4]; 4];
        for j in 0..4 {
            let h = 1e-7 * (1.0 + x[j].abs());
            let mut xp = x;
            xp[j] += h;
            let rp = f(&xp);
            for i in 0..4 {
                jac[i][j] = (rp[i] - r0[i]) / h;
            }
        }
        let delta = solve4x4(jac, r0).ok_or_else(|| {
            Error::NewtonDiverged("singular Jacobian in the parameter system".into())
        })?;
        for i in 0..4 {
            x[i] -= delta[i];
        }
        let r1 = f(&x);
        if r1.iter().fold(0.0f64, |a, b| a.max(b.abs())) >= norm0 && norm0 < 1e-10 {
            break;
        }
        best = r1;
    }
    let residual = best.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    if residual > 1e-12 {
        return Err(Error::NewtonDiverged(format!(
            "parameter system residual {residual:.3e} (p too small or eta inadmissible?)"
        )));
    }
    let (log_tau, log_alpha, log_beta, log_rho) = (x[0], x[1], x[2], x[3]);
    Ok(BubbleParams {
        k,
        p,
        eta,
        tau: log_tau.exp(),
        alpha: log_alpha.exp(),
        beta: log_beta.exp(),
        rho: log_rho.exp(),
        log_tau,
        log_alpha,
        log_beta,
        log_rho,
        robin_00,
        c1,
        c2,
        v_inf,
        w_inf,
        residual,
    })
}

fn solve4x4(mut m: [[f64; 4]; 4], mut b: [f64; 4]) -> Option<[f64; 4]> {
    for col in 0..4 {
        let piv = (col..4).max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap())?;
        if m[piv][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, piv);
        b.swap(col, piv);
        for row in 0..4 {
            if row == col {
                continue;
            }
            let f = m[row][col] / m[col][col];
            for c2 in col..4 {
                m[row][c2] -= f * m[col][c2];
            }
            b[row] -= f * b[col];
        }
    }
    Some([
        b[0] / m[0][0],
        b[1] / m[1][1],
        b[2] / m[2][2],
        b[3] / m[3][3],
    ])
}

/// Richardson-style extrapolation of a p-indexed sequence with the model
/// `c0 + c1 log p / p + c2 / p`; returns the extrapolated limit `c0`.
pub fn extrapolate_rate(ps: &[f64], values: &[f64]) -> f64 {
    assert!(ps.len() == values.len() && ps.len() >= 3);
    let n = ps.len();
    let mut a = nalgebra::DMatrix::<f64>::zeros(n, 3);
    let mut b = nalgebra::DVector::<f64>::zeros(n);
    for i in 0..n {
        a[(i, 0)] = 1.0;
        a[(i, 1)] = ps[i].ln() / ps[i];
        a[(i, 2)] = 1.0 / ps[i];
        b[i] = values[i];
    }
    let sol = a.svd(true, true).solve(&b, 1e-14).unwrap();
    sol[0]
}

/// Output of the large-power expansion check.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TaylorCheck {
    pub exact: f64,
    pub expansion: f64,
    /// `|exact - expansion| p³ / (e^a (1 + a⁶ + b⁶ + c⁶))`.
    pub bound_const: f64,
}

/// Compares `(1 + a/p + b/p² + c/p³)^p`, computed in logs, against its
/// two-term expansion. Preconditions: `-(1-1/C) p ≤ a ≤ C`, `|b|+|c| ≤ C p`
/// for the configured constant `C` (default 4).
pub fn taylor_check(a: f64, b: f64, c: f64, p: f64, big_c: f64) -> Result<TaylorCheck> {
    if a < -(1.0 - 1.0 / big_c) * p || a > big_c || b.abs() + c.abs() > big_c * p {
        return Err(Error::InvalidParameter(format!(
            "(a,b,c)=({a},{b},{c}) outside the admissible box for C={big_c}, p={p}"
        )));
    }
    let x = a / p + b / (p * p) + c / (p * p * p);
    let exact = (p * x.ln_1p()).exp();
    let t1 = b - 0.5 * a * a;
    let t2 = c - a * b + a * a * a / 3.0 + 0.5 * t1 * t1;
    let expansion = a.exp() * (1.0 + t1 / p + t2 / (p * p));
    let denom = a.exp() * (1.0 + a.powi(6) + b.powi(6) + c.powi(6));
    let bound_const = (exact - expansion).abs() * p.powi(3) / denom;
    Ok(TaylorCheck {
        exact,
        expansion,
        bound_const,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn eta_limits() {
        assert_abs_diff_eq!(limit_constants(4).eta_inf, 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(limit_constants(5).eta_inf, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(limit_constants(3).r_k, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn amplitude_limit_high_precision() {
        // √e (2/3)^{-16/25}, cross-checked at 50-digit precision
        assert_abs_diff_eq!(
            limit_constants(4).t_k,
            2.137202368206442796217,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            limit_constants(5).t_k,
            2.423182519696433014701,
            epsilon = 1e-14
        );
    }

    #[test]
    fn rate_ordering_for_cluster_range() {
        for k in [4, 5] {
            let c = limit_constants(k);
            assert!(c.a_k > c.b_k && c.b_k > c.r_k && c.r_k > 0.0, "k={k}");
        }
        for k in [6, 7, 8] {
            let c = limit_constants(k);
            let rep = check_admissible(k, c.eta_inf);
            assert!(rep.margins[1] <= 0.0, "k={k} margin {}", rep.margins[1]);
        }
    }

    #[test]
    fn energy_split_closed_forms() {
        for k in [4u32, 5] {
            let c = limit_constants(k);
            // E = E⁺ + E⁻ is an algebraic identity of the closed forms
            assert_abs_diff_eq!(c.e_total, c.e_plus + c.e_minus, epsilon = 1e-9);
        }
        let pie8 = 8.0 * std::f64::consts::PI * std::f64::consts::E;
        assert_abs_diff_eq!(
            limit_constants(4).e_plus,
            pie8 * 1.5f64.powf(32.0 / 25.0),
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(
            limit_constants(5).e_minus,
            pie8 * 5.0 * 0.5f64.powf(32.0 / 36.0),
            epsilon = 1e-10
        );
    }

    #[test]
    fn threshold_root() {
        let k0 = find_k0(1e-9);
        assert_abs_diff_eq!(k0, 5.186990473139426, epsilon = 1e-8);
        assert_abs_diff_eq!(k0_objective(3.0), 0.5, epsilon = 1e-15);
        assert!(k0_objective(6.0) < 0.0);
        assert_abs_diff_eq!(
            k0_objective(6.0),
            0.5 - 5.0 / 7.0 * 2.5f64.ln(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn admissibility_cases() {
        assert!(check_admissible(4, 2.0 / 3.0).ok);
        assert!(check_admissible(5, 0.5).ok);
        assert!(!check_admissible(3, 1.0).ok); // η = 1 fails the strict bound
        let rep = check_admissible(6, 0.4);
        assert!(!rep.ok);
        assert_abs_diff_eq!(rep.margins[1], 0.5 + 0.4f64.ln() / 1.4, epsilon = 1e-12);
    }

    #[test]
    fn system_solves_to_tolerance() {
        for k in [4u32, 5] {
            let eta = limit_constants(k).eta_inf;
            for p in [10.0, 100.0, 1000.0, 10000.0] {
                let bp = solve_parameter_system(
                    ParamInputs::new(k, p, eta, 0.0, 3.68, -4.98),
                    None,
                )
                .unwrap();
                assert!(bp.residual <= 1e-12, "k={k} p={p}: {}", bp.residual);
                assert!(bp.log_alpha < bp.log_rho && bp.log_beta < bp.log_rho);
                assert!(bp.tau > 0.0 && bp.log_alpha.is_finite());
            }
        }
    }

    #[test]
    fn scale_separation_rate() {
        // α/ρ ≤ e^{-εp} with the explicit ε
        let k = 4;
        let eta = 2.0 / 3.0;
        let eps = check_admissible(k, eta).epsilon.unwrap();
        let bp =
            solve_parameter_system(ParamInputs::new(k, 200.0, eta, 0.0, 3.68, -4.98), None)
                .unwrap();
        assert!(bp.log_alpha - bp.log_rho <= -eps * 200.0);
        assert!(bp.log_beta - bp.log_rho <= -eps * 200.0);
    }

    #[test]
    fn rates_match_limit_constants() {
        for k in [4u32, 5] {
            let c = limit_constants(k);
            let ps = [10.0, 100.0, 1000.0, 10000.0];
            let mut la = vec![];
            let mut lb = vec![];
            let mut lr = vec![];
            let mut taup_last = 0.0;
            for &p in &ps {
                let bp = solve_parameter_system(
                    ParamInputs::new(k, p, c.eta_inf, 0.0, 3.6822338, -4.9785423),
                    None,
                )
                .unwrap();
                la.push(-bp.log_alpha / p);
                lb.push(-bp.log_beta / p);
                lr.push(-bp.log_rho / p);
                taup_last = bp.tau * p;
            }
            let ea = extrapolate_rate(&ps, &la);
            let eb = extrapolate_rate(&ps, &lb);
            let er = extrapolate_rate(&ps, &lr);
            assert!((ea - c.a_k).abs() / c.a_k < 0.02, "a_{k}: {ea} vs {}", c.a_k);
            assert!((eb - c.b_k).abs() / c.b_k < 0.02, "b_{k}: {eb} vs {}", c.b_k);
            assert!((er - c.r_k).abs() / c.r_k < 0.02, "r_{k}: {er} vs {}", c.r_k);
            assert!((taup_last - c.t_k).abs() / c.t_k < 0.01);
        }
    }

    #[test]
    fn asymptotic_seed_limits() {
        // τp → √e η^{-kη²/((kη-1)(η+1))} and -(4/p) log α → 1 - 2kη² log η/(...)
        let (k, eta) = (4u32, 2.0 / 3.0);
        let p = 1e4;
        let (lt, la, _, _) = asymptotic_parameters(k, p, eta, 0.0, 3.6822338);
        let den = (4.0 * eta - 1.0) * (eta + 1.0);
        let taup_lim = std::f64::consts::E.sqrt() * eta.powf(-4.0 * eta * eta / den);
        assert!(((lt.exp() * p) - taup_lim).abs() / taup_lim < 0.01);
        let alpha_lim = 1.0 - 2.0 * 4.0 * eta * eta * eta.ln() / den;
        assert!((-4.0 * la / p - alpha_lim).abs() / alpha_lim < 0.02);
        // at η = η∞ the rate equals a_k
        let c = limit_constants(4);
        assert!((-la / p - c.a_k).abs() / c.a_k < 0.02);
    }

    #[test]
    fn scales_decrease_in_p() {
        let mut prev: Option<BubbleParams> = None;
        for &p in &[20.0, 40.0, 80.0, 160.0, 320.0] {
            let bp = solve_parameter_system(
                ParamInputs::new(4, p, 2.0 / 3.0, 0.0, 3.68, -4.98),
                None,
            )
            .unwrap();
            if let Some(q) = prev {
                assert!(bp.tau < q.tau && bp.alpha < q.alpha);
                assert!(bp.beta < q.beta && bp.rho < q.rho);
            }
            prev = Some(bp);
        }
    }

    #[test]
    fn reduced_energy_identity_at_eta_inf() {
        // (1+kη²) η^{-2kη²/((kη-1)(η+1))} at η = 2/(k-1) equals E(k)/(8πe)
        for k in [4u32, 5] {
            let c = limit_constants(k);
            let eta = c.eta_inf;
            let kf = k as f64;
            let den = (kf * eta - 1.0) * (eta + 1.0);
            let phi = (1.0 + kf * eta * eta) * eta.powf(-2.0 * kf * eta * eta / den);
            let target = c.e_total / (8.0 * std::f64::consts::PI * std::f64::consts::E);
            assert_abs_diff_eq!(phi, target, epsilon = 1e-10);
        }
    }

    #[test]
    fn taylor_examples() {
        let t = taylor_check(0.0, 0.0, 0.0, 50.0, 4.0).unwrap();
        assert_abs_diff_eq!(t.exact, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(t.expansion, 1.0, epsilon = 1e-15);

        let t = taylor_check(1.0, 0.0, 0.0, 100.0, 4.0).unwrap();
        assert_abs_diff_eq!(t.exact, 1.01f64.powi(100), epsilon = 1e-10);
        let e = std::f64::consts::E;
        assert_abs_diff_eq!(
            t.expansion,
            e * (1.0 - 1.0 / 200.0 + (1.0 / 3.0 + 1.0 / 8.0) / 1e4),
            epsilon = 1e-12
        );
        assert!((t.exact - 2.70481).abs() < 1e-4);

        assert!(taylor_check(5.0, 0.0, 0.0, 100.0, 4.0).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn system_residual_always_small(
            k in 4u32..=5,
            deta in -0.04f64..0.04,
            logp in 3.0f64..8.0,
        ) {
            let eta = limit_constants(k).eta_inf + deta;
            prop_assume!(check_admissible(k, eta).ok);
            let p = logp.exp();
            let bp = solve_parameter_system(
                ParamInputs::new(k, p, eta, 0.0, 3.6822338, -4.9785423), None).unwrap();
            prop_assert!(bp.residual <= 1e-12);
            prop_assert!(bp.log_alpha < bp.log_rho);
        }

        #[test]
        fn taylor_bound_uniform(
            a in -2.0f64..2.0,
            b in -20.0f64..20.0,
            c in -20.0f64..20.0,
        ) {
            let t = taylor_check(a, b, c, 200.0, 4.0).unwrap();
            // empirical uniform constant with ample headroom
            prop_assert!(t.bound_const.is_finite() && t.bound_const < 1e3);
        }
    }
}
