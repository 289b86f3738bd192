//! Planar k-symmetric domains, Green's function and its regular part, and the
//! zero-boundary projection of entire profiles.
//!
//! Convention: `G(x,y) = -(1/2π) log|x-y| - H(x,y)`, so on a disk of radius R
//! centred at the origin `H(x,0) = -(1/2π) log R`. The regular part is
//! harmonic in x with boundary data `-(1/2π) log|x-y|`.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub type Point = [f64; 2];

fn cplx(x: Point) -> Complex64 {
    Complex64::new(x[0], x[1])
}

/// Rotation of `x` by `2π/k`.
pub fn rotate_k(x: Point, k: u32) -> Point {
    let a = 2.0 * PI / k as f64;
    [
        x[0] * a.cos() - x[1] * a.sin(),
        x[0] * a.sin() + x[1] * a.cos(),
    ]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DomainKind {
    Disk { radius: f64 },
    Custom { boundary: Vec<Point> },
}

/// A k-symmetric planar domain containing the origin.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DomainModel {
    #[serde(flatten)]
    pub kind: DomainKind,
    pub k_sym: u32,
    /// `H(0,0)` for this domain.
    #[serde(default)]
    pub robin_00: f64,
    #[serde(skip)]
    mfs: Option<MfsSolver>,
}

impl DomainModel {
    pub fn unit_disk(k_sym: u32) -> Self {
        DomainModel::disk(1.0, k_sym)
    }

    pub fn disk(radius: f64, k_sym: u32) -> Self {
        DomainModel {
            kind: DomainKind::Disk { radius },
            k_sym,
            robin_00: -(radius.ln()) / (2.0 * PI),
            mfs: None,
        }
    }

    /// Custom domain from ordered boundary samples; validates symmetry and
    /// builds the charge-collocation solver.
    pub fn custom(boundary: Vec<Point>, k_sym: u32) -> Result<Self> {
        if boundary.len() < 16 * k_sym as usize {
            return Err(Error::Geometry(format!(
                "need at least {} boundary samples",
                16 * k_sym
            )));
        }
        let mut dom = DomainModel {
            kind: DomainKind::Custom { boundary },
            k_sym,
            robin_00: 0.0,
            mfs: None,
        };
        dom.validate()?;
        dom.mfs = Some(MfsSolver::build(dom.boundary_samples(), k_sym)?);
        dom.robin_00 = dom.regular_part([0.0, 0.0], [0.0, 0.0])?;
        Ok(dom)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            kind: String,
            #[serde(default)]
            radius: Option<f64>,
            #[serde(default)]
            boundary: Option<Vec<Point>>,
            k_sym: u32,
        }
        let raw: Raw = serde_json::from_str(text)?;
        match raw.kind.as_str() {
            "disk" => Ok(DomainModel::disk(raw.radius.unwrap_or(1.0), raw.k_sym)),
            "custom" => DomainModel::custom(
                raw.boundary
                    .ok_or_else(|| Error::Geometry("custom domain needs boundary".into()))?,
                raw.k_sym,
            ),
            other => Err(Error::Geometry(format!("unknown domain kind '{other}'"))),
        }
    }

    pub fn is_disk(&self) -> bool {
        matches!(self.kind, DomainKind::Disk { .. })
    }

    pub fn disk_radius(&self) -> Option<f64> {
        match self.kind {
            DomainKind::Disk { radius } => Some(radius),
            _ => None,
        }
    }

    /// Ordered boundary samples (synthesized for disks).
    pub fn boundary_samples(&self) -> Vec<Point> {
        match &self.kind {
            DomainKind::Disk { radius } => (0..256)
                .map(|i| {
                    let t = 2.0 * PI * i as f64 / 256.0;
                    [radius * t.cos(), radius * t.sin()]
                })
                .collect(),
            DomainKind::Custom { boundary } => boundary.clone(),
        }
    }

    /// Checks origin membership and the two symmetries on the boundary polyline.
    pub fn validate(&self) -> Result<()> {
        let samples = self.boundary_samples();
        let scale = samples
            .iter()
            .map(|p| (p[0] * p[0] + p[1] * p[1]).sqrt())
            .fold(0.0f64, f64::max);
        let tol = 1e-6 * scale;
        let nearest = |q: Point| -> f64 {
            samples
                .iter()
                .map(|s| ((s[0] - q[0]).powi(2) + (s[1] - q[1]).powi(2)).sqrt())
                .fold(f64::INFINITY, f64::min)
        };
        for s in samples.iter().step_by(7) {
            let refl = [s[0], -s[1]];
            let rot = rotate_k(*s, self.k_sym);
            if nearest(refl) > 10.0 * tol + 10.0 * scale / samples.len() as f64 {
                return Err(Error::Geometry("boundary not reflection-symmetric".into()));
            }
            if nearest(rot) > 10.0 * tol + 10.0 * scale / samples.len() as f64 {
                return Err(Error::Geometry("boundary not k-symmetric".into()));
            }
        }
        Ok(())
    }

    /// Green's function and regular part at `(x, y)`.
    pub fn green(&self, x: Point, y: Point) -> Result<(f64, f64)> {
        let h = self.regular_part(x, y)?;
        let d = ((x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2)).sqrt();
        if d == 0.0 {
            return Err(Error::Geometry("G(x,x) is singular".into()));
        }
        Ok((-d.ln() / (2.0 * PI) - h, h))
    }

    /// Regular part `H(x,y)`, harmonic in x with data `-(1/2π) log|x-y|`.
    pub fn regular_part(&self, x: Point, y: Point) -> Result<f64> {
        match self.kind {
            DomainKind::Disk { radius } => {
                let ynorm = (y[0] * y[0] + y[1] * y[1]).sqrt();
                if ynorm == 0.0 {
                    return Ok(-(radius.ln()) / (2.0 * PI));
                }
                // image charge at R²y/|y|²
                let img = [
                    radius * radius * y[0] / (ynorm * ynorm),
                    radius * radius * y[1] / (ynorm * ynorm),
                ];
                let d = ((x[0] - img[0]).powi(2) + (x[1] - img[1]).powi(2)).sqrt();
                Ok(-((ynorm * d / radius).ln()) / (2.0 * PI))
            }
            DomainKind::Custom { .. } => {
                let mfs = self
                    .mfs
                    .as_ref()
                    .ok_or_else(|| Error::Geometry("collocation solver missing".into()))?;
                let data = |b: Point| {
                    let d = ((b[0] - y[0]).powi(2) + (b[1] - y[1]).powi(2)).sqrt();
                    -d.ln() / (2.0 * PI)
                };
                let h = mfs.harmonic_extension(&data)?;
                Ok(h.eval(x))
            }
        }
    }

    /// `|H_{Ω^k}(x^k, 0) - k H_Ω(x, 0)|`: self-test of the k-fold image
    /// identity used by the ring-bubble projections.
    pub fn robin_ksym_identity_check(&self, x: Point) -> Result<f64> {
        let k = self.k_sym;
        let xk = cplx(x).powu(k);
        let h_here = self.regular_part(x, [0.0, 0.0])?;
        let image = self.image_domain()?;
        let h_image = image.regular_part([xk.re, xk.im], [0.0, 0.0])?;
        Ok((h_image - k as f64 * h_here).abs())
    }

    /// The image of the domain under `x ↦ x^k` (k_sym drops to 1).
    pub fn image_domain(&self) -> Result<DomainModel> {
        match &self.kind {
            DomainKind::Disk { radius } => Ok(DomainModel::disk(radius.powi(self.k_sym as i32), 1)),
            DomainKind::Custom { boundary } => {
                // one fundamental sector sweeps the image boundary once
                let k = self.k_sym;
                let arc: Vec<Point> = boundary
                    .iter()
                    .map(|p| {
                        let z = cplx(*p).powu(k);
                        [z.re, z.im]
                    })
                    .collect();
                // the k-fold cover repeats samples; dedupe by angle ordering
                let mut pts = arc;
                pts.sort_by(|a, b| {
                    a[1].atan2(a[0])
                        .partial_cmp(&b[1].atan2(b[0]))
                        .unwrap()
                });
                pts.dedup_by(|a, b| {
                    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt() < 1e-12
                });
                let mut dom = DomainModel {
                    kind: DomainKind::Custom { boundary: pts },
                    k_sym: 1,
                    robin_00: 0.0,
                    mfs: None,
                };
                dom.mfs = Some(MfsSolver::build(dom.boundary_samples(), 1)?);
                dom.robin_00 = dom.regular_part([0.0, 0.0], [0.0, 0.0])?;
                Ok(dom)
            }
        }
    }

    /// Harmonic extension of boundary data, dispatched on the domain kind:
    /// disks use the Fourier–Poisson form, custom domains the charge
    /// collocation. Subtracting it from the field is the zero-boundary
    /// projection.
    pub fn harmonic_extension<F: Fn(Point) -> f64>(&self, data: F) -> Result<HarmonicField> {
        match self.kind {
            DomainKind::Disk { radius } => {
                Ok(HarmonicField::Fourier(FourierHarmonic::from_boundary(
                    radius, self.k_sym, 256, &data,
                )))
            }
            DomainKind::Custom { .. } => {
                let mfs = self
                    .mfs
                    .as_ref()
                    .ok_or_else(|| Error::Geometry("collocation solver missing".into()))?;
                Ok(HarmonicField::Charges(mfs.harmonic_extension(&data)?))
            }
        }
    }
}

/// A harmonic function on the domain, evaluable with its gradient.
#[derive(Debug, Clone)]
pub enum HarmonicField {
    Fourier(FourierHarmonic),
    Charges(ChargeField),
}

impl HarmonicField {
    pub fn eval(&self, x: Point) -> f64 {
        match self {
            HarmonicField::Fourier(f) => f.eval(x),
            HarmonicField::Charges(c) => c.eval(x),
        }
    }
    pub fn grad(&self, x: Point) -> Point {
        match self {
            HarmonicField::Fourier(f) => f.grad(x),
            HarmonicField::Charges(c) => c.grad(x),
        }
    }
}

/// Harmonic extension on a disk by cosine series in `kθ` (the boundary data
/// of every field here is even in θ and k-periodic):
/// `h = Σ c_m (r/R)^{km} cos(kmθ)`.
#[derive(Debug, Clone)]
pub struct FourierHarmonic {
    pub radius: f64,
    pub k: u32,
    pub coeffs: Vec<f64>,
}

impl FourierHarmonic {
    pub fn from_boundary<F: Fn(Point) -> f64>(
        radius: f64,
        k: u32,
        m_samples: usize,
        data: &F,
    ) -> Self {
        // sample one period θ ∈ [0, 2π/k)
        let vals: Vec<f64> = (0..m_samples)
            .map(|j| {
                let t = 2.0 * PI * j as f64 / (m_samples as f64 * k as f64);
                data([radius * t.cos(), radius * t.sin()])
            })
            .collect();
        let n_keep = m_samples / 2;
        let mut coeffs = vec![0.0; n_keep];
        for (m, c) in coeffs.iter_mut().enumerate() {
            let mut s = 0.0;
            for (j, v) in vals.iter().enumerate() {
                s += v * (2.0 * PI * (m * j) as f64 / m_samples as f64).cos();
            }
            *c = s * if m == 0 { 1.0 } else { 2.0 } / m_samples as f64;
        }
        // drop the negligible tail
        while coeffs.len() > 2 && coeffs.last().unwrap().abs() < 1e-16 {
            coeffs.pop();
        }
        FourierHarmonic { radius, k, coeffs }
    }

    pub fn eval(&self, x: Point) -> f64 {
        let z = cplx(x) / self.radius;
        let zk = z.powu(self.k);
        let mut s = self.coeffs[0];
        let mut pw = Complex64::new(1.0, 0.0);
        for c in &self.coeffs[1..] {
            pw *= zk;
            if pw.norm_sqr() < 1e-600 {
                break;
            }
            s += c * pw.re;
        }
        s
    }

    /// Gradient via term-wise differentiation of `Re(c_m z^{km})`.
    pub fn grad(&self, x: Point) -> Point {
        let z = cplx(x) / self.radius;
        let zk = z.powu(self.k);
        let mut deriv = Complex64::new(0.0, 0.0);
        let mut pw = Complex64::new(1.0, 0.0); // z^{km-1} built incrementally
        let mut zpow = if x[0] == 0.0 && x[1] == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            zk / z
        };
        for (m, c) in self.coeffs.iter().enumerate().skip(1) {
            // d/dz of c z^{km} is c km z^{km-1}
            let km = (self.k as usize * m) as f64;
            if m == 1 {
                pw = zpow;
            } else {
                pw *= zk;
            }
            if pw.norm_sqr() < 1e-600 {
                break;
            }
            deriv += c * km * pw;
        }
        zpow = deriv / self.radius;
        [zpow.re, -zpow.im]
    }
}

/// Fundamental-solution charges on a dilated boundary.
#[derive(Debug, Clone)]
pub struct ChargeField {
    charges: Vec<Point>,
    weights: Vec<f64>,
    constant: f64,
}

impl ChargeField {
    pub fn eval(&self, x: Point) -> f64 {
        let mut s = self.constant;
        for (q, w) in self.charges.iter().zip(&self.weights) {
            let d2 = (x[0] - q[0]).powi(2) + (x[1] - q[1]).powi(2);
            s += w * (-0.25 / PI) * d2.ln();
        }
        s
    }
    pub fn grad(&self, x: Point) -> Point {
        let mut g = [0.0, 0.0];
        for (q, w) in self.charges.iter().zip(&self.weights) {
            let dx = [x[0] - q[0], x[1] - q[1]];
            let d2 = dx[0] * dx[0] + dx[1] * dx[1];
            g[0] += w * (-0.5 / PI) * dx[0] / d2;
            g[1] += w * (-0.5 / PI) * dx[1] / d2;
        }
        g
    }
}

/// Method-of-fundamental-solutions collocation: charge points on the boundary
/// dilated by 1.5, 16k charges, least-squares fit at the boundary samples.
/// The factorization is built once and reused for every data set.
#[derive(Debug, Clone)]
struct MfsSolver {
    collocation: Vec<Point>,
    charges: Vec<Point>,
    svd: nalgebra::SVD<f64, nalgebra::Dyn, nalgebra::Dyn>,
    matrix: DMatrix<f64>,
    pub condition: f64,
}

impl MfsSolver {
    fn build(boundary: Vec<Point>, k_sym: u32) -> Result<Self> {
        let n_charge = (16 * k_sym.max(1)) as usize;
        let stride = (boundary.len() / n_charge).max(1);
        let charges: Vec<Point> = boundary
            .iter()
            .step_by(stride)
            .take(n_charge)
            .map(|p| [1.5 * p[0], 1.5 * p[1]])
            .collect();
        let collocation = boundary;
        let ncols = charges.len() + 1; // + explicit constant
        let mut a = DMatrix::<f64>::zeros(collocation.len(), ncols);
        for (i, x) in collocation.iter().enumerate() {
            for (j, q) in charges.iter().enumerate() {
                let d2 = (x[0] - q[0]).powi(2) + (x[1] - q[1]).powi(2);
                a[(i, j)] = (-0.25 / PI) * d2.ln();
            }
            a[(i, ncols - 1)] = 1.0;
        }
        let svd = a.clone().svd(true, true);
        let smax = svd.singular_values.max();
        let smin = svd
            .singular_values
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        let condition = smax / smin.max(1e-300);
        if !condition.is_finite() {
            return Err(Error::IllConditioned(condition));
        }
        Ok(MfsSolver {
            collocation,
            charges,
            svd,
            matrix: a,
            condition,
        })
    }

    fn harmonic_extension<F: Fn(Point) -> f64>(&self, data: &F) -> Result<ChargeField> {
        let b = DVector::from_iterator(
            self.collocation.len(),
            self.collocation.iter().map(|p| data(*p)),
        );
        let sol = self
            .svd
            .solve(&b, 1e-12)
            .map_err(|e| Error::Geometry(format!("collocation solve: {e}")))?;
        let resid = (&self.matrix * &sol - &b).norm() / (b.norm() + 1e-300);
        if resid > 1e-6 {
            return Err(Error::IllConditioned(self.condition));
        }
        let n = self.charges.len();
        Ok(ChargeField {
            charges: self.charges.clone(),
            weights: sol.as_slice()[..n].to_vec(),
            constant: sol[n],
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn wavy_domain(k: u32) -> DomainModel {
        let n = 512;
        let pts: Vec<Point> = (0..n)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / n as f64;
                let r = 1.0 + 0.08 * (k as f64 * t).cos();
                [r * t.cos(), r * t.sin()]
            })
            .collect();
        DomainModel::custom(pts, k).unwrap()
    }

    #[test]
    fn disk_regular_part() {
        let dom = DomainModel::unit_disk(4);
        assert_abs_diff_eq!(dom.robin_00, 0.0, epsilon = 1e-15);
        // H(x,0) = 0 for all interior x on the unit disk
        for &x in &[[0.3, 0.1], [0.0, 0.7], [-0.5, -0.2]] {
            assert_abs_diff_eq!(dom.regular_part(x, [0.0, 0.0]).unwrap(), 0.0, epsilon = 1e-14);
        }
        let dom2 = DomainModel::disk(2.5, 4);
        assert_abs_diff_eq!(dom2.robin_00, -(2.5f64.ln()) / (2.0 * PI), epsilon = 1e-15);
    }

    #[test]
    fn green_symmetry() {
        let dom = DomainModel::disk(1.3, 5);
        let pairs = [([0.3, 0.2], [0.1, -0.4]), ([0.9, 0.0], [0.0, 0.5])];
        for (x, y) in pairs {
            let (_, hxy) = dom.green(x, y).unwrap();
            let (_, hyx) = dom.green(y, x).unwrap();
            assert_abs_diff_eq!(hxy, hyx, epsilon = 1e-10);
        }
    }

    #[test]
    fn ksym_identity_on_disks() {
        let dom = DomainModel::unit_disk(4);
        assert!(dom.robin_ksym_identity_check([0.4, 0.1]).unwrap() < 1e-12);
        let dom_r = DomainModel::disk(1.7, 4);
        // both sides equal -(k/2π) log R
        let h = dom_r.regular_part([0.2, 0.3], [0.0, 0.0]).unwrap();
        assert_abs_diff_eq!(h, -(1.7f64.ln()) / (2.0 * PI), epsilon = 1e-12);
        assert!(dom_r.robin_ksym_identity_check([0.2, 0.3]).unwrap() < 1e-12);
    }

    #[test]
    fn ksym_identity_custom() {
        let dom = wavy_domain(4);
        let d = dom.robin_ksym_identity_check([0.3, 0.05]).unwrap();
        assert!(d < 1e-5, "identity defect {d:.2e}");
    }

    #[test]
    fn custom_h_matches_disk_limit() {
        // flat "wavy" domain is a disk; collocation must reproduce the image formula
        let n = 512;
        let pts: Vec<Point> = (0..n)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / n as f64;
                [t.cos(), t.sin()]
            })
            .collect();
        let dom = DomainModel::custom(pts, 4).unwrap();
        assert!(dom.robin_00.abs() < 1e-8);
        let h = dom.regular_part([0.4, 0.2], [0.1, 0.0]).unwrap();
        let disk = DomainModel::unit_disk(4);
        let h_ref = disk.regular_part([0.4, 0.2], [0.1, 0.0]).unwrap();
        assert_abs_diff_eq!(h, h_ref, epsilon = 1e-7);
    }

    #[test]
    fn fourier_projection_vanishes_on_boundary() {
        let dom = DomainModel::unit_disk(4);
        // project a k-fold field: data from a singular-bubble trace
        let rho_k = 0.01;
        let data = |b: Point| {
            let z = cplx(b).powu(4);
            -2.0 * ((z.re - rho_k).powi(2) + z.im.powi(2) + 1e-8).ln()
        };
        let h = dom.harmonic_extension(data).unwrap();
        let interior_scale = h.eval([0.0, 0.0]).abs().max(1.0);
        for j in 0..64 {
            let t = 2.0 * PI * j as f64 / 64.0 + 0.0037;
            let b = [t.cos(), t.sin()];
            assert!(
                (h.eval(b) - data(b)).abs() <= 1e-8 * interior_scale,
                "boundary mismatch at {t}"
            );
        }
        // k-symmetry inheritance
        for &x in &[[0.3, 0.1], [0.5, -0.4]] {
            let hx = h.eval(x);
            let hrx = h.eval(rotate_k(x, 4));
            assert_abs_diff_eq!(hx, hrx, epsilon = 1e-10);
        }
    }

    #[test]
    fn fourier_gradient_matches_finite_differences() {
        let dom = DomainModel::unit_disk(3);
        let data = |b: Point| {
            let z = cplx(b).powu(3);
            (z.re - 0.2).powi(2).ln_1p() + 0.5 * z.re
        };
        let h = dom.harmonic_extension(data).unwrap();
        for &x in &[[0.3, 0.2], [-0.1, 0.6]] {
            let g = h.grad(x);
            let eps = 1e-6;
            let gx = (h.eval([x[0] + eps, x[1]]) - h.eval([x[0] - eps, x[1]])) / (2.0 * eps);
            let gy = (h.eval([x[0], x[1] + eps]) - h.eval([x[0], x[1] - eps])) / (2.0 * eps);
            assert_abs_diff_eq!(g[0], gx, epsilon = 1e-7);
            assert_abs_diff_eq!(g[1], gy, epsilon = 1e-7);
        }
    }

    #[test]
    fn domain_json_roundtrip() {
        let dom = DomainModel::from_json(r#"{"kind":"disk","radius":1.0,"k_sym":4}"#).unwrap();
        assert!(dom.is_disk());
        assert_eq!(dom.k_sym, 4);
    }
}
