//! Generating-function apparatus for the amplitude at the origin: `f̃(z)`,
//! `λ̃(z)`, `Λ̃₀(z)`, the unit-circle zeros of `Λ̃₀` and the residue norms
//! that carry the point-mass part of the limit measure.
//!
//! Square roots use the principal branch, so `√(1+z⁴) = 1` at `z = 0` and the
//! functions are continuous on the closed unit disk away from the four branch
//! points `e^{±iπ/4}`, `e^{±3iπ/4}`.

use std::f64::consts::{FRAC_PI_4, PI, SQRT_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WalkError};
use crate::series::sqrt1z4_series;
use crate::walk::{phase, Spinor};

/// Largest `|Λ̃₀(e^{iθ_s})|` accepted for a singular point.
pub const SINGULAR_POINT_TOL: f64 = 1e-10;

const POLISH_STEP_TOL: f64 = 1e-13;
const POLISH_MAX_ITER: usize = 8;

/// Which closed-form family a singular point comes from:
/// `EpsPlus` uses `ε = 2πφ + π/4` (decay `1/(3 − 2√2C₊)`), `EpsMinus` uses
/// `ε̃ = 2πφ − π/4` (decay `1/(3 − 2√2C₋)`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SingularCase {
    EpsPlus,
    EpsMinus,
}

impl SingularCase {
    pub fn label(self) -> &'static str {
        match self {
            SingularCase::EpsPlus => "eps_plus",
            SingularCase::EpsMinus => "eps_minus",
        }
    }

    fn angle(self, phi: f64) -> f64 {
        match self {
            SingularCase::EpsPlus => 2.0 * PI * phi + FRAC_PI_4,
            SingularCase::EpsMinus => 2.0 * PI * phi - FRAC_PI_4,
        }
    }

    /// Open interval of `φ` on which this family contributes.
    pub fn active(self, phi: f64) -> bool {
        match self {
            SingularCase::EpsPlus => phi > 0.0 && phi < 0.75,
            SingularCase::EpsMinus => phi > 0.25 && phi < 1.0,
        }
    }
}

/// The `±` member of a pair of antipodal singular points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PointSign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralPoint {
    pub theta_s: f64,
    pub cos_theta: f64,
    pub sin_theta: f64,
    pub case: SingularCase,
    pub sign: PointSign,
    /// `|λ̃(e^{iθ_s})|²`.
    pub lambda_sq: f64,
    /// `|Res(1/Λ̃₀ : e^{iθ_s})|² = 1/(2|1 + φ̃′(θ_s)|²)`.
    pub residue_prefactor: f64,
}

impl SpectralPoint {
    pub fn z(&self) -> Complex64 {
        Complex64::new(self.cos_theta, self.sin_theta)
    }
}

/// `f̃(z) = (z² + 1 − √(z⁴ + 1))/√2`.
pub fn f_tilde(z: Complex64) -> Complex64 {
    let z2 = z * z;
    (z2 + 1.0 - (z2 * z2 + 1.0).sqrt()) / SQRT_2
}

/// `df̃/dz = √2 z − √2 z³/√(z⁴ + 1)`.
pub fn f_tilde_derivative(z: Complex64) -> Complex64 {
    let z3 = z * z * z;
    (z * 2.0 - z3 * 2.0 / (z3 * z + 1.0).sqrt()) / SQRT_2
}

fn in_band(theta: f64) -> bool {
    2.0 * theta.sin().powi(2) >= 1.0
}

/// `φ̃(θ)` with `cos φ̃ = √2 cos θ`, `sin φ̃ = sgn(sin θ)√(2 sin²θ − 1)`;
/// `None` when `2 sin²θ < 1`.
pub fn phi_tilde(theta: f64) -> Option<f64> {
    if !in_band(theta) {
        return None;
    }
    let (s, c) = theta.sin_cos();
    let sin_pt = s.signum() * (2.0 * s * s - 1.0).max(0.0).sqrt();
    Some(sin_pt.atan2(SQRT_2 * c))
}

/// `φ̃′(θ) = √2 sin θ/(sgn(sin θ)√(2 sin²θ − 1))`; `None` outside the open band.
pub fn phi_tilde_derivative(theta: f64) -> Option<f64> {
    let s = theta.sin();
    let d = 2.0 * s * s - 1.0;
    if d <= 0.0 {
        return None;
    }
    Some(SQRT_2 * s / (s.signum() * d.sqrt()))
}

/// Polar form `e^{i(θ + φ̃(θ))}` of `f̃` on the unit circle.
pub fn f_tilde_polar(theta: f64) -> Option<Complex64> {
    phi_tilde(theta).map(|p| Complex64::from_polar(1.0, theta + p))
}

/// `λ̃(z) = z/(f̃(z) − √2)`.
pub fn lambda_tilde(z: Complex64) -> Complex64 {
    let f = f_tilde(z);
    debug_assert!(z.norm() > 1.0 + 1e-12 || f.norm() <= 1.0 + 1e-9);
    z / (f - SQRT_2)
}

/// `|λ̃(e^{iθ})|² = 3 − 4cos²θ − 2√2|sin θ|√(1 − 2cos²θ)` inside the band.
pub fn lambda_sq_on_circle(theta: f64) -> Option<f64> {
    let (s, c) = theta.sin_cos();
    let d = 1.0 - 2.0 * c * c;
    if d < -1e-12 {
        return None;
    }
    Some(3.0 - 4.0 * c * c - 2.0 * SQRT_2 * s.abs() * d.max(0.0).sqrt())
}

/// `Λ̃₀(z) = 1 − √2 ω f̃(z) + ω² f̃(z)²`.
pub fn big_lambda0(z: Complex64, phi: f64) -> Complex64 {
    let wf = phase(phi) * f_tilde(z);
    Complex64::new(1.0, 0.0) - wf * SQRT_2 + wf * wf
}

/// Same as [`big_lambda0`], factored over the roots `e^{±iπ/4}` of
/// `1 − √2u + u²` with `u = ωf̃`.
pub fn big_lambda0_factored(z: Complex64, phi: f64) -> Complex64 {
    let u = phase(phi) * f_tilde(z);
    let one = Complex64::new(1.0, 0.0);
    (one - u * Complex64::from_polar(1.0, -FRAC_PI_4)) * (one - u * Complex64::from_polar(1.0, FRAC_PI_4))
}

/// `d/dθ Λ̃₀(e^{iθ})`.
pub fn big_lambda0_dtheta(theta: f64, phi: f64) -> Complex64 {
    let z = Complex64::from_polar(1.0, theta);
    let w = phase(phi);
    let f = f_tilde(z);
    let dz = Complex64::new(0.0, 1.0) * z;
    (w * w * f * 2.0 - w * SQRT_2) * f_tilde_derivative(z) * dz
}

/// `1/(2|1 + φ̃′(θ)|²)`.
pub fn residue_prefactor(theta: f64) -> Option<f64> {
    phi_tilde_derivative(theta).map(|d| 1.0 / (2.0 * (1.0 + d).powi(2)))
}

fn polish(theta: f64, phi: f64) -> f64 {
    let mut t = theta;
    for _ in 0..POLISH_MAX_ITER {
        let r = big_lambda0(Complex64::from_polar(1.0, t), phi);
        let d = big_lambda0_dtheta(t, phi);
        if d.norm_sqr() == 0.0 {
            break;
        }
        let delta = -(d.conj() * r).re / d.norm_sqr();
        t += delta;
        if delta.abs() < POLISH_STEP_TOL {
            break;
        }
    }
    t
}

/// Closed-form unit-circle zeros of `Λ̃₀`, one antipodal pair per active
/// family, each polished and checked against [`SINGULAR_POINT_TOL`].
///
/// `EpsPlus` is present for `φ ∈ (0, 3/4)`, `EpsMinus` for `φ ∈ (1/4, 1)`.
pub fn singular_points(phi: f64) -> Result<Vec<SpectralPoint>> {
    if !(phi > 0.0 && phi < 1.0) {
        return Err(WalkError::PhaseOutOfOpenRange(phi));
    }
    let mut out = Vec::with_capacity(4);
    for case in [SingularCase::EpsPlus, SingularCase::EpsMinus] {
        if !case.active(phi) {
            continue;
        }
        let (se, ce) = case.angle(phi).sin_cos();
        let d = (3.0 - 2.0 * SQRT_2 * ce).sqrt();
        let (c0, s0) = (se / d, (ce - SQRT_2) / d);
        for (sign, k) in [(PointSign::Plus, 1.0), (PointSign::Minus, -1.0)] {
            let theta = polish((k * s0).atan2(k * c0), phi);
            let z = Complex64::from_polar(1.0, theta);
            let residual = big_lambda0(z, phi).norm();
            if residual > SINGULAR_POINT_TOL {
                return Err(WalkError::Domain(format!(
                    "{} point at phi = {phi} misses the zero of Lambda0 by {residual:e}",
                    case.label()
                )));
            }
            let residue_prefactor = residue_prefactor(theta).ok_or_else(|| {
                WalkError::Domain(format!("singular point theta = {theta} outside the band"))
            })?;
            out.push(SpectralPoint {
                theta_s: theta,
                cos_theta: theta.cos(),
                sin_theta: theta.sin(),
                case,
                sign,
                lambda_sq: lambda_tilde(z).norm_sqr(),
                residue_prefactor,
            });
        }
    }
    Ok(out)
}

/// Numerator of `Ξ̃₀(z)φ` before division by `Λ̃₀(z)`.
pub fn residue_numerator(z: Complex64, phi: f64, alpha: Complex64, beta: Complex64) -> Spinor {
    let h = phase(phi) * f_tilde(z) / SQRT_2;
    let one = Complex64::new(1.0, 0.0);
    [alpha * (one - h) - beta * h, alpha * h + beta * (one - h)]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidueNorm {
    pub point: SpectralPoint,
    /// `‖Res(Ξ̃₀(z)φ : e^{iθ_s})‖²`.
    pub norm: f64,
}

/// `‖Res(Ξ̃₀(z)φ : z = e^{iθ_s})‖²` at every singular point, evaluated as
/// `|numerator(e^{iθ_s})|²/(2|1 + φ̃′(θ_s)|²)`. Their sum is `μ̄_∞(0)`.
pub fn residue_norms_origin(phi: f64, alpha: Complex64, beta: Complex64) -> Result<Vec<ResidueNorm>> {
    Ok(singular_points(phi)?
        .into_iter()
        .map(|point| {
            let v = residue_numerator(point.z(), phi, alpha, beta);
            ResidueNorm {
                point,
                norm: (v[0].norm_sqr() + v[1].norm_sqr()) * point.residue_prefactor,
            }
        })
        .collect())
}

/// 2×2 complex matrix stored row-major.
pub type Matrix2 = [[Complex64; 2]; 2];

fn series_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let n = a.len().min(b.len());
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if *x == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn series_recip(a: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len()];
    out[0] = a[0].inv();
    for n in 1..a.len() {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 1..=n {
            acc += a[k] * out[n - k];
        }
        out[n] = -acc * out[0];
    }
    out
}

/// Coefficients `[z⁰], …, [z^order]` of
/// `Ξ̃₀(z) = Λ̃₀(z)⁻¹ [[1 − ωf̃/√2, −ωf̃/√2], [ωf̃/√2, 1 − ωf̃/√2]]`.
///
/// The `z^{2n}` coefficient applied to `ᵀ[α, β]` is `Ψ₂ₙ(0)`.
pub fn xi_tilde0_series(phi: f64, order: usize) -> Result<Vec<Matrix2>> {
    crate::walk::check_phase(phi)?;
    let w = phase(phi);
    // g = √2 f̃ = z² + 1 − √(1+z⁴) has rational coefficients
    let root = sqrt1z4_series(order).to_f64();
    let mut g: Vec<Complex64> = root.iter().map(|c| Complex64::new(-c, 0.0)).collect();
    g[0] += 1.0;
    if order >= 2 {
        g[2] += 1.0;
    }
    let half_wg: Vec<Complex64> = g.iter().map(|c| c * w / 2.0).collect();
    let wg: Vec<Complex64> = g.iter().map(|c| c * w).collect();
    // Λ̃₀ = 1 − ωg + (ωg)²/2
    let sq = series_mul(&wg, &wg);
    let mut lam: Vec<Complex64> = wg.iter().zip(&sq).map(|(a, b)| -a + b / 2.0).collect();
    lam[0] += 1.0;
    let inv = series_recip(&lam);
    let mut diag: Vec<Complex64> = half_wg.iter().map(|c| -c).collect();
    diag[0] += 1.0;
    let d = series_mul(&inv, &diag);
    let off = series_mul(&inv, &half_wg);
    Ok((0..=order)
        .map(|n| [[d[n], -off[n]], [off[n], d[n]]])
        .collect())
}
