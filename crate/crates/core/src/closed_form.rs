//! Closed-form limits: the return-probability limit `c(φ)`, the time-averaged
//! limit measure `μ̄_∞`, the asymptotic amplitude at the origin, the
//! stationary measure and an independent spelled-out form of `μ̄_∞(0)`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI, SQRT_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WalkError};
use crate::walk::{check_phase, phase, WalkParams};
use crate::Eta;

/// Relative spread above which a ratio profile is reported as non-constant.
pub const CONSTANCY_TOL: f64 = 1e-12;

/// Sites `|x| ≤ COMPARISON_RADIUS` used by [`compare_stationary_timeavg`].
pub const COMPARISON_RADIUS: i64 = 20;

const SIGN_TOL: f64 = 1e-14;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Trigonometric constants of the defect phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrigPack {
    pub c: f64,
    pub s: f64,
    /// `C + S`
    pub e_plus: f64,
    /// `C − S`
    pub e_minus: f64,
    /// `cos(2πφ + π/4)`, so that `√2·C₊ = E₋`
    pub c_plus: f64,
    /// `cos(2πφ − π/4)`, so that `√2·C₋ = E₊`
    pub c_minus: f64,
}

impl TrigPack {
    pub fn new(phi: f64) -> Self {
        let t = 2.0 * PI * phi;
        let (s, c) = t.sin_cos();
        Self {
            c,
            s,
            e_plus: c + s,
            e_minus: c - s,
            c_plus: (t + FRAC_PI_4).cos(),
            c_minus: (t - FRAC_PI_4).cos(),
        }
    }
}

fn in_lower(phi: f64) -> bool {
    phi > 0.0 && phi < 0.75
}

fn in_upper(phi: f64) -> bool {
    phi > 0.25 && phi < 1.0
}

/// `((1 − e)/(3 − 2e))²` with `e = √2C±`.
fn weight(e: f64) -> f64 {
    ((1.0 - e) / (3.0 - 2.0 * e)).powi(2)
}

/// The two branches of the limit measure at the origin: the `|α + iβ|²`
/// part living on `(0, 3/4)` and the `|α − iβ|²` part living on `(1/4, 1)`.
fn origin_branches(params: &WalkParams) -> (f64, f64) {
    let phi = params.phi();
    let t = TrigPack::new(phi);
    let (a, b) = (params.alpha(), params.beta());
    let first = if in_lower(phi) {
        weight(SQRT_2 * t.c_plus) * (a + I * b).norm_sqr()
    } else {
        0.0
    };
    let second = if in_upper(phi) {
        weight(SQRT_2 * t.c_minus) * (a - I * b).norm_sqr()
    } else {
        0.0
    };
    (first, second)
}

/// `lim r₂ₙ(0)` for the chiral preset `η`.
pub fn c_phi(phi: f64, eta: Eta) -> Result<f64> {
    check_phase(phi)?;
    let t = TrigPack::new(phi);
    Ok(match eta {
        Eta::Plus if in_upper(phi) => 4.0 * weight(SQRT_2 * t.c_minus),
        Eta::Minus if in_lower(phi) => 4.0 * weight(SQRT_2 * t.c_plus),
        _ => 0.0,
    })
}

/// `μ̄_∞(0)`.
pub fn mu_inf_origin(params: &WalkParams) -> f64 {
    let (first, second) = origin_branches(params);
    first + second
}

/// `μ̄_∞(x)` for every site.
pub fn mu_inf(x: i64, params: &WalkParams) -> f64 {
    let (first, second) = origin_branches(params);
    if x == 0 {
        return first + second;
    }
    let t = TrigPack::new(params.phi());
    let k = x.unsigned_abs() as i32;
    let side = |e: f64, mass: f64| {
        if mass == 0.0 {
            0.0
        } else {
            (2.0 - e) * (3.0 - 2.0 * e).powi(-k) * mass
        }
    };
    side(SQRT_2 * t.c_plus, first) + side(SQRT_2 * t.c_minus, second)
}

/// `Σₓ μ̄_∞(x)` by summing the two geometric tails in closed form.
pub fn total_point_mass(params: &WalkParams) -> Result<f64> {
    let (first, second) = origin_branches(params);
    let t = TrigPack::new(params.phi());
    let mut total = 0.0;
    for (e, mass) in [(SQRT_2 * t.c_plus, first), (SQRT_2 * t.c_minus, second)] {
        if mass == 0.0 {
            continue;
        }
        let rate = 1.0 / (3.0 - 2.0 * e);
        if !(0.0..1.0).contains(&rate) {
            return Err(WalkError::BoundaryParameter(rate));
        }
        total += mass * (1.0 + 2.0 * (2.0 - e) * rate / (1.0 - rate));
    }
    Ok(total)
}

/// Unit-modulus root `e^{iθ₀}` of `1 + 2(1−E)²/(3−2E)·w + w² = 0` with
/// nonnegative imaginary part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Theta0 {
    pub e: f64,
    pub cos0: f64,
    pub sin0: f64,
}

impl Theta0 {
    pub fn angle(&self) -> f64 {
        self.sin0.atan2(self.cos0)
    }
}

/// `cos θ₀ = −(1−E)²/(3−2E)`, `sin θ₀ = (2−E)√(2−E²)/(3−2E)`, for `|E| ≤ √2`.
pub fn theta0(e: f64) -> Result<Theta0> {
    let slack = 2.0 - e * e;
    if !e.is_finite() || slack < -1e-12 {
        return Err(WalkError::Domain(format!(
            "theta0 needs |E| <= sqrt(2), got E = {e}"
        )));
    }
    let den = 3.0 - 2.0 * e;
    let cos0 = -(1.0 - e).powi(2) / den;
    let sin0 = (2.0 - e) * slack.max(0.0).sqrt() / den;
    assert!(
        (cos0 * cos0 + sin0 * sin0 - 1.0).abs() <= 1e-12,
        "theta0 off the unit circle at E = {e}"
    );
    Ok(Theta0 { e, cos0, sin0 })
}

/// Leading-order `Ψ₂ₙ(0)` split into real and imaginary parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticComponents {
    pub l_re: f64,
    pub l_im: f64,
    pub r_re: f64,
    pub r_im: f64,
}

impl AsymptoticComponents {
    pub fn as_array(&self) -> [f64; 4] {
        [self.l_re, self.l_im, self.r_re, self.r_im]
    }
}

fn sign_or_zero(v: f64) -> f64 {
    if v.abs() < SIGN_TOL {
        0.0
    } else {
        v.signum()
    }
}

/// Non-decaying part of `Ψ₂ₙ(0)`:
///
/// `Ψᴸ ~ (α−iβ)K₊e^{iσ₊nθ₀(E₊)} + (α+iβ)K₋e^{iσ₋nθ₀(E₋)}`,
/// `Ψᴿ ~ i(α−iβ)K₊e^{iσ₊nθ₀(E₊)} − i(α+iβ)K₋e^{iσ₋nθ₀(E₋)}`,
///
/// with `K± = (1−E±)/(3−2E±)` restricted to `(1/4, 1)` and `(0, 3/4)`,
/// `σ₊ = sgn(S−C)` and `σ₋ = sgn(S+C)`.
pub fn asymptotic_psi_origin(n: usize, params: &WalkParams) -> Result<AsymptoticComponents> {
    let phi = params.phi();
    let t = TrigPack::new(phi);
    let (a, b) = (params.alpha(), params.beta());
    let nf = n as f64;

    let mut upper = Complex64::new(0.0, 0.0);
    if in_upper(phi) {
        let th = theta0(t.e_plus)?;
        let k = (1.0 - t.e_plus) / (3.0 - 2.0 * t.e_plus);
        let sigma = sign_or_zero(t.s - t.c);
        upper = (a - I * b) * k * Complex64::new((nf * th.angle()).cos(), sigma * (nf * th.angle()).sin());
    }
    let mut lower = Complex64::new(0.0, 0.0);
    if in_lower(phi) {
        let th = theta0(t.e_minus)?;
        let k = (1.0 - t.e_minus) / (3.0 - 2.0 * t.e_minus);
        let sigma = sign_or_zero(t.s + t.c);
        lower = (a + I * b) * k * Complex64::new((nf * th.angle()).cos(), sigma * (nf * th.angle()).sin());
    }
    let l = upper + lower;
    let r = I * (upper - lower);
    Ok(AsymptoticComponents {
        l_re: l.re,
        l_im: l.im,
        r_re: r.re,
        r_im: r.im,
    })
}

/// Eigenvector family: `Plus` has `β = iα`, `Minus` has `β = −iα`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StationaryBranch {
    Plus,
    Minus,
}

impl StationaryBranch {
    pub fn label(self) -> &'static str {
        match self {
            StationaryBranch::Plus => "plus",
            StationaryBranch::Minus => "minus",
        }
    }

    /// The chiral preset lying in this family.
    pub fn preset(self) -> Eta {
        match self {
            StationaryBranch::Plus => Eta::Plus,
            StationaryBranch::Minus => Eta::Minus,
        }
    }

    /// `(Γ(φ), |θ_s|²)`.
    fn profile(self, phi: f64) -> (f64, f64) {
        let t = TrigPack::new(phi);
        let e = match self {
            StationaryBranch::Plus => t.e_plus,
            StationaryBranch::Minus => t.e_minus,
        };
        (2.0 - e, 1.0 / (3.0 - 2.0 * e))
    }

    /// Whether the time-averaged limit of this family's preset is nonzero.
    pub fn localized(self, phi: f64) -> bool {
        match self {
            StationaryBranch::Plus => in_upper(phi),
            StationaryBranch::Minus => in_lower(phi),
        }
    }
}

/// Stationary measure of the exponentially decaying eigenvector:
/// `2|α|²` at the origin and `2|α|²Γ(φ)|θ_s|^{2|x|}` elsewhere.
pub fn stationary_measure(
    x: i64,
    phi: f64,
    alpha_mod2: f64,
    branch: StationaryBranch,
) -> Result<f64> {
    if !(phi > 0.0 && phi < 1.0) {
        return Err(WalkError::PhaseOutOfOpenRange(phi));
    }
    if !(alpha_mod2 > 0.0 && alpha_mod2.is_finite()) {
        return Err(WalkError::Domain(format!(
            "|alpha|^2 must be positive, got {alpha_mod2}"
        )));
    }
    let base = 2.0 * alpha_mod2;
    if x == 0 {
        return Ok(base);
    }
    let (gamma, rate) = branch.profile(phi);
    Ok(base * gamma * rate.powi(x.unsigned_abs() as i32))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationaryComparison {
    pub phi: f64,
    pub limit_branch: StationaryBranch,
    pub stationary_branch: StationaryBranch,
    /// `(x, μ̄_∞(x)/μ(x))` over `|x| ≤ COMPARISON_RADIUS`.
    pub ratios: Vec<(i64, f64)>,
    /// Ratio at the origin.
    pub ratio: f64,
    /// `2(1−√2C∓)²/(3−2√2C∓)²`, the `|c|²` at which the two measures coincide.
    pub c_sq: f64,
    /// Largest `|ratio(x)/ratio(0) − 1|`.
    pub max_relative_spread: f64,
    pub constant: bool,
}

/// Divides the limit measure of `limit_branch`'s preset by the stationary
/// measure of `stationary_branch` (with `|α|² = 1/2`). Matching branches give
/// a constant ratio; crossing them is a negative control.
pub fn compare_branches(
    phi: f64,
    limit_branch: StationaryBranch,
    stationary_branch: StationaryBranch,
) -> Result<StationaryComparison> {
    let params = WalkParams::preset(phi, limit_branch.preset())?;
    if !limit_branch.localized(phi) || mu_inf_origin(&params) == 0.0 {
        return Err(WalkError::Degenerate(format!(
            "branch {} has no localized mass at phi = {phi}",
            limit_branch.label()
        )));
    }
    let mut ratios = Vec::with_capacity(2 * COMPARISON_RADIUS as usize + 1);
    for x in -COMPARISON_RADIUS..=COMPARISON_RADIUS {
        let stat = stationary_measure(x, phi, 0.5, stationary_branch)?;
        ratios.push((x, mu_inf(x, &params) / stat));
    }
    let ratio = mu_inf(0, &params) / stationary_measure(0, phi, 0.5, stationary_branch)?;
    let max_relative_spread = ratios
        .iter()
        .map(|&(_, r)| (r / ratio - 1.0).abs())
        .fold(0.0, f64::max);
    let t = TrigPack::new(phi);
    let e = match limit_branch {
        StationaryBranch::Plus => SQRT_2 * t.c_minus,
        StationaryBranch::Minus => SQRT_2 * t.c_plus,
    };
    Ok(StationaryComparison {
        phi,
        limit_branch,
        stationary_branch,
        ratios,
        ratio,
        c_sq: 2.0 * weight(e),
        max_relative_spread,
        constant: max_relative_spread <= CONSTANCY_TOL,
    })
}

pub fn compare_stationary_timeavg(phi: f64, branch: StationaryBranch) -> Result<StationaryComparison> {
    compare_branches(phi, branch, branch)
}

/// `μ̄_∞(0)` assembled from the spectral-measure data of the walk's CMV
/// representation: `a = (i/√2)e^{−2πiφ}`, `b = i/√2`, `ρ_a = ρ_b = 1/√2`,
/// eigenvalues `ζ± = ±1/√2 + i/√2` and transformed state `(α, iωβ)`.
pub fn cgmv_limit_origin(params: &WalkParams) -> Result<f64> {
    let phi = params.phi();
    if !(phi > 0.0 && phi < 1.0) {
        return Err(WalkError::PhaseOutOfOpenRange(phi));
    }
    let w = phase(phi);
    let a = Complex64::new(0.0, FRAC_1_SQRT_2) * w.conj();
    let b = Complex64::new(0.0, FRAC_1_SQRT_2);
    let (rho_a, rho_b) = (FRAC_1_SQRT_2, FRAC_1_SQRT_2);
    let ah = params.alpha();
    let bh = I * w * params.beta();
    let tilt = ((ah.norm_sqr() - bh.norm_sqr()) * b.re + 2.0 * rho_b * ((w * ah).conj() * bh).re)
        / (1.0 - b.im * b.im).sqrt();

    let branch = |zeta: Complex64, sign: f64| {
        let pull = 1.0 - rho_a * rho_a / (zeta - a).norm_sqr();
        0.5 * pull * pull * (1.0 - sign * tilt)
    };
    let mut total = 0.0;
    if in_upper(phi) {
        total += branch(Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2), 1.0);
    }
    if in_lower(phi) {
        total += branch(Complex64::new(-FRAC_1_SQRT_2, FRAC_1_SQRT_2), -1.0);
    }
    Ok(0.5 * total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(phi: f64, a: (f64, f64), b: (f64, f64)) -> WalkParams {
        WalkParams::normalized(phi, Complex64::new(a.0, a.1), Complex64::new(b.0, b.1)).unwrap()
    }

    #[test]
    fn trig_pack_notations_agree() {
        for k in 0..100 {
            let t = TrigPack::new(k as f64 / 100.0);
            assert!((SQRT_2 * t.c_plus - t.e_minus).abs() < 1e-14);
            assert!((SQRT_2 * t.c_minus - t.e_plus).abs() < 1e-14);
        }
    }

    #[test]
    fn c_phi_values() {
        assert_eq!(c_phi(0.2, Eta::Plus).unwrap(), 0.0);
        assert!((c_phi(0.5, Eta::Plus).unwrap() - 16.0 / 25.0).abs() < 1e-15);
        assert_eq!(c_phi(0.875, Eta::Minus).unwrap(), 0.0);
        assert_eq!(c_phi(0.0, Eta::Plus).unwrap(), 0.0);
        assert_eq!(c_phi(0.0, Eta::Minus).unwrap(), 0.0);
        assert!(c_phi(1.0, Eta::Plus).is_err());
    }

    #[test]
    fn origin_values() {
        let p = WalkParams::preset(0.5, Eta::Plus).unwrap();
        assert!((mu_inf_origin(&p) - 8.0 / 25.0).abs() < 1e-15);
        // halves c(φ) for presets
        for phi in [0.1, 0.3, 0.5, 0.7, 0.9] {
            for eta in [Eta::Plus, Eta::Minus] {
                let p = WalkParams::preset(phi, eta).unwrap();
                assert!((2.0 * mu_inf_origin(&p) - c_phi(phi, eta).unwrap()).abs() < 1e-15);
            }
        }
        let r = FRAC_1_SQRT_2;
        assert_eq!(mu_inf_origin(&state(0.875, (0.0, r), (r, 0.0))), 0.0);
        // α = −iβ, i.e. β = iα
        assert_eq!(mu_inf_origin(&state(0.2, (r, 0.0), (0.0, r))), 0.0);
    }

    #[test]
    fn limit_measure_values() {
        let p = WalkParams::preset(0.5, Eta::Plus).unwrap();
        assert!((mu_inf(1, &p) - 24.0 / 125.0).abs() < 1e-15);
        assert!((mu_inf(-1, &p) - 24.0 / 125.0).abs() < 1e-15);
        assert_eq!(mu_inf(0, &p), mu_inf_origin(&p));
        assert_eq!(mu_inf(4, &p), mu_inf(-4, &p));
        assert!((total_point_mass(&p).unwrap() - 0.8).abs() < 1e-14);
        let r = FRAC_1_SQRT_2;
        assert_eq!(total_point_mass(&state(0.875, (0.0, r), (r, 0.0))).unwrap(), 0.0);
    }

    #[test]
    fn total_mass_matches_direct_sum() {
        let p = state(0.37, (0.6, 0.1), (0.3, -0.7));
        let direct: f64 = (-400..=400).map(|x| mu_inf(x, &p)).sum();
        let closed = total_point_mass(&p).unwrap();
        assert!((direct - closed).abs() < 1e-13);
        assert!(closed <= 1.0 + 1e-12);
    }

    #[test]
    fn theta0_values() {
        let t = theta0(-1.0).unwrap();
        assert!((t.cos0 + 0.8).abs() < 1e-15 && (t.sin0 - 0.6).abs() < 1e-15);
        let t = theta0(0.0).unwrap();
        assert!((t.cos0 + 1.0 / 3.0).abs() < 1e-15);
        // root of 1 + 2q w + w² with q = (1−E)²/(3−2E)
        for e in [-1.4, -0.7, 0.2, 0.9, 1.4] {
            let t = theta0(e).unwrap();
            let q = (1.0 - e).powi(2) / (3.0 - 2.0 * e);
            let w = Complex64::new(t.cos0, t.sin0);
            assert!((1.0 + 2.0 * q * w + w * w).norm() < 1e-12);
            assert!(t.sin0 >= 0.0);
        }
        assert!(theta0(1.5).is_err());
        assert!(theta0(f64::NAN).is_err());
    }

    #[test]
    fn asymptotics_preset_form() {
        let p = WalkParams::preset(0.5, Eta::Plus).unwrap();
        let th = theta0(-1.0).unwrap().angle();
        for n in [1, 7, 50] {
            let a = asymptotic_psi_origin(n, &p).unwrap();
            let expect = SQRT_2 * 0.4 * (n as f64 * th).cos();
            assert!((a.l_re - expect).abs() < 1e-14);
        }
        let p = WalkParams::preset(0.2, Eta::Plus).unwrap();
        let a = asymptotic_psi_origin(10, &p).unwrap();
        assert!(a.as_array().iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn asymptotic_norm_averages_to_c() {
        for phi in [0.3, 0.5, 0.6] {
            let p = state(phi, (0.8, 0.0), (0.0, 0.6));
            let n = 20_000;
            let avg: f64 = (0..n)
                .map(|k| {
                    let a = asymptotic_psi_origin(k, &p).unwrap().as_array();
                    a.iter().map(|v| v * v).sum::<f64>()
                })
                .sum::<f64>()
                / n as f64;
            assert!((avg - 2.0 * mu_inf_origin(&p)).abs() < 1e-3, "phi {phi}: {avg}");
        }
    }

    #[test]
    fn stationary_values() {
        assert_eq!(stationary_measure(0, 0.3, 0.5, StationaryBranch::Minus).unwrap(), 1.0);
        let v = stationary_measure(1, 0.5, 0.5, StationaryBranch::Plus).unwrap();
        assert!((v - 0.6).abs() < 1e-15);
        assert_eq!(
            stationary_measure(2, 0.4, 0.5, StationaryBranch::Plus).unwrap(),
            stationary_measure(-2, 0.4, 0.5, StationaryBranch::Plus).unwrap()
        );
        assert!(stationary_measure(1, 0.0, 0.5, StationaryBranch::Plus).is_err());
        assert!(stationary_measure(1, 0.5, 0.0, StationaryBranch::Plus).is_err());
    }

    #[test]
    fn stationary_comparison() {
        let r = compare_stationary_timeavg(0.5, StationaryBranch::Plus).unwrap();
        assert!(r.constant);
        assert!((r.c_sq - 8.0 / 25.0).abs() < 1e-15);
        assert!((r.ratio - r.c_sq).abs() < 1e-15);
        let r = compare_stationary_timeavg(0.3, StationaryBranch::Minus).unwrap();
        assert!(r.constant && (r.ratio - r.c_sq).abs() < 1e-15);
        // at φ = 1/2 both families share one decay rate, so cross elsewhere
        let crossed = compare_branches(0.4, StationaryBranch::Plus, StationaryBranch::Minus).unwrap();
        assert!(!crossed.constant);
        assert!(matches!(
            compare_stationary_timeavg(0.2, StationaryBranch::Plus),
            Err(WalkError::Degenerate(_))
        ));
    }

    #[test]
    fn cgmv_agrees() {
        for phi in [0.05, 0.3, 0.5, 0.6, 0.8, 0.95] {
            for p in [
                WalkParams::preset(phi, Eta::Plus).unwrap(),
                WalkParams::preset(phi, Eta::Minus).unwrap(),
                state(phi, (1.0, 0.0), (0.0, 0.0)),
                state(phi, (0.3, -0.2), (0.5, 0.77)),
            ] {
                let d = (cgmv_limit_origin(&p).unwrap() - mu_inf_origin(&p)).abs();
                assert!(d < 1e-14, "phi {phi}: {d}");
            }
        }
        let p = state(0.5, (1.0, 0.0), (0.0, 0.0));
        assert!((cgmv_limit_origin(&p).unwrap() - 8.0 / 25.0).abs() < 1e-15);
        assert!(cgmv_limit_origin(&WalkParams::preset(0.2, Eta::Plus).unwrap()).unwrap().abs() < 1e-15);
    }
}
