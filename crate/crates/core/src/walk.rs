//! Unitary evolution of the defect walk and its empirical measures.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use crate::error::{Result, WalkError};
use crate::Eta;

/// Tolerance on `|α|² + |β|² = 1` accepted by [`WalkParams::new`].
pub const NORMALIZATION_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Two chirality components `(Ψᴸ(x), Ψᴿ(x))` at one site.
pub type Spinor = [Complex64; 2];

/// `e^{2πiφ}`.
pub fn phase(phi: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * phi)
}

pub(crate) fn check_phase(phi: f64) -> Result<()> {
    if (0.0..1.0).contains(&phi) {
        Ok(())
    } else {
        Err(WalkError::PhaseOutOfRange(phi))
    }
}

/// Defect phase and initial coin state of a walk started at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkParams {
    phi: f64,
    alpha: Complex64,
    beta: Complex64,
    omega: Complex64,
}

impl WalkParams {
    pub fn new(phi: f64, alpha: Complex64, beta: Complex64) -> Result<Self> {
        check_phase(phi)?;
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if !norm.is_finite() || (norm - 1.0).abs() > NORMALIZATION_TOL {
            return Err(WalkError::NotNormalized(norm));
        }
        Ok(Self {
            phi,
            alpha,
            beta,
            omega: phase(phi),
        })
    }

    /// Rescales `(α, β)` to unit norm before validating.
    pub fn normalized(phi: f64, alpha: Complex64, beta: Complex64) -> Result<Self> {
        let norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(WalkError::NotNormalized(norm * norm));
        }
        Self::new(phi, alpha / norm, beta / norm)
    }

    /// The chiral preset `ᵀ[1/√2, ηi/√2]`.
    pub fn preset(phi: f64, eta: Eta) -> Result<Self> {
        Self::new(
            phi,
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::new(0.0, eta.value() * FRAC_1_SQRT_2),
        )
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    /// `ω = e^{2πiφ}`, computed once at construction.
    pub fn omega(&self) -> Complex64 {
        self.omega
    }

    pub fn coin_state(&self) -> Spinor {
        [self.alpha, self.beta]
    }

    /// Same walk with the initial state multiplied by `e^{iχ}`.
    pub fn with_global_phase(&self, chi: f64) -> Self {
        let g = Complex64::from_polar(1.0, chi);
        Self {
            alpha: self.alpha * g,
            beta: self.beta * g,
            ..*self
        }
    }
}

/// A 2×2 complex matrix `[[a, b], [c, d]]`, used for the site coins.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary2 {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl Unitary2 {
    pub fn hadamard() -> Self {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Self { a: h, b: h, c: h, d: -h }
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self {
            a: self.a * s,
            b: self.b * s,
            c: self.c * s,
            d: self.d * s,
        }
    }

    pub fn apply(&self, v: &Spinor) -> Spinor {
        [self.a * v[0] + self.b * v[1], self.c * v[0] + self.d * v[1]]
    }

    /// Largest entry of `|U†U − I|`.
    pub fn unitarity_defect(&self) -> f64 {
        let m00 = self.a.norm_sqr() + self.c.norm_sqr() - 1.0;
        let m11 = self.b.norm_sqr() + self.d.norm_sqr() - 1.0;
        let m01 = self.a.conj() * self.b + self.c.conj() * self.d;
        m00.abs().max(m11.abs()).max(m01.norm())
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    /// Left-moving part `P = [[a, b], [0, 0]]`.
    pub fn p_part(&self) -> Self {
        Self { c: ZERO, d: ZERO, ..*self }
    }

    /// Right-moving part `Q = [[0, 0], [c, d]]`.
    pub fn q_part(&self) -> Self {
        Self { a: ZERO, b: ZERO, ..*self }
    }
}

/// Coin at site `x`: `H` away from the origin, `e^{2πiφ}H` at the origin.
pub fn coin_at(x: i64, phi: f64) -> Result<Unitary2> {
    check_phase(phi)?;
    let h = Unitary2::hadamard();
    Ok(if x == 0 { h.scaled(phase(phi)) } else { h })
}

/// Amplitudes `Ψₙ` on the interval `[offset, offset + amps.len())`.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    pub offset: i64,
    pub amps: Vec<Spinor>,
    pub time: usize,
}

impl WalkState {
    /// `δ₀ ⊗ ᵀ[α, β]`.
    pub fn initial(params: &WalkParams) -> Self {
        Self {
            offset: 0,
            amps: vec![params.coin_state()],
            time: 0,
        }
    }

    pub fn amplitude(&self, x: i64) -> Spinor {
        usize::try_from(x - self.offset)
            .ok()
            .and_then(|i| self.amps.get(i).copied())
            .unwrap_or([ZERO; 2])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps
            .iter()
            .map(|s| s[0].norm_sqr() + s[1].norm_sqr())
            .sum()
    }

    /// Inclusive range of sites held by the state.
    pub fn support(&self) -> (i64, i64) {
        (self.offset, self.offset + self.amps.len() as i64 - 1)
    }

    /// `μₙ(x) = |Ψᴸ(x)|² + |Ψᴿ(x)|²`.
    pub fn measure(&self) -> Measure {
        Measure {
            offset: self.offset,
            values: self
                .amps
                .iter()
                .map(|s| s[0].norm_sqr() + s[1].norm_sqr())
                .collect(),
        }
    }
}

/// Nonnegative weights on `[offset, offset + values.len())`.
#[derive(Debug, Clone, PartialEq)]
pub struct Measure {
    pub offset: i64,
    pub values: Vec<f64>,
}

impl Measure {
    pub fn get(&self, x: i64) -> f64 {
        usize::try_from(x - self.offset)
            .ok()
            .and_then(|i| self.values.get(i).copied())
            .unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (self.offset + i as i64, v))
    }
}

/// One application of `Ψₙ₊₁(x) = P_{x+1}Ψₙ(x+1) + Q_{x−1}Ψₙ(x−1)`.
pub fn step(state: &WalkState, params: &WalkParams) -> WalkState {
    let mut next = WalkState {
        offset: 0,
        amps: Vec::new(),
        time: 0,
    };
    step_into(state, params, &mut next);
    next
}

fn step_into(state: &WalkState, params: &WalkParams, next: &mut WalkState) {
    let h = Unitary2::hadamard();
    let h0 = h.scaled(params.omega);
    next.offset = state.offset - 1;
    next.time = state.time + 1;
    next.amps.clear();
    next.amps.resize(state.amps.len() + 2, [ZERO; 2]);
    for (i, psi) in state.amps.iter().enumerate() {
        let x = state.offset + i as i64;
        let coin = if x == 0 { &h0 } else { &h };
        let out = coin.apply(psi);
        // site x sits at index i + 1 of `next`
        next.amps[i][0] += out[0];
        next.amps[i + 2][1] += out[1];
    }
}

/// `Ψₙ` for the walk started at the origin.
pub fn evolve(params: &WalkParams, n: usize) -> WalkState {
    let mut state = WalkState::initial(params);
    let mut scratch = state.clone();
    for _ in 0..n {
        step_into(&state, params, &mut scratch);
        std::mem::swap(&mut state, &mut scratch);
    }
    state
}

/// `rₙ(0) = P(Xₙ = 0)`.
pub fn return_probability(params: &WalkParams, n: usize) -> f64 {
    if n % 2 == 1 {
        return 0.0;
    }
    evolve(params, n).measure().get(0)
}

/// Calls `f(n, Ψₙ)` for `n = 0..steps` while evolving once.
pub fn for_each_state<F>(params: &WalkParams, steps: usize, mut f: F)
where
    F: FnMut(usize, &WalkState),
{
    if steps == 0 {
        return;
    }
    let mut state = WalkState::initial(params);
    let mut scratch = state.clone();
    f(0, &state);
    for n in 1..steps {
        step_into(&state, params, &mut scratch);
        std::mem::swap(&mut state, &mut scratch);
        f(n, &state);
    }
}

/// `μ̄_T(x) = (1/T) Σ_{n=0}^{T−1} μₙ(x)` on `|x| ≤ xmax`.
pub fn time_average(params: &WalkParams, t: usize, xmax: usize) -> Result<Measure> {
    if t == 0 {
        return Err(WalkError::Domain("time average needs T >= 1".into()));
    }
    let xmax = xmax as i64;
    let mut sums = vec![0.0f64; 2 * xmax as usize + 1];
    for_each_state(params, t, |_, state| {
        let (lo, hi) = state.support();
        for x in lo.max(-xmax)..=hi.min(xmax) {
            let s = state.amps[(x - state.offset) as usize];
            sums[(x + xmax) as usize] += s[0].norm_sqr() + s[1].norm_sqr();
        }
    });
    let inv = 1.0 / t as f64;
    Ok(Measure {
        offset: -xmax,
        values: sums.into_iter().map(|s| s * inv).collect(),
    })
}
