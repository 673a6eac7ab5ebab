#![allow(dead_code)]

use std::f64::consts::FRAC_1_SQRT_2;

use defect_walk::walk::WalkParams;
use defect_walk::{Complex64, Eta};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Uniform-ish random coin states from a fixed seed.
pub fn random_states(phi: f64, count: usize, seed: u64) -> Vec<WalkParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let v: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
            WalkParams::normalized(phi, c(v[0], v[1]), c(v[2], v[3])).unwrap()
        })
        .collect()
}

/// η presets, up spin and one random state.
pub fn state_zoo(phi: f64, seed: u64) -> Vec<WalkParams> {
    let mut out = vec![
        WalkParams::preset(phi, Eta::Plus).unwrap(),
        WalkParams::preset(phi, Eta::Minus).unwrap(),
        WalkParams::new(phi, c(1.0, 0.0), c(0.0, 0.0)).unwrap(),
    ];
    out.extend(random_states(phi, 1, seed));
    out
}

/// `α = iβ`: `ᵀ[i/√2, 1/√2]`.
pub fn alpha_eq_i_beta(phi: f64) -> WalkParams {
    WalkParams::new(phi, c(0.0, FRAC_1_SQRT_2), c(FRAC_1_SQRT_2, 0.0)).unwrap()
}

/// `α = −iβ`, i.e. `β = iα`: `ᵀ[1/√2, i/√2]`.
pub fn alpha_eq_minus_i_beta(phi: f64) -> WalkParams {
    WalkParams::new(phi, c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2)).unwrap()
}

pub fn spinor_dist(a: &[Complex64; 2], b: &[Complex64; 2]) -> f64 {
    ((a[0] - b[0]).norm_sqr() + (a[1] - b[1]).norm_sqr()).sqrt()
}
