mod common;

use std::f64::consts::FRAC_1_SQRT_2;

use common::{c, random_states, spinor_dist, state_zoo};
use defect_walk::series::{
    first_return_s_series, first_return_series, path_oracle_first_return, psi_origin,
    psi_origin_sequence, rstar, rstar_series, xi_star, PATH_ENUMERATION_MAX,
};
use defect_walk::spectral::xi_tilde0_series;
use defect_walk::walk::{coin_at, evolve, phase, Unitary2, WalkParams};
use defect_walk::{Complex64, Eta};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

type M = [[Complex64; 2]; 2];

#[test]
fn rstar_three_ways() {
    let gf = rstar_series(PATH_ENUMERATION_MAX);
    for n in 1..=PATH_ENUMERATION_MAX {
        let closed = rstar(n).unwrap();
        let paths = path_oracle_first_return(n).unwrap();
        let from_paths = &paths.r - &paths.p;
        assert_eq!(closed, gf.coeff(n), "closed form vs series at n = {n}");
        assert_eq!(closed, from_paths, "closed form vs paths at n = {n}");
    }
    assert_eq!(rstar(7).unwrap(), BigRational::new(BigInt::from(-1), BigInt::from(8)));
}

#[test]
fn first_return_series_matches_paths() {
    let r = first_return_series(PATH_ENUMERATION_MAX);
    let s = first_return_s_series(PATH_ENUMERATION_MAX);
    for n in 1..=PATH_ENUMERATION_MAX {
        let paths = path_oracle_first_return(n).unwrap();
        assert_eq!(paths.r, r.coeff(n), "n = {n}");
        assert_eq!(s.coeff(n), -r.coeff(n));
        let p_expected = if n == 1 { BigRational::from_integer(1.into()) } else { BigRational::zero() };
        assert_eq!(paths.p, p_expected);
        assert!(paths.q.is_zero() && paths.s.is_zero());
    }
}

fn mat_mul(a: &M, b: &M) -> M {
    let mut out = [[c(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn blocks(u: &Unitary2) -> (M, M) {
    let z = c(0.0, 0.0);
    ([[u.a, u.b], [z, z]], [[z, z], [u.c, u.d]])
}

/// Sum over every walk from 0 that first comes back to 0 at time `n`, with
/// the actual site coins.
fn first_return_full_line(n: usize, phi: f64) -> M {
    fn go(pos: i64, left: usize, prod: M, phi: f64, acc: &mut M) {
        if left == 0 {
            if pos == 0 {
                for i in 0..2 {
                    for j in 0..2 {
                        acc[i][j] += prod[i][j];
                    }
                }
            }
            return;
        }
        if pos.unsigned_abs() as usize > left {
            return;
        }
        let (p, q) = blocks(&coin_at(pos, phi).unwrap());
        for (next, b) in [(pos - 1, p), (pos + 1, q)] {
            if next == 0 && left > 1 {
                continue;
            }
            go(next, left - 1, mat_mul(&b, &prod), phi, acc);
        }
    }
    let mut acc = [[c(0.0, 0.0); 2]; 2];
    let (p, q) = blocks(&coin_at(0, phi).unwrap());
    if n >= 1 {
        go(-1, n - 1, p, phi, &mut acc);
        go(1, n - 1, q, phi, &mut acc);
    }
    acc
}

#[test]
fn xi_star_matches_full_line_enumeration() {
    for phi in [0.0, 0.13, 0.5, 0.77] {
        for n in 2..=16 {
            let brute = first_return_full_line(n, phi);
            let xi = xi_star(n, phi).unwrap();
            for (b, x) in brute.iter().flatten().zip(xi.entries.iter().flatten()) {
                assert!((b - x).norm() < 1e-13, "phi {phi} n {n}");
            }
        }
    }
}

#[test]
fn renewal_reproduces_evolution() {
    let mut worst: f64 = 0.0;
    for phi in [0.125, 1.0 / 3.0, 0.5, 0.9] {
        let mut states = random_states(phi, 3, 11);
        states.push(WalkParams::preset(phi, Eta::Plus).unwrap());
        states.push(WalkParams::preset(phi, Eta::Minus).unwrap());
        for p in &states {
            let seq = psi_origin_sequence(100, p);
            for (n, psi) in seq.iter().enumerate() {
                worst = worst.max(spinor_dist(psi, &evolve(p, 2 * n).amplitude(0)));
            }
        }
    }
    assert!(worst <= 1e-10, "worst {worst:e}");
}

#[test]
fn first_renewal_term() {
    // Ψ₂(0) = (ω/2)ᵀ[α − β, α + β]
    for p in state_zoo(0.3, 5) {
        let w = p.omega() * 0.5;
        let expect = [w * (p.alpha() - p.beta()), w * (p.alpha() + p.beta())];
        assert!(spinor_dist(&psi_origin(1, &p), &expect) < 1e-15);
    }
    // η = 1: (1/√2)·(−1)·(ω(−1+i)/2)·ᵀ[1, i]
    let p = WalkParams::preset(0.3, Eta::Plus).unwrap();
    let k = -phase(0.3) * c(-1.0, 1.0) * (FRAC_1_SQRT_2 / 2.0);
    let expect = [k, k * c(0.0, 1.0)];
    assert!(spinor_dist(&psi_origin(1, &p), &expect) < 1e-15);
    assert!(spinor_dist(&psi_origin(2, &p), &evolve(&p, 4).amplitude(0)) < 1e-12);
}

#[test]
fn preset_amplitude_stays_on_the_eigenvector() {
    // for ᵀ[1, ηi] the renewal matrix acts as the scalar −1 + ηi, so Ψ₂ₙ(0) is
    // a scalar sequence s with s₀ = 1/√2 and s_k = Σ_a (ω r*_{2a−1}/2)(−1+ηi) s_{k−a}
    let n = 80;
    for phi in [0.2, 0.45, 0.9] {
        for eta in [Eta::Plus, Eta::Minus] {
            let p = WalkParams::preset(phi, eta).unwrap();
            let lam = c(-1.0, eta.value());
            let rs = rstar_series(2 * n).to_f64();
            let mut s = vec![c(FRAC_1_SQRT_2, 0.0)];
            for k in 1..=n {
                let v: Complex64 = (1..=k)
                    .map(|a| p.omega() * (rs[2 * a - 1] / 2.0) * lam * s[k - a])
                    .sum();
                s.push(v);
            }
            let seq = psi_origin_sequence(n, &p);
            for k in 0..=n {
                let expect = [s[k], s[k] * c(0.0, eta.value())];
                assert!(spinor_dist(&seq[k], &expect) < 1e-12, "phi {phi} k {k}");
            }
        }
    }
}

#[test]
fn generating_function_expansion_matches_renewal() {
    for phi in [0.0, 0.3, 0.5, 0.85] {
        let coeffs = xi_tilde0_series(phi, 80).unwrap();
        for p in state_zoo(phi, 9) {
            let seq = psi_origin_sequence(40, &p);
            for (n, psi) in seq.iter().enumerate() {
                let m = &coeffs[2 * n];
                let v = [
                    m[0][0] * p.alpha() + m[0][1] * p.beta(),
                    m[1][0] * p.alpha() + m[1][1] * p.beta(),
                ];
                assert!(spinor_dist(&v, psi) < 1e-10, "phi {phi} n {n}");
            }
        }
        for k in (1..80).step_by(2) {
            assert!(coeffs[k].iter().flatten().all(|z| z.norm() < 1e-14));
        }
    }
}
