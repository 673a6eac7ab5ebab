mod common;

use common::c;
use defect_walk::walk::{coin_at, evolve, for_each_state, step, WalkParams, WalkState};
use defect_walk::Eta;
use proptest::prelude::*;

fn params() -> impl Strategy<Value = WalkParams> {
    (0.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64)
        .prop_filter("nonzero state", |(_, a, b, c_, d)| a * a + b * b + c_ * c_ + d * d > 1e-3)
        .prop_map(|(phi, a, b, c_, d)| WalkParams::normalized(phi, c(a, b), c(c_, d)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn coins_are_unitary(x in -50i64..50, phi in 0.0..1.0f64) {
        prop_assert!(coin_at(x, phi).unwrap().is_unitary(1e-12));
    }

    #[test]
    fn mass_is_conserved(p in params(), n in 0usize..400) {
        let s = evolve(&p, n);
        prop_assert!((s.norm_sqr() - 1.0).abs() <= 1e-9);
        prop_assert!((s.measure().total() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn parity_and_light_cone(p in params(), n in 0usize..200) {
        let s = evolve(&p, n);
        let (lo, hi) = s.support();
        prop_assert!(lo >= -(n as i64) && hi <= n as i64);
        let m = s.measure();
        for x in -(n as i64) - 3..=n as i64 + 3 {
            if (x + n as i64).rem_euclid(2) == 1 || x.unsigned_abs() as usize > n {
                prop_assert_eq!(m.get(x), 0.0);
            }
        }
    }

    #[test]
    fn global_phase_is_invisible(p in params(), chi in -3.2..3.2f64, n in 0usize..150) {
        let a = evolve(&p, n).measure();
        let b = evolve(&p.with_global_phase(chi), n).measure();
        for (x, v) in a.iter() {
            prop_assert!((v - b.get(x)).abs() <= 1e-14);
        }
    }

    #[test]
    fn one_step_grows_support_by_one(p in params(), n in 0usize..60) {
        let s = evolve(&p, n);
        let t = step(&s, &p);
        prop_assert_eq!(t.time, s.time + 1);
        prop_assert_eq!(t.support(), (s.support().0 - 1, s.support().1 + 1));
        prop_assert!((t.norm_sqr() - s.norm_sqr()).abs() <= 1e-12);
    }
}

#[test]
fn hadamard_presets_are_mirror_symmetric() {
    for eta in [Eta::Plus, Eta::Minus] {
        let p = WalkParams::preset(0.0, eta).unwrap();
        for_each_state(&p, 201, |n, s| {
            let m = s.measure();
            for x in 1..=n as i64 {
                assert!((m.get(x) - m.get(-x)).abs() <= 1e-12, "n {n} x {x}");
            }
        });
    }
}

#[test]
fn mass_is_conserved_over_ten_thousand_steps() {
    let p = WalkParams::normalized(0.37, c(0.3, 0.4), c(-0.5, 0.2)).unwrap();
    let mut worst: f64 = 0.0;
    for_each_state(&p, 10_001, |_, s| worst = worst.max((s.norm_sqr() - 1.0).abs()));
    assert!(worst <= 1e-9, "worst drift {worst}");
}

#[test]
fn state_tracks_time() {
    let p = WalkParams::preset(0.5, Eta::Plus).unwrap();
    let s = WalkState::initial(&p);
    assert_eq!(s.time, 0);
    assert_eq!(evolve(&p, 17).time, 17);
}
