//! Self-check run by `defect-walk verify`: the library's invariants and the
//! cross-route agreements, each reduced to a pass/fail line.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use std::thread;

use defect_walk::closed_form::{
    asymptotic_psi_origin, cgmv_limit_origin, compare_branches, compare_stationary_timeavg, mu_inf,
    mu_inf_origin, StationaryBranch, TrigPack,
};
use defect_walk::series::{path_oracle_first_return, psi_origin_sequence, rstar, rstar_series};
use defect_walk::spectral::{big_lambda0, residue_norms_origin, singular_points};
use defect_walk::walk::{coin_at, evolve, for_each_state, return_probability, time_average, WalkParams};
use defect_walk::{Complex64, Eta};

pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &'static str, pass: bool, detail: String) -> Check {
    Check { name, pass, detail }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn states(phi: f64) -> Vec<WalkParams> {
    vec![
        WalkParams::preset(phi, Eta::Plus).unwrap(),
        WalkParams::preset(phi, Eta::Minus).unwrap(),
        WalkParams::new(phi, c(1.0, 0.0), c(0.0, 0.0)).unwrap(),
        WalkParams::normalized(phi, c(0.3, -0.4), c(0.5, 0.6)).unwrap(),
        WalkParams::normalized(phi, c(-0.7, 0.1), c(0.2, -0.35)).unwrap(),
    ]
}

fn phase_grid() -> Vec<f64> {
    (0..20).map(|k| 0.02 + 0.049 * k as f64).collect()
}

fn dist(a: &[Complex64; 2], b: &[Complex64; 2]) -> f64 {
    ((a[0] - b[0]).norm_sqr() + (a[1] - b[1]).norm_sqr()).sqrt()
}

fn coins() -> Check {
    let worst = (0..100)
        .map(|k| coin_at(k - 50, k as f64 / 100.0).unwrap().unitarity_defect())
        .fold(0.0, f64::max);
    check("coin unitarity", worst <= 1e-12, format!("max |U*U - I| {worst:.1e}"))
}

fn unitarity_and_parity() -> Check {
    let mut drift: f64 = 0.0;
    let mut parity_ok = true;
    for phi in [0.0, 0.3, 0.77] {
        for p in states(phi) {
            for_each_state(&p, 2001, |n, s| {
                drift = drift.max((s.norm_sqr() - 1.0).abs());
                if n <= 200 {
                    let m = s.measure();
                    parity_ok &= m.iter().all(|(x, v)| (x + n as i64) % 2 == 0 || v == 0.0);
                }
            });
        }
    }
    check(
        "unitarity and parity",
        drift <= 1e-9 && parity_ok,
        format!("max mass drift {drift:.1e} over 2000 steps, parity {parity_ok}"),
    )
}

fn hadamard_symmetry_and_baseline() -> Check {
    let mut asym: f64 = 0.0;
    for eta in [Eta::Plus, Eta::Minus] {
        let p = WalkParams::preset(0.0, eta).unwrap();
        for_each_state(&p, 201, |_, s| {
            let m = s.measure();
            for (x, v) in m.iter() {
                asym = asym.max((v - m.get(-x)).abs());
            }
        });
    }
    let printed = [0.5, 0.125, 0.125, 0.07031, 0.07031, 0.04882, 0.04882];
    let p = WalkParams::preset(0.0, Eta::Plus).unwrap();
    let dev = printed
        .iter()
        .enumerate()
        .map(|(k, v)| (return_probability(&p, 2 * k + 2) - v).abs())
        .fold(0.0, f64::max);
    check(
        "Hadamard baseline",
        asym <= 1e-12 && dev <= 5e-5,
        format!("mirror asymmetry {asym:.1e}, return probabilities off by {dev:.1e}"),
    )
}

fn renewal() -> Check {
    let mut worst: f64 = 0.0;
    for phi in [0.125, 1.0 / 3.0, 0.5, 0.9] {
        for p in states(phi) {
            for (n, psi) in psi_origin_sequence(100, &p).iter().enumerate() {
                worst = worst.max(dist(psi, &evolve(&p, 2 * n).amplitude(0)));
            }
        }
    }
    check("renewal vs evolution", worst <= 1e-10, format!("max deviation {worst:.1e}"))
}

fn series() -> Check {
    let gf = rstar_series(23);
    let bad: Vec<usize> = (1..=23)
        .filter(|&n| {
            let paths = path_oracle_first_return(n).unwrap();
            let closed = rstar(n).unwrap();
            closed != gf.coeff(n) || closed != &paths.r - &paths.p
        })
        .collect();
    check("r* triple equivalence", bad.is_empty(), format!("mismatches at {bad:?}"))
}

fn spectral() -> Check {
    let mut root: f64 = 0.0;
    let mut sum_err: f64 = 0.0;
    for phi in phase_grid() {
        for pt in singular_points(phi).unwrap() {
            root = root.max(big_lambda0(pt.z(), phi).norm());
        }
        for p in states(phi) {
            let s: f64 = residue_norms_origin(phi, p.alpha(), p.beta())
                .unwrap()
                .iter()
                .map(|r| r.norm)
                .sum();
            sum_err = sum_err.max((s - mu_inf_origin(&p)).abs());
        }
    }
    check(
        "spectral closure",
        root <= 1e-10 && sum_err <= 1e-12,
        format!("max |Lambda0| {root:.1e}, residue sum off by {sum_err:.1e}"),
    )
}

fn simulation() -> Check {
    let work: Vec<(f64, Eta)> = [0.4, 0.5, 0.6]
        .into_iter()
        .flat_map(|phi| [(phi, Eta::Plus), (phi, Eta::Minus)])
        .collect();
    let worst = thread::scope(|s| {
        let handles: Vec<_> = work
            .iter()
            .map(|&(phi, eta)| {
                s.spawn(move || {
                    let p = WalkParams::preset(phi, eta).unwrap();
                    let m = time_average(&p, 5000, 5).unwrap();
                    (-5..=5).map(|x| (m.get(x) - mu_inf(x, &p)).abs()).fold(0.0, f64::max)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).fold(0.0, f64::max)
    });
    check("limit measure vs simulation", worst <= 1e-2, format!("max deviation {worst:.1e} at T = 5000"))
}

fn vanishing() -> Check {
    let r = FRAC_1_SQRT_2;
    let cases = [
        WalkParams::new(0.875, c(0.0, r), c(r, 0.0)).unwrap(),
        WalkParams::new(0.2, c(r, 0.0), c(0.0, r)).unwrap(),
    ];
    let mut exact = true;
    let mut worst: f64 = 0.0;
    for p in &cases {
        let m = time_average(p, 5000, 5).unwrap();
        for x in -5..=5 {
            exact &= mu_inf(x, p) == 0.0;
            worst = worst.max(m.get(x));
        }
    }
    check(
        "vanishing regions",
        exact && worst <= 2e-3,
        format!("closed form zero {exact}, simulated max {worst:.1e}"),
    )
}

fn stationary() -> Check {
    let mut ok = true;
    let mut spread: f64 = 0.0;
    for phi in [0.3, 0.5] {
        let t = TrigPack::new(phi);
        for b in [StationaryBranch::Plus, StationaryBranch::Minus] {
            let r = compare_stationary_timeavg(phi, b).unwrap();
            let e = match b {
                StationaryBranch::Plus => SQRT_2 * t.c_minus,
                StationaryBranch::Minus => SQRT_2 * t.c_plus,
            };
            let c_sq = 2.0 * ((1.0 - e) / (3.0 - 2.0 * e)).powi(2);
            ok &= r.constant && (r.ratio - c_sq).abs() <= 1e-12;
            spread = spread.max(r.max_relative_spread);
        }
    }
    let crossed = compare_branches(0.4, StationaryBranch::Plus, StationaryBranch::Minus).unwrap();
    ok &= !crossed.constant;
    check("stationary coincidence", ok, format!("max relative spread {spread:.1e}, crossed control rejected {}", !crossed.constant))
}

fn cgmv() -> Check {
    let mut worst: f64 = 0.0;
    for phi in phase_grid() {
        for p in states(phi) {
            worst = worst.max((cgmv_limit_origin(&p).unwrap() - mu_inf_origin(&p)).abs());
        }
    }
    check("CGMV cross-check", worst <= 1e-14, format!("max difference {worst:.1e}"))
}

fn asymptotics() -> Check {
    let p = WalkParams::preset(0.5, Eta::Plus).unwrap();
    let seq = psi_origin_sequence(900, &p);
    let rms = |lo: usize, hi: usize| {
        let mut acc = 0.0;
        for (n, psi) in seq.iter().enumerate().take(hi + 1).skip(lo) {
            let a = asymptotic_psi_origin(n, &p).unwrap().as_array();
            let s = [psi[0].re, psi[0].im, psi[1].re, psi[1].im];
            acc += (0..4).map(|k| (a[k] - s[k]).powi(2)).sum::<f64>() / 4.0;
        }
        (acc / (hi - lo + 1) as f64).sqrt()
    };
    let (early, mid, late) = (rms(100, 200), rms(500, 600), rms(800, 900));
    check(
        "amplitude asymptotics",
        mid <= 2e-2 && late < early,
        format!("window RMS {early:.1e} / {mid:.1e} / {late:.1e}"),
    )
}

pub fn run_all() -> Vec<Check> {
    vec![
        coins(),
        unitarity_and_parity(),
        hadamard_symmetry_and_baseline(),
        renewal(),
        series(),
        spectral(),
        simulation(),
        vanishing(),
        stationary(),
        cgmv(),
        asymptotics(),
    ]
}

pub fn report(checks: &[Check]) -> String {
    let mut s = String::new();
    for c in checks {
        s.push_str(&format!("{} {}: {}\n", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail));
    }
    let passed = checks.iter().filter(|c| c.pass).count();
    s.push_str(&format!("{passed}/{} checks passed\n", checks.len()));
    s
}
