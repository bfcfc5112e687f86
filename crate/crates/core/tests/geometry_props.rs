mod common;

use common::dim;
use randpoly::analysis::{facet_survival_probability, threshold_constant};
use randpoly::geometry::*;
use randpoly::sampler::sample_sphere_point;
use randpoly::{Error, Seed};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Tanh-sinh (double exponential) quadrature on `[a, b]`, an independent
/// oracle that tolerates endpoint singularities of the integrand's derivatives.
fn tanh_sinh(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let step = 1.0 / 64.0;
    let mut sum = 0.0;
    let kmax = (4.0 / step) as i64;
    for k in -kmax..=kmax {
        let t = k as f64 * step;
        let u = std::f64::consts::FRAC_PI_2 * t.sinh();
        let x = u.tanh();
        let w = std::f64::consts::FRAC_PI_2 * t.cosh() / u.cosh().powi(2);
        // distance to the nearer endpoint, computed without cancellation
        let gap = 1.0 / (u.abs().exp() * u.cosh());
        if gap == 0.0 {
            continue;
        }
        let y = if x >= 0.0 { b - half * gap } else { a + half * gap };
        sum += w * f(y);
    }
    sum * half * step
}

#[test]
fn monotone_measures() {
    for n in 2..=8 {
        let d = dim(n);
        let mut prev = [-1.0, -1.0];
        for i in 0..=100 {
            let h = i as f64 / 100.0;
            let cur = [cap_volume(d, h).unwrap(), cap_surface(d, h).unwrap()];
            assert!(cur[0] >= prev[0] && cur[1] >= prev[1], "n={n} h={h}");
            prev = cur;
        }
        let mut prev = [f64::INFINITY, f64::INFINITY];
        for i in 0..=100 {
            let r = i as f64 / 100.0;
            let cur = [belt_volume(d, r).unwrap(), belt_surface(d, r).unwrap()];
            assert!(cur[0] <= prev[0] && cur[1] <= prev[1], "n={n} r={r}");
            prev = cur;
        }
    }
}

#[test]
fn halves_and_wholes() {
    for n in 2..=8 {
        let d = dim(n);
        let s = sphere_surface(n).unwrap();
        let v = ball_volume(n).unwrap();
        assert!(rel(cap_surface(d, 1.0).unwrap(), s / 2.0) < 1e-10);
        assert!(rel(cap_volume(d, 1.0).unwrap(), v / 2.0) < 1e-10);
        assert_eq!(belt_surface(d, 0.0).unwrap(), s);
    }
}

#[test]
fn three_dimensional_closed_forms() {
    let d = dim(3);
    for i in 1..=100 {
        let h = i as f64 / 100.0;
        let pi = std::f64::consts::PI;
        assert!(rel(cap_volume(d, h).unwrap(), pi * h * h * (3.0 - h) / 3.0) < 1e-10);
        assert!(rel(cap_surface(d, h).unwrap(), 2.0 * pi * h) < 1e-10);
        assert!(rel(cap_volume_quadrature(d, h).unwrap(), pi * h * h * (3.0 - h) / 3.0) < 1e-10);
    }
}

#[test]
fn quadrature_matches_tanh_sinh_oracle() {
    for n in 2..=9 {
        let vn1 = ball_volume(n - 1).unwrap();
        for h in [0.1, 0.5, 1.0] {
            let oracle = vn1 * tanh_sinh(|y| (1.0 - y * y).max(0.0).powf((n as f64 - 1.0) / 2.0), 1.0 - h, 1.0);
            let got = cap_volume_quadrature(dim(n), h).unwrap();
            assert!(rel(got, oracle) < 1e-10, "n={n} h={h}: {got} vs {oracle}");
            assert!(rel(cap_volume(dim(n), h).unwrap(), oracle) < 1e-10);
        }
    }
}

#[test]
fn asymptotic_ratio_tends_to_one() {
    for n in 2..=8 {
        let r = cap_volume_asymptotic_ratio(dim(n), 1e-8).unwrap();
        assert!((r - 1.0).abs() < 1e-3, "n={n}: {r}");
    }
    assert_eq!(cap_volume_asymptotic(dim(4), 0.0).unwrap(), 0.0);
}

#[test]
fn corollary_limits_settle() {
    for n in 2..=8 {
        let d = dim(n);
        let e_v = (n as f64 + 1.0) / 2.0;
        let e_s = (n as f64 - 1.0) / 2.0;
        let v7 = cap_volume(d, 1e-7).unwrap() / 1e-7f64.powf(e_v);
        let v8 = cap_volume(d, 1e-8).unwrap() / 1e-8f64.powf(e_v);
        assert!(v8 > 0.0 && rel(v7, v8) < 1e-3, "volume n={n}");
        let s7 = cap_surface(d, 1e-7).unwrap() / 1e-7f64.powf(e_s);
        let s8 = cap_surface(d, 1e-8).unwrap() / 1e-8f64.powf(e_s);
        assert!(s8 > 0.0 && rel(s7, s8) < 1e-3, "surface n={n}");
        // both limits have closed forms
        let vn1 = ball_volume(n - 1).unwrap();
        let c1 = vn1 * 2f64.powf(e_v) / (n as f64 + 1.0);
        let c2 = vn1 * 2f64.powf(e_s);
        assert!(rel(v8, c1) < 1e-6, "C1 n={n}");
        assert!(rel(s8, c2) < 1e-6, "C2 n={n}");
    }
}

#[test]
fn sandwich_bound() {
    for n in 2..=8 {
        let d = dim(n);
        let h0 = 0.1;
        let grid: Vec<f64> = (0..=70).map(|i| 1e-8 * (h0 / 1e-8f64).powf(i as f64 / 70.0)).collect();
        let ratios: Vec<f64> = grid
            .iter()
            .map(|&h| cap_surface(d, h).unwrap() / h.powf((n as f64 - 1.0) / 2.0))
            .collect();
        let c = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        for (&h, &r) in grid.iter().zip(&ratios) {
            assert!(r >= c && r <= 2.0 * c, "n={n} h={h}");
        }
    }
}

#[test]
fn monte_carlo_cap_law() {
    let draws = 1_000_000;
    for n in 2..=4 {
        let mut rng = Seed::new(17).with_stream(n as u64).rng();
        let mut hits = [0usize; 2];
        let heights = [0.1, 0.5];
        for _ in 0..draws {
            let p = sample_sphere_point(dim(n), &mut rng);
            let last = p.coords()[n - 1];
            for (k, h) in heights.iter().enumerate() {
                if last >= 1.0 - h {
                    hits[k] += 1;
                }
            }
        }
        for (k, &h) in heights.iter().enumerate() {
            let p = cap_fraction(dim(n), h).unwrap();
            let se = (p * (1.0 - p) / draws as f64).sqrt();
            let got = hits[k] as f64 / draws as f64;
            assert!((got - p).abs() <= 4.0 * se, "n={n} h={h}: {got} vs {p}");
        }
    }
}

#[test]
fn threshold_solver_inverts_fraction() {
    for n in 2..=6 {
        let d = dim(n);
        let c = threshold_constant(d);
        for m in [20usize, 100, 1000, 10_000, 1_000_000] {
            let target = c * (m as f64).ln() / m as f64;
            match solve_delta(d, m, c) {
                Ok(delta) => {
                    let frac = cap_surface(d, delta).unwrap() / sphere_surface(n).unwrap();
                    assert!(rel(frac, target) <= 1e-12, "n={n} m={m}");
                }
                Err(Error::ThresholdUnattainable(_)) => assert!(target > 0.5),
                Err(e) => panic!("{e}"),
            }
        }
    }
}

/// With delta = solve_delta(n, m, 2(n+1)), a hyperplane at distance
/// 1 - delta survives with probability at most m^{-(n+1)}.
#[test]
fn threshold_property() {
    for n in 2..=4 {
        let d = dim(n);
        let c = threshold_constant(d);
        let mut checked = 0;
        for m in (2 * n)..=10_000 {
            if m > 200 && m % 37 != 0 {
                continue;
            }
            let Ok(delta) = solve_delta(d, m, c) else { continue };
            let p = facet_survival_probability(d, m, 1.0 - delta).unwrap().value;
            assert!(p <= (m as f64).powf(-(n as f64 + 1.0)) * (1.0 + 1e-9), "n={n} m={m}");
            checked += 1;
        }
        assert!(checked > 100);
    }
}

#[test]
fn survival_probability_monotonicity() {
    for n in 2..=5 {
        let d = dim(n);
        for m in [n + 1, 20, 200] {
            let mut prev = 0.0;
            for i in 0..=50 {
                let p = facet_survival_probability(d, m, i as f64 / 50.0).unwrap().value;
                assert!(p >= prev);
                prev = p;
            }
        }
        for i in 0..=10 {
            let h = i as f64 / 10.0;
            let mut prev = 1.0;
            for m in [n + 1, n + 5, 50, 500] {
                let p = facet_survival_probability(d, m, h).unwrap().value;
                assert!(p <= prev);
                prev = p;
            }
        }
    }
}
