mod common;

use common::recurrence_pair;
use kacgeron::expectation::{expected_real_zeros, kac_expected_zeros};
use kacgeron::geron::GeronimusParams;
use kacgeron::montecarlo::*;
use kacgeron::quadrature::QuadratureConfig;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn params(a: f64) -> GeronimusParams {
    GeronimusParams::new(a).unwrap()
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &v| acc * x + v)
}

#[test]
fn kac_draw_is_the_weight_vector() {
    let mut a = trial_rng(5, 9);
    let mut b = trial_rng(5, 9);
    let coeffs = sample_polynomial(&GeronimusParams::kac(), 17, &mut a);
    assert_eq!(coeffs, sample_weights(17, &mut b));
}

#[test]
fn degree_one_draw() {
    let p = params(0.5);
    let rho = p.rho();
    let mut a = trial_rng(1, 0);
    let mut b = trial_rng(1, 0);
    let c = sample_polynomial(&p, 1, &mut a);
    let eta = sample_weights(1, &mut b);
    assert!((c[0] - (eta[0] - eta[1] * 0.5 / rho)).abs() < 1e-15);
    assert!((c[1] - eta[1] / rho).abs() < 1e-15);
}

#[test]
fn monomial_form_evaluates_like_the_basis_sum() {
    for a in [-0.6, 0.25, 0.8] {
        let p = params(a);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let eta = sample_weights(14, &mut rng);
        let c = monomial_coefficients(&p, &eta);
        assert_eq!(c.len(), 15);
        for j in 0..21 {
            let x = -1.0 + 0.1 * j as f64;
            let direct: f64 = eta
                .iter()
                .enumerate()
                .map(|(i, e)| e * recurrence_pair(a, i, Complex64::new(x, 0.0)).0.re)
                .sum();
            assert!((horner(&c, x) - direct).abs() < 1e-10 * (1.0 + direct.abs()), "α={a} x={x}");
        }
    }
}

#[test]
fn count_examples() {
    let policies = [RootMethod::Companion, RootMethod::Sturm, RootMethod::Scan].map(RootPolicy::with_method);
    // x² + 1
    for pol in &policies {
        assert_eq!(count_real_roots(&[1.0, 0.0, 1.0], pol).unwrap(), 0, "{:?}", pol.method);
    }
    // (x−1)(x−2)(x−3)(x−4)(x−5)
    let five = [-120.0, 274.0, -225.0, 85.0, -15.0, 1.0];
    for pol in &policies {
        assert_eq!(count_real_roots(&five, pol).unwrap(), 5, "{:?}", pol.method);
    }
    // trailing zeros lower the degree
    assert_eq!(count_real_roots(&[-1.0, 1.0, 0.0, 0.0], &policies[0]).unwrap(), 1);
    assert!(count_real_roots(&[1.0, f64::NAN], &policies[0]).is_err());
}

#[test]
fn gaussian_weights_are_standard() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let draws = 1_000_000usize;
    let w = sample_weights(draws - 1, &mut rng);
    let mean = w.iter().sum::<f64>() / draws as f64;
    let var = w.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (draws - 1) as f64;
    let n = draws as f64;
    // sd of the sample mean is 1/√n, of the sample variance √(2/n)
    assert!(mean.abs() < 5.0 / n.sqrt(), "{mean}");
    assert!((var - 1.0).abs() < 5.0 * (2.0 / n).sqrt(), "{var}");
}

#[test]
fn companion_agrees_with_sturm() {
    let companion = RootPolicy::default();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for a in [0.0, 0.5, -0.5] {
        let p = params(a);
        let trials = 10_000;
        let mut disagree = 0;
        for _ in 0..trials {
            let n = rng.random_range(1..=30usize);
            let coeffs = sample_polynomial(&p, n, &mut rng);
            let c = count_real_roots_detailed(&coeffs, &companion).unwrap();
            let s = sturm_count(&coeffs).unwrap();
            if c.count != s {
                disagree += 1;
                assert!(c.ambiguous, "α={a} n={n}: companion {} vs sturm {s} outside the band", c.count);
            }
        }
        assert!(disagree * 1000 <= trials, "α={a}: {disagree} disagreements");
    }
}

#[test]
fn scan_agrees_with_sturm() {
    let scan = RootPolicy::with_method(RootMethod::Scan);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for a in [0.0, 0.5, -0.5] {
        let p = params(a);
        let mut disagree = 0;
        for _ in 0..5000 {
            let n = rng.random_range(1..=30usize);
            let eta = sample_weights(n, &mut rng);
            let s = sturm_count(&monomial_coefficients(&p, &eta)).unwrap();
            let c = count_real_roots_in_basis(&p, &eta, &scan).unwrap();
            if c.count != s {
                disagree += 1;
            }
        }
        assert!(disagree <= 5, "α={a}: {disagree}");
    }
}

#[test]
fn colleague_path_matches_scan_at_high_degree() {
    let p = params(0.5);
    let n = MONOMIAL_MAX_DEGREE + 20;
    let companion = RootPolicy::default();
    let scan = RootPolicy::with_method(RootMethod::Scan);
    for t in 0..3 {
        let eta = sample_weights(n, &mut trial_rng(11, t));
        let a = count_real_roots_in_basis(&p, &eta, &companion).unwrap();
        let b = count_real_roots_in_basis(&p, &eta, &scan).unwrap();
        assert_eq!(a.count, b.count, "trial {t}");
    }
}

#[test]
fn odd_degree_has_a_real_root() {
    let companion = RootPolicy::default();
    for a in [-0.9, -0.5, 0.0, 0.5, 0.9] {
        let p = params(a);
        for t in 0..500u64 {
            let n = 2 * (t as usize % 15) + 1;
            let mut rng = trial_rng(3, t);
            let eta = sample_weights(n, &mut rng);
            let c = count_real_roots_in_basis(&p, &eta, &companion).unwrap();
            assert!(c.count >= 1, "α={a} n={n}");
            let s = count_real_roots_in_basis(&p, &eta, &RootPolicy::with_method(RootMethod::Scan)).unwrap();
            assert!(s.count >= 1 && s.count % 2 == 1, "α={a} n={n}");
        }
    }
}

#[test]
fn degree_one_always_has_one_root() {
    for a in [-0.7, 0.0, 0.4] {
        for method in [RootMethod::Companion, RootMethod::Sturm, RootMethod::Scan] {
            let r = run_simulation_with(&params(a), 1, 500, 8, &RootPolicy::with_method(method)).unwrap();
            assert_eq!(r.mean_real_zeros, 1.0);
            assert_eq!(r.std_error, 0.0);
            assert_eq!(r.histogram.len(), 1);
        }
    }
}

#[test]
fn report_statistics_are_consistent() {
    let r = run_simulation(&params(-0.3), 12, 3000, 4).unwrap();
    let total: u64 = r.histogram.values().sum();
    assert_eq!(total as usize, r.trials);
    let sum: u64 = r.histogram.iter().map(|(k, c)| *k as u64 * c).sum();
    assert_eq!(r.mean_real_zeros, sum as f64 / r.trials as f64);
    let var = r
        .histogram
        .iter()
        .map(|(k, c)| *c as f64 * (*k as f64 - r.mean_real_zeros).powi(2))
        .sum::<f64>()
        / (r.trials - 1) as f64;
    assert!((r.std_error - (var / r.trials as f64).sqrt()).abs() < 1e-15);
    assert!(r.ci99.0 < r.mean_real_zeros && r.mean_real_zeros < r.ci99.1);
    assert_eq!((r.seed, r.n, r.root_method), (4, 12, RootMethod::Scan));
    assert!(run_simulation(&params(-0.3), 12, 99, 4).is_err());
}

#[test]
fn deterministic_across_thread_counts() {
    let p = params(0.5);
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_simulation_with(&p, 20, 2000, 42, &RootPolicy::default()).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(3));
    assert_eq!(one, run(1));
    assert_ne!(one, run_simulation_with(&p, 20, 2000, 43, &RootPolicy::default()).unwrap());
}

#[test]
fn kac_mean_matches_quadrature() {
    let cfg = QuadratureConfig::default();
    let exact = kac_expected_zeros(10, &cfg).unwrap();
    for method in [RootMethod::Companion, RootMethod::Scan] {
        let r = run_simulation_with(&GeronimusParams::kac(), 10, 10_000, 42, &RootPolicy::with_method(method)).unwrap();
        assert!(r.within(exact, 3.0), "{method:?}: {} ± {} vs {exact}", r.mean_real_zeros, r.std_error);
    }
}

#[test]
fn sign_of_alpha_shifts_the_mean_by_about_one() {
    let cfg = QuadratureConfig::default();
    let n = 50;
    let pos = run_simulation(&params(0.5), n, 20_000, 42).unwrap();
    let neg = run_simulation(&params(-0.5), n, 20_000, 43).unwrap();
    let gap = neg.mean_real_zeros - (pos.mean_real_zeros - 1.0);
    let want = expected_real_zeros(&params(-0.5), n, &cfg).unwrap() - expected_real_zeros(&params(0.5), n, &cfg).unwrap() + 1.0;
    let se = pos.std_error.hypot(neg.std_error);
    assert!((gap - want).abs() <= 3.0 * se, "{gap} vs {want} ± {se}");
}

#[test]
fn quadrature_inside_confidence_interval() {
    let cfg = QuadratureConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for i in 0..10u64 {
        let a: f64 = rng.random_range(-0.95..0.95);
        let n = rng.random_range(1..=100usize);
        let p = params(a);
        let r = run_simulation(&p, n, 100_000, 1000 + i).unwrap();
        let e = expected_real_zeros(&p, n, &cfg).unwrap();
        assert!(r.ci99.0 <= e && e <= r.ci99.1, "α={a} n={n}: {e} outside {:?}", r.ci99);
    }
}
