mod common;

use std::f64::consts::{E, PI};

use common::{expected_zeros_oracle, wilkins_oracle};
use kacgeron::expectation::*;
use kacgeron::geron::GeronimusParams;
use kacgeron::quadrature::QuadratureConfig;
use kacgeron::special::aux_one_minus_f;
use kacgeron::Error;

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn params(a: f64) -> GeronimusParams {
    GeronimusParams::new(a).unwrap()
}

#[test]
fn aux_gamma_examples() {
    assert_eq!(aux_gamma(0.0), 1.0);
    assert!((aux_gamma(1.0) - 2.0 / (E - 1.0 / E)).abs() < 1e-15);
    let mut prev = aux_gamma(0.0);
    for i in 1..2000 {
        let s = i as f64 * 0.05;
        let g = aux_gamma(s);
        assert!(g < prev && g > 0.0, "s={s}");
        if s >= 2f64.ln() {
            assert!(g < 3.0 * s * (-s).exp(), "s={s}");
        }
        prev = g;
    }
    assert!(aux_gamma(800.0) >= 0.0 && aux_gamma(800.0) < 1e-300);
}

#[test]
fn aux_f_examples() {
    assert_eq!(aux_f(0.0), 0.0);
    let t = 1e-6;
    assert!((aux_f(t) - t / 3f64.sqrt()).abs() <= 1e-9 * t / 3f64.sqrt());
    for i in 0..400 {
        let t = 1.0 + i as f64 * 0.1;
        let bound = 8.0 * t * t * (-2.0 * t).exp();
        let gap = aux_one_minus_f(t);
        assert!(gap > 0.0 && gap < bound, "t={t}");
        assert!(((1.0 - aux_f(t)) - gap).abs() <= f64::EPSILON);
    }
}

#[test]
fn wilkins_constant_matches_independent_rule() {
    let a0 = wilkins_a0(&cfg()).unwrap();
    let oracle = wilkins_oracle();
    assert!((a0 - oracle).abs() < 1e-10, "{a0} vs {oracle}");
}

#[test]
fn wilkins_constant_is_the_kac_limit() {
    let a0 = wilkins_a0(&cfg()).unwrap();
    let n = 100_000;
    let e = kac_expected_zeros(n, &cfg()).unwrap();
    assert!((e - 2.0 / PI * ((n + 1) as f64).ln() - a0).abs() < 1e-4);
}

#[test]
fn constant_term_examples() {
    let a0 = wilkins_a0(&cfg()).unwrap();
    for a in [0.1, 0.5, 0.9] {
        let hi = a0_alpha(&params(a), a0).unwrap();
        let lo = a0_alpha(&params(-a), a0).unwrap();
        assert!((hi - lo - 1.0).abs() < 1e-14);
    }
    let half = a0_alpha(&params(0.5), a0).unwrap();
    assert!((half - ((a0 + 2.0) / 2.0 + 4f64.ln() / PI)).abs() < 1e-14);
    let near_one = a0_alpha(&params(-0.999_999_999), a0).unwrap();
    assert!((near_one - (a0 / 2.0 + 2f64.ln() / PI)).abs() < 1e-9);
    assert!(matches!(a0_alpha(&GeronimusParams::kac(), a0), Err(Error::Domain(_))));
    assert_eq!(constant_term(&GeronimusParams::kac(), a0).unwrap(), a0);
    assert_eq!(leading_coefficient(&GeronimusParams::kac()), 2.0 / PI);
    assert_eq!(leading_coefficient(&params(-0.2)), 1.0 / PI);
}

#[test]
fn small_degree_values() {
    let kac = GeronimusParams::kac();
    assert_eq!(expected_real_zeros(&kac, 0, &cfg()).unwrap(), 0.0);
    assert!((expected_real_zeros(&kac, 1, &cfg()).unwrap() - 1.0).abs() < 1e-10);
    assert!((kac_expected_zeros(1, &cfg()).unwrap() - 1.0).abs() < 1e-10);
    for a in [-0.7, 0.5] {
        assert_eq!(expected_real_zeros(&params(a), 0, &cfg()).unwrap(), 0.0);
        assert!((expected_real_zeros(&params(a), 1, &cfg()).unwrap() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn matches_exact_integrand_oracle() {
    for a in [-0.8, -0.5, 0.0, 0.3, 0.5, 0.8] {
        for n in [2, 3, 6, 9] {
            let got = expected_real_zeros(&params(a), n, &cfg()).unwrap();
            let want = expected_zeros_oracle(a, n);
            assert!((got - want).abs() < 1e-9, "α={a} n={n}: {got} vs {want}");
        }
    }
}

#[test]
fn plain_and_substituted_quadrature_agree() {
    let plain = QuadratureConfig {
        endpoint_substitution: false,
        ..cfg()
    };
    for a in [-0.5, 0.0, 0.5] {
        for n in [5, 40] {
            let p = params(a);
            let x = expected_real_zeros(&p, n, &cfg()).unwrap();
            let y = expected_real_zeros(&p, n, &plain).unwrap();
            assert!((x - y).abs() < 1e-8, "α={a} n={n}: {x} vs {y}");
        }
    }
}

#[test]
fn kac_large_degree() {
    let a0 = wilkins_a0(&cfg()).unwrap();
    let n = 10_000;
    let e = kac_expected_zeros(n, &cfg()).unwrap();
    assert!((e - 2.0 / PI * ((n + 1) as f64).ln() - a0).abs() < 2e-4);
}

#[test]
fn small_alpha_is_continuous_with_kac() {
    let tiny = params(1e-14);
    for n in [1, 2, 5, 13, 30, 50] {
        let k = kac_expected_zeros(n, &cfg()).unwrap();
        let g = expected_real_zeros(&tiny, n, &cfg()).unwrap();
        assert!((k - g).abs() < 1e-9, "n={n}: {k} vs {g}");
    }
}

#[test]
fn order_one_estimate() {
    let p = params(0.5);
    let report = leading_report(&p, &cfg()).unwrap();
    let n = 10_000;
    let est = asymptotic_estimate(&p, n, &report, 1).unwrap();
    let k = (n + 1) as f64;
    assert_eq!(est, k.ln() / PI + report.a0_alpha);
    let e = expected_real_zeros(&p, n, &cfg()).unwrap();
    assert!((e - est).abs() <= 10.0 / k);
    assert!(matches!(
        asymptotic_estimate(&p, n, &report, 2),
        Err(Error::MissingCoefficient { order: 1, parity: "even" })
    ));
    assert!(asymptotic_estimate(&p, n, &report, 0).is_err());
    assert!(asymptotic_estimate(&params(-0.5), n, &report, 1).is_err());
}

#[test]
fn report_constants_are_consistent() {
    for a in [-0.9, -0.5, 0.1, 0.7] {
        let r = leading_report(&params(a), &cfg()).unwrap();
        let want = (r.a0_wilkins + 1.0 + a.signum()) / 2.0 + (2.0 / a.abs()).ln() / PI;
        assert!((r.a0_alpha - want).abs() < 1e-12);
    }
}

#[test]
fn synthetic_fit_recovers_coefficients() {
    let ns: Vec<usize> = (0..40).map(|i| 50 + 37 * i).collect();
    let (a, b, c) = (0.75, -1.25, 3.5);
    let y: Vec<f64> = ns
        .iter()
        .map(|&n| {
            let k = (n + 1) as f64;
            a + b / k + c / (k * k)
        })
        .collect();
    let fit = fit_inverse_powers(&ns, &y, 0, 3).unwrap();
    for (got, want) in fit.coefficients.iter().zip([a, b, c]) {
        assert!((got - want).abs() < 1e-8, "{got} vs {want}");
    }
    assert!(fit.residual_norm < 1e-12);
}

#[test]
fn fit_rejects_bad_designs() {
    assert!(matches!(
        fit_inverse_powers(&[10, 10, 10, 10], &[1.0; 4], 1, 2),
        Err(Error::IllConditioned { .. })
    ));
    assert!(fit_inverse_powers(&[10, 20], &[1.0, 2.0], 1, 3).is_err());
    assert!(fit_inverse_powers(&[10, 20, 30], &[1.0, 2.0], 1, 1).is_err());
    let few: Vec<usize> = (100..106).collect();
    assert!(fit_expansion(&params(0.5), &few, 3, &cfg()).is_err());
}

#[test]
fn residual_shrinks_with_depth_and_parities_differ() {
    let p = params(0.5);
    let ns: Vec<usize> = (1024..=16384).step_by(64).chain((1025..=16384).step_by(64)).collect();
    let mut prev = f64::INFINITY;
    let mut last = None;
    for depth in 1..=3 {
        let r = fit_expansion(&p, &ns, depth, &cfg()).unwrap();
        assert!(r.residual_norm < prev, "depth {depth}: {} ≥ {prev}", r.residual_norm);
        prev = r.residual_norm;
        last = Some(r);
    }
    let r = last.unwrap();
    assert_eq!(r.n_range, (1024, 16384));
    let gap = (r.fitted_even[0] - r.fitted_odd[0]).abs();
    assert!(gap > 10.0 * (r.stderr_even[0] + r.stderr_odd[0]), "{r:?}");
    let n = 9000;
    let est = asymptotic_estimate(&p, n, &r, 4).unwrap();
    let e = expected_real_zeros(&p, n, &cfg()).unwrap();
    assert!((e - est).abs() < 1e-8, "{e} vs {est}");
}

/// Monotone along each parity. Across parities it is not: the `1/(n+1)`
/// coefficients of the two parities differ by more than the `1/(πn)` step of
/// the logarithm, so every other step goes down.
#[test]
fn grows_monotonically_within_parity() {
    for a in [-0.5, 0.5] {
        let p = params(a);
        let e: Vec<f64> = (0..=200).map(|n| expected_real_zeros(&p, n, &cfg()).unwrap()).collect();
        for n in 3..=200 {
            assert!(e[n] >= e[n - 2], "α={a} n={n}: {} < {}", e[n], e[n - 2]);
        }
        let drops = (2..=200).filter(|&n| e[n] < e[n - 1]).count();
        assert!(drops > 80, "α={a}: {drops}");
    }
    let e3 = expected_zeros_oracle(-0.5, 3);
    let e4 = expected_zeros_oracle(-0.5, 4);
    assert!(e4 < e3 - 0.01);
    assert!((expected_real_zeros(&params(-0.5), 4, &cfg()).unwrap() - e4).abs() < 1e-9);
}

#[test]
fn sign_asymmetry_approaches_one() {
    let n = 4096;
    let hi = expected_real_zeros(&params(0.5), n, &cfg()).unwrap();
    let lo = expected_real_zeros(&params(-0.5), n, &cfg()).unwrap();
    assert!((hi - lo - 1.0).abs() < 5e-3);
}

#[test]
fn invalid_config_is_rejected() {
    let bad = QuadratureConfig {
        max_subdivisions: 5,
        ..cfg()
    };
    assert!(expected_real_zeros(&params(0.2), 10, &bad).is_err());
    let bad = QuadratureConfig {
        abs_tol: 0.0,
        ..cfg()
    };
    assert!(wilkins_a0(&bad).is_err());
}
