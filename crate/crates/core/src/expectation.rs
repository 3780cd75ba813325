//! Expected number of real zeros: exact values by quadrature, the constants of
//! the large-`n` expansion, and a least-squares fitter for the higher terms.
//!
//! ```text
//! E_n(α) = (2/π) ∫_{−1}^{1} sqrt(1 − h²_{n+1}(x)) / (1 − x²) dx
//!        ≈ (1/π) log(n+1) + A_0^α + Σ_{p≥1} A_p^{α,(−1)^n} (n+1)^{−p}
//! A_0^α  = (A_0 + 1 + sgn α)/2 + (1/π) log(2/|α|)
//! ```
//!
//! For `α = 0` (Kac polynomials) the leading coefficient is `2/π` and the
//! constant is the Wilkins constant `A_0` itself.

use std::f64::consts::{FRAC_PI_2, LN_2, PI};

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geron::GeronimusParams;
use crate::intensity::real_axis::{integrand, RealPoint};
use crate::quadrature::{composite_gauss_legendre, integrate, integrate_segments, QuadratureConfig, Segment};
use crate::special::{aux_f_over_t, aux_one_minus_f};

pub use crate::special::{aux_f, aux_gamma};

/// Below this value of `ln ε^{n+1}(1)` the spike near `x = 1` is treated
/// analytically: its mass is exactly one zero up to terms of size `ε^{n+1}(1)`.
const ANALYTIC_SPIKE_LN: f64 = -600.0;

/// Largest allowed condition number of the column-scaled design matrix.
const MAX_CONDITION: f64 = 1e12;

/// `∫ sqrt(1 − h²_{n+1})/(1 − x²)` over `[−1, 1]` (or `[−1, 0]` when `half`).
///
/// Panels:
/// * `[−1, −1 + (n+1)^{−1/2}]` in the stretched variable `t = (n+1)(1+x)`;
/// * the bulk, split at `0`;
/// * `[1 − 1/(n+1), 1]` in the variable `v = 1 − x`. For `α > 0` this panel
///   contains the spike of width `w ≈ 4α sqrt(ε^{n+1}(1))/ρ`; it is integrated
///   through `v = w tan θ` and then `v = e^s`, or, when `ε^{n+1}(1)` is
///   negligible, replaced by the spike-free profile plus its exact mass `π/2`.
fn integrate_g(params: &GeronimusParams, n: usize, config: &QuadratureConfig, half: bool) -> Result<f64> {
    config.validate()?;
    if n == 0 {
        return Ok(0.0);
    }
    let k = (n + 1) as f64;
    let sk = k.sqrt();
    let alpha = params.alpha();
    let p = *params;

    let g_x = move |x: f64| integrand(&p, n, RealPoint::from_x(x), false);
    let g_t = move |t: f64| integrand(&p, n, RealPoint::from_u(t / k), false) / k;
    let g_v = move |v: f64| integrand(&p, n, RealPoint::from_v(v), false);
    let g_v_flush = move |v: f64| integrand(&p, n, RealPoint::from_v(v), true);

    if !config.endpoint_substitution {
        let hi = if half { 0.0 } else { 1.0 };
        let r = integrate(&g_x, -1.0, hi, &[-1.0 + 1.0 / sk, 0.0, 1.0 - 1.0 / k], config)?;
        return Ok(r.value);
    }

    let left_end = -1.0 + 1.0 / sk;
    let v_split = 1.0 / k;
    let mid_hi = if half { 0.0 } else { 1.0 - v_split };

    let mut extra = 0.0;
    let ln_e1 = k * params.eps_at_one().ln();
    let w = 4.0 * alpha.abs() * (0.5 * ln_e1).exp() / params.rho();
    let knee = if params.delta_alpha() > 0.0 {
        (k * params.delta_alpha().ln()).exp()
    } else {
        0.0
    };

    let tan_lim = 100f64.atan();
    let g_theta = move |theta: f64| {
        let c = theta.cos();
        integrand(&p, n, RealPoint::from_v(w * theta.tan()), false) * w / (c * c)
    };
    let g_log = move |s: f64| {
        let v = s.exp();
        integrand(&p, n, RealPoint::from_v(v), false) * v
    };

    let mut segments: Vec<Segment<'_>> = vec![Segment::new(&g_t, 0.0, sk)];
    if left_end < 0.0 && 0.0 < mid_hi {
        segments.push(Segment::new(&g_x, left_end, 0.0));
        segments.push(Segment::new(&g_x, 0.0, mid_hi));
    } else {
        segments.push(Segment::new(&g_x, left_end, mid_hi));
    }
    if !half {
        if alpha > 0.0 && ln_e1 < ANALYTIC_SPIKE_LN {
            segments.push(Segment::new(&g_v_flush, 0.0, v_split));
            extra = FRAC_PI_2;
        } else if alpha > 0.0 && 100.0 * w < v_split {
            segments.push(Segment::new(&g_theta, 0.0, tan_lim));
            let (s_lo, s_hi) = ((100.0 * w).ln(), v_split.ln());
            let s_knee = knee.ln();
            if s_lo < s_knee && s_knee < s_hi {
                segments.push(Segment::new(&g_log, s_lo, s_knee));
                segments.push(Segment::new(&g_log, s_knee, s_hi));
            } else {
                segments.push(Segment::new(&g_log, s_lo, s_hi));
            }
        } else if knee > 0.0 && knee < v_split {
            segments.push(Segment::new(&g_v, 0.0, knee));
            segments.push(Segment::new(&g_v, knee, v_split));
        } else {
            segments.push(Segment::new(&g_v, 0.0, v_split));
        }
    }
    let r = integrate_segments(&segments, config)?;
    Ok(r.value + extra)
}

/// `E_n(α)`, the expected number of real zeros of `Σ η_i φ_i(x; α)`.
///
/// `α = 0` is routed to [`kac_expected_zeros`].
pub fn expected_real_zeros(params: &GeronimusParams, n: usize, config: &QuadratureConfig) -> Result<f64> {
    if params.is_kac() {
        return kac_expected_zeros(n, config);
    }
    Ok(2.0 / PI * integrate_g(params, n, config, false)?)
}

/// Expected number of real zeros of the Kac polynomial `Σ η_i x^i`.
///
/// The intensity is even in `x` and invariant under `x ↦ 1/x` (with the
/// Jacobian), so `E_n = (4/π) ∫_{−1}^{0} sqrt(1 − h²_{n+1})/(1 − x²) dx`.
pub fn kac_expected_zeros(n: usize, config: &QuadratureConfig) -> Result<f64> {
    Ok(4.0 / PI * integrate_g(&GeronimusParams::kac(), n, config, true)?)
}

/// Truncation point for the `[1, ∞)` integral: the smallest integer `T` with
/// `(2/π)(4T + 2)e^{−2T} < tol`.
fn wilkins_cutoff(tol: f64) -> f64 {
    let mut t = 1.0f64;
    while 2.0 / PI * (4.0 * t + 2.0) * (-2.0 * t).exp() >= tol {
        t += 1.0;
    }
    t
}

/// The Wilkins constant
///
/// ```text
/// A_0 = (2/π) ( log 2 + ∫_0^1 f(t)/t dt + ∫_1^∞ (f(t) − 1)/t dt ) ≈ 0.6257358
/// ```
///
/// The tail beyond `T` is dropped, with `T` chosen so that the bound
/// `0 < 1 − f(t) < 8t²e^{−2t}` caps the neglected part below `abs_tol/10`.
/// The integrals are computed twice, adaptively and by a fixed composite
/// Gauss–Legendre rule; the two must agree to `1e-10`.
pub fn wilkins_a0(config: &QuadratureConfig) -> Result<f64> {
    config.validate()?;
    let cutoff = wilkins_cutoff(config.abs_tol / 10.0);
    let head = |t: f64| aux_f_over_t(t);
    let tail = |t: f64| -aux_one_minus_f(t) / t;

    let segments = [Segment::new(&head, 0.0, 1.0), Segment::new(&tail, 1.0, cutoff)];
    let adaptive = integrate_segments(&segments, config)?.value;
    let fixed = composite_gauss_legendre(&head, 0.0, 1.0, 4, 30)
        + composite_gauss_legendre(&tail, 1.0, cutoff, cutoff as usize, 30);

    if (adaptive - fixed).abs() > 1e-10 {
        return Err(Error::Nonconvergence {
            first: adaptive,
            second: fixed,
        });
    }
    Ok(2.0 / PI * (LN_2 + adaptive))
}

/// `A_0^α = (A_0 + 1 + sgn α)/2 + (1/π) log(2/|α|)`.
pub fn a0_alpha(params: &GeronimusParams, a0: f64) -> Result<f64> {
    let alpha = params.alpha();
    if alpha == 0.0 {
        return Err(Error::Domain(
            "the Geronimus constant is undefined at α = 0; the Kac constant is A_0 with leading term (2/π) log(n+1)".into(),
        ));
    }
    Ok((a0 + 1.0 + alpha.signum()) / 2.0 + (2.0 / alpha.abs()).ln() / PI)
}

/// `1/π` for `α ≠ 0` and `2/π` for the Kac case.
pub fn leading_coefficient(params: &GeronimusParams) -> f64 {
    if params.is_kac() {
        2.0 / PI
    } else {
        1.0 / PI
    }
}

/// Constant term of the expansion: `A_0^α`, or `A_0` when `α = 0`.
pub fn constant_term(params: &GeronimusParams, a0: f64) -> Result<f64> {
    if params.is_kac() {
        Ok(a0)
    } else {
        a0_alpha(params, a0)
    }
}

/// Least-squares fit of `y ≈ Σ_{p=first}^{first+depth−1} c_p (n+1)^{−p}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerFit {
    pub first_power: usize,
    pub coefficients: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub residual_norm: f64,
    pub condition: f64,
}

/// Fits `y_i ≈ Σ_{j<depth} c_j (n_i+1)^{−(first_power + j)}`.
///
/// Columns are scaled to unit norm before the SVD, and the condition number
/// of the scaled matrix is checked against `1e12`. Standard errors use
/// `σ² = RSS/(m − depth)`; they are `NaN` for an exactly determined system.
pub fn fit_inverse_powers(n_values: &[usize], y: &[f64], first_power: usize, depth: usize) -> Result<PowerFit> {
    let m = n_values.len();
    if m != y.len() {
        return Err(Error::InvalidInput("n_values and y differ in length".into()));
    }
    if depth == 0 || m < depth {
        return Err(Error::InvalidInput(format!(
            "need at least {depth} samples for a depth-{depth} fit, got {m}"
        )));
    }
    let mut x = DMatrix::<f64>::zeros(m, depth);
    for (i, &n) in n_values.iter().enumerate() {
        let k = (n + 1) as f64;
        for j in 0..depth {
            x[(i, j)] = k.powi(-((first_power + j) as i32));
        }
    }
    let scales: Vec<f64> = (0..depth).map(|j| x.column(j).norm()).collect();
    for (j, s) in scales.iter().enumerate() {
        x.column_mut(j).scale_mut(1.0 / s);
    }
    let svd = x.clone().svd(true, true);
    let s_max = svd.singular_values.max();
    let s_min = svd.singular_values.min();
    let condition = s_max / s_min;
    if !(condition <= MAX_CONDITION) {
        return Err(Error::IllConditioned { condition });
    }
    let rhs = DVector::from_column_slice(y);
    let scaled = svd
        .solve(&rhs, 0.0)
        .map_err(|e| Error::InvalidInput(format!("least-squares solve failed: {e}")))?;
    let resid = &rhs - &x * &scaled;
    let rss = resid.norm_squared();
    let v_t = svd.v_t.as_ref().expect("SVD computed with V");
    let dof = m - depth;
    let sigma2 = if dof > 0 { rss / dof as f64 } else { f64::NAN };
    let mut coefficients = Vec::with_capacity(depth);
    let mut std_errors = Vec::with_capacity(depth);
    for j in 0..depth {
        coefficients.push(scaled[j] / scales[j]);
        // (XᵀX)^{-1} = V Σ^{-2} Vᵀ
        let var: f64 = (0..depth)
            .map(|l| {
                let vjl = v_t[(l, j)];
                vjl * vjl / (svd.singular_values[l] * svd.singular_values[l])
            })
            .sum();
        std_errors.push((sigma2 * var).sqrt() / scales[j]);
    }
    Ok(PowerFit {
        first_power,
        coefficients,
        std_errors,
        residual_norm: rss.sqrt(),
        condition,
    })
}

/// Leading constants and fitted higher coefficients of the expansion of `E_n(α)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionReport {
    pub alpha: f64,
    pub a0_wilkins: f64,
    /// `A_0^α` (or `A_0` for `α = 0`).
    pub a0_alpha: f64,
    /// `1/π`, or `2/π` for `α = 0`.
    pub lead: f64,
    /// `A_1, A_2, …` fitted on even `n`.
    pub fitted_even: Vec<f64>,
    /// `A_1, A_2, …` fitted on odd `n`.
    pub fitted_odd: Vec<f64>,
    pub stderr_even: Vec<f64>,
    pub stderr_odd: Vec<f64>,
    pub residual_norm: f64,
    pub n_range: (usize, usize),
}

/// Computes `E_n(α)` on `n_values`, removes the known part
/// `lead·log(n+1) + A_0^α`, and fits `Σ_{p=1}^{depth} A_p (n+1)^{−p}` to the
/// remainder separately on even and odd `n`.
pub fn fit_expansion(
    params: &GeronimusParams,
    n_values: &[usize],
    depth: usize,
    config: &QuadratureConfig,
) -> Result<ExpansionReport> {
    let (even, odd): (Vec<usize>, Vec<usize>) = n_values.iter().partition(|&&n| n % 2 == 0);
    if even.len() < depth + 2 || odd.len() < depth + 2 {
        return Err(Error::InvalidInput(format!(
            "a depth-{depth} fit needs at least {} even and {} odd degrees, got {} and {}",
            depth + 2,
            depth + 2,
            even.len(),
            odd.len()
        )));
    }
    let a0 = wilkins_a0(config)?;
    let c0 = constant_term(params, a0)?;
    let lead = leading_coefficient(params);

    let values: Vec<Result<f64>> = n_values
        .par_iter()
        .map(|&n| expected_real_zeros(params, n, config))
        .collect();
    let mut even_y = Vec::new();
    let mut odd_y = Vec::new();
    for (&n, v) in n_values.iter().zip(values) {
        let y = v? - lead * ((n + 1) as f64).ln() - c0;
        if n % 2 == 0 {
            even_y.push(y);
        } else {
            odd_y.push(y);
        }
    }
    let fe = fit_inverse_powers(&even, &even_y, 1, depth)?;
    let fo = fit_inverse_powers(&odd, &odd_y, 1, depth)?;
    Ok(ExpansionReport {
        alpha: params.alpha(),
        a0_wilkins: a0,
        a0_alpha: c0,
        lead,
        fitted_even: fe.coefficients,
        fitted_odd: fo.coefficients,
        stderr_even: fe.std_errors,
        stderr_odd: fo.std_errors,
        residual_norm: fe.residual_norm.hypot(fo.residual_norm),
        n_range: (
            n_values.iter().copied().min().unwrap_or(0),
            n_values.iter().copied().max().unwrap_or(0),
        ),
    })
}

/// `lead·log(n+1) + A_0^α + Σ_{p=1}^{order−1} A_p^{α,(−1)^n} (n+1)^{−p}`, using
/// the coefficients fitted on the parity of `n`.
pub fn asymptotic_estimate(
    params: &GeronimusParams,
    n: usize,
    report: &ExpansionReport,
    order: usize,
) -> Result<f64> {
    if order == 0 {
        return Err(Error::InvalidInput("order counts the constant term and must be at least 1".into()));
    }
    if (report.alpha - params.alpha()).abs() > 0.0 {
        return Err(Error::InvalidInput(format!(
            "report was fitted for α = {}, not {}",
            report.alpha,
            params.alpha()
        )));
    }
    let (coeffs, parity) = if n % 2 == 0 {
        (&report.fitted_even, "even")
    } else {
        (&report.fitted_odd, "odd")
    };
    if order - 1 > coeffs.len() {
        return Err(Error::MissingCoefficient {
            order: coeffs.len() + 1,
            parity,
        });
    }
    let k = (n + 1) as f64;
    let mut total = report.lead * k.ln() + report.a0_alpha;
    for (p, c) in coeffs.iter().take(order - 1).enumerate() {
        total += c * k.powi(-(p as i32 + 1));
    }
    Ok(total)
}

/// The report carrying only the closed-form constants, for estimates of order 1.
pub fn leading_report(params: &GeronimusParams, config: &QuadratureConfig) -> Result<ExpansionReport> {
    let a0 = wilkins_a0(config)?;
    Ok(ExpansionReport {
        alpha: params.alpha(),
        a0_wilkins: a0,
        a0_alpha: constant_term(params, a0)?,
        lead: leading_coefficient(params),
        fitted_even: Vec::new(),
        fitted_odd: Vec::new(),
        stderr_even: Vec::new(),
        stderr_odd: Vec::new(),
        residual_norm: 0.0,
        n_range: (0, 0),
    })
}
