//! The auxiliary functions `γ(s) = 2s/(e^s − e^{−s})` and
//! `f(t) = sqrt(1 − γ(t)²)` that enter the constant term of the Kac expansion.

/// `γ(s) = s / sinh s`, with `γ(0) = 1`.
pub fn aux_gamma(s: f64) -> f64 {
    let s = s.abs();
    if s < 1e-4 {
        let s2 = s * s;
        return 1.0 - s2 / 6.0 + 7.0 * s2 * s2 / 360.0;
    }
    2.0 * s * (-s).exp() / -(-2.0 * s).exp_m1()
}

/// `(sinh t − t)/t³` for `0 ≤ t < 1`, by its Taylor series.
fn sinh_minus_id_over_cube(t: f64) -> f64 {
    let t2 = t * t;
    // Σ t^{2j}/(2j+3)!
    let mut term = 1.0 / 6.0;
    let mut sum = term;
    let mut j = 0.0;
    loop {
        j += 1.0;
        term *= t2 / ((2.0 * j + 2.0) * (2.0 * j + 3.0));
        sum += term;
        if term < 1e-18 * sum {
            return sum;
        }
    }
}

/// `f(t)/t`, finite at the origin where it equals `1/√3`.
pub fn aux_f_over_t(t: f64) -> f64 {
    let t = t.abs();
    if t < 1.0 {
        // 1 − γ = (sinh t − t)/sinh t = γ t² q, so f²/t² = q γ (1 + γ).
        let g = aux_gamma(t);
        (sinh_minus_id_over_cube(t) * g * (1.0 + g)).sqrt()
    } else {
        aux_f(t) / t
    }
}

/// `f(t) = sqrt(1 − γ(t)²)`.
///
/// Below `t = 1` the factor `1 − γ` is formed from the series of `sinh t − t`;
/// above it `1 − γ` has no cancellation and `γ` decays like `2t e^{−t}`.
pub fn aux_f(t: f64) -> f64 {
    let t = t.abs();
    if t < 1.0 {
        t * aux_f_over_t(t)
    } else {
        let g = aux_gamma(t);
        ((1.0 - g) * (1.0 + g)).sqrt()
    }
}

/// `1 − f(t) = γ²/(1 + f)`, accurate for large `t`.
pub fn aux_one_minus_f(t: f64) -> f64 {
    let g = aux_gamma(t);
    g * g / (1.0 + aux_f(t))
}
