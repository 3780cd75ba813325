//! Reference values computed independently of the library.
#![allow(dead_code)]

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

pub fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

fn pow(x: &BigRational, k: usize) -> BigRational {
    num_traits::pow(x.clone(), k)
}

/// `h_{n+1}` of the Kac ensemble, `(n+1)xⁿ(1−x²)/(1−x^{2n+2})`, in exact
/// arithmetic and rounded once.
pub fn kac_h_exact(n: usize, x: f64) -> f64 {
    kac_h_rational(n, &rat(x)).to_f64().unwrap()
}

fn kac_h_rational(n: usize, x: &BigRational) -> BigRational {
    let one = BigRational::one();
    let k = BigRational::from_integer((n as i64 + 1).into());
    k * pow(x, n) * (&one - x * x) / (&one - pow(x, 2 * n + 2))
}

/// The Kac intensity `(1/π) sqrt(1 − h²)/(1 − x²)` with the radicand formed
/// exactly.
pub fn kac_density_exact(n: usize, x: f64) -> f64 {
    let xr = rat(x);
    let one = BigRational::one();
    let h = kac_h_rational(n, &xr);
    let w = &one - &xr * &xr;
    let sq = (&one - &h * &h) / (&w * &w);
    sq.to_f64().unwrap().sqrt() / std::f64::consts::PI
}

/// `h_{n+1}(x) = (1 − x²) b'/(1 − b²)` with `b = Φ_{n+1}/Φ*_{n+1}`, from the
/// monic recurrence and its derivative in exact rational arithmetic. The
/// ratio does not depend on the normalization, so no square roots appear.
pub fn h_exact(alpha: f64, n: usize, x: f64) -> f64 {
    h_rational(&rat(alpha), n, &rat(x)).to_f64().unwrap()
}

fn h_rational(a: &BigRational, n: usize, xr: &BigRational) -> BigRational {
    let one = BigRational::one();
    let zero = BigRational::from_integer(0.into());
    let (mut p, mut dp, mut s, mut ds) = (one.clone(), zero.clone(), one.clone(), zero);
    for _ in 0..=n {
        let np = xr * &p - a * &s;
        let ndp = &p + xr * &dp - a * &ds;
        let ns = &s - a * xr * &p;
        let nds = &ds - a * &p - a * xr * &dp;
        p = np;
        dp = ndp;
        s = ns;
        ds = nds;
    }
    let num = (&one - xr * xr) * (&dp * &s - &p * &ds);
    let den = &s * &s - &p * &p;
    num / den
}

/// `E_n(α)` as `(2/π) ∫_ℝ sqrt(1 − h²_{n+1}(tanh s)) ds`: the substitution
/// `x = tanh s` absorbs `1/(1 − x²)`, the integrand decays like `e^{−2|s|}`,
/// and the trapezoid rule is spectrally accurate. `1 − h²` is formed exactly.
/// Only practical for small `n`.
pub fn expected_zeros_oracle(alpha: f64, n: usize) -> f64 {
    let a = rat(alpha);
    let one = BigRational::one();
    let step = 0.02;
    let mut sum = 0.0;
    let mut k = 0i64;
    loop {
        let s = k as f64 * step;
        if s > 20.0 {
            break;
        }
        for x in [s.tanh(), -s.tanh()] {
            if x.abs() == 1.0 {
                continue;
            }
            let h = h_rational(&a, n, &rat(x));
            let v = (&one - &h * &h).to_f64().unwrap().max(0.0).sqrt();
            sum += if k == 0 { 0.5 * v } else { v };
        }
        k += 1;
    }
    2.0 / std::f64::consts::PI * sum * step
}

/// `A_0 = (2/π)(log 2 + ∫_0^∞ (f(t) − t/(1+t)) dt/t)`, which equals the split
/// form because `∫_0^1 dt/(1+t) = log 2 = ∫_1^∞ dt/(t(1+t))`. With `t = e^u`
/// the integrand is smooth and decays exponentially both ways.
pub fn wilkins_oracle() -> f64 {
    let f = |t: f64| {
        // 1 − t/sinh t, via a Taylor series of sinh t − t for small t
        let sh = t.sinh();
        let one_minus_g = if t < 0.1 {
            let t2 = t * t;
            let d = t * t2 * (1.0 / 6.0 + t2 / 120.0 + t2 * t2 / 5040.0 + t2 * t2 * t2 / 362880.0);
            d / sh
        } else {
            1.0 - t / sh
        };
        (one_minus_g * (2.0 - one_minus_g)).sqrt()
    };
    let step = 0.05;
    let mut sum = 0.0;
    for k in -900i32..=900 {
        let u = k as f64 * step;
        let t = u.exp();
        sum += f(t) - t / (1.0 + t);
    }
    2.0 / std::f64::consts::PI * (std::f64::consts::LN_2 + sum * step)
}

/// Orthonormal `(φ_m(z), φ_m*(z))` from the recurrence.
pub fn recurrence_pair(alpha: f64, m: usize, z: Complex64) -> (Complex64, Complex64) {
    let rho = (1.0 - alpha * alpha).sqrt();
    let mut p = Complex64::new(1.0, 0.0);
    let mut s = Complex64::new(1.0, 0.0);
    for _ in 0..m {
        let np = (z * p - alpha * s) / rho;
        let ns = (s - alpha * z * p) / rho;
        p = np;
        s = ns;
    }
    (p, s)
}

/// Monic `Φ_m(x)` at a real point.
pub fn monic_phi(alpha: f64, m: usize, x: f64) -> (f64, f64) {
    let (mut p, mut s) = (1.0, 1.0);
    for _ in 0..m {
        let np = x * p - alpha * s;
        let ns = s - alpha * x * p;
        p = np;
        s = ns;
    }
    (p, s)
}

/// `|a − b| ≤ rel·|b| + abs`
pub fn close(a: f64, b: f64, rel: f64, abs: f64) -> bool {
    (a - b).abs() <= rel * b.abs() + abs
}

pub fn close_c(a: Complex64, b: Complex64, rel: f64, abs: f64) -> bool {
    (a - b).norm() <= rel * b.norm() + abs
}
