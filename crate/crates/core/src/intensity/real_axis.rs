//! Cancellation-free assembly of `h_{n+1}` and the intensity on `[−1, 1]`.
//!
//! With `E = ε^{n+1}`, `R = r + α(1+x)`, `S = r − α(1+x)` and `h = −α(1+x)/r`,
//! the closed form of `h_{n+1}` rearranges into
//!
//! ```text
//! D       = (1 − E)(S + R E)
//! 1 − h_{n+1} = (1−x)² M / D,     M   = (1 − E²) ρ²/r − (n+1)(1+x) E/x
//! 1 + h_{n+1} = N / D,            N   = (1 − E)(S² + R² E)/r + T
//! h_{n+1} − h = (T − 2 h R E (1 − E)) / D,  T = (n+1)(1+x)(1−x)² E/x
//! ```
//!
//! using `S R = ρ²(1−x)²`. Every quantity is formed from the exact
//! offsets `u = 1 + x` and `v = 1 − x`, and `E` lives in the log domain, so
//! `1 − h²_{n+1} = v² M N / D²` keeps its relative accuracy where `|h| → 1`.

use crate::geron::{r_real, GeronimusParams};

/// A point of `[−1, 1]` carried together with its exact distances to `∓1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealPoint {
    pub x: f64,
    pub u: f64,
    pub v: f64,
}

impl RealPoint {
    pub fn from_x(x: f64) -> Self {
        Self {
            x,
            u: 1.0 + x,
            v: 1.0 - x,
        }
    }

    /// The point `−1 + u`, with `u` kept exactly.
    pub fn from_u(u: f64) -> Self {
        Self {
            x: u - 1.0,
            u,
            v: 2.0 - u,
        }
    }

    /// The point `1 − v`, with `v` kept exactly.
    pub fn from_v(v: f64) -> Self {
        Self {
            x: 1.0 - v,
            u: 2.0 - v,
            v,
        }
    }
}

/// The pieces of the rearranged closed form at one point.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Terms {
    pub r: f64,
    pub psi_big: f64,
    /// `ln|E|`, finite even where `E` itself underflows.
    pub ln_abs_e: f64,
    pub e: f64,
    pub one_minus_e: f64,
    pub h_lim: f64,
    pub big_r: f64,
    pub d: f64,
    pub m: f64,
    pub n_plus: f64,
}

impl Terms {
    /// `1 − h_{n+1}`
    pub fn one_minus_h(&self, v: f64) -> f64 {
        v * v * self.m / self.d
    }

    /// `1 + h_{n+1}`
    pub fn one_plus_h(&self) -> f64 {
        self.n_plus / self.d
    }

    pub fn h(&self, v: f64) -> f64 {
        let a = self.one_minus_h(v);
        let b = self.one_plus_h();
        let h = if a.abs() <= b.abs() { 1.0 - a } else { b - 1.0 };
        h.clamp(-1.0, 1.0)
    }

    /// `sqrt(1 − h²_{n+1}) / (1 − x²)`
    pub fn density_kernel(&self, u: f64) -> f64 {
        (self.m * self.n_plus).max(0.0).sqrt() / (self.d.abs() * u)
    }

    /// `ln|h_{n+1} − h|`, from `h_{n+1} − h = (T − 2hRE(1 − E))/D` with `E` factored out, so that it stays finite when
    /// `E` underflows. Needs `x ≠ 0`.
    pub fn ln_abs_deviation(&self, pt: RealPoint, n: usize) -> f64 {
        let k = (n + 1) as f64;
        let inner = k * pt.u * pt.v * pt.v / pt.x
            - 2.0 * self.h_lim * self.big_r * self.one_minus_e;
        self.ln_abs_e + inner.abs().ln() - self.d.abs().ln()
    }
}

/// Evaluates the closed-form pieces at an interior point (`−1 < x ≤ 1`).
///
/// With `flush_e` the powers `ε^{n+1}` and `ε^n` are replaced by zero, which
/// gives the limit profile without the spike near `x = 1`.
pub(crate) fn terms(params: &GeronimusParams, n: usize, pt: RealPoint, flush_e: bool) -> Terms {
    let RealPoint { x, u, v } = pt;
    let alpha = params.alpha();
    let rho2 = params.rho() * params.rho();
    let k = (n + 1) as f64;

    let r = r_real(params, u, v);
    let phi_big = u + r;
    let psi_big = 4.0 * rho2 * x / phi_big;
    let (big_r, s) = if alpha >= 0.0 {
        let big_r = r + alpha * u;
        (big_r, rho2 * v * v / big_r)
    } else {
        let s = r - alpha * u;
        (rho2 * v * v / s, s)
    };

    // 1 − |ε| = 2 min(u, r)/φ, since 1 − ε = 2r/φ and 1 + ε = 2u/φ.
    let ln_abs_eps = (-2.0 * u.min(r) / phi_big).ln_1p();
    let eps_over_x = 4.0 * rho2 / (phi_big * phi_big);

    let ln_abs_e = k * ln_abs_eps;
    let (e, one_minus_e, one_plus_e, ex) = if flush_e {
        (0.0, 1.0, 1.0, 0.0)
    } else {
        let ln_e = ln_abs_e;
        let abs_e = ln_e.exp();
        let one_minus_abs = -ln_e.exp_m1();
        let negative = x < 0.0 && (n + 1) % 2 == 1;
        let (e, ome, ope) = if negative {
            (-abs_e, 1.0 + abs_e, one_minus_abs)
        } else {
            (abs_e, one_minus_abs, 1.0 + abs_e)
        };
        // E/x = ε^n · ε/x
        let ex = if n == 0 {
            eps_over_x
        } else {
            let mag = (n as f64 * ln_abs_eps).exp() * eps_over_x;
            if x < 0.0 && n % 2 == 1 {
                -mag
            } else {
                mag
            }
        };
        (e, ome, ope, ex)
    };

    // With E < 0 the sums S + RE and S² + R²E can cancel near x = −1; there
    // R − S = 2αu is small and 1 + E is known accurately.
    let (s_plus, s2_plus) = if e < 0.0 {
        (
            s * one_plus_e + 2.0 * alpha * u * e,
            s * s * one_plus_e + 4.0 * alpha * u * r * e,
        )
    } else {
        (s + big_r * e, s * s + big_r * big_r * e)
    };

    let d = one_minus_e * s_plus;
    let t = k * u * v * v * ex;
    let m = one_minus_e * one_plus_e * rho2 / r - k * u * ex;
    let n_plus = one_minus_e * s2_plus / r + t;

    Terms {
        r,
        psi_big,
        ln_abs_e,
        e,
        one_minus_e,
        h_lim: -alpha * u / r,
        big_r,
        d,
        m,
        n_plus,
    }
}

/// Where `|ε^{n+1}|` is within this distance (in log terms) of one, i.e.
/// `(n+1)|ln|ε(x)|| < KERNEL_SWITCH`, the factored form cancels to the order
/// of `((n+1) ln|ε|)^{-2}` ulps and the kernel sums are used instead. This
/// happens next to `x = −1`, and next to `x = 1` when `α` is tiny.
pub(crate) const KERNEL_SWITCH: f64 = 0.2;

/// `sqrt(1 − h²_{n+1}(x))/(1 − x²)` for `−1 < x ≤ 1`; the integrand of the
/// expected-count integral up to the factor `2/π`.
pub(crate) fn integrand(params: &GeronimusParams, n: usize, pt: RealPoint, flush_e: bool) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let t = terms(params, n, pt, flush_e);
    if !flush_e && t.ln_abs_e > -KERNEL_SWITCH {
        return std::f64::consts::PI * kernel_density(params, n, pt.x);
    }
    t.density_kernel(pt.u)
}

/// Kernel-sum intensity over the orthonormal Geronimus basis, in O(n).
pub(crate) fn kernel_density(params: &GeronimusParams, n: usize, x: f64) -> f64 {
    let basis = super::GeronimusBasis { params: *params, n };
    super::kernel_intensity(&basis, x).unwrap_or(f64::NAN)
}
