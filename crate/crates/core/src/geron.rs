//! Geronimus polynomials on the unit circle.
//!
//! The monic polynomials `Φ_m` and their reversed partners `Φ_m*` satisfy the
//! Szegő recurrence with a constant real Verblunsky coefficient `α`:
//!
//! ```text
//! Φ_{m+1}(z)  = z Φ_m(z) − α Φ_m*(z)
//! Φ_{m+1}*(z) = Φ_m*(z) − α z Φ_m(z),      Φ_0 = Φ_0* = 1
//! ```
//!
//! and the orthonormal versions are `φ_m = ρ^{-m} Φ_m` with `ρ = sqrt(1 − α²)`.
//! Besides the recurrence this module provides the closed Chebyshev form of
//! `φ_m`, the square-root branch `r(z)` that governs their asymptotics, and the
//! helper functions `φ(z) = z + 1 + r(z)`, `ψ(z) = z + 1 − r(z)`, `ε = ψ/φ`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Distance to the unit circle below which a point counts as lying on it.
const CIRCLE_TOL: f64 = 1e-12;

/// Renormalisation thresholds for the log-scaled recurrence.
const SCALE_HI: f64 = 1e150;
const SCALE_LO: f64 = 1e-150;

/// The Verblunsky parameter `α` and the constants derived from it.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct GeronimusParams {
    alpha: f64,
    rho: f64,
    delta_alpha: f64,
}

impl GeronimusParams {
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha.abs() >= 1.0 {
            return Err(Error::InvalidAlpha(alpha));
        }
        // (1 - α)(1 + α) is exact to one rounding, unlike 1 - α².
        let rho = ((1.0 - alpha) * (1.0 + alpha)).sqrt();
        let delta_alpha = if alpha > 0.0 {
            ((1.0 - alpha) / (1.0 + alpha)).cbrt()
        } else {
            0.0
        };
        Ok(Self {
            alpha,
            rho,
            delta_alpha,
        })
    }

    /// The Kac case `α = 0`, where `φ_m(z) = z^m`.
    pub fn kac() -> Self {
        Self {
            alpha: 0.0,
            rho: 1.0,
            delta_alpha: 0.0,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Width exponent of the excluded neighbourhood of `x = 1` when `α > 0`.
    pub fn delta_alpha(&self) -> f64 {
        self.delta_alpha
    }

    pub fn is_kac(&self) -> bool {
        self.alpha == 0.0
    }

    /// `ε(1) = (1 − |α|)/(1 + |α|)`.
    pub fn eps_at_one(&self) -> f64 {
        (1.0 - self.alpha.abs()) / (1.0 + self.alpha.abs())
    }

    /// Angle `2 arcsin|α|` at which the support arc `Δ_α` starts.
    pub fn arc_angle(&self) -> f64 {
        2.0 * self.alpha.abs().asin()
    }

    /// Whether `z` lies on `Δ_α = {e^{iθ} : 2 arcsin|α| ≤ θ ≤ 2π − 2 arcsin|α|}`.
    pub fn on_support_arc(&self, z: Complex64) -> bool {
        (z.norm() - 1.0).abs() <= CIRCLE_TOL && z.arg().abs() >= self.arc_angle() - CIRCLE_TOL
    }
}

/// Values of `(Φ_m, Φ_m*)` (monic) or `(φ_m, φ_m*)` (orthonormal) at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolyPair {
    pub phi: Complex64,
    pub phi_star: Complex64,
    pub degree: usize,
    pub normalized: bool,
}

/// A pair stored as `mantissa · exp(log_scale)`, for degrees where the plain
/// values would overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledPair {
    pub phi: Complex64,
    pub phi_star: Complex64,
    pub log_scale: f64,
    pub degree: usize,
    pub normalized: bool,
}

impl ScaledPair {
    /// `φ_m / φ_m*`, which does not depend on the scale.
    pub fn ratio(&self) -> Complex64 {
        self.phi / self.phi_star
    }

    pub fn ln_abs_phi(&self) -> f64 {
        self.phi.norm().ln() + self.log_scale
    }

    pub fn ln_abs_phi_star(&self) -> f64 {
        self.phi_star.norm().ln() + self.log_scale
    }

    /// Converts back to plain values, failing if they are not representable.
    pub fn to_pair(&self) -> Result<PolyPair> {
        let s = self.log_scale.exp();
        let pair = PolyPair {
            phi: self.phi * s,
            phi_star: self.phi_star * s,
            degree: self.degree,
            normalized: self.normalized,
        };
        if pair.phi.is_finite() && pair.phi_star.is_finite() {
            Ok(pair)
        } else {
            Err(Error::Overflow {
                degree: self.degree,
            })
        }
    }
}

/// Runs `m` steps of the Szegő recurrence from `Φ_0 = Φ_0* = 1`.
///
/// With `normalized` every step is divided by `ρ`, producing `φ_m = ρ^{-m} Φ_m`.
pub fn eval_pair_recurrence(
    params: &GeronimusParams,
    m: usize,
    z: Complex64,
    normalized: bool,
) -> Result<PolyPair> {
    if !z.is_finite() {
        return Err(Error::Domain(format!("non-finite evaluation point {z}")));
    }
    let alpha = params.alpha;
    let inv_rho = if normalized { 1.0 / params.rho } else { 1.0 };
    let mut phi = Complex64::new(1.0, 0.0);
    let mut phi_star = Complex64::new(1.0, 0.0);
    for k in 0..m {
        let next = z * phi - alpha * phi_star;
        let next_star = phi_star - alpha * z * phi;
        phi = next * inv_rho;
        phi_star = next_star * inv_rho;
        if !(phi.is_finite() && phi_star.is_finite()) {
            return Err(Error::Overflow { degree: k + 1 });
        }
    }
    Ok(PolyPair {
        phi,
        phi_star,
        degree: m,
        normalized,
    })
}

/// Log-magnitude variant of [`eval_pair_recurrence`]; never overflows.
pub fn eval_pair_scaled(
    params: &GeronimusParams,
    m: usize,
    z: Complex64,
    normalized: bool,
) -> Result<ScaledPair> {
    if !z.is_finite() {
        return Err(Error::Domain(format!("non-finite evaluation point {z}")));
    }
    let alpha = params.alpha;
    let mut phi = Complex64::new(1.0, 0.0);
    let mut phi_star = Complex64::new(1.0, 0.0);
    let mut log_scale = 0.0;
    for _ in 0..m {
        let next = z * phi - alpha * phi_star;
        phi_star -= alpha * z * phi;
        phi = next;
        let size = phi.norm().max(phi_star.norm());
        if size > SCALE_HI || (size < SCALE_LO && size > 0.0) {
            let ln = size.ln();
            phi /= size;
            phi_star /= size;
            log_scale += ln;
        }
    }
    if normalized {
        log_scale -= m as f64 * params.rho.ln();
    }
    Ok(ScaledPair {
        phi,
        phi_star,
        log_scale,
        degree: m,
        normalized,
    })
}

/// Orthonormal values and first derivatives at a real point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealPairDerivative {
    pub phi: f64,
    pub dphi: f64,
    pub phi_star: f64,
    pub dphi_star: f64,
}

/// `(φ_m, φ_m', φ_m*, φ_m*')` at real `x`, differentiating the recurrence.
pub fn eval_real_with_derivative(params: &GeronimusParams, m: usize, x: f64) -> RealPairDerivative {
    let alpha = params.alpha;
    let inv_rho = 1.0 / params.rho;
    let (mut p, mut dp, mut s, mut ds) = (1.0, 0.0, 1.0, 0.0);
    for _ in 0..m {
        let np = (x * p - alpha * s) * inv_rho;
        let ndp = (p + x * dp - alpha * ds) * inv_rho;
        let ns = (s - alpha * x * p) * inv_rho;
        let nds = (ds - alpha * p - alpha * x * dp) * inv_rho;
        p = np;
        dp = ndp;
        s = ns;
        ds = nds;
    }
    RealPairDerivative {
        phi: p,
        dphi: dp,
        phi_star: s,
        dphi_star: ds,
    }
}

/// `(φ_i(x), φ_i'(x))` for `i = 0..=n`.
pub fn orthonormal_values(params: &GeronimusParams, n: usize, x: f64) -> Vec<(f64, f64)> {
    let alpha = params.alpha;
    let inv_rho = 1.0 / params.rho;
    let (mut p, mut dp, mut s, mut ds) = (1.0, 0.0, 1.0, 0.0);
    let mut out = Vec::with_capacity(n + 1);
    out.push((p, dp));
    for _ in 0..n {
        let np = (x * p - alpha * s) * inv_rho;
        let ndp = (p + x * dp - alpha * ds) * inv_rho;
        let ns = (s - alpha * x * p) * inv_rho;
        let nds = (ds - alpha * p - alpha * x * dp) * inv_rho;
        p = np;
        dp = ndp;
        s = ns;
        ds = nds;
        out.push((p, dp));
    }
    out
}

/// Chebyshev polynomial of the second kind, `U_m(y)`.
///
/// `U_{-1} ≡ 0` and negative indices follow `U_{-m-2} = −U_m`. Real arguments
/// in `[−1, 1]` (and the neighbourhood of `±1`, where the closed form divides
/// by a vanishing `sqrt(y² − 1)`) use the three-term recurrence; everywhere
/// else the explicit power formula is used with the branch of `sqrt(y² − 1)`
/// that behaves like `y` at infinity.
pub fn chebyshev_u(m: i64, y: Complex64) -> Complex64 {
    if m < -1 {
        return -chebyshev_u(-m - 2, y);
    }
    if m == -1 {
        return Complex64::new(0.0, 0.0);
    }
    if m == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let s = sqrt_y2_minus_1(y);
    if on_chebyshev_cut(y) || s.norm() < 1e-4 {
        return chebyshev_u_recurrence(m as usize, y);
    }
    let w = y + s;
    let k = (m + 1) as f64;
    let ln_w = w.ln();
    ((ln_w * k).exp() - (-ln_w * k).exp()) / (2.0 * s)
}

fn chebyshev_u_recurrence(m: usize, y: Complex64) -> Complex64 {
    let mut prev = Complex64::new(0.0, 0.0);
    let mut cur = Complex64::new(1.0, 0.0);
    for _ in 0..m {
        let next = 2.0 * y * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

fn on_chebyshev_cut(y: Complex64) -> bool {
    y.im.abs() <= 1e-15 * (1.0 + y.re.abs()) && y.re.abs() <= 1.0
}

/// `sqrt(y − 1)·sqrt(y + 1)` with principal roots: cut on `[−1, 1]`, `~ y` at infinity.
fn sqrt_y2_minus_1(y: Complex64) -> Complex64 {
    (y - 1.0).sqrt() * (y + 1.0).sqrt()
}

/// Result of the closed Chebyshev form together with a cancellation estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormPair {
    pub pair: PolyPair,
    /// Bits lost in the subtraction `U_m − c·U_{m−1}` (worst of the two entries).
    pub lost_bits: f64,
}

impl ClosedFormPair {
    /// More than half of the 53-bit mantissa was cancelled.
    pub fn precision_warning(&self) -> bool {
        self.lost_bits > 26.5
    }
}

/// Orthonormal `(φ_m, φ_m*)` from the Chebyshev form
///
/// ```text
/// φ_m(z)  = z^{m/2} ( U_m(y) − (1+α)/(ρ√z) · U_{m−1}(y) )
/// φ_m*(z) = z^{m/2} ( U_m(y) − √z(1+α)/ρ · U_{m−1}(y) ),   y = (z+1)/(2ρ√z)
/// ```
///
/// with the principal `√z`. Both right-hand sides are polynomials in `z`, so
/// the result does not depend on the branch of `sqrt(y² − 1)`; away from the
/// cut the products `z^{m/2} U_k(y)` are formed in the log domain so that large
/// degrees do not overflow before the cancellation against `z^{m/2}`.
pub fn eval_pair_closed_form(params: &GeronimusParams, m: usize, z: Complex64) -> Result<ClosedFormPair> {
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain("closed form needs √z, undefined at z = 0".into()));
    }
    if !z.is_finite() {
        return Err(Error::Domain(format!("non-finite evaluation point {z}")));
    }
    let rho = params.rho;
    let one_plus_alpha = 1.0 + params.alpha;
    let sz = z.sqrt();
    let y = (z + 1.0) / (2.0 * rho * sz);
    let c_phi = one_plus_alpha / (rho * sz);
    let c_star = sz * one_plus_alpha / rho;

    // z^{m/2} U_m(y) and z^{m/2} U_{m-1}(y)
    let s = sqrt_y2_minus_1(y);
    let (um, um1) = if on_chebyshev_cut(y) || s.norm() < 1e-4 {
        let zm = sz.powu(m as u32);
        (
            zm * chebyshev_u(m as i64, y),
            zm * chebyshev_u(m as i64 - 1, y),
        )
    } else {
        let w = y + s;
        let ln_w = w.ln();
        let base = sz.ln() * m as f64;
        let term = |k: f64| ((base + ln_w * k).exp() - (base - ln_w * k).exp()) / (2.0 * s);
        (term(m as f64 + 1.0), term(m as f64))
    };

    let phi = um - c_phi * um1;
    let phi_star = um - c_star * um1;
    let lost = |a: Complex64, b: Complex64, res: Complex64| {
        let big = a.norm().max(b.norm());
        if big == 0.0 {
            0.0
        } else if res.norm() == 0.0 {
            f64::INFINITY
        } else {
            (big / res.norm()).log2().max(0.0)
        }
    };
    let lost_bits = lost(um, c_phi * um1, phi).max(lost(um, c_star * um1, phi_star));
    let pair = PolyPair {
        phi,
        phi_star,
        degree: m,
        normalized: true,
    };
    if !(phi.is_finite() && phi_star.is_finite()) {
        return Err(Error::Overflow { degree: m });
    }
    Ok(ClosedFormPair { pair, lost_bits })
}

/// `r(z)` together with `φ(z) = z+1+r`, `ψ(z) = z+1−r` and `ε(z) = ψ/φ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchValues {
    pub r: Complex64,
    pub phi_big: Complex64,
    pub psi_big: Complex64,
    pub eps: Complex64,
}

/// Real `r(x)` on `[−1, 1]`: the positive root of `(x−1)² + 4α²x`.
///
/// The radicand is rewritten as `(x − c)² + 4α²ρ²` with `c = 1 − 2α²`, a sum
/// of non-negative terms, and `x − c` is formed from whichever of `1 ± x` is
/// exact.
pub(crate) fn r_real(params: &GeronimusParams, u: f64, v: f64) -> f64 {
    let a2 = params.alpha * params.alpha;
    let rho2 = params.rho * params.rho;
    let shift = if u < v { u - 2.0 * rho2 } else { 2.0 * a2 - v };
    (shift * shift + 4.0 * a2 * rho2).sqrt()
}

/// Evaluates `r(z)` on the branch holomorphic off `Δ_α` with `r(z)/z → 1` at
/// infinity, and the derived `φ, ψ, ε`.
///
/// Real points of `[−1, 1]` (including `−1`) use the real positive root. In
/// the disk `r(z) = sqrt(1 − a z)·sqrt(1 − ā z)` and outside it
/// `r(z) = z·sqrt(1 − a/z)·sqrt(1 − ā/z)`, where `a, ā` are the endpoints of
/// `Δ_α`; every factor has positive real part, so principal roots are
/// holomorphic on each side and the two pieces agree on the part of the
/// circle outside `Δ_α`. `ψ` is computed as `4ρ²z/φ` to avoid cancellation.
pub fn branch_values(params: &GeronimusParams, z: Complex64) -> Result<BranchValues> {
    if !z.is_finite() {
        return Err(Error::Domain(format!("non-finite evaluation point {z}")));
    }
    let rho2 = params.rho * params.rho;
    let r = if z.im == 0.0 && z.re.abs() <= 1.0 {
        Complex64::new(r_real(params, 1.0 + z.re, 1.0 - z.re), 0.0)
    } else {
        if params.on_support_arc(z) {
            return Err(Error::BranchCut { re: z.re, im: z.im });
        }
        let theta = params.arc_angle();
        let a = Complex64::from_polar(1.0, theta);
        let ab = a.conj();
        if z.norm() <= 1.0 {
            (1.0 - a * z).sqrt() * (1.0 - ab * z).sqrt()
        } else {
            z * (1.0 - a / z).sqrt() * (1.0 - ab / z).sqrt()
        }
    };
    let phi_big = z + 1.0 + r;
    let psi_big = 4.0 * rho2 * z / phi_big;
    Ok(BranchValues {
        r,
        phi_big,
        psi_big,
        eps: psi_big / phi_big,
    })
}
