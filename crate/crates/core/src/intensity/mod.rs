//! Real-zero intensity of random combinations of a basis.
//!
//! Two routes are provided. The kernel route works for any real basis
//! `f_0, …, f_n` with i.i.d. standard Gaussian weights:
//!
//! ```text
//! ρ_n(x) = (1/π) sqrt(K K₁₁ − K₁₀²) / K,   K = Σ f_i², K₁₀ = Σ f_i f_i', K₁₁ = Σ f_i'²
//! ```
//!
//! The ratio route is specific to Geronimus polynomials and uses
//! `b_{n+1} = φ_{n+1}/φ*_{n+1}` and `h_{n+1} = (1 − x²) b'_{n+1}/(1 − b²_{n+1})`:
//!
//! ```text
//! ρ_n(x) = (1/π) sqrt(1 − h²_{n+1}(x)) / |1 − x²|
//! ```
//!
//! with `h_{n+1}` taken from its closed form in terms of `r`, `ε` and `n`.

pub mod real_axis;

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geron::{branch_values, eval_real_with_derivative, orthonormal_values, GeronimusParams};
use real_axis::{terms, RealPoint};

/// A family of real functions `f_0, …, f_{size−1}` with analytic derivatives.
pub trait BasisFamily: Sync {
    /// Number of basis functions, `n + 1`.
    fn size(&self) -> usize;

    fn label(&self) -> &str;

    /// `(f_i(x), f_i'(x))`.
    fn eval(&self, i: usize, x: f64) -> (f64, f64);

    /// All values at once. Override when the family has a cheaper joint evaluator.
    fn eval_all(&self, x: f64) -> Vec<(f64, f64)> {
        (0..self.size()).map(|i| self.eval(i, x)).collect()
    }
}

/// `1, x, …, x^n`: the Kac ensemble.
#[derive(Debug, Clone, Copy)]
pub struct MonomialBasis {
    pub n: usize,
}

impl BasisFamily for MonomialBasis {
    fn size(&self) -> usize {
        self.n + 1
    }

    fn label(&self) -> &str {
        "monomial"
    }

    fn eval(&self, i: usize, x: f64) -> (f64, f64) {
        if i == 0 {
            (1.0, 0.0)
        } else {
            let p = x.powi(i as i32 - 1);
            (p * x, i as f64 * p)
        }
    }

    fn eval_all(&self, x: f64) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(self.n + 1);
        let mut p = 1.0;
        let mut prev = 0.0;
        for i in 0..=self.n {
            out.push((p, i as f64 * prev));
            prev = p;
            p *= x;
        }
        out
    }
}

/// Orthonormal Geronimus polynomials `φ_0, …, φ_n`.
#[derive(Debug, Clone, Copy)]
pub struct GeronimusBasis {
    pub params: GeronimusParams,
    pub n: usize,
}

impl BasisFamily for GeronimusBasis {
    fn size(&self) -> usize {
        self.n + 1
    }

    fn label(&self) -> &str {
        "geronimus"
    }

    fn eval(&self, i: usize, x: f64) -> (f64, f64) {
        let d = eval_real_with_derivative(&self.params, i, x);
        (d.phi, d.dphi)
    }

    fn eval_all(&self, x: f64) -> Vec<(f64, f64)> {
        orthonormal_values(&self.params, self.n, x)
    }
}

/// A basis given by a closure `(i, x) ↦ (f_i(x), f_i'(x))`.
pub struct FnBasis<F> {
    size: usize,
    label: String,
    f: F,
}

impl<F> FnBasis<F>
where
    F: Fn(usize, f64) -> (f64, f64) + Sync,
{
    pub fn new(size: usize, label: impl Into<String>, f: F) -> Self {
        Self {
            size,
            label: label.into(),
            f,
        }
    }
}

impl<F> BasisFamily for FnBasis<F>
where
    F: Fn(usize, f64) -> (f64, f64) + Sync,
{
    fn size(&self) -> usize {
        self.size
    }

    fn label(&self) -> &str {
        &self.label
    }

    fn eval(&self, i: usize, x: f64) -> (f64, f64) {
        (self.f)(i, x)
    }
}

/// Kac–Rice intensity of `Σ η_i f_i` from the kernel sums at `x`.
///
/// Rounding can push the radicand `K K₁₁ − K₁₀²` slightly below zero where the
/// intensity vanishes; values down to `−1e-12 · K K₁₁` are clamped to zero,
/// anything more negative means the evaluator is inconsistent.
pub fn kernel_intensity(basis: &dyn BasisFamily, x: f64) -> Result<f64> {
    let (mut k00, mut k10, mut k11) = (0.0, 0.0, 0.0);
    for (f, df) in basis.eval_all(x) {
        k00 += f * f;
        k10 += f * df;
        k11 += df * df;
    }
    if !(k00 > 0.0) {
        return Err(Error::DegenerateKernel { radicand: k00 });
    }
    let scale = k00 * k11;
    let radicand = scale - k10 * k10;
    if radicand < -1e-12 * scale {
        return Err(Error::DegenerateKernel {
            radicand: radicand / scale,
        });
    }
    Ok(radicand.max(0.0).sqrt() / (PI * k00))
}

/// `h_{n+1}(x)` from the closed form, for any real `x`.
///
/// Points outside `[−1, 1]` use `h_{n+1}(1/x) = h_{n+1}(x)`. The endpoint values
/// are `h_{n+1}(1) = 1` and `h_{n+1}(−1) = −(−1)^{n+1}`; `h_1 ≡ 1`.
pub fn h_n(params: &GeronimusParams, n: usize, x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.abs() > 1.0 {
        return h_n(params, n, 1.0 / x);
    }
    if n == 0 || x == 1.0 {
        return 1.0;
    }
    if x == -1.0 {
        return if n % 2 == 0 { 1.0 } else { -1.0 };
    }
    terms(params, n, RealPoint::from_x(x), false).h(1.0 - x)
}

/// `h_{n+1}(x)` straight from its definition, with `φ_{n+1}`, `φ*_{n+1}` and their
/// derivatives propagated through the recurrence.
///
/// `h = (1 − x²)(φ'φ* − φφ*')/(φ*² − φ²)`. Accurate away from the endpoints;
/// the closed form [`h_n`] should be preferred in production paths.
pub fn h_direct(params: &GeronimusParams, n: usize, x: f64) -> f64 {
    let d = eval_real_with_derivative(params, n + 1, x);
    let num = (1.0 - x) * (1.0 + x) * (d.dphi * d.phi_star - d.phi * d.dphi_star);
    let den = (d.phi_star - d.phi) * (d.phi_star + d.phi);
    num / den
}

/// The limit `h(x) = −α(1 + x)/r(x)`; `h(1) = −sgn α`, `h(−1) = 0`.
pub fn h_limit(params: &GeronimusParams, x: f64) -> f64 {
    if x.abs() > 1.0 {
        return h_limit(params, 1.0 / x);
    }
    let (u, v) = (1.0 + x, 1.0 - x);
    if params.is_kac() || u == 0.0 {
        return 0.0;
    }
    if v == 0.0 {
        return -params.alpha().signum();
    }
    -params.alpha() * u / crate::geron::r_real(params, u, v)
}

/// Kac–Rice intensity `ρ_n(x)` of the Geronimus ensemble through `h_{n+1}`.
///
/// The radicand `1 − h²_{n+1}` is assembled from its factored form, so the
/// intensity keeps full relative accuracy inside the spike near `x = 1`
/// (for `α > 0`). Where `ε^{n+1}` is close to `±1` (next to `x = −1`, and next
/// to `x = 1` for tiny `α`) the factored form itself cancels and the kernel
/// sums are used instead; at `x = 1` the factored form extends continuously (the Kac case uses the
/// known value `sqrt(n(n+2)/12)/π`). Outside `[−1, 1]`,
/// `ρ_n(x) = ρ_n(1/x)/x²`.
pub fn cd_ratio_intensity(params: &GeronimusParams, n: usize, x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if n == 0 {
        return 0.0;
    }
    if x.is_infinite() {
        return 0.0;
    }
    if x.abs() > 1.0 {
        return cd_ratio_intensity(params, n, 1.0 / x) / (x * x);
    }
    if x == 1.0 && params.is_kac() {
        let nf = n as f64;
        return (nf * (nf + 2.0) / 12.0).sqrt() / PI;
    }
    if x == -1.0 {
        return real_axis::kernel_density(params, n, x);
    }
    let pt = RealPoint::from_x(x);
    let t = terms(params, n, pt, false);
    if t.ln_abs_e > -real_axis::KERNEL_SWITCH {
        return real_axis::kernel_density(params, n, x);
    }
    if t.d == 0.0 {
        return f64::INFINITY;
    }
    t.density_kernel(pt.u) / PI
}

/// `b_{n+1}(z) = φ_{n+1}(z)/φ*_{n+1}(z)` from the closed form
///
/// ```text
/// b_{n+1} = (φ − λ − ε^{n+1}(ψ − λ)) / (φ − λz − ε^{n+1}(ψ − λz)),   λ = 2(1+α)
/// ```
///
/// The expression is invariant under `r → −r` (which swaps `φ, ψ` and inverts
/// `ε`), so it holds off the disk too; there it is evaluated with `ε^{−(n+1)}`.
pub fn b_ratio(params: &GeronimusParams, n: usize, z: Complex64) -> Result<Complex64> {
    if !z.is_finite() {
        return Err(Error::Domain(format!("non-finite evaluation point {z}")));
    }
    if z == Complex64::new(1.0, 0.0) {
        return Ok(z);
    }
    let alpha = params.alpha();
    let lam = 2.0 * (1.0 + alpha);
    let k = n + 1;

    if z.im == 0.0 && z.re.abs() <= 1.0 {
        let x = z.re;
        if x == -1.0 {
            return Ok(Complex64::new(if k % 2 == 0 { 1.0 } else { -1.0 }, 0.0));
        }
        let pt = RealPoint::from_x(x);
        let t = terms(params, n, pt, false);
        let v = pt.v;
        // φ − λ = r − v − 2α; for α > 0 the difference r − 2α vanishes at x = 1.
        let pa = if alpha > 0.0 {
            v * ((v - 4.0 * alpha * alpha) / (t.r + 2.0 * alpha) - 1.0)
        } else {
            t.r - v - 2.0 * alpha
        };
        let pb = pa + lam * v;
        let qa = t.psi_big - lam;
        let qb = t.psi_big - lam * x;
        let num = pa - t.e * qa;
        let den = pb - t.e * qb;
        if den == 0.0 {
            return Err(Error::Pole { re: x, im: 0.0 });
        }
        return Ok(Complex64::new(num / den, 0.0));
    }

    let bv = branch_values(params, z)?;
    let pa = bv.phi_big - lam;
    let pb = bv.phi_big - lam * z;
    let qa = bv.psi_big - lam;
    let qb = bv.psi_big - lam * z;
    let (num, den) = if bv.eps.norm() <= 1.0 {
        let e = complex_pow(bv.eps, k);
        (pa - e * qa, pb - e * qb)
    } else {
        let f = complex_pow(bv.eps.inv(), k);
        (pa * f - qa, pb * f - qb)
    };
    let scale = pb.norm() + qb.norm();
    if den.norm() <= 1e-14 * scale {
        return Err(Error::Pole { re: z.re, im: z.im });
    }
    Ok(num / den)
}

/// `w^k` through the logarithm, so that large `k` neither overflows nor
/// accumulates rounding from repeated squaring.
fn complex_pow(w: Complex64, k: usize) -> Complex64 {
    if w == Complex64::new(0.0, 0.0) {
        return if k == 0 { Complex64::new(1.0, 0.0) } else { w };
    }
    (w.ln() * k as f64).exp()
}

/// The limit `b(z) = −2α/(r(z) + 1 − z)` of `b_{n+1}` in the closed unit disk
/// minus the support arc; `b(1) = −sgn α` for `α ≠ 0`.
///
/// For `α = 0`, `b_{n+1}(z) = z^{n+1}`, whose limit is `0` inside the disk and
/// `1` at `z = 1`.
pub fn b_limit(params: &GeronimusParams, z: Complex64) -> Result<Complex64> {
    if !(z.norm() <= 1.0) {
        return Err(Error::Domain(format!(
            "the limit of b_(n+1) is taken in the closed unit disk, got {z}"
        )));
    }
    let alpha = params.alpha();
    if params.is_kac() {
        let one = Complex64::new(1.0, 0.0);
        return Ok(if z == one { one } else { Complex64::new(0.0, 0.0) });
    }
    if z.im == 0.0 {
        let x = z.re;
        let r = crate::geron::r_real(params, 1.0 + x, 1.0 - x);
        return Ok(Complex64::new(-2.0 * alpha / (r + 1.0 - x), 0.0));
    }
    let bv = branch_values(params, z)?;
    Ok(-2.0 * alpha / (bv.r + 1.0 - z))
}

/// Sup over a uniform grid of
///
/// ```text
/// |h_{n+1}(x) − h(x)| / ( |h(x)| (1−x)² (n+1) e^{−√(n+1)/ρ} )
/// ```
///
/// on `[−1 + (n+1)^{−1/2}, 1 − δ_α^{n+1}]`. Boundedness of this ratio in `n` is
/// the error envelope of `h_{n+1} → h`. The grid includes both ends; the point
/// `x = 1` (reached when `δ_α = 0`) is skipped because both sides of the ratio
/// vanish there. The deviation is formed in the log domain, so an underflowing
/// `ε^{n+1}` cannot hide a growing ratio.
pub fn verify_h_error_envelope(params: &GeronimusParams, n: usize, grid_size: usize) -> Result<f64> {
    if params.is_kac() {
        return Err(Error::Domain("the envelope ratio divides by h, which vanishes for α = 0".into()));
    }
    if grid_size < 2 {
        return Err(Error::InvalidInput("grid_size must be at least 2".into()));
    }
    let k = (n + 1) as f64;
    let u_lo = k.powf(-0.5);
    let v_hi = if params.delta_alpha() > 0.0 {
        (k * params.delta_alpha().ln()).exp()
    } else {
        0.0
    };
    // Interval in u-coordinates: [u_lo, 2 − v_hi].
    let width = 2.0 - v_hi - u_lo;
    if !(width > 0.0) {
        return Err(Error::EmptyRange {
            lower: u_lo - 1.0,
            upper: 1.0 - v_hi,
        });
    }
    let envelope = k * (-k.sqrt() / params.rho()).exp();
    let step = width / (grid_size - 1) as f64;
    let worst = (0..grid_size)
        .into_par_iter()
        .filter_map(|i| {
            let u = u_lo + i as f64 * step;
            let v = v_hi + (grid_size - 1 - i) as f64 * step;
            if v <= 0.0 {
                return None;
            }
            let pt = RealPoint { x: u - 1.0, u, v };
            if pt.x == 0.0 {
                // ε(0) = 0, so h_{n+1}(0) = h(0) for n ≥ 1.
                return Some(if n == 0 { f64::NAN } else { 0.0 });
            }
            let t = terms(params, n, pt, false);
            let ln_ratio = t.ln_abs_deviation(pt, n)
                - t.h_lim.abs().ln()
                - 2.0 * v.ln()
                - envelope.ln();
            Some(ln_ratio.exp())
        })
        .reduce(|| 0.0, f64::max);
    Ok(worst)
}

/// Which evaluator produced an [`IntensityProfile`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IntensityMethod {
    /// Kernel sums over the Geronimus basis; `h` from the recurrence definition.
    Kernel,
    /// `h_{n+1}` from the recurrence definition, density as `sqrt(1 − h²)/(1 − x²)`.
    CdRatio,
    /// Closed form of `h_{n+1}` with the factored radicand.
    ClosedForm,
}

/// `ρ_n` and `h_{n+1}` sampled on a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntensityProfile {
    pub alpha: f64,
    pub n: usize,
    pub grid: Vec<f64>,
    pub h_values: Vec<f64>,
    pub h_limit: Vec<f64>,
    pub density: Vec<f64>,
    pub method: IntensityMethod,
}

impl IntensityProfile {
    pub fn compute(
        params: &GeronimusParams,
        n: usize,
        grid: Vec<f64>,
        method: IntensityMethod,
    ) -> Result<Self> {
        if grid.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("grid contains non-finite abscissae".into()));
        }
        if grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidInput("grid must be strictly increasing".into()));
        }
        let rows: Vec<Result<(f64, f64, f64)>> = grid
            .par_iter()
            .map(|&x| {
                let lim = h_limit(params, x);
                match method {
                    IntensityMethod::ClosedForm => {
                        Ok((h_n(params, n, x), lim, cd_ratio_intensity(params, n, x)))
                    }
                    IntensityMethod::CdRatio => {
                        let h = direct_or_endpoint(params, n, x);
                        let dens = if x.abs() == 1.0 {
                            cd_ratio_intensity(params, n, x)
                        } else {
                            ((1.0 - h * h).max(0.0)).sqrt() / (PI * (1.0 - x * x).abs())
                        };
                        Ok((h, lim, dens))
                    }
                    IntensityMethod::Kernel => {
                        let basis = GeronimusBasis { params: *params, n };
                        Ok((direct_or_endpoint(params, n, x), lim, kernel_intensity(&basis, x)?))
                    }
                }
            })
            .collect();
        let mut h_values = Vec::with_capacity(grid.len());
        let mut h_lim = Vec::with_capacity(grid.len());
        let mut density = Vec::with_capacity(grid.len());
        for row in rows {
            let (h, l, d) = row?;
            h_values.push(h);
            h_lim.push(l);
            density.push(d);
        }
        Ok(Self {
            alpha: params.alpha(),
            n,
            grid,
            h_values,
            h_limit: h_lim,
            density,
            method,
        })
    }
}

fn direct_or_endpoint(params: &GeronimusParams, n: usize, x: f64) -> f64 {
    if x.abs() == 1.0 || n == 0 {
        h_n(params, n, x)
    } else {
        h_direct(params, n, x)
    }
}

/// `count` equally spaced points from `lo` to `hi` inclusive.
pub fn uniform_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (count - 1) as f64;
            (0..count)
                .map(|i| if i + 1 == count { hi } else { lo + i as f64 * step })
                .collect()
        }
    }
}
