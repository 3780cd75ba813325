//! Numerical integration: a globally adaptive 21-point Gauss–Kronrod scheme
//! over several segments at once, and composite Gauss–Legendre rules.

use serde::Serialize;

use crate::error::{Error, Result};

/// Tolerances and limits for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Use the endpoint changes of variables (stretched coordinates near
    /// `x = −1` and around the spike near `x = 1`).
    pub endpoint_substitution: bool,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-11,
            rel_tol: 1e-11,
            max_subdivisions: 2000,
            endpoint_substitution: true,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(Error::InvalidInput(format!(
                "tolerances must be positive, got abs {} rel {}",
                self.abs_tol, self.rel_tol
            )));
        }
        if self.max_subdivisions < 10 {
            return Err(Error::InvalidInput(format!(
                "max_subdivisions must be at least 10, got {}",
                self.max_subdivisions
            )));
        }
        Ok(())
    }
}

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
    pub subdivisions: usize,
}

/// One piece of an integral: `∫_a^b f`.
pub struct Segment<'a> {
    pub f: &'a (dyn Fn(f64) -> f64 + Sync),
    pub a: f64,
    pub b: f64,
}

impl<'a> Segment<'a> {
    pub fn new(f: &'a (dyn Fn(f64) -> f64 + Sync), a: f64, b: f64) -> Self {
        Self { f, a, b }
    }
}

// Kronrod abscissae (positive half, descending) and weights; the odd entries
// are the 10-point Gauss nodes.
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208814280390,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

#[derive(Debug, Clone, Copy)]
struct Piece {
    seg: usize,
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

/// 21-point Kronrod estimate with the QUADPACK error heuristic.
fn gk21(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[10];
    let mut res_abs = res_k.abs();
    let mut res_g = 0.0;
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    let eps = f64::EPSILON;
    if res_abs > f64::MIN_POSITIVE / (50.0 * eps) {
        err = err.max(50.0 * eps * res_abs);
    }
    (value, err)
}

/// Integrates the sum of several segments with one global error budget.
///
/// The piece with the largest error estimate is bisected until the total
/// error is below `max(abs_tol, rel_tol·|value|)`. Each subdivision adds one
/// piece; running past `max_subdivisions` is a failure carrying the best
/// estimate reached.
pub fn integrate_segments(segments: &[Segment<'_>], config: &QuadratureConfig) -> Result<QuadResult> {
    config.validate()?;
    let mut pieces = Vec::with_capacity(segments.len() + config.max_subdivisions);
    for (i, s) in segments.iter().enumerate() {
        if s.a == s.b {
            continue;
        }
        let (value, error) = gk21(s.f, s.a, s.b);
        pieces.push(Piece {
            seg: i,
            a: s.a,
            b: s.b,
            value,
            error,
        });
    }
    let mut evaluations = 21 * pieces.len();
    let mut subdivisions = 0;
    loop {
        let value: f64 = pieces.iter().map(|p| p.value).sum();
        let error: f64 = pieces.iter().map(|p| p.error).sum();
        if !value.is_finite() || !error.is_finite() {
            return Err(Error::QuadratureFailure {
                estimate: value,
                error,
                subdivisions,
            });
        }
        if error <= config.abs_tol.max(config.rel_tol * value.abs()) {
            return Ok(QuadResult {
                value,
                error,
                evaluations,
                subdivisions,
            });
        }
        if subdivisions >= config.max_subdivisions {
            return Err(Error::QuadratureFailure {
                estimate: value,
                error,
                subdivisions,
            });
        }
        let worst = pieces
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.error.total_cmp(&b.1.error))
            .map(|(i, _)| i)
            .expect("at least one piece");
        let p = pieces.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a.min(p.b) || mid >= p.a.max(p.b) {
            // The piece cannot be split further in floating point.
            return Err(Error::QuadratureFailure {
                estimate: value,
                error,
                subdivisions,
            });
        }
        let f = segments[p.seg].f;
        let (v1, e1) = gk21(f, p.a, mid);
        let (v2, e2) = gk21(f, mid, p.b);
        pieces.push(Piece {
            seg: p.seg,
            a: p.a,
            b: mid,
            value: v1,
            error: e1,
        });
        pieces.push(Piece {
            seg: p.seg,
            a: mid,
            b: p.b,
            value: v2,
            error: e2,
        });
        evaluations += 42;
        subdivisions += 1;
    }
}

/// Adaptive integral of `f` over `[a, b]` with break points at `breaks`
/// (which must lie strictly inside and be increasing).
pub fn integrate(
    f: &(dyn Fn(f64) -> f64 + Sync),
    a: f64,
    b: f64,
    breaks: &[f64],
    config: &QuadratureConfig,
) -> Result<QuadResult> {
    let mut knots = vec![a];
    knots.extend(breaks.iter().copied().filter(|&t| t > a.min(b) && t < a.max(b)));
    knots.push(b);
    let segments: Vec<Segment<'_>> = knots.windows(2).map(|w| Segment::new(f, w[0], w[1])).collect();
    integrate_segments(&segments, config)
}

/// Nodes and weights of the `order`-point Gauss–Legendre rule on `[−1, 1]`.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1, "Gauss–Legendre order must be positive");
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Fixed composite Gauss–Legendre rule: `panels` equal panels of `order` points.
pub fn composite_gauss_legendre(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    panels: usize,
    order: usize,
) -> f64 {
    let (nodes, weights) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let c = lo + 0.5 * h;
        let mut s = 0.0;
        for (x, w) in nodes.iter().zip(&weights) {
            s += w * f(c + 0.5 * h * x);
        }
        total += 0.5 * h * s;
    }
    total
}
