//! Real-root counting by sign changes on a graded grid.
//!
//! Real roots in `[−1, 1]` are roots of `P`; the others are reciprocals of
//! roots in `[−1, 1]` of the reversal `Q(y) = y^n P(1/y) = Σ η_i y^{n−i} φ_i*(y)`.
//! One `O(n)` pass of the recurrence gives `P`, `Q` and both derivatives at a
//! point. Both are sampled on a grid that is uniform within `4/(n+1)` of `±1`
//! and geometric further in, matching the way the zeros accumulate at `±1`.
//! Cells without a sign change are checked for a dip through zero by
//! bisecting on the derivative, which catches close root pairs.

use crate::geron::GeronimusParams;

use super::RootCount;

const RESCALE_ABOVE: f64 = 1e150;
const RESCALE_BY: f64 = 1e-150;
const GEOMETRIC_RATIO: f64 = 1.125;
const BISECTION_STEPS: usize = 60;

#[derive(Debug, Clone, Copy)]
struct Eval {
    p: f64,
    dp: f64,
    q: f64,
    dq: f64,
    /// Rounding scale of `p` and `q`: sums of absolute values of the terms.
    p_floor: f64,
    q_floor: f64,
}

fn evaluate(params: &GeronimusParams, eta: &[f64], x: f64) -> Eval {
    let alpha = params.alpha();
    let inv_rho = 1.0 / params.rho();
    let (mut phi, mut phi_s, mut dphi, mut dphi_s) = (1.0, 1.0, 0.0, 0.0);
    let (mut p, mut dp, mut q, mut dq) = (0.0, 0.0, 0.0, 0.0);
    let (mut p_floor, mut q_floor) = (0.0, 0.0);
    let ax = x.abs();
    let last = eta.len().saturating_sub(1);
    for (i, &e) in eta.iter().enumerate() {
        p += e * phi;
        dp += e * dphi;
        p_floor += (e * phi).abs();
        dq = dq * x + q + e * dphi_s;
        q = q * x + e * phi_s;
        q_floor = q_floor * ax + (e * phi_s).abs();
        if i == last {
            break;
        }
        let next_phi = (x * phi - alpha * phi_s) * inv_rho;
        let next_phi_s = (phi_s - alpha * x * phi) * inv_rho;
        let next_dphi = (phi + x * dphi - alpha * dphi_s) * inv_rho;
        let next_dphi_s = (dphi_s - alpha * phi - alpha * x * dphi) * inv_rho;
        phi = next_phi;
        phi_s = next_phi_s;
        dphi = next_dphi;
        dphi_s = next_dphi_s;
        let big = phi.abs().max(phi_s.abs()).max(dphi.abs()).max(dphi_s.abs());
        if big > RESCALE_ABOVE {
            for s in [
                &mut phi,
                &mut phi_s,
                &mut dphi,
                &mut dphi_s,
                &mut p,
                &mut dp,
                &mut q,
                &mut dq,
                &mut p_floor,
                &mut q_floor,
            ] {
                *s *= RESCALE_BY;
            }
        }
    }
    Eval {
        p,
        dp,
        q,
        dq,
        p_floor,
        q_floor,
    }
}

/// Sample points in `[−1, 1]`, increasing, including `±1` and `0`.
pub(crate) fn scan_grid(n: usize) -> Vec<f64> {
    let k = (n + 1) as f64;
    let step = 0.25 / k;
    let mut dists = Vec::new();
    let mut i = 0;
    loop {
        let d = i as f64 * step;
        if d > 4.0 / k || d >= 1.0 {
            break;
        }
        dists.push(d);
        i += 1;
    }
    let mut d = *dists.last().unwrap();
    loop {
        d *= GEOMETRIC_RATIO;
        if d >= 1.0 {
            break;
        }
        dists.push(d);
    }
    let mut grid: Vec<f64> = dists.iter().map(|d| -1.0 + d).collect();
    grid.push(0.0);
    grid.extend(dists.iter().rev().map(|d| 1.0 - d));
    grid.dedup();
    grid
}

#[derive(Clone, Copy)]
enum Which {
    P,
    Q,
}

impl Which {
    fn value(self, e: &Eval) -> (f64, f64, f64) {
        match self {
            Which::P => (e.p, e.dp, e.p_floor),
            Which::Q => (e.q, e.dq, e.q_floor),
        }
    }
}

/// Whether `F` dips through zero between `a` and `b`, given that it has sign
/// `s` at both ends and its magnitude falls from `a` and rises into `b`.
fn dips_through_zero(params: &GeronimusParams, eta: &[f64], which: Which, s: f64, a: f64, b: f64) -> bool {
    let (mut lo, mut hi) = (a, b);
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let (f, df, _) = which.value(&evaluate(params, eta, mid));
        if s * f < 0.0 {
            return true;
        }
        if s * df < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    false
}

/// Number of real roots of `Σ η_i φ_i(x; α)`.
pub fn scan_count(params: &GeronimusParams, eta: &[f64]) -> RootCount {
    let n = match eta.iter().rposition(|&c| c != 0.0) {
        Some(i) => i,
        None => {
            return RootCount {
                count: 0,
                ambiguous: false,
            }
        }
    };
    let eta = &eta[..=n];
    if n == 0 {
        return RootCount {
            count: 0,
            ambiguous: false,
        };
    }
    let grid = scan_grid(n);
    let mut evals: Vec<Eval> = grid.iter().map(|&x| evaluate(params, eta, x)).collect();
    // Q(±1) = (±1)^n P(±1): take the shared values from P so that a root
    // sitting at an endpoint is counted once.
    let sign_n = if n % 2 == 0 { 1.0 } else { -1.0 };
    let first = 0;
    let last = evals.len() - 1;
    evals[last].q = evals[last].p;
    evals[last].q_floor = evals[last].p_floor;
    evals[first].q = sign_n * evals[first].p;
    evals[first].q_floor = evals[first].p_floor;

    let mut count = 0;
    let mut ambiguous = false;
    let tol = 16.0 * f64::EPSILON * (n as f64 + 1.0);
    for which in [Which::P, Which::Q] {
        let mut prev: Option<(usize, f64)> = None;
        for (j, e) in evals.iter().enumerate() {
            let (f, df, floor) = which.value(e);
            if f.abs() <= tol * floor {
                ambiguous = true;
            }
            if f == 0.0 {
                // A root on the grid. For Q the endpoints belong to P. Just
                // right of a simple root the sign is that of the derivative.
                if matches!(which, Which::P) || (j != first && j != last) {
                    count += 1;
                }
                let d = if df == 0.0 { 0.0 } else { df.signum() };
                prev = match prev {
                    _ if d == 0.0 => None,
                    Some((_, ps)) => {
                        if ps != -d {
                            count += 1;
                        }
                        Some((j, d))
                    }
                    None => Some((j, d)),
                };
                continue;
            }
            let s = f.signum();
            if let Some((i, ps)) = prev {
                if ps != s {
                    count += 1;
                } else {
                    let (_, da, _) = which.value(&evals[i]);
                    let (_, db, _) = which.value(e);
                    if s * da < 0.0
                        && s * db > 0.0
                        && dips_through_zero(params, eta, which, s, grid[i], grid[j])
                    {
                        count += 2;
                    }
                }
            }
            prev = Some((j, s));
        }
    }
    RootCount { count, ambiguous }
}
