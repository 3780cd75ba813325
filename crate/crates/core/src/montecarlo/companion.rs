//! Roots as eigenvalues: the Frobenius companion matrix for monomial
//! coefficients, and the colleague matrix of the orthonormal Geronimus basis.

use nalgebra::linalg::balancing::balance_parlett_reinsch;
use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geron::GeronimusParams;

/// Eigenvalues of a square matrix after Parlett–Reinsch balancing.
pub(crate) fn eigenvalues(mut m: DMatrix<f64>) -> Result<Vec<Complex64>> {
    let d = m.nrows();
    if d == 0 {
        return Ok(Vec::new());
    }
    if d == 1 {
        return Ok(vec![Complex64::new(m[(0, 0)], 0.0)]);
    }
    let plain = m.clone();
    balance_parlett_reinsch(&mut m);
    // The shifted QR iteration has no exceptional shifts and occasionally
    // cycles; a looser deflation threshold or a different but similar
    // starting matrix usually breaks the cycle.
    let attempts = [
        (m.clone(), f64::EPSILON),
        (m.clone(), 8.0 * f64::EPSILON),
        (m.transpose(), f64::EPSILON),
        (plain, f64::EPSILON),
    ];
    for (a, eps) in attempts {
        if let Some(schur) = Schur::try_new(a, eps, 200 * d) {
            let out: Vec<Complex64> = schur.complex_eigenvalues().iter().copied().collect();
            if out.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::RootSolver("non-finite eigenvalue".into()));
            }
            return Ok(out);
        }
    }
    Err(Error::RootSolver(format!("QR iteration did not converge (size {d})")))
}

/// All complex roots of `Σ c_i x^i`, with multiplicity.
///
/// Zero leading coefficients lower the degree; zero low-order coefficients
/// contribute exact roots at the origin.
pub fn companion_roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let hi = match coeffs.iter().rposition(|&c| c != 0.0) {
        Some(i) => i,
        None => return Err(Error::InvalidInput("zero polynomial".into())),
    };
    let lo = coeffs.iter().position(|&c| c != 0.0).unwrap_or(0);
    let c = &coeffs[lo..=hi];
    let d = c.len() - 1;
    let mut roots = vec![Complex64::new(0.0, 0.0); lo];
    if d == 0 {
        return Ok(roots);
    }
    let lead = c[d];
    let mut m = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        m[(i, d - 1)] = -c[i] / lead;
    }
    roots.extend(eigenvalues(m)?);
    Ok(roots)
}

/// The colleague matrix of `Σ η_k φ_k(x; α)`, whose eigenvalues are its roots.
///
/// It is built from the three-term form of the recurrence on the real line,
/// `x φ_j = ρ φ_{j+1} + α ρ^j φ_0 − α² Σ_{k=1..j} ρ^{j−k} φ_k`, with the top
/// function `φ_n` eliminated through `P = 0`. Trailing zero weights lower the
/// degree.
pub fn colleague_matrix(params: &GeronimusParams, eta: &[f64]) -> DMatrix<f64> {
    let n = match eta.iter().rposition(|&c| c != 0.0) {
        Some(i) => i,
        None => return DMatrix::zeros(0, 0),
    };
    let alpha = params.alpha();
    let rho = params.rho();
    let a2 = alpha * alpha;
    let mut m = DMatrix::<f64>::zeros(n, n);
    // powers[j] = ρ^j
    let mut powers = Vec::with_capacity(n + 1);
    let mut p = 1.0;
    for _ in 0..=n {
        powers.push(p);
        p *= rho;
    }
    for j in 0..n {
        if j + 1 < n {
            m[(j, j + 1)] = rho;
        }
        m[(j, 0)] += alpha * powers[j];
        for k in 1..=j {
            m[(j, k)] -= a2 * powers[j - k];
        }
    }
    let top = eta[n];
    for k in 0..n {
        m[(n - 1, k)] -= rho * eta[k] / top;
    }
    m
}
