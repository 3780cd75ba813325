//! Exact real-root counting with a Sturm sequence over the integers.
//!
//! The `f64` coefficients are converted exactly to integers sharing a power
//! of two, and the sequence is built from primitive pseudo-remainders, so the
//! count is exact for the polynomial the coefficients represent. Cost grows
//! quickly with the degree; this is a cross-check for small `n`.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{Float, Signed, Zero};

use crate::error::{Error, Result};

type Poly = Vec<BigInt>;

fn to_integers(coeffs: &[f64]) -> Poly {
    let parts: Vec<(u64, i16, i8)> = coeffs.iter().map(|c| c.integer_decode()).collect();
    let min_exp = parts
        .iter()
        .filter(|(m, _, _)| *m != 0)
        .map(|(_, e, _)| *e)
        .min()
        .unwrap_or(0);
    parts
        .iter()
        .map(|&(m, e, s)| {
            if m == 0 {
                return BigInt::zero();
            }
            let v = BigInt::from(m) << ((e - min_exp) as usize);
            if s < 0 {
                -v
            } else {
                v
            }
        })
        .collect()
}

fn trim(p: &mut Poly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn primitive(mut p: Poly) -> Poly {
    trim(&mut p);
    let g = p.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if !g.is_zero() && g != BigInt::from(1) {
        for c in &mut p {
            *c /= &g;
        }
    }
    p
}

fn derivative(p: &Poly) -> Poly {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect()
}

/// A positive multiple of the remainder of `a` divided by `b`.
fn pseudo_remainder(a: &Poly, b: &Poly) -> Poly {
    let mut r = a.clone();
    trim(&mut r);
    let db = b.len() - 1;
    let lb = &b[db];
    let lb_abs = lb.abs();
    let lb_neg = lb.is_negative();
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let lr = r.last().cloned().unwrap_or_default();
        let c = if lb_neg { -lr } else { lr };
        for x in r.iter_mut() {
            *x *= &lb_abs;
        }
        for (j, bj) in b.iter().enumerate() {
            r[j + shift] -= &c * bj;
        }
        trim(&mut r);
    }
    r
}

fn sign_changes(signs: impl Iterator<Item = Sign>) -> usize {
    let mut last = Sign::NoSign;
    let mut changes = 0;
    for s in signs {
        if s == Sign::NoSign {
            continue;
        }
        if last != Sign::NoSign && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

/// Number of distinct real roots of `Σ c_i x^i`.
pub fn sturm_count(coeffs: &[f64]) -> Result<usize> {
    let p0 = primitive(to_integers(coeffs));
    if p0.is_empty() {
        return Err(Error::InvalidInput("zero polynomial".into()));
    }
    if p0.len() == 1 {
        return Ok(0);
    }
    let mut seq = vec![p0.clone(), primitive(derivative(&p0))];
    loop {
        let n = seq.len();
        let mut r = pseudo_remainder(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        for c in &mut r {
            *c = -std::mem::take(c);
        }
        seq.push(primitive(r));
    }
    let at_plus = sign_changes(seq.iter().map(|p| p.last().unwrap().sign()));
    let at_minus = sign_changes(seq.iter().map(|p| {
        let s = p.last().unwrap().sign();
        if (p.len() - 1) % 2 == 1 {
            -s
        } else {
            s
        }
    }));
    Ok(at_minus - at_plus)
}
