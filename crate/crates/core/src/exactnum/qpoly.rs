//! Dense univariate polynomials over the rationals, ascending coefficients.
//!
//! Only the handful of routines needed by the cyclotomic field live here.

use num_rational::BigRational;
use num_traits::{One, Zero};

pub(crate) type QPoly = Vec<BigRational>;

pub(crate) fn trim(p: &mut QPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub(crate) fn degree(p: &[BigRational]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub(crate) fn sub(a: &[BigRational], b: &[BigRational]) -> QPoly {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    trim(&mut out);
    out
}

pub(crate) fn mul(a: &[BigRational], b: &[BigRational]) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    trim(&mut out);
    out
}

/// Quotient and remainder of `a` by a nonzero `b`.
pub(crate) fn divrem(a: &[BigRational], b: &[BigRational]) -> (QPoly, QPoly) {
    let db = degree(b).expect("division by zero polynomial");
    let lead = b[db].clone();
    let mut rem: QPoly = a.to_vec();
    trim(&mut rem);
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    while let Some(dr) = degree(&rem) {
        if dr < db {
            break;
        }
        let c = &rem[dr] / &lead;
        let shift = dr - db;
        for (k, bc) in b.iter().enumerate().take(db + 1) {
            if !bc.is_zero() {
                rem[shift + k] -= &c * bc;
            }
        }
        quot[shift] = c;
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

/// Inverse of `a` modulo `m` when gcd(a, m) = 1.
pub(crate) fn inverse_mod(a: &[BigRational], m: &[BigRational]) -> Option<QPoly> {
    // extended Euclid on (m, a), tracking the coefficient of a
    let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
    trim(&mut r0);
    trim(&mut r1);
    let (mut t0, mut t1): (QPoly, QPoly) = (Vec::new(), vec![BigRational::one()]);
    while degree(&r1).is_some() {
        let (q, r) = divrem(&r0, &r1);
        let t2 = sub(&t0, &mul(&q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        t0 = std::mem::replace(&mut t1, t2);
    }
    // r0 is the gcd
    if degree(&r0) != Some(0) {
        return None;
    }
    let c = r0[0].clone();
    let mut inv: QPoly = t0.into_iter().map(|x| x / &c).collect();
    let (_, rem) = divrem(&inv, m);
    inv = rem;
    Some(inv)
}
