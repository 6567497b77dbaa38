//! Cyclotomic fields Q(ε) = Q[q]/(Φ_l) for a primitive l-th root of unity ε.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::qpoly::{self, QPoly};
use super::ExactError;

/// The order `l`, its cyclotomic polynomial Φ_l and the choice of primitive root.
///
/// The canonical root is the residue class of `q`; `primitive_index = j` selects
/// ε = q^j instead. Cloning is cheap.
#[derive(Clone)]
pub struct RootData {
    inner: Arc<RootInner>,
}

struct RootInner {
    l: u32,
    phi: Vec<BigInt>,
    phi_q: QPoly,
    primitive_index: u32,
    /// Reduced residue of q^m for m in 0..l.
    qpow: Vec<QPoly>,
}

impl RootData {
    /// Builds Φ_l by dividing q^l − 1 by every Φ_d with d | l, d < l.
    pub fn new(l: u32) -> Result<Self, ExactError> {
        Self::with_primitive_index(l, 1)
    }

    pub fn with_primitive_index(l: u32, j: u32) -> Result<Self, ExactError> {
        if l < 2 {
            return Err(ExactError::BadOrder(l));
        }
        if (j as u64).gcd(&(l as u64)) != 1 {
            return Err(ExactError::NotPrimitive { l, j });
        }
        let phi = cyclotomic_poly(l);
        let phi_q: QPoly = phi.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        let d = phi.len() - 1;
        let mut qpow = Vec::with_capacity(l as usize);
        let mut cur: QPoly = vec![BigRational::one()];
        for _ in 0..l {
            let mut padded = cur.clone();
            padded.resize(d, BigRational::zero());
            qpow.push(padded);
            let shifted: QPoly = std::iter::once(BigRational::zero()).chain(cur.iter().cloned()).collect();
            cur = qpoly::divrem(&shifted, &phi_q).1;
        }
        Ok(RootData {
            inner: Arc::new(RootInner { l, phi, phi_q, primitive_index: j % l, qpow }),
        })
    }

    pub fn l(&self) -> u32 {
        self.inner.l
    }

    pub fn primitive_index(&self) -> u32 {
        self.inner.primitive_index
    }

    /// Integer coefficients of Φ_l, ascending.
    pub fn phi(&self) -> &[BigInt] {
        &self.inner.phi
    }

    pub(crate) fn phi_q(&self) -> &[BigRational] {
        &self.inner.phi_q
    }

    /// Degree of Φ_l, i.e. [Q(ε):Q].
    pub fn degree(&self) -> usize {
        self.inner.phi.len() - 1
    }

    pub fn same_field(&self, other: &RootData) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.l() == other.l() && self.primitive_index() == other.primitive_index())
    }

    /// The same field with a different primitive root ε^k.
    pub fn reindexed(&self, j: u32) -> Result<RootData, ExactError> {
        RootData::with_primitive_index(self.l(), j)
    }

    pub fn zero(&self) -> CycloNum {
        CycloNum { coeffs: vec![BigRational::zero(); self.degree()], root: self.clone() }
    }

    pub fn one(&self) -> CycloNum {
        self.rational(BigRational::one())
    }

    pub fn rational(&self, r: BigRational) -> CycloNum {
        let mut c = self.zero();
        c.coeffs[0] = r;
        c
    }

    pub fn int(&self, n: i64) -> CycloNum {
        self.rational(BigRational::from_integer(n.into()))
    }

    /// Residue of the canonical root raised to `m`.
    fn q_power(&self, m: i64) -> CycloNum {
        let l = self.l() as i64;
        let idx = m.rem_euclid(l) as usize;
        CycloNum { coeffs: self.inner.qpow[idx].clone(), root: self.clone() }
    }

    /// ε^k for the selected primitive root.
    pub fn eps_pow(&self, k: i64) -> CycloNum {
        self.q_power(k * self.primitive_index() as i64)
    }

    pub fn eps(&self) -> CycloNum {
        self.eps_pow(1)
    }

    /// Element built from coefficients on the canonical power basis 1, q, q², …
    pub fn from_coeffs(&self, coeffs: &[BigRational]) -> CycloNum {
        let (_, rem) = qpoly::divrem(coeffs, self.phi_q());
        let mut c = rem;
        c.resize(self.degree(), BigRational::zero());
        CycloNum { coeffs: c, root: self.clone() }
    }

    /// Φ_l'(ε).
    pub fn phi_prime_at_eps(&self) -> CycloNum {
        let mut acc = self.zero();
        for (k, c) in self.phi().iter().enumerate().skip(1) {
            if c.is_zero() {
                continue;
            }
            let term = self.eps_pow(k as i64 - 1).scale(&BigRational::from_integer(c * BigInt::from(k)));
            acc = &acc + &term;
        }
        acc
    }
}

impl fmt::Debug for RootData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RootData(l={}, j={})", self.l(), self.primitive_index())
    }
}

/// Φ_l with integer coefficients, ascending order.
pub fn cyclotomic_poly(l: u32) -> Vec<BigInt> {
    let mut num: Vec<BigInt> = vec![BigInt::zero(); l as usize + 1];
    num[0] = BigInt::from(-1);
    num[l as usize] = BigInt::one();
    for d in 1..l {
        if l % d == 0 {
            let den = cyclotomic_poly(d);
            num = int_exact_div(&num, &den);
        }
    }
    num
}

fn int_exact_div(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    // b is monic
    let db = b.len() - 1;
    let mut rem = a.to_vec();
    let mut quot = vec![BigInt::zero(); a.len() - db];
    for i in (0..quot.len()).rev() {
        let c = rem[i + db].clone();
        if c.is_zero() {
            continue;
        }
        for (k, bc) in b.iter().enumerate() {
            rem[i + k] -= &c * bc;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    quot
}

/// An element of Q(ε), stored as a polynomial in the canonical root of degree < deg Φ_l.
#[derive(Clone)]
pub struct CycloNum {
    coeffs: Vec<BigRational>,
    root: RootData,
}

impl CycloNum {
    pub fn root(&self) -> &RootData {
        &self.root
    }

    /// Coefficients on the canonical basis 1, q, …, q^{d−1}.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// The rational value, if the element lies in Q.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    pub fn scale(&self, r: &BigRational) -> CycloNum {
        CycloNum { coeffs: self.coeffs.iter().map(|c| c * r).collect(), root: self.root.clone() }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<CycloNum> {
        if self.is_zero() {
            return None;
        }
        let mut a = self.coeffs.clone();
        qpoly::trim(&mut a);
        let inv = qpoly::inverse_mod(&a, self.root.phi_q())?;
        Some(self.root.from_coeffs(&inv))
    }

    pub fn pow(&self, e: i64) -> Option<CycloNum> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = self.root.one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        Some(acc)
    }

    /// A rational l-th root of a rational value, when one exists.
    pub fn rational_root(&self, l: u32) -> Option<CycloNum> {
        let r = self.as_rational()?;
        let root_of = |n: &BigInt| -> Option<BigInt> {
            let neg = n.is_negative();
            if neg && l % 2 == 0 {
                return None;
            }
            let a = n.abs().nth_root(l);
            (num_traits::Pow::pow(&a, l) == n.abs()).then(|| if neg { -a } else { a })
        };
        let num = root_of(r.numer())?;
        let den = root_of(r.denom())?;
        Some(self.root.rational(BigRational::new(num, den)))
    }

    /// Galois conjugate under q ↦ q^k (k coprime to l).
    pub fn galois(&self, k: u32) -> CycloNum {
        let mut acc = self.root.zero();
        for (m, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = &acc + &self.root.q_power(m as i64 * k as i64).scale(c);
        }
        acc
    }

    /// Moves the value to another `RootData` of the same order (same canonical basis).
    pub fn rebase(&self, root: &RootData) -> CycloNum {
        debug_assert_eq!(root.l(), self.root.l());
        CycloNum { coeffs: self.coeffs.clone(), root: root.clone() }
    }

    /// Rendering as an integer coefficient vector when possible, otherwise rationals.
    pub fn to_coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(render_rational).collect()
    }

    /// Compact bracketed coefficient vector, e.g. `[0,1]` for ε with l = 3.
    pub fn render(&self) -> String {
        format!("[{}]", self.to_coeff_strings().join(","))
    }
}

pub(crate) fn render_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl PartialEq for CycloNum {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}
impl Eq for CycloNum {}

impl std::hash::Hash for CycloNum {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = render_rational(&c.abs());
            let sign = if c.is_negative() { "-" } else { "+" };
            let body = match k {
                0 => mag,
                1 if c.abs().is_one() => "e".to_string(),
                1 => format!("{mag}*e"),
                _ if c.abs().is_one() => format!("e^{k}"),
                _ => format!("{mag}*e^{k}"),
            };
            parts.push((sign, body));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        for (i, (sign, body)) in parts.iter().enumerate() {
            match (i, *sign) {
                (0, "-") => write!(f, "-{body}")?,
                (0, _) => write!(f, "{body}")?,
                (_, s) => write!(f, " {s} {body}")?,
            }
        }
        Ok(())
    }
}

impl Add<&CycloNum> for &CycloNum {
    type Output = CycloNum;
    fn add(self, rhs: &CycloNum) -> CycloNum {
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        CycloNum { coeffs, root: self.root.clone() }
    }
}

impl Sub<&CycloNum> for &CycloNum {
    type Output = CycloNum;
    fn sub(self, rhs: &CycloNum) -> CycloNum {
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect();
        CycloNum { coeffs, root: self.root.clone() }
    }
}

impl Mul<&CycloNum> for &CycloNum {
    type Output = CycloNum;
    fn mul(self, rhs: &CycloNum) -> CycloNum {
        if self.is_one() {
            return rhs.clone();
        }
        if rhs.is_one() {
            return self.clone();
        }
        if let Some(r) = self.as_rational() {
            return rhs.scale(r);
        }
        if let Some(r) = rhs.as_rational() {
            return self.scale(r);
        }
        let prod = qpoly::mul(&self.coeffs, &rhs.coeffs);
        self.root.from_coeffs(&prod)
    }
}

impl Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        CycloNum { coeffs: self.coeffs.iter().map(|c| -c).collect(), root: self.root.clone() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<CycloNum> for CycloNum {
            type Output = CycloNum;
            fn $m(self, rhs: CycloNum) -> CycloNum {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&CycloNum> for CycloNum {
            type Output = CycloNum;
            fn $m(self, rhs: &CycloNum) -> CycloNum {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic_poly(2), ints(&[1, 1]));
        assert_eq!(cyclotomic_poly(3), ints(&[1, 1, 1]));
        assert_eq!(cyclotomic_poly(5), ints(&[1, 1, 1, 1, 1]));
        assert_eq!(cyclotomic_poly(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_poly(12), ints(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn rejects_bad_orders() {
        assert!(RootData::new(1).is_err());
        assert!(RootData::with_primitive_index(6, 2).is_err());
    }

    #[test]
    fn eps_has_exact_order() {
        for l in [2u32, 3, 4, 5, 6, 7, 9] {
            let r = RootData::new(l).unwrap();
            let e = r.eps();
            for k in 1..l {
                assert!(!e.pow(k as i64).unwrap().is_one(), "l={l} k={k}");
            }
            assert!(e.pow(l as i64).unwrap().is_one());
        }
    }

    #[test]
    fn phi_prime_matches_formula() {
        // Φ_3'(ε) = 2ε + 1
        let r = RootData::new(3).unwrap();
        let expect = &r.eps().scale(&BigRational::from_integer(2.into())) + &r.one();
        assert_eq!(r.phi_prime_at_eps(), expect);
    }

    #[test]
    fn galois_of_eps() {
        let r = RootData::new(5).unwrap();
        assert_eq!(r.eps().galois(2), r.eps_pow(2));
        let r2 = r.reindexed(3).unwrap();
        assert_eq!(r2.eps().rebase(&r), r.eps_pow(3));
    }

    #[test]
    fn display_forms() {
        let r = RootData::new(3).unwrap();
        assert_eq!(r.eps_pow(2).to_string(), "-1 - e");
        assert_eq!(r.eps_pow(2).render(), "[-1,-1]");
        assert_eq!(r.zero().to_string(), "0");
    }
}
