//! Laurent polynomials in q with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::cyclo::{render_rational, CycloNum, RootData};
use super::qpoly;
use super::ExactError;

/// A finite sum Σ c_k q^k, c_k ∈ Q. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QLaurent {
    coeffs: BTreeMap<i64, BigRational>,
}

impl QLaurent {
    pub fn zero() -> Self {
        QLaurent::default()
    }

    pub fn one() -> Self {
        QLaurent::monomial(BigRational::one(), 0)
    }

    pub fn q_pow(k: i64) -> Self {
        QLaurent::monomial(BigRational::one(), k)
    }

    pub fn int(n: i64) -> Self {
        QLaurent::monomial(BigRational::from_integer(n.into()), 0)
    }

    pub fn monomial(c: BigRational, k: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(k, c);
        }
        QLaurent { coeffs }
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, BigRational)>>(terms: I) -> Self {
        let mut out = QLaurent::zero();
        for (k, c) in terms {
            out.add_term(k, &c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn coeff(&self, k: i64) -> BigRational {
        self.coeffs.get(&k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// The single term, if the value is c·q^k.
    pub fn as_monomial(&self) -> Option<(i64, &BigRational)> {
        if self.coeffs.len() == 1 {
            self.coeffs.iter().next().map(|(k, c)| (*k, c))
        } else {
            None
        }
    }

    pub(crate) fn add_term(&mut self, k: i64, c: &BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(k).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    /// Multiplies by q^k.
    pub fn shift(&self, k: i64) -> Self {
        if k == 0 {
            return self.clone();
        }
        QLaurent { coeffs: self.coeffs.iter().map(|(d, c)| (d + k, c.clone())).collect() }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return QLaurent::zero();
        }
        QLaurent { coeffs: self.coeffs.iter().map(|(d, c)| (*d, c * r)).collect() }
    }

    /// Substitutes q ↦ ε.
    pub fn eval_at_root(&self, root: &RootData) -> CycloNum {
        let mut acc = root.zero();
        for (k, c) in &self.coeffs {
            let t = root.eps_pow(*k);
            acc = &acc + &t.scale(c);
        }
        acc
    }

    /// Exact division by Φ_l in Q[q, q^{-1}].
    pub fn divide_by_cyclotomic(&self, root: &RootData) -> Result<QLaurent, ExactError> {
        let Some(lo) = self.min_degree() else {
            return Ok(QLaurent::zero());
        };
        let hi = self.max_degree().unwrap();
        let mut dense = vec![BigRational::zero(); (hi - lo + 1) as usize];
        for (k, c) in &self.coeffs {
            dense[(k - lo) as usize] = c.clone();
        }
        let (quot, rem) = qpoly::divrem(&dense, root.phi_q());
        if qpoly::degree(&rem).is_some() {
            return Err(ExactError::NotDivisible { l: root.l() });
        }
        Ok(QLaurent::from_terms(quot.into_iter().enumerate().map(|(i, c)| (i as i64 + lo, c))))
    }

    /// A Laurent polynomial whose value at ε is `x`.
    pub fn lift(x: &CycloNum) -> QLaurent {
        let root = x.root();
        let l = root.l() as i64;
        let j = root.primitive_index() as i64;
        let jinv = (1..l).find(|k| (k * j).rem_euclid(l) == 1).unwrap_or(1);
        QLaurent::from_terms(x.coeffs().iter().enumerate().map(|(k, c)| ((k as i64 * jinv).rem_euclid(l), c.clone())))
    }

    /// Maps q ↦ q^{-1}.
    pub fn invert_q(&self) -> Self {
        QLaurent { coeffs: self.coeffs.iter().map(|(d, c)| (-d, c.clone())).collect() }
    }
}

impl fmt::Debug for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.coeffs.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let m = render_rational(&mag);
            match *k {
                0 => write!(f, "{m}")?,
                _ if mag.is_one() => write!(f, "{}", qterm(*k))?,
                _ => write!(f, "{m}*{}", qterm(*k))?,
            }
        }
        Ok(())
    }
}

fn qterm(k: i64) -> String {
    if k == 1 {
        "q".into()
    } else {
        format!("q^{k}")
    }
}

impl Add<&QLaurent> for &QLaurent {
    type Output = QLaurent;
    fn add(self, rhs: &QLaurent) -> QLaurent {
        let mut out = self.clone();
        for (k, c) in &rhs.coeffs {
            out.add_term(*k, c);
        }
        out
    }
}

impl Sub<&QLaurent> for &QLaurent {
    type Output = QLaurent;
    fn sub(self, rhs: &QLaurent) -> QLaurent {
        let mut out = self.clone();
        for (k, c) in &rhs.coeffs {
            out.add_term(*k, &-c);
        }
        out
    }
}

impl Mul<&QLaurent> for &QLaurent {
    type Output = QLaurent;
    fn mul(self, rhs: &QLaurent) -> QLaurent {
        if let Some((k, c)) = rhs.as_monomial() {
            if c.is_one() {
                return self.shift(k);
            }
        }
        if let Some((k, c)) = self.as_monomial() {
            if c.is_one() {
                return rhs.shift(k);
            }
        }
        let mut out = QLaurent::zero();
        for (a, x) in &self.coeffs {
            for (b, y) in &rhs.coeffs {
                out.add_term(a + b, &(x * y));
            }
        }
        out
    }
}

impl Neg for &QLaurent {
    type Output = QLaurent;
    fn neg(self) -> QLaurent {
        QLaurent { coeffs: self.coeffs.iter().map(|(d, c)| (*d, -c)).collect() }
    }
}

impl Neg for QLaurent {
    type Output = QLaurent;
    fn neg(self) -> QLaurent {
        -&self
    }
}

impl Add for QLaurent {
    type Output = QLaurent;
    fn add(self, rhs: QLaurent) -> QLaurent {
        &self + &rhs
    }
}
impl Sub for QLaurent {
    type Output = QLaurent;
    fn sub(self, rhs: QLaurent) -> QLaurent {
        &self - &rhs
    }
}
impl Mul for QLaurent {
    type Output = QLaurent;
    fn mul(self, rhs: QLaurent) -> QLaurent {
        &self * &rhs
    }
}
