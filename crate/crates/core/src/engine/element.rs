use std::collections::BTreeMap;
use std::fmt;

use crate::exactnum::{BigRational, CycloNum, QLaurent, RootData};

/// Exponent vector of a PBW monomial, one entry per generator.
pub type Mono = Vec<i32>;

/// Finite combination of PBW monomials with Laurent-in-q coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Element {
    terms: BTreeMap<Mono, QLaurent>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn monomial(m: Mono, c: QLaurent) -> Self {
        let mut e = Element::zero();
        e.add_term(m, &c);
        e
    }

    pub fn one(n: usize) -> Self {
        Element::monomial(vec![0; n], QLaurent::one())
    }

    pub fn scalar(n: usize, c: QLaurent) -> Self {
        Element::monomial(vec![0; n], c)
    }

    pub fn gen(n: usize, i: usize) -> Self {
        let mut m = vec![0; n];
        m[i] = 1;
        Element::monomial(m, QLaurent::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &QLaurent)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &[i32]) -> QLaurent {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Largest monomial in lexicographic order on exponent vectors.
    pub fn leading(&self) -> Option<(&Mono, &QLaurent)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, m: Mono, c: &QLaurent) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                *slot = &*slot + c;
                if slot.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Element, c: &QLaurent) {
        for (m, x) in &other.terms {
            self.add_term(m.clone(), &(x * c));
        }
    }

    pub fn scale(&self, c: &QLaurent) -> Element {
        if c.is_zero() {
            return Element::zero();
        }
        Element { terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn neg(&self) -> Element {
        Element { terms: self.terms.iter().map(|(m, x)| (m.clone(), -x)).collect() }
    }

    pub fn add(&self, other: &Element) -> Element {
        let mut out = self.clone();
        for (m, x) in &other.terms {
            out.add_term(m.clone(), x);
        }
        out
    }

    pub fn sub(&self, other: &Element) -> Element {
        let mut out = self.clone();
        for (m, x) in &other.terms {
            out.add_term(m.clone(), &-x);
        }
        out
    }

    /// Generator indices with a nonzero exponent in some term.
    pub fn support(&self) -> Vec<usize> {
        let mut seen = Vec::new();
        for m in self.terms.keys() {
            for (i, &e) in m.iter().enumerate() {
                if e != 0 && !seen.contains(&i) {
                    seen.push(i);
                }
            }
        }
        seen.sort_unstable();
        seen
    }

    pub fn eval_at_root(&self, r: &RootData) -> RootElement {
        let mut out = RootElement::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &c.eval_at_root(r));
        }
        out
    }

    pub fn with_names<'a>(&'a self, names: &'a [String]) -> Named<'a, QLaurent> {
        Named { terms: &self.terms, names }
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.terms.keys().next().map_or(0, Vec::len)).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.with_names(&names))
    }
}

/// Element specialized at q = ε.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RootElement {
    terms: BTreeMap<Mono, CycloNum>,
}

impl RootElement {
    pub fn zero() -> Self {
        RootElement::default()
    }

    pub fn monomial(m: Mono, c: CycloNum) -> Self {
        let mut e = RootElement::zero();
        e.add_term(m, &c);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &CycloNum)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &[i32]) -> Option<&CycloNum> {
        self.terms.get(m)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Mono, c: &CycloNum) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                *slot = &*slot + c;
                if slot.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn scale(&self, c: &CycloNum) -> RootElement {
        let mut out = RootElement::zero();
        for (m, x) in &self.terms {
            out.add_term(m.clone(), &(x * c));
        }
        out
    }

    pub fn add(&self, other: &RootElement) -> RootElement {
        let mut out = self.clone();
        for (m, x) in &other.terms {
            out.add_term(m.clone(), x);
        }
        out
    }

    pub fn sub(&self, other: &RootElement) -> RootElement {
        let mut out = self.clone();
        for (m, x) in &other.terms {
            out.add_term(m.clone(), &-x);
        }
        out
    }

    /// An element of the generic algebra specializing to this one.
    pub fn lift(&self) -> Element {
        let mut out = Element::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &QLaurent::lift(c));
        }
        out
    }

    pub fn with_names<'a>(&'a self, names: &'a [String]) -> Named<'a, CycloNum> {
        Named { terms: &self.terms, names }
    }
}

impl fmt::Debug for RootElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.terms.keys().next().map_or(0, Vec::len)).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.with_names(&names))
    }
}

/// Display adapter printing monomials with generator names.
pub struct Named<'a, C> {
    terms: &'a BTreeMap<Mono, C>,
    names: &'a [String],
}

pub fn mono_string(m: &[i32], names: &[String]) -> String {
    let parts: Vec<String> = m
        .iter()
        .enumerate()
        .filter(|(_, &e)| e != 0)
        .map(|(i, &e)| if e == 1 { names[i].clone() } else { format!("{}^{}", names[i], e) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

impl<C: fmt::Display> fmt::Display for Named<'_, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.terms.iter().rev().map(|(m, c)| format!("({c})*{}", mono_string(m, self.names))).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Rational constant as a Laurent polynomial.
pub fn qrat(n: i64, d: i64) -> QLaurent {
    QLaurent::monomial(BigRational::new(n.into(), d.into()), 0)
}
