use std::cell::RefCell;
use std::collections::HashMap;

use super::element::{Element, Mono};
use super::presentation::AlgebraPresentation;
use crate::exactnum::QLaurent;

/// One factor of a formal word.
#[derive(Clone, Debug)]
pub enum Letter {
    Gen(usize, i32),
    Scalar(QLaurent),
}

/// PBW normal-form arithmetic for a presentation, with product and δ memo tables.
pub struct Rewriter<'a> {
    p: &'a AlgebraPresentation,
    products: RefCell<HashMap<(Mono, Mono), Element>>,
    derivations: RefCell<HashMap<(usize, Mono), Element>>,
}

impl<'a> Rewriter<'a> {
    pub fn new(p: &'a AlgebraPresentation) -> Self {
        Rewriter { p, products: RefCell::default(), derivations: RefCell::default() }
    }

    pub fn presentation(&self) -> &AlgebraPresentation {
        self.p
    }

    pub fn mul(&self, u: &Element, v: &Element) -> Element {
        let mut out = Element::zero();
        for (a, x) in u.terms() {
            for (b, y) in v.terms() {
                let c = x * y;
                let prod = self.mul_mono(a, b);
                out.add_scaled(&prod, &c);
            }
        }
        out
    }

    pub fn pow(&self, u: &Element, e: u32) -> Element {
        let mut acc = self.p.one();
        for _ in 0..e {
            acc = self.mul(&acc, u);
        }
        acc
    }

    pub fn normal_form(&self, word: &[Letter]) -> Element {
        let mut acc = self.p.one();
        for letter in word {
            acc = match letter {
                Letter::Scalar(c) => acc.scale(c),
                Letter::Gen(i, e) => self.mul(&acc, &self.p.gen_pow(*i, *e)),
            };
        }
        acc
    }

    pub fn commutator(&self, u: &Element, v: &Element) -> Element {
        self.mul(u, v).sub(&self.mul(v, u))
    }

    /// Normal form of x^a · x^b.
    pub fn mul_mono(&self, a: &[i32], b: &[i32]) -> Element {
        let Some(i) = b.iter().position(|&e| e != 0) else {
            return Element::monomial(a.to_vec(), QLaurent::one());
        };
        if a[i + 1..].iter().all(|&e| e == 0) {
            let mut m = a.to_vec();
            for (j, &e) in b.iter().enumerate().skip(i) {
                m[j] += e;
            }
            return Element::monomial(m, QLaurent::one());
        }
        if self.p.diagonal_from(i) {
            return Element::monomial(merge(a, b), QLaurent::q_pow(self.diagonal_twist(a, b)));
        }
        let key = (a.to_vec(), b.to_vec());
        if let Some(hit) = self.products.borrow().get(&key) {
            return hit.clone();
        }
        let out = self.mul_mono_uncached(a, b, i);
        self.products.borrow_mut().insert(key, out.clone());
        out
    }

    /// Exponent s with x^a x^b = q^s x^{a+b} when no δ terms intervene.
    fn diagonal_twist(&self, a: &[i32], b: &[i32]) -> i64 {
        let mut s = 0i64;
        for (j, &bj) in b.iter().enumerate() {
            if bj == 0 {
                continue;
            }
            for (k, &ak) in a.iter().enumerate().skip(j + 1) {
                if ak != 0 {
                    s += self.p.s(k, j) * ak as i64 * bj as i64;
                }
            }
        }
        s
    }

    fn mul_mono_uncached(&self, a: &[i32], b: &[i32], i: usize) -> Element {
        let n = a.len();
        let p = self.p;
        let mut high = vec![0; n];
        high[i + 1..].copy_from_slice(&a[i + 1..]);
        let mut low = a.to_vec();
        low[i + 1..].iter_mut().for_each(|e| *e = 0);
        let e = b[i];

        if !p.has_delta(i) {
            let tw = -(e as i64) * p.tau_exponent(i, &high);
            let mut head = a.to_vec();
            head[i] += e;
            let mut rest = vec![0; n];
            rest[i + 1..].copy_from_slice(&b[i + 1..]);
            return self.mul_mono(&head, &rest).scale(&QLaurent::q_pow(tw));
        }
        // layers[k] stands for x_i^k · layers[k], each supported after i
        let mut layers: Vec<Element> = vec![Element::monomial(high, QLaurent::one())];
        for _ in 0..e {
            let mut next = vec![Element::zero(); layers.len() + 1];
            for (k, layer) in layers.iter().enumerate() {
                let twisted = self.tau_inv(i, layer);
                next[k] = next[k].sub(&self.derive_elem(i, &twisted));
                next[k + 1] = next[k + 1].add(&twisted);
            }
            layers = next;
        }
        let shifted: Vec<(i32, Element)> = layers.into_iter().enumerate().map(|(k, l)| (k as i32, l)).collect();
        self.finish(&low, i, &shifted, b)
    }

    /// Σ low · x_i^k · layer_k · x^{b beyond i}.
    fn finish(&self, low: &[i32], i: usize, layers: &[(i32, Element)], b: &[i32]) -> Element {
        let mut rest = vec![0; b.len()];
        rest[i + 1..].copy_from_slice(&b[i + 1..]);
        let mut out = Element::zero();
        for (k, layer) in layers {
            for (m, c) in layer.terms() {
                let mut head = m.clone();
                head[..i].copy_from_slice(&low[..i]);
                head[i] = low[i] + k;
                let prod = self.mul_mono(&head, &rest);
                out.add_scaled(&prod, c);
            }
        }
        out
    }

    fn tau_inv(&self, i: usize, u: &Element) -> Element {
        let mut out = Element::zero();
        for (m, c) in u.terms() {
            out.add_term(m.clone(), &c.shift(-self.p.tau_exponent(i, m)));
        }
        out
    }

    pub fn tau(&self, i: usize, u: &Element) -> Element {
        let mut out = Element::zero();
        for (m, c) in u.terms() {
            out.add_term(m.clone(), &c.shift(self.p.tau_exponent(i, m)));
        }
        out
    }

    /// δ_i on an element supported on generators after i.
    pub fn derive_elem(&self, i: usize, u: &Element) -> Element {
        let mut out = Element::zero();
        for (m, c) in u.terms() {
            out.add_scaled(&self.derive_mono(i, m), c);
        }
        out
    }

    fn derive_mono(&self, i: usize, m: &[i32]) -> Element {
        if !self.p.has_delta(i) {
            return Element::zero();
        }
        let Some(j) = m.iter().position(|&e| e != 0) else {
            return Element::zero();
        };
        let key = (i, m.to_vec());
        if let Some(hit) = self.derivations.borrow().get(&key) {
            return hit.clone();
        }
        let n = m.len();
        let c = m[j];
        let mut rest = m.to_vec();
        rest[j] = 0;
        let mut out = Element::zero();
        if let Some(dj) = self.p.delta(i, j) {
            // δ(x_j^c) = Σ_t q^{t s_ij} x_j^t δ(x_j) x_j^{c-1-t}, then · rest
            let sij = self.p.s(i, j);
            for t in 0..c {
                let left = self.p.gen_pow(j, t);
                let mut right = vec![0; n];
                right[j] = c - 1 - t;
                for (k, &e) in rest.iter().enumerate() {
                    right[k] += e;
                }
                let right = Element::monomial(right, QLaurent::one());
                let term = self.mul(&self.mul(&left, dj), &right);
                out.add_scaled(&term, &QLaurent::q_pow(sij * t as i64));
            }
        }
        if rest.iter().any(|&e| e != 0) {
            let mut head = vec![0; n];
            head[j] = c;
            let d_rest = self.derive_mono(i, &rest);
            if !d_rest.is_zero() {
                let tw = self.p.s(i, j) * c as i64;
                let term = self.mul(&Element::monomial(head, QLaurent::one()), &d_rest);
                out.add_scaled(&term, &QLaurent::q_pow(tw));
            }
        }
        self.derivations.borrow_mut().insert(key, out.clone());
        out
    }
}

fn merge(a: &[i32], b: &[i32]) -> Mono {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}
