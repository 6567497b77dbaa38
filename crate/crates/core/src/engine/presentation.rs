use std::collections::BTreeMap;

use super::element::{Element, Mono};
use super::EngineError;
use crate::exactnum::QLaurent;
use crate::zlattice::IntMat;

/// An iterated Ore extension in a fixed generator order.
///
/// For i < j the relation is x_i x_j = q^{s_ij} x_j x_i + δ_i(x_j), with
/// δ_i(x_j) supported on generators after i. Invertible generators form a
/// suffix of the order and carry no δ terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraPresentation {
    names: Vec<String>,
    invertible: Vec<bool>,
    skew: IntMat,
    exps: Vec<i64>,
    delta: BTreeMap<(usize, usize), Element>,
}

impl AlgebraPresentation {
    pub fn new(
        names: Vec<String>,
        invertible: Vec<bool>,
        skew: IntMat,
        exps: Vec<i64>,
        delta: BTreeMap<(usize, usize), Element>,
    ) -> Result<Self, EngineError> {
        let n = names.len();
        if invertible.len() != n || exps.len() != n || skew.rows() != n {
            return Err(EngineError::Invalid(format!("inconsistent sizes for {n} generators")));
        }
        skew.check_skew().map_err(|e| EngineError::Invalid(e.to_string()))?;
        if let Some(i) = (1..n).find(|&i| invertible[i - 1] && !invertible[i]) {
            return Err(EngineError::Invalid(format!("invertible generator {} precedes polynomial {}", names[i - 1], names[i])));
        }
        for (&(i, j), d) in &delta {
            if i >= j || j >= n {
                return Err(EngineError::Invalid(format!("delta rule ({i},{j}) must have i < j < {n}")));
            }
            if invertible[i] || invertible[j] {
                return Err(EngineError::Invalid(format!("delta rule on invertible generator in ({},{})", names[i], names[j])));
            }
            for (m, _) in d.terms() {
                if m.len() != n {
                    return Err(EngineError::Invalid("delta term has wrong length".into()));
                }
                if m[..=i].iter().any(|&e| e != 0) {
                    return Err(EngineError::Invalid(format!(
                        "delta_{}({}) involves generators not after {}",
                        names[i], names[j], names[i]
                    )));
                }
                if m.iter().zip(&invertible).any(|(&e, &inv)| e < 0 && !inv) {
                    return Err(EngineError::Invalid("negative exponent on a polynomial generator".into()));
                }
            }
        }
        let delta = delta.into_iter().filter(|(_, d)| !d.is_zero()).collect();
        Ok(AlgebraPresentation { names, invertible, skew, exps, delta })
    }

    /// Skew-commuting generators with no δ terms.
    pub fn twisted(names: Vec<String>, skew: IntMat, n_poly: usize) -> Result<Self, EngineError> {
        let n = names.len();
        if n_poly > n {
            return Err(EngineError::Invalid(format!("n_poly = {n_poly} exceeds {n} generators")));
        }
        let invertible = (0..n).map(|i| i >= n_poly).collect();
        AlgebraPresentation::new(names, invertible, skew, vec![0; n], BTreeMap::new())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn is_invertible(&self, i: usize) -> bool {
        self.invertible[i]
    }

    pub fn invertible(&self) -> &[bool] {
        &self.invertible
    }

    pub fn n_poly(&self) -> usize {
        self.invertible.iter().filter(|&&b| !b).count()
    }

    pub fn skew(&self) -> &IntMat {
        &self.skew
    }

    pub fn s(&self, i: usize, j: usize) -> i64 {
        self.skew.get(i, j)
    }

    pub fn exps(&self) -> &[i64] {
        &self.exps
    }

    pub fn delta(&self, i: usize, j: usize) -> Option<&Element> {
        self.delta.get(&(i, j))
    }

    pub fn delta_rules(&self) -> impl Iterator<Item = (&(usize, usize), &Element)> {
        self.delta.iter()
    }

    pub fn has_delta(&self, i: usize) -> bool {
        self.delta.range((i, 0)..(i + 1, 0)).next().is_some()
    }

    /// True when no δ rule starts at or after `i`.
    pub fn diagonal_from(&self, i: usize) -> bool {
        self.delta.range((i, 0)..).next().is_none()
    }

    pub fn is_diagonal(&self) -> bool {
        self.delta.is_empty()
    }

    /// Exponent e with τ_i(x^m) = q^e x^m.
    pub fn tau_exponent(&self, i: usize, m: &[i32]) -> i64 {
        m.iter().enumerate().map(|(j, &e)| self.skew.get(i, j) * e as i64).sum()
    }

    pub fn unit(&self) -> Mono {
        vec![0; self.len()]
    }

    pub fn gen(&self, i: usize) -> Element {
        Element::gen(self.len(), i)
    }

    pub fn gen_pow(&self, i: usize, e: i32) -> Element {
        let mut m = self.unit();
        m[i] = e;
        Element::monomial(m, QLaurent::one())
    }

    pub fn one(&self) -> Element {
        Element::one(self.len())
    }

    pub fn with_exps(mut self, exps: Vec<i64>) -> Result<Self, EngineError> {
        if exps.len() != self.len() {
            return Err(EngineError::Invalid("exponent system has wrong length".into()));
        }
        self.exps = exps;
        Ok(self)
    }
}
