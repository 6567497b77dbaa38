//! Named algebra families: twisted polynomial algebras, quantum Weyl algebras
//! and the rank-one Borel preset.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::engine::{
    is_central_at_root, poisson_bracket, validate, AlgebraPresentation, EngineError, Element, Mono, RootElement,
    Rewriter,
};
use crate::exactnum::{CycloNum, QLaurent, RootData};
use crate::zlattice::IntMat;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("invalid model: {0}")]
    Invalid(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("not expressible in the l-center: {0}")]
    ExpressionFailed(String),
    #[error("bracket shape mismatch: {0}")]
    ShapeMismatch(String),
}

const VALIDATION_BOUND: usize = 64;

fn x_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

pub fn build_twisted(s: &IntMat, n_poly: usize) -> Result<AlgebraPresentation, ModelError> {
    Ok(AlgebraPresentation::twisted(x_names(s.rows()), s.clone(), n_poly)?)
}

/// U_q(b) for sl2 in A1 form: F polynomial, K invertible, F K = q² K F.
pub fn build_borel_sl2() -> AlgebraPresentation {
    AlgebraPresentation::twisted(vec!["F".into(), "K".into()], IntMat::new(&[[0, 2], [-2, 0]]), 1)
        .expect("preset is well formed")
}

/// Exponent matrices of the quantum Weyl algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylMatrices {
    pub s: IntMat,
    pub exps: Vec<i64>,
    /// x_i x_j = q^{t_ij} x_j x_i.
    pub t: IntMat,
    /// x_i y_j = q^{u_ij} y_j x_i, with u_ii the leading exponent of (x_i, y_i).
    pub u: IntMat,
    /// Skew matrix on (y_1..y_n, x_1..x_n): [[S, −Uᵀ], [U, T]].
    pub sstar: IntMat,
}

pub fn build_weyl_matrices(s: &IntMat, exps: &[i64]) -> Result<WeylMatrices, ModelError> {
    let n = s.rows();
    s.check_skew().map_err(|e| ModelError::Invalid(e.to_string()))?;
    if exps.len() != n {
        return Err(ModelError::Invalid(format!("{} exponents for {n} pairs", exps.len())));
    }
    if let Some(i) = exps.iter().position(|&e| e == 0) {
        return Err(ModelError::Invalid(format!("exponent s_{} is zero", i + 1)));
    }
    let mut t = IntMat::zeros(n, n);
    let mut u = IntMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if i < j {
                t.set(i, j, exps[i] + s.get(i, j));
                t.set(j, i, -(exps[i] + s.get(i, j)));
            }
            let uij = match i.cmp(&j) {
                std::cmp::Ordering::Less => s.get(j, i),
                std::cmp::Ordering::Equal => exps[i],
                std::cmp::Ordering::Greater => exps[j] + s.get(j, i),
            };
            u.set(i, j, uij);
        }
    }
    let mut sstar = IntMat::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            sstar.set(i, j, s.get(i, j));
            sstar.set(i, n + j, -u.get(j, i));
            sstar.set(n + i, j, u.get(i, j));
            sstar.set(n + i, n + j, t.get(i, j));
        }
    }
    Ok(WeylMatrices { s: s.clone(), exps: exps.to_vec(), t, u, sstar })
}

/// Quantum Weyl algebra with PBW order y_n, x_n, …, y_1, x_1.
#[derive(Debug, Clone)]
pub struct WeylModel {
    presentation: AlgebraPresentation,
    matrices: WeylMatrices,
    /// w_0 = 1, …, w_n.
    w: Vec<Element>,
}

impl WeylModel {
    pub fn n(&self) -> usize {
        self.matrices.exps.len()
    }

    pub fn presentation(&self) -> &AlgebraPresentation {
        &self.presentation
    }

    pub fn matrices(&self) -> &WeylMatrices {
        &self.matrices
    }

    /// Position of y_i (0-based pair index) in the generator order.
    pub fn pos_y(&self, i: usize) -> usize {
        2 * (self.n() - 1 - i)
    }

    pub fn pos_x(&self, i: usize) -> usize {
        self.pos_y(i) + 1
    }

    /// w_i for i in 0..=n.
    pub fn w(&self, i: usize) -> &Element {
        &self.w[i]
    }

    /// Maps an index of the (y, x) block layout of S* to a generator position.
    pub fn block_to_pos(&self, k: usize) -> usize {
        let n = self.n();
        if k < n {
            self.pos_y(k)
        } else {
            self.pos_x(k - n)
        }
    }
}

pub fn build_weyl(s: &IntMat, exps: &[i64]) -> Result<WeylModel, ModelError> {
    let mats = build_weyl_matrices(s, exps)?;
    let n = exps.len();
    let len = 2 * n;
    let pos_y = |i: usize| 2 * (n - 1 - i);
    let pos_x = |i: usize| 2 * (n - 1 - i) + 1;
    let mut names = vec![String::new(); len];
    for i in 0..n {
        names[pos_y(i)] = format!("y{}", i + 1);
        names[pos_x(i)] = format!("x{}", i + 1);
    }
    let mut skew = IntMat::zeros(len, len);
    for a in 0..len {
        for b in 0..len {
            let blk = |p: usize| if p % 2 == 0 { n - 1 - p / 2 } else { n + (n - 1 - p / 2) };
            skew.set(a, b, mats.sstar.get(blk(a), blk(b)));
        }
    }
    let mut w = vec![Element::one(len)];
    for k in 0..n {
        let mut m = vec![0; len];
        m[pos_y(k)] = 1;
        m[pos_x(k)] = 1;
        let h = Element::monomial(m, QLaurent::q_pow(exps[k]) - QLaurent::one());
        w.push(w[k].add(&h));
    }
    let mut delta = BTreeMap::new();
    let mut gen_exps = vec![0; len];
    for i in 0..n {
        // y_i x_i = q_i^{-1} x_i y_i − q_i^{-1} w_{i−1}
        delta.insert((pos_y(i), pos_x(i)), w[i].scale(&-QLaurent::q_pow(-exps[i])));
        gen_exps[pos_y(i)] = exps[i];
    }
    let presentation = AlgebraPresentation::new(names, vec![false; len], skew, gen_exps, delta)?;
    validate(&presentation, VALIDATION_BOUND)?;
    let model = WeylModel { presentation, matrices: mats, w };
    check_w_table(&model)?;
    Ok(model)
}

/// y_i w_j = q_i^{-1} w_j y_i and x_i w_j = q_i w_j x_i for i ≤ j; both commute for i > j.
fn check_w_table(m: &WeylModel) -> Result<(), ModelError> {
    let p = &m.presentation;
    let rw = Rewriter::new(p);
    for i in 0..m.n() {
        let si = m.matrices.exps[i];
        let (y, x) = (p.gen(m.pos_y(i)), p.gen(m.pos_x(i)));
        let x_rel = rw.mul(&x, &y).sub(&rw.mul(&y, &x).scale(&QLaurent::q_pow(si)));
        if x_rel != m.w[i] {
            return Err(ModelError::ShapeMismatch(format!("x{0} y{0} − q_{0} y{0} x{0} ≠ w_{1}", i + 1, i)));
        }
        for j in 1..=m.n() {
            let e = if i < j { si } else { 0 };
            let wj = &m.w[j];
            if rw.mul(&y, wj) != rw.mul(wj, &y).scale(&QLaurent::q_pow(-e))
                || rw.mul(&x, wj) != rw.mul(wj, &x).scale(&QLaurent::q_pow(e))
            {
                return Err(ModelError::ShapeMismatch(format!("commutation of x{0}, y{0} with w_{j}", i + 1)));
            }
        }
    }
    Ok(())
}

/// Element of the l-center written in the coordinates a_g = x_g^l.
pub type CenterPoly = RootElement;

/// Divides every exponent by l; fails when some exponent is not a multiple of l.
pub fn to_l_center(e: &RootElement, l: u32) -> Option<CenterPoly> {
    let mut out = RootElement::zero();
    for (m, c) in e.terms() {
        if m.iter().any(|&x| x % l as i32 != 0) {
            return None;
        }
        out.add_term(m.iter().map(|&x| x / l as i32).collect(), c);
    }
    Some(out)
}

pub fn from_l_center(z: &CenterPoly, l: u32) -> RootElement {
    let mut out = RootElement::zero();
    for (m, c) in z.terms() {
        out.add_term(m.iter().map(|&x| x * l as i32).collect(), c);
    }
    out
}

/// The global constant in {x_i^l, x_j^l} = κ s_ij x_i^l x_j^l.
pub fn kappa(r: &RootData) -> CycloNum {
    let l = r.l() as i64;
    r.eps_pow(-1).scale(&crate::exactnum::rat(l * l, 1))
}

/// f_i = w_i^l expressed in the l-center, and the Poisson table on a_i, b_i.
#[derive(Debug, Clone)]
pub struct WeylCenterData {
    /// f_0 = 1, …, f_n.
    pub f: Vec<CenterPoly>,
    /// Coefficient of a_k b_k in f_k.
    pub gamma: Vec<CycloNum>,
    pub kappa: CycloNum,
    /// c'_i in {a_i, b_i} = κ s_i a_i b_i + c'_i f_{i−1}.
    pub lower_constant: Vec<CycloNum>,
    /// Brackets between l-center generators, keyed by generator positions.
    pub brackets: BTreeMap<(usize, usize), CenterPoly>,
}

fn center_mono(len: usize, entries: &[(usize, i32)]) -> Mono {
    let mut m = vec![0; len];
    for &(g, e) in entries {
        m[g] += e;
    }
    m
}

pub fn f_elements_and_z0_brackets(m: &WeylModel, r: &RootData) -> Result<WeylCenterData, ModelError> {
    let p = &m.presentation;
    let rw = Rewriter::new(p);
    let l = r.l();
    let len = p.len();
    let n = m.n();
    let mut f = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let wl = rw.pow(&m.w[i], l);
        if !is_central_at_root(&rw, &wl, r) {
            return Err(ModelError::ExpressionFailed(format!("w_{i}^{l} is not central")));
        }
        let z = to_l_center(&wl.eval_at_root(r), l)
            .ok_or_else(|| ModelError::ExpressionFailed(format!("w_{i}^{l} has exponents not divisible by {l}")))?;
        f.push(z);
    }
    let mut gamma = Vec::with_capacity(n);
    for k in 0..n {
        let ab = center_mono(len, &[(m.pos_y(k), 1), (m.pos_x(k), 1)]);
        let diff = f[k + 1].sub(&f[k]);
        let g = diff.coeff(&ab).cloned().unwrap_or_else(|| r.zero());
        let expect = RootElement::monomial(ab.clone(), g.clone());
        // f_k − f_{k−1} = γ_k a_k b_k · (unit) is checked up to the single monomial
        if g.is_zero() || diff != expect {
            return Err(ModelError::ShapeMismatch(format!("f_{} − f_{} is not a multiple of a_{0} b_{0}: {:?}", k + 1, k, diff)));
        }
        gamma.push(g);
    }

    let kap = kappa(r);
    let lgens: Vec<Element> = (0..len).map(|g| p.gen_pow(g, l as i32)).collect();
    let mut brackets = BTreeMap::new();
    let mut lower_constant = vec![r.zero(); n];
    for a in 0..len {
        for b in a + 1..len {
            let br = poisson_bracket(&rw, &lgens[a], &lgens[b], r)?;
            let z = to_l_center(&br, l).ok_or_else(|| ModelError::ExpressionFailed(format!("bracket ({a},{b})")))?;
            let ab = center_mono(len, &[(a, 1), (b, 1)]);
            let leading = RootElement::monomial(ab, kap.scale(&crate::exactnum::rat(p.s(a, b), 1)));
            let rest = z.sub(&leading);
            let pair = (0..n).find(|&i| m.pos_y(i) == a && m.pos_x(i) == b);
            match pair {
                None if !rest.is_zero() => {
                    return Err(ModelError::ShapeMismatch(format!(
                        "{{{}^l, {}^l}} is not κ s a b",
                        p.names()[a],
                        p.names()[b]
                    )))
                }
                None => {}
                Some(i) => {
                    // the table holds {y_i^l, x_i^l}; the constant refers to {x_i^l, y_i^l}
                    let c = scalar_multiple(&rest.scale(&r.int(-1)), &f[i])
                        .ok_or_else(|| ModelError::ShapeMismatch(format!("{{a_{0}, b_{0}}} lower part is not a multiple of f_{1}", i + 1, i)))?;
                    lower_constant[i] = c;
                }
            }
            brackets.insert((a, b), z);
        }
    }
    Ok(WeylCenterData { f, gamma, kappa: kap, lower_constant, brackets })
}

/// c with u = c·v, when such a nonzero scalar exists.
fn scalar_multiple(u: &RootElement, v: &RootElement) -> Option<CycloNum> {
    let (m, x) = v.terms().next()?;
    let c = &u.coeff(m)?.clone() * &x.inv()?;
    (v.scale(&c) == *u && !c.is_zero()).then_some(c)
}

/// Any supported algebra family.
#[derive(Debug, Clone)]
pub enum Model {
    Twisted(AlgebraPresentation),
    Weyl(WeylModel),
    Custom(AlgebraPresentation),
}

impl Model {
    pub fn presentation(&self) -> &AlgebraPresentation {
        match self {
            Model::Twisted(p) | Model::Custom(p) => p,
            Model::Weyl(w) => w.presentation(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Model::Twisted(_) => "twisted",
            Model::Weyl(_) => "weyl",
            Model::Custom(_) => "custom",
        }
    }

    /// Skew matrix and exponent list entering the admissibility test.
    pub fn admissibility_data(&self) -> (IntMat, Vec<i64>) {
        match self {
            Model::Weyl(w) => (w.matrices.sstar.clone(), w.matrices.exps.clone()),
            Model::Twisted(p) => (p.skew().clone(), vec![]),
            Model::Custom(p) => (p.skew().clone(), p.exps().iter().copied().filter(|&e| e != 0).collect()),
        }
    }
}

/// A model at a fixed root of unity together with its l-center data.
#[derive(Debug, Clone)]
pub struct Context {
    pub model: Model,
    pub root: RootData,
    pub weyl: Option<WeylCenterData>,
}

impl Context {
    pub fn new(model: Model, root: RootData) -> Result<Self, ModelError> {
        let weyl = match &model {
            Model::Weyl(w) => Some(f_elements_and_z0_brackets(w, &root)?),
            _ => None,
        };
        Ok(Context { model, root, weyl })
    }

    pub fn presentation(&self) -> &AlgebraPresentation {
        self.model.presentation()
    }

    pub fn l(&self) -> u32 {
        self.root.l()
    }

    /// The l-center coordinate a_g = x_g^l as a polynomial.
    pub fn coordinate(&self, g: usize) -> CenterPoly {
        let mut m = vec![0; self.presentation().len()];
        m[g] = 1;
        RootElement::monomial(m, self.root.one())
    }
}

/// Values of a central character on the coordinates a_g = x_g^l, with optional l-th roots.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Character {
    pub values: Vec<CycloNum>,
    pub witnesses: Vec<Option<CycloNum>>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharacterError {
    #[error("invertible generator {0} has character value 0")]
    ZeroOnInvertible(String),
    #[error("witness for {0} does not raise to its value")]
    BadWitness(String),
    #[error("character has {got} values for {want} generators")]
    Length { got: usize, want: usize },
}

impl Character {
    /// Character whose values are the l-th powers of the given witnesses.
    pub fn from_witnesses(ws: &[CycloNum], l: u32) -> Character {
        Character {
            values: ws.iter().map(|w| w.pow(l as i64).expect("nonnegative power")).collect(),
            witnesses: ws.iter().map(|w| Some(w.clone())).collect(),
        }
    }

    pub fn check(&self, p: &AlgebraPresentation, l: u32) -> Result<(), CharacterError> {
        if self.values.len() != p.len() || self.witnesses.len() != p.len() {
            return Err(CharacterError::Length { got: self.values.len(), want: p.len() });
        }
        for g in 0..p.len() {
            if p.is_invertible(g) && self.values[g].is_zero() {
                return Err(CharacterError::ZeroOnInvertible(p.names()[g].clone()));
            }
            if let Some(w) = &self.witnesses[g] {
                if w.pow(l as i64).as_ref() != Some(&self.values[g]) {
                    return Err(CharacterError::BadWitness(p.names()[g].clone()));
                }
            }
        }
        Ok(())
    }

    /// Value of an l-center polynomial; None if a negative power hits a zero value.
    pub fn eval(&self, z: &CenterPoly) -> Option<CycloNum> {
        let root = self.values.first()?.root().clone();
        let mut acc = root.zero();
        for (m, c) in z.terms() {
            let mut t = c.clone();
            for (g, &e) in m.iter().enumerate() {
                if e != 0 {
                    t = &t * &self.values[g].pow(e as i64)?;
                }
            }
            acc = &acc + &t;
        }
        Some(acc)
    }

    pub fn key(&self) -> String {
        self.values.iter().map(CycloNum::render).collect::<Vec<_>>().join(";")
    }
}
