//! Irreducible representations over a stratum from clock and shift matrices.

use std::collections::{BTreeSet, HashMap};

use crate::engine::{AlgebraPresentation, Element, Mono};
use crate::exactnum::{CycloNum, RootData};
use crate::models::{Character, Context, Model};
use crate::strata::Stratum;

use super::linalg::{axpy, scaled, SVec};
use super::FiberError;

/// Sparse square matrix, stored by rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    n: usize,
    rows: Vec<SVec>,
}

impl Matrix {
    pub fn zero(n: usize) -> Self {
        Matrix { n, rows: vec![SVec::new(); n] }
    }

    pub fn scalar(n: usize, c: &CycloNum) -> Self {
        let mut m = Matrix::zero(n);
        if !c.is_zero() {
            for i in 0..n {
                m.rows[i].insert(i, c.clone());
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&CycloNum> {
        self.rows[i].get(&j)
    }

    pub fn set(&mut self, i: usize, j: usize, c: CycloNum) {
        if c.is_zero() {
            self.rows[i].remove(&j);
        } else {
            self.rows[i].insert(j, c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(SVec::is_empty)
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut out = SVec::new();
                for (&k, x) in r {
                    axpy(&mut out, x, &o.rows[k]);
                }
                out
            })
            .collect();
        Matrix { n: self.n, rows }
    }

    pub fn add_scaled(&self, o: &Matrix, c: &CycloNum) -> Matrix {
        let rows = self
            .rows
            .iter()
            .zip(&o.rows)
            .map(|(a, b)| {
                let mut r = a.clone();
                axpy(&mut r, c, b);
                r
            })
            .collect();
        Matrix { n: self.n, rows }
    }

    pub fn scale(&self, c: &CycloNum) -> Matrix {
        Matrix { n: self.n, rows: self.rows.iter().map(|r| scaled(r, c)).collect() }
    }

    pub fn pow(&self, e: u32, one: &CycloNum) -> Matrix {
        let mut acc = Matrix::scalar(self.n, one);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn trace(&self, zero: &CycloNum) -> CycloNum {
        (0..self.n).filter_map(|i| self.rows[i].get(&i)).fold(zero.clone(), |a, x| &a + x)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    pub dim: usize,
    /// One matrix per generator.
    pub mats: Vec<Matrix>,
    /// Scalars of z_1, …, z_p.
    pub z_values: Vec<CycloNum>,
}

impl Representation {
    /// Image of an element of the algebra at q = ε.
    pub fn eval(&self, e: &Element, root: &RootData) -> Matrix {
        let one = root.one();
        let mut out = Matrix::zero(self.dim);
        for (m, c) in e.terms() {
            out = out.add_scaled(&self.monomial(m, &one), &c.eval_at_root(root));
        }
        out
    }

    pub fn monomial(&self, m: &[i32], one: &CycloNum) -> Matrix {
        let mut acc = Matrix::scalar(self.dim, one);
        for (g, &e) in m.iter().enumerate() {
            if e > 0 {
                acc = acc.mul(&self.mats[g].pow(e as u32, one));
            }
        }
        acc
    }

    /// Traces on the monomials with exponents in [0, l).
    pub fn trace_signature(&self, root: &RootData) -> Vec<CycloNum> {
        let n = self.mats.len();
        let l = root.l() as usize;
        let (zero, one) = (root.zero(), root.one());
        (0..l.pow(n as u32))
            .map(|mut k| {
                let m: Mono = (0..n)
                    .map(|_| {
                        let e = (k % l) as i32;
                        k /= l;
                        e
                    })
                    .collect();
                self.monomial(&m, &one).trace(&zero)
            })
            .collect()
    }
}

/// Number of pairwise non-isomorphic representations, separated by trace signatures.
pub fn distinct_count(reps: &[Representation], root: &RootData) -> usize {
    reps.iter()
        .map(|r| r.trace_signature(root).iter().map(CycloNum::render).collect::<Vec<_>>())
        .collect::<BTreeSet<_>>()
        .len()
}

/// Checks every defining relation and x_g^l = χ(a_g).
pub fn check_relations(p: &AlgebraPresentation, root: &RootData, rep: &Representation, values: &[CycloNum]) -> Result<(), FiberError> {
    let one = root.one();
    let x = &rep.mats;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            let mut r = x[i].mul(&x[j]).add_scaled(&x[j].mul(&x[i]), &-root.eps_pow(p.s(i, j)));
            if let Some(d) = p.delta(i, j) {
                r = r.add_scaled(&rep.eval(d, root), &-one.clone());
            }
            if !r.is_zero() {
                return Err(FiberError::RelationFailed(format!("{} {}", p.names()[i], p.names()[j])));
            }
        }
        if x[i].pow(root.l(), &one) != Matrix::scalar(rep.dim, &values[i]) {
            return Err(FiberError::RelationFailed(format!("{}^l", p.names()[i])));
        }
    }
    Ok(())
}

fn half_mod(l: u32) -> Option<i64> {
    (l % 2 == 1).then(|| (l as i64 + 1) / 2)
}

/// W(c) on (C^l)^{⊗k}: the symmetrized product of h_i^{a_i} g_i^{b_i}.
fn torus_word(root: &RootData, ds: &[i64], c: &[i64], half: i64) -> Matrix {
    let l = root.l() as i64;
    let k = ds.len();
    let n = (l as usize).pow(k as u32);
    let mut m = Matrix::zero(n);
    for col in 0..n {
        let mut idx: Vec<i64> = (0..k).map(|i| (col / (l as usize).pow(i as u32) % l as usize) as i64).collect();
        let mut phase = 0i64;
        for i in 0..k {
            let (a, b) = (c[2 * i], c[2 * i + 1]);
            idx[i] = (idx[i] + b).rem_euclid(l);
            phase += ds[i] * a * idx[i] - half * ds[i] * a * b;
        }
        let row: usize = idx.iter().enumerate().map(|(i, &x)| x as usize * (l as usize).pow(i as u32)).sum();
        m.set(row, col, root.eps_pow(phase.rem_euclid(l)));
    }
    m
}

/// The l^t representations of the stratum torus at χ, pushed to the generators.
pub fn clock_shift_irreps(ctx: &Context, stratum: &Stratum, chi: &Character) -> Result<Vec<Representation>, FiberError> {
    let root = &ctx.root;
    let l = root.l();
    let half = half_mod(l).ok_or_else(|| FiberError::Shape(format!("even order {l}")))?;
    let ts = &stratum.torus;
    let witnesses = stratum.survivor_witnesses(chi).map_err(|e| FiberError::MissingWitness(e.to_string()))?;
    let inv = ts
        .basis
        .inverse_unimodular()
        .map_err(|e| FiberError::Lattice(e.to_string()))?
        .ok_or_else(|| FiberError::Lattice("torus basis is not unimodular".into()))?;
    let coords: Vec<&[i64]> = (0..stratum.survivors.len()).map(|s| inv.row(s)).collect();
    let words: Vec<Matrix> = coords.iter().map(|c| torus_word(root, &ts.ds, c, half)).collect();
    let dim = (l as usize).pow(ts.k as u32);
    let base_z = stratum.z_ext(&witnesses, root);
    let p = ctx.presentation();

    let mut reps = Vec::new();
    for code in 0..(l as usize).pow(ts.t as u32) {
        let shift: Vec<i64> = (0..ts.t).map(|j| (code / (l as usize).pow(j as u32) % l as usize) as i64).collect();
        let images: HashMap<&str, Matrix> = stratum
            .survivors
            .iter()
            .enumerate()
            .map(|(s, g)| {
                let e: i64 = (0..ts.t).map(|j| shift[j] * coords[s][2 * ts.k + j]).sum();
                (g.name.as_str(), words[s].scale(&(&witnesses[s] * &root.eps_pow(e.rem_euclid(l as i64)))))
            })
            .collect();
        let mats = generator_images(ctx, &images, chi, dim)?;
        let mut z_values: Vec<CycloNum> = Vec::new();
        for j in 0..ts.t {
            let z = ts.z(j);
            let mut v = root.eps_pow(shift[j]);
            for (w, &e) in witnesses.iter().zip(z) {
                v = &v * &w.pow(e).expect("survivor witnesses are nonzero");
            }
            z_values.push(v);
        }
        z_values.extend(base_z.iter().cloned());
        let rep = Representation { dim, mats, z_values };
        check_relations(p, root, &rep, &chi.values)?;
        reps.push(rep);
    }
    Ok(reps)
}

fn generator_images(ctx: &Context, images: &HashMap<&str, Matrix>, chi: &Character, dim: usize) -> Result<Vec<Matrix>, FiberError> {
    let p = ctx.presentation();
    let root = &ctx.root;
    let one = root.one();
    let named = |s: &str| images.get(s).cloned();
    match &ctx.model {
        Model::Weyl(w) => {
            let mut mats = vec![Matrix::zero(dim); p.len()];
            let w_img = |j: usize| {
                if j == 0 { Matrix::scalar(dim, &one) } else { named(&format!("w{j}")).unwrap_or_else(|| Matrix::zero(dim)) }
            };
            for i in 1..=w.n() {
                let (px, py) = (w.pos_x(i - 1), w.pos_y(i - 1));
                let y = named(&format!("y{i}"));
                let x = match (named(&format!("x{i}")), &y) {
                    (Some(x), _) => x,
                    (None, Some(y)) => {
                        let b = chi.values[py].inv().ok_or_else(|| FiberError::MissingWitness(format!("y{i}^l = 0")))?;
                        let qi = w.matrices().exps[i - 1];
                        let c = (&root.eps_pow(qi) - &one).inv().ok_or_else(|| FiberError::Shape(format!("q_{i} = 1")))?;
                        let y_inv = y.pow(root.l() - 1, &one).scale(&b);
                        y_inv.mul(&w_img(i).add_scaled(&w_img(i - 1), &-one.clone())).scale(&c)
                    }
                    (None, None) => Matrix::zero(dim),
                };
                mats[px] = x;
                mats[py] = y.unwrap_or_else(|| Matrix::zero(dim));
            }
            Ok(mats)
        }
        _ => Ok((0..p.len()).map(|g| named(&p.names()[g]).unwrap_or_else(|| Matrix::zero(dim))).collect()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{build_twisted, build_weyl};
    use crate::strata::{enumerate_strata, locate, Location};
    use crate::zlattice::IntMat;

    fn plane() -> Context {
        let s = IntMat::new(&[[0, 1], [-1, 0]]);
        Context::new(Model::Twisted(build_twisted(&s, 2).unwrap()), RootData::new(3).unwrap()).unwrap()
    }

    #[test]
    fn plane_torus_has_one_irrep_of_dim_three() {
        let ctx = plane();
        let st = enumerate_strata(&ctx).unwrap();
        let r = &ctx.root;
        let chi = Character::from_witnesses(&[r.one(), r.one()], 3);
        let reps = clock_shift_irreps(&ctx, &st[0], &chi).unwrap();
        assert_eq!(reps.len(), 1);
        assert_eq!(reps[0].dim, 3);
    }

    #[test]
    fn plane_edge_has_three_characters() {
        let ctx = plane();
        let st = enumerate_strata(&ctx).unwrap();
        let r = &ctx.root;
        let chi = Character::from_witnesses(&[r.zero(), r.one()], 3);
        let Location::Stratum(i) = locate(&chi, &st).unwrap() else { panic!() };
        let reps = clock_shift_irreps(&ctx, &st[i], &chi).unwrap();
        assert_eq!(reps.len(), 3);
        assert!(reps.iter().all(|rep| rep.dim == 1 && rep.mats[0].is_zero()));
        let vals: std::collections::HashSet<CycloNum> = reps.iter().map(|rep| rep.mats[1].get(0, 0).unwrap().clone()).collect();
        let cube_roots: std::collections::HashSet<CycloNum> = (0..3).map(|k| r.eps_pow(k)).collect();
        assert_eq!(vals, cube_roots);
        assert_eq!(distinct_count(&reps, r), 3);
    }

    #[test]
    fn weyl_generic_stratum() {
        let m = build_weyl(&IntMat::zeros(1, 1), &[1]).unwrap();
        let ctx = Context::new(Model::Weyl(m), RootData::new(3).unwrap()).unwrap();
        let st = enumerate_strata(&ctx).unwrap();
        let r = &ctx.root;
        // b = 1, a = 0 puts f_1 = 1 on the generic stratum
        let mut ws = vec![r.zero(); 2];
        ws[m_pos_y(&ctx)] = r.one();
        let chi = Character::from_witnesses(&ws, 3);
        let Location::Stratum(i) = locate(&chi, &st).unwrap() else { panic!() };
        assert_eq!(i, 0);
        let reps = clock_shift_irreps(&ctx, &st[i], &chi).unwrap();
        assert_eq!(reps.len(), 1);
        assert_eq!(reps[0].dim, 3);
    }

    fn m_pos_y(ctx: &Context) -> usize {
        match &ctx.model {
            Model::Weyl(w) => w.pos_y(0),
            _ => unreachable!(),
        }
    }

    #[test]
    fn weyl_edge_representation_by_hand() {
        // y e_i = e_{i−1}, x e_i = c_i e_{i+1} with c = (−ε², 1, 0) satisfies x y = ε y x + 1
        let w = build_weyl(&IntMat::zeros(1, 1), &[1]).unwrap();
        let r = RootData::new(3).unwrap();
        let p = w.presentation();
        let mut y = Matrix::zero(3);
        let mut x = Matrix::zero(3);
        let c = [-r.eps_pow(2), r.one(), r.zero()];
        for i in 1..3 {
            y.set(i - 1, i, r.one());
            x.set(i, i - 1, c[i - 1].clone());
        }
        let mut mats = vec![Matrix::zero(3); 2];
        mats[w.pos_x(0)] = x.clone();
        mats[w.pos_y(0)] = y.clone();
        let lhs = x.mul(&y);
        let rhs = y.mul(&x).scale(&r.eps()).add_scaled(&Matrix::scalar(3, &r.one()), &r.one());
        assert_eq!(lhs, rhs);
        let rep = Representation { dim: 3, mats, z_values: vec![] };
        check_relations(p, &r, &rep, &[r.zero(), r.zero()]).unwrap();
    }
}
