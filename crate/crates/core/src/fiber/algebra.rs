//! Fiber algebras: the quotient of the algebra at q = ε by x_g^l − χ(a_g) and,
//! optionally, by further central elements set to scalars.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use crate::engine::{mono_string, AlgebraPresentation, Element, Mono, Rewriter};
use crate::exactnum::{CycloNum, RootData};
use crate::zlattice::{smith_normal_form, IntMat};

use super::linalg::{axpy, scaled, unit, Echelon, SVec};
use super::FiberError;

pub const MAX_FIBER_DIM: usize = 6561;

/// Grading by Z^N modulo a relation lattice.
#[derive(Debug, Clone)]
pub struct Grading {
    v: IntMat,
    /// Modulus per coordinate; 0 means the coordinate is free.
    mods: Vec<i64>,
}

pub type Degree = Vec<i64>;

impl Grading {
    pub fn new(n: usize, relations: &[Vec<i64>]) -> Result<Grading, FiberError> {
        let rows: Vec<Vec<i64>> = relations.iter().filter(|r| r.iter().any(|&x| x != 0)).cloned().collect();
        if rows.is_empty() {
            return Ok(Grading { v: IntMat::identity(n), mods: vec![0; n] });
        }
        let m = IntMat::from_rows(&rows).map_err(|e| FiberError::Lattice(e.to_string()))?;
        let (_, d, v) = smith_normal_form(&m).map_err(|e| FiberError::Lattice(e.to_string()))?;
        let mods = (0..n).map(|i| if i < d.rows() { d.get(i, i) } else { 0 }).collect();
        Ok(Grading { v, mods })
    }

    pub fn degree(&self, e: &[i32]) -> Degree {
        let n = e.len();
        (0..n)
            .filter(|&i| self.mods[i] != 1)
            .map(|i| {
                let w: i64 = (0..n).map(|k| e[k] as i64 * self.v.get(k, i)).sum();
                if self.mods[i] == 0 { w } else { w.rem_euclid(self.mods[i]) }
            })
            .collect()
    }

    fn live_mods(&self) -> impl Iterator<Item = i64> + '_ {
        self.mods.iter().copied().filter(|&m| m != 1)
    }

    pub fn neg(&self, d: &[i64]) -> Degree {
        d.iter().zip(self.live_mods()).map(|(&x, m)| if m == 0 { -x } else { (-x).rem_euclid(m) }).collect()
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Degree {
        a.iter()
            .zip(b)
            .zip(self.live_mods())
            .map(|((&x, &y), m)| if m == 0 { x + y } else { (x + y).rem_euclid(m) })
            .collect()
    }

    pub fn zero(&self) -> Degree {
        vec![0; self.live_mods().count()]
    }
}

/// A central element of the algebra and the scalar it takes in the fiber.
#[derive(Debug, Clone)]
pub struct CentralValue {
    pub element: Element,
    pub value: CycloNum,
}

pub struct FDAlgebra<'a> {
    root: RootData,
    rw: Rewriter<'a>,
    l: u32,
    values: Vec<CycloNum>,
    grading: Grading,
    basis: Vec<Mono>,
    degrees: Vec<Degree>,
    members: BTreeMap<Degree, Vec<usize>>,
    /// Coordinates of each reduced monomial, indexed in base l.
    quot: Vec<SVec>,
    cache: RefCell<HashMap<(usize, usize), SVec>>,
}

fn mono_index(m: &[i32], l: u32) -> usize {
    m.iter().rev().fold(0usize, |acc, &e| acc * l as usize + e as usize)
}

fn index_mono(mut k: usize, n: usize, l: u32) -> Mono {
    (0..n)
        .map(|_| {
            let e = (k % l as usize) as i32;
            k /= l as usize;
            e
        })
        .collect()
}

/// The part of the relation lattice coming from the presentation and x_g^l.
fn presentation_relations(p: &AlgebraPresentation, l: u32) -> Vec<Vec<i64>> {
    let n = p.len();
    let mut rels = Vec::new();
    for g in 0..n {
        let mut r = vec![0; n];
        r[g] = l as i64;
        rels.push(r);
    }
    for (&(i, j), d) in p.delta_rules() {
        for (m, _) in d.terms() {
            let mut r: Vec<i64> = m.iter().map(|&e| -(e as i64)).collect();
            r[i] += 1;
            r[j] += 1;
            rels.push(r);
        }
    }
    rels
}

fn element_relations(e: &Element, with_constant: bool, n: usize) -> Vec<Vec<i64>> {
    let monos: Vec<Vec<i64>> = e.terms().map(|(m, _)| m.iter().map(|&x| x as i64).collect()).collect();
    let base = if with_constant { vec![0; n] } else { monos.first().cloned().unwrap_or_else(|| vec![0; n]) };
    monos.iter().map(|m| m.iter().zip(&base).map(|(a, b)| a - b).collect()).collect()
}

impl<'a> FDAlgebra<'a> {
    /// Fiber over the l-center values `values` (one per generator), further cut
    /// by the given central scalars.
    pub fn new(
        p: &'a AlgebraPresentation,
        root: &RootData,
        values: &[CycloNum],
        central: &[CentralValue],
    ) -> Result<Self, FiberError> {
        let n = p.len();
        let l = root.l();
        let full = (l as usize).checked_pow(n as u32).filter(|&d| d <= MAX_FIBER_DIM);
        let Some(full) = full else {
            return Err(FiberError::TooLarge { dim: (l as usize).saturating_pow(n as u32), bound: MAX_FIBER_DIM });
        };
        if values.len() != n {
            return Err(FiberError::Shape(format!("{} values for {n} generators", values.len())));
        }
        let mut rels = presentation_relations(p, l);
        for c in central {
            rels.extend(element_relations(&c.element, !c.value.is_zero(), n));
        }
        let grading = Grading::new(n, &rels)?;
        let mut alg = FDAlgebra {
            root: root.clone(),
            rw: Rewriter::new(p),
            l,
            values: values.to_vec(),
            grading,
            basis: Vec::new(),
            degrees: Vec::new(),
            members: BTreeMap::new(),
            quot: Vec::new(),
            cache: RefCell::new(HashMap::new()),
        };
        let one = root.one();
        let mut by_degree: BTreeMap<Degree, Vec<usize>> = BTreeMap::new();
        for k in 0..full {
            by_degree.entry(alg.grading.degree(&index_mono(k, n, l))).or_default().push(k);
        }
        let mut quot = vec![SVec::new(); full];
        let mut central0 = Vec::new();
        for c in central {
            let mut v = alg.reduce0(&c.element);
            axpy(&mut v, &-c.value.clone(), &unit(0, &one));
            central0.push(v);
        }
        for (deg, monos) in by_degree {
            let mut ech = Echelon::new();
            for &k in &monos {
                let m = index_mono(k, n, l);
                for c in &central0 {
                    // (c − v)·x^m in monomial coordinates
                    let mut row = SVec::new();
                    for (&j, x) in c {
                        axpy(&mut row, x, &alg.mul0(&index_mono(j, n, l), &m));
                    }
                    ech.insert(&reverse(&row, full));
                }
            }
            let start = alg.basis.len();
            let free: Vec<usize> = monos.iter().copied().filter(|&k| !ech.is_pivot(full - 1 - k)).collect();
            for (off, &k) in free.iter().enumerate() {
                alg.basis.push(index_mono(k, n, l));
                alg.degrees.push(deg.clone());
                quot[k] = unit(start + off, &one);
            }
            let local: HashMap<usize, usize> = free.iter().enumerate().map(|(o, &k)| (k, start + o)).collect();
            for &k in &monos {
                if let Some(row) = ech.row(full - 1 - k) {
                    let mut v = SVec::new();
                    for (&c, x) in row {
                        if c != full - 1 - k {
                            v.insert(local[&(full - 1 - c)], -x.clone());
                        }
                    }
                    quot[k] = v;
                }
            }
            if !free.is_empty() {
                alg.members.insert(deg, (start..alg.basis.len()).collect());
            }
        }
        alg.quot = quot;
        Ok(alg)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn root(&self) -> &RootData {
        &self.root
    }

    pub fn presentation(&self) -> &AlgebraPresentation {
        self.rw.presentation()
    }

    pub fn grading(&self) -> &Grading {
        &self.grading
    }

    pub fn degree(&self, b: usize) -> &Degree {
        &self.degrees[b]
    }

    /// Basis indices per degree.
    pub fn components(&self) -> &BTreeMap<Degree, Vec<usize>> {
        &self.members
    }

    pub fn component(&self, d: &[i64]) -> &[usize] {
        self.members.get(d).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn labels(&self) -> Vec<String> {
        self.basis.iter().map(|m| mono_string(m, self.presentation().names())).collect()
    }

    pub fn lift(&self, b: usize) -> &Mono {
        &self.basis[b]
    }

    /// x^m for exponents in [0, l) written in the basis.
    pub fn monomial(&self, m: &[i32]) -> SVec {
        self.reduce_exponents(m, &self.root.one())
    }

    pub fn gen(&self, g: usize) -> SVec {
        let mut m = vec![0; self.presentation().len()];
        m[g] = 1;
        self.monomial(&m)
    }

    pub fn unit(&self) -> SVec {
        self.monomial(&self.presentation().unit())
    }

    /// Any element of the algebra at q = ε, reduced into the fiber.
    pub fn element(&self, e: &Element) -> SVec {
        let mut out = SVec::new();
        for (m, c) in e.terms() {
            axpy(&mut out, &self.root.one(), &self.reduce_exponents(m, &c.eval_at_root(&self.root)));
        }
        out
    }

    fn power_split(&self, m: &[i32], c: &CycloNum) -> Option<(Mono, CycloNum)> {
        let l = self.l as i32;
        let mut coeff = c.clone();
        let mut r = m.to_vec();
        for (g, e) in r.iter_mut().enumerate() {
            let k = e.div_euclid(l);
            if k != 0 {
                coeff = &coeff * &self.values[g].pow(k as i64)?;
                *e = e.rem_euclid(l);
            }
        }
        Some((r, coeff))
    }

    fn reduce_exponents(&self, m: &[i32], c: &CycloNum) -> SVec {
        match self.power_split(m, c) {
            Some((r, coeff)) if !coeff.is_zero() => scaled(&self.quot[mono_index(&r, self.l)], &coeff),
            _ => SVec::new(),
        }
    }

    /// Product of monomials in the unreduced monomial coordinates.
    fn mul0(&self, a: &[i32], b: &[i32]) -> SVec {
        let prod = self.rw.mul_mono(a, b);
        let mut out = SVec::new();
        for (m, c) in prod.terms() {
            if let Some((r, coeff)) = self.power_split(m, &c.eval_at_root(&self.root)) {
                axpy(&mut out, &coeff, &unit(mono_index(&r, self.l), &self.root.one()));
            }
        }
        out
    }

    fn reduce0(&self, e: &Element) -> SVec {
        let mut out = SVec::new();
        for (m, c) in e.terms() {
            if let Some((r, coeff)) = self.power_split(m, &c.eval_at_root(&self.root)) {
                axpy(&mut out, &coeff, &unit(mono_index(&r, self.l), &self.root.one()));
            }
        }
        out
    }

    pub fn mul_basis(&self, a: usize, b: usize) -> SVec {
        if let Some(hit) = self.cache.borrow().get(&(a, b)) {
            return hit.clone();
        }
        let prod = self.rw.mul_mono(&self.basis[a], &self.basis[b]);
        let out = self.element(&prod);
        self.cache.borrow_mut().insert((a, b), out.clone());
        out
    }

    pub fn mul(&self, u: &SVec, v: &SVec) -> SVec {
        let mut out = SVec::new();
        for (&a, x) in u {
            for (&b, y) in v {
                axpy(&mut out, &(x * y), &self.mul_basis(a, b));
            }
        }
        out
    }

    pub fn commutator(&self, u: &SVec, v: &SVec) -> SVec {
        let mut out = self.mul(u, v);
        axpy(&mut out, &-self.root.one(), &self.mul(v, u));
        out
    }
}

/// Column order reversal so that the echelon form pivots on high monomials
/// and keeps low ones as the basis.
fn reverse(v: &SVec, full: usize) -> SVec {
    v.iter().map(|(&k, x)| (full - 1 - k, x.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{build_twisted, build_weyl};
    use rand::{Rng, SeedableRng};

    fn check_associative(a: &FDAlgebra, probes: usize, seed: u64) {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let d = a.dim();
        for _ in 0..probes {
            let (i, j, k) = (rng.gen_range(0..d), rng.gen_range(0..d), rng.gen_range(0..d));
            let (ei, ej, ek) = (unit(i, &a.root.one()), unit(j, &a.root.one()), unit(k, &a.root.one()));
            let left = a.mul(&a.mul(&ei, &ej), &ek);
            let right = a.mul(&ei, &a.mul(&ej, &ek));
            assert_eq!(left, right, "({i},{j},{k})");
        }
        let u = a.unit();
        for i in 0..d {
            let e = unit(i, &a.root.one());
            assert_eq!(a.mul(&u, &e), e);
            assert_eq!(a.mul(&e, &u), e);
        }
    }

    #[test]
    fn dimensions_and_associativity() {
        let r = RootData::new(3).unwrap();
        let plane = build_twisted(&IntMat::new(&[[0, 1], [-1, 0]]), 2).unwrap();
        let a = FDAlgebra::new(&plane, &r, &[r.one(), r.one()], &[]).unwrap();
        assert_eq!(a.dim(), 9);
        check_associative(&a, 200, 1);

        let w = build_weyl(&IntMat::zeros(1, 1), &[1]).unwrap();
        let a = FDAlgebra::new(w.presentation(), &r, &[r.zero(), r.zero()], &[]).unwrap();
        assert_eq!(a.dim(), 9);
        check_associative(&a, 300, 2);

        let line = build_twisted(&IntMat::zeros(1, 1), 1).unwrap();
        let a = FDAlgebra::new(&line, &r, &[r.one()], &[]).unwrap();
        assert_eq!(a.dim(), 3);
        // the commutative line cut by x = 1 is one-dimensional
        let c = CentralValue { element: line.gen(0), value: r.one() };
        let a = FDAlgebra::new(&line, &r, &[r.one()], &[c]).unwrap();
        assert_eq!(a.dim(), 1);
        check_associative(&a, 10, 3);
    }

    #[test]
    fn too_large() {
        let r = RootData::new(5).unwrap();
        let p = build_twisted(&IntMat::zeros(6, 6), 6).unwrap();
        let vals = vec![r.one(); 6];
        assert!(matches!(FDAlgebra::new(&p, &r, &vals, &[]), Err(FiberError::TooLarge { .. })));
    }

    #[test]
    fn central_cut_on_quantum_space() {
        // x1 x2 = q x2 x1, x3 central: cutting x3 = ε² leaves the quantum plane fiber
        let r = RootData::new(3).unwrap();
        let s = IntMat::new(&[[0, 1, 0], [-1, 0, 0], [0, 0, 0]]);
        let p = build_twisted(&s, 3).unwrap();
        let c = CentralValue { element: p.gen(2), value: r.eps_pow(2) };
        let a = FDAlgebra::new(&p, &r, &[r.one(), r.one(), r.one()], &[c]).unwrap();
        assert_eq!(a.dim(), 9);
        check_associative(&a, 300, 4);
        assert_eq!(a.gen(2), scaled(&a.unit(), &r.eps_pow(2)));
    }
}
