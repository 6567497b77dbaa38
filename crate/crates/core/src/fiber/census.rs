//! Radical, center and block sizes of a fiber algebra by exact linear algebra.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Roots;

use crate::exactnum::CycloNum;

use super::algebra::{Degree, FDAlgebra};
use super::linalg::{axpy, dot, kernel, rank, unit, Echelon, SVec};
use super::FiberError;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Census {
    pub dim: usize,
    pub rad_dim: usize,
    /// Number of irreducible representations: the center dimension of A/rad.
    pub count: usize,
    /// Irreducible dimensions, largest first.
    pub blocks: Vec<usize>,
}

fn sum(vals: impl IntoIterator<Item = CycloNum>, zero: &CycloNum) -> CycloNum {
    vals.into_iter().fold(zero.clone(), |acc, x| &acc + &x)
}

/// Pairs of degrees {g, −g}, each listed once.
fn opposite_pairs(a: &FDAlgebra, degrees: impl Iterator<Item = Degree>) -> Vec<(Degree, Degree)> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for d in degrees {
        if seen.contains(&d) {
            continue;
        }
        let n = a.grading().neg(&d);
        seen.insert(d.clone());
        seen.insert(n.clone());
        out.push((d, n));
    }
    out
}

pub fn census(a: &FDAlgebra) -> Result<Census, FiberError> {
    let root = a.root().clone();
    let (zero, one) = (root.zero(), root.one());
    let dim = a.dim();
    let zdeg = a.grading().zero();

    // tr(L_{e_k}); only degree-zero basis elements have nonzero trace
    let tau: SVec = a
        .component(&zdeg)
        .iter()
        .map(|&k| (k, sum((0..dim).filter_map(|i| a.mul_basis(k, i).get(&i).cloned()), &zero)))
        .filter(|(_, t)| !t.is_zero())
        .collect();

    // radical of the trace form, one opposite pair of components at a time
    let mut rad = Echelon::new();
    for (g, h) in opposite_pairs(a, a.components().keys().cloned()) {
        let (cg, ch) = (a.component(&g).to_vec(), a.component(&h).to_vec());
        let form = |x: usize, y: usize| dot(&a.mul_basis(x, y), &tau).unwrap_or_else(|| zero.clone());
        for (side, other) in [(&cg, &ch), (&ch, &cg)] {
            let rows: Vec<SVec> = other
                .iter()
                .map(|&y| side.iter().enumerate().map(|(i, &x)| (i, form(x, y))).filter(|(_, v)| !v.is_zero()).collect())
                .collect();
            for v in kernel(&rows, side.len(), &one) {
                rad.insert(&v.iter().map(|(&i, x)| (side[i], x.clone())).collect());
            }
            if g == h {
                break;
            }
        }
    }
    let rad_dim = rad.rank();
    let project = |v: &SVec| rad.reduce(v);
    let bmul = |u: &SVec, v: &SVec| project(&a.mul(u, v));
    let complement = |d: &[i64]| a.component(d).iter().copied().filter(|&b| !rad.is_pivot(b)).collect::<Vec<_>>();

    // center of A/rad: homogeneous z with [z, x_g] ∈ rad for every generator
    let gens: Vec<SVec> = (0..a.presentation().len()).map(|g| project(&a.gen(g))).collect();
    let mut center = Echelon::new();
    for d in a.components().keys() {
        let cd = complement(d);
        if cd.is_empty() {
            continue;
        }
        let mut columns: Vec<BTreeMap<(usize, usize), CycloNum>> = Vec::new();
        for &b in &cd {
            let e = unit(b, &one);
            let mut col = BTreeMap::new();
            for (g, x) in gens.iter().enumerate() {
                let mut c = bmul(&e, x);
                axpy(&mut c, &-one.clone(), &bmul(x, &e));
                for (k, v) in c {
                    col.insert((g, k), v);
                }
            }
            columns.push(col);
        }
        let mut rows: BTreeMap<(usize, usize), SVec> = BTreeMap::new();
        for (j, col) in columns.into_iter().enumerate() {
            for (key, v) in col {
                rows.entry(key).or_default().insert(j, v);
            }
        }
        let rows: Vec<SVec> = rows.into_values().collect();
        for v in kernel(&rows, cd.len(), &one) {
            center.insert(&v.iter().map(|(&i, x)| (cd[i], x.clone())).collect());
        }
    }
    let count = center.rank();

    let b_basis: Vec<usize> = (0..dim).filter(|&b| !rad.is_pivot(b)).collect();
    let blocks = block_sizes(a, &center, &complement(&zdeg), &b_basis, &bmul)?;
    Ok(Census { dim, rad_dim, count, blocks })
}

/// Irreducible dimensions d from the pencil (tr_B, tr_Z) on the center,
/// whose eigenvalues are the d².
fn block_sizes(
    a: &FDAlgebra,
    center: &Echelon,
    b_zero: &[usize],
    b_basis: &[usize],
    bmul: &dyn Fn(&SVec, &SVec) -> SVec,
) -> Result<Vec<usize>, FiberError> {
    let (count, bdim) = (center.rank(), b_basis.len());
    let root = a.root().clone();
    let zero = root.zero();
    let one = root.one();
    let zb: Vec<(usize, SVec)> = center.pivots().map(|&p| (p, center.row(p).cloned().unwrap_or_default())).collect();
    if count == 1 {
        let d = bdim.sqrt();
        if d * d != bdim {
            return Err(FiberError::NonSplit(format!("simple quotient of dimension {bdim}")));
        }
        return Ok(vec![d]);
    }
    // tr_B(L_{e_k}) for degree-zero basis elements of B
    let tau_b: SVec = b_zero
        .iter()
        .map(|&k| {
            let e = unit(k, &one);
            let t = sum(
                b_basis.iter().filter_map(|&i| bmul(&e, &unit(i, &one)).get(&i).cloned()),
                &zero,
            );
            (k, t)
        })
        .collect();
    let tr_b = |w: &SVec| dot(w, &tau_b).unwrap_or_else(|| zero.clone());
    let tr_z = |w: &SVec| sum(zb.iter().filter_map(|(p, z)| bmul(w, z).get(p).cloned()), &zero);

    let deg_of = |v: &SVec| a.degree(*v.keys().next().expect("nonzero central element")).clone();
    let mut by_deg: BTreeMap<Degree, Vec<usize>> = BTreeMap::new();
    for (j, (_, z)) in zb.iter().enumerate() {
        by_deg.entry(deg_of(z)).or_default().push(j);
    }
    let bound = bdim.sqrt();
    let mut blocks = Vec::new();
    for (g, h) in opposite_pairs(a, by_deg.keys().cloned()) {
        let mut idx = by_deg.get(&g).cloned().unwrap_or_default();
        if g != h {
            idx.extend(by_deg.get(&h).cloned().unwrap_or_default());
        }
        let mut pt = vec![vec![zero.clone(); idx.len()]; idx.len()];
        let mut pz = pt.clone();
        for (r, &i) in idx.iter().enumerate() {
            for (c, &j) in idx.iter().enumerate() {
                let w = bmul(&zb[i].1, &zb[j].1);
                if w.is_empty() {
                    continue;
                }
                pt[r][c] = tr_b(&w);
                pz[r][c] = tr_z(&w);
            }
        }
        let mut found = 0;
        for d in 1..=bound {
            let lam = root.int((d * d) as i64);
            let rows: Vec<SVec> = (0..idx.len())
                .map(|r| {
                    (0..idx.len())
                        .map(|c| (c, &pt[r][c] - &(&lam * &pz[r][c])))
                        .filter(|(_, v)| !v.is_zero())
                        .collect()
                })
                .collect();
            let null = idx.len() - rank(&rows);
            blocks.extend(std::iter::repeat(d).take(null));
            found += null;
        }
        if found != idx.len() {
            return Err(FiberError::NonSplit(format!(
                "central pencil on degree {g:?} has {found} integer-square eigenvalues out of {}",
                idx.len()
            )));
        }
    }
    blocks.sort_unstable_by(|x, y| y.cmp(x));
    Ok(blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::RootData;
    use crate::fiber::CentralValue;
    use crate::models::{build_twisted, build_weyl};
    use crate::zlattice::IntMat;

    fn run(p: &crate::engine::AlgebraPresentation, r: &RootData, vals: &[CycloNum], c: &[CentralValue]) -> Census {
        census(&FDAlgebra::new(p, r, vals, c).unwrap()).unwrap()
    }

    #[test]
    fn plane_examples() {
        let r = RootData::new(3).unwrap();
        let plane = build_twisted(&IntMat::new(&[[0, 1], [-1, 0]]), 2).unwrap();
        let c = run(&plane, &r, &[r.one(), r.one()], &[]);
        assert_eq!(c, Census { dim: 9, rad_dim: 0, count: 1, blocks: vec![3] });
        let c = run(&plane, &r, &[r.zero(), r.one()], &[]);
        assert_eq!(c, Census { dim: 9, rad_dim: 6, count: 3, blocks: vec![1, 1, 1] });
        let c = run(&plane, &r, &[r.zero(), r.zero()], &[]);
        assert_eq!((c.rad_dim, c.count, c.blocks), (8, 1, vec![1]));
    }

    #[test]
    fn weyl_edge() {
        let r = RootData::new(3).unwrap();
        let w = build_weyl(&IntMat::zeros(1, 1), &[1]).unwrap();
        let c = run(w.presentation(), &r, &[r.zero(), r.zero()], &[]);
        assert_eq!(c, Census { dim: 9, rad_dim: 0, count: 1, blocks: vec![3] });
    }

    #[test]
    fn commutative_line() {
        let r = RootData::new(5).unwrap();
        let line = build_twisted(&IntMat::zeros(1, 1), 1).unwrap();
        let c = run(&line, &r, &[r.one()], &[]);
        assert_eq!(c, Census { dim: 5, rad_dim: 0, count: 5, blocks: vec![1; 5] });
        let cut = CentralValue { element: line.gen(0), value: r.one() };
        let c = run(&line, &r, &[r.one()], &[cut]);
        assert_eq!(c, Census { dim: 1, rad_dim: 0, count: 1, blocks: vec![1] });
        let c = run(&line, &r, &[r.zero()], &[]);
        assert_eq!(c, Census { dim: 5, rad_dim: 4, count: 1, blocks: vec![1] });
    }

    #[test]
    fn mixed_blocks() {
        // x1 x2 = q x2 x1 with x3 central and uncut: three blocks of dimension 3
        let r = RootData::new(3).unwrap();
        let s = IntMat::new(&[[0, 1, 0], [-1, 0, 0], [0, 0, 0]]);
        let p = build_twisted(&s, 3).unwrap();
        let c = run(&p, &r, &[r.one(), r.one(), r.one()], &[]);
        assert_eq!(c, Census { dim: 27, rad_dim: 0, count: 3, blocks: vec![3, 3, 3] });
    }

    #[test]
    fn galois_conjugate_roots_agree() {
        let s = IntMat::new(&[[0, 1, -1], [-1, 0, 2], [1, -2, 0]]);
        let p = build_twisted(&s, 3).unwrap();
        for j in 1..5 {
            let r = RootData::with_primitive_index(5, j).unwrap();
            let c = run(&p, &r, &[r.one(), r.zero(), r.one()], &[]);
            assert_eq!((c.count, c.rad_dim, c.blocks), (1, 100, vec![5]));
        }
    }
}
