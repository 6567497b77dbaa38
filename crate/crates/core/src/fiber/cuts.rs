//! Central scalars that cut the l-center fiber down to the ε-center fiber.

use crate::engine::{AlgebraPresentation, Element};
use crate::exactnum::{CycloNum, QLaurent, RootData};
use crate::models::{Character, Context, Model};
use crate::zlattice::{kernel_int, IntMat};

use super::algebra::{CentralValue, FDAlgebra};
use super::census::{census, Census};
use super::FiberError;

/// Reduced exponents m ∈ [0, l)^N supported on `support` generating
/// {m : supp m ⊆ support, S m ≡ 0 mod l}.
pub fn central_exponents(skew: &IntMat, support: &[usize], l: u32) -> Result<Vec<Vec<i64>>, FiberError> {
    let n = skew.rows();
    let c = support.len();
    let li = l as i64;
    let mut wide = IntMat::zeros(n, c + n);
    for i in 0..n {
        for (k, &j) in support.iter().enumerate() {
            wide.set(i, k, skew.get(i, j));
        }
        wide.set(i, c + i, li);
    }
    let ker = kernel_int(&wide).map_err(|e| FiberError::Lattice(e.to_string()))?;
    let mut out: Vec<Vec<i64>> = Vec::new();
    for v in ker {
        let mut m = vec![0; n];
        for (k, &j) in support.iter().enumerate() {
            m[j] = v[k].rem_euclid(li);
        }
        if m.iter().any(|&x| x != 0) && !out.contains(&m) {
            out.push(m);
        }
    }
    Ok(out)
}

/// The symmetrized monomial q^{−½ Σ_{i<j} s_ij m_i m_j} x^m.
fn weyl_ordered(p: &AlgebraPresentation, m: &[i64], l: u32) -> Element {
    let half = (l as i64 + 1) / 2;
    let mut e = 0;
    for i in 0..m.len() {
        for j in i + 1..m.len() {
            e += p.s(i, j) * m[i] * m[j];
        }
    }
    Element::monomial(m.iter().map(|&x| x as i32).collect(), QLaurent::q_pow(-half * e))
}

/// Central cuts fixing the ε-center character χ beyond its l-center values.
/// Central monomials through a generator with χ = 0 are nilpotent and left
/// uncut. Only diagonal presentations carry cuts; other models use the
/// l-center fiber.
pub fn eps_cuts(ctx: &Context, chi: &Character) -> Result<Vec<CentralValue>, FiberError> {
    let p = ctx.presentation();
    let l = ctx.l();
    if matches!(ctx.model, Model::Weyl(_)) || !p.is_diagonal() {
        return Ok(Vec::new());
    }
    if l % 2 == 0 {
        return Err(FiberError::Shape(format!("symmetrized monomials need odd l, got {l}")));
    }
    let root = &ctx.root;
    let wit = |g: usize| -> Result<CycloNum, FiberError> {
        if let Some(w) = &chi.witnesses[g] {
            return Ok(w.clone());
        }
        chi.values[g]
            .rational_root(l)
            .ok_or_else(|| FiberError::MissingWitness(p.names()[g].clone()))
    };
    let live: Vec<usize> = (0..p.len()).filter(|&g| !chi.values[g].is_zero()).collect();
    let ws: Vec<Option<CycloNum>> =
        (0..p.len()).map(|g| if chi.values[g].is_zero() { Ok(None) } else { wit(g).map(Some) }).collect::<Result<_, _>>()?;
    central_exponents(p.skew(), &live, l)?
        .into_iter()
        .map(|m| {
            let mut value = root.one();
            for (g, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let w = ws[g].as_ref().expect("cuts are supported on nonzero values");
                value = &value * &w.pow(e).expect("witness is nonzero");
            }
            Ok(CentralValue { element: weyl_ordered(p, &m, l), value })
        })
        .collect()
}

/// The fiber R_χ over the ε-center character.
pub fn eps_fiber<'a>(ctx: &'a Context, chi: &Character) -> Result<FDAlgebra<'a>, FiberError> {
    let cuts = eps_cuts(ctx, chi)?;
    FDAlgebra::new(ctx.presentation(), &ctx.root, &chi.values, &cuts)
}

pub fn eps_census(ctx: &Context, chi: &Character) -> Result<Census, FiberError> {
    census(&eps_fiber(ctx, chi)?)
}

/// Census of the fiber for a root other than the context's own, used for
/// Galois comparisons.
pub fn census_at(p: &AlgebraPresentation, root: &RootData, values: &[CycloNum], cuts: &[CentralValue]) -> Result<Census, FiberError> {
    census(&FDAlgebra::new(p, root, values, cuts)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fiber::{clock_shift_irreps, distinct_count};
    use crate::models::build_twisted;
    use crate::strata::{enumerate_strata, locate, Location};

    fn ctx(s: IntMat, n_poly: usize, l: u32) -> Context {
        Context::new(Model::Twisted(build_twisted(&s, n_poly).unwrap()), RootData::new(l).unwrap()).unwrap()
    }

    #[test]
    fn central_exponent_lattice() {
        let plane = IntMat::new(&[[0, 1], [-1, 0]]);
        assert!(central_exponents(&plane, &[0, 1], 3).unwrap().is_empty());
        let z = IntMat::zeros(2, 2);
        assert_eq!(central_exponents(&z, &[0, 1], 3).unwrap().len(), 2);
        assert_eq!(central_exponents(&z, &[1], 3).unwrap(), vec![vec![0, 1]]);
        let s = IntMat::new(&[[0, 1, 1], [-1, 0, 0], [-1, 0, 0]]);
        let ms = central_exponents(&s, &[0, 1, 2], 5).unwrap();
        for m in &ms {
            let sm = s.mul_vec(m).unwrap();
            assert!(sm.iter().all(|x| x % 5 == 0));
        }
        assert!(ms.iter().any(|m| m[0] == 0 && m[1] != 0 && m[2] != 0));
    }

    #[test]
    fn census_matches_constructed_irreps() {
        let cases = [
            (IntMat::new(&[[0, 1], [-1, 0]]), 2, 3),
            (IntMat::new(&[[0, 1, 1], [-1, 0, 0], [-1, 0, 0]]), 3, 3),
            (IntMat::new(&[[0, 1, 0], [-1, 0, 2], [0, -2, 0]]), 2, 3),
            (IntMat::zeros(2, 2), 2, 5),
            // the survivor-only central monomial x1 x2^{-1} x3 is reached from the
            // full central lattice only through the killed x4
            (IntMat::new(&[[0, -2, -2, 0], [2, 0, -2, 2], [2, 2, 0, 2], [0, -2, -2, 0]]), 4, 3),
        ];
        for (s, n_poly, l) in cases {
            let c = ctx(s, n_poly, l);
            let r = c.root.clone();
            let strata = enumerate_strata(&c).unwrap();
            let n = c.presentation().len();
            for mask in 0..(1u32 << n) {
                let ws: Vec<CycloNum> = (0..n).map(|g| if mask >> g & 1 == 1 { r.zero() } else { r.one() }).collect();
                let chi = Character::from_witnesses(&ws, l);
                if chi.check(c.presentation(), l).is_err() {
                    continue;
                }
                let Location::Stratum(k) = locate(&chi, &strata).unwrap() else { panic!("A1 covers every character") };
                let cen = eps_census(&c, &chi).unwrap();
                let reps = clock_shift_irreps(&c, &strata[k], &chi).unwrap();
                assert_eq!(distinct_count(&reps, &r), cen.count, "mask {mask}");
                let total: usize = cen.blocks.iter().map(|d| d * d).sum();
                assert_eq!(total, cen.dim - cen.rad_dim);
                assert_eq!(cen.count, (l as usize).pow(strata[k].torus.t as u32));
            }
        }
    }
}
