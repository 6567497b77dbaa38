//! Construction of g_χ from the l-center Poisson table: the Poisson-kernel
//! realization and the realization from stratum generators.

use std::collections::BTreeMap;

use crate::engine::{is_central_at_root, poisson_bracket, Rewriter};
use crate::exactnum::{CycloNum, RootData};
use crate::fiber::linalg::{axpy, kernel, Echelon, SVec};
use crate::models::{to_l_center, CenterPoly, Character, Context};
use crate::strata::Stratum;
use crate::zlattice::IntMat;

use super::lie::{solve_in_span, FDLie};
use super::StabilizerError;

/// Brackets {a_i, a_j} of the l-center coordinates, stored for i < j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoissonTable {
    n: usize,
    entries: BTreeMap<(usize, usize), CenterPoly>,
}

impl PoissonTable {
    pub fn new(n: usize, entries: BTreeMap<(usize, usize), CenterPoly>) -> PoissonTable {
        PoissonTable { n, entries }
    }

    pub fn from_context(ctx: &Context) -> Result<PoissonTable, StabilizerError> {
        let p = ctx.presentation();
        let n = p.len();
        if let Some(w) = &ctx.weyl {
            return Ok(PoissonTable { n, entries: w.brackets.clone() });
        }
        let rw = Rewriter::new(p);
        let l = ctx.l();
        let pows: Vec<_> = (0..n).map(|g| p.gen_pow(g, l as i32)).collect();
        let mut entries = BTreeMap::new();
        for i in 0..n {
            for j in i + 1..n {
                let br = poisson_bracket(&rw, &pows[i], &pows[j], &ctx.root).map_err(|e| StabilizerError::Engine(e.to_string()))?;
                let z = to_l_center(&br, l)
                    .ok_or_else(|| StabilizerError::Engine(format!("bracket ({i},{j}) leaves the l-center")))?;
                if !z.is_zero() {
                    entries.insert((i, j), z);
                }
            }
        }
        Ok(PoissonTable { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), CenterPoly> {
        &self.entries
    }

    /// The single c with {a_i, a_j} = c s_ij a_i a_j for all pairs; None when every s_ij is 0.
    pub fn log_canonical_constant(&self, skew: &IntMat, root: &RootData) -> Result<Option<CycloNum>, String> {
        let mut constant: Option<CycloNum> = None;
        for i in 0..self.n {
            for j in i + 1..self.n {
                let s = skew.get(i, j);
                let entry = self.entries.get(&(i, j));
                if s == 0 {
                    if entry.is_some() {
                        return Err(format!("{{a{}, a{}}} is nonzero but s = 0", i + 1, j + 1));
                    }
                    continue;
                }
                let mut terms = entry.into_iter().flat_map(|z| z.terms());
                let (m, c) = match (terms.next(), terms.next()) {
                    (Some(t), None) => t,
                    _ => return Err(format!("{{a{}, a{}}} is not a single monomial", i + 1, j + 1)),
                };
                let shape = m.iter().enumerate().all(|(g, &e)| e == i32::from(g == i || g == j));
                if !shape {
                    return Err(format!("{{a{}, a{}}} is not a multiple of a{0} a{1}", i + 1, j + 1));
                }
                let c = c * &root.int(s).inv().expect("nonzero integer");
                match &constant {
                    Some(k) if *k != c => return Err(format!("{{a{}, a{}}} has a different constant", i + 1, j + 1)),
                    _ => constant = Some(c),
                }
            }
        }
        Ok(constant)
    }

    /// {a_i, a_j} with its sign, None when zero.
    fn get(&self, i: usize, j: usize) -> Option<(&CenterPoly, bool)> {
        if i < j {
            self.entries.get(&(i, j)).map(|z| (z, true))
        } else {
            self.entries.get(&(j, i)).map(|z| (z, false))
        }
    }

    /// Π(χ)_{ij} = {a_i, a_j}(χ).
    pub fn evaluated(&self, vals: &[CycloNum], root: &RootData) -> Option<Vec<Vec<CycloNum>>> {
        let mut out = vec![vec![root.zero(); self.n]; self.n];
        for (&(i, j), z) in &self.entries {
            let v = evaluate(z, vals, root)?;
            out[j][i] = -v.clone();
            out[i][j] = v;
        }
        Some(out)
    }

    /// Linear parts d{a_i, a_j}(χ) as covectors.
    pub fn linear_parts(&self, vals: &[CycloNum], root: &RootData) -> Option<Vec<Vec<SVec>>> {
        let mut out = vec![vec![SVec::new(); self.n]; self.n];
        for i in 0..self.n {
            for j in 0..self.n {
                if let Some((z, sign)) = self.get(i, j) {
                    let d = differential(z, vals, root)?;
                    out[i][j] = if sign { d } else { d.into_iter().map(|(k, x)| (k, -x)).collect() };
                }
            }
        }
        Some(out)
    }
}

fn mono_value(m: &[i32], vals: &[CycloNum], root: &RootData) -> Option<CycloNum> {
    let mut t = root.one();
    for (g, &e) in m.iter().enumerate() {
        if e != 0 {
            t = &t * &vals[g].pow(e as i64)?;
        }
    }
    Some(t)
}

pub(crate) fn evaluate(z: &CenterPoly, vals: &[CycloNum], root: &RootData) -> Option<CycloNum> {
    let mut acc = root.zero();
    for (m, c) in z.terms() {
        acc = &acc + &(c * &mono_value(m, vals, root)?);
    }
    Some(acc)
}

/// dz at χ in the coordinates dā_g.
pub(crate) fn differential(z: &CenterPoly, vals: &[CycloNum], root: &RootData) -> Option<SVec> {
    let mut out = SVec::new();
    for (m, c) in z.terms() {
        for (g, &e) in m.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let mut mm = m.clone();
            mm[g] -= 1;
            let v = c * &mono_value(&mm, vals, root)?;
            if v.is_zero() {
                continue;
            }
            axpy(&mut out, &root.int(e as i64), &SVec::from([(g, v)]));
        }
    }
    Some(out)
}

/// Bracket of two covectors through the linear-part table.
fn covector_bracket(lin: &[Vec<SVec>], u: &SVec, v: &SVec) -> SVec {
    let mut out = SVec::new();
    for (&i, x) in u {
        for (&j, y) in v {
            axpy(&mut out, &(x * y), &lin[i][j]);
        }
    }
    out
}

/// Structure constants of the span of independent covectors.
fn lie_on_covectors(
    lin: &[Vec<SVec>],
    basis: &[SVec],
    labels: &[String],
    root: &RootData,
) -> Result<Vec<Vec<SVec>>, StabilizerError> {
    let d = basis.len();
    let mut br = vec![vec![SVec::new(); d]; d];
    for a in 0..d {
        for b in a + 1..d {
            let w = covector_bracket(lin, &basis[a], &basis[b]);
            let c = solve_in_span(basis, &w, root)
                .ok_or_else(|| StabilizerError::NotClosed(format!("[{}, {}]", labels[a], labels[b])))?;
            br[b][a] = c.iter().map(|(&k, x)| (k, -x.clone())).collect();
            br[a][b] = c;
        }
    }
    Ok(br)
}

/// Vectors of span(basis) supported on `coords`.
fn restrict_to(basis: &[SVec], coords: &[usize], n: usize, root: &RootData) -> Vec<SVec> {
    let rows: Vec<SVec> = (0..n)
        .filter(|c| !coords.contains(c))
        .map(|c| basis.iter().enumerate().filter_map(|(k, b)| b.get(&c).map(|x| (k, x.clone()))).collect())
        .collect();
    let combos = if basis.is_empty() { Vec::new() } else { kernel(&rows, basis.len(), &root.one()) };
    combos
        .iter()
        .map(|c| {
            let mut v = SVec::new();
            for (&k, x) in c {
                axpy(&mut v, x, &basis[k]);
            }
            v
        })
        .collect()
}

fn coordinate_label(ctx: &Context, v: &SVec) -> String {
    let names = ctx.presentation().names();
    let terms: Vec<String> = v.iter().map(|(&g, x)| format!("({})·d{}^l", x.render(), names[g])).collect();
    terms.join(" + ")
}

/// Kernel of Π(χ0) on differentials with the linearized bracket. The toral
/// candidate is the part supported on coordinates with χ0 ≠ 0, the nilpotent
/// candidate the part supported on coordinates with χ0 = 0; when these do not
/// span the kernel, the whole kernel is offered as the nilpotent candidate.
pub fn linearized_stabilizer(ctx: &Context, table: &PoissonTable, chi: &Character) -> Result<FDLie, StabilizerError> {
    let root = &ctx.root;
    let n = table.n();
    let vals = &chi.values;
    let pi = table.evaluated(vals, root).ok_or_else(|| StabilizerError::HypothesisFailed("Π(χ0) undefined".into()))?;
    let lin = table.linear_parts(vals, root).ok_or_else(|| StabilizerError::HypothesisFailed("linear part undefined".into()))?;
    // v ∈ V iff Σ_i v_i Π_ij = 0 for every j
    let rows: Vec<SVec> =
        (0..n).map(|j| (0..n).filter(|&i| !pi[i][j].is_zero()).map(|i| (i, pi[i][j].clone())).collect()).collect();
    let v = kernel(&rows, n, &root.one());
    let live: Vec<usize> = (0..n).filter(|&g| !vals[g].is_zero()).collect();
    let dead: Vec<usize> = (0..n).filter(|&g| vals[g].is_zero()).collect();
    let tv = restrict_to(&v, &live, n, root);
    let nv = restrict_to(&v, &dead, n, root);
    let (basis, t_len) = if tv.len() + nv.len() == v.len() { ([tv.clone(), nv].concat(), tv.len()) } else { (v, 0) };
    let labels: Vec<String> = basis.iter().map(|b| coordinate_label(ctx, b)).collect();
    let brackets = lie_on_covectors(&lin, &basis, &labels, root)?;
    let d = basis.len();
    Ok(FDLie { root: root.clone(), labels, brackets, t_candidate: (0..t_len).collect(), n_candidate: (t_len..d).collect() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    /// G_χ in the ε-center.
    Eps,
    /// G_{χ0} in the l-center.
    L0,
}

/// g_χ realized on stratum generators.
#[derive(Debug, Clone)]
pub struct StratumLie {
    pub lie: FDLie,
    /// l-center differential of each basis element; None for elements outside the l-center.
    pub covectors: Vec<Option<SVec>>,
    /// Index j of z_j for basis elements coming from the z-lattice.
    pub z_index: Vec<Option<usize>>,
}

/// Generators z_j^l − χ (j ≤ t) for the toral part; z_j^l − χ or z_j − χ
/// (j > t) by level together with the killed l-th powers for the nilpotent part.
pub fn stabilizer_from_stratum(
    ctx: &Context,
    table: &PoissonTable,
    stratum: &Stratum,
    chi: &Character,
    level: Level,
) -> Result<StratumLie, StabilizerError> {
    let root = &ctx.root;
    let vals = &chi.values;
    let ts = &stratum.torus;
    let mut lam = Vec::new();
    let mut dl = Vec::new();
    for s in &stratum.survivors {
        let v = evaluate(&s.l_power, vals, root).filter(|v| !v.is_zero());
        let v = v.ok_or_else(|| StabilizerError::HypothesisFailed(format!("{}^l vanishes at χ", s.name)))?;
        lam.push(v);
        dl.push(differential(&s.l_power, vals, root).expect("polynomial l-powers differentiate"));
    }
    // d Π_s L_s^{z_s} = (Π λ_s^{z_s}) Σ_s z_s dL_s / λ_s
    let z_covector = |j: usize| {
        let z = ts.z(j);
        let mut value = root.one();
        let mut out = SVec::new();
        for (s, &e) in z.iter().enumerate() {
            if e == 0 {
                continue;
            }
            value = &value * &lam[s].pow(e).expect("nonzero");
            let c = &root.int(e) * &lam[s].inv().expect("nonzero");
            axpy(&mut out, &c, &dl[s]);
        }
        out.into_iter().map(|(k, x)| (k, &x * &value)).collect::<SVec>()
    };

    let mut labels = Vec::new();
    let mut basis = Vec::new();
    let mut z_index = Vec::new();
    let mut ech = Echelon::new();
    for j in 0..ts.t {
        let v = z_covector(j);
        let label = format!("z{}^l", j + 1);
        if !ech.insert(&v) {
            return Err(StabilizerError::Dependent(label));
        }
        labels.push(label);
        basis.push(v);
        z_index.push(Some(j));
    }
    let t_len = basis.len();
    if level == Level::L0 {
        for j in ts.t..ts.p {
            let v = z_covector(j);
            if ech.insert(&v) {
                labels.push(format!("z{}^l", j + 1));
                basis.push(v);
                z_index.push(Some(j));
            }
        }
    }
    for k in &stratum.killed {
        let v = differential(&k.l_power, vals, root).expect("polynomial l-powers differentiate");
        if ech.insert(&v) {
            labels.push(format!("{}^l", k.name));
            basis.push(v);
            z_index.push(None);
        }
    }
    let lin = table.linear_parts(vals, root).ok_or_else(|| StabilizerError::HypothesisFailed("linear part undefined".into()))?;
    let inner = lie_on_covectors(&lin, &basis, &labels, root)?;
    let mut covectors: Vec<Option<SVec>> = basis.into_iter().map(Some).collect();

    let mut extra = Vec::new();
    if level == Level::Eps {
        if let Some(loc) = stratum.localized(ctx) {
            let rw = Rewriter::new(&loc.presentation);
            for j in ts.t..ts.p {
                if !is_central_at_root(&rw, &loc.survivor_monomial(ts.z(j)), root) {
                    return Err(StabilizerError::HypothesisFailed(format!("z{} is not central", j + 1)));
                }
            }
        }
        extra = (ts.t..ts.p).collect();
    }
    let d = labels.len() + extra.len();
    let mut brackets = vec![vec![SVec::new(); d]; d];
    for (a, row) in inner.into_iter().enumerate() {
        for (b, v) in row.into_iter().enumerate() {
            brackets[a][b] = v;
        }
    }
    for &j in &extra {
        labels.push(format!("z{}", j + 1));
        covectors.push(None);
        z_index.push(Some(j));
    }
    let lie = FDLie { root: root.clone(), labels, brackets, t_candidate: (0..t_len).collect(), n_candidate: (t_len..d).collect() };
    Ok(StratumLie { lie, covectors, z_index })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{build_twisted, build_weyl, Model};
    use crate::stabilizer::rank_and_checks;
    use crate::strata::enumerate_strata;
    use crate::zlattice::IntMat;

    fn plane() -> Context {
        let p = build_twisted(&IntMat::new(&[[0, 1], [-1, 0]]), 2).unwrap();
        Context::new(Model::Twisted(p), RootData::new(3).unwrap()).unwrap()
    }

    #[test]
    fn plane_table_is_log_canonical() {
        let ctx = plane();
        let t = PoissonTable::from_context(&ctx).unwrap();
        let z = &t.entries()[&(0, 1)];
        let (m, c) = z.terms().next().unwrap();
        assert_eq!((z.len(), m.clone()), (1, vec![1, 1]));
        assert_eq!(*c, crate::models::kappa(&ctx.root));
        let k = t.log_canonical_constant(ctx.presentation().skew(), &ctx.root).unwrap();
        assert_eq!(k, Some(crate::models::kappa(&ctx.root)));
        assert!(t.log_canonical_constant(&IntMat::zeros(2, 2), &ctx.root).is_err());
    }

    #[test]
    fn plane_linearized_rank_one() {
        let ctx = plane();
        let r = ctx.root.clone();
        let t = PoissonTable::from_context(&ctx).unwrap();
        let chi = Character::from_witnesses(&[r.zero(), r.one()], 3);
        let g = linearized_stabilizer(&ctx, &t, &chi).unwrap();
        assert_eq!((g.dim(), g.t_candidate.len()), (2, 1));
        assert_eq!(rank_and_checks(&g).unwrap().rank, 1);
        let generic = Character::from_witnesses(&[r.one(), r.one()], 3);
        let g = linearized_stabilizer(&ctx, &t, &generic).unwrap();
        assert_eq!(g.dim(), 0);
    }

    #[test]
    fn plane_stratum_rank_one() {
        let ctx = plane();
        let r = ctx.root.clone();
        let t = PoissonTable::from_context(&ctx).unwrap();
        let st = enumerate_strata(&ctx).unwrap();
        let chi = Character::from_witnesses(&[r.zero(), r.one()], 3);
        for level in [Level::Eps, Level::L0] {
            let g = stabilizer_from_stratum(&ctx, &t, &st[1], &chi, level).unwrap();
            assert_eq!(g.lie.labels, ["z1^l", "x1^l"]);
            let res = rank_and_checks(&g.lie).unwrap();
            assert_eq!(res.rank, 1);
            assert!(!g.lie.brackets[0][1].is_empty());
        }
        assert!(matches!(
            stabilizer_from_stratum(&ctx, &t, &st[0], &chi, Level::Eps),
            Err(StabilizerError::HypothesisFailed(_))
        ));
    }

    #[test]
    fn commutative_is_abelian() {
        let p = build_twisted(&IntMat::zeros(3, 3), 3).unwrap();
        let ctx = Context::new(Model::Twisted(p), RootData::new(5).unwrap()).unwrap();
        let r = ctx.root.clone();
        let t = PoissonTable::from_context(&ctx).unwrap();
        assert!(t.entries().is_empty());
        let chi = Character::from_witnesses(&[r.zero(), r.one(), r.one()], 5);
        let g = linearized_stabilizer(&ctx, &t, &chi).unwrap();
        assert_eq!(g.dim(), 3);
        assert_eq!(rank_and_checks(&g).unwrap().rank, 0);
        let st = enumerate_strata(&ctx).unwrap();
        let k = st.iter().position(|s| s.id() == "T=100").unwrap();
        let g = stabilizer_from_stratum(&ctx, &t, &st[k], &chi, Level::Eps).unwrap();
        assert_eq!(g.lie.labels, ["x1^l", "z1", "z2"]);
        assert_eq!(rank_and_checks(&g.lie).unwrap().rank, 0);
    }

    #[test]
    fn weyl_edge_linearized_is_zero() {
        let w = build_weyl(&IntMat::zeros(1, 1), &[1]).unwrap();
        let ctx = Context::new(Model::Weyl(w), RootData::new(3).unwrap()).unwrap();
        let r = ctx.root.clone();
        let t = PoissonTable::from_context(&ctx).unwrap();
        let chi = Character::from_witnesses(&[r.zero(), r.zero()], 3);
        let pi = t.evaluated(&chi.values, &r).unwrap();
        assert!(!pi[0][1].is_zero());
        let g = linearized_stabilizer(&ctx, &t, &chi).unwrap();
        assert_eq!(g.dim(), 0);
        assert_eq!(rank_and_checks(&g).unwrap().rank, 0);
    }
}
