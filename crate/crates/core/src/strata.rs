//! Strata of central characters: subsets T for twisted algebras, admissible
//! triples (T1, T2, T3) for quantum Weyl algebras.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::engine::{is_central_at_root, AlgebraPresentation, Element, Rewriter};
use crate::exactnum::{CycloNum, QLaurent, RootData};
use crate::models::{CenterPoly, Character, Context, Model};
use crate::torus::{center_generators_eps, torus_structure, TorusError, TorusStructure};
use crate::zlattice::IntMat;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrataError {
    #[error("{0} and {1} do not q-commute")]
    NotQCommuting(String, String),
    #[error("stratum {stratum}: {source}")]
    Torus { stratum: String, source: TorusError },
    #[error("character matches several strata: {}", .0.join(", "))]
    MultipleStrata(Vec<String>),
    #[error("no l-th root available for {0}")]
    NoWitness(String),
}

/// 1-based index sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pattern {
    A1 { t: BTreeSet<usize>, n_poly: usize },
    A2 { t1: BTreeSet<usize>, t2: BTreeSet<usize>, t3: BTreeSet<usize> },
}

fn list(s: &BTreeSet<usize>) -> String {
    let v: Vec<String> = s.iter().map(|i| i.to_string()).collect();
    format!("[{}]", v.join(","))
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::A1 { t, n_poly } => {
                let bits: String = (1..=*n_poly).map(|i| if t.contains(&i) { '1' } else { '0' }).collect();
                write!(f, "T={bits}")
            }
            Pattern::A2 { t1, t2, t3 } => write!(f, "T1={} T2={} T3={}", list(t1), list(t2), list(t3)),
        }
    }
}

/// A q-commuting generator of a stratum: a model generator or some w_i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalGen {
    pub name: String,
    pub element: Element,
    /// The l-th power in l-center coordinates.
    pub l_power: CenterPoly,
    /// Model generator position, if the element is a generator.
    pub position: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Stratum {
    pub pattern: Pattern,
    pub survivors: Vec<LocalGen>,
    pub killed: Vec<LocalGen>,
    /// q-exponents among survivors.
    pub skew: IntMat,
    /// Rows: survivors then killed; columns: survivors.
    pub full_rows: IntMat,
    pub torus: TorusStructure,
}

impl Stratum {
    pub fn id(&self) -> String {
        self.pattern.to_string()
    }

    /// First condition of the stratum that the character violates.
    pub fn first_failure(&self, chi: &Character) -> Option<String> {
        for g in &self.killed {
            match chi.eval(&g.l_power) {
                Some(v) if v.is_zero() => {}
                _ => return Some(format!("needs {}^l = 0", g.name)),
            }
        }
        for g in &self.survivors {
            match chi.eval(&g.l_power) {
                Some(v) if !v.is_zero() => {}
                _ => return Some(format!("needs {}^l ≠ 0", g.name)),
            }
        }
        None
    }

    /// l-th roots of the survivor values: generator witnesses, else rational roots.
    pub fn survivor_witnesses(&self, chi: &Character) -> Result<Vec<CycloNum>, StrataError> {
        self.survivors
            .iter()
            .map(|g| {
                if let Some(w) = g.position.and_then(|p| chi.witnesses[p].clone()) {
                    return Ok(w);
                }
                chi.eval(&g.l_power)
                    .and_then(|v| v.rational_root(v.root().l()))
                    .ok_or_else(|| StrataError::NoWitness(g.name.clone()))
            })
            .collect()
    }

    /// Values of the extending central z_{t+1..p} given survivor witnesses.
    pub fn z_ext(&self, witnesses: &[CycloNum], root: &RootData) -> Vec<CycloNum> {
        (self.torus.t..self.torus.p)
            .map(|j| {
                let z = self.torus.z(j);
                let mut acc = root.one();
                for (w, &e) in witnesses.iter().zip(z) {
                    acc = &acc * &w.pow(e).expect("survivor witnesses are nonzero");
                }
                acc
            })
            .collect()
    }
}

/// A diagonal stratum with its killed generators first and its survivors
/// made invertible.
#[derive(Debug, Clone)]
pub struct Localized {
    pub presentation: AlgebraPresentation,
    /// Localized index of each killed generator, then of each survivor.
    pub killed_pos: Vec<usize>,
    pub survivor_pos: Vec<usize>,
}

impl Localized {
    /// The monomial with the given exponents over the survivors.
    pub fn survivor_monomial(&self, z: &[i64]) -> Element {
        let mut m = vec![0; self.presentation.len()];
        for (&pos, &e) in self.survivor_pos.iter().zip(z) {
            m[pos] = e as i32;
        }
        Element::monomial(m, QLaurent::one())
    }
}

/// Centrality of the listed ε-center generators of a stratum, and of the
/// proper powers z_j^e (0 < e < l) of the non-extending z's.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CenterCheck {
    pub generators: Vec<(String, bool)>,
    pub proper_powers: Vec<(String, bool)>,
}

impl CenterCheck {
    pub fn holds(&self) -> bool {
        self.generators.iter().all(|(_, c)| *c) && self.proper_powers.iter().all(|(_, c)| !*c)
    }
}

impl Stratum {
    pub fn localized(&self, ctx: &Context) -> Option<Localized> {
        let p = ctx.presentation();
        if matches!(ctx.model, Model::Weyl(_)) || !p.is_diagonal() {
            return None;
        }
        let order: Vec<usize> = self.killed.iter().chain(&self.survivors).map(|g| g.position).collect::<Option<_>>()?;
        let n = order.len();
        let mut skew = IntMat::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                skew.set(a, b, p.s(order[a], order[b]));
            }
        }
        let names = order.iter().map(|&g| p.names()[g].clone()).collect();
        let kn = self.killed.len();
        let presentation = AlgebraPresentation::twisted(names, skew, kn).ok()?;
        Some(Localized { presentation, killed_pos: (0..kn).collect(), survivor_pos: (kn..n).collect() })
    }

    pub fn center_check(&self, ctx: &Context) -> Option<CenterCheck> {
        let loc = self.localized(ctx)?;
        let rw = Rewriter::new(&loc.presentation);
        let r = &ctx.root;
        let l = ctx.l() as i64;
        let ts = &self.torus;
        let (eps, _) = center_generators_eps(ts, ctx.l());
        let central = |z: &[i64]| is_central_at_root(&rw, &loc.survivor_monomial(z), r);
        let mut generators = Vec::new();
        for (i, z) in eps.iter().enumerate() {
            let label = if i < 2 * ts.k {
                format!("{}{}^l", if i % 2 == 0 { "h" } else { "g" }, i / 2 + 1)
            } else {
                let j = i - 2 * ts.k;
                format!("z{}{}", j + 1, if j < ts.t { "^l" } else { "" })
            };
            generators.push((label, central(z)));
        }
        let mut proper_powers = Vec::new();
        for j in 0..ts.t {
            for e in 1..l {
                let z: Vec<i64> = ts.z(j).iter().map(|x| x * e).collect();
                proper_powers.push((format!("z{}^{e}", j + 1), central(&z)));
            }
        }
        Some(CenterCheck { generators, proper_powers })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Location {
    Stratum(usize),
    /// Every stratum id with its first failing condition.
    Uncovered(Vec<(String, String)>),
}

/// e with u v = q^e v u on leading terms, and whether the relation holds exactly.
pub fn q_exponent(rw: &Rewriter, u: &Element, v: &Element) -> Option<(i64, bool)> {
    let uv = rw.mul(u, v);
    let vu = rw.mul(v, u);
    let (mu, cu) = uv.leading()?;
    let (mv, cv) = vu.leading()?;
    if mu != mv {
        return None;
    }
    let e = cu.min_degree()? - cv.min_degree()?;
    if cv.shift(e) != *cu {
        return None;
    }
    let exact = uv == vu.scale(&QLaurent::q_pow(e));
    Some((e, exact))
}

fn subsets(n: usize) -> impl Iterator<Item = BTreeSet<usize>> {
    (0u32..1 << n).map(move |mask| (1..=n).filter(|i| mask >> (i - 1) & 1 == 1).collect())
}

/// Triples T1 ⊆ T2 ⊆ T3 with i ∈ T2 ⇒ i ≥ 2 and i−1, i ∈ T3.
pub fn admissible_triples(n: usize) -> Vec<(BTreeSet<usize>, BTreeSet<usize>, BTreeSet<usize>)> {
    let mut out = Vec::new();
    // level 0: free, 1: in T3 only, 2: in T2 − T1, 3: in T1
    let total = 4usize.pow(n as u32);
    for code in 0..total {
        let level: Vec<usize> = (0..n).map(|i| code / 4usize.pow(i as u32) % 4).collect();
        let at = |i: usize, min: usize| level[i - 1] >= min;
        let ok = (1..=n).all(|i| !at(i, 2) || (i >= 2 && at(i - 1, 1)));
        if !ok {
            continue;
        }
        let pick = |min: usize| (1..=n).filter(|&i| at(i, min)).collect::<BTreeSet<_>>();
        out.push((pick(3), pick(2), pick(1)));
    }
    out.sort();
    out
}

/// Whether 1 lies in the ideal generated by the killed elements, read off
/// the recursion w_i = w_{i−1} + (q_i − 1) y_i x_i.
pub fn triple_is_proper(t2: &BTreeSet<usize>, t3: &BTreeSet<usize>) -> bool {
    // modulo y_j for j ∈ T2, w_j ≡ w_{j−1}; a killed w_i reaching w_0 = 1 kills everything
    t3.iter().all(|&i| {
        let mut j = i;
        while j >= 1 && t2.contains(&j) {
            j -= 1;
        }
        j != 0
    })
}

fn gen_local(ctx: &Context, g: usize) -> LocalGen {
    let p = ctx.presentation();
    LocalGen { name: p.names()[g].clone(), element: p.gen(g), l_power: ctx.coordinate(g), position: Some(g) }
}

fn build(ctx: &Context, pattern: Pattern, survivors: Vec<LocalGen>, killed: Vec<LocalGen>) -> Result<Stratum, StrataError> {
    let rw = Rewriter::new(ctx.presentation());
    let m = survivors.len();
    let mut skew = IntMat::zeros(m, m);
    for a in 0..m {
        for b in a + 1..m {
            let (sa, sb) = (&survivors[a], &survivors[b]);
            match q_exponent(&rw, &sa.element, &sb.element) {
                Some((e, true)) => {
                    skew.set(a, b, e);
                    skew.set(b, a, -e);
                }
                _ => return Err(StrataError::NotQCommuting(sa.name.clone(), sb.name.clone())),
            }
        }
    }
    let ambient: Vec<&LocalGen> = survivors.iter().chain(&killed).collect();
    let mut full_rows = IntMat::zeros(ambient.len(), m);
    for (r, g) in ambient.iter().enumerate() {
        for (c, s) in survivors.iter().enumerate() {
            if r == c {
                continue;
            }
            let (e, _) = q_exponent(&rw, &g.element, &s.element)
                .ok_or_else(|| StrataError::NotQCommuting(g.name.clone(), s.name.clone()))?;
            full_rows.set(r, c, e);
        }
    }
    let torus = torus_structure(&skew, &full_rows, ctx.l())
        .map_err(|source| StrataError::Torus { stratum: pattern.to_string(), source })?;
    Ok(Stratum { pattern, survivors, killed, skew, full_rows, torus })
}

/// All strata of the model; empty for presentations outside both families.
pub fn enumerate_strata(ctx: &Context) -> Result<Vec<Stratum>, StrataError> {
    let p = ctx.presentation();
    match &ctx.model {
        Model::Weyl(w) => {
            let data = ctx.weyl.as_ref().expect("weyl context carries center data");
            let n = w.n();
            let mut out = Vec::new();
            for (t1, t2, t3) in admissible_triples(n) {
                debug_assert!(triple_is_proper(&t2, &t3));
                let mut survivors = Vec::new();
                let mut killed = Vec::new();
                for i in 1..=n {
                    let (px, py) = (w.pos_x(i - 1), w.pos_y(i - 1));
                    let wi = LocalGen {
                        name: format!("w{i}"),
                        element: w.w(i).clone(),
                        l_power: data.f[i].clone(),
                        position: None,
                    };
                    if t1.contains(&i) {
                        killed.push(gen_local(ctx, px));
                    } else if t2.contains(&i) {
                        survivors.push(gen_local(ctx, px));
                    }
                    if t2.contains(&i) {
                        killed.push(gen_local(ctx, py));
                    } else {
                        survivors.push(gen_local(ctx, py));
                    }
                    if t3.contains(&i) {
                        killed.push(wi);
                    } else {
                        survivors.push(wi);
                    }
                }
                out.push(build(ctx, Pattern::A2 { t1, t2, t3 }, survivors, killed)?);
            }
            Ok(out)
        }
        _ if p.is_diagonal() => {
            let n_poly = p.n_poly();
            let mut out = Vec::new();
            for t in subsets(n_poly) {
                let (killed, survivors): (Vec<usize>, Vec<usize>) = (0..p.len()).partition(|g| t.contains(&(g + 1)));
                let survivors = survivors.into_iter().map(|g| gen_local(ctx, g)).collect();
                let killed = killed.into_iter().map(|g| gen_local(ctx, g)).collect();
                out.push(build(ctx, Pattern::A1 { t, n_poly }, survivors, killed)?);
            }
            Ok(out)
        }
        _ => Ok(Vec::new()),
    }
}

pub fn locate(chi: &Character, strata: &[Stratum]) -> Result<Location, StrataError> {
    let mut hits = Vec::new();
    let mut misses = Vec::new();
    for (i, s) in strata.iter().enumerate() {
        match s.first_failure(chi) {
            None => hits.push(i),
            Some(why) => misses.push((s.id(), why)),
        }
    }
    match hits.len() {
        0 => Ok(Location::Uncovered(misses)),
        1 => Ok(Location::Stratum(hits[0])),
        _ => Err(StrataError::MultipleStrata(hits.iter().map(|&i| strata[i].id()).collect())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{build_twisted, build_weyl};

    fn plane(l: u32) -> Context {
        let s = IntMat::new(&[[0, 1], [-1, 0]]);
        Context::new(Model::Twisted(build_twisted(&s, 2).unwrap()), RootData::new(l).unwrap()).unwrap()
    }

    fn weyl1(l: u32) -> Context {
        let m = build_weyl(&IntMat::zeros(1, 1), &[1]).unwrap();
        Context::new(Model::Weyl(m), RootData::new(l).unwrap()).unwrap()
    }

    fn chi(ctx: &Context, vals: &[CycloNum]) -> Character {
        Character { values: vals.to_vec(), witnesses: vec![None; ctx.presentation().len()] }
    }

    #[test]
    fn a1_plane_strata() {
        let ctx = plane(3);
        let st = enumerate_strata(&ctx).unwrap();
        let ids: Vec<String> = st.iter().map(Stratum::id).collect();
        assert_eq!(ids, ["T=00", "T=10", "T=01", "T=11"]);
        let t1 = &st[1];
        assert_eq!(t1.skew, IntMat::new(&[[0]]));
        assert_eq!((t1.torus.k, t1.torus.p, t1.torus.t), (0, 1, 1));
        assert_eq!((st[0].torus.k, st[0].torus.p, st[0].torus.t), (1, 0, 0));

        let r = &ctx.root;
        let c = chi(&ctx, &[r.zero(), r.one()]);
        assert_eq!(locate(&c, &st).unwrap(), Location::Stratum(1));
    }

    #[test]
    fn pure_torus_single_stratum() {
        let p = crate::engine::AlgebraPresentation::twisted(
            vec!["x1".into(), "x2".into()],
            IntMat::new(&[[0, 1], [-1, 0]]),
            0,
        )
        .unwrap();
        let ctx = Context::new(Model::Twisted(p), RootData::new(3).unwrap()).unwrap();
        let st = enumerate_strata(&ctx).unwrap();
        assert_eq!(st.len(), 1);
        assert_eq!(st[0].id(), "T=");
    }

    #[test]
    fn a2_triples() {
        let t = admissible_triples(1);
        assert_eq!(t.len(), 2);
        assert!(t.iter().all(|(_, t2, _)| t2.is_empty()));
        for n in 1..=3 {
            for (t1, t2, t3) in admissible_triples(n) {
                assert!(t1.is_subset(&t2) && t2.is_subset(&t3));
                assert!(triple_is_proper(&t2, &t3));
            }
        }
        let bad: BTreeSet<usize> = [1].into();
        assert!(!triple_is_proper(&bad, &bad));
        assert_eq!(admissible_triples(2).len(), 6);
    }

    #[test]
    fn weyl_strata_and_edge_character() {
        let ctx = weyl1(3);
        let st = enumerate_strata(&ctx).unwrap();
        let ids: Vec<String> = st.iter().map(Stratum::id).collect();
        assert_eq!(ids, ["T1=[] T2=[] T3=[]", "T1=[] T2=[] T3=[1]"]);
        assert_eq!((st[0].torus.k, st[0].torus.p, st[0].torus.t), (1, 0, 0));
        assert_eq!((st[1].torus.k, st[1].torus.p, st[1].torus.t), (0, 1, 1));

        let r = &ctx.root;
        let edge = chi(&ctx, &[r.zero(), r.zero()]);
        match locate(&edge, &st).unwrap() {
            Location::Uncovered(d) => {
                assert_eq!(d.len(), 2);
                assert_eq!(d[0].1, "needs y1^l ≠ 0");
                assert_eq!(d[1].1, "needs w1^l = 0");
            }
            other => panic!("{other:?}"),
        }
        let generic = chi(&ctx, &[r.one(), r.one()]);
        assert_eq!(locate(&generic, &st).unwrap(), Location::Stratum(0));
    }

    #[test]
    fn a1_locate_is_total() {
        let ctx = |n: usize| {
            let mut s = IntMat::zeros(n, n);
            for i in 0..n {
                for j in i + 1..n {
                    s.set(i, j, ((i + 2 * j) % 3) as i64 - 1);
                    s.set(j, i, -s.get(i, j));
                }
            }
            Context::new(Model::Twisted(build_twisted(&s, n).unwrap()), RootData::new(3).unwrap()).unwrap()
        };
        for n in 1..=4 {
            let c = ctx(n);
            let st = enumerate_strata(&c).unwrap();
            assert_eq!(st.len(), 1 << n);
            let r = &c.root;
            let pool = [r.zero(), r.one(), r.eps()];
            for code in 0..3usize.pow(n as u32) {
                let vals: Vec<CycloNum> = (0..n).map(|i| pool[code / 3usize.pow(i as u32) % 3].clone()).collect();
                assert!(matches!(locate(&chi(&c, &vals), &st).unwrap(), Location::Stratum(_)));
            }
        }
    }

    #[test]
    fn survivors_q_commute_exactly() {
        let m = build_weyl(&IntMat::new(&[[0, 1], [-1, 0]]), &[1, 2]).unwrap();
        let ctx = Context::new(Model::Weyl(m), RootData::new(5).unwrap()).unwrap();
        let st = enumerate_strata(&ctx).unwrap();
        assert_eq!(st.len(), 6);
        let rw = Rewriter::new(ctx.presentation());
        for s in &st {
            for a in &s.survivors {
                for b in &s.survivors {
                    assert!(q_exponent(&rw, &a.element, &b.element).unwrap().1);
                }
            }
        }
    }

    #[test]
    fn witnesses_and_z_ext() {
        let ctx = plane(3);
        let st = enumerate_strata(&ctx).unwrap();
        let r = &ctx.root;
        let c = Character { values: vec![r.zero(), r.int(8)], witnesses: vec![None, None] };
        let w = st[1].survivor_witnesses(&c).unwrap();
        assert_eq!(w, vec![r.int(2)]);
        assert!(st[1].z_ext(&w, r).is_empty());
        let bad = Character { values: vec![r.zero(), r.int(2)], witnesses: vec![None, None] };
        assert!(st[1].survivor_witnesses(&bad).is_err());
    }

    #[test]
    fn center_generators_on_localized_strata() {
        let ctx = plane(3);
        let st = enumerate_strata(&ctx).unwrap();
        for s in &st {
            let c = s.center_check(&ctx).unwrap();
            assert!(c.holds(), "{}: {c:?}", s.id());
        }
        let c = st[1].center_check(&ctx).unwrap();
        assert_eq!(c.proper_powers.len(), 2);
        let loc = st[1].localized(&ctx).unwrap();
        assert_eq!(loc.presentation.names(), ["x1", "x2"]);
        assert!(!loc.presentation.is_invertible(0) && loc.presentation.is_invertible(1));
        assert!(weyl1(3).presentation().len() == 2 && enumerate_strata(&weyl1(3)).unwrap()[0].center_check(&weyl1(3)).is_none());
    }
}
