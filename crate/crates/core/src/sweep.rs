//! Exhaustive checks over small twisted algebras: every skew matrix with
//! bounded entries, every polynomial/invertible split and every character with
//! values in {0, 1}.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::exactnum::RootData;
use crate::fiber::{eps_census, Census};
use crate::models::{build_twisted, Character, Context, Model};
use crate::stabilizer::{check_against_census, PoissonTable, Verdict};
use crate::strata::enumerate_strata;
use crate::zlattice::{is_admissible, IntMat};

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub max_n: usize,
    pub entry_bound: i64,
    pub ls: Vec<u32>,
    pub jobs: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig { max_n: 4, entry_bound: 2, ls: vec![3, 5], jobs: 1 }
    }
}

/// Result for one character on one canonical skew matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub verdict: Verdict,
    pub count: usize,
    pub t: usize,
    pub rank_chi: usize,
    pub rank_chi0: usize,
    pub linear_rank: Option<usize>,
    pub psi_ok: bool,
    pub center_ok: bool,
    pub error: Option<String>,
}

impl Outcome {
    pub fn count_ok(&self) -> bool {
        self.error.is_none() && self.verdict == Verdict::Pass && self.rank_chi == self.t
    }

    pub fn rank_ok(&self) -> bool {
        self.error.is_none() && self.rank_chi == self.rank_chi0 && self.psi_ok
    }
}

#[derive(Debug, Clone, Default)]
pub struct SweepSummary {
    /// (skew, split, character) triples examined.
    pub cases: usize,
    /// Distinct (l, skew up to relabeling) computed.
    pub classes: usize,
    /// Fiber censuses run: one per killed set of each class of S mod l up to relabeling and units.
    pub censuses: usize,
    pub inadmissible: usize,
    pub count_failures: Vec<String>,
    pub rank_failures: Vec<String>,
    pub center_failures: Vec<String>,
    /// Characters where the Poisson-kernel rank differs from the stratum rank.
    pub path_disagreements: usize,
    pub elapsed: Duration,
}

fn skew_matrices(n: usize, bound: i64) -> Vec<IntMat> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let width = (2 * bound + 1) as usize;
    let total = width.pow(pairs.len() as u32);
    (0..total)
        .map(|mut code| {
            let mut s = IntMat::zeros(n, n);
            for &(i, j) in &pairs {
                let v = (code % width) as i64 - bound;
                code /= width;
                s.set(i, j, v);
                s.set(j, i, -v);
            }
            s
        })
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// The relabeling minimizing the upper triangle; new generator a is old perm[a].
fn canonical(s: &IntMat, perms: &[Vec<usize>]) -> (Vec<i64>, Vec<usize>) {
    let n = s.rows();
    perms
        .iter()
        .map(|p| {
            let code: Vec<i64> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).map(|(a, b)| s.get(p[a], p[b])).collect();
            (code, p.clone())
        })
        .min()
        .expect("at least one permutation")
}

/// The fiber algebra only sees ε^{s_ij}, and S ↦ uS (u a unit mod l) is the
/// Galois twist ε ↦ ε^u, so censuses are shared across this coarser class.
fn census_key(s: &IntMat, perms: &[Vec<usize>], l: u32) -> (Vec<i64>, Vec<usize>) {
    let n = s.rows();
    let l = l as i64;
    (1..l)
        .filter(|&u| num_integer::Integer::gcd(&u, &l) == 1)
        .flat_map(|u| {
            perms.iter().map(move |p| {
                let code: Vec<i64> = (0..n)
                    .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
                    .map(|(a, b)| (u * s.get(p[a], p[b])).rem_euclid(l))
                    .collect();
                (code, p.clone())
            })
        })
        .min()
        .expect("at least one permutation")
}

/// Killed set over the generators of a relabeled matrix whose generator a is old perm[a].
fn relabel_mask(mask: usize, perm: &[usize]) -> usize {
    (0..perm.len()).filter(|&a| mask >> perm[a] & 1 == 1).fold(0, |m, a| m | 1 << a)
}

fn binary_character(r: &RootData, n: usize, mask: usize) -> Character {
    let ws: Vec<_> = (0..n).map(|g| if mask >> g & 1 == 1 { r.zero() } else { r.one() }).collect();
    Character::from_witnesses(&ws, r.l())
}

/// Census of every killed set for the matrix with the given upper triangle.
fn census_table(n: usize, code: &[i64], l: u32) -> Vec<Result<Census, String>> {
    let setup = || -> Result<Context, String> {
        let p = build_twisted(&from_code(n, code), n).map_err(|e| e.to_string())?;
        Context::new(Model::Twisted(p), RootData::new(l).map_err(|e| e.to_string())?).map_err(|e| e.to_string())
    };
    match setup() {
        Ok(ctx) => (0..1usize << n)
            .map(|mask| eps_census(&ctx, &binary_character(&ctx.root, n, mask)).map_err(|e| e.to_string()))
            .collect(),
        Err(e) => vec![Err(e); 1 << n],
    }
}

fn from_code(n: usize, code: &[i64]) -> IntMat {
    let mut s = IntMat::zeros(n, n);
    let mut it = code.iter();
    for i in 0..n {
        for j in i + 1..n {
            let v = *it.next().expect("code length");
            s.set(i, j, v);
            s.set(j, i, -v);
        }
    }
    s
}

/// Outcomes for every killed set (bitmask over generators) of one skew matrix,
/// given the census of each killed set.
pub fn class_outcomes(s: &IntMat, l: u32, censuses: &[Result<Census, String>]) -> Vec<Outcome> {
    let n = s.rows();
    let failed = |msg: String| Outcome {
        verdict: Verdict::Mismatch,
        count: 0,
        t: 0,
        rank_chi: 0,
        rank_chi0: 0,
        linear_rank: None,
        psi_ok: false,
        center_ok: false,
        error: Some(msg),
    };
    let setup = || -> Result<_, String> {
        let p = build_twisted(s, n).map_err(|e| e.to_string())?;
        let ctx = Context::new(Model::Twisted(p), RootData::new(l).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let table = PoissonTable::from_context(&ctx).map_err(|e| e.to_string())?;
        let strata = enumerate_strata(&ctx).map_err(|e| e.to_string())?;
        Ok((ctx, table, strata))
    };
    let (ctx, table, strata) = match setup() {
        Ok(x) => x,
        Err(e) => return vec![failed(e); 1 << n],
    };
    (0..1usize << n)
        .map(|mask| {
            let chi = binary_character(&ctx.root, n, mask);
            let oracle = match &censuses[mask] {
                Ok(c) => c.clone(),
                Err(e) => return failed(e.clone()),
            };
            let rep = match check_against_census(&ctx, &table, &strata, &chi, oracle) {
                Ok(rep) => rep,
                Err(e) => return failed(e.to_string()),
            };
            let center_ok = rep
                .stratum
                .as_ref()
                .and_then(|id| strata.iter().find(|s| &s.id() == id))
                .and_then(|s| s.center_check(&ctx))
                .is_some_and(|c| c.holds());
            Outcome {
                verdict: rep.verdict,
                count: rep.oracle.count,
                t: rep.t.unwrap_or(usize::MAX),
                rank_chi: rep.rank_chi,
                rank_chi0: rep.rank_chi0,
                linear_rank: rep.linear_rank,
                psi_ok: rep.psi.is_some_and(|p| p.homomorphism && p.injective_on_t0 && p.onto_t),
                center_ok,
                error: None,
            }
        })
        .collect()
}

/// Outcomes for one skew matrix with its own censuses.
pub fn matrix_outcomes(s: &IntMat, l: u32) -> Vec<Outcome> {
    let n = s.rows();
    let code: Vec<i64> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| s.get(i, j)).collect();
    class_outcomes(s, l, &census_table(n, &code, l))
}

fn describe(l: u32, s: &IntMat, n_poly: usize, mask: usize, o: &Outcome) -> String {
    format!("l={l} S={:?} n_poly={n_poly} killed={mask:b}: {o:?}", s.to_rows())
}

pub fn a1_sweep(cfg: &SweepConfig) -> SweepSummary {
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs.max(1)).build().expect("thread pool");
    let mut sum = SweepSummary::default();
    for &l in &cfg.ls {
        for n in 1..=cfg.max_n {
            let perms = permutations(n);
            let mats = skew_matrices(n, cfg.entry_bound);
            let mut admissible = Vec::new();
            for s in mats {
                match is_admissible(&s, &[], l) {
                    Ok(a) if a.admissible => admissible.push(s),
                    _ => sum.inadmissible += 1,
                }
            }
            let mut classes: BTreeMap<Vec<i64>, Vec<Outcome>> = BTreeMap::new();
            for s in &admissible {
                classes.entry(canonical(s, &perms).0).or_default();
            }
            let codes: Vec<Vec<i64>> = classes.keys().cloned().collect();
            let keys: Vec<(Vec<i64>, Vec<usize>)> = codes.iter().map(|c| census_key(&from_code(n, c), &perms, l)).collect();
            let distinct: Vec<Vec<i64>> =
                keys.iter().map(|(k, _)| k.clone()).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
            let tables: Vec<Vec<Result<Census, String>>> =
                pool.install(|| distinct.par_iter().map(|k| census_table(n, k, l)).collect());
            let tables: BTreeMap<&Vec<i64>, &Vec<Result<Census, String>>> = distinct.iter().zip(&tables).collect();
            sum.censuses += tables.len() << n;
            let computed: Vec<Vec<Outcome>> = pool.install(|| {
                codes
                    .par_iter()
                    .zip(&keys)
                    .map(|(c, (k, perm))| {
                        let table = tables[k];
                        let local: Vec<_> = (0..1usize << n).map(|m| table[relabel_mask(m, perm)].clone()).collect();
                        class_outcomes(&from_code(n, c), l, &local)
                    })
                    .collect()
            });
            for (c, o) in codes.into_iter().zip(computed) {
                classes.insert(c, o);
            }
            sum.classes += classes.len();
            for s in &admissible {
                let (code, perm) = canonical(s, &perms);
                let outs = &classes[&code];
                for n_poly in 0..=n {
                    for mask in 0..1usize << n_poly {
                        let o = &outs[relabel_mask(mask, &perm)];
                        sum.cases += 1;
                        if o.linear_rank.is_some_and(|r| r != o.rank_chi) {
                            sum.path_disagreements += 1;
                        }
                        if !o.count_ok() {
                            sum.count_failures.push(describe(l, s, n_poly, mask, o));
                        }
                        if !o.rank_ok() {
                            sum.rank_failures.push(describe(l, s, n_poly, mask, o));
                        }
                        if !o.center_ok {
                            sum.center_failures.push(describe(l, s, n_poly, mask, o));
                        }
                    }
                }
            }
        }
    }
    sum.elapsed = start.elapsed();
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_sizes() {
        assert_eq!(skew_matrices(3, 2).len(), 125);
        assert_eq!(permutations(4).len(), 24);
        let s = IntMat::new(&[[0, 2, -1], [-2, 0, 0], [1, 0, 0]]);
        let (code, perm) = canonical(&s, &permutations(3));
        let t = from_code(3, &code);
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(t.get(a, b), s.get(perm[a], perm[b]));
            }
        }
    }

    #[test]
    fn shared_censuses_agree_with_direct_ones() {
        let perms = permutations(3);
        for rows in [[[0, 2, -1], [-2, 0, 1], [1, -1, 0]], [[0, 1, 1], [-1, 0, -2], [-1, 2, 0]]] {
            let s = IntMat::new(&rows);
            let code: Vec<i64> = vec![s.get(0, 1), s.get(0, 2), s.get(1, 2)];
            let direct = census_table(3, &code, 5);
            let (key, perm) = census_key(&s, &perms, 5);
            let shared = census_table(3, &key, 5);
            for m in 0..8 {
                let (a, b) = (direct[m].as_ref().unwrap(), shared[relabel_mask(m, &perm)].as_ref().unwrap());
                assert_eq!((a.count, &a.blocks), (b.count, &b.blocks), "mask {m}");
            }
        }
    }

    #[test]
    fn small_sweep_passes() {
        let sum = a1_sweep(&SweepConfig { max_n: 2, entry_bound: 2, ls: vec![3, 5], jobs: 1 });
        assert!(sum.count_failures.is_empty(), "{:?}", sum.count_failures);
        assert!(sum.rank_failures.is_empty(), "{:?}", sum.rank_failures);
        assert!(sum.center_failures.is_empty(), "{:?}", sum.center_failures);
        assert!(sum.cases > 0);
    }
}
