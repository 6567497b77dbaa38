//! Finite-dimensional Lie algebras given by structure constants, and the rank
//! computed from a toral/nilpotent candidate split.

use crate::exactnum::{CycloNum, RootData};
use crate::fiber::linalg::{axpy, rank, Echelon, SVec};

use super::StabilizerError;

#[derive(Debug, Clone)]
pub struct FDLie {
    pub root: RootData,
    pub labels: Vec<String>,
    /// brackets[i][j] = [e_i, e_j] in basis coordinates.
    pub brackets: Vec<Vec<SVec>>,
    pub t_candidate: Vec<usize>,
    pub n_candidate: Vec<usize>,
}

impl FDLie {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn abelian(root: &RootData, labels: Vec<String>, t: Vec<usize>, n: Vec<usize>) -> FDLie {
        let d = labels.len();
        FDLie { root: root.clone(), labels, brackets: vec![vec![SVec::new(); d]; d], t_candidate: t, n_candidate: n }
    }

    pub fn bracket(&self, u: &SVec, v: &SVec) -> SVec {
        let mut out = SVec::new();
        for (&i, x) in u {
            for (&j, y) in v {
                axpy(&mut out, &(x * y), &self.brackets[i][j]);
            }
        }
        out
    }

    fn unit(&self, i: usize) -> SVec {
        SVec::from([(i, self.root.one())])
    }

    pub fn is_antisymmetric(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| {
            self.brackets[i][i].is_empty()
                && (i + 1..d).all(|j| {
                    let mut s = self.brackets[i][j].clone();
                    axpy(&mut s, &self.root.one(), &self.brackets[j][i]);
                    s.is_empty()
                })
        })
    }

    pub fn satisfies_jacobi(&self) -> bool {
        let d = self.dim();
        let one = self.root.one();
        for i in 0..d {
            for j in i + 1..d {
                for k in j + 1..d {
                    let (a, b, c) = (self.unit(i), self.unit(j), self.unit(k));
                    let mut s = self.bracket(&a, &self.brackets[j][k]);
                    axpy(&mut s, &one, &self.bracket(&b, &self.brackets[k][i]));
                    axpy(&mut s, &one, &self.bracket(&c, &self.brackets[i][j]));
                    if !s.is_empty() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Matrix of ad(e_i), as rows indexed by output coordinate.
    pub fn ad(&self, i: usize) -> Vec<Vec<CycloNum>> {
        let d = self.dim();
        let mut m = vec![vec![self.root.zero(); d]; d];
        for j in 0..d {
            for (&r, x) in &self.brackets[i][j] {
                m[r][j] = x.clone();
            }
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Checks {
    pub antisymmetric: bool,
    pub jacobi: bool,
    pub t_abelian: bool,
    pub n_ideal: bool,
    /// Steps for the lower central series of n to reach 0.
    pub n_lcs_length: Option<usize>,
    pub ad_diagonalizable: bool,
    pub weight_kernel_dim: usize,
}

impl Checks {
    pub fn all_pass(&self) -> bool {
        self.antisymmetric && self.jacobi && self.t_abelian && self.n_ideal && self.n_lcs_length.is_some() && self.ad_diagonalizable
    }
}

#[derive(Debug, Clone)]
pub struct StabilizerResult {
    pub lie: FDLie,
    pub rank: usize,
    pub checks: Checks,
}

/// Polynomial coefficients, constant term first.
type Poly = Vec<CycloNum>;

fn trim(p: &mut Poly) {
    while p.last().is_some_and(CycloNum::is_zero) {
        p.pop();
    }
}

fn poly_rem(a: &Poly, b: &Poly) -> Poly {
    let mut r = a.clone();
    trim(&mut r);
    let lead = b.last().expect("nonzero divisor").inv().expect("nonzero leading coefficient");
    while r.len() >= b.len() && !r.is_empty() {
        let c = &r[r.len() - 1] * &lead;
        let shift = r.len() - b.len();
        for (i, x) in b.iter().enumerate() {
            r[shift + i] = &r[shift + i] - &(&c * x);
        }
        trim(&mut r);
    }
    r
}

fn poly_gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut a, mut b) = (a.clone(), b.clone());
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

fn mat_mul(a: &[Vec<CycloNum>], b: &[Vec<CycloNum>], zero: &CycloNum) -> Vec<Vec<CycloNum>> {
    let d = a.len();
    let mut out = vec![vec![zero.clone(); d]; d];
    for i in 0..d {
        for k in 0..d {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..d {
                if !b[k][j].is_zero() {
                    out[i][j] = &out[i][j] + &(&a[i][k] * &b[k][j]);
                }
            }
        }
    }
    out
}

fn flatten(m: &[Vec<CycloNum>]) -> SVec {
    let d = m.len();
    let mut v = SVec::new();
    for (i, row) in m.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if !x.is_zero() {
                v.insert(i * d + j, x.clone());
            }
        }
    }
    v
}

/// Minimal polynomial of a square matrix, monic.
pub fn minimal_polynomial(m: &[Vec<CycloNum>], root: &RootData) -> Poly {
    let d = m.len();
    let (zero, one) = (root.zero(), root.one());
    let mut powers: Vec<SVec> = Vec::new();
    let mut cur: Vec<Vec<CycloNum>> = (0..d).map(|i| (0..d).map(|j| if i == j { one.clone() } else { zero.clone() }).collect()).collect();
    loop {
        let v = flatten(&cur);
        // express v in the span of earlier powers: solve Σ c_k P_k = v
        let k = powers.len();
        let mut ech = Echelon::new();
        let mut tagged = Vec::new();
        for (idx, p) in powers.iter().enumerate() {
            let mut row = p.clone();
            row.insert(d * d + idx, one.clone());
            tagged.push(row);
        }
        for row in &tagged {
            ech.insert(row);
        }
        let red = ech.reduce(&v);
        if red.keys().all(|&c| c >= d * d) {
            // red = v − Σ c_k P_k written with tag columns −c_k
            let mut p = vec![zero.clone(); k + 1];
            p[k] = one.clone();
            for (&c, x) in &red {
                p[c - d * d] = x.clone();
            }
            return p;
        }
        powers.push(v);
        cur = mat_mul(&cur, m, &zero);
    }
}

pub fn is_squarefree(p: &Poly) -> bool {
    if p.len() <= 2 {
        return true;
    }
    let deriv: Poly = p.iter().enumerate().skip(1).map(|(i, c)| c.scale(&crate::exactnum::rat(i as i64, 1))).collect();
    poly_gcd(p, &deriv).len() == 1
}

fn in_span(v: &SVec, idx: &[usize]) -> bool {
    v.keys().all(|k| idx.contains(k))
}

/// Verifies the candidate split and computes rank = dim t − dim ∩ ker(weights).
pub fn rank_and_checks(g: &FDLie) -> Result<StabilizerResult, StabilizerError> {
    let d = g.dim();
    let unit = |i: usize| g.unit(i);
    let t = &g.t_candidate;
    let n = &g.n_candidate;

    let t_abelian = t.iter().all(|&a| t.iter().all(|&b| g.brackets[a][b].is_empty()));
    let n_ideal = (0..d).all(|a| n.iter().all(|&b| in_span(&g.brackets[a][b], n)));

    // lower central series n ⊇ [n, n] ⊇ …
    let mut n_lcs_length = None;
    let mut layer: Vec<SVec> = n.iter().map(|&i| unit(i)).collect();
    for step in 0..=n.len() {
        if rank(&layer) == 0 {
            n_lcs_length = Some(step);
            break;
        }
        let mut next = Vec::new();
        for &a in n {
            for v in &layer {
                let b = g.bracket(&unit(a), v);
                if !b.is_empty() {
                    next.push(b);
                }
            }
        }
        layer = next;
    }

    let ad_diagonalizable = t.iter().all(|&i| is_squarefree(&minimal_polynomial(&g.ad(i), &g.root)));
    let ads: Vec<SVec> = t.iter().map(|&i| flatten(&g.ad(i))).collect();
    let weight_kernel_dim = t.len() - rank(&ads);

    let checks = Checks {
        antisymmetric: g.is_antisymmetric(),
        jacobi: g.satisfies_jacobi(),
        t_abelian,
        n_ideal,
        n_lcs_length,
        ad_diagonalizable,
        weight_kernel_dim,
    };
    let partition = {
        let mut all: Vec<usize> = t.iter().chain(n).copied().collect();
        all.sort_unstable();
        all == (0..d).collect::<Vec<_>>()
    };
    if !partition || !checks.all_pass() {
        return Err(StabilizerError::DecompositionInvalid(Box::new(checks)));
    }
    Ok(StabilizerResult { lie: g.clone(), rank: t.len() - weight_kernel_dim, checks })
}

/// Coordinates c with Σ c_k basis_k = v, if v lies in the span.
pub fn solve_in_span(basis: &[SVec], v: &SVec, root: &RootData) -> Option<SVec> {
    let one = root.one();
    let width = basis.iter().chain(std::iter::once(v)).flat_map(|b| b.keys().copied()).max().map_or(0, |m| m + 1);
    let mut ech = Echelon::new();
    for (k, b) in basis.iter().enumerate() {
        let mut row = b.clone();
        row.insert(width + k, one.clone());
        ech.insert(&row);
    }
    let red = ech.reduce(v);
    if red.keys().any(|&c| c < width) {
        return None;
    }
    // red = v − Σ c_k b_k encoded with tag entries −c_k
    Some(red.iter().map(|(&c, x)| (c - width, -x.clone())).collect())
}

pub fn span_rank(vs: &[SVec]) -> usize {
    rank(vs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_dim(c: i64) -> FDLie {
        let r = RootData::new(3).unwrap();
        let mut g = FDLie::abelian(&r, vec!["e".into(), "x".into()], vec![0], vec![1]);
        g.brackets[0][1] = SVec::from([(1, r.int(c))]);
        g.brackets[1][0] = SVec::from([(1, r.int(-c))]);
        g
    }

    #[test]
    fn textbook_solvable() {
        let res = rank_and_checks(&two_dim(1)).unwrap();
        assert_eq!(res.rank, 1);
        assert_eq!(res.checks.n_lcs_length, Some(1));
    }

    #[test]
    fn abelian_has_rank_zero() {
        let r = RootData::new(5).unwrap();
        let g = FDLie::abelian(&r, vec!["a".into(), "b".into(), "c".into()], vec![0, 1, 2], vec![]);
        let res = rank_and_checks(&g).unwrap();
        assert_eq!((res.rank, res.checks.weight_kernel_dim), (0, 3));
    }

    #[test]
    fn heisenberg_nilpotent_part() {
        let r = RootData::new(3).unwrap();
        let mut g = FDLie::abelian(&r, vec!["x".into(), "y".into(), "z".into()], vec![], vec![0, 1, 2]);
        g.brackets[0][1] = SVec::from([(2, r.one())]);
        g.brackets[1][0] = SVec::from([(2, r.int(-1))]);
        let res = rank_and_checks(&g).unwrap();
        assert_eq!((res.rank, res.checks.n_lcs_length), (0, Some(2)));
        assert!(g.satisfies_jacobi());
    }

    #[test]
    fn non_abelian_torus_is_rejected() {
        let mut g = two_dim(1);
        g.t_candidate = vec![0, 1];
        g.n_candidate = vec![];
        assert!(matches!(rank_and_checks(&g), Err(StabilizerError::DecompositionInvalid(_))));
    }

    #[test]
    fn nilpotent_ad_is_not_diagonalizable() {
        let r = RootData::new(3).unwrap();
        let jordan = vec![vec![r.zero(), r.one()], vec![r.zero(), r.zero()]];
        assert!(!is_squarefree(&minimal_polynomial(&jordan, &r)));
        let diag = vec![vec![r.one(), r.zero()], vec![r.zero(), r.eps()]];
        let p = minimal_polynomial(&diag, &r);
        assert_eq!(p.len(), 3);
        assert!(is_squarefree(&p));
    }

    #[test]
    fn span_solver() {
        let r = RootData::new(3).unwrap();
        let b = vec![SVec::from([(0, r.one()), (1, r.one())]), SVec::from([(1, r.eps())])];
        let v = SVec::from([(0, r.int(2)), (1, r.int(3))]);
        let c = solve_in_span(&b, &v, &r).unwrap();
        let mut back = SVec::new();
        for (&k, x) in &c {
            axpy(&mut back, x, &b[k]);
        }
        assert_eq!(back, v);
        assert!(solve_in_span(&b[..1], &v, &r).is_none());
    }
}
