//! Exact integer matrix algorithms: Smith form, alternating normal form,
//! saturated kernels, and the admissibility test for a skew matrix.

use std::fmt;

use num_integer::Integer;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("matrix is not skew-symmetric at ({0}, {1})")]
    NotSkew(usize, usize),
    #[error("{0} generators exceed the minor enumeration limit of 14")]
    SizeLimit(usize),
    #[error("integer overflow in lattice arithmetic")]
    Overflow,
    #[error("shape mismatch: {0}")]
    Shape(String),
}

type Res<T> = Result<T, LatticeError>;

fn add(a: i64, b: i64) -> Res<i64> {
    a.checked_add(b).ok_or(LatticeError::Overflow)
}

fn mul(a: i64, b: i64) -> Res<i64> {
    a.checked_mul(b).ok_or(LatticeError::Overflow)
}

trait NearDiv {
    fn div_near(self, d: i64) -> i64;
}

impl NearDiv for i64 {
    /// Quotient with remainder in (−|d|/2, |d|/2].
    fn div_near(self, d: i64) -> i64 {
        let q = self.div_euclid(d);
        let r = self.rem_euclid(d);
        if 2 * r > d.abs() {
            q + d.signum()
        } else {
            q
        }
    }
}

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Res<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LatticeError::Shape("ragged rows".into()));
        }
        Ok(IntMat { rows: r, cols: c, data: rows.concat() })
    }

    /// Panics on ragged input. Meant for literals.
    pub fn new<const C: usize>(rows: &[[i64; C]]) -> Self {
        IntMat { rows: rows.len(), cols: C, data: rows.iter().flatten().copied().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = IntMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMat) -> Res<IntMat> {
        if self.cols != other.rows {
            return Err(LatticeError::Shape(format!("{}x{} * {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let mut out = IntMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = add(out.get(i, j), mul(a, other.get(k, j))?)?;
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[i64]) -> Res<Vec<i64>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).try_fold(0i64, |acc, (&a, &b)| add(acc, mul(a, b)?)))
            .collect()
    }

    /// Submatrix on the given row and column indices.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> IntMat {
        let mut out = IntMat::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.set(a, b, self.get(i, j));
            }
        }
        out
    }

    pub fn check_skew(&self) -> Res<()> {
        if self.rows != self.cols {
            return Err(LatticeError::Shape("skew matrix must be square".into()));
        }
        for i in 0..self.rows {
            for j in i..self.cols {
                if self.get(i, j) != -self.get(j, i) {
                    return Err(LatticeError::NotSkew(i, j));
                }
            }
        }
        Ok(())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: i64) -> Res<()> {
        if k != 0 {
            for j in 0..self.cols {
                let v = add(self.get(dst, j), mul(k, self.get(src, j))?)?;
                self.set(dst, j, v);
            }
        }
        Ok(())
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: i64) -> Res<()> {
        if k != 0 {
            for i in 0..self.rows {
                let v = add(self.get(i, dst), mul(k, self.get(i, src))?)?;
                self.set(i, dst, v);
            }
        }
        Ok(())
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }

    /// Exact determinant by fraction-free elimination.
    pub fn det(&self) -> Res<i128> {
        if self.rows != self.cols {
            return Err(LatticeError::Shape("determinant of non-square matrix".into()));
        }
        let n = self.rows;
        let mut a: Vec<Vec<i128>> = (0..n).map(|i| self.row(i).iter().map(|&x| x as i128).collect()).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| a[i][k] != 0) else {
                return Ok(0);
            };
            if p != k {
                a.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = a[i][j]
                        .checked_mul(a[k][k])
                        .zip(a[i][k].checked_mul(a[k][j]))
                        .and_then(|(x, y)| x.checked_sub(y))
                        .ok_or(LatticeError::Overflow)?;
                    a[i][j] = t / prev;
                }
                a[i][k] = 0;
            }
            prev = a[k][k];
        }
        Ok(sign * if n == 0 { 1 } else { a[n - 1][n - 1] })
    }

    pub fn rank(&self) -> Res<usize> {
        let (_, d, _) = smith_normal_form(self)?;
        Ok((0..d.rows.min(d.cols)).filter(|&i| d.get(i, i) != 0).count())
    }

    /// Integer inverse of a square matrix with determinant ±1.
    pub fn inverse_unimodular(&self) -> Res<Option<IntMat>> {
        if self.rows != self.cols {
            return Err(LatticeError::Shape(format!("{}x{} is not square", self.rows, self.cols)));
        }
        let (u, d, v) = smith_normal_form(self)?;
        if (0..self.rows).any(|i| d.get(i, i) != 1) {
            return Ok(None);
        }
        Ok(Some(v.mul(&u)?))
    }
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| format!("[{}]", self.row(i).iter().map(i64::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// Returns (U, D, V) with U·M·V = D, D diagonal, d_i | d_{i+1}, d_i ≥ 0.
pub fn smith_normal_form(m: &IntMat) -> Res<(IntMat, IntMat, IntMat)> {
    let (r, c) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = IntMat::identity(r);
    let mut v = IntMat::identity(c);
    for t in 0..r.min(c) {
        loop {
            let pivot = (t..r)
                .flat_map(|i| (t..c).map(move |j| (i, j)))
                .filter(|&(i, j)| d.get(i, j) != 0)
                .min_by_key(|&(i, j)| d.get(i, j).unsigned_abs());
            let Some((pi, pj)) = pivot else {
                return Ok((u, d, v));
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            let p = d.get(t, t);
            let mut dirty = false;
            for i in t + 1..r {
                let q = d.get(i, t).div_near(p);
                d.add_row(i, t, -q)?;
                u.add_row(i, t, -q)?;
                dirty |= d.get(i, t) != 0;
            }
            for j in t + 1..c {
                let q = d.get(t, j).div_near(p);
                d.add_col(j, t, -q)?;
                v.add_col(j, t, -q)?;
                dirty |= d.get(t, j) != 0;
            }
            if dirty {
                continue;
            }
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| d.get(i, j) % p != 0));
            match bad {
                Some(i) => {
                    d.add_row(t, i, 1)?;
                    u.add_row(t, i, 1)?;
                }
                None => break,
            }
        }
        if d.get(t, t) < 0 {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    Ok((u, d, v))
}

/// Block invariants of an alternating matrix under unimodular congruence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewForm {
    /// Rows are the new basis: U·S·Uᵀ is block diagonal.
    pub u: IntMat,
    pub ds: Vec<i64>,
    pub corank: usize,
}

impl SkewForm {
    pub fn k(&self) -> usize {
        self.ds.len()
    }

    /// The block-diagonal target matrix.
    pub fn block_matrix(&self) -> IntMat {
        let m = self.u.rows;
        let mut b = IntMat::zeros(m, m);
        for (i, &d) in self.ds.iter().enumerate() {
            b.set(2 * i, 2 * i + 1, d);
            b.set(2 * i + 1, 2 * i, -d);
        }
        b
    }
}

struct Congruence {
    s: IntMat,
    u: IntMat,
}

impl Congruence {
    fn swap(&mut self, a: usize, b: usize) {
        self.s.swap_rows(a, b);
        self.s.swap_cols(a, b);
        self.u.swap_rows(a, b);
    }

    /// e_dst += k e_src
    fn add(&mut self, dst: usize, src: usize, k: i64) -> Res<()> {
        self.s.add_row(dst, src, k)?;
        self.s.add_col(dst, src, k)?;
        self.u.add_row(dst, src, k)
    }
}

pub fn skew_normal_form(s: &IntMat) -> Res<SkewForm> {
    s.check_skew()?;
    let m = s.rows;
    let mut w = Congruence { s: s.clone(), u: IntMat::identity(m) };
    let mut ds = Vec::new();
    let mut t = 0;
    while t + 1 < m {
        let pivot = (t..m)
            .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
            .filter(|&(i, j)| w.s.get(i, j) != 0)
            .min_by_key(|&(i, j)| w.s.get(i, j).unsigned_abs());
        let Some((pi, pj)) = pivot else { break };
        w.swap(t, pi);
        let pj = if pj == t { pi } else { pj };
        w.swap(t + 1, pj);
        if w.s.get(t, t + 1) < 0 {
            w.swap(t, t + 1);
        }
        let d = w.s.get(t, t + 1);
        let mut dirty = false;
        for k in t + 2..m {
            // s[t][k] reduced via e_k -= q e_{t+1}; s[t+1][k] via e_k += q e_t
            let q = w.s.get(t, k).div_near(d);
            w.add(k, t + 1, -q)?;
            let q2 = w.s.get(t + 1, k).div_near(d);
            w.add(k, t, q2)?;
            dirty |= w.s.get(t, k) != 0 || w.s.get(t + 1, k) != 0;
        }
        if dirty {
            continue;
        }
        let bad = (t + 2..m).find(|&i| (t + 2..m).any(|j| w.s.get(i, j) % d != 0));
        if let Some(i) = bad {
            w.add(t, i, 1)?;
            continue;
        }
        ds.push(d);
        t += 2;
    }
    let corank = m - 2 * ds.len();
    Ok(SkewForm { u: w.u, ds, corank })
}

/// Row-style Hermite normal form of the lattice spanned by `vecs`, zero rows dropped.
pub fn hermite_rows(vecs: &[Vec<i64>], dim: usize) -> Res<Vec<Vec<i64>>> {
    let mut a: Vec<Vec<i64>> = vecs.to_vec();
    let mut out_rows = 0;
    for col in 0..dim {
        loop {
            let piv = (out_rows..a.len()).filter(|&i| a[i][col] != 0).min_by_key(|&i| a[i][col].unsigned_abs());
            let Some(p) = piv else { break };
            a.swap(out_rows, p);
            let pv = a[out_rows][col];
            let mut dirty = false;
            for i in out_rows + 1..a.len() {
                let q = a[i][col].div_near(pv);
                if q != 0 {
                    for j in 0..dim {
                        a[i][j] = add(a[i][j], mul(-q, a[out_rows][j])?)?;
                    }
                }
                dirty |= a[i][col] != 0;
            }
            if !dirty {
                break;
            }
        }
        if out_rows < a.len() && a[out_rows][col] != 0 {
            if a[out_rows][col] < 0 {
                a[out_rows].iter_mut().for_each(|x| *x = -*x);
            }
            let pv = a[out_rows][col];
            for i in 0..out_rows {
                let q = a[i][col].div_near(pv);
                if q != 0 {
                    for j in 0..dim {
                        a[i][j] = add(a[i][j], mul(-q, a[out_rows][j])?)?;
                    }
                }
            }
            out_rows += 1;
        }
    }
    a.truncate(out_rows);
    Ok(a)
}

/// Hermite-reduced basis of the saturated lattice {a : M·a = 0}.
pub fn kernel_int(m: &IntMat) -> Res<Vec<Vec<i64>>> {
    let (_, d, v) = smith_normal_form(m)?;
    let r = (0..d.rows.min(d.cols)).filter(|&i| d.get(i, i) != 0).count();
    let vt = v.transpose();
    let basis: Vec<Vec<i64>> = (r..m.cols).map(|j| vt.row(j).to_vec()).collect();
    hermite_rows(&basis, m.cols)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Offense {
    Minor { indices: Vec<usize>, value: i128 },
    Exponent { index: usize, value: i64 },
}

impl fmt::Display for Offense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Offense::Minor { indices, value } => write!(f, "principal minor {indices:?} = {value}"),
            Offense::Exponent { index, value } => write!(f, "exponent s_{} = {value}", index + 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Admissibility {
    pub admissible: bool,
    pub offense: Option<Offense>,
    pub nonzero_minors: usize,
}

/// gcd(l, m) = 1 for each nonzero principal minor m, and gcd(l, s_i) = 1.
pub fn is_admissible(s: &IntMat, exps: &[i64], l: u32) -> Res<Admissibility> {
    s.check_skew()?;
    let n = s.rows;
    if n > 14 {
        return Err(LatticeError::SizeLimit(n));
    }
    let l = l as i128;
    let mut count = 0;
    let mut offense = None;
    for (i, &e) in exps.iter().enumerate() {
        if (e as i128).gcd(&l) != 1 {
            offense = Some(Offense::Exponent { index: i, value: e });
            break;
        }
    }
    // odd principal minors of a skew matrix vanish; only even subsets are enumerated
    for mask in 1u32..(1 << n) {
        if mask.count_ones() % 2 == 1 {
            continue;
        }
        let idx: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let m = s.select(&idx, &idx).det()?;
        if m == 0 {
            continue;
        }
        count += 1;
        if offense.is_none() && m.gcd(&l) != 1 {
            offense = Some(Offense::Minor { indices: idx, value: m });
        }
    }
    Ok(Admissibility { admissible: offense.is_none(), offense, nonzero_minors: count })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn is_diag_chain(d: &IntMat) -> bool {
        let k = d.rows.min(d.cols);
        for i in 0..d.rows {
            for j in 0..d.cols {
                if i != j && d.get(i, j) != 0 {
                    return false;
                }
            }
        }
        (0..k).all(|i| d.get(i, i) >= 0)
            && (1..k).all(|i| {
                let (a, b) = (d.get(i - 1, i - 1), d.get(i, i));
                if a == 0 {
                    b == 0
                } else {
                    b % a == 0
                }
            })
    }

    fn mul128(a: &[Vec<i128>], b: &[Vec<i128>]) -> Vec<Vec<i128>> {
        let c = b.first().map_or(0, Vec::len);
        a.iter().map(|row| (0..c).map(|j| row.iter().zip(b).map(|(x, br)| x * br[j]).sum()).collect()).collect()
    }

    fn wide(m: &IntMat) -> Vec<Vec<i128>> {
        m.to_rows().into_iter().map(|r| r.into_iter().map(i128::from).collect()).collect()
    }

    fn check_smith(m: &IntMat) {
        let (u, d, v) = smith_normal_form(m).unwrap();
        assert_eq!(mul128(&mul128(&wide(&u), &wide(m)), &wide(&v)), wide(&d));
        assert!(is_diag_chain(&d), "{d}");
        assert_eq!(IntMat::from_rows(&u.to_rows()).unwrap().rank().unwrap(), u.rows());
        let (_, du, _) = smith_normal_form(&u).unwrap();
        let (_, dv, _) = smith_normal_form(&v).unwrap();
        assert!((0..u.rows()).all(|i| du.get(i, i) == 1) && (0..v.rows()).all(|i| dv.get(i, i) == 1));
    }

    fn check_skew_form(s: &IntMat) -> SkewForm {
        let f = skew_normal_form(s).unwrap();
        let lhs = f.u.mul(s).unwrap().mul(&f.u.transpose()).unwrap();
        assert_eq!(lhs, f.block_matrix());
        assert_eq!(f.u.det().unwrap().abs(), 1);
        assert!(f.ds.iter().all(|&d| d > 0));
        assert!(f.ds.windows(2).all(|w| w[1] % w[0] == 0));
        assert_eq!(2 * f.k(), s.rank().unwrap());
        f
    }

    #[test]
    fn smith_examples() {
        let (_, d, _) = smith_normal_form(&IntMat::new(&[[0, 1], [-1, 0]])).unwrap();
        assert_eq!(d, IntMat::identity(2));
        let m = IntMat::new(&[[2, 4], [6, 8]]);
        let (_, d, _) = smith_normal_form(&m).unwrap();
        assert_eq!(d, IntMat::new(&[[2, 0], [0, 4]]));
        check_smith(&m);
        let (_, d, _) = smith_normal_form(&IntMat::zeros(3, 3)).unwrap();
        assert!(d.is_zero());
    }

    #[test]
    fn skew_examples() {
        let f = check_skew_form(&IntMat::new(&[[0, 1], [-1, 0]]));
        assert_eq!((f.ds.clone(), f.corank), (vec![1], 0));
        let f = check_skew_form(&IntMat::new(&[[0, 2, 0], [-2, 0, 0], [0, 0, 0]]));
        assert_eq!((f.ds.clone(), f.corank), (vec![2], 1));
        let f = check_skew_form(&IntMat::new(&[[0, 1, 1], [-1, 0, 1], [-1, -1, 0]]));
        assert_eq!((f.ds.clone(), f.corank), (vec![1], 1));
        assert_eq!(skew_normal_form(&IntMat::new(&[[0, 1], [1, 0]])), Err(LatticeError::NotSkew(0, 1)));
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_int(&IntMat::new(&[[0, 1], [-1, 0]])).unwrap().is_empty());
        assert_eq!(kernel_int(&IntMat::zeros(2, 2)).unwrap(), vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(kernel_int(&IntMat::new(&[[0, 2, 0], [-2, 0, 0], [0, 0, 0]])).unwrap(), vec![vec![0, 0, 1]]);
        // saturation: 2a + 4b = 0 gives (2,-1), not (4,-2)
        assert_eq!(kernel_int(&IntMat::new(&[[2, 4]])).unwrap(), vec![vec![2, -1]]);
    }

    #[test]
    fn admissibility_examples() {
        let a = is_admissible(&IntMat::new(&[[0, 1], [-1, 0]]), &[], 3).unwrap();
        assert!(a.admissible);
        assert_eq!(a.nonzero_minors, 1);
        let a = is_admissible(&IntMat::new(&[[0, 2], [-2, 0]]), &[], 2).unwrap();
        assert_eq!(a.offense, Some(Offense::Minor { indices: vec![0, 1], value: 4 }));
        assert!(is_admissible(&IntMat::new(&[[0, -1], [1, 0]]), &[1], 3).unwrap().admissible);
        let a = is_admissible(&IntMat::new(&[[0, -1], [1, 0]]), &[3], 3).unwrap();
        assert_eq!(a.offense, Some(Offense::Exponent { index: 0, value: 3 }));
        assert_eq!(is_admissible(&IntMat::zeros(15, 15), &[], 3), Err(LatticeError::SizeLimit(15)));
    }

    #[test]
    fn unimodular_inverse() {
        let m = IntMat::new(&[[2, 1, 0], [1, 1, 0], [3, -4, 1]]);
        let inv = m.inverse_unimodular().unwrap().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), IntMat::identity(3));
        assert_eq!(IntMat::new(&[[2, 0], [0, 1]]).inverse_unimodular().unwrap(), None);
    }

    #[test]
    fn odd_minors_vanish() {
        let s = IntMat::new(&[[0, 1, -2], [-1, 0, 3], [2, -3, 0]]);
        assert_eq!(s.det().unwrap(), 0);
        assert_eq!(s.select(&[0], &[0]).det().unwrap(), 0);
    }

    fn int_mat(max: usize) -> impl Strategy<Value = IntMat> {
        (1..=max, 1..=max).prop_flat_map(|(r, c)| {
            prop::collection::vec(-9i64..=9, r * c).prop_map(move |d| IntMat { rows: r, cols: c, data: d })
        })
    }

    fn skew_mat(max: usize) -> impl Strategy<Value = IntMat> {
        (1..=max).prop_flat_map(|n| {
            prop::collection::vec(-9i64..=9, n * (n - 1) / 2).prop_map(move |v| {
                let mut m = IntMat::zeros(n, n);
                let mut it = v.into_iter();
                for i in 0..n {
                    for j in i + 1..n {
                        let x = it.next().unwrap();
                        m.set(i, j, x);
                        m.set(j, i, -x);
                    }
                }
                m
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn smith_postconditions(m in int_mat(6)) {
            check_smith(&m);
        }

        #[test]
        fn skew_postconditions(s in skew_mat(6)) {
            let f = check_skew_form(&s);
            let (_, d, _) = smith_normal_form(&s).unwrap();
            let mut pairs: Vec<i64> = f.ds.iter().flat_map(|&x| [x, x]).collect();
            pairs.resize(s.rows, 0);
            let diag: Vec<i64> = (0..s.rows).map(|i| d.get(i, i)).collect();
            prop_assert_eq!(pairs, diag);
            if f.corank == 0 {
                let prod: i128 = f.ds.iter().map(|&x| (x as i128).pow(2)).product();
                prop_assert_eq!(prod, s.det().unwrap());
            }
        }

        #[test]
        fn kernel_is_saturated(m in int_mat(5)) {
            let k = kernel_int(&m).unwrap();
            for v in &k {
                prop_assert!(m.mul_vec(v).unwrap().iter().all(|&x| x == 0));
            }
            prop_assert_eq!(k.len(), m.cols - m.rank().unwrap());
            // saturated iff the basis extends to a unimodular matrix: gcd of maximal minors is 1
            if !k.is_empty() {
                let b = IntMat::from_rows(&k).unwrap();
                let (_, d, _) = smith_normal_form(&b).unwrap();
                prop_assert!((0..k.len()).all(|i| d.get(i, i) == 1));
            }
        }
    }
}
