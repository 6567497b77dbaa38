//! Quantum torus structure: paired generators h_i, g_i with h_i g_i = q^{d_i} g_i h_i,
//! central z_j, and the split of the z's into those central in the ambient
//! algebra and those that are not.

use num_integer::Integer;
use thiserror::Error;

use crate::zlattice::{kernel_int, skew_normal_form, smith_normal_form, IntMat, LatticeError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TorusError {
    #[error("block invariant {d} shares a factor with l = {l}")]
    InadmissibleBlock { d: i64, l: u32 },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("shape mismatch: {0}")]
    Shape(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusStructure {
    pub k: usize,
    pub p: usize,
    /// Number of z's not central in the ambient algebra.
    pub t: usize,
    pub ds: Vec<i64>,
    /// Rows h_1, g_1, …, h_k, g_k, z_1, …, z_p as exponent vectors over the survivors.
    pub basis: IntMat,
    /// Smith invariants of the ambient exponents on z_1, …, z_t.
    pub extension_divisors: Vec<i64>,
}

impl TorusStructure {
    pub fn m(&self) -> usize {
        self.basis.rows()
    }

    pub fn h(&self, i: usize) -> &[i64] {
        self.basis.row(2 * i)
    }

    pub fn g(&self, i: usize) -> &[i64] {
        self.basis.row(2 * i + 1)
    }

    pub fn z(&self, j: usize) -> &[i64] {
        self.basis.row(2 * self.k + j)
    }

    /// True when every extension divisor is prime to l, so that only full l-th
    /// powers of the non-extending z's are central.
    pub fn divisors_prime_to(&self, l: u32) -> bool {
        self.extension_divisors.iter().all(|d| d.gcd(&(l as i64)) == 1)
    }
}

/// `s_jj`: skew exponents among survivors. `full_rows`: exponents of every ambient
/// generator (survivors and killed) against each survivor.
pub fn torus_structure(s_jj: &IntMat, full_rows: &IntMat, l: u32) -> Result<TorusStructure, TorusError> {
    let m = s_jj.rows();
    if full_rows.cols() != m {
        return Err(TorusError::Shape(format!("{} ambient columns for {m} survivors", full_rows.cols())));
    }
    let sf = skew_normal_form(s_jj)?;
    if let Some(&d) = sf.ds.iter().find(|&&d| d.gcd(&(l as i64)) != 1) {
        return Err(TorusError::InadmissibleBlock { d, l });
    }
    let k = sf.k();
    let p = sf.corank;
    let zrows: Vec<usize> = (2 * k..m).collect();
    let all: Vec<usize> = (0..m).collect();
    let zl = sf.u.select(&zrows, &all);
    // coefficients of the ambient exponents on the z-lattice
    let coeff = full_rows.mul(&zl.transpose())?;
    let (_, d, v) = smith_normal_form(&coeff)?;
    let t = (0..d.rows().min(d.cols())).filter(|&i| d.get(i, i) != 0).count();
    let extension_divisors = (0..t).map(|i| d.get(i, i)).collect();
    let new_z = v.transpose().mul(&zl)?;
    let mut basis = IntMat::zeros(m, m);
    for i in 0..m {
        let src = if i < 2 * k { sf.u.row(i) } else { new_z.row(i - 2 * k) };
        for (j, &x) in src.iter().enumerate() {
            basis.set(i, j, x);
        }
    }
    Ok(TorusStructure { k, p, t, ds: sf.ds, basis, extension_divisors })
}

/// Sublattice of the z-lattice central in the ambient algebra.
pub fn extending_lattice(full_rows: &IntMat) -> Result<Vec<Vec<i64>>, TorusError> {
    Ok(kernel_int(full_rows)?)
}

/// Exponent vectors (over survivors) generating the ε-center and the l-center of the torus.
pub fn center_generators_eps(ts: &TorusStructure, l: u32) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let l = l as i64;
    let scaled = |row: &[i64]| row.iter().map(|x| x * l).collect::<Vec<i64>>();
    let mut eps = Vec::new();
    let mut lc = Vec::new();
    for i in 0..2 * ts.k {
        eps.push(scaled(ts.basis.row(i)));
        lc.push(scaled(ts.basis.row(i)));
    }
    for j in 0..ts.p {
        let z = ts.z(j);
        eps.push(if j < ts.t { scaled(z) } else { z.to_vec() });
        lc.push(scaled(z));
    }
    (eps, lc)
}
