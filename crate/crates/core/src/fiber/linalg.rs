//! Sparse exact linear algebra over Q(ε).

use std::collections::BTreeMap;

use crate::exactnum::CycloNum;

pub type SVec = BTreeMap<usize, CycloNum>;

pub fn axpy(acc: &mut SVec, c: &CycloNum, v: &SVec) {
    if c.is_zero() {
        return;
    }
    for (&k, x) in v {
        let t = c * x;
        match acc.get_mut(&k) {
            Some(slot) => {
                *slot = &*slot + &t;
                if slot.is_zero() {
                    acc.remove(&k);
                }
            }
            None => {
                acc.insert(k, t);
            }
        }
    }
}

pub fn scaled(v: &SVec, c: &CycloNum) -> SVec {
    if c.is_zero() {
        return SVec::new();
    }
    v.iter().map(|(&k, x)| (k, x * c)).collect()
}

pub fn unit(k: usize, one: &CycloNum) -> SVec {
    SVec::from([(k, one.clone())])
}

/// Reduced row echelon form built incrementally.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    /// pivot column → row with coefficient 1 there and 0 on every other pivot column.
    rows: BTreeMap<usize, SVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &usize> {
        self.rows.keys()
    }

    pub fn is_pivot(&self, c: usize) -> bool {
        self.rows.contains_key(&c)
    }

    pub fn row(&self, pivot: usize) -> Option<&SVec> {
        self.rows.get(&pivot)
    }

    /// Remainder of `v` modulo the row space, supported on non-pivot columns.
    pub fn reduce(&self, v: &SVec) -> SVec {
        let mut r = v.clone();
        let hits: Vec<usize> = r.keys().copied().filter(|k| self.rows.contains_key(k)).collect();
        for p in hits {
            if let Some(c) = r.get(&p).cloned() {
                axpy(&mut r, &-c, &self.rows[&p]);
            }
        }
        r
    }

    /// Adds a row; returns whether it enlarged the span.
    pub fn insert(&mut self, v: &SVec) -> bool {
        let r = self.reduce(v);
        let Some((&p, c)) = r.iter().next() else { return false };
        let r = scaled(&r, &c.inv().expect("nonzero pivot"));
        for row in self.rows.values_mut() {
            if let Some(c) = row.get(&p).cloned() {
                axpy(row, &-c, &r);
            }
        }
        self.rows.insert(p, r);
        true
    }

    /// Basis of {x : row · x = 0 for all rows} over columns `0..n`.
    pub fn null_space(&self, n: usize) -> Vec<SVec> {
        let one = match self.rows.values().next().and_then(|r| r.values().next()) {
            Some(x) => x.root().one(),
            None => return Vec::new(),
        };
        (0..n)
            .filter(|c| !self.rows.contains_key(c))
            .map(|f| {
                let mut v = unit(f, &one);
                for (&p, row) in &self.rows {
                    if let Some(x) = row.get(&f) {
                        v.insert(p, -x.clone());
                    }
                }
                v
            })
            .collect()
    }
}

pub fn rank(rows: &[SVec]) -> usize {
    let mut e = Echelon::new();
    rows.iter().filter(|r| e.insert(r)).count()
}

/// Right kernel of the matrix with the given rows and `n` columns.
pub fn kernel(rows: &[SVec], n: usize, one: &CycloNum) -> Vec<SVec> {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    if e.rank() == 0 {
        return (0..n).map(|k| unit(k, one)).collect();
    }
    e.null_space(n)
}

pub fn dot(a: &SVec, b: &SVec) -> Option<CycloNum> {
    let mut acc: Option<CycloNum> = None;
    for (k, x) in a {
        if let Some(y) = b.get(k) {
            let t = x * y;
            acc = Some(match acc {
                Some(s) => &s + &t,
                None => t,
            });
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::RootData;

    #[test]
    fn kernel_and_rank() {
        let r = RootData::new(3).unwrap();
        let e = r.eps();
        let rows = vec![
            SVec::from([(0, r.one()), (1, e.clone())]),
            SVec::from([(0, e.clone()), (1, &e * &e)]),
            SVec::from([(2, r.int(2))]),
        ];
        assert_eq!(rank(&rows), 2);
        let k = kernel(&rows, 3, &r.one());
        assert_eq!(k.len(), 1);
        for row in &rows {
            assert!(dot(row, &k[0]).map_or(true, |x| x.is_zero()));
        }
        assert_eq!(kernel(&[], 2, &r.one()).len(), 2);
    }
}
