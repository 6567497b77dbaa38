//! Exact scalars: rationals, Laurent polynomials in q, and cyclotomic numbers.
//!
//! Division by (q − ε) is never performed directly. A commutator that vanishes
//! at ε has rational coefficients, so it is divisible by the whole cyclotomic
//! polynomial Φ_l; dividing by Φ_l and multiplying by Φ_l'(ε) afterwards gives
//! the same value at ε while staying inside Q[q, q^{-1}].

mod cyclo;
mod laurent;
pub(crate) mod qpoly;

use thiserror::Error;

pub use cyclo::{cyclotomic_poly, CycloNum, RootData};
pub use laurent::QLaurent;
pub use num_rational::BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("root of unity order must be at least 2, got {0}")]
    BadOrder(u32),
    #[error("index {j} is not coprime to l = {l}")]
    NotPrimitive { l: u32, j: u32 },
    #[error("Laurent polynomial is not divisible by the cyclotomic polynomial of order {l}")]
    NotDivisible { l: u32 },
}

pub fn cyclotomic_build(l: u32) -> Result<RootData, ExactError> {
    RootData::new(l)
}

pub fn eval_at_root(f: &QLaurent, r: &RootData) -> CycloNum {
    f.eval_at_root(r)
}

pub fn divide_by_cyclotomic(f: &QLaurent, r: &RootData) -> Result<QLaurent, ExactError> {
    f.divide_by_cyclotomic(r)
}

/// Q-rational from an integer pair.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(terms: &[(i64, i64)]) -> QLaurent {
        QLaurent::from_terms(terms.iter().map(|&(k, c)| (k, rat(c, 1))))
    }

    #[test]
    fn eval_examples() {
        let r = cyclotomic_build(3).unwrap();
        // q² ↦ −1 − ε
        let e2 = eval_at_root(&QLaurent::q_pow(2), &r);
        assert_eq!(e2, &(-&r.eps()) - &r.one());
        assert_eq!(eval_at_root(&QLaurent::q_pow(-1), &r), r.eps_pow(2));
        assert!(eval_at_root(&poly(&[(3, 1), (0, -1)]), &r).is_zero());
    }

    #[test]
    fn division_examples() {
        let r = cyclotomic_build(3).unwrap();
        assert_eq!(divide_by_cyclotomic(&poly(&[(3, 1), (0, -1)]), &r).unwrap(), poly(&[(1, 1), (0, -1)]));
        // q^6 − 1 = (q² + q + 1)(q − 1)(q³ + 1)
        let expect = poly(&[(4, 1), (3, -1), (1, 1), (0, -1)]);
        let phi = poly(&[(2, 1), (1, 1), (0, 1)]);
        assert_eq!(&expect * &phi, poly(&[(6, 1), (0, -1)]));
        assert_eq!(divide_by_cyclotomic(&poly(&[(6, 1), (0, -1)]), &r).unwrap(), expect);
        assert_eq!(
            divide_by_cyclotomic(&poly(&[(1, 1), (0, -1)]), &r),
            Err(ExactError::NotDivisible { l: 3 })
        );
    }

    #[test]
    fn negative_degrees_divide() {
        let r = cyclotomic_build(5).unwrap();
        // q^{-5} − 1 = −q^{-5}(q^5 − 1)
        let f = poly(&[(-5, 1), (0, -1)]);
        let g = divide_by_cyclotomic(&f, &r).unwrap();
        let phi = QLaurent::from_terms((0..5).map(|k| (k, rat(1, 1))));
        assert_eq!(&g * &phi, f);
    }

    fn laurent_strategy() -> impl Strategy<Value = QLaurent> {
        prop::collection::vec((-6i64..7, -4i64..5), 0..5).prop_map(|t| poly(&t))
    }

    proptest! {
        #[test]
        fn eval_is_multiplicative(f in laurent_strategy(), g in laurent_strategy(), li in 0usize..4) {
            let l = [2u32, 3, 5, 7][li];
            let r = cyclotomic_build(l).unwrap();
            let lhs = eval_at_root(&(&f * &g), &r);
            let rhs = &eval_at_root(&f, &r) * &eval_at_root(&g, &r);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn division_undoes_multiplication(f in laurent_strategy(), li in 0usize..4) {
            let l = [2u32, 3, 5, 7][li];
            let r = cyclotomic_build(l).unwrap();
            let phi = QLaurent::from_terms(r.phi().iter().enumerate().map(|(k, c)| (k as i64, BigRational::from_integer(c.clone()))));
            prop_assert_eq!(divide_by_cyclotomic(&(&f * &phi), &r).unwrap(), f);
        }

        #[test]
        fn ring_axioms(f in laurent_strategy(), g in laurent_strategy(), h in laurent_strategy()) {
            prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
            prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        }

        #[test]
        fn galois_permutes_evaluations(f in laurent_strategy(), j in 1u32..5) {
            let r = cyclotomic_build(5).unwrap();
            let rj = r.reindexed(j).unwrap();
            // ε_j = ε_1^j, so eval_j(f) is the image of eval_1(f) under q ↦ q^j
            prop_assert_eq!(eval_at_root(&f, &rj).rebase(&r), eval_at_root(&f, &r).galois(j));
        }
    }

    #[test]
    fn lift_inverts_evaluation() {
        for j in [1u32, 2, 3, 4] {
            let r = RootData::with_primitive_index(5, j).unwrap();
            let x = r.from_coeffs(&[rat(1, 2), rat(0, 1), rat(-3, 1), rat(2, 1)]);
            assert_eq!(eval_at_root(&QLaurent::lift(&x), &r), x);
        }
    }

    #[test]
    fn inverses_for_random_elements() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for l in [2u32, 3, 5, 7] {
            let r = cyclotomic_build(l).unwrap();
            let mut done = 0;
            while done < 200 {
                let coeffs: Vec<BigRational> = (0..r.degree()).map(|_| rat(rng.gen_range(-9..10), rng.gen_range(1..4))).collect();
                let x = r.from_coeffs(&coeffs);
                if x.is_zero() {
                    continue;
                }
                let y = x.inv().unwrap();
                assert!((&x * &y).is_one());
                done += 1;
            }
        }
    }
}
