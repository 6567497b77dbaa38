use super::element::Element;
use super::presentation::AlgebraPresentation;
use super::rewrite::Rewriter;
use super::EngineError;
use crate::exactnum::QLaurent;

const TERM_LIMIT: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Validation {
    pub skew_pairs: usize,
    pub nilpotent_pairs: usize,
    pub associativity_probes: usize,
    pub max_nilpotency_order: usize,
}

fn fail(check: &'static str, detail: String) -> EngineError {
    EngineError::ValidationFailed { check, detail }
}

pub fn validate(p: &AlgebraPresentation, bound: usize) -> Result<Validation, EngineError> {
    let rw = Rewriter::new(p);
    let n = p.len();
    let names = p.names();
    let mut report = Validation { skew_pairs: 0, nilpotent_pairs: 0, associativity_probes: 0, max_nilpotency_order: 0 };

    for i in (0..n).filter(|&i| p.has_delta(i)) {
        for j in i + 1..n {
            let mut u = p.gen(j);
            let mut steps = 0;
            while !u.is_zero() {
                if steps == bound || u.len() > TERM_LIMIT {
                    return Err(fail(
                        "nilpotency",
                        format!("delta_{}^k({}) is nonzero for k = {}", names[i], names[j], steps),
                    ));
                }
                u = rw.derive_elem(i, &u);
                steps += 1;
            }
            report.nilpotent_pairs += 1;
            report.max_nilpotency_order = report.max_nilpotency_order.max(steps);
        }
    }

    for i in (0..n).filter(|&i| p.has_delta(i)) {
        for j in i + 1..n {
            let d = p.delta(i, j).cloned().unwrap_or_default();
            let lhs = rw.tau(i, &d);
            let rhs = d.scale(&QLaurent::q_pow(p.exps()[i] + p.s(i, j)));
            if lhs != rhs {
                return Err(fail("q-skew", format!("tau delta != q^s delta tau on ({}, {})", names[i], names[j])));
            }
            report.skew_pairs += 1;
        }
    }

    for i in 0..n {
        if (p.exps()[i] == 0) == p.has_delta(i) {
            return Err(fail(
                "exponents",
                format!("generator {} has exponent {} but delta is {}", names[i], p.exps()[i], if p.has_delta(i) { "nonzero" } else { "zero" }),
            ));
        }
    }

    if !p.is_diagonal() {
        let gens: Vec<Element> = (0..n).map(|g| p.gen(g)).collect();
        for a in 0..n {
            for b in 0..n {
                let ab = rw.mul(&gens[a], &gens[b]);
                for c in 0..n {
                    if a <= b && b <= c {
                        continue;
                    }
                    let left = rw.mul(&ab, &gens[c]);
                    let right = rw.mul(&gens[a], &rw.mul(&gens[b], &gens[c]));
                    if left != right {
                        return Err(fail("associativity", format!("({0}{1}){2} != {0}({1}{2})", names[a], names[b], names[c])));
                    }
                    report.associativity_probes += 1;
                }
            }
        }
    }
    Ok(report)
}
