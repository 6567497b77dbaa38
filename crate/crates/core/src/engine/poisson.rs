use super::element::{Element, RootElement};
use super::rewrite::Rewriter;
use super::EngineError;
use crate::exactnum::RootData;

/// True when u commutes with every generator after specializing q to ε.
pub fn is_central_at_root(rw: &Rewriter, u: &Element, r: &RootData) -> bool {
    let p = rw.presentation();
    (0..p.len()).all(|g| {
        let c = rw.commutator(u, &p.gen(g));
        let vanishes = c.terms().all(|(_, x)| x.eval_at_root(r).is_zero());
        vanishes
    })
}

/// The bracket induced by (uv − vu)/(q − ε) at q = ε.
pub fn poisson_bracket(rw: &Rewriter, u: &Element, v: &Element, r: &RootData) -> Result<RootElement, EngineError> {
    let c = rw.commutator(u, v);
    let dphi = r.phi_prime_at_eps();
    let mut out = RootElement::zero();
    for (m, x) in c.terms() {
        let h = x.divide_by_cyclotomic(r).map_err(|_| EngineError::NotCentral(format!("coefficient {x} of the commutator")))?;
        out.add_term(m.clone(), &(&h.eval_at_root(r) * &dphi));
    }
    Ok(out)
}
