//! Line-oriented `key = value` job files.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::engine::{parse_element, AlgebraPresentation, Element};
use crate::exactnum::{CycloNum, RootData};
use crate::models::{build_borel_sl2, build_twisted, build_weyl, Character, Context, Model};
use crate::zlattice::IntMat;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecError {
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("missing field {0}")]
    Missing(String),
    #[error("field {field}: {msg}")]
    Field { field: String, msg: String },
}

fn field(f: &str, msg: impl Into<String>) -> SpecError {
    SpecError::Field { field: f.to_string(), msg: msg.into() }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraSpec {
    Twisted { s: IntMat, n_poly: usize },
    Weyl { s: IntMat, exponents: Vec<i64> },
    BorelSl2,
    /// Generators in order, the first n_poly polynomial; δ rules keyed by generator names.
    Custom { names: Vec<String>, s: IntMat, n_poly: usize, delta: Vec<(String, String, String)> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JobSpec {
    pub algebra: AlgebraSpec,
    pub l: u32,
    pub primitive_index: u32,
    /// Generator name → value text, and generator name → witness text.
    pub values: BTreeMap<String, String>,
    pub witnesses: BTreeMap<String, String>,
}

fn parse_int(f: &str, v: &str) -> Result<i64, SpecError> {
    v.trim().parse().map_err(|_| field(f, format!("expected an integer, got {v:?}")))
}

fn parse_list(f: &str, v: &str) -> Result<Vec<i64>, SpecError> {
    let v = v.trim();
    let inner = v.strip_prefix('[').and_then(|x| x.strip_suffix(']')).ok_or_else(|| field(f, "expected [a, b, ...]"))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner.split(',').map(|x| parse_int(f, x)).collect()
}

/// Rows as `[[0, 1], [-1, 0]]`.
fn parse_matrix(f: &str, v: &str) -> Result<IntMat, SpecError> {
    let v = v.trim();
    let inner = v.strip_prefix('[').and_then(|x| x.strip_suffix(']')).ok_or_else(|| field(f, "expected [[..], ..]"))?;
    let mut rows = Vec::new();
    let mut rest = inner.trim();
    while !rest.is_empty() {
        let start = rest.find('[').ok_or_else(|| field(f, "expected a row"))?;
        let end = rest.find(']').ok_or_else(|| field(f, "unterminated row"))?;
        rows.push(parse_list(f, &rest[start..=end])?);
        rest = rest[end + 1..].trim_start_matches([',', ' ']).trim();
    }
    let s = IntMat::from_rows(&rows).map_err(|e| field(f, e.to_string()))?;
    s.check_skew().map_err(|e| field(f, e.to_string()))?;
    Ok(s)
}

fn parse_rational(f: &str, v: &str) -> Result<BigRational, SpecError> {
    let v = v.trim();
    let bad = || field(f, format!("expected a rational, got {v:?}"));
    match v.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d == BigInt::from(0) {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(v.parse().map_err(|_| bad())?)),
    }
}

/// A rational, `eps`, `eps^k`, an optionally signed multiple `c*eps^k`, or a
/// coefficient vector `[c0, c1, ...]` in powers of ε.
pub fn parse_cyclo(f: &str, v: &str, root: &RootData) -> Result<CycloNum, SpecError> {
    let v = v.trim();
    if let Some(inner) = v.strip_prefix('[').and_then(|x| x.strip_suffix(']')) {
        let cs: Vec<BigRational> = inner.split(',').map(|c| parse_rational(f, c)).collect::<Result<_, _>>()?;
        return Ok(root.from_coeffs(&cs));
    }
    if let Some(pos) = v.find("eps") {
        let (coef, power) = (v[..pos].trim().trim_end_matches('*').trim(), &v[pos + 3..]);
        let k = match power.trim().strip_prefix('^') {
            Some(k) => parse_int(f, k)?,
            None if power.trim().is_empty() => 1,
            None => return Err(field(f, format!("cannot read {v:?}"))),
        };
        let c = match coef {
            "" | "+" => BigRational::from_integer(1.into()),
            "-" => BigRational::from_integer((-1).into()),
            c => parse_rational(f, c)?,
        };
        return Ok(root.eps_pow(k).scale(&c));
    }
    Ok(root.rational(parse_rational(f, v)?))
}

impl JobSpec {
    pub fn parse(text: &str) -> Result<JobSpec, SpecError> {
        let mut kv: BTreeMap<String, (usize, String)> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| SpecError::Line { line: i + 1, msg: "expected key = value".into() })?;
            let k = k.trim().to_string();
            if kv.insert(k.clone(), (i + 1, v.trim().to_string())).is_some() {
                return Err(SpecError::Line { line: i + 1, msg: format!("duplicate key {k}") });
            }
        }
        let get = |k: &str| kv.get(k).map(|(_, v)| v.as_str());
        let need = |k: &str| get(k).ok_or_else(|| SpecError::Missing(k.to_string()));

        let kind = need("algebra.kind")?;
        let algebra = match kind {
            "twisted" => {
                let s = parse_matrix("algebra.S", need("algebra.S")?)?;
                let n_poly = match get("algebra.n_poly") {
                    Some(v) => parse_int("algebra.n_poly", v)?,
                    None => s.rows() as i64,
                };
                if n_poly < 0 || n_poly as usize > s.rows() {
                    return Err(field("algebra.n_poly", format!("must lie in 0..={}", s.rows())));
                }
                AlgebraSpec::Twisted { s, n_poly: n_poly as usize }
            }
            "weyl" => {
                let s = parse_matrix("algebra.S", need("algebra.S")?)?;
                let exponents = parse_list("algebra.exponents", need("algebra.exponents")?)?;
                if exponents.len() != s.rows() {
                    return Err(field("algebra.exponents", format!("{} exponents for n = {}", exponents.len(), s.rows())));
                }
                AlgebraSpec::Weyl { s, exponents }
            }
            "borel-sl2" => AlgebraSpec::BorelSl2,
            "custom" => {
                let names: Vec<String> =
                    need("algebra.generators")?.split(',').map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect();
                let s = parse_matrix("algebra.S", need("algebra.S")?)?;
                if s.rows() != names.len() {
                    return Err(field("algebra.S", format!("{} rows for {} generators", s.rows(), names.len())));
                }
                let n_poly = match get("algebra.n_poly") {
                    Some(v) => parse_int("algebra.n_poly", v)? as usize,
                    None => names.len(),
                };
                let mut delta = Vec::new();
                for (k, (_, v)) in kv.range("algebra.delta.".to_string()..) {
                    let Some(rest) = k.strip_prefix("algebra.delta.") else { break };
                    let (a, b) = rest.split_once('.').ok_or_else(|| field(k, "expected algebra.delta.<gen>.<gen>"))?;
                    delta.push((a.to_string(), b.to_string(), v.clone()));
                }
                AlgebraSpec::Custom { names, s, n_poly, delta }
            }
            other => return Err(field("algebra.kind", format!("unknown kind {other:?}"))),
        };
        let l = parse_int("root.l", need("root.l")?)?;
        if l < 2 {
            return Err(field("root.l", "must be at least 2"));
        }
        let primitive_index = match get("root.primitive_index") {
            Some(v) => parse_int("root.primitive_index", v)?,
            None => 1,
        };
        if primitive_index < 1 {
            return Err(field("root.primitive_index", "must be positive"));
        }
        let mut values = BTreeMap::new();
        let mut witnesses = BTreeMap::new();
        for (k, (line, v)) in &kv {
            if let Some(g) = k.strip_prefix("character.witness.") {
                witnesses.insert(g.to_string(), v.clone());
            } else if let Some(g) = k.strip_prefix("character.") {
                values.insert(g.to_string(), v.clone());
            } else if !(k.starts_with("algebra.") || k.starts_with("root.")) {
                return Err(SpecError::Line { line: *line, msg: format!("unknown key {k}") });
            }
        }
        Ok(JobSpec { algebra, l: l as u32, primitive_index: primitive_index as u32, values, witnesses })
    }

    pub fn root(&self) -> Result<RootData, SpecError> {
        RootData::with_primitive_index(self.l, self.primitive_index).map_err(|e| field("root.primitive_index", e.to_string()))
    }

    pub fn model(&self) -> Result<Model, SpecError> {
        let bad = |f: &'static str| move |e: crate::models::ModelError| field(f, e.to_string());
        Ok(match &self.algebra {
            AlgebraSpec::Twisted { s, n_poly } => Model::Twisted(build_twisted(s, *n_poly).map_err(bad("algebra.S"))?),
            AlgebraSpec::Weyl { s, exponents } => Model::Weyl(build_weyl(s, exponents).map_err(bad("algebra.S"))?),
            AlgebraSpec::BorelSl2 => Model::Twisted(build_borel_sl2()),
            AlgebraSpec::Custom { names, s, n_poly, delta } => {
                let n = names.len();
                let mut rules: BTreeMap<(usize, usize), Element> = BTreeMap::new();
                for (a, b, text) in delta {
                    let f = format!("algebra.delta.{a}.{b}");
                    let pos = |g: &str| names.iter().position(|x| x == g).ok_or_else(|| field(&f, format!("unknown generator {g}")));
                    let e = parse_element(text, names).map_err(|e| field(&f, e.to_string()))?;
                    rules.insert((pos(a)?, pos(b)?), e);
                }
                let invertible = (0..n).map(|i| i >= *n_poly).collect();
                let p = AlgebraPresentation::new(names.clone(), invertible, s.clone(), vec![0; n], rules)
                    .map_err(|e| field("algebra", e.to_string()))?;
                Model::Custom(p)
            }
        })
    }

    pub fn context(&self) -> Result<Context, SpecError> {
        Context::new(self.model()?, self.root()?).map_err(|e| field("algebra", e.to_string()))
    }

    /// The character given in the file, if any. Values default to the l-th
    /// power of the witness.
    pub fn character(&self, ctx: &Context) -> Result<Option<Character>, SpecError> {
        if self.values.is_empty() && self.witnesses.is_empty() {
            return Ok(None);
        }
        let p = ctx.presentation();
        for g in self.values.keys().chain(self.witnesses.keys()) {
            if p.index_of(g).is_none() {
                return Err(field(&format!("character.{g}"), "unknown generator"));
            }
        }
        let mut values = Vec::new();
        let mut witnesses = Vec::new();
        for name in p.names() {
            let w = match self.witnesses.get(name) {
                Some(t) => Some(parse_cyclo(&format!("character.witness.{name}"), t, &ctx.root)?),
                None => None,
            };
            let v = match (self.values.get(name), &w) {
                (Some(t), _) => parse_cyclo(&format!("character.{name}"), t, &ctx.root)?,
                (None, Some(w)) => w.pow(ctx.l() as i64).expect("nonnegative power"),
                (None, None) => return Err(SpecError::Missing(format!("character.{name}"))),
            };
            values.push(v);
            witnesses.push(w);
        }
        let chi = Character { values, witnesses };
        chi.check(p, ctx.l()).map_err(|e| field("character", e.to_string()))?;
        Ok(Some(chi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PLANE: &str = "# quantum plane\nalgebra.kind = twisted\nalgebra.S = [[0, 1], [-1, 0]]\nalgebra.n_poly = 2\nroot.l = 3\n";

    #[test]
    fn parses_plane() {
        let j = JobSpec::parse(PLANE).unwrap();
        assert_eq!(j.algebra, AlgebraSpec::Twisted { s: IntMat::new(&[[0, 1], [-1, 0]]), n_poly: 2 });
        assert_eq!((j.l, j.primitive_index), (3, 1));
        assert!(j.character(&j.context().unwrap()).unwrap().is_none());
    }

    #[test]
    fn character_values_and_witnesses() {
        let text = format!("{PLANE}character.x1 = 0\ncharacter.witness.x2 = eps\n");
        let j = JobSpec::parse(&text).unwrap();
        let ctx = j.context().unwrap();
        let chi = j.character(&ctx).unwrap().unwrap();
        assert!(chi.values[0].is_zero());
        assert!(chi.values[1].is_one());
        let bad = format!("{PLANE}character.x1 = 0\ncharacter.x2 = 2\ncharacter.witness.x2 = 1\n");
        let j = JobSpec::parse(&bad).unwrap();
        assert!(j.character(&j.context().unwrap()).is_err());
    }

    #[test]
    fn cyclotomic_literals() {
        let r = RootData::new(5).unwrap();
        assert_eq!(parse_cyclo("f", "eps^2", &r).unwrap(), r.eps_pow(2));
        assert_eq!(parse_cyclo("f", "-3*eps", &r).unwrap(), r.eps().scale(&BigRational::from_integer((-3).into())));
        assert_eq!(parse_cyclo("f", "1/2", &r).unwrap(), r.rational(BigRational::new(1.into(), 2.into())));
        assert_eq!(parse_cyclo("f", "[0, 1]", &r).unwrap(), r.eps());
        assert!(parse_cyclo("f", "epsx", &r).is_err());
    }

    #[test]
    fn diagnostics_name_lines_and_fields() {
        assert_eq!(JobSpec::parse("algebra.kind twisted").unwrap_err(), SpecError::Line { line: 1, msg: "expected key = value".into() });
        let e = JobSpec::parse("algebra.kind = twisted\nalgebra.S = [[0, 1], [1, 0]]\nroot.l = 3").unwrap_err();
        assert!(matches!(e, SpecError::Field { ref field, .. } if field == "algebra.S"));
        assert_eq!(JobSpec::parse("algebra.kind = weyl\nroot.l = 3").unwrap_err(), SpecError::Missing("algebra.S".into()));
        let e = JobSpec::parse(&format!("{PLANE}colour = blue")).unwrap_err();
        assert!(matches!(e, SpecError::Line { line: 6, .. }));
    }

    #[test]
    fn weyl_and_custom() {
        let j = JobSpec::parse("algebra.kind = weyl\nalgebra.S = [[0]]\nalgebra.exponents = [1]\nroot.l = 3\n").unwrap();
        assert_eq!(j.context().unwrap().presentation().len(), 2);
        let c = "algebra.kind = custom\nalgebra.generators = x, y\nalgebra.S = [[0, 1], [-1, 0]]\nalgebra.delta.x.y = 1\nroot.l = 3\n";
        let j = JobSpec::parse(c).unwrap();
        let ctx = j.context().unwrap();
        assert!(!ctx.presentation().is_diagonal());
    }
}
