//! Batch front end: job files in, keyed report documents out.

mod jobspec;

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

pub use jobspec::{parse_cyclo, AlgebraSpec, JobSpec, SpecError};

use crate::engine::validate;
use crate::exactnum::{CycloNum, RootData};
use crate::fiber::eps_census;
use crate::models::{kappa, Character, Context};
use crate::stabilizer::{
    linearized_stabilizer, main_theorem_check, rank_and_checks, stabilizer_from_stratum, Checks, FDLie, Level,
    PoissonTable, Report, Verdict,
};
use crate::strata::{enumerate_strata, locate, Location, Stratum};
use crate::zlattice::is_admissible;

const NILPOTENCY_BOUND: usize = 64;
const RANDOM_EXTRAS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Command {
    Check,
    Center,
    Strata,
    Locate,
    Count,
    Oracle,
    Stabilizer,
    Verify,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Check,
        Command::Center,
        Command::Strata,
        Command::Locate,
        Command::Count,
        Command::Oracle,
        Command::Stabilizer,
        Command::Verify,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Center => "center",
            Command::Strata => "strata",
            Command::Locate => "locate",
            Command::Count => "count",
            Command::Oracle => "oracle",
            Command::Stabilizer => "stabilizer",
            Command::Verify => "verify",
        }
    }

    pub fn from_name(s: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == s)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Options {
    pub jobs: usize,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Invalid,
    Mismatch,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Invalid => 2,
            Status::Mismatch => 3,
        }
    }
}

/// Report keys in sorted order; the sort is the stable key order.
pub type Document = BTreeMap<String, Value>;

#[derive(Debug, Clone)]
pub struct Outcome {
    pub document: Document,
    pub status: Status,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RunError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("{0}")]
    Invalid(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Spec(_) => 1,
            RunError::Invalid(_) => 2,
        }
    }

    pub fn document(&self, command: &str) -> Document {
        let kind = match self {
            RunError::Spec(_) => "parse",
            RunError::Invalid(_) => "validation",
        };
        BTreeMap::from([
            ("command".to_string(), json!(command)),
            ("error.kind".to_string(), json!(kind)),
            ("error.message".to_string(), json!(self.to_string())),
        ])
    }
}

fn invalid(e: impl ToString) -> RunError {
    RunError::Invalid(e.to_string())
}

/// Exact value as its coefficient vector, integers as numbers and other rationals as strings.
pub fn cyclo_value(c: &CycloNum) -> Value {
    Value::Array(c.to_coeff_strings().into_iter().map(|s| s.parse::<i64>().map_or(json!(s), |n| json!(n))).collect())
}

fn character_value(chi: &Character) -> Value {
    Value::Array(chi.values.iter().map(cyclo_value).collect())
}

fn witness_value(chi: &Character) -> Value {
    Value::Array(chi.witnesses.iter().map(|w| w.as_ref().map_or(Value::Null, cyclo_value)).collect())
}

fn character_key(chi: &Character) -> String {
    json!({ "character": character_value(chi), "witness": witness_value(chi) }).to_string()
}

/// The printed constants lε^{l−1} and l²ε^{−1}.
fn printed_constants(root: &RootData) -> (CycloNum, CycloNum) {
    let l = root.l() as i64;
    (root.int(l) * root.eps_pow(l - 1), root.int(l * l) * root.eps_pow(-1))
}

struct Session {
    ctx: Context,
    table: PoissonTable,
    strata: Vec<Stratum>,
}

impl Session {
    /// Strata are skipped for `check`, which must also report on inadmissible input.
    fn new(spec: &JobSpec, with_strata: bool) -> Result<Session, RunError> {
        let ctx = spec.context()?;
        let table = PoissonTable::from_context(&ctx).map_err(invalid)?;
        let strata = if with_strata { enumerate_strata(&ctx).map_err(invalid)? } else { Vec::new() };
        Ok(Session { ctx, table, strata })
    }

    fn character(&self, spec: &JobSpec) -> Result<Character, RunError> {
        spec.character(&self.ctx)?.ok_or_else(|| SpecError::Missing("character".into()).into())
    }
}

fn header(cmd: Command, spec: &JobSpec, ctx: &Context) -> Document {
    let mut d = Document::new();
    d.insert("command".into(), json!(cmd.name()));
    d.insert("algebra.kind".into(), json!(ctx.model.kind()));
    d.insert("algebra.generators".into(), json!(ctx.presentation().names()));
    d.insert("algebra.S".into(), json!(ctx.presentation().skew().to_rows()));
    d.insert("root.l".into(), json!(spec.l));
    d.insert("root.primitive_index".into(), json!(spec.primitive_index));
    d
}

pub fn run(cmd: Command, spec: &JobSpec, opts: &Options) -> Result<Outcome, RunError> {
    let session = Session::new(spec, cmd != Command::Check)?;
    let mut doc = header(cmd, spec, &session.ctx);
    let status = match cmd {
        Command::Check => check(&session, &mut doc)?,
        Command::Center => center(&session, &mut doc),
        Command::Strata => strata(&session, &mut doc),
        Command::Locate => {
            let chi = session.character(spec)?;
            locate_into(&session, &chi, &mut doc)?;
            Status::Pass
        }
        Command::Count => count(&session, &session.character(spec)?, &mut doc)?,
        Command::Oracle => {
            let chi = session.character(spec)?;
            doc.insert("character".into(), character_value(&chi));
            doc.insert("witness".into(), witness_value(&chi));
            let c = eps_census(&session.ctx, &chi).map_err(invalid)?;
            doc.insert("result.oracle".into(), json!(c.count));
            doc.insert("result.oracle_dim".into(), json!(c.dim));
            doc.insert("result.oracle_radical_dim".into(), json!(c.rad_dim));
            doc.insert("result.oracle_blocks".into(), json!(c.blocks));
            Status::Pass
        }
        Command::Stabilizer => stabilizer(&session, &session.character(spec)?, &mut doc)?,
        Command::Verify => verify(&session, spec, opts, &mut doc)?,
    };
    Ok(Outcome { document: doc, status })
}

fn check(s: &Session, doc: &mut Document) -> Result<Status, RunError> {
    let ctx = &s.ctx;
    let root = &ctx.root;
    let mut ok = true;
    match validate(ctx.presentation(), NILPOTENCY_BOUND) {
        Ok(v) => {
            doc.insert("result.validation".into(), json!("ok"));
            doc.insert("result.associativity_probes".into(), json!(v.associativity_probes));
        }
        Err(e) => {
            ok = false;
            doc.insert("result.validation".into(), json!(e.to_string()));
        }
    }
    let (skew, exps) = ctx.model.admissibility_data();
    let adm = is_admissible(&skew, &exps, ctx.l()).map_err(invalid)?;
    ok &= adm.admissible;
    doc.insert("result.admissible".into(), json!(adm.admissible));
    doc.insert("result.nonzero_minors".into(), json!(adm.nonzero_minors));
    doc.insert("result.offense".into(), adm.offense.map_or(Value::Null, |o| json!(o.to_string())));

    let (c_printed, gamma_printed) = printed_constants(root);
    doc.insert("result.constant_kappa".into(), cyclo_value(&kappa(root)));
    doc.insert("result.constant_printed_c".into(), cyclo_value(&c_printed));
    doc.insert("result.constant_printed_gamma".into(), cyclo_value(&gamma_printed));
    if ctx.presentation().is_diagonal() && ctx.weyl.is_none() {
        let shape = s.table.log_canonical_constant(ctx.presentation().skew(), root);
        let (value, measured) = match &shape {
            Ok(Some(c)) => (json!("log-canonical"), cyclo_value(c)),
            Ok(None) => (json!("zero"), Value::Null),
            Err(e) => (json!(e), Value::Null),
        };
        ok &= match &shape {
            Ok(Some(c)) => *c == kappa(root),
            Ok(None) => true,
            Err(_) => false,
        };
        doc.insert("result.poisson_shape".into(), value);
        doc.insert("result.poisson_constant".into(), measured);
    }
    if let Some(w) = &ctx.weyl {
        doc.insert("result.weyl.gamma".into(), Value::Array(w.gamma.iter().map(cyclo_value).collect()));
        doc.insert("result.weyl.lower_constant".into(), Value::Array(w.lower_constant.iter().map(cyclo_value).collect()));
    }
    Ok(if ok { Status::Pass } else { Status::Invalid })
}

fn center(s: &Session, doc: &mut Document) -> Status {
    let mut ok = true;
    let to_json = |v: &[(String, bool)]| -> Value {
        v.iter().map(|(label, c)| json!({ "label": label, "central": c })).collect()
    };
    let rows: Vec<Value> = s
        .strata
        .iter()
        .map(|st| match st.center_check(&s.ctx) {
            Some(c) => {
                ok &= c.holds();
                json!({
                    "stratum": st.id(),
                    "checked": true,
                    "generators": to_json(&c.generators),
                    "proper_powers": to_json(&c.proper_powers),
                    "holds": c.holds(),
                })
            }
            None => json!({ "stratum": st.id(), "checked": false }),
        })
        .collect();
    doc.insert("result.center".into(), Value::Array(rows));
    doc.insert("result.center_holds".into(), json!(ok));
    if ok {
        Status::Pass
    } else {
        Status::Invalid
    }
}

fn strata(s: &Session, doc: &mut Document) -> Status {
    let names = |gs: &[crate::strata::LocalGen]| gs.iter().map(|g| g.name.clone()).collect::<Vec<_>>();
    let rows: Vec<Value> = s
        .strata
        .iter()
        .map(|st| {
            let ts = &st.torus;
            json!({
                "stratum": st.id(),
                "survivors": names(&st.survivors),
                "killed": names(&st.killed),
                "k": ts.k,
                "p": ts.p,
                "t": ts.t,
                "ds": ts.ds,
                "extension_divisors": ts.extension_divisors,
            })
        })
        .collect();
    doc.insert("result.strata_count".into(), json!(rows.len()));
    doc.insert("result.strata".into(), Value::Array(rows));
    Status::Pass
}

fn locate_into(s: &Session, chi: &Character, doc: &mut Document) -> Result<Option<usize>, RunError> {
    doc.insert("character".into(), character_value(chi));
    doc.insert("witness".into(), witness_value(chi));
    let loc = locate(chi, &s.strata).map_err(invalid)?;
    Ok(match loc {
        Location::Stratum(k) => {
            doc.insert("result.covered".into(), json!(true));
            doc.insert("result.stratum".into(), json!(s.strata[k].id()));
            doc.insert("result.t".into(), json!(s.strata[k].torus.t));
            Some(k)
        }
        Location::Uncovered(d) => {
            doc.insert("result.covered".into(), json!(false));
            doc.insert("result.stratum".into(), Value::Null);
            let diag: Vec<Value> = d.iter().map(|(id, why)| json!({ "stratum": id, "fails": why })).collect();
            doc.insert("result.diagnostics".into(), Value::Array(diag));
            None
        }
    })
}

fn count(s: &Session, chi: &Character, doc: &mut Document) -> Result<Status, RunError> {
    let l = s.ctx.l() as u64;
    let rank = match locate_into(s, chi, doc)? {
        Some(k) => {
            let g = stabilizer_from_stratum(&s.ctx, &s.table, &s.strata[k], chi, Level::Eps).map_err(invalid)?;
            rank_and_checks(&g.lie).map_err(invalid)?.rank
        }
        None => {
            let g = linearized_stabilizer(&s.ctx, &s.table, chi).map_err(invalid)?;
            rank_and_checks(&g).map_err(invalid)?.rank
        }
    };
    doc.insert("result.rank_chi".into(), json!(rank));
    doc.insert("result.predicted".into(), json!(l.pow(rank as u32)));
    Ok(Status::Pass)
}

fn lie_value(g: &FDLie) -> Value {
    let mut brackets = Vec::new();
    for a in 0..g.dim() {
        for b in a + 1..g.dim() {
            let terms: Vec<Value> = g.brackets[a][b].iter().map(|(&k, c)| json!([g.labels[k], cyclo_value(c)])).collect();
            if !terms.is_empty() {
                brackets.push(json!({ "left": g.labels[a], "right": g.labels[b], "value": terms }));
            }
        }
    }
    let pick = |ix: &[usize]| ix.iter().map(|&i| g.labels[i].clone()).collect::<Vec<_>>();
    json!({
        "basis": g.labels,
        "brackets": brackets,
        "t": pick(&g.t_candidate),
        "n": pick(&g.n_candidate),
    })
}

fn checks_value(c: &Checks) -> Value {
    json!({
        "antisymmetric": c.antisymmetric,
        "jacobi": c.jacobi,
        "t_abelian": c.t_abelian,
        "n_ideal": c.n_ideal,
        "n_lcs_length": c.n_lcs_length,
        "ad_diagonalizable": c.ad_diagonalizable,
        "weight_kernel_dim": c.weight_kernel_dim,
    })
}

fn stabilizer(s: &Session, chi: &Character, doc: &mut Document) -> Result<Status, RunError> {
    let mut ok = true;
    let mut record = |key: &str, g: FDLie, doc: &mut Document| -> Result<usize, RunError> {
        let res = rank_and_checks(&g).map_err(invalid)?;
        ok &= res.checks.all_pass();
        doc.insert(format!("result.{key}"), lie_value(&res.lie));
        doc.insert(format!("result.{key}_checks"), checks_value(&res.checks));
        Ok(res.rank)
    };
    match locate_into(s, chi, doc)? {
        Some(k) => {
            let st = &s.strata[k];
            let eps = stabilizer_from_stratum(&s.ctx, &s.table, st, chi, Level::Eps).map_err(invalid)?;
            let l0 = stabilizer_from_stratum(&s.ctx, &s.table, st, chi, Level::L0).map_err(invalid)?;
            let r = record("g_chi", eps.lie, doc)?;
            let r0 = record("g_chi0", l0.lie, doc)?;
            doc.insert("result.rank_chi".into(), json!(r));
            doc.insert("result.rank_chi0".into(), json!(r0));
        }
        None => {
            let g = linearized_stabilizer(&s.ctx, &s.table, chi).map_err(invalid)?;
            let r = record("g_chi0", g, doc)?;
            doc.insert("result.rank_chi0".into(), json!(r));
        }
    }
    let linear = linearized_stabilizer(&s.ctx, &s.table, chi).and_then(|g| rank_and_checks(&g));
    doc.insert("result.linear_rank".into(), linear.ok().map_or(Value::Null, |r| json!(r.rank)));
    Ok(if ok { Status::Pass } else { Status::Invalid })
}

/// Every {0, 1} pattern with witness 1, skipping zero on invertible generators.
pub fn binary_characters(ctx: &Context) -> Vec<Character> {
    let p = ctx.presentation();
    let n = p.len();
    let r = &ctx.root;
    (0..1usize << n)
        .filter(|mask| (0..n).all(|g| mask >> g & 1 == 1 || !p.is_invertible(g)))
        .map(|mask| {
            let ws: Vec<CycloNum> = (0..n).map(|g| if mask >> g & 1 == 1 { r.one() } else { r.zero() }).collect();
            Character::from_witnesses(&ws, ctx.l())
        })
        .collect()
}

/// Seeded characters with witnesses among 0, 2, ε^k and 1 + ε^k.
pub fn random_characters(ctx: &Context, seed: u64, count: usize) -> Vec<Character> {
    let p = ctx.presentation();
    let r = &ctx.root;
    let l = ctx.l() as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let ws: Vec<CycloNum> = (0..p.len())
                .map(|g| {
                    let lo = if p.is_invertible(g) { 1 } else { 0 };
                    match rng.gen_range(lo..2 + 2 * l) {
                        0 => r.zero(),
                        1 => r.int(2),
                        k if k < l + 1 => r.eps_pow(k - 1),
                        k => &r.one() + &r.eps_pow(k - l - 1),
                    }
                })
                .collect();
            Character::from_witnesses(&ws, ctx.l())
        })
        .collect()
}

fn report_value(rep: &Report) -> Value {
    let psi = rep.psi.as_ref().map_or(Value::Null, |p| {
        json!({ "homomorphism": p.homomorphism, "injective_on_t0": p.injective_on_t0, "onto_t": p.onto_t })
    });
    json!({
        "stratum": rep.stratum,
        "covered": rep.covered(),
        "t": rep.t,
        "rank_chi": rep.rank_chi,
        "rank_chi0": rep.rank_chi0,
        "linear_rank": rep.linear_rank,
        "psi": psi,
        "predicted": rep.predicted,
        "oracle": rep.oracle.count,
        "oracle_blocks": rep.oracle.blocks,
        "verdict": rep.verdict.to_string(),
    })
}

fn verify(s: &Session, spec: &JobSpec, opts: &Options, doc: &mut Document) -> Result<Status, RunError> {
    let mut chars = binary_characters(&s.ctx);
    if let Some(chi) = spec.character(&s.ctx)? {
        chars.push(chi);
    }
    if let Some(seed) = opts.seed {
        chars.extend(random_characters(&s.ctx, seed, RANDOM_EXTRAS));
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(opts.jobs.max(1)).build().map_err(invalid)?;
    let results: Vec<(String, Result<Report, String>)> = pool.install(|| {
        chars
            .par_iter()
            .map(|chi| (character_key(chi), main_theorem_check(&s.ctx, &s.table, &s.strata, chi).map_err(|e| e.to_string())))
            .collect()
    });
    let merged: BTreeMap<String, Result<Report, String>> = results.into_iter().collect();

    let mut tally: BTreeMap<&str, usize> = BTreeMap::new();
    let mut rows = Vec::new();
    for (key, res) in &merged {
        let mut row: serde_json::Map<String, Value> = serde_json::from_str(key).expect("rendered by serde_json");
        let outcome = match res {
            Ok(rep) => {
                *tally.entry(if rep.covered() { "covered" } else { "uncovered" }).or_default() += 1;
                *tally
                    .entry(match rep.verdict {
                        Verdict::Pass => "pass",
                        Verdict::PassWithFlag => "pass_with_flag",
                        Verdict::Mismatch => "mismatch",
                    })
                    .or_default() += 1;
                report_value(rep)
            }
            Err(e) => {
                *tally.entry("errors").or_default() += 1;
                json!({ "error": e })
            }
        };
        row.insert("outcome".into(), outcome);
        rows.push(Value::Object(row));
    }
    let get = |k: &str| tally.get(k).copied().unwrap_or(0);
    doc.insert("result.cases".into(), json!(merged.len()));
    for k in ["covered", "uncovered", "pass", "pass_with_flag", "mismatch", "errors"] {
        doc.insert(format!("result.{k}"), json!(get(k)));
    }
    doc.insert("result.characters".into(), Value::Array(rows));
    let (status, verdict) = if get("mismatch") > 0 {
        (Status::Mismatch, Verdict::Mismatch.to_string())
    } else if get("errors") > 0 {
        (Status::Invalid, "ERROR".to_string())
    } else if get("pass_with_flag") > 0 {
        (Status::Pass, Verdict::PassWithFlag.to_string())
    } else {
        (Status::Pass, Verdict::Pass.to_string())
    };
    doc.insert("result.verdict".into(), json!(verdict));
    Ok(status)
}

/// `key = value` lines; strings bare, everything else compact JSON.
pub fn render_text(doc: &Document) -> String {
    let mut out = String::new();
    for (k, v) in doc {
        let v = match v {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        out.push_str(&format!("{k} = {v}\n"));
    }
    out
}

pub fn render_data(doc: &Document) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}
