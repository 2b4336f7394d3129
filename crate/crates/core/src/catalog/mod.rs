//! Closed-form representatives of conjugacy classes of regular subgroups,
//! shipped as data and checked against the enumeration.
//!
//! The data file `data/witnesses.json` has this shape:
//!
//! ```text
//! {
//!   "version": 1,
//!   "lemmas": [{
//!     "id":        unique name, e.g. "zq-r-zp2/pi2=p",
//!     "family":    additive group token ("Zq:Zp2", "GF", "Gk" for any G_k, ...),
//!     "regime":    boolean expression in p, q and the presentation parameters,
//!     "stratum":   expression for |pi_2(G)|,
//!     "count":     expression for the number of classes in the stratum,
//!     "statement": the generators as written in the source notation,
//!     "manual":    optional reason the generators are not encoded,
//!     "witnesses": [{
//!       "name":       label of the family of subgroups, e.g. "G_a",
//!       "params":     [{"name": "a", "from": "1", "to": "p-1"}, ...] (inclusive),
//!       "where":      optional boolean filter on the parameters,
//!       "let":        [["u", "<expr>"], ...] evaluated in order,
//!       "generators": [{"a": "<group element>", "f": "<automorphism>"}, ...],
//!       "mul":        [{"when": "<bool>", "label": "<token>"}, ...] first match wins
//!     }]
//!   }]
//! }
//! ```
//!
//! Expressions use the language in [`expr`]. Automorphisms are written
//! `aut(c_1, ..., c_k)` with the coordinates documented on
//! [`StructuredAut`](crate::families::StructuredAut). A generator without
//! `"f"` has the identity automorphism.
//!
//! In the `Zq:Zp2` and `Zpx(Zq:Zp)` families the name `h` is bound to the
//! least unit of order `p^2` modulo `q` whose `p`-th power is `r`, so that
//! recipes written with `h^p` agree with the group built from `r`.

pub mod expr;

use std::collections::{BTreeMap, HashSet};
use std::path::Path;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braces::brace_from_regular;
use crate::enumerate::{orbit_of, OrbitClass};
use crate::families::{modpow, mult_order, structured_aut, FamilyError, FamilyGroup, StructuredAut};
use crate::groups::{identify_p2q, GroupLabel};
use crate::holomorph::{HolElem, HolSubgroup, Holomorph, RegularSubgroup};

use expr::{ExprError, Scope, Value};

pub const CATALOG_VERSION: u32 = 1;

const BUILTIN: &str = include_str!("../../data/witnesses.json");

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("catalog file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("catalog file: {0}")]
    Io(#[from] std::io::Error),
    #[error("catalog version {found} is not supported (expected {CATALOG_VERSION})")]
    Version { found: u32 },
    #[error("duplicate lemma id `{0}`")]
    DuplicateId(String),
    #[error("unknown lemma id `{0}`")]
    UnknownLemma(String),
    #[error("lemma `{lemma}`, witness {witness}: {source}")]
    Expr { lemma: String, witness: String, source: ExprError },
    #[error("lemma `{lemma}`, witness {witness}: generated subgroup has order {got}, expected {expected}")]
    WrongOrder { lemma: String, witness: String, got: usize, expected: usize },
    #[error("lemma `{lemma}` is outside its regime for p = {p}, q = {q}")]
    OutOfRegime { lemma: String, p: u64, q: u64 },
    #[error(transparent)]
    Family(#[from] FamilyError),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ParamRange {
    pub name: String,
    pub from: String,
    pub to: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub a: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MulCase {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub when: Option<String>,
    pub label: String,
}

/// A family of explicit subgroups indexed by integer parameters.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Witness {
    pub name: String,
    #[serde(default)]
    pub params: Vec<ParamRange>,
    #[serde(default, rename = "where", skip_serializing_if = "Option::is_none")]
    pub condition: Option<String>,
    #[serde(default, rename = "let")]
    pub lets: Vec<[String; 2]>,
    pub generators: Vec<GeneratorSpec>,
    #[serde(default)]
    pub mul: Vec<MulCase>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Lemma {
    pub id: String,
    pub family: String,
    #[serde(default = "always")]
    pub regime: String,
    pub stratum: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<String>,
    #[serde(default)]
    pub statement: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manual: Option<String>,
    #[serde(default)]
    pub witnesses: Vec<Witness>,
}

fn always() -> String {
    "1 == 1".into()
}

impl Lemma {
    pub fn applies_to(&self, label: GroupLabel, q: u64) -> bool {
        match self.family.as_str() {
            "Gk" => matches!(label, GroupLabel::Gk(_)),
            tok => GroupLabel::parse(tok, q).is_ok_and(|l| l == label),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Catalog {
    pub version: u32,
    pub lemmas: Vec<Lemma>,
}

impl Catalog {
    pub fn from_json(s: &str) -> Result<Self, CatalogError> {
        let c: Catalog = serde_json::from_str(s)?;
        if c.version != CATALOG_VERSION {
            return Err(CatalogError::Version { found: c.version });
        }
        let mut ids = HashSet::new();
        for l in &c.lemmas {
            if !ids.insert(l.id.as_str()) {
                return Err(CatalogError::DuplicateId(l.id.clone()));
            }
        }
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self, CatalogError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn lemma(&self, id: &str) -> Result<&Lemma, CatalogError> {
        self.lemmas.iter().find(|l| l.id == id).ok_or_else(|| CatalogError::UnknownLemma(id.into()))
    }
}

/// The catalog compiled into the library.
pub fn builtin() -> &'static Catalog {
    static CELL: OnceLock<Catalog> = OnceLock::new();
    CELL.get_or_init(|| Catalog::from_json(BUILTIN).expect("bundled catalog is valid"))
}

/// A group together with everything needed to evaluate recipes on it.
pub struct WitnessContext {
    pub fam: FamilyGroup,
    pub sa: StructuredAut,
    pub hol: Holomorph,
}

impl WitnessContext {
    pub fn new(fam: FamilyGroup) -> Result<Self, CatalogError> {
        let sa = structured_aut(&fam)?;
        let hol = Holomorph::new(fam.group.clone(), Arc::new(sa.aut.clone()));
        Ok(WitnessContext { fam, sa, hol })
    }

    /// Scope with `p`, `q`, `n` and the presentation parameters bound.
    pub fn scope(&self) -> Scope<'_> {
        let mut s = Scope::with_group(&self.fam, &self.sa);
        bind_params(&mut s, &self.fam);
        s
    }
}

fn bind_params(s: &mut Scope<'_>, fam: &FamilyGroup) {
    let pr = &fam.params;
    let (p, q) = (pr.p, pr.q);
    s.set_int("p", p as i128);
    s.set_int("q", q as i128);
    s.set_int("n", (p * p * q) as i128);
    for (name, v) in [("t", pr.t), ("g", pr.g), ("r", pr.r), ("h", pr.h), ("xi", pr.xi)] {
        if let Some(v) = v {
            s.set_int(name, v as i128);
        }
    }
    if matches!(fam.label, GroupLabel::QbyP2OrdP | GroupLabel::PxQbyP) {
        if let (Some(r), Some(_)) = (pr.r, pr.h) {
            if let Some(h) = (2..q).find(|&x| mult_order(x, q) == p * p && modpow(x, p, q) == r) {
                s.set_int("h", h as i128);
            }
        }
    }
}

/// Regime test that needs only the numerical parameters.
pub fn in_regime(lemma: &Lemma, fam: &FamilyGroup) -> Result<bool, ExprError> {
    let mut s = Scope::new();
    bind_params(&mut s, fam);
    s.eval_bool(&lemma.regime)
}

/// One concrete subgroup produced by a recipe.
#[derive(Clone, Debug)]
pub struct WitnessInstance {
    pub witness: String,
    pub bindings: Vec<(String, i64)>,
    pub subgroup: HolSubgroup,
    pub expected_mul: Option<GroupLabel>,
}

impl WitnessInstance {
    pub fn describe(&self) -> String {
        if self.bindings.is_empty() {
            return self.witness.clone();
        }
        let b: Vec<String> = self.bindings.iter().map(|(n, v)| format!("{n}={v}")).collect();
        format!("{}[{}]", self.witness, b.join(","))
    }
}

/// All parameter assignments of a witness that pass its `where` filter.
fn assignments(ctx: &WitnessContext, lemma: &Lemma, w: &Witness) -> Result<Vec<Vec<(String, i64)>>, CatalogError> {
    let err = |source| CatalogError::Expr { lemma: lemma.id.clone(), witness: w.name.clone(), source };
    let mut out: Vec<Vec<(String, i64)>> = vec![Vec::new()];
    for range in &w.params {
        let mut next = Vec::new();
        for partial in out {
            let mut s = ctx.scope();
            for (n, v) in &partial {
                s.set_int(n, *v as i128);
            }
            let lo = s.eval_int(&range.from).map_err(err)? as i64;
            let hi = s.eval_int(&range.to).map_err(err)? as i64;
            for v in lo..=hi {
                let mut b = partial.clone();
                b.push((range.name.clone(), v));
                next.push(b);
            }
        }
        out = next;
    }
    if let Some(cond) = &w.condition {
        let mut kept = Vec::new();
        for b in out {
            let mut s = ctx.scope();
            for (n, v) in &b {
                s.set_int(n, *v as i128);
            }
            if s.eval_bool(cond).map_err(err)? {
                kept.push(b);
            }
        }
        out = kept;
    }
    Ok(out)
}

/// Evaluates one recipe under the given parameter bindings and closes the
/// generators. The result must have order `p^2 q`.
pub fn evaluate_witness(
    ctx: &WitnessContext,
    lemma: &Lemma,
    w: &Witness,
    bindings: &[(String, i64)],
) -> Result<WitnessInstance, CatalogError> {
    let tag = |b: &[(String, i64)]| {
        WitnessInstance { witness: w.name.clone(), bindings: b.to_vec(), subgroup: HolSubgroup { elements: vec![] }, expected_mul: None }
            .describe()
    };
    let err = |source| CatalogError::Expr { lemma: lemma.id.clone(), witness: tag(bindings), source };
    let mut s = ctx.scope();
    for (n, v) in bindings {
        s.set_int(n, *v as i128);
    }
    for [name, e] in &w.lets {
        let v = s.eval_str(e).map_err(err)?;
        s.vars.insert(name.clone(), v);
    }
    let mut gens = Vec::with_capacity(w.generators.len());
    for g in &w.generators {
        let a = match s.eval_str(&g.a).map_err(err)? {
            Value::Elem(x) => x,
            // a bare vector stands for sigma^x tau^y
            Value::Vec(v) => {
                let mut t = ctx.scope();
                t.vars.insert("v_".into(), Value::Vec(v));
                match t.eval_str("elem(v_)").map_err(err)? {
                    Value::Elem(x) => x,
                    _ => unreachable!("elem returns an element"),
                }
            }
            other => return Err(err(ExprError::Type(format!("generator `{}` is not a group element: {other:?}", g.a)))),
        };
        let f = match &g.f {
            None => 0,
            Some(fs) => match s.eval_str(fs).map_err(err)? {
                Value::Aut(f) => f,
                other => return Err(err(ExprError::Type(format!("`{fs}` is not an automorphism: {other:?}")))),
            },
        };
        gens.push(HolElem::new(a, f));
    }
    let n = ctx.hol.n();
    let sub = ctx.hol.closure(&gens, n);
    let got = sub.as_ref().map_or(n + 1, |x| x.len());
    let subgroup = match sub {
        Some(x) if x.len() == n => x,
        _ => return Err(CatalogError::WrongOrder { lemma: lemma.id.clone(), witness: tag(bindings), got, expected: n }),
    };
    let mut expected_mul = None;
    for case in &w.mul {
        let hit = match &case.when {
            None => true,
            Some(c) => s.eval_bool(c).map_err(err)?,
        };
        if hit {
            let label = GroupLabel::parse(&case.label, ctx.fam.params.q)
                .map_err(|m| err(ExprError::Type(m)))?;
            expected_mul = Some(label);
            break;
        }
    }
    Ok(WitnessInstance { witness: w.name.clone(), bindings: bindings.to_vec(), subgroup, expected_mul })
}

/// Every instance of every witness of a lemma.
pub fn instances(ctx: &WitnessContext, lemma: &Lemma) -> Result<Vec<WitnessInstance>, CatalogError> {
    let mut out = Vec::new();
    for w in &lemma.witnesses {
        for b in assignments(ctx, lemma, w)? {
            out.push(evaluate_witness(ctx, lemma, w, &b)?);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LemmaStatus {
    /// Every check passed.
    Verified,
    /// At least one discrepancy.
    Failed,
    /// Outside the lemma's regime for these primes.
    NotApplicable,
    /// Generators not encoded; only the class count was compared.
    Manual,
}

/// Outcome of [`verify_lemma`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LemmaReport {
    pub id: String,
    pub family: String,
    pub stratum: Option<usize>,
    pub status: LemmaStatus,
    pub witnesses: usize,
    pub expected_count: Option<usize>,
    /// Number of enumerated classes in the stratum, when an enumeration
    /// was supplied.
    pub enumerated: Option<usize>,
    pub discrepancies: Vec<String>,
}

/// Checks a lemma against one group:
///
/// * each instance generates a regular subgroup whose `π_2` has the
///   lemma's order and, where recorded, the expected multiplicative class;
/// * instances lie in pairwise distinct conjugacy classes;
/// * the number of classes is the lemma's count;
/// * with `orbits` given, the classes are exactly the enumerated classes of
///   the stratum.
pub fn verify_lemma(ctx: &WitnessContext, lemma: &Lemma, orbits: Option<&[OrbitClass]>) -> LemmaReport {
    let (p, q) = (ctx.fam.params.p, ctx.fam.params.q);
    let mut report = LemmaReport {
        id: lemma.id.clone(),
        family: ctx.fam.name(),
        stratum: None,
        status: LemmaStatus::Verified,
        witnesses: 0,
        expected_count: None,
        enumerated: None,
        discrepancies: Vec::new(),
    };
    let fail = |r: &mut LemmaReport, msg: String| {
        r.discrepancies.push(msg);
        r.status = LemmaStatus::Failed;
    };
    match in_regime(lemma, &ctx.fam) {
        Ok(true) => {}
        Ok(false) => {
            report.status = LemmaStatus::NotApplicable;
            return report;
        }
        Err(e) => {
            fail(&mut report, format!("regime: {e}"));
            return report;
        }
    }
    let s = ctx.scope();
    let stratum = match s.eval_int(&lemma.stratum) {
        Ok(v) => v as usize,
        Err(e) => {
            fail(&mut report, format!("stratum: {e}"));
            return report;
        }
    };
    report.stratum = Some(stratum);
    if let Some(c) = &lemma.count {
        match s.eval_int(c) {
            Ok(v) => report.expected_count = Some(v as usize),
            Err(e) => fail(&mut report, format!("count: {e}")),
        }
    }
    let in_stratum: Option<Vec<&OrbitClass>> = orbits.map(|o| o.iter().filter(|c| c.pi2_size == stratum).collect());
    report.enumerated = in_stratum.as_ref().map(|v| v.len());
    if lemma.manual.is_some() {
        report.status = LemmaStatus::Manual;
        if let (Some(e), Some(got)) = (report.expected_count, report.enumerated) {
            if e != got {
                fail(&mut report, format!("stratum {stratum}: lemma count {e}, enumeration {got}"));
            }
        }
        return report;
    }
    let list = match instances(ctx, lemma) {
        Ok(l) => l,
        Err(e) => {
            fail(&mut report, e.to_string());
            return report;
        }
    };
    report.witnesses = list.len();
    let checked: Vec<Result<RegularSubgroup, String>> = list
        .par_iter()
        .map(|inst| {
            let name = inst.describe();
            let g = ctx.hol.as_regular(&inst.subgroup).ok_or_else(|| format!("{name} is not regular"))?;
            let pi2 = g.pi2().len();
            if pi2 != stratum {
                return Err(format!("{name} has |pi_2| = {pi2}, expected {stratum}"));
            }
            if let Some(want) = inst.expected_mul {
                let b = brace_from_regular(&ctx.hol, &g).map_err(|e| format!("{name}: {e}"))?;
                let got = identify_p2q(&b.multiplicative_group(), p, q).map_err(|e| format!("{name}: {e}"))?;
                if got != want {
                    return Err(format!("{name} has multiplicative group {}, expected {}", got.token(q), want.token(q)));
                }
            }
            Ok(orbit_of(&ctx.hol, &g).swap_remove(0))
        })
        .collect();
    let mut classes: BTreeMap<RegularSubgroup, String> = BTreeMap::new();
    for (inst, r) in list.iter().zip(checked) {
        match r {
            Err(m) => fail(&mut report, m),
            Ok(key) => {
                if let Some(other) = classes.insert(key, inst.describe()) {
                    fail(&mut report, format!("{} is conjugate to {other}", inst.describe()));
                }
            }
        }
    }
    if let Some(e) = report.expected_count {
        if list.len() != e {
            fail(&mut report, format!("{} witnesses, lemma count {e}", list.len()));
        }
    }
    if let Some(enumerated) = in_stratum {
        let reps: HashSet<&RegularSubgroup> = enumerated.iter().map(|c| &c.representative).collect();
        let missing = reps.iter().filter(|r| !classes.contains_key(**r)).count();
        let extra = classes.keys().filter(|k| !reps.contains(k)).count();
        if missing > 0 || extra > 0 {
            fail(&mut report, format!("stratum {stratum}: {missing} enumerated classes without a witness, {extra} witnesses outside the enumeration"));
        }
    }
    report
}
