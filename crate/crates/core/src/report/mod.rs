//! Classification of all skew braces of one order, table checks against the
//! expected-values database, serialisation and caching.
//!
//! [`classify`] runs the whole pipeline for every group `A` of order
//! `p^2 q`: structured `Aut(A)`, regular subgroups of `Hol(A)`, their
//! conjugacy classes, and for each class the brace invariants that the
//! tables are keyed by (multiplicative group and `|ker λ|`).

pub mod cache;
pub mod expected;
pub mod export;

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braces::{brace_from_regular, BraceError, SkewBrace};
use crate::catalog::{verify_lemma, LemmaReport, LemmaStatus, WitnessContext};
use crate::enumerate::{enumerate, orbit_partition, EnumError, OrbitClass, Strategy};
use crate::families::{aut_order_formula, build_group, structured_aut, FamilyError, FamilyGroup, FamilyParams, ParamChoice};
use crate::groups::{identify_p2q, GroupError, GroupLabel};
use crate::holomorph::Holomorph;

pub use cache::CacheError;

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Enumerate(#[from] EnumError),
    #[error(transparent)]
    Brace(#[from] BraceError),
    #[error(transparent)]
    Cache(#[from] CacheError),
    #[error(transparent)]
    Catalog(#[from] crate::catalog::CatalogError),
    #[error("no class {index} for {label}: it has {count} classes")]
    NoSuchOrbit { label: String, index: usize, count: usize },
    #[error("no group `{label}` of order {n}")]
    UnknownAdditive { label: String, n: u64 },
    #[error("holomorph of {label} has order {size}, over the budget of {budget}")]
    OverBudget { label: String, size: usize, budget: usize },
    #[error("report version {0} is not supported")]
    Version(u32),
    #[error("thread pool: {0}")]
    Pool(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Csv(#[from] csv::Error),
}

/// Which congruence case `(p, q)` falls in. Each case has its own set of
/// groups and tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// `p^2 q = 12`, where two congruences hold at once
    Order12,
    /// `q = 2`
    TwoPSquared,
    /// `p = 1 (mod q)`
    POneModQ,
    /// `p = -1 (mod q)`, `q > 2`
    PMinusOneModQ,
    /// `q = 1 (mod p)`, `q != 1 (mod p^2)`
    QOneModP,
    /// `q = 1 (mod p^2)`
    QOneModP2,
    /// none of the above: only abelian groups
    Independent,
}

impl Regime {
    pub fn of(p: u64, q: u64) -> Regime {
        if p * p * q == 12 {
            Regime::Order12
        } else if q == 2 {
            Regime::TwoPSquared
        } else if p % q == 1 {
            Regime::POneModQ
        } else if (p + 1).is_multiple_of(q) {
            Regime::PMinusOneModQ
        } else if q % (p * p) == 1 {
            Regime::QOneModP2
        } else if q % p == 1 {
            Regime::QOneModP
        } else {
            Regime::Independent
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Order12 => "order 12",
            Regime::TwoPSquared => "q = 2",
            Regime::POneModQ => "p = 1 (mod q)",
            Regime::PMinusOneModQ => "p = -1 (mod q)",
            Regime::QOneModP => "q = 1 (mod p), q != 1 (mod p^2)",
            Regime::QOneModP2 => "q = 1 (mod p^2)",
            Regime::Independent => "p, q arithmetically independent",
        })
    }
}

/// Cap on `|Hol(A)| = |A| |Aut(A)|` for a single additive group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget(pub usize);

impl Budget {
    /// Everything up to order 171 except the `G_1` family at order 147.
    pub const SMALL: Budget = Budget(4_000_000);
    pub const LARGE: Budget = Budget(usize::MAX);
}

impl Default for Budget {
    fn default() -> Self {
        Budget::SMALL
    }
}

impl std::str::FromStr for Budget {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "small" => Ok(Budget::SMALL),
            "large" => Ok(Budget::LARGE),
            n => n.parse().map(Budget).map_err(|_| format!("budget must be `small`, `large` or a number, got `{s}`")),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct ClassifyOptions {
    pub strategy: Option<Strategy>,
    pub choice: ParamChoice,
    /// Restrict to one additive group.
    pub additive: Option<GroupLabel>,
    pub budget: Budget,
    /// Worker threads; `None` uses the global rayon pool.
    pub jobs: Option<usize>,
    pub cache_dir: Option<PathBuf>,
}

impl ClassifyOptions {
    fn strategy(&self) -> Strategy {
        self.strategy.unwrap_or(Strategy::Dfs)
    }
}

/// Invariants of one conjugacy class of regular subgroups, i.e. of one
/// isomorphism class of skew braces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub pi2_size: usize,
    pub kernel_size: usize,
    /// Number of regular subgroups in the class.
    pub orbit_size: usize,
    /// Token of the multiplicative group.
    pub mul: String,
    pub biskew: bool,
}

/// Wall-clock time per stage, in microseconds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageTiming {
    pub automorphisms_us: u64,
    pub enumeration_us: u64,
    pub braces_us: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdditiveReport {
    pub additive: String,
    pub abelian: bool,
    pub aut_order: usize,
    pub regular_subgroups: usize,
    pub classes: Vec<ClassRecord>,
    pub from_cache: bool,
    pub timing: StageTiming,
}

impl AdditiveReport {
    pub fn label(&self, q: u64) -> GroupLabel {
        GroupLabel::parse(&self.additive, q).expect("report labels are valid tokens")
    }
}

/// An additive group left out because of the budget.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Skipped {
    pub additive: String,
    pub holomorph_order: usize,
}

/// Numbers of skew braces with abelian and non-abelian additive group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Totals {
    pub abelian: usize,
    pub nonabelian: usize,
    pub total: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub version: u32,
    pub p: u64,
    pub q: u64,
    pub regime: Regime,
    pub params: FamilyParams,
    pub strategy: Strategy,
    pub additive: Vec<AdditiveReport>,
    pub skipped: Vec<Skipped>,
}

impl ClassificationReport {
    pub fn n(&self) -> u64 {
        self.p * self.p * self.q
    }

    /// Whether every group of the order was classified.
    pub fn is_complete(&self) -> bool {
        self.skipped.is_empty() && self.additive.len() == self.params.labels().len()
    }

    pub fn get(&self, additive: GroupLabel) -> Option<&AdditiveReport> {
        let t = additive.token(self.q);
        self.additive.iter().find(|a| a.additive == t)
    }

    /// Class counts by `(additive, multiplicative)`.
    pub fn cross_counts(&self) -> BTreeMap<(GroupLabel, GroupLabel), usize> {
        let mut out = BTreeMap::new();
        for a in &self.additive {
            let add = a.label(self.q);
            for c in &a.classes {
                let mul = GroupLabel::parse(&c.mul, self.q).expect("valid token");
                *out.entry((add, mul)).or_insert(0) += 1;
            }
        }
        out
    }

    /// Class counts of one additive group by `(multiplicative, |ker λ|)`.
    pub fn kernel_counts(&self, additive: GroupLabel) -> BTreeMap<(GroupLabel, usize), usize> {
        let mut out = BTreeMap::new();
        if let Some(a) = self.get(additive) {
            for c in &a.classes {
                let mul = GroupLabel::parse(&c.mul, self.q).expect("valid token");
                *out.entry((mul, c.kernel_size)).or_insert(0) += 1;
            }
        }
        out
    }

    pub fn totals(&self) -> Totals {
        let (mut abelian, mut nonabelian) = (0, 0);
        for a in &self.additive {
            if a.abelian {
                abelian += a.classes.len();
            } else {
                nonabelian += a.classes.len();
            }
        }
        Totals { abelian, nonabelian, total: abelian + nonabelian }
    }
}

/// A holomorph ready for enumeration together with the group it came from.
pub struct Prepared {
    pub fam: FamilyGroup,
    pub hol: Holomorph,
}

/// Builds the group and its structured automorphism group, refusing
/// holomorphs over the budget.
pub fn prepare(label: GroupLabel, params: &FamilyParams, budget: Budget) -> Result<Prepared, ReportError> {
    let fam = build_group(label, params)?;
    let size = params.n() * aut_order_formula(label, params.p, params.q);
    if size > budget.0 {
        return Err(ReportError::OverBudget { label: fam.name(), size, budget: budget.0 });
    }
    let aut = structured_aut(&fam)?.aut;
    let hol = Holomorph::new(fam.group.clone(), std::sync::Arc::new(aut));
    Ok(Prepared { fam, hol })
}

/// Conjugacy classes of regular subgroups of `Hol(A)`, from the cache when
/// a valid entry exists.
pub fn orbit_classes(
    prep: &Prepared,
    strategy: Strategy,
    cache_dir: Option<&std::path::Path>,
) -> Result<(Vec<OrbitClass>, bool), ReportError> {
    if let Some(dir) = cache_dir {
        if let Some(entry) = cache::lookup(dir, &prep.fam, &prep.hol)? {
            return Ok((entry.orbits, true));
        }
    }
    let subs = enumerate(&prep.hol, strategy)?;
    Ok((orbit_partition(&prep.hol, &subs)?, false))
}

fn classify_one(prep: &Prepared, opts: &ClassifyOptions, t_aut: u64) -> Result<AdditiveReport, ReportError> {
    let (p, q) = (prep.fam.params.p, prep.fam.params.q);
    let t = Instant::now();
    let (orbits, from_cache) = orbit_classes(prep, opts.strategy(), opts.cache_dir.as_deref())?;
    let enumeration_us = t.elapsed().as_micros() as u64;
    let t = Instant::now();
    let classes = orbits
        .par_iter()
        .map(|o| -> Result<ClassRecord, ReportError> {
            let b = brace_from_regular(&prep.hol, &o.representative)?;
            let mul = identify_p2q(&b.multiplicative_group(), p, q)?;
            Ok(ClassRecord {
                pi2_size: o.pi2_size,
                kernel_size: o.representative.kernel_size(),
                orbit_size: o.size,
                mul: mul.token(q),
                biskew: b.is_bi_skew(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let braces_us = t.elapsed().as_micros() as u64;
    if let (Some(dir), false) = (&opts.cache_dir, from_cache) {
        cache::store(dir, &prep.fam, &prep.hol, &orbits, &classes)?;
    }
    Ok(AdditiveReport {
        additive: prep.fam.name(),
        abelian: prep.fam.label.is_abelian(),
        aut_order: prep.hol.aut.len(),
        regular_subgroups: orbits.iter().map(|o| o.size).sum(),
        classes,
        from_cache,
        timing: StageTiming { automorphisms_us: t_aut, enumeration_us, braces_us },
    })
}

/// Classifies the skew braces of order `p^2 q`, one additive group at a
/// time. Groups over the budget are listed in `skipped` and the report is
/// then incomplete.
pub fn classify(p: u64, q: u64, opts: &ClassifyOptions) -> Result<ClassificationReport, ReportError> {
    let params = FamilyParams::derive_with(p, q, opts.choice)?;
    let labels = params.labels();
    let labels: Vec<GroupLabel> = match opts.additive {
        Some(l) if labels.contains(&l) => vec![l],
        Some(l) => return Err(ReportError::UnknownAdditive { label: l.token(q), n: p * p * q }),
        None => labels,
    };
    let run = || -> Result<Vec<Result<AdditiveReport, Skipped>>, ReportError> {
        labels
            .par_iter()
            .map(|&l| {
                let t = Instant::now();
                match prepare(l, &params, opts.budget) {
                    Ok(prep) => classify_one(&prep, opts, t.elapsed().as_micros() as u64).map(Ok),
                    Err(ReportError::OverBudget { label, size, .. }) => {
                        Ok(Err(Skipped { additive: label, holomorph_order: size }))
                    }
                    Err(e) => Err(e),
                }
            })
            .collect()
    };
    let results = match opts.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| ReportError::Pool(e.to_string()))?
            .install(run)?,
        None => run()?,
    };
    let mut additive = Vec::new();
    let mut skipped = Vec::new();
    for r in results {
        match r {
            Ok(a) => additive.push(a),
            Err(s) => skipped.push(s),
        }
    }
    Ok(ClassificationReport {
        version: REPORT_VERSION,
        p,
        q,
        regime: Regime::of(p, q),
        params,
        strategy: opts.strategy(),
        additive,
        skipped,
    })
}

/// The skew brace of class `index` (in the order of the report) with
/// additive group `label`.
pub fn orbit_brace(
    p: u64,
    q: u64,
    label: GroupLabel,
    index: usize,
    opts: &ClassifyOptions,
) -> Result<SkewBrace, ReportError> {
    let params = FamilyParams::derive_with(p, q, opts.choice)?;
    if !params.labels().contains(&label) {
        return Err(ReportError::UnknownAdditive { label: label.token(q), n: p * p * q });
    }
    let prep = prepare(label, &params, opts.budget)?;
    let (orbits, _) = orbit_classes(&prep, opts.strategy(), opts.cache_dir.as_deref())?;
    let o = orbits.get(index).ok_or_else(|| ReportError::NoSuchOrbit {
        label: label.token(q),
        index,
        count: orbits.len(),
    })?;
    Ok(brace_from_regular(&prep.hol, &o.representative)?)
}

/// Lemma-by-lemma check of the witness catalog at `(p, q)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CatalogCheck {
    pub lemmas: Vec<LemmaReport>,
    /// Families with lemmas whose holomorph is over the budget.
    pub skipped: Vec<Skipped>,
}

impl CatalogCheck {
    pub fn failed(&self) -> usize {
        self.lemmas.iter().filter(|l| l.status == LemmaStatus::Failed).count()
    }
}

/// Verifies every catalog lemma that applies at `(p, q)`, or only `only`,
/// against a fresh enumeration of each family.
pub fn verify_catalog(
    p: u64,
    q: u64,
    opts: &ClassifyOptions,
    only: Option<&str>,
) -> Result<CatalogCheck, ReportError> {
    let cat = crate::catalog::builtin();
    if let Some(id) = only {
        cat.lemma(id)?;
    }
    let params = FamilyParams::derive_with(p, q, opts.choice)?;
    let wanted = |l: &crate::catalog::Lemma| only.is_none_or(|id| l.id == id);
    let results: Vec<Result<Vec<LemmaReport>, Skipped>> = params
        .labels()
        .into_par_iter()
        .filter(|&label| cat.lemmas.iter().any(|l| wanted(l) && l.applies_to(label, q)))
        .map(|label| -> Result<_, ReportError> {
            let prep = match prepare(label, &params, opts.budget) {
                Ok(prep) => prep,
                Err(ReportError::OverBudget { label, size, .. }) => {
                    return Ok(Err(Skipped { additive: label, holomorph_order: size }))
                }
                Err(e) => return Err(e),
            };
            let (orbits, _) = orbit_classes(&prep, opts.strategy(), opts.cache_dir.as_deref())?;
            let ctx = WitnessContext::new(prep.fam)?;
            Ok(Ok(cat
                .lemmas
                .iter()
                .filter(|l| wanted(l) && l.applies_to(label, q))
                .map(|l| verify_lemma(&ctx, l, Some(&orbits)))
                .filter(|r| r.status != LemmaStatus::NotApplicable)
                .collect()))
        })
        .collect::<Result<_, _>>()?;
    let mut check = CatalogCheck { lemmas: Vec::new(), skipped: Vec::new() };
    for r in results {
        match r {
            Ok(l) => check.lemmas.extend(l),
            Err(s) => check.skipped.push(s),
        }
    }
    Ok(check)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regimes() {
        assert_eq!(Regime::of(2, 3), Regime::Order12);
        assert_eq!(Regime::of(3, 2), Regime::TwoPSquared);
        assert_eq!(Regime::of(7, 3), Regime::POneModQ);
        assert_eq!(Regime::of(5, 3), Regime::PMinusOneModQ);
        assert_eq!(Regime::of(2, 7), Regime::QOneModP);
        assert_eq!(Regime::of(2, 5), Regime::QOneModP2);
        assert_eq!(Regime::of(3, 19), Regime::QOneModP2);
        assert_eq!(Regime::of(3, 5), Regime::Independent);
    }

    #[test]
    fn order_20_totals() {
        let r = classify(2, 5, &ClassifyOptions::default()).unwrap();
        assert!(r.is_complete());
        assert_eq!(r.totals(), Totals { abelian: 11, nonabelian: 32, total: 43 });
        for a in &r.additive {
            let sum: usize = r.kernel_counts(a.label(5)).values().sum();
            assert_eq!(sum, a.classes.len());
        }
    }

    #[test]
    fn budget_skips_and_flags() {
        let opts = ClassifyOptions { budget: Budget(200), ..Default::default() };
        let r = classify(2, 5, &opts).unwrap();
        assert!(!r.is_complete());
        // only the cyclic group fits: 20 * 8 = 160
        assert_eq!(r.additive.len(), 1);
        assert_eq!(r.skipped.len(), 4);
    }

    #[test]
    fn thread_count_does_not_change_the_report() {
        let strip = |mut r: ClassificationReport| {
            r.additive.iter_mut().for_each(|a| a.timing = StageTiming::default());
            r
        };
        let one = classify(2, 7, &ClassifyOptions { jobs: Some(1), ..Default::default() }).unwrap();
        let four = classify(2, 7, &ClassifyOptions { jobs: Some(4), ..Default::default() }).unwrap();
        assert_eq!(strip(one), strip(four));
    }
}
