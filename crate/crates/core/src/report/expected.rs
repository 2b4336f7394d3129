//! Expected class counts, stored as symbolic tables in `data/expected.json`
//! and evaluated at concrete `(p, q)`.
//!
//! Two kinds of table are stored:
//!
//! * `cross`: rows are additive groups, columns multiplicative groups,
//!   cells the number of braces with that pair of groups;
//! * `kernel`: one additive group; rows are `|ker λ|`, columns
//!   multiplicative groups.
//!
//! Cells are expressions in `p` and `q` (`"-"` is zero). Row and column
//! keys name groups by token. Families of `G_k` use patterns: `G*` is every
//! `G_k` with `k != 0, ±1`, `G*!2` leaves out the class of `G_2`, `G*!k`
//! leaves out the additive group of the row, and `Gk` is that additive
//! group itself.
//!
//! The `totals` section holds closed forms for the number of braces with
//! abelian and non-abelian additive group, used by [`conjecture`].

use std::collections::BTreeSet;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{ClassificationReport, Totals};
use crate::catalog::expr::{ExprError, Scope};
use crate::families::gk_kind;
use crate::families::GkKind;
use crate::groups::GroupLabel;

pub const EXPECTED_VERSION: u32 = 1;

const BUILTIN: &str = include_str!("../../data/expected.json");

#[derive(Debug, Error)]
pub enum ExpectedError {
    #[error("expected-values file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("expected-values version {0} is not supported")]
    Version(u32),
    #[error("table `{table}`: {msg}")]
    Table { table: String, msg: String },
    #[error("table `{table}`, `{src}`: {source}")]
    Expr { table: String, src: String, source: ExprError },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableKind {
    Cross,
    Kernel,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExpectedRow {
    pub key: String,
    pub cells: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExpectedTable {
    pub id: String,
    pub kind: TableKind,
    pub regime: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub additive: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub columns: Vec<String>,
    pub rows: Vec<ExpectedRow>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExpectedTotals {
    pub id: String,
    pub regime: String,
    pub abelian: String,
    pub nonabelian: String,
    pub total: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExpectedDb {
    pub version: u32,
    pub tables: Vec<ExpectedTable>,
    pub totals: Vec<ExpectedTotals>,
}

impl ExpectedDb {
    pub fn from_json(s: &str) -> Result<Self, ExpectedError> {
        let db: ExpectedDb = serde_json::from_str(s)?;
        if db.version != EXPECTED_VERSION {
            return Err(ExpectedError::Version(db.version));
        }
        for t in &db.tables {
            let bad = |msg: String| Err(ExpectedError::Table { table: t.id.clone(), msg });
            if t.rows.iter().any(|r| r.cells.len() != t.columns.len()) {
                return bad("row length differs from the number of columns".into());
            }
            if (t.kind == TableKind::Kernel) != t.additive.is_some() {
                return bad("kernel tables, and only they, name an additive group".into());
            }
        }
        Ok(db)
    }
}

pub fn builtin() -> &'static ExpectedDb {
    static DB: OnceLock<ExpectedDb> = OnceLock::new();
    DB.get_or_init(|| ExpectedDb::from_json(BUILTIN).expect("bundled expected.json is valid"))
}

fn scope(p: u64, q: u64) -> Scope<'static> {
    let mut s = Scope::new();
    s.set_int("p", p as i128);
    s.set_int("q", q as i128);
    s
}

fn is_generic(l: GroupLabel, q: u64) -> bool {
    matches!(l, GroupLabel::Gk(k) if gk_kind(k, q) == GkKind::Generic)
}

/// Whether `label` matches a row or column key. `row` is the additive group
/// of the row, for the `Gk` and `G*!k` forms.
pub fn key_matches(key: &str, label: GroupLabel, row: Option<GroupLabel>, q: u64) -> Result<bool, String> {
    if key == "Gk" {
        return row.map(|r| r == label).ok_or_else(|| "`Gk` used outside a G_k row".to_string());
    }
    if let Some(rest) = key.strip_prefix("G*") {
        if !is_generic(label, q) {
            return Ok(false);
        }
        for ex in rest.split('!').skip(1) {
            let excluded = match ex {
                "k" => row.ok_or_else(|| "`G*!k` used outside a G_k row".to_string())?,
                k => GroupLabel::parse(&format!("G{k}"), q)?,
            };
            if excluded == label {
                return Ok(false);
            }
        }
        return Ok(true);
    }
    Ok(GroupLabel::parse(key, q)? == label)
}

/// One evaluated cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellCheck {
    /// Table id, row key and column key, e.g. `cross/... [Zq:Zp2, Zp2q]`.
    pub anchor: String,
    pub additive: String,
    pub mul: String,
    pub kernel: Option<usize>,
    pub expected: usize,
    pub got: usize,
}

/// Outcome of [`verify_tables`].
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct TableCheck {
    /// Tables in regime for `(p, q)`.
    pub tables: Vec<String>,
    pub cells_checked: usize,
    /// Cells whose count differs, including computed classes no cell
    /// accounts for (`expected = 0`).
    pub diffs: Vec<CellCheck>,
    /// Tables about additive groups the report does not contain.
    pub not_computed: Vec<String>,
}

impl TableCheck {
    pub fn passed(&self) -> bool {
        self.diffs.is_empty() && self.not_computed.is_empty()
    }
}

impl ExpectedTable {
    pub fn applies(&self, p: u64, q: u64) -> Result<bool, ExpectedError> {
        scope(p, q).eval_bool(&self.regime).map_err(|e| self.expr_err(&self.regime, e))
    }

    fn expr_err(&self, src: &str, source: ExprError) -> ExpectedError {
        ExpectedError::Expr { table: self.id.clone(), src: src.to_string(), source }
    }

    fn cell(&self, p: u64, q: u64, src: &str) -> Result<usize, ExpectedError> {
        if src == "-" {
            return Ok(0);
        }
        let v = scope(p, q).eval_int(src).map_err(|e| self.expr_err(src, e))?;
        usize::try_from(v).map_err(|_| ExpectedError::Table { table: self.id.clone(), msg: format!("`{src}` is negative") })
    }

    fn matching(&self, key: &str, labels: &[GroupLabel], row: Option<GroupLabel>, q: u64) -> Result<Vec<GroupLabel>, ExpectedError> {
        let mut out = Vec::new();
        for &l in labels {
            if key_matches(key, l, row, q).map_err(|msg| ExpectedError::Table { table: self.id.clone(), msg })? {
                out.push(l);
            }
        }
        Ok(out)
    }

    /// Compares against `report`, appending to `check`.
    fn verify(&self, report: &ClassificationReport, check: &mut TableCheck) -> Result<(), ExpectedError> {
        let (p, q) = (report.p, report.q);
        let labels = report.params.labels();
        let additives: Vec<(GroupLabel, Option<&ExpectedRow>)> = match self.kind {
            TableKind::Cross => {
                let mut v = Vec::new();
                for row in &self.rows {
                    for a in self.matching(&row.key, &labels, None, q)? {
                        v.push((a, Some(row)));
                    }
                }
                v
            }
            TableKind::Kernel => {
                let key = self.additive.as_deref().unwrap_or_default();
                self.matching(key, &labels, None, q)?.into_iter().map(|a| (a, None)).collect()
            }
        };
        for (add, row) in additives {
            if report.get(add).is_none() {
                check.not_computed.push(format!("{} [{}]", self.id, add.token(q)));
                continue;
            }
            let mut covered: BTreeSet<(GroupLabel, Option<usize>)> = BTreeSet::new();
            let mut compare = |anchor: String, mul: GroupLabel, kernel: Option<usize>, expected: usize| {
                let got = match kernel {
                    Some(k) => report.kernel_counts(add).get(&(mul, k)).copied().unwrap_or(0),
                    None => report.cross_counts().get(&(add, mul)).copied().unwrap_or(0),
                };
                covered.insert((mul, kernel));
                check.cells_checked += 1;
                if got != expected {
                    check.diffs.push(CellCheck {
                        anchor,
                        additive: add.token(q),
                        mul: mul.token(q),
                        kernel,
                        expected,
                        got,
                    });
                }
            };
            let rows: Vec<&ExpectedRow> = match row {
                Some(r) => vec![r],
                None => self.rows.iter().collect(),
            };
            for r in rows {
                let kernel = match self.kind {
                    TableKind::Cross => None,
                    TableKind::Kernel => Some(self.cell(p, q, &r.key)?),
                };
                for (col, src) in self.columns.iter().zip(&r.cells) {
                    let expected = self.cell(p, q, src)?;
                    for mul in self.matching(col, &labels, Some(add), q)? {
                        compare(format!("{} [{}, {}]", self.id, r.key, col), mul, kernel, expected);
                    }
                }
            }
            // classes that no cell of this table accounts for
            let found: Vec<(GroupLabel, Option<usize>, usize)> = match self.kind {
                TableKind::Cross => report
                    .cross_counts()
                    .iter()
                    .filter(|((a, _), _)| *a == add)
                    .map(|((_, m), &c)| (*m, None, c))
                    .collect(),
                TableKind::Kernel => report.kernel_counts(add).iter().map(|((m, k), &c)| (*m, Some(*k), c)).collect(),
            };
            for (mul, kernel, got) in found {
                if !covered.contains(&(mul, kernel)) {
                    check.diffs.push(CellCheck {
                        anchor: format!("{} [not in table]", self.id),
                        additive: add.token(q),
                        mul: mul.token(q),
                        kernel,
                        expected: 0,
                        got,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Checks every table in regime for the report's `(p, q)`, cell by cell.
pub fn verify_tables(report: &ClassificationReport) -> Result<TableCheck, ExpectedError> {
    verify_tables_with(builtin(), report)
}

pub fn verify_tables_with(db: &ExpectedDb, report: &ClassificationReport) -> Result<TableCheck, ExpectedError> {
    let mut check = TableCheck::default();
    for t in &db.tables {
        if t.applies(report.p, report.q)? {
            check.tables.push(t.id.clone());
            t.verify(report, &mut check)?;
        }
    }
    Ok(check)
}

/// Closed-form totals at `(p, q)`, if a formula covers it.
pub fn expected_totals(p: u64, q: u64) -> Result<Option<(String, Totals)>, ExpectedError> {
    let s = scope(p, q);
    for t in &builtin().totals {
        let err = |src: &str, source| ExpectedError::Expr { table: t.id.clone(), src: src.to_string(), source };
        if s.eval_bool(&t.regime).map_err(|e| err(&t.regime, e))? {
            let v = |src: &str| -> Result<usize, ExpectedError> {
                let x = s.eval_int(src).map_err(|e| err(src, e))?;
                Ok(x as usize)
            };
            let totals = Totals { abelian: v(&t.abelian)?, nonabelian: v(&t.nonabelian)?, total: v(&t.total)? };
            return Ok(Some((t.id.clone(), totals)));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureCheck {
    pub p: u64,
    pub q: u64,
    pub computed: Totals,
    /// Absent outside the regimes the closed forms cover.
    pub formula: Option<Totals>,
    pub regime: Option<String>,
}

impl ConjectureCheck {
    pub fn matches(&self) -> Option<bool> {
        self.formula.map(|f| f == self.computed)
    }
}

/// Compares the computed totals with the closed forms.
pub fn conjecture(report: &ClassificationReport) -> Result<ConjectureCheck, ExpectedError> {
    let found = expected_totals(report.p, report.q)?;
    Ok(ConjectureCheck {
        p: report.p,
        q: report.q,
        computed: report.totals(),
        regime: found.as_ref().map(|(id, _)| id.clone()),
        formula: found.map(|(_, t)| t),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::{classify, ClassifyOptions};

    #[test]
    fn bundled_tables_parse_and_cells_are_nonnegative() {
        let db = builtin();
        assert!(db.tables.len() >= 20);
        for (p, q) in [(2, 5), (2, 7), (2, 13), (3, 7), (3, 19), (5, 3), (7, 3), (11, 5), (13, 3)] {
            for t in &db.tables {
                if t.applies(p, q).unwrap() {
                    for r in &t.rows {
                        for c in &r.cells {
                            t.cell(p, q, c).unwrap();
                        }
                    }
                }
            }
        }
    }

    /// Per-additive totals of the cross tables equal the sums of the
    /// matching kernel tables, wherever both exist.
    #[test]
    fn cross_and_kernel_tables_agree() {
        let db = builtin();
        for (p, q) in [(2, 7), (2, 5), (3, 7), (3, 19), (7, 3), (13, 3)] {
            let labels = crate::families::FamilyParams::derive(p, q).unwrap().labels();
            for k in db.tables.iter().filter(|t| t.kind == TableKind::Kernel && t.applies(p, q).unwrap()) {
                let add = GroupLabel::parse(k.additive.as_ref().unwrap(), q).unwrap();
                // a column counts once per group it matches, possibly zero times
                let weight = |t: &ExpectedTable, col: &str| t.matching(col, &labels, Some(add), q).unwrap().len();
                let kernel_sum: usize = k
                    .rows
                    .iter()
                    .flat_map(|r| k.columns.iter().zip(&r.cells))
                    .map(|(col, c)| weight(k, col) * k.cell(p, q, c).unwrap())
                    .sum();
                for x in db.tables.iter().filter(|t| t.kind == TableKind::Cross && t.applies(p, q).unwrap()) {
                    for r in &x.rows {
                        if x.matching(&r.key, &labels, None, q).unwrap().contains(&add) {
                            let row_sum: usize =
                                x.columns.iter().zip(&r.cells).map(|(col, c)| weight(x, col) * x.cell(p, q, c).unwrap()).sum();
                            assert_eq!(row_sum, kernel_sum, "{} vs {} at ({p},{q})", k.id, x.id);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn patterns() {
        let q = 7;
        let g2 = GroupLabel::parse("G2", q).unwrap();
        let g3 = GroupLabel::parse("G3", q).unwrap();
        assert!(key_matches("G*", g2, None, q).unwrap());
        assert!(!key_matches("G*!2", g2, None, q).unwrap());
        assert!(key_matches("G*!2", g3, None, q).unwrap());
        assert!(!key_matches("G*!k", g3, Some(g3), q).unwrap());
        assert!(key_matches("Gk", g3, Some(g3), q).unwrap());
        assert!(!key_matches("G*", GroupLabel::Gk(0), None, q).unwrap());
        assert!(key_matches("G-1", GroupLabel::Gk(6), None, q).unwrap());
    }

    #[test]
    fn order_28_matches_and_a_wrong_cell_is_reported() {
        let r = classify(2, 7, &ClassifyOptions::default()).unwrap();
        let check = verify_tables(&r).unwrap();
        assert!(check.passed(), "{:?}", check.diffs);
        assert_eq!(check.tables.len(), 3);

        let mut db = builtin().clone();
        let t = db.tables.iter_mut().find(|t| t.id == "cross/q=1 mod p/p=2").unwrap();
        t.rows[0].cells[0] = "3".into();
        let check = verify_tables_with(&db, &r).unwrap();
        assert_eq!(check.diffs.len(), 1);
        assert_eq!((check.diffs[0].expected, check.diffs[0].got), (3, 2));
    }

    #[test]
    fn conjecture_regimes() {
        assert_eq!(expected_totals(2, 3).unwrap(), None);
        assert_eq!(expected_totals(5, 3).unwrap(), None);
        let (_, t) = expected_totals(3, 7).unwrap().unwrap();
        assert_eq!((t.abelian, t.nonabelian, t.total), (11, 36, 47));
        let (_, t) = expected_totals(3, 19).unwrap().unwrap();
        assert_eq!(t.total, 6 * 9 + 18 + 8);
        let (_, t) = expected_totals(3, 5).unwrap().unwrap();
        assert_eq!(t.total, 4);
    }
}
