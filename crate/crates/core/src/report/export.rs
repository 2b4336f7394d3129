//! Report output as JSON, CSV and Markdown.
//!
//! The Markdown and CSV forms hold counts only, no timings or parameter
//! values, so two runs that find the same classes produce the same bytes.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::{ClassificationReport, ReportError, REPORT_VERSION};
use crate::groups::GroupLabel;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Md,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "md" | "markdown" => Ok(Format::Md),
            _ => Err(format!("unknown format `{s}` (json, csv, md)")),
        }
    }
}

pub fn render(report: &ClassificationReport, format: Format) -> Result<String, ReportError> {
    match format {
        Format::Json => to_json(report),
        Format::Csv => to_csv(report),
        Format::Md => Ok(to_markdown(report)),
    }
}

pub fn to_json(report: &ClassificationReport) -> Result<String, ReportError> {
    let mut s = serde_json::to_string_pretty(report)?;
    s.push('\n');
    Ok(s)
}

pub fn from_json(s: &str) -> Result<ClassificationReport, ReportError> {
    let v: serde_json::Value = serde_json::from_str(s)?;
    let version = v.get("version").and_then(|x| x.as_u64()).unwrap_or(0) as u32;
    if version != REPORT_VERSION {
        return Err(ReportError::Version(version));
    }
    Ok(serde_json::from_value(v)?)
}

/// One line per (additive, multiplicative, `|ker λ|`) with the number of
/// classes.
pub fn to_csv(report: &ClassificationReport) -> Result<String, ReportError> {
    let q = report.q;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["additive", "multiplicative", "kernel_size", "classes"])?;
    for add in sorted(report.additive.iter().map(|a| a.label(q)), q) {
        let counts = report.kernel_counts(add);
        let mut rows: Vec<_> = counts.iter().collect();
        rows.sort_by_key(|((m, k), _)| (rank(*m, q), *k));
        for ((mul, k), c) in rows {
            w.write_record([add.token(q), mul.token(q), k.to_string(), c.to_string()])?;
        }
    }
    let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// Position of a group in tables: cyclic, the non-abelian families in
/// order, then the remaining abelian group and the `G_k` family.
pub fn rank(l: GroupLabel, q: u64) -> (u8, u64) {
    match l {
        GroupLabel::CyclicP2Q => (0, 0),
        GroupLabel::P2SemidirectQ => (1, 0),
        GroupLabel::QbyP2OrdP => (2, 0),
        GroupLabel::QbyP2OrdP2 => (3, 0),
        GroupLabel::PxPQ => (4, 0),
        GroupLabel::Gk(0) => (6, 0),
        GroupLabel::Gk(k) if q > 2 && k == q - 1 => (7, 0),
        GroupLabel::Gk(1) => (8, 0),
        GroupLabel::Gk(k) => (5, k),
        GroupLabel::GF => (9, 0),
        GroupLabel::PxQbyP => (10, 0),
    }
}

fn sorted(labels: impl IntoIterator<Item = GroupLabel>, q: u64) -> Vec<GroupLabel> {
    let mut v: Vec<GroupLabel> = labels.into_iter().collect();
    v.sort_by_key(|&l| rank(l, q));
    v.dedup();
    v
}

fn cell(n: usize) -> String {
    if n == 0 {
        "-".into()
    } else {
        n.to_string()
    }
}

fn table(out: &mut String, corner: &str, cols: &[String], rows: &[(String, Vec<usize>)]) {
    let _ = writeln!(out, "| {corner} | {} |", cols.join(" | "));
    let _ = writeln!(out, "|---|{}", "---|".repeat(cols.len()));
    for (name, cells) in rows {
        let cells: Vec<String> = cells.iter().map(|&c| cell(c)).collect();
        let _ = writeln!(out, "| {name} | {} |", cells.join(" | "));
    }
}

pub fn to_markdown(report: &ClassificationReport) -> String {
    let (p, q) = (report.p, report.q);
    let mut out = String::new();
    let _ = writeln!(out, "# Skew braces of order {} (p = {p}, q = {q})\n", report.n());
    let _ = writeln!(out, "Case: {}\n", report.regime);

    let all = sorted(report.params.labels(), q);
    let computed = sorted(report.additive.iter().map(|a| a.label(q)), q);
    let cross = report.cross_counts();
    let cols: Vec<String> = all.iter().map(|l| l.display(q)).collect();
    for (title, abelian) in [("Non-abelian additive group", false), ("Abelian additive group", true)] {
        let rows: Vec<(String, Vec<usize>)> = computed
            .iter()
            .filter(|a| a.is_abelian() == abelian)
            .map(|&a| (a.display(q), all.iter().map(|&m| cross.get(&(a, m)).copied().unwrap_or(0)).collect()))
            .collect();
        if rows.is_empty() {
            continue;
        }
        let _ = writeln!(out, "## {title}\n");
        table(&mut out, "+ \\ ∘", &cols, &rows);
        out.push('\n');
    }

    for &a in &computed {
        let counts = report.kernel_counts(a);
        let muls = sorted(counts.keys().map(|(m, _)| *m), q);
        let kers: BTreeSet<usize> = counts.keys().map(|(_, k)| *k).collect();
        let cols: Vec<String> = muls.iter().map(|m| m.display(q)).collect();
        let rows: Vec<(String, Vec<usize>)> = kers
            .iter()
            .map(|&k| (k.to_string(), muls.iter().map(|&m| counts.get(&(m, k)).copied().unwrap_or(0)).collect()))
            .collect();
        let _ = writeln!(out, "## |ker λ| for additive group {}\n", a.display(q));
        table(&mut out, "ker \\ ∘", &cols, &rows);
        out.push('\n');
    }

    for s in &report.skipped {
        let _ = writeln!(out, "Not computed: {} (holomorph of order {})", s.additive, s.holomorph_order);
    }
    let t = report.totals();
    let _ = writeln!(
        out,
        "Totals: {} with abelian additive group, {} with non-abelian additive group, {} in all{}",
        t.abelian,
        t.nonabelian,
        t.total,
        if !report.skipped.is_empty() {
            " (incomplete)."
        } else if !report.is_complete() {
            " (listed additive groups only)."
        } else {
            "."
        }
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::{classify, Budget, ClassifyOptions};

    #[test]
    fn json_round_trip_and_version_check() {
        let r = classify(2, 5, &ClassifyOptions::default()).unwrap();
        let s = to_json(&r).unwrap();
        assert_eq!(from_json(&s).unwrap(), r);
        let bumped = s.replacen("\"version\": 1", "\"version\": 7", 1);
        assert!(matches!(from_json(&bumped), Err(ReportError::Version(7))));
    }

    #[test]
    fn csv_sums_to_total() {
        let r = classify(2, 5, &ClassifyOptions::default()).unwrap();
        let s = to_csv(&r).unwrap();
        let mut rd = csv::Reader::from_reader(s.as_bytes());
        let sum: usize = rd.records().map(|rec| rec.unwrap()[3].parse::<usize>().unwrap()).sum();
        assert_eq!(sum, 43);
        assert!(s.starts_with("additive,multiplicative,kernel_size,classes\n"));
    }

    #[test]
    fn markdown_marks_incomplete_reports() {
        let r = classify(2, 5, &ClassifyOptions { budget: Budget(200), ..Default::default() }).unwrap();
        let md = to_markdown(&r);
        assert!(md.contains("Not computed: "));
        assert!(md.trim_end().ends_with("(incomplete)."));
    }

    #[test]
    fn rank_orders_families() {
        let q = 7;
        let v = sorted([GroupLabel::Gk(1), GroupLabel::Gk(6), GroupLabel::Gk(2), GroupLabel::Gk(0), GroupLabel::CyclicP2Q], q);
        assert_eq!(v, [GroupLabel::CyclicP2Q, GroupLabel::Gk(2), GroupLabel::Gk(0), GroupLabel::Gk(6), GroupLabel::Gk(1)]);
    }
}
