//! Acceptance run: one PASS/FAIL line per criterion on stdout.
//!
//!     cargo test --release --test acceptance -- --nocapture
//!
//! The lines are written straight to the process stdout so they show up
//! without `--nocapture` too.

use std::collections::BTreeMap;
use std::io::Write;
use std::sync::Arc;
use std::time::{Duration, Instant};

use skewbrace::braces::{brace_from_regular, check_axioms};
use skewbrace::enumerate::{enumerate_dfs, enumerate_stratified, orbit_partition, Strategy};
use skewbrace::families::{all_groups, structured_aut, FamilyParams, ParamChoice};
use skewbrace::groups::{compute_automorphisms, GroupLabel};
use skewbrace::holomorph::Holomorph;
use skewbrace::report::expected::verify_tables;
use skewbrace::report::export::to_markdown;
use skewbrace::report::{classify, verify_catalog, Budget, ClassificationReport, ClassifyOptions, Totals};
use skewbrace::ybe::{check_nondegenerate, check_ybe, solution_from_brace};

fn line(s: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{s}");
    let _ = out.flush();
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn report_line(n: u32, title: &str, started: Instant, o: &Outcome) {
    let status = if o.ok { "PASS" } else { "FAIL" };
    line(&format!("criterion {n}: {status}  {title} ({:.1?}) {}", started.elapsed(), o.detail));
}

fn totals(r: &ClassificationReport) -> String {
    let Totals { abelian, nonabelian, total } = r.totals();
    format!("A={abelian} B={nonabelian} s={total}")
}

fn counts_and_tables(p: u64, q: u64, strategy: Strategy, want: Totals, limit: Duration) -> Outcome {
    let t = Instant::now();
    let opts = ClassifyOptions { strategy: Some(strategy), ..Default::default() };
    let r = match classify(p, q, &opts) {
        Ok(r) => r,
        Err(e) => return Outcome { ok: false, detail: e.to_string() },
    };
    let elapsed = t.elapsed();
    let check = verify_tables(&r).expect("expected tables evaluate");
    let ok = r.is_complete() && r.totals() == want && check.passed() && !check.tables.is_empty() && elapsed <= limit;
    Outcome {
        ok,
        detail: format!(
            "{}; {} tables, {} cells, {} differences",
            totals(&r),
            check.tables.len(),
            check.cells_checked,
            check.diffs.len()
        ),
    }
}

fn criterion_5() -> Outcome {
    let (p, q) = (5, 3);
    let opts = ClassifyOptions { additive: Some(GroupLabel::GF), ..Default::default() };
    let r = classify(p, q, &opts).unwrap();
    let mut by_kernel: BTreeMap<usize, usize> = BTreeMap::new();
    for ((_, k), c) in r.kernel_counts(GroupLabel::GF) {
        *by_kernel.entry(k).or_default() += c;
    }
    let want: BTreeMap<usize, usize> = [(1, 5), (3, 1), (25, 2), (75, 1)].into();
    Outcome { ok: by_kernel == want, detail: format!("|ker| -> classes {by_kernel:?}") }
}

/// Exhaustive checks over every class of every group at one order.
fn properties_at(p: u64, q: u64) -> Result<usize, String> {
    let params = FamilyParams::derive(p, q).unwrap();
    let mut braces = 0;
    for fam in all_groups(&params).unwrap() {
        let name = format!("{} at ({p}, {q})", fam.name());
        let aut = structured_aut(&fam).unwrap().aut;
        if fam.group.order() <= 100 {
            let brute = compute_automorphisms(&fam.group, 1 << 17).unwrap();
            if brute.len() != aut.len() || (0..aut.len()).any(|i| brute.perm(i) != aut.perm(i)) {
                return Err(format!("{name}: structured Aut differs from brute force"));
            }
        }
        let hol = Holomorph::new(fam.group.clone(), Arc::new(aut));
        let dfs = enumerate_dfs(&hol);
        if dfs != enumerate_stratified(&hol) {
            return Err(format!("{name}: strategies disagree"));
        }
        let n = hol.n();
        for o in orbit_partition(&hol, &dfs).map_err(|e| e.to_string())? {
            let b = brace_from_regular(&hol, &o.representative).map_err(|e| e.to_string())?;
            check_axioms(&b).map_err(|e| format!("{name}: {e:?}"))?;
            let r = solution_from_brace(&b);
            check_ybe(&r).map_err(|e| format!("{name}: braided relation fails at {e:?}"))?;
            check_nondegenerate(&r).map_err(|e| format!("{name}: {e:?}"))?;
            for x in 0..n {
                for y in 0..n {
                    let xy = b.circ(x, y);
                    if (0..n).any(|z| b.lambda(xy, z) != b.lambda(x, b.lambda(y, z))) {
                        return Err(format!("{name}: lambda not a homomorphism at ({x}, {y})"));
                    }
                }
            }
            if o.representative.kernel_size() * o.pi2_size != n {
                return Err(format!("{name}: |ker| |pi2| != n"));
            }
            braces += 1;
        }
    }
    Ok(braces)
}

fn criterion_6() -> Outcome {
    let mut braces = 0;
    for (p, q) in [(2, 5), (2, 7), (2, 13), (3, 7), (5, 3)] {
        match properties_at(p, q) {
            Ok(n) => braces += n,
            Err(e) => return Outcome { ok: false, detail: e },
        }
    }
    Outcome { ok: true, detail: format!("{braces} braces checked") }
}

fn criterion_7() -> Outcome {
    let mut lemmas = 0;
    let mut manual = 0;
    for (p, q) in [(2, 5), (2, 7), (3, 7), (5, 3)] {
        let check = verify_catalog(p, q, &ClassifyOptions::default(), None).unwrap();
        if check.failed() > 0 || !check.skipped.is_empty() {
            let failed: Vec<_> = check.lemmas.iter().filter(|l| !l.discrepancies.is_empty()).map(|l| &l.id).collect();
            return Outcome { ok: false, detail: format!("({p}, {q}): failed {failed:?}") };
        }
        lemmas += check.lemmas.len();
        manual += check.lemmas.iter().filter(|l| l.status == skewbrace::catalog::LemmaStatus::Manual).count();
    }
    Outcome { ok: true, detail: format!("{lemmas} lemma checks, {manual} count-only") }
}

/// The second-smallest admissible parameters give the same tables. `h`
/// only exists when `q = 1 (mod p^2)`, so at order 63 only `r` moves; order
/// 171 moves both.
fn criterion_8() -> Outcome {
    let choice = ParamChoice { r: 1, h: 1, ..Default::default() };
    let mut detail = Vec::new();
    let mut ok = true;
    for (p, q) in [(3, 7), (3, 19)] {
        let base = classify(p, q, &ClassifyOptions::default()).unwrap();
        let other = classify(p, q, &ClassifyOptions { choice, ..Default::default() }).unwrap();
        let moved = base.params.r != other.params.r && (base.params.h.is_none() || base.params.h != other.params.h);
        let same = to_markdown(&base) == to_markdown(&other);
        ok &= moved && same;
        detail.push(format!(
            "order {}: r {:?}->{:?}, h {:?}->{:?}, tables {}",
            p * p * q,
            base.params.r.unwrap_or(0),
            other.params.r.unwrap_or(0),
            base.params.h,
            other.params.h,
            if same { "identical" } else { "differ" }
        ));
    }
    Outcome { ok, detail: detail.join("; ") }
}

#[test]
fn criteria_1_to_8() {
    let min = |m: u64| Duration::from_secs(60 * m);
    let mut all = true;
    let mut run = |n: u32, title: &str, f: &dyn Fn() -> Outcome| {
        let t = Instant::now();
        let o = f();
        report_line(n, title, t, &o);
        all &= o.ok;
    };
    let t = |abelian, nonabelian| Totals { abelian, nonabelian, total: abelian + nonabelian };
    run(1, "order 20", &|| counts_and_tables(2, 5, Strategy::Dfs, t(11, 32), min(1)));
    run(2, "order 28", &|| counts_and_tables(2, 7, Strategy::Dfs, t(9, 20), min(1)));
    run(3, "order 52", &|| counts_and_tables(2, 13, Strategy::Dfs, t(11, 32), min(5)));
    run(4, "order 63, stratified", &|| counts_and_tables(3, 7, Strategy::Stratified, t(11, 36), min(30)));
    run(5, "order 75, G_F kernel sizes", &criterion_5);
    run(6, "property suite", &criterion_6);
    run(7, "witness catalog", &criterion_7);
    run(8, "parameter independence", &criterion_8);
    assert!(all, "some acceptance criteria failed");
}

#[test]
#[ignore = "order 147; run with --ignored"]
fn criterion_9_order_147() {
    let t = Instant::now();
    let mut sums = Vec::new();
    for label in [GroupLabel::P2SemidirectQ, GroupLabel::Gk(0)] {
        let opts = ClassifyOptions { additive: Some(label), budget: Budget::LARGE, ..Default::default() };
        let r = classify(7, 3, &opts).unwrap();
        sums.push(r.get(label).unwrap().classes.len());
    }
    let o = Outcome { ok: sums == [8, 24], detail: format!("row sums {sums:?}") };
    report_line(9, "order 147, Zp2:Zq and G0 rows", t, &o);
    assert!(o.ok);
}
