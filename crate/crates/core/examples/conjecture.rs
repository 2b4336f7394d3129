//! Totals at several orders against the closed forms.
//!
//!     cargo run --release --example conjecture -- 2,5 2,7 3,7 3,19

use skewbrace::report::expected::conjecture;
use skewbrace::report::{classify, ClassifyOptions};

fn main() {
    let mut pairs: Vec<(u64, u64)> = std::env::args()
        .skip(1)
        .map(|a| {
            let (p, q) = a.split_once(',').expect("p,q");
            (p.parse().unwrap(), q.parse().unwrap())
        })
        .collect();
    if pairs.is_empty() {
        pairs = vec![(2, 5), (2, 7), (2, 11), (2, 13), (3, 5), (3, 7), (3, 11), (3, 13)];
    }
    println!("{:>5} {:>3} {:>3} {:>18} {:>18}", "n", "p", "q", "computed A/B/s", "formula A/B/s");
    for (p, q) in pairs {
        let report = classify(p, q, &ClassifyOptions::default()).expect("classification");
        let c = conjecture(&report).expect("formula");
        let t = |a: usize, b: usize, s: usize| format!("{a}/{b}/{s}");
        println!(
            "{:>5} {:>3} {:>3} {:>18} {:>18}{}",
            report.n(),
            p,
            q,
            t(c.computed.abelian, c.computed.nonabelian, c.computed.total),
            c.formula.map_or("-".into(), |f| t(f.abelian, f.nonabelian, f.total)),
            if c.matches() == Some(false) { "  MISMATCH" } else { "" }
        );
    }
}
