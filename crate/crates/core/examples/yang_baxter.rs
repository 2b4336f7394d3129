//! Yang-Baxter solutions from every skew brace of one order, checked and
//! round-tripped through the text format.
//!
//!     cargo run --release --example yang_baxter -- 2 5

use skewbrace::report::{classify, orbit_brace, ClassifyOptions};
use skewbrace::ybe::{check_nondegenerate, check_ybe, export_text, parse_text, solution_from_brace};

fn main() {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().expect("prime")).collect();
    let (p, q) = match args[..] {
        [p, q] => (p, q),
        _ => (2, 5),
    };
    let opts = ClassifyOptions::default();
    let report = classify(p, q, &opts).expect("classification");
    let mut involutive = 0;
    let mut total = 0;
    for a in &report.additive {
        for i in 0..a.classes.len() {
            let b = orbit_brace(p, q, a.label(q), i, &opts).expect("brace");
            let r = solution_from_brace(&b);
            check_ybe(&r).expect("braided relation");
            check_nondegenerate(&r).expect("non-degenerate");
            assert_eq!(parse_text(&export_text(&r)).unwrap(), r);
            involutive += r.is_involutive() as usize;
            total += 1;
        }
    }
    println!("{total} solutions of size {}, all non-degenerate; {involutive} involutive", report.n());
}
