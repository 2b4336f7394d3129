//! Full classification at one order, printed as Markdown tables.
//!
//!     cargo run --release --example classify_order -- 3 7

use skewbrace::report::export::to_markdown;
use skewbrace::report::{classify, ClassifyOptions};

fn main() {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().expect("prime")).collect();
    let (p, q) = match args[..] {
        [p, q] => (p, q),
        _ => (2, 7),
    };
    let report = classify(p, q, &ClassifyOptions::default()).expect("classification");
    print!("{}", to_markdown(&report));
    for a in &report.additive {
        let t = a.timing;
        eprintln!(
            "{:<24} aut {:>8}us  enumerate {:>8}us  braces {:>8}us",
            a.additive, t.automorphisms_us, t.enumeration_us, t.braces_us
        );
    }
}
