//! Fill a cache directory, read it back, and export the report as CSV.
//!
//!     cargo run --release --example export_cache -- /tmp/skewbrace-cache

use std::path::PathBuf;

use skewbrace::report::export::to_csv;
use skewbrace::report::{classify, ClassifyOptions};

fn main() {
    let dir: PathBuf = std::env::args().nth(1).map_or_else(|| std::env::temp_dir().join("skewbrace-cache"), PathBuf::from);
    let opts = ClassifyOptions { cache_dir: Some(dir.clone()), ..Default::default() };
    let first = classify(2, 13, &opts).expect("classification");
    let second = classify(2, 13, &opts).expect("classification from cache");
    for (a, b) in first.additive.iter().zip(&second.additive) {
        assert_eq!(a.classes, b.classes);
        println!(
            "{:<24} cached: {:<5} enumerate {:>7}us, then {:>7}us",
            a.additive, b.from_cache, a.timing.enumeration_us, b.timing.enumeration_us
        );
    }
    println!("cache files in {}", dir.display());
    print!("{}", to_csv(&second).expect("csv"));
}
