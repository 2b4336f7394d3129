//! Check the bundled witness catalog against a fresh enumeration.
//!
//!     cargo run --release --example catalog_witnesses -- 2 5

use skewbrace::catalog::{builtin, verify_lemma, LemmaStatus, WitnessContext};
use skewbrace::enumerate::{enumerate_dfs, orbit_partition};
use skewbrace::families::{all_groups, FamilyParams};

fn main() {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().expect("prime")).collect();
    let (p, q) = match args[..] {
        [p, q] => (p, q),
        _ => (2, 5),
    };
    let params = FamilyParams::derive(p, q).expect("valid primes");
    let mut failed = 0;
    for fam in all_groups(&params).expect("families") {
        let label = fam.label;
        let ctx = WitnessContext::new(fam).expect("automorphisms");
        let lemmas: Vec<_> = builtin().lemmas.iter().filter(|l| l.applies_to(label, q)).collect();
        if lemmas.is_empty() {
            continue;
        }
        let orbits = orbit_partition(&ctx.hol, &enumerate_dfs(&ctx.hol)).expect("closed under conjugation");
        for lemma in lemmas {
            let r = verify_lemma(&ctx, lemma, Some(&orbits));
            if r.status == LemmaStatus::NotApplicable {
                continue;
            }
            let count = match (r.expected_count, r.enumerated) {
                (Some(e), Some(g)) => format!("{e} expected, {g} enumerated"),
                (None, Some(g)) => format!("{g} enumerated"),
                _ => String::new(),
            };
            println!("{:<32} {:<9?} {}", r.id, r.status, count);
            for d in &r.discrepancies {
                println!("    {d}");
            }
            failed += (r.status == LemmaStatus::Failed) as usize;
        }
    }
    if failed > 0 {
        println!("{failed} lemma(s) failed");
        std::process::exit(1);
    }
}
