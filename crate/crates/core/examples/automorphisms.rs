//! Automorphism groups of the groups of order p^2 q: the structured
//! construction against brute force and the closed-form order.

use skewbrace::families::{all_groups, aut_order_formula, structured_aut, FamilyParams};
use skewbrace::groups::compute_automorphisms;

fn main() {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().expect("prime")).collect();
    let (p, q) = match args[..] {
        [p, q] => (p, q),
        _ => (2, 5),
    };
    let params = FamilyParams::derive(p, q).expect("valid primes");
    for fam in all_groups(&params).expect("families") {
        let structured = structured_aut(&fam).expect("automorphisms").aut;
        let formula = aut_order_formula(fam.label, p, q);
        // brute force only where it stays cheap
        let brute = if fam.group.order() <= 100 {
            compute_automorphisms(&fam.group, 1 << 20).ok().map(|a| a.len())
        } else {
            None
        };
        println!(
            "{:<24} {:<12} formula {:>6}  structured {:>6}  brute force {}",
            fam.name(),
            fam.label.token(q),
            formula,
            structured.len(),
            brute.map_or("-".to_string(), |b| b.to_string())
        );
    }
}
