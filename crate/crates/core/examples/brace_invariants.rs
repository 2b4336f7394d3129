//! Invariants of every skew brace with a chosen additive group.
//!
//!     cargo run --release --example brace_invariants -- 2 7 Zq:Zp2

use std::sync::Arc;

use skewbrace::braces::{brace_from_regular, check_axioms, invariants};
use skewbrace::enumerate::{enumerate_dfs, orbit_partition};
use skewbrace::families::{build_group, structured_aut, FamilyParams};
use skewbrace::groups::GroupLabel;
use skewbrace::holomorph::Holomorph;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (p, q, token) = match &args[..] {
        [p, q, t] => (p.parse().unwrap(), q.parse().unwrap(), t.clone()),
        _ => (2, 7, "Zq:Zp2".to_string()),
    };
    let params = FamilyParams::derive(p, q).expect("valid primes");
    let label = GroupLabel::parse(&token, q).expect("group token");
    let fam = build_group(label, &params).expect("group of this order");
    let aut = structured_aut(&fam).expect("automorphisms").aut;
    let hol = Holomorph::new(fam.group.clone(), Arc::new(aut));
    let orbits = orbit_partition(&hol, &enumerate_dfs(&hol)).expect("orbits");
    println!("{} braces with additive group {}", orbits.len(), fam.name());
    println!("{:>3} {:>5} {:>5} {:>5} {:<14} {:<6} product", "#", "orbit", "ker", "fix", "mul", "biskew");
    for (i, o) in orbits.iter().enumerate() {
        let b = brace_from_regular(&hol, &o.representative).expect("brace");
        check_axioms(&b).expect("brace axioms");
        let inv = invariants(&b, p, q).expect("invariants");
        let product = inv.direct_product.map_or("-".to_string(), |(i, j)| format!("{i} x {j}"));
        println!(
            "{:>3} {:>5} {:>5} {:>5} {:<14} {:<6} {}",
            i,
            o.size,
            inv.kernel_size,
            inv.fix_size,
            inv.mul_label.token(q),
            inv.bi_skew,
            product
        );
    }
}
