//! Enumerate regular subgroups of every holomorph of a given order with both
//! strategies and compare.
//!
//!     cargo run --release --example regular_subgroups -- 2 5

use std::sync::Arc;
use std::time::Instant;

use skewbrace::enumerate::{enumerate_dfs, enumerate_stratified, orbit_partition};
use skewbrace::families::{all_groups, structured_aut, FamilyParams};
use skewbrace::holomorph::Holomorph;

fn main() {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().expect("prime")).collect();
    let (p, q) = match args[..] {
        [p, q] => (p, q),
        _ => (2, 5),
    };
    let params = FamilyParams::derive(p, q).expect("valid primes");
    for fam in all_groups(&params).expect("families") {
        let aut = structured_aut(&fam).expect("automorphisms");
        let hol = Holomorph::new(fam.group.clone(), Arc::new(aut.aut));
        let t = Instant::now();
        let dfs = enumerate_dfs(&hol);
        let t_dfs = t.elapsed();
        let t = Instant::now();
        let strat = enumerate_stratified(&hol);
        let t_strat = t.elapsed();
        let orbits = orbit_partition(&hol, &dfs).expect("closed under conjugation");
        println!(
            "{:<12} |Aut| = {:>5}  regular = {:>6}  classes = {:>3}  agree = {}  ({:.2?} / {:.2?})",
            fam.name(),
            hol.aut.len(),
            dfs.len(),
            orbits.len(),
            dfs == strat,
            t_dfs,
            t_strat
        );
    }
}
