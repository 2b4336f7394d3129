//! Property tests over every skew brace of the small orders.

mod common;

use proptest::prelude::*;

use skewbrace::braces::{brace_from_regular, check_axioms};
use skewbrace::enumerate::{enumerate_dfs, enumerate_stratified};
use skewbrace::families::{all_groups, aut_order_formula, structured_aut, FamilyParams};
use skewbrace::groups::compute_automorphisms;
use skewbrace::ybe::{check_nondegenerate, check_ybe, export_text, parse_text, solution_from_brace};

use common::{families, ORDERS_TO_100, SMALL_ORDERS};

/// Picks an order, a family and a class by index, wrapping around.
fn pick() -> impl Strategy<Value = ((u64, u64), usize, usize)> {
    (prop::sample::select(SMALL_ORDERS), any::<usize>(), any::<usize>()).prop_map(|(pq, f, o)| (pq, f, o))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn brace_axioms_hold(((p, q), f, o) in pick()) {
        let fams = families(p, q);
        let fam = &fams[f % fams.len()];
        let class = &fam.orbits[o % fam.orbits.len()];
        let b = brace_from_regular(&fam.hol, &class.representative).unwrap();
        prop_assert!(check_axioms(&b).is_ok());
    }

    #[test]
    fn solutions_are_braided_and_nondegenerate(((p, q), f, o) in pick()) {
        let fams = families(p, q);
        let fam = &fams[f % fams.len()];
        let class = &fam.orbits[o % fam.orbits.len()];
        let b = brace_from_regular(&fam.hol, &class.representative).unwrap();
        let r = solution_from_brace(&b);
        prop_assert!(check_ybe(&r).is_ok());
        prop_assert!(check_nondegenerate(&r).is_ok());
        prop_assert_eq!(parse_text(&export_text(&r)).unwrap(), r);
    }

    #[test]
    fn lambda_is_a_homomorphism(((p, q), f, o) in pick(), x in any::<usize>(), y in any::<usize>()) {
        let fams = families(p, q);
        let fam = &fams[f % fams.len()];
        let class = &fam.orbits[o % fam.orbits.len()];
        let b = brace_from_regular(&fam.hol, &class.representative).unwrap();
        let n = b.order();
        let (x, y) = (x % n, y % n);
        let xy = b.circ(x, y);
        for z in 0..n {
            prop_assert_eq!(b.lambda(xy, z), b.lambda(x, b.lambda(y, z)));
        }
    }

    #[test]
    fn kernel_times_image_is_the_order(((p, q), f, o) in pick()) {
        let fams = families(p, q);
        let fam = &fams[f % fams.len()];
        let class = &fam.orbits[o % fam.orbits.len()];
        let n = (p * p * q) as usize;
        prop_assert_eq!(class.representative.kernel_size() * class.pi2_size, n);
        let b = brace_from_regular(&fam.hol, &class.representative).unwrap();
        prop_assert_eq!(b.kernel().len(), class.representative.kernel_size());
    }
}

#[test]
fn strategies_agree_on_every_small_holomorph() {
    for &(p, q) in SMALL_ORDERS {
        for fam in families(p, q).iter() {
            let dfs = enumerate_dfs(&fam.hol);
            let strat = enumerate_stratified(&fam.hol);
            assert_eq!(dfs, strat, "{} at ({p}, {q})", fam.fam.name());
        }
    }
}

#[test]
fn structured_automorphisms_equal_brute_force() {
    for &(p, q) in ORDERS_TO_100 {
        let params = FamilyParams::derive(p, q).unwrap();
        for fam in all_groups(&params).unwrap() {
            let sa = structured_aut(&fam).unwrap().aut;
            let brute = compute_automorphisms(&fam.group, 1 << 17).unwrap();
            assert_eq!(sa.len(), brute.len(), "{} at ({p}, {q})", fam.name());
            assert_eq!(sa.len(), aut_order_formula(fam.label, p, q));
            for i in 0..sa.len() {
                assert_eq!(sa.perm(i), brute.perm(i));
            }
        }
    }
}
