#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use skewbrace::enumerate::{enumerate_dfs, orbit_partition, OrbitClass};
use skewbrace::families::{all_groups, structured_aut, FamilyGroup, FamilyParams};
use skewbrace::holomorph::Holomorph;

/// Orders `p^2 q` up to 75. Order 50 is the slow one: its `G_1` holomorph
/// has order 600000.
pub const SMALL_ORDERS: &[(u64, u64)] =
    &[(2, 3), (3, 2), (2, 5), (2, 7), (2, 11), (3, 5), (5, 2), (2, 13), (3, 7), (5, 3)];

/// Every order `p^2 q <= 100`.
pub const ORDERS_TO_100: &[(u64, u64)] = &[
    (2, 3), (3, 2), (2, 5), (2, 7), (2, 11), (3, 5), (5, 2), (2, 13), (3, 7), (2, 17), (5, 3), (2, 19), (2, 23),
    (7, 2), (3, 11),
];

pub struct Family {
    pub fam: FamilyGroup,
    pub hol: Holomorph,
    pub orbits: Vec<OrbitClass>,
}

type Families = Arc<Vec<Family>>;

/// Every group of order `p^2 q` with its holomorph and orbit
/// representatives, computed once per test binary.
pub fn families(p: u64, q: u64) -> Families {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u64), Families>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(f) = cache.lock().unwrap().get(&(p, q)) {
        return f.clone();
    }
    let params = FamilyParams::derive(p, q).unwrap();
    let list: Vec<Family> = all_groups(&params)
        .unwrap()
        .into_iter()
        .map(|fam| {
            let aut = structured_aut(&fam).unwrap().aut;
            let hol = Holomorph::new(fam.group.clone(), Arc::new(aut));
            let orbits = orbit_partition(&hol, &enumerate_dfs(&hol)).unwrap();
            Family { fam, hol, orbits }
        })
        .collect();
    let list = Arc::new(list);
    cache.lock().unwrap().insert((p, q), list.clone());
    list
}
