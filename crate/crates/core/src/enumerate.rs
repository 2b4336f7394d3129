//! Enumeration of the regular subgroups of a holomorph, and their partition
//! into `Aut(A)`-conjugacy classes.
//!
//! Two independent strategies are provided so that each can audit the other.
//!
//! * [`enumerate_dfs`] grows semiregular subgroups. At every node it takes
//!   the least element of `A` not yet covered by `π_1` and branches over the
//!   automorphisms it can be paired with. A regular subgroup contains exactly
//!   one element over each point of `A`, so every regular subgroup is reached
//!   along exactly one path.
//! * [`enumerate_stratified`] runs over the conjugacy classes of subgroups
//!   `K ≤ Aut(A)` of order dividing `|A|` and over the subgroups `N ≤ A` of
//!   order `|A| / |K|`, and searches for lifts of generators of `K` that
//!   close up to a regular subgroup with `π_2 = K` and kernel `N`.

use std::collections::{HashMap, HashSet, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::holomorph::{HolElem, Holomorph, RegularSubgroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumError {
    #[error("conjugate of a listed subgroup is missing from the list")]
    NotConjugationClosed,
    #[error("strategies disagree: {dfs} subgroups by search, {stratified} by strata")]
    StrategyMismatch { dfs: usize, stratified: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Dfs,
    Stratified,
    Both,
}

impl std::str::FromStr for Strategy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "dfs" => Ok(Strategy::Dfs),
            "stratified" => Ok(Strategy::Stratified),
            "both" => Ok(Strategy::Both),
            _ => Err(format!("unknown strategy `{s}`")),
        }
    }
}

const NONE: u32 = u32::MAX;

/// For each `a`, the automorphisms `f` such that `⟨(a, f)⟩` meets each fibre
/// of `π_1` at most once and has order dividing `|A|`.
fn cyclic_candidates(hol: &Holomorph, a: usize) -> Vec<u32> {
    let n = hol.n();
    let mut out = Vec::new();
    let mut hit = vec![false; n];
    for f in 0..hol.aut.len() {
        let x = HolElem::new(a, f);
        hit.iter_mut().for_each(|h| *h = false);
        let mut y = x;
        let mut k = 1;
        let mut ok = true;
        while y != hol.identity() {
            if hit[y.a as usize] || y.a == 0 || k >= n {
                ok = false;
                break;
            }
            hit[y.a as usize] = true;
            y = hol.mul(y, x);
            k += 1;
        }
        if ok && n.is_multiple_of(k) {
            out.push(f as u32);
        }
    }
    out
}

struct Search<'a> {
    hol: &'a Holomorph,
    candidates: &'a [Vec<u32>],
    lam: Vec<u32>,
    elems: Vec<HolElem>,
    gens: Vec<HolElem>,
    found: Vec<RegularSubgroup>,
}

impl Search<'_> {
    /// Extends the current subgroup by `x`. Returns false (leaving the
    /// state to be rolled back by the caller) on a fibre collision or a
    /// size that cannot divide `|A|`.
    fn extend(&mut self, x: HolElem) -> bool {
        let n = self.hol.n();
        let old = self.elems.len();
        self.gens.push(x);
        let mut i = 0;
        while i < self.elems.len() {
            let e = self.elems[i];
            let gs = if i < old { std::slice::from_ref(&x) } else { &self.gens[..] };
            for &g in gs {
                let y = self.hol.mul(e, g);
                let slot = self.lam[y.a as usize];
                if slot == NONE {
                    self.lam[y.a as usize] = y.f;
                    self.elems.push(y);
                    if self.elems.len() > n {
                        return false;
                    }
                } else if slot != y.f {
                    return false;
                }
            }
            i += 1;
        }
        n.is_multiple_of(self.elems.len())
    }

    fn rollback(&mut self, len: usize) {
        for e in self.elems.drain(len..) {
            self.lam[e.a as usize] = NONE;
        }
        self.gens.pop();
    }

    fn run(&mut self) {
        let n = self.hol.n();
        if self.elems.len() == n {
            self.found.push(RegularSubgroup { lambda: self.lam.clone() });
            return;
        }
        let a = self.lam.iter().position(|&f| f == NONE).expect("uncovered point");
        for i in 0..self.candidates[a].len() {
            let f = self.candidates[a][i];
            let len = self.elems.len();
            if self.extend(HolElem { a: a as u32, f }) {
                self.run();
            }
            self.rollback(len);
        }
    }
}

/// All regular subgroups, by depth-first search over semiregular subgroups.
/// The top-level branches run in parallel; output is sorted.
pub fn enumerate_dfs(hol: &Holomorph) -> Vec<RegularSubgroup> {
    let n = hol.n();
    let candidates: Vec<Vec<u32>> = (0..n).into_par_iter().map(|a| if a == 0 { Vec::new() } else { cyclic_candidates(hol, a) }).collect();
    if n == 1 {
        return vec![RegularSubgroup { lambda: vec![0] }];
    }
    let mut found: Vec<RegularSubgroup> = candidates[1]
        .par_iter()
        .flat_map_iter(|&f| {
            let mut lam = vec![NONE; n];
            lam[0] = 0;
            let mut s = Search { hol, candidates: &candidates, lam, elems: vec![hol.identity()], gens: Vec::new(), found: Vec::new() };
            if s.extend(HolElem { a: 1, f }) {
                s.run();
            }
            s.found
        })
        .collect();
    found.sort_unstable();
    found
}

/// Conjugacy classes of subgroups of `Aut(A)` whose order divides `|A|`,
/// each given by its lexicographically least member.
pub fn aut_subgroup_classes(hol: &Holomorph) -> Vec<Vec<usize>> {
    let autg = hol.aut.as_group();
    let subs = autg.subgroups_dividing(hol.n());
    let index: HashMap<&Vec<usize>, usize> = subs.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut seen = vec![false; subs.len()];
    let mut reps = Vec::new();
    for i in 0..subs.len() {
        if seen[i] {
            continue;
        }
        // subs is sorted, so the first unseen member of a class is its least
        reps.push(subs[i].clone());
        seen[i] = true;
        let mut queue = VecDeque::from([i]);
        while let Some(j) = queue.pop_front() {
            for &h in hol.aut.generators() {
                let mut c: Vec<usize> = subs[j].iter().map(|&f| hol.aut.conjugate(h, f)).collect();
                c.sort_unstable();
                let k = index[&c];
                if !seen[k] {
                    seen[k] = true;
                    queue.push_back(k);
                }
            }
        }
    }
    reps
}

/// Regular subgroups with `π_2(G) = K` and kernel `N × 1`.
fn lifts(hol: &Holomorph, kgens: &[usize], kernel: &[usize]) -> Vec<RegularSubgroup> {
    let base = &hol.base;
    let n = hol.n();
    let mut in_n = vec![false; n];
    for &x in kernel {
        in_n[x] = true;
    }
    // right cosets N u, represented by their least element
    let mut reps: Vec<usize> = (0..n).filter(|&u| kernel.iter().all(|&x| base.mul(x, u) >= u)).collect();
    reps.sort_unstable();
    let ngens: Vec<HolElem> = base.subset_generators(kernel).into_iter().map(|x| HolElem::new(x, 0)).collect();
    let orders: Vec<usize> = kgens.iter().map(|&f| hol.aut.element_order(f)).collect();
    // candidate lifts per generator, filtered by (u, α)^{ord α} ∈ N × 1
    let options: Vec<Vec<HolElem>> = kgens
        .iter()
        .zip(&orders)
        .map(|(&f, &o)| {
            reps.iter()
                .map(|&u| HolElem::new(u, f))
                .filter(|&x| in_n[hol.pow(x, o).a as usize])
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut chosen: Vec<HolElem> = ngens.clone();
    fn rec(
        hol: &Holomorph,
        options: &[Vec<HolElem>],
        depth: usize,
        chosen: &mut Vec<HolElem>,
        out: &mut Vec<RegularSubgroup>,
    ) {
        let n = hol.n();
        let Some(s) = hol.closure(chosen, n) else { return };
        if s.pi1().len() != s.len() || !n.is_multiple_of(s.len()) {
            return;
        }
        if depth == options.len() {
            if s.len() == n {
                out.push(hol.as_regular(&s).expect("regular by construction"));
            }
            return;
        }
        for &x in &options[depth] {
            chosen.push(x);
            rec(hol, options, depth + 1, chosen, out);
            chosen.pop();
        }
    }
    if options.iter().all(|o| !o.is_empty()) {
        rec(hol, &options, 0, &mut chosen, &mut out);
    }
    out
}

/// All regular subgroups, by strata of `(π_2(G), ker)`. Strata run in
/// parallel; output is sorted.
pub fn enumerate_stratified(hol: &Holomorph) -> Vec<RegularSubgroup> {
    let n = hol.n();
    let autg_classes = aut_subgroup_classes(hol);
    let autg = hol.aut.as_group();
    let mut strata: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for k in &autg_classes {
        let kgens = autg.subset_generators(k);
        for nsub in hol.base.subgroups_of_order(n / k.len()) {
            strata.push((kgens.clone(), nsub));
        }
    }
    let seeds: Vec<RegularSubgroup> = strata.par_iter().flat_map_iter(|(kg, ns)| lifts(hol, kg, ns)).collect();
    // spread each seed over its conjugacy class
    let mut all: HashSet<RegularSubgroup> = HashSet::new();
    for s in seeds {
        if all.contains(&s) {
            continue;
        }
        let mut queue = VecDeque::from([s.clone()]);
        all.insert(s);
        while let Some(g) = queue.pop_front() {
            for &h in hol.aut.generators() {
                let c = hol.conjugate_regular(&g, h);
                if all.insert(c.clone()) {
                    queue.push_back(c);
                }
            }
        }
    }
    let mut out: Vec<RegularSubgroup> = all.into_iter().collect();
    out.sort_unstable();
    out
}

/// Runs the chosen strategy. `Both` runs the two and fails if they differ.
pub fn enumerate(hol: &Holomorph, strategy: Strategy) -> Result<Vec<RegularSubgroup>, EnumError> {
    match strategy {
        Strategy::Dfs => Ok(enumerate_dfs(hol)),
        Strategy::Stratified => Ok(enumerate_stratified(hol)),
        Strategy::Both => {
            let cv = cross_validate(hol);
            if cv.agree() {
                Ok(cv.dfs)
            } else {
                Err(EnumError::StrategyMismatch { dfs: cv.dfs.len(), stratified: cv.stratified.len() })
            }
        }
    }
}

/// Outcome of running both strategies.
#[derive(Clone, Debug)]
pub struct CrossValidation {
    pub dfs: Vec<RegularSubgroup>,
    pub stratified: Vec<RegularSubgroup>,
}

impl CrossValidation {
    pub fn agree(&self) -> bool {
        self.dfs == self.stratified
    }

    /// First subgroup (in sorted order) found by only one strategy.
    pub fn first_difference(&self) -> Option<&RegularSubgroup> {
        let a: HashSet<&RegularSubgroup> = self.dfs.iter().collect();
        let b: HashSet<&RegularSubgroup> = self.stratified.iter().collect();
        a.symmetric_difference(&b).min().copied()
    }
}

pub fn cross_validate(hol: &Holomorph) -> CrossValidation {
    let (dfs, stratified) = rayon::join(|| enumerate_dfs(hol), || enumerate_stratified(hol));
    CrossValidation { dfs, stratified }
}

/// The `Aut(A)`-conjugacy class of `g`, sorted, so its first entry is the
/// same canonical representative [`orbit_partition`] reports.
pub fn orbit_of(hol: &Holomorph, g: &RegularSubgroup) -> Vec<RegularSubgroup> {
    let mut seen: HashSet<RegularSubgroup> = HashSet::from([g.clone()]);
    let mut queue = VecDeque::from([g.clone()]);
    while let Some(x) = queue.pop_front() {
        for &h in hol.aut.generators() {
            let c = hol.conjugate_regular(&x, h);
            if seen.insert(c.clone()) {
                queue.push_back(c);
            }
        }
    }
    let mut out: Vec<RegularSubgroup> = seen.into_iter().collect();
    out.sort();
    out
}

/// One `Aut(A)`-conjugacy class of regular subgroups.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitClass {
    /// Lexicographically least member.
    pub representative: RegularSubgroup,
    pub size: usize,
    pub pi2_size: usize,
}

/// Partitions a conjugation-closed list of regular subgroups into orbits,
/// sorted by representative.
pub fn orbit_partition(hol: &Holomorph, subs: &[RegularSubgroup]) -> Result<Vec<OrbitClass>, EnumError> {
    let index: HashMap<&RegularSubgroup, usize> = subs.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut seen = vec![false; subs.len()];
    let mut orbits = Vec::new();
    for i in 0..subs.len() {
        if seen[i] {
            continue;
        }
        seen[i] = true;
        let mut members = vec![i];
        let mut queue = VecDeque::from([i]);
        while let Some(j) = queue.pop_front() {
            for &h in hol.aut.generators() {
                let c = hol.conjugate_regular(&subs[j], h);
                let k = *index.get(&c).ok_or(EnumError::NotConjugationClosed)?;
                if !seen[k] {
                    seen[k] = true;
                    members.push(k);
                    queue.push_back(k);
                }
            }
        }
        let rep = members.iter().map(|&k| &subs[k]).min().expect("nonempty orbit").clone();
        let pi2_size = rep.pi2().len();
        orbits.push(OrbitClass { representative: rep, size: members.len(), pi2_size });
    }
    orbits.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(orbits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_group, structured_aut, FamilyParams};
    use crate::groups::GroupLabel;
    use std::sync::Arc;

    fn hol(p: u64, q: u64, label: GroupLabel) -> Holomorph {
        let params = FamilyParams::derive(p, q).unwrap();
        let fam = build_group(label, &params).unwrap();
        let aut = structured_aut(&fam).unwrap().aut;
        Holomorph::new(fam.group.clone(), Arc::new(aut))
    }

    /// Oracle: test every n-subset given by a choice of f per a, for tiny holomorphs.
    fn brute_force(h: &Holomorph) -> Vec<RegularSubgroup> {
        let n = h.n();
        let m = h.aut.len();
        let mut out = Vec::new();
        let mut lam = vec![0u32; n];
        let total = (m as u64).pow(n as u32 - 1);
        for code in 0..total {
            let mut c = code;
            for slot in lam.iter_mut().skip(1) {
                *slot = (c % m as u64) as u32;
                c /= m as u64;
            }
            let g = RegularSubgroup { lambda: lam.clone() };
            if h.verify_regular(&g) {
                out.push(g);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn order_12_strategies_match_brute_force_where_tiny() {
        // Z12 has |Aut| = 4, so 4^11 candidate assignments is feasible
        let h = hol(2, 3, GroupLabel::CyclicP2Q);
        let oracle = brute_force(&h);
        assert_eq!(enumerate_dfs(&h), oracle);
        assert_eq!(enumerate_stratified(&h), oracle);
    }

    #[test]
    fn strategies_agree_on_order_12() {
        let params = FamilyParams::derive(2, 3).unwrap();
        for label in params.labels() {
            let h = hol(2, 3, label);
            let cv = cross_validate(&h);
            assert!(cv.agree(), "{label:?}: {} vs {}", cv.dfs.len(), cv.stratified.len());
            assert!(cv.first_difference().is_none());
            let orbits = orbit_partition(&h, &cv.dfs).unwrap();
            assert_eq!(orbits.iter().map(|o| o.size).sum::<usize>(), cv.dfs.len());
        }
    }

    #[test]
    fn orbit_partition_rejects_unclosed_lists() {
        let h = hol(2, 3, GroupLabel::PxQbyP);
        let all = enumerate_dfs(&h);
        let orbits = orbit_partition(&h, &all).unwrap();
        let big = orbits.iter().find(|o| o.size > 1).unwrap();
        let partial: Vec<RegularSubgroup> = all.iter().filter(|s| **s != big.representative).cloned().collect();
        assert_eq!(orbit_partition(&h, &partial), Err(EnumError::NotConjugationClosed));
    }
}
