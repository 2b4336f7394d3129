//! Finite groups given by Cayley tables, their automorphism groups and a
//! structural identifier for the groups of order `p^2 q`.
//!
//! Elements are indices `0..n`. Every group built by this crate keeps the
//! identity at index 0, which is also what makes the identity automorphism
//! the lexicographically least permutation.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Groups up to this order get an exhaustive associativity check.
pub const EXHAUSTIVE_ASSOC_LIMIT: usize = 200;

/// Automorphism groups up to this size store a full composition table.
pub const COMPOSE_TABLE_LIMIT: usize = 5000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("table has {got} entries, expected {expected}")]
    BadTableSize { expected: usize, got: usize },
    #[error("entry {entry} at position {pos} is out of range")]
    OutOfRange { pos: usize, entry: u32 },
    #[error("element 0 is not a two-sided identity")]
    NoIdentity,
    #[error("row or column {0} is not a permutation")]
    NotLatin(usize),
    #[error("associativity fails at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("generators span a subgroup of order {got}, not {expected}")]
    GeneratorsIncomplete { expected: usize, got: usize },
    #[error("automorphism group exceeds the budget of {0} elements")]
    AutBudget(usize),
    #[error("order {order} is not p^2 q for p = {p}, q = {q}")]
    WrongOrder { order: usize, p: u64, q: u64 },
    #[error("invariants do not match any family: {0}")]
    Unidentified(String),
}

/// A finite group stored as a full multiplication table.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    n: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    generators: Vec<usize>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.table == other.table
    }
}

impl FiniteGroup {
    /// Builds a group from a row-major table. Validates identity, the Latin
    /// property and associativity (exhaustive up to order 200, sampled above).
    pub fn from_table(n: usize, table: Vec<u32>, generators: Vec<usize>) -> Result<Self, GroupError> {
        if table.len() != n * n {
            return Err(GroupError::BadTableSize { expected: n * n, got: table.len() });
        }
        if let Some(pos) = table.iter().position(|&e| e as usize >= n) {
            return Err(GroupError::OutOfRange { pos, entry: table[pos] });
        }
        for x in 0..n {
            if table[x] as usize != x || table[x * n] as usize != x {
                return Err(GroupError::NoIdentity);
            }
        }
        let mut seen = vec![usize::MAX; n];
        for a in 0..n {
            for b in 0..n {
                let e = table[a * n + b] as usize;
                if seen[e] == a {
                    return Err(GroupError::NotLatin(a));
                }
                seen[e] = a;
            }
        }
        let mut inverse = vec![0u32; n];
        for a in 0..n {
            let b = (0..n).find(|&b| table[a * n + b] == 0).ok_or(GroupError::NotLatin(a))?;
            inverse[a] = b as u32;
        }
        let g = FiniteGroup { n, table, inverse, generators: Vec::new() };
        g.check_associative()?;
        let generators = if generators.is_empty() { g.greedy_generators() } else { generators };
        let span = g.closure(&generators).len();
        if span != n {
            return Err(GroupError::GeneratorsIncomplete { expected: n, got: span });
        }
        Ok(FiniteGroup { generators, ..g })
    }

    /// Builds a group from a multiplication closure on `0..n`.
    pub fn from_fn(n: usize, mul: impl Fn(usize, usize) -> usize, generators: Vec<usize>) -> Result<Self, GroupError> {
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                table.push(mul(a, b) as u32);
            }
        }
        Self::from_table(n, table, generators)
    }

    /// Table constructor without validation, for tables produced by code
    /// that already guarantees the group axioms.
    pub(crate) fn from_trusted_table(n: usize, table: Vec<u32>) -> Self {
        let mut inverse = vec![0u32; n];
        for a in 0..n {
            for b in 0..n {
                if table[a * n + b] == 0 {
                    inverse[a] = b as u32;
                    break;
                }
            }
        }
        let g = FiniteGroup { n, table, inverse, generators: Vec::new() };
        let generators = g.greedy_generators();
        FiniteGroup { generators, ..g }
    }

    fn check_associative(&self) -> Result<(), GroupError> {
        let n = self.n;
        if n <= EXHAUSTIVE_ASSOC_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    let ab = self.mul(a, b);
                    for c in 0..n {
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                            return Err(GroupError::NotAssociative(a, b, c));
                        }
                    }
                }
            }
        } else {
            // deterministic pseudo-random triples
            let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
            for _ in 0..200_000 {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                let a = (state % n as u64) as usize;
                let b = ((state >> 21) % n as u64) as usize;
                let c = ((state >> 42) % n as u64) as usize;
                if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                    return Err(GroupError::NotAssociative(a, b, c));
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let ord = self.element_order(a) as i64;
        let k = k.rem_euclid(ord);
        let mut r = 0;
        for _ in 0..k {
            r = self.mul(r, a);
        }
        r
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn element_orders(&self) -> Vec<usize> {
        (0..self.n).map(|a| self.element_order(a)).collect()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&a| self.generators.iter().all(|&g| self.mul(a, g) == self.mul(g, a)))
            .collect()
    }

    /// Sizes of the conjugacy classes, indexed by element.
    pub fn class_sizes(&self) -> Vec<usize> {
        let mut size = vec![0usize; self.n];
        let mut done = vec![false; self.n];
        for a in 0..self.n {
            if done[a] {
                continue;
            }
            let mut class: Vec<usize> = (0..self.n).map(|g| self.mul(self.mul(g, a), self.inv(g))).collect();
            class.sort_unstable();
            class.dedup();
            for &c in &class {
                done[c] = true;
                size[c] = class.len();
            }
        }
        size
    }

    /// Subgroup generated by `seed`, as a sorted list of elements.
    pub fn closure(&self, seed: &[usize]) -> Vec<usize> {
        self.closure_bounded(seed, usize::MAX).expect("unbounded closure")
    }

    /// Like [`closure`](Self::closure) but gives up once the subgroup would
    /// exceed `limit` elements.
    pub fn closure_bounded(&self, seed: &[usize], limit: usize) -> Option<Vec<usize>> {
        let mut inside = vec![false; self.n];
        let mut elems = vec![0usize];
        inside[0] = true;
        let gens: Vec<usize> = seed.iter().copied().filter(|&g| g != 0).collect();
        let mut i = 0;
        while i < elems.len() {
            let x = elems[i];
            for &g in &gens {
                let y = self.mul(x, g);
                if !inside[y] {
                    inside[y] = true;
                    elems.push(y);
                    if elems.len() > limit {
                        return None;
                    }
                }
            }
            i += 1;
        }
        elems.sort_unstable();
        Some(elems)
    }

    /// A small generating set: elements of largest order first, each one
    /// kept only if it enlarges the span.
    pub fn greedy_generators(&self) -> Vec<usize> {
        let orders = self.element_orders();
        let mut cand: Vec<usize> = (1..self.n).collect();
        cand.sort_by_key(|&a| (std::cmp::Reverse(orders[a]), a));
        let mut span = vec![0usize];
        let mut gens = Vec::new();
        for a in cand {
            if span.len() == self.n {
                break;
            }
            if span.binary_search(&a).is_ok() {
                continue;
            }
            gens.push(a);
            span = self.closure(&gens);
        }
        gens
    }

    /// Every subgroup whose order divides `bound`, each as a sorted element
    /// list, in lexicographic order.
    ///
    /// Subgroups are grown one element at a time from the trivial group, so
    /// any subgroup reachable by a chain of single-generator extensions is
    /// found. For solvable groups every subgroup is.
    pub fn subgroups_dividing(&self, bound: usize) -> Vec<Vec<usize>> {
        let orders = self.element_orders();
        let useful: Vec<usize> = (1..self.n).filter(|&a| bound.is_multiple_of(orders[a])).collect();
        let mut all: HashSet<Vec<usize>> = HashSet::new();
        let trivial = vec![0usize];
        all.insert(trivial.clone());
        let mut frontier = vec![trivial];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for h in &frontier {
                let mut member = vec![false; self.n];
                for &x in h {
                    member[x] = true;
                }
                let hgens = if h.len() == 1 { Vec::new() } else { self.subset_generators(h) };
                for &x in &useful {
                    if member[x] {
                        continue;
                    }
                    let mut gens = hgens.clone();
                    gens.push(x);
                    if let Some(k) = self.closure_bounded(&gens, bound) {
                        if bound.is_multiple_of(k.len()) && all.insert(k.clone()) {
                            next.push(k);
                        }
                    }
                }
            }
            frontier = next;
        }
        let mut out: Vec<Vec<usize>> = all.into_iter().collect();
        out.sort();
        out
    }

    /// Subgroups of exactly the given order.
    pub fn subgroups_of_order(&self, d: usize) -> Vec<Vec<usize>> {
        if !self.n.is_multiple_of(d) {
            return Vec::new();
        }
        self.subgroups_dividing(d).into_iter().filter(|s| s.len() == d).collect()
    }

    /// Greedy generating set of a subgroup given by its elements.
    pub fn subset_generators(&self, elems: &[usize]) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![0usize];
        let mut sorted: Vec<usize> = elems.to_vec();
        let orders: Vec<usize> = sorted.iter().map(|&a| self.element_order(a)).collect();
        let mut idx: Vec<usize> = (0..sorted.len()).collect();
        idx.sort_by_key(|&i| (std::cmp::Reverse(orders[i]), sorted[i]));
        sorted = idx.into_iter().map(|i| sorted[i]).collect();
        for a in sorted {
            if span.len() == elems.len() {
                break;
            }
            if span.binary_search(&a).is_err() {
                gens.push(a);
                span = self.closure(&gens);
            }
        }
        gens
    }

    pub fn is_normal(&self, sub: &[usize]) -> bool {
        let mut member = vec![false; self.n];
        for &x in sub {
            member[x] = true;
        }
        self.generators
            .iter()
            .all(|&g| sub.iter().all(|&x| member[self.mul(self.mul(g, x), self.inv(g))]))
    }
}

/// A map between two groups, stored as the image of each element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub map: Vec<u32>,
}

impl Morphism {
    pub fn is_homomorphism(&self, source: &FiniteGroup, target: &FiniteGroup) -> bool {
        let n = source.order();
        self.map.len() == n
            && (0..n).all(|a| {
                (0..n).all(|b| {
                    self.map[source.mul(a, b)] as usize
                        == target.mul(self.map[a] as usize, self.map[b] as usize)
                })
            })
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.map.len()];
        self.map.iter().all(|&x| {
            let x = x as usize;
            x < seen.len() && !std::mem::replace(&mut seen[x], true)
        })
    }
}

/// Extends generator images to a full map on `⟨gens⟩` by breadth-first search
/// over words, returning `None` if the assignment is inconsistent or not
/// injective on the span. The map is `None`-filled outside the span.
pub(crate) fn extend_images(
    src: &FiniteGroup,
    tgt: &FiniteGroup,
    gens: &[usize],
    images: &[usize],
    map: &mut [u32],
    used: &mut [bool],
) -> bool {
    const UNSET: u32 = u32::MAX;
    map.iter_mut().for_each(|m| *m = UNSET);
    used.iter_mut().for_each(|u| *u = false);
    map[0] = 0;
    used[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        let fx = map[x] as usize;
        for (&g, &img) in gens.iter().zip(images) {
            let y = src.mul(x, g);
            let fy = tgt.mul(fx, img) as u32;
            if map[y] == UNSET {
                if used[fy as usize] {
                    return false;
                }
                used[fy as usize] = true;
                map[y] = fy;
                queue.push_back(y);
            } else if map[y] != fy {
                return false;
            }
        }
    }
    true
}

/// Enumerates isomorphisms `src -> tgt` by backtracking over images of a
/// generating set of `src`. Candidates are filtered by element order and
/// conjugacy class size and ordered by the same pair. The callback returns
/// `false` to stop early.
pub fn for_each_isomorphism(src: &FiniteGroup, tgt: &FiniteGroup, mut visit: impl FnMut(&[u32]) -> bool) {
    let n = src.order();
    if n != tgt.order() {
        return;
    }
    let gens = src.generators().to_vec();
    let so = src.element_orders();
    let to = tgt.element_orders();
    let sc = src.class_sizes();
    let tc = tgt.class_sizes();
    let mut signature_ok = {
        let mut a: Vec<(usize, usize)> = so.iter().copied().zip(sc.iter().copied()).collect();
        let mut b: Vec<(usize, usize)> = to.iter().copied().zip(tc.iter().copied()).collect();
        a.sort_unstable();
        b.sort_unstable();
        a == b
    };
    if !signature_ok {
        return;
    }
    let cands: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| (0..n).filter(|&y| to[y] == so[g] && tc[y] == sc[g]).collect())
        .collect();
    let mut map = vec![0u32; n];
    let mut used = vec![false; n];
    let mut choice = vec![0usize; gens.len()];
    let mut images = vec![0usize; gens.len()];
    let mut depth = 0usize;
    // iterative backtracking with a partial consistency check at every depth
    loop {
        if choice[depth] >= cands[depth].len() {
            if depth == 0 {
                break;
            }
            choice[depth] = 0;
            depth -= 1;
            choice[depth] += 1;
            continue;
        }
        images[depth] = cands[depth][choice[depth]];
        let ok = extend_images(src, tgt, &gens[..=depth], &images[..=depth], &mut map, &mut used);
        if !ok {
            choice[depth] += 1;
            continue;
        }
        if depth + 1 == gens.len() {
            if map.iter().all(|&m| m != u32::MAX) && !visit(&map) {
                signature_ok = false;
                break;
            }
            choice[depth] += 1;
        } else {
            depth += 1;
        }
    }
    let _ = signature_ok;
}

/// Whether two groups are isomorphic, with a witness if so.
pub fn are_isomorphic(g: &FiniteGroup, h: &FiniteGroup) -> Option<Morphism> {
    let mut found = None;
    for_each_isomorphism(g, h, |m| {
        found = Some(Morphism { map: m.to_vec() });
        false
    });
    found
}

/// All automorphisms of `g`, bounded by `budget` elements.
pub fn compute_automorphisms(g: &FiniteGroup, budget: usize) -> Result<AutGroup, GroupError> {
    let mut perms: Vec<Vec<u32>> = Vec::new();
    let mut over = false;
    for_each_isomorphism(g, g, |m| {
        if perms.len() >= budget {
            over = true;
            return false;
        }
        perms.push(m.to_vec());
        true
    });
    if over {
        return Err(GroupError::AutBudget(budget));
    }
    Ok(AutGroup::from_perms(g.order(), perms))
}

/// A group of automorphisms of some base group, stored as permutations of
/// its elements. Index 0 is the identity and the remaining permutations are
/// in lexicographic order, so two constructions of the same set agree on
/// indices.
#[derive(Clone, Debug)]
pub struct AutGroup {
    n: usize,
    perms: Vec<u32>,
    index: HashMap<Vec<u32>, u32>,
    inverse: Vec<u32>,
    compose: Option<Vec<u32>>,
    base: BaseIndex,
    generators: Vec<usize>,
}

/// Largest dense lookup array, in entries, for [`BaseIndex`].
const DENSE_BASE_LIMIT: u64 = 1 << 22;

/// Finds an automorphism from its images of a few base points. Used for
/// composition when the group is too large for a full table.
#[derive(Clone, Debug)]
struct BaseIndex {
    points: Vec<usize>,
    dense: Vec<u32>,
    sparse: HashMap<u64, u32>,
}

impl BaseIndex {
    fn build(n: usize, list: &[Vec<u32>]) -> Self {
        let mut keys = vec![0u64; list.len()];
        let mut points = Vec::new();
        let mut classes = if list.len() > 1 { 1 } else { list.len() };
        // Greedily add the point that splits the current key classes most.
        while classes < list.len() {
            let mut best = (classes, 0);
            for x in 0..n {
                let split: HashSet<(u64, u32)> = keys.iter().zip(list).map(|(&k, p)| (k, p[x])).collect();
                if split.len() > best.0 {
                    best = (split.len(), x);
                }
            }
            assert!(best.0 > classes, "permutations are not distinct");
            classes = best.0;
            points.push(best.1);
            for (k, p) in keys.iter_mut().zip(list) {
                *k = *k * n as u64 + p[best.1] as u64;
            }
        }
        let span = (n as u64).checked_pow(points.len() as u32).filter(|&s| s <= DENSE_BASE_LIMIT);
        let mut idx = BaseIndex { points, dense: Vec::new(), sparse: HashMap::new() };
        match span {
            Some(s) => {
                idx.dense = vec![u32::MAX; s as usize];
                for (i, &k) in keys.iter().enumerate() {
                    idx.dense[k as usize] = i as u32;
                }
            }
            None => idx.sparse = keys.iter().enumerate().map(|(i, &k)| (k, i as u32)).collect(),
        }
        idx
    }

    #[inline]
    fn find(&self, n: usize, image: impl Fn(usize) -> usize) -> u32 {
        let key = self.points.iter().fold(0u64, |k, &x| k * n as u64 + image(x) as u64);
        if self.dense.is_empty() {
            self.sparse[&key]
        } else {
            self.dense[key as usize]
        }
    }
}

impl AutGroup {
    /// Builds from an arbitrary list of permutations closed under
    /// composition. The list is sorted and deduplicated.
    pub fn from_perms(n: usize, mut list: Vec<Vec<u32>>) -> Self {
        list.sort_unstable();
        list.dedup();
        let m = list.len();
        let index: HashMap<Vec<u32>, u32> = list.iter().enumerate().map(|(i, p)| (p.clone(), i as u32)).collect();
        let base = if m > COMPOSE_TABLE_LIMIT { BaseIndex::build(n, &list) } else { BaseIndex::build(n, &[]) };
        let perms: Vec<u32> = list.into_iter().flatten().collect();
        let mut aut = AutGroup { n, perms, index, inverse: vec![0; m], compose: None, base, generators: Vec::new() };
        if m <= COMPOSE_TABLE_LIMIT {
            let mut table = vec![0u32; m * m];
            let mut buf = vec![0u32; n];
            for f in 0..m {
                for g in 0..m {
                    for x in 0..n {
                        buf[x] = aut.apply(f, aut.apply(g, x) as usize) as u32;
                    }
                    table[f * m + g] = aut.index[&buf];
                }
            }
            aut.compose = Some(table);
        }
        for f in 0..m {
            let mut buf = vec![0u32; n];
            for x in 0..n {
                buf[aut.apply(f, x)] = x as u32;
            }
            aut.inverse[f] = aut.index[&buf];
        }
        aut.generators = aut.greedy_generators();
        aut
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.inverse.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inverse.is_empty()
    }

    pub fn base_order(&self) -> usize {
        self.n
    }

    /// `f(x)`.
    #[inline]
    pub fn apply(&self, f: usize, x: usize) -> usize {
        self.perms[f * self.n + x] as usize
    }

    pub fn perm(&self, f: usize) -> &[u32] {
        &self.perms[f * self.n..(f + 1) * self.n]
    }

    pub fn index_of(&self, perm: &[u32]) -> Option<usize> {
        self.index.get(perm).map(|&i| i as usize)
    }

    /// `f ∘ g`, applying `g` first.
    #[inline]
    pub fn compose(&self, f: usize, g: usize) -> usize {
        match &self.compose {
            Some(t) => t[f * self.len() + g] as usize,
            None => self.base.find(self.n, |x| self.apply(f, self.apply(g, x))) as usize,
        }
    }

    #[inline]
    pub fn inv(&self, f: usize) -> usize {
        self.inverse[f] as usize
    }

    /// `h f h^{-1}`.
    pub fn conjugate(&self, h: usize, f: usize) -> usize {
        self.compose(self.compose(h, f), self.inv(h))
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn has_compose_table(&self) -> bool {
        self.compose.is_some()
    }

    pub fn element_order(&self, f: usize) -> usize {
        let mut x = f;
        let mut k = 1;
        while x != 0 {
            x = self.compose(x, f);
            k += 1;
        }
        k
    }

    fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = HashSet::from([0usize]);
        let mut elems = vec![0usize];
        let mut i = 0;
        while i < elems.len() {
            for &g in gens {
                let y = self.compose(elems[i], g);
                if seen.insert(y) {
                    elems.push(y);
                }
            }
            i += 1;
        }
        elems.sort_unstable();
        elems
    }

    /// Subgroup of the automorphism group generated by `gens`.
    pub fn subgroup(&self, gens: &[usize]) -> Vec<usize> {
        self.closure(gens)
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let m = self.len();
        let mut gens = Vec::new();
        let mut size = 1;
        let orders: Vec<usize> = (0..m).map(|f| self.element_order(f)).collect();
        let mut cand: Vec<usize> = (1..m).collect();
        cand.sort_by_key(|&f| (std::cmp::Reverse(orders[f]), f));
        let mut span: HashSet<usize> = HashSet::from([0]);
        for f in cand {
            if size == m {
                break;
            }
            if span.contains(&f) {
                continue;
            }
            gens.push(f);
            let s = self.closure(&gens);
            size = s.len();
            span = s.into_iter().collect();
        }
        gens
    }

    /// The automorphism group as an abstract [`FiniteGroup`] on indices.
    pub fn as_group(&self) -> FiniteGroup {
        let m = self.len();
        let table = match &self.compose {
            Some(t) => t.clone(),
            None => {
                let mut t = Vec::with_capacity(m * m);
                for f in 0..m {
                    for g in 0..m {
                        t.push(self.compose(f, g) as u32);
                    }
                }
                t
            }
        };
        FiniteGroup::from_trusted_table(m, table)
    }
}

/// Isomorphism types of groups of order `p^2 q` (p, q distinct primes).
///
/// The `Gk` parameter is the canonical representative of `{k, k^{-1}}` in
/// `Z_q`, with 0 meaning one eigenvalue is trivial and `q - 1` standing for
/// `k = -1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GroupLabel {
    CyclicP2Q,
    PxPQ,
    P2SemidirectQ,
    Gk(u64),
    GF,
    QbyP2OrdP,
    QbyP2OrdP2,
    PxQbyP,
}

impl GroupLabel {
    pub fn is_abelian(self) -> bool {
        matches!(self, GroupLabel::CyclicP2Q | GroupLabel::PxPQ)
    }

    /// Short ASCII token used on the command line and in data files.
    pub fn token(self, q: u64) -> String {
        match self {
            GroupLabel::CyclicP2Q => "Zp2q".into(),
            GroupLabel::PxPQ => "ZpxZpq".into(),
            GroupLabel::P2SemidirectQ => "Zp2:Zq".into(),
            GroupLabel::Gk(k) if q > 2 && k == q - 1 => "G-1".into(),
            GroupLabel::Gk(k) => format!("G{k}"),
            GroupLabel::GF => "GF".into(),
            GroupLabel::QbyP2OrdP => "Zq:Zp2".into(),
            GroupLabel::QbyP2OrdP2 => "Zq:hZp2".into(),
            GroupLabel::PxQbyP => "Zpx(Zq:Zp)".into(),
        }
    }

    /// Parses a token produced by [`token`](Self::token).
    pub fn parse(s: &str, q: u64) -> Result<Self, String> {
        Ok(match s {
            "Zp2q" => GroupLabel::CyclicP2Q,
            "ZpxZpq" => GroupLabel::PxPQ,
            "Zp2:Zq" => GroupLabel::P2SemidirectQ,
            "GF" => GroupLabel::GF,
            "Zq:Zp2" => GroupLabel::QbyP2OrdP,
            "Zq:hZp2" => GroupLabel::QbyP2OrdP2,
            "Zpx(Zq:Zp)" => GroupLabel::PxQbyP,
            "G-1" => GroupLabel::Gk(q - 1),
            other => {
                let k: u64 = other
                    .strip_prefix('G')
                    .and_then(|r| r.parse().ok())
                    .ok_or_else(|| format!("unknown group label `{s}`"))?;
                GroupLabel::Gk(canonical_k(k % q, q))
            }
        })
    }

    /// Human-readable name with the family notation.
    pub fn display(self, q: u64) -> String {
        match self {
            GroupLabel::CyclicP2Q => "Z_{p^2q}".into(),
            GroupLabel::PxPQ => "Z_p^2 x Z_q".into(),
            GroupLabel::P2SemidirectQ => "Z_{p^2} x|_t Z_q".into(),
            GroupLabel::Gk(k) if q > 2 && k == q - 1 => "G_{-1}".into(),
            GroupLabel::Gk(k) => format!("G_{k}"),
            GroupLabel::GF => "G_F".into(),
            GroupLabel::QbyP2OrdP => "Z_q x|_r Z_{p^2}".into(),
            GroupLabel::QbyP2OrdP2 => "Z_q x|_h Z_{p^2}".into(),
            GroupLabel::PxQbyP => "Z_p x (Z_q x|_r Z_p)".into(),
        }
    }
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupLabel::Gk(k) => write!(f, "G{k}"),
            other => write!(f, "{}", other.token(0)),
        }
    }
}

impl FromStr for GroupLabel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        // without q only explicit numeric G-labels are meaningful
        GroupLabel::parse(s, u64::MAX)
    }
}

pub(crate) fn canonical_k(k: u64, q: u64) -> u64 {
    if k == 0 {
        return 0;
    }
    let inv = crate::families::modinv(k as i64, q as i64) as u64;
    k.min(inv)
}

fn primes_of(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Identifies a group of order `p^2 q` up to isomorphism from structural
/// invariants. No family tables are consulted, so the result can be used to
/// cross-check the family constructions.
pub fn identify_p2q(g: &FiniteGroup, p: u64, q: u64) -> Result<GroupLabel, GroupError> {
    let n = g.order();
    if n as u64 != p * p * q || p == q || primes_of(p) != vec![p] || primes_of(q) != vec![q] {
        return Err(GroupError::WrongOrder { order: n, p, q });
    }
    let orders = g.element_orders();
    let p2 = (p * p) as usize;
    if g.is_abelian() {
        return Ok(if orders.contains(&p2) { GroupLabel::CyclicP2Q } else { GroupLabel::PxPQ });
    }
    let q_elems: Vec<usize> = (0..n).filter(|&a| orders[a] == q as usize).collect();
    // number of Sylow q-subgroups
    let n_q = q_elems.len() / (q as usize - 1);
    let cyclic_p = orders.contains(&p2);
    if cyclic_p {
        if n_q == 1 {
            let z = g.center().len();
            return Ok(if z == p as usize { GroupLabel::QbyP2OrdP } else { GroupLabel::QbyP2OrdP2 });
        }
        return Ok(GroupLabel::P2SemidirectQ);
    }
    if n_q == 1 {
        return Ok(GroupLabel::PxQbyP);
    }
    // P = Z_p^2 is then normal; read off the action of an element of order q
    let p_elems: Vec<usize> = (0..n).filter(|&a| (p as usize * p as usize).is_multiple_of(orders[a])).collect();
    if p_elems.len() != p2 {
        return Err(GroupError::Unidentified("Sylow p-subgroup is not normal".into()));
    }
    let e = q_elems[0];
    let act = |x: usize| g.mul(g.mul(e, x), g.inv(e));
    // eigenvectors: nontrivial x with e x e^-1 = x^c
    let mut eig: Vec<u64> = Vec::new();
    for &x in &p_elems {
        if x == 0 {
            continue;
        }
        let y = act(x);
        let mut xc = 0usize;
        for c in 0..p {
            if xc == y {
                if !eig.contains(&c) {
                    eig.push(c);
                }
                break;
            }
            xc = g.mul(xc, x);
        }
    }
    match eig.len() {
        0 => Ok(GroupLabel::GF),
        1 => {
            // scalar action, or an action with a single eigenvalue and a
            // Jordan block (impossible for order q coprime to p)
            let lam = eig[0];
            if lam == 1 {
                return Err(GroupError::Unidentified("trivial action".into()));
            }
            Ok(GroupLabel::Gk(1))
        }
        2 => {
            let (a, b) = (eig[0], eig[1]);
            if a == 1 || b == 1 {
                return Ok(GroupLabel::Gk(0));
            }
            let gen = crate::families::unit_of_order(p, q, 0)
                .ok_or_else(|| GroupError::Unidentified("no unit of order q mod p".into()))?;
            let la = dlog(gen, a, p).ok_or_else(|| GroupError::Unidentified("eigenvalue log".into()))?;
            let lb = dlog(gen, b, p).ok_or_else(|| GroupError::Unidentified("eigenvalue log".into()))?;
            let k = (lb * crate::families::modinv(la as i64, q as i64) as u64) % q;
            Ok(GroupLabel::Gk(canonical_k(k, q)))
        }
        _ => Err(GroupError::Unidentified(format!("eigenvalues {eig:?}"))),
    }
}

/// Discrete log of `y` to base `g` modulo `m`, over the cyclic subgroup `⟨g⟩`.
fn dlog(g: u64, y: u64, m: u64) -> Option<u64> {
    let mut x = 1 % m;
    for k in 0..m {
        if x == y % m {
            return Some(k);
        }
        x = x * g % m;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize) -> FiniteGroup {
        FiniteGroup::from_fn(n, |a, b| (a + b) % n, vec![1]).unwrap()
    }

    /// Symmetric group S3 on index encodings of permutations.
    fn s3() -> FiniteGroup {
        let mut perms: Vec<[usize; 3]> = vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        perms.sort();
        let idx = |p: [usize; 3]| perms.iter().position(|&x| x == p).unwrap();
        FiniteGroup::from_fn(6, |a, b| {
            let (x, y) = (perms[a], perms[b]);
            idx([x[y[0]], x[y[1]], x[y[2]]])
        }, vec![])
        .unwrap()
    }

    #[test]
    fn rejects_non_latin_tables() {
        let t = vec![0, 1, 1, 1];
        assert!(matches!(FiniteGroup::from_table(2, t, vec![]), Err(GroupError::NotLatin(_))));
    }

    #[test]
    fn rejects_bad_identity() {
        let t = vec![1, 0, 0, 1];
        assert_eq!(FiniteGroup::from_table(2, t, vec![]), Err(GroupError::NoIdentity));
    }

    #[test]
    fn cyclic_automorphisms_are_units() {
        for n in [5usize, 8, 12, 20] {
            let g = cyclic(n);
            let aut = compute_automorphisms(&g, 1000).unwrap();
            let units = (1..n).filter(|&u| gcd(u, n) == 1).count();
            assert_eq!(aut.len(), units, "n = {n}");
            assert_eq!(aut.perm(0), (0..n as u32).collect::<Vec<_>>().as_slice());
        }
    }

    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 { a } else { gcd(b, a % b) }
    }

    #[test]
    fn s3_is_its_own_automorphism_group_size() {
        let g = s3();
        assert!(!g.is_abelian());
        assert_eq!(g.center(), vec![0]);
        let aut = compute_automorphisms(&g, 100).unwrap();
        assert_eq!(aut.len(), 6);
        for f in 0..aut.len() {
            assert_eq!(aut.compose(f, aut.inv(f)), 0);
        }
    }

    #[test]
    fn composition_without_table() {
        let g = FiniteGroup::from_fn(16, |a, b| a ^ b, vec![1, 2, 4, 8]).unwrap();
        let aut = compute_automorphisms(&g, 30000).unwrap();
        assert_eq!(aut.len(), 20160);
        assert!(!aut.has_compose_table());
        for (f, g) in [(1, 2), (77, 19999), (20159, 20159), (4321, 1234)] {
            let direct: Vec<u32> = (0..16).map(|x| aut.apply(f, aut.apply(g, x)) as u32).collect();
            assert_eq!(aut.perm(aut.compose(f, g)), direct.as_slice());
        }
        assert_eq!(aut.compose(aut.inv(9000), 9000), 0);
    }

    #[test]
    fn budget_is_enforced() {
        let g = cyclic(13);
        assert_eq!(compute_automorphisms(&g, 5).unwrap_err(), GroupError::AutBudget(5));
    }

    #[test]
    fn subgroup_lattice_of_z12() {
        let g = cyclic(12);
        let subs = g.subgroups_dividing(12);
        assert_eq!(subs.len(), 6);
        assert_eq!(g.subgroups_of_order(4), vec![vec![0, 3, 6, 9]]);
    }

    #[test]
    fn isomorphism_between_relabelled_cyclic_groups() {
        let g = cyclic(9);
        // relabel by x -> 2x (mod 9) and a shift-free permutation
        let h = FiniteGroup::from_fn(9, |a, b| (a + b) % 9, vec![2]).unwrap();
        let m = are_isomorphic(&g, &h).unwrap();
        assert!(m.is_homomorphism(&g, &h) && m.is_bijective());
        assert!(are_isomorphic(&cyclic(6), &s3()).is_none());
    }
}
