//! The holomorph `Hol(A) = A ⋊ Aut(A)` and its regular subgroups.
//!
//! An element `(a, f)` acts on `A` by `x -> a f(x)`, so the product is
//! `(a, f)(b, g) = (a f(b), f g)`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::groups::{AutGroup, FiniteGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HolElem {
    pub a: u32,
    pub f: u32,
}

impl HolElem {
    pub fn new(a: usize, f: usize) -> Self {
        HolElem { a: a as u32, f: f as u32 }
    }
}

#[derive(Clone, Debug)]
pub struct Holomorph {
    pub base: Arc<FiniteGroup>,
    pub aut: Arc<AutGroup>,
}

/// A subgroup of the holomorph as a sorted element list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HolSubgroup {
    pub elements: Vec<HolElem>,
}

impl HolSubgroup {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Sorted distinct images under the projection to `A`.
    pub fn pi1(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.elements.iter().map(|e| e.a as usize).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Sorted distinct images under the projection to `Aut(A)`.
    pub fn pi2(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.elements.iter().map(|e| e.f as usize).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// A regular subgroup, stored as the automorphism `f_a` paired with each
/// `a` in `A`. The subgroup is `{(a, lambda[a])}`.
///
/// Ordering on this vector agrees with lexicographic ordering of the sorted
/// packed element lists, which is what orbit representatives use.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RegularSubgroup {
    pub lambda: Vec<u32>,
}

impl RegularSubgroup {
    pub fn elements(&self) -> Vec<HolElem> {
        self.lambda.iter().enumerate().map(|(a, &f)| HolElem { a: a as u32, f }).collect()
    }

    pub fn pi2(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.lambda.iter().map(|&f| f as usize).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// `|ker λ|` of the associated brace, the number of `a` with `f_a = 1`.
    pub fn kernel_size(&self) -> usize {
        self.lambda.iter().filter(|&&f| f == 0).count()
    }

    pub fn to_subgroup(&self) -> HolSubgroup {
        HolSubgroup { elements: self.elements() }
    }
}

/// Bounds on `π_1(G)` for `G = ⟨(u_i, α_i)⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pi1Bound {
    /// The subgroup of `A` generated by all `h(u_i)` with `h` in `π_2(G)`;
    /// `π_1(G)` lies inside it.
    pub bound: Vec<usize>,
    /// Union of the cyclic groups `⟨u_i⟩` for generators with `α_i(u_i) = u_i`;
    /// these lie inside `π_1(G)`.
    pub guaranteed: Vec<usize>,
}

impl Holomorph {
    pub fn new(base: Arc<FiniteGroup>, aut: Arc<AutGroup>) -> Self {
        assert_eq!(base.order(), aut.base_order());
        Holomorph { base, aut }
    }

    pub fn n(&self) -> usize {
        self.base.order()
    }

    pub fn order(&self) -> usize {
        self.base.order() * self.aut.len()
    }

    #[inline]
    pub fn mul(&self, x: HolElem, y: HolElem) -> HolElem {
        let a = self.base.mul(x.a as usize, self.aut.apply(x.f as usize, y.a as usize));
        HolElem::new(a, self.aut.compose(x.f as usize, y.f as usize))
    }

    #[inline]
    pub fn inv(&self, x: HolElem) -> HolElem {
        let fi = self.aut.inv(x.f as usize);
        HolElem::new(self.aut.apply(fi, self.base.inv(x.a as usize)), fi)
    }

    pub fn identity(&self) -> HolElem {
        HolElem { a: 0, f: 0 }
    }

    pub fn pow(&self, x: HolElem, k: usize) -> HolElem {
        let mut r = self.identity();
        for _ in 0..k {
            r = self.mul(r, x);
        }
        r
    }

    pub fn element_order(&self, x: HolElem) -> usize {
        let mut y = x;
        let mut k = 1;
        while y != self.identity() {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    /// Action of `(a, f)` on `x` in `A`.
    pub fn act(&self, e: HolElem, x: usize) -> usize {
        self.base.mul(e.a as usize, self.aut.apply(e.f as usize, x))
    }

    /// Packs an element into one integer, `a |Aut| + f`.
    pub fn pack(&self, e: HolElem) -> u64 {
        e.a as u64 * self.aut.len() as u64 + e.f as u64
    }

    pub fn unpack(&self, v: u64) -> HolElem {
        let m = self.aut.len() as u64;
        HolElem { a: (v / m) as u32, f: (v % m) as u32 }
    }

    /// Subgroup generated by `gens`, or `None` past `limit` elements.
    pub fn closure(&self, gens: &[HolElem], limit: usize) -> Option<HolSubgroup> {
        let mut seen = std::collections::HashSet::from([self.identity()]);
        let mut elems = vec![self.identity()];
        let mut i = 0;
        while i < elems.len() {
            for &g in gens {
                let y = self.mul(elems[i], g);
                if seen.insert(y) {
                    elems.push(y);
                    if elems.len() > limit {
                        return None;
                    }
                }
            }
            i += 1;
        }
        elems.sort_unstable();
        Some(HolSubgroup { elements: elems })
    }

    /// The two textbook criteria for regularity of a subgroup:
    /// `|S| = |A|` with `π_1` bijective, and `|S| = |A|` with trivial
    /// intersection with `1 × Aut(A)`.
    pub fn regularity_criteria(&self, s: &HolSubgroup) -> (bool, bool) {
        let n = self.n();
        let right_size = s.len() == n;
        let by_pi1 = right_size && s.pi1().len() == n;
        let by_stab = right_size && s.elements.iter().filter(|e| e.a == 0).count() == 1;
        (by_pi1, by_stab)
    }

    pub fn is_regular(&self, s: &HolSubgroup) -> bool {
        let (a, b) = self.regularity_criteria(s);
        debug_assert_eq!(a, b, "regularity criteria disagree");
        a && b
    }

    /// Converts a regular subgroup to its compact form.
    pub fn as_regular(&self, s: &HolSubgroup) -> Option<RegularSubgroup> {
        if !self.is_regular(s) {
            return None;
        }
        let mut lambda = vec![0u32; self.n()];
        for e in &s.elements {
            lambda[e.a as usize] = e.f;
        }
        Some(RegularSubgroup { lambda })
    }

    /// Checks that `{(a, lambda[a])}` is closed under multiplication, which
    /// for a set of size `|A|` meeting every fibre once means it is a
    /// regular subgroup.
    pub fn verify_regular(&self, g: &RegularSubgroup) -> bool {
        let n = self.n();
        if g.lambda.len() != n || g.lambda.iter().any(|&f| f as usize >= self.aut.len()) || g.lambda[0] != 0 {
            return false;
        }
        (0..n).all(|a| {
            (0..n).all(|b| {
                let x = self.mul(HolElem::new(a, g.lambda[a] as usize), HolElem::new(b, g.lambda[b] as usize));
                g.lambda[x.a as usize] == x.f
            })
        })
    }

    /// `h G h^{-1}` for `h = (1, h)` in `Aut(A)`.
    pub fn conjugate_regular(&self, g: &RegularSubgroup, h: usize) -> RegularSubgroup {
        let mut lambda = vec![0u32; self.n()];
        for (a, &f) in g.lambda.iter().enumerate() {
            lambda[self.aut.apply(h, a)] = self.aut.conjugate(h, f as usize) as u32;
        }
        RegularSubgroup { lambda }
    }

    /// Bounds on `π_1(⟨gens⟩)` computed without closing the subgroup.
    pub fn pi1_closure_bound(&self, gens: &[HolElem]) -> Pi1Bound {
        let alphas: Vec<usize> = gens.iter().map(|e| e.f as usize).collect();
        let p2 = self.aut.subgroup(&alphas);
        let us: Vec<usize> = gens.iter().map(|e| e.a as usize).collect();
        let u = self.base.closure(&us);
        let mut images: Vec<usize> = Vec::new();
        for &h in &p2 {
            for &x in &us {
                images.push(self.aut.apply(h, x));
            }
        }
        images.sort_unstable();
        images.dedup();
        let bound = self.base.closure(&images);
        debug_assert!(u.iter().all(|x| bound.binary_search(x).is_ok()));
        let mut guaranteed: Vec<usize> = gens
            .iter()
            .filter(|e| self.aut.apply(e.f as usize, e.a as usize) == e.a as usize)
            .flat_map(|e| self.base.closure(&[e.a as usize]))
            .collect();
        guaranteed.sort_unstable();
        guaranteed.dedup();
        Pi1Bound { bound, guaranteed }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_group, structured_aut, FamilyParams};
    use crate::groups::GroupLabel;

    fn hol(p: u64, q: u64, label: GroupLabel) -> Holomorph {
        let params = FamilyParams::derive(p, q).unwrap();
        let fam = build_group(label, &params).unwrap();
        let aut = structured_aut(&fam).unwrap().aut;
        Holomorph::new(fam.group.clone(), Arc::new(aut))
    }

    #[test]
    fn left_and_right_regular_representations() {
        let h = hol(2, 3, GroupLabel::GF);
        let n = h.n();
        let left = RegularSubgroup { lambda: vec![0; n] };
        assert!(h.verify_regular(&left));
        // right multiplication x -> x a is (a, conjugation by a^{-1})
        let right: Vec<u32> = (0..n)
            .map(|a| {
                let ai = h.base.inv(a);
                let perm: Vec<u32> = (0..n).map(|x| h.base.mul(h.base.mul(ai, x), a) as u32).collect();
                h.aut.index_of(&perm).unwrap() as u32
            })
            .collect();
        let right = RegularSubgroup { lambda: right };
        assert!(h.verify_regular(&right));
        assert_eq!(right.kernel_size(), h.base.center().len());
        let s = right.to_subgroup();
        assert_eq!(h.regularity_criteria(&s), (true, true));
        assert_eq!(h.as_regular(&s), Some(right));
    }

    #[test]
    fn inverse_and_identity() {
        let h = hol(2, 5, GroupLabel::PxQbyP);
        for a in 0..h.n() {
            for f in (0..h.aut.len()).step_by(3) {
                let x = HolElem::new(a, f);
                assert_eq!(h.mul(x, h.inv(x)), h.identity());
                assert_eq!(h.unpack(h.pack(x)), x);
            }
        }
    }

    #[test]
    fn stabiliser_subgroup_is_not_regular() {
        let h = hol(2, 5, GroupLabel::CyclicP2Q);
        let gens: Vec<HolElem> = h.aut.generators().iter().map(|&f| HolElem::new(0, f)).collect();
        let s = h.closure(&gens, usize::MAX).unwrap();
        assert_eq!(s.len(), h.aut.len());
        assert_eq!(h.regularity_criteria(&s), (false, false));
    }

    #[test]
    fn pi1_bound_contains_projection() {
        let h = hol(2, 5, GroupLabel::QbyP2OrdP);
        for a in 0..h.n() {
            for f in 0..h.aut.len() {
                let g = [HolElem::new(a, f)];
                let b = h.pi1_closure_bound(&g);
                let s = h.closure(&g, usize::MAX).unwrap();
                assert!(s.pi1().iter().all(|x| b.bound.binary_search(x).is_ok()));
                assert!(b.guaranteed.iter().all(|x| s.pi1().binary_search(x).is_ok()));
            }
        }
    }
}
