//! Skew braces built from regular subgroups, axiom checks and invariants.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groups::{for_each_isomorphism, identify_p2q, FiniteGroup, GroupError, GroupLabel};
use crate::holomorph::{Holomorph, RegularSubgroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BraceError {
    #[error("multiplicative table has {got} entries, expected {expected}")]
    BadTable { expected: usize, got: usize },
    #[error("subgroup is not regular")]
    NotRegular,
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A finite skew brace on `0..n`. Element 0 is the identity of both
/// operations.
#[derive(Clone, Debug)]
pub struct SkewBrace {
    add: Arc<FiniteGroup>,
    circ: Vec<u32>,
    circ_inv: Vec<u32>,
}

/// A failing instance of an axiom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomViolation {
    CircNotGroup(String),
    /// `a ∘ (b + c) ≠ a ∘ b - a + a ∘ c`
    Compatibility { a: usize, b: usize, c: usize },
}

impl SkewBrace {
    /// Takes an additive group and a second table on the same set. No axiom
    /// is checked here; see [`check_axioms`].
    pub fn from_tables(add: Arc<FiniteGroup>, circ: Vec<u32>) -> Result<Self, BraceError> {
        let n = add.order();
        if circ.len() != n * n || circ.iter().any(|&x| x as usize >= n) {
            return Err(BraceError::BadTable { expected: n * n, got: circ.len() });
        }
        let mut circ_inv = vec![0u32; n];
        for a in 0..n {
            circ_inv[a] = (0..n).find(|&b| circ[a * n + b] == 0).unwrap_or(0) as u32;
        }
        Ok(SkewBrace { add, circ, circ_inv })
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.add.order()
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add.mul(a, b)
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.add.inv(a)
    }

    #[inline]
    pub fn circ(&self, a: usize, b: usize) -> usize {
        self.circ[a * self.order() + b] as usize
    }

    /// Inverse in `(B, ∘)`, written `a'`.
    #[inline]
    pub fn circ_inv(&self, a: usize) -> usize {
        self.circ_inv[a] as usize
    }

    /// `λ_a(b) = -a + a ∘ b`.
    #[inline]
    pub fn lambda(&self, a: usize, b: usize) -> usize {
        self.add(self.neg(a), self.circ(a, b))
    }

    pub fn additive_group(&self) -> &FiniteGroup {
        &self.add
    }

    pub fn multiplicative_group(&self) -> FiniteGroup {
        FiniteGroup::from_trusted_table(self.order(), self.circ.clone())
    }

    /// `ker λ = {a : λ_a = id}`.
    pub fn kernel(&self) -> Vec<usize> {
        let n = self.order();
        (0..n).filter(|&a| (0..n).all(|b| self.lambda(a, b) == b)).collect()
    }

    /// `Fix(B) = {a : λ_b(a) = a for all b}`.
    pub fn fix(&self) -> Vec<usize> {
        let n = self.order();
        (0..n).filter(|&a| (0..n).all(|b| self.lambda(b, a) == a)).collect()
    }

    /// Whether `x + (y ∘ z) = (x + y) ∘ x' ∘ (x + z)` holds throughout.
    pub fn is_bi_skew(&self) -> bool {
        let n = self.order();
        (0..n).all(|x| {
            let xi = self.circ_inv(x);
            (0..n).all(|y| {
                let left = self.circ(self.add(x, y), xi);
                (0..n).all(|z| self.add(x, self.circ(y, z)) == self.circ(left, self.add(x, z)))
            })
        })
    }

    /// Whether the subgroup `sub` of `(B, +)` is an ideal: λ-invariant and
    /// normal in both groups.
    pub fn is_ideal(&self, sub: &[usize]) -> bool {
        let n = self.order();
        let mut member = vec![false; n];
        for &x in sub {
            member[x] = true;
        }
        sub.iter().all(|&x| {
            (0..n).all(|a| {
                member[self.lambda(a, x)]
                    && member[self.add(self.add(a, x), self.neg(a))]
                    && member[self.circ(self.circ(a, x), self.circ_inv(a))]
            })
        })
    }

    /// Ideals `I, J` with `I ∩ J = 0` and `|I| |J| = |B|`, which make `B`
    /// the direct product `I × J`. The first such pair with `|I| ≤ |J|` is
    /// returned.
    pub fn direct_product_witness(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        let n = self.order();
        let subs = self.add.subgroups_dividing(n);
        let ideals: Vec<&Vec<usize>> =
            subs.iter().filter(|s| s.len() > 1 && s.len() < n && self.is_ideal(s)).collect();
        for i in &ideals {
            for j in &ideals {
                if i.len() <= j.len() && i.len() * j.len() == n && i.iter().filter(|x| j.binary_search(x).is_ok()).count() == 1 {
                    return Some(((*i).clone(), (*j).clone()));
                }
            }
        }
        None
    }
}

/// The skew brace `(A, ·, ∘)` with `a ∘ b = a f_a(b)` attached to a regular
/// subgroup `{(a, f_a)}`.
pub fn brace_from_regular(hol: &Holomorph, g: &RegularSubgroup) -> Result<SkewBrace, BraceError> {
    if !hol.verify_regular(g) {
        return Err(BraceError::NotRegular);
    }
    let n = hol.n();
    let mut circ = Vec::with_capacity(n * n);
    for a in 0..n {
        let f = g.lambda[a] as usize;
        for b in 0..n {
            circ.push(hol.base.mul(a, hol.aut.apply(f, b)) as u32);
        }
    }
    SkewBrace::from_tables(hol.base.clone(), circ)
}

/// Exhaustive check of the skew brace axioms: `(B, ∘)` is a group with the
/// same identity, and `a ∘ (b + c) = a ∘ b - a + a ∘ c`.
pub fn check_axioms(b: &SkewBrace) -> Result<(), AxiomViolation> {
    let n = b.order();
    FiniteGroup::from_table(n, b.circ.clone(), Vec::new()).map_err(|e| AxiomViolation::CircNotGroup(e.to_string()))?;
    for x in 0..n {
        for y in 0..n {
            let xy = b.circ(x, y);
            let left_base = b.add(xy, b.neg(x));
            for z in 0..n {
                if b.circ(x, b.add(y, z)) != b.add(left_base, b.circ(x, z)) {
                    return Err(AxiomViolation::Compatibility { a: x, b: y, c: z });
                }
            }
        }
    }
    Ok(())
}

/// Isomorphism-invariant data of a skew brace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraceInvariants {
    pub kernel_size: usize,
    pub fix_size: usize,
    pub mul_label: GroupLabel,
    pub bi_skew: bool,
    pub direct_product: Option<(usize, usize)>,
}

pub fn invariants(b: &SkewBrace, p: u64, q: u64) -> Result<BraceInvariants, BraceError> {
    let mul_label = identify_p2q(&b.multiplicative_group(), p, q)?;
    Ok(BraceInvariants {
        kernel_size: b.kernel().len(),
        fix_size: b.fix().len(),
        mul_label,
        bi_skew: b.is_bi_skew(),
        direct_product: b.direct_product_witness().map(|(i, j)| (i.len(), j.len())),
    })
}

/// Searches for a bijection preserving both operations.
pub fn brace_isomorphic(x: &SkewBrace, y: &SkewBrace) -> Option<Vec<u32>> {
    let n = x.order();
    if n != y.order() {
        return None;
    }
    let mut found = None;
    for_each_isomorphism(x.additive_group(), y.additive_group(), |m| {
        let ok = (0..n).all(|a| (0..n).all(|b| m[x.circ(a, b)] as usize == y.circ(m[a] as usize, m[b] as usize)));
        if ok {
            found = Some(m.to_vec());
        }
        !ok
    });
    found
}
