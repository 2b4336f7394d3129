//! Set-theoretic solutions of the Yang-Baxter equation attached to skew
//! braces.
//!
//! A skew brace `B` gives the non-degenerate solution
//! `r(a, b) = (λ_a(b), λ_a(b)' ∘ a ∘ b)`, where `'` is the inverse in
//! `(B, ∘)`.

use std::fmt::Write as _;

use crate::braces::SkewBrace;

/// A map `r: X × X → X × X` on `X = 0..n`, written `r(a, b) = (σ_a(b), τ_b(a))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    n: usize,
    sigma: Vec<u32>,
    tau: Vec<u32>,
}

impl Solution {
    /// Builds from the two component tables, both indexed `[a * n + b]`
    /// with `sigma[a*n+b] = σ_a(b)` and `tau[a*n+b] = τ_b(a)`.
    pub fn from_tables(n: usize, sigma: Vec<u32>, tau: Vec<u32>) -> Self {
        assert_eq!(sigma.len(), n * n);
        assert_eq!(tau.len(), n * n);
        Solution { n, sigma, tau }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn apply(&self, a: usize, b: usize) -> (usize, usize) {
        let i = a * self.n + b;
        (self.sigma[i] as usize, self.tau[i] as usize)
    }

    /// Whether `r ∘ r = id`.
    pub fn is_involutive(&self) -> bool {
        let n = self.n;
        (0..n).all(|a| (0..n).all(|b| {
            let (x, y) = self.apply(a, b);
            self.apply(x, y) == (a, b)
        }))
    }
}

pub fn solution_from_brace(b: &SkewBrace) -> Solution {
    let n = b.order();
    let mut sigma = Vec::with_capacity(n * n);
    let mut tau = Vec::with_capacity(n * n);
    for a in 0..n {
        for c in 0..n {
            let l = b.lambda(a, c);
            sigma.push(l as u32);
            tau.push(b.circ(b.circ(b.circ_inv(l), a), c) as u32);
        }
    }
    Solution { n, sigma, tau }
}

/// Exhaustive braid relation
/// `(r × id)(id × r)(r × id) = (id × r)(r × id)(id × r)` on all triples.
/// Returns the first failing triple.
pub fn check_ybe(r: &Solution) -> Result<(), (usize, usize, usize)> {
    let n = r.n;
    let r12 = |(x, y, z): (usize, usize, usize)| {
        let (a, b) = r.apply(x, y);
        (a, b, z)
    };
    let r23 = |(x, y, z): (usize, usize, usize)| {
        let (b, c) = r.apply(y, z);
        (x, b, c)
    };
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let t = (x, y, z);
                if r12(r23(r12(t))) != r23(r12(r23(t))) {
                    return Err(t);
                }
            }
        }
    }
    Ok(())
}

/// Which component fails to be a permutation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Degeneracy {
    /// `σ_a` is not bijective
    Left(usize),
    /// `τ_b` is not bijective
    Right(usize),
}

/// Checks that every `σ_a` and every `τ_b` is a permutation.
pub fn check_nondegenerate(r: &Solution) -> Result<(), Degeneracy> {
    let n = r.n;
    let mut seen = vec![usize::MAX; n];
    for a in 0..n {
        for b in 0..n {
            let s = r.sigma[a * n + b] as usize;
            if seen[s] == a {
                return Err(Degeneracy::Left(a));
            }
            seen[s] = a;
        }
    }
    let mut seen = vec![usize::MAX; n];
    for b in 0..n {
        for a in 0..n {
            let t = r.tau[a * n + b] as usize;
            if seen[t] == b {
                return Err(Degeneracy::Right(b));
            }
            seen[t] = b;
        }
    }
    Ok(())
}

/// Plain-text matrix: one row per `a`, entries `σ_a(b),τ_b(a)` separated by
/// spaces, preceded by a `# n = ...` header line.
pub fn export_text(r: &Solution) -> String {
    let n = r.n;
    let mut out = String::new();
    let _ = writeln!(out, "# n = {n}; row a, column b: sigma_a(b),tau_b(a)");
    for a in 0..n {
        let row: Vec<String> = (0..n)
            .map(|b| {
                let (s, t) = r.apply(a, b);
                format!("{s},{t}")
            })
            .collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

/// Parses the format written by [`export_text`].
pub fn parse_text(s: &str) -> Result<Solution, String> {
    let rows: Vec<&str> = s.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()).collect();
    let n = rows.len();
    let mut sigma = vec![0u32; n * n];
    let mut tau = vec![0u32; n * n];
    for (a, row) in rows.iter().enumerate() {
        let cells: Vec<&str> = row.split_whitespace().collect();
        if cells.len() != n {
            return Err(format!("row {a} has {} entries, expected {n}", cells.len()));
        }
        for (b, cell) in cells.iter().enumerate() {
            let (x, y) = cell.split_once(',').ok_or_else(|| format!("bad entry `{cell}`"))?;
            let parse = |v: &str| v.parse::<u32>().map_err(|e| format!("{e} in `{cell}`"));
            sigma[a * n + b] = parse(x)?;
            tau[a * n + b] = parse(y)?;
            if sigma[a * n + b] as usize >= n || tau[a * n + b] as usize >= n {
                return Err(format!("entry `{cell}` out of range"));
            }
        }
    }
    Ok(Solution { n, sigma, tau })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braces::brace_from_regular;
    use crate::enumerate::enumerate_dfs;
    use crate::families::{build_group, structured_aut, FamilyParams};
    use crate::groups::GroupLabel;
    use crate::holomorph::Holomorph;
    use std::sync::Arc;

    #[test]
    fn trivial_brace_on_abelian_group_gives_the_flip() {
        let params = FamilyParams::derive(2, 3).unwrap();
        let fam = build_group(GroupLabel::PxPQ, &params).unwrap();
        let h = Holomorph::new(fam.group.clone(), Arc::new(structured_aut(&fam).unwrap().aut));
        let b = brace_from_regular(&h, &crate::holomorph::RegularSubgroup { lambda: vec![0; 12] }).unwrap();
        let r = solution_from_brace(&b);
        for x in 0..12 {
            for y in 0..12 {
                assert_eq!(r.apply(x, y), (y, x));
            }
        }
        assert!(r.is_involutive());
    }

    #[test]
    fn solutions_of_order_12_braces() {
        let params = FamilyParams::derive(2, 3).unwrap();
        let fam = build_group(GroupLabel::QbyP2OrdP, &params).unwrap();
        let h = Holomorph::new(fam.group.clone(), Arc::new(structured_aut(&fam).unwrap().aut));
        for g in enumerate_dfs(&h).iter().step_by(5) {
            let r = solution_from_brace(&brace_from_regular(&h, g).unwrap());
            assert_eq!(check_ybe(&r), Ok(()));
            assert_eq!(check_nondegenerate(&r), Ok(()));
            // nonabelian additive group, so never involutive
            assert!(!r.is_involutive());
            assert_eq!(parse_text(&export_text(&r)).unwrap(), r);
        }
    }

    #[test]
    fn broken_solution_is_rejected() {
        // r(x, y) = (x + y, y) on Z_3 fails the braid relation
        let n = 3;
        let sigma = (0..n * n).map(|i| ((i / n + i % n) % n) as u32).collect();
        let tau = (0..n * n).map(|i| (i % n) as u32).collect();
        let r = Solution::from_tables(n, sigma, tau);
        assert!(check_ybe(&r).is_err());
        let r = Solution::from_tables(2, vec![0, 0, 1, 1], vec![0, 1, 0, 1]);
        assert_eq!(check_nondegenerate(&r), Err(Degeneracy::Left(0)));
    }
}
