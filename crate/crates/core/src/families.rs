//! The isomorphism types of groups of order `p^2 q`, built from their
//! presentations, and explicit parametrisations of their automorphism groups.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groups::{canonical_k, extend_images, AutGroup, FiniteGroup, GroupError, GroupLabel};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p and q must be distinct primes, got p = q = {0}")]
    EqualPrimes(u64),
    #[error("group {0} does not exist for p = {1}, q = {2}")]
    Absent(String, u64, u64),
    #[error("parameter {name} = {value} is not a unit of order {order} modulo {modulus}")]
    BadParameter { name: &'static str, value: u64, order: u64, modulus: u64 },
    #[error("no admissible value for parameter {0}")]
    NoParameter(&'static str),
    #[error("coordinates {coords:?} do not define an automorphism of {label}")]
    BadCoordinates { label: String, coords: Vec<i64> },
    #[error("structured automorphism group of {label} has {got} elements, formula says {expected}")]
    AutOrderMismatch { label: String, expected: usize, got: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

pub fn modpow(base: u64, mut exp: u64, m: u64) -> u64 {
    let mut b = base % m;
    let mut r = 1 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    r
}

/// Inverse of `a` modulo `m`; panics if `a` is not a unit.
pub fn modinv(a: i64, m: i64) -> i64 {
    let (mut r0, mut r1) = (a.rem_euclid(m), m);
    let (mut s0, mut s1) = (1i64, 0i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    assert_eq!(r0, 1, "{a} is not invertible modulo {m}");
    s0.rem_euclid(m)
}

/// Multiplicative order of a unit `a` modulo `m`.
pub fn mult_order(a: u64, m: u64) -> u64 {
    let mut x = a % m;
    let mut k = 1;
    while x != 1 % m {
        x = x * a % m;
        k += 1;
        if k > m {
            return 0;
        }
    }
    k
}

/// The `nth` smallest positive unit of exact order `order` modulo `modulus`.
pub fn unit_of_order(modulus: u64, order: u64, nth: usize) -> Option<u64> {
    (1..modulus)
        .filter(|&a| gcd(a, modulus) == 1 && mult_order(a, modulus) == order)
        .nth(nth)
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// Which candidate to take for each parameter, 0 being the smallest.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamChoice {
    pub t: usize,
    pub g: usize,
    pub r: usize,
    pub h: usize,
    pub xi: usize,
}

/// The numerical parameters of the presentations.
///
/// * `t`: unit of order q mod p^2
/// * `g`: unit of order q mod p
/// * `r`: unit of order p mod q
/// * `h`: unit of order p^2 mod q
/// * `xi`: coefficient making `x^2 + xi x + 1` irreducible mod p with the
///   companion matrix `F` of order q
///
/// A parameter is `None` when no group of the order needs it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilyParams {
    pub p: u64,
    pub q: u64,
    pub t: Option<u64>,
    pub g: Option<u64>,
    pub r: Option<u64>,
    pub h: Option<u64>,
    pub xi: Option<u64>,
}

impl FamilyParams {
    pub fn derive(p: u64, q: u64) -> Result<Self, FamilyError> {
        Self::derive_with(p, q, ParamChoice::default())
    }

    pub fn derive_with(p: u64, q: u64, choice: ParamChoice) -> Result<Self, FamilyError> {
        for x in [p, q] {
            if !is_prime(x) {
                return Err(FamilyError::NotPrime(x));
            }
        }
        if p == q {
            return Err(FamilyError::EqualPrimes(p));
        }
        let pick = |cond: bool, name: &'static str, v: Option<u64>| -> Result<Option<u64>, FamilyError> {
            if cond { v.map(Some).ok_or(FamilyError::NoParameter(name)) } else { Ok(None) }
        };
        let p_mod_q_one = (p - 1).is_multiple_of(q);
        let q_mod_p_one = (q - 1).is_multiple_of(p);
        let q_mod_p2_one = (q - 1).is_multiple_of(p * p);
        let gf = q > 2 && (p + 1).is_multiple_of(q);
        Ok(FamilyParams {
            p,
            q,
            t: pick(p_mod_q_one, "t", unit_of_order(p * p, q, choice.t))?,
            g: pick(p_mod_q_one, "g", unit_of_order(p, q, choice.g))?,
            r: pick(q_mod_p_one, "r", unit_of_order(q, p, choice.r))?,
            h: pick(q_mod_p2_one, "h", unit_of_order(q, p * p, choice.h))?,
            xi: pick(gf, "xi", find_xi(p, q, choice.xi))?,
        })
    }

    /// Replaces one parameter after checking it has the required order.
    pub fn with_override(mut self, name: &str, value: u64) -> Result<Self, FamilyError> {
        let (p, q) = (self.p, self.q);
        let check = |n: &'static str, modulus: u64, order: u64| {
            if gcd(value, modulus) == 1 && mult_order(value, modulus) == order {
                Ok(Some(value % modulus))
            } else {
                Err(FamilyError::BadParameter { name: n, value, order, modulus })
            }
        };
        match name {
            "t" => self.t = check("t", p * p, q)?,
            "g" => self.g = check("g", p, q)?,
            "r" => self.r = check("r", q, p)?,
            "h" => self.h = check("h", q, p * p)?,
            "xi" => {
                if !xi_admissible(p, q, value) {
                    return Err(FamilyError::BadParameter { name: "xi", value, order: q, modulus: p });
                }
                self.xi = Some(value % p);
            }
            _ => return Err(FamilyError::NoParameter("unknown")),
        }
        Ok(self)
    }

    pub fn n(&self) -> usize {
        (self.p * self.p * self.q) as usize
    }

    /// The set of canonical `k` with a group `G_k`.
    pub fn k_values(&self) -> Vec<u64> {
        if !(self.p - 1).is_multiple_of(self.q) {
            return Vec::new();
        }
        (0..self.q).filter(|&k| canonical_k(k, self.q) == k).collect()
    }

    /// Labels of all groups of order `p^2 q`, abelian first.
    pub fn labels(&self) -> Vec<GroupLabel> {
        let mut out = vec![GroupLabel::CyclicP2Q, GroupLabel::PxPQ];
        if self.t.is_some() {
            out.push(GroupLabel::P2SemidirectQ);
            out.extend(self.k_values().into_iter().map(GroupLabel::Gk));
        }
        if self.xi.is_some() {
            out.push(GroupLabel::GF);
        }
        if self.r.is_some() {
            out.push(GroupLabel::QbyP2OrdP);
        }
        if self.h.is_some() {
            out.push(GroupLabel::QbyP2OrdP2);
        }
        if self.r.is_some() {
            out.push(GroupLabel::PxQbyP);
        }
        out
    }

    /// Stable text form used for cache keys.
    pub fn fingerprint(&self) -> String {
        let f = |x: Option<u64>| x.map_or("-".to_string(), |v| v.to_string());
        format!(
            "p={};q={};t={};g={};r={};h={};xi={}",
            self.p, self.q, f(self.t), f(self.g), f(self.r), f(self.h), f(self.xi)
        )
    }
}

fn xi_admissible(p: u64, q: u64, xi: u64) -> bool {
    let xi = xi % p;
    // H(x) = x^2 + xi x + 1 has no root mod p
    if (0..p).any(|x| (x * x + xi * x + 1).is_multiple_of(p)) {
        return false;
    }
    Mat2::companion(p, xi).order() == q
}

fn find_xi(p: u64, q: u64, nth: usize) -> Option<u64> {
    (1..p).filter(|&x| xi_admissible(p, q, x)).nth(nth)
}

/// 2x2 matrix over `Z_p`, acting on column vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub p: u64,
    pub m: [[u64; 2]; 2],
}

impl Mat2 {
    pub fn new(p: u64, m: [[i64; 2]; 2]) -> Self {
        let r = |x: i64| x.rem_euclid(p as i64) as u64;
        Mat2 { p, m: [[r(m[0][0]), r(m[0][1])], [r(m[1][0]), r(m[1][1])]] }
    }

    pub fn identity(p: u64) -> Self {
        Self::new(p, [[1, 0], [0, 1]])
    }

    /// `F = [[0, -1], [1, -xi]]`, so that `F e1 = e2` and `F e2 = -e1 - xi e2`.
    pub fn companion(p: u64, xi: u64) -> Self {
        Self::new(p, [[0, -1], [1, -(xi as i64)]])
    }

    pub fn scalar(p: u64, c: i64) -> Self {
        Self::new(p, [[c, 0], [0, c]])
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let p = self.p;
        let mut r = [[0u64; 2]; 2];
        for (i, row) in r.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (self.m[i][0] * o.m[0][j] + self.m[i][1] * o.m[1][j]) % p;
            }
        }
        Mat2 { p, m: r }
    }

    pub fn add(&self, o: &Mat2) -> Mat2 {
        let p = self.p;
        let mut r = self.m;
        for i in 0..2 {
            for j in 0..2 {
                r[i][j] = (r[i][j] + o.m[i][j]) % p;
            }
        }
        Mat2 { p, m: r }
    }

    pub fn neg(&self) -> Mat2 {
        let p = self.p;
        let mut r = self.m;
        for row in r.iter_mut() {
            for c in row.iter_mut() {
                *c = (p - *c) % p;
            }
        }
        Mat2 { p, m: r }
    }

    pub fn det(&self) -> u64 {
        let p = self.p;
        (self.m[0][0] * self.m[1][1] % p + p - self.m[0][1] * self.m[1][0] % p) % p
    }

    pub fn inverse(&self) -> Option<Mat2> {
        let d = self.det();
        if d == 0 {
            return None;
        }
        let di = modinv(d as i64, self.p as i64);
        let m = &self.m;
        Some(Mat2::new(
            self.p,
            [
                [m[1][1] as i64 * di, -(m[0][1] as i64) * di],
                [-(m[1][0] as i64) * di, m[0][0] as i64 * di],
            ],
        ))
    }

    pub fn pow(&self, mut e: i64) -> Mat2 {
        let mut base = if e < 0 {
            e = -e;
            self.inverse().expect("singular matrix to a negative power")
        } else {
            *self
        };
        let mut r = Mat2::identity(self.p);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        r
    }

    pub fn apply(&self, v: [u64; 2]) -> [u64; 2] {
        let p = self.p;
        [
            (self.m[0][0] * v[0] + self.m[0][1] * v[1]) % p,
            (self.m[1][0] * v[0] + self.m[1][1] * v[1]) % p,
        ]
    }

    /// Multiplicative order, or 0 if singular.
    pub fn order(&self) -> u64 {
        if self.det() == 0 {
            return 0;
        }
        let id = Mat2::identity(self.p);
        let mut x = *self;
        let mut k = 1;
        while x != id {
            x = x.mul(self);
            k += 1;
        }
        k
    }
}

/// Mixed-radix normal form `x_0^{c_0} x_1^{c_1} ...` of a family group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coords {
    pub radices: Vec<u64>,
}

impl Coords {
    pub fn encode(&self, c: &[i64]) -> usize {
        let mut idx = 0usize;
        for (&x, &m) in c.iter().zip(&self.radices) {
            idx = idx * m as usize + x.rem_euclid(m as i64) as usize;
        }
        idx
    }

    pub fn decode(&self, mut idx: usize) -> Vec<i64> {
        let mut out = vec![0i64; self.radices.len()];
        for (slot, &m) in out.iter_mut().zip(&self.radices).rev() {
            *slot = (idx % m as usize) as i64;
            idx /= m as usize;
        }
        out
    }

    pub fn size(&self) -> usize {
        self.radices.iter().product::<u64>() as usize
    }
}

/// A concrete group of order `p^2 q` with named generators.
#[derive(Clone, Debug)]
pub struct FamilyGroup {
    pub label: GroupLabel,
    pub params: FamilyParams,
    pub group: Arc<FiniteGroup>,
    pub coords: Coords,
    /// Generator names in normal-form order, e.g. `["sigma", "tau", "epsilon"]`.
    pub gen_names: Vec<&'static str>,
}

impl FamilyGroup {
    /// Element with the given normal-form exponents.
    pub fn element(&self, c: &[i64]) -> usize {
        self.coords.encode(c)
    }

    /// Element for a named generator.
    pub fn generator(&self, name: &str) -> Option<usize> {
        let i = self.gen_names.iter().position(|&g| g == name)?;
        let mut c = vec![0i64; self.gen_names.len()];
        c[i] = 1;
        Some(self.element(&c))
    }

    pub fn name(&self) -> String {
        self.label.token(self.params.q)
    }
}

fn unit(x: Option<u64>, what: &str) -> u64 {
    x.unwrap_or_else(|| panic!("parameter {what} missing"))
}

/// Builds the group with the given label from its presentation.
pub fn build_group(label: GroupLabel, params: &FamilyParams) -> Result<FamilyGroup, FamilyError> {
    let (p, q) = (params.p, params.q);
    if !params.labels().contains(&label) {
        return Err(FamilyError::Absent(label.token(q), p, q));
    }
    let p2 = p * p;
    let n = params.n();
    let (radices, names): (Vec<u64>, Vec<&'static str>) = match label {
        GroupLabel::CyclicP2Q => (vec![p2 * q], vec!["x"]),
        GroupLabel::PxPQ | GroupLabel::Gk(_) | GroupLabel::GF => (vec![p, p, q], vec!["sigma", "tau", "epsilon"]),
        GroupLabel::P2SemidirectQ => (vec![p2, q], vec!["sigma", "tau"]),
        GroupLabel::QbyP2OrdP | GroupLabel::QbyP2OrdP2 => (vec![q, p2], vec!["tau", "sigma"]),
        GroupLabel::PxQbyP => (vec![q, p, p], vec!["epsilon", "sigma", "tau"]),
    };
    let coords = Coords { radices };
    let rm = |x: u64, m: u64| (x % m) as i64;
    let mul: Box<dyn Fn(&[i64], &[i64]) -> Vec<i64>> = match label {
        GroupLabel::CyclicP2Q | GroupLabel::PxPQ => Box::new(|a, b| a.iter().zip(b).map(|(x, y)| x + y).collect()),
        GroupLabel::P2SemidirectQ => {
            let t = unit(params.t, "t");
            Box::new(move |a, b| vec![a[0] + modpow(t, a[1] as u64, p2) as i64 * b[0], a[1] + b[1]])
        }
        GroupLabel::Gk(k) => {
            let g = unit(params.g, "g");
            let gk = modpow(g, k, p);
            Box::new(move |a, b| {
                let e = a[2] as u64;
                vec![
                    a[0] + rm(modpow(g, e, p), p) * b[0],
                    a[1] + rm(modpow(gk, e, p), p) * b[1],
                    a[2] + b[2],
                ]
            })
        }
        GroupLabel::GF => {
            let f = Mat2::companion(p, unit(params.xi, "xi"));
            Box::new(move |a, b| {
                let v = f.pow(a[2]).apply([b[0] as u64, b[1] as u64]);
                vec![a[0] + v[0] as i64, a[1] + v[1] as i64, a[2] + b[2]]
            })
        }
        GroupLabel::QbyP2OrdP | GroupLabel::QbyP2OrdP2 => {
            let r = if label == GroupLabel::QbyP2OrdP { unit(params.r, "r") } else { unit(params.h, "h") };
            Box::new(move |a, b| vec![a[0] + modpow(r, a[1] as u64, q) as i64 * b[0], a[1] + b[1]])
        }
        GroupLabel::PxQbyP => {
            let r = unit(params.r, "r");
            Box::new(move |a, b| vec![a[0] + modpow(r, a[1] as u64, q) as i64 * b[0], a[1] + b[1], a[2] + b[2]])
        }
    };
    let decoded: Vec<Vec<i64>> = (0..n).map(|i| coords.decode(i)).collect();
    let gens: Vec<usize> = (0..names.len())
        .map(|i| {
            let mut c = vec![0i64; names.len()];
            c[i] = 1;
            coords.encode(&c)
        })
        .collect();
    let group = FiniteGroup::from_fn(n, |a, b| coords.encode(&mul(&decoded[a], &decoded[b])), gens)?;
    Ok(FamilyGroup { label, params: *params, group: Arc::new(group), coords, gen_names: names })
}

/// All groups of order `p^2 q`, one per isomorphism type.
pub fn all_groups(params: &FamilyParams) -> Result<Vec<FamilyGroup>, FamilyError> {
    params.labels().into_iter().map(|l| build_group(l, params)).collect()
}

/// Closed-form order of `Aut(G)` for each family.
pub fn aut_order_formula(label: GroupLabel, p: u64, q: u64) -> usize {
    let v = match label {
        GroupLabel::CyclicP2Q => p * (p - 1) * (q - 1),
        GroupLabel::PxPQ => (p * p - 1) * (p * p - p) * (q - 1),
        GroupLabel::P2SemidirectQ => p * p * p * (p - 1),
        GroupLabel::Gk(k) => match gk_kind(k, q) {
            GkKind::Zero => p * (p - 1) * (p - 1),
            GkKind::One => p * p * (p * p - 1) * (p * p - p),
            GkKind::MinusOne => 2 * p * p * (p - 1) * (p - 1),
            GkKind::Generic => p * p * (p - 1) * (p - 1),
        },
        GroupLabel::GF => p * p * 2 * (p * p - 1),
        GroupLabel::QbyP2OrdP => p * q * (q - 1),
        GroupLabel::QbyP2OrdP2 => q * (q - 1),
        GroupLabel::PxQbyP => p * q * (p - 1) * (q - 1),
    };
    v as usize
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GkKind {
    Zero,
    One,
    MinusOne,
    Generic,
}

pub fn gk_kind(k: u64, q: u64) -> GkKind {
    if k == 0 {
        GkKind::Zero
    } else if k == 1 {
        GkKind::One
    } else if k == q - 1 {
        GkKind::MinusOne
    } else {
        GkKind::Generic
    }
}

/// `Aut(G)` enumerated from the explicit parametrisation, with a codec
/// between coordinate tuples and automorphism indices.
///
/// Coordinates per family:
///
/// | family | coordinates | automorphism |
/// |---|---|---|
/// | `Z_{p^2 q}` | `[u]` | `x -> x^u` |
/// | `Z_p^2 x Z_q` | `[a,b,c,d,u]` | `sigma -> sigma^a tau^c`, `tau -> sigma^b tau^d`, `epsilon -> epsilon^u` |
/// | `Z_{p^2} x|_t Z_q` | `[i,j]` | `tau -> sigma^i tau`, `sigma -> sigma^j` |
/// | `G_k` generic | `[n,m,a,b]` | diagonal `(a,b)`, `epsilon -> sigma^n tau^m epsilon` |
/// | `G_0` | `[n,a,b]` | diagonal `(a,b)`, `epsilon -> sigma^n epsilon` |
/// | `G_{-1}` | `[n,m,a,b,i]` | `diag(a,b)` or antidiagonal, `epsilon -> sigma^n tau^m epsilon^{(-1)^i}` |
/// | `G_1` | `[n,m,a,b,c,d]` | matrix `[[a,b],[c,d]]`, `epsilon -> sigma^n tau^m epsilon` |
/// | `G_F` | `[n,m,x,y,s]` | `M_+` (s = 0) or `M_-` (s = 1), `epsilon -> sigma^n tau^m epsilon^{(-1)^s}` |
/// | `Z_q x|_r Z_{p^2}` | `[k,j,i]` | `tau -> tau^i`, `sigma -> tau^j sigma^{kp+1}` |
/// | `Z_q x|_h Z_{p^2}` | `[i,j]` | `tau -> tau^j`, `sigma -> tau^i sigma` |
/// | `Z_p x (Z_q x|_r Z_p)` | `[l,i,s,j]` | `alpha_{l,i} beta_{s,j}`: `sigma -> epsilon^s tau^l sigma`, `tau -> tau^i`, `epsilon -> epsilon^j` |
#[derive(Clone, Debug)]
pub struct StructuredAut {
    pub aut: AutGroup,
    coords: Vec<Vec<i64>>,
    by_coords: HashMap<Vec<i64>, usize>,
}

impl StructuredAut {
    pub fn coords_of(&self, f: usize) -> &[i64] {
        &self.coords[f]
    }

    /// Index of the automorphism with the given coordinates (reduced into
    /// their canonical ranges first).
    pub fn index_of(&self, fam: &FamilyGroup, c: &[i64]) -> Option<usize> {
        let red = reduce_coords(fam, c);
        self.by_coords.get(&red).copied()
    }
}

/// The modulus of each automorphism coordinate, in the order of the table
/// on [`StructuredAut`].
pub fn coord_moduli(fam: &FamilyGroup) -> Vec<i64> {
    let (p, q) = (fam.params.p as i64, fam.params.q as i64);
    match fam.label {
        GroupLabel::CyclicP2Q => vec![p * p * q],
        GroupLabel::PxPQ => vec![p, p, p, p, q],
        GroupLabel::P2SemidirectQ => vec![p * p, p * p],
        GroupLabel::Gk(k) => match gk_kind(k, q as u64) {
            GkKind::Zero => vec![p, p, p],
            GkKind::One => vec![p, p, p, p, p, p],
            GkKind::MinusOne => vec![p, p, p, p, 2],
            GkKind::Generic => vec![p, p, p, p],
        },
        GroupLabel::GF => vec![p, p, p, p, 2],
        GroupLabel::QbyP2OrdP => vec![p, q, q],
        GroupLabel::QbyP2OrdP2 => vec![q, q],
        GroupLabel::PxQbyP => vec![p, p, q, q],
    }
}

fn reduce_coords(fam: &FamilyGroup, c: &[i64]) -> Vec<i64> {
    c.iter().zip(coord_moduli(fam)).map(|(&x, m)| x.rem_euclid(m)).collect()
}

/// Generator images for an automorphism with coordinates `c`, in the order
/// of `fam.gen_names`. Returns `None` when `c` is outside the parameter
/// domain (for instance a singular matrix).
pub fn aut_images(fam: &FamilyGroup, c: &[i64]) -> Option<Vec<usize>> {
    let (p, q) = (fam.params.p as i64, fam.params.q as i64);
    let e = |v: &[i64]| fam.element(v);
    let unit_p = |x: i64| x.rem_euclid(p) != 0;
    let unit_q = |x: i64| x.rem_euclid(q) != 0;
    Some(match fam.label {
        GroupLabel::CyclicP2Q => {
            let n = p * p * q;
            if gcd(c[0].rem_euclid(n) as u64, n as u64) != 1 {
                return None;
            }
            vec![e(&[c[0]])]
        }
        GroupLabel::PxPQ => {
            let m = Mat2::new(p as u64, [[c[0], c[1]], [c[2], c[3]]]);
            if m.det() == 0 || !unit_q(c[4]) {
                return None;
            }
            vec![e(&[c[0], c[2], 0]), e(&[c[1], c[3], 0]), e(&[0, 0, c[4]])]
        }
        GroupLabel::P2SemidirectQ => {
            if !unit_p(c[1]) {
                return None;
            }
            vec![e(&[c[1], 0]), e(&[c[0], 1])]
        }
        GroupLabel::Gk(k) => match gk_kind(k, q as u64) {
            GkKind::Zero => {
                let (n, a, b) = (c[0], c[1], c[2]);
                if !unit_p(a) || !unit_p(b) {
                    return None;
                }
                vec![e(&[a, 0, 0]), e(&[0, b, 0]), e(&[n, 0, 1])]
            }
            GkKind::Generic => {
                let (n, m, a, b) = (c[0], c[1], c[2], c[3]);
                if !unit_p(a) || !unit_p(b) {
                    return None;
                }
                vec![e(&[a, 0, 0]), e(&[0, b, 0]), e(&[n, m, 1])]
            }
            GkKind::MinusOne => {
                let (n, m, a, b, i) = (c[0], c[1], c[2], c[3], c[4].rem_euclid(2));
                if !unit_p(a) || !unit_p(b) {
                    return None;
                }
                if i == 0 {
                    vec![e(&[a, 0, 0]), e(&[0, b, 0]), e(&[n, m, 1])]
                } else {
                    // H_1 = [[0, a], [b, 0]]: sigma -> tau^b, tau -> sigma^a
                    vec![e(&[0, b, 0]), e(&[a, 0, 0]), e(&[n, m, -1])]
                }
            }
            GkKind::One => {
                let (n, m) = (c[0], c[1]);
                let mat = Mat2::new(p as u64, [[c[2], c[3]], [c[4], c[5]]]);
                if mat.det() == 0 {
                    return None;
                }
                vec![e(&[c[2], c[4], 0]), e(&[c[3], c[5], 0]), e(&[n, m, 1])]
            }
        },
        GroupLabel::GF => {
            let xi = fam.params.xi.expect("xi") as i64;
            let (n, m, x, y, s) = (c[0], c[1], c[2], c[3], c[4].rem_euclid(2));
            if x.rem_euclid(p) == 0 && y.rem_euclid(p) == 0 {
                return None;
            }
            let mat = if s == 0 { [[x, -y], [y, x - xi * y]] } else { [[x, y - xi * x], [y, -x]] };
            let eps = if s == 0 { 1 } else { -1 };
            vec![e(&[mat[0][0], mat[1][0], 0]), e(&[mat[0][1], mat[1][1], 0]), e(&[n, m, eps])]
        }
        GroupLabel::QbyP2OrdP => {
            // coordinates (tau, sigma)
            let (k, j, i) = (c[0], c[1], c[2]);
            if !unit_q(i) {
                return None;
            }
            vec![e(&[i, 0]), e(&[j, k * p + 1])]
        }
        GroupLabel::QbyP2OrdP2 => {
            let (i, j) = (c[0], c[1]);
            if !unit_q(j) {
                return None;
            }
            vec![e(&[j, 0]), e(&[i, 1])]
        }
        GroupLabel::PxQbyP => {
            // coordinates (epsilon, sigma, tau)
            let (l, i, s, j) = (c[0], c[1], c[2], c[3]);
            if !unit_p(i) || !unit_q(j) {
                return None;
            }
            vec![e(&[j, 0, 0]), e(&[s, 1, l]), e(&[0, 0, i])]
        }
    })
}

/// Permutation of the automorphism with coordinates `c`.
pub fn aut_perm(fam: &FamilyGroup, c: &[i64]) -> Result<Vec<u32>, FamilyError> {
    let bad = || FamilyError::BadCoordinates { label: fam.name(), coords: c.to_vec() };
    let images = aut_images(fam, c).ok_or_else(bad)?;
    let g = &fam.group;
    let n = g.order();
    let mut map = vec![0u32; n];
    let mut used = vec![false; n];
    let gens: Vec<usize> = (0..fam.gen_names.len()).map(|i| fam.generator(fam.gen_names[i]).unwrap()).collect();
    if !extend_images(g, g, &gens, &images, &mut map, &mut used) || map.contains(&u32::MAX) {
        return Err(bad());
    }
    Ok(map)
}

fn coordinate_domain(fam: &FamilyGroup) -> Vec<Vec<i64>> {
    let ranges = coord_moduli(fam);
    let total: i64 = ranges.iter().product();
    (0..total)
        .map(|mut idx| {
            let mut c = vec![0i64; ranges.len()];
            for (slot, &m) in c.iter_mut().zip(&ranges).rev() {
                *slot = idx % m;
                idx /= m;
            }
            c
        })
        .filter(|c| aut_images(fam, c).is_some())
        .collect()
}

/// Enumerates `Aut(G)` from the parametrisation and checks its order
/// against [`aut_order_formula`].
pub fn structured_aut(fam: &FamilyGroup) -> Result<StructuredAut, FamilyError> {
    let domain = coordinate_domain(fam);
    let mut perms = Vec::with_capacity(domain.len());
    let mut by_perm: HashMap<Vec<u32>, Vec<i64>> = HashMap::new();
    for c in domain {
        let perm = aut_perm(fam, &c)?;
        by_perm.insert(perm.clone(), c);
        perms.push(perm);
    }
    let expected = aut_order_formula(fam.label, fam.params.p, fam.params.q);
    if by_perm.len() != expected || perms.len() != expected {
        return Err(FamilyError::AutOrderMismatch { label: fam.name(), expected, got: by_perm.len() });
    }
    let aut = AutGroup::from_perms(fam.group.order(), perms);
    let coords: Vec<Vec<i64>> = (0..aut.len()).map(|f| by_perm[aut.perm(f)].clone()).collect();
    let by_coords = coords.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
    Ok(StructuredAut { aut, coords, by_coords })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{compute_automorphisms, identify_p2q};

    #[test]
    fn parameters_for_small_orders() {
        let a = FamilyParams::derive(7, 3).unwrap();
        assert_eq!((a.t, a.g), (Some(18), Some(2)));
        let b = FamilyParams::derive(3, 7).unwrap();
        assert_eq!(b.r, Some(2));
        let c = FamilyParams::derive(2, 5).unwrap();
        assert_eq!((c.r, c.h), (Some(4), Some(2)));
        let d = FamilyParams::derive(2, 3).unwrap();
        assert_eq!(d.xi, Some(1));
    }

    #[test]
    fn second_choices_differ() {
        let c = ParamChoice { r: 1, ..Default::default() };
        let a = FamilyParams::derive_with(3, 7, c).unwrap();
        assert_eq!(a.r, Some(4));
    }

    #[test]
    fn overrides_are_validated() {
        let a = FamilyParams::derive(3, 7).unwrap();
        assert!(a.with_override("r", 3).is_err());
        assert_eq!(a.with_override("r", 4).unwrap().r, Some(4));
    }

    #[test]
    fn group_counts() {
        for (p, q, count) in [(2, 3, 5), (2, 5, 5), (2, 7, 4), (3, 2, 5), (3, 7, 4), (5, 3, 3), (7, 3, 6), (2, 13, 5)] {
            let params = FamilyParams::derive(p, q).unwrap();
            assert_eq!(params.labels().len(), count, "p = {p}, q = {q}");
        }
    }

    #[test]
    fn built_groups_identify_as_their_label() {
        for (p, q) in [(2, 3), (2, 5), (2, 7), (3, 2), (3, 7), (5, 3), (7, 3), (5, 2)] {
            let params = FamilyParams::derive(p, q).unwrap();
            for fam in all_groups(&params).unwrap() {
                assert_eq!(identify_p2q(&fam.group, p, q).unwrap(), fam.label, "p = {p}, q = {q}");
            }
        }
    }

    #[test]
    fn structured_matches_brute_force_on_order_20_and_18() {
        for (p, q) in [(2, 5), (3, 2), (2, 3)] {
            let params = FamilyParams::derive(p, q).unwrap();
            for fam in all_groups(&params).unwrap() {
                let s = structured_aut(&fam).unwrap();
                let b = compute_automorphisms(&fam.group, 100_000).unwrap();
                assert_eq!(s.aut.len(), b.len());
                for f in 0..b.len() {
                    assert_eq!(s.aut.perm(f), b.perm(f));
                }
            }
        }
    }

    #[test]
    fn companion_matrix_order() {
        let f = Mat2::companion(5, 1);
        assert_eq!(f.order(), 3);
        assert_eq!(f.pow(3), Mat2::identity(5));
        assert_eq!(f.mul(&f.inverse().unwrap()), Mat2::identity(5));
    }

    #[test]
    fn coords_roundtrip() {
        let c = Coords { radices: vec![3, 5, 2] };
        for i in 0..c.size() {
            assert_eq!(c.encode(&c.decode(i)), i);
        }
    }
}
