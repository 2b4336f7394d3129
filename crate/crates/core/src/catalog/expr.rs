//! The small expression language used by witness recipes.
//!
//! Numbers are exact rationals until they meet a modulus: an exponent of a
//! group element is reduced modulo the element's order, an automorphism
//! coordinate modulo that coordinate's range, and a matrix or vector entry
//! modulo `p`. So `tau^(1/(r-1))` means the inverse of `r - 1` modulo the
//! order of `tau`.
//!
//! ```text
//! expr    := or
//! or      := and ("||" and)*
//! and     := cmp ("&&" cmp)*
//! cmp     := sum (("==" | "!=" | "<" | "<=" | ">" | ">=") sum)?
//! sum     := product (("+" | "-") product)*
//! product := unary (("*" | "/" | "%") unary)*
//! unary   := ("-" | "!") unary | power
//! power   := atom ("^" unary)?
//! atom    := integer | name | name "(" expr ("," expr)* ")" | "(" expr ")"
//! ```
//!
//! Built-in names: the generator names of the group (`sigma`, `tau`,
//! `epsilon`, `x`), the matrices `F` (companion matrix of `x^2 + xi x + 1`)
//! and `I`, and the functions `inv`, `H`, `v`, `psi_rep`, `elem`, `aut`.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::families::{coord_moduli, gcd, modinv, FamilyGroup, Mat2, StructuredAut};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExprError {
    #[error("parse error in `{src}` at byte {pos}: {msg}")]
    Parse { src: String, pos: usize, msg: String },
    #[error("unknown name `{0}`")]
    Unknown(String),
    #[error("type error: {0}")]
    Type(String),
    #[error("{0} is not invertible")]
    NotInvertible(String),
    #[error("integer overflow")]
    Overflow,
}

type Res<T> = Result<T, ExprError>;

/// An exact rational with positive denominator in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ratio {
    pub num: i128,
    pub den: i128,
}

impl Ratio {
    pub fn int(n: i128) -> Self {
        Ratio { num: n, den: 1 }
    }

    fn new(num: i128, den: i128) -> Res<Self> {
        if den == 0 {
            return Err(ExprError::NotInvertible("0".into()));
        }
        let g = gcd(num.unsigned_abs() as u64, den.unsigned_abs() as u64).max(1) as i128;
        let s = if den < 0 { -1 } else { 1 };
        Ok(Ratio { num: s * num / g, den: s * den / g })
    }

    pub fn as_int(self) -> Option<i128> {
        (self.den == 1).then_some(self.num)
    }

    /// Image in `Z_m`, failing when the denominator is not a unit mod `m`.
    pub fn reduce(self, m: i64) -> Res<i64> {
        let m128 = m as i128;
        let d = self.den.rem_euclid(m128) as i64;
        if gcd(d as u64, m as u64) != 1 {
            return Err(ExprError::NotInvertible(format!("{} modulo {m}", self.den)));
        }
        let n = self.num.rem_euclid(m128) as i64;
        Ok(((n as i128 * modinv(d, m) as i128) % m128) as i64)
    }

    fn add(self, o: Ratio) -> Res<Ratio> {
        let a = self.num.checked_mul(o.den).ok_or(ExprError::Overflow)?;
        let b = o.num.checked_mul(self.den).ok_or(ExprError::Overflow)?;
        Ratio::new(a.checked_add(b).ok_or(ExprError::Overflow)?, self.den.checked_mul(o.den).ok_or(ExprError::Overflow)?)
    }

    fn mul(self, o: Ratio) -> Res<Ratio> {
        Ratio::new(
            self.num.checked_mul(o.num).ok_or(ExprError::Overflow)?,
            self.den.checked_mul(o.den).ok_or(ExprError::Overflow)?,
        )
    }

    fn recip(self) -> Res<Ratio> {
        Ratio::new(self.den, self.num)
    }

    fn neg(self) -> Ratio {
        Ratio { num: -self.num, den: self.den }
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 { write!(f, "{}", self.num) } else { write!(f, "{}/{}", self.num, self.den) }
    }
}

/// Values produced by evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Num(Ratio),
    Bool(bool),
    Mat(Mat2),
    /// Vector of `Z_p^2`, the exponents of `sigma` and `tau`.
    Vec([u64; 2]),
    /// Element of the group, by index.
    Elem(usize),
    /// Automorphism, by index in the structured automorphism group.
    Aut(usize),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Num(_) => "number",
            Value::Bool(_) => "boolean",
            Value::Mat(_) => "matrix",
            Value::Vec(_) => "vector",
            Value::Elem(_) => "group element",
            Value::Aut(_) => "automorphism",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Rem,
    Pow,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
}

/// Parsed expression.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(i128),
    Name(String),
    Call(String, Vec<Expr>),
    Neg(Box<Expr>),
    Not(Box<Expr>),
    Bin(Op, Box<Expr>, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(i128),
    Name(String),
    Sym(&'static str),
}

fn tokenize(src: &str) -> Res<Vec<(usize, Tok)>> {
    const SYMS: [&str; 18] =
        ["==", "!=", "<=", ">=", "&&", "||", "+", "-", "*", "/", "%", "^", "(", ")", ",", "<", ">", "!"];
    let b = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    'outer: while i < b.len() {
        let c = b[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            let v = src[start..i].parse::<i128>().map_err(|e| ExprError::Parse {
                src: src.into(),
                pos: start,
                msg: e.to_string(),
            })?;
            out.push((start, Tok::Int(v)));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Name(src[start..i].to_string())));
            continue;
        }
        for s in SYMS {
            if src[i..].starts_with(s) {
                out.push((i, Tok::Sym(s)));
                i += s.len();
                continue 'outer;
            }
        }
        return Err(ExprError::Parse { src: src.into(), pos: i, msg: format!("unexpected `{c}`") });
    }
    Ok(out)
}

struct Parser<'s> {
    src: &'s str,
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl Parser<'_> {
    fn peek_sym(&self) -> Option<&'static str> {
        match self.toks.get(self.at) {
            Some((_, Tok::Sym(s))) => Some(s),
            _ => None,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Res<T> {
        let pos = self.toks.get(self.at).map_or(self.src.len(), |t| t.0);
        Err(ExprError::Parse { src: self.src.into(), pos, msg: msg.into() })
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.peek_sym() == Some(s) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn binary(&mut self, ops: &[(&str, Op)], next: fn(&mut Self) -> Res<Expr>) -> Res<Expr> {
        let mut lhs = next(self)?;
        'outer: loop {
            for &(s, op) in ops {
                if self.eat(s) {
                    let rhs = next(self)?;
                    lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
                    continue 'outer;
                }
            }
            return Ok(lhs);
        }
    }

    fn or(&mut self) -> Res<Expr> {
        self.binary(&[("||", Op::Or)], Self::and)
    }

    fn and(&mut self) -> Res<Expr> {
        self.binary(&[("&&", Op::And)], Self::cmp)
    }

    fn cmp(&mut self) -> Res<Expr> {
        let lhs = self.sum()?;
        let ops = [("==", Op::Eq), ("!=", Op::Ne), ("<=", Op::Le), (">=", Op::Ge), ("<", Op::Lt), (">", Op::Gt)];
        for (s, op) in ops {
            if self.eat(s) {
                let rhs = self.sum()?;
                return Ok(Expr::Bin(op, Box::new(lhs), Box::new(rhs)));
            }
        }
        Ok(lhs)
    }

    fn sum(&mut self) -> Res<Expr> {
        self.binary(&[("+", Op::Add), ("-", Op::Sub)], Self::product)
    }

    fn product(&mut self) -> Res<Expr> {
        self.binary(&[("*", Op::Mul), ("/", Op::Div), ("%", Op::Rem)], Self::unary)
    }

    fn unary(&mut self) -> Res<Expr> {
        if self.eat("-") {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat("!") {
            return Ok(Expr::Not(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Res<Expr> {
        let base = self.atom()?;
        if self.eat("^") {
            let e = self.unary()?;
            return Ok(Expr::Bin(Op::Pow, Box::new(base), Box::new(e)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Res<Expr> {
        let Some((_, tok)) = self.toks.get(self.at).cloned() else {
            return self.err("unexpected end of input");
        };
        self.at += 1;
        match tok {
            Tok::Int(v) => Ok(Expr::Int(v)),
            Tok::Name(n) => {
                if self.eat("(") {
                    let mut args = vec![self.or()?];
                    while self.eat(",") {
                        args.push(self.or()?);
                    }
                    if !self.eat(")") {
                        return self.err("expected `)`");
                    }
                    Ok(Expr::Call(n, args))
                } else {
                    Ok(Expr::Name(n))
                }
            }
            Tok::Sym("(") => {
                let e = self.or()?;
                if !self.eat(")") {
                    return self.err("expected `)`");
                }
                Ok(e)
            }
            Tok::Sym(s) => {
                self.at -= 1;
                self.err(format!("unexpected `{s}`"))
            }
        }
    }
}

pub fn parse(src: &str) -> Res<Expr> {
    let mut p = Parser { src, toks: tokenize(src)?, at: 0 };
    let e = p.or()?;
    if p.at != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Variables plus, optionally, the group whose elements and automorphisms
/// the expression may mention.
pub struct Scope<'a> {
    pub vars: HashMap<String, Value>,
    pub group: Option<(&'a FamilyGroup, &'a StructuredAut)>,
}

impl<'a> Scope<'a> {
    pub fn new() -> Self {
        Scope { vars: HashMap::new(), group: None }
    }

    pub fn with_group(fam: &'a FamilyGroup, sa: &'a StructuredAut) -> Self {
        Scope { vars: HashMap::new(), group: Some((fam, sa)) }
    }

    pub fn set_int(&mut self, name: &str, v: i128) {
        self.vars.insert(name.to_string(), Value::Num(Ratio::int(v)));
    }

    fn int_var(&self, name: &str) -> Res<i64> {
        match self.vars.get(name) {
            Some(Value::Num(r)) => r.as_int().map(|v| v as i64).ok_or_else(|| ExprError::Type(format!("{name} is not an integer"))),
            _ => Err(ExprError::Unknown(name.into())),
        }
    }

    fn group(&self) -> Res<(&'a FamilyGroup, &'a StructuredAut)> {
        self.group.ok_or_else(|| ExprError::Type("no group in scope".into()))
    }

    fn p(&self) -> Res<u64> {
        Ok(self.int_var("p")? as u64)
    }

    fn companion(&self) -> Res<Mat2> {
        let xi = self.int_var("xi")?;
        Ok(Mat2::companion(self.p()?, xi as u64))
    }

    pub fn eval_str(&self, src: &str) -> Res<Value> {
        self.eval(&parse(src)?)
    }

    pub fn eval_bool(&self, src: &str) -> Res<bool> {
        match self.eval_str(src)? {
            Value::Bool(b) => Ok(b),
            v => Err(ExprError::Type(format!("`{src}` is a {}, expected a boolean", v.kind()))),
        }
    }

    pub fn eval_int(&self, src: &str) -> Res<i128> {
        match self.eval_str(src)? {
            Value::Num(r) => r.as_int().ok_or_else(|| ExprError::Type(format!("`{src}` = {r} is not an integer"))),
            v => Err(ExprError::Type(format!("`{src}` is a {}, expected an integer", v.kind()))),
        }
    }

    pub fn eval(&self, e: &Expr) -> Res<Value> {
        match e {
            Expr::Int(v) => Ok(Value::Num(Ratio::int(*v))),
            Expr::Name(n) => self.name(n),
            Expr::Call(f, args) => {
                let vals = args.iter().map(|a| self.eval(a)).collect::<Res<Vec<_>>>()?;
                self.call(f, vals)
            }
            Expr::Neg(x) => self.neg(self.eval(x)?),
            Expr::Not(x) => match self.eval(x)? {
                Value::Bool(b) => Ok(Value::Bool(!b)),
                v => Err(ExprError::Type(format!("cannot negate a {}", v.kind()))),
            },
            Expr::Bin(Op::And, a, b) => Ok(Value::Bool(self.truth(a)? && self.truth(b)?)),
            Expr::Bin(Op::Or, a, b) => Ok(Value::Bool(self.truth(a)? || self.truth(b)?)),
            Expr::Bin(op, a, b) => self.binop(*op, self.eval(a)?, self.eval(b)?),
        }
    }

    fn truth(&self, e: &Expr) -> Res<bool> {
        match self.eval(e)? {
            Value::Bool(b) => Ok(b),
            v => Err(ExprError::Type(format!("expected a boolean, got a {}", v.kind()))),
        }
    }

    fn name(&self, n: &str) -> Res<Value> {
        if let Some(v) = self.vars.get(n) {
            return Ok(v.clone());
        }
        match n {
            "F" => return Ok(Value::Mat(self.companion()?)),
            "I" => return Ok(Value::Mat(Mat2::identity(self.p()?))),
            _ => {}
        }
        if let Some((fam, _)) = self.group {
            if let Some(x) = fam.generator(n) {
                return Ok(Value::Elem(x));
            }
        }
        Err(ExprError::Unknown(n.into()))
    }

    fn neg(&self, v: Value) -> Res<Value> {
        match v {
            Value::Num(r) => Ok(Value::Num(r.neg())),
            Value::Mat(m) => Ok(Value::Mat(m.neg())),
            Value::Vec(x) => {
                let p = self.p()?;
                Ok(Value::Vec([(p - x[0]) % p, (p - x[1]) % p]))
            }
            v => Err(ExprError::Type(format!("cannot negate a {}", v.kind()))),
        }
    }

    fn to_mat(&self, v: &Value) -> Res<Option<Mat2>> {
        Ok(match v {
            Value::Mat(m) => Some(*m),
            Value::Num(r) => {
                let p = self.p()?;
                Some(Mat2::scalar(p, r.reduce(p as i64)?))
            }
            _ => None,
        })
    }

    fn binop(&self, op: Op, a: Value, b: Value) -> Res<Value> {
        use Value::*;
        let mismatch = |a: &Value, b: &Value| ExprError::Type(format!("no {op:?} for {} and {}", a.kind(), b.kind()));
        match (op, &a, &b) {
            (_, Num(x), Num(y)) => num_op(op, *x, *y),
            (Op::Eq, Bool(x), Bool(y)) => Ok(Bool(x == y)),
            (Op::Ne, Bool(x), Bool(y)) => Ok(Bool(x != y)),
            (Op::Add | Op::Sub, Vec(x), Vec(y)) => {
                let p = self.p()?;
                let s = if op == Op::Add { y.to_owned() } else { [(p - y[0]) % p, (p - y[1]) % p] };
                Ok(Vec([(x[0] + s[0]) % p, (x[1] + s[1]) % p]))
            }
            (Op::Mul, Num(r), Vec(x)) | (Op::Mul, Vec(x), Num(r)) => {
                let p = self.p()?;
                let c = r.reduce(p as i64)? as u64;
                Ok(Vec([c * x[0] % p, c * x[1] % p]))
            }
            (Op::Mul, Mat(m), Vec(x)) => Ok(Vec(m.apply(*x))),
            (Op::Pow, Mat(m), Num(r)) => {
                let e = r.as_int().ok_or_else(|| ExprError::Type("matrix power must be an integer".into()))?;
                Ok(Mat(m.pow(e as i64)))
            }
            (Op::Add | Op::Sub | Op::Mul, Mat(_), _) | (Op::Add | Op::Sub | Op::Mul, _, Mat(_)) => {
                let (x, y) = match (self.to_mat(&a)?, self.to_mat(&b)?) {
                    (Some(x), Some(y)) => (x, y),
                    _ => return Err(mismatch(&a, &b)),
                };
                Ok(Mat(match op {
                    Op::Add => x.add(&y),
                    Op::Sub => x.add(&y.neg()),
                    _ => x.mul(&y),
                }))
            }
            (Op::Mul, Elem(x), Elem(y)) => Ok(Elem(self.group()?.0.group.mul(*x, *y))),
            (Op::Pow, Elem(x), Num(r)) => {
                let g = &self.group()?.0.group;
                let k = r.reduce(g.element_order(*x) as i64)?;
                Ok(Elem(g.pow(*x, k)))
            }
            (Op::Mul, Aut(f), Aut(g)) => Ok(Aut(self.group()?.1.aut.compose(*f, *g))),
            (Op::Pow, Aut(f), Num(r)) => {
                let aut = &self.group()?.1.aut;
                let k = r.reduce(aut.element_order(*f) as i64)?;
                let mut x = 0;
                for _ in 0..k {
                    x = aut.compose(x, *f);
                }
                Ok(Aut(x))
            }
            _ => Err(mismatch(&a, &b)),
        }
    }

    fn call(&self, f: &str, args: Vec<Value>) -> Res<Value> {
        let arity = |k: usize| {
            if args.len() == k { Ok(()) } else { Err(ExprError::Type(format!("{f} takes {k} argument(s), got {}", args.len()))) }
        };
        let num = |v: &Value| match v {
            Value::Num(r) => Ok(*r),
            v => Err(ExprError::Type(format!("{f} expects a number, got a {}", v.kind()))),
        };
        match f {
            "inv" => {
                arity(1)?;
                match &args[0] {
                    Value::Num(r) => Ok(Value::Num(r.recip()?)),
                    Value::Mat(m) => m.inverse().map(Value::Mat).ok_or_else(|| ExprError::NotInvertible(format!("{m:?}"))),
                    Value::Elem(x) => Ok(Value::Elem(self.group()?.0.group.inv(*x))),
                    Value::Aut(x) => Ok(Value::Aut(self.group()?.1.aut.inv(*x))),
                    v => Err(ExprError::Type(format!("cannot invert a {}", v.kind()))),
                }
            }
            "H" => {
                // H(M) = M^2 + xi M + I
                arity(1)?;
                let m = self.to_mat(&args[0])?.ok_or_else(|| ExprError::Type("H expects a matrix".into()))?;
                let p = self.p()?;
                let xi = Mat2::scalar(p, self.int_var("xi")?);
                Ok(Value::Mat(m.mul(&m).add(&xi.mul(&m)).add(&Mat2::identity(p))))
            }
            "v" => {
                arity(2)?;
                let p = self.p()? as i64;
                Ok(Value::Vec([num(&args[0])?.reduce(p)? as u64, num(&args[1])?.reduce(p)? as u64]))
            }
            "psi_rep" => {
                arity(1)?;
                let p = self.p()? as i64;
                let a = num(&args[0])?.reduce(p)?;
                let xi = self.int_var("xi")?;
                psi_level_rep(p, xi, a).map(|(x, y)| Value::Vec([x as u64, y as u64])).ok_or_else(|| {
                    ExprError::Type(format!("no vector with psi = {a}"))
                })
            }
            "elem" => {
                arity(1)?;
                let Value::Vec(x) = args[0] else {
                    return Err(ExprError::Type("elem expects a vector".into()));
                };
                let fam = self.group()?.0;
                let g = &fam.group;
                let (s, t) = match (fam.generator("sigma"), fam.generator("tau")) {
                    (Some(s), Some(t)) => (s, t),
                    _ => return Err(ExprError::Type(format!("{} has no sigma, tau", fam.name()))),
                };
                Ok(Value::Elem(g.mul(g.pow(s, x[0] as i64), g.pow(t, x[1] as i64))))
            }
            "aut" => {
                let (fam, sa) = self.group()?;
                let moduli = coord_moduli(fam);
                arity(moduli.len())?;
                let c = args.iter().zip(&moduli).map(|(a, &m)| num(a)?.reduce(m)).collect::<Res<Vec<i64>>>()?;
                sa.index_of(fam, &c)
                    .map(Value::Aut)
                    .ok_or_else(|| ExprError::Type(format!("coordinates {c:?} give no automorphism of {}", fam.name())))
            }
            _ => Err(ExprError::Unknown(f.into())),
        }
    }
}

impl Default for Scope<'_> {
    fn default() -> Self {
        Self::new()
    }
}

fn num_op(op: Op, x: Ratio, y: Ratio) -> Res<Value> {
    let cmp = |f: fn(i128, i128) -> bool| -> Res<Value> {
        let l = x.num.checked_mul(y.den).ok_or(ExprError::Overflow)?;
        let r = y.num.checked_mul(x.den).ok_or(ExprError::Overflow)?;
        Ok(Value::Bool(f(l, r)))
    };
    Ok(Value::Num(match op {
        Op::Add => x.add(y)?,
        Op::Sub => x.add(y.neg())?,
        Op::Mul => x.mul(y)?,
        Op::Div => x.mul(y.recip()?)?,
        Op::Rem => match (x.as_int(), y.as_int()) {
            (Some(a), Some(m)) if m != 0 => Ratio::int(a.rem_euclid(m)),
            _ => return Err(ExprError::Type(format!("{x} % {y} needs nonzero integers"))),
        },
        Op::Pow => {
            let e = y.as_int().ok_or_else(|| ExprError::Type(format!("exponent {y} is not an integer")))?;
            let mut r = Ratio::int(1);
            for _ in 0..e.unsigned_abs() {
                r = r.mul(x)?;
            }
            if e < 0 { r.recip()? } else { r }
        }
        Op::Eq => return cmp(|a, b| a == b),
        Op::Ne => return cmp(|a, b| a != b),
        Op::Lt => return cmp(|a, b| a < b),
        Op::Le => return cmp(|a, b| a <= b),
        Op::Gt => return cmp(|a, b| a > b),
        Op::Ge => return cmp(|a, b| a >= b),
        Op::And | Op::Or => return Err(ExprError::Type("logical operator on numbers".into())),
    }))
}

/// `Ψ(x, y) = x^2 + y^2 - x + y - ξxy` over `Z_p`.
pub fn psi(p: i64, xi: i64, x: i64, y: i64) -> i64 {
    (x * x + y * y - x + y - xi * x * y).rem_euclid(p)
}

/// First `(x, y)` in row-major order with `Ψ(x, y) = a`.
pub fn psi_level_rep(p: i64, xi: i64, a: i64) -> Option<(i64, i64)> {
    (0..p).flat_map(|x| (0..p).map(move |y| (x, y))).find(|&(x, y)| psi(p, xi, x, y) == a.rem_euclid(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scope(pairs: &[(&str, i128)]) -> Scope<'static> {
        let mut s = Scope::new();
        for &(n, v) in pairs {
            s.set_int(n, v);
        }
        s
    }

    #[test]
    fn arithmetic_and_precedence() {
        let s = scope(&[("p", 7), ("q", 3)]);
        assert_eq!(s.eval_int("2 + 3 * 4 ^ 2").unwrap(), 50);
        assert_eq!(s.eval_int("-2^2").unwrap(), -4);
        assert_eq!(s.eval_int("(p - 1) % q").unwrap(), 0);
        assert_eq!(s.eval_str("1/(p-1)").unwrap(), Value::Num(Ratio { num: 1, den: 6 }));
        assert!(s.eval_bool("p > 2 && q % 2 == 1").unwrap());
        assert!(s.eval_bool("!(p == 7) || q == 3").unwrap());
        assert_eq!(s.eval_int("2^-1 * 4").unwrap(), 2);
    }

    #[test]
    fn reduction_modulo() {
        assert_eq!(Ratio { num: 1, den: 3 }.reduce(7).unwrap(), 5);
        assert_eq!(Ratio { num: -1, den: 2 }.reduce(5).unwrap(), 2);
        assert!(Ratio { num: 1, den: 3 }.reduce(9).is_err());
    }

    #[test]
    fn matrices_and_vectors() {
        let s = scope(&[("p", 5), ("xi", 1)]);
        // F has order 3 for xi = 1, p = 5
        assert_eq!(s.eval_str("F^3").unwrap(), s.eval_str("I").unwrap());
        assert_eq!(s.eval_str("H(F)").unwrap(), Value::Mat(Mat2::scalar(5, 0)));
        assert_eq!(s.eval_str("F * v(1, 0)").unwrap(), Value::Vec([0, 1]));
        assert_eq!(s.eval_str("inv(F - 1) * (F - I) * v(2, 3)").unwrap(), Value::Vec([2, 3]));
        assert_eq!(s.eval_str("v(1,2) - 3 * v(1,1)").unwrap(), Value::Vec([3, 4]));
        assert!(matches!(s.eval_str("inv(F - F)"), Err(ExprError::NotInvertible(_))));
    }

    #[test]
    fn psi_representatives_hit_their_level() {
        for a in 0..5 {
            let (x, y) = psi_level_rep(5, 1, a).unwrap();
            assert_eq!(psi(5, 1, x, y), a);
        }
    }

    #[test]
    fn parse_errors_point_at_the_problem() {
        assert!(matches!(parse("1 + * 2"), Err(ExprError::Parse { pos: 4, .. })));
        assert!(matches!(parse("f(1, 2"), Err(ExprError::Parse { .. })));
        assert!(matches!(parse("3 3"), Err(ExprError::Parse { .. })));
        assert_eq!(scope(&[]).eval_str("nope"), Err(ExprError::Unknown("nope".into())));
    }
}
