//! Exact arithmetic in an imaginary quadratic field `Q(sqrt(d))`.
//!
//! Elements are `p + q*sqrt(d)` with `p, q` reduced rationals. Every value
//! carries its `d`; mixing two fields in one operation is a programming error
//! and panics.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// `d = -3`, the field containing the cube roots of unity.
pub const DEFAULT_D: i64 = -3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("d = {0} must be a negative squarefree integer")]
    InvalidDiscriminant(i64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not a square in the field")]
    NotASquare(String),
    #[error("cannot parse {0:?} as a field element")]
    Parse(String),
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn integer(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn is_squarefree(d: i64) -> bool {
    let m = d.unsigned_abs();
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p * p) {
            return false;
        }
        p += 1;
    }
    true
}

/// Validates a field parameter: negative and squarefree.
pub fn check_d(d: i64) -> Result<i64, FieldError> {
    if d < 0 && is_squarefree(d) {
        Ok(d)
    } else {
        Err(FieldError::InvalidDiscriminant(d))
    }
}

/// Exact square root of a nonnegative rational, if it exists.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer(), r.denom());
    let sn = n.sqrt();
    let sd = d.sqrt();
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        Some(BigRational::new(sn, sd))
    } else {
        None
    }
}

/// Exact real cube root of a rational, if it exists.
pub fn rational_cbrt(r: &BigRational) -> Option<BigRational> {
    let (n, d) = (r.numer(), r.denom());
    let cn = n.cbrt();
    let cd = d.cbrt();
    if &(&cn * &cn * &cn) == n && &(&cd * &cd * &cd) == d {
        Some(BigRational::new(cn, cd))
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadNum {
    p: BigRational,
    q: BigRational,
    d: i64,
}

impl QuadNum {
    /// `p + q*sqrt(d)`. The caller vouches for `d`; use [`check_d`] on input.
    pub fn new(p: BigRational, q: BigRational, d: i64) -> Self {
        Self { p, q, d }
    }

    pub fn from_rational(p: BigRational, d: i64) -> Self {
        Self::new(p, BigRational::zero(), d)
    }

    pub fn from_int(n: i64, d: i64) -> Self {
        Self::from_rational(integer(n), d)
    }

    pub fn zero(d: i64) -> Self {
        Self::from_int(0, d)
    }

    pub fn one(d: i64) -> Self {
        Self::from_int(1, d)
    }

    /// `sqrt(d)` itself.
    pub fn root(d: i64) -> Self {
        Self::new(BigRational::zero(), BigRational::one(), d)
    }

    /// `zeta_3 = (-1 + sqrt(-3)) / 2`.
    pub fn zeta3() -> Self {
        Self::new(rational(-1, 2), rational(1, 2), -3)
    }

    pub fn p(&self) -> &BigRational {
        &self.p
    }

    pub fn q(&self) -> &BigRational {
        &self.q
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.p.is_one() && self.q.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.p)
    }

    fn same_field(&self, other: &Self) {
        assert_eq!(self.d, other.d, "mixing elements of Q(sqrt({})) and Q(sqrt({}))", self.d, other.d);
    }

    fn dr(&self) -> BigRational {
        integer(self.d)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.p.clone(), -self.q.clone(), self.d)
    }

    /// `p^2 - d q^2`.
    pub fn norm(&self) -> BigRational {
        &self.p * &self.p - self.dr() * &self.q * &self.q
    }

    /// `2p`.
    pub fn trace(&self) -> BigRational {
        &self.p + &self.p
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self::new(&self.p * r, &self.q * r, self.d)
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let n = self.norm();
        Ok(Self::new(&self.p / &n, -&self.q / &n, self.d))
    }

    pub fn div(&self, other: &Self) -> Result<Self, FieldError> {
        Ok(self * &other.inv()?)
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.d);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn powi(&self, k: i32) -> Result<Self, FieldError> {
        if k < 0 {
            Ok(self.inv()?.pow(k.unsigned_abs()))
        } else {
            Ok(self.pow(k as u32))
        }
    }

    /// One square root, normalised to `p > 0`, or `q > 0` when `p = 0`.
    pub fn sqrt(&self) -> Result<Self, FieldError> {
        self.try_sqrt()
            .ok_or_else(|| FieldError::NotASquare(self.to_string()))
    }

    pub fn try_sqrt(&self) -> Option<Self> {
        let d = self.dr();
        let root = if self.q.is_zero() {
            // (p')^2 = p with q' = 0, or (q')^2 d = p with p' = 0
            if let Some(r) = rational_sqrt(&self.p) {
                Self::from_rational(r, self.d)
            } else {
                let r = rational_sqrt(&(&self.p / &d))?;
                Self::new(BigRational::zero(), r, self.d)
            }
        } else {
            // p'^2 + d q'^2 = p, 2 p' q' = q  =>  p'^2 = (p +- sqrt(N)) / 2
            let n = rational_sqrt(&self.norm())?;
            let two = integer(2);
            let p_sq = [(&self.p + &n) / &two, (&self.p - &n) / &two]
                .into_iter()
                .find_map(|c| rational_sqrt(&c).filter(|r| !r.is_zero()))?;
            let q = &self.q / (&two * &p_sq);
            Self::new(p_sq, q, self.d)
        };
        debug_assert_eq!(&root.square(), self);
        Some(root.normalized_sign())
    }

    fn normalized_sign(self) -> Self {
        if self.p.is_negative() || (self.p.is_zero() && self.q.is_negative()) {
            -self
        } else {
            self
        }
    }

    /// Whether `self` is the preferred member of `{self, -self}` under the
    /// square-root sign convention.
    pub fn is_sign_normalized(&self) -> bool {
        self.p.is_positive() || (self.p.is_zero() && !self.q.is_negative())
    }

    /// All `r` in the field with `r^3 = self`.
    pub fn cube_roots(&self) -> Vec<Self> {
        if self.is_zero() {
            return vec![self.clone()];
        }
        // N(r) is the rational cube root of N(self); s = Tr(r) solves
        // s^3 - 3 N(r) s - Tr(self) = 0.
        let Some(nr) = rational_cbrt(&self.norm()) else {
            return Vec::new();
        };
        let cubic = crate::poly::QPoly::new(vec![
            -self.trace(),
            -(integer(3) * &nr),
            BigRational::zero(),
            BigRational::one(),
        ]);
        let d = self.dr();
        let mut out = Vec::new();
        for s in cubic.rational_roots() {
            let p = s / integer(2);
            let Some(q) = rational_sqrt(&((&p * &p - &nr) / &d)) else {
                continue;
            };
            for cand in [Self::new(p.clone(), q.clone(), self.d), Self::new(p.clone(), -q.clone(), self.d)] {
                if &cand.pow(3) == self && !out.contains(&cand) {
                    out.push(cand);
                }
            }
        }
        out.sort_by(cmp_key);
        out
    }

    /// All square roots (zero, one pair, or none).
    pub fn square_roots(&self) -> Vec<Self> {
        match self.try_sqrt() {
            None => Vec::new(),
            Some(r) if r.is_zero() => vec![r],
            Some(r) => {
                let m = -r.clone();
                vec![r, m]
            }
        }
    }
}

/// Lexicographic order on `(p, q)`, used only to make output deterministic.
pub fn cmp_key(a: &QuadNum, b: &QuadNum) -> std::cmp::Ordering {
    (&a.p, &a.q).cmp(&(&b.p, &b.q))
}

impl Add for &QuadNum {
    type Output = QuadNum;
    fn add(self, rhs: &QuadNum) -> QuadNum {
        self.same_field(rhs);
        QuadNum::new(&self.p + &rhs.p, &self.q + &rhs.q, self.d)
    }
}

impl Sub for &QuadNum {
    type Output = QuadNum;
    fn sub(self, rhs: &QuadNum) -> QuadNum {
        self.same_field(rhs);
        QuadNum::new(&self.p - &rhs.p, &self.q - &rhs.q, self.d)
    }
}

impl Mul for &QuadNum {
    type Output = QuadNum;
    fn mul(self, rhs: &QuadNum) -> QuadNum {
        self.same_field(rhs);
        let d = self.dr();
        QuadNum::new(
            &self.p * &rhs.p + d * &self.q * &rhs.q,
            &self.p * &rhs.q + &self.q * &rhs.p,
            self.d,
        )
    }
}

impl Neg for &QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        QuadNum::new(-self.p.clone(), -self.q.clone(), self.d)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QuadNum {
            type Output = QuadNum;
            fn $m(self, rhs: QuadNum) -> QuadNum {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&QuadNum> for QuadNum {
            type Output = QuadNum;
            fn $m(self, rhs: &QuadNum) -> QuadNum {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        -&self
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Factored display in the style `2160(1-√-3)`, `-6(1+√-3)`, `12√-3`.
impl fmt::Display for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let root = format!("√{}", self.d);
        if self.q.is_zero() {
            return write!(f, "{}", fmt_rational(&self.p));
        }
        if self.p.is_zero() {
            return match fmt_rational(&self.q).as_str() {
                "1" => write!(f, "{root}"),
                "-1" => write!(f, "-{root}"),
                c => write!(f, "{c}{root}"),
            };
        }
        // common factor c with sign of p, so the bracket starts with a positive term
        let g_num = self.p.numer().gcd(self.q.numer());
        let g_den = self.p.denom().lcm(self.q.denom());
        let mut c = BigRational::new(g_num, g_den);
        if self.p.is_negative() {
            c = -c;
        }
        let a = &self.p / &c;
        let b = &self.q / &c;
        let sign = if b.is_negative() { '-' } else { '+' };
        let b_abs = b.abs();
        let b_str = if b_abs.is_one() { String::new() } else { fmt_rational(&b_abs) };
        let inner = format!("{}{sign}{b_str}{root}", fmt_rational(&a));
        match fmt_rational(&c).as_str() {
            "1" => write!(f, "{inner}"),
            c => write!(f, "{c}({inner})"),
        }
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

impl QuadNum {
    /// Parses `P`, `P+Q*s`, `P-Q*s`, `Q*s`, `s`, `-s` where `s` stands for
    /// `sqrt(d)` and `P`, `Q` are integers or fractions `a/b`. The root may
    /// also be written `√d` or `sqrt(d)`, and the factored display form
    /// `C(P+Q√d)` is accepted, so every printed value parses back.
    pub fn parse(text: &str, d: i64) -> Result<Self, FieldError> {
        let err = || FieldError::Parse(text.to_string());
        let mut t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        for root in [format!("√{d}"), format!("sqrt({d})"), "√d".to_string()] {
            t = t.replace(&root, "s");
        }
        if t.is_empty() {
            return Err(err());
        }
        if let Some(inner) = t.strip_suffix(')') {
            let (c, inner) = inner.split_once('(').ok_or_else(err)?;
            let c = match c {
                "" | "+" => integer(1),
                "-" => integer(-1),
                c => parse_rational(c).ok_or_else(err)?,
            };
            return Ok(Self::parse(inner, d).map_err(|_| err())?.scale(&c));
        }
        if !t.ends_with('s') {
            return parse_rational(&t)
                .map(|p| Self::from_rational(p, d))
                .ok_or_else(err);
        }
        let body = &t[..t.len() - 1];
        let body = body.strip_suffix('*').unwrap_or(body);
        // split at the last sign that is not the leading one
        let split = body
            .char_indices()
            .filter(|&(i, c)| i > 0 && (c == '+' || c == '-'))
            .map(|(i, _)| i)
            .next_back();
        let (p_str, q_str) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("0", body),
        };
        let q = match q_str {
            "" | "+" => integer(1),
            "-" => integer(-1),
            s => parse_rational(s.strip_prefix('+').unwrap_or(s)).ok_or_else(err)?,
        };
        let p = parse_rational(p_str).ok_or_else(err)?;
        Ok(Self::new(p, q, d))
    }
}

/// Parses with the default field `d = -3`.
impl FromStr for QuadNum {
    type Err = FieldError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s, DEFAULT_D)
    }
}

// JSON wire format: {p_num, p_den, q_num, q_den, d}. Integers that fit in
// i64 are plain JSON numbers, larger ones are decimal strings.

pub(crate) mod bigint_json {
    use super::*;
    use num_traits::ToPrimitive;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        match v.to_i64() {
            Some(i) => s.serialize_i64(i),
            None => s.serialize_str(&v.to_string()),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Int(i64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BigInt, D::Error> {
        match Repr::deserialize(de)? {
            Repr::Int(i) => Ok(BigInt::from(i)),
            Repr::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// A rational on the wire: `{num, den}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalRepr {
    #[serde(with = "bigint_json")]
    pub num: BigInt,
    #[serde(with = "bigint_json")]
    pub den: BigInt,
}

impl From<&BigRational> for RationalRepr {
    fn from(r: &BigRational) -> Self {
        Self {
            num: r.numer().clone(),
            den: r.denom().clone(),
        }
    }
}

impl TryFrom<RationalRepr> for BigRational {
    type Error = FieldError;
    fn try_from(r: RationalRepr) -> Result<Self, FieldError> {
        if r.den.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(BigRational::new(r.num, r.den))
    }
}

#[derive(Serialize, Deserialize)]
struct QuadRepr {
    #[serde(with = "bigint_json")]
    p_num: BigInt,
    #[serde(with = "bigint_json")]
    p_den: BigInt,
    #[serde(with = "bigint_json")]
    q_num: BigInt,
    #[serde(with = "bigint_json")]
    q_den: BigInt,
    d: i64,
}

impl Serialize for QuadNum {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        QuadRepr {
            p_num: self.p.numer().clone(),
            p_den: self.p.denom().clone(),
            q_num: self.q.numer().clone(),
            q_den: self.q.denom().clone(),
            d: self.d,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadNum {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let r = QuadRepr::deserialize(de)?;
        if r.p_den.is_zero() || r.q_den.is_zero() {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        check_d(r.d).map_err(serde::de::Error::custom)?;
        Ok(QuadNum::new(
            BigRational::new(r.p_num, r.p_den),
            BigRational::new(r.q_num, r.q_den),
            r.d,
        ))
    }
}
