//! Riemann–Hurwitz bookkeeping for the tower C_n -> F_n -> P^1.
//!
//! Everything is exact. A genus is only ever produced after checking that
//! `2g - 2` came out as an even integer; signature claims are audited as
//! verdict values instead of errors, so known inconsistencies can be pinned.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quadratic::{rational, RationalRepr};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoversError {
    #[error("Riemann-Hurwitz gives genus {0}, which is not a nonnegative integer")]
    NonIntegerGenus(String),
    #[error("ramification index {0} must be at least 2")]
    InvalidIndex(u64),
    #[error("ramification index {index} does not divide the group order {order}")]
    IndexDoesNotDivide { index: u64, order: u64 },
    #[error("group order must be positive")]
    ZeroOrder,
    #[error("n = {n} is out of range: {reason}")]
    InvalidN { n: u64, reason: &'static str },
    #[error("n = {n} exceeds the enumeration bound {bound}")]
    BoundExceeded { n: u64, bound: u64 },
    #[error("invalid period {0:?}")]
    InvalidPeriod(String),
}

fn require(n: u64, ok: bool, reason: &'static str) -> Result<(), CoversError> {
    if ok {
        Ok(())
    } else {
        Err(CoversError::InvalidN { n, reason })
    }
}

/// A Galois cover `X -> Y` with group `G`, given by the genus of `Y` and the
/// ramification index over each branch point of `Y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamificationData {
    base_genus: u64,
    group_order: u64,
    indices: Vec<u64>,
}

impl RamificationData {
    pub fn new(base_genus: u64, group_order: u64, indices: Vec<u64>) -> Result<Self, CoversError> {
        if group_order == 0 {
            return Err(CoversError::ZeroOrder);
        }
        for &e in &indices {
            if e < 2 {
                return Err(CoversError::InvalidIndex(e));
            }
            if !group_order.is_multiple_of(e) {
                return Err(CoversError::IndexDoesNotDivide { index: e, order: group_order });
            }
        }
        Ok(RamificationData { base_genus, group_order, indices })
    }

    pub fn base_genus(&self) -> u64 {
        self.base_genus
    }

    pub fn group_order(&self) -> u64 {
        self.group_order
    }

    pub fn indices(&self) -> &[u64] {
        &self.indices
    }
}

/// `2g - 2 = |G| (2 g_base - 2 + sum (1 - 1/e))`, solved for `g` without
/// any integrality check.
fn rh_rational(base_genus: u64, order: u64, indices: &[u64]) -> BigRational {
    let order = BigRational::from_integer(BigInt::from(order));
    let mut inner = BigRational::from_integer(BigInt::from(2 * base_genus as i128 - 2));
    for &e in indices {
        inner += BigRational::one() - rational(1, e as i64);
    }
    (order * inner + rational(2, 1)) / rational(2, 1)
}

fn integral_genus(g: &BigRational) -> Option<u64> {
    if g.is_integer() && !g.is_negative() {
        g.to_integer().to_u64()
    } else {
        None
    }
}

pub fn rh_genus(data: &RamificationData) -> Result<u64, CoversError> {
    let g = rh_rational(data.base_genus, data.group_order, &data.indices);
    integral_genus(&g).ok_or_else(|| CoversError::NonIntegerGenus(g.to_string()))
}

/// `(n-1)(n-2)/2`.
pub fn fermat_genus(n: u64) -> Result<u64, CoversError> {
    require(n, n >= 1, "need n >= 1")?;
    let n = n as i128;
    Ok(((n - 1) * (n - 2) / 2) as u64)
}

/// `n^2(n-3)/2 + 1` for odd `n`, plus `n^2/4` for even `n`.
pub fn heisenberg_genus(n: u64) -> Result<u64, CoversError> {
    require(n, n >= 2, "need n >= 2")?;
    let n = n as i128;
    let mut g = n * n * (n - 3) / 2 + 1;
    if n % 2 == 0 {
        g += n * n / 4;
    }
    Ok(g as u64)
}

/// Cusp families of F_n above `x = 1`, `x = 0` and `x = oo`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    /// `P_k = (zeta^k : 0 : 1)`
    P,
    /// `Q_k = (0 : zeta^k : 1)`
    Q,
    /// `Q'_k = (eps zeta^k : 1 : 0)`, `eps^n = -1`
    QPrime,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::P => "P",
            Family::Q => "Q",
            Family::QPrime => "Q'",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PointClass {
    pub family: Family,
    pub k: u64,
}

impl PointClass {
    pub fn new(family: Family, k: u64, n: u64) -> Result<Self, CoversError> {
        require(n, n >= 1, "need n >= 1")?;
        require(n, k < n, "index k must be below n")?;
        Ok(PointClass { family, k })
    }

    /// Exponents of `omega = exp(pi i / n)` on each coordinate, `None` for a
    /// zero coordinate. `zeta = omega^2`, `eps = omega`.
    fn exponents(&self, n: u64) -> [Option<u64>; 3] {
        let m = 2 * n;
        let k2 = (2 * self.k) % m;
        match self.family {
            Family::P => [Some(k2), None, Some(0)],
            Family::Q => [None, Some(k2), Some(0)],
            Family::QPrime => [Some((1 + k2) % m), Some(0), None],
        }
    }
}

/// Exponent vector up to projective rescaling: shift so the last nonzero
/// coordinate has exponent 0.
fn normalize(e: [Option<u64>; 3], m: u64) -> [Option<u64>; 3] {
    let shift = e.iter().rev().flatten().next().copied().unwrap_or(0);
    e.map(|c| c.map(|v| (v + m - shift) % m))
}

fn act(a: u64, b: u64, e: [Option<u64>; 3], n: u64) -> [Option<u64>; 3] {
    let m = 2 * n;
    let shifted = [
        e[0].map(|v| (v + 2 * a) % m),
        e[1].map(|v| (v + 2 * b) % m),
        e[2],
    ];
    normalize(shifted, m)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizerReport {
    pub point: PointClass,
    /// `(a, b)` with `sigma_{a,b}` generating the stabilizer.
    pub generator: (u64, u64),
    pub stabilizer_order: u64,
    pub orbit_size: u64,
}

fn additive_order(a: u64, b: u64, n: u64) -> u64 {
    let g = a.gcd(&b).gcd(&n);
    n / g
}

/// Stabilizer of a cusp under `sigma_{a,b}(X:Y:Z) = (zeta^a X : zeta^b Y : Z)`.
pub fn stabilizer(p: PointClass, n: u64) -> Result<StabilizerReport, CoversError> {
    require(n, n >= 1, "need n >= 1")?;
    require(n, p.k < n, "index k must be below n")?;
    let m = 2 * n;
    let base = normalize(p.exponents(n), m);
    let mut fixed = Vec::new();
    let mut orbit = std::collections::BTreeSet::new();
    for a in 0..n {
        for b in 0..n {
            let image = act(a, b, base, n);
            if image == base {
                fixed.push((a, b));
            }
            orbit.insert(image);
        }
    }
    let order = fixed.len() as u64;
    // fixed is in lexicographic order, so this picks the smallest generator
    let generator = *fixed
        .iter()
        .find(|&&(a, b)| additive_order(a, b, n) == order)
        .expect("stabilizers of these cusps are cyclic");
    Ok(StabilizerReport {
        point: p,
        generator,
        stabilizer_order: order,
        orbit_size: orbit.len() as u64,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverRamification {
    pub n: u64,
    pub unramified: bool,
    /// Family of F_n whose points ramify in C_n -> F_n.
    pub ramified_family: Option<Family>,
    pub index: u64,
    /// Number of ramified points of F_n.
    pub branch_points: u64,
    /// Points of C_n above each ramified point of F_n.
    pub points_above_each: u64,
    /// Points of C_n with nontrivial ramification.
    pub ramified_points: u64,
    /// Branched cusps of F_n written as `(zeta^k : 1 : 0)`, the labelling
    /// used for the cusps above infinity; the twist by `eps` is dropped.
    pub cusp_labels: Vec<String>,
}

/// Ramification of `C_n -> F_n`: none for odd `n`; for even `n` the `n`
/// cusps above infinity each carry `n/2` points of index 2.
pub fn cn_cover_ramification(n: u64) -> Result<CoverRamification, CoversError> {
    require(n, n >= 2, "need n >= 2")?;
    if n % 2 == 1 {
        return Ok(CoverRamification {
            n,
            unramified: true,
            ramified_family: None,
            index: 1,
            branch_points: 0,
            points_above_each: 0,
            ramified_points: 0,
            cusp_labels: Vec::new(),
        });
    }
    let cusp_labels = (0..n)
        .map(|k| match (n, k) {
            (2, 0) => "(1:1:0)".to_string(),
            (2, _) => "(-1:1:0)".to_string(),
            (_, 0) => "(1:1:0)".to_string(),
            (_, 1) => "(ζ:1:0)".to_string(),
            _ => format!("(ζ^{k}:1:0)"),
        })
        .collect();
    Ok(CoverRamification {
        n,
        unramified: false,
        ramified_family: Some(Family::QPrime),
        index: 2,
        branch_points: n,
        points_above_each: n / 2,
        ramified_points: n * n / 2,
        cusp_labels,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModularAutOrder {
    pub n: u64,
    /// `|G_n|`: `6n^2` for odd `n`, `2n^2` for even `n`.
    pub quotient_order: u64,
    pub order: u64,
}

impl ModularAutOrder {
    pub fn structure(&self) -> String {
        let n = self.n;
        let q = if n % 2 == 1 { "S3" } else { "Z/2" };
        format!("1 -> Z/{n} -> Aut^m(C_{n}) -> (Z/{n} x Z/{n}) x| {q} -> 1")
    }
}

/// Order of the modular automorphism group of C_n, an extension of `G_n`
/// by the centre `Z/n`.
pub fn modular_aut_order(n: u64) -> Result<ModularAutOrder, CoversError> {
    require(n, n >= 3, "need n >= 3")?;
    let quotient_order = if n % 2 == 1 { 6 * n * n } else { 2 * n * n };
    Ok(ModularAutOrder { n, quotient_order, order: n * quotient_order })
}

/// Which closed form a signature claim is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Fermat,
    Heisenberg,
}

impl Target {
    pub fn genus(self, n: u64) -> Result<u64, CoversError> {
        match self {
            Target::Fermat => fermat_genus(n),
            Target::Heisenberg => heisenberg_genus(n),
        }
    }
}

impl FromStr for Target {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "fermat" | "F" => Ok(Target::Fermat),
            "heisenberg" | "C" => Ok(Target::Heisenberg),
            _ => Err(format!("unknown target {s:?}, expected fermat or heisenberg")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub claim: String,
    pub n: u64,
    pub target: Target,
    pub signature: Vec<u64>,
    pub order: u64,
    pub expected_genus: u64,
    /// Genus forced by Riemann–Hurwitz over P^1, possibly fractional or
    /// negative.
    pub computed_genus: RationalRepr,
    pub consistent: bool,
}

/// Compares the genus that signature `(0; e_1, ..., e_r)` and group order
/// force on the cover with the closed form for `target`. Indices that do not
/// divide the order make the claim inconsistent; nothing here is an error.
pub fn consistency_check(
    claim: &str,
    n: u64,
    signature: &[u64],
    order: u64,
    target: Target,
) -> Result<Verdict, CoversError> {
    let expected = target.genus(n)?;
    let g = rh_rational(0, order, signature);
    let divides = order > 0 && signature.iter().all(|&e| e >= 2 && order.is_multiple_of(e));
    let consistent = divides && integral_genus(&g) == Some(expected);
    Ok(Verdict {
        claim: claim.to_string(),
        n,
        target,
        signature: signature.to_vec(),
        order,
        expected_genus: expected,
        computed_genus: RationalRepr::from(&g),
        consistent,
    })
}

/// A signature statement about some curve in the tower, as a function of n.
#[derive(Debug, Clone, Copy)]
pub struct Claim {
    pub name: &'static str,
    pub description: &'static str,
    pub target: Target,
    pub applies: fn(u64) -> bool,
    pub signature: fn(u64) -> Vec<u64>,
    pub order: fn(u64) -> u64,
}

/// Every signature/order pair asserted for the tower.
pub fn claims() -> Vec<Claim> {
    vec![
        Claim {
            name: "fermat-abelian-cover",
            description: "F_n -> P^1 with group (Z/n)^2, branched (n,n,n)",
            target: Target::Fermat,
            applies: |n| n >= 2,
            signature: |n| vec![n, n, n],
            order: |n| n * n,
        },
        Claim {
            name: "fermat-aut-triangle",
            description: "F_n -> F_n/Aut(F_n) as Delta(2,3,2n), |Aut| = 6n^2",
            target: Target::Fermat,
            applies: |n| n >= 4,
            signature: |n| vec![2, 3, 2 * n],
            order: |n| 6 * n * n,
        },
        Claim {
            name: "fermat-aut-lemma",
            description: "F_n -> F_n/Aut(F_n) branched (2n,3,3), |Aut| = 6n^2",
            target: Target::Fermat,
            applies: |n| n >= 4,
            signature: |n| vec![2 * n, 3, 3],
            order: |n| 6 * n * n,
        },
        Claim {
            name: "heisenberg-odd-triangle",
            description: "C_n -> P^1 with group H_n as Delta(n,n,n), odd n",
            target: Target::Heisenberg,
            applies: |n| n >= 3 && n % 2 == 1,
            signature: |n| vec![n, n, n],
            order: |n| n * n * n,
        },
        Claim {
            name: "heisenberg-even-cover",
            description: "C_n -> P^1 with group H_n branched (n,n,2n), even n",
            target: Target::Heisenberg,
            applies: |n| n >= 2 && n % 2 == 0,
            signature: |n| vec![n, n, 2 * n],
            order: |n| n * n * n,
        },
        Claim {
            name: "heisenberg-even-modular",
            description: "C_n -> C_n/Aut^m(C_n) branched (4n,n,2), |Aut^m| = 2n^3, even n",
            target: Target::Heisenberg,
            applies: |n| n >= 4 && n % 2 == 0,
            signature: |n| vec![4 * n, n, 2],
            order: |n| 2 * n * n * n,
        },
        Claim {
            name: "heisenberg-odd-normalizer",
            description: "C_n -> C_n/Aut^m(C_n) as Delta(2,n,2n), |Aut^m| = 6n^3, odd n",
            target: Target::Heisenberg,
            applies: |n| n >= 3 && n % 2 == 1,
            signature: |n| vec![2, n, 2 * n],
            order: |n| 6 * n * n * n,
        },
    ]
}

/// Runs every claim for `2 <= n <= max_n`, ordered by claim then `n`.
pub fn audit(max_n: u64) -> Result<Vec<Verdict>, CoversError> {
    let mut out = Vec::new();
    for claim in claims() {
        for n in 2..=max_n {
            if (claim.applies)(n) {
                out.push(consistency_check(
                    claim.name,
                    n,
                    &(claim.signature)(n),
                    (claim.order)(n),
                    claim.target,
                )?);
            }
        }
    }
    Ok(out)
}

/// A period of a Fuchsian signature; cusps have infinite period.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Period {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Period {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Period::Finite(e) => write!(f, "{e}"),
            Period::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Period {
    type Err = CoversError;
    fn from_str(s: &str) -> Result<Self, CoversError> {
        match s.trim() {
            "inf" | "oo" | "∞" => Ok(Period::Infinite),
            t => match t.parse::<u64>() {
                Ok(e) if e >= 2 => Ok(Period::Finite(e)),
                _ => Err(CoversError::InvalidPeriod(t.to_string())),
            },
        }
    }
}

impl Serialize for Period {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Period::Finite(e) => s.serialize_u64(*e),
            Period::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Period {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u64),
            S(String),
        }
        match Raw::deserialize(de)? {
            Raw::N(e) if e >= 2 => Ok(Period::Finite(e)),
            Raw::N(e) => Err(serde::de::Error::custom(format!("period {e} must be at least 2"))),
            Raw::S(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// `-2 + sum (1 - 1/e)`, with a cusp contributing 1.
pub fn omega(periods: &[Period]) -> BigRational {
    let mut total = rational(-2, 1);
    for p in periods {
        total += match p {
            Period::Finite(e) => BigRational::one() - rational(1, *e as i64),
            Period::Infinite => BigRational::one(),
        };
    }
    total
}

fn even_at_least_4(n: u64) -> Result<i64, CoversError> {
    require(n, n >= 4 && n.is_multiple_of(2), "need even n >= 4")?;
    i64::try_from(n).map_err(|_| CoversError::InvalidN { n, reason: "too large" })
}

/// Upper bound `2 - 5/n` for the index `m` once `Omega_n >= 1/4`.
pub fn m_bound(n: u64) -> Result<BigRational, CoversError> {
    let n = even_at_least_4(n)?;
    Ok(rational(2, 1) - rational(5, n))
}

/// `m = (2n - 5) / (4n Omega)`.
pub fn m_value(n: u64, omega: &BigRational) -> Result<BigRational, CoversError> {
    let n = even_at_least_4(n)?;
    if omega.is_zero() || omega.is_negative() {
        return Err(CoversError::InvalidPeriod(format!("Omega = {omega} must be positive")));
    }
    Ok(rational(2 * n - 5, 4 * n) / omega)
}

/// `3(2n - 5) / (n(3n + 2))`.
pub fn b3(n: u64) -> Result<BigRational, CoversError> {
    let n = even_at_least_4(n)?;
    Ok(BigRational::new(BigInt::from(3 * (2 * n - 5)), BigInt::from(n) * BigInt::from(3 * n + 2)))
}

/// `(2n - 5) / (n^2 + n)`.
pub fn b4(n: u64) -> Result<BigRational, CoversError> {
    let n = even_at_least_4(n)?;
    Ok(BigRational::new(BigInt::from(2 * n - 5), BigInt::from(n) * BigInt::from(n + 1)))
}

/// Affine fractional-linear map `(a x + b) / (c x + d)` up to sign.
type Mobius = [i64; 4];

const MOBIUS_SYMBOLS: [(&str, Mobius); 6] = [
    ("x", [1, 0, 0, 1]),
    ("1-x", [-1, 1, 0, 1]),
    ("1/x", [0, 1, 1, 0]),
    ("1/(1-x)", [0, 1, -1, 1]),
    ("x/(x-1)", [1, 0, 1, -1]),
    ("(x-1)/x", [1, -1, 1, 0]),
];

fn mobius_symbol(m: Mobius) -> &'static str {
    let neg = m.map(|v| -v);
    MOBIUS_SYMBOLS
        .iter()
        .find(|(_, s)| *s == m || *s == neg)
        .map(|(name, _)| *name)
        .expect("every coordinate permutation induces one of the six maps")
}

/// One element of S3, acting on F_n by permuting the coordinates of the
/// symmetric model `X^n + Y^n + W^n = 0` (`W = eta Z`, `eta^n = -1`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Symmetry {
    /// `perm[k]` is where coordinate `k` is sent.
    pub perm: [usize; 3],
    /// Induced map on `x = X^n / Z^n`.
    pub mobius: String,
    /// Conjugation action on `(i, j)` as a row vector: `(i, j) M`, mod n.
    pub matrix: [[u64; 2]; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FermatAutElement {
    pub translation: (u64, u64),
    /// Index into [`FermatAut::symmetries`].
    pub symmetry: usize,
}

/// `(Z/n)^2 x| S3`, with the translations `sigma_{i,j}` normal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FermatAut {
    n: u64,
    symmetries: Vec<Symmetry>,
    /// `table[s][t]` is the index of the product permutation `s t`.
    table: Vec<Vec<usize>>,
    axioms_checked: bool,
}

const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]];

/// `(p q)[k] = p[q[k]]`: apply `q` first.
fn compose(p: [usize; 3], q: [usize; 3]) -> [usize; 3] {
    [p[q[0]], p[q[1]], p[q[2]]]
}

fn inverse_perm(p: [usize; 3]) -> [usize; 3] {
    let mut inv = [0; 3];
    for (k, &v) in p.iter().enumerate() {
        inv[v] = k;
    }
    inv
}

fn symmetry(perm: [usize; 3], n: u64) -> Symmetry {
    let inv = inverse_perm(perm);
    // exponents (e_X, e_Y, 0) move to positions perm[k]; renormalise so the
    // W-slot is 0 again
    let image = |e: [i64; 3]| {
        let moved = [e[inv[0]], e[inv[1]], e[inv[2]]];
        let m = n as i64;
        [(moved[0] - moved[2]).rem_euclid(m) as u64, (moved[1] - moved[2]).rem_euclid(m) as u64]
    };
    let row_i = image([1, 0, 0]);
    let row_j = image([0, 1, 0]);

    // With A + B + C = 0 for (A, B, C) = (X^n, Y^n, W^n) and x = -A/C, take
    // A = x, B = 1 - x, C = -1 as linear forms in (x, 1).
    let forms: [[i64; 2]; 3] = [[1, 0], [-1, 1], [0, -1]];
    let a_new = forms[inv[0]];
    let c_new = forms[inv[2]];
    let mobius = [-a_new[0], -a_new[1], c_new[0], c_new[1]];
    Symmetry {
        perm,
        mobius: mobius_symbol(mobius).to_string(),
        matrix: [row_i, row_j],
    }
}

impl FermatAut {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn order(&self) -> u64 {
        6 * self.n * self.n
    }

    pub fn symmetries(&self) -> &[Symmetry] {
        &self.symmetries
    }

    /// Whether the group axioms were verified on every element.
    pub fn axioms_checked(&self) -> bool {
        self.axioms_checked
    }

    pub fn identity(&self) -> FermatAutElement {
        FermatAutElement { translation: (0, 0), symmetry: 0 }
    }

    pub fn symmetry_by_mobius(&self, symbol: &str) -> Option<usize> {
        self.symmetries.iter().position(|s| s.mobius == symbol)
    }

    /// `c_s(t) = t M_s`.
    pub fn conjugate_translation(&self, s: usize, t: (u64, u64)) -> (u64, u64) {
        let m = &self.symmetries[s].matrix;
        let n = self.n;
        (
            (t.0 * m[0][0] + t.1 * m[1][0]) % n,
            (t.0 * m[0][1] + t.1 * m[1][1]) % n,
        )
    }

    /// `(t1, s1)(t2, s2) = (t1 + c_{s1}(t2), s1 s2)`.
    pub fn mul(&self, x: FermatAutElement, y: FermatAutElement) -> FermatAutElement {
        let c = self.conjugate_translation(x.symmetry, y.translation);
        FermatAutElement {
            translation: ((x.translation.0 + c.0) % self.n, (x.translation.1 + c.1) % self.n),
            symmetry: self.table[x.symmetry][y.symmetry],
        }
    }

    pub fn inverse(&self, x: FermatAutElement) -> FermatAutElement {
        let s_inv = (0..6).find(|&t| self.table[x.symmetry][t] == 0).unwrap();
        let t = self.conjugate_translation(s_inv, x.translation);
        FermatAutElement {
            translation: ((self.n - t.0) % self.n, (self.n - t.1) % self.n),
            symmetry: s_inv,
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FermatAutElement> + '_ {
        let n = self.n;
        (0..6).flat_map(move |s| {
            (0..n).flat_map(move |i| (0..n).map(move |j| FermatAutElement { translation: (i, j), symmetry: s }))
        })
    }

    fn verify_axioms(&self) -> bool {
        let all: Vec<_> = self.elements().collect();
        let e = self.identity();
        for &x in &all {
            if self.mul(e, x) != x || self.mul(x, e) != x || self.mul(x, self.inverse(x)) != e {
                return false;
            }
        }
        all.iter().all(|&x| {
            all.iter().all(|&y| {
                let xy = self.mul(x, y);
                all.iter().all(|&z| self.mul(xy, z) == self.mul(x, self.mul(y, z)))
            })
        })
    }
}

/// The group `(Z/n)^2 x| S3` acting on F_n, for `3 <= n <= bound`. Group
/// axioms are checked on all triples when `n <= 5`.
pub fn build_fermat_aut(n: u64, bound: u64) -> Result<FermatAut, CoversError> {
    require(n, n >= 3, "need n >= 3")?;
    if n > bound {
        return Err(CoversError::BoundExceeded { n, bound });
    }
    let symmetries: Vec<Symmetry> = PERMS.iter().map(|&p| symmetry(p, n)).collect();
    let table = PERMS
        .iter()
        .map(|&p| {
            PERMS
                .iter()
                .map(|&q| PERMS.iter().position(|&r| r == compose(p, q)).unwrap())
                .collect()
        })
        .collect();
    let mut group = FermatAut { n, symmetries, table, axioms_checked: false };
    if n <= 5 {
        assert!(group.verify_axioms(), "semidirect product axioms failed for n = {n}");
        group.axioms_checked = true;
    }
    Ok(group)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rd(n: i64, d: i64) -> BigRational {
        rational(n, d)
    }

    #[test]
    fn rh_examples() {
        let d = RamificationData::new(0, 150, vec![2, 3, 10]).unwrap();
        assert_eq!(rh_genus(&d), Ok(6));
        assert_eq!(rh_genus(&RamificationData::new(0, 1, vec![]).unwrap()), Ok(0));
        assert_eq!(rh_genus(&RamificationData::new(0, 125, vec![5, 5, 5]).unwrap()), Ok(26));
        assert!(matches!(
            rh_genus(&RamificationData::new(0, 150, vec![10, 3, 3]).unwrap()),
            Err(CoversError::NonIntegerGenus(g)) if g == "37/2"
        ));
    }

    #[test]
    fn ramification_data_validation() {
        assert_eq!(RamificationData::new(0, 0, vec![]), Err(CoversError::ZeroOrder));
        assert_eq!(RamificationData::new(0, 6, vec![1]), Err(CoversError::InvalidIndex(1)));
        assert_eq!(
            RamificationData::new(0, 6, vec![4]),
            Err(CoversError::IndexDoesNotDivide { index: 4, order: 6 })
        );
    }

    #[test]
    fn genus_examples() {
        assert_eq!(fermat_genus(3), Ok(1));
        assert_eq!(fermat_genus(2), Ok(0));
        assert_eq!(fermat_genus(7), Ok(15));
        assert_eq!(heisenberg_genus(2), Ok(0));
        assert_eq!(heisenberg_genus(3), Ok(1));
        assert_eq!(heisenberg_genus(4), Ok(13));
        assert_eq!(heisenberg_genus(5), Ok(26));
        assert!(heisenberg_genus(1).is_err());
        assert!(fermat_genus(0).is_err());
    }

    #[test]
    fn stabilizer_examples() {
        for n in 2..=8 {
            for k in 0..n {
                let cases = [(Family::P, (0, 1)), (Family::Q, (1, 0)), (Family::QPrime, (1, 1))];
                for (family, generator) in cases {
                    let r = stabilizer(PointClass::new(family, k, n).unwrap(), n).unwrap();
                    assert_eq!(r.generator, generator, "{family}_{k}, n = {n}");
                    assert_eq!(r.stabilizer_order, n);
                    assert_eq!(r.stabilizer_order * r.orbit_size, n * n);
                }
            }
        }
    }

    #[test]
    fn cover_ramification() {
        let r = cn_cover_ramification(5).unwrap();
        assert!(r.unramified);
        let r = cn_cover_ramification(4).unwrap();
        assert_eq!((r.index, r.ramified_points, r.points_above_each), (2, 8, 2));
        assert_eq!(r.ramified_family, Some(Family::QPrime));
        let r = cn_cover_ramification(2).unwrap();
        assert_eq!(r.cusp_labels, vec!["(1:1:0)", "(-1:1:0)"]);
    }

    #[test]
    fn modular_aut_orders() {
        assert_eq!(modular_aut_order(5).unwrap().order, 750);
        assert_eq!(modular_aut_order(4).unwrap().order, 128);
        assert_eq!(modular_aut_order(3).unwrap().order, 162);
        assert!(modular_aut_order(2).is_err());
    }

    #[test]
    fn consistency_examples() {
        let v = consistency_check("x", 4, &[16, 4, 2], 128, Target::Heisenberg).unwrap();
        assert!(v.consistent);
        assert_eq!(v.expected_genus, 13);
        let v = consistency_check("x", 5, &[2, 3, 10], 750, Target::Heisenberg).unwrap();
        assert!(v.consistent);
        assert_eq!(v.expected_genus, 26);
        let v = consistency_check("x", 5, &[10, 3, 3], 150, Target::Fermat).unwrap();
        assert!(!v.consistent);
        assert_eq!(v.expected_genus, 6);
        assert_eq!(BigRational::try_from(v.computed_genus).unwrap(), rd(37, 2));
        // an index that does not divide the order is a verdict, not an error
        let v = consistency_check("x", 4, &[7], 8, Target::Fermat).unwrap();
        assert!(!v.consistent);
    }

    #[test]
    fn normalizer_signature_tension() {
        // order 6n^3 is consistent with (2,3,2n) for odd n, while the stated
        // (2,n,2n) only works at n = 3
        for n in (3..=11).step_by(2) {
            let alt = consistency_check("x", n, &[2, 3, 2 * n], 6 * n * n * n, Target::Heisenberg).unwrap();
            assert!(alt.consistent, "n = {n}");
            let stated = consistency_check("x", n, &[2, n, 2 * n], 6 * n * n * n, Target::Heisenberg).unwrap();
            assert_eq!(stated.consistent, n == 3, "n = {n}");
        }
    }

    #[test]
    fn audit_is_ordered_and_complete() {
        let verdicts = audit(12).unwrap();
        let names: Vec<&str> = claims().iter().map(|c| c.name).collect();
        let mut last = (0, 0);
        for v in &verdicts {
            let key = (names.iter().position(|&n| n == v.claim).unwrap(), v.n);
            assert!(key > last || last == (0, 0));
            last = key;
        }
        assert!(verdicts.iter().filter(|v| v.claim == "fermat-aut-lemma").all(|v| !v.consistent));
        assert!(verdicts.iter().filter(|v| v.claim == "fermat-aut-triangle").all(|v| v.consistent));
    }

    #[test]
    fn omega_and_bounds() {
        let f = Period::Finite;
        assert_eq!(omega(&[f(2), f(3), f(7)]), rd(1, 42));
        assert_eq!(omega(&[]), rd(-2, 1));
        assert_eq!(omega(&[Period::Infinite, Period::Infinite, Period::Infinite]), rd(1, 1));
        assert_eq!(b3(4).unwrap(), rd(9, 56));
        assert_eq!(b4(4).unwrap(), rd(3, 20));
        assert_eq!(m_bound(4).unwrap(), rd(3, 4));
        assert_eq!(m_value(4, &rd(5, 48)).unwrap(), rd(9, 5));
        assert!(b3(5).is_err());
        assert!(m_value(4, &rd(0, 1)).is_err());
    }

    #[test]
    fn period_parsing() {
        assert_eq!("inf".parse::<Period>().unwrap(), Period::Infinite);
        assert_eq!("7".parse::<Period>().unwrap(), Period::Finite(7));
        assert!("1".parse::<Period>().is_err());
        let json = serde_json::to_string(&vec![Period::Finite(2), Period::Infinite]).unwrap();
        assert_eq!(json, r#"[2,"inf"]"#);
        let back: Vec<Period> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, vec![Period::Finite(2), Period::Infinite]);
    }

    #[test]
    fn fermat_aut_structure() {
        let g = build_fermat_aut(4, 16).unwrap();
        assert_eq!(g.order(), 96);
        assert_eq!(g.elements().count(), 96);
        assert!(g.axioms_checked());
        let tau = g.symmetry_by_mobius("1/x").unwrap();
        assert_eq!(g.symmetries()[tau].matrix, [[3, 3], [0, 1]]);
        let i1 = g.symmetry_by_mobius("1-x").unwrap();
        assert_eq!(g.symmetries()[i1].matrix, [[0, 1], [1, 0]]);
        let mut symbols: Vec<&str> = g.symmetries().iter().map(|s| s.mobius.as_str()).collect();
        symbols.sort();
        let mut expected: Vec<&str> = MOBIUS_SYMBOLS.iter().map(|(s, _)| *s).collect();
        expected.sort();
        assert_eq!(symbols, expected);
        assert_eq!(build_fermat_aut(17, 16), Err(CoversError::BoundExceeded { n: 17, bound: 16 }));
        assert!(build_fermat_aut(2, 16).is_err());
        assert!(!build_fermat_aut(6, 16).unwrap().axioms_checked());
    }

    #[test]
    fn mobius_symbols_compose_like_the_permutations() {
        let g = build_fermat_aut(3, 16).unwrap();
        let coeffs = |s: usize| MOBIUS_SYMBOLS.iter().find(|(n, _)| *n == g.symmetries()[s].mobius).unwrap().1;
        let mat_mul = |p: Mobius, q: Mobius| {
            [
                p[0] * q[0] + p[1] * q[2],
                p[0] * q[1] + p[1] * q[3],
                p[2] * q[0] + p[3] * q[2],
                p[2] * q[1] + p[3] * q[3],
            ]
        };
        for s in 0..6 {
            for t in 0..6 {
                // t is applied first, so x -> M_s(M_t(x))
                let composed = mat_mul(coeffs(s), coeffs(t));
                let target = coeffs(g.table[s][t]);
                assert!(
                    composed == target || composed == target.map(|v| -v),
                    "s = {s}, t = {t}"
                );
            }
        }
    }
}
