//! The finite Heisenberg group `H_n` of upper unitriangular 3x3 matrices
//! over `Z/nZ`.
//!
//! An element
//!
//! ```text
//! | 1 x z |
//! | 0 1 y |
//! | 0 0 1 |
//! ```
//!
//! is stored as the triple `(x, y, z)` of canonical residues together with its
//! modulus. The group is generated by `a_H = (1, 0, 0)` and `b_H = (0, 1, 0)`,
//! its center is `Z_n = {(0, 0, z)}` and the abelianization map is
//! `(x, y, z) -> (x, y)`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default cap on `n` for exhaustive enumeration of `H_n`.
pub const DEFAULT_BOUND: u64 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeisenbergError {
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },
    #[error("n = {n} exceeds the enumeration bound {bound}")]
    BoundExceeded { n: u64, bound: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HeisenbergElement {
    n: u64,
    x: u64,
    y: u64,
    z: u64,
}

fn residue(v: i128, n: u64) -> u64 {
    v.rem_euclid(n as i128) as u64
}

fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

impl HeisenbergElement {
    /// Builds `(x, y, z) mod n`; any integers are accepted and reduced.
    pub fn new(n: u64, x: i64, y: i64, z: i64) -> Result<Self, HeisenbergError> {
        if n == 0 {
            return Err(HeisenbergError::ZeroModulus);
        }
        Ok(Self {
            n,
            x: residue(x as i128, n),
            y: residue(y as i128, n),
            z: residue(z as i128, n),
        })
    }

    pub fn identity(n: u64) -> Result<Self, HeisenbergError> {
        Self::new(n, 0, 0, 0)
    }

    /// The generator `a_H`.
    pub fn a(n: u64) -> Result<Self, HeisenbergError> {
        Self::new(n, 1, 0, 0)
    }

    /// The generator `b_H`.
    pub fn b(n: u64) -> Result<Self, HeisenbergError> {
        Self::new(n, 0, 1, 0)
    }

    /// The central element `(0, 0, z)`.
    pub fn central(n: u64, z: i64) -> Result<Self, HeisenbergError> {
        Self::new(n, 0, 0, z)
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn x(&self) -> u64 {
        self.x
    }

    pub fn y(&self) -> u64 {
        self.y
    }

    pub fn z(&self) -> u64 {
        self.z
    }

    pub fn triple(&self) -> (u64, u64, u64) {
        (self.x, self.y, self.z)
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.y == 0 && self.z == 0
    }

    pub fn is_central(&self) -> bool {
        self.x == 0 && self.y == 0
    }

    fn check(&self, other: &Self) -> Result<(), HeisenbergError> {
        if self.n != other.n {
            return Err(HeisenbergError::ModulusMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    /// Matrix product: `(x1+x2, y1+y2, z1+z2+x1*y2)`.
    pub fn mul(&self, other: &Self) -> Result<Self, HeisenbergError> {
        self.check(other)?;
        let n = self.n;
        Ok(Self {
            n,
            x: ((self.x as u128 + other.x as u128) % n as u128) as u64,
            y: ((self.y as u128 + other.y as u128) % n as u128) as u64,
            z: ((self.z as u128 + other.z as u128 + mul_mod(self.x, other.y, n) as u128)
                % n as u128) as u64,
        })
    }

    /// `(-x, -y, -z + xy)`.
    pub fn inverse(&self) -> Self {
        let n = self.n;
        let neg = |v: u64| if v == 0 { 0 } else { n - v };
        let z = (neg(self.z) as u128 + mul_mod(self.x, self.y, n) as u128) % n as u128;
        Self {
            n,
            x: neg(self.x),
            y: neg(self.y),
            z: z as u64,
        }
    }

    /// Closed-form power `(vx, vy, vz + v(v-1)/2 * xy)`.
    ///
    /// The triangular number is formed over the integers before reduction, so
    /// nothing is ever divided by 2 modulo an even `n`.
    pub fn pow(&self, exponent: i64) -> Self {
        if exponent < 0 {
            return self.inverse().pow_nonneg(exponent.unsigned_abs());
        }
        self.pow_nonneg(exponent as u64)
    }

    fn pow_nonneg(&self, nu: u64) -> Self {
        let n = self.n;
        let nu_mod = (nu % n) as u128;
        // nu(nu-1)/2 < 2^127 for nu < 2^64
        let tri = (nu as u128) * (nu as u128).saturating_sub(1) / 2;
        let tri_mod = (tri % n as u128) as u64;
        let xy = mul_mod(self.x, self.y, n);
        let z = (nu_mod * self.z as u128 + mul_mod(tri_mod, xy, n) as u128) % n as u128;
        Self {
            n,
            x: ((nu_mod * self.x as u128) % n as u128) as u64,
            y: ((nu_mod * self.y as u128) % n as u128) as u64,
            z: z as u64,
        }
    }

    /// Smallest `v >= 1` with `g^v = 1`. Always a divisor of `2n`.
    pub fn order(&self) -> u64 {
        let two_n = 2 * self.n;
        (1..=two_n)
            .filter(|d| two_n.is_multiple_of(*d))
            .find(|&d| self.pow_nonneg(d).is_identity())
            .expect("g^(2n) is the identity in H_n")
    }

    /// `g h g^-1 h^-1`.
    pub fn commutator(&self, other: &Self) -> Result<Self, HeisenbergError> {
        self.mul(other)?
            .mul(&self.inverse())?
            .mul(&other.inverse())
    }

    /// Image in `H_n^ab = (Z/n)^2`.
    pub fn abelianize(&self) -> (u64, u64) {
        (self.x, self.y)
    }
}

impl fmt::Display for HeisenbergElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{}) mod {}", self.x, self.y, self.z, self.n)
    }
}

/// All `n^3` elements of `H_n`, in lexicographic `(x, y, z)` order.
pub fn enumerate(n: u64, bound: u64) -> Result<Vec<HeisenbergElement>, HeisenbergError> {
    if n == 0 {
        return Err(HeisenbergError::ZeroModulus);
    }
    if n > bound {
        return Err(HeisenbergError::BoundExceeded { n, bound });
    }
    let mut out = Vec::with_capacity((n * n * n) as usize);
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                out.push(HeisenbergElement { n, x, y, z });
            }
        }
    }
    Ok(out)
}

/// Largest element order in `H_n` together with one element attaining it.
pub fn max_order(n: u64, bound: u64) -> Result<(u64, HeisenbergElement), HeisenbergError> {
    let elements = enumerate(n, bound)?;
    let best = elements
        .iter()
        .map(|g| (g.order(), *g))
        .max_by_key(|(o, g)| (*o, std::cmp::Reverse(*g)))
        .expect("H_n is nonempty");
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(n: u64, x: i64, y: i64, z: i64) -> HeisenbergElement {
        HeisenbergElement::new(n, x, y, z).unwrap()
    }

    // 3x3 integer matrices reduced mod n, independent of the triple formula
    fn matrix(g: &HeisenbergElement) -> [[i64; 3]; 3] {
        [
            [1, g.x as i64, g.z as i64],
            [0, 1, g.y as i64],
            [0, 0, 1],
        ]
    }

    fn matmul_mod(a: [[i64; 3]; 3], b: [[i64; 3]; 3], n: i64) -> [[i64; 3]; 3] {
        let mut c = [[0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                c[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum::<i64>().rem_euclid(n);
            }
        }
        c
    }

    #[test]
    fn product_matches_matrix_multiplication() {
        for n in 2..=6u64 {
            let all = enumerate(n, DEFAULT_BOUND).unwrap();
            for g in &all {
                for h in &all {
                    let p = g.mul(h).unwrap();
                    assert_eq!(matrix(&p), matmul_mod(matrix(g), matrix(h), n as i64));
                }
            }
        }
    }

    #[test]
    fn generators_do_not_commute_mod_two() {
        let a = HeisenbergElement::a(2).unwrap();
        let b = HeisenbergElement::b(2).unwrap();
        assert_eq!(a.mul(&b).unwrap().triple(), (1, 1, 1));
        assert_eq!(b.mul(&a).unwrap().triple(), (1, 1, 0));
    }

    #[test]
    fn commutator_of_generators_is_central_generator() {
        let a = HeisenbergElement::a(5).unwrap();
        let b = HeisenbergElement::b(5).unwrap();
        assert_eq!(a.commutator(&b).unwrap(), el(5, 0, 0, 1));
    }

    #[test]
    fn identity_is_neutral() {
        let g = el(7, 3, 5, 2);
        let e = HeisenbergElement::identity(7).unwrap();
        assert_eq!(g.mul(&e).unwrap(), g);
        assert_eq!(e.mul(&g).unwrap(), g);
    }

    #[test]
    fn modulus_mismatch_is_rejected() {
        let g = el(4, 1, 0, 0);
        let h = el(5, 1, 0, 0);
        assert_eq!(
            g.mul(&h),
            Err(HeisenbergError::ModulusMismatch { left: 4, right: 5 })
        );
        assert_eq!(HeisenbergElement::new(0, 0, 0, 0), Err(HeisenbergError::ZeroModulus));
    }

    #[test]
    fn power_examples() {
        assert_eq!(el(4, 1, 1, 0).pow(4).triple(), (0, 0, 2));
        assert_eq!(el(5, 1, 1, 0).pow(5), HeisenbergElement::identity(5).unwrap());
        assert!(el(9, 4, 2, 7).pow(0).is_identity());
        let g = el(6, 2, 5, 1);
        assert_eq!(g.pow(-3).mul(&g.pow(3)).unwrap(), HeisenbergElement::identity(6).unwrap());
        assert_eq!(g.pow(-1), g.inverse());
    }

    #[test]
    fn order_examples() {
        assert_eq!(el(4, 1, 1, 0).order(), 8);
        assert_eq!(el(5, 1, 0, 0).order(), 5);
        assert_eq!(el(6, 0, 0, 1).order(), 6);
        assert_eq!(HeisenbergElement::identity(3).unwrap().order(), 1);
    }

    #[test]
    fn central_elements_die_in_abelianization() {
        assert_eq!(el(5, 0, 0, 3).abelianize(), (0, 0));
        assert_eq!(HeisenbergElement::a(5).unwrap().abelianize(), (1, 0));
    }

    #[test]
    fn enumeration_sizes_and_bound() {
        assert_eq!(enumerate(1, DEFAULT_BOUND).unwrap().len(), 1);
        assert_eq!(enumerate(2, DEFAULT_BOUND).unwrap().len(), 8);
        let h3 = enumerate(3, DEFAULT_BOUND).unwrap();
        assert_eq!(h3.len(), 27);
        let mut dedup = h3.clone();
        dedup.dedup();
        assert_eq!(dedup.len(), 27);
        assert_eq!(
            enumerate(17, DEFAULT_BOUND),
            Err(HeisenbergError::BoundExceeded { n: 17, bound: 16 })
        );
    }

    #[test]
    fn h2_is_dihedral_of_order_eight() {
        // the two generating matrices of D_4, read off as (x, y, z)
        let a1 = el(2, 1, 1, 1);
        let a2 = el(2, 1, 0, 0);
        assert_eq!(a1.order(), 4);
        assert_eq!(a2.order(), 2);
        let conj = a2.mul(&a1).unwrap().mul(&a2).unwrap();
        assert_eq!(conj, a1.inverse());
    }

    #[test]
    fn huge_exponents_stay_exact() {
        let g = el(10, 1, 1, 0);
        // v = 10^18: v(v-1)/2 is divisible by 10 only through the v factor
        let v = 1_000_000_000_000_000_000i64;
        let tri = (v as i128) * (v as i128 - 1) / 2;
        assert_eq!(g.pow(v).z() as i128, tri.rem_euclid(10));
    }
}
