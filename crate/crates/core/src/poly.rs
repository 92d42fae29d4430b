//! Dense univariate polynomials over `Q` and over `Q(sqrt(d))`, with exact
//! root finding.
//!
//! Rational roots are located without factoring the constant term: the
//! squarefree part is isolated with a Sturm sequence, each isolating interval
//! is bisected until it is narrower than `1/L^2` (`L` the leading coefficient
//! of the primitive integer form), and the simplest fraction in the interval
//! is tested exactly. A rational root has denominator dividing `L`, and two
//! distinct fractions with denominators at most `L` are at least `1/L^2`
//! apart, so the simplest fraction is the only possible candidate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::quadratic::{integer, rational, QuadNum};

/// Coefficients in ascending degree; no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| integer(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * integer(i as i64))
                .collect(),
        )
    }

    pub fn scale(&self, r: &BigRational) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| c * r).collect())
    }

    pub fn monic(&self) -> QPoly {
        match self.lead() {
            Some(l) => self.scale(&l.recip()),
            None => self.clone(),
        }
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = BigRational::zero();
        QPoly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) - other.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::new(Vec::new());
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &QPoly) -> (QPoly, QPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.lead().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let c = rem.last().unwrap() / &lead;
            for (i, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + i] -= &c * dc;
            }
            quot[k] = c;
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        (QPoly::new(quot), QPoly::new(rem))
    }

    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Product of the distinct irreducible factors.
    pub fn squarefree_part(&self) -> QPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Primitive integer polynomial proportional to `self`.
    fn primitive_integer(&self) -> Vec<BigInt> {
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
            .collect();
        let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        ints.into_iter().map(|c| c / &content).collect()
    }

    fn sturm_sequence(&self) -> Vec<QPoly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            let r = seq[n - 2].div_rem(&seq[n - 1]).1;
            if r.is_zero() {
                break;
            }
            seq.push(r.scale(&integer(-1)));
        }
        seq
    }

    /// All distinct rational roots, ascending.
    pub fn rational_roots(&self) -> Vec<BigRational> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let mut roots = Vec::new();
        // peel x^k first so the remaining constant term is nonzero
        let mut p = self.clone();
        if p.coeffs[0].is_zero() {
            roots.push(BigRational::zero());
            let k = p.coeffs.iter().position(|c| !c.is_zero()).unwrap();
            p = QPoly::new(p.coeffs[k..].to_vec());
        }
        let p = p.squarefree_part();
        if p.degree().unwrap_or(0) == 0 {
            return roots;
        }
        let ints = p.primitive_integer();
        let lead = ints.last().unwrap().abs();
        let width = BigRational::new(BigInt::one(), &lead * &lead * 2u32);
        // Cauchy bound: every root lies in (-m, m)
        let m = p
            .coeffs
            .iter()
            .take(p.coeffs.len() - 1)
            .map(|c| (c / p.lead().unwrap()).abs())
            .fold(BigRational::zero(), |a, b| if b > a { b } else { a })
            + integer(1);
        // positive rescaling keeps every sign, so evaluate on integer forms
        let sturm: Vec<Vec<BigInt>> = p.sturm_sequence().iter().map(QPoly::primitive_integer).collect();
        let mut stack = vec![(-m.clone(), m)];
        while let Some((lo, hi)) = stack.pop() {
            let count = sign_changes(&sturm, &lo) - sign_changes(&sturm, &hi);
            if count == 0 {
                continue;
            }
            if count == 1 && &hi - &lo < width {
                let cand = simplest_between(&lo, &hi);
                if p.eval(&cand).is_zero() {
                    roots.push(cand);
                }
                continue;
            }
            let mut mid = (&lo + &hi) / integer(2);
            if p.eval(&mid).is_zero() {
                // keep endpoints off the roots; the root is found again inside a half
                roots.push(mid.clone());
                let mut k = 1i64;
                while p.eval(&mid).is_zero() {
                    mid = &lo + (&hi - &lo) * rational(k, 2 * k + 1);
                    k += 1;
                }
            }
            stack.push((lo, mid.clone()));
            stack.push((mid, hi));
        }
        roots.sort();
        roots.dedup();
        roots
    }
}

/// Sign of `sum c_i x^i` at `x = a/b`, from `sum c_i a^i b^(deg - i)` (`b > 0`).
fn sign_at(coeffs: &[BigInt], x: &BigRational) -> i32 {
    let (a, b) = (x.numer(), x.denom());
    let mut acc = BigInt::zero();
    let mut bpow = BigInt::one();
    for c in coeffs.iter().rev() {
        acc = acc * a + c * &bpow;
        bpow *= b;
    }
    if acc.is_positive() {
        1
    } else if acc.is_negative() {
        -1
    } else {
        0
    }
}

fn sign_changes(seq: &[Vec<BigInt>], x: &BigRational) -> i64 {
    let mut changes = 0;
    let mut last = 0;
    for p in seq {
        let s = sign_at(p, x);
        if s != 0 {
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
    }
    changes
}

/// The fraction with the smallest denominator in `[lo, hi]`.
pub fn simplest_between(lo: &BigRational, hi: &BigRational) -> BigRational {
    debug_assert!(lo <= hi);
    if !lo.is_positive() && !hi.is_negative() {
        return BigRational::zero();
    }
    if hi.is_negative() {
        return -simplest_between(&-hi, &-lo);
    }
    let fl = lo.floor();
    if &fl == lo {
        return fl;
    }
    let next = &fl + integer(1);
    if &next <= hi {
        return next;
    }
    let inner = simplest_between(&(hi - &fl).recip(), &(lo - &fl).recip());
    fl + inner.recip()
}

/// Polynomial over `Q(sqrt(d))`, coefficients ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KPoly {
    coeffs: Vec<QuadNum>,
    d: i64,
}

impl KPoly {
    pub fn new(mut coeffs: Vec<QuadNum>, d: i64) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs, d }
    }

    pub fn coeffs(&self) -> &[QuadNum] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &QuadNum) -> QuadNum {
        let mut acc = QuadNum::zero(self.d);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    fn conj(&self) -> KPoly {
        KPoly::new(self.coeffs.iter().map(QuadNum::conj).collect(), self.d)
    }

    fn mul(&self, other: &KPoly) -> KPoly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return KPoly::new(Vec::new(), self.d);
        }
        let mut out = vec![QuadNum::zero(self.d); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        KPoly::new(out, self.d)
    }

    /// `f * conj(f)`, which has rational coefficients.
    pub fn norm(&self) -> QPoly {
        let n = self.mul(&self.conj());
        QPoly::new(
            n.coeffs
                .iter()
                .map(|c| {
                    debug_assert!(c.is_rational());
                    c.p().clone()
                })
                .collect(),
        )
    }

    /// Quotient by `(x - r)` when `r` is a root.
    fn deflate(&self, r: &QuadNum) -> KPoly {
        let n = self.coeffs.len();
        let mut quot = vec![QuadNum::zero(self.d); n - 1];
        let mut carry = QuadNum::zero(self.d);
        for i in (1..n).rev() {
            carry = &(&carry * r) + &self.coeffs[i];
            quot[i - 1] = carry.clone();
        }
        KPoly::new(quot, self.d)
    }

    /// Distinct roots in `Q(sqrt(d))`.
    ///
    /// Rational roots of the norm polynomial are peeled off first; if what is
    /// left has degree at most two it is solved with the quadratic formula in
    /// the field. A residual factor of degree three or more without rational
    /// roots is returned as `Err(residual)`.
    pub fn roots(&self) -> Result<Vec<QuadNum>, KPoly> {
        let mut out: Vec<QuadNum> = Vec::new();
        let mut f = self.clone();
        for r in self.norm().rational_roots() {
            let r = QuadNum::from_rational(r, self.d);
            let mut hit = false;
            while f.degree().unwrap_or(0) > 0 && f.eval(&r).is_zero() {
                f = f.deflate(&r);
                hit = true;
            }
            if hit {
                out.push(r);
            }
        }
        match f.degree() {
            None | Some(0) => {}
            Some(1) => {
                let r = -(f.coeffs[0].div(&f.coeffs[1]).expect("nonzero leading coefficient"));
                out.push(r);
            }
            Some(2) => {
                let (c, b, a) = (&f.coeffs[0], &f.coeffs[1], &f.coeffs[2]);
                let disc = &(b * b) - &(&QuadNum::from_int(4, self.d) * &(a * c));
                if let Some(s) = disc.try_sqrt() {
                    let two_a = &QuadNum::from_int(2, self.d) * a;
                    for sq in [s.clone(), -s] {
                        let r = (&(-b) + &sq).div(&two_a).expect("nonzero leading coefficient");
                        if !out.contains(&r) {
                            out.push(r);
                        }
                    }
                }
            }
            Some(_) => return Err(f),
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_roots_of_simple_polynomials() {
        // (2x - 1)(x + 3)(x^2 + 1)
        let p = QPoly::from_ints(&[-1, 2])
            .mul(&QPoly::from_ints(&[3, 1]))
            .mul(&QPoly::from_ints(&[1, 0, 1]));
        assert_eq!(p.rational_roots(), vec![integer(-3), rational(1, 2)]);
        let (q, r) = p.div_rem(&QPoly::from_ints(&[-1, 2]));
        assert!(r.is_zero());
        assert_eq!(q, QPoly::from_ints(&[3, 1]).mul(&QPoly::from_ints(&[1, 0, 1])));
    }

    #[test]
    fn repeated_and_zero_roots() {
        // x^3 (x - 2)^2 (3x + 1)
        let p = QPoly::from_ints(&[0, 0, 0, 1])
            .mul(&QPoly::from_ints(&[-2, 1]))
            .mul(&QPoly::from_ints(&[-2, 1]))
            .mul(&QPoly::from_ints(&[1, 3]));
        assert_eq!(p.rational_roots(), vec![rational(-1, 3), integer(0), integer(2)]);
    }

    #[test]
    fn no_rational_roots() {
        assert!(QPoly::from_ints(&[-2, 0, 1]).rational_roots().is_empty());
        assert!(QPoly::from_ints(&[1, 0, 1]).rational_roots().is_empty());
        assert!(QPoly::from_ints(&[5]).rational_roots().is_empty());
    }

    #[test]
    fn large_coefficients() {
        // (x - 1728)(x + 109296/7)(x^2 - 3)
        let p = QPoly::from_ints(&[-1728, 1])
            .mul(&QPoly::from_ints(&[109296, 7]))
            .mul(&QPoly::from_ints(&[-3, 0, 1]));
        assert_eq!(p.rational_roots(), vec![rational(-109296, 7), integer(1728)]);
    }

    #[test]
    fn simplest_fraction() {
        assert_eq!(simplest_between(&rational(1, 3), &rational(1, 2)), rational(1, 2));
        assert_eq!(simplest_between(&rational(3, 10), &rational(2, 5)), rational(1, 3));
        assert_eq!(simplest_between(&rational(-2, 5), &rational(-3, 10)), rational(-1, 3));
        assert_eq!(simplest_between(&rational(-1, 5), &rational(1, 7)), integer(0));
        assert_eq!(simplest_between(&rational(7, 2), &rational(9, 2)), integer(4));
    }

    #[test]
    fn field_roots_of_x_cubed_minus_1728() {
        let d = -3;
        let f = KPoly::new(
            vec![
                QuadNum::from_int(-1728, d),
                QuadNum::zero(d),
                QuadNum::zero(d),
                QuadNum::one(d),
            ],
            d,
        );
        let roots = f.roots().unwrap();
        assert_eq!(roots.len(), 3);
        let twelve = QuadNum::from_int(12, d);
        let z = QuadNum::zeta3();
        for r in [twelve.clone(), &twelve * &z, &twelve * &z.square()] {
            assert!(roots.contains(&r), "missing {r}");
        }
    }

    #[test]
    fn unsupported_residual_is_reported() {
        // x^3 - 2 over Q(sqrt(-3)): no roots at all, residual degree 3
        let d = -3;
        let f = KPoly::new(
            vec![QuadNum::from_int(-2, d), QuadNum::zero(d), QuadNum::zero(d), QuadNum::one(d)],
            d,
        );
        assert!(f.roots().is_err());
    }
}
