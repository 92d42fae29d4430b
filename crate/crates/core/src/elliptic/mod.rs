//! Short Weierstrass curves `y^2 = x^3 + A x + B` over `Q(sqrt(d))`: group
//! law, 3-torsion, Vélu 3-isogenies, j-invariants and isomorphism/twist
//! classification.
//!
//! The Fermat cubic `x^3 + y^3 = 1` is taken in the classical Weierstrass
//! model `y^2 z = x^3 - 432 z^3` (via `X = 12/(x+y)`, `Y = 36(x-y)/(x+y)`);
//! the substitution is used as given and not rederived here.

mod c3;
pub mod hessian;

pub use c3::{c3_derivation, C3Report, IsogenyRow, PairRow};

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::KPoly;
use crate::quadratic::{cmp_key, FieldError, QuadNum};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EllipticError {
    #[error("singular curve: 4A^3 + 27B^2 = 0")]
    Singular,
    #[error("point ({x}, {y}) is not on the curve")]
    NotOnCurve { x: String, y: String },
    #[error("kernel point must be an affine point of order 3")]
    NotOrderThree,
    #[error("division polynomial does not split into factors of degree <= 2; residual degree {0}")]
    Unsupported(usize),
    #[error("expected exactly one isogenous curve with j = 0, found {0}")]
    NoUniqueJZero(usize),
    #[error("curves over different fields: d = {0} and d = {1}")]
    FieldMismatch(i64, i64),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Curve {
    a: QuadNum,
    b: QuadNum,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Point {
    Infinity,
    Affine { x: QuadNum, y: QuadNum },
}

impl Point {
    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn x(&self) -> Option<&QuadNum> {
        match self {
            Point::Affine { x, .. } => Some(x),
            Point::Infinity => None,
        }
    }

    pub fn y(&self) -> Option<&QuadNum> {
        match self {
            Point::Affine { y, .. } => Some(y),
            Point::Infinity => None,
        }
    }
}

impl fmt::Display for Point {
    /// Projective notation `(x : y : 1)`, or `(0 : 1 : 0)` at infinity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Infinity => write!(f, "(0 : 1 : 0)"),
            Point::Affine { x, y } => write!(f, "({x} : {y} : 1)"),
        }
    }
}

impl Curve {
    pub fn new(a: QuadNum, b: QuadNum) -> Result<Self, EllipticError> {
        if a.d() != b.d() {
            return Err(EllipticError::FieldMismatch(a.d(), b.d()));
        }
        let c = Curve { a, b };
        if c.disc_factor().is_zero() {
            return Err(EllipticError::Singular);
        }
        Ok(c)
    }

    pub fn from_ints(a: i64, b: i64, d: i64) -> Result<Self, EllipticError> {
        Self::new(QuadNum::from_int(a, d), QuadNum::from_int(b, d))
    }

    /// `y^2 = x^3 - 432`, the Weierstrass model of the Fermat cubic.
    pub fn fermat_cubic() -> Self {
        Self::from_ints(0, -432, -3).expect("nonsingular")
    }

    pub fn a(&self) -> &QuadNum {
        &self.a
    }

    pub fn b(&self) -> &QuadNum {
        &self.b
    }

    pub fn d(&self) -> i64 {
        self.a.d()
    }

    fn k(&self, n: i64) -> QuadNum {
        QuadNum::from_int(n, self.d())
    }

    /// `4A^3 + 27B^2`.
    fn disc_factor(&self) -> QuadNum {
        &(&self.k(4) * &self.a.pow(3)) + &(&self.k(27) * &self.b.square())
    }

    /// `-16(4A^3 + 27B^2)`.
    pub fn discriminant(&self) -> QuadNum {
        &self.k(-16) * &self.disc_factor()
    }

    /// `1728 * 4A^3 / (4A^3 + 27B^2)`.
    pub fn j_invariant(&self) -> QuadNum {
        let num = &self.k(1728 * 4) * &self.a.pow(3);
        num.div(&self.disc_factor()).expect("nonsingular curve")
    }

    /// `x^3 + A x + B`.
    pub fn rhs(&self, x: &QuadNum) -> QuadNum {
        &(&x.pow(3) + &(&self.a * x)) + &self.b
    }

    pub fn contains(&self, x: &QuadNum, y: &QuadNum) -> bool {
        y.square() == self.rhs(x)
    }

    /// Affine point, checked against the curve equation.
    pub fn point(&self, x: QuadNum, y: QuadNum) -> Result<Point, EllipticError> {
        if x.d() != self.d() || y.d() != self.d() {
            return Err(EllipticError::FieldMismatch(self.d(), if x.d() != self.d() { x.d() } else { y.d() }));
        }
        if !self.contains(&x, &y) {
            return Err(EllipticError::NotOnCurve {
                x: x.to_string(),
                y: y.to_string(),
            });
        }
        Ok(Point::Affine { x, y })
    }

    fn check(&self, p: &Point) -> Result<(), EllipticError> {
        match p {
            Point::Infinity => Ok(()),
            Point::Affine { x, y } => self.point(x.clone(), y.clone()).map(|_| ()),
        }
    }

    pub fn neg(&self, p: &Point) -> Point {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => Point::Affine {
                x: x.clone(),
                y: -y,
            },
        }
    }

    /// Chord-and-tangent addition.
    pub fn add(&self, p: &Point, q: &Point) -> Result<Point, EllipticError> {
        self.check(p)?;
        self.check(q)?;
        Ok(self.add_unchecked(p, q))
    }

    fn add_unchecked(&self, p: &Point, q: &Point) -> Point {
        let (x1, y1, x2, y2) = match (p, q) {
            (Point::Infinity, _) => return q.clone(),
            (_, Point::Infinity) => return p.clone(),
            (Point::Affine { x: x1, y: y1 }, Point::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let slope = if x1 == x2 {
            if (y1 + y2).is_zero() {
                return Point::Infinity;
            }
            // tangent: (3x^2 + A) / 2y
            (&(&self.k(3) * &x1.square()) + &self.a)
                .div(&(&self.k(2) * y1))
                .expect("y != 0")
        } else {
            (y2 - y1).div(&(x2 - x1)).expect("x1 != x2")
        };
        let x3 = &(&slope.square() - x1) - x2;
        let y3 = &(&slope * &(x1 - &x3)) - y1;
        Point::Affine { x: x3, y: y3 }
    }

    pub fn scalar_mul(&self, p: &Point, k: i64) -> Result<Point, EllipticError> {
        self.check(p)?;
        let base = if k < 0 { self.neg(p) } else { p.clone() };
        let mut acc = Point::Infinity;
        let mut addend = base;
        let mut m = k.unsigned_abs();
        while m > 0 {
            if m & 1 == 1 {
                acc = self.add_unchecked(&acc, &addend);
            }
            addend = self.add_unchecked(&addend, &addend);
            m >>= 1;
        }
        Ok(acc)
    }

    /// 3-division polynomial `3x^4 + 6Ax^2 + 12Bx - A^2`.
    pub fn division_polynomial_3(&self) -> KPoly {
        let d = self.d();
        KPoly::new(
            vec![
                -self.a.square(),
                &self.k(12) * &self.b,
                &self.k(6) * &self.a,
                QuadNum::zero(d),
                self.k(3),
            ],
            d,
        )
    }

    /// Whether `p` is an affine point with `3p = O`, tested through the
    /// division polynomial.
    pub fn is_three_torsion(&self, p: &Point) -> bool {
        match p {
            Point::Infinity => false,
            Point::Affine { x, y } => {
                self.contains(x, y) && self.division_polynomial_3().eval(x).is_zero()
            }
        }
    }

    /// Field-rational 3-torsion, see [`TorsionReport`].
    pub fn three_torsion(&self) -> Result<TorsionReport, EllipticError> {
        let mut xs = self
            .division_polynomial_3()
            .roots()
            .map_err(|residual| EllipticError::Unsupported(residual.degree().unwrap_or(0)))?;
        xs.sort_by(cmp_key);
        let mut points = Vec::new();
        let mut x_roots_without_y = 0;
        for x in &xs {
            match self.rhs(x).try_sqrt() {
                Some(y) if y.is_zero() => unreachable!("3-torsion is never 2-torsion"),
                Some(y) => {
                    points.push(Point::Affine { x: x.clone(), y: y.clone() });
                    points.push(Point::Affine { x: x.clone(), y: -y });
                }
                None => x_roots_without_y += 1,
            }
        }
        Ok(TorsionReport {
            x_roots: xs,
            points,
            x_roots_without_y,
        })
    }

    /// Codomain of the 3-isogeny with kernel `{O, P, -P}`.
    ///
    /// One representative of the `+-P` pair enters the sums:
    /// `t = 2(3x0^2 + A)`, `w = 4y0^2 + x0 t`, `A' = A - 5t`, `B' = B - 7w`.
    /// Summing over all kernel points instead would double `t` and `w` and
    /// give a different (isomorphic) model.
    pub fn velu3(&self, p: &Point) -> Result<Curve, EllipticError> {
        let (t, w) = self.velu_sums(p)?;
        Curve::new(&self.a - &(&self.k(5) * &t), &self.b - &(&self.k(7) * &w))
    }

    fn velu_sums(&self, p: &Point) -> Result<(QuadNum, QuadNum), EllipticError> {
        if !self.is_three_torsion(p) {
            return Err(EllipticError::NotOrderThree);
        }
        let (x0, y0) = (p.x().unwrap(), p.y().unwrap());
        let t = &self.k(2) * &(&(&self.k(3) * &x0.square()) + &self.a);
        let w = &(&self.k(4) * &y0.square()) + &(x0 * &t);
        Ok((t, w))
    }

    /// Image of `q` under the isogeny of [`Curve::velu3`].
    pub fn velu3_map(&self, p: &Point, q: &Point) -> Result<Point, EllipticError> {
        self.velu_sums(p)?;
        self.check(q)?;
        let (x0, y0) = (p.x().unwrap(), p.y().unwrap());
        let (x, y) = match q {
            Point::Infinity => return Ok(Point::Infinity),
            Point::Affine { x, y } if x == x0 => {
                debug_assert!(y == y0 || (y + y0).is_zero());
                return Ok(Point::Infinity);
            }
            Point::Affine { x, y } => (x, y),
        };
        let gx = &(&self.k(3) * &x0.square()) + &self.a;
        let gy = &self.k(-2) * y0;
        let v = &self.k(2) * &gx;
        let u = gy.square();
        let dx = x - x0;
        let inv = dx.inv()?;
        let inv2 = inv.square();
        let inv3 = &inv2 * &inv;
        let big_x = &(&(x + &(&v * &inv)) + &(&u * &inv2));
        let y_corr = &(&(&(&u * &(&self.k(2) * y)) * &inv3) + &(&(&v * &(y - y0)) * &inv2))
            - &(&(&gx * &gy) * &inv2);
        let big_y = y - &y_corr;
        let target = self.velu3(p)?;
        target.point(big_x.clone(), big_y)
    }

    /// Automorphisms fixing the origin: 6 for `j = 0`, 4 for `j = 1728`,
    /// 2 otherwise.
    pub fn aut0_order(&self) -> u32 {
        let j = self.j_invariant();
        if j.is_zero() {
            6
        } else if j == self.k(1728) {
            4
        } else {
            2
        }
    }

    fn render_coeff(c: &QuadNum, suffix: &str) -> Option<String> {
        if c.is_zero() {
            return None;
        }
        let s = c.to_string();
        if c.is_rational() || c.p().is_zero() {
            if let Some(rest) = s.strip_prefix('-') {
                return Some(format!(" - {rest}{suffix}"));
            }
        }
        Some(format!(" + {s}{suffix}"))
    }
}

impl fmt::Display for Curve {
    /// `y^2 = x^3 + 2160(1-√-3)x - 109296`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = x^3")?;
        if let Some(s) = Curve::render_coeff(&self.a, "x") {
            write!(f, "{s}")?;
        }
        if let Some(s) = Curve::render_coeff(&self.b, "") {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// 3-torsion found over the field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionReport {
    /// Roots of the 3-division polynomial in the field, sorted.
    pub x_roots: Vec<QuadNum>,
    /// Affine points `P != O` with `3P = O`, grouped `(x, y), (x, -y)` with
    /// the sign-normalised `y` first.
    pub points: Vec<Point>,
    /// x-roots whose `y` lies outside the field.
    pub x_roots_without_y: usize,
}

impl TorsionReport {
    /// One sign-normalised point per `+-` pair.
    pub fn representatives(&self) -> Vec<Point> {
        self.points.iter().step_by(2).cloned().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Classification {
    /// `A2 = u^4 A1`, `B2 = u^6 B1` with `u` in the field.
    IsomorphicOverField { u: QuadNum },
    /// `A2 = delta^2 A1`, `B2 = delta^3 B1`, `delta` not a square.
    QuadraticTwist { delta: QuadNum },
    SameJOnly { j: QuadNum },
    DistinctJ { j1: QuadNum, j2: QuadNum },
}

/// All `u` in the field with `u^k = c`, for `k` in {2, 3, 4, 6}.
fn roots_of(c: &QuadNum, k: u32) -> Vec<QuadNum> {
    let mut out = match k {
        2 => c.square_roots(),
        3 => c.cube_roots(),
        4 => c.square_roots().iter().flat_map(QuadNum::square_roots).collect(),
        6 => c.cube_roots().iter().flat_map(QuadNum::square_roots).collect(),
        _ => unreachable!("unsupported root degree {k}"),
    };
    // sign-normalised roots first, so u = 1 is preferred over u = -1
    out.sort_by(|x, y| y.is_sign_normalized().cmp(&x.is_sign_normalized()).then_with(|| cmp_key(x, y)));
    out.dedup();
    out
}

/// Finds the finest relation between two curves: isomorphism over the field,
/// then quadratic twist, then equality of j-invariants.
pub fn classify_pair(e1: &Curve, e2: &Curve) -> Result<Classification, EllipticError> {
    if e1.d() != e2.d() {
        return Err(EllipticError::FieldMismatch(e1.d(), e2.d()));
    }
    let matches = |u4: &QuadNum, u6: &QuadNum| &(u4 * &e1.a) == e2.a() && &(u6 * &e1.b) == e2.b();

    // Candidate scalings come from whichever coefficient ratios are defined.
    let candidates_for = |pow_a: u32, pow_b: u32| -> Vec<QuadNum> {
        let (a_zero, b_zero) = (e1.a.is_zero(), e1.b.is_zero());
        if a_zero != e2.a.is_zero() || b_zero != e2.b.is_zero() {
            return Vec::new();
        }
        match (a_zero, b_zero) {
            // s^(pow_b - pow_a) = (B2/B1) / (A2/A1)
            (false, false) => {
                let ra = e2.a.div(&e1.a).unwrap();
                let rb = e2.b.div(&e1.b).unwrap();
                let ratio = rb.div(&ra).unwrap();
                match pow_b - pow_a {
                    1 => vec![ratio],
                    _ => roots_of(&ratio, pow_b - pow_a),
                }
            }
            (true, false) => roots_of(&e2.b.div(&e1.b).unwrap(), pow_b),
            (false, true) => roots_of(&e2.a.div(&e1.a).unwrap(), pow_a),
            (true, true) => unreachable!("nonsingular"),
        }
    };

    for u in candidates_for(4, 6) {
        if matches(&u.pow(4), &u.pow(6)) {
            return Ok(Classification::IsomorphicOverField { u });
        }
    }
    for delta in candidates_for(2, 3) {
        if matches(&delta.square(), &delta.pow(3)) {
            return Ok(Classification::QuadraticTwist { delta });
        }
    }
    let (j1, j2) = (e1.j_invariant(), e2.j_invariant());
    if j1 == j2 {
        Ok(Classification::SameJOnly { j: j1 })
    } else {
        Ok(Classification::DistinctJ { j1, j2 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadratic::integer;

    fn qn(p: i64, q: i64) -> QuadNum {
        QuadNum::new(integer(p), integer(q), -3)
    }

    fn e432() -> Curve {
        Curve::fermat_cubic()
    }

    fn pt(e: &Curve, x: QuadNum, y: QuadNum) -> Point {
        e.point(x, y).unwrap()
    }

    #[test]
    fn singular_curves_are_rejected() {
        assert_eq!(Curve::from_ints(0, 0, -3), Err(EllipticError::Singular));
        assert_eq!(Curve::from_ints(-3, 2, -3), Err(EllipticError::Singular));
    }

    #[test]
    fn j_invariant_examples() {
        assert!(Curve::from_ints(0, 11664, -3).unwrap().j_invariant().is_zero());
        assert_eq!(
            Curve::from_ints(-4320, -109296, -3).unwrap().j_invariant(),
            qn(-12288000, 0)
        );
        assert_eq!(Curve::from_ints(1, 0, -3).unwrap().j_invariant(), qn(1728, 0));
    }

    #[test]
    fn group_law_examples() {
        let e = e432();
        let p = pt(&e, qn(12, 0), qn(36, 0));
        assert_eq!(e.scalar_mul(&p, 3).unwrap(), Point::Infinity);
        assert_eq!(e.scalar_mul(&p, 2).unwrap(), e.neg(&p));
        let q = pt(&e, qn(0, 0), qn(0, 12));
        assert_eq!(e.scalar_mul(&q, -3).unwrap(), Point::Infinity);

        // y^2 = x^3 - 2, P = (3, 5): 2P = (129/100, -383/1000)
        let e2 = Curve::from_ints(0, -2, -3).unwrap();
        let p = pt(&e2, qn(3, 0), qn(5, 0));
        let two_p = e2.scalar_mul(&p, 2).unwrap();
        assert_eq!(
            two_p,
            Point::Affine {
                x: QuadNum::from_rational(crate::quadratic::rational(129, 100), -3),
                y: QuadNum::from_rational(crate::quadratic::rational(-383, 1000), -3),
            }
        );
        assert_eq!(e2.add(&p, &p).unwrap(), two_p);
        assert_eq!(e2.add(&p, &e2.neg(&p)).unwrap(), Point::Infinity);
    }

    #[test]
    fn not_on_curve_is_rejected() {
        let e = e432();
        assert!(matches!(e.point(qn(1, 0), qn(1, 0)), Err(EllipticError::NotOnCurve { .. })));
        let bogus = Point::Affine { x: qn(1, 0), y: qn(1, 0) };
        assert!(e.add(&bogus, &Point::Infinity).is_err());
        assert!(e.scalar_mul(&bogus, 2).is_err());
    }

    #[test]
    fn division_polynomial_of_fermat_cubic() {
        // 3x^4 - 5184x
        let psi = e432().division_polynomial_3();
        assert_eq!(psi.coeffs(), &[qn(0, 0), qn(-5184, 0), qn(0, 0), qn(0, 0), qn(3, 0)]);
    }

    #[test]
    fn velu_rejects_bad_kernels() {
        let e = e432();
        assert_eq!(e.velu3(&Point::Infinity), Err(EllipticError::NotOrderThree));
        let e2 = Curve::from_ints(0, -2, -3).unwrap();
        let p = pt(&e2, qn(3, 0), qn(5, 0));
        assert_eq!(e2.velu3(&p), Err(EllipticError::NotOrderThree));
    }

    #[test]
    fn aut0_orders() {
        assert_eq!(Curve::from_ints(0, 11664, -3).unwrap().aut0_order(), 6);
        assert_eq!(Curve::from_ints(-4320, -109296, -3).unwrap().aut0_order(), 2);
        assert_eq!(Curve::from_ints(1, 0, -3).unwrap().aut0_order(), 4);
    }

    #[test]
    fn classification_examples() {
        let row2 = Curve::new(qn(2160, -2160), qn(-109296, 0)).unwrap();
        let row4 = Curve::from_ints(-4320, -109296, -3).unwrap();
        match classify_pair(&row4, &row2).unwrap() {
            Classification::IsomorphicOverField { u } => {
                assert_eq!(u.pow(4), QuadNum::zeta3());
                assert!(u.pow(6).is_one());
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            classify_pair(&row4, &row4).unwrap(),
            Classification::IsomorphicOverField { u: QuadNum::one(-3) }
        );
        let row1 = Curve::from_ints(0, 11664, -3).unwrap();
        assert!(matches!(classify_pair(&row1, &row4).unwrap(), Classification::DistinctJ { .. }));
    }

    #[test]
    fn twist_and_same_j() {
        // y^2 = x^3 - x and its twist by 2: A = -4, B = 0; 2 is not a square in Q(sqrt(-3))
        let e = Curve::from_ints(-1, 0, -3).unwrap();
        let t = Curve::from_ints(-4, 0, -3).unwrap();
        match classify_pair(&e, &t).unwrap() {
            Classification::QuadraticTwist { delta } => {
                assert!(delta.try_sqrt().is_none());
                assert_eq!(delta.square(), qn(4, 0));
            }
            other => panic!("unexpected {other:?}"),
        }
        // j = 0 curves y^2 = x^3 + 1 and y^2 = x^3 + 2 differ by a sextic twist only
        let a = Curve::from_ints(0, 1, -3).unwrap();
        let b = Curve::from_ints(0, 2, -3).unwrap();
        assert_eq!(
            classify_pair(&a, &b).unwrap(),
            Classification::SameJOnly { j: qn(0, 0) }
        );
    }
}
