//! Ternary forms over `Q` and the Hessian of a plane cubic.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::quadratic::integer;

/// Exponent vector `[i, j, k]` of `X^i Y^j Z^k`.
pub type Monomial = [u32; 3];

/// A polynomial in `X, Y, Z` with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Form {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Form {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigRational)>>(terms: I) -> Self {
        let mut f = Self::zero();
        for (m, c) in terms {
            f.add_term(m, c);
        }
        f
    }

    /// Shorthand for integer coefficients.
    pub fn from_int_terms(terms: &[(Monomial, i64)]) -> Self {
        Self::from_terms(terms.iter().map(|&(m, c)| (m, integer(c))))
    }

    pub fn var(i: usize) -> Self {
        let mut m = [0; 3];
        m[i] = 1;
        Self::from_terms([(m, BigRational::one())])
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigRational> {
        &self.terms
    }

    pub fn coeff(&self, m: Monomial) -> BigRational {
        self.terms.get(&m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree if homogeneous and nonzero.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|m| m.iter().sum::<u32>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn add(&self, other: &Form) -> Form {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Form) -> Form {
        self.add(&other.scale(&integer(-1)))
    }

    pub fn scale(&self, r: &BigRational) -> Form {
        Form::from_terms(self.terms.iter().map(|(m, c)| (*m, c * r)))
    }

    pub fn mul(&self, other: &Form) -> Form {
        let mut out = Form::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term([m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2]], c1 * c2);
            }
        }
        out
    }

    /// Partial derivative in variable `i` (0 = X, 1 = Y, 2 = Z).
    pub fn partial(&self, i: usize) -> Form {
        let mut out = Form::zero();
        for (m, c) in &self.terms {
            if m[i] == 0 {
                continue;
            }
            let mut m2 = *m;
            m2[i] -= 1;
            out.add_term(m2, c * integer(m[i] as i64));
        }
        out
    }

    pub fn eval(&self, point: &[BigRational; 3]) -> BigRational {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in point.iter().zip(m.iter()) {
                for _ in 0..e {
                    t *= v;
                }
            }
            acc += t;
        }
        acc
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // descending monomial order reads naturally: x^3 before y^2z
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let a = c.abs();
            let mono: String = ["x", "y", "z"]
                .iter()
                .zip(m.iter())
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| if e == 1 { v.to_string() } else { format!("{v}^{e}") })
                .collect();
            if !a.is_one() || mono.is_empty() {
                write!(f, "{a}")?;
            }
            write!(f, "{mono}")?;
        }
        Ok(())
    }
}

/// A nonzero homogeneous cubic form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cubic(Form);

impl Cubic {
    pub fn new(form: Form) -> Option<Self> {
        (form.homogeneous_degree() == Some(3)).then_some(Cubic(form))
    }

    pub fn form(&self) -> &Form {
        &self.0
    }

    /// Projective Weierstrass cubic `y^2 z - x^3 - a x z^2 - b z^3` for a
    /// curve with rational coefficients.
    pub fn weierstrass(a: &BigRational, b: &BigRational) -> Self {
        let f = Form::from_terms([
            ([0, 2, 1], BigRational::one()),
            ([3, 0, 0], -BigRational::one()),
            ([1, 0, 2], -a.clone()),
            ([0, 0, 3], -b.clone()),
        ]);
        Cubic(f)
    }
}

/// Determinant of the matrix of second partials, expanded exactly.
///
/// For a cubic the entries are linear forms and the result is again a cubic
/// (or zero, for cones).
pub fn hessian(c: &Cubic) -> Form {
    let f = c.form();
    let h: Vec<Vec<Form>> = (0..3)
        .map(|i| (0..3).map(|j| f.partial(i).partial(j)).collect())
        .collect();
    det3(&h)
}

fn det3(m: &[Vec<Form>]) -> Form {
    let minor = |r1: usize, r2: usize, c1: usize, c2: usize| {
        m[r1][c1].mul(&m[r2][c2]).sub(&m[r1][c2].mul(&m[r2][c1]))
    };
    m[0][0]
        .mul(&minor(1, 2, 1, 2))
        .sub(&m[0][1].mul(&minor(1, 2, 0, 2)))
        .add(&m[0][2].mul(&minor(1, 2, 0, 1)))
}

/// Restricts a form to the affine chart `z = 1` of `y^2 = x^3 + a x + b` and
/// eliminates `y^2`, returning `(h0, h1)` with `form = h0(x) + h1(x) y` on
/// the curve. Coefficients ascend in `x`.
pub fn reduce_on_weierstrass(
    form: &Form,
    a: &BigRational,
    b: &BigRational,
) -> (Vec<BigRational>, Vec<BigRational>) {
    // y^2 -> x^3 + a x + b
    let rhs = [b.clone(), a.clone(), BigRational::zero(), BigRational::one()];
    let mut parts: [Vec<BigRational>; 2] = [Vec::new(), Vec::new()];
    for (m, c) in form.terms() {
        let mut poly = vec![BigRational::zero(); m[0] as usize + 1];
        poly[m[0] as usize] = c.clone();
        for _ in 0..m[1] / 2 {
            poly = poly_mul(&poly, &rhs);
        }
        let slot = &mut parts[(m[1] % 2) as usize];
        if slot.len() < poly.len() {
            slot.resize(poly.len(), BigRational::zero());
        }
        for (i, v) in poly.into_iter().enumerate() {
            slot[i] += v;
        }
    }
    for p in parts.iter_mut() {
        while p.last().is_some_and(|c| c.is_zero()) {
            p.pop();
        }
    }
    let [h0, h1] = parts;
    (h0, h1)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}
