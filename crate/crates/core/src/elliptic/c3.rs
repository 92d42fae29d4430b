//! The 3-isogeny table of the Fermat cubic and the resulting equation of C_3.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::hessian::{hessian, reduce_on_weierstrass, Cubic};
use super::{classify_pair, Classification, Curve, EllipticError, Point, TorsionReport};
use crate::poly::KPoly;
use crate::quadratic::{cmp_key, QuadNum};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsogenyRow {
    /// Kernel representative; the row stands for `(x : +-y : 1)`.
    pub kernel: Point,
    pub curve: Curve,
    pub equation: String,
    pub j: QuadNum,
    pub aut0_order: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairRow {
    /// 1-based row indices into the table.
    pub first: usize,
    pub second: usize,
    pub classification: Classification,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct C3Report {
    pub base: Curve,
    pub hessian: String,
    /// Whether the flexes cut out by the Hessian have exactly the
    /// x-coordinates of the 3-division polynomial roots.
    pub hessian_matches_division_polynomial: bool,
    pub torsion: TorsionReport,
    pub rows: Vec<IsogenyRow>,
    pub pairs: Vec<PairRow>,
    /// 1-based index of the row selected as C_3.
    pub selected_row: usize,
    pub c3: Curve,
    pub c3_equation: String,
}

/// Rows with `j = 0` first, then by kernel x-coordinate.
fn row_order(a: &IsogenyRow, b: &IsogenyRow) -> std::cmp::Ordering {
    (!a.j.is_zero())
        .cmp(&!b.j.is_zero())
        .then_with(|| cmp_key(a.kernel.x().unwrap(), b.kernel.x().unwrap()))
}

/// Flex x-coordinates from `Hess = 0` on the affine curve, where `y` is
/// eliminated through the curve equation.
fn hessian_flex_xs(e: &Curve) -> Option<Vec<QuadNum>> {
    let d = e.d();
    let (a, b) = (e.a().as_rational()?, e.b().as_rational()?);
    let h = hessian(&Cubic::weierstrass(a, b));
    let (h0, h1) = reduce_on_weierstrass(&h, a, b);
    // h0(x) + y h1(x) = 0 with y^2 = x^3 + ax + b; on the branch where h1
    // vanishes identically the flexes are the roots of h0.
    if !h1.is_empty() {
        return None;
    }
    let lifted = h0.into_iter().map(|c| QuadNum::from_rational(c, d)).collect();
    let mut xs = KPoly::new(lifted, d).roots().ok()?;
    xs.sort_by(cmp_key);
    Some(xs)
}

/// End-to-end: `y^2 = x^3 - 432`, its 3-torsion, the four Vélu codomains,
/// their j-invariants and pairwise relations, and the unique `j = 0` row.
pub fn c3_derivation() -> Result<C3Report, EllipticError> {
    let base = Curve::fermat_cubic();
    let (a, b) = (base.a().as_rational().unwrap(), base.b().as_rational().unwrap());
    let hess = hessian(&Cubic::weierstrass(a, b));
    let torsion = base.three_torsion()?;
    let hessian_matches = hessian_flex_xs(&base).as_ref() == Some(&torsion.x_roots);

    let mut rows = Vec::new();
    for p in torsion.representatives() {
        let curve = base.velu3(&p)?;
        rows.push(IsogenyRow {
            equation: curve.to_string(),
            j: curve.j_invariant(),
            aut0_order: curve.aut0_order(),
            kernel: p,
            curve,
        });
    }
    rows.sort_by(row_order);

    let mut pairs = Vec::new();
    for i in 0..rows.len() {
        for k in i + 1..rows.len() {
            pairs.push(PairRow {
                first: i + 1,
                second: k + 1,
                classification: classify_pair(&rows[i].curve, &rows[k].curve)?,
            });
        }
    }

    let j_zero: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].j.is_zero()).collect();
    let selected = match j_zero.as_slice() {
        [i] => *i,
        _ => return Err(EllipticError::NoUniqueJZero(j_zero.len())),
    };
    let c3 = rows[selected].curve.clone();
    Ok(C3Report {
        base,
        hessian: hess.to_string(),
        hessian_matches_division_polynomial: hessian_matches,
        torsion,
        pairs,
        selected_row: selected + 1,
        c3_equation: c3.to_string(),
        c3,
        rows,
    })
}

fn kernel_label(p: &Point) -> String {
    match p {
        Point::Affine { x, y } => format!("({x} : ±{y} : 1)"),
        Point::Infinity => p.to_string(),
    }
}

impl C3Report {
    /// The isogeny table as aligned text, one line per kernel.
    pub fn table(&self) -> String {
        let header = ["point of order 3", "isogenous curve", "j-invariant"];
        let cells: Vec<[String; 3]> = self
            .rows
            .iter()
            .map(|r| [kernel_label(&r.kernel), r.equation.clone(), r.j.to_string()])
            .collect();
        let mut widths = header.map(|h| h.chars().count());
        for row in &cells {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |cols: [&str; 3]| {
            let mut s = String::new();
            for (i, (c, w)) in cols.iter().zip(widths).enumerate() {
                let pad = w - c.chars().count();
                s.push_str(c);
                if i < 2 {
                    s.push_str(&" ".repeat(pad));
                    s.push_str(" | ");
                }
            }
            s.push('\n');
            s
        };
        let mut out = line(header);
        out.push_str(&format!(
            "{}-+-{}-+-{}\n",
            "-".repeat(widths[0]),
            "-".repeat(widths[1]),
            "-".repeat(widths[2])
        ));
        for row in &cells {
            out.push_str(&line([&row[0], &row[1], &row[2]]));
        }
        out
    }
}

impl fmt::Display for C3Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "base curve: {}", self.base)?;
        writeln!(f, "Hessian: {}", self.hessian)?;
        writeln!(f, "3-torsion points:")?;
        writeln!(f, "  {}", Point::Infinity)?;
        for p in &self.torsion.points {
            writeln!(f, "  {p}")?;
        }
        writeln!(f)?;
        write!(f, "{}", self.table())?;
        writeln!(f)?;
        for pair in &self.pairs {
            let rel = match &pair.classification {
                Classification::IsomorphicOverField { u } => format!("isomorphic, u = {u}"),
                Classification::QuadraticTwist { delta } => format!("quadratic twist, delta = {delta}"),
                Classification::SameJOnly { .. } => "same j only".to_string(),
                Classification::DistinctJ { .. } => "distinct j".to_string(),
            };
            writeln!(f, "rows {} and {}: {rel}", pair.first, pair.second)?;
        }
        let row = &self.rows[self.selected_row - 1];
        writeln!(f)?;
        writeln!(f, "Aut^0 orders: {}", self.rows.iter().map(|r| r.aut0_order.to_string()).collect::<Vec<_>>().join(", "))?;
        writeln!(f, "C_3: {} (row {}, Aut^0 of order {})", self.c3_equation, self.selected_row, row.aut0_order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hessian_flexes_agree_with_division_polynomial() {
        let report = c3_derivation().unwrap();
        assert!(report.hessian_matches_division_polynomial);
        assert_eq!(report.hessian, "24xy^2 - 31104xz^2");
    }

    #[test]
    fn table_text_has_four_rows() {
        let report = c3_derivation().unwrap();
        let text = report.table();
        assert_eq!(text.lines().count(), 6);
        assert!(text.contains("(0 : ±12√-3 : 1)"));
        assert!(text.contains("y^2 = x^3 + 2160(1-√-3)x - 109296"));
        assert!(text.contains("y^2 = x^3 - 4320x - 109296"));
        let widths: Vec<usize> = text
            .lines()
            .filter_map(|l| l.split(" | ").next().filter(|_| l.contains(" | ")))
            .map(|c| c.chars().count())
            .collect();
        assert_eq!(widths.len(), 5);
        assert!(widths.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn report_round_trips_through_json() {
        let report = c3_derivation().unwrap();
        let json = serde_json::to_string(&report).unwrap();
        let back: C3Report = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
    }
}
