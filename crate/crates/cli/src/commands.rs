use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{ArgGroup, Args, Subcommand};
use heiscurve::covers::{self, Family, PointClass, RamificationData, Verdict};
use heiscurve::elliptic::{self, classify_pair, Classification, Curve, EllipticError, Point};
use heiscurve::heisenberg::{self, HeisenbergElement, HeisenbergError};
use heiscurve::quadratic::{QuadNum, RationalRepr};
use heiscurve::words::{self, Endo, Word};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::{CliError, Format, Settings};

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

fn math(e: impl ToString) -> CliError {
    CliError::Math(e.to_string())
}

fn group_error(e: HeisenbergError) -> CliError {
    match e {
        HeisenbergError::BoundExceeded { .. } | HeisenbergError::ZeroModulus => usage(e),
        HeisenbergError::ModulusMismatch { .. } => math(e),
    }
}

fn covers_error(e: covers::CoversError) -> CliError {
    use covers::CoversError::*;
    match e {
        NonIntegerGenus(_) => math(e),
        _ => usage(e),
    }
}

fn elliptic_error(e: EllipticError) -> CliError {
    match e {
        EllipticError::FieldMismatch(..) => usage(e),
        _ => math(e),
    }
}

/// JSON if requested, otherwise the text rendering.
fn emit<T: Serialize>(s: &Settings, value: &T, text: impl FnOnce() -> String) -> Result<String, CliError> {
    match s.format {
        Format::Json => serde_json::to_string_pretty(value).map_err(math),
        Format::Text => Ok(text()),
    }
}

fn join<T: ToString>(items: &[T], sep: &str) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep)
}

fn parse_list(text: &str) -> Result<Vec<u64>, CliError> {
    let t = text.trim().trim_start_matches('(').trim_end_matches(')');
    if t.is_empty() {
        return Ok(Vec::new());
    }
    t.split(',')
        .map(|p| p.trim().parse::<u64>().map_err(|_| usage(format!("bad number {p:?} in {text:?}"))))
        .collect()
}

// ---------------------------------------------------------------- group

#[derive(Subcommand, Debug)]
pub enum GroupOp {
    /// Product g h
    Mul { g: String, h: String },
    Inverse { g: String },
    /// g^k via the closed form
    Pow {
        g: String,
        #[arg(allow_negative_numbers = true)]
        k: i64,
    },
    Order { g: String },
    /// [g, h] = g h g^-1 h^-1
    Commutator { g: String, h: String },
    /// Every element with its order (n <= bound)
    Enumerate,
    /// Largest element order and the first element attaining it
    MaxOrder,
}

fn parse_element(text: &str, n: u64) -> Result<HeisenbergElement, CliError> {
    let t = text.split(" mod ").next().unwrap_or(text);
    let t = t.trim().trim_start_matches('(').trim_end_matches(')');
    let parts: Vec<i64> = t
        .split(',')
        .map(|p| p.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| usage(format!("expected an element x,y,z, got {text:?}")))?;
    match parts[..] {
        [x, y, z] => HeisenbergElement::new(n, x, y, z).map_err(group_error),
        _ => Err(usage(format!("expected three coordinates, got {text:?}"))),
    }
}

#[derive(Serialize)]
struct ElementOrder {
    element: HeisenbergElement,
    order: u64,
}

pub fn group(s: &Settings, op: GroupOp) -> Result<String, CliError> {
    let n = s.n()?;
    let el = |t: &str| parse_element(t, n);
    match op {
        GroupOp::Mul { g, h } => {
            let r = el(&g)?.mul(&el(&h)?).map_err(group_error)?;
            emit(s, &r, || r.to_string())
        }
        GroupOp::Inverse { g } => {
            let r = el(&g)?.inverse();
            emit(s, &r, || r.to_string())
        }
        GroupOp::Pow { g, k } => {
            let r = el(&g)?.pow(k);
            emit(s, &r, || r.to_string())
        }
        GroupOp::Order { g } => {
            let g = el(&g)?;
            let r = ElementOrder { element: g, order: g.order() };
            emit(s, &r, || r.order.to_string())
        }
        GroupOp::Commutator { g, h } => {
            let r = el(&g)?.commutator(&el(&h)?).map_err(group_error)?;
            emit(s, &r, || r.to_string())
        }
        GroupOp::Enumerate => {
            let all: Vec<ElementOrder> = heisenberg::enumerate(n, s.bound)
                .map_err(group_error)?
                .into_iter()
                .map(|g| ElementOrder { element: g, order: g.order() })
                .collect();
            emit(s, &all, || {
                all.iter().map(|e| format!("{}  order {}\n", e.element, e.order)).collect()
            })
        }
        GroupOp::MaxOrder => {
            let (order, element) = heisenberg::max_order(n, s.bound).map_err(group_error)?;
            let r = ElementOrder { element, order };
            emit(s, &r, || format!("{order} (attained by {element})"))
        }
    }
}

// ---------------------------------------------------------------- word

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("mode").args(["eval", "kernel", "lift", "nielsen", "apply"]).multiple(true)))]
pub struct WordArgs {
    /// Word in a, b, A = a^-1, B = b^-1 with optional ^k and (..)^k groups
    word: Option<String>,
    /// phi(w) in H_n and psi(w) in (Z/n)^2
    #[arg(long)]
    eval: bool,
    /// Membership of w in ker phi and ker psi
    #[arg(long)]
    kernel: bool,
    /// Whether ENDO lifts to C_n (id, i1, i2, i1i2, i2i1, i1i2i1, or IMG_A,IMG_B)
    #[arg(long, value_name = "ENDO")]
    lift: Option<String>,
    /// Nielsen witness: ENDO([a,b]) = T [a,b]^(+-1) T^-1
    #[arg(long, value_name = "ENDO")]
    nielsen: Option<String>,
    /// Image of the word under ENDO
    #[arg(long, value_name = "ENDO")]
    apply: Option<String>,
}

fn parse_word(text: &str) -> Result<Word, CliError> {
    text.parse().map_err(|e| usage(format!("bad word {text:?}: {e}")))
}

fn parse_endo(text: &str) -> Result<(String, Endo), CliError> {
    if let Some(e) = Endo::by_name(text) {
        return Ok((text.to_string(), e));
    }
    match text.split_once(',') {
        Some((a, b)) => {
            let e = Endo::new(parse_word(a)?, parse_word(b)?);
            Ok((format!("a -> {}, b -> {}", e.image_of_a, e.image_of_b), e))
        }
        None => Err(usage(format!(
            "unknown endomorphism {text:?}; use id, i1, i2, i1i2, i2i1, i1i2i1 or IMG_A,IMG_B"
        ))),
    }
}

#[derive(Serialize)]
struct WordReport {
    word: String,
    n: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    phi: Option<HeisenbergElement>,
    #[serde(skip_serializing_if = "Option::is_none")]
    psi: Option<(u64, u64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    in_ker_phi: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    in_ker_psi: Option<bool>,
}

#[derive(Serialize)]
struct LiftReport {
    endo: String,
    n: u64,
    image_of_a: String,
    image_of_b: String,
    preserves_ker_psi: bool,
    lifts: bool,
}

#[derive(Serialize)]
struct NielsenReport {
    endo: String,
    image: String,
    conjugator: Option<String>,
    sign: Option<i8>,
}

#[derive(Serialize)]
struct ApplyReport {
    endo: String,
    word: String,
    image: String,
}

pub fn word(s: &Settings, args: WordArgs) -> Result<String, CliError> {
    if let Some(name) = &args.lift {
        let n = s.n()?;
        let (label, e) = parse_endo(name)?;
        let r = LiftReport {
            n,
            image_of_a: e.image_of_a.to_string(),
            image_of_b: e.image_of_b.to_string(),
            preserves_ker_psi: words::preserves_ker_psi(&e, n).map_err(group_error)?,
            lifts: words::lifts_to_cn(&e, n).map_err(group_error)?,
            endo: label,
        };
        return emit(s, &r, || {
            let verdict = if r.lifts { "lifts" } else { "does not lift" };
            format!("{} {verdict} to C_{n}", r.endo)
        });
    }
    if let Some(name) = &args.nielsen {
        let (label, e) = parse_endo(name)?;
        let w = words::nielsen_commutator_check(&e);
        let r = NielsenReport {
            endo: label,
            image: e.apply(&Word::ab_commutator()).to_string(),
            conjugator: w.as_ref().map(|w| w.conjugator.to_string()),
            sign: w.as_ref().map(|w| w.sign),
        };
        return emit(s, &r, || match (&r.conjugator, r.sign) {
            (Some(t), Some(sign)) => format!(
                "{}([a,b]) = {} = T [a,b]^{} T^-1 with T = {t}",
                r.endo,
                r.image,
                if sign > 0 { "1" } else { "-1" }
            ),
            _ => format!("{}([a,b]) = {} is not conjugate to [a,b]^(+-1)", r.endo, r.image),
        });
    }
    let text = args.word.as_deref().ok_or_else(|| usage("missing WORD"))?;
    let w = parse_word(text)?;
    if let Some(name) = &args.apply {
        let (label, e) = parse_endo(name)?;
        let r = ApplyReport { endo: label, word: w.to_string(), image: e.apply(&w).to_string() };
        return emit(s, &r, || r.image.clone());
    }
    let n = s.n()?;
    let both = !args.eval && !args.kernel;
    let mut r = WordReport { word: w.to_string(), n, phi: None, psi: None, in_ker_phi: None, in_ker_psi: None };
    if args.eval || both {
        r.phi = Some(words::eval_phi(&w, n).map_err(group_error)?);
        r.psi = Some(words::eval_psi(&w, n).map_err(group_error)?);
    }
    if args.kernel || both {
        r.in_ker_phi = Some(words::in_ker_phi(&w, n).map_err(group_error)?);
        r.in_ker_psi = Some(words::in_ker_psi(&w, n).map_err(group_error)?);
    }
    emit(s, &r, || {
        let mut out = String::new();
        if let (Some(phi), Some(psi)) = (&r.phi, &r.psi) {
            let _ = writeln!(out, "phi({}) = {phi}", r.word);
            let _ = writeln!(out, "psi({}) = ({},{}) mod {n}", r.word, psi.0, psi.1);
        }
        if let (Some(kphi), Some(kpsi)) = (r.in_ker_phi, r.in_ker_psi) {
            let _ = writeln!(out, "in ker phi: {kphi}");
            let _ = writeln!(out, "in ker psi: {kpsi}");
        }
        out
    })
}

// ---------------------------------------------------------------- genus

#[derive(Args, Debug)]
#[command(group(
    ArgGroup::new("mode")
        .required(true)
        .args(["fermat", "heisenberg", "rh", "cover", "stabilizers", "modular", "bounds", "omega", "fermat_aut"])
))]
pub struct GenusArgs {
    /// Genus (n-1)(n-2)/2 of F_n
    #[arg(long, value_name = "N")]
    fermat: Option<u64>,
    /// Genus of the Heisenberg curve C_n
    #[arg(long, value_name = "N")]
    heisenberg: Option<u64>,
    /// Riemann-Hurwitz for a Galois cover given by --base, --order, --indices
    #[arg(long, requires = "order")]
    rh: bool,
    #[arg(long, default_value_t = 0)]
    base: u64,
    #[arg(long)]
    order: Option<u64>,
    /// Ramification indices, comma separated
    #[arg(long, default_value = "")]
    indices: String,
    /// Ramification of C_n -> F_n
    #[arg(long, value_name = "N")]
    cover: Option<u64>,
    /// Stabilizers of the cusps P_k, Q_k, Q'_k of F_n
    #[arg(long, value_name = "N")]
    stabilizers: Option<u64>,
    /// Order of the modular automorphism group of C_n
    #[arg(long, value_name = "N")]
    modular: Option<u64>,
    /// B3, B4 and the bound 2 - 5/n on m (even n >= 4)
    #[arg(long, value_name = "N")]
    bounds: Option<u64>,
    /// Omega = -2 + sum (1 - 1/e) for periods, comma separated, inf allowed
    #[arg(long, value_name = "PERIODS")]
    omega: Option<String>,
    /// The group (Z/n)^2 x| S3 acting on F_n, with conjugation matrices
    #[arg(long, value_name = "N")]
    fermat_aut: Option<u64>,
}

#[derive(Serialize)]
struct GenusReport {
    curve: &'static str,
    n: u64,
    genus: u64,
}

#[derive(Serialize)]
struct RhReport {
    data: RamificationData,
    genus: u64,
}

#[derive(Serialize)]
struct BoundsReport {
    n: u64,
    b3: RationalRepr,
    b4: RationalRepr,
    m_bound: RationalRepr,
}

#[derive(Serialize)]
struct OmegaReport {
    periods: Vec<covers::Period>,
    omega: RationalRepr,
}

#[derive(Serialize)]
struct ModularReport {
    #[serde(flatten)]
    order: covers::ModularAutOrder,
    structure: String,
}

#[derive(Serialize)]
struct FermatAutReport {
    n: u64,
    order: u64,
    axioms_checked: bool,
    symmetries: Vec<covers::Symmetry>,
}

fn rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        r.to_string()
    }
}

pub fn genus(s: &Settings, a: GenusArgs) -> Result<String, CliError> {
    if let Some(n) = a.fermat {
        let r = GenusReport { curve: "fermat", n, genus: covers::fermat_genus(n).map_err(covers_error)? };
        return emit(s, &r, || r.genus.to_string());
    }
    if let Some(n) = a.heisenberg {
        let r = GenusReport { curve: "heisenberg", n, genus: covers::heisenberg_genus(n).map_err(covers_error)? };
        return emit(s, &r, || r.genus.to_string());
    }
    if a.rh {
        let order = a.order.ok_or_else(|| usage("--rh needs --order"))?;
        let data = RamificationData::new(a.base, order, parse_list(&a.indices)?).map_err(usage)?;
        let genus = covers::rh_genus(&data).map_err(covers_error)?;
        let r = RhReport { data, genus };
        return emit(s, &r, || genus.to_string());
    }
    if let Some(n) = a.cover {
        let r = covers::cn_cover_ramification(n).map_err(covers_error)?;
        return emit(s, &r, || {
            if r.unramified {
                format!("C_{n} -> F_{n} is unramified")
            } else {
                format!(
                    "C_{n} -> F_{n}: {} cusps {} of F_{n} ramify with index {}, {} point(s) above each, {} in total",
                    r.branch_points,
                    join(&r.cusp_labels, " "),
                    r.index,
                    r.points_above_each,
                    r.ramified_points
                )
            }
        });
    }
    if let Some(n) = a.stabilizers {
        let mut all = Vec::new();
        for family in [Family::P, Family::Q, Family::QPrime] {
            for k in 0..n {
                let p = PointClass::new(family, k, n).map_err(covers_error)?;
                all.push(covers::stabilizer(p, n).map_err(covers_error)?);
            }
        }
        return emit(s, &all, || {
            all.iter()
                .map(|r| {
                    format!(
                        "{}_{}: stabilizer <sigma_{{{},{}}}> of order {}, orbit of size {}\n",
                        r.point.family, r.point.k, r.generator.0, r.generator.1, r.stabilizer_order, r.orbit_size
                    )
                })
                .collect()
        });
    }
    if let Some(n) = a.modular {
        let order = covers::modular_aut_order(n).map_err(covers_error)?;
        let r = ModularReport { structure: order.structure(), order };
        return emit(s, &r, || format!("{}\n{}", r.order.order, r.structure));
    }
    if let Some(n) = a.bounds {
        let (b3, b4, m) = (
            covers::b3(n).map_err(covers_error)?,
            covers::b4(n).map_err(covers_error)?,
            covers::m_bound(n).map_err(covers_error)?,
        );
        let r = BoundsReport { n, b3: (&b3).into(), b4: (&b4).into(), m_bound: (&m).into() };
        return emit(s, &r, || format!("B3 = {}\nB4 = {}\nm <= {}", rat(&b3), rat(&b4), rat(&m)));
    }
    if let Some(text) = &a.omega {
        let periods: Vec<covers::Period> = if text.trim().is_empty() {
            Vec::new()
        } else {
            text.split(',').map(str::parse).collect::<Result<_, _>>().map_err(usage)?
        };
        let omega = covers::omega(&periods);
        let r = OmegaReport { periods, omega: (&omega).into() };
        return emit(s, &r, || rat(&omega));
    }
    if let Some(n) = a.fermat_aut {
        let g = covers::build_fermat_aut(n, s.bound).map_err(covers_error)?;
        let r = FermatAutReport {
            n,
            order: g.order(),
            axioms_checked: g.axioms_checked(),
            symmetries: g.symmetries().to_vec(),
        };
        return emit(s, &r, || {
            let mut out = format!(
                "order {} (group axioms {})\n",
                r.order,
                if r.axioms_checked { "checked on all triples" } else { "not checked exhaustively" }
            );
            for sym in &r.symmetries {
                let [[m00, m01], [m10, m11]] = sym.matrix;
                let _ = writeln!(
                    out,
                    "{:<8} perm {:?}  sigma_(i,j) -> sigma_((i,j)M), M = [[{m00},{m01}],[{m10},{m11}]] mod {n}",
                    sym.mobius, sym.perm
                );
            }
            out
        });
    }
    Err(usage("choose one of the genus modes"))
}

// ---------------------------------------------------------------- audit

#[derive(Args, Debug)]
pub struct AuditArgs {
    /// Largest n to audit
    #[arg(long, default_value_t = 12)]
    max_n: u64,
    /// JSON list of {claim, n, consistent}; exit 0 when the verdicts match it
    #[arg(long, value_name = "FILE")]
    expected: Option<PathBuf>,
}

#[derive(Deserialize)]
struct ExpectedVerdict {
    claim: String,
    n: u64,
    consistent: bool,
}

const MAX_AUDIT_N: u64 = 10_000;

fn audit_table(verdicts: &[Verdict]) -> String {
    let header = ["claim", "n", "signature", "order", "expected g", "RH g", "verdict"];
    let rows: Vec<[String; 7]> = verdicts
        .iter()
        .map(|v| {
            [
                v.claim.clone(),
                v.n.to_string(),
                format!("({})", join(&v.signature, ",")),
                v.order.to_string(),
                v.expected_genus.to_string(),
                if v.computed_genus.den == 1.into() {
                    v.computed_genus.num.to_string()
                } else {
                    format!("{}/{}", v.computed_genus.num, v.computed_genus.den)
                },
                if v.consistent { "consistent" } else { "INCONSISTENT" }.to_string(),
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for r in &rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells.iter().zip(widths).map(|(c, w)| format!("{c:<w$}")).collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    for r in &rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out
}

pub fn audit(s: &Settings, a: AuditArgs) -> Result<String, CliError> {
    if a.max_n > MAX_AUDIT_N {
        return Err(usage(format!("--max-n is limited to {MAX_AUDIT_N}")));
    }
    let verdicts = covers::audit(a.max_n).map_err(covers_error)?;
    let inconsistent = verdicts.iter().filter(|v| !v.consistent).count();
    let mut out = emit(s, &verdicts, || {
        format!("{}\n{inconsistent} of {} verdicts inconsistent\n", audit_table(&verdicts), verdicts.len())
    })?;
    if !out.ends_with('\n') {
        out.push('\n');
    }
    let Some(path) = &a.expected else {
        return if inconsistent == 0 { Ok(out) } else { Err(CliError::Audit(out)) };
    };
    let raw = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let expected: Vec<ExpectedVerdict> =
        serde_json::from_str(&raw).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let mut mismatches = Vec::new();
    for v in &verdicts {
        match expected.iter().find(|e| e.claim == v.claim && e.n == v.n) {
            Some(e) if e.consistent == v.consistent => {}
            Some(e) => mismatches.push(format!(
                "{} n={}: expected {}, got {}",
                v.claim,
                v.n,
                e.consistent,
                v.consistent
            )),
            None if !v.consistent => mismatches.push(format!("{} n={}: unexpected inconsistency", v.claim, v.n)),
            None => {}
        }
    }
    if mismatches.is_empty() {
        Ok(out)
    } else {
        for m in &mismatches {
            eprintln!("audit mismatch: {m}");
        }
        Err(CliError::Audit(out))
    }
}

// ---------------------------------------------------------------- curves

#[derive(Args, Debug)]
pub struct CurveArgs {
    /// Coefficient A, e.g. -4320, 2160-2160s, 2160(1-√-3); s stands for sqrt(d)
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    a: String,
    /// Coefficient B
    #[arg(long, default_value = "-432", allow_hyphen_values = true)]
    b: String,
}

fn field(s: &Settings, text: &str) -> Result<QuadNum, CliError> {
    QuadNum::parse(text, s.d).map_err(|e| usage(format!("bad field element: {e}")))
}

fn curve(s: &Settings, a: &str, b: &str) -> Result<Curve, CliError> {
    Curve::new(field(s, a)?, field(s, b)?).map_err(elliptic_error)
}

fn point(s: &Settings, e: &Curve, x: &str, y: &str) -> Result<Point, CliError> {
    e.point(field(s, x)?, field(s, y)?).map_err(elliptic_error)
}

pub fn c3(s: &Settings) -> Result<String, CliError> {
    if s.d != -3 {
        return Err(usage("c3 works over Q(sqrt(-3)); drop --d"));
    }
    let report = elliptic::c3_derivation().map_err(elliptic_error)?;
    emit(s, &report, || report.to_string())
}

pub fn torsion(s: &Settings, a: CurveArgs) -> Result<String, CliError> {
    let e = curve(s, &a.a, &a.b)?;
    let r = e.three_torsion().map_err(elliptic_error)?;
    emit(s, &r, || {
        let mut out = format!("{e}\n");
        let _ = writeln!(out, "x-roots of the 3-division polynomial: {}", join(&r.x_roots, ", "));
        for p in &r.points {
            let _ = writeln!(out, "  {p}");
        }
        let _ = writeln!(
            out,
            "{} affine points of order 3 over the field; {} x-roots with y outside it",
            r.points.len(),
            r.x_roots_without_y
        );
        out
    })
}

#[derive(Args, Debug)]
pub struct IsogenyArgs {
    #[command(flatten)]
    curve: CurveArgs,
    /// Kernel point x-coordinate; without it, every kernel is listed
    #[arg(long, requires = "y", allow_hyphen_values = true)]
    x: Option<String>,
    #[arg(long, requires = "x", allow_hyphen_values = true)]
    y: Option<String>,
    /// Also map the point (QX, QY) through the isogeny
    #[arg(long, requires_all = ["qy", "x"], allow_hyphen_values = true)]
    qx: Option<String>,
    #[arg(long, requires = "qx", allow_hyphen_values = true)]
    qy: Option<String>,
}

#[derive(Serialize)]
struct IsogenyReport {
    kernel: Point,
    codomain: Curve,
    equation: String,
    j: QuadNum,
    #[serde(skip_serializing_if = "Option::is_none")]
    image: Option<(Point, Point)>,
}

pub fn isogeny(s: &Settings, a: IsogenyArgs) -> Result<String, CliError> {
    let e = curve(s, &a.curve.a, &a.curve.b)?;
    let kernels = match (&a.x, &a.y) {
        (Some(x), Some(y)) => vec![point(s, &e, x, y)?],
        _ => e.three_torsion().map_err(elliptic_error)?.representatives(),
    };
    let mut reports = Vec::new();
    for k in kernels {
        let codomain = e.velu3(&k).map_err(elliptic_error)?;
        let image = match (&a.qx, &a.qy) {
            (Some(qx), Some(qy)) => {
                let q = point(s, &e, qx, qy)?;
                let fq = e.velu3_map(&k, &q).map_err(elliptic_error)?;
                Some((q, fq))
            }
            _ => None,
        };
        reports.push(IsogenyReport {
            equation: codomain.to_string(),
            j: codomain.j_invariant(),
            kernel: k,
            codomain,
            image,
        });
    }
    emit(s, &reports, || {
        let mut out = String::new();
        for r in &reports {
            let _ = writeln!(out, "kernel <{}>: {}  (j = {})", r.kernel, r.equation, r.j);
            if let Some((q, fq)) = &r.image {
                let _ = writeln!(out, "  {q} -> {fq}");
            }
        }
        out
    })
}

#[derive(Args, Debug)]
pub struct JArgs {
    #[command(flatten)]
    curve: CurveArgs,
    /// A second curve to classify against the first
    #[arg(long, requires = "b2", allow_hyphen_values = true)]
    a2: Option<String>,
    #[arg(long, requires = "a2", allow_hyphen_values = true)]
    b2: Option<String>,
}

#[derive(Serialize)]
struct JReport {
    curve: Curve,
    equation: String,
    j: QuadNum,
    aut0_order: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    other: Option<Box<JReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    classification: Option<Classification>,
}

fn j_report(e: Curve) -> JReport {
    JReport {
        equation: e.to_string(),
        j: e.j_invariant(),
        aut0_order: e.aut0_order(),
        curve: e,
        other: None,
        classification: None,
    }
}

pub fn j(s: &Settings, a: JArgs) -> Result<String, CliError> {
    let e1 = curve(s, &a.curve.a, &a.curve.b)?;
    let mut r = j_report(e1.clone());
    if let (Some(a2), Some(b2)) = (&a.a2, &a.b2) {
        let e2 = curve(s, a2, b2)?;
        r.classification = Some(classify_pair(&e1, &e2).map_err(elliptic_error)?);
        r.other = Some(Box::new(j_report(e2)));
    }
    emit(s, &r, || {
        let mut out = format!("{}\nj = {}\nAut^0 of order {}\n", r.equation, r.j, r.aut0_order);
        if let (Some(o), Some(c)) = (&r.other, &r.classification) {
            let _ = writeln!(out, "{}\nj = {}\nAut^0 of order {}", o.equation, o.j, o.aut0_order);
            let rel = match c {
                Classification::IsomorphicOverField { u } => format!("isomorphic over the field, u = {u}"),
                Classification::QuadraticTwist { delta } => format!("quadratic twists, delta = {delta}"),
                Classification::SameJOnly { .. } => "same j-invariant, not isomorphic or twisted over the field".into(),
                Classification::DistinctJ { .. } => "distinct j-invariants".into(),
            };
            let _ = writeln!(out, "{rel}");
        }
        out
    })
}

