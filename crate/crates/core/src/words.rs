//! Freely reduced words in the free group `F_2 = <a, b>`, the two
//! evaluation maps
//!
//! * `phi: F_2 -> H_n`, `a -> a_H`, `b -> b_H`,
//! * `psi: F_2 -> (Z/n)^2`, the exponent sums mod `n`,
//!
//! and the substitution endomorphisms `i_1: a <-> b` and
//! `i_2: a -> b^-1 a^-1, b -> b` that generate the `S_3` acting on the
//! Fermat curve.
//!
//! Kernel membership is decided by evaluating in the finite quotient. The
//! generating sets `<a^n, b^n, [a,b]^n>` and `<a^n, b^n, [a,b]>` quoted for
//! `ker phi` and `ker psi` are only checked one way (each generator evaluates
//! to the identity). Whether those angle brackets denote the subgroup or the
//! normal closure is left open; evaluation does not depend on the answer.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::heisenberg::{HeisenbergElement, HeisenbergError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Generator {
    A,
    B,
}

impl Generator {
    fn lower(self) -> char {
        match self {
            Generator::A => 'a',
            Generator::B => 'b',
        }
    }
}

/// One maximal run `g^e` of a reduced word, `e != 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Syllable {
    pub generator: Generator,
    pub exponent: i64,
}

/// A freely reduced word: neighbouring syllables use different generators
/// and no exponent is zero. The empty word is the identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    syllables: Vec<Syllable>,
}

impl Word {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn generator(g: Generator) -> Self {
        Self::power_of(g, 1)
    }

    pub fn a() -> Self {
        Self::generator(Generator::A)
    }

    pub fn b() -> Self {
        Self::generator(Generator::B)
    }

    pub fn power_of(g: Generator, exponent: i64) -> Self {
        Self::reduce([(g, exponent)])
    }

    /// Free reduction of an arbitrary sequence of signed letters.
    pub fn reduce<I>(letters: I) -> Self
    where
        I: IntoIterator<Item = (Generator, i64)>,
    {
        let mut out: Vec<Syllable> = Vec::new();
        for (generator, exponent) in letters {
            push_syllable(&mut out, generator, exponent);
        }
        Self { syllables: out }
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Number of letters, i.e. the sum of `|e|` over syllables.
    pub fn len(&self) -> u64 {
        self.syllables.iter().map(|s| s.exponent.unsigned_abs()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.is_identity()
    }

    /// Expansion into unit letters `(g, +-1)`.
    pub fn letters(&self) -> Vec<(Generator, i64)> {
        let mut out = Vec::with_capacity(self.len() as usize);
        for s in &self.syllables {
            let sign = s.exponent.signum();
            for _ in 0..s.exponent.unsigned_abs() {
                out.push((s.generator, sign));
            }
        }
        out
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.syllables.clone();
        for s in &other.syllables {
            push_syllable(&mut out, s.generator, s.exponent);
        }
        Word { syllables: out }
    }

    pub fn inverse(&self) -> Word {
        Word {
            syllables: self
                .syllables
                .iter()
                .rev()
                .map(|s| Syllable {
                    generator: s.generator,
                    exponent: -s.exponent,
                })
                .collect(),
        }
    }

    /// # Panics
    ///
    /// If a single-syllable power overflows `i64`; see [`Word::checked_pow`].
    pub fn pow(&self, k: i64) -> Word {
        self.checked_pow(k).expect("exponent overflow")
    }

    pub fn checked_pow(&self, k: i64) -> Option<Word> {
        if let [s] = self.syllables.as_slice() {
            return Some(Word::power_of(s.generator, s.exponent.checked_mul(k)?));
        }
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..k.unsigned_abs() {
            out = out.concat(&base);
        }
        Some(out)
    }

    /// `u v u^-1 v^-1`.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        u.concat(v).concat(&u.inverse()).concat(&v.inverse())
    }

    /// The basic commutator `[a, b] = a b a^-1 b^-1`.
    pub fn ab_commutator() -> Word {
        Word::commutator(&Word::a(), &Word::b())
    }

    /// `self^-1 w self`.
    pub fn conjugate(&self, w: &Word) -> Word {
        self.inverse().concat(w).concat(self)
    }
}

fn push_syllable(out: &mut Vec<Syllable>, generator: Generator, exponent: i64) {
    if exponent == 0 {
        return;
    }
    match out.last_mut() {
        Some(last) if last.generator == generator => {
            last.exponent += exponent;
            if last.exponent == 0 {
                out.pop();
            }
        }
        _ => out.push(Syllable {
            generator,
            exponent,
        }),
    }
}

impl fmt::Display for Word {
    /// CLI syntax: lowercase for positive, uppercase for inverse, caret for
    /// exponents other than one. The identity prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return write!(f, "1");
        }
        for s in &self.syllables {
            let c = s.generator.lower();
            let c = if s.exponent < 0 { c.to_ascii_uppercase() } else { c };
            match s.exponent.unsigned_abs() {
                1 => write!(f, "{c}")?,
                e => write!(f, "{c}^{e}")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordParseError {
    #[error("unexpected character {ch:?} at position {pos}")]
    UnexpectedChar { ch: char, pos: usize },
    #[error("missing exponent after '^' at position {pos}")]
    MissingExponent { pos: usize },
    #[error("exponent out of range at position {pos}")]
    ExponentOverflow { pos: usize },
    #[error("unbalanced parentheses")]
    Unbalanced,
    #[error("expanded word would exceed {MAX_PARSED_LETTERS} letters")]
    TooLong,
}

/// Cap on the letter count of a parsed word whose powers cannot be folded
/// into a single syllable.
pub const MAX_PARSED_LETTERS: u64 = 1 << 20;

/// Parses the CLI word syntax: letters `a b A B` (uppercase = inverse),
/// optional `^k` exponents (`k` may be negative), parenthesised groups with
/// exponents such as `(BA)^4`, and `1` or the empty string for the identity.
impl FromStr for Word {
    type Err = WordParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut parser = Parser { chars, pos: 0 };
        let w = parser.sequence()?;
        if parser.pos != parser.chars.len() {
            return Err(WordParseError::Unbalanced);
        }
        Ok(w)
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn sequence(&mut self) -> Result<Word, WordParseError> {
        let mut acc = Word::identity();
        while let Some(&c) = self.chars.get(self.pos) {
            let atom = match c {
                'a' | 'b' | 'A' | 'B' => {
                    self.pos += 1;
                    let g = if c.eq_ignore_ascii_case(&'a') {
                        Generator::A
                    } else {
                        Generator::B
                    };
                    let sign = if c.is_ascii_uppercase() { -1 } else { 1 };
                    Word::power_of(g, sign)
                }
                '1' => {
                    self.pos += 1;
                    Word::identity()
                }
                '(' => {
                    self.pos += 1;
                    let inner = self.sequence()?;
                    if self.chars.get(self.pos) != Some(&')') {
                        return Err(WordParseError::Unbalanced);
                    }
                    self.pos += 1;
                    inner
                }
                ')' => break,
                ch => return Err(WordParseError::UnexpectedChar { ch, pos: self.pos }),
            };
            let k = self.exponent()?;
            if atom.syllables.len() > 1 && atom.len().saturating_mul(k.unsigned_abs()) > MAX_PARSED_LETTERS {
                return Err(WordParseError::TooLong);
            }
            let power = atom
                .checked_pow(k)
                .ok_or(WordParseError::ExponentOverflow { pos: self.pos })?;
            acc = acc.concat(&power);
        }
        Ok(acc)
    }

    fn exponent(&mut self) -> Result<i64, WordParseError> {
        if self.chars.get(self.pos) != Some(&'^') {
            return Ok(1);
        }
        let caret = self.pos;
        self.pos += 1;
        let start = self.pos;
        if self.chars.get(self.pos) == Some(&'-') {
            self.pos += 1;
        }
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        if text.is_empty() || text == "-" {
            return Err(WordParseError::MissingExponent { pos: caret });
        }
        text.parse()
            .map_err(|_| WordParseError::ExponentOverflow { pos: start })
    }
}

/// Image of `w` under `phi: a -> a_H, b -> b_H`.
pub fn eval_phi(w: &Word, n: u64) -> Result<HeisenbergElement, HeisenbergError> {
    let a = HeisenbergElement::a(n)?;
    let b = HeisenbergElement::b(n)?;
    let mut acc = HeisenbergElement::identity(n)?;
    for s in w.syllables() {
        let g = match s.generator {
            Generator::A => a,
            Generator::B => b,
        };
        acc = acc.mul(&g.pow(s.exponent))?;
    }
    Ok(acc)
}

/// Exponent sums of `a` and `b`, reduced mod `n`.
pub fn eval_psi(w: &Word, n: u64) -> Result<(u64, u64), HeisenbergError> {
    if n == 0 {
        return Err(HeisenbergError::ZeroModulus);
    }
    let (mut sa, mut sb) = (0i128, 0i128);
    for s in w.syllables() {
        match s.generator {
            Generator::A => sa += s.exponent as i128,
            Generator::B => sb += s.exponent as i128,
        }
    }
    let m = n as i128;
    Ok((sa.rem_euclid(m) as u64, sb.rem_euclid(m) as u64))
}

pub fn in_ker_phi(w: &Word, n: u64) -> Result<bool, HeisenbergError> {
    Ok(eval_phi(w, n)?.is_identity())
}

pub fn in_ker_psi(w: &Word, n: u64) -> Result<bool, HeisenbergError> {
    Ok(eval_psi(w, n)? == (0, 0))
}

/// The listed generators `a^n, b^n, [a,b]^n` of `ker phi`.
pub fn ker_phi_generators(n: u64) -> [Word; 3] {
    let n = n as i64;
    [
        Word::a().pow(n),
        Word::b().pow(n),
        Word::ab_commutator().pow(n),
    ]
}

/// The listed generators `a^n, b^n, [a,b]` of `ker psi`.
pub fn ker_psi_generators(n: u64) -> [Word; 3] {
    let n = n as i64;
    [Word::a().pow(n), Word::b().pow(n), Word::ab_commutator()]
}

/// An endomorphism of `F_2`, given by the images of the generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Endo {
    pub image_of_a: Word,
    pub image_of_b: Word,
}

impl Endo {
    pub fn new(image_of_a: Word, image_of_b: Word) -> Self {
        Self {
            image_of_a,
            image_of_b,
        }
    }

    pub fn identity() -> Self {
        Self::new(Word::a(), Word::b())
    }

    /// `a <-> b`.
    pub fn i1() -> Self {
        Self::new(Word::b(), Word::a())
    }

    /// `a -> b^-1 a^-1`, `b -> b`.
    pub fn i2() -> Self {
        Self::new(Word::b().inverse().concat(&Word::a().inverse()), Word::b())
    }

    /// Looks up `id`, `i1`, `i2` and the compositions `i1i2`, `i2i1`,
    /// `i1i2i1` by name.
    pub fn by_name(name: &str) -> Option<Self> {
        s3_endos()
            .into_iter()
            .find(|(label, _)| *label == name)
            .map(|(_, e)| e)
    }

    pub fn apply(&self, w: &Word) -> Word {
        let mut out = Word::identity();
        for s in w.syllables() {
            let image = match s.generator {
                Generator::A => &self.image_of_a,
                Generator::B => &self.image_of_b,
            };
            out = out.concat(&image.pow(s.exponent));
        }
        out
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Endo) -> Endo {
        Endo::new(self.apply(&other.image_of_a), self.apply(&other.image_of_b))
    }
}

/// Six representatives in `Aut(F_2)` of the `S_3` generated by `i1`, `i2`.
pub fn s3_endos() -> Vec<(&'static str, Endo)> {
    let i1 = Endo::i1();
    let i2 = Endo::i2();
    vec![
        ("id", Endo::identity()),
        ("i1", i1.clone()),
        ("i2", i2.clone()),
        ("i1i2", i1.compose(&i2)),
        ("i2i1", i2.compose(&i1)),
        ("i1i2i1", i1.compose(&i2).compose(&i1)),
    ]
}

pub fn apply_endo(e: &Endo, w: &Word) -> Word {
    e.apply(w)
}

/// Whether `e` sends each listed generator `a^n, b^n, [a,b]^n` of `ker phi`
/// back into `ker phi`, i.e. whether the corresponding automorphism of the
/// Fermat curve lifts to `C_n`.
pub fn lifts_to_cn(e: &Endo, n: u64) -> Result<bool, HeisenbergError> {
    for g in ker_phi_generators(n) {
        if !in_ker_phi(&e.apply(&g), n)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Same test against `ker psi`: whether `e` induces an automorphism of `F_n`.
pub fn preserves_ker_psi(e: &Endo, n: u64) -> Result<bool, HeisenbergError> {
    for g in ker_psi_generators(n) {
        if !in_ker_psi(&e.apply(&g), n)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Witness for `e([a,b]) = T [a,b]^sign T^-1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugacyWitness {
    pub image: Word,
    pub conjugator: Word,
    pub sign: i8,
}

/// Looks for `T` with `e([a,b]) = T [a,b]^{+-1} T^-1` by scanning the
/// prefixes of the reduced image. Every prefix is tried, shortest first.
pub fn nielsen_commutator_check(e: &Endo) -> Option<ConjugacyWitness> {
    let image = e.apply(&Word::ab_commutator());
    let target = Word::ab_commutator();
    let target_inv = target.inverse();
    let letters = image.letters();
    for len in 0..=letters.len() {
        let t = Word::reduce(letters[..len].iter().copied());
        // T^-1 w T
        let core = t.conjugate(&image);
        let sign = if core == target {
            1
        } else if core == target_inv {
            -1
        } else {
            continue;
        };
        return Some(ConjugacyWitness {
            image,
            conjugator: t,
            sign,
        });
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn reduction_examples() {
        assert!(w("abBA").is_identity());
        assert_eq!(w("aaa"), Word::power_of(Generator::A, 3));
        assert_eq!(w("aaa").to_string(), "a^3");
        let c = Word::ab_commutator();
        assert_eq!(c.len(), 4);
        assert_eq!(c.to_string(), "abAB");
    }

    #[test]
    fn parser_accepts_exponents_and_groups() {
        assert_eq!(w("a^3bA^2"), Word::reduce([(Generator::A, 3), (Generator::B, 1), (Generator::A, -2)]));
        assert_eq!(w("a^-2"), w("AA"));
        assert_eq!(w("(BA)^2"), w("BABA"));
        assert_eq!(w("(ab)^-1"), w("BA"));
        assert!(w("1").is_identity());
        assert!(w("").is_identity());
        assert!(matches!("ac".parse::<Word>(), Err(WordParseError::UnexpectedChar { ch: 'c', pos: 1 })));
        assert!(matches!("a^".parse::<Word>(), Err(WordParseError::MissingExponent { .. })));
        assert_eq!("(ab".parse::<Word>(), Err(WordParseError::Unbalanced));
        assert_eq!("ab)".parse::<Word>(), Err(WordParseError::Unbalanced));
    }

    #[test]
    fn display_round_trips() {
        for s in ["abAB", "a^3bA^2", "B^7a^-0", "(ab)^5"] {
            let word = w(s);
            assert_eq!(w(&word.to_string()), word);
        }
    }

    #[test]
    fn phi_examples() {
        assert_eq!(eval_phi(&Word::ab_commutator(), 7).unwrap().triple(), (0, 0, 1));
        for n in 1..=9 {
            assert!(eval_phi(&Word::a().pow(n as i64), n).unwrap().is_identity());
        }
        assert_eq!(eval_phi(&w("(BA)^4"), 4).unwrap().triple(), (0, 0, 2));
    }

    #[test]
    fn psi_examples() {
        assert_eq!(eval_psi(&Word::ab_commutator(), 5).unwrap(), (0, 0));
        assert_eq!(eval_psi(&w("a^3b"), 3).unwrap(), (0, 1));
        assert_eq!(eval_psi(&w("A"), 4).unwrap(), (3, 0));
    }

    #[test]
    fn kernel_generators_evaluate_trivially() {
        for n in 2..=10 {
            for g in ker_phi_generators(n) {
                assert!(in_ker_phi(&g, n).unwrap());
            }
            for g in ker_psi_generators(n) {
                assert!(in_ker_psi(&g, n).unwrap());
            }
            let c = Word::ab_commutator();
            assert!(in_ker_psi(&c, n).unwrap());
            assert!(!in_ker_phi(&c, n).unwrap());
        }
        assert!(in_ker_phi(&Word::identity(), 3).unwrap());
        assert!(in_ker_psi(&Word::identity(), 3).unwrap());
    }

    #[test]
    fn endo_examples() {
        assert_eq!(Endo::i1().apply(&Word::a().pow(5)), Word::b().pow(5));
        assert_eq!(Endo::i2().apply(&Word::a()), w("BA"));
        assert_eq!(Endo::i2().apply(&Word::b()), w("b"));
        let ii = Endo::i2().compose(&Endo::i2());
        assert_eq!(ii.image_of_a, w("Bab"));
        assert_eq!(Endo::by_name("i2"), Some(Endo::i2()));
        assert_eq!(Endo::by_name("nope"), None);
    }

    #[test]
    fn lifting_criterion() {
        for n in 2..=12 {
            assert!(lifts_to_cn(&Endo::identity(), n).unwrap());
            assert!(lifts_to_cn(&Endo::i1(), n).unwrap());
            assert_eq!(lifts_to_cn(&Endo::i2(), n).unwrap(), n % 2 == 1, "n = {n}");
            for (name, e) in s3_endos() {
                assert!(preserves_ker_psi(&e, n).unwrap(), "{name} n = {n}");
            }
        }
    }

    #[test]
    fn nielsen_witnesses() {
        let id = nielsen_commutator_check(&Endo::identity()).unwrap();
        assert!(id.conjugator.is_identity());
        assert_eq!(id.sign, 1);

        let i1 = nielsen_commutator_check(&Endo::i1()).unwrap();
        assert!(i1.conjugator.is_identity());
        assert_eq!(i1.sign, -1);

        let i2 = nielsen_commutator_check(&Endo::i2()).unwrap();
        assert_eq!(i2.image, w("BAba"));
        assert_eq!(i2.conjugator, w("BA"));
        assert_eq!(i2.sign, -1);
        let rebuilt = i2
            .conjugator
            .concat(&Word::ab_commutator().pow(i2.sign as i64))
            .concat(&i2.conjugator.inverse());
        assert_eq!(rebuilt, i2.image);

        for (name, e) in s3_endos() {
            assert!(nielsen_commutator_check(&e).is_some(), "{name}");
        }
        // a -> a^2 is not an automorphism; its commutator image is not conjugate to [a,b]^{+-1}
        let square = Endo::new(w("aa"), w("b"));
        assert_eq!(nielsen_commutator_check(&square), None);
    }
}
