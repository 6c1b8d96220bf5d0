//! Enveloping algebra of `sl₂` in the PBW basis `Fᵃ Hᵇ Eᶜ`.
//!
//! Text grammar (whitespace is ignored):
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := int ['/' int] | 'i' | ('E'|'F'|'H') ['^' int] | '(' expr ')' ['^' int]
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::QComplex;
use crate::error::{Error, Result};

pub const MAX_EXPONENT: u32 = 32;
pub const MAX_DEPTH: usize = 64;
pub const MAX_TERMS: usize = 10_000;
pub const MAX_DEGREE: u32 = 64;
const MAX_INPUT: usize = 1 << 16;
const MAX_DIGITS: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    E,
    F,
    H,
}

/// The PBW monomial `Fᶠ Hʰ Eᵉ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Pbw {
    pub f: u32,
    pub h: u32,
    pub e: u32,
}

impl Pbw {
    pub fn degree(&self) -> u32 {
        self.f + self.h + self.e
    }
}

/// A normal-ordered element of `U(sl₂)` with exact complex-rational coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct UeaElement {
    terms: BTreeMap<Pbw, QComplex>,
}

fn binomial(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

fn qint(n: impl Into<BigInt>) -> QComplex {
    Complex::new(BigRational::from_integer(n.into()), BigRational::zero())
}

impl UeaElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(QComplex::one())
    }

    pub fn scalar(c: QComplex) -> Self {
        let mut u = Self::zero();
        u.push(Pbw::default(), c);
        u
    }

    pub fn generator(g: Generator) -> Self {
        let w = match g {
            Generator::E => Pbw { e: 1, ..Pbw::default() },
            Generator::F => Pbw { f: 1, ..Pbw::default() },
            Generator::H => Pbw { h: 1, ..Pbw::default() },
        };
        let mut u = Self::zero();
        u.push(w, QComplex::one());
        u
    }

    /// `EF + FE + H²/2`.
    pub fn casimir() -> Self {
        "E*F + F*E + 1/2*H^2".parse().expect("casimir literal parses")
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Pbw, &QComplex)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Pbw::degree).max().unwrap_or(0)
    }

    fn push(&mut self, w: Pbw, c: QComplex) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(w).or_insert_with(QComplex::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.remove(&w);
        }
    }

    fn check_size(&self) -> Result<()> {
        if self.terms.len() > MAX_TERMS {
            return Err(Error::InvalidElement(format!("more than {MAX_TERMS} PBW terms")));
        }
        if self.degree() > MAX_DEGREE {
            return Err(Error::InvalidElement(format!("PBW degree exceeds {MAX_DEGREE}")));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.push(*w, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        UeaElement { terms: self.terms.iter().map(|(w, c)| (*w, -c.clone())).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &QComplex) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.push(*w, c.clone() * s.clone());
        }
        out
    }

    /// `self · X` rewritten into PBW order with `HF = FH − 2F`, `EF = FE + H`,
    /// `EH = HE − 2E`.
    fn mul_generator(&self, g: Generator) -> Self {
        let mut out = Self::zero();
        for (&w, c) in &self.terms {
            let Pbw { f: a, h: b, e: cc } = w;
            match g {
                Generator::E => out.push(Pbw { e: cc + 1, ..w }, c.clone()),
                Generator::H => {
                    // Eᶜ H = (H − 2c) Eᶜ
                    out.push(Pbw { h: b + 1, ..w }, c.clone());
                    out.push(w, c.clone() * qint(-2 * i64::from(cc)));
                }
                Generator::F => {
                    // Eᶜ F = F Eᶜ + c H Eᶜ⁻¹ − c(c−1) Eᶜ⁻¹ and Hᵇ F = F (H − 2)ᵇ
                    for i in 0..=b {
                        let coef = binomial(b, i) * BigInt::from(-2).pow(b - i);
                        out.push(Pbw { f: a + 1, h: i, e: cc }, c.clone() * qint(coef));
                    }
                    if cc > 0 {
                        let ci = i64::from(cc);
                        out.push(Pbw { f: a, h: b + 1, e: cc - 1 }, c.clone() * qint(ci));
                        out.push(Pbw { f: a, h: b, e: cc - 1 }, c.clone() * qint(-ci * (ci - 1)));
                    }
                }
            }
        }
        out
    }

    /// Product in `U(sl₂)`, bounded by [`MAX_TERMS`] and [`MAX_DEGREE`].
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.degree() + other.degree() > MAX_DEGREE {
            return Err(Error::InvalidElement(format!("PBW degree exceeds {MAX_DEGREE}")));
        }
        let mut out = Self::zero();
        for (w, c) in &other.terms {
            let mut acc = self.scale(c);
            for (g, n) in [(Generator::F, w.f), (Generator::H, w.h), (Generator::E, w.e)] {
                for _ in 0..n {
                    acc = acc.mul_generator(g);
                    acc.check_size()?;
                }
            }
            out = out.add(&acc);
            out.check_size()?;
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        if n > MAX_EXPONENT {
            return Err(Error::InvalidElement(format!("exponent {n} exceeds {MAX_EXPONENT}")));
        }
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// `XY − YX`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(other)?.sub(&other.mul(self)?))
    }

    /// Commutes with `E`, `F` and `H`, checked exactly.
    pub fn is_central(&self) -> Result<bool> {
        for g in [Generator::E, Generator::F, Generator::H] {
            if !self.bracket(&Self::generator(g))?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn coefficient(&self, w: Pbw) -> QComplex {
        self.terms.get(&w).cloned().unwrap_or_else(QComplex::zero)
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn fmt_monomial(w: &Pbw) -> String {
    let mut parts = Vec::new();
    for (name, n) in [("F", w.f), ("H", w.h), ("E", w.e)] {
        match n {
            0 => {}
            1 => parts.push(name.to_string()),
            _ => parts.push(format!("{name}^{n}")),
        }
    }
    parts.join("*")
}

impl fmt::Display for UeaElement {
    /// Canonical text form, accepted back by the parser.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (w, c)) in self.terms.iter().rev().enumerate() {
            let mono = fmt_monomial(w);
            let (negative, coef) = if c.im.is_zero() {
                (c.re.is_negative(), fmt_rational(&c.re.abs()))
            } else if c.re.is_zero() {
                let m = c.im.abs();
                let s = if m.is_one() { "i".to_string() } else { format!("{}*i", fmt_rational(&m)) };
                (c.im.is_negative(), s)
            } else {
                let sign = if c.im.is_negative() { "-" } else { "+" };
                (false, format!("({} {sign} {}*i)", fmt_rational(&c.re), fmt_rational(&c.im.abs())))
            };
            match (idx, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            match (coef == "1", mono.is_empty()) {
                (true, false) => write!(f, "{mono}")?,
                (_, true) => write!(f, "{coef}")?,
                (false, false) => write!(f, "{coef}*{mono}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for UeaElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.len() > MAX_INPUT {
            return Err(Error::Parse { pos: MAX_INPUT, msg: "input too long".into() });
        }
        let mut p = Parser { s: s.as_bytes(), pos: 0, depth: 0 };
        let v = p.expr()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(v)
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    depth: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.into() }
    }

    fn wrap(&self, e: Error) -> Error {
        match e {
            Error::InvalidElement(m) => Error::Parse { pos: self.pos, msg: m },
            other => other,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<UeaElement> {
        let mut negate = false;
        match self.peek() {
            Some(b'-') => {
                negate = true;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        let t = self.term()?;
        let mut acc = if negate { t.neg() } else { t };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
            acc.check_size().map_err(|e| self.wrap(e))?;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<UeaElement> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = acc.mul(&f).map_err(|e| self.wrap(e))?;
        }
        Ok(acc)
    }

    fn digits(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let run = &self.s[start..self.pos];
        if run.is_empty() {
            return Err(self.error("expected digits"));
        }
        if run.len() > MAX_DIGITS {
            return Err(self.error("integer literal too long"));
        }
        let text = std::str::from_utf8(run).map_err(|_| self.error("invalid digits"))?;
        text.parse::<BigInt>().map_err(|_| self.error("invalid integer"))
    }

    fn exponent(&mut self) -> Result<Option<u32>> {
        if self.peek() != Some(b'^') {
            return Ok(None);
        }
        self.pos += 1;
        self.skip_ws();
        let n = self.digits()?;
        let n =
            u32::try_from(n).ok().filter(|&n| n <= MAX_EXPONENT).ok_or_else(|| self.error("exponent out of range"))?;
        Ok(Some(n))
    }

    fn factor(&mut self) -> Result<UeaElement> {
        match self.peek() {
            Some(b'0'..=b'9') => {
                let num = self.digits()?;
                let den = if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    self.digits()?
                } else {
                    BigInt::one()
                };
                if den.is_zero() {
                    return Err(self.error("zero denominator"));
                }
                Ok(UeaElement::scalar(Complex::new(BigRational::new(num, den), BigRational::zero())))
            }
            Some(b'i') => {
                self.pos += 1;
                Ok(UeaElement::scalar(QComplex::i()))
            }
            Some(c @ (b'E' | b'F' | b'H')) => {
                self.pos += 1;
                let g = match c {
                    b'E' => Generator::E,
                    b'F' => Generator::F,
                    _ => Generator::H,
                };
                let base = UeaElement::generator(g);
                match self.exponent()? {
                    Some(n) => base.pow(n).map_err(|e| self.wrap(e)),
                    None => Ok(base),
                }
            }
            Some(b'(') => {
                self.pos += 1;
                self.depth += 1;
                if self.depth > MAX_DEPTH {
                    return Err(self.error("nesting too deep"));
                }
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                self.depth -= 1;
                match self.exponent()? {
                    Some(n) => inner.pow(n).map_err(|e| self.wrap(e)),
                    None => Ok(inner),
                }
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> UeaElement {
        s.parse().unwrap()
    }

    #[test]
    fn commutation_relations() {
        let (e, f, h) = (parse("E"), parse("F"), parse("H"));
        assert_eq!(h.bracket(&e).unwrap(), e.scale(&qint(2)));
        assert_eq!(h.bracket(&f).unwrap(), f.scale(&qint(-2)));
        assert_eq!(e.bracket(&f).unwrap(), h);
        assert_eq!(parse("E*F"), parse("F*E + H"));
        assert_eq!(parse("E*H"), parse("H*E - 2*E"));
        assert_eq!(parse("H*F"), parse("F*H - 2*F"));
    }

    #[test]
    fn casimir_is_central_and_normal_ordered() {
        let c = UeaElement::casimir();
        assert!(c.is_central().unwrap());
        assert_eq!(c, parse("2*F*E + H + 1/2*H^2"));
        assert!(!parse("H").is_central().unwrap());
        assert!(c.pow(3).unwrap().is_central().unwrap());
    }

    #[test]
    fn display_round_trips() {
        for s in ["0", "1", "-3/4*i", "(1/2 - 2*i)*F*E + H^2 - 7", "E^3*F^2", "i*H", "-(E + F)^2"] {
            let v = parse(s);
            let back = parse(&v.to_string());
            assert_eq!(v, back, "{s} -> {v}");
        }
        assert_eq!(parse("E*F + F*E + 1/2*H^2").to_string(), "2*F*E + 1/2*H^2 + H");
    }

    #[test]
    fn associativity_on_words() {
        let (a, b, c) = (parse("E^2 + F"), parse("H*F - i*E"), parse("F^2*E + 3"));
        let l = a.mul(&b).unwrap().mul(&c).unwrap();
        let r = a.mul(&b.mul(&c).unwrap()).unwrap();
        assert_eq!(l, r);
    }

    #[test]
    fn parse_errors_carry_positions() {
        for (s, pos) in [("E*", 2), ("E^33", 4), ("(E", 2), ("1/0", 3), ("E F", 2), ("X", 0), ("", 0)] {
            match s.parse::<UeaElement>() {
                Err(Error::Parse { pos: p, .. }) => assert_eq!(p, pos, "{s}"),
                other => panic!("{s}: {other:?}"),
            }
        }
        let deep = format!("{}E{}", "(".repeat(70), ")".repeat(70));
        assert!(deep.parse::<UeaElement>().is_err());
        assert!("((E+F+H)^32)^32".parse::<UeaElement>().is_err());
    }
}
