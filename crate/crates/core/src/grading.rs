//! RO(Z/2) bidegrees and the formal monomials `v_R σ^s a^t`.
//!
//! A bidegree `k + lα` is stored as the pair `(k, l)`; `l` is the twist.
//! Generator dimensions: `v_i` sits in `(2^i - 1)(1 + α)`, `σ` in `-1 + α`
//! and `a` in `-α`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

/// Largest generator index accepted. `2^i - 1` must fit comfortably in an `i64`.
pub const MAX_GENERATOR_INDEX: u32 = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Bidegree {
    pub k: i64,
    pub l: i64,
}

impl Bidegree {
    pub const ZERO: Bidegree = Bidegree { k: 0, l: 0 };

    pub const fn new(k: i64, l: i64) -> Self {
        Bidegree { k, l }
    }

    /// The twist of a class in this bidegree.
    pub fn twist(self) -> i64 {
        self.l
    }
}

impl Add for Bidegree {
    type Output = Bidegree;
    fn add(self, o: Bidegree) -> Bidegree {
        Bidegree::new(self.k + o.k, self.l + o.l)
    }
}

impl Sub for Bidegree {
    type Output = Bidegree;
    fn sub(self, o: Bidegree) -> Bidegree {
        Bidegree::new(self.k - o.k, self.l - o.l)
    }
}

impl Neg for Bidegree {
    type Output = Bidegree;
    fn neg(self) -> Bidegree {
        Bidegree::new(-self.k, -self.l)
    }
}

impl Mul<i64> for Bidegree {
    type Output = Bidegree;
    fn mul(self, c: i64) -> Bidegree {
        Bidegree::new(self.k * c, self.l * c)
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}A", self.k, self.l)
    }
}

impl FromStr for Bidegree {
    type Err = ParseError;

    /// Parses `<k>+<l>A`, e.g. `5+-3A`.
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let body = s
            .strip_suffix('A')
            .ok_or_else(|| ParseError::new(s.len(), "bidegree must end in 'A'"))?;
        // The separator is the first '+' after the (optional) sign of k.
        let start = usize::from(body.starts_with(['-', '+']));
        let plus = body[start..]
            .find('+')
            .map(|p| p + start)
            .ok_or_else(|| ParseError::new(start, "expected '+' between k and l"))?;
        let k = parse_int(&body[..plus], 0)?;
        let l = parse_int(&body[plus + 1..], plus + 1)?;
        Ok(Bidegree::new(k, l))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    fn new(offset: usize, message: impl Into<String>) -> Self {
        ParseError { offset, message: message.into() }
    }
}

fn parse_int(text: &str, offset: usize) -> Result<i64, ParseError> {
    let digits = text.strip_prefix(['-', '+']).unwrap_or(text);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseError::new(offset, format!("expected an integer, found {text:?}")));
    }
    text.parse::<i64>()
        .map_err(|_| ParseError::new(offset, format!("integer out of range: {text}")))
}

/// `2^i - 1`, the (1+α)-multiplicity of `v_i`.
pub fn generator_weight(i: u32) -> i64 {
    debug_assert!(i <= MAX_GENERATOR_INDEX);
    (1i64 << i) - 1
}

pub(crate) type VExps = SmallVec<[(u32, i64); 4]>;

/// A formal word `v_R σ^s a^t`.
///
/// `vexp` is kept sorted by generator index and never holds a zero exponent,
/// so the derived equality is field-wise and the derived ordering is the
/// canonical one: lexicographic on (sorted `vexp`, `sexp`, `aexp`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial {
    vexp: VExps,
    sexp: i64,
    aexp: i64,
}

impl Monomial {
    pub fn unit() -> Self {
        Monomial::default()
    }

    pub fn v(i: u32) -> Self {
        Monomial::unit().with_v(i, 1)
    }

    pub fn sigma(s: i64) -> Self {
        Monomial { sexp: s, ..Monomial::default() }
    }

    pub fn a(t: i64) -> Self {
        Monomial { aexp: t, ..Monomial::default() }
    }

    /// Builds a monomial from arbitrary `(index, exponent)` pairs; repeated
    /// indices add up and zero exponents vanish.
    pub fn new(v: impl IntoIterator<Item = (u32, i64)>, sexp: i64, aexp: i64) -> Self {
        let mut m = Monomial::sigma(sexp);
        m.aexp = aexp;
        for (i, e) in v {
            m = m.with_v(i, e);
        }
        m
    }

    pub fn vexp(&self) -> &[(u32, i64)] {
        &self.vexp
    }

    pub fn sexp(&self) -> i64 {
        self.sexp
    }

    pub fn aexp(&self) -> i64 {
        self.aexp
    }

    pub fn v_exponent(&self, i: u32) -> i64 {
        match self.vexp.binary_search_by_key(&i, |&(j, _)| j) {
            Ok(p) => self.vexp[p].1,
            Err(_) => 0,
        }
    }

    /// Multiplies by `v_i^delta`.
    pub fn with_v(mut self, i: u32, delta: i64) -> Self {
        if delta == 0 {
            return self;
        }
        match self.vexp.binary_search_by_key(&i, |&(j, _)| j) {
            Ok(p) => {
                self.vexp[p].1 += delta;
                if self.vexp[p].1 == 0 {
                    self.vexp.remove(p);
                }
            }
            Err(p) => self.vexp.insert(p, (i, delta)),
        }
        self
    }

    pub fn with_sexp(mut self, s: i64) -> Self {
        self.sexp = s;
        self
    }

    pub fn with_aexp(mut self, t: i64) -> Self {
        self.aexp = t;
        self
    }

    /// The same word with every `v`-exponent removed.
    pub fn v_free(&self) -> Monomial {
        Monomial { vexp: VExps::new(), sexp: self.sexp, aexp: self.aexp }
    }

    /// The pure `v_R` part.
    pub fn milnor_word(&self) -> Monomial {
        Monomial { vexp: self.vexp.clone(), sexp: 0, aexp: 0 }
    }

    pub fn has_v(&self) -> bool {
        !self.vexp.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.vexp.is_empty() && self.sexp == 0 && self.aexp == 0
    }

    /// Smallest generator index in the support, if any.
    pub fn min_index(&self) -> Option<u32> {
        self.vexp.first().map(|&(i, _)| i)
    }

    pub fn max_index(&self) -> Option<u32> {
        self.vexp.last().map(|&(i, _)| i)
    }

    /// `Σ r_i (2^i - 1)`: the multiplicity of `1 + α` carried by `v_R`.
    pub fn v_weight(&self) -> i64 {
        self.vexp.iter().map(|&(i, r)| r * generator_weight(i)).sum()
    }

    /// The nonequivariant degree `|v_R| = Σ r_i · 2(2^i - 1)` in `BP_*`.
    pub fn milnor_weight(&self) -> i64 {
        2 * self.v_weight()
    }

    pub fn dimension(&self) -> Bidegree {
        let w = self.v_weight();
        Bidegree::new(w - self.sexp, w + self.sexp - self.aexp)
    }
}

impl Mul for &Monomial {
    type Output = Monomial;
    fn mul(self, o: &Monomial) -> Monomial {
        let mut m = self.clone();
        for &(i, e) in &o.vexp {
            m = m.with_v(i, e);
        }
        m.sexp += o.sexp;
        m.aexp += o.aexp;
        m
    }
}

impl Mul for Monomial {
    type Output = Monomial;
    fn mul(self, o: Monomial) -> Monomial {
        &self * &o
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| {
            if first {
                first = false;
                Ok(())
            } else {
                f.write_str(" ")
            }
        };
        for &(i, e) in &self.vexp {
            sep(f)?;
            if e == 1 {
                write!(f, "v{i}")?;
            } else {
                write!(f, "v{i}^{e}")?;
            }
        }
        if self.sexp != 0 {
            sep(f)?;
            write!(f, "s^{}", self.sexp)?;
        }
        if self.aexp != 0 {
            sep(f)?;
            if self.aexp == 1 {
                f.write_str("a")?;
            } else {
                write!(f, "a^{}", self.aexp)?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

impl FromStr for Monomial {
    type Err = ParseError;

    /// Accepts the canonical grammar plus any factor order and explicit
    /// `^1` exponents; repeated factors multiply.
    fn from_str(text: &str) -> Result<Self, ParseError> {
        if text == "1" {
            return Ok(Monomial::unit());
        }
        if text.is_empty() {
            return Err(ParseError::new(0, "empty monomial (the unit is written 1)"));
        }
        let mut m = Monomial::unit();
        let mut offset = 0;
        for token in text.split(' ') {
            if token.is_empty() {
                return Err(ParseError::new(offset, "factors must be separated by single spaces"));
            }
            let (head, exp) = match token.find('^') {
                Some(p) => {
                    let e = parse_int(&token[p + 1..], offset + p + 1)?;
                    if e == 0 {
                        return Err(ParseError::new(offset + p + 1, "exponent must be nonzero"));
                    }
                    (&token[..p], Some(e))
                }
                None => (token, None),
            };
            match head.as_bytes().first() {
                Some(b'v') => {
                    let digits = &head[1..];
                    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                        return Err(ParseError::new(offset + 1, "expected generator index after 'v'"));
                    }
                    let i: u32 = digits
                        .parse()
                        .ok()
                        .filter(|&i| i <= MAX_GENERATOR_INDEX)
                        .ok_or_else(|| ParseError::new(offset + 1, "generator index out of range"))?;
                    m = m.with_v(i, exp.unwrap_or(1));
                }
                Some(b's') if head.len() == 1 => {
                    let e = exp.ok_or_else(|| {
                        ParseError::new(offset + 1, "sigma needs an explicit exponent (s^<j>)")
                    })?;
                    m.sexp += e;
                }
                Some(b'a') if head.len() == 1 => m.aexp += exp.unwrap_or(1),
                _ => return Err(ParseError::new(offset, format!("unknown factor {head:?}"))),
            }
            offset += token.len() + 1;
        }
        Ok(m)
    }
}

impl Serialize for Monomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Monomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Exact 2-adic valuation of a nonzero integer.
pub fn two_adic_valuation(x: i64) -> Option<u32> {
    (x != 0).then(|| x.trailing_zeros())
}
