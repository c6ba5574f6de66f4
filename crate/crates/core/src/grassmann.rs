//! Exact arithmetic in the Grassmann algebra over the rationals.
//!
//! An element is a sparse map from monomials (strictly increasing generator
//! index tuples, stored as bitmasks) to nonzero rational coefficients. The
//! map is ordered lexicographically on the index tuples, which is also the
//! order used for printing, serialization and every pivot choice made by
//! the linear-algebra routines.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub const MAX_GENERATORS: u8 = 16;

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `"p"` or `"p/q"` (optional leading sign, no whitespace).
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (numer, denom) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let numer: BigInt = numer.parse().ok()?;
    let denom: BigInt = denom.parse().ok()?;
    if denom.is_zero() {
        return None;
    }
    Some(Rational::new(numer, denom))
}

/// A Grassmann algebra with a fixed number of generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AlgebraContext {
    n: u8,
}

impl AlgebraContext {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_GENERATORS as usize {
            return Err(Error::Config(format!(
                "generator count must lie in 1..={MAX_GENERATORS}, got {n}"
            )));
        }
        Ok(Self { n: n as u8 })
    }

    pub fn generators(&self) -> usize {
        self.n as usize
    }

    pub fn zero(&self) -> GrassmannElement {
        GrassmannElement::zero(self.n)
    }

    pub fn one(&self) -> GrassmannElement {
        GrassmannElement::one(self.n)
    }

    pub fn scalar(&self, value: Rational) -> GrassmannElement {
        GrassmannElement::scalar(self.n, value)
    }

    /// The generator `xi_i`, 1-based.
    pub fn generator(&self, i: usize) -> Result<GrassmannElement> {
        self.monomial(&[i], Rational::one())
    }

    pub fn monomial(&self, indices: &[usize], coeff: Rational) -> Result<GrassmannElement> {
        let mono = Monomial::from_indices(indices)?;
        if mono.max_index() > self.generators() {
            return Err(Error::Context {
                left: self.n,
                right: mono.max_index() as u8,
            });
        }
        let mut out = GrassmannElement::zero(self.n);
        out.insert(mono, coeff);
        Ok(out)
    }

    /// Every monomial of the algebra in lexicographic order (`2^n` entries).
    pub fn basis(&self) -> Vec<Monomial> {
        let mut all: Vec<Monomial> = (0..(1u32 << self.n)).map(Monomial).collect();
        all.sort();
        all
    }

    pub fn odd_basis(&self) -> Vec<Monomial> {
        self.basis().into_iter().filter(|m| m.len() % 2 == 1).collect()
    }

    pub fn even_basis(&self) -> Vec<Monomial> {
        self.basis().into_iter().filter(|m| m.len() % 2 == 0).collect()
    }
}

/// A product of distinct generators in increasing index order; bit `i`
/// stands for generator `i + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(u32);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn from_bits(bits: u32) -> Self {
        Monomial(bits)
    }

    /// Builds a monomial from 1-based indices which must be strictly increasing.
    pub fn from_indices(indices: &[usize]) -> Result<Self> {
        let mut bits = 0u32;
        let mut last = 0usize;
        for &i in indices {
            if i == 0 || i > MAX_GENERATORS as usize {
                return Err(Error::Config(format!("generator index {i} out of range")));
            }
            if i <= last {
                return Err(Error::Config(format!(
                    "generator indices must be strictly increasing: {indices:?}"
                )));
            }
            last = i;
            bits |= 1 << (i - 1);
        }
        Ok(Monomial(bits))
    }

    pub fn bits(&self) -> u32 {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn is_odd(&self) -> bool {
        self.len() % 2 == 1
    }

    pub fn indices(&self) -> Vec<usize> {
        (0..32).filter(|b| self.0 & (1 << b) != 0).map(|b| b + 1).collect()
    }

    fn max_index(&self) -> usize {
        32 - self.0.leading_zeros() as usize
    }

    /// Product of two monomials: `None` when they share a generator,
    /// otherwise the merged monomial and whether the merge is an odd
    /// permutation.
    pub fn product(self, rhs: Monomial) -> Option<(Monomial, bool)> {
        if self.0 & rhs.0 != 0 {
            return None;
        }
        // Each generator of `rhs` moves left past every larger generator of `self`.
        let mut swaps = 0u32;
        let mut rest = rhs.0;
        while rest != 0 {
            let j = rest.trailing_zeros();
            swaps += (self.0 >> (j + 1)).count_ones();
            rest &= rest - 1;
        }
        Some((Monomial(self.0 | rhs.0), swaps % 2 == 1))
    }
}

impl Ord for Monomial {
    /// Lexicographic order on the increasing index tuples; a proper prefix
    /// sorts first.
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        let low = diff & diff.wrapping_neg();
        let above = !((low << 1).wrapping_sub(1));
        if self.0 & low != 0 {
            if other.0 & above != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        } else if self.0 & above != 0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        let names: Vec<String> = self.indices().iter().map(|i| format!("xi{i}")).collect();
        write!(f, "{}", names.join("*"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
    Mixed,
    Zero,
}

impl Parity {
    /// Parity of a product of homogeneous factors.
    pub fn combine(self, other: Parity) -> Parity {
        match (self, other) {
            (Parity::Zero, _) | (_, Parity::Zero) => Parity::Zero,
            (Parity::Mixed, _) | (_, Parity::Mixed) => Parity::Mixed,
            (a, b) if a == b => Parity::Even,
            _ => Parity::Odd,
        }
    }

    /// Parity of a sum.
    pub fn join(self, other: Parity) -> Parity {
        match (self, other) {
            (Parity::Zero, p) | (p, Parity::Zero) => p,
            (a, b) if a == b => a,
            _ => Parity::Mixed,
        }
    }

    pub fn is_even_or_zero(self) -> bool {
        matches!(self, Parity::Even | Parity::Zero)
    }

    pub fn is_odd_or_zero(self) -> bool {
        matches!(self, Parity::Odd | Parity::Zero)
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
            Parity::Mixed => "mixed",
            Parity::Zero => "zero",
        };
        f.write_str(s)
    }
}

/// An element of the Grassmann algebra with `n` generators, in canonical
/// form (no zero coefficients).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrassmannElement {
    n: u8,
    terms: BTreeMap<Monomial, Rational>,
}

impl GrassmannElement {
    pub fn zero(n: u8) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: u8) -> Self {
        Self::scalar(n, Rational::one())
    }

    pub fn scalar(n: u8, value: Rational) -> Self {
        let mut out = Self::zero(n);
        out.insert(Monomial::ONE, value);
        out
    }

    /// Builds an element from raw terms; repeated monomials accumulate and
    /// zero sums are dropped.
    pub fn from_terms(n: u8, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Result<Self> {
        let limit = if n >= 32 { u32::MAX } else { (1u32 << n) - 1 };
        let mut out = Self::zero(n);
        for (mono, c) in terms {
            if mono.bits() & !limit != 0 {
                return Err(Error::Config(format!(
                    "monomial {mono} uses a generator beyond xi{n}"
                )));
            }
            out.accumulate(mono, c);
        }
        Ok(out)
    }

    fn insert(&mut self, mono: Monomial, c: Rational) {
        if !c.is_zero() {
            self.terms.insert(mono, c);
        }
    }

    fn accumulate(&mut self, mono: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn generators(&self) -> u8 {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, mono: Monomial) -> Rational {
        self.terms.get(&mono).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coefficient(Monomial::ONE).is_one()
    }

    pub fn body(&self) -> Rational {
        self.coefficient(Monomial::ONE)
    }

    pub fn soul(&self) -> GrassmannElement {
        let mut out = self.clone();
        out.terms.remove(&Monomial::ONE);
        out
    }

    pub fn body_soul(&self) -> (Rational, GrassmannElement) {
        (self.body(), self.soul())
    }

    pub fn parity(&self) -> Parity {
        let mut parity = Parity::Zero;
        for mono in self.terms.keys() {
            let p = if mono.is_odd() { Parity::Odd } else { Parity::Even };
            parity = parity.join(p);
            if parity == Parity::Mixed {
                break;
            }
        }
        parity
    }

    pub fn even_part(&self) -> GrassmannElement {
        self.filter(|m| !m.is_odd())
    }

    pub fn odd_part(&self) -> GrassmannElement {
        self.filter(|m| m.is_odd())
    }

    fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> GrassmannElement {
        GrassmannElement {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    fn check_context(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Context {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_context(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.accumulate(*m, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_context(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.accumulate(*m, -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_context(other)?;
        let mut out = Self::zero(self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((m, negative)) = ma.product(*mb) {
                    let c = ca * cb;
                    out.accumulate(m, if negative { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Self::zero(self.n);
        }
        Self {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (*m, c * factor)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.n);
        for _ in 0..k {
            out = &out * self;
            if out.is_zero() {
                break;
            }
        }
        out
    }

    /// Inverse via the terminating series `b^-1 * sum_k (-soul/b)^k`.
    pub fn invert(&self) -> Result<Self> {
        let (body, soul) = self.body_soul();
        if body.is_zero() {
            return Err(Error::NotInvertible(format!("{self} has zero body")));
        }
        let inv_body = body.recip();
        let step = soul.scale(&-inv_body.clone());
        let mut power = Self::one(self.n);
        let mut sum = Self::one(self.n);
        loop {
            power = &power * &step;
            if power.is_zero() {
                break;
            }
            sum = &sum + &power;
        }
        Ok(sum.scale(&inv_body))
    }

    /// Smallest `k` with `x^k = 0`, or `None` when the body is nonzero.
    pub fn nilpotency_index(&self) -> Option<usize> {
        if !self.body().is_zero() {
            return None;
        }
        let mut power = self.clone();
        let mut k = 1;
        while !power.is_zero() {
            power = &power * self;
            k += 1;
        }
        Some(k)
    }

    /// Parses the textual form produced by `Display`, e.g.
    /// `"1/2 - 3*xi1*xi2 + xi3"`. Factors are multiplied in the order
    /// written, so `xi2*xi1` reads as `-xi1*xi2`.
    pub fn parse_expr(n: u8, text: &str) -> Result<Self> {
        ExprParser::new(n, text).parse()
    }
}

impl fmt::Display for GrassmannElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (mono, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let magnitude = c.abs();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if mono.is_empty() {
                write!(f, "{magnitude}")?;
            } else if magnitude.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{magnitude}*{mono}")?;
            }
        }
        Ok(())
    }
}

struct ExprParser<'a> {
    n: u8,
    text: &'a str,
    pos: usize,
}

impl<'a> ExprParser<'a> {
    fn new(n: u8, text: &'a str) -> Self {
        Self { n, text, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        &self.text[start..self.pos]
    }

    fn parse(mut self) -> Result<GrassmannElement> {
        let mut sum = GrassmannElement::zero(self.n);
        let mut first = true;
        loop {
            self.skip_ws();
            let mut negative = false;
            match self.peek() {
                None if !first => break,
                None => return Err(Error::parse(self.pos, "empty expression")),
                Some('+') if !first => self.pos += 1,
                Some('-') => {
                    negative = true;
                    self.pos += 1;
                }
                Some(_) if first => {}
                Some(c) => return Err(Error::parse(self.pos, format!("expected '+' or '-', found {c:?}"))),
            }
            first = false;
            self.skip_ws();
            let mut term = self.term()?;
            if negative {
                term = -&term;
            }
            sum = &sum + &term;
        }
        Ok(sum)
    }

    fn term(&mut self) -> Result<GrassmannElement> {
        let mut value = GrassmannElement::one(self.n);
        let mut factors = 0;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let start = self.pos;
                    let numer = self.digits();
                    let mut coeff: Rational = numer
                        .parse::<BigInt>()
                        .map(Rational::from_integer)
                        .map_err(|e| Error::parse(start, e.to_string()))?;
                    if self.peek() == Some('/') {
                        self.pos += 1;
                        let at = self.pos;
                        let denom = self.digits();
                        let denom: BigInt = denom.parse().map_err(|_| Error::parse(at, "expected denominator"))?;
                        if denom.is_zero() {
                            return Err(Error::parse(at, "zero denominator"));
                        }
                        coeff /= Rational::from_integer(denom);
                    }
                    value = value.scale(&coeff);
                }
                Some('x') if self.text[self.pos..].starts_with("xi") => {
                    self.pos += 2;
                    let at = self.pos;
                    let idx: usize = self.digits().parse().map_err(|_| Error::parse(at, "expected generator index"))?;
                    if idx == 0 || idx > self.n as usize {
                        return Err(Error::parse(at, format!("generator xi{idx} outside 1..={}", self.n)));
                    }
                    let gen = GrassmannElement {
                        n: self.n,
                        terms: BTreeMap::from([(Monomial(1 << (idx - 1)), Rational::one())]),
                    };
                    value = &value * &gen;
                }
                Some(c) => return Err(Error::parse(self.pos, format!("unexpected character {c:?}"))),
                None => return Err(Error::parse(self.pos, "unexpected end of expression")),
            }
            factors += 1;
            self.skip_ws();
            match self.peek() {
                Some('*') => self.pos += 1,
                Some('x') => {}
                _ if factors > 0 => return Ok(value),
                _ => {}
            }
        }
    }
}

// Operator forms panic on context mismatch; use the `checked_*` methods
// when the operands come from untrusted input.

impl Add for &GrassmannElement {
    type Output = GrassmannElement;
    fn add(self, rhs: &GrassmannElement) -> GrassmannElement {
        self.checked_add(rhs).expect("grassmann add")
    }
}

impl Sub for &GrassmannElement {
    type Output = GrassmannElement;
    fn sub(self, rhs: &GrassmannElement) -> GrassmannElement {
        self.checked_sub(rhs).expect("grassmann sub")
    }
}

impl Mul for &GrassmannElement {
    type Output = GrassmannElement;
    fn mul(self, rhs: &GrassmannElement) -> GrassmannElement {
        self.checked_mul(rhs).expect("grassmann mul")
    }
}

impl Neg for &GrassmannElement {
    type Output = GrassmannElement;
    fn neg(self) -> GrassmannElement {
        self.scale(&-Rational::one())
    }
}

impl Add for GrassmannElement {
    type Output = GrassmannElement;
    fn add(self, rhs: GrassmannElement) -> GrassmannElement {
        &self + &rhs
    }
}

impl Sub for GrassmannElement {
    type Output = GrassmannElement;
    fn sub(self, rhs: GrassmannElement) -> GrassmannElement {
        &self - &rhs
    }
}

impl Mul for GrassmannElement {
    type Output = GrassmannElement;
    fn mul(self, rhs: GrassmannElement) -> GrassmannElement {
        &self * &rhs
    }
}

impl Neg for GrassmannElement {
    type Output = GrassmannElement;
    fn neg(self) -> GrassmannElement {
        -&self
    }
}
