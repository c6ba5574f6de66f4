//! Polynomials (and Laurent polynomials) in two central commuting
//! indeterminates with Grassmann coefficients.
//!
//! The same container serves the time variables `(t, s)` of parametric
//! families and the frequency variables `(z, w)` of resolvents; the marker
//! type only fixes the variable names.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;
use std::marker::PhantomData;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::One;

use crate::error::{Error, Result};
use crate::grassmann::{int, GrassmannElement, Parity, Rational};

pub type Exponents = [i32; 2];

pub trait Variables: Clone + Copy + fmt::Debug + PartialEq + Eq + Hash + Default + 'static {
    const NAMES: [&'static str; 2];
}

/// Time variables `t` (index 0) and `s` (index 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Time;

impl Time {
    pub const T: usize = 0;
    pub const S: usize = 1;
}

impl Variables for Time {
    const NAMES: [&'static str; 2] = ["t", "s"];
}

/// Frequency variables `z` (index 0) and `w` (index 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Frequency;

impl Frequency {
    pub const Z: usize = 0;
    pub const W: usize = 1;
}

impl Variables for Frequency {
    const NAMES: [&'static str; 2] = ["z", "w"];
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly<V: Variables> {
    n: u8,
    terms: BTreeMap<Exponents, GrassmannElement>,
    vars: PhantomData<V>,
}

pub type TimePoly = Poly<Time>;
pub type LaurentPoly = Poly<Frequency>;

impl<V: Variables> Poly<V> {
    pub fn zero(n: u8) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
            vars: PhantomData,
        }
    }

    pub fn constant(c: GrassmannElement) -> Self {
        Self::monomial(c, [0, 0])
    }

    pub fn monomial(c: GrassmannElement, exps: Exponents) -> Self {
        let mut out = Self::zero(c.generators());
        out.accumulate(exps, c);
        out
    }

    /// The indeterminate `var` itself.
    pub fn var(n: u8, var: usize) -> Self {
        let mut exps = [0, 0];
        exps[var] = 1;
        Self::monomial(GrassmannElement::one(n), exps)
    }

    pub fn from_terms(n: u8, terms: impl IntoIterator<Item = (Exponents, GrassmannElement)>) -> Result<Self> {
        let mut out = Self::zero(n);
        for (e, c) in terms {
            if c.generators() != n {
                return Err(Error::Context {
                    left: n,
                    right: c.generators(),
                });
            }
            out.accumulate(e, c);
        }
        Ok(out)
    }

    fn accumulate(&mut self, exps: Exponents, c: GrassmannElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(slot) => {
                *slot = &*slot + &c;
                if slot.is_zero() {
                    self.terms.remove(&exps);
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    pub fn generators(&self) -> u8 {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &GrassmannElement)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: Exponents) -> GrassmannElement {
        self.terms.get(&exps).cloned().unwrap_or_else(|| GrassmannElement::zero(self.n))
    }

    pub fn constant_term(&self) -> GrassmannElement {
        self.coefficient([0, 0])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| *e == [0, 0])
    }

    pub fn uses(&self, var: usize) -> bool {
        self.terms.keys().any(|e| e[var] != 0)
    }

    pub fn degree(&self, var: usize) -> i32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn min_exponent(&self, var: usize) -> i32 {
        self.terms.keys().map(|e| e[var]).min().unwrap_or(0)
    }

    pub fn parity(&self) -> Parity {
        self.terms.values().fold(Parity::Zero, |p, c| p.join(c.parity()))
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        self.map(|c| c.scale(factor))
    }

    /// `c * self`, with `c` placed to the left of every coefficient.
    pub fn mul_left(&self, c: &GrassmannElement) -> Self {
        self.map(|x| c * x)
    }

    pub fn mul_right(&self, c: &GrassmannElement) -> Self {
        self.map(|x| x * c)
    }

    fn map(&self, f: impl Fn(&GrassmannElement) -> GrassmannElement) -> Self {
        let mut out = Self::zero(self.n);
        for (e, c) in &self.terms {
            out.accumulate(*e, f(c));
        }
        out
    }

    fn map_exponents(&self, f: impl Fn(Exponents) -> Exponents) -> Self {
        let mut out = Self::zero(self.n);
        for (e, c) in &self.terms {
            out.accumulate(f(*e), c.clone());
        }
        out
    }

    /// Multiplies by `var^k` (k may be negative).
    pub fn shift(&self, var: usize, k: i32) -> Self {
        self.map_exponents(|mut e| {
            e[var] += k;
            e
        })
    }

    pub fn swap_variables(&self) -> Self {
        self.map_exponents(|[a, b]| [b, a])
    }

    /// Formal partial derivative.
    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (e, c) in &self.terms {
            if e[var] != 0 {
                let mut d = *e;
                d[var] -= 1;
                out.accumulate(d, c.scale(&int(e[var] as i64)));
            }
        }
        out
    }

    /// Antiderivative in `var` vanishing at `var = 0`.
    pub fn integrate(&self, var: usize) -> Result<Self> {
        let mut out = Self::zero(self.n);
        for (e, c) in &self.terms {
            if e[var] < 0 {
                return Err(Error::Shape(format!(
                    "cannot integrate negative power of {}",
                    V::NAMES[var]
                )));
            }
            let mut d = *e;
            d[var] += 1;
            out.accumulate(d, c.scale(&Rational::new(1.into(), (e[var] + 1).into())));
        }
        Ok(out)
    }

    /// Replaces `var` by `value`. The replacement must have even (central)
    /// coefficients and `var` may only occur with nonnegative powers.
    pub fn substitute(&self, var: usize, value: &Self) -> Result<Self> {
        if !value.parity().is_even_or_zero() {
            return Err(Error::Parity(format!(
                "substituted value for {} must be even, got {}",
                V::NAMES[var],
                value.parity()
            )));
        }
        if self.min_exponent(var) < 0 {
            return Err(Error::Shape(format!("negative power of {} cannot be substituted", V::NAMES[var])));
        }
        let mut powers: Vec<Self> = vec![Self::constant(GrassmannElement::one(self.n))];
        let mut out = Self::zero(self.n);
        for (e, c) in &self.terms {
            let k = e[var] as usize;
            while powers.len() <= k {
                let next = powers.last().expect("nonempty") * value;
                powers.push(next);
            }
            let mut rest = *e;
            rest[var] = 0;
            let term = Self::monomial(c.clone(), rest);
            out = &out + &(&term * &powers[k]);
        }
        Ok(out)
    }
}

impl<V: Variables> fmt::Display for Poly<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let vars: Vec<String> = (0..2)
                .filter(|v| e[*v] != 0)
                .map(|v| match e[v] {
                    1 => V::NAMES[v].to_string(),
                    k => format!("{}^{k}", V::NAMES[v]),
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else if c.term_count() == 1 {
                write!(f, "{c}*{}", vars.join("*"))?;
            } else {
                write!(f, "({c})*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl<V: Variables> Add for &Poly<V> {
    type Output = Poly<V>;
    fn add(self, rhs: &Poly<V>) -> Poly<V> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.accumulate(*e, c.clone());
        }
        out
    }
}

impl<V: Variables> Sub for &Poly<V> {
    type Output = Poly<V>;
    fn sub(self, rhs: &Poly<V>) -> Poly<V> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.accumulate(*e, -c);
        }
        out
    }
}

impl<V: Variables> Mul for &Poly<V> {
    type Output = Poly<V>;
    fn mul(self, rhs: &Poly<V>) -> Poly<V> {
        let mut out = Poly::zero(self.n);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.accumulate([ea[0] + eb[0], ea[1] + eb[1]], ca * cb);
            }
        }
        out
    }
}

impl<V: Variables> Neg for &Poly<V> {
    type Output = Poly<V>;
    fn neg(self) -> Poly<V> {
        self.scale(&-Rational::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(n: u8, s: &str) -> GrassmannElement {
        GrassmannElement::parse_expr(n, s).unwrap()
    }

    fn t(n: u8) -> TimePoly {
        TimePoly::var(n, Time::T)
    }

    fn s(n: u8) -> TimePoly {
        TimePoly::var(n, Time::S)
    }

    #[test]
    fn binomial_expansion() {
        let sum = &t(2) + &s(2);
        let sq = &sum * &sum;
        let expected = TimePoly::from_terms(2, [([2, 0], el(2, "1")), ([1, 1], el(2, "2")), ([0, 2], el(2, "1"))]).unwrap();
        assert_eq!(sq, expected);
    }

    #[test]
    fn coefficients_keep_their_order() {
        let a = TimePoly::monomial(el(2, "xi1"), [1, 0]);
        let b = TimePoly::monomial(el(2, "xi2"), [0, 1]);
        assert_eq!(&a * &b, TimePoly::monomial(el(2, "xi1*xi2"), [1, 1]));
        assert_eq!(&b * &a, TimePoly::monomial(el(2, "-xi1*xi2"), [1, 1]));
    }

    #[test]
    fn derivative_and_integral() {
        let p = TimePoly::from_terms(2, [([3, 0], el(2, "xi1")), ([1, 0], el(2, "2")), ([0, 0], el(2, "5"))]).unwrap();
        let d = p.derivative(Time::T);
        assert_eq!(d, TimePoly::from_terms(2, [([2, 0], el(2, "3*xi1")), ([0, 0], el(2, "2"))]).unwrap());
        let back = d.integrate(Time::T).unwrap();
        assert_eq!(&back + &TimePoly::constant(el(2, "5")), p);
    }

    #[test]
    fn substitution_of_sum() {
        // t^2 at t -> t + s
        let p = TimePoly::monomial(el(2, "xi1*xi2"), [2, 0]);
        let q = p.substitute(Time::T, &(&t(2) + &s(2))).unwrap();
        assert_eq!(q.coefficient([1, 1]), el(2, "2*xi1*xi2"));
        assert_eq!(q.coefficient([0, 2]), el(2, "xi1*xi2"));
    }

    #[test]
    fn nilpotent_substitution() {
        let p = TimePoly::monomial(el(3, "xi1"), [1, 0]);
        let q = p.substitute(Time::T, &TimePoly::constant(el(3, "xi2*xi3"))).unwrap();
        assert_eq!(q, TimePoly::constant(el(3, "xi1*xi2*xi3")));
        let odd = TimePoly::constant(el(3, "xi2"));
        assert!(matches!(p.substitute(Time::T, &odd), Err(Error::Parity(_))));
    }

    #[test]
    fn laurent_display() {
        let r = LaurentPoly::monomial(el(2, "xi1"), [-1, -2]);
        assert_eq!(r.to_string(), "xi1*z^-1*w^-2");
    }
}
