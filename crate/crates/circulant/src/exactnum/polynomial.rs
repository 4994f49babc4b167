//! Sparse multivariate polynomials with exact rational coefficients.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{ExprError, Monomial, Rational};

/// A polynomial stored as a map from monomial to nonzero coefficient.
/// The map key order is the canonical graded-lexicographic order, so the
/// last entry is always the leading term.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Self { terms }
    }

    pub fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(name), Rational::one());
        Self { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(iter: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, mono: Monomial, coef: Rational) {
        if coef.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coef);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coef;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The constant value if this polynomial has no parameters.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_zero() {
            Some(Rational::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    /// Terms in descending canonical order (leading term first).
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Total degree of the leading term; zero for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.leading().map_or(0, |(m, _)| m.degree())
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut vars = BTreeSet::new();
        for mono in self.terms.keys() {
            for (name, _) in mono.iter() {
                vars.insert(name.to_string());
            }
        }
        vars
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Exact value at a point covering every parameter of the polynomial.
    pub fn eval(&self, at: &BTreeMap<String, Rational>) -> Result<Rational, ExprError> {
        let mut acc = Rational::zero();
        for (mono, coef) in &self.terms {
            acc += coef * mono.eval(at)?;
        }
        Ok(acc)
    }

    /// Replaces the assigned parameters by their values and leaves the rest
    /// symbolic.
    pub fn substitute(&self, assigned: &BTreeMap<String, Rational>) -> Self {
        let mut out = Self::zero();
        for (mono, coef) in &self.terms {
            let (value, rest) = mono.partial_eval(assigned);
            out.add_term(rest, coef * value);
        }
        out
    }

    /// Writes `self = c * prim` where `prim` has integer coefficients with
    /// content 1 and a positive leading coefficient. The zero polynomial
    /// yields `(0, 1)`.
    pub fn primitive(&self) -> (Polynomial, Rational) {
        if self.is_zero() {
            return (Self::zero(), Rational::one());
        }
        let mut denom_lcm = BigInt::one();
        for c in self.terms.values() {
            denom_lcm = denom_lcm.lcm(c.denom());
        }
        let mut numer_gcd = BigInt::zero();
        for c in self.terms.values() {
            let scaled = c.numer() * (&denom_lcm / c.denom());
            numer_gcd = numer_gcd.gcd(&scaled);
        }
        let mut scale = Rational::new(numer_gcd, denom_lcm);
        let (_, lead) = self.leading().expect("nonzero");
        if lead.is_negative() {
            scale = -scale;
        }
        let inv = scale.recip();
        (self.scale(&inv), scale)
    }
}

impl<'a> Add<&'a Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ml, cl) in &self.terms {
            for (mr, cr) in &rhs.terms {
                out.add_term(ml.mul(mr), cl * cr);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &'a Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
        impl $trait<Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

/// Total order on polynomials used for canonical sorting of constraint sets:
/// first by total degree, then by leading monomial, then by the remaining
/// term sequence.
impl Ord for Polynomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let mut lhs = self.terms();
        let mut rhs = other.terms();
        loop {
            match (lhs.next(), rhs.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some((lm, lc)), Some((rm, rc))) => match lm.cmp(rm).then_with(|| lc.cmp(rc)) {
                    Ordering::Equal => {}
                    ord => return ord,
                },
            }
        }
    }
}

impl PartialOrd for Polynomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (mono, coef)) in self.terms().enumerate() {
            let neg = coef.is_negative();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = coef.abs();
            if mono.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, ratio};

    fn point(pairs: &[(&str, Rational)]) -> BTreeMap<String, Rational> {
        pairs
            .iter()
            .map(|(n, v)| (n.to_string(), v.clone()))
            .collect()
    }

    #[test]
    fn canonical_display() {
        let a = Polynomial::var("a");
        let b = Polynomial::var("b");
        let p = &(&a.scale(&rat(2)) + &b) - &Polynomial::one();
        assert_eq!(p.to_string(), "2*a + b - 1");
        let q = &(&a * &a) - &(&b * &b);
        assert_eq!(q.to_string(), "a^2 - b^2");
        assert_eq!(Polynomial::zero().to_string(), "0");
        assert_eq!(Polynomial::constant(ratio(-5, 3)).to_string(), "-5/3");
    }

    #[test]
    fn binomial_identity_cancels() {
        let a = Polynomial::var("a");
        let b = Polynomial::var("b");
        let lhs = (&a - &b).pow(2);
        let rhs = &(&(&a * &a) - &(&a * &b).scale(&rat(2))) + &(&b * &b);
        assert!((&lhs - &rhs).is_zero());
    }

    #[test]
    fn eval_exact() {
        let a = Polynomial::var("a");
        let b = Polynomial::var("b");
        let theta = &(&a.scale(&rat(2)) + &b) + &Polynomial::one();
        let v = theta.eval(&point(&[("a", rat(1)), ("b", rat(1))])).unwrap();
        assert_eq!(v, rat(4));
        let err = theta.eval(&point(&[("a", rat(1))])).unwrap_err();
        assert!(matches!(err, ExprError::MissingParameter { .. }));
    }

    #[test]
    fn substitute_partial() {
        let a = Polynomial::var("a");
        let b = Polynomial::var("b");
        let p = &(&a * &b) + &a; // a*b + a
        let q = p.substitute(&point(&[("b", rat(3))]));
        assert_eq!(q.to_string(), "4*a");
    }

    #[test]
    fn primitive_normalization() {
        let a = Polynomial::var("a");
        let b = Polynomial::var("b");
        // (3 - 2a - b)/4 -> 2a + b - 3, scale -1/4
        let p = (&(&Polynomial::constant(rat(3)) - &a.scale(&rat(2))) - &b).scale(&ratio(1, 4));
        let (prim, scale) = p.primitive();
        assert_eq!(prim.to_string(), "2*a + b - 3");
        assert_eq!(scale, ratio(-1, 4));
        assert_eq!(prim.scale(&scale), p);
        let (z, s) = Polynomial::zero().primitive();
        assert!(z.is_zero());
        assert_eq!(s, rat(1));
    }
}
