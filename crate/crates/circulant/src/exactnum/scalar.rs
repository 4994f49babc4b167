//! Rational expressions: quotients of polynomials.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{parse_polynomial, ExprError, Polynomial, Rational};

/// An exact rational function of the parameters, stored as a pair of
/// polynomials. No polynomial gcd is taken: the denominator is only
/// normalized to integer coefficients with content 1 and a positive leading
/// coefficient, and equality is decided by cross-multiplication. That test is
/// exact and is all the downstream zero-checks need.
#[derive(Debug, Clone)]
pub struct ScalarExpr {
    num: Polynomial,
    den: Polynomial,
}

impl ScalarExpr {
    /// Builds `num/den`, normalizing the representation. `den` must not be
    /// the zero polynomial.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, ExprError> {
        if den.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self {
                num: Polynomial::zero(),
                den: Polynomial::one(),
            });
        }
        // den = scale * prim with prim canonical; fold the scale into num.
        let (prim, scale) = den.primitive();
        let num = num.scale(&scale.recip());
        Ok(Self { num, den: prim })
    }

    pub fn from_poly(p: Polynomial) -> Self {
        Self {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(Polynomial::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Polynomial::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    pub fn var(name: &str) -> Self {
        Self::from_poly(Polynomial::var(name))
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    /// True iff the expression denotes the zero function.
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The underlying polynomial when the denominator is 1.
    /// The numerator, when the denominator is the constant 1.
    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        match self.den.as_constant() {
            Some(c) if c.is_one() => Some(&self.num),
            _ => None,
        }
    }

    pub fn as_constant(&self) -> Option<Rational> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        if d.is_zero() {
            None
        } else {
            Some(n / d)
        }
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut vars = self.num.variables();
        vars.extend(self.den.variables());
        vars
    }

    /// Exact division. Fails when `rhs` is the zero expression.
    pub fn checked_div(&self, rhs: &Self) -> Result<Self, ExprError> {
        if rhs.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        ScalarExpr::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    /// Exact value at a point. Fails if a parameter is unassigned or the
    /// denominator vanishes there.
    pub fn eval(&self, at: &BTreeMap<String, Rational>) -> Result<Rational, ExprError> {
        let d = self.den.eval(at)?;
        if d.is_zero() {
            return Err(ExprError::DenominatorVanishes);
        }
        Ok(self.num.eval(at)? / d)
    }

    /// Replaces the assigned parameters by their values, keeping the rest
    /// symbolic. Fails if the substitution annihilates the denominator.
    pub fn substitute(&self, assigned: &BTreeMap<String, Rational>) -> Result<Self, ExprError> {
        let den = self.den.substitute(assigned);
        if den.is_zero() {
            return Err(ExprError::DenominatorVanishes);
        }
        ScalarExpr::new(self.num.substitute(assigned), den)
    }

    /// Parses the strict polynomial grammar (see [`parse_scalar`]) extended
    /// with the top-level quotient form `"(num)/(den)"` that the report
    /// serializer emits for expressions with a nontrivial denominator.
    pub fn parse_ratio(text: &str, params: &[String]) -> Result<Self, ExprError> {
        if let Some((num_src, den_src)) = split_ratio(text) {
            let num = parse_polynomial(num_src, params)?;
            let den = parse_polynomial(den_src, params).map_err(|e| shift_pos(e, num_src))?;
            return ScalarExpr::new(num, den);
        }
        Ok(Self::from_poly(parse_polynomial(text, params)?))
    }
}

/// Recognizes the exact shape `(A)/(B)` with balanced parentheses.
fn split_ratio(text: &str) -> Option<(&str, &str)> {
    let t = text.trim();
    if !t.starts_with('(') || !t.ends_with(')') {
        return None;
    }
    let bytes = t.as_bytes();
    let mut depth = 0usize;
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => {
                depth -= 1;
                if depth == 0 {
                    let rest = &t[i + 1..];
                    if let Some(den) = rest.strip_prefix("/(").and_then(|d| d.strip_suffix(')')) {
                        return Some((&t[1..i], den));
                    }
                    return None;
                }
            }
            _ => {}
        }
    }
    None
}

fn shift_pos(err: ExprError, prefix: &str) -> ExprError {
    let offset = prefix.len() + 3; // "(" + num + ")/("
    match err {
        ExprError::Syntax { pos, msg } => ExprError::Syntax {
            pos: pos + offset,
            msg,
        },
        ExprError::UnknownIdentifier { name, pos } => ExprError::UnknownIdentifier {
            name,
            pos: pos + offset,
        },
        ExprError::ZeroDenominatorLiteral { pos } => {
            ExprError::ZeroDenominatorLiteral { pos: pos + offset }
        }
        other => other,
    }
}

/// Mathematical equality by cross-multiplication:
/// `n1/d1 == n2/d2` iff `n1*d2 - n2*d1` is the zero polynomial.
impl PartialEq for ScalarExpr {
    fn eq(&self, other: &Self) -> bool {
        (&(&self.num * &other.den) - &(&other.num * &self.den)).is_zero()
    }
}

impl Eq for ScalarExpr {}

impl<'a> Add<&'a ScalarExpr> for &ScalarExpr {
    type Output = ScalarExpr;
    fn add(self, rhs: &'a ScalarExpr) -> ScalarExpr {
        ScalarExpr::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .expect("denominators are nonzero")
    }
}

impl<'a> Sub<&'a ScalarExpr> for &ScalarExpr {
    type Output = ScalarExpr;
    fn sub(self, rhs: &'a ScalarExpr) -> ScalarExpr {
        ScalarExpr::new(
            &(&self.num * &rhs.den) - &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .expect("denominators are nonzero")
    }
}

impl<'a> Mul<&'a ScalarExpr> for &ScalarExpr {
    type Output = ScalarExpr;
    fn mul(self, rhs: &'a ScalarExpr) -> ScalarExpr {
        ScalarExpr::new(&self.num * &rhs.num, &self.den * &rhs.den)
            .expect("denominators are nonzero")
    }
}

/// Division panics on a zero divisor; use [`ScalarExpr::checked_div`] where
/// the divisor is not known to be nonzero.
impl<'a> Div<&'a ScalarExpr> for &ScalarExpr {
    type Output = ScalarExpr;
    fn div(self, rhs: &'a ScalarExpr) -> ScalarExpr {
        self.checked_div(rhs).expect("division by zero expression")
    }
}

impl Neg for &ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        ScalarExpr {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<ScalarExpr> for ScalarExpr {
            type Output = ScalarExpr;
            fn $method(self, rhs: ScalarExpr) -> ScalarExpr {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a ScalarExpr> for ScalarExpr {
            type Output = ScalarExpr;
            fn $method(self, rhs: &'a ScalarExpr) -> ScalarExpr {
                (&self).$method(rhs)
            }
        }
        impl $trait<ScalarExpr> for &ScalarExpr {
            type Output = ScalarExpr;
            fn $method(self, rhs: ScalarExpr) -> ScalarExpr {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);
forward_owned_binop!(Div, div);

impl Neg for ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        -&self
    }
}

/// Canonical printing: the bare polynomial when the denominator is 1,
/// otherwise `(num)/(den)`.
impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.as_polynomial().is_some() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
