//! Power products of named parameters.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use super::{ExprError, Rational};
use num_traits::One;

/// A power product of parameters, e.g. `a^2*b`. Exponents are strictly
/// positive; a parameter that does not occur is simply absent, so the empty
/// monomial is the constant `1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: BTreeMap<String, u32>,
}

impl Monomial {
    /// The constant monomial `1`.
    pub fn one() -> Self {
        Self::default()
    }

    /// The monomial consisting of a single parameter.
    pub fn var(name: &str) -> Self {
        let mut exps = BTreeMap::new();
        exps.insert(name.to_string(), 1);
        Self { exps }
    }

    /// Build from explicit `(name, exponent)` pairs; zero exponents are dropped.
    pub fn from_pairs<I: IntoIterator<Item = (String, u32)>>(pairs: I) -> Self {
        let exps = pairs.into_iter().filter(|(_, e)| *e > 0).collect();
        Self { exps }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    /// Total degree: the sum of all exponents.
    pub fn degree(&self) -> u32 {
        self.exps.values().sum()
    }

    pub fn exponent(&self, name: &str) -> u32 {
        self.exps.get(name).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u32)> {
        self.exps.iter().map(|(n, e)| (n.as_str(), *e))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut exps = self.exps.clone();
        for (name, e) in &other.exps {
            *exps.entry(name.clone()).or_insert(0) += e;
        }
        Self { exps }
    }

    /// Exact value at a point. Every parameter of the monomial must be
    /// assigned.
    pub fn eval(&self, at: &BTreeMap<String, Rational>) -> Result<Rational, ExprError> {
        let mut acc = Rational::one();
        for (name, e) in &self.exps {
            let v = at
                .get(name)
                .ok_or_else(|| ExprError::MissingParameter { name: name.clone() })?;
            for _ in 0..*e {
                acc *= v;
            }
        }
        Ok(acc)
    }

    /// Splits into the part supported on `assigned` (evaluated) and the rest.
    pub fn partial_eval(&self, assigned: &BTreeMap<String, Rational>) -> (Rational, Monomial) {
        let mut value = Rational::one();
        let mut rest = BTreeMap::new();
        for (name, e) in &self.exps {
            match assigned.get(name) {
                Some(v) => {
                    for _ in 0..*e {
                        value *= v;
                    }
                }
                None => {
                    rest.insert(name.clone(), *e);
                }
            }
        }
        (value, Monomial { exps: rest })
    }
}

/// Graded lexicographic order: first by total degree, then lexicographically
/// by exponent vectors with parameter names taken in alphabetical order
/// (a higher exponent on an earlier name wins). This is the single canonical
/// term order of the crate.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let mut lhs = self.exps.iter().peekable();
        let mut rhs = other.exps.iter().peekable();
        loop {
            match (lhs.peek(), rhs.peek()) {
                (None, None) => return Ordering::Equal,
                // The side that still has a variable has a positive exponent
                // on a name the other lacks.
                (Some((ln, _)), Some((rn, _))) if ln < rn => return Ordering::Greater,
                (Some((ln, _)), Some((rn, _))) if ln > rn => return Ordering::Less,
                (Some((_, le)), Some((_, re))) => {
                    if le != re {
                        return le.cmp(re);
                    }
                    lhs.next();
                    rhs.next();
                }
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
            }
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
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (name, e) in &self.exps {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(pairs: &[(&str, u32)]) -> Monomial {
        Monomial::from_pairs(pairs.iter().map(|(n, e)| (n.to_string(), *e)))
    }

    #[test]
    fn graded_lex_order() {
        // degree dominates
        assert!(m(&[("b", 2)]) > m(&[("a", 1)]));
        // same degree: earlier name with higher exponent wins
        assert!(m(&[("a", 2)]) > m(&[("a", 1), ("b", 1)]));
        assert!(m(&[("a", 1), ("b", 1)]) > m(&[("b", 2)]));
        assert!(m(&[("a", 1)]) > m(&[("b", 1)]));
        assert!(m(&[("a", 1)]) > Monomial::one());
    }

    #[test]
    fn zero_exponents_never_stored() {
        let mono = Monomial::from_pairs(vec![("a".to_string(), 0), ("b".to_string(), 2)]);
        assert_eq!(mono.exponent("a"), 0);
        assert_eq!(mono.to_string(), "b^2");
        assert_eq!(mono.iter().count(), 1);
    }

    #[test]
    fn display_forms() {
        assert_eq!(Monomial::one().to_string(), "1");
        assert_eq!(m(&[("a", 1), ("b", 1)]).to_string(), "a*b");
        assert_eq!(m(&[("a", 2), ("b", 3)]).to_string(), "a^2*b^3");
    }
}
