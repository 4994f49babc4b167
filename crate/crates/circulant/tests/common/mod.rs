//! Shared helpers for the integration suites: an independent brute-force
//! contraction oracle, a deterministic rational point generator, and family
//! construction shortcuts.

#![allow(dead_code)]

use std::collections::BTreeMap;

use circulant::cli::{Analysis, InputDoc};
use circulant::exactnum::{Rational, ScalarExpr};
use circulant::geometry::{Curvature04, MetricTensor};
use circulant::liealg::{builtin_family, BuiltinFamily, LieAlgebra};

/// Brute-force Ricci/scalar oracle: contracts the raw component array with
/// the inverse metric by literal quadruple loops, with no symmetry
/// shortcuts. `rho(y, z) = sum_{i,m} g^{im} R_{i y z m}` and
/// `tau = sum_{j,k} g^{jk} rho(j, k)` — in dimension 4 the scalar curvature
/// is a 256-term sum. Kept deliberately separate from the library's
/// contraction path.
pub fn rho_tau_oracle(
    curv: &Curvature04,
    metric: &MetricTensor,
) -> (Vec<Vec<ScalarExpr>>, ScalarExpr) {
    let n = curv.dim();
    let mut rho = vec![vec![ScalarExpr::zero(); n]; n];
    for y in 1..=n {
        for z in 1..=n {
            let mut acc = ScalarExpr::zero();
            for i in 1..=n {
                for m in 1..=n {
                    let term = metric.inverse_entry(i, m) * curv.component(i, y, z, m);
                    acc = &acc + &term;
                }
            }
            rho[y - 1][z - 1] = acc;
        }
    }
    let mut tau = ScalarExpr::zero();
    for j in 1..=n {
        for k in 1..=n {
            tau = &tau + &(metric.inverse_entry(j, k) * &rho[j - 1][k - 1]);
        }
    }
    (rho, tau)
}

/// Deterministic 64-bit generator (splitmix64), for reproducible "random"
/// rational parameter points.
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// A rational with numerator in [-16, 16] and denominator in
    /// {1, 2, 3, 4, 5, 8}.
    pub fn rational(&mut self) -> Rational {
        let numer = (self.next_u64() % 33) as i64 - 16;
        let denoms = [1i64, 2, 3, 4, 5, 8];
        let denom = denoms[(self.next_u64() % denoms.len() as u64) as usize];
        Rational::new(numer.into(), denom.into())
    }

    /// A nonzero rational from the same distribution.
    pub fn nonzero_rational(&mut self) -> Rational {
        loop {
            let r = self.rational();
            if r != Rational::from_integer(0.into()) {
                return r;
            }
        }
    }
}

pub fn point(pairs: &[(&str, Rational)]) -> BTreeMap<String, Rational> {
    pairs
        .iter()
        .map(|(n, v)| (n.to_string(), v.clone()))
        .collect()
}

/// The fully symbolic family pipeline output.
pub fn family_analysis(id: BuiltinFamily) -> Analysis {
    let model = InputDoc::for_family(id).build().expect("family builds");
    Analysis::run(&model).expect("family analyzes")
}

/// The family instantiated at exact values of `a` and `b`.
pub fn family_at(id: BuiltinFamily, a: Rational, b: Rational) -> LieAlgebra {
    builtin_family(id, ScalarExpr::constant(a), ScalarExpr::constant(b))
        .expect("constant instantiation is a Lie algebra")
}

/// The family with both parameters tied to the single symbol `a`.
pub fn family_diagonal(id: BuiltinFamily) -> LieAlgebra {
    builtin_family(id, ScalarExpr::var("a"), ScalarExpr::var("a"))
        .expect("diagonal substitution is a Lie algebra")
}
