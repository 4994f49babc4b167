//! Polynomial constraint sets: canonicalization, exact evaluation, grid
//! sweeps, and pointwise equivalence checks.
//!
//! A constraint set is a finite list of polynomials whose common vanishing
//! encodes a geometric property. Sets are canonicalized so that identical
//! properties always produce identical sets: every polynomial has integer
//! coefficients with content 1 and a positive leading coefficient, duplicates
//! and zeros are dropped, and the list is sorted. All evaluation is exact
//! rational arithmetic; "satisfied" means exactly zero, never a tolerance.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::exactnum::{parse_polynomial, ExprError, Polynomial, Rational, ScalarExpr};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstraintError {
    #[error("grid specification error: {0}")]
    Grid(String),
    #[error("cannot parse inequality filter `{src}`: {err}")]
    Filter { src: String, err: String },
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// A canonicalized finite set of polynomials, together with the cleared
/// denominators recorded as nonvanishing assumptions.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConstraintSet {
    polys: Vec<Polynomial>,
    assumptions: Vec<Polynomial>,
}

impl ConstraintSet {
    /// Canonicalizes a list of scalar residuals. Denominators are cleared
    /// into the assumption list; numerators are normalized, deduplicated and
    /// sorted; zero residuals are dropped.
    pub fn canonicalize(raw: &[ScalarExpr]) -> Self {
        let mut polys = Vec::new();
        let mut assumptions = Vec::new();
        for expr in raw {
            if expr.is_zero() {
                continue;
            }
            let (num, _) = expr.num().primitive();
            polys.push(num);
            if expr.as_polynomial().is_none() {
                let (den, _) = expr.den().primitive();
                if !den.is_constant() {
                    assumptions.push(den);
                }
            }
        }
        polys.sort();
        polys.dedup();
        assumptions.sort();
        assumptions.dedup();
        Self { polys, assumptions }
    }

    pub fn from_polynomials(raw: Vec<Polynomial>) -> Self {
        let exprs: Vec<ScalarExpr> = raw.into_iter().map(ScalarExpr::from_poly).collect();
        Self::canonicalize(&exprs)
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn assumptions(&self) -> &[Polynomial] {
        &self.assumptions
    }

    /// Union of the parameters of all member polynomials.
    pub fn parameters(&self) -> Vec<String> {
        let mut vars = std::collections::BTreeSet::new();
        for p in self.polys.iter().chain(&self.assumptions) {
            vars.extend(p.variables());
        }
        vars.into_iter().collect()
    }

    /// Exact evaluation at a point covering all parameters of the set.
    pub fn evaluate(&self, at: &BTreeMap<String, Rational>) -> Result<Verdict, ExprError> {
        let mut nonzero = Vec::new();
        for p in &self.polys {
            let v = p.eval(at)?;
            if !v.is_zero() {
                nonzero.push((p.clone(), v));
            }
        }
        let mut violated = Vec::new();
        for p in &self.assumptions {
            if p.eval(at)?.is_zero() {
                violated.push(p.clone());
            }
        }
        Ok(Verdict {
            satisfied: nonzero.is_empty(),
            nonzero,
            violated_assumptions: violated,
        })
    }
}

impl fmt::Display for ConstraintSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.polys.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

/// The result of evaluating a constraint set at one point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    /// True iff every member polynomial vanishes at the point.
    pub satisfied: bool,
    /// Members that did not vanish, with their values.
    pub nonzero: Vec<(Polynomial, Rational)>,
    /// Assumption polynomials (cleared denominators) that vanish at the
    /// point; the verdict is unreliable there.
    pub violated_assumptions: Vec<Polynomial>,
}

/// One comparison chain such as `-1 <= b <= a <= 1` or `a*b != 0`, evaluated
/// exactly at grid points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InequalityFilter {
    source: String,
    first: Polynomial,
    rest: Vec<(Relation, Polynomial)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Relation {
    Le,
    Lt,
    Ge,
    Gt,
    Ne,
    Eq,
}

impl InequalityFilter {
    /// Parses a chain `expr (relop expr)+` with relops `<= < >= > != = ==`.
    /// The expressions use the ordinary polynomial grammar.
    pub fn parse(src: &str, params: &[String]) -> Result<Self, ConstraintError> {
        let mut pieces = Vec::new();
        let mut ops = Vec::new();
        let mut rest = src;
        loop {
            match find_relop(rest) {
                Some((idx, op, width)) => {
                    pieces.push(&rest[..idx]);
                    ops.push(op);
                    rest = &rest[idx + width..];
                }
                None => {
                    pieces.push(rest);
                    break;
                }
            }
        }
        if ops.is_empty() {
            return Err(ConstraintError::Filter {
                src: src.to_string(),
                err: "no comparison operator found".to_string(),
            });
        }
        let mut exprs = pieces.iter().map(|p| {
            parse_polynomial(p.trim(), params).map_err(|e| ConstraintError::Filter {
                src: src.to_string(),
                err: e.to_string(),
            })
        });
        let first = exprs.next().unwrap()?;
        let mut chain = Vec::new();
        for (op, e) in ops.into_iter().zip(exprs) {
            chain.push((op, e?));
        }
        Ok(Self {
            source: src.to_string(),
            first,
            rest: chain,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// True iff every adjacent comparison in the chain holds at the point.
    pub fn holds(&self, at: &BTreeMap<String, Rational>) -> Result<bool, ExprError> {
        let mut prev = self.first.eval(at)?;
        for (op, rhs) in &self.rest {
            let next = rhs.eval(at)?;
            let ok = match op {
                Relation::Le => prev <= next,
                Relation::Lt => prev < next,
                Relation::Ge => prev >= next,
                Relation::Gt => prev > next,
                Relation::Ne => prev != next,
                Relation::Eq => prev == next,
            };
            if !ok {
                return Ok(false);
            }
            prev = next;
        }
        Ok(true)
    }
}

fn find_relop(s: &str) -> Option<(usize, Relation, usize)> {
    let bytes = s.as_bytes();
    for i in 0..bytes.len() {
        let two = if i + 1 < bytes.len() {
            &s[i..i + 2]
        } else {
            ""
        };
        match two {
            "<=" => return Some((i, Relation::Le, 2)),
            ">=" => return Some((i, Relation::Ge, 2)),
            "!=" => return Some((i, Relation::Ne, 2)),
            "==" => return Some((i, Relation::Eq, 2)),
            _ => {}
        }
        match bytes[i] {
            b'<' => return Some((i, Relation::Lt, 1)),
            b'>' => return Some((i, Relation::Gt, 1)),
            b'=' => return Some((i, Relation::Eq, 1)),
            _ => {}
        }
    }
    None
}

/// One sweep axis: an inclusive range of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridAxis {
    pub name: String,
    pub start: Rational,
    pub end: Rational,
    pub step: Rational,
}

impl GridAxis {
    pub fn values(&self) -> Vec<Rational> {
        let mut out = Vec::new();
        let mut v = self.start.clone();
        while v <= self.end {
            out.push(v.clone());
            v += &self.step;
        }
        out
    }
}

/// A rectangular grid of exact rational points with optional inequality
/// filters. Axes are kept sorted by parameter name, so enumeration order is
/// lexicographic in parameter values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridSpec {
    axes: Vec<GridAxis>,
    filters: Vec<InequalityFilter>,
}

impl GridSpec {
    pub fn new(
        mut axes: Vec<GridAxis>,
        filters: Vec<InequalityFilter>,
    ) -> Result<Self, ConstraintError> {
        for axis in &axes {
            if axis.start > axis.end {
                return Err(ConstraintError::Grid(format!(
                    "axis `{}`: start exceeds end",
                    axis.name
                )));
            }
            if axis.step <= Rational::zero() {
                return Err(ConstraintError::Grid(format!(
                    "axis `{}`: step must be positive",
                    axis.name
                )));
            }
        }
        axes.sort_by(|x, y| x.name.cmp(&y.name));
        for w in axes.windows(2) {
            if w[0].name == w[1].name {
                return Err(ConstraintError::Grid(format!(
                    "duplicate axis `{}`",
                    w[0].name
                )));
            }
        }
        Ok(Self { axes, filters })
    }

    /// Parses the textual grid syntax `name=start:end:step` joined by `;`,
    /// with values written as rational literals, e.g.
    /// `a=-1:1:1/8;b=-1:1:1/8`.
    pub fn parse(src: &str, filters: Vec<InequalityFilter>) -> Result<Self, ConstraintError> {
        let mut axes = Vec::new();
        for chunk in src.split(';') {
            let chunk = chunk.trim();
            if chunk.is_empty() {
                continue;
            }
            let (name, range) = chunk.split_once('=').ok_or_else(|| {
                ConstraintError::Grid(format!("expected `name=start:end:step` in `{chunk}`"))
            })?;
            let parts: Vec<&str> = range.split(':').collect();
            if parts.len() != 3 {
                return Err(ConstraintError::Grid(format!(
                    "expected `start:end:step` in `{chunk}`"
                )));
            }
            let parse = |s: &str| -> Result<Rational, ConstraintError> {
                s.trim()
                    .parse::<Rational>()
                    .map_err(|e| ConstraintError::Grid(format!("bad rational `{s}`: {e}")))
            };
            axes.push(GridAxis {
                name: name.trim().to_string(),
                start: parse(parts[0])?,
                end: parse(parts[1])?,
                step: parse(parts[2])?,
            });
        }
        if axes.is_empty() {
            return Err(ConstraintError::Grid(
                "empty grid specification".to_string(),
            ));
        }
        Self::new(axes, filters)
    }

    pub fn axes(&self) -> &[GridAxis] {
        &self.axes
    }

    pub fn filters(&self) -> &[InequalityFilter] {
        &self.filters
    }

    /// All grid points passing the filters, in lexicographic order of
    /// parameter values (axes alphabetical by name).
    pub fn points(&self) -> Result<Vec<BTreeMap<String, Rational>>, ExprError> {
        let axis_values: Vec<(String, Vec<Rational>)> = self
            .axes
            .iter()
            .map(|a| (a.name.clone(), a.values()))
            .collect();
        let mut out = Vec::new();
        let mut idx = vec![0usize; axis_values.len()];
        'outer: loop {
            let point: BTreeMap<String, Rational> = axis_values
                .iter()
                .zip(&idx)
                .map(|((n, vs), &i)| (n.clone(), vs[i].clone()))
                .collect();
            let mut keep = true;
            for f in &self.filters {
                if !f.holds(&point)? {
                    keep = false;
                    break;
                }
            }
            if keep {
                out.push(point);
            }
            // advance odometer, last axis fastest
            for k in (0..idx.len()).rev() {
                idx[k] += 1;
                if idx[k] < axis_values[k].1.len() {
                    continue 'outer;
                }
                idx[k] = 0;
                if k == 0 {
                    break 'outer;
                }
            }
            if idx.iter().all(|&i| i == 0) {
                break;
            }
        }
        Ok(out)
    }
}

/// Exact sweep: evaluates the set at every filtered grid point and returns
/// the satisfying assignments in deterministic (lexicographic) order.
pub fn sweep(
    cs: &ConstraintSet,
    grid: &GridSpec,
) -> Result<Vec<BTreeMap<String, Rational>>, ExprError> {
    let mut hits = Vec::new();
    for point in grid.points()? {
        if cs.evaluate(&point)?.satisfied {
            hits.push(point);
        }
    }
    Ok(hits)
}

/// Outcome of comparing two constraint sets pointwise over a grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub equivalent: bool,
    pub points_checked: usize,
    /// First point where the two verdicts differ, with (first, second)
    /// satisfaction flags.
    pub counterexample: Option<(BTreeMap<String, Rational>, bool, bool)>,
}

/// Checks whether two sets have the same truth value at every filtered grid
/// point.
pub fn equivalent_on_grid(
    a: &ConstraintSet,
    b: &ConstraintSet,
    grid: &GridSpec,
) -> Result<EquivalenceReport, ExprError> {
    let mut checked = 0;
    for point in grid.points()? {
        checked += 1;
        let sa = a.evaluate(&point)?.satisfied;
        let sb = b.evaluate(&point)?.satisfied;
        if sa != sb {
            return Ok(EquivalenceReport {
                equivalent: false,
                points_checked: checked,
                counterexample: Some((point, sa, sb)),
            });
        }
    }
    Ok(EquivalenceReport {
        equivalent: true,
        points_checked: checked,
        counterexample: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, ratio};

    fn ab() -> Vec<String> {
        vec!["a".to_string(), "b".to_string()]
    }

    fn poly(src: &str) -> Polynomial {
        parse_polynomial(src, &ab()).unwrap()
    }

    fn pt(a: Rational, b: Rational) -> BTreeMap<String, Rational> {
        [("a".to_string(), a), ("b".to_string(), b)].into()
    }

    #[test]
    fn canonicalize_scales_and_drops() {
        let raw = vec![
            ScalarExpr::from_poly(poly("2*a - 2*b")),
            ScalarExpr::from_poly(poly("a - b")),
            ScalarExpr::zero(),
        ];
        let cs = ConstraintSet::canonicalize(&raw);
        assert_eq!(cs.polys().len(), 1);
        assert_eq!(cs.polys()[0].to_string(), "a - b");
        assert!(cs.assumptions().is_empty());
    }

    #[test]
    fn canonicalize_sign_normalization() {
        let raw = vec![
            ScalarExpr::from_poly(poly("b^2 - a")),
            ScalarExpr::from_poly(poly("-a + b^2")),
        ];
        let cs = ConstraintSet::canonicalize(&raw);
        assert_eq!(cs.polys().len(), 1);
        assert_eq!(cs.polys()[0].to_string(), "b^2 - a");
    }

    #[test]
    fn canonicalize_idempotent() {
        let raw = vec![
            ScalarExpr::from_poly(poly("4*a^2 - 4")),
            ScalarExpr::from_poly(poly("-3*b + 3")),
            ScalarExpr::from_poly(poly("a^2 - 1")),
        ];
        let once = ConstraintSet::canonicalize(&raw);
        let again = ConstraintSet::from_polynomials(once.polys().to_vec());
        assert_eq!(once, again);
    }

    #[test]
    fn denominators_become_assumptions() {
        let a = ScalarExpr::var("a");
        let b = ScalarExpr::var("b");
        let residual = (&a - &b).checked_div(&(&a + &b)).unwrap();
        let cs = ConstraintSet::canonicalize(&[residual]);
        assert_eq!(cs.polys()[0].to_string(), "a - b");
        assert_eq!(cs.assumptions()[0].to_string(), "a + b");
        let v = cs.evaluate(&pt(rat(1), rat(-1))).unwrap();
        assert!(!v.violated_assumptions.is_empty());
    }

    #[test]
    fn evaluate_reports_residuals() {
        let cs = ConstraintSet::from_polynomials(vec![poly("a - 1"), poly("a - b^2")]);
        let sat = cs.evaluate(&pt(rat(1), rat(1))).unwrap();
        assert!(sat.satisfied);
        let unsat = cs.evaluate(&pt(rat(-1), rat(-1))).unwrap();
        assert!(!unsat.satisfied);
        assert_eq!(unsat.nonzero.len(), 2);
        // empty set is vacuously satisfied
        assert!(
            ConstraintSet::empty()
                .evaluate(&pt(rat(5), rat(7)))
                .unwrap()
                .satisfied
        );
    }

    #[test]
    fn grid_parsing_and_enumeration() {
        let g = GridSpec::parse("a=-1:1:1/2", vec![]).unwrap();
        let pts = g.points().unwrap();
        let values: Vec<String> = pts.iter().map(|p| p["a"].to_string()).collect();
        assert_eq!(values, ["-1", "-1/2", "0", "1/2", "1"]);
        assert!(GridSpec::parse("a=1:0:1/2", vec![]).is_err());
        assert!(GridSpec::parse("a=0:1:0", vec![]).is_err());
        assert!(GridSpec::parse("garbage", vec![]).is_err());
    }

    #[test]
    fn filters_apply_exactly() {
        let filters = vec![
            InequalityFilter::parse("a*b != 0", &ab()).unwrap(),
            InequalityFilter::parse("-1 <= b <= a <= 1", &ab()).unwrap(),
        ];
        let g = GridSpec::parse("a=-1:1:1;b=-1:1:1", filters).unwrap();
        let pts = g.points().unwrap();
        // surviving points: b <= a, neither zero
        let expect = [(rat(-1), rat(-1)), (rat(1), rat(-1)), (rat(1), rat(1))];
        assert_eq!(pts.len(), expect.len());
        for (p, (ea, eb)) in pts.iter().zip(expect) {
            assert_eq!(p["a"], ea);
            assert_eq!(p["b"], eb);
        }
    }

    #[test]
    fn sweep_isolates_solutions() {
        let cs = ConstraintSet::from_polynomials(vec![poly("a - 1"), poly("b - 1")]);
        let g = GridSpec::parse("a=-1:1:1/8;b=-1:1:1/8", vec![]).unwrap();
        let hits = sweep(&cs, &g).unwrap();
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0]["a"], rat(1));
        assert_eq!(hits[0]["b"], rat(1));
    }

    #[test]
    fn sweep_respects_refinement() {
        let cs = ConstraintSet::from_polynomials(vec![poly("a - b")]);
        let coarse = GridSpec::parse("a=0:1:1/2;b=0:1:1/2", vec![]).unwrap();
        let fine = GridSpec::parse("a=0:1:1/4;b=0:1:1/4", vec![]).unwrap();
        let coarse_hits = sweep(&cs, &coarse).unwrap();
        let fine_hits = sweep(&cs, &fine).unwrap();
        for hit in &coarse_hits {
            assert!(fine_hits.contains(hit));
        }
    }

    #[test]
    fn equivalence_finds_counterexample() {
        let a = ConstraintSet::from_polynomials(vec![poly("a - b")]);
        let b = ConstraintSet::from_polynomials(vec![poly("a - b"), poly("a - 1")]);
        let g = GridSpec::parse("a=0:1:1/2;b=0:1:1/2", vec![]).unwrap();
        let report = equivalent_on_grid(&a, &b, &g).unwrap();
        assert!(!report.equivalent);
        let (point, sa, sb) = report.counterexample.unwrap();
        assert_eq!(point["a"], point["b"]);
        assert_ne!(point["a"], rat(1));
        assert!(sa && !sb);
        let _ = ratio(1, 2);
    }
}
