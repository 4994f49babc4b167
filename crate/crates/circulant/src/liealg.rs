//! Lie algebras given by structure constants, with validation and the two
//! built-in two-parameter families used throughout the crate.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::constraints::ConstraintSet;
use crate::exactnum::{ExprError, Rational, ScalarExpr};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieAlgebraError {
    #[error("bracket index ({i}, {j}, {k}) out of range for dimension {dim} (indices are 1-based, i < j)")]
    IndexOutOfRange {
        i: usize,
        j: usize,
        k: usize,
        dim: usize,
    },
    #[error("duplicate bracket entry for ([e_{i}, e_{j}], e_{k})")]
    DuplicateEntry { i: usize, j: usize, k: usize },
    #[error("Jacobi identity fails on (e_{i}, e_{j}, e_{k}): residual set {residuals}")]
    JacobiViolation {
        i: usize,
        j: usize,
        k: usize,
        residuals: ConstraintSet,
    },
    #[error("coordinate vector has length {got}, expected {expected}")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("`{name}` is not a declared parameter")]
    UnknownParameter { name: String },
    #[error("unknown builtin family `{0}`")]
    UnknownFamily(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// A finite-dimensional Lie algebra presented by structure constants
/// `c^k_ij` (the `e_k`-coefficient of `[e_i, e_j]`), each an exact rational
/// expression in the declared parameters. Construction validates
/// antisymmetry by building the table antisymmetrically and rejects any
/// table whose Jacobi residual is not identically zero.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra {
    dim: usize,
    params: Vec<String>,
    /// `consts[i][j][k]` is `c^k_ij`, 0-based storage.
    pub(crate) consts: Vec<Vec<Vec<ScalarExpr>>>,
    domain_notes: Vec<String>,
}

impl LieAlgebra {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    /// Human-readable inequality side conditions. Metadata only: they are
    /// never enforced symbolically, but numeric sweeps skip points that
    /// violate them.
    pub fn domain_notes(&self) -> &[String] {
        &self.domain_notes
    }

    /// Structure constant `c^k_ij` with 1-based indices, as in `e_1..e_n`.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &ScalarExpr {
        &self.consts[i - 1][j - 1][k - 1]
    }

    /// The bracket `[x, y]^k = c^k_ij x^i y^j` of two coordinate vectors.
    pub fn bracket(
        &self,
        x: &[ScalarExpr],
        y: &[ScalarExpr],
    ) -> Result<Vec<ScalarExpr>, LieAlgebraError> {
        if x.len() != self.dim {
            return Err(LieAlgebraError::DimensionMismatch {
                got: x.len(),
                expected: self.dim,
            });
        }
        if y.len() != self.dim {
            return Err(LieAlgebraError::DimensionMismatch {
                got: y.len(),
                expected: self.dim,
            });
        }
        let mut out = vec![ScalarExpr::zero(); self.dim];
        for i in 0..self.dim {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if y[j].is_zero() {
                    continue;
                }
                let xy = &x[i] * &y[j];
                for (k, out_k) in out.iter_mut().enumerate() {
                    let c = &self.consts[i][j][k];
                    if !c.is_zero() {
                        *out_k = &*out_k + &(c * &xy);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Replaces assigned parameters by exact rational values; the remaining
    /// parameters stay symbolic.
    pub fn substitute(&self, at: &ParameterAssignment) -> Result<LieAlgebra, LieAlgebraError> {
        at.check_declared(&self.params)?;
        let mut consts = self.consts.clone();
        for plane in &mut consts {
            for row in plane {
                for c in row {
                    *c = c.substitute(&at.values)?;
                }
            }
        }
        let params = self
            .params
            .iter()
            .filter(|p| !at.values.contains_key(*p))
            .cloned()
            .collect();
        Ok(LieAlgebra {
            dim: self.dim,
            params,
            consts,
            domain_notes: self.domain_notes.clone(),
        })
    }
}

/// Validated constructor from a sparse bracket table.
///
/// Each entry `(i, j, k, coef)` declares the `e_k`-coefficient of
/// `[e_i, e_j]` with 1-based indices and `i < j`; the antisymmetric
/// completion `c^k_ji = -c^k_ij` is applied automatically. Fails if the
/// Jacobi residual of the completed table is nonempty.
pub fn make_lie_algebra(
    dim: usize,
    params: Vec<String>,
    brackets: &[(usize, usize, usize, ScalarExpr)],
    domain_notes: Vec<String>,
) -> Result<LieAlgebra, LieAlgebraError> {
    let zero = ScalarExpr::zero();
    let mut consts = vec![vec![vec![zero; dim]; dim]; dim];
    let mut seen = std::collections::BTreeSet::new();
    for (i, j, k, coef) in brackets {
        let (i, j, k) = (*i, *j, *k);
        if i < 1 || j <= i || j > dim || k < 1 || k > dim {
            return Err(LieAlgebraError::IndexOutOfRange { i, j, k, dim });
        }
        if !seen.insert((i, j, k)) {
            return Err(LieAlgebraError::DuplicateEntry { i, j, k });
        }
        consts[i - 1][j - 1][k - 1] = coef.clone();
        consts[j - 1][i - 1][k - 1] = -coef;
    }
    let algebra = LieAlgebra {
        dim,
        params,
        consts,
        domain_notes,
    };
    if let Some((i, j, k, residuals)) = first_jacobi_failure(&algebra) {
        return Err(LieAlgebraError::JacobiViolation { i, j, k, residuals });
    }
    Ok(algebra)
}

/// The canonicalized residuals of
/// `[[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]` over all basis
/// triples; empty exactly when the table is a Lie algebra for every
/// parameter value.
pub fn jacobi_residual(algebra: &LieAlgebra) -> ConstraintSet {
    ConstraintSet::canonicalize(&jacobi_components(algebra))
}

fn jacobi_components(algebra: &LieAlgebra) -> Vec<ScalarExpr> {
    let n = algebra.dim;
    let c = &algebra.consts;
    let mut out = Vec::new();
    // The Jacobiator is alternating once antisymmetry holds, so i < j < k
    // covers every independent component.
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                for m in 0..n {
                    let mut acc = ScalarExpr::zero();
                    for p in 0..n {
                        acc = &acc + &(&c[i][j][p] * &c[p][k][m]);
                        acc = &acc + &(&c[j][k][p] * &c[p][i][m]);
                        acc = &acc + &(&c[k][i][p] * &c[p][j][m]);
                    }
                    out.push(acc);
                }
            }
        }
    }
    out
}

fn first_jacobi_failure(algebra: &LieAlgebra) -> Option<(usize, usize, usize, ConstraintSet)> {
    let n = algebra.dim;
    let c = &algebra.consts;
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let mut residuals = Vec::new();
                for m in 0..n {
                    let mut acc = ScalarExpr::zero();
                    for p in 0..n {
                        acc = &acc + &(&c[i][j][p] * &c[p][k][m]);
                        acc = &acc + &(&c[j][k][p] * &c[p][i][m]);
                        acc = &acc + &(&c[k][i][p] * &c[p][j][m]);
                    }
                    residuals.push(acc);
                }
                let set = ConstraintSet::canonicalize(&residuals);
                if !set.is_empty() {
                    return Some((i + 1, j + 1, k + 1, set));
                }
            }
        }
    }
    None
}

/// An exact rational value for each of a subset of the parameters.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ParameterAssignment {
    pub values: BTreeMap<String, Rational>,
}

impl ParameterAssignment {
    pub fn new(values: BTreeMap<String, Rational>) -> Self {
        Self { values }
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Parses the comma-separated `name=rational` syntax, e.g. `a=1,b=3/2`.
    pub fn parse(src: &str) -> Result<Self, LieAlgebraError> {
        let mut values = BTreeMap::new();
        for piece in src.split(',') {
            let piece = piece.trim();
            if piece.is_empty() {
                continue;
            }
            let (name, value) = piece.split_once('=').ok_or_else(|| {
                LieAlgebraError::Expr(ExprError::Syntax {
                    pos: 0,
                    msg: format!("expected `name=rational` in `{piece}`"),
                })
            })?;
            let v: Rational = value.trim().parse().map_err(|e| {
                LieAlgebraError::Expr(ExprError::Syntax {
                    pos: 0,
                    msg: format!("bad rational `{}`: {e}", value.trim()),
                })
            })?;
            values.insert(name.trim().to_string(), v);
        }
        Ok(Self { values })
    }

    /// Fails if any assigned name is not among the declared parameters.
    pub fn check_declared(&self, declared: &[String]) -> Result<(), LieAlgebraError> {
        for name in self.values.keys() {
            if !declared.contains(name) {
                return Err(LieAlgebraError::UnknownParameter { name: name.clone() });
            }
        }
        Ok(())
    }
}

/// The built-in two-parameter families of 4-dimensional Lie algebras.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinFamily {
    /// `[e1,e4] = e1`, `[e2,e4] = a e2`, `[e3,e4] = b e3`,
    /// with `-1 <= b <= a <= 1`, `ab != 0`.
    G45,
    /// `[e1,e4] = a e1`, `[e2,e4] = b e2 - e3`, `[e3,e4] = e2 + b e3`,
    /// with `a != 0`, `b >= 0`.
    G46,
}

impl BuiltinFamily {
    pub fn id(&self) -> &'static str {
        match self {
            BuiltinFamily::G45 => "g4.5",
            BuiltinFamily::G46 => "g4.6",
        }
    }
}

impl std::str::FromStr for BuiltinFamily {
    type Err = LieAlgebraError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "g4.5" | "g4_5" | "g45" => Ok(BuiltinFamily::G45),
            "g4.6" | "g4_6" | "g46" => Ok(BuiltinFamily::G46),
            other => Err(LieAlgebraError::UnknownFamily(other.to_string())),
        }
    }
}

impl fmt::Display for BuiltinFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id())
    }
}

/// Constructs a built-in family with the given expressions in place of the
/// two family parameters. Passing fresh symbols gives the fully symbolic
/// family; passing constants or repeated symbols specializes it.
pub fn builtin_family(
    id: BuiltinFamily,
    a: ScalarExpr,
    b: ScalarExpr,
) -> Result<LieAlgebra, LieAlgebraError> {
    let mut vars = a.variables();
    vars.extend(b.variables());
    let params: Vec<String> = vars.into_iter().collect();
    let one = ScalarExpr::one();
    type Brackets = Vec<(usize, usize, usize, ScalarExpr)>;
    let (brackets, notes): (Brackets, Vec<&str>) = match id {
        BuiltinFamily::G45 => (
            vec![(1, 4, 1, one), (2, 4, 2, a), (3, 4, 3, b)],
            vec!["-1 <= b <= a <= 1", "a*b != 0"],
        ),
        BuiltinFamily::G46 => (
            vec![
                (1, 4, 1, a),
                (2, 4, 2, b.clone()),
                (2, 4, 3, -&one),
                (3, 4, 2, one),
                (3, 4, 3, b),
            ],
            vec!["a != 0", "b >= 0"],
        ),
    };
    make_lie_algebra(
        4,
        params,
        &brackets,
        notes.into_iter().map(str::to_string).collect(),
    )
}

/// The fully symbolic form of a built-in family, over parameters `a`, `b`.
pub fn builtin_family_symbolic(id: BuiltinFamily) -> LieAlgebra {
    builtin_family(id, ScalarExpr::var("a"), ScalarExpr::var("b"))
        .expect("builtin families satisfy Jacobi identically")
}
