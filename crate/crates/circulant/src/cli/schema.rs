//! The JSON input schema and its translation into validated model objects.
//!
//! An input document looks like
//!
//! ```json
//! {
//!   "dimension": 4,
//!   "parameters": ["a", "b"],
//!   "brackets": [
//!     {"i": 1, "j": 4, "k": 1, "coef": "1"},
//!     {"i": 2, "j": 4, "k": 2, "coef": "a"},
//!     {"i": 3, "j": 4, "k": 3, "coef": "b"}
//!   ],
//!   "metric": "identity",
//!   "Q": "circulant-shift",
//!   "domain": ["-1 <= b <= a <= 1", "a*b != 0"]
//! }
//! ```
//!
//! Brackets are sparse with 1-based indices and `i < j`; the antisymmetric
//! completion is implicit. `metric` and `Q` accept either the keyword shown
//! or a full square matrix of expression strings. `domain` entries are
//! comparison chains over the parameters; they are metadata for symbolic
//! work and become point filters during sweeps.

use serde::{Deserialize, Serialize};

use super::AppError;
use crate::exactnum::{parse_scalar, ScalarExpr};
use crate::geometry::{GeometryError, MetricTensor};
use crate::liealg::{
    builtin_family_symbolic, make_lie_algebra, BuiltinFamily, LieAlgebra, LieAlgebraError,
};
use crate::structures::{circulant_shift, Endomorphism};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDoc {
    pub dimension: usize,
    #[serde(default)]
    pub parameters: Vec<String>,
    #[serde(default)]
    pub brackets: Vec<BracketDoc>,
    #[serde(default)]
    pub metric: MetricDoc,
    #[serde(rename = "Q", default)]
    pub q: QDoc,
    #[serde(default)]
    pub domain: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketDoc {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub coef: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MetricDoc {
    Keyword(String),
    Matrix(Vec<Vec<String>>),
}

impl Default for MetricDoc {
    fn default() -> Self {
        MetricDoc::Keyword("identity".to_string())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QDoc {
    Keyword(String),
    Matrix(Vec<Vec<String>>),
}

impl Default for QDoc {
    fn default() -> Self {
        QDoc::Keyword("circulant-shift".to_string())
    }
}

/// A fully validated input: the algebra, the metric with its exact inverse,
/// and the structure endomorphism.
#[derive(Debug, Clone)]
pub struct Model {
    pub algebra: LieAlgebra,
    pub metric: MetricTensor,
    pub q: Endomorphism,
    /// True when `q` is exactly the circulant shift of the dimension; the
    /// reduced invariance list is only meaningful in that case.
    pub q_is_circulant_shift: bool,
}

impl Model {
    /// Substitutes exact parameter values into the algebra, the metric and
    /// the structure. A metric that becomes singular at the point is
    /// reported as such.
    pub fn substitute(&self, at: &crate::liealg::ParameterAssignment) -> Result<Model, AppError> {
        let algebra = self
            .algebra
            .substitute(at)
            .map_err(|e| AppError::Schema(e.to_string()))?;
        let subst_matrix = |rows: &[Vec<ScalarExpr>]| -> Result<Vec<Vec<ScalarExpr>>, AppError> {
            rows.iter()
                .map(|row| {
                    row.iter()
                        .map(|entry| {
                            entry
                                .substitute(&at.values)
                                .map_err(|e| AppError::Schema(e.to_string()))
                        })
                        .collect()
                })
                .collect()
        };
        let metric =
            MetricTensor::new(subst_matrix(self.metric.entries())?).map_err(|e| match e {
                GeometryError::SingularMetric => AppError::SingularMetric(format!(
                    "metric becomes singular under the assignment: {e}"
                )),
                other => AppError::Schema(other.to_string()),
            })?;
        let q = Endomorphism::new(subst_matrix(self.q.rows())?);
        let n = algebra.dim();
        let shift = circulant_shift(n).map_err(|e| AppError::Schema(e.to_string()))?;
        let q_is_circulant_shift =
            (1..=n).all(|i| (1..=n).all(|j| q.entry(i, j) == shift.entry(i, j)));
        Ok(Model {
            algebra,
            metric,
            q,
            q_is_circulant_shift,
        })
    }
}

impl InputDoc {
    /// The synthesized document for a built-in family, used both to load the
    /// family and to echo it into reports.
    pub fn for_family(id: BuiltinFamily) -> Self {
        let algebra = builtin_family_symbolic(id);
        let brackets = match id {
            BuiltinFamily::G45 => vec![
                BracketDoc {
                    i: 1,
                    j: 4,
                    k: 1,
                    coef: "1".into(),
                },
                BracketDoc {
                    i: 2,
                    j: 4,
                    k: 2,
                    coef: "a".into(),
                },
                BracketDoc {
                    i: 3,
                    j: 4,
                    k: 3,
                    coef: "b".into(),
                },
            ],
            BuiltinFamily::G46 => vec![
                BracketDoc {
                    i: 1,
                    j: 4,
                    k: 1,
                    coef: "a".into(),
                },
                BracketDoc {
                    i: 2,
                    j: 4,
                    k: 2,
                    coef: "b".into(),
                },
                BracketDoc {
                    i: 2,
                    j: 4,
                    k: 3,
                    coef: "-1".into(),
                },
                BracketDoc {
                    i: 3,
                    j: 4,
                    k: 2,
                    coef: "1".into(),
                },
                BracketDoc {
                    i: 3,
                    j: 4,
                    k: 3,
                    coef: "b".into(),
                },
            ],
        };
        InputDoc {
            dimension: 4,
            parameters: algebra.params().to_vec(),
            brackets,
            metric: MetricDoc::default(),
            q: QDoc::default(),
            domain: algebra.domain_notes().to_vec(),
        }
    }

    pub fn from_json(src: &str) -> Result<Self, AppError> {
        serde_json::from_str(src).map_err(|e| AppError::Schema(e.to_string()))
    }

    /// Validates the document into model objects, classifying failures by
    /// exit status: schema problems, Jacobi violations and singular metrics
    /// are distinct errors.
    pub fn build(&self) -> Result<Model, AppError> {
        let n = self.dimension;
        if n == 0 {
            return Err(AppError::Schema("dimension must be positive".to_string()));
        }
        let params = self.parameters.clone();
        let mut brackets = Vec::new();
        for b in &self.brackets {
            let coef = parse_scalar(&b.coef, &params).map_err(|e| {
                AppError::Schema(format!(
                    "bracket ({}, {}, {}): bad coefficient `{}`: {e}",
                    b.i, b.j, b.k, b.coef
                ))
            })?;
            brackets.push((b.i, b.j, b.k, coef));
        }
        let algebra = make_lie_algebra(n, params.clone(), &brackets, self.domain.clone()).map_err(
            |e| match e {
                LieAlgebraError::JacobiViolation { .. } => AppError::Jacobi(e.to_string()),
                other => AppError::Schema(other.to_string()),
            },
        )?;
        let metric = match &self.metric {
            MetricDoc::Keyword(k) if k == "identity" => MetricTensor::identity(n),
            MetricDoc::Keyword(k) => {
                return Err(AppError::Schema(format!("unknown metric keyword `{k}`")))
            }
            MetricDoc::Matrix(rows) => {
                let entries = parse_matrix(rows, n, &params, "metric")?;
                MetricTensor::new(entries).map_err(|e| match e {
                    GeometryError::SingularMetric => AppError::SingularMetric(e.to_string()),
                    other => AppError::Schema(other.to_string()),
                })?
            }
        };
        let shift = circulant_shift(n).map_err(|e| AppError::Schema(e.to_string()))?;
        let (q, q_is_circulant_shift) = match &self.q {
            QDoc::Keyword(k) if k == "circulant-shift" => (shift, true),
            QDoc::Keyword(k) => return Err(AppError::Schema(format!("unknown Q keyword `{k}`"))),
            QDoc::Matrix(rows) => {
                let entries = parse_matrix(rows, n, &params, "Q")?;
                let q = Endomorphism::new(entries);
                let same = (1..=n).all(|i| (1..=n).all(|j| q.entry(i, j) == shift.entry(i, j)));
                (q, same)
            }
        };
        Ok(Model {
            algebra,
            metric,
            q,
            q_is_circulant_shift,
        })
    }
}

fn parse_matrix(
    rows: &[Vec<String>],
    n: usize,
    params: &[String],
    what: &str,
) -> Result<Vec<Vec<ScalarExpr>>, AppError> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(AppError::Schema(format!("{what} must be a {n}x{n} matrix")));
    }
    rows.iter()
        .map(|row| {
            row.iter()
                .map(|s| {
                    parse_scalar(s, params)
                        .map_err(|e| AppError::Schema(format!("{what} entry `{s}`: {e}")))
                })
                .collect()
        })
        .collect()
}
