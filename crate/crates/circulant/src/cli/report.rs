//! The serialized analysis report.
//!
//! Reports are byte-stable: identical inputs produce identical bytes. All
//! tensors are serialized sparsely (nonzero components only) with 1-based
//! indices in ascending index order, and every scalar is printed in the
//! canonical expression syntax, so a report can be re-parsed into the exact
//! values it was produced from.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::schema::InputDoc;
use crate::constraints::{ConstraintSet, Verdict};
use crate::exactnum::{Rational, ScalarExpr};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub input: InputEcho,
    pub validation: ValidationBlock,
    /// Nonzero connection coefficients as `{indices: [i, j, k], value}`,
    /// the `e_k`-coefficient of the derivative of `e_j` along `e_i`.
    pub connection: Vec<TensorEntry>,
    /// Nonzero covariant curvature components `R_ijkl`.
    pub curvature: Vec<TensorEntry>,
    /// Full Ricci matrix, row by row.
    pub ricci: Vec<Vec<String>>,
    pub scalar_curvature: String,
    /// Sectional curvatures of the nondegenerate basic planes `(e_i, e_j)`,
    /// `i < j`.
    pub sectional_basic_planes: Vec<PlaneCurvature>,
    /// Nonzero components of the structure tensor `F`.
    pub structure_tensor: Vec<TensorEntry>,
    /// Lee form components.
    pub lee_form: Vec<String>,
    /// Canonical constraint sets, keyed by set name.
    pub constraint_sets: BTreeMap<String, ConstraintSetDoc>,
    /// Exact verdicts per constraint set; present when the analysis is fully
    /// concrete (no free parameters remain).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point_evaluations: Option<BTreeMap<String, VerdictDoc>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InputEcho {
    #[serde(flatten)]
    pub document: InputDoc,
    /// The parameter assignment applied before analysis, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assignment: Option<BTreeMap<String, String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidationBlock {
    pub antisymmetry: bool,
    pub jacobi_residual_empty: bool,
    pub q4_is_identity: bool,
    pub q2_not_plus_minus_identity: bool,
    pub isometry: bool,
    pub p_squared_is_identity: bool,
    pub p_not_plus_minus_identity: bool,
    pub trace_p: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TensorEntry {
    pub indices: Vec<usize>,
    pub value: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlaneCurvature {
    pub plane: [usize; 2],
    pub value: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstraintSetDoc {
    /// Canonical polynomials whose common vanishing is the property.
    pub polys: Vec<String>,
    /// Cleared denominators assumed nonvanishing.
    pub assumptions: Vec<String>,
}

impl ConstraintSetDoc {
    pub fn from_set(set: &ConstraintSet) -> Self {
        Self {
            polys: set.polys().iter().map(|p| p.to_string()).collect(),
            assumptions: set.assumptions().iter().map(|p| p.to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerdictDoc {
    pub satisfied: bool,
    pub nonzero_residuals: Vec<ResidualDoc>,
    pub violated_assumptions: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResidualDoc {
    pub poly: String,
    pub value: String,
}

impl VerdictDoc {
    pub fn from_verdict(v: &Verdict) -> Self {
        Self {
            satisfied: v.satisfied,
            nonzero_residuals: v
                .nonzero
                .iter()
                .map(|(p, val)| ResidualDoc {
                    poly: p.to_string(),
                    value: val.to_string(),
                })
                .collect(),
            violated_assumptions: v
                .violated_assumptions
                .iter()
                .map(|p| p.to_string())
                .collect(),
        }
    }
}

impl AnalysisReport {
    /// Canonical serialized form (pretty JSON plus trailing newline).
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(src: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(src)
    }
}

pub(crate) fn entry3(i: usize, j: usize, k: usize, value: &ScalarExpr) -> TensorEntry {
    TensorEntry {
        indices: vec![i, j, k],
        value: value.to_string(),
    }
}

pub(crate) fn entry4(i: usize, j: usize, k: usize, l: usize, value: &ScalarExpr) -> TensorEntry {
    TensorEntry {
        indices: vec![i, j, k, l],
        value: value.to_string(),
    }
}

pub(crate) fn assignment_doc(values: &BTreeMap<String, Rational>) -> BTreeMap<String, String> {
    values
        .iter()
        .map(|(k, v)| (k.clone(), v.to_string()))
        .collect()
}
