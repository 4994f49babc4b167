//! The analysis pipeline and the three command drivers.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::report::{assignment_doc, entry3, entry4};
use super::schema::{InputDoc, Model};
use super::{AnalysisReport, AppError, ConstraintSetDoc, InputEcho, ValidationBlock, VerdictDoc};
use crate::constraints::{equivalent_on_grid, sweep, ConstraintSet, GridSpec, InequalityFilter};
use crate::exactnum::ScalarExpr;
use crate::geometry::{
    basis_vector, curvature, levi_civita, ricci_and_scalar, sectional, Connection, Curvature04,
    GeometryError, MetricTensor,
};
use crate::liealg::{jacobi_residual, BuiltinFamily, LieAlgebra, ParameterAssignment};
use crate::structures::{
    check_q_structure, class_constraints, einstein_and_constant_curvature_constraints, f_and_theta,
    r_invariance_constraints, rloc_reduced_constraints, Covector, Endomorphism, StructureError,
    StructureReport, Tensor03,
};

/// Where a model comes from: a schema file or a built-in family.
#[derive(Debug, Clone)]
pub enum Source {
    File(PathBuf),
    Family(BuiltinFamily),
}

impl Source {
    fn load(&self) -> Result<(InputDoc, Model), AppError> {
        let doc = match self {
            Source::File(path) => {
                let text = std::fs::read_to_string(path)?;
                InputDoc::from_json(&text)?
            }
            Source::Family(id) => InputDoc::for_family(*id),
        };
        let model = doc.build()?;
        Ok((doc, model))
    }
}

/// The names of the constraint sets a report carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ConstraintSetName {
    RInvariance,
    Rloc,
    W0,
    W1,
    Einstein,
    ConstCurv,
}

impl ConstraintSetName {
    pub const ALL: [ConstraintSetName; 6] = [
        ConstraintSetName::RInvariance,
        ConstraintSetName::Rloc,
        ConstraintSetName::W0,
        ConstraintSetName::W1,
        ConstraintSetName::Einstein,
        ConstraintSetName::ConstCurv,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            ConstraintSetName::RInvariance => "r-invariance",
            ConstraintSetName::Rloc => "rloc",
            ConstraintSetName::W0 => "w0",
            ConstraintSetName::W1 => "w1",
            ConstraintSetName::Einstein => "einstein",
            ConstraintSetName::ConstCurv => "const-curv",
        }
    }
}

impl FromStr for ConstraintSetName {
    type Err = AppError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "r-invariance" => Ok(ConstraintSetName::RInvariance),
            "rloc" => Ok(ConstraintSetName::Rloc),
            "w0" => Ok(ConstraintSetName::W0),
            "w1" => Ok(ConstraintSetName::W1),
            "einstein" => Ok(ConstraintSetName::Einstein),
            "const-curv" => Ok(ConstraintSetName::ConstCurv),
            other => Err(AppError::Schema(format!(
                "unknown constraint set `{other}`; expected one of \
                 r-invariance, rloc, w0, w1, einstein, const-curv"
            ))),
        }
    }
}

impl std::fmt::Display for ConstraintSetName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.id())
    }
}

/// Everything the pipeline derives from one model.
pub struct Analysis {
    pub algebra: LieAlgebra,
    pub metric: MetricTensor,
    pub q: Endomorphism,
    pub p: Endomorphism,
    pub structure: StructureReport,
    pub jacobi_empty: bool,
    pub connection: Connection,
    pub curvature: Curvature04,
    pub ricci: Vec<Vec<ScalarExpr>>,
    pub tau: ScalarExpr,
    pub f: Tensor03,
    pub theta: Covector,
    pub sets: BTreeMap<ConstraintSetName, ConstraintSet>,
}

impl Analysis {
    /// Runs the full pipeline on a validated model.
    pub fn run(model: &Model) -> Result<Analysis, AppError> {
        let Model {
            algebra,
            metric,
            q,
            q_is_circulant_shift,
        } = model;
        let n = algebra.dim();
        let (structure, p) = check_q_structure(q, metric);
        let connection = levi_civita(algebra, metric).map_err(geometry_err)?;
        let curv = curvature(algebra, metric, &connection);
        let (ricci, tau) = ricci_and_scalar(&curv, metric);
        let (f, theta) = f_and_theta(&connection, &p, metric);

        let mut sets = BTreeMap::new();
        sets.insert(
            ConstraintSetName::RInvariance,
            r_invariance_constraints(&curv, q),
        );
        if n == 4 && *q_is_circulant_shift {
            sets.insert(
                ConstraintSetName::Rloc,
                rloc_reduced_constraints(&curv).map_err(structure_err)?,
            );
        }
        if n == 4 {
            let (w0, w1) = class_constraints(&f, &theta, metric, &p).map_err(structure_err)?;
            sets.insert(ConstraintSetName::W0, w0);
            sets.insert(ConstraintSetName::W1, w1);
        } else {
            // W0 (a vanishing tensor) is meaningful in any dimension.
            let mut w0 = Vec::new();
            for i in 1..=n {
                for j in 1..=n {
                    for k in 1..=n {
                        w0.push(f.component(i, j, k).clone());
                    }
                }
            }
            sets.insert(ConstraintSetName::W0, ConstraintSet::canonicalize(&w0));
        }
        let (einstein, const_curv) =
            einstein_and_constant_curvature_constraints(&curv, &ricci, &tau, metric)
                .map_err(structure_err)?;
        sets.insert(ConstraintSetName::Einstein, einstein);
        sets.insert(ConstraintSetName::ConstCurv, const_curv);

        Ok(Analysis {
            jacobi_empty: jacobi_residual(algebra).is_empty(),
            algebra: algebra.clone(),
            metric: metric.clone(),
            q: q.clone(),
            p,
            structure,
            connection,
            curvature: curv,
            ricci,
            tau,
            f,
            theta,
            sets,
        })
    }

    pub fn set(&self, name: ConstraintSetName) -> Option<&ConstraintSet> {
        self.sets.get(&name)
    }

    /// Grid filters parsed from the algebra's domain notes.
    pub fn domain_filters(&self) -> Result<Vec<InequalityFilter>, AppError> {
        self.algebra
            .domain_notes()
            .iter()
            .map(|src| {
                InequalityFilter::parse(src, self.algebra.params())
                    .map_err(|e| AppError::Schema(e.to_string()))
            })
            .collect()
    }
}

fn geometry_err(e: GeometryError) -> AppError {
    match e {
        GeometryError::SingularMetric => AppError::SingularMetric(e.to_string()),
        other => AppError::Schema(other.to_string()),
    }
}

fn structure_err(e: StructureError) -> AppError {
    AppError::Schema(e.to_string())
}

/// Options for the `analyze` command.
#[derive(Debug, Clone)]
pub struct AnalyzeOptions {
    pub source: Source,
    pub assign: Option<ParameterAssignment>,
    /// Fail (exit 5) when any structure verdict is false.
    pub strict: bool,
}

/// Runs the full pipeline and assembles the serialized report.
pub fn cmd_analyze(opts: &AnalyzeOptions) -> Result<AnalysisReport, AppError> {
    let (doc, mut model) = opts.source.load()?;
    if let Some(assign) = &opts.assign {
        model = model.substitute(assign)?;
    }
    let analysis = Analysis::run(&model)?;
    if opts.strict && !analysis.structure.all_pass() {
        return Err(AppError::StructureCheck(format!(
            "Q4=id: {}, Q2 != +-id: {}, isometry: {}, P2=id: {}, P != +-id: {}",
            analysis.structure.q4_is_identity,
            analysis.structure.q2_not_plus_minus_identity,
            analysis.structure.isometry,
            analysis.structure.p_squared_is_identity,
            analysis.structure.p_not_plus_minus_identity,
        )));
    }
    build_report(&doc, &analysis, opts.assign.as_ref())
}

fn build_report(
    doc: &InputDoc,
    analysis: &Analysis,
    assign: Option<&ParameterAssignment>,
) -> Result<AnalysisReport, AppError> {
    let n = analysis.algebra.dim();
    let mut connection = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                let v = analysis.connection.coefficient(i, j, k);
                if !v.is_zero() {
                    connection.push(entry3(i, j, k, v));
                }
            }
        }
    }
    let mut curvature = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                for l in 1..=n {
                    let v = analysis.curvature.component(i, j, k, l);
                    if !v.is_zero() {
                        curvature.push(entry4(i, j, k, l, v));
                    }
                }
            }
        }
    }
    let ricci = analysis
        .ricci
        .iter()
        .map(|row| row.iter().map(|v| v.to_string()).collect())
        .collect();
    let mut planes = Vec::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            match sectional(
                &analysis.curvature,
                &analysis.metric,
                &basis_vector(i, n),
                &basis_vector(j, n),
            ) {
                Ok(k) => planes.push(super::PlaneCurvature {
                    plane: [i, j],
                    value: k.to_string(),
                }),
                Err(GeometryError::DegeneratePlane) => {}
                Err(e) => return Err(AppError::Schema(e.to_string())),
            }
        }
    }
    let mut structure_tensor = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                let v = analysis.f.component(i, j, k);
                if !v.is_zero() {
                    structure_tensor.push(entry3(i, j, k, v));
                }
            }
        }
    }
    let lee_form = (1..=n)
        .map(|k| analysis.theta.component(k).to_string())
        .collect();
    let mut constraint_sets = BTreeMap::new();
    for (name, set) in &analysis.sets {
        constraint_sets.insert(name.id().to_string(), ConstraintSetDoc::from_set(set));
    }
    // With no free parameters left, every set can be decided outright.
    let point_evaluations = if analysis.algebra.params().is_empty() {
        let empty = BTreeMap::new();
        let mut verdicts = BTreeMap::new();
        for (name, set) in &analysis.sets {
            let verdict = set
                .evaluate(&empty)
                .map_err(|e| AppError::Schema(e.to_string()))?;
            verdicts.insert(name.id().to_string(), VerdictDoc::from_verdict(&verdict));
        }
        Some(verdicts)
    } else {
        None
    };
    Ok(AnalysisReport {
        input: InputEcho {
            document: doc.clone(),
            assignment: assign.map(|a| assignment_doc(&a.values)),
        },
        validation: ValidationBlock {
            antisymmetry: true,
            jacobi_residual_empty: analysis.jacobi_empty,
            q4_is_identity: analysis.structure.q4_is_identity,
            q2_not_plus_minus_identity: analysis.structure.q2_not_plus_minus_identity,
            isometry: analysis.structure.isometry,
            p_squared_is_identity: analysis.structure.p_squared_is_identity,
            p_not_plus_minus_identity: analysis.structure.p_not_plus_minus_identity,
            trace_p: analysis.structure.trace_p.to_string(),
        },
        connection,
        curvature,
        ricci,
        scalar_curvature: analysis.tau.to_string(),
        sectional_basic_planes: planes,
        structure_tensor,
        lee_form,
        constraint_sets,
        point_evaluations,
    })
}

/// Output of the `sweep` command: the satisfying grid points in
/// lexicographic order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepOutput {
    pub set: String,
    pub grid: String,
    pub filters: Vec<String>,
    pub count: usize,
    pub points: Vec<BTreeMap<String, String>>,
}

/// Sweeps one named constraint set over an exact rational grid, skipping
/// points that violate the algebra's domain conditions.
pub fn cmd_sweep(
    source: &Source,
    set_name: ConstraintSetName,
    grid_src: &str,
) -> Result<SweepOutput, AppError> {
    let (_, model) = source.load()?;
    let analysis = Analysis::run(&model)?;
    let set = analysis.set(set_name).ok_or_else(|| {
        AppError::Schema(format!(
            "constraint set `{set_name}` is not available for this input"
        ))
    })?;
    let filters = analysis.domain_filters()?;
    let grid = GridSpec::parse(grid_src, filters).map_err(|e| AppError::Schema(e.to_string()))?;
    let grid_params: Vec<&str> = grid.axes().iter().map(|a| a.name.as_str()).collect();
    for p in set.parameters() {
        if !grid_params.contains(&p.as_str()) {
            return Err(AppError::Schema(format!(
                "grid does not cover parameter `{p}` of the `{set_name}` set"
            )));
        }
    }
    let hits = sweep(set, &grid).map_err(|e| AppError::Schema(e.to_string()))?;
    Ok(SweepOutput {
        set: set_name.id().to_string(),
        grid: grid_src.to_string(),
        filters: grid
            .filters()
            .iter()
            .map(|f| f.source().to_string())
            .collect(),
        count: hits.len(),
        points: hits
            .into_iter()
            .map(|p| p.iter().map(|(k, v)| (k.clone(), v.to_string())).collect())
            .collect(),
    })
}

/// Output of the `oracle` command: pointwise comparison of the full
/// curvature-invariance set against the reduced component list.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleOutput {
    pub equivalent: bool,
    pub points_checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<OracleCounterexample>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleCounterexample {
    pub point: BTreeMap<String, String>,
    pub full_satisfied: bool,
    pub reduced_satisfied: bool,
}

/// Compares the full invariance constraints against the reduced list on a
/// grid. Requires dimension 4 with the circulant-shift structure.
pub fn cmd_oracle(source: &Source, grid_src: &str) -> Result<OracleOutput, AppError> {
    let (_, model) = source.load()?;
    let analysis = Analysis::run(&model)?;
    let full = analysis
        .set(ConstraintSetName::RInvariance)
        .expect("always computed");
    let reduced = analysis.set(ConstraintSetName::Rloc).ok_or_else(|| {
        AppError::Schema(
            "the reduced invariance list requires dimension 4 with the circulant-shift Q"
                .to_string(),
        )
    })?;
    let grid = GridSpec::parse(grid_src, vec![]).map_err(|e| AppError::Schema(e.to_string()))?;
    oracle_equivalence(full, reduced, &grid)
}

/// The comparison engine behind [`cmd_oracle`], callable directly with any
/// two constraint sets (used by tests to inject synthetic tensors).
pub fn oracle_equivalence(
    full: &ConstraintSet,
    reduced: &ConstraintSet,
    grid: &GridSpec,
) -> Result<OracleOutput, AppError> {
    let report =
        equivalent_on_grid(full, reduced, grid).map_err(|e| AppError::Schema(e.to_string()))?;
    Ok(OracleOutput {
        equivalent: report.equivalent,
        points_checked: report.points_checked,
        counterexample: report
            .counterexample
            .map(|(point, fa, fb)| OracleCounterexample {
                point: point
                    .iter()
                    .map(|(k, v)| (k.clone(), v.to_string()))
                    .collect(),
                full_satisfied: fa,
                reduced_satisfied: fb,
            }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn analyze_family(id: BuiltinFamily, assign: Option<&str>) -> AnalysisReport {
        let opts = AnalyzeOptions {
            source: Source::Family(id),
            assign: assign.map(|s| ParameterAssignment::parse(s).unwrap()),
            strict: true,
        };
        cmd_analyze(&opts).unwrap()
    }

    #[test]
    fn symbolic_family_report_has_symbolic_curvature() {
        let report = analyze_family(BuiltinFamily::G45, None);
        let values: Vec<&str> = report
            .curvature
            .iter()
            .filter(|e| e.indices == [1, 2, 1, 2])
            .map(|e| e.value.as_str())
            .collect();
        assert_eq!(values, ["a"]);
        assert!(report.point_evaluations.is_none());
        assert!(report.validation.isometry);
        assert_eq!(report.validation.trace_p, "0");
    }

    #[test]
    fn assigned_family_report_is_concrete_and_satisfied() {
        let report = analyze_family(BuiltinFamily::G45, Some("a=1,b=1"));
        for e in &report.curvature {
            assert!(e.value == "1" || e.value == "-1", "got {}", e.value);
        }
        let evals = report.point_evaluations.unwrap();
        for set in ["r-invariance", "rloc", "w1", "einstein", "const-curv"] {
            assert!(evals[set].satisfied, "{set} not satisfied at a=b=1");
        }
        assert!(!evals["w0"].satisfied);
        assert_eq!(report.scalar_curvature, "-12");
    }

    #[test]
    fn sweep_g45_r_invariance_isolates_the_unit_point() {
        let out = cmd_sweep(
            &Source::Family(BuiltinFamily::G45),
            ConstraintSetName::RInvariance,
            "a=-1:1:1/8;b=-1:1:1/8",
        )
        .unwrap();
        assert_eq!(out.count, 1);
        assert_eq!(out.points[0]["a"], "1");
        assert_eq!(out.points[0]["b"], "1");
    }

    #[test]
    fn oracle_reports_equivalence_for_families() {
        for id in [BuiltinFamily::G45, BuiltinFamily::G46] {
            let out = cmd_oracle(&Source::Family(id), "a=-1:1:1/4;b=-1:1:1/4").unwrap();
            assert!(out.equivalent, "{id} full vs reduced disagree");
            assert_eq!(out.points_checked, 81);
        }
    }

    #[test]
    fn sweep_requires_grid_covering_parameters() {
        let err = cmd_sweep(
            &Source::Family(BuiltinFamily::G45),
            ConstraintSetName::RInvariance,
            "a=-1:1:1/8",
        )
        .unwrap_err();
        assert!(matches!(err, AppError::Schema(_)));
    }

    #[test]
    fn strict_mode_rejects_non_isometric_metric() {
        let doc = InputDoc::from_json(
            r#"{"dimension": 4,
                "metric": [["1","0","0","0"],
                           ["0","2","0","0"],
                           ["0","0","1","0"],
                           ["0","0","0","1"]]}"#,
        )
        .unwrap();
        let path = std::env::temp_dir().join("circulant-strict-test.json");
        std::fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
        let opts = AnalyzeOptions {
            source: Source::File(path.clone()),
            assign: None,
            strict: true,
        };
        let err = cmd_analyze(&opts).unwrap_err();
        assert_eq!(err.exit_code(), 5);
        // without --strict the same input analyzes fine, with the verdict
        // recorded as false
        let opts = AnalyzeOptions {
            strict: false,
            ..opts
        };
        let report = cmd_analyze(&opts).unwrap();
        assert!(!report.validation.isometry);
        std::fs::remove_file(path).ok();
        let _ = rat(0);
    }
}
