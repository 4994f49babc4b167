//! The circulant structure, the almost-product structure it squares to, the
//! structure tensor and Lee form, and the constraint generators for every
//! geometric property the crate can test.
//!
//! Properties are not evaluated as booleans on symbolic input. Instead each
//! generator expands the defining identity component by component, clears
//! denominators, and canonicalizes the residuals into a polynomial
//! constraint set whose vanishing locus is exactly the property locus.

use thiserror::Error;

use crate::constraints::ConstraintSet;
use crate::exactnum::{ratio, ScalarExpr};
use crate::geometry::{basis_vector, Connection};
use crate::geometry::{sectional, Curvature04, GeometryError, MetricTensor};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("a circulant shift needs dimension >= 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("operation requires dimension 4, got {0}")]
    DimensionNot4(usize),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// A linear endomorphism of the algebra; column `j` holds the coordinates of
/// the image of `e_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Endomorphism {
    /// `m[i][j]` is the `e_i`-coefficient of the image of `e_j`, 0-based.
    m: Vec<Vec<ScalarExpr>>,
}

impl Endomorphism {
    pub fn new(m: Vec<Vec<ScalarExpr>>) -> Self {
        let n = m.len();
        assert!(m.iter().all(|row| row.len() == n), "matrix must be square");
        Self { m }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = vec![vec![ScalarExpr::zero(); n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = ScalarExpr::one();
        }
        Self { m }
    }

    pub fn dim(&self) -> usize {
        self.m.len()
    }

    /// Matrix entry with 1-based indices: the `e_i`-coefficient of the image
    /// of `e_j`.
    pub fn entry(&self, i: usize, j: usize) -> &ScalarExpr {
        &self.m[i - 1][j - 1]
    }

    pub fn rows(&self) -> &[Vec<ScalarExpr>] {
        &self.m
    }

    /// Image of a coordinate vector.
    pub fn apply(&self, x: &[ScalarExpr]) -> Vec<ScalarExpr> {
        let n = self.dim();
        let mut out = vec![ScalarExpr::zero(); n];
        for (j, xj) in x.iter().enumerate() {
            if xj.is_zero() {
                continue;
            }
            for i in 0..n {
                if !self.m[i][j].is_zero() {
                    out[i] = &out[i] + &(&self.m[i][j] * xj);
                }
            }
        }
        out
    }

    /// Matrix product `self * other` (apply `other` first).
    pub fn compose(&self, other: &Endomorphism) -> Endomorphism {
        let n = self.dim();
        let mut m = vec![vec![ScalarExpr::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = ScalarExpr::zero();
                for k in 0..n {
                    if !self.m[i][k].is_zero() && !other.m[k][j].is_zero() {
                        acc = &acc + &(&self.m[i][k] * &other.m[k][j]);
                    }
                }
                m[i][j] = acc;
            }
        }
        Endomorphism { m }
    }

    pub fn trace(&self) -> ScalarExpr {
        let mut acc = ScalarExpr::zero();
        for i in 0..self.dim() {
            acc = &acc + &self.m[i][i];
        }
        acc
    }

    fn equals(&self, other: &Endomorphism) -> bool {
        self.dim() == other.dim()
            && self
                .m
                .iter()
                .zip(&other.m)
                .all(|(r, s)| r.iter().zip(s).all(|(x, y)| x == y))
    }

    fn negated(&self) -> Endomorphism {
        Endomorphism {
            m: self
                .m
                .iter()
                .map(|row| row.iter().map(|x| -x).collect())
                .collect(),
        }
    }
}

/// The cyclic-shift endomorphism: `e_1 -> e_n` and `e_j -> e_{j-1}` for
/// `j >= 2`. In dimension 4 its matrix is the circulant
/// `[[0,1,0,0],[0,0,1,0],[0,0,0,1],[1,0,0,0]]` and its fourth power is the
/// identity.
pub fn circulant_shift(n: usize) -> Result<Endomorphism, StructureError> {
    if n < 2 {
        return Err(StructureError::DimensionTooSmall(n));
    }
    let mut m = vec![vec![ScalarExpr::zero(); n]; n];
    // column 1: image of e_1 is e_n
    m[n - 1][0] = ScalarExpr::one();
    // column j: image of e_j is e_{j-1}
    for j in 1..n {
        m[j - 1][j] = ScalarExpr::one();
    }
    Ok(Endomorphism::new(m))
}

/// Verdicts for the defining properties of a circulant structure and of the
/// almost-product structure it induces. These are reports, not errors: every
/// check is an exact component-wise identity test, and "not equal" on
/// symbolic input means "not identically equal".
#[derive(Debug, Clone, PartialEq)]
pub struct StructureReport {
    /// `Q^4 = id`.
    pub q4_is_identity: bool,
    /// `Q^2 != +id` and `Q^2 != -id`.
    pub q2_not_plus_minus_identity: bool,
    /// `Q` is an isometry: `g(Qx, Qy) = g(x, y)` as matrices.
    pub isometry: bool,
    /// `P^2 = id` for `P = Q^2`.
    pub p_squared_is_identity: bool,
    /// `P != +id` and `P != -id`.
    pub p_not_plus_minus_identity: bool,
    /// The trace of `P`.
    pub trace_p: ScalarExpr,
}

impl StructureReport {
    pub fn all_pass(&self) -> bool {
        self.q4_is_identity
            && self.q2_not_plus_minus_identity
            && self.isometry
            && self.p_squared_is_identity
            && self.p_not_plus_minus_identity
    }
}

/// Checks the structure properties of `q` against `g` and returns the
/// verdicts together with `P = Q^2`.
pub fn check_q_structure(q: &Endomorphism, g: &MetricTensor) -> (StructureReport, Endomorphism) {
    let n = q.dim();
    let id = Endomorphism::identity(n);
    let p = q.compose(q);
    let q4 = p.compose(&p);
    let q4_is_identity = q4.equals(&id);
    let q2_not_plus_minus_identity = !p.equals(&id) && !p.equals(&id.negated());
    // isometry: g(Qe_i, Qe_j) = g_ij for all i, j
    let mut isometry = true;
    'outer: for i in 0..n {
        for j in 0..n {
            let qi = q.apply(&basis_vector(i + 1, n));
            let qj = q.apply(&basis_vector(j + 1, n));
            let lhs = g.inner(&qi, &qj).expect("dimensions agree");
            if lhs != *g.entry(i + 1, j + 1) {
                isometry = false;
                break 'outer;
            }
        }
    }
    let p2 = p.compose(&p);
    let report = StructureReport {
        q4_is_identity,
        q2_not_plus_minus_identity,
        isometry,
        p_squared_is_identity: p2.equals(&id),
        p_not_plus_minus_identity: !p.equals(&id) && !p.equals(&id.negated()),
        trace_p: p.trace(),
    };
    (report, p)
}

/// The structure tensor `F_ijk = g((D_{e_i} P) e_j, e_k)`, symmetric in its
/// last two slots.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor03 {
    /// `f[i][j][k]`, 0-based storage.
    f: Vec<Vec<Vec<ScalarExpr>>>,
}

impl Tensor03 {
    pub fn dim(&self) -> usize {
        self.f.len()
    }

    /// `F_ijk` with 1-based indices.
    pub fn component(&self, i: usize, j: usize, k: usize) -> &ScalarExpr {
        &self.f[i - 1][j - 1][k - 1]
    }

    /// Builds from 1-based sparse components; for synthetic test inputs.
    pub fn from_components(dim: usize, entries: &[(usize, usize, usize, ScalarExpr)]) -> Self {
        let mut f = vec![vec![vec![ScalarExpr::zero(); dim]; dim]; dim];
        for (i, j, k, v) in entries {
            f[i - 1][j - 1][k - 1] = v.clone();
        }
        Self { f }
    }
}

/// The Lee form `theta_k = g^{ij} F_ijk`.
#[derive(Debug, Clone, PartialEq)]
pub struct Covector {
    theta: Vec<ScalarExpr>,
}

impl Covector {
    pub fn dim(&self) -> usize {
        self.theta.len()
    }

    /// `theta_k`, 1-based.
    pub fn component(&self, k: usize) -> &ScalarExpr {
        &self.theta[k - 1]
    }

    pub fn components(&self) -> &[ScalarExpr] {
        &self.theta
    }
}

/// Computes the structure tensor of `P` and its Lee form:
/// `F_ijk = g_lk (Gamma^l_im P^m_j - P^l_m Gamma^m_ij)` and
/// `theta_k = g^{ij} F_ijk`. Assumes `P^2 = id`.
pub fn f_and_theta(conn: &Connection, p: &Endomorphism, g: &MetricTensor) -> (Tensor03, Covector) {
    let n = conn.dim();
    let mut f = vec![vec![vec![ScalarExpr::zero(); n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            // (D_{e_i} P) e_j = D_{e_i}(P e_j) - P(D_{e_i} e_j)
            let pej = p.apply(&basis_vector(j + 1, n));
            let d_pej = conn.derive_vector(i, &pej);
            let dej = conn.derivative(i + 1, j + 1);
            let p_dej = p.apply(&dej);
            let nabla_p: Vec<ScalarExpr> = d_pej.iter().zip(&p_dej).map(|(x, y)| x - y).collect();
            for k in 0..n {
                f[i][j][k] = g
                    .inner(&nabla_p, &basis_vector(k + 1, n))
                    .expect("dimensions agree");
            }
        }
    }
    let g_inv = g.raw_inv();
    let mut theta = vec![ScalarExpr::zero(); n];
    for (k, th) in theta.iter_mut().enumerate() {
        let mut acc = ScalarExpr::zero();
        for i in 0..n {
            for j in 0..n {
                if !g_inv[i][j].is_zero() && !f[i][j][k].is_zero() {
                    acc = &acc + &(&g_inv[i][j] * &f[i][j][k]);
                }
            }
        }
        *th = acc;
    }
    (Tensor03 { f }, Covector { theta })
}

/// Residuals of the two structural identities of `F`,
/// `F(x,y,z) = F(x,z,y)` and `F(x,y,z) = -F(x,Py,Pz)`, canonicalized.
/// Empty for any `F` produced by [`f_and_theta`] with a valid `P`.
pub fn fprop_residuals(f: &Tensor03, p: &Endomorphism) -> ConstraintSet {
    let n = f.dim();
    let mut residuals = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                residuals.push(f.f[i][j][k].clone() - &f.f[i][k][j]);
                // F(e_i, P e_j, P e_k) = P^q_j P^r_k F_iqr
                let mut transformed = ScalarExpr::zero();
                for q in 0..n {
                    if p.m[q][j].is_zero() {
                        continue;
                    }
                    for r in 0..n {
                        if !p.m[r][k].is_zero() && !f.f[i][q][r].is_zero() {
                            transformed =
                                &transformed + &(&(&p.m[q][j] * &p.m[r][k]) * &f.f[i][q][r]);
                        }
                    }
                }
                residuals.push(f.f[i][j][k].clone() + transformed);
            }
        }
    }
    ConstraintSet::canonicalize(&residuals)
}

/// Constraint sets for the two covariant-constancy classes of the
/// almost-product structure.
///
/// `w0` is the parallel class, `F = 0`: the set of all `F` components.
/// `w1` is the class in which `F` is the canonical expression in `g`, `P`
/// and the Lee form,
///
/// ```text
/// F(x,y,z) = 1/4 {g(x,y) theta(z) + g(x,z) theta(y)
///                 - g(x,Py) theta(Pz) - g(x,Pz) theta(Py)},
/// ```
///
/// encoded as the set of all residual components with denominators cleared.
/// The `1/4` coefficient is the 4-dimensional normalization; the operation
/// therefore requires dimension 4.
pub fn class_constraints(
    f: &Tensor03,
    theta: &Covector,
    g: &MetricTensor,
    p: &Endomorphism,
) -> Result<(ConstraintSet, ConstraintSet), StructureError> {
    let n = f.dim();
    if n != 4 {
        return Err(StructureError::DimensionNot4(n));
    }
    let mut w0 = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                w0.push(f.f[i][j][k].clone());
            }
        }
    }
    // theta(P e_k) = P^m_k theta_m, and g(e_i, P e_j) = g_im P^m_j
    let theta_p: Vec<ScalarExpr> = (0..n)
        .map(|k| {
            let mut acc = ScalarExpr::zero();
            for m in 0..n {
                if !p.m[m][k].is_zero() && !theta.theta[m].is_zero() {
                    acc = &acc + &(&p.m[m][k] * &theta.theta[m]);
                }
            }
            acc
        })
        .collect();
    let g_p: Vec<Vec<ScalarExpr>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = ScalarExpr::zero();
                    for m in 0..n {
                        if !g.raw()[i][m].is_zero() && !p.m[m][j].is_zero() {
                            acc = &acc + &(&g.raw()[i][m] * &p.m[m][j]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let quarter = ScalarExpr::constant(ratio(1, 4));
    let mut w1 = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut rhs = &g.raw()[i][j] * &theta.theta[k];
                rhs = &rhs + &(&g.raw()[i][k] * &theta.theta[j]);
                rhs = &rhs - &(&g_p[i][j] * &theta_p[k]);
                rhs = &rhs - &(&g_p[i][k] * &theta_p[j]);
                w1.push(f.f[i][j][k].clone() - &quarter * &rhs);
            }
        }
    }
    Ok((
        ConstraintSet::canonicalize(&w0),
        ConstraintSet::canonicalize(&w1),
    ))
}

/// Residuals of curvature invariance under the structure,
/// `R(Qx, Qy, Qz, Qu) = R(x, y, z, u)`, expanded over every index tuple:
/// `Q^p_i Q^q_j Q^r_k Q^s_l R_pqrs - R_ijkl`.
pub fn r_invariance_constraints(r: &Curvature04, q: &Endomorphism) -> ConstraintSet {
    let n = r.dim();
    let mut residuals = Vec::new();
    let mut idx = [0usize; 4];
    loop {
        let [i, j, k, l] = idx;
        // transformed = Q^p_i Q^q_j Q^r_k Q^s_l R_pqrs
        let mut transformed = ScalarExpr::zero();
        for p in 0..n {
            if q.m[p][i].is_zero() {
                continue;
            }
            for qq in 0..n {
                if q.m[qq][j].is_zero() {
                    continue;
                }
                let f2 = &q.m[p][i] * &q.m[qq][j];
                for rr in 0..n {
                    if q.m[rr][k].is_zero() {
                        continue;
                    }
                    let f3 = &f2 * &q.m[rr][k];
                    for s in 0..n {
                        if !q.m[s][l].is_zero() && !r.r[p][qq][rr][s].is_zero() {
                            transformed =
                                &transformed + &(&(&f3 * &q.m[s][l]) * &r.r[p][qq][rr][s]);
                        }
                    }
                }
            }
        }
        residuals.push(transformed - &r.r[i][j][k][l]);
        // next tuple
        let mut carry = 3usize;
        loop {
            idx[carry] += 1;
            if idx[carry] < n {
                break;
            }
            idx[carry] = 0;
            if carry == 0 {
                return ConstraintSet::canonicalize(&residuals);
            }
            carry -= 1;
        }
    }
}

/// The reduced form of the curvature-invariance property for the circulant
/// shift in dimension 4: an explicit finite list of component equalities,
///
/// ```text
/// R_1212 = R_3434 = R_2323 = R_1414        R_1313 = R_2424
/// R_1213 = R_2324 = R_1424 = R_3134        R_1214 = R_1434 = R_2123 = R_3234
/// R_1224 = R_3123 = R_3114 = R_4234        R_1324 = 0
/// ```
///
/// Each chain is encoded as "first member minus each other member".
pub fn rloc_reduced_constraints(r: &Curvature04) -> Result<ConstraintSet, StructureError> {
    if r.dim() != 4 {
        return Err(StructureError::DimensionNot4(r.dim()));
    }
    let c = |i: usize, j: usize, k: usize, l: usize| r.component(i, j, k, l).clone();
    let chains: Vec<Vec<ScalarExpr>> = vec![
        vec![c(1, 2, 1, 2), c(3, 4, 3, 4), c(2, 3, 2, 3), c(1, 4, 1, 4)],
        vec![c(1, 3, 1, 3), c(2, 4, 2, 4)],
        vec![c(1, 2, 1, 3), c(2, 3, 2, 4), c(1, 4, 2, 4), c(3, 1, 3, 4)],
        vec![c(1, 2, 1, 4), c(1, 4, 3, 4), c(2, 1, 2, 3), c(3, 2, 3, 4)],
        vec![c(1, 2, 2, 4), c(3, 1, 2, 3), c(3, 1, 1, 4), c(4, 2, 3, 4)],
    ];
    let mut residuals = Vec::new();
    for chain in &chains {
        for other in &chain[1..] {
            residuals.push(chain[0].clone() - other);
        }
    }
    residuals.push(c(1, 3, 2, 4));
    Ok(ConstraintSet::canonicalize(&residuals))
}

/// Constraint sets for the Einstein property and for constancy of the
/// sectional curvature:
///
/// * `einstein`: residuals of `rho_ij - (tau/n) g_ij`;
/// * `const_curv`: residuals of `R_ijkl - kappa (g_ik g_jl - g_il g_jk)`
///   where `kappa` is the sectional curvature of the reference plane
///   `(e_1, e_2)`, which must be nondegenerate.
pub fn einstein_and_constant_curvature_constraints(
    r: &Curvature04,
    rho: &[Vec<ScalarExpr>],
    tau: &ScalarExpr,
    g: &MetricTensor,
) -> Result<(ConstraintSet, ConstraintSet), StructureError> {
    let n = r.dim();
    let dim = ScalarExpr::constant(crate::exactnum::rat(n as i64));
    let tau_over_n = tau / &dim;
    let mut einstein = Vec::new();
    for i in 0..n {
        for j in 0..n {
            einstein.push(rho[i][j].clone() - &tau_over_n * &g.raw()[i][j]);
        }
    }
    let kappa = sectional(r, g, &basis_vector(1, n), &basis_vector(2, n))?;
    let mut const_curv = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let model =
                        &(&g.raw()[i][k] * &g.raw()[j][l]) - &(&g.raw()[i][l] * &g.raw()[j][k]);
                    const_curv.push(r.r[i][j][k][l].clone() - &kappa * &model);
                }
            }
        }
    }
    Ok((
        ConstraintSet::canonicalize(&einstein),
        ConstraintSet::canonicalize(&const_curv),
    ))
}

/// Applies `Q` to all four slots of the curvature tensor:
/// `(Q* R)_ijkl = Q^p_i Q^q_j Q^r_k Q^s_l R_pqrs`. At a point where the
/// invariance constraints vanish this reproduces `R` exactly.
pub fn pull_back_curvature(r: &Curvature04, q: &Endomorphism) -> Curvature04 {
    let n = r.dim();
    let mut out = vec![vec![vec![vec![ScalarExpr::zero(); n]; n]; n]; n];
    #[allow(clippy::needless_range_loop)]
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut acc = ScalarExpr::zero();
                    for p in 0..n {
                        if q.m[p][i].is_zero() {
                            continue;
                        }
                        for qq in 0..n {
                            if q.m[qq][j].is_zero() {
                                continue;
                            }
                            for rr in 0..n {
                                if q.m[rr][k].is_zero() {
                                    continue;
                                }
                                for s in 0..n {
                                    if !q.m[s][l].is_zero() && !r.r[p][qq][rr][s].is_zero() {
                                        acc = &acc
                                            + &(&(&(&(&q.m[p][i] * &q.m[qq][j]) * &q.m[rr][k])
                                                * &q.m[s][l])
                                                * &r.r[p][qq][rr][s]);
                                    }
                                }
                            }
                        }
                    }
                    out[i][j][k][l] = acc;
                }
            }
        }
    }
    Curvature04 { r: out }
}
