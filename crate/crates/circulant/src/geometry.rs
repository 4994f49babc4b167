//! The Levi-Civita connection of a left-invariant metric and all curvature
//! quantities derived from it.
//!
//! For left-invariant data the metric coefficients are constant on the
//! group, so the Koszul formula collapses to its three bracket terms:
//!
//! ```text
//! 2 g(D_{e_i} e_j, e_k) = g([e_i,e_j], e_k) + g([e_k,e_i], e_j) + g([e_k,e_j], e_i)
//! ```
//!
//! The curvature conventions are fixed once for the whole crate:
//! `R(x,y)z = D_x D_y z - D_y D_x z - D_{[x,y]} z`, lowered as
//! `R_ijkl = g(R(e_i,e_j) e_k, e_l)`; the Ricci tensor is
//! `rho(y,z) = g^{ij} R(e_i, y, z, e_j)`, the scalar curvature its trace
//! `tau = g^{ij} rho(e_i, e_j)`, and the sectional curvature of a
//! nondegenerate plane is `k(x,y) = R(x,y,x,y) / (g(x,x) g(y,y) - g(x,y)^2)`.

use thiserror::Error;

use crate::exactnum::{rat, ScalarExpr};
use crate::liealg::LieAlgebra;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("metric is singular (determinant is the zero expression)")]
    SingularMetric,
    #[error("metric is not symmetric at entry ({i}, {j})")]
    AsymmetricMetric { i: usize, j: usize },
    #[error("metric must be {dim}x{dim}")]
    BadShape { dim: usize },
    #[error("degenerate 2-plane: g(x,x) g(y,y) - g(x,y)^2 is the zero expression")]
    DegeneratePlane,
    #[error("coordinate vector has length {got}, expected {expected}")]
    DimensionMismatch { got: usize, expected: usize },
}

/// A symmetric nondegenerate bilinear form on the algebra, with its exact
/// inverse cached at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricTensor {
    g: Vec<Vec<ScalarExpr>>,
    g_inv: Vec<Vec<ScalarExpr>>,
}

impl MetricTensor {
    /// Validates symmetry and inverts the matrix exactly. Fails if the
    /// determinant is the zero expression.
    pub fn new(g: Vec<Vec<ScalarExpr>>) -> Result<Self, GeometryError> {
        let n = g.len();
        if g.iter().any(|row| row.len() != n) {
            return Err(GeometryError::BadShape { dim: n });
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if g[i][j] != g[j][i] {
                    return Err(GeometryError::AsymmetricMetric { i: i + 1, j: j + 1 });
                }
            }
        }
        let g_inv = invert(&g)?;
        Ok(Self { g, g_inv })
    }

    pub fn identity(n: usize) -> Self {
        let mut g = vec![vec![ScalarExpr::zero(); n]; n];
        for (i, row) in g.iter_mut().enumerate() {
            row[i] = ScalarExpr::one();
        }
        Self {
            g: g.clone(),
            g_inv: g,
        }
    }

    pub fn dim(&self) -> usize {
        self.g.len()
    }

    pub fn entries(&self) -> &[Vec<ScalarExpr>] {
        &self.g
    }

    /// `g_ij`, 1-based.
    pub fn entry(&self, i: usize, j: usize) -> &ScalarExpr {
        &self.g[i - 1][j - 1]
    }

    /// `g^{ij}`, 1-based.
    pub fn inverse_entry(&self, i: usize, j: usize) -> &ScalarExpr {
        &self.g_inv[i - 1][j - 1]
    }

    pub(crate) fn raw(&self) -> &[Vec<ScalarExpr>] {
        &self.g
    }

    pub(crate) fn raw_inv(&self) -> &[Vec<ScalarExpr>] {
        &self.g_inv
    }

    /// `g(x, y)` for coordinate vectors.
    pub fn inner(&self, x: &[ScalarExpr], y: &[ScalarExpr]) -> Result<ScalarExpr, GeometryError> {
        let n = self.dim();
        if x.len() != n {
            return Err(GeometryError::DimensionMismatch {
                got: x.len(),
                expected: n,
            });
        }
        if y.len() != n {
            return Err(GeometryError::DimensionMismatch {
                got: y.len(),
                expected: n,
            });
        }
        let mut acc = ScalarExpr::zero();
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if !y[j].is_zero() && !self.g[i][j].is_zero() {
                    acc = &acc + &(&(&x[i] * &y[j]) * &self.g[i][j]);
                }
            }
        }
        Ok(acc)
    }
}

/// Gauss-Jordan elimination over exact scalar expressions. A pivot must be a
/// not-identically-zero expression; if no column pivot exists the matrix is
/// singular as a matrix of rational functions.
fn invert(m: &[Vec<ScalarExpr>]) -> Result<Vec<Vec<ScalarExpr>>, GeometryError> {
    let n = m.len();
    let mut a: Vec<Vec<ScalarExpr>> = m.to_vec();
    let mut inv = MetricTensor::identity(n).g;
    for col in 0..n {
        let pivot_row = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or(GeometryError::SingularMetric)?;
        a.swap(col, pivot_row);
        inv.swap(col, pivot_row);
        let pivot = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &pivot;
            inv[col][j] = &inv[col][j] / &pivot;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for j in 0..n {
                a[r][j] = &a[r][j] - &(&factor * &a[col][j]);
                inv[r][j] = &inv[r][j] - &(&factor * &inv[col][j]);
            }
        }
    }
    Ok(inv)
}

/// Connection coefficients `Gamma^k_ij`, the `e_k`-coefficient of
/// `D_{e_i} e_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Connection {
    /// `gamma[i][j][k]` is `Gamma^k_ij`, 0-based storage.
    pub(crate) gamma: Vec<Vec<Vec<ScalarExpr>>>,
}

impl Connection {
    pub fn dim(&self) -> usize {
        self.gamma.len()
    }

    /// `Gamma^k_ij` with 1-based indices.
    pub fn coefficient(&self, i: usize, j: usize, k: usize) -> &ScalarExpr {
        &self.gamma[i - 1][j - 1][k - 1]
    }

    /// `D_{e_i} e_j` as a coordinate vector, 1-based indices.
    pub fn derivative(&self, i: usize, j: usize) -> Vec<ScalarExpr> {
        self.gamma[i - 1][j - 1].clone()
    }

    /// Covariant derivative of a coordinate vector field with constant
    /// coefficients: `D_{e_i} y`.
    pub(crate) fn derive_vector(&self, i: usize, y: &[ScalarExpr]) -> Vec<ScalarExpr> {
        let n = self.dim();
        let mut out = vec![ScalarExpr::zero(); n];
        for (j, yj) in y.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            for k in 0..n {
                let g = &self.gamma[i][j][k];
                if !g.is_zero() {
                    out[k] = &out[k] + &(g * yj);
                }
            }
        }
        out
    }
}

/// The Levi-Civita connection of `(algebra, metric)` by the three-term
/// Koszul formula.
pub fn levi_civita(
    algebra: &LieAlgebra,
    metric: &MetricTensor,
) -> Result<Connection, GeometryError> {
    let n = algebra.dim();
    if metric.dim() != n {
        return Err(GeometryError::BadShape { dim: n });
    }
    let g = metric.raw();
    let g_inv = metric.raw_inv();
    let c = &algebra.consts;
    // g([e_i, e_j], e_k) = c^m_ij g_mk
    let bracket_inner = |i: usize, j: usize, k: usize| -> ScalarExpr {
        let mut acc = ScalarExpr::zero();
        for m in 0..n {
            if !c[i][j][m].is_zero() && !g[m][k].is_zero() {
                acc = &acc + &(&c[i][j][m] * &g[m][k]);
            }
        }
        acc
    };
    let half = ScalarExpr::constant(rat(1) / rat(2));
    let mut gamma = vec![vec![vec![ScalarExpr::zero(); n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            // koszul[k] = 2 g(D_{e_i} e_j, e_k)
            let koszul: Vec<ScalarExpr> = (0..n)
                .map(|k| {
                    let t1 = bracket_inner(i, j, k);
                    let t2 = bracket_inner(k, i, j);
                    let t3 = bracket_inner(k, j, i);
                    &(&t1 + &t2) + &t3
                })
                .collect();
            for m in 0..n {
                let mut acc = ScalarExpr::zero();
                for (k, kz) in koszul.iter().enumerate() {
                    if !kz.is_zero() && !g_inv[m][k].is_zero() {
                        acc = &acc + &(&g_inv[m][k] * kz);
                    }
                }
                gamma[i][j][m] = &half * &acc;
            }
        }
    }
    Ok(Connection { gamma })
}

/// The curvature tensor in its fully covariant form,
/// `R_ijkl = g(R(e_i, e_j) e_k, e_l)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Curvature04 {
    /// `r[i][j][k][l]`, 0-based storage.
    pub(crate) r: Vec<Vec<Vec<Vec<ScalarExpr>>>>,
}

impl Curvature04 {
    pub fn dim(&self) -> usize {
        self.r.len()
    }

    /// `R_ijkl` with 1-based indices.
    pub fn component(&self, i: usize, j: usize, k: usize, l: usize) -> &ScalarExpr {
        &self.r[i - 1][j - 1][k - 1][l - 1]
    }

    /// Builds a tensor directly from 1-based sparse components; intended for
    /// synthetic inputs in tests and oracles. No symmetry is imposed.
    pub fn from_components(
        dim: usize,
        entries: &[(usize, usize, usize, usize, ScalarExpr)],
    ) -> Self {
        let mut r = vec![vec![vec![vec![ScalarExpr::zero(); dim]; dim]; dim]; dim];
        for (i, j, k, l, v) in entries {
            r[i - 1][j - 1][k - 1][l - 1] = v.clone();
        }
        Self { r }
    }

    /// `R(x, y, z, u)` for coordinate vectors.
    pub fn apply(
        &self,
        x: &[ScalarExpr],
        y: &[ScalarExpr],
        z: &[ScalarExpr],
        u: &[ScalarExpr],
    ) -> ScalarExpr {
        let n = self.dim();
        let mut acc = ScalarExpr::zero();
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                let xy = &x[i] * &y[j];
                for k in 0..n {
                    if z[k].is_zero() {
                        continue;
                    }
                    let xyz = &xy * &z[k];
                    for l in 0..n {
                        if !u[l].is_zero() && !self.r[i][j][k][l].is_zero() {
                            acc = &acc + &(&(&xyz * &u[l]) * &self.r[i][j][k][l]);
                        }
                    }
                }
            }
        }
        acc
    }
}

/// The (0,4) curvature of a connection on a left-invariant frame:
/// `R_ijkl = g_ml (Gamma^p_jk Gamma^m_ip - Gamma^p_ik Gamma^m_jp - c^p_ij Gamma^m_pk)`.
pub fn curvature(algebra: &LieAlgebra, metric: &MetricTensor, conn: &Connection) -> Curvature04 {
    let n = algebra.dim();
    let gamma = &conn.gamma;
    let c = &algebra.consts;
    let g = metric.raw();
    let mut r = vec![vec![vec![vec![ScalarExpr::zero(); n]; n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                // upper[m] = e_m-coefficient of R(e_i, e_j) e_k
                let mut upper = vec![ScalarExpr::zero(); n];
                for (m, up) in upper.iter_mut().enumerate() {
                    let mut acc = ScalarExpr::zero();
                    for p in 0..n {
                        if !gamma[j][k][p].is_zero() && !gamma[i][p][m].is_zero() {
                            acc = &acc + &(&gamma[j][k][p] * &gamma[i][p][m]);
                        }
                        if !gamma[i][k][p].is_zero() && !gamma[j][p][m].is_zero() {
                            acc = &acc - &(&gamma[i][k][p] * &gamma[j][p][m]);
                        }
                        if !c[i][j][p].is_zero() && !gamma[p][k][m].is_zero() {
                            acc = &acc - &(&c[i][j][p] * &gamma[p][k][m]);
                        }
                    }
                    *up = acc;
                }
                for l in 0..n {
                    let mut acc = ScalarExpr::zero();
                    for (m, up) in upper.iter().enumerate() {
                        if !up.is_zero() && !g[m][l].is_zero() {
                            acc = &acc + &(up * &g[m][l]);
                        }
                    }
                    r[i][j][k][l] = acc;
                }
            }
        }
    }
    Curvature04 { r }
}

/// The Ricci tensor `rho_jk = g^{im} R_{i j k m}` and the scalar curvature
/// `tau = g^{jk} rho_jk`, contracting with the full inverse metric.
pub fn ricci_and_scalar(
    curv: &Curvature04,
    metric: &MetricTensor,
) -> (Vec<Vec<ScalarExpr>>, ScalarExpr) {
    let n = curv.dim();
    let g_inv = metric.raw_inv();
    let mut rho = vec![vec![ScalarExpr::zero(); n]; n];
    for j in 0..n {
        for k in 0..n {
            let mut acc = ScalarExpr::zero();
            for i in 0..n {
                for m in 0..n {
                    if !g_inv[i][m].is_zero() && !curv.r[i][j][k][m].is_zero() {
                        acc = &acc + &(&g_inv[i][m] * &curv.r[i][j][k][m]);
                    }
                }
            }
            rho[j][k] = acc;
        }
    }
    let mut tau = ScalarExpr::zero();
    for j in 0..n {
        for k in 0..n {
            if !g_inv[j][k].is_zero() && !rho[j][k].is_zero() {
                tau = &tau + &(&g_inv[j][k] * &rho[j][k]);
            }
        }
    }
    (rho, tau)
}

/// Sectional curvature of the plane spanned by `x` and `y`. Fails when the
/// plane is degenerate, i.e. the Gram determinant is the zero expression.
pub fn sectional(
    curv: &Curvature04,
    metric: &MetricTensor,
    x: &[ScalarExpr],
    y: &[ScalarExpr],
) -> Result<ScalarExpr, GeometryError> {
    let gxx = metric.inner(x, x)?;
    let gyy = metric.inner(y, y)?;
    let gxy = metric.inner(x, y)?;
    let gram = &(&gxx * &gyy) - &(&gxy * &gxy);
    if gram.is_zero() {
        return Err(GeometryError::DegeneratePlane);
    }
    let numerator = curv.apply(x, y, x, y);
    Ok(&numerator / &gram)
}

/// Basis vector `e_i` (1-based) as a coordinate vector.
pub fn basis_vector(i: usize, dim: usize) -> Vec<ScalarExpr> {
    let mut v = vec![ScalarExpr::zero(); dim];
    v[i - 1] = ScalarExpr::one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{parse_scalar, ratio};
    use crate::liealg::{builtin_family_symbolic, make_lie_algebra, BuiltinFamily};

    fn sym(s: &str) -> ScalarExpr {
        parse_scalar(s, &["a".to_string(), "b".to_string()]).unwrap()
    }

    #[test]
    fn identity_metric_is_its_own_inverse() {
        let m = MetricTensor::identity(4);
        for i in 1..=4 {
            for j in 1..=4 {
                assert_eq!(m.entry(i, j), m.inverse_entry(i, j));
            }
        }
    }

    #[test]
    fn symbolic_metric_inverse_is_exact() {
        // diag(1, a, 1, b) with symbolic entries
        let mut rows = MetricTensor::identity(4).g;
        rows[1][1] = sym("a");
        rows[3][3] = sym("b");
        let m = MetricTensor::new(rows).unwrap();
        // g * g_inv = identity, entry by entry
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = ScalarExpr::zero();
                for k in 0..4 {
                    acc = &acc + &(&m.g[i][k] * &m.g_inv[k][j]);
                }
                let expected = if i == j {
                    ScalarExpr::one()
                } else {
                    ScalarExpr::zero()
                };
                assert_eq!(acc, expected);
            }
        }
    }

    #[test]
    fn singular_metric_rejected() {
        let mut rows = MetricTensor::identity(2).g;
        rows[0][0] = ScalarExpr::zero();
        rows[0][1] = ScalarExpr::zero();
        rows[1][0] = ScalarExpr::zero();
        assert_eq!(
            MetricTensor::new(rows).unwrap_err(),
            GeometryError::SingularMetric
        );
    }

    #[test]
    fn asymmetric_metric_rejected() {
        let mut rows = MetricTensor::identity(2).g;
        rows[0][1] = ScalarExpr::one();
        assert!(matches!(
            MetricTensor::new(rows),
            Err(GeometryError::AsymmetricMetric { .. })
        ));
    }

    #[test]
    fn abelian_algebra_is_flat() {
        let l = make_lie_algebra(4, vec![], &[], vec![]).unwrap();
        let g = MetricTensor::identity(4);
        let conn = levi_civita(&l, &g).unwrap();
        for i in 1..=4 {
            for j in 1..=4 {
                for k in 1..=4 {
                    assert!(conn.coefficient(i, j, k).is_zero());
                }
            }
        }
        let r = curvature(&l, &g, &conn);
        for i in 1..=4 {
            for j in 1..=4 {
                for k in 1..=4 {
                    for m in 1..=4 {
                        assert!(r.component(i, j, k, m).is_zero());
                    }
                }
            }
        }
        let (rho, tau) = ricci_and_scalar(&r, &g);
        assert!(tau.is_zero());
        assert!(rho.iter().flatten().all(ScalarExpr::is_zero));
    }

    #[test]
    fn torsion_free_and_metric_compatible_symbolically() {
        for id in [BuiltinFamily::G45, BuiltinFamily::G46] {
            let l = builtin_family_symbolic(id);
            let g = MetricTensor::identity(4);
            let conn = levi_civita(&l, &g).unwrap();
            for i in 1..=4 {
                for j in 1..=4 {
                    for k in 1..=4 {
                        let torsion = &(conn.coefficient(i, j, k) - conn.coefficient(j, i, k))
                            - l.structure_constant(i, j, k);
                        assert!(torsion.is_zero(), "torsion at ({i},{j},{k}) for {id}");
                    }
                    // g(D_{e_i} e_j, e_k) + g(e_j, D_{e_i} e_k) = 0
                    for k in 1..=4 {
                        let lhs = &(conn.coefficient(i, j, k).clone())
                            + &(conn.coefficient(i, k, j).clone());
                        assert!(lhs.is_zero(), "compatibility at ({i},{j},{k}) for {id}");
                    }
                }
            }
        }
    }

    #[test]
    fn g46_connection_table() {
        let l = builtin_family_symbolic(BuiltinFamily::G46);
        let g = MetricTensor::identity(4);
        let conn = levi_civita(&l, &g).unwrap();
        let golden: &[((usize, usize, usize), &str)] = &[
            ((1, 1, 4), "-a"),
            ((1, 4, 1), "a"),
            ((2, 2, 4), "-b"),
            ((2, 4, 2), "b"),
            ((3, 3, 4), "-b"),
            ((3, 4, 3), "b"),
            ((4, 2, 3), "1"),  // derivative of e2 along e4 is e3
            ((4, 3, 2), "-1"), // derivative of e3 along e4 is -e2
        ];
        let expected: std::collections::BTreeMap<_, _> = golden.iter().cloned().collect();
        for i in 1..=4 {
            for j in 1..=4 {
                for k in 1..=4 {
                    let got = conn.coefficient(i, j, k);
                    match expected.get(&(i, j, k)) {
                        Some(v) => assert_eq!(got, &sym(v), "Gamma^{k}_{i}{j}"),
                        None => assert!(got.is_zero(), "Gamma^{k}_{i}{j} should vanish"),
                    }
                }
            }
        }
    }

    #[test]
    fn sectional_of_degenerate_plane_errors() {
        let l = builtin_family_symbolic(BuiltinFamily::G45);
        let g = MetricTensor::identity(4);
        let conn = levi_civita(&l, &g).unwrap();
        let r = curvature(&l, &g, &conn);
        let x = basis_vector(1, 4);
        assert_eq!(
            sectional(&r, &g, &x, &x).unwrap_err(),
            GeometryError::DegeneratePlane
        );
    }

    #[test]
    fn basic_plane_sectional_equals_component_for_identity_metric() {
        let l = builtin_family_symbolic(BuiltinFamily::G46);
        let g = MetricTensor::identity(4);
        let conn = levi_civita(&l, &g).unwrap();
        let r = curvature(&l, &g, &conn);
        for i in 1..=4 {
            for j in (i + 1)..=4 {
                let k = sectional(&r, &g, &basis_vector(i, 4), &basis_vector(j, 4)).unwrap();
                assert_eq!(k, *r.component(i, j, i, j));
            }
        }
        let _ = ratio(1, 2);
    }
}
