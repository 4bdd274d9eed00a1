//! Almost contact B-metric structures `(phi, xi, eta, g)` on a Lie algebra.

use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::lie::LieAlgebra;
use crate::linalg::{self, Matrix};
use crate::scalar::{Rational, Scalar, ScalarError, Vars};
use crate::tensor::{MetricPair, Tensor, TensorError, Variance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("dimension must be odd and at least 3, got {0}")]
    BadDimension(usize),
    #[error("`{field}` has dimension {found}, expected {expected}")]
    DimensionMismatch { field: &'static str, expected: usize, found: usize },
    #[error("`{0}` must have constant entries")]
    NonConstant(&'static str),
    #[error("metric is degenerate")]
    Degenerate,
    #[error("associated metric fails the B-metric condition at ({0}, {1})")]
    AssociatedNotBMetric(usize, usize),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Lie algebra with an almost contact B-metric structure in its frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AcbmManifold {
    algebra: LieAlgebra,
    /// `phi^i_j`: `phi e_j = phi^i_j e_i`.
    phi: Tensor,
    xi: Tensor,
    eta: Tensor,
    metric: MetricPair,
}

impl AcbmManifold {
    /// Assemble a manifold. Axioms are not enforced here; see
    /// [`validate_structure`].
    pub fn new(
        algebra: LieAlgebra,
        phi: Vec<Vec<Scalar>>,
        xi: Vec<Scalar>,
        eta: Vec<Scalar>,
        metric: MetricPair,
    ) -> Result<Self, StructureError> {
        let d = algebra.dim();
        if d < 3 || d.is_multiple_of(2) {
            return Err(StructureError::BadDimension(d));
        }
        let check = |field, found| {
            if found != d {
                Err(StructureError::DimensionMismatch { field, expected: d, found })
            } else {
                Ok(())
            }
        };
        check("phi", phi.len())?;
        for row in &phi {
            check("phi", row.len())?;
        }
        check("xi", xi.len())?;
        check("eta", eta.len())?;
        check("g", metric.dim())?;
        let vars = algebra.vars().clone();
        let lift = |s: &Scalar| s.lift(&vars);
        let mut phi_t = Tensor::zeros(d, &[Variance::Upper, Variance::Lower], &vars);
        for (i, row) in phi.iter().enumerate() {
            for (j, s) in row.iter().enumerate() {
                phi_t.set(&[i, j], lift(s)?);
            }
        }
        let xi = xi.iter().map(lift).collect::<Result<Vec<_>, _>>()?;
        let eta = eta.iter().map(lift).collect::<Result<Vec<_>, _>>()?;
        Ok(AcbmManifold {
            phi: phi_t,
            xi: Tensor::vector(xi, &vars),
            eta: Tensor::covector(eta, &vars),
            algebra,
            metric,
        })
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn vars(&self) -> &Vars {
        self.algebra.vars()
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn phi(&self) -> &Tensor {
        &self.phi
    }

    pub fn xi(&self) -> &Tensor {
        &self.xi
    }

    pub fn eta(&self) -> &Tensor {
        &self.eta
    }

    pub fn metric(&self) -> &MetricPair {
        &self.metric
    }

    pub fn phi_at(&self, i: usize, j: usize) -> &Scalar {
        self.phi.get(&[i, j])
    }

    pub fn xi_at(&self, i: usize) -> &Scalar {
        self.xi.get(&[i])
    }

    pub fn eta_at(&self, i: usize) -> &Scalar {
        self.eta.get(&[i])
    }

    /// `g_ij` as a scalar.
    pub fn g(&self, i: usize, j: usize) -> Scalar {
        Scalar::from_rational(self.metric.entry(i, j).clone())
    }

    /// `g^ij` as a scalar.
    pub fn g_inv(&self, i: usize, j: usize) -> Scalar {
        Scalar::from_rational(self.metric.inv_entry(i, j).clone())
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero(self.vars())
    }

    /// Frame vector `e_i` as components.
    pub fn basis(&self, i: usize) -> Vec<Scalar> {
        (0..self.dim()).map(|k| if k == i { Scalar::one(self.vars()) } else { self.zero() }).collect()
    }

    pub fn xi_vec(&self) -> Vec<Scalar> {
        self.xi.components().to_vec()
    }

    /// `phi v` for a component vector.
    pub fn apply_phi(&self, v: &[Scalar]) -> Vec<Scalar> {
        (0..self.dim())
            .map(|i| v.iter().enumerate().fold(self.zero(), |acc, (j, vj)| acc + self.phi_at(i, j) * vj))
            .collect()
    }

    /// `eta(v)`.
    pub fn eta_of(&self, v: &[Scalar]) -> Scalar {
        v.iter().enumerate().fold(self.zero(), |acc, (i, vi)| acc + self.eta_at(i) * vi)
    }

    /// `g(u, v)`.
    pub fn inner(&self, u: &[Scalar], v: &[Scalar]) -> Scalar {
        let mut acc = self.zero();
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                let g = self.metric.entry(i, j);
                if !g.is_zero() && !vj.is_zero() {
                    acc = acc + (ui * vj).scale(g);
                }
            }
        }
        acc
    }

    /// Whether every component of phi, xi and eta is a constant.
    pub fn structure_is_constant(&self) -> bool {
        self.phi.components().iter().all(Scalar::is_constant)
            && self.xi.components().iter().all(Scalar::is_constant)
            && self.eta.components().iter().all(Scalar::is_constant)
    }

    /// Constant `phi^i_j` matrix, if constant.
    pub fn phi_matrix(&self) -> Option<Matrix> {
        (0..self.dim()).map(|i| (0..self.dim()).map(|j| self.phi_at(i, j).as_constant()).collect()).collect()
    }

    /// All data in the frame `e'_a = A^i_a e_i`.
    pub fn change_frame(&self, a: &Matrix) -> Result<AcbmManifold, StructureError> {
        let a_inv = linalg::inverse(a).ok_or(StructureError::Degenerate)?;
        let g = linalg::mat_mul(&linalg::mat_mul(&linalg::transpose(a), self.metric.matrix()), a);
        Ok(AcbmManifold {
            algebra: self.algebra.change_frame(a, &a_inv),
            phi: self.phi.change_frame(a, &a_inv),
            xi: self.xi.change_frame(a, &a_inv),
            eta: self.eta.change_frame(a, &a_inv),
            metric: MetricPair::new(g)?,
        })
    }

    /// Same data with `metric` in place of `g`.
    pub fn with_metric(&self, metric: MetricPair) -> AcbmManifold {
        AcbmManifold { metric, ..self.clone() }
    }

    /// Same data with another phi.
    pub fn with_phi(&self, phi: Tensor) -> AcbmManifold {
        AcbmManifold { phi, ..self.clone() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    PhiXi,
    PhiSquared,
    EtaPhi,
    EtaXi,
    BMetric,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::PhiXi => "phi(xi) = 0",
            Axiom::PhiSquared => "phi^2 = -Id + eta (x) xi",
            Axiom::EtaPhi => "eta o phi = 0",
            Axiom::EtaXi => "eta(xi) = 1",
            Axiom::BMetric => "g(phi x, phi y) = -g(x, y) + eta(x) eta(y)",
        })
    }
}

/// A failed axiom instance: `residual` should have been zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub axiom: Axiom,
    pub indices: Vec<usize>,
    pub residual: Scalar,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails at {:?}: residual {}", self.axiom, self.indices, self.residual)
    }
}

/// Check every axiom componentwise. An empty list means the structure is
/// valid identically in the parameters.
pub fn validate_structure(m: &AcbmManifold) -> Vec<Violation> {
    let d = m.dim();
    let mut out = Vec::new();
    let mut push = |axiom, indices: Vec<usize>, residual: Scalar| {
        if !residual.is_zero() {
            out.push(Violation { axiom, indices, residual });
        }
    };
    let phi_xi = m.apply_phi(&m.xi_vec());
    for (i, r) in phi_xi.into_iter().enumerate() {
        push(Axiom::PhiXi, vec![i], r);
    }
    for i in 0..d {
        for j in 0..d {
            let sq = (0..d).fold(m.zero(), |acc, k| acc + m.phi_at(i, k) * m.phi_at(k, j));
            let delta = Scalar::from_int(i64::from(i == j));
            let rhs = -delta + m.xi_at(i) * m.eta_at(j);
            push(Axiom::PhiSquared, vec![i, j], sq - rhs);
        }
    }
    for j in 0..d {
        let r = (0..d).fold(m.zero(), |acc, i| acc + m.eta_at(i) * m.phi_at(i, j));
        push(Axiom::EtaPhi, vec![j], r);
    }
    push(Axiom::EtaXi, vec![], m.eta_of(&m.xi_vec()) - Scalar::from_int(1));
    for (i, j, r) in b_metric_residuals(m, m.metric()) {
        push(Axiom::BMetric, vec![i, j], r);
    }
    out
}

/// `g(phi e_i, phi e_j) + g_ij - eta_i eta_j` for `i <= j`.
fn b_metric_residuals(m: &AcbmManifold, metric: &MetricPair) -> Vec<(usize, usize, Scalar)> {
    let d = m.dim();
    let phi_cols: Vec<Vec<Scalar>> = (0..d).map(|j| m.apply_phi(&m.basis(j))).collect();
    let inner = |u: &[Scalar], v: &[Scalar]| {
        let mut acc = m.zero();
        for (p, up) in u.iter().enumerate() {
            for (q, vq) in v.iter().enumerate() {
                let g = metric.entry(p, q);
                if !g.is_zero() {
                    acc = acc + (up * vq).scale(g);
                }
            }
        }
        acc
    };
    let mut out = Vec::new();
    for i in 0..d {
        for j in i..d {
            let lhs = inner(&phi_cols[i], &phi_cols[j]);
            let rhs = -Scalar::from_rational(metric.entry(i, j).clone()) + m.eta_at(i) * m.eta_at(j);
            out.push((i, j, lhs - rhs));
        }
    }
    out
}

/// `g~(x, y) = g(x, phi y) + eta(x) eta(y)` with its inverse. Requires a
/// constant structure; the result is re-checked as a B-metric.
pub fn associated_metric(m: &AcbmManifold) -> Result<MetricPair, StructureError> {
    let d = m.dim();
    let mut g = vec![vec![Rational::zero(); d]; d];
    for (i, row) in g.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            let s = m.inner(&m.basis(i), &m.apply_phi(&m.basis(j))) + m.eta_at(i) * m.eta_at(j);
            *entry = s.as_constant().ok_or(StructureError::NonConstant("phi"))?;
        }
    }
    let pair = match MetricPair::new(g) {
        Ok(p) => p,
        Err(TensorError::Degenerate) => return Err(StructureError::Degenerate),
        Err(e) => return Err(e.into()),
    };
    if let Some((i, j, _)) = b_metric_residuals(m, &pair).into_iter().find(|(_, _, r)| !r.is_zero()) {
        return Err(StructureError::AssociatedNotBMetric(i, j));
    }
    Ok(pair)
}

/// Sylvester signature `(p, q)`.
pub fn signature(m: &MetricPair) -> Result<(usize, usize), StructureError> {
    let (p, q, z) = linalg::inertia(m.matrix());
    if z > 0 {
        return Err(StructureError::Degenerate);
    }
    Ok((p, q))
}
