//! Dense frame-component tensors over [`Scalar`].
//!
//! Components are stored row-major in the order of the variance list, so a
//! `(0,3)` tensor `F` has `F[i][j][k]` at `i*d*d + j*d + k`.

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::connection::Connection;
use crate::linalg::{self, Matrix};
use crate::scalar::{Rational, Scalar, ScalarError, Vars};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variance {
    Upper,
    Lower,
}

use Variance::{Lower, Upper};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("slot {slot} out of range for rank {rank}")]
    SlotOutOfRange { slot: usize, rank: usize },
    #[error("slot {slot} has variance {found:?}, expected {expected:?}")]
    VarianceMismatch { slot: usize, expected: Variance, found: Variance },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("metric is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("metric is degenerate (zero determinant)")]
    Degenerate,
    #[error("metric must be a square matrix")]
    NotSquare,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Clone, PartialEq, Eq)]
pub struct Tensor {
    dim: usize,
    vars: Vars,
    variance: Vec<Variance>,
    components: Vec<Scalar>,
}

impl Tensor {
    pub fn zeros(dim: usize, variance: &[Variance], vars: &Vars) -> Self {
        let len = dim.pow(variance.len() as u32);
        Tensor { dim, vars: vars.clone(), variance: variance.to_vec(), components: vec![Scalar::zero(vars); len] }
    }

    /// Build from a function of the multi-index. Results are lifted onto `vars`.
    pub fn from_fn<F>(dim: usize, variance: &[Variance], vars: &Vars, mut f: F) -> Self
    where
        F: FnMut(&[usize]) -> Scalar,
    {
        let mut t = Self::zeros(dim, variance, vars);
        for (pos, idx) in MultiIndex::new(dim, variance.len()).enumerate() {
            t.components[pos] = f(&idx).lift(vars).unwrap_or_else(|e| panic!("{e}"));
        }
        t
    }

    pub fn scalar(value: Scalar) -> Self {
        Tensor { dim: 0, vars: value.vars().clone(), variance: Vec::new(), components: vec![value] }
    }

    pub fn vector(components: Vec<Scalar>, vars: &Vars) -> Self {
        let dim = components.len();
        Self::from_fn(dim, &[Upper], vars, |i| components[i[0]].clone())
    }

    pub fn covector(components: Vec<Scalar>, vars: &Vars) -> Self {
        let dim = components.len();
        Self::from_fn(dim, &[Lower], vars, |i| components[i[0]].clone())
    }

    /// Kronecker delta as a `(1,1)` tensor.
    pub fn identity(dim: usize, vars: &Vars) -> Self {
        Self::from_fn(dim, &[Upper, Lower], vars, |i| Scalar::from_int(i64::from(i[0] == i[1])))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn rank(&self) -> usize {
        self.variance.len()
    }

    pub fn variance(&self) -> &[Variance] {
        &self.variance
    }

    pub fn components(&self) -> &[Scalar] {
        &self.components
    }

    fn offset(&self, idx: &[usize]) -> usize {
        assert_eq!(idx.len(), self.rank(), "index length must equal tensor rank");
        idx.iter().fold(0, |acc, &i| {
            assert!(i < self.dim, "index {i} out of range for dimension {}", self.dim);
            acc * self.dim + i
        })
    }

    pub fn get(&self, idx: &[usize]) -> &Scalar {
        &self.components[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: Scalar) {
        let pos = self.offset(idx);
        self.components[pos] = value.lift(&self.vars).unwrap_or_else(|e| panic!("{e}"));
    }

    /// Multi-indices paired with their components, in storage order.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, &Scalar)> {
        MultiIndex::new(self.dim, self.rank()).zip(self.components.iter())
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Scalar::is_zero)
    }

    pub fn map<F: FnMut(&Scalar) -> Scalar>(&self, f: F) -> Tensor {
        Tensor {
            dim: self.dim,
            vars: self.vars.clone(),
            variance: self.variance.clone(),
            components: self.components.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Tensor {
        self.map(|s| s.scale(c))
    }

    fn check_same_shape(&self, other: &Tensor) -> Result<(), TensorError> {
        if self.dim != other.dim {
            return Err(TensorError::DimensionMismatch(self.dim, other.dim));
        }
        for (slot, (a, b)) in self.variance.iter().zip(&other.variance).enumerate() {
            if a != b {
                return Err(TensorError::VarianceMismatch { slot, expected: *a, found: *b });
            }
        }
        if self.rank() != other.rank() {
            return Err(TensorError::SlotOutOfRange { slot: other.rank(), rank: self.rank() });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Tensor) -> Result<Tensor, TensorError> {
        self.check_same_shape(other)?;
        let components =
            self.components.iter().zip(&other.components).map(|(a, b)| a.try_add(b)).collect::<Result<_, _>>()?;
        Ok(Tensor { components, ..self.clone() })
    }

    pub fn try_sub(&self, other: &Tensor) -> Result<Tensor, TensorError> {
        self.try_add(&other.scale(&Rational::from_integer((-1).into())))
    }

    /// Outer product; slots of `self` come first.
    pub fn product(&self, other: &Tensor) -> Result<Tensor, TensorError> {
        if self.dim != other.dim && self.rank() > 0 && other.rank() > 0 {
            return Err(TensorError::DimensionMismatch(self.dim, other.dim));
        }
        let dim = if self.rank() > 0 { self.dim } else { other.dim };
        let mut variance = self.variance.clone();
        variance.extend_from_slice(&other.variance);
        let mut components = Vec::with_capacity(self.components.len() * other.components.len());
        for a in &self.components {
            for b in &other.components {
                components.push(a.try_mul(b)?);
            }
        }
        let vars = if self.vars.is_empty() { other.vars.clone() } else { self.vars.clone() };
        Ok(Tensor { dim, vars, variance, components })
    }

    fn check_slot(&self, slot: usize, expected: Variance) -> Result<(), TensorError> {
        let found = *self.variance.get(slot).ok_or(TensorError::SlotOutOfRange { slot, rank: self.rank() })?;
        if found != expected {
            return Err(TensorError::VarianceMismatch { slot, expected, found });
        }
        Ok(())
    }

    /// Trace over an upper and a lower slot. Remaining slots keep their order.
    pub fn contract(&self, slot_up: usize, slot_down: usize) -> Result<Tensor, TensorError> {
        self.check_slot(slot_up, Upper)?;
        self.check_slot(slot_down, Lower)?;
        Ok(self.trace_slots(slot_up, slot_down))
    }

    fn trace_slots(&self, s1: usize, s2: usize) -> Tensor {
        let variance: Vec<Variance> =
            self.variance.iter().enumerate().filter(|(i, _)| *i != s1 && *i != s2).map(|(_, v)| *v).collect();
        let mut out = Tensor::zeros(self.dim, &variance, &self.vars);
        let mut full = vec![0; self.rank()];
        for (pos, rest) in MultiIndex::new(self.dim, variance.len()).enumerate() {
            let mut acc = Scalar::zero(&self.vars);
            for k in 0..self.dim {
                let mut r = rest.iter();
                for (slot, f) in full.iter_mut().enumerate() {
                    *f = if slot == s1 || slot == s2 { k } else { *r.next().unwrap() };
                }
                acc = acc + self.get(&full);
            }
            out.components[pos] = acc;
        }
        if out.rank() == 0 {
            out.dim = self.dim;
        }
        out
    }

    /// Contract slot `slot` against the first index of the 2-tensor `m`,
    /// replacing it in place with `m`'s second index variance.
    fn apply_matrix(&self, slot: usize, m: &Tensor, new_variance: Variance) -> Tensor {
        let mut variance = self.variance.clone();
        variance[slot] = new_variance;
        let mut out = Tensor::zeros(self.dim, &variance, &self.vars);
        let mut src = vec![0; self.rank()];
        for (pos, idx) in MultiIndex::new(self.dim, self.rank()).enumerate() {
            let mut acc = Scalar::zero(&self.vars);
            src.copy_from_slice(&idx);
            for k in 0..self.dim {
                src[slot] = k;
                let c = m.get(&[idx[slot], k]);
                if !c.is_zero() {
                    acc = acc + c * self.get(&src);
                }
            }
            out.components[pos] = acc;
        }
        out
    }

    pub fn raise(&self, slot: usize, metric: &MetricPair) -> Result<Tensor, TensorError> {
        self.check_slot(slot, Lower)?;
        metric.check_dim(self.dim)?;
        Ok(self.apply_matrix(slot, &metric.g_inv, Upper))
    }

    pub fn lower(&self, slot: usize, metric: &MetricPair) -> Result<Tensor, TensorError> {
        self.check_slot(slot, Upper)?;
        metric.check_dim(self.dim)?;
        Ok(self.apply_matrix(slot, &metric.g, Lower))
    }

    /// Reorder slots: output slot `s` is input slot `perm[s]`.
    pub fn permute(&self, perm: &[usize]) -> Tensor {
        assert_eq!(perm.len(), self.rank());
        let variance: Vec<Variance> = perm.iter().map(|&p| self.variance[p]).collect();
        let mut src = vec![0; self.rank()];
        Tensor::from_fn(self.dim, &variance, &self.vars, |idx| {
            for (s, &p) in perm.iter().enumerate() {
                src[p] = idx[s];
            }
            self.get(&src).clone()
        })
    }

    /// `∇T` for constant frame components: a new lower slot in front holds
    /// the direction; each upper slot contributes `+Γ`, each lower slot `-Γ`.
    pub fn covariant_derivative(&self, conn: &Connection) -> Result<Tensor, TensorError> {
        if conn.dim() != self.dim {
            return Err(TensorError::DimensionMismatch(conn.dim(), self.dim));
        }
        let d = self.dim;
        let mut variance = vec![Lower];
        variance.extend_from_slice(&self.variance);
        let mut out = Tensor::zeros(d, &variance, &self.vars);
        let mut src = vec![0; self.rank()];
        for (pos, idx) in MultiIndex::new(d, variance.len()).enumerate() {
            let i = idx[0];
            let rest = &idx[1..];
            let mut acc = Scalar::zero(&self.vars);
            for (slot, v) in self.variance.iter().enumerate() {
                src.copy_from_slice(rest);
                for c in 0..d {
                    src[slot] = c;
                    let t = self.get(&src);
                    if t.is_zero() {
                        continue;
                    }
                    match v {
                        Upper => acc = acc + conn.get(i, c, rest[slot]) * t,
                        Lower => acc = acc - conn.get(i, rest[slot], c) * t,
                    }
                }
            }
            out.components[pos] = acc;
        }
        Ok(out)
    }

    /// Components in the frame `e'_a = A^i_a e_i` (columns of `a` are the
    /// new frame vectors), given `a` and its inverse.
    pub fn change_frame(&self, a: &Matrix, a_inv: &Matrix) -> Tensor {
        let vars = &self.vars;
        let to_tensor = |m: &Matrix| {
            Tensor::from_fn(self.dim, &[Upper, Lower], vars, |i| Scalar::from_rational(m[i[0]][i[1]].clone()))
        };
        // Lower slot: T'_a = A^i_a T_i, i.e. contract with the transpose of A.
        let at = to_tensor(&linalg::transpose(a));
        let ainv = to_tensor(a_inv);
        let mut out = self.clone();
        for (slot, v) in self.variance.iter().enumerate() {
            out = match v {
                Lower => out.apply_matrix(slot, &at, Lower),
                Upper => out.apply_matrix(slot, &ainv, Upper),
            };
        }
        out
    }

    pub fn eval(&self, point: &BTreeMap<String, Rational>) -> Result<Tensor, ScalarError> {
        let vars = Vars::empty();
        let components =
            self.components.iter().map(|c| c.eval(point).map(Scalar::from_rational)).collect::<Result<_, _>>()?;
        Ok(Tensor { dim: self.dim, vars, variance: self.variance.clone(), components })
    }

    /// Components that are not identically zero, in storage order.
    pub fn nonzero(&self) -> Vec<(Vec<usize>, Scalar)> {
        self.entries().filter(|(_, s)| !s.is_zero()).map(|(i, s)| (i, s.clone())).collect()
    }
}

impl std::fmt::Debug for Tensor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let nz: Vec<String> = self.nonzero().into_iter().map(|(i, s)| format!("{i:?}={s}")).collect();
        write!(f, "Tensor{:?}{{{}}}", self.variance, nz.join(", "))
    }
}

/// Iterator over all multi-indices of a given rank, row-major.
#[derive(Debug, Clone)]
pub struct MultiIndex {
    dim: usize,
    current: Option<Vec<usize>>,
}

impl MultiIndex {
    pub fn new(dim: usize, rank: usize) -> Self {
        let current = if dim == 0 && rank > 0 { None } else { Some(vec![0; rank]) };
        MultiIndex { dim, current }
    }
}

impl Iterator for MultiIndex {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let mut next = out.clone();
        let mut done = true;
        for slot in (0..next.len()).rev() {
            next[slot] += 1;
            if next[slot] < self.dim {
                done = false;
                break;
            }
            next[slot] = 0;
        }
        self.current = if done { None } else { Some(next) };
        Some(out)
    }
}

/// A constant metric with its exact inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricPair {
    matrix: Matrix,
    inverse: Matrix,
    g: Tensor,
    g_inv: Tensor,
}

impl MetricPair {
    pub fn new(matrix: Matrix) -> Result<Self, TensorError> {
        if !linalg::is_square(&matrix) {
            return Err(TensorError::NotSquare);
        }
        let n = matrix.len();
        for i in 0..n {
            for j in i + 1..n {
                if matrix[i][j] != matrix[j][i] {
                    return Err(TensorError::NotSymmetric(i, j));
                }
            }
        }
        let inverse = linalg::inverse(&matrix).ok_or(TensorError::Degenerate)?;
        let vars = Vars::empty();
        let as_tensor = |m: &Matrix, v: Variance| {
            Tensor::from_fn(n, &[v, v], &vars, |i| Scalar::from_rational(m[i[0]][i[1]].clone()))
        };
        Ok(MetricPair { g: as_tensor(&matrix, Lower), g_inv: as_tensor(&inverse, Upper), matrix, inverse })
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn inverse_matrix(&self) -> &Matrix {
        &self.inverse
    }

    pub fn g(&self) -> &Tensor {
        &self.g
    }

    pub fn g_inv(&self) -> &Tensor {
        &self.g_inv
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.matrix[i][j]
    }

    pub fn inv_entry(&self, i: usize, j: usize) -> &Rational {
        &self.inverse[i][j]
    }

    /// `g(u, v)` for constant vectors.
    pub fn inner(&self, u: &[Rational], v: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (i, ui) in u.iter().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                acc += ui * &self.matrix[i][j] * vj;
            }
        }
        acc
    }

    fn check_dim(&self, dim: usize) -> Result<(), TensorError> {
        if self.dim() != dim {
            return Err(TensorError::DimensionMismatch(self.dim(), dim));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn family_metric() -> MetricPair {
        MetricPair::new(vec![vec![int(1), int(0), int(0)], vec![int(0), int(1), int(0)], vec![int(0), int(0), int(-1)]])
            .unwrap()
    }

    #[test]
    fn trace_of_identity() {
        let t = Tensor::identity(3, &Vars::empty()).contract(0, 1).unwrap();
        assert_eq!(t.rank(), 0);
        assert_eq!(t.components()[0], Scalar::from_int(3));
    }

    #[test]
    fn contract_rejects_wrong_variance() {
        let t = Tensor::identity(3, &Vars::empty());
        assert!(matches!(t.contract(1, 0), Err(TensorError::VarianceMismatch { .. })));
        assert!(matches!(t.contract(0, 5), Err(TensorError::SlotOutOfRange { .. })));
    }

    #[test]
    fn lower_xi_gives_eta() {
        let v = Vars::empty();
        let xi = Tensor::vector(vec![Scalar::from_int(1), Scalar::from_int(0), Scalar::from_int(0)], &v);
        let eta = xi.lower(0, &family_metric()).unwrap();
        assert_eq!(eta.variance(), &[Lower]);
        assert_eq!(eta.components(), &[Scalar::from_int(1), Scalar::from_int(0), Scalar::from_int(0)]);
    }

    #[test]
    fn lowered_phi() {
        // phi e1 = e2, phi e2 = -e1 as phi^i_j
        let v = Vars::empty();
        let mut phi = Tensor::zeros(3, &[Upper, Lower], &v);
        phi.set(&[2, 1], Scalar::from_int(1));
        phi.set(&[1, 2], Scalar::from_int(-1));
        let low = phi.lower(0, &family_metric()).unwrap();
        assert_eq!(low.get(&[1, 2]), &Scalar::from_int(-1));
        assert_eq!(low.get(&[2, 1]), &Scalar::from_int(-1));
        assert_eq!(low.nonzero().len(), 2);
    }

    #[test]
    fn raise_then_lower() {
        let v = Vars::new(["a"]);
        let a = Scalar::var(&v, "a").unwrap();
        let t = Tensor::from_fn(3, &[Lower, Upper], &v, |i| a.scale(&int((i[0] * 3 + i[1]) as i64)));
        let g = family_metric();
        let back = t.raise(0, &g).unwrap().lower(0, &g).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn degenerate_metric_rejected() {
        let m = vec![vec![int(1), int(1)], vec![int(1), int(1)]];
        assert_eq!(MetricPair::new(m), Err(TensorError::Degenerate));
        let m = vec![vec![int(1), int(2)], vec![int(0), int(1)]];
        assert_eq!(MetricPair::new(m), Err(TensorError::NotSymmetric(0, 1)));
    }

    #[test]
    fn multi_index_order() {
        let all: Vec<_> = MultiIndex::new(2, 2).collect();
        assert_eq!(all, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(MultiIndex::new(3, 0).count(), 1);
    }
}
