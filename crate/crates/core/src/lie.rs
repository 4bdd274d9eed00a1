//! Lie algebras given by structure constants in a fixed frame.
//!
//! `[e_i, e_j] = C^k_{ij} e_k`, stored as `C[i][j][k]`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::condition::ConditionSet;
use crate::linalg::{self, Matrix};
use crate::scalar::{fmt_rational, Rational, Scalar, ScalarError, Vars};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("Bianchi classification needs a 3-dimensional algebra, got dimension {0}")]
    NotThreeDimensional(usize),
    #[error("parameter `{0}` has no value at the requested point")]
    Unspecialized(String),
    #[error("Jacobi identity fails at the requested point: {0}")]
    JacobiFails(String),
    #[error("frame index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error(transparent)]
    Scalar(ScalarError),
}

impl From<ScalarError> for LieError {
    fn from(e: ScalarError) -> Self {
        match e {
            ScalarError::MissingAssignment(name) => LieError::Unspecialized(name),
            other => LieError::Scalar(other),
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    vars: Vars,
    consts: Vec<Scalar>,
}

impl LieAlgebra {
    pub fn abelian(dim: usize, vars: &Vars) -> Self {
        LieAlgebra { dim, vars: vars.clone(), consts: vec![Scalar::zero(vars); dim * dim * dim] }
    }

    /// Set `[e_i, e_j]` to have `value` along `e_k`; `[e_j, e_i]` follows.
    pub fn set_bracket(&mut self, i: usize, j: usize, k: usize, value: Scalar) -> Result<(), LieError> {
        for index in [i, j, k] {
            if index >= self.dim {
                return Err(LieError::IndexOutOfRange { index, dim: self.dim });
            }
        }
        let value = value.lift(&self.vars)?;
        if i == j {
            // [e_i, e_i] = 0 regardless of input.
            return Ok(());
        }
        let d = self.dim;
        self.consts[(j * d + i) * d + k] = -&value;
        self.consts[(i * d + j) * d + k] = value;
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    /// `C^k_{ij}`.
    pub fn c(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.consts[(i * self.dim + j) * self.dim + k]
    }

    /// `[e_i, e_j]` as a component vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Scalar> {
        (0..self.dim).map(|k| self.c(i, j, k).clone()).collect()
    }

    /// Bracket of two component vectors.
    pub fn bracket(&self, u: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
        let d = self.dim;
        let mut out = vec![Scalar::zero(&self.vars); d];
        for i in 0..d {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..d {
                if v[j].is_zero() || i == j {
                    continue;
                }
                let uv = &u[i] * &v[j];
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.c(i, j, k);
                    if !c.is_zero() {
                        *o = &*o + &(&uv * c);
                    }
                }
            }
        }
        out
    }

    /// Polynomial obstructions to the Jacobi identity; empty iff it holds.
    pub fn check_jacobi(&self) -> ConditionSet {
        let d = self.dim;
        let mut polys = Vec::new();
        for i in 0..d {
            for j in i + 1..d {
                for k in j + 1..d {
                    for m in 0..d {
                        let mut acc = Scalar::zero(&self.vars);
                        for l in 0..d {
                            acc = acc
                                + self.c(i, j, l) * self.c(l, k, m)
                                + self.c(j, k, l) * self.c(l, i, m)
                                + self.c(k, i, l) * self.c(l, j, m);
                        }
                        polys.push(acc);
                    }
                }
            }
        }
        ConditionSet::from_polys(polys)
    }

    /// Matrix of `ad_{e_i}`: entry `[k][j]` is `C^k_{ij}`.
    pub fn adjoint(&self, i: usize) -> Result<Vec<Vec<Scalar>>, LieError> {
        if i >= self.dim {
            return Err(LieError::IndexOutOfRange { index: i, dim: self.dim });
        }
        Ok((0..self.dim).map(|k| (0..self.dim).map(|j| self.c(i, j, k).clone()).collect()).collect())
    }

    /// `tr ad_{e_i}` for each `i`.
    pub fn adjoint_traces(&self) -> Vec<Scalar> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|k| self.c(i, k, k).clone()).sum::<Scalar>().lift(&self.vars).unwrap())
            .collect()
    }

    /// Conditions for `tr ad_x = 0` for all `x`.
    pub fn is_unimodular(&self) -> ConditionSet {
        ConditionSet::from_polys(self.adjoint_traces())
    }

    pub fn specialize(&self, point: &BTreeMap<String, Rational>) -> Result<LieAlgebra, LieError> {
        let vars = Vars::empty();
        let consts = self.consts.iter().map(|c| c.eval(point).map(Scalar::from_rational)).collect::<Result<_, _>>()?;
        Ok(LieAlgebra { dim: self.dim, vars, consts })
    }

    /// Structure constants in the frame `e'_a = A^i_a e_i`.
    pub fn change_frame(&self, a: &Matrix, a_inv: &Matrix) -> LieAlgebra {
        let d = self.dim;
        let mut out = LieAlgebra::abelian(d, &self.vars);
        let r = |x: &Rational| Scalar::from_rational(x.clone());
        for p in 0..d {
            for q in 0..d {
                for s in 0..d {
                    let mut acc = Scalar::zero(&self.vars);
                    for i in 0..d {
                        if a[i][p].is_zero() {
                            continue;
                        }
                        for j in 0..d {
                            if a[j][q].is_zero() {
                                continue;
                            }
                            for k in 0..d {
                                if a_inv[s][k].is_zero() {
                                    continue;
                                }
                                let w = &a[i][p] * &a[j][q] * &a_inv[s][k];
                                acc = acc + self.c(i, j, k) * r(&w);
                            }
                        }
                    }
                    out.consts[(p * d + q) * d + s] = acc.lift(&self.vars).unwrap();
                }
            }
        }
        out
    }

    fn constant_matrix(&self) -> Option<Vec<Rational>> {
        self.consts.iter().map(Scalar::as_constant).collect()
    }

    /// Bianchi type of the algebra specialized at `point`.
    pub fn bianchi_classify(&self, point: &BTreeMap<String, Rational>) -> Result<BianchiType, LieError> {
        if self.dim != 3 {
            return Err(LieError::NotThreeDimensional(self.dim));
        }
        let special = self.specialize(point)?;
        let jacobi = special.check_jacobi();
        if !jacobi.holds_identically() {
            return Err(LieError::JacobiFails(jacobi.to_string()));
        }
        let c = special.constant_matrix().expect("specialized constants");
        Ok(classify_constants(&c))
    }
}

impl fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                for k in 0..self.dim {
                    let c = self.c(i, j, k);
                    if !c.is_zero() {
                        parts.push(format!("C^{k}_{i}{j}={c}"));
                    }
                }
            }
        }
        write!(f, "LieAlgebra(d={}, {})", self.dim, parts.join(", "))
    }
}

/// Type of a real 3-dimensional Lie algebra.
///
/// For `VI_h` and `VII_h` the parameter is `h = |tr A| / sqrt(|det A|)`
/// where `A` is `ad_x` restricted to the two-dimensional abelian derived
/// ideal, `x` any vector outside it. In that normalization `A` is similar
/// to a multiple of `[[0, -1], [1, h]]` (type VII) or `[[0, 1], [1, h]]`
/// (type VI), so `h >= 0`. `VI_0` is reported as `VI_h` with `h = 0`.
#[derive(Debug, Clone, PartialEq)]
pub enum BianchiType {
    I,
    II,
    III,
    IV,
    V,
    VIh { h: f64, trace: Rational, det: Rational },
    VII0,
    VIIh { h: f64, trace: Rational, det: Rational },
    VIII,
    IX,
}

impl BianchiType {
    pub fn tag(&self) -> &'static str {
        match self {
            BianchiType::I => "I",
            BianchiType::II => "II",
            BianchiType::III => "III",
            BianchiType::IV => "IV",
            BianchiType::V => "V",
            BianchiType::VIh { .. } => "VI_h",
            BianchiType::VII0 => "VII_0",
            BianchiType::VIIh { .. } => "VII_h",
            BianchiType::VIII => "VIII",
            BianchiType::IX => "IX",
        }
    }

    pub fn h(&self) -> Option<f64> {
        match self {
            BianchiType::VIh { h, .. } | BianchiType::VIIh { h, .. } => Some(*h),
            _ => None,
        }
    }
}

impl fmt::Display for BianchiType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BianchiType::I => write!(f, "type I (abelian)"),
            BianchiType::VIh { h, trace, det } | BianchiType::VIIh { h, trace, det } => write!(
                f,
                "type {} (h = {:.6}; trace = {}, det = {})",
                self.tag(),
                h,
                fmt_rational(trace),
                fmt_rational(det)
            ),
            other => write!(f, "type {}", other.tag()),
        }
    }
}

fn epsilon_pair(l: usize) -> (usize, usize) {
    // (i, j) with epsilon_{ijl} = +1
    match l {
        0 => (1, 2),
        1 => (2, 0),
        _ => (0, 1),
    }
}

/// Classify numeric structure constants `C[(i*3+j)*3+k]` satisfying Jacobi.
///
/// Writes `C^k_{ij} = eps_{ijl} n^{lk} + a_i delta^k_j - a_j delta^k_i` and
/// reads the type off `a` and the inertia of the symmetric matrix `n`.
fn classify_constants(c: &[Rational]) -> BianchiType {
    let cc = |i: usize, j: usize, k: usize| &c[(i * 3 + j) * 3 + k];
    let half = Rational::new(1.into(), 2.into());
    let a: Vec<Rational> = (0..3).map(|i| (0..3).fold(Rational::zero(), |acc, k| acc + cc(i, k, k)) * &half).collect();
    let mut n: Matrix = vec![vec![Rational::zero(); 3]; 3];
    for (l, row) in n.iter_mut().enumerate() {
        let (i, j) = epsilon_pair(l);
        for (k, entry) in row.iter_mut().enumerate() {
            let mut v = cc(i, j, k).clone();
            if k == j {
                v -= &a[i];
            }
            if k == i {
                v += &a[j];
            }
            *entry = v;
        }
    }
    debug_assert_eq!(n, linalg::transpose(&n), "vector part removal leaves n symmetric");
    let (pos, neg, _) = linalg::inertia(&n);
    let rank = pos + neg;
    let definite = pos == 0 || neg == 0;
    let class_a = a.iter().all(Zero::is_zero);

    match (class_a, rank, definite) {
        (true, 0, _) => BianchiType::I,
        (true, 1, _) => BianchiType::II,
        (true, 2, true) => BianchiType::VII0,
        (true, 2, false) => solvable_type(c, true),
        (true, _, true) => BianchiType::IX,
        (true, _, false) => BianchiType::VIII,
        (false, 0, _) => BianchiType::V,
        (false, 1, _) => BianchiType::IV,
        (false, _, true) => solvable_type(c, false),
        (false, _, false) => solvable_type(c, true),
    }
}

/// Types VI_h, VII_h and III from the action on the derived ideal.
fn solvable_type(c: &[Rational], real_eigenvalues: bool) -> BianchiType {
    let cc = |i: usize, j: usize, k: usize| c[(i * 3 + j) * 3 + k].clone();
    let rows: Matrix = [(0, 1), (0, 2), (1, 2)].iter().map(|&(i, j)| (0..3).map(|k| cc(i, j, k)).collect()).collect();
    let derived = linalg::row_basis(&rows);
    if derived.len() == 1 {
        return BianchiType::III;
    }
    debug_assert_eq!(derived.len(), 2, "solvable 3D algebra with 2D derived ideal");
    let pivots: Vec<usize> =
        derived.iter().map(|r| r.iter().position(|x| !x.is_zero()).expect("nonzero row")).collect();
    // Any frame vector outside the ideal works as the complement.
    let x = (0..3)
        .find(|&i| {
            let mut m = derived.clone();
            m.push((0..3).map(|k| Rational::from_integer(i64::from(k == i).into())).collect());
            linalg::rank(&m) == 3
        })
        .expect("ideal has codimension one");
    let ad_x = |v: &[Rational]| -> Vec<Rational> {
        (0..3).map(|k| (0..3).fold(Rational::zero(), |acc, j| acc + &v[j] * cc(x, j, k))).collect()
    };
    // Coordinates in the reduced row-echelon basis are read at pivot columns.
    let mut m = vec![vec![Rational::zero(); 2]; 2];
    for (col, basis) in derived.iter().enumerate() {
        let image = ad_x(basis);
        for (row, &p) in pivots.iter().enumerate() {
            m[row][col] = image[p].clone();
        }
    }
    let trace = &m[0][0] + &m[1][1];
    let det = linalg::det(&m);
    let ratio = |t: &Rational, d: &Rational| {
        let t = t.abs().to_f64().unwrap_or(f64::NAN);
        let d = d.abs().to_f64().unwrap_or(f64::NAN);
        t / d.sqrt()
    };
    let h = ratio(&trace, &det);
    if real_eigenvalues {
        BianchiType::VIh { h, trace, det }
    } else {
        BianchiType::VIIh { h, trace, det }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, parse_scalar};

    fn algebra(vars: &Vars, brackets: &[(usize, usize, usize, &str)]) -> LieAlgebra {
        let mut l = LieAlgebra::abelian(3, vars);
        for &(i, j, k, v) in brackets {
            l.set_bracket(i, j, k, parse_scalar(v, vars).unwrap()).unwrap();
        }
        l
    }

    fn family() -> LieAlgebra {
        let v = Vars::new(["a", "b"]);
        algebra(&v, &[(0, 1, 1, "-b"), (0, 1, 2, "-a"), (0, 2, 1, "a"), (0, 2, 2, "-b")])
    }

    fn at(a: i64, b: i64) -> BTreeMap<String, Rational> {
        BTreeMap::from([("a".to_string(), int(a)), ("b".to_string(), int(b))])
    }

    #[test]
    fn jacobi_family_and_abelian() {
        assert!(family().check_jacobi().holds_identically());
        assert!(LieAlgebra::abelian(3, &Vars::empty()).check_jacobi().holds_identically());
    }

    #[test]
    fn jacobi_obstruction() {
        // [e0,e1]=e2, [e1,e2]=a e1: cyclic sum is -a e2.
        let v = Vars::new(["a"]);
        let l = algebra(&v, &[(0, 1, 2, "1"), (1, 2, 1, "a")]);
        assert_eq!(l.check_jacobi().to_strings(), ["a"]);
    }

    #[test]
    fn adjoint_of_family() {
        let l = family();
        let ad0 = l.adjoint(0).unwrap();
        let block: Vec<Vec<String>> = (1..3).map(|k| (1..3).map(|j| ad0[k][j].to_string()).collect()).collect();
        assert_eq!(block, [["-b", "a"], ["-a", "-b"]]);
        let ad1 = l.adjoint(1).unwrap();
        assert!((0..3).all(|k| ad1[k][2].is_zero()));
        assert!(l.adjoint(3).is_err());
    }

    #[test]
    fn unimodularity() {
        assert_eq!(family().is_unimodular().to_strings(), ["b"]);
        assert!(LieAlgebra::abelian(3, &Vars::empty()).is_unimodular().holds_identically());
        let heis = algebra(&Vars::empty(), &[(1, 2, 0, "1")]);
        assert!(heis.is_unimodular().holds_identically());
        assert_eq!(heis.bianchi_classify(&BTreeMap::new()).unwrap(), BianchiType::II);
    }

    #[test]
    fn family_types() {
        let l = family();
        assert_eq!(l.bianchi_classify(&at(0, 0)).unwrap(), BianchiType::I);
        assert_eq!(l.bianchi_classify(&at(1, 0)).unwrap(), BianchiType::VII0);
        assert_eq!(l.bianchi_classify(&at(0, 1)).unwrap(), BianchiType::V);
        let t = l.bianchi_classify(&at(1, 1)).unwrap();
        assert_eq!(t.tag(), "VII_h");
        assert!((t.h().unwrap() - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn simple_types() {
        let v = Vars::empty();
        let so3 = algebra(&v, &[(0, 1, 2, "1"), (1, 2, 0, "1"), (2, 0, 1, "1")]);
        assert_eq!(so3.bianchi_classify(&BTreeMap::new()).unwrap(), BianchiType::IX);
        let sl2 = algebra(&v, &[(0, 1, 2, "1"), (1, 2, 0, "-1"), (2, 0, 1, "1")]);
        assert_eq!(sl2.bianchi_classify(&BTreeMap::new()).unwrap(), BianchiType::VIII);
        // R + aff(1): [e0,e1] = e1
        let iii = algebra(&v, &[(0, 1, 1, "1")]);
        assert_eq!(iii.bianchi_classify(&BTreeMap::new()).unwrap(), BianchiType::III);
        // [e0,e1] = e1 + e2, [e0,e2] = e2
        let iv = algebra(&v, &[(0, 1, 1, "1"), (0, 1, 2, "1"), (0, 2, 2, "1")]);
        assert_eq!(iv.bianchi_classify(&BTreeMap::new()).unwrap(), BianchiType::IV);
        // [e0,e1] = e1, [e0,e2] = -e2: VI_0
        let vi0 = algebra(&v, &[(0, 1, 1, "1"), (0, 2, 2, "-1")]);
        match vi0.bianchi_classify(&BTreeMap::new()).unwrap() {
            BianchiType::VIh { h, .. } => assert_eq!(h, 0.0),
            other => panic!("expected VI_0, got {other:?}"),
        }
    }

    #[test]
    fn classification_errors() {
        let l = family();
        let partial = BTreeMap::from([("a".to_string(), int(1))]);
        assert_eq!(l.bianchi_classify(&partial), Err(LieError::Unspecialized("b".into())));
        assert!(matches!(
            LieAlgebra::abelian(4, &Vars::empty()).bianchi_classify(&BTreeMap::new()),
            Err(LieError::NotThreeDimensional(4))
        ));
        let bad = algebra(&Vars::empty(), &[(0, 1, 2, "1"), (1, 2, 1, "1")]);
        assert!(matches!(bad.bianchi_classify(&BTreeMap::new()), Err(LieError::JacobiFails(_))));
    }
}
