//! Curvature of a connection on a left-invariant frame, Ricci traces,
//! sectional curvature, section types and the curvature predicates.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::condition::ConditionSet;
use crate::connection::{Connection, LeeForms, SquareNorms};
use crate::linalg;
use crate::scalar::{int, Rational, Scalar, ScalarError};
use crate::structure::AcbmManifold;
use crate::tensor::{Tensor, Variance};

use Variance::Lower;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurvatureError {
    #[error("plane is degenerate: g(x,x)g(y,y) - g(x,y)^2 = 0")]
    DegeneratePlane,
    #[error("x and y are linearly dependent")]
    LinearlyDependent,
    #[error("vectors must have {expected} components, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("section types need a constant structure")]
    NonConstantStructure,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurvatureData {
    /// `R(e_i, e_j, e_k, e_l) = g(R(e_i, e_j) e_k, e_l)`.
    pub r: Tensor,
    pub rho: Tensor,
    pub tau: Scalar,
    pub rho_star: Tensor,
    pub tau_star: Scalar,
}

/// `R(x,y)z = ∇_x ∇_y z - ∇_y ∇_x z - ∇_[x,y] z` on frame fields:
/// `R^l_{ijk} = Γ^m_{jk} Γ^l_{im} - Γ^m_{ik} Γ^l_{jm} - C^m_{ij} Γ^l_{mk}`.
pub fn curvature(m: &AcbmManifold, conn: &Connection) -> CurvatureData {
    let d = m.dim();
    let vars = m.vars();
    let l = m.algebra();
    let mut up = vec![Scalar::zero(vars); d * d * d * d];
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for o in 0..d {
                    let mut s = Scalar::zero(vars);
                    for p in 0..d {
                        let (a, b, c) = (conn.get(j, k, p), conn.get(i, k, p), l.c(i, j, p));
                        if !a.is_zero() {
                            s = s + a * conn.get(i, p, o);
                        }
                        if !b.is_zero() {
                            s = s - b * conn.get(j, p, o);
                        }
                        if !c.is_zero() {
                            s = s - c * conn.get(p, k, o);
                        }
                    }
                    up[((i * d + j) * d + k) * d + o] = s;
                }
            }
        }
    }
    let r = Tensor::from_fn(d, &[Lower; 4], vars, |x| {
        (0..d).fold(Scalar::zero(vars), |acc, p| {
            let g = m.metric().entry(p, x[3]);
            if g.is_zero() {
                acc
            } else {
                acc + up[((x[0] * d + x[1]) * d + x[2]) * d + p].scale(g)
            }
        })
    });
    let rho = Tensor::from_fn(d, &[Lower; 2], vars, |x| trace_pairs(m, |i, j| r.get(&[i, x[0], x[1], j]).clone()));
    let rho_star = Tensor::from_fn(d, &[Lower; 2], vars, |x| {
        trace_pairs(m, |i, j| {
            (0..d).fold(Scalar::zero(vars), |acc, p| {
                let ph = m.phi_at(p, j);
                if ph.is_zero() {
                    acc
                } else {
                    acc + r.get(&[i, x[0], x[1], p]) * ph
                }
            })
        })
    });
    let tau = trace_pairs(m, |i, j| rho.get(&[i, j]).clone());
    let tau_star = trace_pairs(m, |i, j| rho_star.get(&[i, j]).clone());
    CurvatureData { r, rho, tau, rho_star, tau_star }
}

/// `g^{ij} f(i, j)`.
fn trace_pairs<F: FnMut(usize, usize) -> Scalar>(m: &AcbmManifold, mut f: F) -> Scalar {
    let d = m.dim();
    let mut acc = m.zero();
    for i in 0..d {
        for j in 0..d {
            let gi = m.metric().inv_entry(i, j);
            if !gi.is_zero() {
                acc = acc + f(i, j).scale(gi);
            }
        }
    }
    acc
}

/// `R(x, y, z, w)` for constant vectors.
pub fn eval4(r: &Tensor, v: [&[Rational]; 4]) -> Scalar {
    let mut acc = Scalar::zero(r.vars());
    for (idx, c) in r.entries() {
        let w = idx.iter().zip(v).fold(int(1), |w, (i, x)| w * &x[*i]);
        if !w.is_zero() {
            acc = acc + c.scale(&w);
        }
    }
    acc
}

fn check_len(m: &AcbmManifold, v: &[Rational]) -> Result<(), CurvatureError> {
    if v.len() != m.dim() {
        return Err(CurvatureError::DimensionMismatch { expected: m.dim(), found: v.len() });
    }
    Ok(())
}

/// `k(x, y) = R(x, y, y, x) / (g(x,x) g(y,y) - g(x,y)^2)`.
pub fn sectional_curvature(
    m: &AcbmManifold,
    cd: &CurvatureData,
    x: &[Rational],
    y: &[Rational],
) -> Result<Scalar, CurvatureError> {
    check_len(m, x)?;
    check_len(m, y)?;
    let g = m.metric();
    let den = g.inner(x, x) * g.inner(y, y) - g.inner(x, y) * g.inner(x, y);
    if den.is_zero() {
        return Err(CurvatureError::DegeneratePlane);
    }
    Ok(eval4(&cd.r, [x, y, y, x]).div_rational(&den).expect("nonzero"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SectionTag {
    XiSection,
    PhiHolomorphic,
    TotallyReal,
    Generic,
}

impl SectionTag {
    pub fn label(self) -> &'static str {
        match self {
            SectionTag::XiSection => "xi-section",
            SectionTag::PhiHolomorphic => "phi-holomorphic",
            SectionTag::TotallyReal => "totally real",
            SectionTag::Generic => "generic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SectionType {
    pub tag: SectionTag,
    /// The restriction of `g` to the plane is degenerate.
    pub degenerate: bool,
}

impl fmt::Display for SectionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag.label())?;
        if self.degenerate {
            f.write_str(" (degenerate)")?;
        }
        Ok(())
    }
}

/// Type of the plane spanned by constant vectors `x`, `y`. A plane
/// containing `xi` is reported as a xi-section before anything else.
pub fn section_type(m: &AcbmManifold, x: &[Rational], y: &[Rational]) -> Result<SectionType, CurvatureError> {
    check_len(m, x)?;
    check_len(m, y)?;
    let phi = m.phi_matrix().ok_or(CurvatureError::NonConstantStructure)?;
    let consts = |v: &Tensor| -> Option<Vec<Rational>> { v.components().iter().map(Scalar::as_constant).collect() };
    let xi = consts(m.xi()).ok_or(CurvatureError::NonConstantStructure)?;
    if linalg::rank(&vec![x.to_vec(), y.to_vec()]) < 2 {
        return Err(CurvatureError::LinearlyDependent);
    }
    let g = m.metric();
    let px = linalg::mat_vec(&phi, x);
    let py = linalg::mat_vec(&phi, y);
    let den = g.inner(x, x) * g.inner(y, y) - g.inner(x, y) * g.inner(x, y);
    let degenerate = den.is_zero();

    let tag = if linalg::rank(&vec![x.to_vec(), y.to_vec(), xi.clone()]) == 2 {
        SectionTag::XiSection
    } else if linalg::rank(&vec![px.clone(), py.clone()]) == 2
        && linalg::rank(&vec![x.to_vec(), y.to_vec(), px.clone(), py.clone()]) == 2
    {
        SectionTag::PhiHolomorphic
    } else {
        let orth =
            [x, y].iter().all(|u| [&px, &py].iter().all(|v| g.inner(u, v).is_zero()) && g.inner(u, &xi).is_zero());
        if orth {
            SectionTag::TotallyReal
        } else {
            SectionTag::Generic
        }
    };
    Ok(SectionType { tag, degenerate })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Predicate {
    Flat,
    RicciFlat,
    StarRicciFlat,
    ScalarFlat,
    StarScalarFlat,
    IsotropicF0,
    Einstein,
    ConstantCurvature,
    LeeThetaZero,
}

impl Predicate {
    pub const ALL: [Predicate; 9] = [
        Predicate::Flat,
        Predicate::RicciFlat,
        Predicate::StarRicciFlat,
        Predicate::ScalarFlat,
        Predicate::StarScalarFlat,
        Predicate::IsotropicF0,
        Predicate::Einstein,
        Predicate::ConstantCurvature,
        Predicate::LeeThetaZero,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Predicate::Flat => "flat",
            Predicate::RicciFlat => "ricci-flat",
            Predicate::StarRicciFlat => "*-ricci-flat",
            Predicate::ScalarFlat => "scalar-flat",
            Predicate::StarScalarFlat => "*-scalar-flat",
            Predicate::IsotropicF0 => "isotropic-F0",
            Predicate::Einstein => "einstein",
            Predicate::ConstantCurvature => "constant-curvature",
            Predicate::LeeThetaZero => "theta-vanishes",
        }
    }

    pub fn from_name(name: &str) -> Option<Predicate> {
        Predicate::ALL.into_iter().find(|p| p.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Predicates {
    pub sets: BTreeMap<Predicate, ConditionSet>,
    /// `τ / d`, the Einstein constant wherever Einstein holds.
    pub lambda: Scalar,
    /// `τ / (d (d - 1))`, the curvature wherever constant curvature holds.
    pub k: Scalar,
}

impl Predicates {
    pub fn get(&self, p: Predicate) -> &ConditionSet {
        &self.sets[&p]
    }

    /// `λ` with the parameters pinned by the Einstein locus substituted.
    pub fn lambda_on_locus(&self) -> Scalar {
        self.get(Predicate::Einstein).restrict(&self.lambda)
    }

    pub fn k_on_locus(&self) -> Scalar {
        self.get(Predicate::ConstantCurvature).restrict(&self.k)
    }

    /// Constant curvature holds at `point` with `k < 0`.
    pub fn hyperbolic_at(&self, point: &BTreeMap<String, Rational>) -> Result<bool, ScalarError> {
        Ok(self.get(Predicate::ConstantCurvature).holds_at(point)? && self.k.eval(point)?.is_negative())
    }
}

pub fn predicates(m: &AcbmManifold, cd: &CurvatureData, norms: &SquareNorms, lee: &LeeForms) -> Predicates {
    let d = m.dim();
    let all = |t: &Tensor| ConditionSet::from_polys(t.components().iter().cloned());
    let one = |s: &Scalar| ConditionSet::from_polys([s.clone()]);
    let g = |i: usize, j: usize| m.metric().entry(i, j).clone();

    let mut einstein = Vec::new();
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    einstein.push(cd.rho.get(&[i, j]).scale(&g(k, l)) - cd.rho.get(&[k, l]).scale(&g(i, j)));
                }
            }
        }
    }
    let dd = int(d as i64);
    let k = cd.tau.div_rational(&(&dd * (&dd - int(1)))).expect("d > 1");
    let lambda = cd.tau.div_rational(&dd).expect("d > 0");
    let mut space_form = Vec::new();
    for (idx, r) in cd.r.entries() {
        let (i, j, kk, l) = (idx[0], idx[1], idx[2], idx[3]);
        let model = g(j, kk) * g(i, l) - g(i, kk) * g(j, l);
        space_form.push(r - k.scale(&model));
    }

    let sets = BTreeMap::from([
        (Predicate::Flat, all(&cd.r)),
        (Predicate::RicciFlat, all(&cd.rho)),
        (Predicate::StarRicciFlat, all(&cd.rho_star)),
        (Predicate::ScalarFlat, one(&cd.tau)),
        (Predicate::StarScalarFlat, one(&cd.tau_star)),
        (Predicate::IsotropicF0, one(&norms.nabla_phi)),
        (Predicate::Einstein, ConditionSet::from_polys(einstein)),
        (Predicate::ConstantCurvature, ConditionSet::from_polys(space_form)),
        (Predicate::LeeThetaZero, all(&lee.theta)),
    ]);
    Predicates { sets, lambda, k }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::{fundamental_tensor, lee_forms, levi_civita, square_norms};
    use crate::family::{build_family, FamilySpec};
    use crate::scalar::{parse_scalar, Vars};

    fn fam() -> (AcbmManifold, CurvatureData) {
        let m = build_family(&FamilySpec::symbolic());
        let cd = curvature(&m, &levi_civita(&m));
        (m, cd)
    }

    fn p(s: &str) -> Scalar {
        parse_scalar(s, &Vars::new(["a", "b"])).unwrap()
    }

    fn v(xs: [i64; 3]) -> Vec<Rational> {
        xs.into_iter().map(int).collect()
    }

    #[test]
    fn curvature_table() {
        let (_, cd) = fam();
        assert_eq!(cd.r.get(&[0, 1, 0, 1]), &p("-a^2+b^2"));
        assert_eq!(cd.r.get(&[0, 2, 0, 2]), &p("a^2-b^2"));
        assert_eq!(cd.r.get(&[0, 1, 0, 2]), &p("-2*a*b"));
        assert_eq!(cd.r.get(&[0, 2, 0, 1]), &p("-2*a*b"));
        assert_eq!(cd.r.get(&[1, 2, 1, 2]), &p("-a^2-b^2"));
        assert_eq!(cd.rho.get(&[0, 0]), &p("2*a^2-2*b^2"));
        assert_eq!(cd.rho.get(&[1, 1]), &p("-2*b^2"));
        assert_eq!(cd.rho.get(&[2, 2]), &p("2*b^2"));
        assert_eq!(cd.rho.get(&[1, 2]), &p("2*a*b"));
        assert_eq!(cd.rho_star.get(&[0, 0]), &p("4*a*b"));
        assert_eq!(cd.rho_star.get(&[1, 2]), &p("-a^2-b^2"));
        assert_eq!(cd.tau, p("2*a^2-6*b^2"));
        assert_eq!(cd.tau_star, p("4*a*b"));
    }

    #[test]
    fn abelian_is_flat() {
        let m = build_family(&FamilySpec::numeric(int(0), int(0)));
        let cd = curvature(&m, &levi_civita(&m));
        assert!(cd.r.is_zero() && cd.rho.is_zero() && cd.rho_star.is_zero());
        assert!(cd.tau.is_zero() && cd.tau_star.is_zero());
    }

    #[test]
    fn adapted_frame_traces() {
        let (_, cd) = fam();
        for j in 0..3 {
            for k in 0..3 {
                let r = |a, b, c, d| cd.r.get(&[a, b, c, d]).clone();
                assert_eq!(cd.rho.get(&[j, k]), &(r(0, j, k, 0) + r(1, j, k, 1) - r(2, j, k, 2)));
                assert_eq!(cd.rho_star.get(&[j, k]), &(r(1, j, k, 2) + r(2, j, k, 1)));
            }
        }
    }

    #[test]
    fn transposed_star_trace_disagrees() {
        // R_{1kj2} + R_{2jk1} doubles R_{1212} at (j, k) = (1, 2).
        let (_, cd) = fam();
        let r = |a, b, c, d| cd.r.get(&[a, b, c, d]).clone();
        assert_eq!(r(1, 2, 1, 2) + r(2, 1, 2, 1), p("-2*a^2-2*b^2"));
        assert_eq!(cd.rho_star.get(&[1, 2]), &p("-a^2-b^2"));
    }

    #[test]
    fn sectional() {
        let (m, cd) = fam();
        assert_eq!(sectional_curvature(&m, &cd, &v([1, 0, 0]), &v([0, 1, 0])).unwrap(), p("a^2-b^2"));
        assert_eq!(sectional_curvature(&m, &cd, &v([1, 0, 0]), &v([0, 0, 1])).unwrap(), p("a^2-b^2"));
        assert_eq!(sectional_curvature(&m, &cd, &v([0, 1, 0]), &v([0, 0, 1])).unwrap(), p("-a^2-b^2"));
        assert_eq!(sectional_curvature(&m, &cd, &v([0, 1, 1]), &v([1, 0, 0])), Err(CurvatureError::DegeneratePlane));
    }

    #[test]
    fn section_types() {
        let (m, _) = fam();
        let t = |x, y| section_type(&m, &v(x), &v(y)).unwrap();
        assert_eq!(t([0, 1, 0], [0, 0, 1]).tag, SectionTag::PhiHolomorphic);
        assert_eq!(t([1, 0, 0], [0, 1, 0]).tag, SectionTag::XiSection);
        assert_eq!(t([1, 0, 0], [0, 1, 1]), SectionType { tag: SectionTag::XiSection, degenerate: true });
        assert_eq!(t([1, 1, 0], [0, 1, 1]).tag, SectionTag::Generic);
        assert_eq!(section_type(&m, &v([0, 1, 0]), &v([0, 2, 0])), Err(CurvatureError::LinearlyDependent));
    }

    #[test]
    fn family_predicates() {
        let (m, cd) = fam();
        let lc = levi_civita(&m);
        let lee = lee_forms(&m, &fundamental_tensor(&m, &lc));
        let pr = predicates(&m, &cd, &square_norms(&m, &lc), &lee);
        let s = |q| pr.get(q).to_strings();
        assert_eq!(s(Predicate::Flat), ["a", "b"]);
        assert_eq!(s(Predicate::RicciFlat), ["a", "b"]);
        assert_eq!(s(Predicate::StarRicciFlat), ["a", "b"]);
        assert_eq!(s(Predicate::ScalarFlat), ["a^2-3*b^2"]);
        assert_eq!(s(Predicate::StarScalarFlat), ["a*b"]);
        assert_eq!(s(Predicate::IsotropicF0), ["a^2-b^2"]);
        assert_eq!(s(Predicate::Einstein), ["a"]);
        assert_eq!(s(Predicate::ConstantCurvature), ["a"]);
        assert_eq!(s(Predicate::LeeThetaZero), ["a"]);
        assert_eq!(pr.lambda_on_locus(), p("-2*b^2"));
        assert_eq!(pr.k_on_locus(), p("-b^2"));
        let pt = |a, b| BTreeMap::from([("a".to_string(), int(a)), ("b".to_string(), int(b))]);
        assert!(pr.hyperbolic_at(&pt(0, 1)).unwrap());
        assert!(!pr.hyperbolic_at(&pt(0, 0)).unwrap());
        assert!(!pr.hyperbolic_at(&pt(1, 1)).unwrap());
    }

    #[test]
    fn origin_satisfies_everything() {
        let m = build_family(&FamilySpec::numeric(int(0), int(0)));
        let lc = levi_civita(&m);
        let cd = curvature(&m, &lc);
        let pr = predicates(&m, &cd, &square_norms(&m, &lc), &lee_forms(&m, &fundamental_tensor(&m, &lc)));
        assert!(pr.sets.values().all(ConditionSet::holds_identically));
    }
}
