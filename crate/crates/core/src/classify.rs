//! Membership in the classes `F0`, `F4`, `F5` and `F4 + F5` for
//! 3-dimensional structures in the adapted frame.

use std::fmt;

use thiserror::Error;

use crate::condition::ConditionSet;
use crate::connection::{fundamental_tensor, lee_forms, levi_civita};
use crate::lie::LieAlgebra;
use crate::scalar::{int, rat, Scalar, Vars};
use crate::structure::AcbmManifold;
use crate::tensor::{Tensor, Variance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("class components are only defined for dimension 3, got {0}")]
    NotThreeDimensional(usize),
    #[error("frame is not adapted: {0}")]
    NotAdapted(String),
}

/// Check `xi = e0`, `eta = e^0`, `phi e1 = e2`, `phi e2 = -e1`, `g = diag(1, 1, -1)`.
pub fn check_adapted(m: &AcbmManifold) -> Result<(), ClassifyError> {
    if m.dim() != 3 {
        return Err(ClassifyError::NotThreeDimensional(m.dim()));
    }
    let unit = |i: usize| (0..3).map(move |k| Scalar::from_int(i64::from(k == i)));
    let fail = |what: &str| Err(ClassifyError::NotAdapted(what.to_string()));
    if !m.xi_vec().into_iter().eq(unit(0)) {
        return fail("xi must be e0");
    }
    if !(0..3).map(|i| m.eta_at(i).clone()).eq(unit(0)) {
        return fail("eta must be the dual of e0");
    }
    let phi = [[0, 0, 0], [0, 0, -1], [0, 1, 0]];
    for (i, row) in phi.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if m.phi_at(i, j) != &Scalar::from_int(*v) {
                return fail("phi must map e1 to e2 and e2 to -e1");
            }
        }
    }
    let g = [1, 1, -1];
    for i in 0..3 {
        for j in 0..3 {
            let want = if i == j { int(g[i]) } else { int(0) };
            if m.metric().entry(i, j) != &want {
                return fail("g must be diag(1, 1, -1)");
            }
        }
    }
    Ok(())
}

fn lower3(vars: &Vars) -> Tensor {
    Tensor::zeros(3, &[Variance::Lower; 3], vars)
}

/// `F4` component: `θ0/2` at (1,0,1), (1,1,0) and `-θ0/2` at (2,0,2), (2,2,0).
pub fn f4_component(m: &AcbmManifold, theta0: &Scalar) -> Result<Tensor, ClassifyError> {
    check_adapted(m)?;
    let half = theta0.scale(&rat(1, 2));
    let mut t = lower3(m.vars());
    for idx in [[1, 0, 1], [1, 1, 0]] {
        t.set(&idx, half.clone());
    }
    for idx in [[2, 0, 2], [2, 2, 0]] {
        t.set(&idx, -&half);
    }
    Ok(t)
}

/// `F5` component: `θ0*/2` at (1,0,2), (1,2,0), (2,0,1), (2,1,0).
pub fn f5_component(m: &AcbmManifold, theta_star0: &Scalar) -> Result<Tensor, ClassifyError> {
    check_adapted(m)?;
    let half = theta_star0.scale(&rat(1, 2));
    let mut t = lower3(m.vars());
    for idx in [[1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
        t.set(&idx, half.clone());
    }
    Ok(t)
}

/// Brackets `[e0,e1] = -(θ0* e1 + θ0 e2)/2`, `[e0,e2] = (θ0 e1 - θ0* e2)/2`,
/// `[e1,e2] = 0`.
pub fn commutators_from_lee(theta0: &Scalar, theta_star0: &Scalar, vars: &Vars) -> LieAlgebra {
    let h = |s: &Scalar| s.scale(&rat(1, 2)).lift(vars).unwrap_or_else(|e| panic!("{e}"));
    let (t, ts) = (h(theta0), h(theta_star0));
    let mut l = LieAlgebra::abelian(3, vars);
    for (i, j, k, v) in [(0, 1, 1, -&ts), (0, 1, 2, -&t), (0, 2, 1, t.clone()), (0, 2, 2, -&ts)] {
        l.set_bracket(i, j, k, v).expect("in range");
    }
    l
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    /// `F = 0`.
    F0,
    /// In `F4`, not in `F0`.
    F4,
    /// In `F5`, not in `F0`.
    F5,
    /// In `F4 + F5`; neither summand holds everywhere.
    F4F5,
    /// The residual `F - F4 - F5` does not vanish identically.
    Unknown,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::F0 => "F0",
            Verdict::F4 => "F4 (proper)",
            Verdict::F5 => "F5 (proper)",
            Verdict::F4F5 => "F4+F5",
            Verdict::Unknown => "unknown (residual outside F4+F5)",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassReport {
    pub f: Tensor,
    pub f4: Tensor,
    pub f5: Tensor,
    /// `F - F4 - F5`.
    pub residual: Tensor,
    pub theta0: Scalar,
    pub theta_star0: Scalar,
    /// Locus where the structure lies in `F4 + F5`.
    pub in_f4_f5: ConditionSet,
    pub in_f4: ConditionSet,
    pub in_f5: ConditionSet,
    pub in_f0: ConditionSet,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

pub const F0_NOTE: &str = "F0 is decided by F = 0, which on F4+F5 means theta0 = theta0* = 0";

pub fn classify(m: &AcbmManifold) -> Result<ClassReport, ClassifyError> {
    check_adapted(m)?;
    let f = fundamental_tensor(m, &levi_civita(m));
    let lee = lee_forms(m, &f);
    let f4 = f4_component(m, &lee.theta0)?;
    let f5 = f5_component(m, &lee.theta_star0)?;
    let residual = f.try_sub(&f4).and_then(|t| t.try_sub(&f5)).expect("same shape");

    let in_f4_f5 = ConditionSet::from_polys(residual.components().iter().cloned());
    let in_f4 = in_f4_f5.and(&ConditionSet::from_polys([lee.theta_star0.clone()]));
    let in_f5 = in_f4_f5.and(&ConditionSet::from_polys([lee.theta0.clone()]));
    let in_f0 = ConditionSet::from_polys(f.components().iter().cloned());

    let verdict = if in_f0.holds_identically() {
        Verdict::F0
    } else if in_f4.holds_identically() {
        Verdict::F4
    } else if in_f5.holds_identically() {
        Verdict::F5
    } else if in_f4_f5.holds_identically() {
        Verdict::F4F5
    } else {
        Verdict::Unknown
    };
    Ok(ClassReport {
        f,
        f4,
        f5,
        residual,
        theta0: lee.theta0,
        theta_star0: lee.theta_star0,
        in_f4_f5,
        in_f4,
        in_f5,
        in_f0,
        verdict,
        notes: vec![F0_NOTE.to_string()],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{build_family, FamilySpec};
    use crate::scalar::parse_scalar;

    fn fam() -> AcbmManifold {
        build_family(&FamilySpec::symbolic())
    }

    fn p(s: &str) -> Scalar {
        parse_scalar(s, &Vars::new(["a", "b"])).unwrap()
    }

    #[test]
    fn components_of_family() {
        let m = fam();
        let f4 = f4_component(&m, &p("2*a")).unwrap();
        assert_eq!(f4.get(&[1, 0, 1]), &p("a"));
        assert_eq!(f4.get(&[2, 2, 0]), &p("-a"));
        let f5 = f5_component(&m, &p("2*b")).unwrap();
        assert_eq!(f5.get(&[1, 0, 2]), &p("b"));
        assert!(f4_component(&m, &p("0")).unwrap().is_zero());
    }

    #[test]
    fn symbolic_family() {
        let r = classify(&fam()).unwrap();
        assert!(r.residual.is_zero());
        assert!(r.in_f4_f5.holds_identically());
        assert_eq!(r.in_f4.to_strings(), ["b"]);
        assert_eq!(r.in_f5.to_strings(), ["a"]);
        assert_eq!(r.in_f0.to_strings(), ["a", "b"]);
        assert_eq!(r.theta0, p("2*a"));
        assert_eq!(r.theta_star0, p("2*b"));
        assert_eq!(r.verdict, Verdict::F4F5);
    }

    #[test]
    fn numeric_points() {
        let at = |a, b| classify(&build_family(&FamilySpec::numeric(int(a), int(b)))).unwrap().verdict;
        assert_eq!(at(1, 0), Verdict::F4);
        assert_eq!(at(0, 2), Verdict::F5);
        assert_eq!(at(0, 0), Verdict::F0);
        assert_eq!(at(1, 2), Verdict::F4F5);
    }

    #[test]
    fn lee_data_of_components() {
        let m = fam();
        let l4 = lee_forms(&m, &f4_component(&m, &p("2*a")).unwrap());
        assert_eq!(l4.theta.components(), &[p("2*a"), p("0"), p("0")]);
        assert!(l4.theta_star.is_zero());
        let l5 = lee_forms(&m, &f5_component(&m, &p("2*b")).unwrap());
        assert!(l5.theta.is_zero());
        assert_eq!(l5.theta_star.components(), &[p("2*b"), p("0"), p("0")]);
    }

    #[test]
    fn commutators_regenerate_brackets() {
        let m = fam();
        assert_eq!(&commutators_from_lee(&p("2*a"), &p("2*b"), m.vars()), m.algebra());
    }

    #[test]
    fn rejects_unadapted_frames() {
        let m = fam();
        let swapped = m
            .change_frame(&vec![
                vec![int(0), int(1), int(0)],
                vec![int(1), int(0), int(0)],
                vec![int(0), int(0), int(1)],
            ])
            .unwrap();
        assert!(matches!(classify(&swapped), Err(ClassifyError::NotAdapted(_))));
    }
}
