//! The two-parameter family of 3-dimensional Lie groups in `F4 + F5`.
//!
//! Frame `(e0, e1, e2)` with `xi = e0`, `phi e1 = e2`, `phi e2 = -e1`,
//! `g = diag(1, 1, -1)` and brackets
//! `[e0, e1] = -b e1 - a e2`, `[e0, e2] = a e1 - b e2`, `[e1, e2] = 0`.

use crate::lie::LieAlgebra;
use crate::scalar::{int, Scalar, Vars};
use crate::structure::AcbmManifold;
use crate::tensor::MetricPair;

/// Parameters `(a, b)`, each symbolic or a rational constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    pub a: Scalar,
    pub b: Scalar,
}

impl FamilySpec {
    /// `a` and `b` as free parameters.
    pub fn symbolic() -> Self {
        let vars = Vars::new(["a", "b"]);
        FamilySpec { a: Scalar::var(&vars, "a").expect("declared"), b: Scalar::var(&vars, "b").expect("declared") }
    }

    pub fn numeric(a: crate::scalar::Rational, b: crate::scalar::Rational) -> Self {
        FamilySpec { a: Scalar::from_rational(a), b: Scalar::from_rational(b) }
    }

    /// Parameter list shared by `a` and `b`.
    pub fn vars(&self) -> Vars {
        if self.a.vars().is_empty() {
            self.b.vars().clone()
        } else {
            self.a.vars().clone()
        }
    }

    /// `a` and `b` lifted onto a common parameter list.
    pub fn lifted(&self) -> (Scalar, Scalar) {
        let vars = self.vars();
        let lift = |s: &Scalar| s.lift(&vars).unwrap_or_else(|e| panic!("{e}"));
        (lift(&self.a), lift(&self.b))
    }
}

pub fn family_metric() -> MetricPair {
    MetricPair::new(vec![vec![int(1), int(0), int(0)], vec![int(0), int(1), int(0)], vec![int(0), int(0), int(-1)]])
        .expect("diag(1, 1, -1) is nondegenerate")
}

pub fn build_family(spec: &FamilySpec) -> AcbmManifold {
    let (a, b) = spec.lifted();
    let vars = spec.vars();
    let mut l = LieAlgebra::abelian(3, &vars);
    let set = |l: &mut LieAlgebra, i, j, k, v: Scalar| l.set_bracket(i, j, k, v).expect("in range");
    set(&mut l, 0, 1, 1, -&b);
    set(&mut l, 0, 1, 2, -&a);
    set(&mut l, 0, 2, 1, a.clone());
    set(&mut l, 0, 2, 2, -&b);
    let n = |x: i64| Scalar::from_int(x);
    let phi = vec![vec![n(0), n(0), n(0)], vec![n(0), n(0), n(-1)], vec![n(0), n(1), n(0)]];
    let xi = vec![n(1), n(0), n(0)];
    let eta = vec![n(1), n(0), n(0)];
    AcbmManifold::new(l, phi, xi, eta, family_metric()).expect("family data is well-formed")
}
