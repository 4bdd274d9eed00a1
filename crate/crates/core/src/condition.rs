//! Polynomial condition sets: the common zero locus of a list of scalars.
//!
//! An empty set means the predicate holds identically; the set `{1}` means it
//! never holds. Normalization applies only rewrites that preserve the real
//! zero locus:
//!
//! * each polynomial is made integer-primitive with a positive leading term;
//! * a single term `c*a^2*b` becomes `a*b`;
//! * a sum of even-power terms with one coefficient sign (e.g. `a^2+b^2`)
//!   is replaced by its monomials, each of which must vanish;
//! * a member that is a bare parameter `v` is substituted as `v = 0` into
//!   the other members.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::scalar::{Rational, Scalar, ScalarError, Vars};

#[derive(Clone, PartialEq, Eq)]
pub struct ConditionSet {
    polys: Vec<Scalar>,
}

impl ConditionSet {
    /// The predicate holds everywhere.
    pub fn always() -> Self {
        ConditionSet { polys: Vec::new() }
    }

    /// The predicate holds nowhere.
    pub fn never() -> Self {
        ConditionSet { polys: vec![Scalar::from_int(1)] }
    }

    pub fn from_polys<I: IntoIterator<Item = Scalar>>(polys: I) -> Self {
        let mut polys: Vec<Scalar> = polys.into_iter().filter(|p| !p.is_zero()).collect();
        loop {
            let before = polys.clone();
            polys = normalize_round(polys);
            if polys.len() == 1 && polys[0].is_constant() {
                return ConditionSet::never();
            }
            if polys == before {
                break;
            }
        }
        ConditionSet { polys }
    }

    pub fn polys(&self) -> &[Scalar] {
        &self.polys
    }

    pub fn holds_identically(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn is_unsatisfiable(&self) -> bool {
        self.polys.len() == 1 && self.polys[0].is_constant()
    }

    pub fn holds_at(&self, point: &BTreeMap<String, Rational>) -> Result<bool, ScalarError> {
        for p in &self.polys {
            if !p.eval(point)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Both predicates hold.
    pub fn and(&self, other: &ConditionSet) -> ConditionSet {
        ConditionSet::from_polys(self.polys.iter().chain(&other.polys).cloned())
    }

    /// At least one predicate holds: pairwise products of the members.
    pub fn or(&self, other: &ConditionSet) -> ConditionSet {
        if self.holds_identically() || other.holds_identically() {
            return ConditionSet::always();
        }
        let mut out = Vec::new();
        for p in &self.polys {
            for q in &other.polys {
                out.push(p * q);
            }
        }
        ConditionSet::from_polys(out)
    }

    /// Parameters pinned to zero by a bare-parameter member.
    pub fn pinned_zero(&self) -> Vec<String> {
        self.polys.iter().filter_map(bare_parameter).collect()
    }

    /// Whether the set is made entirely of bare parameters, so that
    /// [`ConditionSet::restrict`] describes its whole locus.
    pub fn is_coordinate_locus(&self) -> bool {
        self.polys.iter().all(|p| bare_parameter(p).is_some())
    }

    /// Substitute every pinned parameter by zero in `s`.
    pub fn restrict(&self, s: &Scalar) -> Scalar {
        let mut out = s.clone();
        for name in self.pinned_zero() {
            let zero = Scalar::zero(out.vars());
            out = out.substitute(&name, &zero).expect("zero lifts onto any parameter list");
        }
        out
    }

    /// Locus of `self` is contained in the locus of `other`. Only decided
    /// when `self` is a coordinate locus; `None` otherwise.
    pub fn locus_within(&self, other: &ConditionSet) -> Option<bool> {
        if self.is_unsatisfiable() {
            return Some(true);
        }
        if !self.is_coordinate_locus() {
            return None;
        }
        Some(other.polys.iter().all(|p| self.restrict(p).is_zero()))
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.polys.iter().map(ToString::to_string).collect()
    }
}

fn bare_parameter(p: &Scalar) -> Option<String> {
    if p.num_terms() != 1 {
        return None;
    }
    let (m, c) = p.leading()?;
    if !c.is_one() || m.degree() != 1 {
        return None;
    }
    let idx = m.exponents().iter().position(|e| *e == 1)?;
    Some(p.vars().names()[idx].clone())
}

fn squarefree_monomial(vars: &Vars, exps: &[u32]) -> Scalar {
    let mut out = Scalar::one(vars);
    for (i, e) in exps.iter().enumerate() {
        if *e > 0 {
            out = out * Scalar::var(vars, &vars.names()[i]).expect("index in range");
        }
    }
    out
}

fn normalize_round(polys: Vec<Scalar>) -> Vec<Scalar> {
    let mut expanded = Vec::new();
    for p in polys {
        if p.is_zero() {
            continue;
        }
        if p.is_constant() {
            return vec![Scalar::from_int(1)];
        }
        let vars = p.vars().clone();
        if p.num_terms() == 1 {
            let (m, _) = p.leading().unwrap();
            expanded.push(squarefree_monomial(&vars, m.exponents()));
            continue;
        }
        let even = p.terms().all(|(m, _)| m.exponents().iter().all(|e| e % 2 == 0));
        let (_, lead) = p.leading().unwrap();
        let one_sign = p.terms().all(|(_, c)| c.is_positive() == lead.is_positive());
        if even && one_sign {
            for (m, _) in p.terms() {
                if m.degree() == 0 {
                    return vec![Scalar::from_int(1)];
                }
                expanded.push(squarefree_monomial(&vars, m.exponents()));
            }
            continue;
        }
        expanded.push(p.primitive());
    }

    // Substitute bare parameters into the rest.
    let pinned: Vec<(usize, String)> =
        expanded.iter().enumerate().filter_map(|(i, p)| bare_parameter(p).map(|n| (i, n))).collect();
    let mut out = Vec::with_capacity(expanded.len());
    for (i, p) in expanded.iter().enumerate() {
        let mut q = p.clone();
        for (j, name) in &pinned {
            if *j != i && !(bare_parameter(&q).as_deref() == Some(name.as_str())) {
                q = q.substitute(name, &Scalar::zero(q.vars())).expect("zero lifts");
            }
        }
        if !q.is_zero() {
            out.push(q.primitive());
        }
    }
    out.sort_by(|a, b| b.cmp_canonical(a));
    out.dedup();
    out
}

impl fmt::Display for ConditionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.to_strings().join(", "))
    }
}

impl fmt::Debug for ConditionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ConditionSet{self}")
    }
}

/// Build a set from polynomial strings over `vars`; for tests and fixtures.
pub fn condition_set(vars: &Vars, polys: &[&str]) -> ConditionSet {
    ConditionSet::from_polys(
        polys.iter().map(|p| crate::scalar::parse_scalar(p, vars).unwrap_or_else(|e| panic!("{p}: {e}"))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v() -> Vars {
        Vars::new(["a", "b"])
    }

    fn set(polys: &[&str]) -> ConditionSet {
        condition_set(&v(), polys)
    }

    #[test]
    fn primitive_and_sign() {
        assert_eq!(set(&["-2*a^2+6*b^2"]).to_strings(), ["a^2-3*b^2"]);
        assert_eq!(set(&["1/2*a*b"]).to_strings(), ["a*b"]);
    }

    #[test]
    fn zeros_dropped_constants_unsatisfiable() {
        assert!(set(&["0", "a-a"]).holds_identically());
        assert!(set(&["a", "3"]).is_unsatisfiable());
    }

    #[test]
    fn ricci_flat_reduces_to_origin() {
        // rho components of the two-parameter family
        let s = set(&["2*a^2-2*b^2", "-2*b^2", "2*b^2", "2*a*b"]);
        assert_eq!(s.to_strings(), ["a", "b"]);
    }

    #[test]
    fn sum_of_squares_splits() {
        assert_eq!(set(&["a^2+b^2"]).to_strings(), ["a", "b"]);
        assert!(set(&["a^2+1"]).is_unsatisfiable());
        // mixed signs are left alone
        assert_eq!(set(&["a^2-b^2"]).to_strings(), ["a^2-b^2"]);
    }

    #[test]
    fn einstein_locus() {
        assert_eq!(set(&["2*a^2", "2*a*b"]).to_strings(), ["a"]);
    }

    #[test]
    fn disjunction_and_containment() {
        let f4 = set(&["b"]);
        let f5 = set(&["a"]);
        let either = f4.or(&f5);
        assert_eq!(either.to_strings(), ["a*b"]);
        assert_eq!(f5.locus_within(&either), Some(true));
        assert_eq!(either.locus_within(&f5), None);
        assert_eq!(f5.restrict(&parse("a^2+a*b-3*b^2")), parse("-3*b^2"));
    }

    fn parse(s: &str) -> Scalar {
        crate::scalar::parse_scalar(s, &v()).unwrap()
    }
}
