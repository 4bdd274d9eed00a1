//! Exact scalars: rationals and multivariate polynomials over them.
//!
//! Every tensor component in this crate is a [`Scalar`], a polynomial with
//! rational coefficients in an ordered list of named parameters. Terms are
//! kept in a canonical graded-lexicographic order with no stored zeros, so
//! structural equality is mathematical equality.

mod parse;

pub use parse::{identifiers, parse_scalar, parse_scalar_auto, ParseError};

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational number. `BigRational` keeps numerator and denominator
/// coprime with a positive denominator.
pub type Rational = BigRational;

/// Build the rational `n / d`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Build the integer rational `n`.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Render a rational as `p` or `p/q`.
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `p` or `p/q` (optionally signed) into a rational.
pub fn parse_rational(text: &str) -> Result<Rational, ParseError> {
    let s = parse_scalar(text.trim(), &Vars::empty())?;
    s.as_constant().ok_or_else(|| ParseError::new(0, "expected a rational constant"))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("parameter lists differ: [{left}] vs [{right}]")]
    ParameterMismatch { left: String, right: String },
    #[error("no value assigned to parameter `{0}`")]
    MissingAssignment(String),
    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),
    #[error("division by zero")]
    DivisionByZero,
}

/// Ordered, shared list of parameter names.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Vars(Arc<[String]>);

impl Vars {
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Vars(names.into_iter().map(Into::into).collect::<Vec<_>>().into())
    }

    pub fn empty() -> Self {
        Vars(Arc::from(Vec::new()))
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    fn same(&self, other: &Vars) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl fmt::Debug for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

/// Exponent vector, ordered graded-lexicographically (total degree first,
/// then the earlier parameter dominates).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial with rational coefficients in named parameters.
///
/// A scalar whose parameter list is empty is a pure constant and combines
/// with scalars over any parameter list; two non-empty lists must match.
#[derive(Clone)]
pub struct Scalar {
    vars: Vars,
    terms: BTreeMap<Monomial, Rational>,
}

impl Scalar {
    pub fn zero(vars: &Vars) -> Self {
        Scalar { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn constant(vars: &Vars, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(vars.len()), c);
        }
        Scalar { vars: vars.clone(), terms }
    }

    /// Constant over the empty parameter list.
    pub fn from_rational(c: Rational) -> Self {
        Self::constant(&Vars::empty(), c)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(int(n))
    }

    /// The parameter `name` as a degree-one polynomial.
    pub fn var(vars: &Vars, name: &str) -> Result<Self, ScalarError> {
        let idx = vars.index_of(name).ok_or_else(|| ScalarError::UnknownParameter(name.to_string()))?;
        let mut exps = vec![0; vars.len()];
        exps[idx] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(Monomial(exps), Rational::one());
        Ok(Scalar { vars: vars.clone(), terms })
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.leading().map(|(m, _)| m.degree())
    }

    /// `Some(c)` when the polynomial has degree at most zero.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    /// Names of parameters that actually occur.
    pub fn occurring(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for m in self.terms.keys() {
            for (i, e) in m.0.iter().enumerate() {
                if *e > 0 {
                    out.insert(i);
                }
            }
        }
        out
    }

    /// Re-express this scalar over `vars`. Only valid when the current list
    /// is empty or already equal.
    pub fn lift(&self, vars: &Vars) -> Result<Scalar, ScalarError> {
        if self.vars.same(vars) {
            return Ok(self.clone());
        }
        if self.vars.is_empty() {
            let terms = self.terms.values().map(|c| (Monomial::one(vars.len()), c.clone())).collect();
            return Ok(Scalar { vars: vars.clone(), terms });
        }
        Err(mismatch(&self.vars, vars))
    }

    fn unify(&self, other: &Scalar) -> Result<Vars, ScalarError> {
        if self.vars.same(&other.vars) || other.vars.is_empty() {
            Ok(self.vars.clone())
        } else if self.vars.is_empty() {
            Ok(other.vars.clone())
        } else {
            Err(mismatch(&self.vars, &other.vars))
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        let vars = self.unify(other)?;
        let mut out = self.lift(&vars)?;
        for (m, c) in other.lift(&vars)?.terms {
            out.add_term(m, c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        let vars = self.unify(other)?;
        let lhs = self.lift(&vars)?;
        let rhs = other.lift(&vars)?;
        let mut out = Scalar::zero(&vars);
        for (ma, ca) in &lhs.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn neg_ref(&self) -> Scalar {
        Scalar { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, c: &Rational) -> Scalar {
        if c.is_zero() {
            return Scalar::zero(&self.vars);
        }
        Scalar { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    /// Exact division by a nonzero rational constant.
    pub fn div_rational(&self, c: &Rational) -> Result<Scalar, ScalarError> {
        if c.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(self.scale(&c.recip()))
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut out = Scalar::one(&self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = &out * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        out
    }

    /// Substitute a rational value for every parameter.
    pub fn eval(&self, point: &BTreeMap<String, Rational>) -> Result<Rational, ScalarError> {
        let mut values = Vec::with_capacity(self.vars.len());
        for name in self.vars.names() {
            match point.get(name) {
                Some(v) => values.push(v.clone()),
                None => {
                    // Unused parameters do not need a value.
                    let idx = values.len();
                    if self.terms.keys().any(|m| m.0[idx] > 0) {
                        return Err(ScalarError::MissingAssignment(name.clone()));
                    }
                    values.push(Rational::zero());
                }
            }
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in values.iter().zip(&m.0) {
                if *e > 0 {
                    t *= num_traits::pow(v.clone(), *e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Substitute `value` for the parameter `name`, keeping the parameter list.
    pub fn substitute(&self, name: &str, value: &Scalar) -> Result<Scalar, ScalarError> {
        let Some(idx) = self.vars.index_of(name) else {
            return Ok(self.clone());
        };
        let value = value.lift(&self.vars)?;
        let mut out = Scalar::zero(&self.vars);
        let mut powers: Vec<Scalar> = vec![Scalar::one(&self.vars)];
        for (m, c) in &self.terms {
            let e = m.0[idx] as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap() * &value;
                powers.push(next);
            }
            let mut rest = m.clone();
            rest.0[idx] = 0;
            let mono = Scalar { vars: self.vars.clone(), terms: BTreeMap::from([(rest, c.clone())]) };
            out = &out + &(&mono * &powers[e]);
        }
        Ok(out)
    }

    /// Scale to a primitive integer polynomial with positive leading
    /// coefficient. Zero stays zero.
    pub fn primitive(&self) -> Scalar {
        let Some((_, lead)) = self.leading() else {
            return self.clone();
        };
        let mut den_lcm = BigInt::one();
        let mut num_gcd = BigInt::zero();
        for c in self.terms.values() {
            den_lcm = den_lcm.lcm(c.denom());
            num_gcd = num_gcd.gcd(c.numer());
        }
        // Multiply by lcm(denominators)/gcd(numerators), sign from the lead.
        let mut factor = Rational::new(den_lcm, num_gcd);
        if lead.is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// Total order on canonical forms: leading terms first.
    pub fn cmp_canonical(&self, other: &Scalar) -> Ordering {
        let mut a = self.terms.iter().rev();
        let mut b = other.terms.iter().rev();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some((ma, ca)), Some((mb, cb))) => {
                    let o = ma.cmp(mb).then_with(|| ca.cmp(cb));
                    if o != Ordering::Equal {
                        return o;
                    }
                }
            }
        }
    }
}

fn mismatch(left: &Vars, right: &Vars) -> ScalarError {
    ScalarError::ParameterMismatch { left: left.names().join(","), right: right.names().join(",") }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match self.unify(other) {
            Ok(vars) => match (self.lift(&vars), other.lift(&vars)) {
                (Ok(a), Ok(b)) => a.terms == b.terms,
                _ => false,
            },
            Err(_) => self.is_zero() && other.is_zero(),
        }
    }
}

impl Eq for Scalar {}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.terms() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { "-" } else { "+" })?;
            }
            first = false;
            let mut factors: Vec<String> = Vec::new();
            for (name, e) in self.vars.names().iter().zip(&m.0) {
                match e {
                    0 => {}
                    1 => factors.push(name.clone()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            if factors.is_empty() {
                f.write_str(&fmt_rational(&abs))?;
            } else {
                if !abs.is_one() {
                    write!(f, "{}*", fmt_rational(&abs))?;
                }
                f.write_str(&factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::from_int(0), |acc, x| acc + x)
    }
}
