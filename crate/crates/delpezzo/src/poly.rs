//! Sparse multivariate polynomials over exact rationals.
//!
//! Terms are kept in a `BTreeMap` keyed by monomial, so a polynomial has one
//! canonical form: no zero coefficients, no zero exponents, deterministic
//! term order. Two polynomials are equal iff their term maps are equal.
//!
//! Variables are identified by name. The [`vars`] module fixes the canonical
//! names used by the infeasibility certificates, so certificates built in
//! different runs compare bit-for-bit.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::rat::Rat;

/// Canonical variable names shared by the certificate-producing modules.
///
/// `n_minus_lambda` / `n_plus_lambda` are treated as atomic variables: the
/// sign certificates only ever need "(n-lambda) is nonnegative", never its
/// expansion.
pub mod vars {
    pub const N: &str = "n";
    pub const E: &str = "e";
    pub const M: &str = "M";
    pub const M_PLUS: &str = "M_plus";
    pub const M_MINUS: &str = "M_minus";
    pub const EPS: &str = "eps";
    pub const EPS_PLUS: &str = "eps_plus";
    pub const EPS_MINUS: &str = "eps_minus";
    pub const SIGMA0: &str = "Sigma0";
    pub const SIGMA1: &str = "Sigma1";
    pub const SIGMA: &str = "Sigma";
    pub const U: &str = "n_minus_lambda";
    pub const V: &str = "n_plus_lambda";
    pub const U_PLUS: &str = "n_minus_lambda_plus";
    pub const V_PLUS: &str = "n_plus_lambda_plus";
    pub const U_MINUS: &str = "n_minus_lambda_minus";
    pub const V_MINUS: &str = "n_plus_lambda_minus";

    /// Per-level multiplicity variable `lambda_i` (1-based).
    pub fn lambda(i: usize) -> String {
        format!("lambda_{i}")
    }

    /// Plus-group variable for the two-group quadratic forms.
    pub fn lambda_plus(i: usize) -> String {
        format!("lambda_plus_{i}")
    }

    /// Minus-group variable for the two-group quadratic forms.
    pub fn lambda_minus(i: usize) -> String {
        format!("lambda_minus_{i}")
    }
}

/// A monomial: variable name -> positive exponent.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(BTreeMap<String, u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(BTreeMap::new())
    }

    pub fn var(name: &str) -> Self {
        let mut m = BTreeMap::new();
        m.insert(name.to_string(), 1);
        Monomial(m)
    }

    pub fn from_pairs(pairs: &[(&str, u32)]) -> Self {
        let mut m = BTreeMap::new();
        for &(name, exp) in pairs {
            if exp > 0 {
                *m.entry(name.to_string()).or_insert(0) += exp;
            }
        }
        Monomial(m)
    }

    pub fn exponent(&self, name: &str) -> u32 {
        self.0.get(name).copied().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, u32)> {
        self.0.iter().map(|(k, &v)| (k, v))
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = self.0.clone();
        for (name, exp) in &other.0 {
            *m.entry(name.clone()).or_insert(0) += exp;
        }
        Monomial(m)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (name, exp) in &self.0 {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if *exp == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{exp}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// What a variable gets substituted with.
#[derive(Clone, Debug)]
pub enum Binding {
    Value(Rat),
    Poly(MultiPoly),
}

impl From<Rat> for Binding {
    fn from(r: Rat) -> Self {
        Binding::Value(r)
    }
}

impl From<MultiPoly> for Binding {
    fn from(p: MultiPoly) -> Self {
        Binding::Poly(p)
    }
}

/// A sparse multivariate polynomial with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Rat>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly::default()
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = MultiPoly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn var(name: &str) -> Self {
        let mut p = MultiPoly::zero();
        p.add_term(Monomial::var(name), Rat::one());
        p
    }

    /// `c * x1^e1 * ... * xk^ek`.
    pub fn term(c: Rat, pairs: &[(&str, u32)]) -> Self {
        let mut p = MultiPoly::zero();
        p.add_term(Monomial::from_pairs(pairs), c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    /// The variables that actually occur, in sorted order.
    pub fn variables(&self) -> Vec<String> {
        let mut set = BTreeSet::new();
        for mono in self.terms.keys() {
            for (name, _) in mono.iter() {
                set.insert(name.clone());
            }
        }
        set.into_iter().collect()
    }

    pub fn coefficient(&self, mono: &Monomial) -> Rat {
        self.terms.get(mono).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn constant_term(&self) -> Rat {
        self.coefficient(&Monomial::one())
    }

    pub fn degree_in(&self, name: &str) -> u32 {
        self.terms
            .keys()
            .map(|m| m.exponent(name))
            .max()
            .unwrap_or(0)
    }

    /// Largest total degree over the given set of variables.
    pub fn degree_in_set(&self, names: &BTreeSet<String>) -> u32 {
        self.terms
            .keys()
            .map(|m| {
                m.iter()
                    .filter(|(name, _)| names.contains(*name))
                    .map(|(_, e)| e)
                    .sum()
            })
            .max()
            .unwrap_or(0)
    }

    fn add_term(&mut self, mono: Monomial, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(mono);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (mono, coeff) in &other.terms {
            out.add_term(mono.clone(), coeff.clone());
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (mono, coeff) in &other.terms {
            out.add_term(mono.clone(), -coeff);
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k * c))
                .collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> MultiPoly {
        let mut acc = MultiPoly::constant(Rat::one());
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    /// Simultaneous substitution. Every bound variable must occur in `self`.
    pub fn subst(&self, bindings: &BTreeMap<String, Binding>) -> Result<MultiPoly, Error> {
        let present: BTreeSet<String> = self.variables().into_iter().collect();
        for name in bindings.keys() {
            if !present.contains(name) {
                return Err(Error::input(format!(
                    "substitution target {name:?} does not occur in the polynomial"
                )));
            }
        }
        let mut out = MultiPoly::zero();
        for (mono, coeff) in &self.terms {
            let mut factor = MultiPoly::constant(coeff.clone());
            let mut residue = Monomial::one();
            for (name, exp) in mono.iter() {
                match bindings.get(name) {
                    None => {
                        residue = residue.mul(&Monomial::from_pairs(&[(name, exp)]));
                    }
                    Some(Binding::Value(v)) => {
                        factor = factor.scale(&v.pow(exp));
                    }
                    Some(Binding::Poly(p)) => {
                        factor = factor.mul(&p.pow(exp));
                    }
                }
            }
            let mut shifted = MultiPoly::zero();
            for (m, c) in &factor.terms {
                shifted.add_term(m.mul(&residue), c.clone());
            }
            out = out.add(&shifted);
        }
        Ok(out)
    }

    /// Exact evaluation; every occurring variable must be assigned.
    pub fn eval(&self, assignment: &BTreeMap<String, Rat>) -> Result<Rat, Error> {
        let mut total = Rat::zero();
        for (mono, coeff) in &self.terms {
            let mut term = coeff.clone();
            for (name, exp) in mono.iter() {
                let v = assignment.get(name).ok_or_else(|| {
                    Error::input(format!("no value assigned to variable {name:?}"))
                })?;
                term *= v.pow(exp);
            }
            total += term;
        }
        Ok(total)
    }

    /// Partial derivative with respect to `name`.
    pub fn differentiate(&self, name: &str) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (mono, coeff) in &self.terms {
            let exp = mono.exponent(name);
            if exp == 0 {
                continue;
            }
            let mut pairs: Vec<(String, u32)> = Vec::new();
            for (v, e) in mono.iter() {
                let e = if v == name { e - 1 } else { e };
                if e > 0 {
                    pairs.push((v.clone(), e));
                }
            }
            let refs: Vec<(&str, u32)> = pairs.iter().map(|(v, e)| (v.as_str(), *e)).collect();
            out.add_term(Monomial::from_pairs(&refs), coeff * &Rat::from(exp));
        }
        out
    }

    /// Break the polynomial into its monomial summands.
    pub fn monomial_terms(&self) -> Vec<MultiPoly> {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut p = MultiPoly::zero();
                p.add_term(m.clone(), c.clone());
                p
            })
            .collect()
    }

    /// All coefficients nonnegative?
    pub fn is_coefficientwise_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// Sorted `(exponent vector, coefficient)` listing over the polynomial's
    /// own sorted variable set; the wire form used in reports.
    pub fn to_repr(&self) -> PolyRepr {
        let variables = self.variables();
        let mut terms: Vec<(Vec<u32>, Rat)> = self
            .terms
            .iter()
            .map(|(mono, coeff)| {
                let exps = variables.iter().map(|v| mono.exponent(v)).collect();
                (exps, coeff.clone())
            })
            .collect();
        terms.sort();
        PolyRepr { variables, terms }
    }

    pub fn from_repr(repr: &PolyRepr) -> Result<MultiPoly, Error> {
        let mut out = MultiPoly::zero();
        for (exps, coeff) in &repr.terms {
            if exps.len() != repr.variables.len() {
                return Err(Error::input(
                    "exponent vector arity does not match the variable list",
                ));
            }
            let pairs: Vec<(&str, u32)> = repr
                .variables
                .iter()
                .zip(exps)
                .map(|(v, e)| (v.as_str(), *e))
                .collect();
            out.add_term(Monomial::from_pairs(&pairs), coeff.clone());
        }
        Ok(out)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (mono, coeff) in &self.terms {
            if first {
                first = false;
                if mono.is_constant() {
                    write!(f, "{coeff}")?;
                } else if coeff == &Rat::one() {
                    write!(f, "{mono}")?;
                } else if coeff == &-Rat::one() {
                    write!(f, "-{mono}")?;
                } else {
                    write!(f, "{coeff}*{mono}")?;
                }
                continue;
            }
            let (sign, mag) = if coeff.is_negative() {
                (" - ", coeff.abs())
            } else {
                (" + ", coeff.clone())
            };
            if mono.is_constant() {
                write!(f, "{sign}{mag}")?;
            } else if mag == Rat::one() {
                write!(f, "{sign}{mono}")?;
            } else {
                write!(f, "{sign}{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Wire form of a polynomial: sorted exponent vectors over a sorted variable
/// list, coefficients as `"p/q"` strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyRepr {
    pub variables: Vec<String>,
    pub terms: Vec<(Vec<u32>, Rat)>,
}

/// Convenience: sum a slice of polynomials.
pub fn poly_sum(polys: &[MultiPoly]) -> MultiPoly {
    polys.iter().fold(MultiPoly::zero(), |acc, p| acc.add(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};
    use proptest::prelude::*;

    fn x() -> MultiPoly {
        MultiPoly::var("x")
    }

    fn y() -> MultiPoly {
        MultiPoly::var("y")
    }

    #[test]
    fn binomial_square() {
        let sum = x().add(&y());
        let sq = sum.mul(&sum);
        let expected = MultiPoly::term(int(1), &[("x", 2)])
            .add(&MultiPoly::term(int(2), &[("x", 1), ("y", 1)]))
            .add(&MultiPoly::term(int(1), &[("y", 2)]));
        assert_eq!(sq, expected);
    }

    #[test]
    fn cancellation_gives_empty_map() {
        let p = x().mul(&y()).add(&MultiPoly::constant(rat(5, 3)));
        let diff = p.sub(&p);
        assert!(diff.is_zero());
        assert_eq!(diff.num_terms(), 0);
    }

    #[test]
    fn big_square_expansion_matches_hand_computation() {
        // (Sigma1*n - M*eps*(n-lambda) - e)^2 with n, lambda as honest
        // variables, expanded by hand term by term.
        let s1 = MultiPoly::var(vars::SIGMA1);
        let m = MultiPoly::var(vars::M);
        let eps = MultiPoly::var(vars::EPS);
        let n = MultiPoly::var(vars::N);
        let lam = MultiPoly::var("lambda");
        let e = MultiPoly::var(vars::E);

        let u = n.sub(&lam);
        let body = s1.mul(&n).sub(&m.mul(&eps).mul(&u)).sub(&e);
        let sq = body.mul(&body);

        // Hand expansion: a^2 + b^2 + c^2 - 2ab - 2... with a = Sigma1*n,
        // b = M*eps*(n-lambda), c = e: a^2 + b^2 + c^2 - 2ab - 2ac + 2bc.
        let a = s1.mul(&n);
        let b = m.mul(&eps).mul(&u);
        let c = e;
        let expected = a
            .mul(&a)
            .add(&b.mul(&b))
            .add(&c.mul(&c))
            .sub(&a.mul(&b).scale(&int(2)))
            .sub(&a.mul(&c).scale(&int(2)))
            .add(&b.mul(&c).scale(&int(2)));
        assert_eq!(sq, expected);
    }

    #[test]
    fn subst_value_and_poly() {
        // (n-lambda)^2 with lambda := n vanishes.
        let n = MultiPoly::var("n");
        let lam = MultiPoly::var("lambda");
        let p = n.sub(&lam).pow(2);
        let mut b = BTreeMap::new();
        b.insert("lambda".to_string(), Binding::Poly(n.clone()));
        assert!(p.subst(&b).unwrap().is_zero());

        // 2*lambda*n + lambda^2 at lambda := 0 vanishes.
        let q = MultiPoly::term(int(2), &[("lambda", 1), ("n", 1)])
            .add(&MultiPoly::term(int(1), &[("lambda", 2)]));
        let mut b = BTreeMap::new();
        b.insert("lambda".to_string(), Binding::Value(int(0)));
        assert!(q.subst(&b).unwrap().is_zero());
    }

    #[test]
    fn subst_unknown_variable_is_an_error() {
        let p = MultiPoly::var("x");
        let mut b = BTreeMap::new();
        b.insert("z".to_string(), Binding::Value(int(1)));
        assert!(p.subst(&b).is_err());
    }

    #[test]
    fn subst_replaces_single_factor() {
        // -M*eps*Sigma1*(n-lambda)*(n+lambda) with the (n+lambda) factor kept
        // atomic, replaced by 2n.
        let term = MultiPoly::term(int(-1), &[(vars::M, 1), (vars::EPS, 1), (vars::SIGMA1, 1)])
            .mul(&MultiPoly::var(vars::U))
            .mul(&MultiPoly::var(vars::V));
        let two_n = MultiPoly::term(int(2), &[(vars::N, 1)]);
        let mut b = BTreeMap::new();
        b.insert(vars::V.to_string(), Binding::Poly(two_n));
        let replaced = term.subst(&b).unwrap();
        let expected = MultiPoly::term(
            int(-2),
            &[
                (vars::M, 1),
                (vars::EPS, 1),
                (vars::SIGMA1, 1),
                (vars::N, 1),
                (vars::U, 1),
            ],
        );
        assert_eq!(replaced, expected);
    }

    #[test]
    fn eval_and_derivative() {
        let p = MultiPoly::term(int(3), &[("x", 2), ("y", 1)]);
        let mut a = BTreeMap::new();
        a.insert("x".to_string(), rat(1, 2));
        a.insert("y".to_string(), int(4));
        assert_eq!(p.eval(&a).unwrap(), int(3));
        let d = p.differentiate("x");
        assert_eq!(d, MultiPoly::term(int(6), &[("x", 1), ("y", 1)]));
        assert!(p.differentiate("z").is_zero());
    }

    #[test]
    fn repr_roundtrip() {
        let p = MultiPoly::term(rat(1, 2), &[("a", 2)])
            .add(&MultiPoly::term(int(-3), &[("b", 1)]))
            .add(&MultiPoly::constant(int(7)));
        let repr = p.to_repr();
        assert_eq!(MultiPoly::from_repr(&repr).unwrap(), p);
    }

    fn arb_poly() -> impl Strategy<Value = MultiPoly> {
        let term = (
            prop::sample::select(vec!["x", "y", "z"]),
            0u32..3,
            -4i64..5,
        );
        prop::collection::vec(term, 0..6).prop_map(|terms| {
            let mut p = MultiPoly::zero();
            for (v, e, c) in terms {
                p = p.add(&MultiPoly::term(int(c), &[(v, e)]));
            }
            p
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.sub(&a), MultiPoly::zero());
        }
    }
}
