//! The exclusion endgame: quadratic lower bounds against staircase upper
//! bounds, assembled into exact infeasibility certificates.
//!
//! An infinitely near maximal singularity would have to satisfy two bounds
//! on the same weighted multiplicity sum: a quadratic lower bound from the
//! multiplicity/discrepancy identity, and a linear upper bound telescoped
//! through the staircase with the line-selection bound `(C.L) < 4ne/nu(F)`
//! folded in. Subtracting gives a strict inequality `Phi < 0` in the
//! parameters. After the monotone rewrite `(n+lambda) -> 2n`, `Phi` splits
//! as a perfect square plus coefficientwise-nonnegative terms, so it can
//! never be negative: no parameter choice survives, and the grid search
//! reproduces that emptiness numerically.
//!
//! Sign convention: `Phi = (lower-bound numerator) - denominator * (upper
//! bound)`, so a parameter cell is feasible exactly when `Phi < 0`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::poly::{vars, Binding, MultiPoly, PolyRepr};
use crate::rat::Rat;
use crate::report::{CheckedIneq, Rel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExclusionCase {
    A,
    B,
    C,
}

/// Case A parameters: point center away from the previous divisor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsA {
    pub n: Rat,
    pub e: Rat,
    pub m: u32,
    pub eps: Rat,
    pub sigma0: Rat,
    pub sigma1: Rat,
    pub lambda: Rat,
    #[serde(default)]
    pub special: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c0_dot_l: Option<Rat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c01_dot_l1: Option<Rat>,
}

/// Case B parameters: the center is a ruling line of the top divisor.
/// `sum_p_sq` and `p1` sharpen the lower bound when the actual path counts
/// are known; otherwise the weaker denominator `eps * Sigma` is used.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsB {
    pub n: Rat,
    pub e: Rat,
    pub m: u32,
    pub eps: Rat,
    pub sigma: Rat,
    pub lambda: Rat,
    #[serde(default)]
    pub special: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sum_p_sq: Option<Rat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p1: Option<Rat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c0_dot_l: Option<Rat>,
}

/// Case C parameters: the center is the intersection point with the
/// previous divisor; the minus group runs one level shorter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsC {
    pub n: Rat,
    pub e: Rat,
    pub m: u32,
    pub eps_plus: Rat,
    pub eps_minus: Rat,
    pub sigma0: Rat,
    pub sigma1: Rat,
    pub lambda_plus: Rat,
    pub lambda_minus: Rat,
    #[serde(default)]
    pub special: bool,
    /// The special length-2 sub-case centered at the double point.
    #[serde(default)]
    pub singular_center: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_fiber: Option<Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case")]
pub enum CaseParams {
    A(ParamsA),
    B(ParamsB),
    C(ParamsC),
}

impl CaseParams {
    pub fn case(&self) -> ExclusionCase {
        match self {
            CaseParams::A(_) => ExclusionCase::A,
            CaseParams::B(_) => ExclusionCase::B,
            CaseParams::C(_) => ExclusionCase::C,
        }
    }

    fn check_lambda(name: &str, lambda: &Rat, n: &Rat) -> Result<(), Error> {
        if lambda.is_negative() || lambda > n {
            return Err(Error::input(format!(
                "{name} = {lambda} outside [0, n] with n = {n}"
            )));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), Error> {
        let (n, e, m) = match self {
            CaseParams::A(p) => (&p.n, &p.e, p.m),
            CaseParams::B(p) => (&p.n, &p.e, p.m),
            CaseParams::C(p) => (&p.n, &p.e, p.m),
        };
        if !n.is_positive() {
            return Err(Error::input(format!("n must be positive, got {n}")));
        }
        if !e.is_positive() {
            return Err(Error::input(format!(
                "e = {e} is not positive: the valuation is not a maximal singularity \
                 and there is nothing to exclude"
            )));
        }
        if m < 1 {
            return Err(Error::input("the staircase length M must be >= 1"));
        }
        match self {
            CaseParams::A(p) => {
                if !p.eps.is_positive() || !p.sigma0.is_positive() || p.sigma1.is_negative() {
                    return Err(Error::input(
                        "case A needs eps > 0, Sigma0 > 0 and Sigma1 >= 0",
                    ));
                }
                Self::check_lambda("lambda", &p.lambda, n)?;
            }
            CaseParams::B(p) => {
                if !p.eps.is_positive() || !p.sigma.is_positive() {
                    return Err(Error::input("case B needs eps > 0 and Sigma > 0"));
                }
                Self::check_lambda("lambda", &p.lambda, n)?;
                if let Some(spsq) = &p.sum_p_sq {
                    if !spsq.is_positive() {
                        return Err(Error::input("sum of squared path counts must be positive"));
                    }
                    if let Some(p1) = &p.p1 {
                        let p1_sigma = p1 * &p.sigma;
                        let eps_sigma = &p.eps * &p.sigma;
                        if !(spsq <= &p1_sigma && p1_sigma <= eps_sigma) {
                            return Err(Error::input(format!(
                                "path-count chain fails: need sum p_i^2 <= p1 Sigma <= \
                                 eps Sigma, got {spsq} , {p1_sigma} , {eps_sigma}"
                            )));
                        }
                    }
                }
            }
            CaseParams::C(p) => {
                if !p.eps_plus.is_positive()
                    || p.eps_minus.is_negative()
                    || !p.sigma0.is_positive()
                    || p.sigma1.is_negative()
                {
                    return Err(Error::input(
                        "case C needs eps_+ > 0, eps_- >= 0, Sigma0 > 0 and Sigma1 >= 0",
                    ));
                }
                Self::check_lambda("lambda_plus", &p.lambda_plus, n)?;
                Self::check_lambda("lambda_minus", &p.lambda_minus, n)?;
                if p.singular_center && !(p.special && p.m == 2) {
                    return Err(Error::unsupported(
                        "the singular-center sub-case is the special case with a \
                         length-2 staircase",
                    ));
                }
            }
        }
        Ok(())
    }

    /// Multiplicity of the fiber along the valuation, in the regimes where
    /// the closed form applies (see the graph module for the source data).
    pub fn nu_f(&self) -> Option<Rat> {
        let d_f = |special: bool| Rat::from_int(if special { 2 } else { 1 });
        match self {
            CaseParams::A(p) => {
                let min_m = if p.special { 3 } else { 2 };
                (p.m >= min_m).then(|| &d_f(p.special) * &p.eps)
            }
            CaseParams::B(p) => {
                let min_m = if p.special { 3 } else { 2 };
                (p.m >= min_m).then(|| &d_f(p.special) * &p.eps)
            }
            CaseParams::C(p) => {
                if p.singular_center {
                    let eps_fiber = p.eps_fiber.as_ref()?;
                    Some(
                        &(&(&Rat::from_int(2) * &p.eps_plus) + &p.eps_minus) + eps_fiber,
                    )
                } else {
                    let min_m = if p.special { 3 } else { 2 };
                    (p.m >= min_m)
                        .then(|| &d_f(p.special) * &(&p.eps_plus + &p.eps_minus))
                }
            }
        }
    }
}

fn gain(n: &Rat, lambda: &Rat) -> Rat {
    // 3n^2 - 2 lambda n - lambda^2, the per-level budget of the telescoped
    // bound; nonnegative and decreasing on 0 <= lambda <= n.
    let three_n_sq = &Rat::from_int(3) * &(n * n);
    &(&three_n_sq - &(&Rat::from_int(2) * &(lambda * n))) - &(lambda * lambda)
}

/// Upper bound for the weighted multiplicity sum (cases A, C) or the
/// multiplicity of the center line (case B), with the strict line-selection
/// replacement already folded in: every `(C.L)`-type term is worth strictly
/// less than `4ne` after weighting by the divisor multiplicities.
pub fn upper_bound_lhs(params: &CaseParams) -> Result<Rat, Error> {
    params.validate()?;
    let four = Rat::from_int(4);
    Ok(match params {
        CaseParams::A(p) => {
            let three_n_sq_s0 = &(&Rat::from_int(3) * &(&p.n * &p.n)) * &p.sigma0;
            let replaced = &four * &(&p.n * &p.e);
            &(&three_n_sq_s0 + &replaced)
                + &(&(&p.eps * &Rat::from(p.m)) * &gain(&p.n, &p.lambda))
        }
        CaseParams::B(p) => {
            let replaced = &(&four * &(&p.n * &p.e)) / &p.eps;
            &replaced + &(&Rat::from(p.m) * &gain(&p.n, &p.lambda))
        }
        CaseParams::C(p) => {
            let three_n_sq_s0 = &(&Rat::from_int(3) * &(&p.n * &p.n)) * &p.sigma0;
            let replaced = &four * &(&p.n * &p.e);
            let plus = &(&p.eps_plus * &Rat::from(p.m)) * &gain(&p.n, &p.lambda_plus);
            let minus = &(&p.eps_minus * &Rat::from(p.m - 1)) * &gain(&p.n, &p.lambda_minus);
            &(&(&three_n_sq_s0 + &replaced) + &plus) + &minus
        }
    })
}

fn lower_numerator(params: &CaseParams) -> Rat {
    match params {
        CaseParams::A(p) => {
            let base = &(&Rat::from_int(2) * &(&p.sigma0 * &p.n)) + &(&p.sigma1 * &p.n);
            let gap = &(&p.eps * &Rat::from(p.m)) * &(&p.n - &p.lambda);
            let s = &(&base + &gap) + &p.e;
            &s * &s
        }
        CaseParams::B(p) => {
            let base = &p.sigma * &p.n;
            let gap = &(&p.eps * &Rat::from(p.m)) * &(&p.n - &p.lambda);
            let s = &(&base + &gap) + &p.e;
            &s * &s
        }
        CaseParams::C(p) => {
            let base = &(&Rat::from_int(2) * &(&p.sigma0 * &p.n)) + &(&p.sigma1 * &p.n);
            let plus = &(&p.eps_plus * &Rat::from(p.m)) * &(&p.n - &p.lambda_plus);
            let minus = &(&p.eps_minus * &Rat::from(p.m - 1)) * &(&p.n - &p.lambda_minus);
            let s = &(&(&base + &plus) + &minus) + &p.e;
            &s * &s
        }
    }
}

fn lower_denominator(params: &CaseParams) -> Rat {
    match params {
        CaseParams::A(p) => &p.sigma0 + &p.sigma1,
        CaseParams::B(p) => match &p.sum_p_sq {
            Some(spsq) => spsq.clone(),
            None => &p.eps * &p.sigma,
        },
        CaseParams::C(p) => &p.sigma0 + &p.sigma1,
    }
}

/// Quadratic lower bound for the same quantity, from the
/// multiplicity/discrepancy identity.
pub fn im_lower_bound(params: &CaseParams) -> Result<Rat, Error> {
    params.validate()?;
    let den = lower_denominator(params);
    if den.is_zero() {
        return Err(Error::input("lower-bound denominator is zero"));
    }
    Ok(&lower_numerator(params) / &den)
}

/// A parameter cell that the bounds do not rule out; never produced by
/// valid data, so any occurrence is a counterexample to the implementation
/// or to the inputs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibleInstance {
    pub params: CaseParams,
    pub lower: Rat,
    pub upper: Rat,
    pub phi_value: Rat,
}

/// Certificate that the parameter cell is excluded: the lower bound meets
/// or beats the strictly-inflated upper bound, so the strict `Phi < 0`
/// required of an actual singularity fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContradictionCertificate {
    pub params: CaseParams,
    pub lower: Rat,
    pub upper: Rat,
    /// `lower numerator - denominator * upper`; nonnegative exactly when
    /// the cell is excluded.
    pub phi_value: Rat,
    pub comparison: CheckedIneq,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu_f: Option<Rat>,
}

impl ContradictionCertificate {
    pub fn verify(&self) -> Result<(), Error> {
        match exclude_case(&self.params)? {
            ExclusionOutcome::Excluded(rebuilt) => {
                if *rebuilt != *self {
                    return Err(Error::CertificateInvalid(
                        "exclusion certificate does not match its parameters".into(),
                    ));
                }
                if !self.comparison.holds() {
                    return Err(Error::CertificateInvalid(format!(
                        "stored comparison does not hold: {}",
                        self.comparison
                    )));
                }
                Ok(())
            }
            ExclusionOutcome::Feasible(_) => Err(Error::CertificateInvalid(
                "parameters are feasible, not excluded".into(),
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExclusionOutcome {
    Excluded(Box<ContradictionCertificate>),
    Feasible(Box<FeasibleInstance>),
}

/// Compare the two bounds on one parameter cell. Excluded means
/// `lower >= upper`; an actual singularity would force the strict opposite.
pub fn exclude_case(params: &CaseParams) -> Result<ExclusionOutcome, Error> {
    let upper = upper_bound_lhs(params)?;
    let lower = im_lower_bound(params)?;
    let den = lower_denominator(params);
    let phi_value = &lower_numerator(params) - &(&den * &upper);
    if lower < upper {
        Ok(ExclusionOutcome::Feasible(Box::new(FeasibleInstance {
            params: params.clone(),
            lower,
            upper,
            phi_value,
        })))
    } else {
        let comparison = CheckedIneq {
            name: "lower bound >= upper bound (so the strict Phi < 0 fails)".into(),
            lhs: lower.clone(),
            rel: Rel::Ge,
            rhs: upper.clone(),
        };
        Ok(ExclusionOutcome::Excluded(Box::new(ContradictionCertificate {
            params: params.clone(),
            lower,
            upper,
            phi_value,
            comparison,
            nu_f: params.nu_f(),
        })))
    }
}

// ---------------------------------------------------------------------------
// Symbolic certificates.

fn pv(name: &str) -> MultiPoly {
    MultiPoly::var(name)
}

fn pc(k: i64) -> MultiPoly {
    MultiPoly::constant(Rat::from_int(k))
}

/// The case's quadratic-form polynomial at the diagonal, written in the
/// canonical registry with `(n - lambda)` and `(n + lambda)` atomic.
pub fn phi_polynomial(case: ExclusionCase) -> MultiPoly {
    let n = pv(vars::N);
    let e = pv(vars::E);
    match case {
        ExclusionCase::A => {
            let (s0, s1) = (pv(vars::SIGMA0), pv(vars::SIGMA1));
            let w = pv(vars::M).mul(&pv(vars::EPS));
            let (u, v) = (pv(vars::U), pv(vars::V));
            let n_sq = n.pow(2);
            s0.pow(2)
                .add(&s0.mul(&s1))
                .add(&s1.pow(2))
                .mul(&n_sq)
                .add(&w.mul(&s0).mul(&u.pow(2)))
                .sub(&w.mul(&s1).mul(&u).mul(&v))
                .add(&w.pow(2).mul(&u.pow(2)))
                .sub(&pc(2).mul(&e).mul(&s1).mul(&n))
                .add(&pc(2).mul(&w).mul(&e).mul(&u))
                .add(&e.pow(2))
        }
        ExclusionCase::B => {
            let s = pv(vars::SIGMA);
            let w = pv(vars::M).mul(&pv(vars::EPS));
            let (u, v) = (pv(vars::U), pv(vars::V));
            s.pow(2)
                .mul(&n.pow(2))
                .sub(&pc(2).mul(&s).mul(&n).mul(&e))
                .add(&w.pow(2).mul(&u.pow(2)))
                .add(&e.pow(2))
                .add(&pc(2).mul(&w).mul(&u).mul(&e))
                .sub(&w.mul(&s).mul(&u).mul(&v))
        }
        ExclusionCase::C => {
            let (s0, s1) = (pv(vars::SIGMA0), pv(vars::SIGMA1));
            let wp = pv(vars::M_PLUS).mul(&pv(vars::EPS_PLUS));
            let wm = pv(vars::M_MINUS).mul(&pv(vars::EPS_MINUS));
            let (up, vp) = (pv(vars::U_PLUS), pv(vars::V_PLUS));
            let (um, vm) = (pv(vars::U_MINUS), pv(vars::V_MINUS));
            let n_sq = n.pow(2);
            s0.pow(2)
                .add(&s0.mul(&s1))
                .add(&s1.pow(2))
                .mul(&n_sq)
                .add(&wm.mul(&s0).mul(&um.pow(2)))
                .add(&wp.mul(&s0).mul(&up.pow(2)))
                .sub(&wm.mul(&s1).mul(&um).mul(&vm))
                .sub(&wp.mul(&s1).mul(&up).mul(&vp))
                .add(&wm.mul(&um).add(&wp.mul(&up)).pow(2))
                .sub(&pc(2).mul(&e).mul(&s1).mul(&n))
                .add(&pc(2).mul(&wm).mul(&um).mul(&e))
                .add(&pc(2).mul(&wp).mul(&up).mul(&e))
                .add(&e.pow(2))
        }
    }
}

/// The linear form whose square absorbs the substituted polynomial.
pub fn square_root_form(case: ExclusionCase) -> MultiPoly {
    let n = pv(vars::N);
    let e = pv(vars::E);
    match case {
        ExclusionCase::A => pv(vars::SIGMA1)
            .mul(&n)
            .sub(&pv(vars::M).mul(&pv(vars::EPS)).mul(&pv(vars::U)))
            .sub(&e),
        ExclusionCase::B => pv(vars::SIGMA)
            .mul(&n)
            .sub(&pv(vars::M).mul(&pv(vars::EPS)).mul(&pv(vars::U)))
            .sub(&e),
        ExclusionCase::C => pv(vars::SIGMA1)
            .mul(&n)
            .sub(&pv(vars::M_MINUS).mul(&pv(vars::EPS_MINUS)).mul(&pv(vars::U_MINUS)))
            .sub(&pv(vars::M_PLUS).mul(&pv(vars::EPS_PLUS)).mul(&pv(vars::U_PLUS)))
            .sub(&e),
    }
}

/// Apply the monotone rewrite `(n + lambda) -> 2n` (per group in case C).
pub fn substitute_sum_terms(case: ExclusionCase, phi: &MultiPoly) -> Result<MultiPoly, Error> {
    let two_n = MultiPoly::term(Rat::from_int(2), &[(vars::N, 1)]);
    let mut bindings = BTreeMap::new();
    match case {
        ExclusionCase::A | ExclusionCase::B => {
            bindings.insert(vars::V.to_string(), Binding::Poly(two_n));
        }
        ExclusionCase::C => {
            bindings.insert(vars::V_PLUS.to_string(), Binding::Poly(two_n.clone()));
            bindings.insert(vars::V_MINUS.to_string(), Binding::Poly(two_n));
        }
    }
    phi.subst(&bindings)
}

/// Exact decomposition `substituted Phi = square + nonnegative terms`,
/// with `(n - lambda)`-type factors atomic. Case B leaves no residual.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareCertificate {
    pub case: ExclusionCase,
    pub root: PolyRepr,
    pub square: PolyRepr,
    pub residual_terms: Vec<PolyRepr>,
    pub substituted_phi: PolyRepr,
}

impl SquareCertificate {
    pub fn verify(&self) -> Result<(), Error> {
        let rebuilt = complete_square_certificate(self.case)?;
        if &rebuilt != self {
            return Err(Error::CertificateInvalid(
                "square certificate does not match its case".into(),
            ));
        }
        let root = MultiPoly::from_repr(&self.root)?;
        let square = MultiPoly::from_repr(&self.square)?;
        let phi = MultiPoly::from_repr(&self.substituted_phi)?;
        if root.mul(&root) != square {
            return Err(Error::CertificateInvalid(
                "stored square is not the square of its root".into(),
            ));
        }
        let mut sum = square;
        for term in &self.residual_terms {
            let t = MultiPoly::from_repr(term)?;
            if !t.is_coefficientwise_nonnegative() {
                return Err(Error::CertificateInvalid(format!(
                    "residual term {t} has a negative coefficient"
                )));
            }
            sum = sum.add(&t);
        }
        if sum != phi {
            return Err(Error::CertificateInvalid(
                "square plus residual does not reproduce the substituted polynomial".into(),
            ));
        }
        if self.case == ExclusionCase::B && !self.residual_terms.is_empty() {
            return Err(Error::CertificateInvalid(
                "case B must leave no residual".into(),
            ));
        }
        Ok(())
    }
}

/// Build and check the square decomposition for a case. Fails only if the
/// residual has a negative coefficient, which would falsify the
/// nonnegativity claim the whole exclusion rests on.
pub fn complete_square_certificate(case: ExclusionCase) -> Result<SquareCertificate, Error> {
    let phi = substitute_sum_terms(case, &phi_polynomial(case))?;
    let root = square_root_form(case);
    let square = root.mul(&root);
    let residual = phi.sub(&square);
    if case == ExclusionCase::B && !residual.is_zero() {
        return Err(Error::Internal(format!(
            "case B residual should vanish, got {residual}"
        )));
    }
    let mut residual_terms = Vec::new();
    for term in residual.monomial_terms() {
        if !term.is_coefficientwise_nonnegative() {
            return Err(Error::CertificateInvalid(format!(
                "residual term {term} has a negative coefficient; the nonnegative \
                 decomposition fails"
            )));
        }
        residual_terms.push(term.to_repr());
    }
    Ok(SquareCertificate {
        case,
        root: root.to_repr(),
        square: square.to_repr(),
        residual_terms,
        substituted_phi: phi.to_repr(),
    })
}

/// The pre-diagonal quadratic form in the per-level variables
/// `lambda_1..lambda_M` (two groups for case C), as a polynomial over the
/// symbol registry. Symmetric under permutations within each group.
pub fn phi_multi(case: ExclusionCase, m: u32) -> Result<MultiPoly, Error> {
    if m < 1 {
        return Err(Error::input("the staircase length M must be >= 1"));
    }
    let n = pv(vars::N);
    let e = pv(vars::E);
    let four_ne = pc(4).mul(&n).mul(&e);
    let three_n_sq = pc(3).mul(&n.pow(2));
    let sum_gaps = |names: &[String]| -> MultiPoly {
        names.iter().fold(MultiPoly::zero(), |acc, name| {
            acc.add(&n.sub(&pv(name)))
        })
    };
    let sum_gains = |names: &[String]| -> MultiPoly {
        names.iter().fold(MultiPoly::zero(), |acc, name| {
            let lam = pv(name);
            acc.add(&three_n_sq.sub(&pc(2).mul(&lam).mul(&n)).sub(&lam.pow(2)))
        })
    };
    Ok(match case {
        ExclusionCase::A => {
            let names: Vec<String> = (1..=m as usize).map(vars::lambda).collect();
            let (s0, s1) = (pv(vars::SIGMA0), pv(vars::SIGMA1));
            let eps = pv(vars::EPS);
            let base = pc(2).mul(&s0).mul(&n).add(&s1.mul(&n));
            let lower = base.add(&eps.mul(&sum_gaps(&names))).add(&e).pow(2);
            let upper = three_n_sq
                .mul(&s0)
                .add(&four_ne)
                .add(&eps.mul(&sum_gains(&names)));
            lower.sub(&s0.add(&s1).mul(&upper))
        }
        ExclusionCase::B => {
            let names: Vec<String> = (1..=m as usize).map(vars::lambda).collect();
            let s = pv(vars::SIGMA);
            let eps = pv(vars::EPS);
            let lower = s.mul(&n).add(&eps.mul(&sum_gaps(&names))).add(&e).pow(2);
            let upper_scaled = four_ne
                .mul(&s)
                .add(&eps.mul(&s).mul(&sum_gains(&names)));
            lower.sub(&upper_scaled)
        }
        ExclusionCase::C => {
            let plus: Vec<String> = (1..=m as usize).map(vars::lambda_plus).collect();
            let minus: Vec<String> = (1..m as usize).map(vars::lambda_minus).collect();
            let (s0, s1) = (pv(vars::SIGMA0), pv(vars::SIGMA1));
            let (ep, em) = (pv(vars::EPS_PLUS), pv(vars::EPS_MINUS));
            let base = pc(2).mul(&s0).mul(&n).add(&s1.mul(&n));
            let lower = base
                .add(&ep.mul(&sum_gaps(&plus)))
                .add(&em.mul(&sum_gaps(&minus)))
                .add(&e)
                .pow(2);
            let upper = three_n_sq
                .mul(&s0)
                .add(&four_ne)
                .add(&ep.mul(&sum_gains(&plus)))
                .add(&em.mul(&sum_gains(&minus)));
            lower.sub(&s0.add(&s1).mul(&upper))
        }
    })
}

// ---------------------------------------------------------------------------
// Grid search.

/// Quarter-integer grid for one case family. `e` runs over
/// `e_quarter_min..=e_quarter_max` quarters; each `lambda` takes the values
/// `q * n / 4` for the listed quarters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchRanges {
    pub n_max: i64,
    pub m_max: u32,
    pub eps_max: i64,
    pub sigma_max: i64,
    #[serde(default = "default_e_quarter_min")]
    pub e_quarter_min: i64,
    pub e_quarter_max: i64,
    #[serde(default = "default_lambda_quarters")]
    pub lambda_quarters: Vec<i64>,
}

fn default_e_quarter_min() -> i64 {
    1
}

fn default_lambda_quarters() -> Vec<i64> {
    vec![0, 1, 2, 3, 4]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub case: ExclusionCase,
    pub special: bool,
    pub singular_center: bool,
    pub cells_checked: u64,
    pub cells_skipped: u64,
    pub warnings: Vec<String>,
    pub feasible: Vec<FeasibleInstance>,
}

/// Exhaustive sweep of one case family over the grid. Exact arithmetic
/// throughout: cells are evaluated on an overflow-checked integer fast path
/// (the quarter-integer grid scales to integers) with a rational fallback.
/// Returns every feasible cell; valid parameters yield none.
pub fn feasibility_search(
    case: ExclusionCase,
    special: bool,
    singular_center: bool,
    ranges: &SearchRanges,
    parallel: bool,
) -> Result<SearchReport, Error> {
    if ranges.n_max < 1 || ranges.m_max < 1 || ranges.eps_max < 1 || ranges.sigma_max < 1 {
        return Err(Error::input("all range maxima must be >= 1"));
    }
    if ranges.e_quarter_max < 1 {
        return Err(Error::input("the e range must contain a positive value"));
    }
    let mut warnings = Vec::new();
    let mut skipped = 0u64;
    let e_min = if ranges.e_quarter_min < 1 {
        let dropped = 1 - ranges.e_quarter_min;
        warnings.push(format!(
            "dropped {dropped} nonpositive e values: a maximal singularity needs e > 0"
        ));
        skipped += dropped as u64;
        1
    } else {
        ranges.e_quarter_min
    };
    for &q in &ranges.lambda_quarters {
        if !(0..=4).contains(&q) {
            return Err(Error::input(format!(
                "lambda quarter {q} outside 0..=4 (lambda must stay in [0, n])"
            )));
        }
    }
    if singular_center && !(case == ExclusionCase::C && special && ranges.m_max >= 2) {
        return Err(Error::unsupported(
            "the singular-center sweep is the special case C with length-2 staircases",
        ));
    }

    // Outer cells keep the parallel chunks coarse; inner loops stay serial.
    let outer: Vec<(i64, u32, i64)> = (1..=ranges.n_max)
        .flat_map(|n| {
            (1..=ranges.m_max).flat_map(move |m| (1..=ranges.eps_max).map(move |eps| (n, m, eps)))
        })
        .collect();

    let scan = |&(n, m, eps): &(i64, u32, i64)| -> (u64, Vec<FeasibleInstance>) {
        let mut checked = 0u64;
        let mut feasible = Vec::new();
        let mut visit = |params: CaseParams, fast: Option<bool>| {
            checked += 1;
            let is_feasible = match fast {
                Some(f) => f,
                None => matches!(
                    exclude_case(&params).expect("validated grid cell"),
                    ExclusionOutcome::Feasible(_)
                ),
            };
            if is_feasible {
                if let ExclusionOutcome::Feasible(inst) =
                    exclude_case(&params).expect("validated grid cell")
                {
                    feasible.push(*inst);
                }
            }
        };
        // Scaled units: capital letters are 4x the true values.
        let nn = 4 * n;
        for e4 in e_min..=ranges.e_quarter_max {
            for &lq in &ranges.lambda_quarters {
                let ll = lq * n;
                match case {
                    ExclusionCase::A => {
                        for s0 in 1..=ranges.sigma_max {
                            for s1 in 0..=ranges.sigma_max {
                                let fast = feasible_a_scaled(nn, e4, m, eps, s0, s1, ll);
                                visit(
                                    CaseParams::A(ParamsA {
                                        n: Rat::from_int(n),
                                        e: Rat::new(e4, 4),
                                        m,
                                        eps: Rat::from_int(eps),
                                        sigma0: Rat::from_int(s0),
                                        sigma1: Rat::from_int(s1),
                                        lambda: Rat::new(lq * n, 4),
                                        special,
                                        c0_dot_l: None,
                                        c01_dot_l1: None,
                                    }),
                                    fast,
                                );
                            }
                        }
                    }
                    ExclusionCase::B => {
                        for s in 1..=ranges.sigma_max {
                            let fast = feasible_b_scaled(nn, e4, m, eps, s, ll);
                            visit(
                                CaseParams::B(ParamsB {
                                    n: Rat::from_int(n),
                                    e: Rat::new(e4, 4),
                                    m,
                                    eps: Rat::from_int(eps),
                                    sigma: Rat::from_int(s),
                                    lambda: Rat::new(lq * n, 4),
                                    special,
                                    sum_p_sq: None,
                                    p1: None,
                                    c0_dot_l: None,
                                }),
                                fast,
                            );
                        }
                    }
                    ExclusionCase::C => {
                        for eps_minus in 0..=ranges.eps_max {
                            for &lq_minus in &ranges.lambda_quarters {
                                let ll_minus = lq_minus * n;
                                for s0 in 1..=ranges.sigma_max {
                                    for s1 in 0..=ranges.sigma_max {
                                        let fast = feasible_c_scaled(
                                            nn, e4, m, eps, eps_minus, s0, s1, ll, ll_minus,
                                        );
                                        visit(
                                            CaseParams::C(ParamsC {
                                                n: Rat::from_int(n),
                                                e: Rat::new(e4, 4),
                                                m,
                                                eps_plus: Rat::from_int(eps),
                                                eps_minus: Rat::from_int(eps_minus),
                                                sigma0: Rat::from_int(s0),
                                                sigma1: Rat::from_int(s1),
                                                lambda_plus: Rat::new(lq * n, 4),
                                                lambda_minus: Rat::new(lq_minus * n, 4),
                                                special,
                                                singular_center: singular_center && m == 2,
                                                eps_fiber: None,
                                            }),
                                            fast,
                                        );
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        (checked, feasible)
    };

    let results: Vec<(u64, Vec<FeasibleInstance>)> = if parallel {
        outer.par_iter().map(scan).collect()
    } else {
        outer.iter().map(scan).collect()
    };
    let mut cells_checked = 0u64;
    let mut feasible = Vec::new();
    for (c, mut f) in results {
        cells_checked += c;
        feasible.append(&mut f);
    }
    Ok(SearchReport {
        case,
        special,
        singular_center,
        cells_checked,
        cells_skipped: skipped,
        warnings,
        feasible,
    })
}

// The scaled predicates work in units of quarters (N = 4n, E = 4e,
// Lambda = 4*lambda); both sides of the comparison pick up the same factor
// 16, so the verdict is unchanged. `None` means the checked arithmetic
// overflowed and the rational path must decide.

fn gain_scaled(nn: i128, ll: i128) -> Option<i128> {
    let n_sq = nn.checked_mul(nn)?;
    let t = 3i128
        .checked_mul(n_sq)?
        .checked_sub(2i128.checked_mul(ll.checked_mul(nn)?)?)?;
    t.checked_sub(ll.checked_mul(ll)?)
}

fn feasible_a_scaled(
    nn: i64,
    e4: i64,
    m: u32,
    eps: i64,
    s0: i64,
    s1: i64,
    ll: i64,
) -> Option<bool> {
    let (nn, e4, m, eps, s0, s1, ll) = (
        nn as i128, e4 as i128, m as i128, eps as i128, s0 as i128, s1 as i128, ll as i128,
    );
    let gap = nn.checked_sub(ll)?;
    let lhs = 2i128
        .checked_mul(s0)?
        .checked_mul(nn)?
        .checked_add(s1.checked_mul(nn)?)?
        .checked_add(m.checked_mul(eps)?.checked_mul(gap)?)?
        .checked_add(e4)?;
    let lhs_sq = lhs.checked_mul(lhs)?;
    let inner = 3i128
        .checked_mul(nn.checked_mul(nn)?)?
        .checked_mul(s0)?
        .checked_add(4i128.checked_mul(nn.checked_mul(e4)?)?)?
        .checked_add(m.checked_mul(eps)?.checked_mul(gain_scaled(nn, ll)?)?)?;
    let rhs = s0.checked_add(s1)?.checked_mul(inner)?;
    Some(lhs_sq < rhs)
}

fn feasible_b_scaled(nn: i64, e4: i64, m: u32, eps: i64, s: i64, ll: i64) -> Option<bool> {
    let (nn, e4, m, eps, s, ll) = (
        nn as i128, e4 as i128, m as i128, eps as i128, s as i128, ll as i128,
    );
    let gap = nn.checked_sub(ll)?;
    let lhs = s
        .checked_mul(nn)?
        .checked_add(m.checked_mul(eps)?.checked_mul(gap)?)?
        .checked_add(e4)?;
    let lhs_sq = lhs.checked_mul(lhs)?;
    let rhs = 4i128
        .checked_mul(nn.checked_mul(e4)?)?
        .checked_mul(s)?
        .checked_add(
            eps.checked_mul(s)?
                .checked_mul(m)?
                .checked_mul(gain_scaled(nn, ll)?)?,
        )?;
    Some(lhs_sq < rhs)
}

#[allow(clippy::too_many_arguments)]
fn feasible_c_scaled(
    nn: i64,
    e4: i64,
    m: u32,
    eps_plus: i64,
    eps_minus: i64,
    s0: i64,
    s1: i64,
    ll_plus: i64,
    ll_minus: i64,
) -> Option<bool> {
    let (nn, e4, m, ep, em, s0, s1, lp, lm) = (
        nn as i128,
        e4 as i128,
        m as i128,
        eps_plus as i128,
        eps_minus as i128,
        s0 as i128,
        s1 as i128,
        ll_plus as i128,
        ll_minus as i128,
    );
    let lhs = 2i128
        .checked_mul(s0)?
        .checked_mul(nn)?
        .checked_add(s1.checked_mul(nn)?)?
        .checked_add(m.checked_mul(ep)?.checked_mul(nn.checked_sub(lp)?)?)?
        .checked_add(
            (m - 1)
                .checked_mul(em)?
                .checked_mul(nn.checked_sub(lm)?)?,
        )?
        .checked_add(e4)?;
    let lhs_sq = lhs.checked_mul(lhs)?;
    let inner = 3i128
        .checked_mul(nn.checked_mul(nn)?)?
        .checked_mul(s0)?
        .checked_add(4i128.checked_mul(nn.checked_mul(e4)?)?)?
        .checked_add(m.checked_mul(ep)?.checked_mul(gain_scaled(nn, lp)?)?)?
        .checked_add(
            (m - 1)
                .checked_mul(em)?
                .checked_mul(gain_scaled(nn, lm)?)?,
        )?;
    let rhs = s0.checked_add(s1)?.checked_mul(inner)?;
    Some(lhs_sq < rhs)
}
