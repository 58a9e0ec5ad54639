//! The chain of line blow-ups over a fiber, as a numeric ledger.
//!
//! Blowing up a line in a fiber, then the exceptional section of the
//! resulting ruled surface, and so on, produces a chain whose per-level
//! constants are fixed: each exceptional divisor is a ruled surface with
//! `(E)^3 = 1`, restriction `-(s_i + f_i)`, zero pairing against its own
//! exceptional section, and discrepancy equal to the level index. A line
//! through the double point of a singular fiber ("special") changes the
//! fiber pullback coefficients from `(1, 1, ..., 1)` to `(1, 2, ..., 2)`.
//!
//! On top of the constants, the module tracks how the self-intersection
//! cycle of the pencil transforms level by level: the class recursion, the
//! per-level degree bookkeeping identity, and the telescoped upper bound.

use serde::{Deserialize, Serialize};

use crate::chow::VCycleClass;
use crate::error::Error;
use crate::rat::Rat;

/// A finite chain of line blow-ups of length `M >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Staircase {
    pub length: u32,
    pub special: bool,
}

impl Staircase {
    pub fn new(length: u32, special: bool) -> Result<Self, Error> {
        if length < 1 {
            return Err(Error::input(format!(
                "staircase length must be >= 1, got {length}"
            )));
        }
        Ok(Staircase { length, special })
    }

    /// Fiber-type constant: 1 for a line missing the singular point of its
    /// fiber, 2 for a line through it.
    pub fn d_f(&self) -> u32 {
        if self.special {
            2
        } else {
            1
        }
    }

    pub fn level(&self, i: u32) -> Result<LevelConstants, Error> {
        if i < 1 || i > self.length {
            return Err(Error::input(format!(
                "level {i} outside 1..={}",
                self.length
            )));
        }
        let meets_previous = if self.special && i == 1 {
            // The strict transform of the singular fiber meets the first
            // exceptional divisor in the exceptional section plus the fiber
            // over the double point.
            PrevIntersection::SectionPlusFiber
        } else {
            PrevIntersection::Irreducible
        };
        Ok(LevelConstants {
            index: i,
            discrepancy: i,
            self_triple: 1,
            restriction: (-1, -1),
            section_pairing: 0,
            meets_previous,
        })
    }

    pub fn levels(&self) -> Vec<LevelConstants> {
        (1..=self.length)
            .map(|i| self.level(i).expect("in range"))
            .collect()
    }
}

/// How an exceptional divisor meets the previous one (level 1: the fiber).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrevIntersection {
    /// An irreducible curve of class `s_i + f_i`.
    Irreducible,
    /// Reducible: exceptional section plus the fiber over the double point
    /// (special case, level 1 only). The class is still `s_1 + f_1`.
    SectionPlusFiber,
}

/// Fixed intersection data of one level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelConstants {
    pub index: u32,
    /// Canonical multiplicity of the level's divisorial valuation.
    pub discrepancy: u32,
    /// `(E^(i))^3`.
    pub self_triple: i64,
    /// Coefficients of `(s_i, f_i)` in the self-restriction.
    pub restriction: (i64, i64),
    /// `(E^(i) . L_i)`.
    pub section_pairing: i64,
    /// The intersection curve with the previous divisor; its class is
    /// `s_i + f_i` in both shapes.
    pub meets_previous: PrevIntersection,
}

/// Coefficients of the total pullback of the fiber class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PullbackFiber {
    /// Coefficient of the strict transform of the fiber.
    pub strict_transform: u32,
    /// Coefficients of `E^(1), ..., E^(M)`.
    pub exceptional: Vec<u32>,
}

impl PullbackFiber {
    /// Multiplicity of the fiber along the top valuation.
    pub fn top_multiplicity(&self) -> u32 {
        *self.exceptional.last().expect("length >= 1")
    }
}

/// `sigma^* F` as exact coefficients: all ones in the non-special case,
/// `(1, 2, 2, ...)` in the special case.
pub fn pullback_fiber_class(st: &Staircase) -> PullbackFiber {
    let exceptional = (1..=st.length)
        .map(|i| if st.special && i >= 2 { 2 } else { 1 })
        .collect();
    PullbackFiber {
        strict_transform: 1,
        exceptional,
    }
}

/// Discrepancy of the level-`i` valuation: the level index itself.
pub fn discrepancy(st: &Staircase, i: u32) -> Result<u32, Error> {
    Ok(st.level(i)?.discrepancy)
}

/// A 1-cycle class along the chain, in the folded basis: the level-0 part is
/// carried formally, `s_coeff` rides the current exceptional section class
/// (the pullback of each `s_{i-1}` is `s_i`), and `f_coeffs[j]` multiplies
/// the ruling class of level `j + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StairCycleClass {
    pub base: VCycleClass,
    pub s_coeff: Rat,
    pub f_coeffs: Vec<Rat>,
}

impl StairCycleClass {
    pub fn level_zero(base: VCycleClass) -> Self {
        StairCycleClass {
            base,
            s_coeff: Rat::zero(),
            f_coeffs: Vec::new(),
        }
    }

    pub fn level(&self) -> usize {
        self.f_coeffs.len()
    }
}

/// Transform a level-0 class through `M` blow-ups with multiplicities
/// `lambdas`: each step subtracts `(2 lambda n + lambda^2) f_i` and
/// `lambda^2 s_i`, folding the previous `s`-coefficient forward.
pub fn z_recursion(
    n: &Rat,
    lambdas: &[Rat],
    z0: &StairCycleClass,
) -> Result<StairCycleClass, Error> {
    if z0.level() != 0 {
        return Err(Error::input("the class recursion starts from level 0"));
    }
    let mut out = z0.clone();
    for (idx, lam) in lambdas.iter().enumerate() {
        if lam.is_negative() || lam > n {
            return Err(Error::input(format!(
                "lambda_{} = {lam} outside [0, n] with n = {n}",
                idx + 1
            )));
        }
        let lam_sq = lam * lam;
        let drop = &(&Rat::from_int(2) * &(lam * n)) + &lam_sq;
        out.f_coeffs.push(-&drop);
        out.s_coeff = &out.s_coeff - &lam_sq;
    }
    Ok(out)
}

/// One ledger row: the multiplicity of the pencil along the level's center
/// and the degree data of the new cycle pieces on the exceptional divisor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerRow {
    pub lambda: Rat,
    /// Intersection of the transformed horizontal cycle with the center.
    pub alpha: Rat,
    /// Ruling coefficient of the horizontal piece; at least its degree.
    pub beta: Rat,
    pub d_h: Rat,
    pub d_v: Rat,
    /// Multiplicity of the exceptional section, when tracked.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<Rat>,
}

/// Per-level ledger for a fixed staircase.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelLedger {
    pub staircase: Staircase,
    pub n: Rat,
    pub c0_dot_l: Rat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c01_dot_l1: Option<Rat>,
    pub rows: Vec<LedgerRow>,
}

impl LevelLedger {
    /// Structural invariants: monotone multiplicities within `[0, n]`,
    /// `beta >= d_h`, `alpha <= 3n^2`, nonnegative degrees.
    pub fn validate(&self) -> Result<(), Error> {
        if self.rows.len() != self.staircase.length as usize {
            return Err(Error::input(format!(
                "ledger has {} rows for a staircase of length {}",
                self.rows.len(),
                self.staircase.length
            )));
        }
        if self.n.is_negative() {
            return Err(Error::input("n must be nonnegative"));
        }
        if self.c0_dot_l.is_negative() {
            return Err(Error::input("(C^(0).L) must be nonnegative"));
        }
        if self.staircase.special && self.staircase.length >= 2 && self.c01_dot_l1.is_none() {
            return Err(Error::input(
                "the special case with length >= 2 needs (C^(0,1).L1)",
            ));
        }
        let three_n_sq = &Rat::from_int(3) * &(&self.n * &self.n);
        let mut prev_lambda = self.n.clone();
        for (idx, row) in self.rows.iter().enumerate() {
            let i = idx + 1;
            if row.lambda.is_negative() || row.lambda > prev_lambda {
                return Err(Error::input(format!(
                    "multiplicities must satisfy n >= lambda_1 >= ... >= 0; \
                     lambda_{i} = {} exceeds {}",
                    row.lambda, prev_lambda
                )));
            }
            prev_lambda = row.lambda.clone();
            for (name, v) in [("d_h", &row.d_h), ("d_v", &row.d_v), ("beta", &row.beta)] {
                if v.is_negative() {
                    return Err(Error::input(format!("{name}_{i} must be nonnegative")));
                }
            }
            if let Some(k) = &row.k {
                if k.is_negative() {
                    return Err(Error::input(format!("k_{i} must be nonnegative")));
                }
            }
            if row.beta < row.d_h {
                return Err(Error::input(format!(
                    "beta_{i} = {} below the horizontal degree {}",
                    row.beta, row.d_h
                )));
            }
            if row.alpha > three_n_sq {
                return Err(Error::input(format!(
                    "alpha_{i} = {} exceeds the horizontal degree bound 3n^2 = {}",
                    row.alpha, three_n_sq
                )));
            }
        }
        Ok(())
    }

    /// Reject non-integer entries (the relaxed ledger allows rationals).
    pub fn validate_integrality(&self) -> Result<(), Error> {
        for (idx, row) in self.rows.iter().enumerate() {
            for (name, v) in [
                ("lambda", &row.lambda),
                ("alpha", &row.alpha),
                ("beta", &row.beta),
                ("d_h", &row.d_h),
                ("d_v", &row.d_v),
            ] {
                if !v.is_integer() {
                    return Err(Error::input(format!(
                        "{name}_{} = {v} is not an integer",
                        idx + 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// Right-hand side of the level-`i` relation minus the unknown-free part
    /// of the left; callers add/compare `d_v_i + beta_i`.
    fn relation_rhs(&self, i: usize) -> Result<Rat, Error> {
        let row = &self.rows[i - 1];
        let lam = &row.lambda;
        let drop = &(&Rat::from_int(2) * &(lam * &self.n)) + &(lam * lam);
        let base = if i == 1 {
            &row.alpha + &self.c0_dot_l
        } else {
            let prev = &self.rows[i - 2];
            let carried = &(&row.alpha + &prev.d_v) + &(&prev.beta - &prev.d_h);
            if self.staircase.special && i == 2 {
                let c01 = self.c01_dot_l1.as_ref().ok_or_else(|| {
                    Error::input("the special case with length >= 2 needs (C^(0,1).L1)")
                })?;
                &carried + c01
            } else {
                carried
            }
        };
        Ok(&base - &drop)
    }

    /// Exact residual of the level-`i` relation (zero when it holds).
    pub fn step_residual(&self, i: usize) -> Result<Rat, Error> {
        if i < 1 || i > self.rows.len() {
            return Err(Error::input(format!("no ledger row {i}")));
        }
        let row = &self.rows[i - 1];
        let lhs = &row.d_v + &row.beta;
        Ok(&lhs - &self.relation_rhs(i)?)
    }

    /// Verify all rows; a violation reports the level and residual.
    pub fn verify_steps(&self) -> Result<(), Error> {
        self.validate()?;
        for i in 1..=self.rows.len() {
            let r = self.step_residual(i)?;
            if !r.is_zero() {
                return Err(Error::CertificateInvalid(format!(
                    "ledger relation fails at level {i}: residual {r}"
                )));
            }
        }
        Ok(())
    }

    /// Solve the level-`i` relation for one field, holding the rest fixed.
    pub fn step_solve(&self, i: usize, field: LedgerField) -> Result<Rat, Error> {
        if i < 1 || i > self.rows.len() {
            return Err(Error::input(format!("no ledger row {i}")));
        }
        let rhs = self.relation_rhs(i)?;
        let row = &self.rows[i - 1];
        Ok(match field {
            LedgerField::DegVertical => &rhs - &row.beta,
            LedgerField::Beta => &rhs - &row.d_v,
            // rhs = alpha + rest, so alpha = lhs - (rhs - alpha).
            LedgerField::Alpha => &(&(&row.d_v + &row.beta) - &rhs) + &row.alpha,
        })
    }

    /// Telescoped upper bound for `d_v_i + beta_i` at each level.
    pub fn bounds(&self) -> Result<Vec<Rat>, Error> {
        self.validate()?;
        let three_n_sq = &Rat::from_int(3) * &(&self.n * &self.n);
        let mut acc = Rat::zero();
        let mut out = Vec::with_capacity(self.rows.len());
        for (idx, row) in self.rows.iter().enumerate() {
            let i = idx + 1;
            let lam = &row.lambda;
            let gain = &(&three_n_sq - &(&Rat::from_int(2) * &(lam * &self.n))) - &(lam * lam);
            acc = &acc + &gain;
            let mut bound = &self.c0_dot_l + &acc;
            if self.staircase.special {
                if i == 1 {
                    bound = &self.c0_dot_l + &gain;
                } else {
                    let c01 = self.c01_dot_l1.as_ref().ok_or_else(|| {
                        Error::input("the special case with length >= 2 needs (C^(0,1).L1)")
                    })?;
                    bound = &bound + c01;
                }
            }
            out.push(bound);
        }
        Ok(out)
    }

    /// Check every row against its bound.
    pub fn verify_bounds(&self) -> Result<Vec<Rat>, Error> {
        let bounds = self.bounds()?;
        for (idx, (row, bound)) in self.rows.iter().zip(&bounds).enumerate() {
            let lhs = &row.d_v + &row.beta;
            if &lhs > bound {
                return Err(Error::CertificateInvalid(format!(
                    "ledger bound fails at level {}: {lhs} > {bound}",
                    idx + 1
                )));
            }
        }
        Ok(bounds)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LedgerField {
    DegVertical,
    Beta,
    Alpha,
}
