//! Replayable certificate building blocks and the report envelope.
//!
//! Every operation that certifies something records the inequalities it
//! checked as [`CheckedIneq`] values carrying the substituted numbers. A
//! certificate re-verifies by recomputing from its stored inputs and
//! comparing against the stored record, so a report written to disk can be
//! replayed later.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::rat::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rel {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl Rel {
    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Eq => "=",
            Rel::Ge => ">=",
            Rel::Gt => ">",
        }
    }

    pub fn holds(self, lhs: &Rat, rhs: &Rat) -> bool {
        match self {
            Rel::Lt => lhs < rhs,
            Rel::Le => lhs <= rhs,
            Rel::Eq => lhs == rhs,
            Rel::Ge => lhs >= rhs,
            Rel::Gt => lhs > rhs,
        }
    }
}

/// One inequality instance with all values substituted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckedIneq {
    pub name: String,
    pub lhs: Rat,
    pub rel: Rel,
    pub rhs: Rat,
}

impl CheckedIneq {
    pub fn holds(&self) -> bool {
        self.rel.holds(&self.lhs, &self.rhs)
    }

    /// Record a hypothesis; a violation is a named precondition error.
    pub fn require(name: &str, lhs: Rat, rel: Rel, rhs: Rat) -> Result<Self, Error> {
        let c = CheckedIneq {
            name: name.to_string(),
            lhs,
            rel,
            rhs,
        };
        if c.holds() {
            Ok(c)
        } else {
            Err(Error::precondition(name, c.to_string()))
        }
    }

    /// Record a consequence that the hypotheses provably imply; a violation
    /// means the implication chain itself is broken.
    pub fn derive(name: &str, lhs: Rat, rel: Rel, rhs: Rat) -> Result<Self, Error> {
        let c = CheckedIneq {
            name: name.to_string(),
            lhs,
            rel,
            rhs,
        };
        if c.holds() {
            Ok(c)
        } else {
            Err(Error::Internal(format!(
                "derived inequality failed: {c} (inputs are inconsistent)"
            )))
        }
    }
}

impl fmt::Display for CheckedIneq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} {} {}",
            self.name,
            self.lhs,
            self.rel.symbol(),
            self.rhs
        )
    }
}

/// Check a batch of stored inequalities, naming the first failure.
pub fn verify_ineqs(ineqs: &[CheckedIneq]) -> Result<(), Error> {
    for c in ineqs {
        if !c.holds() {
            return Err(Error::CertificateInvalid(format!(
                "stored inequality does not hold: {c}"
            )));
        }
    }
    Ok(())
}
