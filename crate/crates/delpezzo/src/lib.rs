//! Exact-arithmetic workbench for threefolds fibered into cubic surfaces.
//!
//! The crate mechanizes the bookkeeping that a rigidity argument for such a
//! fibration runs on: intersection numbers on the ambient bundle, the
//! involution action that untwists maximal curves, the fiber-local line
//! selection, the blow-up staircase ledger, resolution-graph aggregates, and
//! the final infeasibility certificates. Everything is computed over
//! arbitrary-precision rationals; there is no floating point anywhere.

pub mod chow;
pub mod error;
pub mod exclusion;
pub mod graph;
pub mod lines;
pub mod poly;
pub mod qmin;
pub mod rat;
pub mod report;
pub mod serde_util;
pub mod staircase;
pub mod untwist;

pub use error::Error;
pub use rat::Rat;
