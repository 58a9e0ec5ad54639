//! Library half of the command-line front end, kept separate from the
//! binary so the schema and dispatch can be exercised in-process.

pub mod config;
pub mod report;
pub mod run;
