//! Binding signatures with reduction rules: well-scoped terms, substitution,
//! rewriting, and law checking against models.

pub mod cli;
pub mod halfeq;
pub mod modalg;
pub mod models;
pub mod reduction;
pub mod report;
pub mod sample;
pub mod sexp;
pub mod sigspec;
pub mod suite;
pub mod term;
