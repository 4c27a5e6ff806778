//! Tooling for turning multiple-choice reading-comprehension data into a
//! two-class NLI dataset and for comparing a QA-form model against an
//! NLI-form model.
//!
//! The pipeline is: [`corpus`] (load RACE, drop cloze questions) →
//! [`parsetree`] (CoNLL-U parses of questions and options) → [`converter`]
//! (question + option → hypothesis) → [`categorize`] (keyword question
//! types) → [`analysis`] (accuracy tables, delta/gain/loss).

pub mod analysis;
pub mod categorize;
pub mod cli;
pub mod converter;
pub mod corpus;
mod error;
pub mod io;
pub mod parsetree;

pub use error::{Error, Result};
