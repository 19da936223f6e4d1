//! Central Kurdish text toolkit: script normalization, morphology, dialect
//! rewriting, language identification, evaluation metrics and corpus tools.

pub mod corpus;
pub mod dialect_rules;
pub mod lid;
pub mod metrics;
pub mod morphology;
pub mod orthography;
pub mod tag;
