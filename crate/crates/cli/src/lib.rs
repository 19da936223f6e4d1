//! Command-line front end and MT experiment harness.

pub mod adapter;
pub mod cli;
pub mod experiment;
