//! Learning minimal probabilistic LTL formulas from samples of Markov chains.
//!
//! The pipeline enumerates LTL formulas by increasing size ([`learner`]),
//! computes their satisfaction probabilities on every chain ([`engine`]),
//! turns formulas that separate the sample into threshold atoms, and combines
//! near-misses with conjunction and disjunction.

pub mod bench;
pub mod dtmc;
pub mod engine;
pub mod learner;
pub mod ltl;
pub mod manifest;
