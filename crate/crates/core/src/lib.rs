//! Evolving strategy selectors for a small equational prover.
//!
//! The pipeline: [`corpus`] supplies theories and conjectures, [`featurize`]
//! maps proof states to assertion bit vectors, [`recommend`] trains one
//! regression tree per proof method, and [`evolve`] searches for genomes over
//! the trees' leaves that route each obligation to the library strategy in
//! [`strategy`] most likely to prove it with the [`kernel`] methods.

pub mod cli;
pub mod corpus;
pub mod evolve;
pub mod featurize;
pub mod kernel;
pub mod recommend;
pub mod strategy;
