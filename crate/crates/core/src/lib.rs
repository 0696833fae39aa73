//! Computability-logic workbench: CL2 formulas as games, a decision procedure
//! for the blind-quantifier-free fragment, proof and refutation checkers, and
//! strategies compiled from certificates.

pub mod calculus;
pub mod classical;
pub mod decider;
pub mod game;
pub mod strategy;
pub mod syntax;
