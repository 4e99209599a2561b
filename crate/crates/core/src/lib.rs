//! Exact construction and verification of twisted convolution algebras
//! `ℓ¹_{α,ω}(G, A)` for finite groups `G` and finite-dimensional C*-algebras
//! `A = ⊕ M_{n_i}` over cyclotomic fields.
//!
//! The crate builds the algebra from a twisted action, checks the action
//! axioms exhaustively, and verifies that every two-sided ideal is a *-ideal
//! with semisimple quotient, both directly (trace-form radical) and by
//! replaying the averaging argument that produces a *-representation on the
//! quotient.

pub mod cli;
pub mod coeff_algebra;
pub mod conv_algebra;
pub mod groups;
pub mod ideal_lab;
pub mod linalg;
pub mod proof_replay;
pub mod scalars;
pub mod twisted_action;

pub use coeff_algebra::{AlgElement, BlockShape};
pub use conv_algebra::ConvElement;
pub use groups::FiniteGroup;
pub use linalg::Matrix;
pub use scalars::{CycScalar, Rational};
pub use twisted_action::{AutoMap, Cocycle, TwistedSystem};
