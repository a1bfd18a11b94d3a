//! Development-model semantics for sorted first-order modal logic.
//!
//! A development model is a directed frame of states, each carrying a finite
//! structure, such that static predicates only grow along the frame and
//! dynamic tuples manifest as one static tuple per state. The crate builds
//! and validates such models, model-checks formulas over them by brute force
//! and runs the finite-scale case studies built on top (forcing, revision
//! truth, dynamic rationals, types, reflection).

pub mod checker;
pub mod devmodel;
pub mod eval;
pub mod forcing;
pub mod fuzz;
pub mod logic;
pub mod omega;
pub mod reals;
pub mod revision;
pub mod structures;
pub mod types;
