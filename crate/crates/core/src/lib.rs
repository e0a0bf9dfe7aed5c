//! Basis exchange sequences for paving matroids.
//!
//! Given two tuples of bases of a paving matroid with the same multiset
//! union, the solver produces an explicit sequence of symmetric exchanges
//! connecting them. The construction relaxes stressed hyperplanes down to
//! a uniform matroid, solves there, and lifts the sequence back one
//! relaxation at a time. A brute-force oracle checks the results on small
//! instances.

pub mod catalog;
pub mod error;
pub mod lemmas;
pub mod matroid;
pub mod oracle;
pub mod relaxation;
pub mod sequence;
pub mod set;
pub mod solver;
pub mod star;
mod walk;

pub use error::{Error, Result};
pub use matroid::{Matroid, MinorMap, Validation};
pub use relaxation::{relax, relaxation_trace, RelaxationTrace};
pub use sequence::{
    apply_step, normalize_sequence, validate_sequence, BasisTuple, ExchangeSequence, ExchangeStep,
    Fault, Multiset, SequenceReport,
};
pub use set::ElementSet;
pub use solver::{LiftState, Solver, SolverConfig};
pub use star::StarContext;
