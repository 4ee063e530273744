//! Decision procedure for the intuitionistic modal logic FIK.
//!
//! The crate implements a cumulative, set-based bi-nested sequent calculus
//! with saturation and loop blocking, extracts finite bi-relational
//! countermodels from failed proof searches, and ships two independent
//! cross-checks: a brute-force Kripke oracle and a Hilbert derivation checker.
//!
//! ```
//! use fik_core::{prove, Formula, Verdict};
//!
//! let wcd = Formula::parse("[](p \\/ q) -> ((<>p -> []q) -> []q)").unwrap();
//! assert_eq!(prove(&wcd).unwrap().verdict(), Verdict::Provable);
//! ```
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod calculus;
pub mod countermodel;
pub mod formula;
pub mod hilbert;
pub mod kripke;
mod parse;
pub mod sequent;

pub use calculus::{
    prove, prove_sequent, prove_with, Derivation, LeafStatus, ProofResult, ProveError, ProveOptions,
    RuleId, RuleInstance, Stats, Verdict,
};
pub use countermodel::{extract_model, verify_countermodel, ExtractionReport, Verification};
pub use formula::{Formula, ParseError};
pub use hilbert::{check_derivation, match_axiom, AxiomSchema, HilbertDerivation, Justification};
pub use kripke::{enumerate_models, find_countermodel_bruteforce, Model, Violation};
pub use sequent::{Address, BlockKind, Sequent, Succedent};
