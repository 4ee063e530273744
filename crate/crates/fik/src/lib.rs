//! File formats, command-line driver and tooling around [`fik_core`].
//!
//! - [`model_file`]: JSON model documents read by `check-model` and written
//!   for countermodels.
//! - [`derivation_out`]: derivation trees as indented text or JSON.
//! - [`dot`]: Graphviz rendering of models.
//! - [`hilbert_file`]: line-oriented Hilbert derivation files.
//! - [`corpus`]: annotated formula corpora and the benchmark runner.
//! - [`random`]: seeded random formulas and sequents.
//! - [`cli`]: the `fik` binary.

pub mod cli;
pub mod corpus;
pub mod derivation_out;
pub mod dot;
pub mod hilbert_file;
pub mod model_file;
pub mod random;

pub use fik_core;
