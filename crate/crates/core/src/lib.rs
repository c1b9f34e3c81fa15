//! Finite orthocomplemented lattices built from experiment set-systems.
//!
//! - [`lattice`]: the order, meets, joins, complements, covers and atoms.
//! - [`checks`]: exhaustive law checkers with replayable witnesses.
//! - [`model`]: compiles experiments with disjoint supports into the
//!   horizontal sum of their event algebras.
//! - [`hilbert`]: subspace arithmetic and the embedding check into a complex
//!   inner-product space.
//! - [`text`]: the line-oriented lattice, model and assignment formats.

pub mod catalog;
pub mod checks;
pub mod hilbert;
pub mod lattice;
pub mod model;
pub mod text;

pub use checks::{
    check, compatible, full_report, replay, CheckOptions, Classification, FullReport, Law,
    Property, PropertyReport, Verdict, Witness, WitnessPolicy,
};
pub use hilbert::{Assignment, EmbedError, Subspace};
pub use lattice::{
    build_lattice, build_plain_lattice, CoverRelation, Elem, LatticeError, OrthoLattice,
};
pub use model::{ExperimentModel, ModelError};
