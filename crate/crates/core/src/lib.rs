//! Classification engine for saddle-focus singularities of integrable
//! Hamiltonian systems with three degrees of freedom.
//!
//! A singularity is represented as a simple minimal model
//! `(V × F_n)/Z_k`: a saddle atom `V` (an [`atom::FGraph`]), a focus
//! singularity `F_n`, and a cyclic group acting diagonally.
//!
//! * [`permgroup`]: permutations and small permutation groups.
//! * [`atom`]: f-graphs, symmetries, canonical forms, enumeration, names.
//! * [`focus`]: focus singularities and their finite-order automorphisms.
//! * [`model`]: almost direct products, reduction and invariants.
//! * [`classify`]: catalogs of all models of a given complexity.

pub mod atom;
pub mod classify;
pub mod error;
pub mod focus;
pub mod model;
pub mod permgroup;

pub use error::{AtlasError, Result};
