//! Exact Weisfeiler-Leman machinery for graphs and step graphons.
//!
//! Everything here works over exact rationals:
//!
//! - [`graph`]: multigraphs, step graphons and `[n]^k` tuple indexing.
//! - [`bilabeled`]: bi-labeled graphs, their generator families, and terms.
//! - [`treedecomp`]: tree decompositions, exact treewidth, and compilation of
//!   tree-decomposed multigraphs into terms.
//! - [`operators`]: homomorphism functions, densities and graphon operators.
//! - [`refinement`]: color refinement, oblivious k-WL and simple k-WL with
//!   canonical fingerprints.
//! - [`lp`]: exact feasibility of the linear systems that characterize
//!   indistinguishability.
//! - [`enumeration`]: small pattern enumeration and distinguisher search.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bilabeled;
pub mod enumeration;
pub mod error;
pub mod graph;
pub mod lp;
pub mod matrix;
pub mod operators;
pub mod rational;
pub mod refinement;
pub mod treedecomp;

pub use error::{Error, Result};
pub use graph::{KTupleIndex, MultiGraph, StepGraphon, TupleSpace};
pub use rational::Rational;
