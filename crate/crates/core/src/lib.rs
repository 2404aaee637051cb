//! Persistent homology of graph filtrations over directed acyclic graphs.
//!
//! A graph filtration assigns a subcomplex of one ambient simplicial complex
//! to every vertex of a DAG, with inclusions along edges. This crate computes
//!
//! * rank invariants for every single-source/single-sink subgraph
//!   ([`ssss::all_pairs_rank`]), including standard persistence on paths and
//!   a lattice variant for multifiltrations;
//! * the persistent homology rank of an arbitrary connected subgraph
//!   ([`subgraph::persistence_rank`]) together with a brute-force oracle;
//! * homology modules over the DAG, module dimensions, persistence diagrams
//!   and bottleneck distances ([`gmodule`]);
//! * the subsample-persistence and shape-comparison pipelines on point
//!   clouds ([`pipelines`]).
//!
//! Coefficients are exact: arbitrary-precision rationals or a prime field.

pub mod dagmodel;
pub mod error;
pub mod exactlinalg;
pub mod field;
pub mod fixtures;
pub mod gmodule;
pub mod parallel;
pub mod pipelines;
pub mod simplicial;
mod sparse;
pub mod ssss;
pub mod subgraph;

pub use error::{Error, Result};
pub use field::{Field, FieldSpec, PrimeField, Rationals};
