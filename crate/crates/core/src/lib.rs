//! Selecting XML subtrees to materialize under a storage budget.
//!
//! A document is modelled as an [`AdTree`]; choosing a set of nodes to
//! materialize saves access cost for every node whose whole subtree ends up
//! stored. [`exact`] holds the exact solvers, [`fptas`] the approximation
//! scheme, [`ingest`] builds instances from documents and [`genbench`]
//! generates and compares instances.

pub mod error;
pub mod exact;
pub mod fptas;
pub mod genbench;
pub mod ingest;
pub mod model;

pub use error::{Error, Result};
pub use exact::{brute_force, dp_exact, KnapsackInstance};
pub use fptas::{approximate, Epsilon};
pub use model::{AdNode, AdTree, Instance, NodeId, Selection, SizeCheck, Solution};
