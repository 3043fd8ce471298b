//! Switch-centric data-centre network topologies built from bipartite
//! graphs and transversal designs, with constructive disjoint-path routing
//! and independent verification of every routing guarantee.

pub mod bigraph;
pub mod construct;
pub mod dcn;
pub mod error;
pub mod field;
pub mod routing;
pub mod sweeps;
pub mod tdesign;
pub mod verify;

pub use bigraph::{AltPath, BipartiteGraph, DegreeProfile, Elem};
pub use construct::{ConstructedGraph, Variant};
pub use error::{Error, Result};
pub use tdesign::TransversalDesign;
