//! Strong arc decompositions and arc-disjoint branchings of split digraphs.
//!
//! A split digraph has its vertices partitioned into an independent set `V1`
//! and a set `V2` inducing a semicomplete digraph. The main entry point is
//! [`split_sad::decompose_split`], which partitions the arcs of a 2-arc-strong
//! split digraph whose `V1` vertices have in- and out-degree at least 3 into
//! two classes that each span a strong subdigraph.
//!
//! Every construction is checked before it is returned; [`testkit`] carries
//! brute-force oracles and instance generators for cross-checking.

pub mod branchings;
pub mod connectivity;
pub mod error;
pub mod graph;
pub mod nice;
pub mod semicomplete;
pub mod split_sad;
pub mod splitting;
pub mod testkit;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{validate_split, Arc, ArcId, Digraph, Origin, SplitDigraph, VertexId};
pub use semicomplete::StrongArcDecomposition;
