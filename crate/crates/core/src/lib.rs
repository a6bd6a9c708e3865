//! Structure and colouring of (C4, P7 or fork⁺, bull or hammer)-free graphs.
//!
//! The pipeline splits a graph along clique cutsets, peels universal
//! cliques off each atom, recognises the remaining core as a complete graph
//! or a clique blowup of a small catalog of triangle-free quotients, and
//! colours that blowup within the binding function of its class.

pub mod catalog;
pub mod coloring;
pub mod decompose;
pub mod graph;
pub mod io;
pub mod patterns;
pub mod recognizer;
pub mod testkit;

pub use catalog::CatalogId;
pub use coloring::{color, BoundName, Coloring};
pub use decompose::{decompose, DecompositionTree};
pub use graph::{Graph, VertexSet};
pub use patterns::{classify, ClassLabel, GraphClass, Pattern};
pub use recognizer::{recognize_core, verify_structure_theorem, CoreKind, Verdict};
