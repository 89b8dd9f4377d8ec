//! Ligand graph comparison: isomorphism enumeration and maximum common
//! induced subgraph through maximum clique on a modular product graph.

mod clique;
mod iso;
mod mcs;
mod product;

pub use clique::max_clique;
pub use iso::{find_isomorphisms, VertexMapping};
pub use mcs::{find_mcs, tanimoto, MatchKind, MatchOutcome};
pub use product::{modular_product, BitSet, CompatGraph};
