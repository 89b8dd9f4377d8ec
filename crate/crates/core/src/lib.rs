//! Binding-site similarity (BSS) pipeline.
//!
//! For every unique pair of protein structures the pipeline extracts the
//! bound ligands, aligns the binding sites around them, matches the ligand
//! graphs (all isomorphisms, or a maximum common induced subgraph when no
//! isomorphism exists), and scores how well the site superposition places
//! the ligands. Pairs are distributed over an in-process task farm with
//! broadcast or scatter-gather semantics at two parallelization levels.

pub mod error;
pub mod farm;
pub mod geometry;
pub mod graph;
pub mod ingest;
pub mod pipeline;
pub mod site;
pub mod synth;

pub use error::{Error, Result};

/// Cartesian coordinate in Ångström.
pub type Vec3 = nalgebra::Vector3<f64>;
