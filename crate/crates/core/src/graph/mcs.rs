//! Maximum common induced subgraph and the Tanimoto index.

use serde::{Deserialize, Serialize};

use super::clique::max_clique;
use super::iso::VertexMapping;
use super::product::modular_product;
use crate::ingest::MolecularGraph;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchKind {
    Isomorphic,
    CommonSubgraph,
    NoOverlap,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchOutcome {
    pub kind: MatchKind,
    /// All isomorphisms, or the single best common-subgraph correspondence.
    pub mappings: Vec<VertexMapping>,
    pub mcs_size: usize,
    pub tanimoto: f64,
}

impl MatchOutcome {
    pub fn isomorphic(a: &MolecularGraph, mappings: Vec<VertexMapping>) -> Self {
        MatchOutcome {
            kind: MatchKind::Isomorphic,
            mappings,
            mcs_size: a.vertex_count(),
            tanimoto: 1.0,
        }
    }
}

/// Matched size over the size of the union: `m / (n1 + n2 - m)`.
pub fn tanimoto(m: usize, n1: usize, n2: usize) -> Result<f64> {
    if n1 == 0 || n2 == 0 || m > n1.min(n2) {
        return Err(Error::InvalidMatchSize { m, n1, n2 });
    }
    Ok(m as f64 / (n1 + n2 - m) as f64)
}

/// Maximum common induced subgraph via a maximum clique of the modular product.
pub fn find_mcs(a: &MolecularGraph, b: &MolecularGraph) -> MatchOutcome {
    let product = modular_product(a, b);
    let clique = max_clique(&product);
    let m = clique.len();
    let (n1, n2) = (a.vertex_count(), b.vertex_count());
    let tanimoto = tanimoto(m, n1, n2).expect("clique size bounded by both graphs");
    if m == 0 {
        return MatchOutcome {
            kind: MatchKind::NoOverlap,
            mappings: Vec::new(),
            mcs_size: 0,
            tanimoto: 0.0,
        };
    }
    let mapping = VertexMapping::new(clique.iter().map(|&v| product.pair(v)).collect());
    let kind = if m == n1 && m == n2 {
        MatchKind::Isomorphic
    } else {
        MatchKind::CommonSubgraph
    };
    MatchOutcome {
        kind,
        mappings: vec![mapping],
        mcs_size: m,
        tanimoto,
    }
}
