use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::geometry::centroid;
use crate::ingest::{LigandKey, MolecularGraph, PdbId, Structure};
use crate::{Error, Result, Vec3};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SiteSource {
    pub pdb_id: PdbId,
    pub ligand: LigandKey,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiteResidue {
    pub residue_name: String,
    pub chain: char,
    pub residue_seq: i32,
    pub ca: Vec3,
}

/// Cα representation of the residues lining one ligand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BindingSite {
    pub source: SiteSource,
    pub residues: Vec<SiteResidue>,
    pub centroid: Vec3,
    pub protein_centroid: Vec3,
}

impl BindingSite {
    /// Assemble a site from explicit residues; `protein_centroid` is the
    /// centroid of the whole protein the site belongs to.
    pub fn new(source: SiteSource, residues: Vec<SiteResidue>, protein_centroid: Vec3) -> Result<Self> {
        if residues.is_empty() {
            return Err(Error::EmptyBindingSite);
        }
        let cas: Vec<Vec3> = residues.iter().map(|r| r.ca).collect();
        Ok(BindingSite {
            source,
            centroid: centroid(&cas),
            residues,
            protein_centroid,
        })
    }

    pub fn len(&self) -> usize {
        self.residues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    pub fn ca_positions(&self) -> Vec<Vec3> {
        self.residues.iter().map(|r| r.ca).collect()
    }

    /// Largest Cα–Cα distance.
    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, a) in self.residues.iter().enumerate() {
            for b in &self.residues[i + 1..] {
                d = d.max((a.ca - b.ca).norm());
            }
        }
        d
    }
}

#[derive(Default)]
struct ResidueScan {
    name: String,
    ca: Option<Vec3>,
    near: bool,
}

/// Residues with a Cα and at least one non-hydrogen ATOM-record atom within
/// `cutoff` of a ligand heavy atom, ordered by `(chain, residue_seq)`.
pub fn extract_binding_site(
    structure: &Structure,
    ligand: &MolecularGraph,
    cutoff: f64,
) -> Result<BindingSite> {
    if cutoff.is_nan() || cutoff <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "site cutoff {cutoff} must be positive"
        )));
    }
    let cutoff_sq = cutoff * cutoff;
    let mut residues: BTreeMap<(char, i32), ResidueScan> = BTreeMap::new();
    let mut all_ca = Vec::new();

    for atom in structure.atoms.iter().filter(|a| !a.is_hetatm) {
        let scan = residues
            .entry((atom.chain, atom.residue_seq))
            .or_insert_with(|| ResidueScan {
                name: atom.residue_name.clone(),
                ..ResidueScan::default()
            });
        if atom.is_alpha_carbon() && scan.ca.is_none() {
            scan.ca = Some(atom.position);
            all_ca.push(atom.position);
        }
        if !scan.near
            && !atom.element.is_hydrogen()
            && ligand
                .positions()
                .iter()
                .any(|p| (p - atom.position).norm_squared() <= cutoff_sq)
        {
            scan.near = true;
        }
    }

    let lining: Vec<SiteResidue> = residues
        .into_iter()
        .filter(|(_, s)| s.near)
        .filter_map(|((chain, residue_seq), s)| {
            Some(SiteResidue {
                residue_name: s.name,
                chain,
                residue_seq,
                ca: s.ca?,
            })
        })
        .collect();
    if lining.is_empty() {
        return Err(Error::EmptyBindingSite);
    }
    let source = SiteSource {
        pdb_id: structure.pdb_id.clone(),
        ligand: ligand.key.clone(),
    };
    BindingSite::new(source, lining, centroid(&all_ca))
}
