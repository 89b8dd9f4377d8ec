use serde::{Deserialize, Serialize};

use super::superpose::{apply, rmsd, superpose, Superposition};
use crate::graph::VertexMapping;
use crate::{Error, Result, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LigandRmsdScore {
    /// Ligand B carried by the site superposition, measured against ligand A.
    pub observed_rmsd: f64,
    /// Best achievable RMSD superposing the two ligands directly.
    pub optimal_rmsd: f64,
    /// `observed - optimal`; zero when the site alignment places the ligand
    /// as well as any rigid motion could.
    pub ligand_rmsd: f64,
}

pub fn ligand_rmsd(
    ligand_a: &[Vec3],
    ligand_b: &[Vec3],
    site: &Superposition,
    mapping: &VertexMapping,
) -> Result<LigandRmsdScore> {
    if mapping.len() < 3 {
        return Err(Error::InsufficientCorrespondence(mapping.len()));
    }
    let (p, q): (Vec<Vec3>, Vec<Vec3>) = mapping
        .pairs
        .iter()
        .map(|&(i, j)| (ligand_a[i], ligand_b[j]))
        .unzip();
    let observed_rmsd = rmsd(&p, &apply(site, &q))?;
    let optimal_rmsd = superpose(&p, &q)?.rmsd;
    Ok(LigandRmsdScore {
        observed_rmsd,
        optimal_rmsd,
        ligand_rmsd: observed_rmsd - optimal_rmsd,
    })
}

/// Scores every mapping and keeps the one with the smallest observed RMSD
/// (first wins on ties). Mappings shorter than three pairs are skipped.
pub fn best_ligand_rmsd(
    ligand_a: &[Vec3],
    ligand_b: &[Vec3],
    site: &Superposition,
    mappings: &[VertexMapping],
) -> Option<(usize, LigandRmsdScore)> {
    let mut best: Option<(usize, LigandRmsdScore)> = None;
    for (k, m) in mappings.iter().enumerate() {
        let Ok(score) = ligand_rmsd(ligand_a, ligand_b, site, m) else {
            continue;
        };
        if best.is_none_or(|(_, b)| score.observed_rmsd < b.observed_rmsd) {
            best = Some((k, score));
        }
    }
    best
}

/// Target-query score divided by the query self-score.
pub fn normalize_score(target_query: f64, query_query: f64) -> Result<f64> {
    if query_query.is_nan() || query_query <= 0.0 {
        return Err(Error::InvalidSelfScore(query_query));
    }
    Ok(target_query / query_query)
}
