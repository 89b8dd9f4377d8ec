//! Rigid-body superposition and the scores built on it.

mod score;
mod superpose;

pub use score::{best_ligand_rmsd, ligand_rmsd, normalize_score, LigandRmsdScore};
pub use superpose::{apply, centroid, kabsch, rmsd, Superposition};
