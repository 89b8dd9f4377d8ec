//! Structure acquisition: fetch and cache PDB files, parse them, and turn
//! HETATM groups into ligand graphs.

mod bonds;
mod element;
mod fetch;
mod ligand;
mod pairs;
mod pdb;

pub use bonds::{perceive_bonds, BOND_TOLERANCE};
pub use element::Element;
pub use fetch::{
    fetch_structure, FetchConfig, StructureStore, CACHE_DIR_ENV, DEFAULT_BASE_URL, DEFAULT_URL_TEMPLATE,
};
pub use ligand::{extract_ligands, LigandFilter, LigandKey, MolecularGraph};
pub use pairs::{normalize_ids, unique_pairs, PairTask};
pub use pdb::{parse_pdb, write_pdb, Atom, PdbId, Structure};
