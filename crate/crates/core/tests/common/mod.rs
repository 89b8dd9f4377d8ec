#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use bss_core::ingest::{FetchConfig, PdbId, Structure, StructureStore};
use bss_core::synth;

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

/// Offline store over the committed fixture files.
pub fn store() -> StructureStore {
    StructureStore::new(FetchConfig::new(fixtures_dir()).offline(true))
}

pub fn load(id: &str) -> Arc<Structure> {
    store().load(&PdbId::parse(id).unwrap()).unwrap()
}

pub fn all_ids() -> Vec<&'static str> {
    synth::known_ids()
}

pub fn corpus_ids() -> Vec<&'static str> {
    synth::CORPUS_IDS.to_vec()
}
