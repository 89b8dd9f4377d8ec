use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::pdb::PdbId;
use crate::{Error, Result};

/// One unordered protein pair, `id_a < id_b`, at position `index` of the
/// canonical pair order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PairTask {
    pub index: usize,
    pub id_a: PdbId,
    pub id_b: PdbId,
}

/// Normalize, deduplicate and sort raw ids.
pub fn normalize_ids<S: AsRef<str>>(ids: &[S]) -> Result<Vec<PdbId>> {
    let set: BTreeSet<PdbId> = ids
        .iter()
        .map(|s| PdbId::parse(s.as_ref()))
        .collect::<Result<_>>()?;
    if set.is_empty() {
        return Err(Error::NoIds);
    }
    Ok(set.into_iter().collect())
}

/// All `n(n-1)/2` unordered pairs in lexicographic `(id_a, id_b)` order.
pub fn unique_pairs<S: AsRef<str>>(ids: &[S]) -> Result<Vec<PairTask>> {
    let ids = normalize_ids(ids)?;
    let mut tasks = Vec::with_capacity(ids.len() * ids.len().saturating_sub(1) / 2);
    for (i, a) in ids.iter().enumerate() {
        for b in &ids[i + 1..] {
            tasks.push(PairTask {
                index: tasks.len(),
                id_a: a.clone(),
                id_b: b.clone(),
            });
        }
    }
    Ok(tasks)
}
