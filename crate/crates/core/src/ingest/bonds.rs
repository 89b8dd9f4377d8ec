//! Bond perception for ligand atom groups.

use std::collections::{BTreeSet, HashMap};

use super::pdb::Atom;

/// Slack added to the sum of covalent radii.
pub const BOND_TOLERANCE: f64 = 0.4;

/// Edges between indices into `atoms`, as normalized `(low, high)` pairs.
///
/// CONECT pairs joining two atoms of the group win outright; otherwise an
/// edge joins every heavy-atom pair within `r1 + r2 + 0.4 Å`. Hydrogens
/// never receive edges.
pub fn perceive_bonds(atoms: &[Atom], conect: &[(i64, i64)]) -> BTreeSet<(usize, usize)> {
    let by_serial: HashMap<i64, usize> = atoms
        .iter()
        .enumerate()
        .filter(|(_, a)| !a.element.is_hydrogen())
        .map(|(i, a)| (a.serial, i))
        .collect();

    let explicit: BTreeSet<(usize, usize)> = conect
        .iter()
        .filter_map(|(a, b)| Some((*by_serial.get(a)?, *by_serial.get(b)?)))
        .filter(|(i, j)| i != j)
        .map(|(i, j)| (i.min(j), i.max(j)))
        .collect();
    if !explicit.is_empty() {
        return explicit;
    }

    let mut edges = BTreeSet::new();
    for i in 0..atoms.len() {
        if atoms[i].element.is_hydrogen() {
            continue;
        }
        for j in i + 1..atoms.len() {
            if atoms[j].element.is_hydrogen() {
                continue;
            }
            let limit =
                atoms[i].element.covalent_radius() + atoms[j].element.covalent_radius() + BOND_TOLERANCE;
            if (atoms[i].position - atoms[j].position).norm() <= limit {
                edges.insert((i, j));
            }
        }
    }
    edges
}
