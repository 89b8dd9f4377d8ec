//! Ligand extraction: HETATM residue groups as element-labelled graphs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::bonds::perceive_bonds;
use super::element::Element;
use super::pdb::{Atom, Structure};
use crate::{Error, Result, Vec3};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LigandKey {
    pub residue_name: String,
    pub chain: char,
    pub residue_seq: i32,
}

impl fmt::Display for LigandKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.residue_name, self.chain, self.residue_seq)
    }
}

/// Element-labelled, undirected simple graph with one vertex per heavy atom.
#[derive(Debug, Clone, PartialEq)]
pub struct MolecularGraph {
    pub key: LigandKey,
    elements: Vec<Element>,
    positions: Vec<Vec3>,
    edges: BTreeSet<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl MolecularGraph {
    pub fn new(
        key: LigandKey,
        atoms: Vec<(Element, Vec3)>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidGraph("no vertices".into()));
        }
        let n = atoms.len();
        let mut set = BTreeSet::new();
        let mut adjacency = vec![Vec::new(); n];
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!("edge ({a}, {b}) out of range")));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop on {a}")));
            }
            if set.insert((a.min(b), a.max(b))) {
                adjacency[a].push(b);
                adjacency[b].push(a);
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let (elements, positions) = atoms.into_iter().unzip();
        Ok(MolecularGraph {
            key,
            elements,
            positions,
            edges: set,
            adjacency,
        })
    }

    /// Graph without meaningful coordinates, for topology-only work.
    pub fn from_topology(
        elements: &[Element],
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let key = LigandKey {
            residue_name: "UNL".into(),
            chain: ' ',
            residue_seq: 0,
        };
        let atoms = elements.iter().map(|&e| (e, Vec3::zeros())).collect();
        MolecularGraph::new(key, atoms, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, v: usize) -> Element {
        self.elements[v]
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn positions(&self) -> &[Vec3] {
        &self.positions
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn element_counts(&self) -> BTreeMap<Element, usize> {
        let mut counts = BTreeMap::new();
        for &e in &self.elements {
            *counts.entry(e).or_insert(0) += 1;
        }
        counts
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LigandFilter {
    /// Residue names never treated as ligands.
    pub exclude: Vec<String>,
    pub min_heavy_atoms: usize,
}

impl Default for LigandFilter {
    fn default() -> Self {
        LigandFilter {
            exclude: vec!["HOH".to_string()],
            min_heavy_atoms: 6,
        }
    }
}

/// Group HETATM records by `(residue_name, chain, residue_seq)`, drop
/// excluded and undersized groups, and build one graph per survivor.
/// Output is ordered by `(chain, residue_seq)`.
pub fn extract_ligands(structure: &Structure, filter: &LigandFilter) -> Vec<MolecularGraph> {
    let mut groups: BTreeMap<(char, i32, String), Vec<&Atom>> = BTreeMap::new();
    for atom in structure.atoms.iter().filter(|a| a.is_hetatm) {
        if filter
            .exclude
            .iter()
            .any(|x| x.eq_ignore_ascii_case(&atom.residue_name))
        {
            continue;
        }
        groups
            .entry((atom.chain, atom.residue_seq, atom.residue_name.clone()))
            .or_default()
            .push(atom);
    }

    let mut ligands = Vec::new();
    for ((chain, residue_seq, residue_name), atoms) in groups {
        let mut heavy: Vec<Atom> = atoms
            .into_iter()
            .filter(|a| !a.element.is_hydrogen())
            .cloned()
            .collect();
        if heavy.len() < filter.min_heavy_atoms {
            continue;
        }
        heavy.sort_by(|a, b| a.serial.cmp(&b.serial).then_with(|| a.name.cmp(&b.name)));
        let edges = perceive_bonds(&heavy, &structure.conect);
        let key = LigandKey {
            residue_name,
            chain,
            residue_seq,
        };
        let atoms = heavy.iter().map(|a| (a.element, a.position)).collect();
        ligands.push(MolecularGraph::new(key, atoms, edges).expect("perceived edges are in range"));
    }
    ligands
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::pdb::{parse_pdb, PdbId};

    fn het(serial: i64, res: &str, seq: i32, el: &str, x: f64) -> String {
        format!(
            "HETATM{serial:>5} {el:<3}  {res:>3} A{seq:>4}    {x:>8.3}{:>8.3}{:>8.3}  1.00  0.00          {el:>2}",
            0.0, 0.0
        )
    }

    fn structure(lines: &[String]) -> Structure {
        parse_pdb(&PdbId::parse("1tst").unwrap(), &lines.join("\n")).unwrap()
    }

    fn chain(res: &str, seq: i32, n: usize, first_serial: i64) -> Vec<String> {
        (0..n)
            .map(|i| het(first_serial + i as i64, res, seq, "C", 1.5 * i as f64))
            .collect()
    }

    #[test]
    fn water_only_yields_nothing() {
        let s = structure(&[het(1, "HOH", 1, "O", 0.0), het(2, "HOH", 2, "O", 5.0)]);
        assert!(extract_ligands(&s, &LigandFilter::default()).is_empty());
    }

    #[test]
    fn small_groups_are_dropped() {
        let s = structure(&chain("SO4", 5, 3, 1));
        assert!(extract_ligands(&s, &LigandFilter::default()).is_empty());
        let relaxed = LigandFilter {
            min_heavy_atoms: 3,
            ..LigandFilter::default()
        };
        assert_eq!(extract_ligands(&s, &relaxed).len(), 1);
    }

    #[test]
    fn chain_of_six_becomes_path_graph() {
        let s = structure(&chain("LIG", 10, 6, 1));
        let ligands = extract_ligands(&s, &LigandFilter::default());
        assert_eq!(ligands.len(), 1);
        let g = &ligands[0];
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.edges().len(), 5);
        assert_eq!(g.key.to_string(), "LIG:A:10");
    }

    #[test]
    fn output_order_and_atom_order_independence() {
        let mut lines = chain("LGB", 20, 6, 100);
        lines.extend(chain("LGA", 10, 7, 1));
        let a = extract_ligands(&structure(&lines), &LigandFilter::default());
        assert_eq!(a.len(), 2);
        assert_eq!(a[0].key.residue_seq, 10);
        assert_eq!(a[1].key.residue_seq, 20);

        lines.reverse();
        let b = extract_ligands(&structure(&lines), &LigandFilter::default());
        assert_eq!(a, b);
    }

    #[test]
    fn graph_constructor_validates() {
        assert!(MolecularGraph::from_topology(&[], []).is_err());
        assert!(MolecularGraph::from_topology(&[Element::C], [(0, 0)]).is_err());
        assert!(MolecularGraph::from_topology(&[Element::C], [(0, 1)]).is_err());
        let g = MolecularGraph::from_topology(&[Element::C, Element::O], [(0, 1), (1, 0)]).unwrap();
        assert_eq!(g.edges().len(), 1);
        assert!(g.has_edge(1, 0));
    }
}
