//! Compatibility (product) graphs over vertex pairs.

use std::fmt::Write as _;

use crate::ingest::MolecularGraph;

/// Fixed-capacity bitset used for adjacency rows and candidate sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(capacity: usize) -> Self {
        BitSet {
            words: vec![0; capacity.div_ceil(64)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut s = BitSet::new(len);
        for i in 0..len {
            s.insert(i);
        }
        s
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn intersection(&self, other: &BitSet) -> BitSet {
        BitSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn difference_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + bit)
            })
        })
    }
}

/// Undirected graph whose vertices are correspondence pairs `(i, j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CompatGraph {
    pairs: Vec<(usize, usize)>,
    adjacency: Vec<BitSet>,
}

impl CompatGraph {
    pub fn new(pairs: Vec<(usize, usize)>) -> Self {
        let n = pairs.len();
        CompatGraph {
            pairs,
            adjacency: vec![BitSet::new(n); n],
        }
    }

    /// Build from a vertex list and a symmetric predicate evaluated once per
    /// unordered vertex pair.
    pub fn from_predicate(
        pairs: Vec<(usize, usize)>,
        mut connected: impl FnMut((usize, usize), (usize, usize)) -> bool,
    ) -> Self {
        let mut g = CompatGraph::new(pairs);
        for u in 0..g.pairs.len() {
            for v in u + 1..g.pairs.len() {
                if connected(g.pairs[u], g.pairs[v]) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert_ne!(u, v, "compatibility graphs have no self-loops");
        self.adjacency[u].insert(v);
        self.adjacency[v].insert(u);
    }

    pub fn vertex_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(BitSet::len).sum::<usize>() / 2
    }

    pub fn pair(&self, v: usize) -> (usize, usize) {
        self.pairs[v]
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].contains(v)
    }

    pub fn neighbors(&self, v: usize) -> &BitSet {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// One line per vertex: `index (i,j): neighbour indices`.
    pub fn to_adjacency_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# vertices {} edges {}",
            self.vertex_count(),
            self.edge_count()
        );
        for (v, &(i, j)) in self.pairs.iter().enumerate() {
            let _ = write!(out, "{v} ({i},{j}):");
            for u in self.adjacency[v].iter() {
                let _ = write!(out, " {u}");
            }
            out.push('\n');
        }
        out
    }
}

/// Modular product of two molecular graphs under induced-subgraph semantics.
///
/// Vertices are element-compatible pairs `(i, j)`; `(i, j)` and `(k, l)` are
/// adjacent iff `i != k`, `j != l` and `i–k` is a bond exactly when `j–l` is.
pub fn modular_product(a: &MolecularGraph, b: &MolecularGraph) -> CompatGraph {
    let mut pairs = Vec::new();
    for i in 0..a.vertex_count() {
        for j in 0..b.vertex_count() {
            if a.element(i) == b.element(j) {
                pairs.push((i, j));
            }
        }
    }
    CompatGraph::from_predicate(pairs, |(i, j), (k, l)| {
        i != k && j != l && a.has_edge(i, k) == b.has_edge(j, l)
    })
}
