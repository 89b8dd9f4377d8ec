//! Enumeration of all label-preserving graph isomorphisms.

use serde::{Deserialize, Serialize};

use crate::ingest::MolecularGraph;

/// Vertex correspondence `(index in A, index in B)`, sorted by the A index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexMapping {
    pub pairs: Vec<(usize, usize)>,
}

impl VertexMapping {
    pub fn new(mut pairs: Vec<(usize, usize)>) -> Self {
        pairs.sort_unstable();
        VertexMapping { pairs }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

fn degree_profile(g: &MolecularGraph) -> Vec<(crate::ingest::Element, usize)> {
    let mut p: Vec<_> = (0..g.vertex_count())
        .map(|v| (g.element(v), g.degree(v)))
        .collect();
    p.sort_unstable();
    p
}

/// Every bijection `V(A) -> V(B)` preserving element labels and preserving
/// bonds and non-bonds. Empty when the graphs are not isomorphic.
pub fn find_isomorphisms(a: &MolecularGraph, b: &MolecularGraph) -> Vec<VertexMapping> {
    let n = a.vertex_count();
    if n != b.vertex_count()
        || a.edges().len() != b.edges().len()
        || a.element_counts() != b.element_counts()
        || degree_profile(a) != degree_profile(b)
    {
        return Vec::new();
    }

    // candidate lists by (element, degree)
    let candidates: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| a.element(i) == b.element(j) && a.degree(i) == b.degree(j))
                .collect()
        })
        .collect();

    // connectivity-first order: the next A vertex is the one with most
    // already-ordered neighbours, then fewest candidates, then lowest index
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    let mut links = vec![0usize; n];
    for _ in 0..n {
        let next = (0..n)
            .filter(|&v| !placed[v])
            .min_by_key(|&v| (std::cmp::Reverse(links[v]), candidates[v].len(), v))
            .expect("an unplaced vertex remains");
        placed[next] = true;
        order.push(next);
        for &w in a.neighbors(next) {
            links[w] += 1;
        }
    }

    let mut state = Backtrack {
        a,
        b,
        order: &order,
        candidates: &candidates,
        forward: vec![usize::MAX; n],
        used: vec![false; n],
        found: Vec::new(),
    };
    state.extend(0);
    state.found
}

struct Backtrack<'a> {
    a: &'a MolecularGraph,
    b: &'a MolecularGraph,
    order: &'a [usize],
    candidates: &'a [Vec<usize>],
    forward: Vec<usize>,
    used: Vec<bool>,
    found: Vec<VertexMapping>,
}

impl Backtrack<'_> {
    fn extend(&mut self, depth: usize) {
        if depth == self.order.len() {
            self.found.push(VertexMapping::new(
                self.forward.iter().copied().enumerate().collect(),
            ));
            return;
        }
        let i = self.order[depth];
        for &j in &self.candidates[i] {
            if self.used[j] || !self.consistent(depth, i, j) {
                continue;
            }
            self.forward[i] = j;
            self.used[j] = true;
            self.extend(depth + 1);
            self.used[j] = false;
            self.forward[i] = usize::MAX;
        }
    }

    fn consistent(&self, depth: usize, i: usize, j: usize) -> bool {
        self.order[..depth].iter().all(|&p| {
            let q = self.forward[p];
            self.a.has_edge(i, p) == self.b.has_edge(j, q)
        })
    }
}
