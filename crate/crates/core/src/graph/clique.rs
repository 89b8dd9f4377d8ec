//! Exact maximum clique by branch and bound with a greedy-colouring bound.

use super::product::{BitSet, CompatGraph};

/// A maximum-cardinality clique, as sorted vertex indices.
///
/// Vertices are expanded in a fixed order (degree descending, index
/// ascending). Among equally large cliques reached by that order the
/// lexicographically smallest index set is kept, so the result is a pure
/// function of the graph.
pub fn max_clique(g: &CompatGraph) -> Vec<usize> {
    let n = g.vertex_count();
    if n == 0 {
        return Vec::new();
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&u, &v| g.degree(v).cmp(&g.degree(u)).then(u.cmp(&v)));
    let mut position = vec![0; n];
    for (k, &v) in order.iter().enumerate() {
        position[v] = k;
    }
    // adjacency re-indexed so that bit order is expansion order
    let adjacency: Vec<BitSet> = order
        .iter()
        .map(|&v| {
            let mut row = BitSet::new(n);
            for u in g.neighbors(v).iter() {
                row.insert(position[u]);
            }
            row
        })
        .collect();

    let mut search = Search {
        adjacency: &adjacency,
        order: &order,
        current: Vec::new(),
        best: Vec::new(),
    };
    search.expand(BitSet::full(n));
    let mut best: Vec<usize> = search.best.iter().map(|&k| order[k]).collect();
    best.sort_unstable();
    best
}

struct Search<'a> {
    adjacency: &'a [BitSet],
    order: &'a [usize],
    current: Vec<usize>,
    best: Vec<usize>,
}

impl Search<'_> {
    fn expand(&mut self, mut candidates: BitSet) {
        let (vertices, colors) = self.color(&candidates);
        for idx in (0..vertices.len()).rev() {
            if self.current.len() + colors[idx] <= self.best.len() {
                return;
            }
            let v = vertices[idx];
            self.current.push(v);
            let next = candidates.intersection(&self.adjacency[v]);
            if next.is_empty() {
                self.offer();
            } else {
                self.expand(next);
            }
            self.current.pop();
            candidates.remove(v);
        }
    }

    /// Greedy sequential colouring; returns vertices sorted by colour class.
    fn color(&self, candidates: &BitSet) -> (Vec<usize>, Vec<usize>) {
        let mut vertices = Vec::with_capacity(candidates.len());
        let mut colors = Vec::with_capacity(candidates.len());
        let mut uncolored = candidates.clone();
        let mut color = 0;
        while !uncolored.is_empty() {
            color += 1;
            let mut class = uncolored.clone();
            while let Some(v) = class.first() {
                class.remove(v);
                class.difference_with(&self.adjacency[v]);
                uncolored.remove(v);
                vertices.push(v);
                colors.push(color);
            }
        }
        (vertices, colors)
    }

    fn offer(&mut self) {
        if self.current.len() > self.best.len() {
            self.best = self.current.clone();
        } else if self.current.len() == self.best.len() {
            let key = |c: &[usize]| {
                let mut v: Vec<usize> = c.iter().map(|&k| self.order[k]).collect();
                v.sort_unstable();
                v
            };
            if key(&self.current) < key(&self.best) {
                self.best = self.current.clone();
            }
        }
    }
}
