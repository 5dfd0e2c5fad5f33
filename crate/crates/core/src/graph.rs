//! Minimal undirected unit-weight graph used by the Steiner subroutines and
//! the brute-force oracles. Adjacency lists are kept sorted so every traversal
//! is deterministic.

use std::collections::VecDeque;

/// Undirected simple graph over `0..n` with implicit unit edge weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitGraph {
    adj: Vec<Vec<usize>>,
    n_edges: usize,
}

impl UnitGraph {
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut pairs: Vec<(usize, usize)> = edges
            .into_iter()
            .filter(|&(u, v)| u != v && u < n && v < n)
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &pairs {
            adj[u].push(v);
            adj[v].push(u);
        }
        for nb in &mut adj {
            nb.sort_unstable();
        }
        UnitGraph {
            adj,
            n_edges: pairs.len(),
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.n_edges);
        for (u, nb) in self.adj.iter().enumerate() {
            for &v in nb {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Hop-count BFS from `src`: `(dist, parent)` with `None` for unreachable
    /// nodes. Neighbors are scanned in ascending order, so the parent of a
    /// node is the first of its minimum-distance predecessors discovered.
    pub fn bfs(&self, src: usize) -> (Vec<Option<u32>>, Vec<Option<usize>>) {
        let mut dist = vec![None; self.n()];
        let mut parent = vec![None; self.n()];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].expect("queued nodes have distances");
            for &v in self.neighbors(u) {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    parent[v] = Some(u);
                    queue.push_back(v);
                }
            }
        }
        (dist, parent)
    }

    /// True when every listed node is reachable from the first one.
    pub fn all_connected(&self, nodes: &[usize]) -> bool {
        let Some(&start) = nodes.first() else {
            return true;
        };
        let (dist, _) = self.bfs(start);
        nodes.iter().all(|&u| dist[u].is_some())
    }
}

/// Union-find over `0..n` with path halving.
#[derive(Debug, Clone)]
pub(crate) struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already in the same set.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bfs_distances_on_path() {
        let g = UnitGraph::from_edges(4, [(0, 1), (1, 2), (2, 3)]);
        let (dist, parent) = g.bfs(0);
        assert_eq!(dist, vec![Some(0), Some(1), Some(2), Some(3)]);
        assert_eq!(parent[3], Some(2));
    }

    #[test]
    fn dedups_and_normalizes_edges() {
        let g = UnitGraph::from_edges(3, [(1, 0), (0, 1), (2, 2), (5, 1)]);
        assert_eq!(g.n_edges(), 1);
        assert_eq!(g.neighbors(0), &[1]);
    }

    #[test]
    fn connectivity_check() {
        let g = UnitGraph::from_edges(4, [(0, 1), (2, 3)]);
        assert!(g.all_connected(&[0, 1]));
        assert!(!g.all_connected(&[0, 3]));
        assert!(g.all_connected(&[]));
    }

    #[test]
    fn union_find_detects_cycles() {
        let mut dsu = DisjointSets::new(3);
        assert!(dsu.union(0, 1));
        assert!(dsu.union(1, 2));
        assert!(!dsu.union(0, 2));
    }
}
