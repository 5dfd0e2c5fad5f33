//! Extended-graph transform: every node `u` of the base network gains one
//! satellite node `λ(u,i)` per slot `i` on which some neighbor of `u` listens,
//! i.e. `i ∈ Ψ(u) = ∪_{v∈nb(u)} Γ(v)`. Satellites stand for candidate
//! transmissions, and edges encode who such a transmission reaches:
//!
//! - each `Ψ(u) ∪ {u}` induces a clique;
//! - for each base edge `(u,v)`, each `i ∈ Γ(v)` and `j ∈ Γ(u)`: edges
//!   `(λ(u,i), λ(v,j))`, `(λ(u,i), v)` and `(u, λ(v,j))`.
//!
//! The node set splits into nuclear nodes (the originals) and satellites; two
//! nuclear nodes are never adjacent, and a satellite is adjacent to at most
//! `Δ+1` nuclear nodes.

use std::collections::BTreeSet;
use std::fmt;

use crate::graph::UnitGraph;
use crate::model::{Network, NodeId, Slot};
use crate::{Error, Result};

/// Identifier of a node in the extended graph: either an original (nuclear)
/// node or a satellite `λ(u, slot)` of one. The derived ordering — nuclear
/// nodes first, satellites by `(nuclear, slot)` — is the tie-break order used
/// by every deterministic choice in the solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtNodeId {
    Nuclear(NodeId),
    Satellite(NodeId, Slot),
}

impl ExtNodeId {
    pub fn is_satellite(&self) -> bool {
        matches!(self, ExtNodeId::Satellite(_, _))
    }

    /// The underlying base-network node.
    pub fn nucleus(&self) -> NodeId {
        match *self {
            ExtNodeId::Nuclear(u) => u,
            ExtNodeId::Satellite(u, _) => u,
        }
    }

    pub fn slot(&self) -> Option<Slot> {
        match *self {
            ExtNodeId::Nuclear(_) => None,
            ExtNodeId::Satellite(_, i) => Some(i),
        }
    }

    /// Compact comma-free rendering for trace files: `n3` or `s3_2`.
    pub fn trace_id(&self) -> String {
        match *self {
            ExtNodeId::Nuclear(u) => format!("n{u}"),
            ExtNodeId::Satellite(u, i) => format!("s{u}_{i}"),
        }
    }
}

impl fmt::Display for ExtNodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ExtNodeId::Nuclear(u) => write!(f, "{u}"),
            ExtNodeId::Satellite(u, i) => write!(f, "λ({u},{i})"),
        }
    }
}

/// The extended graph of a network. Holds a reference to the base network
/// (the single source of truth for schedules) plus a flat, deterministic
/// adjacency structure: nuclear `u` has flat index `u`, and satellites follow
/// in `(nuclear, slot)` order.
#[derive(Debug)]
pub struct ExtendedGraph<'a> {
    base: &'a Network,
    /// Ψ(u): sorted satellite slots per nuclear node.
    psi: Vec<Vec<Slot>>,
    /// Flat index of the first satellite of each nuclear node.
    sat_offset: Vec<usize>,
    /// Flat index → identifier.
    nodes: Vec<ExtNodeId>,
    /// Sorted adjacency over flat indices.
    adj: Vec<Vec<usize>>,
    n_edges: usize,
}

impl<'a> ExtendedGraph<'a> {
    /// Apply the four construction rules to a validated network. Edges
    /// produced by overlapping rules are stored once (simple graph).
    pub fn build(net: &'a Network) -> ExtendedGraph<'a> {
        let n = net.n_nodes();
        let mut psi: Vec<Vec<Slot>> = Vec::with_capacity(n);
        for u in 0..n {
            let mut slots: BTreeSet<Slot> = BTreeSet::new();
            for &v in net.neighbors(u) {
                slots.extend(net.schedule(v).iter());
            }
            psi.push(slots.into_iter().collect());
        }

        let mut sat_offset = Vec::with_capacity(n);
        let mut next = n;
        for slots in &psi {
            sat_offset.push(next);
            next += slots.len();
        }
        let mut nodes = Vec::with_capacity(next);
        nodes.extend((0..n).map(ExtNodeId::Nuclear));
        for (u, slots) in psi.iter().enumerate() {
            nodes.extend(slots.iter().map(|&i| ExtNodeId::Satellite(u, i)));
        }

        let sat_index = |u: NodeId, slot: Slot| -> usize {
            let pos = psi[u]
                .binary_search(&slot)
                .expect("satellite slot present in Ψ(u)");
            sat_offset[u] + pos
        };

        let mut pairs: Vec<(usize, usize)> = Vec::new();
        // Rule (iii): clique over Ψ(u) ∪ {u}.
        for u in 0..n {
            let lo = sat_offset[u];
            let hi = lo + psi[u].len();
            for a in lo..hi {
                pairs.push((u, a));
                for b in (a + 1)..hi {
                    pairs.push((a, b));
                }
            }
        }
        // Rule (iv): coverage edges along each base edge.
        for (u, v) in net.edges() {
            if u == v || u >= n || v >= n {
                continue;
            }
            for i in net.schedule(v).iter() {
                let a = sat_index(u, i);
                pairs.push((a.min(v), a.max(v)));
                for j in net.schedule(u).iter() {
                    let b = sat_index(v, j);
                    pairs.push((a.min(b), a.max(b)));
                }
            }
            for j in net.schedule(u).iter() {
                let b = sat_index(v, j);
                pairs.push((u.min(b), u.max(b)));
            }
        }
        pairs.sort_unstable();
        pairs.dedup();

        let mut adj = vec![Vec::new(); nodes.len()];
        for &(a, b) in &pairs {
            adj[a].push(b);
            adj[b].push(a);
        }
        for nb in &mut adj {
            nb.sort_unstable();
        }

        ExtendedGraph {
            base: net,
            psi,
            sat_offset,
            nodes,
            adj,
            n_edges: pairs.len(),
        }
    }

    pub fn base(&self) -> &Network {
        self.base
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.n_edges
    }

    pub fn nuclear_count(&self) -> usize {
        self.base.n_nodes()
    }

    pub fn satellite_count(&self) -> usize {
        self.nodes.len() - self.base.n_nodes()
    }

    /// Ψ(u) as a sorted slot slice.
    pub fn psi(&self, u: NodeId) -> &[Slot] {
        &self.psi[u]
    }

    pub fn ids(&self) -> impl Iterator<Item = ExtNodeId> + '_ {
        self.nodes.iter().copied()
    }

    pub fn id_of(&self, index: usize) -> ExtNodeId {
        self.nodes[index]
    }

    pub fn index_of(&self, id: ExtNodeId) -> Option<usize> {
        match id {
            ExtNodeId::Nuclear(u) => (u < self.base.n_nodes()).then_some(u),
            ExtNodeId::Satellite(u, slot) => {
                if u >= self.base.n_nodes() {
                    return None;
                }
                self.psi[u]
                    .binary_search(&slot)
                    .ok()
                    .map(|pos| self.sat_offset[u] + pos)
            }
        }
    }

    pub fn neighbors_flat(&self, index: usize) -> &[usize] {
        &self.adj[index]
    }

    pub fn are_adjacent(&self, a: ExtNodeId, b: ExtNodeId) -> bool {
        match (self.index_of(a), self.index_of(b)) {
            (Some(ia), Some(ib)) => self.adj[ia].binary_search(&ib).is_ok(),
            _ => false,
        }
    }

    pub fn neighbors(&self, id: ExtNodeId) -> Option<Vec<ExtNodeId>> {
        let idx = self.index_of(id)?;
        Some(self.adj[idx].iter().map(|&j| self.nodes[j]).collect())
    }

    pub fn is_satellite_index(&self, index: usize) -> bool {
        index >= self.base.n_nodes()
    }

    /// Nuclear neighbors of a satellite — the base nodes a transmission on
    /// this satellite's slot reaches (plus its own nucleus).
    pub fn satellite_coverage(&self, w: ExtNodeId) -> Result<BTreeSet<NodeId>> {
        if !w.is_satellite() {
            return Err(Error::InvalidInput(format!(
                "satellite_coverage needs a satellite, got nuclear node {w}"
            )));
        }
        let idx = self
            .index_of(w)
            .ok_or_else(|| Error::InvalidInput(format!("{w} is not a node of this graph")))?;
        Ok(self.adj[idx]
            .iter()
            .filter(|&&j| !self.is_satellite_index(j))
            .map(|&j| self.nodes[j].nucleus())
            .collect())
    }

    /// The sub-graph induced by the satellite set, with unit edge weights.
    /// Satellite with flat index `n + i` becomes node `i`.
    pub fn induced_satellite_subgraph(&self) -> SatelliteSubgraph {
        let n = self.base.n_nodes();
        let edges = self
            .flat_edges()
            .filter(|&(a, b)| a >= n && b >= n)
            .map(|(a, b)| (a - n, b - n));
        SatelliteSubgraph {
            graph: UnitGraph::from_edges(self.satellite_count(), edges),
            ids: self.nodes[n..].to_vec(),
        }
    }

    fn flat_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(a, nb)| {
            nb.iter()
                .filter(move |&&b| a < b)
                .map(move |&b| (a, b))
        })
    }

    /// Deterministic edge-list dump, one `x -- y` line per edge in flat-index
    /// order. Intended for golden-file tests.
    pub fn dump_edges(&self) -> String {
        let mut out = String::new();
        for (a, b) in self.flat_edges() {
            out.push_str(&format!("{} -- {}\n", self.nodes[a], self.nodes[b]));
        }
        out
    }
}

/// Satellite-only view of an extended graph; node `i` is `ids[i]`.
#[derive(Debug)]
pub struct SatelliteSubgraph {
    pub graph: UnitGraph,
    ids: Vec<ExtNodeId>,
}

impl SatelliteSubgraph {
    pub fn id_of(&self, index: usize) -> ExtNodeId {
        self.ids[index]
    }

    pub fn index_of(&self, id: ExtNodeId) -> Option<usize> {
        self.ids.binary_search(&id).ok()
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }
}
