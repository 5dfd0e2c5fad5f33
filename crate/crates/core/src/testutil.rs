//! Shared generators for randomized unit tests.

use std::collections::BTreeSet;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::graph::DisjointSets;
use crate::model::{DutySchedule, MulticastInstance, MulticastTree, Network, NodeId, Slot};

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Erdős–Rényi-style network: `n` nodes, each pair linked with probability
/// `edge_prob`, each node active on a random nonempty slot subset of `1..=k`.
pub(crate) fn random_network(rng: &mut ChaCha8Rng, n: usize, k: Slot, edge_prob: f64) -> Network {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random_bool(edge_prob) {
                edges.push((u, v));
            }
        }
    }
    let schedules: Vec<DutySchedule> = (0..n)
        .map(|_| {
            let duty = rng.random_range(1..=k);
            let picks = rand::seq::index::sample(rng, k as usize, duty as usize);
            DutySchedule::new(picks.iter().map(|i| i as Slot + 1))
        })
        .collect();
    Network::from_parts(k, schedules, edges, None)
}

fn components(net: &Network) -> Vec<Vec<NodeId>> {
    let mut seen = vec![false; net.n_nodes()];
    let mut comps = Vec::new();
    for start in 0..net.n_nodes() {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &v in net.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    comp.push(v);
                    stack.push(v);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

/// A random network plus an instance whose terminals all live in one
/// component (size at least `min_m`).
pub(crate) fn random_connected_instance(
    rng: &mut ChaCha8Rng,
    max_n: usize,
    max_k: Slot,
    min_m: usize,
) -> (Network, MulticastInstance) {
    loop {
        let n = rng.random_range(min_m.max(2)..=max_n);
        let k = rng.random_range(1..=max_k);
        let p = rng.random_range(0.25..0.7);
        let net = random_network(rng, n, k, p);
        let comp = components(&net)
            .into_iter()
            .max_by_key(|c| c.len())
            .expect("at least one component");
        if comp.len() < min_m {
            continue;
        }
        let m_count = rng.random_range(min_m..=comp.len());
        let picks = rand::seq::index::sample(rng, comp.len(), m_count);
        let terminals: Vec<NodeId> = picks.iter().map(|i| comp[i]).collect();
        let source = terminals[0];
        return (net, MulticastInstance::new(source, terminals));
    }
}

/// Random spanning tree of the largest component, rooted at its smallest
/// node.
pub(crate) fn random_spanning_tree(net: &Network, rng: &mut ChaCha8Rng) -> MulticastTree {
    let comp = components(net)
        .into_iter()
        .max_by_key(|c| c.len())
        .expect("nonempty network");
    let inside: BTreeSet<NodeId> = comp.iter().copied().collect();
    let mut edges: Vec<(NodeId, NodeId)> = net
        .edges()
        .filter(|(u, v)| inside.contains(u) && inside.contains(v))
        .collect();
    edges.shuffle(rng);
    let mut dsu = DisjointSets::new(net.n_nodes());
    let mut tree_edges = Vec::new();
    for (u, v) in edges {
        if dsu.union(u, v) {
            tree_edges.push((u, v));
        }
    }
    MulticastTree::from_edges(comp[0], &tree_edges).expect("spanning tree of a component")
}
