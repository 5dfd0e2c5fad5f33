//! Shared instance generators for integration tests (public API only).
#![allow(dead_code)] // each test binary uses a different subset

use std::collections::BTreeSet;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use memtcs::model::{DutySchedule, MulticastInstance, MulticastTree, Network, NodeId, Slot};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_network(rng: &mut ChaCha8Rng, n: usize, k: Slot, edge_prob: f64) -> Network {
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

pub fn components(net: &Network) -> Vec<Vec<NodeId>> {
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

/// Random network plus an instance with `min_m..=component` terminals drawn
/// from one connected component.
pub fn random_connected_instance(
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
            .expect("nonempty");
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

/// Random tree spanning the instance's terminals: a shuffled spanning tree of
/// the terminal component, pruned of non-terminal leaves, rooted at the
/// source.
pub fn random_terminal_tree(
    net: &Network,
    inst: &MulticastInstance,
    rng: &mut ChaCha8Rng,
) -> MulticastTree {
    let comp = components(net)
        .into_iter()
        .find(|c| c.contains(&inst.source()))
        .expect("source exists");
    let inside: BTreeSet<NodeId> = comp.iter().copied().collect();
    let mut edges: Vec<(NodeId, NodeId)> = net
        .edges()
        .filter(|(u, v)| inside.contains(u) && inside.contains(v))
        .collect();
    edges.shuffle(rng);

    let mut parent_of: Vec<NodeId> = (0..net.n_nodes()).collect();
    fn find(parent_of: &mut [NodeId], mut x: NodeId) -> NodeId {
        while parent_of[x] != x {
            parent_of[x] = parent_of[parent_of[x]];
            x = parent_of[x];
        }
        x
    }
    let mut tree_edges = Vec::new();
    for (u, v) in edges {
        let (ru, rv) = (find(&mut parent_of, u), find(&mut parent_of, v));
        if ru != rv {
            parent_of[ru.max(rv)] = ru.min(rv);
            tree_edges.push((u, v));
        }
    }

    // Prune non-terminal leaves so the tree stays lean.
    let mut adj: std::collections::BTreeMap<NodeId, BTreeSet<NodeId>> =
        std::collections::BTreeMap::new();
    adj.entry(inst.source()).or_default();
    for &(u, v) in &tree_edges {
        adj.entry(u).or_default().insert(v);
        adj.entry(v).or_default().insert(u);
    }
    loop {
        let leaves: Vec<NodeId> = adj
            .iter()
            .filter(|(u, nb)| nb.len() <= 1 && !inst.terminals().contains(u))
            .map(|(&u, _)| u)
            .collect();
        if leaves.is_empty() {
            break;
        }
        for u in leaves {
            if let Some(nb) = adj.remove(&u) {
                for v in nb {
                    if let Some(o) = adj.get_mut(&v) {
                        o.remove(&u);
                    }
                }
            }
        }
    }
    let final_edges: Vec<(NodeId, NodeId)> = adj
        .iter()
        .flat_map(|(&u, nb)| nb.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
        .collect();
    MulticastTree::from_edges(inst.source(), &final_edges).expect("pruned tree is a tree")
}
