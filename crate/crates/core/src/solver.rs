//! The TCS approximation pipeline: a greedy satellite cover of the terminals,
//! an approximate minimum Steiner tree connecting the cover inside the
//! satellite sub-graph (together: the approximate minimum satellite bridge),
//! and the mapping of that bridge back onto a multicast tree plus feasible
//! schedule in the base network.
//!
//! Every argmax / "pick any" in the underlying procedure is resolved by the
//! smallest `(nuclear id, slot)` available, so identical inputs always yield
//! identical plans.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::extended::{ExtNodeId, ExtendedGraph};
use crate::graph::{DisjointSets, UnitGraph};
use crate::model::{
    MulticastInstance, MulticastPlan, MulticastTree, Network, NodeId, Slot, TransmissionSchedule,
};
use crate::{Error, Result};

/// Which 2-approximation computes the Steiner trees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SteinerAlgorithm {
    /// Metric closure over the terminals, MST of the closure, shortest-path
    /// expansion, then pruning of non-terminal leaves.
    #[default]
    Kmb,
    /// Voronoi-partition variant: one multi-source search instead of one per
    /// terminal.
    Mehlhorn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SolverConfig {
    pub steiner: SteinerAlgorithm,
}

impl SolverConfig {
    /// Approximation ratio of the configured Steiner subroutine (2 for both).
    pub fn rho(&self) -> u32 {
        2
    }
}

/// A satellite bridge: a tree of satellite nodes such that every terminal is
/// adjacent to at least one of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatelliteBridge {
    nodes: BTreeSet<ExtNodeId>,
    edges: BTreeSet<(ExtNodeId, ExtNodeId)>,
}

impl SatelliteBridge {
    /// Structural validation: all nodes are satellites and the edges form a
    /// tree over exactly the node set.
    pub fn new(
        nodes: BTreeSet<ExtNodeId>,
        edges: BTreeSet<(ExtNodeId, ExtNodeId)>,
    ) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::MalformedBridge("empty node set".into()));
        }
        if let Some(bad) = nodes.iter().find(|n| !n.is_satellite()) {
            return Err(Error::MalformedBridge(format!(
                "bridge contains nuclear node {bad}"
            )));
        }
        if edges.len() != nodes.len() - 1 {
            return Err(Error::MalformedBridge(format!(
                "{} edges cannot form a tree over {} nodes",
                edges.len(),
                nodes.len()
            )));
        }
        let mut adj: BTreeMap<ExtNodeId, Vec<ExtNodeId>> = BTreeMap::new();
        for &(a, b) in &edges {
            if !nodes.contains(&a) || !nodes.contains(&b) {
                return Err(Error::MalformedBridge(format!(
                    "edge ({a}, {b}) leaves the node set"
                )));
            }
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        let start = *nodes.first().expect("nonempty");
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &v in adj.get(&u).map(Vec::as_slice).unwrap_or_default() {
                if seen.insert(v) {
                    queue.push_back(v);
                }
            }
        }
        if seen.len() != nodes.len() {
            return Err(Error::MalformedBridge("bridge is not connected".into()));
        }
        Ok(SatelliteBridge { nodes, edges })
    }

    pub fn single(node: ExtNodeId) -> Result<Self> {
        Self::new(BTreeSet::from([node]), BTreeSet::new())
    }

    pub fn nodes(&self) -> &BTreeSet<ExtNodeId> {
        &self.nodes
    }

    pub fn edges(&self) -> &BTreeSet<(ExtNodeId, ExtNodeId)> {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Definition check: every terminal is adjacent (in the extended graph)
    /// to at least one bridge node.
    pub fn covers(&self, g: &ExtendedGraph, terminals: &BTreeSet<NodeId>) -> bool {
        terminals.iter().all(|&m| {
            self.nodes
                .iter()
                .any(|&b| g.are_adjacent(ExtNodeId::Nuclear(m), b))
        })
    }
}

/// Greedy cover: repeatedly pick the satellite adjacent to the most
/// still-uncovered terminals (smallest `(nuclear, slot)` on ties) until every
/// terminal is covered.
pub fn greedy_satellite_cover(
    g: &ExtendedGraph,
    terminals: &BTreeSet<NodeId>,
) -> Result<BTreeSet<ExtNodeId>> {
    let n = g.nuclear_count();
    if terminals.is_empty() {
        return Err(Error::InvalidInput("terminal set is empty".into()));
    }
    for &m in terminals {
        if m >= n {
            return Err(Error::InvalidInput(format!("terminal {m} not in network")));
        }
        if !g.neighbors_flat(m).iter().any(|&j| g.is_satellite_index(j)) {
            return Err(Error::UncoverableTerminal(m));
        }
    }

    // Nuclear neighbors per satellite, computed once.
    let n_sat = g.satellite_count();
    let mut nuclear_nb: Vec<Vec<NodeId>> = Vec::with_capacity(n_sat);
    for s in 0..n_sat {
        nuclear_nb.push(
            g.neighbors_flat(n + s)
                .iter()
                .filter(|&&j| !g.is_satellite_index(j))
                .map(|&j| g.id_of(j).nucleus())
                .collect(),
        );
    }

    let mut uncovered: BTreeSet<NodeId> = terminals.clone();
    let mut chosen: Vec<bool> = vec![false; n_sat];
    let mut cover = BTreeSet::new();
    while !uncovered.is_empty() {
        let mut best: Option<(usize, usize)> = None; // (count, sat index)
        for s in 0..n_sat {
            if chosen[s] {
                continue;
            }
            let count = nuclear_nb[s]
                .iter()
                .filter(|m| uncovered.contains(m))
                .count();
            if count > best.map_or(0, |(c, _)| c) {
                best = Some((count, s));
            }
        }
        let Some((_, s)) = best else {
            return Err(Error::UncoverableTerminal(
                *uncovered.first().expect("nonempty"),
            ));
        };
        chosen[s] = true;
        cover.insert(g.id_of(n + s));
        for m in &nuclear_nb[s] {
            uncovered.remove(m);
        }
    }
    Ok(cover)
}

/// Approximate minimum Steiner tree over a unit-weight graph, returned as an
/// edge list. A single terminal yields an empty edge list (the one-node
/// tree); disconnected terminals are an error.
pub fn steiner_tree_approx(
    g: &UnitGraph,
    terminals: &[usize],
    cfg: &SolverConfig,
) -> Result<Vec<(usize, usize)>> {
    let mut terms: Vec<usize> = terminals.to_vec();
    terms.sort_unstable();
    terms.dedup();
    if terms.is_empty() {
        return Err(Error::InvalidInput("no Steiner terminals".into()));
    }
    if let Some(&bad) = terms.iter().find(|&&t| t >= g.n()) {
        return Err(Error::InvalidInput(format!(
            "Steiner terminal {bad} outside graph"
        )));
    }
    if terms.len() == 1 {
        return Ok(Vec::new());
    }
    let union = match cfg.steiner {
        SteinerAlgorithm::Kmb => kmb_path_union(g, &terms)?,
        SteinerAlgorithm::Mehlhorn => mehlhorn_path_union(g, &terms)?,
    };
    Ok(extract_and_prune(g.n(), &union, &terms))
}

/// KMB stage 1-3: metric closure over the terminals, MST of the closure,
/// expansion of MST edges into shortest paths.
fn kmb_path_union(g: &UnitGraph, terms: &[usize]) -> Result<BTreeSet<(usize, usize)>> {
    let t = terms.len();
    let mut dists = Vec::with_capacity(t);
    let mut parents = Vec::with_capacity(t);
    for &term in terms {
        let (d, p) = g.bfs(term);
        dists.push(d);
        parents.push(p);
    }
    for j in 1..t {
        if dists[0][terms[j]].is_none() {
            return Err(Error::DisconnectedTerminals);
        }
    }

    // Prim over the closure; ties go to the smaller terminal index.
    let closure = |i: usize, j: usize| dists[i][terms[j]].expect("terminals connected");
    let mut in_tree = vec![false; t];
    in_tree[0] = true;
    let mut best_w: Vec<u32> = (0..t).map(|j| closure(0, j)).collect();
    let mut best_from = vec![0usize; t];
    let mut mst: Vec<(usize, usize)> = Vec::with_capacity(t - 1);
    for _ in 1..t {
        let mut pick: Option<(u32, usize)> = None;
        for j in 0..t {
            if !in_tree[j] && pick.is_none_or(|(w, _)| best_w[j] < w) {
                pick = Some((best_w[j], j));
            }
        }
        let (_, j) = pick.expect("some terminal remains");
        in_tree[j] = true;
        mst.push((best_from[j], j));
        for k in 0..t {
            if !in_tree[k] && closure(j, k) < best_w[k] {
                best_w[k] = closure(j, k);
                best_from[k] = j;
            }
        }
    }

    let mut union = BTreeSet::new();
    for (a, b) in mst {
        // Walk from terms[b] to terms[a] along the BFS parents of terms[a].
        let mut cur = terms[b];
        while cur != terms[a] {
            let prev = parents[a][cur].expect("path exists");
            union.insert((cur.min(prev), cur.max(prev)));
            cur = prev;
        }
    }
    Ok(union)
}

/// Mehlhorn variant: a single multi-source BFS assigns every node to its
/// nearest terminal; boundary edges induce a terminal-level graph whose MST
/// edges are expanded back into paths.
fn mehlhorn_path_union(g: &UnitGraph, terms: &[usize]) -> Result<BTreeSet<(usize, usize)>> {
    let n = g.n();
    let mut dist: Vec<Option<u32>> = vec![None; n];
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut base: Vec<Option<usize>> = vec![None; n];
    let mut queue = VecDeque::new();
    for &t in terms {
        dist[t] = Some(0);
        base[t] = Some(t);
        queue.push_back(t);
    }
    while let Some(u) = queue.pop_front() {
        let du = dist[u].expect("queued");
        for &v in g.neighbors(u) {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                parent[v] = Some(u);
                base[v] = base[u];
                queue.push_back(v);
            }
        }
    }

    // Best boundary crossing per terminal pair.
    let mut candidates: BTreeMap<(usize, usize), (u32, usize, usize)> = BTreeMap::new();
    for (u, v) in g.edges() {
        let (Some(bu), Some(bv)) = (base[u], base[v]) else {
            continue;
        };
        if bu == bv {
            continue;
        }
        let w = dist[u].expect("has base") + dist[v].expect("has base") + 1;
        let key = (bu.min(bv), bu.max(bv));
        let cand = (w, u.min(v), u.max(v));
        match candidates.get(&key) {
            Some(&old) if old <= cand => {}
            _ => {
                candidates.insert(key, cand);
            }
        }
    }

    // Kruskal over the terminal-level edges.
    let mut level: Vec<(u32, usize, usize, usize, usize)> = candidates
        .into_iter()
        .map(|((a, b), (w, u, v))| (w, a, b, u, v))
        .collect();
    level.sort_unstable();
    let tindex = |x: usize| terms.binary_search(&x).expect("terminal");
    let mut dsu = DisjointSets::new(terms.len());
    let mut union = BTreeSet::new();
    let mut merged = 1;
    for (_, a, b, u, v) in level {
        if !dsu.union(tindex(a), tindex(b)) {
            continue;
        }
        merged += 1;
        union.insert((u.min(v), u.max(v)));
        for mut cur in [u, v] {
            while let Some(prev) = parent[cur] {
                union.insert((cur.min(prev), cur.max(prev)));
                cur = prev;
            }
        }
    }
    if merged != terms.len() {
        return Err(Error::DisconnectedTerminals);
    }
    Ok(union)
}

/// Spanning tree of the path union (BFS from the smallest terminal), then
/// repeated removal of non-terminal leaves.
fn extract_and_prune(
    n: usize,
    union: &BTreeSet<(usize, usize)>,
    terms: &[usize],
) -> Vec<(usize, usize)> {
    let sub = UnitGraph::from_edges(n, union.iter().copied());
    let (_, parent) = sub.bfs(terms[0]);
    let mut adj: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    adj.entry(terms[0]).or_default();
    for (v, p) in parent.iter().enumerate() {
        if let Some(p) = *p {
            adj.entry(v).or_default().insert(p);
            adj.entry(p).or_default().insert(v);
        }
    }
    let terminal: BTreeSet<usize> = terms.iter().copied().collect();
    loop {
        let prunable: Vec<usize> = adj
            .iter()
            .filter(|(u, nb)| nb.len() <= 1 && !terminal.contains(u))
            .map(|(&u, _)| u)
            .collect();
        if prunable.is_empty() {
            break;
        }
        for u in prunable {
            if let Some(nb) = adj.remove(&u) {
                for v in nb {
                    if let Some(other) = adj.get_mut(&v) {
                        other.remove(&u);
                    }
                }
            }
        }
    }
    let mut edges: Vec<(usize, usize)> = adj
        .iter()
        .flat_map(|(&u, nb)| nb.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
        .collect();
    edges.sort_unstable();
    edges
}

/// Connect an already-chosen satellite cover into a bridge with an
/// approximate Steiner tree over the satellite sub-graph.
pub fn bridge_from_cover(
    g: &ExtendedGraph,
    cover: &BTreeSet<ExtNodeId>,
    cfg: &SolverConfig,
) -> Result<SatelliteBridge> {
    let sub = g.induced_satellite_subgraph();
    let terms: Vec<usize> = cover
        .iter()
        .map(|&c| {
            sub.index_of(c)
                .ok_or_else(|| Error::MalformedBridge(format!("{c} is not a satellite")))
        })
        .collect::<Result<_>>()?;
    let edges = steiner_tree_approx(&sub.graph, &terms, cfg)?;
    let mut nodes: BTreeSet<ExtNodeId> = cover.clone();
    let edges: BTreeSet<(ExtNodeId, ExtNodeId)> = edges
        .into_iter()
        .map(|(a, b)| {
            let (x, y) = (sub.id_of(a), sub.id_of(b));
            nodes.insert(x);
            nodes.insert(y);
            (x.min(y), x.max(y))
        })
        .collect();
    SatelliteBridge::new(nodes, edges)
}

/// Approximate minimum satellite bridge: greedy cover, then an approximate
/// Steiner tree connecting the cover inside the satellite sub-graph.
pub fn find_msb(
    g: &ExtendedGraph,
    terminals: &BTreeSet<NodeId>,
    cfg: &SolverConfig,
) -> Result<SatelliteBridge> {
    let cover = greedy_satellite_cover(g, terminals)?;
    bridge_from_cover(g, &cover, cfg)
}

/// The result of projecting a satellite bridge onto the base network:
/// a multicast tree `R` spanning the terminals (rooted at the source) and the
/// slot sets `F` inherited from the bridge partition, defined on every
/// nuclear node that owned bridge satellites.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BridgeMapping {
    pub tree: MulticastTree,
    /// F: nuclear node of the bridge → slots of its bridge satellites.
    pub slot_map: BTreeMap<NodeId, BTreeSet<Slot>>,
}

impl BridgeMapping {
    /// Check both mapping guarantees: every internal tree node's slot set
    /// hits every tree-neighbor schedule, and the summed slot-set sizes over
    /// internal nodes do not exceed the bridge size.
    pub fn verify_against(&self, sb: &SatelliteBridge, net: &Network) -> Result<()> {
        let mut total = 0usize;
        for u in self.tree.d_plus() {
            let f = self.slot_map.get(&u).ok_or_else(|| {
                Error::MalformedBridge(format!("internal node {u} has no slot set"))
            })?;
            total += f.len();
            for v in self.tree.tree_neighbors(u) {
                if !f.iter().any(|s| net.schedule(v).contains(*s)) {
                    return Err(Error::MalformedBridge(format!(
                        "slot set of {u} misses neighbor {v}"
                    )));
                }
            }
        }
        if total > sb.node_count() {
            return Err(Error::MalformedBridge(format!(
                "slot sets total {total} > bridge size {}",
                sb.node_count()
            )));
        }
        Ok(())
    }
}

/// Map a satellite bridge to a multicast tree and slot sets:
/// 1. partition the bridge nodes by nuclear node;
/// 2. attach every terminal outside the partition to its smallest adjacent
///    bridge node;
/// 3. contract each partition class into its nuclear node, keeping one edge
///    per crossing, which yields a connected sub-graph of the base network
///    over `M ∪ A`;
/// 4. return its BFS spanning tree rooted at the source, with `F(a)` = the
///    slots of `a`'s bridge satellites.
pub fn map_bridge_to_tree(
    sb: &SatelliteBridge,
    g: &ExtendedGraph,
    inst: &MulticastInstance,
) -> Result<BridgeMapping> {
    let terminals = inst.terminals();
    let mut slot_map: BTreeMap<NodeId, BTreeSet<Slot>> = BTreeMap::new();
    for &node in sb.nodes() {
        slot_map
            .entry(node.nucleus())
            .or_default()
            .insert(node.slot().expect("bridge nodes are satellites"));
    }
    let nuclear_set: BTreeSet<NodeId> = slot_map.keys().copied().collect();

    // Step 2: attachment edges for terminals outside the nuclear set.
    let mut attach: Vec<(ExtNodeId, NodeId)> = Vec::new();
    for &m in terminals {
        if nuclear_set.contains(&m) {
            continue;
        }
        let host = sb
            .nodes()
            .iter()
            .copied()
            .find(|&b| g.are_adjacent(ExtNodeId::Nuclear(m), b))
            .ok_or_else(|| {
                Error::MalformedBridge(format!("terminal {m} is not covered by the bridge"))
            })?;
        attach.push((host, m));
    }

    // Step 3: contracted edge set over M ∪ A.
    let mut contracted: BTreeSet<(NodeId, NodeId)> = BTreeSet::new();
    for &(a, b) in sb.edges() {
        let (i, j) = (a.nucleus(), b.nucleus());
        if i != j {
            contracted.insert((i.min(j), i.max(j)));
        }
    }
    for &(host, m) in &attach {
        let i = host.nucleus();
        contracted.insert((i.min(m), i.max(m)));
    }

    let mut g_nodes: BTreeSet<NodeId> = nuclear_set.clone();
    g_nodes.extend(terminals.iter().copied());

    // Step 4: BFS spanning tree rooted at the source.
    let mut adj: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
    for &u in &g_nodes {
        adj.entry(u).or_default();
    }
    for &(u, v) in &contracted {
        adj.get_mut(&u).expect("endpoint in node set").push(v);
        adj.get_mut(&v).expect("endpoint in node set").push(u);
    }
    let s = inst.source();
    let mut seen = BTreeSet::from([s]);
    let mut queue = VecDeque::from([s]);
    let mut tree_edges = Vec::new();
    while let Some(u) = queue.pop_front() {
        let mut nb = adj.get(&u).cloned().unwrap_or_default();
        nb.sort_unstable();
        for v in nb {
            if seen.insert(v) {
                tree_edges.push((u, v));
                queue.push_back(v);
            }
        }
    }
    if seen.len() != g_nodes.len() {
        return Err(Error::MalformedBridge(
            "contracted bridge graph is not connected".into(),
        ));
    }
    let tree = MulticastTree::from_edges(s, &tree_edges)?;
    Ok(BridgeMapping { tree, slot_map })
}

/// Turn a satellite bridge into a full plan: map it to a tree rooted at the
/// source and schedule every non-leaf with its inherited slot set (a
/// degree-one root instead transmits once, on the smallest active slot of
/// its child).
pub fn plan_from_bridge(
    net: &Network,
    inst: &MulticastInstance,
    g: &ExtendedGraph,
    sb: &SatelliteBridge,
) -> Result<MulticastPlan> {
    let mapping = map_bridge_to_tree(sb, g, inst)?;
    let tree = mapping.tree;
    let mut slots: BTreeMap<NodeId, BTreeSet<Slot>> = BTreeMap::new();
    for u in tree.nl() {
        if tree.degree(u) > 1 {
            let f = mapping.slot_map.get(&u).ok_or_else(|| {
                Error::MalformedBridge(format!("internal node {u} missing from slot map"))
            })?;
            slots.insert(u, f.clone());
        } else {
            // Degree-one root: one transmission on its child's smallest slot.
            let child = tree.children(u)[0];
            let slot = net
                .schedule(child)
                .min_slot()
                .ok_or_else(|| Error::InvalidInput(format!("node {child} has empty schedule")))?;
            slots.insert(u, BTreeSet::from([slot]));
        }
    }
    Ok(MulticastPlan::new(tree, TransmissionSchedule::new(slots)))
}

/// Full approximation: build the extended graph, find an approximate minimum
/// satellite bridge, and project it onto the base network.
///
/// A single-terminal instance yields the trivial zero-cost plan. The energy
/// prices play no role in construction; evaluate the result with
/// [`crate::model::energy_cost`].
pub fn solve_memtcs(
    net: &Network,
    inst: &MulticastInstance,
    cfg: &SolverConfig,
) -> Result<MulticastPlan> {
    inst.check_against(net)?;
    if inst.len() == 1 {
        return Ok(MulticastPlan::new(
            MulticastTree::single(inst.source()),
            TransmissionSchedule::empty(),
        ));
    }
    if !net.all_connected(inst.terminals()) {
        return Err(Error::DisconnectedTerminals);
    }
    let g = ExtendedGraph::build(net);
    let sb = find_msb(&g, inst.terminals(), cfg)?;
    plan_from_bridge(net, inst, &g, &sb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{energy_cost, is_feasible_schedule, DutySchedule, EnergyModel};
    use crate::oracle::{
        exact_min_satellite_cover, exact_msb, exact_steiner_edge_count, harmonic, OracleBudget,
    };
    use crate::testutil;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use rand::Rng;

    fn sched(slots: &[Slot]) -> DutySchedule {
        DutySchedule::new(slots.iter().copied())
    }

    fn two_node_network() -> Network {
        Network::from_parts(2, vec![sched(&[1]), sched(&[2])], [(0, 1)], None)
    }

    #[test]
    fn cover_two_node_example_ties_to_smallest() {
        let net = two_node_network();
        let g = ExtendedGraph::build(&net);
        let c = greedy_satellite_cover(&g, &BTreeSet::from([0, 1])).unwrap();
        assert_eq!(c, BTreeSet::from([ExtNodeId::Satellite(0, 2)]));
        let single = greedy_satellite_cover(&g, &BTreeSet::from([0])).unwrap();
        assert_eq!(single, BTreeSet::from([ExtNodeId::Satellite(0, 2)]));
    }

    #[test]
    fn cover_errors_on_isolated_terminal() {
        let net = Network::from_parts(
            2,
            vec![sched(&[1]), sched(&[2]), sched(&[1])],
            [(0, 1)],
            None,
        );
        let g = ExtendedGraph::build(&net);
        assert!(matches!(
            greedy_satellite_cover(&g, &BTreeSet::from([0, 2])),
            Err(Error::UncoverableTerminal(2))
        ));
    }

    #[test]
    fn cover_within_harmonic_bound_of_exact() {
        let mut rng = testutil::rng(101);
        let budget = OracleBudget::default();
        for _ in 0..100 {
            let (net, inst) = testutil::random_connected_instance(&mut rng, 8, 4, 2);
            let g = ExtendedGraph::build(&net);
            let greedy = match greedy_satellite_cover(&g, inst.terminals()) {
                Ok(c) => c,
                Err(Error::UncoverableTerminal(_)) => continue,
                Err(e) => panic!("unexpected error: {e}"),
            };
            for &m in inst.terminals() {
                assert!(
                    greedy.iter().any(|&c| g.are_adjacent(ExtNodeId::Nuclear(m), c)),
                    "terminal {m} uncovered"
                );
            }
            let exact = exact_min_satellite_cover(&g, inst.terminals(), &budget).unwrap();
            let h = harmonic(net.max_degree() as u64 + 1).unwrap();
            assert!(
                BigRational::from_integer(BigInt::from(greedy.len()))
                    <= h * BigRational::from_integer(BigInt::from(exact.len())),
                "greedy {} vs exact {} exceeds H(Δ+1)",
                greedy.len(),
                exact.len()
            );
        }
    }

    #[test]
    fn steiner_trivial_cases() {
        let cfg = SolverConfig::default();
        let g = UnitGraph::from_edges(4, [(0, 1), (1, 2), (2, 3)]);
        assert!(steiner_tree_approx(&g, &[2], &cfg).unwrap().is_empty());
        assert_eq!(
            steiner_tree_approx(&g, &[1, 2], &cfg).unwrap(),
            vec![(1, 2)]
        );
        assert_eq!(
            steiner_tree_approx(&g, &[0, 3], &cfg).unwrap(),
            vec![(0, 1), (1, 2), (2, 3)]
        );
        let split = UnitGraph::from_edges(4, [(0, 1), (2, 3)]);
        assert!(matches!(
            steiner_tree_approx(&split, &[0, 3], &cfg),
            Err(Error::DisconnectedTerminals)
        ));
        assert!(steiner_tree_approx(&g, &[], &cfg).is_err());
    }

    fn check_is_tree_spanning(edges: &[(usize, usize)], terminals: &[usize]) {
        let nodes: BTreeSet<usize> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        if edges.is_empty() {
            assert!(terminals.len() <= 1);
            return;
        }
        assert_eq!(edges.len(), nodes.len() - 1, "edge count of a tree");
        let g = UnitGraph::from_edges(nodes.iter().max().unwrap() + 1, edges.iter().copied());
        let all: Vec<usize> = nodes.iter().copied().collect();
        assert!(g.all_connected(&all), "tree must be connected");
        for t in terminals {
            assert!(nodes.contains(t), "terminal {t} missing");
        }
    }

    #[test]
    fn steiner_within_factor_two_of_exact() {
        let budget = OracleBudget::default();
        for steiner in [SteinerAlgorithm::Kmb, SteinerAlgorithm::Mehlhorn] {
            let cfg = SolverConfig { steiner };
            let mut rng = testutil::rng(211);
            let mut checked = 0;
            while checked < 100 {
                let n = rng.random_range(2..=10usize);
                let p = rng.random_range(0.25..0.7);
                let mut edges = Vec::new();
                for u in 0..n {
                    for v in (u + 1)..n {
                        if rng.random_bool(p) {
                            edges.push((u, v));
                        }
                    }
                }
                let g = UnitGraph::from_edges(n, edges);
                let t_count = rng.random_range(1..=4.min(n));
                let terms: Vec<usize> =
                    rand::seq::index::sample(&mut rng, n, t_count).iter().collect();
                let mut sorted = terms.clone();
                sorted.sort_unstable();
                if !g.all_connected(&sorted) {
                    continue;
                }
                checked += 1;
                let approx = steiner_tree_approx(&g, &terms, &cfg).unwrap();
                check_is_tree_spanning(&approx, &sorted);
                let exact = exact_steiner_edge_count(&g, &terms, &budget).unwrap();
                assert!(
                    approx.len() <= 2 * exact,
                    "{steiner:?}: approx {} > 2×exact {}",
                    approx.len(),
                    exact
                );
            }
        }
    }

    #[test]
    fn find_msb_two_node_example() {
        let net = two_node_network();
        let g = ExtendedGraph::build(&net);
        let sb = find_msb(&g, &BTreeSet::from([0, 1]), &SolverConfig::default()).unwrap();
        assert_eq!(sb.node_count(), 1);
        assert_eq!(
            sb.nodes().first().copied().unwrap(),
            ExtNodeId::Satellite(0, 2)
        );
    }

    #[test]
    fn find_msb_connects_path_endpoints() {
        let net = Network::from_parts(
            2,
            vec![sched(&[1]), sched(&[2]), sched(&[1]), sched(&[2])],
            [(0, 1), (1, 2), (2, 3)],
            None,
        );
        let g = ExtendedGraph::build(&net);
        let terminals = BTreeSet::from([0, 3]);
        let sb = find_msb(&g, &terminals, &SolverConfig::default()).unwrap();
        assert!(sb.covers(&g, &terminals));
        let exact = exact_msb(&g, &terminals, &OracleBudget::default()).unwrap();
        assert!(exact.node_count() <= sb.node_count());
    }

    /// |N(found)| ≤ (3ρ·H(Δ+1) + ρ)·|N(exact)| with ρ = 2.
    #[test]
    fn find_msb_within_theorem_bound() {
        let mut rng = testutil::rng(307);
        let budget = OracleBudget::default();
        let cfg = SolverConfig::default();
        for _ in 0..60 {
            let (net, inst) = testutil::random_connected_instance(&mut rng, 7, 4, 2);
            let g = ExtendedGraph::build(&net);
            let found = match find_msb(&g, inst.terminals(), &cfg) {
                Ok(sb) => sb,
                Err(Error::UncoverableTerminal(_)) => continue,
                Err(e) => panic!("unexpected error: {e}"),
            };
            assert!(found.covers(&g, inst.terminals()));
            let exact = exact_msb(&g, inst.terminals(), &budget).unwrap();
            assert!(exact.node_count() <= found.node_count());
            let rho = BigRational::from_integer(BigInt::from(cfg.rho()));
            let h = harmonic(net.max_degree() as u64 + 1).unwrap();
            let bound = (BigRational::from_integer(BigInt::from(3)) * rho.clone() * h + rho)
                * BigRational::from_integer(BigInt::from(exact.node_count()));
            assert!(
                BigRational::from_integer(BigInt::from(found.node_count())) <= bound,
                "bridge {} vs exact {} violates the ratio bound",
                found.node_count(),
                exact.node_count()
            );
        }
    }

    #[test]
    fn mapping_two_node_example() {
        let net = two_node_network();
        let g = ExtendedGraph::build(&net);
        let inst = MulticastInstance::new(0, [1]);
        let sb = SatelliteBridge::single(ExtNodeId::Satellite(0, 2)).unwrap();
        let mapping = map_bridge_to_tree(&sb, &g, &inst).unwrap();
        assert_eq!(mapping.tree.nodes(), BTreeSet::from([0, 1]));
        assert_eq!(
            mapping.slot_map,
            BTreeMap::from([(0, BTreeSet::from([2]))])
        );
        mapping.verify_against(&sb, &net).unwrap();
    }

    #[test]
    fn mapping_single_nucleus_star() {
        // All bridge satellites on one hub nucleus: the tree is the star of
        // the hub over the terminals, and F(hub) collects the bridge slots.
        let net = Network::from_parts(
            3,
            vec![sched(&[3]), sched(&[1]), sched(&[2]), sched(&[1, 2])],
            [(0, 1), (0, 2), (0, 3)],
            None,
        );
        let g = ExtendedGraph::build(&net);
        let inst = MulticastInstance::new(1, [2, 3, 0]);
        let nodes = BTreeSet::from([ExtNodeId::Satellite(0, 1), ExtNodeId::Satellite(0, 2)]);
        let edges = BTreeSet::from([(ExtNodeId::Satellite(0, 1), ExtNodeId::Satellite(0, 2))]);
        let sb = SatelliteBridge::new(nodes, edges).unwrap();
        let mapping = map_bridge_to_tree(&sb, &g, &inst).unwrap();
        assert_eq!(mapping.tree.nodes(), BTreeSet::from([0, 1, 2, 3]));
        assert_eq!(mapping.tree.degree(0), 3);
        assert_eq!(
            mapping.slot_map,
            BTreeMap::from([(0, BTreeSet::from([1, 2]))])
        );
        mapping.verify_against(&sb, &net).unwrap();
    }

    #[test]
    fn mapping_guarantees_hold_on_random_bridges() {
        let mut rng = testutil::rng(409);
        let cfg = SolverConfig::default();
        for _ in 0..100 {
            let (net, inst) = testutil::random_connected_instance(&mut rng, 8, 4, 2);
            let g = ExtendedGraph::build(&net);
            let Ok(sb) = find_msb(&g, inst.terminals(), &cfg) else {
                continue;
            };
            let mapping = map_bridge_to_tree(&sb, &g, &inst).unwrap();
            mapping.verify_against(&sb, &net).unwrap();
            assert!(mapping.tree.spans(inst.terminals()));
            assert!(mapping.tree.is_subgraph_of(&net));
            assert_eq!(mapping.tree.root(), inst.source());
        }
    }

    #[test]
    fn solve_two_node_example() {
        let net = two_node_network();
        let inst = MulticastInstance::new(0, [1]);
        let plan = solve_memtcs(&net, &inst, &SolverConfig::default()).unwrap();
        assert_eq!(plan.tree.edges(), BTreeSet::from([(0, 1)]));
        assert_eq!(plan.schedule.get(0), Some(&BTreeSet::from([2])));
        let model = EnergyModel::new(10, 2).unwrap();
        assert_eq!(energy_cost(&plan, &model), 12);
    }

    #[test]
    fn solve_single_terminal_is_trivial() {
        let net = two_node_network();
        let inst = MulticastInstance::new(1, []);
        let plan = solve_memtcs(&net, &inst, &SolverConfig::default()).unwrap();
        assert_eq!(plan.tree.len(), 1);
        assert_eq!(plan.transmissions(), 0);
        let model = EnergyModel::new(10, 2).unwrap();
        assert_eq!(energy_cost(&plan, &model), 0);
    }

    #[test]
    fn solve_rejects_disconnected_terminals() {
        let net = Network::from_parts(2, vec![sched(&[1]), sched(&[1]), sched(&[1])], [], None);
        let inst = MulticastInstance::new(0, [2]);
        assert!(matches!(
            solve_memtcs(&net, &inst, &SolverConfig::default()),
            Err(Error::DisconnectedTerminals)
        ));
    }

    #[test]
    fn solve_is_deterministic_and_model_free() {
        let mut rng = testutil::rng(503);
        let cfg = SolverConfig::default();
        for _ in 0..40 {
            let (net, inst) = testutil::random_connected_instance(&mut rng, 9, 4, 2);
            let a = solve_memtcs(&net, &inst, &cfg).unwrap();
            let b = solve_memtcs(&net, &inst, &cfg).unwrap();
            assert_eq!(a, b, "identical inputs must give identical plans");
            // Energy prices only scale the reported cost.
            let small = EnergyModel::new(10, 2).unwrap();
            let big = EnergyModel::new(30, 6).unwrap();
            assert_eq!(energy_cost(&a, &big), 3 * energy_cost(&a, &small));
        }
    }

    #[test]
    fn solve_produces_feasible_spanning_plans() {
        let mut rng = testutil::rng(601);
        for steiner in [SteinerAlgorithm::Kmb, SteinerAlgorithm::Mehlhorn] {
            let cfg = SolverConfig { steiner };
            for _ in 0..60 {
                let (net, inst) = testutil::random_connected_instance(&mut rng, 9, 5, 2);
                let plan = solve_memtcs(&net, &inst, &cfg).unwrap();
                plan.check_well_formed(&net).unwrap();
                assert!(plan.tree.spans(inst.terminals()));
                assert!(is_feasible_schedule(&plan.tree, &plan.schedule, &net).unwrap());
                assert_eq!(plan.tree.root(), inst.source());
            }
        }
    }

    #[test]
    fn bridge_validation_rejects_malformed_input() {
        assert!(SatelliteBridge::new(BTreeSet::new(), BTreeSet::new()).is_err());
        assert!(SatelliteBridge::single(ExtNodeId::Nuclear(0)).is_err());
        let nodes = BTreeSet::from([ExtNodeId::Satellite(0, 1), ExtNodeId::Satellite(1, 1)]);
        // two nodes, zero edges: not a tree
        assert!(SatelliteBridge::new(nodes, BTreeSet::new()).is_err());
    }
}
