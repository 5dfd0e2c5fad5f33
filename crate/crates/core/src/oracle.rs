//! Exhaustive brute-force references for the optimization objects handled by
//! the solver: exact minimum hitting sets, exact minimum satellite covers and
//! bridges, the exact scattering value Ξ, and exact minimum-energy plans.
//!
//! Everything here favors exhaustive clarity over speed and refuses to run
//! outside an explicit [`OracleBudget`]. Outputs are canonical: enumeration
//! proceeds in a fixed order (subset size, then lexicographic), and the first
//! optimum found is returned, so paired tests are deterministic.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::extended::{ExtNodeId, ExtendedGraph};
use crate::graph::{DisjointSets, UnitGraph};
use crate::model::{
    DutySchedule, EnergyModel, MulticastInstance, MulticastPlan, MulticastTree, Network, NodeId,
    Slot, TransmissionSchedule,
};
use crate::solver::SatelliteBridge;
use crate::{Error, Result};

/// Hard caps enforced before any exponential enumeration starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    /// Maximum |V| of the base network.
    pub max_nodes: usize,
    /// Maximum working-period length K.
    pub max_k: Slot,
    /// Maximum number of enumerated candidates across one oracle call.
    pub max_subsets: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_nodes: 9,
            max_k: 5,
            max_subsets: 10_000_000,
        }
    }
}

impl OracleBudget {
    fn check_network(&self, net: &Network) -> Result<()> {
        if net.n_nodes() > self.max_nodes {
            return Err(Error::BudgetExceeded(format!(
                "network has {} nodes, budget allows {}",
                net.n_nodes(),
                self.max_nodes
            )));
        }
        if net.k() > self.max_k {
            return Err(Error::BudgetExceeded(format!(
                "working period {} exceeds budget {}",
                net.k(),
                self.max_k
            )));
        }
        Ok(())
    }
}

/// Shared enumeration counter guarding against runaway searches.
struct Counter {
    used: u64,
    limit: u64,
}

impl Counter {
    fn new(budget: &OracleBudget) -> Self {
        Counter {
            used: 0,
            limit: budget.max_subsets,
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            return Err(Error::BudgetExceeded(format!(
                "enumeration exceeded {} candidates",
                self.limit
            )));
        }
        Ok(())
    }
}

/// Visit all `k`-subsets of `0..n` in lexicographic order.
fn for_each_combination<T>(
    n: usize,
    k: usize,
    counter: &mut Counter,
    mut f: impl FnMut(&[usize]) -> ControlFlow<T>,
) -> Result<Option<T>> {
    if k > n {
        return Ok(None);
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        counter.tick()?;
        if let ControlFlow::Break(t) = f(&idx) {
            return Ok(Some(t));
        }
        // advance to the next combination
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            if idx[i] < n - (k - i) {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Minimum hitting set over an arbitrary indexed universe: smallest subset of
/// `0..universe` meeting every set, lexicographically first among minima.
fn exact_min_hitting_indices(
    sets: &[Vec<usize>],
    universe: usize,
    counter: &mut Counter,
) -> Result<Vec<usize>> {
    if sets.is_empty() {
        return Ok(Vec::new());
    }
    for size in 0..=universe {
        let hit = for_each_combination(universe, size, counter, |combo| {
            let all_hit = sets
                .iter()
                .all(|s| s.iter().any(|e| combo.binary_search(e).is_ok()));
            if all_hit {
                ControlFlow::Break(combo.to_vec())
            } else {
                ControlFlow::Continue(())
            }
        })?;
        if let Some(h) = hit {
            return Ok(h);
        }
    }
    unreachable!("the full universe hits every nonempty set")
}

/// Exact minimum hitting set of a slot-set collection, found by enumerating
/// subsets of the slot universe in increasing size (ties broken
/// lexicographically).
pub fn exact_min_hitting_set(
    collection: &[BTreeSet<Slot>],
    budget: &OracleBudget,
) -> Result<BTreeSet<Slot>> {
    for (i, set) in collection.iter().enumerate() {
        if set.is_empty() {
            return Err(Error::EmptySetInCollection(i));
        }
    }
    let universe: Vec<Slot> = collection
        .iter()
        .flatten()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let sets: Vec<Vec<usize>> = collection
        .iter()
        .map(|s| {
            s.iter()
                .map(|slot| universe.binary_search(slot).expect("slot in universe"))
                .collect()
        })
        .collect();
    let mut counter = Counter::new(budget);
    let hit = exact_min_hitting_indices(&sets, universe.len(), &mut counter)?;
    Ok(hit.into_iter().map(|i| universe[i]).collect())
}

/// Size of a minimum hitting set over bitmask-encoded sets. Fast path for the
/// Ξ computation, where only the cardinality matters.
fn min_hitting_size_masks(sets: &[u32], universe_bits: u32) -> u32 {
    if sets.is_empty() {
        return 0;
    }
    let mut best = u32::MAX;
    for mask in 0u32..(1 << universe_bits) {
        if mask.count_ones() < best && sets.iter().all(|s| s & mask != 0) {
            best = mask.count_ones();
        }
    }
    best
}

fn satellite_neighbor_sets(
    g: &ExtendedGraph,
    terminals: &BTreeSet<NodeId>,
) -> Result<Vec<Vec<usize>>> {
    let n = g.nuclear_count();
    let mut sets = Vec::with_capacity(terminals.len());
    for &m in terminals {
        if m >= n {
            return Err(Error::InvalidInput(format!("terminal {m} not in network")));
        }
        let sats: Vec<usize> = g
            .neighbors_flat(m)
            .iter()
            .filter(|&&j| g.is_satellite_index(j))
            .map(|&j| j - n)
            .collect();
        if sats.is_empty() {
            return Err(Error::UncoverableTerminal(m));
        }
        sets.push(sats);
    }
    Ok(sets)
}

/// Exact minimum satellite cover: the smallest satellite set such that every
/// terminal is adjacent to a member (no connectivity requirement).
pub fn exact_min_satellite_cover(
    g: &ExtendedGraph,
    terminals: &BTreeSet<NodeId>,
    budget: &OracleBudget,
) -> Result<BTreeSet<ExtNodeId>> {
    budget.check_network(g.base())?;
    let sets = satellite_neighbor_sets(g, terminals)?;
    let mut counter = Counter::new(budget);
    let cover = exact_min_hitting_indices(&sets, g.satellite_count(), &mut counter)?;
    let n = g.nuclear_count();
    Ok(cover.into_iter().map(|i| g.id_of(n + i)).collect())
}

/// Exact minimum satellite bridge: enumerate satellite subsets by increasing
/// size; the first whose induced sub-graph is connected and which covers every
/// terminal wins. Returns a BFS spanning tree of that subset.
pub fn exact_msb(
    g: &ExtendedGraph,
    terminals: &BTreeSet<NodeId>,
    budget: &OracleBudget,
) -> Result<SatelliteBridge> {
    budget.check_network(g.base())?;
    if terminals.is_empty() {
        return Err(Error::InvalidInput("terminal set is empty".into()));
    }
    let cover_sets = satellite_neighbor_sets(g, terminals)?;
    let sub = g.induced_satellite_subgraph();
    let n_sat = g.satellite_count();
    let mut counter = Counter::new(budget);
    for size in 1..=n_sat {
        let found = for_each_combination(n_sat, size, &mut counter, |combo| {
            let covers = cover_sets
                .iter()
                .all(|s| s.iter().any(|e| combo.binary_search(e).is_ok()));
            if covers && subset_connected(&sub.graph, combo) {
                ControlFlow::Break(combo.to_vec())
            } else {
                ControlFlow::Continue(())
            }
        })?;
        if let Some(chosen) = found {
            let ids: Vec<ExtNodeId> = chosen.iter().map(|&i| sub.id_of(i)).collect();
            let edges = spanning_tree_within(&sub.graph, &chosen);
            let edges: BTreeSet<(ExtNodeId, ExtNodeId)> = edges
                .into_iter()
                .map(|(a, b)| {
                    let (x, y) = (sub.id_of(a), sub.id_of(b));
                    (x.min(y), x.max(y))
                })
                .collect();
            return SatelliteBridge::new(ids.into_iter().collect(), edges);
        }
    }
    Err(Error::UncoverableTerminal(*terminals.first().expect("nonempty")))
}

fn subset_connected(g: &UnitGraph, subset: &[usize]) -> bool {
    if subset.len() <= 1 {
        return true;
    }
    let inside = |x: usize| subset.binary_search(&x).is_ok();
    let mut seen = vec![false; subset.len()];
    seen[0] = true;
    let mut stack = vec![subset[0]];
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for &v in g.neighbors(u) {
            if let Ok(pos) = subset.binary_search(&v) {
                if !seen[pos] && inside(v) {
                    seen[pos] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
    }
    count == subset.len()
}

/// BFS spanning tree of the sub-graph induced by `subset` (assumed connected),
/// rooted at its smallest member.
fn spanning_tree_within(g: &UnitGraph, subset: &[usize]) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    if subset.len() <= 1 {
        return edges;
    }
    let mut seen = BTreeSet::from([subset[0]]);
    let mut queue = std::collections::VecDeque::from([subset[0]]);
    while let Some(u) = queue.pop_front() {
        for &v in g.neighbors(u) {
            if subset.binary_search(&v).is_ok() && seen.insert(v) {
                edges.push((u, v));
                queue.push_back(v);
            }
        }
    }
    edges
}

/// Visit every tree in `net` spanning `terminals`, as `(nodes, edges)` pairs:
/// connected node supersets of the terminal set first, then every spanning
/// tree of each induced sub-graph (edge subsets with cycle pruning).
fn for_each_spanning_tree<T>(
    net: &Network,
    terminals: &BTreeSet<NodeId>,
    counter: &mut Counter,
    mut f: impl FnMut(&[NodeId], &[(NodeId, NodeId)]) -> ControlFlow<T>,
) -> Result<Option<T>> {
    let n = net.n_nodes();
    let others: Vec<NodeId> = (0..n).filter(|u| !terminals.contains(u)).collect();
    for mask in 0u64..(1 << others.len()) {
        let mut nodes: Vec<NodeId> = terminals.iter().copied().collect();
        for (bit, &u) in others.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                nodes.push(u);
            }
        }
        nodes.sort_unstable();
        let in_set = |x: NodeId| nodes.binary_search(&x).is_ok();
        let edges: Vec<(NodeId, NodeId)> = net
            .edges()
            .filter(|&(u, v)| u != v && in_set(u) && in_set(v))
            .collect();
        if edges.len() + 1 < nodes.len() {
            continue;
        }
        if nodes.len() == 1 {
            counter.tick()?;
            if let ControlFlow::Break(t) = f(&nodes, &[]) {
                return Ok(Some(t));
            }
            continue;
        }
        let want = nodes.len() - 1;
        let result = for_each_combination(edges.len(), want, counter, |combo| {
            let mut dsu = DisjointSets::new(nodes.len());
            for &ei in combo {
                let (u, v) = edges[ei];
                let (iu, iv) = (
                    nodes.binary_search(&u).expect("node present"),
                    nodes.binary_search(&v).expect("node present"),
                );
                if !dsu.union(iu, iv) {
                    return ControlFlow::Continue(()); // cycle
                }
            }
            let chosen: Vec<(NodeId, NodeId)> = combo.iter().map(|&ei| edges[ei]).collect();
            f(&nodes, &chosen)
        })?;
        if result.is_some() {
            return Ok(result);
        }
    }
    Ok(None)
}

/// Ξ of one tree: Σ over degree->1 nodes of the minimum hitting-set size of
/// their tree-neighbor schedules.
fn xi_of_tree(tree: &MulticastTree, net: &Network) -> u64 {
    let universe: Vec<Slot> = (1..=net.k()).collect();
    let mut total = 0u64;
    for u in tree.d_plus() {
        let masks: Vec<u32> = tree
            .tree_neighbors(u)
            .into_iter()
            .map(|v| {
                net.schedule(v)
                    .iter()
                    .map(|slot| {
                        1u32 << universe.binary_search(&slot).expect("slot within 1..=K")
                    })
                    .fold(0u32, |a, b| a | b)
            })
            .collect();
        total += u64::from(min_hitting_size_masks(&masks, universe.len() as u32));
    }
    total
}

/// Exact minimum isotropic-scattering value: enumerates every tree spanning
/// the terminals and returns the minimum Ξ together with the first witness
/// tree attaining it (rooted at its smallest node).
pub fn exact_mist_xi(
    net: &Network,
    terminals: &BTreeSet<NodeId>,
    budget: &OracleBudget,
) -> Result<(u64, MulticastTree)> {
    budget.check_network(net)?;
    if terminals.is_empty() {
        return Err(Error::InvalidInput("terminal set is empty".into()));
    }
    let mut counter = Counter::new(budget);
    let mut best: Option<(u64, MulticastTree)> = None;
    for_each_spanning_tree::<()>(net, terminals, &mut counter, |nodes, edges| {
        let tree = MulticastTree::from_edges(nodes[0], edges).expect("valid spanning tree");
        let xi = xi_of_tree(&tree, net);
        if best.as_ref().is_none_or(|(b, _)| xi < *b) {
            best = Some((xi, tree));
        }
        ControlFlow::Continue(())
    })?;
    best.ok_or(Error::DisconnectedTerminals)
}

/// Exact optimum plan: enumerates every tree spanning the terminals, roots it
/// at the source, equips each non-leaf with the exact minimum hitting set of
/// its children's schedules, and keeps the plan with minimum Π (first found
/// among ties).
pub fn exact_memtcs(
    net: &Network,
    inst: &MulticastInstance,
    model: &EnergyModel,
    budget: &OracleBudget,
) -> Result<MulticastPlan> {
    budget.check_network(net)?;
    inst.check_against(net)?;
    let mut counter = Counter::new(budget);
    let mut best: Option<(u64, MulticastPlan)> = None;
    let mut failure: Option<Error> = None;
    for_each_spanning_tree::<()>(net, inst.terminals(), &mut counter, |_, edges| {
        let tree = MulticastTree::from_edges(inst.source(), edges).expect("valid spanning tree");
        let mut slots = BTreeMap::new();
        for u in tree.nl() {
            let collection: Vec<BTreeSet<Slot>> = tree
                .children(u)
                .into_iter()
                .map(|c| net.schedule(c).slots().clone())
                .collect();
            match exact_min_hitting_set(&collection, budget) {
                Ok(b) => {
                    slots.insert(u, b);
                }
                Err(e) => {
                    failure = Some(e);
                    return ControlFlow::Break(());
                }
            }
        }
        let plan = MulticastPlan::new(tree, TransmissionSchedule::new(slots));
        let cost = crate::model::energy_cost(&plan, model);
        if best.as_ref().is_none_or(|(b, _)| cost < *b) {
            best = Some((cost, plan));
        }
        ControlFlow::Continue(())
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    best.map(|(_, p)| p).ok_or(Error::DisconnectedTerminals)
}

/// Exact minimum Steiner edge count in a unit-weight graph, by enumerating
/// node supersets of the terminal set in increasing size.
pub fn exact_steiner_edge_count(
    g: &UnitGraph,
    terminals: &[usize],
    budget: &OracleBudget,
) -> Result<usize> {
    if terminals.is_empty() {
        return Err(Error::InvalidInput("no Steiner terminals".into()));
    }
    let term: BTreeSet<usize> = terminals.iter().copied().collect();
    let others: Vec<usize> = (0..g.n()).filter(|u| !term.contains(u)).collect();
    let mut counter = Counter::new(budget);
    for extra in 0..=others.len() {
        let found = for_each_combination(others.len(), extra, &mut counter, |combo| {
            let mut nodes: Vec<usize> = term.iter().copied().collect();
            nodes.extend(combo.iter().map(|&i| others[i]));
            nodes.sort_unstable();
            if subset_connected(g, &nodes) {
                ControlFlow::Break(nodes.len() - 1)
            } else {
                ControlFlow::Continue(())
            }
        })?;
        if let Some(edge_count) = found {
            return Ok(edge_count);
        }
    }
    Err(Error::DisconnectedTerminals)
}

/// Star instance encoding a minimum-hitting-set problem: a hub `x = 0` joined
/// to one leaf per subset, the leaf's schedule listing the subset's elements,
/// all nodes terminals, `e_s = 1`, `e_r = 0`. The optimum multicast energy of
/// this instance equals the exact minimum hitting-set size.
pub fn star_reduction_instance(
    collection: &[BTreeSet<Slot>],
) -> Result<(Network, MulticastInstance, EnergyModel)> {
    if collection.is_empty() {
        return Err(Error::InvalidInput("empty collection".into()));
    }
    let mut k = 0;
    for (i, set) in collection.iter().enumerate() {
        if set.is_empty() {
            return Err(Error::EmptySetInCollection(i));
        }
        k = k.max(*set.last().expect("nonempty"));
    }
    let mut schedules = vec![DutySchedule::new([1])]; // hub; never receives
    let mut edges = Vec::new();
    for (j, set) in collection.iter().enumerate() {
        schedules.push(DutySchedule::new(set.iter().copied()));
        edges.push((0, j + 1));
    }
    let net = Network::from_parts(k, schedules, edges, None);
    let inst = MulticastInstance::new(0, 0..collection.len() + 1);
    let model = EnergyModel::new(1, 0)?;
    Ok((net, inst, model))
}

/// n-th harmonic number as an exact rational.
pub fn harmonic(n: u64) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::InvalidInput("harmonic number needs n >= 1".into()));
    }
    let mut acc = BigRational::zero();
    for k in 1..=n {
        acc += BigRational::new(BigInt::from(1), BigInt::from(k));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::energy_cost;
    use crate::testutil;
    use rand::Rng;

    fn set(slots: &[Slot]) -> BTreeSet<Slot> {
        slots.iter().copied().collect()
    }

    fn sched(slots: &[Slot]) -> DutySchedule {
        DutySchedule::new(slots.iter().copied())
    }

    fn budget() -> OracleBudget {
        OracleBudget::default()
    }

    fn two_node_network() -> Network {
        Network::from_parts(2, vec![sched(&[1]), sched(&[2])], [(0, 1)], None)
    }

    #[test]
    fn min_hitting_set_examples() {
        assert_eq!(
            exact_min_hitting_set(&[set(&[1]), set(&[2])], &budget()).unwrap(),
            set(&[1, 2])
        );
        let h = exact_min_hitting_set(&[set(&[1, 2]), set(&[2, 3]), set(&[3, 1])], &budget())
            .unwrap();
        assert_eq!(h.len(), 2);
        assert_eq!(h, set(&[1, 2]), "lexicographically first optimum");
        assert_eq!(
            exact_min_hitting_set(&[set(&[4, 7]), set(&[7, 9]), set(&[2, 7])], &budget()).unwrap(),
            set(&[7])
        );
        assert!(matches!(
            exact_min_hitting_set(&[set(&[])], &budget()),
            Err(Error::EmptySetInCollection(0))
        ));
        assert_eq!(exact_min_hitting_set(&[], &budget()).unwrap(), set(&[]));
    }

    #[test]
    fn msb_two_node_example_is_single_satellite() {
        let net = two_node_network();
        let g = ExtendedGraph::build(&net);
        let sb = exact_msb(&g, &BTreeSet::from([0, 1]), &budget()).unwrap();
        assert_eq!(sb.node_count(), 1);
        assert!(sb.covers(&g, &BTreeSet::from([0, 1])));
        assert_eq!(
            sb.nodes().first().copied().unwrap(),
            ExtNodeId::Satellite(0, 2),
            "lexicographically first single-node bridge"
        );
    }

    #[test]
    fn msb_needs_two_satellites_for_distant_terminals() {
        // Path a - x - y - c; only satellites of x and y can cover a and c,
        // and no single satellite reaches both.
        let net = Network::from_parts(
            2,
            vec![sched(&[1]), sched(&[2]), sched(&[1]), sched(&[2])],
            [(0, 1), (1, 2), (2, 3)],
            None,
        );
        let g = ExtendedGraph::build(&net);
        let sb = exact_msb(&g, &BTreeSet::from([0, 3]), &budget()).unwrap();
        assert_eq!(sb.node_count(), 2);
        assert!(sb.covers(&g, &BTreeSet::from([0, 3])));
    }

    #[test]
    fn mist_two_node_tree_has_zero_xi() {
        let net = two_node_network();
        let (xi, tree) = exact_mist_xi(&net, &BTreeSet::from([0, 1]), &budget()).unwrap();
        assert_eq!(xi, 0);
        assert_eq!(tree.len(), 2);
    }

    #[test]
    fn mist_forced_internal_node() {
        // Path a - b - c with Γ(a) = {1}, Γ(c) = {2}: b must hit both.
        let net = Network::from_parts(
            2,
            vec![sched(&[1]), sched(&[1, 2]), sched(&[2])],
            [(0, 1), (1, 2)],
            None,
        );
        let (xi, tree) = exact_mist_xi(&net, &BTreeSet::from([0, 2]), &budget()).unwrap();
        assert_eq!(xi, 2);
        assert_eq!(tree.nodes(), BTreeSet::from([0, 1, 2]));
    }

    #[test]
    fn memtcs_two_node_example() {
        let net = two_node_network();
        let inst = MulticastInstance::new(0, [1]);
        let model = EnergyModel::new(10, 2).unwrap();
        let plan = exact_memtcs(&net, &inst, &model, &budget()).unwrap();
        assert_eq!(energy_cost(&plan, &model), 12);
        assert_eq!(plan.transmissions(), 1);
    }

    #[test]
    fn memtcs_single_terminal_is_free() {
        let net = two_node_network();
        let inst = MulticastInstance::new(1, []);
        let model = EnergyModel::new(10, 2).unwrap();
        let plan = exact_memtcs(&net, &inst, &model, &budget()).unwrap();
        assert_eq!(energy_cost(&plan, &model), 0);
        assert_eq!(plan.tree.len(), 1);
    }

    #[test]
    fn memtcs_rejects_disconnected_terminals() {
        let net = Network::from_parts(2, vec![sched(&[1]), sched(&[1]), sched(&[1])], [], None);
        let inst = MulticastInstance::new(0, [2]);
        let model = EnergyModel::new(10, 2).unwrap();
        assert!(matches!(
            exact_memtcs(&net, &inst, &model, &budget()),
            Err(Error::DisconnectedTerminals)
        ));
    }

    #[test]
    fn budget_rejects_large_networks() {
        let net = Network::from_parts(3, vec![sched(&[1]); 12], [(0, 1)], None);
        assert!(matches!(
            exact_mist_xi(&net, &BTreeSet::from([0, 1]), &budget()),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn star_reduction_examples() {
        let (net, inst, model) = star_reduction_instance(&[set(&[1]), set(&[2])]).unwrap();
        assert_eq!(net.n_nodes(), 3);
        assert_eq!(net.k(), 2);
        assert_eq!(net.schedule(1).slots(), &set(&[1]));
        assert_eq!(net.schedule(2).slots(), &set(&[2]));
        assert_eq!(net.n_edges(), 2);
        assert_eq!(inst.source(), 0);
        assert_eq!(inst.len(), 3);
        assert_eq!((model.e_s(), model.e_r()), (1, 0));

        let (net, _, _) = star_reduction_instance(&[set(&[1, 2, 3])]).unwrap();
        assert_eq!(net.n_nodes(), 2);
        assert!(star_reduction_instance(&[set(&[])]).is_err());
        assert!(star_reduction_instance(&[]).is_err());
    }

    #[test]
    fn star_reduction_round_trips() {
        let mut rng = testutil::rng(31);
        for _ in 0..50 {
            let q = rng.random_range(1..=6);
            let collection: Vec<BTreeSet<Slot>> = (0..q)
                .map(|_| {
                    let len = rng.random_range(1..=4usize);
                    let picks = rand::seq::index::sample(&mut rng, 6, len);
                    picks.iter().map(|i| i as Slot + 1).collect()
                })
                .collect();
            let (net, _, _) = star_reduction_instance(&collection).unwrap();
            let decoded: Vec<BTreeSet<Slot>> = (1..net.n_nodes())
                .map(|j| net.schedule(j).slots().clone())
                .collect();
            assert_eq!(decoded, collection);
        }
    }

    /// The optimum energy of a reduction star at prices (1, 0) equals the
    /// minimum hitting-set size of the encoded collection.
    #[test]
    fn star_reduction_energy_equals_hitting_number() {
        let mut rng = testutil::rng(43);
        for _ in 0..25 {
            let q = rng.random_range(1..=5);
            let collection: Vec<BTreeSet<Slot>> = (0..q)
                .map(|_| {
                    let len = rng.random_range(1..=4usize);
                    let picks = rand::seq::index::sample(&mut rng, 5, len);
                    picks.iter().map(|i| i as Slot + 1).collect()
                })
                .collect();
            let (net, inst, model) = star_reduction_instance(&collection).unwrap();
            let plan = exact_memtcs(&net, &inst, &model, &budget()).unwrap();
            let mhs = exact_min_hitting_set(&collection, &budget()).unwrap();
            assert_eq!(energy_cost(&plan, &model), mhs.len() as u64);
        }
    }

    #[test]
    fn harmonic_values() {
        let one = BigRational::from_integer(BigInt::from(1));
        assert_eq!(harmonic(1).unwrap(), one);
        assert_eq!(
            harmonic(2).unwrap(),
            BigRational::new(BigInt::from(3), BigInt::from(2))
        );
        assert_eq!(
            harmonic(4).unwrap(),
            BigRational::new(BigInt::from(25), BigInt::from(12))
        );
        assert!(harmonic(0).is_err());
    }

    #[test]
    fn steiner_count_on_path() {
        let g = crate::graph::UnitGraph::from_edges(4, [(0, 1), (1, 2), (2, 3)]);
        assert_eq!(exact_steiner_edge_count(&g, &[0, 3], &budget()).unwrap(), 3);
        assert_eq!(exact_steiner_edge_count(&g, &[1], &budget()).unwrap(), 0);
        let split = crate::graph::UnitGraph::from_edges(4, [(0, 1), (2, 3)]);
        assert!(matches!(
            exact_steiner_edge_count(&split, &[0, 3], &budget()),
            Err(Error::DisconnectedTerminals)
        ));
    }
}
