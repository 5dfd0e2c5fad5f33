//! Duty-cycle-oblivious comparison algorithms: shortest-path trees, the
//! approximate minimum Steiner tree, and a minimal-forwarder heuristic (MNT),
//! each completed into a plan by greedy hitting-set scheduling per forwarder.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, VecDeque};

use crate::graph::UnitGraph;
use crate::model::{
    greedy_hitting_set, MulticastInstance, MulticastPlan, MulticastTree, Network, NodeId, Slot,
    TransmissionSchedule,
};
use crate::solver::{steiner_tree_approx, SolverConfig};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineKind {
    Spt,
    Amst,
    Mnt,
}

/// Union of hop-count shortest paths from the source to each terminal.
/// Each node's parent is its smallest-id neighbor one BFS level closer to
/// the source, so terminal depths always equal their BFS distances.
pub fn spt_tree(net: &Network, inst: &MulticastInstance) -> Result<MulticastTree> {
    inst.check_against(net)?;
    let s = inst.source();
    let n = net.n_nodes();
    let mut dist: Vec<Option<u32>> = vec![None; n];
    dist[s] = Some(0);
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].expect("queued");
        for &v in net.neighbors(u) {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    let parent_of = |v: NodeId| -> NodeId {
        let dv = dist[v].expect("reachable");
        *net.neighbors(v)
            .iter()
            .find(|&&u| dist[u] == Some(dv - 1))
            .expect("a BFS predecessor exists")
    };
    let mut edges = BTreeSet::new();
    for &m in inst.terminals() {
        if dist[m].is_none() {
            return Err(Error::DisconnectedTerminals);
        }
        let mut cur = m;
        while cur != s {
            let p = parent_of(cur);
            edges.insert((p.min(cur), p.max(cur)));
            cur = p;
        }
    }
    MulticastTree::from_edges(s, &edges.into_iter().collect::<Vec<_>>())
}

/// Approximate minimum Steiner tree over the unit-weight base graph,
/// rooted at the source.
pub fn amst_tree(
    net: &Network,
    inst: &MulticastInstance,
    cfg: &SolverConfig,
) -> Result<MulticastTree> {
    inst.check_against(net)?;
    let g = UnitGraph::from_edges(net.n_nodes(), net.edges());
    let terms: Vec<usize> = inst.terminals().iter().copied().collect();
    let edges = steiner_tree_approx(&g, &terms, cfg)?;
    if edges.is_empty() {
        return Ok(MulticastTree::single(inst.source()));
    }
    MulticastTree::from_edges(inst.source(), &edges)
}

/// Minimal-forwarder heuristic: grow the tree from the source, each round
/// attaching the terminal currently cheapest in "new forwarders added" via
/// such a cheapest path. Entering through a node that already forwards is
/// free, starting at a current leaf costs one, and every fresh intermediate
/// node costs one.
pub fn mnt_tree(net: &Network, inst: &MulticastInstance) -> Result<MulticastTree> {
    inst.check_against(net)?;
    let s = inst.source();
    let n = net.n_nodes();
    let mut parent: BTreeMap<NodeId, NodeId> = BTreeMap::new();
    let mut in_tree = vec![false; n];
    let mut has_child = vec![false; n];
    in_tree[s] = true;

    let mut remaining: BTreeSet<NodeId> = inst.terminals().clone();
    remaining.remove(&s);
    loop {
        remaining.retain(|&m| !in_tree[m]);
        if remaining.is_empty() {
            break;
        }

        // Dijkstra over forwarder counts, seeded with the whole tree.
        let mut dist: Vec<Option<u32>> = vec![None; n];
        let mut pred: Vec<Option<NodeId>> = vec![None; n];
        let mut heap: BinaryHeap<Reverse<(u32, NodeId)>> = BinaryHeap::new();
        for x in 0..n {
            if in_tree[x] {
                let d = u32::from(!has_child[x]);
                dist[x] = Some(d);
                heap.push(Reverse((d, x)));
            }
        }
        while let Some(Reverse((d, u))) = heap.pop() {
            if dist[u] != Some(d) {
                continue;
            }
            // Leaving a non-tree node makes it a forwarder.
            let step = u32::from(!in_tree[u]);
            for &v in net.neighbors(u) {
                if in_tree[v] {
                    continue;
                }
                let cand = d + step;
                if dist[v].is_none_or(|old| cand < old) {
                    dist[v] = Some(cand);
                    pred[v] = Some(u);
                    heap.push(Reverse((cand, v)));
                }
            }
        }

        let mut best: Option<(u32, NodeId)> = None;
        for &m in &remaining {
            let Some(d) = dist[m] else {
                return Err(Error::DisconnectedTerminals);
            };
            if best.is_none_or(|b| (d, m) < b) {
                best = Some((d, m));
            }
        }
        let (_, target) = best.expect("remaining is nonempty");

        let mut path = vec![target];
        let mut cur = target;
        while !in_tree[cur] {
            cur = pred[cur].expect("target was reached from the tree");
            path.push(cur);
        }
        path.reverse();
        for pair in path.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            parent.insert(b, a);
            in_tree[b] = true;
            has_child[a] = true;
        }
    }

    let edges: Vec<(NodeId, NodeId)> = parent.iter().map(|(&c, &p)| (p, c)).collect();
    MulticastTree::from_edges(s, &edges)
}

/// Greedy hitting-set schedule for an arbitrary tree: each forwarder
/// transmits on a greedy hitting set of its children's active-slot sets.
pub fn schedule_tree(tree: &MulticastTree, net: &Network) -> Result<TransmissionSchedule> {
    let mut slots = BTreeMap::new();
    for u in tree.nl() {
        let collection: Vec<BTreeSet<Slot>> = tree
            .children(u)
            .into_iter()
            .map(|c| net.schedule(c).slots().clone())
            .collect();
        slots.insert(u, greedy_hitting_set(&collection)?);
    }
    Ok(TransmissionSchedule::new(slots))
}

/// Build the chosen baseline tree and schedule it greedily.
pub fn run_baseline(
    kind: BaselineKind,
    net: &Network,
    inst: &MulticastInstance,
    cfg: &SolverConfig,
) -> Result<MulticastPlan> {
    let tree = match kind {
        BaselineKind::Spt => spt_tree(net, inst)?,
        BaselineKind::Amst => amst_tree(net, inst, cfg)?,
        BaselineKind::Mnt => mnt_tree(net, inst)?,
    };
    let schedule = schedule_tree(&tree, net)?;
    Ok(MulticastPlan::new(tree, schedule))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{energy_cost, is_feasible_schedule, DutySchedule, EnergyModel};
    use crate::oracle::{exact_min_hitting_set, exact_steiner_edge_count, harmonic, OracleBudget};
    use crate::testutil;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn sched(slots: &[Slot]) -> DutySchedule {
        DutySchedule::new(slots.iter().copied())
    }

    fn path_network(n: usize) -> Network {
        let edges: Vec<(NodeId, NodeId)> = (0..n - 1).map(|u| (u, u + 1)).collect();
        Network::from_parts(2, vec![sched(&[1]); n], edges, None)
    }

    #[test]
    fn spt_on_path_is_the_path() {
        let net = path_network(5);
        let inst = MulticastInstance::new(0, [4]);
        let tree = spt_tree(&net, &inst).unwrap();
        assert_eq!(
            tree.edges(),
            BTreeSet::from([(0, 1), (1, 2), (2, 3), (3, 4)])
        );
    }

    #[test]
    fn spt_single_terminal() {
        let net = path_network(3);
        let inst = MulticastInstance::new(1, []);
        let tree = spt_tree(&net, &inst).unwrap();
        assert_eq!(tree.len(), 1);
    }

    #[test]
    fn spt_depths_equal_bfs_distances() {
        let mut rng = testutil::rng(77);
        for _ in 0..100 {
            let (net, inst) = testutil::random_connected_instance(&mut rng, 12, 3, 2);
            let tree = spt_tree(&net, &inst).unwrap();
            let g = crate::graph::UnitGraph::from_edges(net.n_nodes(), net.edges());
            let (dist, _) = g.bfs(inst.source());
            for &m in inst.terminals() {
                let mut depth = 0;
                let mut cur = m;
                while let Some(p) = tree.parent(cur) {
                    cur = p;
                    depth += 1;
                }
                assert_eq!(Some(depth), dist[m], "terminal {m} depth");
            }
        }
    }

    #[test]
    fn amst_spanning_all_nodes_of_a_tree_network_returns_it() {
        let net = path_network(4);
        let inst = MulticastInstance::new(0, [1, 2, 3]);
        let tree = amst_tree(&net, &inst, &SolverConfig::default()).unwrap();
        assert_eq!(tree.edges(), net.edges().collect());
    }

    #[test]
    fn amst_within_factor_two_of_exact_steiner() {
        let mut rng = testutil::rng(88);
        let budget = OracleBudget::default();
        let cfg = SolverConfig::default();
        for _ in 0..60 {
            let (net, inst) = testutil::random_connected_instance(&mut rng, 9, 3, 2);
            let tree = amst_tree(&net, &inst, &cfg).unwrap();
            assert!(tree.spans(inst.terminals()));
            assert!(tree.is_subgraph_of(&net));
            let g = crate::graph::UnitGraph::from_edges(net.n_nodes(), net.edges());
            let terms: Vec<usize> = inst.terminals().iter().copied().collect();
            let exact = exact_steiner_edge_count(&g, &terms, &budget).unwrap();
            assert!(tree.edges().len() <= 2 * exact.max(1));
        }
    }

    #[test]
    fn mnt_star_uses_single_forwarder() {
        // Source at the hub of a star: one forwarder suffices.
        let edges: Vec<(NodeId, NodeId)> = (1..6).map(|v| (0, v)).collect();
        let net = Network::from_parts(2, vec![sched(&[1]); 6], edges, None);
        let inst = MulticastInstance::new(0, 1..6);
        let tree = mnt_tree(&net, &inst).unwrap();
        assert_eq!(tree.nl(), BTreeSet::from([0]));
        assert_eq!(tree.len(), 6);
    }

    #[test]
    fn mnt_on_path_equals_spt() {
        let net = path_network(5);
        let inst = MulticastInstance::new(0, [4]);
        assert_eq!(
            mnt_tree(&net, &inst).unwrap().edges(),
            spt_tree(&net, &inst).unwrap().edges()
        );
    }

    #[test]
    fn mnt_has_no_more_forwarders_than_spt_on_average() {
        let mut rng = testutil::rng(99);
        let mut mnt_total = 0usize;
        let mut spt_total = 0usize;
        for _ in 0..120 {
            let (net, inst) = testutil::random_connected_instance(&mut rng, 14, 3, 3);
            let mnt = mnt_tree(&net, &inst).unwrap();
            let spt = spt_tree(&net, &inst).unwrap();
            assert!(mnt.spans(inst.terminals()));
            assert!(mnt.is_subgraph_of(&net));
            mnt_total += mnt.nl().len();
            spt_total += spt.nl().len();
        }
        assert!(
            mnt_total <= spt_total,
            "MNT forwarders {mnt_total} should not exceed SPT's {spt_total} on average"
        );
    }

    #[test]
    fn schedule_tree_examples() {
        let net = Network::from_parts(
            5,
            vec![sched(&[1]), sched(&[2]), sched(&[2, 5])],
            [(0, 1), (0, 2)],
            None,
        );
        let tree = MulticastTree::from_edges(0, &[(0, 1), (0, 2)]).unwrap();
        let schedule = schedule_tree(&tree, &net).unwrap();
        assert_eq!(schedule.get(0), Some(&BTreeSet::from([2])));

        let net = Network::from_parts(
            3,
            vec![sched(&[1]), sched(&[1]), sched(&[2]), sched(&[3])],
            [(0, 1), (0, 2), (0, 3)],
            None,
        );
        let tree = MulticastTree::from_edges(0, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let schedule = schedule_tree(&tree, &net).unwrap();
        assert_eq!(schedule.get(0), Some(&BTreeSet::from([1, 2, 3])));
    }

    #[test]
    fn schedules_are_feasible_and_near_optimal_per_node() {
        let mut rng = testutil::rng(111);
        let budget = OracleBudget::default();
        for _ in 0..60 {
            let net = testutil::random_network(&mut rng, 8, 4, 0.5);
            let tree = testutil::random_spanning_tree(&net, &mut rng);
            let schedule = schedule_tree(&tree, &net).unwrap();
            assert!(is_feasible_schedule(&tree, &schedule, &net).unwrap());
            for u in tree.nl() {
                let coll: Vec<BTreeSet<Slot>> = tree
                    .children(u)
                    .into_iter()
                    .map(|c| net.schedule(c).slots().clone())
                    .collect();
                let exact = exact_min_hitting_set(&coll, &budget).unwrap();
                let max_freq = (1..=net.k())
                    .map(|slot| coll.iter().filter(|s| s.contains(&slot)).count())
                    .max()
                    .unwrap_or(0)
                    .max(1);
                let bound = harmonic(max_freq as u64).unwrap()
                    * BigRational::from_integer(BigInt::from(exact.len()));
                let got = schedule.get(u).expect("forwarder scheduled").len();
                assert!(
                    BigRational::from_integer(BigInt::from(got)) <= bound,
                    "node {u}: |B|={got} exceeds H({max_freq})·{}",
                    exact.len()
                );
            }
        }
    }

    #[test]
    fn run_baseline_two_node_costs_one_hop() {
        let net = Network::from_parts(2, vec![sched(&[1]), sched(&[2])], [(0, 1)], None);
        let inst = MulticastInstance::new(0, [1]);
        let model = EnergyModel::new(10, 2).unwrap();
        for kind in [BaselineKind::Spt, BaselineKind::Amst, BaselineKind::Mnt] {
            let plan = run_baseline(kind, &net, &inst, &SolverConfig::default()).unwrap();
            assert_eq!(
                energy_cost(&plan, &model),
                model.e_s() + model.e_r(),
                "{kind:?}"
            );
        }
    }

    #[test]
    fn all_baselines_feasible_on_random_instances() {
        let mut rng = testutil::rng(222);
        let cfg = SolverConfig::default();
        for _ in 0..60 {
            let (net, inst) = testutil::random_connected_instance(&mut rng, 12, 4, 2);
            for kind in [BaselineKind::Spt, BaselineKind::Amst, BaselineKind::Mnt] {
                let plan = run_baseline(kind, &net, &inst, &cfg).unwrap();
                plan.check_well_formed(&net).unwrap();
                assert!(plan.tree.spans(inst.terminals()));
                assert!(is_feasible_schedule(&plan.tree, &plan.schedule, &net).unwrap());
            }
        }
    }
}
