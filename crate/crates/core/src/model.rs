//! Domain types for duty-cycled networks, multicast trees, transmission
//! schedules and the total-energy objective.
//!
//! Slots are 1-based (`1..=K`) and the working-period length `K` is a
//! per-network constant. All types are immutable after construction and all
//! operations are pure functions of their inputs.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::{Error, Result};

/// Dense node identifier: nodes of a network are `0..n`.
pub type NodeId = usize;
/// 1-based slot index inside the working period.
pub type Slot = u32;

/// The set of active (receive-capable) slots of one node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DutySchedule {
    active: BTreeSet<Slot>,
}

impl DutySchedule {
    pub fn new(slots: impl IntoIterator<Item = Slot>) -> Self {
        DutySchedule {
            active: slots.into_iter().collect(),
        }
    }

    pub fn contains(&self, slot: Slot) -> bool {
        self.active.contains(&slot)
    }

    pub fn slots(&self) -> &BTreeSet<Slot> {
        &self.active
    }

    pub fn iter(&self) -> impl Iterator<Item = Slot> + '_ {
        self.active.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.active.len()
    }

    pub fn is_empty(&self) -> bool {
        self.active.is_empty()
    }

    /// Smallest active slot, if any. Used for the deterministic choice where
    /// an arbitrary slot of a child schedule is acceptable.
    pub fn min_slot(&self) -> Option<Slot> {
        self.active.first().copied()
    }
}

/// An undirected duty-cycled network: nodes `0..n`, an edge set, a working
/// period of `k` slots and one [`DutySchedule`] per node.
///
/// Construction performs no validation so that diagnostics
/// ([`validate_network`]) can inspect malformed inputs (e.g. parsed files).
/// Algorithms assume a network that validates cleanly.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    k: Slot,
    schedules: Vec<DutySchedule>,
    edges: BTreeSet<(NodeId, NodeId)>,
    positions: Option<Vec<(f64, f64)>>,
    adjacency: Vec<Vec<NodeId>>,
}

impl Network {
    /// Assemble a network from raw parts. Edges are normalized to `(min,max)`
    /// and deduplicated; self-loops and edges referencing unknown nodes are
    /// kept in the edge set (so validation can report them) but excluded from
    /// adjacency.
    pub fn from_parts(
        k: Slot,
        schedules: Vec<DutySchedule>,
        edges: impl IntoIterator<Item = (NodeId, NodeId)>,
        positions: Option<Vec<(f64, f64)>>,
    ) -> Self {
        let n = schedules.len();
        let edges: BTreeSet<(NodeId, NodeId)> = edges
            .into_iter()
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect();
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &edges {
            if u != v && u < n && v < n {
                adjacency[u].push(v);
                adjacency[v].push(u);
            }
        }
        for nb in &mut adjacency {
            nb.sort_unstable();
            nb.dedup();
        }
        Network {
            k,
            schedules,
            edges,
            positions,
            adjacency,
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.schedules.len()
    }

    pub fn k(&self) -> Slot {
        self.k
    }

    pub fn schedule(&self, u: NodeId) -> &DutySchedule {
        &self.schedules[u]
    }

    pub fn schedules(&self) -> &[DutySchedule] {
        &self.schedules
    }

    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.edges.iter().copied()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    /// Sorted neighbor list of `u`.
    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.adjacency[u]
    }

    pub fn positions(&self) -> Option<&[(f64, f64)]> {
        self.positions.as_deref()
    }

    /// Δ: the maximum node degree.
    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// True when every listed node lies in a single connected component.
    pub fn all_connected(&self, nodes: &BTreeSet<NodeId>) -> bool {
        let mut it = nodes.iter();
        let Some(&start) = it.next() else { return true };
        if start >= self.n_nodes() {
            return false;
        }
        let mut seen = vec![false; self.n_nodes()];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &v in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        nodes.iter().all(|&m| m < self.n_nodes() && seen[m])
    }
}

/// One violation found by [`validate_network`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    ZeroWorkingPeriod,
    EmptySchedule { node: NodeId },
    SlotOutOfRange { node: NodeId, slot: Slot },
    DanglingEdge { u: NodeId, v: NodeId },
    SelfLoop { node: NodeId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ZeroWorkingPeriod => write!(f, "working period K must be positive"),
            Violation::EmptySchedule { node } => write!(f, "node {node} has an empty schedule"),
            Violation::SlotOutOfRange { node, slot } => {
                write!(f, "node {node} lists slot {slot} outside 1..=K")
            }
            Violation::DanglingEdge { u, v } => {
                write!(f, "edge ({u},{v}) references a missing node")
            }
            Violation::SelfLoop { node } => write!(f, "self-loop on node {node}"),
        }
    }
}

/// Diagnostic scan; a well-formed network yields an empty report.
pub fn validate_network(net: &Network) -> Vec<Violation> {
    let mut report = Vec::new();
    if net.k() == 0 {
        report.push(Violation::ZeroWorkingPeriod);
    }
    for (u, sched) in net.schedules.iter().enumerate() {
        if sched.is_empty() {
            report.push(Violation::EmptySchedule { node: u });
        }
        for slot in sched.iter() {
            if slot == 0 || slot > net.k() {
                report.push(Violation::SlotOutOfRange { node: u, slot });
            }
        }
    }
    for &(u, v) in &net.edges {
        if u == v {
            report.push(Violation::SelfLoop { node: u });
        } else if u >= net.n_nodes() || v >= net.n_nodes() {
            report.push(Violation::DanglingEdge { u, v });
        }
    }
    report
}

/// Per-packet energy prices: `e_s` per transmission, `e_r` per reception,
/// with `e_s >= e_r` (both already net of idle-listening cost).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnergyModel {
    e_s: u64,
    e_r: u64,
}

impl EnergyModel {
    pub fn new(e_s: u64, e_r: u64) -> Result<Self> {
        if e_s < e_r {
            return Err(Error::InvalidInput(format!(
                "send cost {e_s} must be at least receive cost {e_r}"
            )));
        }
        Ok(EnergyModel { e_s, e_r })
    }

    pub fn e_s(&self) -> u64 {
        self.e_s
    }

    pub fn e_r(&self) -> u64 {
        self.e_r
    }
}

/// A multicast session: terminal set `M` and source `s ∈ M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MulticastInstance {
    source: NodeId,
    terminals: BTreeSet<NodeId>,
}

impl MulticastInstance {
    /// The source is always part of the terminal set.
    pub fn new(source: NodeId, terminals: impl IntoIterator<Item = NodeId>) -> Self {
        let mut terminals: BTreeSet<NodeId> = terminals.into_iter().collect();
        terminals.insert(source);
        MulticastInstance { source, terminals }
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn terminals(&self) -> &BTreeSet<NodeId> {
        &self.terminals
    }

    pub fn len(&self) -> usize {
        self.terminals.len()
    }

    pub fn is_empty(&self) -> bool {
        false // the source is always a member
    }

    pub fn check_against(&self, net: &Network) -> Result<()> {
        for &m in &self.terminals {
            if m >= net.n_nodes() {
                return Err(Error::InvalidInput(format!(
                    "terminal {m} is not a node of the network (n = {})",
                    net.n_nodes()
                )));
            }
        }
        Ok(())
    }
}

/// A rooted tree stored as a parent map (the root has no parent entry).
/// Derived views (`d1`, `d_plus`, `nl`, children) are computed on demand;
/// the networks handled here are small.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MulticastTree {
    root: NodeId,
    parent: BTreeMap<NodeId, NodeId>,
}

impl MulticastTree {
    pub fn single(root: NodeId) -> Self {
        MulticastTree {
            root,
            parent: BTreeMap::new(),
        }
    }

    /// Build a rooted tree from an undirected edge list by orienting edges
    /// away from `root`. Fails unless the edges form a tree containing the
    /// root and touching every listed node.
    pub fn from_edges(root: NodeId, edges: &[(NodeId, NodeId)]) -> Result<Self> {
        let mut adj: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
        adj.entry(root).or_default();
        for &(u, v) in edges {
            if u == v {
                return Err(Error::InvalidInput(format!("self-loop on {u} in tree edges")));
            }
            adj.entry(u).or_default().push(v);
            adj.entry(v).or_default().push(u);
        }
        let mut parent = BTreeMap::new();
        let mut seen = BTreeSet::from([root]);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let mut nb = adj.get(&u).cloned().unwrap_or_default();
            nb.sort_unstable();
            for v in nb {
                if seen.insert(v) {
                    parent.insert(v, u);
                    queue.push_back(v);
                }
            }
        }
        if seen.len() != adj.len() || edges.len() != adj.len() - 1 {
            return Err(Error::InvalidInput(
                "edge list does not form a tree rooted at the given node".into(),
            ));
        }
        Ok(MulticastTree { root, parent })
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn contains(&self, u: NodeId) -> bool {
        u == self.root || self.parent.contains_key(&u)
    }

    /// N(T): all tree nodes.
    pub fn nodes(&self) -> BTreeSet<NodeId> {
        let mut s: BTreeSet<NodeId> = self.parent.keys().copied().collect();
        s.insert(self.root);
        s
    }

    pub fn len(&self) -> usize {
        self.parent.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false // a tree always has its root
    }

    pub fn parent(&self, u: NodeId) -> Option<NodeId> {
        self.parent.get(&u).copied()
    }

    /// E(T) as sorted (parent, child) pairs normalized to (min, max).
    pub fn edges(&self) -> BTreeSet<(NodeId, NodeId)> {
        self.parent
            .iter()
            .map(|(&c, &p)| (p.min(c), p.max(c)))
            .collect()
    }

    pub fn children(&self, u: NodeId) -> Vec<NodeId> {
        self.parent
            .iter()
            .filter(|&(_, &p)| p == u)
            .map(|(&c, _)| c)
            .collect()
    }

    /// Degree of `u` in the (undirected view of the) tree.
    pub fn degree(&self, u: NodeId) -> usize {
        let mut d = self.children(u).len();
        if self.parent.contains_key(&u) {
            d += 1;
        }
        d
    }

    /// d¹(T): nodes of degree exactly one (empty for a single-node tree).
    pub fn d1(&self) -> BTreeSet<NodeId> {
        self.nodes()
            .into_iter()
            .filter(|&u| self.degree(u) == 1)
            .collect()
    }

    /// d⁺(T): nodes of degree greater than one.
    pub fn d_plus(&self) -> BTreeSet<NodeId> {
        self.nodes()
            .into_iter()
            .filter(|&u| self.degree(u) > 1)
            .collect()
    }

    /// nl(T): the non-leaf (transmitting) nodes. Equals d⁺(T), plus the root
    /// when the root has degree one.
    pub fn nl(&self) -> BTreeSet<NodeId> {
        let mut nl = self.d_plus();
        if self.degree(self.root) == 1 {
            nl.insert(self.root);
        }
        nl
    }

    /// Neighbors of `u` inside the tree (parent and children).
    pub fn tree_neighbors(&self, u: NodeId) -> Vec<NodeId> {
        let mut nb = self.children(u);
        if let Some(p) = self.parent(u) {
            nb.push(p);
        }
        nb.sort_unstable();
        nb
    }

    /// True when every tree edge is an edge of `net`.
    pub fn is_subgraph_of(&self, net: &Network) -> bool {
        self.edges().iter().all(|&(u, v)| net.has_edge(u, v))
    }

    /// True when all terminals of `inst` are tree nodes.
    pub fn spans(&self, terminals: &BTreeSet<NodeId>) -> bool {
        terminals.iter().all(|&m| self.contains(m))
    }
}

/// B: transmit-slot sets keyed by forwarding node.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TransmissionSchedule {
    slots: BTreeMap<NodeId, BTreeSet<Slot>>,
}

impl TransmissionSchedule {
    pub fn new(slots: BTreeMap<NodeId, BTreeSet<Slot>>) -> Self {
        TransmissionSchedule { slots }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn get(&self, u: NodeId) -> Option<&BTreeSet<Slot>> {
        self.slots.get(&u)
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, &BTreeSet<Slot>)> {
        self.slots.iter().map(|(&u, s)| (u, s))
    }

    pub fn nodes(&self) -> BTreeSet<NodeId> {
        self.slots.keys().copied().collect()
    }

    /// Σ|B(u)|: the total number of transmissions per packet.
    pub fn total_transmissions(&self) -> u64 {
        self.slots.values().map(|s| s.len() as u64).sum()
    }
}

/// ⟨T, B⟩: a multicast tree together with a transmission schedule over its
/// non-leaf nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MulticastPlan {
    pub tree: MulticastTree,
    pub schedule: TransmissionSchedule,
}

impl MulticastPlan {
    pub fn new(tree: MulticastTree, schedule: TransmissionSchedule) -> Self {
        MulticastPlan { tree, schedule }
    }

    pub fn transmissions(&self) -> u64 {
        self.schedule.total_transmissions()
    }

    /// Structural check used by tests and the CLI: the schedule domain equals
    /// nl(T), every tree edge exists in the network and every scheduled slot
    /// is inside the working period.
    pub fn check_well_formed(&self, net: &Network) -> Result<()> {
        check_domain(&self.tree, &self.schedule)?;
        if !self.tree.is_subgraph_of(net) {
            return Err(Error::InvalidInput(
                "plan tree uses an edge absent from the network".into(),
            ));
        }
        for (u, slots) in self.schedule.iter() {
            for &slot in slots {
                if slot == 0 || slot > net.k() {
                    return Err(Error::InvalidInput(format!(
                        "plan schedules node {u} on out-of-range slot {slot}"
                    )));
                }
            }
        }
        Ok(())
    }
}

fn check_domain(tree: &MulticastTree, sched: &TransmissionSchedule) -> Result<()> {
    let nl = tree.nl();
    let dom = sched.nodes();
    if nl != dom {
        return Err(Error::ScheduleDomainMismatch {
            missing: nl.difference(&dom).copied().collect(),
            extra: dom.difference(&nl).copied().collect(),
        });
    }
    Ok(())
}

/// Definition check: `sched` is feasible for `tree` iff for every non-leaf
/// `u`, `B(u)` hits the active-slot set of every child of `u`.
///
/// Errors when the schedule domain differs from `nl(tree)`.
pub fn is_feasible_schedule(
    tree: &MulticastTree,
    sched: &TransmissionSchedule,
    net: &Network,
) -> Result<bool> {
    check_domain(tree, sched)?;
    for (u, slots) in sched.iter() {
        for child in tree.children(u) {
            if !slots.iter().any(|s| net.schedule(child).contains(*s)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Total energy Π(T, B) = Σ_{u∈nl(T)} |B(u)|·e_s + (|N(T)|−1)·e_r.
///
/// Purely arithmetic: feasibility is not checked here.
pub fn energy_cost(plan: &MulticastPlan, model: &EnergyModel) -> u64 {
    plan.transmissions() * model.e_s() + (plan.tree.len() as u64 - 1) * model.e_r()
}

/// Greedy hitting set: repeatedly pick the slot hitting the most not-yet-hit
/// sets, breaking ties toward the smallest slot index. The result hits every
/// input set and its size is within `H(m)` of optimal, where `m` is the
/// largest number of sets any single slot occurs in.
pub fn greedy_hitting_set(collection: &[BTreeSet<Slot>]) -> Result<BTreeSet<Slot>> {
    for (i, set) in collection.iter().enumerate() {
        if set.is_empty() {
            return Err(Error::EmptySetInCollection(i));
        }
    }
    let mut unhit: Vec<usize> = (0..collection.len()).collect();
    let mut chosen = BTreeSet::new();
    while !unhit.is_empty() {
        let mut counts: BTreeMap<Slot, usize> = BTreeMap::new();
        for &i in &unhit {
            for &slot in &collection[i] {
                *counts.entry(slot).or_insert(0) += 1;
            }
        }
        // BTreeMap iterates in ascending slot order, so `>` keeps the
        // smallest slot among equal counts.
        let (&best_slot, _) = counts
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
            .expect("unhit sets are nonempty");
        chosen.insert(best_slot);
        unhit.retain(|&i| !collection[i].contains(&best_slot));
    }
    Ok(chosen)
}
