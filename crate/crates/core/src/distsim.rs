//! Synchronous round-based simulation of the distributed cover election.
//!
//! Terminals start red, everything else white, and each white node tracks its
//! set of red neighbors `rnb(u)`. A round runs five lock-step phases:
//!
//! 1. every white node with nonempty `rnb` broadcasts `(election, |rnb|, id)`;
//! 2. every red node endorses the candidate with the largest `|rnb|`
//!    (largest id on ties) with a `you win` unicast;
//! 3. a white node endorsed by *all* of its red neighbors turns blue and
//!    broadcasts `I am dominator`;
//! 4. a red node hearing a dominator turns green and broadcasts
//!    `I am dominated`;
//! 5. white nodes drop newly green neighbors from their `rnb` sets.
//!
//! At least one red node turns green per round, so the protocol finishes in
//! at most `|M|` rounds; the blue nodes form the cover.
//!
//! The same engine also models running on the base network, where every
//! nuclear node administrates its own satellites as pseudo-nodes: messages
//! between co-nuclear nodes become local computation, so only transmissions
//! that cross a nuclear boundary are counted and logged. A nuclear node
//! serializes its pseudo-nodes' traffic over `delta > K` slots per round
//! (see [`default_delta`]).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::extended::{ExtNodeId, ExtendedGraph};
use crate::model::{MulticastInstance, MulticastPlan, Network, NodeId, Slot};
use crate::solver::{bridge_from_cover, plan_from_bridge, SolverConfig};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeColor {
    Red,
    Green,
    White,
    Blue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum MessageKind {
    Election,
    YouWin,
    Dominator,
    Dominated,
}

impl fmt::Display for MessageKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MessageKind::Election => "election",
            MessageKind::YouWin => "you_win",
            MessageKind::Dominator => "dominator",
            MessageKind::Dominated => "dominated",
        };
        f.write_str(s)
    }
}

/// One transmission; `to` is `None` for broadcasts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MessageRecord {
    pub round: u32,
    pub kind: MessageKind,
    pub from: ExtNodeId,
    pub to: Option<ExtNodeId>,
}

/// Outcome of one protocol run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimResult {
    /// The blue nodes; a valid satellite cover of the terminals.
    pub cover: BTreeSet<ExtNodeId>,
    pub rounds: u32,
    /// Total transmissions (a broadcast counts once).
    pub messages: u64,
    pub breakdown: BTreeMap<MessageKind, u64>,
    pub log: Vec<MessageRecord>,
}

impl SimResult {
    /// Line-oriented `round,kind,from,to` export of the message log, with
    /// `*` marking broadcasts.
    pub fn trace(&self) -> String {
        let mut out = String::new();
        for rec in &self.log {
            let to = rec.to.map_or_else(|| "*".to_string(), |t| t.trace_id());
            out.push_str(&format!(
                "{},{},{},{}\n",
                rec.round,
                rec.kind,
                rec.from.trace_id(),
                to
            ));
        }
        out
    }
}

/// δ: slots a nuclear node needs to serialize one round of pseudo-node
/// traffic when the protocol runs on the base network.
pub fn default_delta(k: Slot) -> Slot {
    k + 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CountMode {
    /// Every transmission in the extended graph counts.
    All,
    /// Only transmissions crossing a nuclear boundary count (pseudo-node
    /// adaptation on the base network).
    InterNuclear,
}

struct Recorder {
    mode: CountMode,
    messages: u64,
    breakdown: BTreeMap<MessageKind, u64>,
    log: Vec<MessageRecord>,
}

impl Recorder {
    fn new(mode: CountMode) -> Self {
        Recorder {
            mode,
            messages: 0,
            breakdown: BTreeMap::new(),
            log: Vec::new(),
        }
    }

    fn record(&mut self, round: u32, kind: MessageKind, from: ExtNodeId, to: Option<ExtNodeId>, crosses: bool) {
        if self.mode == CountMode::InterNuclear && !crosses {
            return;
        }
        self.messages += 1;
        *self.breakdown.entry(kind).or_insert(0) += 1;
        self.log.push(MessageRecord {
            round,
            kind,
            from,
            to,
        });
    }
}

fn run_protocol(
    g: &ExtendedGraph,
    terminals: &BTreeSet<NodeId>,
    mode: CountMode,
) -> Result<SimResult> {
    let n = g.nuclear_count();
    let total = g.node_count();
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

    // Whether a node has any neighbor under a different nuclear node; a
    // broadcast with no such neighbor is purely local in the adapted run.
    let crosses_boundary: Vec<bool> = (0..total)
        .map(|i| {
            let nuc = g.id_of(i).nucleus();
            g.neighbors_flat(i).iter().any(|&j| g.id_of(j).nucleus() != nuc)
        })
        .collect();

    let mut color = vec![NodeColor::White; total];
    for &m in terminals {
        color[m] = NodeColor::Red;
    }
    let mut rnb: Vec<BTreeSet<usize>> = (0..total)
        .map(|i| {
            if color[i] == NodeColor::White {
                g.neighbors_flat(i)
                    .iter()
                    .copied()
                    .filter(|&j| color[j] == NodeColor::Red)
                    .collect()
            } else {
                BTreeSet::new()
            }
        })
        .collect();

    let mut rec = Recorder::new(mode);
    let mut red_left = terminals.len();
    let mut rounds = 0u32;
    let round_limit = terminals.len() as u32;

    while red_left > 0 {
        rounds += 1;
        if rounds > round_limit {
            return Err(Error::NonTermination { limit: round_limit });
        }

        // Phase 1: election broadcasts.
        let mut candidates: Vec<usize> = Vec::new();
        for u in 0..total {
            if color[u] == NodeColor::White && !rnb[u].is_empty() {
                candidates.push(u);
                rec.record(
                    rounds,
                    MessageKind::Election,
                    g.id_of(u),
                    None,
                    crosses_boundary[u],
                );
            }
        }

        // Phase 2: each red node endorses its best candidate.
        let mut votes: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for &m in terminals {
            if color[m] != NodeColor::Red {
                continue;
            }
            let mut best: Option<(usize, usize)> = None; // (|rnb|, id)
            for &u in g.neighbors_flat(m) {
                if color[u] == NodeColor::White && !rnb[u].is_empty() {
                    let key = (rnb[u].len(), u);
                    if best.is_none_or(|b| key > b) {
                        best = Some(key);
                    }
                }
            }
            if let Some((_, winner)) = best {
                votes.entry(winner).or_default().insert(m);
                rec.record(
                    rounds,
                    MessageKind::YouWin,
                    g.id_of(m),
                    Some(g.id_of(winner)),
                    g.id_of(m).nucleus() != g.id_of(winner).nucleus(),
                );
            }
        }

        // Phase 3: unanimously endorsed candidates turn blue.
        let mut new_blue = Vec::new();
        for &u in &candidates {
            if votes.get(&u).is_some_and(|v| *v == rnb[u]) {
                color[u] = NodeColor::Blue;
                new_blue.push(u);
                rec.record(
                    rounds,
                    MessageKind::Dominator,
                    g.id_of(u),
                    None,
                    crosses_boundary[u],
                );
            }
        }

        // Phase 4: red neighbors of new dominators turn green.
        let mut new_green = Vec::new();
        for &m in terminals {
            if color[m] == NodeColor::Red
                && g.neighbors_flat(m).iter().any(|j| new_blue.contains(j))
            {
                color[m] = NodeColor::Green;
                new_green.push(m);
                red_left -= 1;
                rec.record(
                    rounds,
                    MessageKind::Dominated,
                    g.id_of(m),
                    None,
                    crosses_boundary[m],
                );
            }
        }

        // Phase 5: prune rnb sets.
        for &m in &new_green {
            for &u in g.neighbors_flat(m) {
                if color[u] == NodeColor::White {
                    rnb[u].remove(&m);
                }
            }
        }
    }

    let cover: BTreeSet<ExtNodeId> = (0..total)
        .filter(|&u| color[u] == NodeColor::Blue)
        .map(|u| g.id_of(u))
        .collect();
    debug_assert!(terminals
        .iter()
        .all(|&m| color[m] == NodeColor::Green));
    Ok(SimResult {
        cover,
        rounds,
        messages: rec.messages,
        breakdown: rec.breakdown,
        log: rec.log,
    })
}

/// Run the election protocol on the extended graph, counting every
/// transmission.
pub fn simulate_distributed_cover(
    g: &ExtendedGraph,
    terminals: &BTreeSet<NodeId>,
) -> Result<SimResult> {
    run_protocol(g, terminals, CountMode::All)
}

/// Run the same protocol with satellites folded into their nuclear nodes as
/// pseudo-nodes: the cover (and round count) is identical, but intra-nuclear
/// traffic becomes local computation and is neither counted nor logged.
pub fn simulate_on_base_graph(net: &Network, terminals: &BTreeSet<NodeId>) -> Result<SimResult> {
    let g = ExtendedGraph::build(net);
    run_protocol(&g, terminals, CountMode::InterNuclear)
}

/// Documented message/round budgets for the stages that reuse published
/// distributed algorithms instead of simulating them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineReport {
    pub cover_sim: SimResult,
    /// Steiner connection stage: messages within `O(|M|·|V|)`.
    pub steiner_message_budget: u64,
    /// Steiner connection stage: time within `O(|M|·D)`.
    pub steiner_time_budget: u64,
    /// Spanning-tree (DFS) stage: messages within `O(|V|)`.
    pub dfs_message_budget: u64,
    /// Spanning-tree (DFS) stage: time within `O(|V|)`.
    pub dfs_time_budget: u64,
}

/// Diameter of the connected component containing `start` (in hops).
fn component_diameter(net: &Network, start: NodeId) -> u64 {
    let g = crate::graph::UnitGraph::from_edges(net.n_nodes(), net.edges());
    let (dist0, _) = g.bfs(start);
    let mut diameter = 0u64;
    for (u, d0) in dist0.iter().enumerate() {
        if d0.is_some() {
            let (dist, _) = g.bfs(u);
            for d in dist.into_iter().flatten() {
                diameter = diameter.max(u64::from(d));
            }
        }
    }
    diameter
}

/// Distributed pipeline: elect the cover with the simulated protocol, then
/// complete the bridge and the plan with the centralized routines while
/// recording the documented budgets of their distributed counterparts.
/// Single-terminal sessions skip the election entirely.
pub fn distributed_pipeline(
    net: &Network,
    inst: &MulticastInstance,
    cfg: &SolverConfig,
) -> Result<(MulticastPlan, PipelineReport)> {
    inst.check_against(net)?;
    let n = net.n_nodes() as u64;
    let m = inst.len() as u64;
    if inst.len() == 1 {
        let plan = crate::solver::solve_memtcs(net, inst, cfg)?;
        let report = PipelineReport {
            cover_sim: SimResult {
                cover: BTreeSet::new(),
                rounds: 0,
                messages: 0,
                breakdown: BTreeMap::new(),
                log: Vec::new(),
            },
            steiner_message_budget: 0,
            steiner_time_budget: 0,
            dfs_message_budget: 0,
            dfs_time_budget: 0,
        };
        return Ok((plan, report));
    }
    if !net.all_connected(inst.terminals()) {
        return Err(Error::DisconnectedTerminals);
    }
    let g = ExtendedGraph::build(net);
    let sim = run_protocol(&g, inst.terminals(), CountMode::All)?;
    let bridge = bridge_from_cover(&g, &sim.cover, cfg)?;
    let plan = plan_from_bridge(net, inst, &g, &bridge)?;
    let diameter = component_diameter(net, inst.source());
    let report = PipelineReport {
        cover_sim: sim,
        steiner_message_budget: m * n,
        steiner_time_budget: m * diameter,
        dfs_message_budget: n,
        dfs_time_budget: n,
    };
    Ok((plan, report))
}
