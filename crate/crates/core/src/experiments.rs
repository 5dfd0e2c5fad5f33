//! Reproducible experiment harness: random geometric topologies, paired
//! algorithm sweeps, CSV output and the on-disk topology format.
//!
//! All randomness flows through ChaCha8 seeded from a SplitMix64-derived
//! per-(K, fraction, trial) seed, so a `(seed, config)` pair reproduces every
//! byte of output on any platform.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::baselines::{run_baseline, BaselineKind};
use crate::model::{
    energy_cost, DutySchedule, EnergyModel, MulticastInstance, Network, NodeId, Slot,
};
use crate::solver::{solve_memtcs, SolverConfig, SteinerAlgorithm};
use crate::{Error, Result};

/// Algorithms the sweep harness can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Algorithm {
    Tcs,
    Spt,
    Amst,
    Mnt,
}

impl Algorithm {
    pub fn all() -> Vec<Algorithm> {
        vec![Algorithm::Tcs, Algorithm::Spt, Algorithm::Amst, Algorithm::Mnt]
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Algorithm::Tcs => "TCS",
            Algorithm::Spt => "SPT",
            Algorithm::Amst => "AMST",
            Algorithm::Mnt => "MNT",
        };
        f.write_str(s)
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tcs" => Ok(Algorithm::Tcs),
            "spt" => Ok(Algorithm::Spt),
            "amst" => Ok(Algorithm::Amst),
            "mnt" => Ok(Algorithm::Mnt),
            other => Err(Error::InvalidInput(format!("unknown algorithm '{other}'"))),
        }
    }
}

/// How many active slots each node draws per working period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DutySlots {
    /// A fixed number of slots, clamped to `1..=K`.
    Count(Slot),
    /// A fraction of the working period, rounded up; the default is 1/4.
    Fraction(f64),
}

impl Default for DutySlots {
    fn default() -> Self {
        DutySlots::Fraction(0.25)
    }
}

impl DutySlots {
    pub fn resolve(&self, k: Slot) -> Slot {
        match *self {
            DutySlots::Count(c) => c.clamp(1, k),
            DutySlots::Fraction(f) => (((k as f64) * f).ceil() as Slot).clamp(1, k),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            DutySlots::Count(c) if c >= 1 => Ok(()),
            DutySlots::Fraction(f) if f > 0.0 && f <= 1.0 => Ok(()),
            _ => Err(Error::InvalidInput(
                "duty slots must be a positive count or a fraction in (0,1]".into(),
            )),
        }
    }
}

/// Full sweep description. `k_sweep × terminal_fractions` is the grid of
/// sweep points; each point runs `trials` paired trials.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub n_nodes: usize,
    /// Deployment area in meters (width, height).
    pub area: (f64, f64),
    /// Transmission range in meters.
    pub range: f64,
    pub duty: DutySlots,
    pub k_sweep: Vec<Slot>,
    pub terminal_fractions: Vec<f64>,
    pub trials: u32,
    pub algorithms: Vec<Algorithm>,
    pub energy: EnergyModel,
    pub steiner: SteinerAlgorithm,
    /// Topology regeneration attempts before giving up on connectivity.
    pub max_retries: u32,
    /// Report zero runtimes for byte-stable CSV output.
    pub zero_runtime: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            seed: 1,
            n_nodes: 100,
            area: (1000.0, 1000.0),
            range: 300.0,
            duty: DutySlots::default(),
            k_sweep: vec![20],
            terminal_fractions: (2..=10).map(|i| i as f64 / 10.0).collect(),
            trials: 20,
            algorithms: Algorithm::all(),
            energy: EnergyModel::new(100, 15).expect("valid default model"),
            steiner: SteinerAlgorithm::Kmb,
            max_retries: 200,
            zero_runtime: false,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_nodes == 0 {
            return Err(Error::InvalidInput("n_nodes must be positive".into()));
        }
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(self.range) || !positive(self.area.0) || !positive(self.area.1) {
            return Err(Error::InvalidInput(
                "area and range must be positive".into(),
            ));
        }
        if self.k_sweep.is_empty() || self.k_sweep.contains(&0) {
            return Err(Error::InvalidInput(
                "k_sweep must list positive working-period lengths".into(),
            ));
        }
        if self.terminal_fractions.is_empty()
            || self
                .terminal_fractions
                .iter()
                .any(|&f| !(f > 0.0 && f <= 1.0))
        {
            return Err(Error::InvalidInput(
                "terminal fractions must lie in (0, 1]".into(),
            ));
        }
        if self.trials == 0 {
            return Err(Error::InvalidInput("trials must be positive".into()));
        }
        if self.algorithms.is_empty() {
            return Err(Error::InvalidInput("no algorithms selected".into()));
        }
        self.duty.validate()
    }
}

/// One cell of the sweep grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub k: Slot,
    pub terminal_fraction: f64,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-trial seed: SplitMix64 chain over the master seed, the sweep point and
/// the trial index. All algorithms within a trial share this seed.
pub fn derive_seed(master: u64, k: Slot, terminal_fraction: f64, trial: u32) -> u64 {
    let mut x = splitmix64(master);
    x = splitmix64(x ^ u64::from(k));
    x = splitmix64(x ^ terminal_fraction.to_bits());
    splitmix64(x ^ u64::from(trial))
}

/// A generated topology plus the multicast instance drawn on it.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedInstance {
    pub network: Network,
    pub instance: MulticastInstance,
    /// The derived seed that produced this instance.
    pub seed: u64,
    /// Topologies discarded because the terminal set was disconnected.
    pub resamples: u32,
}

/// Drop `n_nodes` uniformly into the area, connect nodes within transmission
/// range, draw per-node active slots, and sample the terminal set (its first
/// sample is the source). Regenerates until all terminals share a component,
/// within the retry budget.
pub fn generate_topology(
    cfg: &ExperimentConfig,
    point: &SweepPoint,
    trial: u32,
) -> Result<GeneratedInstance> {
    cfg.validate()?;
    let k = point.k;
    if k == 0 || !(point.terminal_fraction > 0.0 && point.terminal_fraction <= 1.0) {
        return Err(Error::InvalidInput("invalid sweep point".into()));
    }
    let n = cfg.n_nodes;
    let duty = cfg.duty.resolve(k);
    let seed = derive_seed(cfg.seed, k, point.terminal_fraction, trial);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_terminals = ((point.terminal_fraction * n as f64).round() as usize).clamp(1, n);

    for attempt in 0..cfg.max_retries {
        let positions: Vec<(f64, f64)> = (0..n)
            .map(|_| {
                use rand::Rng;
                (
                    rng.random_range(0.0..cfg.area.0),
                    rng.random_range(0.0..cfg.area.1),
                )
            })
            .collect();
        let range2 = cfg.range * cfg.range;
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                let dx = positions[u].0 - positions[v].0;
                let dy = positions[u].1 - positions[v].1;
                if dx * dx + dy * dy <= range2 {
                    edges.push((u, v));
                }
            }
        }
        let schedules: Vec<DutySchedule> = (0..n)
            .map(|_| {
                let picks = rand::seq::index::sample(&mut rng, k as usize, duty as usize);
                DutySchedule::new(picks.iter().map(|i| i as Slot + 1))
            })
            .collect();
        let network = Network::from_parts(k, schedules, edges, Some(positions));

        let picks = rand::seq::index::sample(&mut rng, n, n_terminals);
        let terminals: Vec<NodeId> = picks.iter().collect();
        let source = terminals[0];
        let instance = MulticastInstance::new(source, terminals);

        if network.all_connected(instance.terminals()) {
            return Ok(GeneratedInstance {
                network,
                instance,
                seed,
                resamples: attempt,
            });
        }
    }
    Err(Error::RetryExhausted {
        attempts: cfg.max_retries,
    })
}

/// One algorithm run on one generated instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunRecord {
    pub seed: u64,
    pub n_nodes: usize,
    pub n_terminals: usize,
    pub k: Slot,
    pub algorithm: Algorithm,
    /// Σ|B(u)|.
    pub transmissions: u64,
    /// Π under the config's energy model.
    pub energy: u64,
    pub tree_nodes: usize,
    pub forwarders: usize,
    pub runtime_ms: u64,
}

/// Records plus the non-fatal per-trial failures encountered.
#[derive(Debug, Clone, Default)]
pub struct SweepOutput {
    pub records: Vec<RunRecord>,
    pub failures: Vec<String>,
}

/// Run the full sweep grid. Within one trial every selected algorithm sees
/// the identical network and terminal set; records arrive in deterministic
/// `(K, fraction, trial, algorithm)` order.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<SweepOutput> {
    cfg.validate()?;
    let solver_cfg = SolverConfig {
        steiner: cfg.steiner,
    };
    let mut out = SweepOutput::default();
    for &k in &cfg.k_sweep {
        for &fraction in &cfg.terminal_fractions {
            let point = SweepPoint {
                k,
                terminal_fraction: fraction,
            };
            for trial in 0..cfg.trials {
                let generated = match generate_topology(cfg, &point, trial) {
                    Ok(g) => g,
                    Err(e) => {
                        out.failures
                            .push(format!("K={k} f={fraction} trial={trial}: {e}"));
                        continue;
                    }
                };
                for &alg in &cfg.algorithms {
                    let start = Instant::now();
                    let plan = match alg {
                        Algorithm::Tcs => {
                            solve_memtcs(&generated.network, &generated.instance, &solver_cfg)
                        }
                        Algorithm::Spt => run_baseline(
                            BaselineKind::Spt,
                            &generated.network,
                            &generated.instance,
                            &solver_cfg,
                        ),
                        Algorithm::Amst => run_baseline(
                            BaselineKind::Amst,
                            &generated.network,
                            &generated.instance,
                            &solver_cfg,
                        ),
                        Algorithm::Mnt => run_baseline(
                            BaselineKind::Mnt,
                            &generated.network,
                            &generated.instance,
                            &solver_cfg,
                        ),
                    };
                    let runtime_ms = if cfg.zero_runtime {
                        0
                    } else {
                        start.elapsed().as_millis() as u64
                    };
                    match plan {
                        Ok(plan) => out.records.push(RunRecord {
                            seed: generated.seed,
                            n_nodes: generated.network.n_nodes(),
                            n_terminals: generated.instance.len(),
                            k,
                            algorithm: alg,
                            transmissions: plan.transmissions(),
                            energy: energy_cost(&plan, &cfg.energy),
                            tree_nodes: plan.tree.len(),
                            forwarders: plan.tree.nl().len(),
                            runtime_ms,
                        }),
                        Err(e) => out
                            .failures
                            .push(format!("K={k} f={fraction} trial={trial} {alg}: {e}")),
                    }
                }
            }
        }
    }
    Ok(out)
}

pub const CSV_HEADER: &str =
    "seed,n_nodes,n_terminals,K,algorithm,transmissions,energy,tree_nodes,forwarders,runtime_ms";

/// Render records as CSV (header included), in record order.
pub fn records_to_csv(records: &[RunRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.seed,
            r.n_nodes,
            r.n_terminals,
            r.k,
            r.algorithm,
            r.transmissions,
            r.energy,
            r.tree_nodes,
            r.forwarders,
            r.runtime_ms
        ));
    }
    out
}

/// Aggregate statistics for one (sweep point, algorithm) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub k: Slot,
    pub n_terminals: usize,
    pub algorithm: Algorithm,
    pub trials: usize,
    pub mean_transmissions: f64,
    pub stddev_transmissions: f64,
    pub mean_energy: f64,
    pub stddev_energy: f64,
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Mean/stddev per (K, terminal count, algorithm), sorted by that key.
pub fn summarize(records: &[RunRecord]) -> Result<Vec<SummaryRow>> {
    if records.is_empty() {
        return Err(Error::EmptyRecords);
    }
    let mut keys: Vec<(Slot, usize, Algorithm)> = records
        .iter()
        .map(|r| (r.k, r.n_terminals, r.algorithm))
        .collect();
    keys.sort_unstable();
    keys.dedup();
    let mut rows = Vec::with_capacity(keys.len());
    for (k, n_terminals, algorithm) in keys {
        let tx: Vec<f64> = records
            .iter()
            .filter(|r| (r.k, r.n_terminals, r.algorithm) == (k, n_terminals, algorithm))
            .map(|r| r.transmissions as f64)
            .collect();
        let en: Vec<f64> = records
            .iter()
            .filter(|r| (r.k, r.n_terminals, r.algorithm) == (k, n_terminals, algorithm))
            .map(|r| r.energy as f64)
            .collect();
        let (mean_transmissions, stddev_transmissions) = mean_std(&tx);
        let (mean_energy, stddev_energy) = mean_std(&en);
        rows.push(SummaryRow {
            k,
            n_terminals,
            algorithm,
            trials: tx.len(),
            mean_transmissions,
            stddev_transmissions,
            mean_energy,
            stddev_energy,
        });
    }
    Ok(rows)
}

/// Percentage by which TCS reduces mean transmissions versus the best
/// baseline at one sweep cell; `None` when either side is missing.
pub fn tcs_reduction_percent(rows: &[SummaryRow], k: Slot, n_terminals: usize) -> Option<f64> {
    let cell: Vec<&SummaryRow> = rows
        .iter()
        .filter(|r| r.k == k && r.n_terminals == n_terminals)
        .collect();
    let tcs = cell
        .iter()
        .find(|r| r.algorithm == Algorithm::Tcs)?
        .mean_transmissions;
    let best_baseline = cell
        .iter()
        .filter(|r| r.algorithm != Algorithm::Tcs)
        .map(|r| r.mean_transmissions)
        .fold(f64::INFINITY, f64::min);
    if !best_baseline.is_finite() || best_baseline <= 0.0 {
        return None;
    }
    Some((best_baseline - tcs) / best_baseline * 100.0)
}

// ---------------------------------------------------------------------------
// Topology file format
// ---------------------------------------------------------------------------

pub const TOPOLOGY_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TopologyNode {
    pub id: NodeId,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub x: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub y: Option<f64>,
    pub active_slots: Vec<Slot>,
}

/// On-disk topology document: version, working period, nodes with optional
/// positions and sorted slot lists, and an explicit edge list.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TopologyFile {
    pub version: u32,
    pub k: Slot,
    pub nodes: Vec<TopologyNode>,
    pub edges: Vec<(NodeId, NodeId)>,
}

/// Serialize a network into the canonical topology document (nodes by id,
/// edges normalized and sorted), rendered as pretty JSON plus a trailing
/// newline. Writing is byte-stable under round-trips.
pub fn write_topology(net: &Network) -> String {
    let positions = net.positions();
    let nodes: Vec<TopologyNode> = (0..net.n_nodes())
        .map(|id| TopologyNode {
            id,
            x: positions.map(|p| p[id].0),
            y: positions.map(|p| p[id].1),
            active_slots: net.schedule(id).iter().collect(),
        })
        .collect();
    let file = TopologyFile {
        version: TOPOLOGY_VERSION,
        k: net.k(),
        nodes,
        edges: net.edges().collect(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("topology serializes");
    s.push('\n');
    s
}

/// Parse and validate a topology document. Node ids must be exactly `0..n`
/// (any order); positions are kept only when every node carries one.
pub fn read_topology(text: &str) -> Result<Network> {
    let file: TopologyFile = serde_json::from_str(text)?;
    if file.version != TOPOLOGY_VERSION {
        return Err(Error::InvalidInput(format!(
            "unsupported topology version {}",
            file.version
        )));
    }
    let n = file.nodes.len();
    let mut seen = vec![false; n];
    for node in &file.nodes {
        if node.id >= n || seen[node.id] {
            return Err(Error::InvalidInput(format!(
                "node ids must be a permutation of 0..{n} (bad id {})",
                node.id
            )));
        }
        seen[node.id] = true;
    }
    let mut nodes = file.nodes.clone();
    nodes.sort_by_key(|node| node.id);
    let all_positioned = nodes.iter().all(|node| node.x.is_some() && node.y.is_some());
    let positions = all_positioned.then(|| {
        nodes
            .iter()
            .map(|node| (node.x.expect("checked"), node.y.expect("checked")))
            .collect::<Vec<_>>()
    });
    let schedules: Vec<DutySchedule> = nodes
        .iter()
        .map(|node| DutySchedule::new(node.active_slots.iter().copied()))
        .collect();
    let net = Network::from_parts(file.k, schedules, file.edges, positions);
    let violations = crate::model::validate_network(&net);
    if !violations.is_empty() {
        let details: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        return Err(Error::InvalidInput(format!(
            "topology fails validation: {}",
            details.join("; ")
        )));
    }
    Ok(net)
}
