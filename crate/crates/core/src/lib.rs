//! Minimum-energy multicast planning for duty-cycled wireless sensor networks.
//!
//! In a duty-cycled network every node is awake only during its own set of
//! active slots inside a periodic working period of `K` slots, so a forwarding
//! node may have to transmit the same packet several times to reach all of its
//! children. Planning a multicast session therefore means choosing a multicast
//! tree *and* a per-forwarder transmission schedule together; the quality of a
//! plan is its total energy `Π = Σ|B(u)|·e_s + (|N(T)|−1)·e_r`.
//!
//! The crate is organised around that pipeline:
//!
//! - [`model`] — networks, duty schedules, multicast trees/schedules/plans and
//!   the energy objective, plus greedy hitting-set scheduling.
//! - [`extended`] — the extended-graph transform that represents candidate
//!   transmit slots as satellite nodes.
//! - [`solver`] — the TCS approximation: greedy satellite cover, approximate
//!   Steiner tree (KMB or Mehlhorn), and the bridge-to-tree mapping.
//! - [`baselines`] — SPT, AMST and MNT trees with greedy hitting-set
//!   schedules, for comparison.
//! - [`oracle`] — exhaustive brute-force references (exact hitting sets,
//!   exact satellite bridges, exact plans) used to validate the approximation
//!   guarantees on small instances.
//! - [`distsim`] — a synchronous round-based simulation of the distributed
//!   cover election protocol.
//! - [`experiments`] — reproducible topology generation, sweep harness and
//!   CSV/topology file formats backing the CLI.

pub mod baselines;
pub mod distsim;
mod error;
pub mod experiments;
pub mod extended;
pub mod graph;
pub mod model;
pub mod oracle;
pub mod solver;
#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
pub use extended::{ExtNodeId, ExtendedGraph};
pub use model::{
    energy_cost, greedy_hitting_set, is_feasible_schedule, validate_network, DutySchedule,
    EnergyModel, MulticastInstance, MulticastPlan, MulticastTree, Network, NodeId, Slot,
    TransmissionSchedule,
};
pub use solver::{solve_memtcs, SatelliteBridge, SolverConfig, SteinerAlgorithm};
