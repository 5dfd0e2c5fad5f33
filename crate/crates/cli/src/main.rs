//! Command-line front end: topology generation, single-instance solving,
//! paired exact-vs-approximate verification, experiment sweeps and the
//! distributed-protocol trace.
//!
//! Exit codes: 0 success, 1 invalid input, 2 infeasible instance, 3 oracle
//! budget exceeded.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use memtcs::baselines::{run_baseline, BaselineKind};
use memtcs::distsim::{simulate_distributed_cover, simulate_on_base_graph};
use memtcs::experiments::{
    generate_topology, read_topology, records_to_csv, run_sweep, summarize,
    tcs_reduction_percent, write_topology, Algorithm, DutySlots, ExperimentConfig, SweepPoint,
};
use memtcs::extended::ExtendedGraph;
use memtcs::model::{
    energy_cost, is_feasible_schedule, EnergyModel, MulticastInstance, Network, NodeId, Slot,
};
use memtcs::oracle::{exact_memtcs, exact_mist_xi, exact_msb, OracleBudget};
use memtcs::solver::{find_msb, solve_memtcs, SolverConfig, SteinerAlgorithm};
use memtcs::Error;

#[derive(Parser)]
#[command(
    name = "memtcs",
    about = "Minimum-energy multicast planning for duty-cycled sensor networks",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random topology file and a multicast instance for it.
    Gen(GenArgs),
    /// Solve one instance with one algorithm and print the plan.
    Solve(SolveArgs),
    /// Paired exact-vs-approximate report on small random instances.
    Oracle(OracleArgs),
    /// Run the full experiment sweep and write a CSV.
    Sweep(SweepArgs),
    /// Simulate the distributed cover election and print its trace.
    Distsim(DistsimArgs),
}

#[derive(Args)]
struct TopologyParams {
    /// Master seed.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Number of nodes.
    #[arg(long, default_value_t = 100)]
    nodes: usize,
    /// Deployment area width in meters.
    #[arg(long, default_value_t = 1000.0)]
    width: f64,
    /// Deployment area height in meters.
    #[arg(long, default_value_t = 1000.0)]
    height: f64,
    /// Transmission range in meters.
    #[arg(long, default_value_t = 300.0)]
    range: f64,
    /// Active slots per node, as a count.
    #[arg(long, conflicts_with = "duty_fraction")]
    duty_slots: Option<Slot>,
    /// Active slots per node, as a fraction of K (default 0.25).
    #[arg(long)]
    duty_fraction: Option<f64>,
    /// Topology retries before giving up on terminal connectivity.
    #[arg(long, default_value_t = 200)]
    max_retries: u32,
}

impl TopologyParams {
    fn duty(&self) -> DutySlots {
        match (self.duty_slots, self.duty_fraction) {
            (Some(c), _) => DutySlots::Count(c),
            (None, Some(f)) => DutySlots::Fraction(f),
            (None, None) => DutySlots::default(),
        }
    }

    fn config(&self) -> ExperimentConfig {
        ExperimentConfig {
            seed: self.seed,
            n_nodes: self.nodes,
            area: (self.width, self.height),
            range: self.range,
            duty: self.duty(),
            max_retries: self.max_retries,
            ..ExperimentConfig::default()
        }
    }
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    topology: TopologyParams,
    /// Working-period length K.
    #[arg(long, default_value_t = 20)]
    k: Slot,
    /// Fraction of nodes in the terminal set.
    #[arg(long, default_value_t = 0.5)]
    terminal_fraction: f64,
    /// Trial index mixed into the derived seed.
    #[arg(long, default_value_t = 0)]
    trial: u32,
    /// Output topology file.
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    /// Topology file.
    #[arg(short, long)]
    input: PathBuf,
    /// Source node (member of the terminal set).
    #[arg(long)]
    source: NodeId,
    /// Comma-separated terminal ids.
    #[arg(long)]
    terminals: String,
    /// Algorithm: tcs, spt, amst or mnt.
    #[arg(long, default_value = "tcs")]
    algorithm: String,
    /// Steiner subroutine: kmb or mehlhorn.
    #[arg(long, default_value = "kmb")]
    steiner: String,
    /// Energy per transmission.
    #[arg(long, default_value_t = 100)]
    es: u64,
    /// Energy per reception.
    #[arg(long, default_value_t = 15)]
    er: u64,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Number of paired instances to verify.
    #[arg(long, default_value_t = 25)]
    instances: u32,
    /// Budget: maximum nodes per instance.
    #[arg(long, default_value_t = 7)]
    max_nodes: usize,
    /// Budget: maximum working-period length.
    #[arg(long, default_value_t = 4)]
    max_k: Slot,
    /// Budget: maximum enumerated candidates per oracle call.
    #[arg(long, default_value_t = 10_000_000)]
    max_subsets: u64,
    /// Fraction of nodes in the terminal set.
    #[arg(long, default_value_t = 0.6)]
    terminal_fraction: f64,
    #[arg(long, default_value_t = 10)]
    es: u64,
    #[arg(long, default_value_t = 2)]
    er: u64,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    topology: TopologyParams,
    /// Comma-separated working-period lengths.
    #[arg(long, default_value = "20")]
    k_sweep: String,
    /// Comma-separated terminal fractions.
    #[arg(long, default_value = "0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0")]
    fractions: String,
    /// Trials per sweep point.
    #[arg(long, default_value_t = 20)]
    trials: u32,
    /// Comma-separated algorithms to run.
    #[arg(long, default_value = "tcs,spt,amst,mnt")]
    algorithms: String,
    /// Steiner subroutine: kmb or mehlhorn.
    #[arg(long, default_value = "kmb")]
    steiner: String,
    #[arg(long, default_value_t = 100)]
    es: u64,
    #[arg(long, default_value_t = 15)]
    er: u64,
    /// Write zeros to the runtime_ms column (byte-stable output).
    #[arg(long)]
    zero_runtime: bool,
    /// Print per-point summary statistics to stdout.
    #[arg(long)]
    summary: bool,
    /// Output CSV file.
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct DistsimArgs {
    /// Topology file.
    #[arg(short, long)]
    input: PathBuf,
    /// Comma-separated terminal ids.
    #[arg(long)]
    terminals: String,
    /// Fold satellites into their nuclear nodes (count only inter-node
    /// radio messages).
    #[arg(long)]
    base_graph: bool,
    /// Also write the trace lines to this file.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn parse_id_list(text: &str) -> Result<Vec<NodeId>, Error> {
    text.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse::<NodeId>()
                .map_err(|_| Error::InvalidInput(format!("bad node id '{t}'")))
        })
        .collect()
}

fn parse_steiner(text: &str) -> Result<SteinerAlgorithm, Error> {
    match text.to_ascii_lowercase().as_str() {
        "kmb" => Ok(SteinerAlgorithm::Kmb),
        "mehlhorn" => Ok(SteinerAlgorithm::Mehlhorn),
        other => Err(Error::InvalidInput(format!(
            "unknown Steiner algorithm '{other}'"
        ))),
    }
}

fn load_network(path: &PathBuf) -> Result<Network, Error> {
    let text = std::fs::read_to_string(path)?;
    read_topology(&text)
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::BudgetExceeded(_) => 3,
        Error::DisconnectedTerminals
        | Error::UncoverableTerminal(_)
        | Error::RetryExhausted { .. }
        | Error::NonTermination { .. } => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let result = match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Distsim(args) => cmd_distsim(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn cmd_gen(args: GenArgs) -> Result<(), Error> {
    let cfg = args.topology.config();
    let point = SweepPoint {
        k: args.k,
        terminal_fraction: args.terminal_fraction,
    };
    let generated = generate_topology(&cfg, &point, args.trial)?;
    std::fs::write(&args.output, write_topology(&generated.network))?;
    let terminals: Vec<String> = generated
        .instance
        .terminals()
        .iter()
        .map(|m| m.to_string())
        .collect();
    println!(
        "wrote {} (n={}, edges={}, K={})",
        args.output.display(),
        generated.network.n_nodes(),
        generated.network.n_edges(),
        generated.network.k()
    );
    println!("seed: {}", generated.seed);
    println!("source: {}", generated.instance.source());
    println!("terminals: {}", terminals.join(","));
    println!("resamples: {}", generated.resamples);
    Ok(())
}

fn render_plan(
    algorithm: &str,
    net: &Network,
    inst: &MulticastInstance,
    plan: &memtcs::model::MulticastPlan,
    model: &EnergyModel,
) -> Result<String, Error> {
    let mut out = String::new();
    let feasible = is_feasible_schedule(&plan.tree, &plan.schedule, net)?;
    let terminals: Vec<String> = inst.terminals().iter().map(|m| m.to_string()).collect();
    let _ = writeln!(out, "algorithm: {algorithm}");
    let _ = writeln!(out, "source: {}", inst.source());
    let _ = writeln!(out, "terminals: {}", terminals.join(","));
    let _ = writeln!(out, "tree_nodes: {}", plan.tree.len());
    let _ = writeln!(out, "forwarders: {}", plan.tree.nl().len());
    let _ = writeln!(out, "transmissions: {}", plan.transmissions());
    let _ = writeln!(out, "energy: {}", energy_cost(plan, model));
    let _ = writeln!(out, "feasible: {feasible}");
    let _ = writeln!(out, "tree_edges:");
    for (u, v) in plan.tree.edges() {
        let _ = writeln!(out, "  {u} -- {v}");
    }
    let _ = writeln!(out, "schedule:");
    for (u, slots) in plan.schedule.iter() {
        let rendered: Vec<String> = slots.iter().map(|s| s.to_string()).collect();
        let _ = writeln!(out, "  {u}: {}", rendered.join(","));
    }
    Ok(out)
}

fn cmd_solve(args: SolveArgs) -> Result<(), Error> {
    let net = load_network(&args.input)?;
    let terminals = parse_id_list(&args.terminals)?;
    let inst = MulticastInstance::new(args.source, terminals);
    inst.check_against(&net)?;
    let model = EnergyModel::new(args.es, args.er)?;
    let cfg = SolverConfig {
        steiner: parse_steiner(&args.steiner)?,
    };
    let algorithm: Algorithm = args.algorithm.parse()?;
    let plan = match algorithm {
        Algorithm::Tcs => solve_memtcs(&net, &inst, &cfg)?,
        Algorithm::Spt => run_baseline(BaselineKind::Spt, &net, &inst, &cfg)?,
        Algorithm::Amst => run_baseline(BaselineKind::Amst, &net, &inst, &cfg)?,
        Algorithm::Mnt => run_baseline(BaselineKind::Mnt, &net, &inst, &cfg)?,
    };
    print!(
        "{}",
        render_plan(&algorithm.to_string(), &net, &inst, &plan, &model)?
    );
    Ok(())
}

fn cmd_oracle(args: OracleArgs) -> Result<(), Error> {
    let budget = OracleBudget {
        max_nodes: args.max_nodes,
        max_k: args.max_k,
        max_subsets: args.max_subsets,
    };
    let model = EnergyModel::new(args.es, args.er)?;
    let solver_cfg = SolverConfig::default();
    // Small dense deployments keep the oracle within budget while varying
    // topology per instance.
    let cfg = ExperimentConfig {
        seed: args.seed,
        n_nodes: args.max_nodes,
        area: (100.0, 100.0),
        range: 55.0,
        duty: DutySlots::Fraction(0.5),
        max_retries: 500,
        ..ExperimentConfig::default()
    };
    let mut max_pi_ratio = 0.0f64;
    let mut max_msb_ratio = 0.0f64;
    let mut equalities = 0u32;
    for trial in 0..args.instances {
        let point = SweepPoint {
            k: args.max_k,
            terminal_fraction: args.terminal_fraction,
        };
        let generated = generate_topology(&cfg, &point, trial)?;
        let net = &generated.network;
        let inst = &generated.instance;
        let g = ExtendedGraph::build(net);

        let opt = exact_memtcs(net, inst, &model, &budget)?;
        let approx = solve_memtcs(net, inst, &solver_cfg)?;
        let pi_opt = energy_cost(&opt, &model);
        let pi_approx = energy_cost(&approx, &model);
        let pi_ratio = if pi_opt > 0 {
            pi_approx as f64 / pi_opt as f64
        } else {
            1.0
        };
        max_pi_ratio = max_pi_ratio.max(pi_ratio);

        let exact_bridge = exact_msb(&g, inst.terminals(), &budget)?;
        let approx_bridge = find_msb(&g, inst.terminals(), &solver_cfg)?;
        let msb_ratio = approx_bridge.node_count() as f64 / exact_bridge.node_count() as f64;
        max_msb_ratio = max_msb_ratio.max(msb_ratio);

        let (xi, _) = exact_mist_xi(net, inst.terminals(), &budget)?;
        let xi_status = if inst.len() >= 3 {
            if xi == exact_bridge.node_count() as u64 {
                equalities += 1;
                "eq"
            } else {
                "MISMATCH"
            }
        } else {
            "boundary"
        };
        println!(
            "instance {trial}: n={} |M|={} pi_exact={pi_opt} pi_tcs={pi_approx} ratio={pi_ratio:.3} \
             msb_exact={} msb_tcs={} xi={xi} xi_check={xi_status}",
            net.n_nodes(),
            inst.len(),
            exact_bridge.node_count(),
            approx_bridge.node_count(),
        );
        if xi_status == "MISMATCH" {
            return Err(Error::InvalidInput(
                "scattering value differed from exact bridge size".into(),
            ));
        }
    }
    println!("instances: {}", args.instances);
    println!("max_pi_ratio: {max_pi_ratio:.3}");
    println!("max_msb_ratio: {max_msb_ratio:.3}");
    println!("xi_equalities: {equalities}");
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> Result<(), Error> {
    let k_sweep: Vec<Slot> = args
        .k_sweep
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse::<Slot>()
                .map_err(|_| Error::InvalidInput(format!("bad K '{t}'")))
        })
        .collect::<Result<_, _>>()?;
    let fractions: Vec<f64> = args
        .fractions
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidInput(format!("bad fraction '{t}'")))
        })
        .collect::<Result<_, _>>()?;
    let algorithms: Vec<Algorithm> = args
        .algorithms
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse())
        .collect::<Result<_, _>>()?;
    let cfg = ExperimentConfig {
        k_sweep,
        terminal_fractions: fractions,
        trials: args.trials,
        algorithms,
        energy: EnergyModel::new(args.es, args.er)?,
        steiner: parse_steiner(&args.steiner)?,
        zero_runtime: args.zero_runtime,
        ..args.topology.config()
    };
    let output = run_sweep(&cfg)?;
    std::fs::write(&args.output, records_to_csv(&output.records))?;
    println!(
        "wrote {} ({} records, {} failures)",
        args.output.display(),
        output.records.len(),
        output.failures.len()
    );
    for failure in &output.failures {
        eprintln!("warning: {failure}");
    }
    if args.summary {
        let rows = summarize(&output.records)?;
        for row in &rows {
            println!(
                "K={} m={} {}: mean_tx={:.2} sd_tx={:.2} mean_energy={:.2} sd_energy={:.2} ({} trials)",
                row.k,
                row.n_terminals,
                row.algorithm,
                row.mean_transmissions,
                row.stddev_transmissions,
                row.mean_energy,
                row.stddev_energy,
                row.trials
            );
        }
        let mut cells: Vec<(Slot, usize)> = rows.iter().map(|r| (r.k, r.n_terminals)).collect();
        cells.dedup();
        for (k, m) in cells {
            if let Some(red) = tcs_reduction_percent(&rows, k, m) {
                println!("K={k} m={m}: TCS reduction vs best baseline: {red:.1}%");
            }
        }
    }
    Ok(())
}

fn cmd_distsim(args: DistsimArgs) -> Result<(), Error> {
    let net = load_network(&args.input)?;
    let ids = parse_id_list(&args.terminals)?;
    let terminals: BTreeSet<NodeId> = ids.into_iter().collect();
    if terminals.iter().any(|&m| m >= net.n_nodes()) {
        return Err(Error::InvalidInput("terminal outside network".into()));
    }
    let result = if args.base_graph {
        simulate_on_base_graph(&net, &terminals)?
    } else {
        let g = ExtendedGraph::build(&net);
        simulate_distributed_cover(&g, &terminals)?
    };
    println!("rounds: {}", result.rounds);
    println!("messages: {}", result.messages);
    for (kind, count) in &result.breakdown {
        println!("{kind}: {count}");
    }
    let cover: Vec<String> = result.cover.iter().map(|c| c.trace_id()).collect();
    println!("cover: {}", cover.join(" "));
    let trace = result.trace();
    if let Some(path) = &args.output {
        std::fs::write(path, &trace)?;
        println!("trace written to {}", path.display());
    } else {
        println!("trace:");
        print!("{trace}");
    }
    Ok(())
}
