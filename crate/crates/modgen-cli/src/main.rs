//! `modgen` — generate benchmark graphs with ground-truth communities,
//! analyze their structure, score detected partitions, and run parameter
//! sweeps.
//!
//! Exit codes: 0 on success, 1 on a domain error (bad parameter values,
//! malformed input files, infeasible configurations), 2 on a usage error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use modgen::analysis::default_path_sample;
use modgen::io::{
    read_edge_list_path, read_membership_path, write_edge_list_path, write_membership_path,
};
use modgen::metrics::{ari_labels, label_propagation, nmi_labels};
use modgen::sweep::run_sweep;
use modgen::{
    AssignStrategy, CommunityAssignment, FarzParams, GeneratorSpec, PropertyReport, Seed,
    SweepConfig, SweepParam, ThetaC, ThetaG,
};

#[derive(Parser, Debug)]
#[command(
    name = "modgen",
    version,
    about = "Benchmark networks with ground-truth communities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a graph and its ground-truth communities.
    Generate(GenerateCmd),
    /// Compute structural properties of a graph (optionally with communities).
    Analyze(AnalyzeCmd),
    /// Score a partition against ground truth (ARI and NMI).
    Compare(CompareCmd),
    /// Sweep one parameter over replicate runs and emit a CSV of summaries.
    Sweep(SweepCmd),
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Model {
    Farz,
    #[value(name = "3pass")]
    ThreePass,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum StartModel {
    Cf,
    Ba,
    Ff,
    Er,
    Gn,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Assign {
    Lfr,
    Cn,
    Ne,
}

impl From<Assign> for AssignStrategy {
    fn from(a: Assign) -> Self {
        match a {
            Assign::Lfr => AssignStrategy::Lfr,
            Assign::Cn => AssignStrategy::Cn,
            Assign::Ne => AssignStrategy::Ne,
        }
    }
}

/// Generator selection shared by `generate` and `sweep`. FARZ and 3-pass
/// options coexist; only the ones for the chosen `--model` are read.
#[derive(Args, Debug, Clone)]
struct GeneratorArgs {
    /// Generator family.
    #[arg(long, value_enum)]
    model: Model,

    /// Number of nodes.
    #[arg(long, default_value_t = 1000)]
    n: usize,

    // --- FARZ ---
    /// FARZ: number of communities.
    #[arg(long, default_value_t = 4)]
    k: usize,
    /// FARZ: edges added per arriving node.
    #[arg(long, default_value_t = 5)]
    m: usize,
    /// FARZ: common-neighbor exponent.
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    /// FARZ: probability of connecting within a community.
    #[arg(long, default_value_t = 0.8)]
    beta: f64,
    /// FARZ: degree-similarity exponent.
    #[arg(long, default_value_t = 0.5)]
    gamma: f64,
    /// FARZ: community-size balancing constant.
    #[arg(long, default_value_t = 1.0)]
    phi: f64,
    /// FARZ: memberships per overlapping node.
    #[arg(long, default_value_t = 1)]
    r: usize,
    /// FARZ: fraction of nodes given r memberships.
    #[arg(long, default_value_t = 0.0)]
    q: f64,
    /// FARZ: baseline edge weight.
    #[arg(long = "eps", default_value_t = 1e-7)]
    eps: f64,

    // --- 3-pass ---
    /// 3pass: start model for the backbone network.
    #[arg(long, value_enum, default_value_t = StartModel::Cf)]
    start: StartModel,
    /// 3pass: community assignment strategy.
    #[arg(long, value_enum, default_value_t = Assign::Lfr)]
    assign: Assign,
    /// 3pass: mixing parameter (fraction of between-community degree).
    #[arg(long, default_value_t = 0.5)]
    mu: f64,
    /// 3pass: community-size power-law exponent.
    #[arg(long, default_value_t = 2.0)]
    beta_exp: f64,
    /// 3pass: minimum community size.
    #[arg(long, default_value_t = 20)]
    c_min: usize,
    /// 3pass: maximum community size.
    #[arg(long, default_value_t = 50)]
    c_max: usize,

    // --- start-model parameters ---
    /// cf: target average degree.
    #[arg(long, default_value_t = 15.0)]
    k_avg: f64,
    /// cf: maximum degree.
    #[arg(long, default_value_t = 50)]
    k_max: usize,
    /// cf: degree power-law exponent.
    #[arg(long, default_value_t = 3.0)]
    gamma_exp: f64,
    /// ba: edges per arriving node.
    #[arg(long, default_value_t = 5)]
    m_ba: usize,
    /// ff: forward burning probability.
    #[arg(long, default_value_t = 0.1)]
    p_fwd: f64,
    /// ff: backward burning ratio.
    #[arg(long, default_value_t = 0.0)]
    rp: f64,
    /// er: edge probability.
    #[arg(long, default_value_t = 0.015)]
    p_edge: f64,
    /// gn: number of planted groups.
    #[arg(long, default_value_t = 4)]
    groups: usize,
    /// gn: within-group edge probability.
    #[arg(long, default_value_t = 0.1)]
    p_in: f64,
    /// gn: between-group edge probability (defaults to p_in / 8).
    #[arg(long)]
    p_out: Option<f64>,
}

impl GeneratorArgs {
    fn spec(&self) -> GeneratorSpec {
        match self.model {
            Model::Farz => GeneratorSpec::Farz(FarzParams {
                n: self.n,
                m: self.m,
                k: self.k,
                alpha: self.alpha,
                beta: self.beta,
                gamma: self.gamma,
                phi: self.phi,
                r: self.r,
                q: self.q,
                epsilon: self.eps,
            }),
            Model::ThreePass => {
                let theta_g = match self.start {
                    StartModel::Cf => ThetaG::Cf {
                        n: self.n,
                        k_avg: self.k_avg,
                        k_max: self.k_max,
                        gamma_exp: self.gamma_exp,
                    },
                    StartModel::Ba => ThetaG::Ba {
                        n: self.n,
                        m_ba: self.m_ba,
                    },
                    StartModel::Ff => ThetaG::Ff {
                        n: self.n,
                        p_fwd: self.p_fwd,
                        rp: self.rp,
                    },
                    StartModel::Er => ThetaG::Er {
                        n: self.n,
                        p_edge: self.p_edge,
                    },
                    StartModel::Gn => ThetaG::Gn {
                        n: self.n,
                        groups: self.groups,
                        p_in: self.p_in,
                        p_out: self.p_out.unwrap_or(self.p_in / 8.0),
                    },
                };
                GeneratorSpec::ThreePass {
                    theta_g,
                    theta_c: ThetaC {
                        mu: self.mu,
                        beta_exp: self.beta_exp,
                        c_min: self.c_min,
                        c_max: self.c_max,
                    },
                    strategy: self.assign.into(),
                }
            }
        }
    }
}

#[derive(Args, Debug)]
struct GenerateCmd {
    #[command(flatten)]
    generator: GeneratorArgs,
    /// RNG seed.
    #[arg(long, env = "MODGEN_SEED", default_value_t = 42)]
    seed: u64,
    /// Output prefix: writes PREFIX.edges, PREFIX.memberships, PREFIX.json.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct AnalyzeCmd {
    /// Edge-list file to analyze.
    graph: PathBuf,
    /// Optional membership file; enables mixing and per-community stats.
    #[arg(long)]
    membership: Option<PathBuf>,
    /// Shortest-path source sampling: a count, `all` (exact), or `auto`.
    #[arg(long, default_value = "auto")]
    path_sample: String,
    /// RNG seed (used for path-source sampling).
    #[arg(long, env = "MODGEN_SEED", default_value_t = 42)]
    seed: u64,
    /// Output prefix: writes PREFIX.json and PREFIX.csv. Prints JSON to
    /// stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CompareCmd {
    /// Ground-truth membership file.
    truth: PathBuf,
    /// Membership file to score against the truth.
    other: Option<PathBuf>,
    /// Edge-list file: detect communities with label propagation, then score.
    #[arg(long, conflicts_with = "other")]
    graph: Option<PathBuf>,
    /// RNG seed for label propagation.
    #[arg(long, env = "MODGEN_SEED", default_value_t = 42)]
    seed: u64,
    /// Maximum label-propagation rounds.
    #[arg(long, default_value_t = 100)]
    max_iters: usize,
    /// Write the JSON result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepCmd {
    #[command(flatten)]
    generator: GeneratorArgs,
    /// Parameter to sweep (beta, mu, k, m, phi, q, gamma).
    #[arg(long)]
    param: SweepParam,
    /// Comma-separated parameter values, e.g. `0.5,0.6,0.7`.
    #[arg(long, value_delimiter = ',', required = true)]
    values: Vec<f64>,
    /// Replicate runs per value (seeds: seed, seed+1, ...).
    #[arg(long, default_value_t = 10)]
    replicates: usize,
    /// Base RNG seed.
    #[arg(long, env = "MODGEN_SEED", default_value_t = 42)]
    seed: u64,
    /// Also run label propagation and report ARI/NMI per row.
    #[arg(long)]
    detect: bool,
    /// CSV output path; a paired `.json` run config is written next to it.
    /// Prints CSV to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Run configuration written next to every generated artifact; replaying the
/// same config and seed reproduces the files byte for byte.
#[derive(Serialize)]
struct RunHeader<'a> {
    tool: &'static str,
    command: &'static str,
    seed: u64,
    generator: &'a GeneratorSpec,
    outputs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    skipped: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rewire: Option<modgen::RewireStats>,
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let mut buf = serde_json::to_string_pretty(value)?;
    buf.push('\n');
    fs::write(path, buf)?;
    Ok(())
}

fn run_generate(cmd: &GenerateCmd) -> anyhow::Result<()> {
    let spec = cmd.generator.spec();
    let seed = Seed(cmd.seed);
    let (graph, assignment, skipped, rewire) = match &spec {
        GeneratorSpec::Farz(params) => {
            let out = modgen::farz::farz_generate(params, seed)?;
            (out.graph, out.assignment, Some(out.skipped), None)
        }
        GeneratorSpec::ThreePass {
            theta_g,
            theta_c,
            strategy,
        } => {
            let out = modgen::three_pass::generate_3pass(theta_g, theta_c, *strategy, seed)?;
            (out.graph, out.assignment, None, Some(out.stats))
        }
    };
    let edges = cmd.out.with_extension("edges");
    let memberships = cmd.out.with_extension("memberships");
    let header_path = cmd.out.with_extension("json");
    write_edge_list_path(&edges, &graph)?;
    write_membership_path(&memberships, &assignment)?;
    write_json(
        &header_path,
        &RunHeader {
            tool: "modgen",
            command: "generate",
            seed: cmd.seed,
            generator: &spec,
            outputs: vec![
                edges.display().to_string(),
                memberships.display().to_string(),
            ],
            skipped,
            rewire,
        },
    )?;
    eprintln!(
        "wrote {} ({} nodes, {} edges) + {} + {}",
        edges.display(),
        graph.node_count(),
        graph.edge_count(),
        memberships.display(),
        header_path.display()
    );
    Ok(())
}

fn parse_path_sample(raw: &str, n: usize) -> anyhow::Result<Option<usize>> {
    match raw {
        "auto" => Ok(default_path_sample(n)),
        "all" => Ok(None),
        other => {
            let count: usize = other.parse().map_err(|_| {
                UsageError(format!(
                    "--path-sample must be a positive integer, `all`, or `auto`, got `{other}`"
                ))
            })?;
            if count == 0 {
                return Err(UsageError("--path-sample must be at least 1".into()).into());
            }
            Ok(Some(count))
        }
    }
}

/// Flat one-row summary of a [`PropertyReport`] for the CSV output.
#[derive(Serialize)]
struct ReportRow {
    node_count: usize,
    edge_count: usize,
    avg_degree: f64,
    avg_clustering: f64,
    degree_assortativity: f64,
    assortativity_degenerate: bool,
    avg_shortest_path: Option<f64>,
    mean_mixing: Option<f64>,
}

fn run_analyze(cmd: &AnalyzeCmd) -> anyhow::Result<()> {
    let graph = read_edge_list_path(&cmd.graph)?;
    let assignment = cmd
        .membership
        .as_ref()
        .map(read_membership_path)
        .transpose()?;
    let sample = parse_path_sample(&cmd.path_sample, graph.node_count())?;
    let report = PropertyReport::compute(&graph, assignment.as_ref(), sample, Seed(cmd.seed))?;
    match &cmd.out {
        Some(prefix) => {
            write_json(&prefix.with_extension("json"), &report)?;
            let mut w = csv::Writer::from_path(prefix.with_extension("csv"))?;
            w.serialize(ReportRow {
                node_count: report.node_count,
                edge_count: report.edge_count,
                avg_degree: report.avg_degree,
                avg_clustering: report.avg_clustering,
                degree_assortativity: report.degree_assortativity,
                assortativity_degenerate: report.assortativity_degenerate,
                avg_shortest_path: report.avg_shortest_path,
                mean_mixing: report.mean_mixing,
            })?;
            w.flush()?;
        }
        None => println!("{}", serde_json::to_string_pretty(&report)?),
    }
    Ok(())
}

/// Reduces an assignment to one hard label per node. Overlapping nodes keep
/// their first community in sorted order; `reduced` reports whether that
/// lossy step happened.
fn hard_labels(asg: &CommunityAssignment) -> (Vec<usize>, bool) {
    match asg.labels() {
        Ok(labels) => (labels, false),
        Err(_) => (asg.primary_labels(), true),
    }
}

#[derive(Serialize)]
struct CompareResult {
    ari: f64,
    nmi: f64,
    /// True when an overlapping side was reduced to primary memberships.
    reduced_overlap: bool,
    detected_by: &'static str,
}

fn run_compare(cmd: &CompareCmd) -> anyhow::Result<()> {
    let truth = read_membership_path(&cmd.truth)?;
    let (truth_labels, truth_reduced) = hard_labels(&truth);
    let (other_labels, other_reduced, detected_by) = match (&cmd.other, &cmd.graph) {
        (Some(path), None) => {
            let other = read_membership_path(path)?;
            let (labels, reduced) = hard_labels(&other);
            (labels, reduced, "membership")
        }
        (None, Some(path)) => {
            let graph = read_edge_list_path(path)?;
            let detected = label_propagation(&graph, Seed(cmd.seed), cmd.max_iters);
            (detected.labels()?, false, "label_propagation")
        }
        _ => {
            return Err(UsageError(
                "compare needs either a second membership file or --graph".into(),
            )
            .into())
        }
    };
    if truth_labels.len() != other_labels.len() {
        return Err(modgen::Error::InvalidParameter {
            name: "compare",
            reason: format!(
                "node counts differ: truth has {}, other has {}",
                truth_labels.len(),
                other_labels.len()
            ),
        }
        .into());
    }
    let result = CompareResult {
        ari: ari_labels(&truth_labels, &other_labels),
        nmi: nmi_labels(&truth_labels, &other_labels),
        reduced_overlap: truth_reduced || other_reduced,
        detected_by,
    };
    match &cmd.out {
        Some(path) => write_json(path, &result)?,
        None => println!("{}", serde_json::to_string_pretty(&result)?),
    }
    Ok(())
}

fn run_sweep_cmd(cmd: &SweepCmd) -> anyhow::Result<()> {
    let config = SweepConfig {
        generator: cmd.generator.spec(),
        param: cmd.param,
        values: cmd.values.clone(),
        replicates: cmd.replicates,
        base_seed: Seed(cmd.seed),
        detect: cmd.detect,
    };
    let rows = run_sweep(&config)?;
    let write_rows = |w: &mut csv::Writer<Box<dyn Write>>| -> anyhow::Result<()> {
        for row in &rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    };
    match &cmd.out {
        Some(path) => {
            let file: Box<dyn Write> = Box::new(fs::File::create(path)?);
            let mut w = csv::Writer::from_writer(file);
            write_rows(&mut w)?;
            write_json(&path.with_extension("json"), &config)?;
            eprintln!("wrote {} rows to {}", rows.len(), path.display());
        }
        None => {
            let stdout: Box<dyn Write> = Box::new(std::io::stdout());
            let mut w = csv::Writer::from_writer(stdout);
            write_rows(&mut w)?;
        }
    }
    Ok(())
}

/// Argument problems detected after clap parsing; mapped to exit code 2.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for UsageError {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Generate(cmd) => run_generate(cmd),
        Command::Analyze(cmd) => run_analyze(cmd),
        Command::Compare(cmd) => run_compare(cmd),
        Command::Sweep(cmd) => run_sweep_cmd(cmd),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            if err.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
