use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use roman_ilp::bench::{format_table, run_suite, BenchConfig, TableStyle};
use roman_ilp::graph::{erdos_renyi, erdos_renyi_connected, parse_edge_list, Graph};
use roman_ilp::labeling::{validate, LabelFunction};
use roman_ilp::model::{build_with, decode_solution, export_lp, integerize, BuildOptions, Fidelity, ModelId};
use roman_ilp::oracle::{exact_gamma, full_labels};
use roman_ilp::solver::{solve, Status};

const EXIT_OK: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_TIMEOUT: u8 = 3;

#[derive(Parser)]
#[command(name = "roman-ilp", version, about = "Triple and quadruple Roman domination toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a connected G(n, p) sample as an edge list
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        seed: u64,
        /// Keep the first draw even if it is disconnected
        #[arg(long)]
        allow_disconnected: bool,
    },
    /// Check a labeling against the definition
    Validate {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        labels: PathBuf,
        #[arg(long, value_parser = parse_k)]
        k: u8,
    },
    /// Exhaustive optimum and a witness labeling
    Oracle {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, value_parser = parse_k)]
        k: u8,
    },
    /// Build a model and solve it with branch and bound
    Solve {
        #[command(flatten)]
        graph: GraphArg,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 1800.0)]
        budget: f64,
    },
    /// Print a model in LP format
    Export {
        #[command(flatten)]
        graph: GraphArg,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Run a benchmark described by a config file
    Bench {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "markdown", value_parser = parse_style)]
        format: TableStyle,
        #[arg(long)]
        no_times: bool,
        /// Overrides the config's worker count
        #[arg(long)]
        jobs: Option<usize>,
        /// Overrides the config's budget
        #[arg(long)]
        budget: Option<f64>,
    },
}

#[derive(Args)]
struct GraphArg {
    /// Edge-list file
    #[arg(long)]
    graph: PathBuf,
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, value_parser = parse_model)]
    model: ModelId,
    #[arg(long, default_value = "faithful", value_parser = parse_fidelity)]
    fidelity: Fidelity,
}

fn parse_k(s: &str) -> Result<u8, String> {
    match s {
        "3" => Ok(3),
        "4" => Ok(4),
        _ => Err("k must be 3 or 4".into()),
    }
}

fn parse_model(s: &str) -> Result<ModelId, String> {
    s.parse().map_err(|e: roman_ilp::model::ModelError| e.to_string())
}

fn parse_fidelity(s: &str) -> Result<Fidelity, String> {
    s.parse().map_err(|e: roman_ilp::model::ModelError| e.to_string())
}

fn parse_style(s: &str) -> Result<TableStyle, String> {
    s.parse().map_err(|_| "format must be markdown or csv".to_string())
}

/// Input problems that end the run with the usage exit code.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load_graph(arg: &GraphArg) -> Result<Graph, InputError> {
    parse_edge_list(&read(&arg.graph)?).map_err(|e| InputError(format!("{}: {e}", arg.graph.display())))
}

fn graph_label(arg: &GraphArg) -> String {
    arg.graph.file_name().map_or_else(|| "graph".into(), |n| n.to_string_lossy().into_owned())
}

fn run(cli: Cli) -> Result<u8, InputError> {
    match cli.command {
        Command::Gen { n, p, seed, allow_disconnected } => {
            let (g, used) = if allow_disconnected {
                (erdos_renyi(n, p, seed)?, seed)
            } else {
                let (g, d) = erdos_renyi_connected(n, p, seed)?;
                (g, d.seed)
            };
            println!("# G(n={n}, p={p}) seed={used}");
            print!("{}", g.to_edge_list());
            Ok(EXIT_OK)
        }
        Command::Validate { graph, labels, k } => {
            let g = load_graph(&graph)?;
            let f = LabelFunction::parse(&read(&labels)?, k)?;
            let verdict = validate(&g, &f)?;
            if verdict.is_valid() {
                println!("valid {k}RDF, weight {}", f.weight());
                return Ok(EXIT_OK);
            }
            println!("not a valid {k}RDF");
            for v in &verdict.violations {
                println!("vertex {} ({}): {}", v.vertex, v.clause, v.reason);
            }
            Ok(EXIT_FAIL)
        }
        Command::Oracle { graph, k } => {
            let g = load_graph(&graph)?;
            let r = exact_gamma(&g, k, &full_labels(k))?;
            println!("{}", r.optimum);
            println!("{}", r.witness);
            Ok(EXIT_OK)
        }
        Command::Solve { graph, model, budget } => {
            let g = load_graph(&graph)?;
            let id = model.fidelity.resolve(model.model);
            let opts = BuildOptions { graph_label: Some(graph_label(&graph)), ..BuildOptions::default() };
            let m = integerize(&build_with(&g, id, &opts)?);
            let s = solve(&m, budget)?;
            let (status, code) = match s.status {
                Status::Optimal => ("optimal", EXIT_OK),
                Status::TimedOut if s.assignment.is_some() => ("timed out", EXIT_OK),
                Status::TimedOut => ("timed out", EXIT_TIMEOUT),
                Status::Infeasible => ("infeasible", EXIT_FAIL),
            };
            println!("model {id}");
            println!("status {status}");
            println!("nodes {}", s.nodes_explored);
            if let (Some(obj), Some(a)) = (s.objective, &s.assignment) {
                println!("objective {obj}");
                let decoded = decode_solution(&m, a)?;
                println!("labels {}", decoded.labels);
                let verdict = validate(&g, &decoded.labels)?;
                if !verdict.is_valid() {
                    let failing: Vec<String> =
                        verdict.failing_vertices().iter().map(|v| v.to_string()).collect();
                    println!(
                        "note: encoding gap, decoded labeling is not a valid {}RDF (failing vertices {})",
                        id.k(),
                        failing.join(",")
                    );
                }
                if decoded.is_multi_set() {
                    let multi: Vec<String> = decoded.multi_set.iter().map(|v| v.to_string()).collect();
                    println!("note: several labels set at vertices {}", multi.join(","));
                }
            }
            Ok(code)
        }
        Command::Export { graph, model } => {
            let g = load_graph(&graph)?;
            let id = model.fidelity.resolve(model.model);
            let opts = BuildOptions { graph_label: Some(graph_label(&graph)), ..BuildOptions::default() };
            print!("{}", export_lp(&build_with(&g, id, &opts)?));
            Ok(EXIT_OK)
        }
        Command::Bench { config, format, no_times, jobs, budget } => {
            let mut cfg = BenchConfig::from_file(&config)?;
            if let Some(j) = jobs {
                cfg.jobs = j;
            }
            if let Some(b) = budget {
                cfg.budget_seconds = b;
            }
            let report = run_suite(&cfg)?;
            print!("{}", format_table(&report, format, !no_times));
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
