//! Benchmark harness: instance grids, per-model solves, discrepancy notes and
//! result tables.
//!
//! A report has one row per instance and one column per solved model. Column
//! order follows the configured model list; with both fidelities the faithful
//! models come first, followed by the exact models they resolve to. Cells for
//! runs that timed out or could not be attempted render as `-`.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{erdos_renyi_connected, parse_edge_list, Graph};
use crate::labeling::{validate, LabelFunction};
use crate::model::{build, decode_solution, integerize, Fidelity, ModelId};
use crate::oracle::{full_labels, Oracle, DEFAULT_CAP};
use crate::solver::{solve, verify, Status};

pub const DEFAULT_BUDGET: f64 = 1800.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: bad value `{value}` for `{key}`")]
    BadValue { line: usize, key: String, value: String },
    #[error("line {line}: `{key}` given twice")]
    Duplicate { line: usize, key: String },
    #[error("`{0}` is required when any of n, p, seed is given")]
    MissingKey(&'static str),
    #[error("no instances: give n, p and seed, or graphs")]
    NoInstances,
    #[error("no models selected")]
    NoModels,
    #[error("budget must be positive, got {0}")]
    InvalidBudget(f64),
    #[error("oracle_max_n = {0} exceeds the oracle cap {DEFAULT_CAP}")]
    OracleCap(usize),
    #[error("jobs must be at least 1")]
    InvalidJobs,
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: {message}")]
    Graph { path: String, message: String },
}

/// Which fidelities a run covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FidelityChoice {
    Faithful,
    Corrected,
    Both,
}

impl FromStr for FidelityChoice {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s.to_ascii_lowercase().as_str() {
            "faithful" => Ok(FidelityChoice::Faithful),
            "corrected" => Ok(FidelityChoice::Corrected),
            "both" => Ok(FidelityChoice::Both),
            _ => Err(()),
        }
    }
}

/// Where an instance comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum InstanceSpec {
    /// Connected `G(n, p)` drawn from `seed` onward.
    Random { n: usize, p: f64, seed: u64 },
    /// A fixed graph, e.g. read from an edge-list file.
    Explicit { name: String, graph: Graph },
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub instances: Vec<InstanceSpec>,
    pub models: Vec<ModelId>,
    pub fidelity: FidelityChoice,
    pub budget_seconds: f64,
    pub oracle_check: bool,
    pub oracle_max_n: usize,
    pub jobs: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            instances: Vec::new(),
            models: ModelId::ALL[..6].to_vec(),
            fidelity: FidelityChoice::Faithful,
            budget_seconds: DEFAULT_BUDGET,
            oracle_check: false,
            oracle_max_n: 9,
            jobs: 1,
        }
    }
}

impl BenchConfig {
    /// `n x p x seed` grid, in that nesting order.
    pub fn grid(ns: &[usize], ps: &[f64], seeds: &[u64]) -> Vec<InstanceSpec> {
        let mut out = Vec::new();
        for &n in ns {
            for &p in ps {
                for &seed in seeds {
                    out.push(InstanceSpec::Random { n, p, seed });
                }
            }
        }
        out
    }

    pub fn check(&self) -> Result<(), ConfigError> {
        if self.instances.is_empty() {
            return Err(ConfigError::NoInstances);
        }
        if self.models.is_empty() {
            return Err(ConfigError::NoModels);
        }
        if self.budget_seconds.is_nan() || self.budget_seconds <= 0.0 || !self.budget_seconds.is_finite() {
            return Err(ConfigError::InvalidBudget(self.budget_seconds));
        }
        if self.oracle_max_n > DEFAULT_CAP {
            return Err(ConfigError::OracleCap(self.oracle_max_n));
        }
        if self.jobs == 0 {
            return Err(ConfigError::InvalidJobs);
        }
        Ok(())
    }

    /// Reads a config file; relative graph paths resolve against its directory.
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io { path: path.display().to_string(), message: e.to_string() })?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base)
    }

    /// Parses the `key = value` format. Lists are comma-separated, `#` starts
    /// a comment line.
    pub fn parse(text: &str, base: &Path) -> Result<Self, ConfigError> {
        let mut seen: BTreeMap<String, (usize, String)> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (key, value) = trimmed.split_once('=').ok_or(ConfigError::Syntax { line })?;
            let key = key.trim().to_ascii_lowercase();
            if seen.contains_key(&key) {
                return Err(ConfigError::Duplicate { line, key });
            }
            seen.insert(key, (line, value.trim().to_string()));
        }

        let mut cfg = BenchConfig::default();
        let mut ns = None;
        let mut ps = None;
        let mut seeds = None;
        let mut graphs = Vec::new();
        for (key, (line, value)) in &seen {
            let line = *line;
            let bad = || ConfigError::BadValue { line, key: key.clone(), value: value.clone() };
            match key.as_str() {
                "n" => ns = Some(parse_list::<usize>(value).ok_or_else(bad)?),
                "p" => {
                    let list = parse_list::<f64>(value).ok_or_else(bad)?;
                    if list.iter().any(|p| !(0.0..=1.0).contains(p)) {
                        return Err(bad());
                    }
                    ps = Some(list);
                }
                "seed" => seeds = Some(parse_list::<u64>(value).ok_or_else(bad)?),
                "graphs" => graphs = split_list(value).map(str::to_string).collect(),
                "models" => cfg.models = parse_list::<ModelId>(value).ok_or_else(bad)?,
                "fidelity" => cfg.fidelity = value.parse().map_err(|_| bad())?,
                "budget" => cfg.budget_seconds = value.parse().map_err(|_| bad())?,
                "oracle_check" => cfg.oracle_check = parse_bool(value).ok_or_else(bad)?,
                "oracle_max_n" => cfg.oracle_max_n = value.parse().map_err(|_| bad())?,
                "jobs" => cfg.jobs = value.parse().map_err(|_| bad())?,
                _ => return Err(ConfigError::UnknownKey { line, key: key.clone() }),
            }
        }

        if ns.is_some() || ps.is_some() || seeds.is_some() {
            let ns = ns.ok_or(ConfigError::MissingKey("n"))?;
            let ps = ps.ok_or(ConfigError::MissingKey("p"))?;
            let seeds = seeds.ok_or(ConfigError::MissingKey("seed"))?;
            cfg.instances = Self::grid(&ns, &ps, &seeds);
        }
        for file in graphs {
            let path = resolve(base, &file);
            let shown = path.display().to_string();
            let text = std::fs::read_to_string(&path)
                .map_err(|e| ConfigError::Io { path: shown.clone(), message: e.to_string() })?;
            let graph = parse_edge_list(&text)
                .map_err(|e| ConfigError::Graph { path: shown, message: e.to_string() })?;
            cfg.instances.push(InstanceSpec::Explicit { name: file, graph });
        }
        cfg.check()?;
        Ok(cfg)
    }

    /// Resolved models in column order, without repeats.
    pub fn columns(&self) -> Vec<ModelId> {
        let fidelities: &[Fidelity] = match self.fidelity {
            FidelityChoice::Faithful => &[Fidelity::Faithful],
            FidelityChoice::Corrected => &[Fidelity::Corrected],
            FidelityChoice::Both => &[Fidelity::Faithful, Fidelity::Corrected],
        };
        let mut out = Vec::new();
        for &fid in fidelities {
            for &id in &self.models {
                let resolved = fid.resolve(id);
                if !out.contains(&resolved) {
                    out.push(resolved);
                }
            }
        }
        out
    }
}

fn split_list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

fn parse_list<T: FromStr>(value: &str) -> Option<Vec<T>> {
    let list: Vec<T> = split_list(value).map(|s| s.parse().ok()).collect::<Option<_>>()?;
    (!list.is_empty()).then_some(list)
}

fn parse_bool(value: &str) -> Option<bool> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Some(true),
        "false" | "no" | "off" | "0" => Some(false),
        _ => None,
    }
}

fn resolve(base: &Path, file: &str) -> PathBuf {
    let p = Path::new(file);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

/// The model's fidelity as shown in reports.
pub fn fidelity_of(id: ModelId) -> Fidelity {
    if id.is_active_neighborhood() {
        Fidelity::Corrected
    } else {
        Fidelity::Faithful
    }
}

/// Identity and size of a report row.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceInfo {
    pub name: String,
    pub n: usize,
    /// `None` when the instance could not be generated.
    pub edges: Option<usize>,
    pub p: Option<f64>,
    /// Seed of the draw actually used, after connectivity retries.
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellStatus {
    Optimal,
    TimedOut,
    Infeasible,
    Skipped,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub model: ModelId,
    pub status: CellStatus,
    /// Proven optimum; present only for optimal cells.
    pub result: Option<i64>,
    /// Wall seconds of the solve; absent for timed-out and skipped cells.
    pub seconds: Option<f64>,
    pub labels: Option<LabelFunction>,
    pub nodes: u64,
}

impl Cell {
    fn skipped(model: ModelId) -> Self {
        Cell { model, status: CellStatus::Skipped, result: None, seconds: None, labels: None, nodes: 0 }
    }
}

/// Something in a row that deserves a second look.
#[derive(Debug, Clone, PartialEq)]
pub enum Note {
    /// Optimal values of models for the same `k` differ.
    ModelDisagreement {
        k: u8,
        values: Vec<(ModelId, i64)>,
    },
    /// The decoded optimal labeling fails the definition.
    InvalidDecoding {
        model: ModelId,
        failing: Vec<usize>,
        multi_set: Vec<usize>,
    },
    /// Model optimum differs from the exhaustive optimum.
    OracleMismatch {
        model: ModelId,
        model_value: i64,
        oracle_value: u64,
    },
    /// A reported optimum did not survive an exact re-check.
    Unverified {
        model: ModelId,
        reason: String,
    },
    GenerationFailed {
        message: String,
    },
    SolveFailed {
        model: ModelId,
        message: String,
    },
}

impl Note {
    pub fn model(&self) -> Option<ModelId> {
        match self {
            Note::InvalidDecoding { model, .. }
            | Note::OracleMismatch { model, .. }
            | Note::Unverified { model, .. }
            | Note::SolveFailed { model, .. } => Some(*model),
            _ => None,
        }
    }
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Note {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Note::ModelDisagreement { k, values } => {
                let parts: Vec<String> = values.iter().map(|(m, v)| format!("{m}={v}")).collect();
                write!(f, "k={k} models disagree: {}", parts.join(" "))
            }
            Note::InvalidDecoding { model, failing, multi_set } => {
                write!(
                    f,
                    "{model}: decoded labeling is not a valid {}RDF (failing vertices {})",
                    model.k(),
                    join(failing)
                )?;
                if !multi_set.is_empty() {
                    write!(f, ", several labels set at {}", join(multi_set))?;
                }
                Ok(())
            }
            Note::OracleMismatch { model, model_value, oracle_value } => {
                write!(f, "{model}: optimum {model_value} but exhaustive optimum is {oracle_value}")
            }
            Note::Unverified { model, reason } => write!(f, "{model}: {reason}"),
            Note::GenerationFailed { message } => write!(f, "instance not generated: {message}"),
            Note::SolveFailed { model, message } => write!(f, "{model}: {message}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub instance: InstanceInfo,
    /// One cell per report column, in column order.
    pub cells: Vec<Cell>,
    pub notes: Vec<Note>,
}

/// One flattened report entry.
#[derive(Debug, Clone, PartialEq)]
pub struct Entry<'r> {
    pub instance: &'r InstanceInfo,
    pub model: ModelId,
    pub fidelity: Fidelity,
    pub result: Option<i64>,
    pub seconds: Option<f64>,
    pub notes: Vec<&'r Note>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Environment {
    pub os: String,
    pub cores: usize,
}

impl Environment {
    pub fn current() -> Self {
        Environment {
            os: std::env::consts::OS.to_string(),
            cores: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub columns: Vec<ModelId>,
    pub rows: Vec<ReportRow>,
    pub budget_seconds: f64,
    pub environment: Environment,
}

impl BenchReport {
    pub fn entries(&self) -> Vec<Entry<'_>> {
        let mut out = Vec::new();
        for row in &self.rows {
            for cell in &row.cells {
                out.push(Entry {
                    instance: &row.instance,
                    model: cell.model,
                    fidelity: fidelity_of(cell.model),
                    result: cell.result,
                    seconds: cell.seconds,
                    notes: row.notes.iter().filter(|n| n.model().is_none_or(|m| m == cell.model)).collect(),
                });
            }
        }
        out
    }

    pub fn notes(&self) -> impl Iterator<Item = (usize, &ReportRow, &Note)> {
        self.rows.iter().enumerate().flat_map(|(i, r)| r.notes.iter().map(move |n| (i, r, n)))
    }
}

/// Runs every instance of `cfg`, rows in parallel on `cfg.jobs` workers.
pub fn run_suite(cfg: &BenchConfig) -> Result<BenchReport, ConfigError> {
    cfg.check()?;
    let columns = cfg.columns();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .expect("thread pool with a positive worker count");
    let rows =
        pool.install(|| cfg.instances.par_iter().map(|spec| run_instance(cfg, &columns, spec)).collect());
    Ok(BenchReport { columns, rows, budget_seconds: cfg.budget_seconds, environment: Environment::current() })
}

fn run_instance(cfg: &BenchConfig, columns: &[ModelId], spec: &InstanceSpec) -> ReportRow {
    let (graph, instance) = match spec {
        InstanceSpec::Random { n, p, seed } => match erdos_renyi_connected(*n, *p, *seed) {
            Ok((g, d)) => {
                let info = InstanceInfo {
                    name: d.label(),
                    n: d.n,
                    edges: Some(d.realized_edge_count),
                    p: Some(d.p),
                    seed: Some(d.seed),
                };
                (g, info)
            }
            Err(e) => {
                let info = InstanceInfo {
                    name: format!("er-{n}-{p}-seed{seed}"),
                    n: *n,
                    edges: None,
                    p: Some(*p),
                    seed: Some(*seed),
                };
                return ReportRow {
                    instance: info,
                    cells: columns.iter().map(|&m| Cell::skipped(m)).collect(),
                    notes: vec![Note::GenerationFailed { message: e.to_string() }],
                };
            }
        },
        InstanceSpec::Explicit { name, graph } => {
            let info = InstanceInfo {
                name: name.clone(),
                n: graph.vertex_count(),
                edges: Some(graph.edge_count()),
                p: None,
                seed: None,
            };
            (graph.clone(), info)
        }
    };

    let mut notes = Vec::new();
    let cells: Vec<Cell> =
        columns.iter().map(|&model| run_cell(&graph, model, cfg.budget_seconds, &mut notes)).collect();

    for k in [3u8, 4] {
        let values: Vec<(ModelId, i64)> = cells
            .iter()
            .filter(|c| c.model.k() == k)
            .filter_map(|c| c.result.map(|v| (c.model, v)))
            .collect();
        if values.iter().any(|&(_, v)| v != values[0].1) {
            notes.push(Note::ModelDisagreement { k, values });
        }
    }

    if cfg.oracle_check && graph.vertex_count() <= cfg.oracle_max_n {
        let oracle = Oracle::default();
        let mut optimum: [Option<u64>; 2] = [None, None];
        for cell in &cells {
            let Some(value) = cell.result else { continue };
            let k = cell.model.k();
            let slot = &mut optimum[usize::from(k - 3)];
            if slot.is_none() {
                *slot = oracle.exact_gamma(&graph, k, &full_labels(k)).ok().map(|r| r.optimum);
            }
            if let Some(exact) = *slot {
                if u64::try_from(value) != Ok(exact) {
                    notes.push(Note::OracleMismatch {
                        model: cell.model,
                        model_value: value,
                        oracle_value: exact,
                    });
                }
            }
        }
    }

    ReportRow { instance, cells, notes }
}

fn run_cell(g: &Graph, model: ModelId, budget: f64, notes: &mut Vec<Note>) -> Cell {
    let built = match build(g, model) {
        Ok(m) => integerize(&m),
        Err(e) => {
            notes.push(Note::SolveFailed { model, message: e.to_string() });
            return Cell::skipped(model);
        }
    };
    let solution = match solve(&built, budget) {
        Ok(s) => s,
        Err(e) => {
            notes.push(Note::SolveFailed { model, message: e.to_string() });
            return Cell::skipped(model);
        }
    };
    let mut cell = Cell {
        model,
        status: match solution.status {
            Status::Optimal => CellStatus::Optimal,
            Status::TimedOut => CellStatus::TimedOut,
            Status::Infeasible => CellStatus::Infeasible,
        },
        result: None,
        seconds: None,
        labels: None,
        nodes: solution.nodes_explored,
    };
    if cell.status == CellStatus::TimedOut {
        return cell;
    }
    cell.seconds = Some(solution.wall_time.as_secs_f64());
    let (Some(value), Some(assignment)) = (solution.objective, &solution.assignment) else {
        return cell;
    };

    let check = verify(&built, assignment);
    if !check.feasible {
        notes.push(Note::Unverified { model, reason: format!("violated rows {}", check.violated.join(",")) });
        return cell;
    }
    if built.objective_value(assignment) != value.into() {
        notes.push(Note::Unverified { model, reason: "objective does not match its assignment".into() });
        return cell;
    }
    cell.result = Some(value);

    match decode_solution(&built, assignment) {
        Ok(decoded) => {
            let verdict = validate(g, &decoded.labels).expect("decoded labels fit the graph");
            if !verdict.is_valid() {
                notes.push(Note::InvalidDecoding {
                    model,
                    failing: verdict.failing_vertices(),
                    multi_set: decoded.multi_set.clone(),
                });
            }
            cell.labels = Some(decoded.labels);
        }
        Err(e) => notes.push(Note::SolveFailed { model, message: e.to_string() }),
    }
    cell
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableStyle {
    Markdown,
    Csv,
}

impl FromStr for TableStyle {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s.to_ascii_lowercase().as_str() {
            "markdown" | "md" => Ok(TableStyle::Markdown),
            "csv" => Ok(TableStyle::Csv),
            _ => Err(()),
        }
    }
}

fn result_cell(c: &Cell) -> String {
    match (c.status, c.result) {
        (CellStatus::Infeasible, _) => "infeasible".into(),
        (_, Some(v)) => v.to_string(),
        _ => "-".into(),
    }
}

fn time_cell(c: &Cell) -> String {
    match c.seconds {
        Some(s) if c.status != CellStatus::TimedOut => format!("{s:.2}"),
        _ => "-".into(),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Renders `r` as a result/time table. With `times` off the output
/// depends only on the configuration and seeds.
pub fn format_table(r: &BenchReport, style: TableStyle, times: bool) -> String {
    let mut header = vec!["|V|".to_string(), "|E|".to_string(), "p".to_string()];
    for m in &r.columns {
        header.push(format!("{m} result"));
        if times {
            header.push(format!("{m} time"));
        }
    }
    let body: Vec<Vec<String>> = r
        .rows
        .iter()
        .map(|row| {
            let mut line = vec![
                row.instance.n.to_string(),
                row.instance.edges.map_or("-".into(), |e| e.to_string()),
                row.instance.p.map_or(String::new(), |p| p.to_string()),
            ];
            for c in &row.cells {
                line.push(result_cell(c));
                if times {
                    line.push(time_cell(c));
                }
            }
            line
        })
        .collect();

    let mut out = String::new();
    match style {
        TableStyle::Markdown => {
            if times {
                let env = &r.environment;
                let _ =
                    writeln!(out, "<!-- os={} cores={} budget={}s -->", env.os, env.cores, r.budget_seconds);
            }
            let esc = |s: &String| s.replace('|', "\\|");
            let _ = writeln!(out, "| {} |", header.iter().map(esc).collect::<Vec<_>>().join(" | "));
            let _ = writeln!(out, "|{}", "---|".repeat(header.len()));
            for line in &body {
                let _ = writeln!(out, "| {} |", line.join(" | "));
            }
            let notes: Vec<_> = r.notes().collect();
            if !notes.is_empty() {
                out.push_str("\nNotes:\n");
                for (i, row, note) in notes {
                    let _ = writeln!(out, "- row {} ({}): {note}", i + 1, row.instance.name);
                }
            }
        }
        TableStyle::Csv => {
            header.push("notes".into());
            let fields: Vec<String> = header.iter().map(|h| csv_field(h)).collect();
            let _ = write!(out, "{}\r\n", fields.join(","));
            for (row, mut line) in r.rows.iter().zip(body) {
                line.push(row.notes.iter().map(Note::to_string).collect::<Vec<_>>().join("; "));
                let fields: Vec<String> = line.iter().map(|f| csv_field(f)).collect();
                let _ = write!(out, "{}\r\n", fields.join(","));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn empty_report(columns: Vec<ModelId>) -> BenchReport {
        BenchReport {
            columns,
            rows: Vec::new(),
            budget_seconds: 1.0,
            environment: Environment { os: "test".into(), cores: 1 },
        }
    }

    #[test]
    fn parse_config() {
        let text = "# grid\nn = 10, 25\np = 0.2,0.5\nseed = 7\nmodels = M3RDP1, m4rdp-2\n\
                    fidelity = both\nbudget = 30\noracle_check = yes\njobs = 2\n";
        let cfg = BenchConfig::parse(text, Path::new(".")).unwrap();
        assert_eq!(cfg.instances.len(), 4);
        assert_eq!(cfg.instances[1], InstanceSpec::Random { n: 10, p: 0.5, seed: 7 });
        assert_eq!(cfg.budget_seconds, 30.0);
        assert!(cfg.oracle_check);
        assert_eq!(cfg.columns(), vec![ModelId::M3Rdp1, ModelId::M4Rdp2, ModelId::M3RdpAn, ModelId::M4RdpAn]);
    }

    #[test]
    fn config_errors() {
        let base = Path::new(".");
        let parse = |t: &str| BenchConfig::parse(t, base);
        assert_eq!(parse("n 10"), Err(ConfigError::Syntax { line: 1 }));
        assert!(matches!(
            parse("n=4\np=0.5\nseed=1\ncolour=red"),
            Err(ConfigError::UnknownKey { line: 4, .. })
        ));
        assert_eq!(parse("n=4\nseed=1"), Err(ConfigError::MissingKey("p")));
        assert!(matches!(parse("n=4\np=1.5\nseed=1"), Err(ConfigError::BadValue { .. })));
        assert!(matches!(parse("n=4\np=0.5\nseed=1\nmodels=M5"), Err(ConfigError::BadValue { .. })));
        assert_eq!(parse("n=4\np=0.5\nseed=1\nbudget=0"), Err(ConfigError::InvalidBudget(0.0)));
        assert_eq!(parse("n=4\np=0.5\nseed=1\noracle_max_n=13"), Err(ConfigError::OracleCap(13)));
        assert_eq!(parse("budget=5"), Err(ConfigError::NoInstances));
        assert!(matches!(parse("n=4\nn=5"), Err(ConfigError::Duplicate { line: 2, .. })));
    }

    #[test]
    fn empty_report_is_header_only() {
        let r = empty_report(vec![ModelId::M3Rdp1]);
        assert_eq!(format_table(&r, TableStyle::Csv, false), "|V|,|E|,p,M3RDP1 result,notes\r\n");
        assert_eq!(
            format_table(&r, TableStyle::Markdown, false),
            "| \\|V\\| | \\|E\\| | p | M3RDP1 result |\n|---|---|---|---|\n"
        );
    }

    #[test]
    fn timed_out_cells_show_dashes() {
        let mut r = empty_report(vec![ModelId::M4Rdp1]);
        r.rows.push(ReportRow {
            instance: InstanceInfo { name: "x".into(), n: 60, edges: Some(300), p: Some(0.2), seed: Some(1) },
            cells: vec![Cell {
                model: ModelId::M4Rdp1,
                status: CellStatus::TimedOut,
                result: None,
                seconds: None,
                labels: None,
                nodes: 5,
            }],
            notes: Vec::new(),
        });
        let csv = format_table(&r, TableStyle::Csv, true);
        assert!(csv.ends_with("60,300,0.2,-,-,\r\n"), "{csv}");
    }

    #[test]
    fn forced_timeout() {
        let cfg = BenchConfig {
            instances: vec![InstanceSpec::Random { n: 60, p: 0.1, seed: 3 }],
            models: vec![ModelId::M4Rdp1],
            budget_seconds: 1e-6,
            ..BenchConfig::default()
        };
        let r = run_suite(&cfg).unwrap();
        assert_eq!(r.rows[0].cells[0].status, CellStatus::TimedOut);
        assert!(format_table(&r, TableStyle::Markdown, false).contains("| - |"));
    }

    #[test]
    fn star_gap_is_flagged() {
        let cfg = BenchConfig {
            instances: vec![InstanceSpec::Explicit { name: "star".into(), graph: Graph::star(3) }],
            models: vec![ModelId::M4Rdp2],
            fidelity: FidelityChoice::Both,
            budget_seconds: 60.0,
            oracle_check: true,
            ..BenchConfig::default()
        };
        let r = run_suite(&cfg).unwrap();
        let row = &r.rows[0];
        assert_eq!(row.cells[0].result, Some(4));
        assert_eq!(row.cells[1].result, Some(5));
        assert!(row.notes.iter().any(|n| matches!(n, Note::InvalidDecoding { model: ModelId::M4Rdp2, .. })));
        assert!(row.notes.iter().any(|n| matches!(
            n,
            Note::OracleMismatch { model: ModelId::M4Rdp2, model_value: 4, oracle_value: 5 }
        )));
        assert!(row.notes.iter().any(|n| matches!(n, Note::ModelDisagreement { k: 4, .. })));
        assert!(!row.notes.iter().any(|n| n.model() == Some(ModelId::M4RdpAn)));
    }

    #[test]
    fn exact_model_matches_oracle() {
        let cfg = BenchConfig {
            instances: BenchConfig::grid(&[8], &[0.3, 0.6], &[1, 2]),
            models: vec![ModelId::M3RdpAn, ModelId::M4RdpAn],
            fidelity: FidelityChoice::Corrected,
            budget_seconds: 60.0,
            oracle_check: true,
            jobs: 2,
            ..BenchConfig::default()
        };
        let r = run_suite(&cfg).unwrap();
        assert_eq!(r.rows.len(), 4);
        assert_eq!(r.notes().count(), 0);
        assert!(r.entries().iter().all(|e| e.result.is_some() && e.fidelity == Fidelity::Corrected));
    }

    #[test]
    fn faithful_family_agrees() {
        let cfg = BenchConfig {
            instances: BenchConfig::grid(&[10], &[0.5], &[5]),
            models: vec![ModelId::M4Rdp1, ModelId::M4Rdp2, ModelId::M4Rdp3],
            budget_seconds: 60.0,
            ..BenchConfig::default()
        };
        let r = run_suite(&cfg).unwrap();
        let values: Vec<_> = r.rows[0].cells.iter().map(|c| c.result.unwrap()).collect();
        assert!(values.iter().all(|&v| v == values[0]));
        assert!(!r.rows[0].notes.iter().any(|n| matches!(n, Note::ModelDisagreement { .. })));
    }
}
