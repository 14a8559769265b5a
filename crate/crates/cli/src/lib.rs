//! `viewsel` command surface. [`run`] parses argv, executes one verb, and
//! returns the process exit code: 0 on success, 2 on invalid input, 3 when a
//! resource limit is hit, 1 on internal errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use viewsel_core::exact::{brute_force, dp_exact, KnapsackInstance};
use viewsel_core::fptas::approximate;
use viewsel_core::genbench::{compare_with, generate, knapsack_to_tree, BudgetRule, Family, GenSpec};
use viewsel_core::ingest::{
    attach_workload, compute_sizes, load_cost_entries, load_instance, load_workload, parse_xml, save_instance, write_edge_table,
    CostModel,
};
use viewsel_core::model::cost_tau;
use viewsel_core::{Epsilon, Error, Instance, Selection, Solution};

#[derive(Parser, Debug)]
#[command(name = "viewsel", version, about = "Choose XML subtree views to materialize under a storage budget")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Solver {
    Fptas,
    Dp,
    Brute,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build an instance file from an XML document and a workload.
    Ingest {
        #[arg(long)]
        xml: PathBuf,
        #[arg(long)]
        workload: PathBuf,
        /// `subtree-count`, `constant:R,A`, or `explicit` (needs --costs).
        #[arg(long, default_value = "subtree-count")]
        cost_model: String,
        /// Per-element costs for `--cost-model explicit`.
        #[arg(long)]
        costs: Option<PathBuf>,
        /// Storage budget; defaults to the size of the whole document.
        #[arg(long)]
        budget: Option<u64>,
        /// Also write the edge table as CSV.
        #[arg(long)]
        edges: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a random instance.
    Gen {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        /// Defaults to half the total node size.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve an instance.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum)]
        solver: Solver,
        /// Required for `fptas`; a decimal or `a/b` in (0, 1].
        #[arg(long, value_parser = parse_epsilon)]
        epsilon: Option<Epsilon>,
        /// Overrides the budget stored in the instance.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Evaluate a selection against an instance.
    Eval {
        #[arg(long)]
        instance: PathBuf,
        /// Comma-separated ids, or a file holding them as a JSON list or comma list.
        #[arg(long)]
        selection: String,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Encode a 0/1 knapsack as a tree instance.
    ReduceKnapsack {
        /// JSON list of `[profit, size]` pairs, or a knapsack file.
        #[arg(long)]
        items: PathBuf,
        #[arg(long)]
        capacity: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the exact solvers and the approximation side by side.
    Compare {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_delimiter = ',', value_parser = parse_epsilon)]
        epsilons: Vec<Epsilon>,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Run each solver on its own thread.
        #[arg(long)]
        parallel: bool,
    },
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_epsilon(s: &str) -> Result<Epsilon, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Core(Error::Io(e))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Core(Error::Json(e))
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Core(e) if e.is_resource_limit() => 3,
            Failure::Core(e) if e.is_internal() => 1,
            Failure::Core(_) => 2,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => f.write_str(m),
            Failure::Core(e) => e.fmt(f),
        }
    }
}

#[derive(Serialize)]
struct SolutionDoc {
    selection: Vec<u32>,
    lambda: u64,
    mu: u64,
    tau: u64,
    feasible: bool,
}

#[derive(Serialize)]
struct WrittenDoc<'a> {
    out: &'a Path,
    nodes: usize,
    budget: u64,
}

fn solution_doc(inst: &Instance, sol: &Solution) -> Result<SolutionDoc, Failure> {
    Ok(SolutionDoc {
        selection: sol.selection().ids(),
        lambda: sol.profit(),
        mu: sol.matsize(),
        tau: cost_tau(&inst.tree, sol.selection())?,
        feasible: inst.is_feasible(sol),
    })
}

fn emit(out: &mut dyn Write, doc: &impl Serialize) -> Result<(), Failure> {
    serde_json::to_writer(&mut *out, doc)?;
    writeln!(out)?;
    Ok(())
}

fn load_with_budget(path: &Path, budget: Option<u64>) -> Result<Instance, Failure> {
    let inst = load_instance(path)?;
    Ok(match budget {
        Some(b) => inst.with_budget(b),
        None => inst,
    })
}

fn parse_ids(text: &str) -> Result<Selection, Failure> {
    let trimmed = text.trim();
    if trimmed.starts_with('[') {
        let ids: Vec<u32> = serde_json::from_str(trimmed)?;
        return Ok(ids.into_iter().collect());
    }
    trimmed
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<u32>().map_err(|_| Failure::Usage(format!("bad node id {s:?} in selection"))))
        .collect()
}

fn read_items(path: &Path) -> Result<Vec<(u64, u64)>, Failure> {
    let text = std::fs::read_to_string(path)?;
    if let Ok(k) = serde_json::from_str::<KnapsackInstance>(&text) {
        return Ok(k.items);
    }
    Ok(serde_json::from_str(&text)?)
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<(), Failure> {
    match cmd {
        Command::Ingest { xml, workload, cost_model, costs, budget, edges, out: path } => {
            let cm = match (cost_model.as_str(), costs) {
                ("explicit", Some(c)) => CostModel::explicit(&load_cost_entries(c)?)?,
                ("explicit", None) => return Err(Failure::Usage("--cost-model explicit needs --costs".into())),
                (_, Some(_)) => return Err(Failure::Usage("--costs only applies to --cost-model explicit".into())),
                (m, None) => m.parse()?,
            };
            let doc = compute_sizes(parse_xml(&std::fs::read(xml)?)?);
            let tree = attach_workload(&doc, &load_workload(workload)?, &cm)?;
            let budget = budget.unwrap_or(tree.root().size);
            if let Some(e) = edges {
                write_edge_table(&doc.edge_rows(), std::fs::File::create(e)?)?;
            }
            let inst = Instance::new(tree, budget);
            save_instance(&inst, &path)?;
            emit(out, &WrittenDoc { out: &path, nodes: inst.tree.len(), budget })
        }
        Command::Gen { family, n, seed, budget, out: path } => {
            let mut spec = GenSpec::new(family, n, seed);
            if let Some(b) = budget {
                spec.budget = BudgetRule::Explicit(b);
            }
            let inst = generate(&spec)?;
            save_instance(&inst, &path)?;
            emit(out, &WrittenDoc { out: &path, nodes: inst.tree.len(), budget: inst.budget })
        }
        Command::Solve { instance, solver, epsilon, budget } => {
            if let (Solver::Fptas, None) = (solver, epsilon) {
                return Err(Failure::Usage("--solver fptas requires --epsilon".into()));
            }
            let inst = load_with_budget(&instance, budget)?;
            let sol = match solver {
                Solver::Fptas => approximate(&inst, epsilon.expect("checked above"))?,
                Solver::Dp => dp_exact(&inst)?,
                Solver::Brute => brute_force(&inst)?,
            };
            emit(out, &solution_doc(&inst, &sol)?)
        }
        Command::Eval { instance, selection, budget } => {
            let inst = load_with_budget(&instance, budget)?;
            let text = if Path::new(&selection).is_file() {
                std::fs::read_to_string(&selection)?
            } else {
                selection
            };
            let sol = Solution::evaluate(&inst.tree, parse_ids(&text)?)?;
            emit(out, &solution_doc(&inst, &sol)?)
        }
        Command::ReduceKnapsack { items, capacity, out: path } => {
            let k = KnapsackInstance::new(read_items(&items)?, capacity);
            let inst = knapsack_to_tree(&k)?;
            save_instance(&inst, &path)?;
            emit(out, &WrittenDoc { out: &path, nodes: inst.tree.len(), budget: inst.budget })
        }
        Command::Compare { instance, epsilons, budget, format, parallel } => {
            let inst = load_with_budget(&instance, budget)?;
            let report = compare_with(&inst, &epsilons, parallel)?;
            let text = match format {
                Format::Json => report.to_json()?,
                Format::Text => report.render_text(),
            };
            out.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

/// Runs one command. Results go to `out`; diagnostics go to `err` as a
/// single line.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let stream: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(stream, "{}", e.render());
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {f}");
            f.exit_code()
        }
    }
}
