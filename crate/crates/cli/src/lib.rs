//! Command-line front end: merge subgraphs, retrieve task trees, compare the
//! three search algorithms and draw graphs.

pub mod report;

use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use thiserror::Error;

use foon::oracle::enumerate_resolutions;
use foon::{
    merge_subgraphs, parse_goal_nodes, parse_kitchen, parse_motion_rates, parse_subgraph, retrieve, to_dot,
    write_subgraph, write_task_tree, Algorithm, FoonGraph, FunctionalUnit, GoalSpec, Kitchen, OracleError, ParseError,
    RetrievalConfig, SchemaError, DEFAULT_DEPTH_CAP,
};

use report::{AlgorithmRow, GoalComparison, OracleCell, OracleSummary};

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNRESOLVED: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "foon",
    version,
    about = "Task tree retrieval over functional object-oriented networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Largest depth bound iterative deepening tries.
    #[arg(long, env = "FOON_DEPTH_CAP", default_value_t = DEFAULT_DEPTH_CAP)]
    pub depth_cap: usize,
    /// Motion success rates, one `motion<TAB>rate` per line.
    #[arg(long, env = "FOON_MOTION_RATES")]
    pub motion_rates: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Merge subgraph files into one universal FOON.
    Merge {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Retrieve a task tree for every goal and write it with its drawing.
    Retrieve {
        universal: PathBuf,
        kitchen: PathBuf,
        goals: PathBuf,
        #[arg(long, default_value = "ids")]
        algo: Algorithm,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Run all three algorithms on every goal and tabulate tree sizes.
    Compare {
        universal: PathBuf,
        kitchen: PathBuf,
        goals: PathBuf,
        /// Add the exhaustive minimum unit count and depth.
        #[arg(long)]
        with_oracle: bool,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Also write `compare.csv` here.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Draw a FOON file as Graphviz DOT.
    Viz {
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: {source}", path.display())]
    Parse { path: PathBuf, source: ParseError },
    #[error("{}: {source}", path.display())]
    Schema { path: PathBuf, source: SchemaError },
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(io_err(path))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(io_err(path))
}

fn load_units(path: &Path) -> Result<Vec<FunctionalUnit>, CliError> {
    parse_subgraph(&read(path)?).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

/// Parses a FOON file; repeated units are collapsed with a warning.
fn load_graph(path: &Path, err: &mut dyn Write) -> Result<FoonGraph, CliError> {
    let outcome = merge_subgraphs([load_units(path)?]);
    if outcome.dropped > 0 {
        let _ = writeln!(
            err,
            "warning: {}: {} repeated unit(s) ignored",
            path.display(),
            outcome.dropped
        );
    }
    Ok(outcome.graph)
}

fn load_kitchen(path: &Path, err: &mut dyn Write) -> Result<Kitchen, CliError> {
    let parsed = parse_kitchen(&read(path)?).map_err(|source| CliError::Schema {
        path: path.to_path_buf(),
        source,
    })?;
    for w in &parsed.warnings {
        let _ = writeln!(err, "warning: {}: {w}", path.display());
    }
    Ok(parsed.value)
}

fn load_goals(path: &Path) -> Result<Vec<GoalSpec>, CliError> {
    parse_goal_nodes(&read(path)?).map_err(|source| CliError::Schema {
        path: path.to_path_buf(),
        source,
    })
}

fn load_config(search: &SearchArgs, needs_rates: bool, err: &mut dyn Write) -> Result<RetrievalConfig, CliError> {
    let mut config = RetrievalConfig {
        depth_cap: search.depth_cap,
        ..RetrievalConfig::default()
    };
    match &search.motion_rates {
        Some(path) => {
            let parsed = parse_motion_rates(&read(path)?).map_err(|source| CliError::Parse {
                path: path.clone(),
                source,
            })?;
            for w in &parsed.warnings {
                let _ = writeln!(err, "warning: {}: {w}", path.display());
            }
            config.rates = parsed.value;
        }
        None if needs_rates => {
            let _ = writeln!(err, "warning: no motion rates given, every motion scores 0");
        }
        None => {}
    }
    Ok(config)
}

/// File-name stem for a goal: lowercase alphanumerics joined by `_`.
pub fn goal_slug(goal: &GoalSpec) -> String {
    let mut slug = String::new();
    for c in goal.target.name.chars() {
        if c.is_alphanumeric() {
            slug.extend(c.to_lowercase());
        } else if !slug.is_empty() && !slug.ends_with('_') {
            slug.push('_');
        }
    }
    while slug.ends_with('_') {
        slug.pop();
    }
    if slug.is_empty() {
        slug.push_str("goal");
    }
    slug
}

/// Slugs for a goal list, suffixed `_2`, `_3`, ... where names repeat.
pub fn unique_slugs(goals: &[GoalSpec]) -> Vec<String> {
    let mut used = BTreeSet::new();
    goals
        .iter()
        .map(|g| {
            let base = goal_slug(g);
            let mut slug = base.clone();
            let mut n = 2;
            while !used.insert(slug.clone()) {
                slug = format!("{base}_{n}");
                n += 1;
            }
            slug
        })
        .collect()
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(io_err(dir))
}

fn cmd_merge(inputs: &[PathBuf], out_path: &Path, out: &mut dyn Write) -> Result<i32, CliError> {
    let subgraphs = inputs.iter().map(|p| load_units(p)).collect::<Result<Vec<_>, _>>()?;
    let outcome = merge_subgraphs(subgraphs);
    write_file(out_path, &write_subgraph(outcome.graph.units()))?;
    let _ = writeln!(
        out,
        "merged {} file(s): {} unit(s) kept, {} duplicate(s) dropped -> {}",
        inputs.len(),
        outcome.kept,
        outcome.dropped,
        out_path.display()
    );
    Ok(EXIT_OK)
}

struct Inputs {
    graph: FoonGraph,
    kitchen: Kitchen,
    goals: Vec<GoalSpec>,
}

fn load_inputs(universal: &Path, kitchen: &Path, goals: &Path, err: &mut dyn Write) -> Result<Inputs, CliError> {
    Ok(Inputs {
        graph: load_graph(universal, err)?,
        kitchen: load_kitchen(kitchen, err)?,
        goals: load_goals(goals)?,
    })
}

fn cmd_retrieve(
    inputs: &Inputs,
    algo: Algorithm,
    config: &RetrievalConfig,
    out_dir: &Path,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    create_dir(out_dir)?;
    let mut failures = 0;
    for (goal, slug) in inputs.goals.iter().zip(unique_slugs(&inputs.goals)) {
        match retrieve(algo, &inputs.graph, &inputs.kitchen, goal, config) {
            Ok(tree) => {
                let stem = format!("{slug}_{}", algo.short_name());
                let tree_path = out_dir.join(format!("{stem}.foon.txt"));
                write_file(&tree_path, &write_task_tree(&inputs.graph, &tree))?;
                write_file(
                    &out_dir.join(format!("{stem}.dot")),
                    &to_dot(&inputs.graph, Some(&tree)),
                )?;
                let _ = writeln!(
                    out,
                    "{}: {} unit(s) -> {}",
                    goal.target,
                    tree.unit_count(),
                    tree_path.display()
                );
            }
            Err(e) => {
                failures += 1;
                let _ = writeln!(err, "{}: {e}", algo.short_name());
            }
        }
    }
    Ok(if failures > 0 { EXIT_UNRESOLVED } else { EXIT_OK })
}

fn oracle_summary(graph: &FoonGraph, kitchen: &Kitchen, goal: &GoalSpec) -> OracleSummary {
    match enumerate_resolutions(graph, kitchen, goal, graph.len()) {
        Ok(found) if found.is_empty() => OracleSummary {
            minimal_units: OracleCell::Unresolvable,
            minimal_depth: OracleCell::Unresolvable,
        },
        Ok(found) => OracleSummary {
            minimal_units: OracleCell::Value(found.iter().map(|r| r.units.len()).min().unwrap_or(0)),
            minimal_depth: OracleCell::Value(found.iter().map(|r| r.depth).min().unwrap_or(0)),
        },
        Err(OracleError::TooLarge { .. }) => OracleSummary {
            minimal_units: OracleCell::TooLarge,
            minimal_depth: OracleCell::TooLarge,
        },
        Err(OracleError::UnresolvableGoal(_)) => OracleSummary {
            minimal_units: OracleCell::Unresolvable,
            minimal_depth: OracleCell::Unresolvable,
        },
    }
}

/// Runs every algorithm on every goal. Goals are processed in parallel; the
/// result keeps goal order.
pub fn compare_goals(
    graph: &FoonGraph,
    kitchen: &Kitchen,
    goals: &[GoalSpec],
    config: &RetrievalConfig,
    with_oracle: bool,
) -> Vec<GoalComparison> {
    goals
        .par_iter()
        .map(|goal| {
            let rows = Algorithm::ALL
                .iter()
                .map(|&algorithm| {
                    let (units, stats) = match retrieve(algorithm, graph, kitchen, goal, config) {
                        Ok(tree) => (Some(tree.unit_count()), tree.stats),
                        Err(e) => (None, *e.stats),
                    };
                    AlgorithmRow {
                        algorithm,
                        units,
                        expanded: stats.units_expanded,
                        depth_bound: stats.final_depth_bound,
                    }
                })
                .collect();
            GoalComparison {
                label: goal.target.to_string(),
                rows,
                oracle: with_oracle.then(|| oracle_summary(graph, kitchen, goal)),
            }
        })
        .collect()
}

fn cmd_compare(
    inputs: &Inputs,
    config: &RetrievalConfig,
    with_oracle: bool,
    format: Format,
    out_dir: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let comparisons = compare_goals(&inputs.graph, &inputs.kitchen, &inputs.goals, config, with_oracle);
    let csv = report::render_csv(&comparisons, with_oracle);
    match format {
        Format::Csv => {
            let _ = out.write_all(csv.as_bytes());
        }
        Format::Table => {
            for (i, cmp) in comparisons.iter().enumerate() {
                if i > 0 {
                    let _ = writeln!(out);
                }
                let _ = out.write_all(report::render_table(i + 1, cmp).as_bytes());
            }
        }
    }
    if let Some(dir) = out_dir {
        create_dir(dir)?;
        write_file(&dir.join("compare.csv"), &csv)?;
    }
    let unresolved = comparisons.iter().any(|c| c.rows.iter().any(|r| r.units.is_none()));
    Ok(if unresolved { EXIT_UNRESOLVED } else { EXIT_OK })
}

fn cmd_viz(input: &Path, out_path: &Path, err: &mut dyn Write) -> Result<i32, CliError> {
    let graph = load_graph(input, err)?;
    write_file(out_path, &to_dot(&graph, None))?;
    Ok(EXIT_OK)
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Merge { inputs, out: out_path } => cmd_merge(&inputs, &out_path, out),
        Command::Retrieve {
            universal,
            kitchen,
            goals,
            algo,
            out_dir,
            search,
        } => {
            let config = load_config(&search, algo == Algorithm::GbfsSuccessRate, err)?;
            let inputs = load_inputs(&universal, &kitchen, &goals, err)?;
            cmd_retrieve(&inputs, algo, &config, &out_dir, out, err)
        }
        Command::Compare {
            universal,
            kitchen,
            goals,
            with_oracle,
            format,
            out_dir,
            search,
        } => {
            let config = load_config(&search, true, err)?;
            let inputs = load_inputs(&universal, &kitchen, &goals, err)?;
            cmd_compare(&inputs, &config, with_oracle, format, out_dir.as_deref(), out)
        }
        Command::Viz { input, out: out_path } => cmd_viz(&input, &out_path, err),
    }
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}
