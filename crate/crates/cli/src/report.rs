//! Comparison tables and CSV.

use std::fmt::Write as _;

use foon::Algorithm;

/// Column order of the comparison CSV.
pub const CSV_HEADER: &str = "goal,algorithm,units,expanded,depth_bound,resolved";
pub const CSV_ORACLE_COLUMNS: &str = "minimal_units,minimal_depth";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgorithmRow {
    pub algorithm: Algorithm,
    /// `None` when the goal could not be resolved.
    pub units: Option<usize>,
    pub expanded: usize,
    pub depth_bound: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleCell {
    Value(usize),
    Unresolvable,
    TooLarge,
}

impl OracleCell {
    fn csv(&self) -> String {
        match self {
            OracleCell::Value(v) => v.to_string(),
            OracleCell::Unresolvable | OracleCell::TooLarge => String::new(),
        }
    }

    fn text(&self) -> String {
        match self {
            OracleCell::Value(v) => v.to_string(),
            OracleCell::Unresolvable => "unresolvable".into(),
            OracleCell::TooLarge => "graph too large".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleSummary {
    pub minimal_units: OracleCell,
    pub minimal_depth: OracleCell,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoalComparison {
    pub label: String,
    pub rows: Vec<AlgorithmRow>,
    pub oracle: Option<OracleSummary>,
}

fn opt(v: Option<usize>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn csv_field(field: &str) -> String {
    if field.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// One line per (goal, algorithm); oracle columns only when requested.
pub fn render_csv(comparisons: &[GoalComparison], with_oracle: bool) -> String {
    let mut out = String::from(CSV_HEADER);
    if with_oracle {
        out.push(',');
        out.push_str(CSV_ORACLE_COLUMNS);
    }
    out.push('\n');
    for cmp in comparisons {
        for row in &cmp.rows {
            let _ = write!(
                out,
                "{},{},{},{},{},{}",
                csv_field(&cmp.label),
                row.algorithm.short_name(),
                opt(row.units),
                row.expanded,
                opt(row.depth_bound),
                row.units.is_some()
            );
            if with_oracle {
                let (u, d) = cmp
                    .oracle
                    .as_ref()
                    .map(|o| (o.minimal_units.csv(), o.minimal_depth.csv()))
                    .unwrap_or_default();
                let _ = write!(out, ",{u},{d}");
            }
            out.push('\n');
        }
    }
    out
}

/// Boxed two-column table, one per goal, numbered from 1.
pub fn render_table(number: usize, cmp: &GoalComparison) -> String {
    const ALGO_HEAD: &str = "Search Algorithm";
    const UNITS_HEAD: &str = "Number of Functional Units";
    let cells: Vec<(&str, String)> = cmp
        .rows
        .iter()
        .map(|r| {
            (
                r.algorithm.label(),
                r.units.map_or_else(|| "unresolved".to_string(), |u| u.to_string()),
            )
        })
        .collect();
    let left = cells
        .iter()
        .map(|c| c.0.len())
        .chain([ALGO_HEAD.len()])
        .max()
        .unwrap_or(0);
    let right = cells
        .iter()
        .map(|c| c.1.len())
        .chain([UNITS_HEAD.len()])
        .max()
        .unwrap_or(0);
    let rule = format!("+-{}-+-{}-+\n", "-".repeat(left), "-".repeat(right));

    let mut out = format!("Goal #{number}: {}\n", cmp.label);
    out.push_str(&rule);
    let _ = writeln!(out, "| {ALGO_HEAD:<left$} | {UNITS_HEAD:<right$} |");
    out.push_str(&rule);
    for (name, units) in &cells {
        let _ = writeln!(out, "| {name:<left$} | {units:<right$} |");
    }
    out.push_str(&rule);

    let best = cmp.rows.iter().filter_map(|r| r.units).min();
    if let Some(best) = best {
        let winners: Vec<&str> = cmp
            .rows
            .iter()
            .filter(|r| r.units == Some(best))
            .map(|r| r.algorithm.label())
            .collect();
        let _ = writeln!(out, "Fewest functional units: {}", winners.join(", "));
    }
    if let Some(oracle) = &cmp.oracle {
        let _ = writeln!(
            out,
            "Oracle: minimal units {}, minimal depth {}",
            oracle.minimal_units.text(),
            oracle.minimal_depth.text()
        );
    }
    out
}
