//! Task tree retrieval: iterative deepening and greedy best-first search.
//!
//! Both algorithms resolve the goal backwards. A needed object that is in the
//! kitchen is satisfied; otherwise one of the units producing it is chosen and
//! its inputs become needed in turn. They differ only in how candidates are
//! ordered and bounded:
//!
//! * [`retrieve_ids`] tries candidates in ascending unit index under a depth
//!   bound measured in functional-unit hops from the goal, restarting with
//!   the bound raised by one until a resolution exists.
//! * [`retrieve_gbfs`] tries the best-scoring candidate first under the chosen
//!   [`HeuristicId`] and falls back to the next best on a dead end.

mod engine;
mod heuristic;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::graph::FoonGraph;
use crate::model::{GoalSpec, Kitchen, ObjectKey};
use crate::parser::MotionRateTable;
use crate::tree::{Algorithm, SearchStats, TaskTree};

use engine::{CandidateOrder, Engine};
pub use heuristic::{heuristic_input_count, heuristic_success_rate, HeuristicId};

pub const DEFAULT_DEPTH_CAP: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnresolvableReason {
    /// No unit produces the goal and it is not in the kitchen.
    NoCandidates,
    /// Every candidate route dead-ends, at any depth.
    DeadEnd,
    /// No resolution within the depth cap.
    DepthCapExhausted { depth_cap: usize },
}

impl fmt::Display for UnresolvableReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NoCandidates => f.write_str("no functional unit produces it"),
            Self::DeadEnd => f.write_str("every candidate unit dead-ends"),
            Self::DepthCapExhausted { depth_cap } => write!(f, "no task tree within depth cap {depth_cap}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("cannot produce {goal}: {reason}")]
pub struct UnresolvableGoal {
    pub goal: ObjectKey,
    pub reason: UnresolvableReason,
    pub stats: Box<SearchStats>,
}

/// Iterative deepening: bound 0, 1, 2, ... up to `depth_cap`, each a fresh
/// depth-first search. The returned tree has the smallest possible depth.
pub fn retrieve_ids(
    graph: &FoonGraph,
    kitchen: &Kitchen,
    goal: &GoalSpec,
    depth_cap: usize,
) -> Result<TaskTree, UnresolvableGoal> {
    let mut stats = SearchStats::new(Algorithm::Ids);
    if kitchen.contains(&goal.target) {
        stats.final_depth_bound = Some(0);
        return Ok(TaskTree {
            steps: Vec::new(),
            stats,
        });
    }
    let Some(goal_id) = graph
        .key_id(&goal.target)
        .filter(|&id| !graph.producers_of(id).is_empty())
    else {
        return Err(unresolvable(goal, UnresolvableReason::NoCandidates, stats));
    };

    let mut engine = Engine::new(graph, kitchen, CandidateOrder::Index, stats);
    for bound in 0..=depth_cap {
        if engine.run(goal_id, bound) {
            let steps = engine.execution_order();
            let mut stats = engine.stats;
            stats.final_depth_bound = Some(bound);
            return Ok(TaskTree { steps, stats });
        }
        if !engine.cutoff_hit {
            // Nothing was cut by the bound, so a deeper search sees the same space.
            return Err(unresolvable(goal, UnresolvableReason::DeadEnd, engine.stats));
        }
    }
    Err(unresolvable(
        goal,
        UnresolvableReason::DepthCapExhausted { depth_cap },
        engine.stats,
    ))
}

/// Greedy best-first retrieval with ordered backtracking.
pub fn retrieve_gbfs(
    graph: &FoonGraph,
    kitchen: &Kitchen,
    goal: &GoalSpec,
    heuristic: HeuristicId,
    rates: &MotionRateTable,
) -> Result<TaskTree, UnresolvableGoal> {
    let algorithm = match heuristic {
        HeuristicId::SuccessRate => Algorithm::GbfsSuccessRate,
        HeuristicId::InputCount => Algorithm::GbfsInputCount,
    };
    let stats = SearchStats::new(algorithm);
    if kitchen.contains(&goal.target) {
        return Ok(TaskTree {
            steps: Vec::new(),
            stats,
        });
    }
    let Some(goal_id) = graph
        .key_id(&goal.target)
        .filter(|&id| !graph.producers_of(id).is_empty())
    else {
        return Err(unresolvable(goal, UnresolvableReason::NoCandidates, stats));
    };

    let order = CandidateOrder::greedy(graph, heuristic, rates);
    let mut engine = Engine::new(graph, kitchen, order, stats);
    if engine.run(goal_id, usize::MAX) {
        let steps = engine.execution_order();
        Ok(TaskTree {
            steps,
            stats: engine.stats,
        })
    } else {
        Err(unresolvable(goal, UnresolvableReason::DeadEnd, engine.stats))
    }
}

/// Settings shared by the three algorithms.
#[derive(Debug, Clone)]
pub struct RetrievalConfig {
    pub depth_cap: usize,
    pub rates: MotionRateTable,
}

impl Default for RetrievalConfig {
    fn default() -> Self {
        Self {
            depth_cap: DEFAULT_DEPTH_CAP,
            rates: MotionRateTable::new(),
        }
    }
}

/// Dispatches to the algorithm named by `algorithm`.
pub fn retrieve(
    algorithm: Algorithm,
    graph: &FoonGraph,
    kitchen: &Kitchen,
    goal: &GoalSpec,
    config: &RetrievalConfig,
) -> Result<TaskTree, UnresolvableGoal> {
    match algorithm {
        Algorithm::Ids => retrieve_ids(graph, kitchen, goal, config.depth_cap),
        Algorithm::GbfsSuccessRate => retrieve_gbfs(graph, kitchen, goal, HeuristicId::SuccessRate, &config.rates),
        Algorithm::GbfsInputCount => retrieve_gbfs(graph, kitchen, goal, HeuristicId::InputCount, &config.rates),
    }
}

fn unresolvable(goal: &GoalSpec, reason: UnresolvableReason, stats: SearchStats) -> UnresolvableGoal {
    UnresolvableGoal {
        goal: goal.target.clone(),
        reason,
        stats: Box::new(stats),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("unit {0} is not in the graph")]
    UnknownUnit(usize),
    #[error("{0} is neither in the kitchen nor produced by a chosen unit")]
    Incomplete(ObjectKey),
    #[error("the goal can be produced without using all chosen units")]
    ExtraneousUnits,
    #[error("chosen units only produce the goal through a cycle")]
    CyclicResolution,
}

/// Linearizes a complete resolution: every unit after the producers of its
/// inputs, lowest index first among ready units, each unit exactly once.
pub fn execution_order(
    graph: &FoonGraph,
    kitchen: &Kitchen,
    goal: &GoalSpec,
    chosen: &BTreeSet<usize>,
) -> Result<Vec<usize>, OrderError> {
    if let Some(&bad) = chosen.iter().find(|&&u| u >= graph.len()) {
        return Err(OrderError::UnknownUnit(bad));
    }
    if kitchen.contains(&goal.target) {
        return if chosen.is_empty() {
            Ok(Vec::new())
        } else {
            Err(OrderError::ExtraneousUnits)
        };
    }
    let produced = |key: &ObjectKey| chosen.iter().any(|&u| graph.unit(u).produces(key));
    if !produced(&goal.target) {
        return Err(OrderError::Incomplete(goal.target.clone()));
    }
    for &u in chosen {
        if let Some(missing) = graph
            .unit(u)
            .input_keys()
            .find(|k| !kitchen.contains(k) && !produced(k))
        {
            return Err(OrderError::Incomplete(missing));
        }
    }

    let goal_id = graph.key_id(&goal.target).expect("goal is produced by a chosen unit");
    let engine = || Engine::new(graph, kitchen, CandidateOrder::Index, SearchStats::new(Algorithm::Ids));
    let mut exact = engine().restrict_to(chosen, true);
    if exact.run(goal_id, usize::MAX) {
        return Ok(exact.execution_order());
    }
    let mut loose = engine().restrict_to(chosen, false);
    if loose.run(goal_id, usize::MAX) {
        Err(OrderError::ExtraneousUnits)
    } else {
        Err(OrderError::CyclicResolution)
    }
}
