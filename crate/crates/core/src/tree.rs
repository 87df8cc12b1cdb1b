//! Retrieval results.

use std::fmt;
use std::str::FromStr;

use crate::model::ObjectKey;

/// Which retrieval procedure produced a tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Ids,
    GbfsSuccessRate,
    GbfsInputCount,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Ids, Algorithm::GbfsSuccessRate, Algorithm::GbfsInputCount];

    /// Short name used on the command line and in file names.
    pub fn short_name(self) -> &'static str {
        match self {
            Algorithm::Ids => "ids",
            Algorithm::GbfsSuccessRate => "gbfs1",
            Algorithm::GbfsInputCount => "gbfs2",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Algorithm::Ids => "IDS",
            Algorithm::GbfsSuccessRate => "GBFS with Heuristic 1",
            Algorithm::GbfsInputCount => "GBFS with Heuristic 2",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownAlgorithm(pub String);

impl fmt::Display for UnknownAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown algorithm `{}` (expected ids, gbfs1 or gbfs2)", self.0)
    }
}

impl std::error::Error for UnknownAlgorithm {}

impl FromStr for Algorithm {
    type Err = UnknownAlgorithm;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ids" => Ok(Algorithm::Ids),
            "gbfs1" => Ok(Algorithm::GbfsSuccessRate),
            "gbfs2" => Ok(Algorithm::GbfsInputCount),
            other => Err(UnknownAlgorithm(other.to_string())),
        }
    }
}

/// One greedy choice point: the object that was needed, the candidates still
/// in play (ascending unit index) with their heuristic scores, and the pick.
#[derive(Debug, Clone, PartialEq)]
pub struct Decision {
    pub needed: ObjectKey,
    pub candidates: Vec<usize>,
    pub scores: Vec<f64>,
    pub chosen: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchStats {
    pub algorithm: Algorithm,
    /// Candidate units committed to (across all IDS iterations).
    pub units_expanded: usize,
    /// Candidate units looked at, including ones pruned by the active path.
    pub candidate_evaluations: usize,
    /// Bound at which IDS succeeded; `None` for GBFS.
    pub final_depth_bound: Option<usize>,
    pub decision_log: Vec<Decision>,
}

impl SearchStats {
    pub fn new(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            units_expanded: 0,
            candidate_evaluations: 0,
            final_depth_bound: None,
            decision_log: Vec::new(),
        }
    }
}

/// Execution-ordered functional units (indices into a [`crate::FoonGraph`])
/// that produce a goal from a kitchen.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskTree {
    pub steps: Vec<usize>,
    pub stats: SearchStats,
}

impl TaskTree {
    /// Number of functional units in the tree.
    pub fn unit_count(&self) -> usize {
        self.steps.len()
    }
}
