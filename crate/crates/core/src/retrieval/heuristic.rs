use std::cmp::Ordering;

use crate::model::FunctionalUnit;
use crate::parser::MotionRateTable;

/// Greedy scoring functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HeuristicId {
    /// Motion success rate; higher is better.
    SuccessRate,
    /// Input objects plus their ingredients; lower is better.
    InputCount,
}

/// Success rate of the unit's motion, 0.0 when the table has no entry.
pub fn heuristic_success_rate(unit: &FunctionalUnit, rates: &MotionRateTable) -> f64 {
    rates.get(unit.motion().name()).unwrap_or(0.0)
}

/// Number of input objects plus the number of ingredients they carry.
pub fn heuristic_input_count(unit: &FunctionalUnit) -> usize {
    unit.inputs().len() + unit.inputs().iter().map(|o| o.ingredients().len()).sum::<usize>()
}

impl HeuristicId {
    pub fn score(self, unit: &FunctionalUnit, rates: &MotionRateTable) -> f64 {
        match self {
            HeuristicId::SuccessRate => heuristic_success_rate(unit, rates),
            HeuristicId::InputCount => heuristic_input_count(unit) as f64,
        }
    }

    /// Orders `(unit, score)` pairs best first, lower unit index on ties.
    pub(crate) fn rank(self, a: (usize, f64), b: (usize, f64)) -> Ordering {
        let by_score = match self {
            HeuristicId::SuccessRate => b.1.total_cmp(&a.1),
            HeuristicId::InputCount => a.1.total_cmp(&b.1),
        };
        by_score.then(a.0.cmp(&b.0))
    }
}
