//! Union of recipe subgraphs into one universal FOON.

use std::collections::HashSet;

use crate::graph::FoonGraph;
use crate::model::FunctionalUnit;

#[derive(Debug, Clone)]
pub struct MergeOutcome {
    pub graph: FoonGraph,
    pub kept: usize,
    pub dropped: usize,
}

/// Concatenates subgraphs in order, keeping the first occurrence of every
/// distinct unit.
pub fn merge_subgraphs<I>(subgraphs: I) -> MergeOutcome
where
    I: IntoIterator<Item = Vec<FunctionalUnit>>,
{
    let mut kept: Vec<FunctionalUnit> = Vec::new();
    let mut dropped = 0;
    {
        let mut seen: HashSet<FunctionalUnit> = HashSet::new();
        for unit in subgraphs.into_iter().flatten() {
            if seen.contains(&unit) {
                dropped += 1;
            } else {
                seen.insert(unit.clone());
                kept.push(unit);
            }
        }
    }
    let graph = FoonGraph::new(kept).expect("merged units are deduplicated");
    MergeOutcome {
        kept: graph.len(),
        graph,
        dropped,
    }
}
