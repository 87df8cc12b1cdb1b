//! Synthetic graphs for tests and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::FoonGraph;
use crate::model::{FunctionalUnit, GoalSpec, Kitchen, MotionNode, ObjectKey, ObjectNode};
use crate::parser::MotionRateTable;

/// A graph together with everything a retrieval needs.
#[derive(Debug, Clone)]
pub struct Instance {
    pub graph: FoonGraph,
    pub kitchen: Kitchen,
    pub goal: GoalSpec,
    pub rates: MotionRateTable,
}

fn stage(level: usize) -> ObjectNode {
    ObjectNode::with_states("item", [format!("stage {level}")])
}

/// A chain `stage 0 -> stage 1 -> ... -> stage depth` where every step can be
/// done by `branching` interchangeable units. Only `stage 0` is in the
/// kitchen and the goal is `stage depth`, so every tree has `depth` units.
pub fn chain_graph(depth: usize, branching: usize) -> Instance {
    assert!(branching >= 1);
    let mut units = Vec::with_capacity(depth * branching);
    for level in 1..=depth {
        for alt in 0..branching {
            units.push(FunctionalUnit::new(
                vec![stage(level - 1)],
                MotionNode::new(format!("step{level}-{alt}")),
                vec![stage(level)],
            ));
        }
    }
    Instance {
        graph: FoonGraph::new(units).expect("chain units are distinct"),
        kitchen: [stage(0).key()].into_iter().collect(),
        goal: GoalSpec::new(stage(depth).key()),
        rates: MotionRateTable::new(),
    }
}

/// Shape of a random instance.
#[derive(Debug, Clone)]
pub struct RandomParams {
    pub max_units: usize,
    pub objects: usize,
    /// Most units allowed to produce the same object.
    pub max_branching: usize,
    pub max_inputs: usize,
    pub max_outputs: usize,
    pub motions: usize,
}

impl Default for RandomParams {
    fn default() -> Self {
        Self {
            max_units: 12,
            objects: 9,
            max_branching: 3,
            max_inputs: 3,
            max_outputs: 2,
            motions: 5,
        }
    }
}

fn pool_object(i: usize) -> ObjectNode {
    // Every third object carries ingredients so the input-count heuristic
    // sees more than the object count.
    let ingredients: Vec<String> = (0..(i % 3 == 2) as usize * (1 + i % 2))
        .map(|j| format!("ing{j}"))
        .collect();
    ObjectNode::new(format!("obj{i}"), [format!("s{}", i % 2)], ingredients)
}

/// Random graph with at most `max_units` units and bounded branching,
/// possibly containing production cycles. The goal is an object some unit
/// produces; it may still be unresolvable.
pub fn random_instance<R: Rng + ?Sized>(rng: &mut R, params: &RandomParams) -> Instance {
    let pool: Vec<ObjectNode> = (0..params.objects).map(pool_object).collect();
    let keys: Vec<ObjectKey> = pool.iter().map(ObjectNode::key).collect();

    let kitchen_size = rng.gen_range(1..=params.objects / 2);
    let mut order: Vec<usize> = (0..params.objects).collect();
    order.shuffle(rng);
    let kitchen: Kitchen = order[..kitchen_size].iter().map(|&i| keys[i].clone()).collect();
    let producible: Vec<usize> = order[kitchen_size..].to_vec();

    let mut produced_by = vec![0usize; params.objects];
    let mut units: Vec<FunctionalUnit> = Vec::new();
    let target_units = rng.gen_range(1..=params.max_units);
    let mut attempts = 0;
    while units.len() < target_units && attempts < 50 * params.max_units {
        attempts += 1;
        let n_in = rng.gen_range(1..=params.max_inputs);
        let n_out = rng.gen_range(1..=params.max_outputs);
        let inputs: Vec<usize> = (0..params.objects)
            .collect::<Vec<_>>()
            .choose_multiple(rng, n_in)
            .copied()
            .collect();
        let outputs: Vec<usize> = producible
            .choose_multiple(rng, n_out.min(producible.len()))
            .copied()
            .collect();
        if outputs.is_empty() || outputs.iter().any(|&o| produced_by[o] >= params.max_branching) {
            continue;
        }
        let unit = FunctionalUnit::new(
            inputs.iter().map(|&i| pool[i].clone()).collect(),
            MotionNode::new(format!("motion{}", rng.gen_range(0..params.motions))),
            outputs.iter().map(|&o| pool[o].clone()).collect(),
        );
        if units.contains(&unit) {
            continue;
        }
        for &o in &outputs {
            produced_by[o] += 1;
        }
        units.push(unit);
    }

    let candidates: Vec<usize> = producible.iter().copied().filter(|&o| produced_by[o] > 0).collect();
    let goal_index = *candidates.choose(rng).unwrap_or(&producible[0]);

    let mut rates = MotionRateTable::new();
    for m in 0..params.motions {
        // Leave some motions out to exercise the missing-rate default.
        if rng.gen_bool(0.8) {
            rates.insert(&format!("motion{m}"), f64::from(rng.gen_range(0..=10u8)) / 10.0);
        }
    }

    Instance {
        graph: FoonGraph::new(units).expect("random units are distinct"),
        kitchen,
        goal: GoalSpec::new(keys[goal_index].clone()),
        rates,
    }
}
