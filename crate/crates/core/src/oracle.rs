//! Exhaustive ground truth for small graphs.
//!
//! Enumerates every acyclic AND-OR derivation of a goal: one producing unit
//! per needed object, no object needed again below itself. Each distinct set
//! of units is reported once with the smallest depth (in unit hops from the
//! goal) among the derivations that use exactly that set.
//!
//! Nothing here shares code with [`crate::retrieval`]; producers are found by
//! scanning units directly.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::rc::Rc;

use thiserror::Error;

use crate::graph::FoonGraph;
use crate::model::{GoalSpec, Kitchen, ObjectKey};

/// Upper limit on candidate unit subsets the oracle is willing to consider.
pub const COMBINATION_LIMIT: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{units} units with up to {max_units} per tree allow {combinations} subsets (limit {COMBINATION_LIMIT})")]
    TooLarge {
        units: usize,
        max_units: usize,
        combinations: u128,
    },
    #[error("no task tree produces {0}")]
    UnresolvableGoal(ObjectKey),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Resolution {
    pub units: BTreeSet<usize>,
    pub depth: usize,
}

fn subset_count(n: usize, k: usize) -> u128 {
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    for i in 0..=k.min(n) {
        total += binom;
        binom = binom * (n - i) as u128 / (i + 1) as u128;
    }
    total
}

type Assignment = BTreeMap<ObjectKey, usize>;
type Derivations = Rc<BTreeMap<Assignment, usize>>;

struct Enumerator<'a> {
    graph: &'a FoonGraph,
    kitchen: &'a Kitchen,
    max_units: usize,
    producers: BTreeMap<ObjectKey, Vec<usize>>,
    memo: HashMap<(ObjectKey, Vec<ObjectKey>), Derivations>,
}

impl<'a> Enumerator<'a> {
    fn new(graph: &'a FoonGraph, kitchen: &'a Kitchen, max_units: usize) -> Self {
        let mut producers: BTreeMap<ObjectKey, Vec<usize>> = BTreeMap::new();
        for (index, unit) in graph.units().iter().enumerate() {
            let outputs: BTreeSet<ObjectKey> = unit.output_keys().collect();
            for key in outputs {
                producers.entry(key).or_default().push(index);
            }
        }
        Self {
            graph,
            kitchen,
            max_units,
            producers,
            memo: HashMap::new(),
        }
    }

    fn unit_count(assign: &Assignment) -> usize {
        assign.values().collect::<BTreeSet<_>>().len()
    }

    /// All derivations of `key` that avoid every object in `path`, mapped to depth.
    fn derive(&mut self, key: &ObjectKey, path: &BTreeSet<ObjectKey>) -> Derivations {
        if self.kitchen.contains(key) {
            return Rc::new(BTreeMap::from([(Assignment::new(), 0)]));
        }
        let memo_key = (key.clone(), path.iter().cloned().collect::<Vec<_>>());
        if let Some(hit) = self.memo.get(&memo_key) {
            return Rc::clone(hit);
        }

        let mut inner_path = path.clone();
        inner_path.insert(key.clone());
        let mut found: BTreeMap<Assignment, usize> = BTreeMap::new();
        let candidates = self.producers.get(key).cloned().unwrap_or_default();
        for unit in candidates {
            let inputs: BTreeSet<ObjectKey> = self.graph.unit(unit).input_keys().collect();
            if inputs.iter().any(|i| inner_path.contains(i)) {
                continue;
            }
            let mut partial: BTreeMap<Assignment, usize> =
                BTreeMap::from([(Assignment::from([(key.clone(), unit)]), 1)]);
            for input in inputs.iter().filter(|i| !self.kitchen.contains(i)) {
                let subs = self.derive(input, &inner_path);
                let mut next = BTreeMap::new();
                for (assign, depth) in &partial {
                    for (sub, sub_depth) in subs.iter() {
                        let consistent = sub.iter().all(|(k, u)| assign.get(k).is_none_or(|v| v == u));
                        if !consistent {
                            continue;
                        }
                        let mut merged = assign.clone();
                        merged.extend(sub.iter().map(|(k, u)| (k.clone(), *u)));
                        if Self::unit_count(&merged) > self.max_units {
                            continue;
                        }
                        let d = (*depth).max(1 + sub_depth);
                        next.insert(merged, d);
                    }
                }
                partial = next;
                if partial.is_empty() {
                    break;
                }
            }
            found.extend(partial);
        }
        let found = Rc::new(found);
        self.memo.insert(memo_key, Rc::clone(&found));
        found
    }
}

/// Every set of at most `max_units` units that resolves the goal, with its
/// minimum resolution depth. Sorted by size, then by unit indices.
pub fn enumerate_resolutions(
    graph: &FoonGraph,
    kitchen: &Kitchen,
    goal: &GoalSpec,
    max_units: usize,
) -> Result<Vec<Resolution>, OracleError> {
    let combinations = subset_count(graph.len(), max_units);
    if combinations > COMBINATION_LIMIT {
        return Err(OracleError::TooLarge {
            units: graph.len(),
            max_units,
            combinations,
        });
    }
    let mut enumerator = Enumerator::new(graph, kitchen, max_units);
    let derivations = enumerator.derive(&goal.target, &BTreeSet::new());

    let mut best: BTreeMap<BTreeSet<usize>, usize> = BTreeMap::new();
    for (assign, depth) in derivations.iter() {
        let units: BTreeSet<usize> = assign.values().copied().collect();
        let slot = best.entry(units).or_insert(*depth);
        *slot = (*slot).min(*depth);
    }
    let mut out: Vec<Resolution> = best
        .into_iter()
        .map(|(units, depth)| Resolution { units, depth })
        .collect();
    out.sort_by(|a, b| a.units.len().cmp(&b.units.len()).then_with(|| a.units.cmp(&b.units)));
    Ok(out)
}

fn all_resolutions(graph: &FoonGraph, kitchen: &Kitchen, goal: &GoalSpec) -> Result<Vec<Resolution>, OracleError> {
    let found = enumerate_resolutions(graph, kitchen, goal, graph.len())?;
    if found.is_empty() {
        return Err(OracleError::UnresolvableGoal(goal.target.clone()));
    }
    Ok(found)
}

/// Fewest units any task tree for the goal can use.
pub fn minimal_units(graph: &FoonGraph, kitchen: &Kitchen, goal: &GoalSpec) -> Result<usize, OracleError> {
    Ok(all_resolutions(graph, kitchen, goal)?
        .iter()
        .map(|r| r.units.len())
        .min()
        .expect("non-empty"))
}

/// Smallest resolution depth over all task trees for the goal.
pub fn minimal_depth(graph: &FoonGraph, kitchen: &Kitchen, goal: &GoalSpec) -> Result<usize, OracleError> {
    Ok(all_resolutions(graph, kitchen, goal)?
        .iter()
        .map(|r| r.depth)
        .min()
        .expect("non-empty"))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("step {position} names unit {unit}, which is not in the graph")]
    UnknownUnit { position: usize, unit: usize },
    #[error("unit {unit} appears more than once")]
    RepeatedUnit { unit: usize },
    #[error("step {position} (unit {unit}) needs {missing}, which is not available yet")]
    NotExecutable {
        position: usize,
        unit: usize,
        missing: ObjectKey,
    },
    #[error("the final step does not produce {0}")]
    GoalNotProduced(ObjectKey),
}

/// Replays `steps` against the kitchen: each unit may only use objects that
/// are in the kitchen or were output by an earlier step, and the last step
/// must output the goal (no steps at all when the goal is already present).
pub fn check_executable(
    graph: &FoonGraph,
    kitchen: &Kitchen,
    goal: &GoalSpec,
    steps: &[usize],
) -> Result<(), ValidationError> {
    let mut available: BTreeSet<ObjectKey> = kitchen.iter().cloned().collect();
    let mut seen = BTreeSet::new();
    for (position, &unit) in steps.iter().enumerate() {
        if unit >= graph.len() {
            return Err(ValidationError::UnknownUnit { position, unit });
        }
        if !seen.insert(unit) {
            return Err(ValidationError::RepeatedUnit { unit });
        }
        let u = graph.unit(unit);
        if let Some(missing) = u.input_keys().find(|k| !available.contains(k)) {
            return Err(ValidationError::NotExecutable {
                position,
                unit,
                missing,
            });
        }
        available.extend(u.output_keys());
    }
    let satisfied = match steps.last() {
        None => kitchen.contains(&goal.target),
        Some(&last) => graph.unit(last).output_keys().any(|k| k == goal.target),
    };
    if satisfied {
        Ok(())
    } else {
        Err(ValidationError::GoalNotProduced(goal.target.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{FunctionalUnit, MotionNode, ObjectNode};

    fn obj(name: &str) -> ObjectNode {
        ObjectNode::with_states(name, ["s"])
    }

    fn key(name: &str) -> ObjectKey {
        obj(name).key()
    }

    fn unit(inputs: &[&str], motion: &str, outputs: &[&str]) -> FunctionalUnit {
        FunctionalUnit::new(
            inputs.iter().map(|n| obj(n)).collect(),
            MotionNode::new(motion),
            outputs.iter().map(|n| obj(n)).collect(),
        )
    }

    fn kitchen(names: &[&str]) -> Kitchen {
        names.iter().map(|n| key(n)).collect()
    }

    fn goal(name: &str) -> GoalSpec {
        GoalSpec::new(key(name))
    }

    #[test]
    fn goal_in_kitchen() {
        let g = FoonGraph::new(vec![unit(&["milk"], "m", &["cream"])]).unwrap();
        let k = kitchen(&["cream"]);
        let r = enumerate_resolutions(&g, &k, &goal("cream"), 1).unwrap();
        assert_eq!(
            r,
            vec![Resolution {
                units: BTreeSet::new(),
                depth: 0
            }]
        );
        assert_eq!(minimal_units(&g, &k, &goal("cream")), Ok(0));
        assert_eq!(minimal_depth(&g, &k, &goal("cream")), Ok(0));
    }

    #[test]
    fn two_unit_chain() {
        // unit 0: cream -> whipped, unit 1: milk -> cream. Of the four subsets
        // only {0, 1} is closed under inputs and produces the goal.
        let g = FoonGraph::new(vec![
            unit(&["cream"], "whip", &["whipped"]),
            unit(&["milk"], "skim", &["cream"]),
        ])
        .unwrap();
        let k = kitchen(&["milk"]);
        let r = enumerate_resolutions(&g, &k, &goal("whipped"), 2).unwrap();
        assert_eq!(
            r,
            vec![Resolution {
                units: BTreeSet::from([0, 1]),
                depth: 2
            }]
        );
        assert_eq!(minimal_units(&g, &k, &goal("whipped")), Ok(2));
        assert_eq!(minimal_depth(&g, &k, &goal("whipped")), Ok(2));
        assert!(enumerate_resolutions(&g, &k, &goal("whipped"), 1).unwrap().is_empty());
    }

    #[test]
    fn either_of_two_producers() {
        let g = FoonGraph::new(vec![unit(&["a", "b"], "fast", &["g"]), unit(&["c"], "slow", &["g"])]).unwrap();
        let k = kitchen(&["a", "b", "c"]);
        let r = enumerate_resolutions(&g, &k, &goal("g"), 2).unwrap();
        assert_eq!(
            r,
            vec![
                Resolution {
                    units: BTreeSet::from([0]),
                    depth: 1
                },
                Resolution {
                    units: BTreeSet::from([1]),
                    depth: 1
                },
            ]
        );
    }

    #[test]
    fn unresolvable_goal() {
        let g = FoonGraph::new(vec![unit(&["x"], "m", &["g"])]).unwrap();
        let k = Kitchen::new();
        assert_eq!(
            minimal_units(&g, &k, &goal("g")),
            Err(OracleError::UnresolvableGoal(key("g")))
        );
        assert_eq!(
            minimal_depth(&g, &k, &goal("nothing")),
            Err(OracleError::UnresolvableGoal(key("nothing")))
        );
    }

    #[test]
    fn cycles_are_cut() {
        let g = FoonGraph::new(vec![
            unit(&["b"], "m", &["a"]),
            unit(&["a"], "m", &["b"]),
            unit(&["c"], "m", &["b"]),
        ])
        .unwrap();
        let k = kitchen(&["c"]);
        let r = enumerate_resolutions(&g, &k, &goal("a"), 3).unwrap();
        assert_eq!(
            r,
            vec![Resolution {
                units: BTreeSet::from([0, 2]),
                depth: 2
            }]
        );
    }

    #[test]
    fn size_guard() {
        let units: Vec<FunctionalUnit> = (0..25).map(|i| unit(&["a"], &format!("m{i}"), &["g"])).collect();
        let g = FoonGraph::new(units).unwrap();
        let err = enumerate_resolutions(&g, &Kitchen::new(), &goal("g"), 25).unwrap_err();
        assert!(matches!(err, OracleError::TooLarge { combinations, .. } if combinations == 1 << 25));
        assert!(enumerate_resolutions(&g, &kitchen(&["a"]), &goal("g"), 2).is_ok());
    }

    #[test]
    fn subset_counts() {
        assert_eq!(subset_count(4, 4), 16);
        assert_eq!(subset_count(4, 1), 5);
        assert_eq!(subset_count(3, 10), 8);
    }

    #[test]
    fn validator_catches_each_violation() {
        let g = FoonGraph::new(vec![
            unit(&["cream"], "whip", &["whipped"]),
            unit(&["milk"], "skim", &["cream"]),
        ])
        .unwrap();
        let k = kitchen(&["milk"]);
        let gl = goal("whipped");
        assert_eq!(check_executable(&g, &k, &gl, &[1, 0]), Ok(()));
        assert!(matches!(
            check_executable(&g, &k, &gl, &[0, 1]),
            Err(ValidationError::NotExecutable { position: 0, .. })
        ));
        assert!(matches!(
            check_executable(&g, &k, &gl, &[1, 1]),
            Err(ValidationError::RepeatedUnit { unit: 1 })
        ));
        assert!(matches!(
            check_executable(&g, &k, &gl, &[1]),
            Err(ValidationError::GoalNotProduced(_))
        ));
        assert!(matches!(
            check_executable(&g, &k, &gl, &[7]),
            Err(ValidationError::UnknownUnit { .. })
        ));
        assert!(matches!(
            check_executable(&g, &k, &gl, &[]),
            Err(ValidationError::GoalNotProduced(_))
        ));
        assert_eq!(check_executable(&g, &kitchen(&["whipped"]), &gl, &[]), Ok(()));
    }
}
