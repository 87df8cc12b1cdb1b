//! Backward AND-OR resolution shared by every retrieval algorithm.
//!
//! Producing an object is a choice among its candidate units; executing a
//! unit requires all of its inputs. The search keeps one producer per object
//! (a shared intermediate is made once), skips any candidate whose inputs
//! include an object on the active resolution path, and backtracks fully:
//! when a later input cannot be resolved, earlier choices are revisited.
//!
//! Pending obligations live on a persistent agenda so that backtracking only
//! has to undo the producer and height tables.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::rc::Rc;

use crate::graph::{FoonGraph, KeyId};
use crate::model::Kitchen;
use crate::parser::MotionRateTable;
use crate::tree::{Decision, SearchStats};

use super::heuristic::HeuristicId;

pub(crate) enum CandidateOrder {
    /// Ascending unit index.
    Index,
    /// Best heuristic score first; every choice point is logged.
    Greedy { heuristic: HeuristicId, scores: Vec<f64> },
}

impl CandidateOrder {
    pub(crate) fn greedy(graph: &FoonGraph, heuristic: HeuristicId, rates: &MotionRateTable) -> Self {
        let scores = graph.units().iter().map(|u| heuristic.score(u, rates)).collect();
        CandidateOrder::Greedy { heuristic, scores }
    }
}

struct PathLink {
    key: KeyId,
    parent: Path,
}

type Path = Option<Rc<PathLink>>;

fn on_path(mut path: &Path, key: KeyId) -> bool {
    while let Some(link) = path {
        if link.key == key {
            return true;
        }
        path = &link.parent;
    }
    false
}

enum Frame {
    Need { key: KeyId, level: usize, path: Path },
    Close { key: KeyId },
}

struct AgendaLink {
    frame: Frame,
    next: Agenda,
}

type Agenda = Option<Rc<AgendaLink>>;

fn push(frame: Frame, next: Agenda) -> Agenda {
    Some(Rc::new(AgendaLink { frame, next }))
}

pub(crate) struct Engine<'a> {
    graph: &'a FoonGraph,
    in_kitchen: Vec<bool>,
    order: CandidateOrder,
    allowed: Option<&'a BTreeSet<usize>>,
    exact: bool,
    bound: usize,
    producer: Vec<Option<usize>>,
    height: Vec<Option<usize>>,
    /// Set when some branch failed only because of the depth bound.
    pub(crate) cutoff_hit: bool,
    pub(crate) stats: SearchStats,
}

impl<'a> Engine<'a> {
    pub(crate) fn new(graph: &'a FoonGraph, kitchen: &Kitchen, order: CandidateOrder, stats: SearchStats) -> Self {
        let in_kitchen = (0..graph.key_count())
            .map(|id| kitchen.contains(graph.key(id)))
            .collect();
        Self {
            graph,
            in_kitchen,
            order,
            allowed: None,
            exact: false,
            bound: usize::MAX,
            producer: vec![None; graph.key_count()],
            height: vec![None; graph.key_count()],
            cutoff_hit: false,
            stats,
        }
    }

    /// Restricts candidates to `allowed`. With `exact`, only resolutions that
    /// use every allowed unit are accepted.
    pub(crate) fn restrict_to(mut self, allowed: &'a BTreeSet<usize>, exact: bool) -> Self {
        self.allowed = Some(allowed);
        self.exact = exact;
        self
    }

    /// Runs one complete depth-first search under `bound`.
    pub(crate) fn run(&mut self, goal: KeyId, bound: usize) -> bool {
        self.bound = bound;
        self.cutoff_hit = false;
        self.producer.iter_mut().for_each(|p| *p = None);
        self.height.iter_mut().for_each(|h| *h = None);
        let agenda = push(
            Frame::Need {
                key: goal,
                level: 0,
                path: None,
            },
            None,
        );
        self.solve(&agenda)
    }

    fn solve(&mut self, agenda: &Agenda) -> bool {
        let Some(link) = agenda else {
            return self.accept();
        };
        match &link.frame {
            Frame::Close { key } => {
                let unit = self.producer[*key].expect("closed object has a producer");
                let deepest = self
                    .graph
                    .input_ids(unit)
                    .iter()
                    .map(|&i| {
                        if self.in_kitchen[i] {
                            0
                        } else {
                            self.height[i].expect("inputs resolved before close")
                        }
                    })
                    .max()
                    .unwrap_or(0);
                self.height[*key] = Some(deepest + 1);
                if self.solve(&link.next) {
                    return true;
                }
                self.height[*key] = None;
                false
            }
            Frame::Need { key, level, path } => self.need(*key, *level, path, &link.next),
        }
    }

    fn need(&mut self, key: KeyId, level: usize, path: &Path, rest: &Agenda) -> bool {
        if self.in_kitchen[key] {
            return self.solve(rest);
        }
        if self.producer[key].is_some() {
            // Only fully resolved objects can be met again here: pending ones
            // are on the path and their consumers were pruned.
            let height = self.height[key].expect("reused object is resolved");
            if level.saturating_add(height) <= self.bound {
                return self.solve(rest);
            }
            self.cutoff_hit = true;
            return false;
        }
        if level >= self.bound {
            self.cutoff_hit = true;
            return false;
        }

        let graph = self.graph;
        let mut viable: Vec<(usize, f64)> = Vec::new();
        for &unit in graph.producers_of(key) {
            if self.allowed.is_some_and(|a| !a.contains(&unit)) {
                continue;
            }
            self.stats.candidate_evaluations += 1;
            let blocked = graph.input_ids(unit).iter().any(|&i| i == key || on_path(path, i));
            if !blocked {
                let score = match &self.order {
                    CandidateOrder::Index => 0.0,
                    CandidateOrder::Greedy { scores, .. } => scores[unit],
                };
                viable.push((unit, score));
            }
        }
        if let CandidateOrder::Greedy { heuristic, .. } = &self.order {
            let heuristic = *heuristic;
            viable.sort_by(|a, b| heuristic.rank(*a, *b));
        }

        let inner_path = Some(Rc::new(PathLink {
            key,
            parent: path.clone(),
        }));
        for pos in 0..viable.len() {
            let unit = viable[pos].0;
            if matches!(self.order, CandidateOrder::Greedy { .. }) {
                let mut remaining = viable[pos..].to_vec();
                remaining.sort_by_key(|c| c.0);
                self.stats.decision_log.push(Decision {
                    needed: graph.key(key).clone(),
                    candidates: remaining.iter().map(|c| c.0).collect(),
                    scores: remaining.iter().map(|c| c.1).collect(),
                    chosen: unit,
                });
            }
            self.stats.units_expanded += 1;
            self.producer[key] = Some(unit);

            let mut agenda = push(Frame::Close { key }, rest.clone());
            for &input in graph.input_ids(unit).iter().rev() {
                agenda = push(
                    Frame::Need {
                        key: input,
                        level: level + 1,
                        path: inner_path.clone(),
                    },
                    agenda,
                );
            }
            if self.solve(&agenda) {
                return true;
            }
            self.producer[key] = None;
        }
        false
    }

    fn accept(&self) -> bool {
        match self.allowed {
            Some(allowed) if self.exact => {
                let used: BTreeSet<usize> = self.producer.iter().flatten().copied().collect();
                &used == allowed
            }
            _ => true,
        }
    }

    /// Units of the current resolution in execution order: a unit runs once
    /// the producers of all its inputs have run, lowest index first among
    /// ready units. The goal's producer depends on every other chosen unit
    /// and therefore comes last.
    pub(crate) fn execution_order(&self) -> Vec<usize> {
        let chosen: BTreeSet<usize> = self.producer.iter().flatten().copied().collect();
        let mut waiting_on: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        let mut consumers: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &unit in &chosen {
            let deps: BTreeSet<usize> = self
                .graph
                .input_ids(unit)
                .iter()
                .filter(|&&i| !self.in_kitchen[i])
                .map(|&i| self.producer[i].expect("every input of a chosen unit is resolved"))
                .collect();
            for &d in &deps {
                consumers.entry(d).or_default().push(unit);
            }
            waiting_on.insert(unit, deps);
        }

        let mut ready: BinaryHeap<Reverse<usize>> = waiting_on
            .iter()
            .filter(|(_, deps)| deps.is_empty())
            .map(|(&u, _)| Reverse(u))
            .collect();
        let mut order = Vec::with_capacity(chosen.len());
        while let Some(Reverse(unit)) = ready.pop() {
            order.push(unit);
            for &c in consumers.get(&unit).map_or(&[][..], Vec::as_slice) {
                let deps = waiting_on.get_mut(&c).expect("consumer is chosen");
                if deps.remove(&unit) && deps.is_empty() {
                    ready.push(Reverse(c));
                }
            }
        }
        debug_assert_eq!(order.len(), chosen.len(), "resolution graph is acyclic");
        order
    }
}
