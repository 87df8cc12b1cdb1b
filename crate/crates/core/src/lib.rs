//! Functional object-oriented networks (FOONs) and task tree retrieval.
//!
//! A FOON is a set of functional units, each turning input objects into
//! output objects through one motion. Recipe subgraphs are parsed from the
//! line-oriented `.foon.txt` format ([`parser`]), merged into a universal
//! FOON ([`merge`]), and searched backwards from a goal object for a task
//! tree that can be executed from the items in a kitchen ([`retrieval`]).
//! [`oracle`] enumerates every task tree of small graphs for testing, and
//! [`export`] writes trees and Graphviz drawings.

pub mod export;
pub mod graph;
pub mod merge;
pub mod model;
pub mod oracle;
pub mod parser;
pub mod retrieval;
pub mod synth;
pub mod tree;

pub use export::{to_dot, write_task_tree};
pub use graph::{find_candidate_units, index_outputs, FoonGraph, GraphError};
pub use merge::{merge_subgraphs, MergeOutcome};
pub use model::{object_key, unit_equals, FunctionalUnit, GoalSpec, Kitchen, MotionNode, ObjectKey, ObjectNode};
pub use oracle::{check_executable, enumerate_resolutions, minimal_depth, minimal_units, OracleError, Resolution};
pub use parser::{
    parse_goal_nodes, parse_kitchen, parse_motion_rates, parse_subgraph, write_subgraph, MotionRateTable, ParseError,
    Parsed, SchemaError,
};
pub use retrieval::{
    execution_order, heuristic_input_count, heuristic_success_rate, retrieve, retrieve_gbfs, retrieve_ids, HeuristicId,
    OrderError, RetrievalConfig, UnresolvableGoal, UnresolvableReason, DEFAULT_DEPTH_CAP,
};
pub use tree::{Algorithm, Decision, SearchStats, TaskTree};
