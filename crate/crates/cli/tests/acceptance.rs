//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any failed.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use foon::synth::{chain_graph, random_instance, RandomParams};
use foon::{
    check_executable, enumerate_resolutions, merge_subgraphs, minimal_depth, minimal_units, parse_goal_nodes,
    parse_kitchen, parse_motion_rates, parse_subgraph, retrieve, write_subgraph, Algorithm, FoonGraph, FunctionalUnit,
    GoalSpec, Kitchen, MotionNode, MotionRateTable, ObjectKey, ObjectNode, RetrievalConfig,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const RANDOM_GRAPHS: usize = 200;
const RANDOM_SEED: u64 = 20_240_501;

type Outcome = Result<String, String>;

fn corpus(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(file)
}

fn read(file: &str) -> String {
    fs::read_to_string(corpus(file)).unwrap_or_else(|e| panic!("{file}: {e}"))
}

fn units(file: &str) -> Vec<FunctionalUnit> {
    parse_subgraph(&read(file)).unwrap_or_else(|e| panic!("{file}: {e}"))
}

fn rates(file: &str) -> MotionRateTable {
    parse_motion_rates(&read(file)).unwrap().value
}

struct Case {
    name: String,
    graph: FoonGraph,
    kitchen: Kitchen,
    goal: GoalSpec,
    config: RetrievalConfig,
}

const RECIPES: [&str; 4] = [
    "whipped_cream.foon.txt",
    "greek_salad.foon.txt",
    "sweet_potato.foon.txt",
    "ice.foon.txt",
];

const FIXTURES: [&str; 3] = ["ids_wins.foon.txt", "gbfs2_wins.foon.txt", "gbfs1_wins.foon.txt"];

fn cycle_goal() -> GoalSpec {
    GoalSpec::new(ObjectKey::new("a", ["x"], None::<&str>))
}

/// Every bundled graph with its goals, then the seeded random graphs.
fn cases() -> Vec<Case> {
    let mut out = Vec::new();
    let desk_kitchen = parse_kitchen(&read("kitchen.json")).unwrap().value;
    let desk_goals = parse_goal_nodes(&read("goal_nodes.json")).unwrap();
    let desk_config = RetrievalConfig {
        rates: rates("motion.txt"),
        ..RetrievalConfig::default()
    };
    let mut desk_graphs: Vec<(String, FoonGraph)> = RECIPES
        .iter()
        .map(|f| (f.to_string(), merge_subgraphs([units(f)]).graph))
        .collect();
    desk_graphs.push(("universal".into(), merge_subgraphs(RECIPES.map(units)).graph));
    for (name, graph) in desk_graphs {
        for goal in &desk_goals {
            out.push(Case {
                name: format!("{name} / {}", goal.target),
                graph: graph.clone(),
                kitchen: desk_kitchen.clone(),
                goal: goal.clone(),
                config: desk_config.clone(),
            });
        }
    }

    let fx_kitchen = parse_kitchen(&read("fixtures/kitchen.json")).unwrap().value;
    let fx_goal = parse_goal_nodes(&read("fixtures/goal_nodes.json")).unwrap().remove(0);
    let fx_config = RetrievalConfig {
        rates: rates("fixtures/motion.txt"),
        ..RetrievalConfig::default()
    };
    for file in FIXTURES.iter().chain(&["cycle.foon.txt"]) {
        let goal = if *file == "cycle.foon.txt" {
            cycle_goal()
        } else {
            fx_goal.clone()
        };
        out.push(Case {
            name: file.to_string(),
            graph: merge_subgraphs([units(&format!("fixtures/{file}"))]).graph,
            kitchen: fx_kitchen.clone(),
            goal,
            config: fx_config.clone(),
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED);
    let params = RandomParams::default();
    for i in 0..RANDOM_GRAPHS {
        let inst = random_instance(&mut rng, &params);
        out.push(Case {
            name: format!("random #{i}"),
            graph: inst.graph,
            kitchen: inst.kitchen,
            goal: inst.goal,
            config: RetrievalConfig {
                depth_cap: foon::DEFAULT_DEPTH_CAP,
                rates: inst.rates,
            },
        });
    }
    out
}

fn oracle_equivalence(cases: &[Case]) -> Outcome {
    let started = Instant::now();
    let mut trees = 0;
    let mut unresolved = 0;
    for case in cases {
        assert!(
            case.graph.len() <= 15,
            "{} is larger than the oracle is meant for",
            case.name
        );
        let depth = minimal_depth(&case.graph, &case.kitchen, &case.goal).ok();
        for algorithm in Algorithm::ALL {
            match retrieve(algorithm, &case.graph, &case.kitchen, &case.goal, &case.config) {
                Ok(tree) => {
                    check_executable(&case.graph, &case.kitchen, &case.goal, &tree.steps)
                        .map_err(|e| format!("{} {algorithm}: {e}", case.name))?;
                    if algorithm == Algorithm::Ids && tree.stats.final_depth_bound != depth {
                        return Err(format!(
                            "{}: IDS bound {:?}, oracle minimal depth {depth:?}",
                            case.name, tree.stats.final_depth_bound
                        ));
                    }
                    trees += 1;
                }
                Err(e) => {
                    if depth.is_some() {
                        return Err(format!("{} {algorithm}: {e}, but the oracle resolves it", case.name));
                    }
                    unresolved += 1;
                }
            }
        }
    }
    let elapsed = started.elapsed();
    if elapsed >= Duration::from_secs(60) {
        return Err(format!("took {elapsed:.1?}"));
    }
    Ok(format!(
        "{} instances, {trees} trees validated, {unresolved} runs unresolvable as the oracle says, {elapsed:.2?}",
        cases.len()
    ))
}

fn heuristic_value(algorithm: Algorithm, unit: &FunctionalUnit, rates: &MotionRateTable) -> f64 {
    match algorithm {
        Algorithm::GbfsSuccessRate => rates.get(unit.motion().name()).unwrap_or(0.0),
        _ => unit.inputs().iter().map(|o| 1 + o.ingredients().len()).sum::<usize>() as f64,
    }
}

fn choice_point_audit(cases: &[Case]) -> Outcome {
    let mut audited = 0;
    for case in cases {
        for algorithm in [Algorithm::GbfsSuccessRate, Algorithm::GbfsInputCount] {
            let stats = match retrieve(algorithm, &case.graph, &case.kitchen, &case.goal, &case.config) {
                Ok(tree) => tree.stats,
                Err(e) => *e.stats,
            };
            for (n, d) in stats.decision_log.iter().enumerate() {
                let at = || format!("{} {algorithm} decision {n}", case.name);
                if d.candidates.is_empty() || !d.candidates.windows(2).all(|w| w[0] < w[1]) {
                    return Err(format!("{}: candidates not ascending", at()));
                }
                if d.scores.len() != d.candidates.len() {
                    return Err(format!("{}: score count mismatch", at()));
                }
                let mut best: Option<(usize, f64)> = None;
                for (&c, &logged) in d.candidates.iter().zip(&d.scores) {
                    let unit = case.graph.unit(c);
                    if !unit.produces(&d.needed) || unit.input_keys().any(|k| k == d.needed) {
                        return Err(format!("{}: unit {c} is not a viable candidate", at()));
                    }
                    let score = heuristic_value(algorithm, unit, &case.config.rates);
                    if score != logged {
                        return Err(format!("{}: unit {c} logged {logged}, expected {score}", at()));
                    }
                    let better = match best {
                        None => true,
                        Some((_, b)) => match algorithm {
                            Algorithm::GbfsSuccessRate => score.partial_cmp(&b) == Some(Ordering::Greater),
                            _ => score.partial_cmp(&b) == Some(Ordering::Less),
                        },
                    };
                    if better {
                        best = Some((c, score));
                    }
                }
                let expected = best.map(|b| b.0);
                if expected != Some(d.chosen) {
                    return Err(format!("{}: chose {}, expected {expected:?}", at(), d.chosen));
                }
                audited += 1;
            }
        }
    }
    if audited == 0 {
        return Err("no decisions were logged".into());
    }
    Ok(format!("{audited} decisions checked, all exact"))
}

fn directional_fixtures(cases: &[Case]) -> Outcome {
    // (file, ids, gbfs1, gbfs2, minimal units, which algorithm must win)
    let expected = [
        ("ids_wins.foon.txt", [1, 4, 4], 1, Algorithm::Ids),
        ("gbfs2_wins.foon.txt", [4, 5, 2], 2, Algorithm::GbfsInputCount),
        ("gbfs1_wins.foon.txt", [4, 3, 5], 3, Algorithm::GbfsSuccessRate),
    ];
    let mut summary = Vec::new();
    for (file, counts, minimal, winner) in expected {
        let case = cases.iter().find(|c| c.name == file).expect("fixture case");
        let resolutions: BTreeSet<BTreeSet<usize>> =
            enumerate_resolutions(&case.graph, &case.kitchen, &case.goal, case.graph.len())
                .map_err(|e| format!("{file}: {e}"))?
                .into_iter()
                .map(|r| r.units)
                .collect();
        let mut got = [0; 3];
        for (slot, algorithm) in Algorithm::ALL.into_iter().enumerate() {
            let tree = retrieve(algorithm, &case.graph, &case.kitchen, &case.goal, &case.config)
                .map_err(|e| format!("{file} {algorithm}: {e}"))?;
            let set: BTreeSet<usize> = tree.steps.iter().copied().collect();
            if !resolutions.contains(&set) {
                return Err(format!("{file} {algorithm}: {set:?} is not an oracle resolution"));
            }
            got[slot] = tree.unit_count();
        }
        if got != counts {
            return Err(format!("{file}: counts {got:?}, documented {counts:?}"));
        }
        let min = minimal_units(&case.graph, &case.kitchen, &case.goal).map_err(|e| e.to_string())?;
        if min != minimal {
            return Err(format!("{file}: oracle minimum {min}, documented {minimal}"));
        }
        let w = Algorithm::ALL.iter().position(|&a| a == winner).unwrap();
        if (0..3).any(|i| i != w && got[i] <= got[w]) {
            return Err(format!("{file}: {winner} is not strictly fewest in {got:?}"));
        }
        summary.push(format!("{file} {got:?}"));
    }
    Ok(summary.join(", "))
}

fn random_label(rng: &mut ChaCha8Rng) -> String {
    const WORDS: [&str; 12] = [
        "egg",
        "pan",
        "olive oil",
        "salt",
        "bowl",
        "knife",
        "tomato",
        "dough",
        "hot",
        "sliced",
        "wet",
        "2 cups",
    ];
    WORDS.choose(rng).unwrap().to_string()
}

fn random_object(rng: &mut ChaCha8Rng) -> ObjectNode {
    let states: Vec<String> = (0..rng.gen_range(0..3)).map(|_| random_label(rng)).collect();
    let ingredients: Vec<String> = (0..rng.gen_range(0..3)).map(|_| random_label(rng)).collect();
    ObjectNode::new(random_label(rng), states, ingredients)
}

fn random_unit(rng: &mut ChaCha8Rng) -> FunctionalUnit {
    let inputs = (0..rng.gen_range(1..4)).map(|_| random_object(rng)).collect();
    let outputs = (0..rng.gen_range(1..3)).map(|_| random_object(rng)).collect();
    let start = rng.gen_bool(0.5).then(|| format!("0:{:02}", rng.gen_range(0..60)));
    let end = (start.is_some() && rng.gen_bool(0.5)).then(|| format!("1:{:02}", rng.gen_range(0..60)));
    FunctionalUnit::new(
        inputs,
        MotionNode::new(random_label(rng)).with_times(start, end),
        outputs,
    )
}

fn parser_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED);
    for case in 0..100 {
        let list: Vec<FunctionalUnit> = (0..rng.gen_range(0..10)).map(|_| random_unit(&mut rng)).collect();
        let text = write_subgraph(&list);
        let back = parse_subgraph(&text).map_err(|e| format!("list {case}: {e}"))?;
        let same = back.len() == list.len()
            && back
                .iter()
                .zip(&list)
                .all(|(a, b)| a.inputs() == b.inputs() && a.outputs() == b.outputs() && a.motion() == b.motion());
        if !same {
            return Err(format!("list {case}: parsed units differ"));
        }
        if write_subgraph(&back) != text {
            return Err(format!("list {case}: re-written text differs"));
        }
    }
    Ok("100 lists, byte-identical".into())
}

fn merge_idempotence() -> Outcome {
    let desk = merge_subgraphs(RECIPES.map(units)).graph;
    let again = merge_subgraphs([desk.units().to_vec(), desk.units().to_vec()]);
    if again.kept != again.dropped {
        return Err(format!("kept {} but dropped {}", again.kept, again.dropped));
    }
    if again.graph.units() != desk.units() {
        return Err("unit set changed".into());
    }
    Ok(format!("kept {} = dropped {}", again.kept, again.dropped))
}

fn cycle_termination(cases: &[Case]) -> Outcome {
    let case = cases.iter().find(|c| c.name == "cycle.foon.txt").expect("cycle case");
    if case.graph.len() != 3 {
        return Err("cycle fixture must have 3 units".into());
    }
    let mut report = Vec::new();
    for algorithm in Algorithm::ALL {
        let started = Instant::now();
        let result = retrieve(algorithm, &case.graph, &case.kitchen, &case.goal, &case.config);
        let elapsed = started.elapsed();
        if elapsed >= Duration::from_secs(1) {
            return Err(format!("{algorithm} took {elapsed:.2?}"));
        }
        match result {
            Ok(tree) => {
                check_executable(&case.graph, &case.kitchen, &case.goal, &tree.steps)
                    .map_err(|e| format!("{algorithm}: {e}"))?;
                report.push(format!("{} {:?}", algorithm.short_name(), tree.steps));
            }
            Err(e) => report.push(format!("{} unresolvable ({})", algorithm.short_name(), e.reason)),
        }
    }
    Ok(report.join(", "))
}

fn compare_determinism() -> Outcome {
    let run = || {
        let out = Command::new(env!("CARGO_BIN_EXE_foon"))
            .arg("compare")
            .arg(corpus("golden/universal.foon.txt"))
            .arg(corpus("kitchen.json"))
            .arg(corpus("goal_nodes.json"))
            .arg("--motion-rates")
            .arg(corpus("motion.txt"))
            .args(["--format", "csv", "--with-oracle"])
            .env_remove("FOON_DEPTH_CAP")
            .env_remove("FOON_MOTION_RATES")
            .output()
            .map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(format!("exit {:?}", out.status.code()));
        }
        Ok(out.stdout)
    };
    let first = run()?;
    let second = run()?;
    if first != second {
        return Err("CSV differs between runs".into());
    }
    Ok(format!("{} bytes, identical", first.len()))
}

fn growth() -> Outcome {
    let mut ids = Vec::new();
    let mut line = Vec::new();
    for d in 2..=8 {
        let inst = chain_graph(d, 2);
        let config = RetrievalConfig::default();
        let expanded = |a| {
            retrieve(a, &inst.graph, &inst.kitchen, &inst.goal, &config)
                .map(|t| t.stats.units_expanded)
                .map_err(|e| e.to_string())
        };
        let i = expanded(Algorithm::Ids)?;
        let g1 = expanded(Algorithm::GbfsSuccessRate)?;
        let g2 = expanded(Algorithm::GbfsInputCount)?;
        if d >= 4 && (i <= g1 || i <= g2) {
            return Err(format!("d={d}: IDS {i} vs GBFS {g1}/{g2}"));
        }
        ids.push(i);
        line.push(format!("d{d}:{i}/{g1}"));
    }
    if !ids.windows(2).all(|w| w[0] < w[1]) {
        return Err(format!("IDS expansions not strictly increasing: {ids:?}"));
    }
    Ok(format!("IDS/GBFS expansions {}", line.join(" ")))
}

fn main() -> ExitCode {
    let cases = cases();
    let results: [(&str, Outcome); 8] = [
        ("oracle equivalence", oracle_equivalence(&cases)),
        ("choice-point audit", choice_point_audit(&cases)),
        ("directional fixtures", directional_fixtures(&cases)),
        ("parser round-trip", parser_round_trip()),
        ("merge idempotence", merge_idempotence()),
        ("cycle termination", cycle_termination(&cases)),
        ("compare determinism", compare_determinism()),
        ("growth observability", growth()),
    ];
    let mut failed = 0;
    for (n, (name, outcome)) in results.iter().enumerate() {
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail}", n + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", n + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
