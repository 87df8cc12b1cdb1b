//! Readers and writers for subgraph files, `motion.txt`, goal and kitchen files.
//!
//! Subgraph files are line oriented and tab separated:
//!
//! ```text
//! O	cream
//! S	raw
//! M	whip	3:05	3:20
//! O	cream
//! S	whipped
//! //
//! ```
//!
//! `O` opens an object, `S` and `I` attach a state or an ingredient to the
//! most recent object, `M` names the motion (with optional start and end
//! timestamps) and switches from inputs to outputs, and `//` closes the unit.
//! Blank lines and lines starting with `#` are skipped.

// The format example above uses real tabs.
#![allow(clippy::tabs_in_doc_comments)]

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde_json::Value;
use thiserror::Error;

use crate::model::{FunctionalUnit, GoalSpec, Kitchen, MotionNode, ObjectKey, ObjectNode};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnknownTag(String),
    MotionBeforeObject,
    SecondMotion,
    NoInputs,
    NoOutputs,
    MissingMotion,
    /// Unit opened at the given line was never closed with `//`.
    MissingTerminator {
        opened_at: usize,
    },
    /// `S`/`I`/`O`/`M` line without a usable value, or `S`/`I` with no object.
    Malformed(String),
    InvalidRate(String),
    RateOutOfRange(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::UnknownTag(tag) => write!(f, "unknown line tag `{tag}`"),
            Self::MotionBeforeObject => f.write_str("motion appears before any input object"),
            Self::SecondMotion => f.write_str("a unit has only one motion"),
            Self::NoInputs => f.write_str("unit has no input objects"),
            Self::NoOutputs => f.write_str("unit has no output objects"),
            Self::MissingMotion => f.write_str("unit closed without a motion line"),
            Self::MissingTerminator { opened_at } => {
                write!(f, "unit opened at line {opened_at} is missing its `//` terminator")
            }
            Self::Malformed(why) => write!(f, "malformed line: {why}"),
            Self::InvalidRate(raw) => write!(f, "`{raw}` is not a number"),
            Self::RateOutOfRange(raw) => write!(f, "rate {raw} is outside [0, 1]"),
        }
    }
}

/// A non-fatal observation made while reading a file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseWarning {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ParseWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

/// A parsed value plus any warnings raised on the way.
#[derive(Debug, Clone, PartialEq)]
pub struct Parsed<T> {
    pub value: T,
    pub warnings: Vec<ParseWarning>,
}

// ---------------------------------------------------------------------------
// Subgraph files
// ---------------------------------------------------------------------------

#[derive(Default)]
struct PendingObject {
    name: String,
    states: Vec<String>,
    ingredients: Vec<String>,
}

impl PendingObject {
    fn finish(self) -> ObjectNode {
        ObjectNode::new(self.name, self.states, self.ingredients)
    }
}

#[derive(Default)]
struct PendingUnit {
    opened_at: usize,
    inputs: Vec<ObjectNode>,
    motion: Option<MotionNode>,
    outputs: Vec<ObjectNode>,
    current: Option<PendingObject>,
}

impl PendingUnit {
    fn flush_object(&mut self) {
        if let Some(obj) = self.current.take() {
            let node = obj.finish();
            if self.motion.is_some() {
                self.outputs.push(node);
            } else {
                self.inputs.push(node);
            }
        }
    }
}

fn value_of<'a>(line_no: usize, tag: &str, rest: Option<&'a str>) -> Result<&'a str, ParseError> {
    match rest.map(str::trim) {
        Some(v) if !v.is_empty() => Ok(v),
        _ => Err(ParseError {
            line: line_no,
            kind: ParseErrorKind::Malformed(format!("`{tag}` needs a value")),
        }),
    }
}

/// Parses a subgraph file into its functional units, in file order.
pub fn parse_subgraph(text: &str) -> Result<Vec<FunctionalUnit>, ParseError> {
    let mut units = Vec::new();
    let mut pending: Option<PendingUnit> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |kind| ParseError { line: line_no, kind };

        if line.trim() == "//" {
            let Some(mut unit) = pending.take() else {
                return Err(err(ParseErrorKind::Malformed("`//` without an open unit".into())));
            };
            unit.flush_object();
            let Some(motion) = unit.motion else {
                return Err(err(ParseErrorKind::MissingMotion));
            };
            if unit.inputs.is_empty() {
                return Err(err(ParseErrorKind::NoInputs));
            }
            if unit.outputs.is_empty() {
                return Err(err(ParseErrorKind::NoOutputs));
            }
            units.push(FunctionalUnit::new(unit.inputs, motion, unit.outputs));
            continue;
        }

        let (tag, rest) = match line.split_once('\t') {
            Some((tag, rest)) => (tag, Some(rest)),
            None => (line, None),
        };
        let unit = pending.get_or_insert_with(|| PendingUnit {
            opened_at: line_no,
            ..Default::default()
        });

        match tag {
            "O" => {
                let name = value_of(line_no, tag, rest)?;
                unit.flush_object();
                unit.current = Some(PendingObject {
                    name: name.to_string(),
                    ..Default::default()
                });
            }
            "S" | "I" => {
                let value = value_of(line_no, tag, rest)?;
                let Some(obj) = unit.current.as_mut() else {
                    return Err(err(ParseErrorKind::Malformed(format!(
                        "`{tag}` line outside an object"
                    ))));
                };
                if tag == "S" {
                    obj.states.push(value.to_string());
                } else {
                    obj.ingredients.push(value.to_string());
                }
            }
            "M" => {
                if unit.motion.is_some() {
                    return Err(err(ParseErrorKind::SecondMotion));
                }
                unit.flush_object();
                if unit.inputs.is_empty() {
                    return Err(err(ParseErrorKind::MotionBeforeObject));
                }
                let value = value_of(line_no, tag, rest)?;
                let mut fields = value.split('\t');
                let name = fields.next().unwrap_or_default().trim();
                if name.is_empty() {
                    return Err(err(ParseErrorKind::Malformed("motion needs a name".into())));
                }
                let start = fields.next().map(str::to_string);
                let end = fields.next().map(str::to_string);
                if fields.next().is_some() {
                    return Err(err(ParseErrorKind::Malformed("too many motion fields".into())));
                }
                unit.motion = Some(MotionNode::new(name).with_times(start, end));
            }
            other => return Err(err(ParseErrorKind::UnknownTag(other.to_string()))),
        }
    }

    if let Some(unit) = pending {
        return Err(ParseError {
            line: unit.opened_at,
            kind: ParseErrorKind::MissingTerminator {
                opened_at: unit.opened_at,
            },
        });
    }
    Ok(units)
}

fn write_object(out: &mut String, node: &ObjectNode) {
    let _ = writeln!(out, "O\t{}", node.name());
    for s in node.states() {
        let _ = writeln!(out, "S\t{s}");
    }
    for i in node.ingredients() {
        let _ = writeln!(out, "I\t{i}");
    }
}

/// Appends one unit in canonical form.
pub(crate) fn write_unit(out: &mut String, unit: &FunctionalUnit) {
    for obj in unit.inputs() {
        write_object(out, obj);
    }
    let motion = unit.motion();
    out.push_str("M\t");
    out.push_str(motion.name());
    if let Some(start) = motion.start_time() {
        out.push('\t');
        out.push_str(start);
        if let Some(end) = motion.end_time() {
            out.push('\t');
            out.push_str(end);
        }
    }
    out.push('\n');
    for obj in unit.outputs() {
        write_object(out, obj);
    }
    out.push_str("//\n");
}

/// Serializes units in canonical form; `parse_subgraph` reads it back unchanged.
pub fn write_subgraph(units: &[FunctionalUnit]) -> String {
    let mut out = String::new();
    for unit in units {
        write_unit(&mut out, unit);
    }
    out
}

// ---------------------------------------------------------------------------
// motion.txt
// ---------------------------------------------------------------------------

/// Motion success rates in `[0, 1]`, keyed by lowercase motion name.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MotionRateTable {
    rates: BTreeMap<String, f64>,
}

impl MotionRateTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Panics when `rate` is outside `[0, 1]`.
    pub fn insert(&mut self, motion: &str, rate: f64) -> Option<f64> {
        assert!((0.0..=1.0).contains(&rate), "success rate must lie in [0, 1]");
        self.rates.insert(motion.trim().to_lowercase(), rate)
    }

    pub fn get(&self, motion: &str) -> Option<f64> {
        self.rates.get(motion).copied()
    }

    pub fn len(&self) -> usize {
        self.rates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rates.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.rates.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

/// Reads `motion<TAB>rate` lines. Later duplicates win and leave a warning.
pub fn parse_motion_rates(text: &str) -> Result<Parsed<MotionRateTable>, ParseError> {
    let mut table = MotionRateTable::new();
    let mut warnings = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |kind| ParseError { line: line_no, kind };
        let split = line.rsplit_once('\t').or_else(|| line.rsplit_once(char::is_whitespace));
        let Some((name, rate)) = split.map(|(n, r)| (n.trim(), r.trim())) else {
            return Err(err(ParseErrorKind::Malformed("expected `motion<TAB>rate`".into())));
        };
        if name.is_empty() {
            return Err(err(ParseErrorKind::Malformed("missing motion name".into())));
        }
        let value: f64 = rate
            .parse()
            .map_err(|_| err(ParseErrorKind::InvalidRate(rate.to_string())))?;
        if !(0.0..=1.0).contains(&value) {
            return Err(err(ParseErrorKind::RateOutOfRange(rate.to_string())));
        }
        if let Some(previous) = table.insert(name, value) {
            warnings.push(ParseWarning {
                line: Some(line_no),
                message: format!("motion `{name}` listed again; {value} replaces {previous}"),
            });
        }
    }
    Ok(Parsed { value: table, warnings })
}

// ---------------------------------------------------------------------------
// goal_nodes.json / kitchen.json
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("not valid JSON: {0}")]
    Syntax(String),
    #[error("expected a top-level array of objects")]
    NotAnArray,
    #[error("entry {index}: field `{field}` {reason}")]
    Field {
        index: usize,
        field: &'static str,
        reason: &'static str,
    },
}

impl SchemaError {
    /// Name of the offending field, if the error concerns one.
    pub fn field(&self) -> Option<&'static str> {
        match self {
            SchemaError::Field { field, .. } => Some(field),
            _ => None,
        }
    }
}

fn string_list(
    entry: &serde_json::Map<String, Value>,
    index: usize,
    field: &'static str,
) -> Result<Vec<String>, SchemaError> {
    let bad = |reason| SchemaError::Field { index, field, reason };
    match entry.get(field) {
        None | Some(Value::Null) => Ok(Vec::new()),
        Some(Value::Array(items)) => items
            .iter()
            .map(|v| match v {
                Value::String(s) if !s.trim().is_empty() => Ok(s.clone()),
                _ => Err(bad("must contain only non-empty strings")),
            })
            .collect(),
        Some(_) => Err(bad("must be an array of strings")),
    }
}

fn parse_object_entries(text: &str) -> Result<Vec<ObjectKey>, SchemaError> {
    // A blank file means no entries, same as `[]`.
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let root: Value = serde_json::from_str(text).map_err(|e| SchemaError::Syntax(e.to_string()))?;
    let Value::Array(entries) = root else {
        return Err(SchemaError::NotAnArray);
    };
    entries
        .iter()
        .enumerate()
        .map(|(index, entry)| {
            let Value::Object(entry) = entry else {
                return Err(SchemaError::Field {
                    index,
                    field: "object",
                    reason: "is missing (entry is not an object)",
                });
            };
            let name = match entry.get("object") {
                Some(Value::String(s)) if !s.trim().is_empty() => s,
                Some(_) => {
                    return Err(SchemaError::Field {
                        index,
                        field: "object",
                        reason: "must be a non-empty string",
                    })
                }
                None => {
                    return Err(SchemaError::Field {
                        index,
                        field: "object",
                        reason: "is missing",
                    })
                }
            };
            let states = string_list(entry, index, "states")?;
            let ingredients = string_list(entry, index, "ingredients")?;
            Ok(ObjectKey::new(name, states, ingredients))
        })
        .collect()
}

/// Reads a goal file: `[{"object": ..., "states": [...], "ingredients": [...]}]`.
/// `states` and `ingredients` may be omitted.
pub fn parse_goal_nodes(text: &str) -> Result<Vec<GoalSpec>, SchemaError> {
    Ok(parse_object_entries(text)?.into_iter().map(GoalSpec::new).collect())
}

/// Reads a kitchen file (same schema as goals). Duplicates collapse with a warning.
pub fn parse_kitchen(text: &str) -> Result<Parsed<Kitchen>, SchemaError> {
    let mut kitchen = Kitchen::new();
    let mut warnings = Vec::new();
    for (index, key) in parse_object_entries(text)?.into_iter().enumerate() {
        let shown = key.to_string();
        if !kitchen.insert(key) {
            warnings.push(ParseWarning {
                line: None,
                message: format!("entry {index}: duplicate kitchen item `{shown}` ignored"),
            });
        }
    }
    Ok(Parsed {
        value: kitchen,
        warnings,
    })
}
